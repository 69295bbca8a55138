//! Per-ping ray casting and slant-range accumulation.

use super::{Heightmap, PreparedTarget, RenderConfig, Result, SimError, SonarImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Which side of the track the sensor images. Port is 90 degrees to the
/// left of travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LookSide {
    Port,
    Starboard,
}

/// A straight-line sensor pass. Straightness is structural: the pass is
/// defined by its two endpoints; pings are spaced uniformly between them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensorPass {
    pub start: [f64; 2],
    pub end: [f64; 2],
    /// Height from bottom, meters.
    pub hfb: f64,
    /// Maximum slant range imaged, meters.
    pub max_slant: f64,
    /// Along-track meters between pings.
    pub along_res: f64,
    /// Across-track meters per range bin.
    pub across_res: f64,
    pub ping_count: usize,
    pub look: LookSide,
}

impl SensorPass {
    /// Builds a pass with ping spacing equal to `along_res` over the
    /// segment length.
    pub fn new(
        start: [f64; 2],
        end: [f64; 2],
        hfb: f64,
        max_slant: f64,
        along_res: f64,
        across_res: f64,
        look: LookSide,
    ) -> Result<Self> {
        let len = ((end[0] - start[0]).powi(2) + (end[1] - start[1]).powi(2)).sqrt();
        if !(hfb > 0.0 && max_slant > hfb && along_res > 0.0 && across_res > 0.0 && len > 0.0) {
            return Err(SimError::InvalidParameter(format!(
                "pass of length {len} m, hfb {hfb}, max slant {max_slant} must be positive and consistent"
            )));
        }
        let ping_count = (len / along_res).floor().max(1.0) as usize + 1;
        Ok(Self {
            start,
            end,
            hfb,
            max_slant,
            along_res,
            across_res,
            ping_count,
            look,
        })
    }

    pub fn length(&self) -> f64 {
        ((self.end[0] - self.start[0]).powi(2) + (self.end[1] - self.start[1]).powi(2)).sqrt()
    }

    pub fn heading(&self) -> f64 {
        (self.end[1] - self.start[1]).atan2(self.end[0] - self.start[0])
    }

    /// Unit vector pointing across-track towards the imaged side.
    pub fn across_dir(&self) -> [f64; 2] {
        let h = self.heading();
        match self.look {
            LookSide::Port => [-h.sin(), h.cos()],
            LookSide::Starboard => [h.sin(), -h.cos()],
        }
    }

    fn ping_position(&self, ping: usize) -> [f64; 2] {
        let t = if self.ping_count <= 1 {
            0.0
        } else {
            ping as f64 / (self.ping_count - 1) as f64
        };
        [
            self.start[0] + t * (self.end[0] - self.start[0]),
            self.start[1] + t * (self.end[1] - self.start[1]),
        ]
    }

    /// Along-track and signed across-track coordinates of a ground point;
    /// positive across values lie on the imaged side.
    pub fn project(&self, p: [f64; 2]) -> (f64, f64) {
        let h = self.heading();
        let (s, c) = h.sin_cos();
        let dx = p[0] - self.start[0];
        let dy = p[1] - self.start[1];
        let along = dx * c + dy * s;
        let left = -dx * s + dy * c;
        let across = match self.look {
            LookSide::Port => left,
            LookSide::Starboard => -left,
        };
        (along, across)
    }
}

/// Slant-range bin index for a given acoustic range: all scene points at
/// equal slant range from a ping fall into the same column.
pub fn slant_bin(slant_range: f64, across_res: f64) -> usize {
    (slant_range / across_res).floor().max(0.0) as usize
}

/// Renders a pass over terrain and targets.
///
/// Per ping a fan of rays is cast in the across-track plane; the first hit
/// of each ray contributes Lambertian-weighted, range-attenuated intensity
/// to its slant-range bin. Bins never reached (occluded or beyond every
/// hit) stay zero. With `speckle_seed` set and a positive configured
/// strength, multiplicative speckle is applied afterwards.
pub fn render_pass(
    terrain: &Heightmap,
    targets: &[PreparedTarget],
    pass: &SensorPass,
    cfg: &RenderConfig,
    speckle_seed: Option<u64>,
) -> Result<SonarImage> {
    if !terrain.contains(pass.start[0], pass.start[1])
        || !terrain.contains(pass.end[0], pass.end[1])
    {
        return Err(SimError::PassOutsideTerrain);
    }
    let rows = pass.ping_count;
    let cols = (pass.max_slant / pass.across_res).ceil() as usize;
    let mut data = vec![0.0f32; rows * cols];
    let mut sensor_z = vec![0.0f64; rows];

    let across = pass.across_dir();
    let n_rays = ((cols as f64) * cfg.ray_oversample).ceil() as usize;

    for ping in 0..rows {
        let p = pass.ping_position(ping);
        let z = terrain.sample(p[0], p[1]) + pass.hfb;
        sensor_z[ping] = z;
        let origin = [p[0], p[1], z];
        let row = &mut data[ping * cols..(ping + 1) * cols];
        let mut counts = vec![0u16; cols];

        // Rays aimed at uniformly spaced nominal ground distances, so flat
        // terrain receives about `ray_oversample` hits per bin.
        let ground_max = (pass.max_slant.powi(2) - pass.hfb.powi(2)).max(0.01).sqrt();
        for ri in 0..n_rays {
            let d = (ri as f64 + 0.5) / n_rays as f64 * ground_max;
            let aim = [p[0] + d * across[0], p[1] + d * across[1], z - pass.hfb];
            let dir = normalize3([aim[0] - origin[0], aim[1] - origin[1], aim[2] - origin[2]]);

            // Nearest target hit bounds the terrain march.
            let mut t_mesh = f64::INFINITY;
            let mut n_mesh = [0.0; 3];
            for target in targets {
                if let Some((t, n)) = target.intersect(origin, dir, pass.max_slant + 1.0) {
                    if t < t_mesh {
                        t_mesh = t;
                        n_mesh = n;
                    }
                }
            }
            let t_terr = march_terrain(terrain, origin, dir, pass.max_slant + 1.0, cfg.march_step);

            let (t_hit, normal, refl) = if t_mesh < t_terr.unwrap_or(f64::INFINITY) {
                (t_mesh, n_mesh, cfg.target_reflectance)
            } else if let Some(t) = t_terr {
                let hx = origin[0] + t * dir[0];
                let hy = origin[1] + t * dir[1];
                (t, terrain.normal(hx, hy), cfg.seabed_reflectance)
            } else {
                continue;
            };
            if !t_hit.is_finite() || t_hit > pass.max_slant {
                continue;
            }
            let cos_inc = (-dot3(dir, normal)).max(0.0);
            let intensity = f64::from(refl) * cos_inc * (-cfg.attenuation * t_hit).exp();
            let bin = slant_bin(t_hit, pass.across_res);
            if bin < cols {
                row[bin] += intensity as f32;
                counts[bin] += 1;
            }
        }
        for (v, &c) in row.iter_mut().zip(&counts) {
            if c > 0 {
                *v /= f32::from(c);
            }
        }
    }

    let mut image = SonarImage {
        rows,
        cols,
        data,
        resolution: pass.across_res,
        theta: 0.0,
        pass: pass.clone(),
        sensor_z,
    };
    if let Some(seed) = speckle_seed {
        if cfg.speckle_strength > 0.0 {
            apply_speckle(&mut image, cfg.speckle_strength, seed);
        }
    }
    Ok(image)
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-30);
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// First terrain crossing along the ray by fixed-step march with bisection
/// refinement; None when the ray clears the terrain to `max_t`.
fn march_terrain(
    terrain: &Heightmap,
    origin: [f64; 3],
    dir: [f64; 3],
    max_t: f64,
    step: f64,
) -> Option<f64> {
    let height_above = |t: f64| -> f64 {
        let x = origin[0] + t * dir[0];
        let y = origin[1] + t * dir[1];
        let z = origin[2] + t * dir[2];
        z - terrain.sample(x, y)
    };
    let mut t_prev = 0.0;
    let mut t = step;
    while t <= max_t {
        if height_above(t) <= 0.0 {
            // Bracketed: refine the crossing.
            let (mut lo, mut hi) = (t_prev, t);
            for _ in 0..12 {
                let mid = (lo + hi) / 2.0;
                if height_above(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        t_prev = t;
        t += step;
    }
    None
}

/// Multiplicative speckle: unit-mean exponential noise, box-blurred one
/// pixel, blended by `strength`.
fn apply_speckle(image: &mut SonarImage, strength: f32, seed: u64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = image.data.len();
    let field: Vec<f32> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0..1.0);
            (-(1.0 - u).ln()) as f32
        })
        .collect();
    let (rows, cols) = (image.rows, image.cols);
    let blurred: Vec<f32> = (0..n)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            let mut sum = 0.0f32;
            let mut cnt = 0.0f32;
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    let rr = r as i64 + dr;
                    let cc = c as i64 + dc;
                    if rr >= 0 && rr < rows as i64 && cc >= 0 && cc < cols as i64 {
                        sum += field[rr as usize * cols + cc as usize];
                        cnt += 1.0;
                    }
                }
            }
            sum / cnt
        })
        .collect();
    for (v, u) in image.data.iter_mut().zip(&blurred) {
        *v *= (1.0 - strength) + strength * u;
    }
}

/// Extracts a square crop centered on a target and resamples it to
/// `out_px` pixels per side.
///
/// `target` is the target's 3D ground position; the crop is centered at its
/// along-track coordinate and expected slant range. Samples falling outside
/// the source image are zero.
pub fn crop_target_view(
    image: &SonarImage,
    target: [f64; 3],
    crop_meters: f64,
    out_px: usize,
) -> Result<SonarImage> {
    let pass = &image.pass;
    let (along, across) = pass.project([target[0], target[1]]);
    if across <= 0.0 {
        return Err(SimError::OutOfSwath);
    }
    let row_f = along / pass.along_res;
    if row_f < 0.0 || row_f > (image.rows - 1) as f64 {
        return Err(SimError::OutOfSwath);
    }
    let z_sensor = image.sensor_z[(row_f.round() as usize).min(image.rows - 1)];
    let slant = ((z_sensor - target[2]).powi(2) + across * across).sqrt();
    let col_f = slant / pass.across_res;
    if col_f < 0.0 || col_f > (image.cols - 1) as f64 {
        return Err(SimError::OutOfSwath);
    }

    let res_out = crop_meters / out_px as f64;
    let mut data = vec![0.0f32; out_px * out_px];
    for i in 0..out_px {
        for j in 0..out_px {
            let dm_along = (i as f64 - (out_px as f64 - 1.0) / 2.0) * res_out;
            let dm_slant = (j as f64 - (out_px as f64 - 1.0) / 2.0) * res_out;
            let r = row_f + dm_along / pass.along_res;
            let c = col_f + dm_slant / pass.across_res;
            data[i * out_px + j] = bilinear(image, r, c);
        }
    }
    Ok(SonarImage {
        rows: out_px,
        cols: out_px,
        data,
        resolution: res_out,
        theta: image.theta,
        pass: pass.clone(),
        sensor_z: image.sensor_z.clone(),
    })
}

fn bilinear(image: &SonarImage, r: f64, c: f64) -> f32 {
    if r < 0.0 || c < 0.0 || r > (image.rows - 1) as f64 || c > (image.cols - 1) as f64 {
        return 0.0;
    }
    let r0 = r.floor() as usize;
    let c0 = c.floor() as usize;
    let r1 = (r0 + 1).min(image.rows - 1);
    let c1 = (c0 + 1).min(image.cols - 1);
    let fr = (r - r0 as f64) as f32;
    let fc = (c - c0 as f64) as f32;
    image.at(r0, c0) * (1.0 - fr) * (1.0 - fc)
        + image.at(r0, c1) * (1.0 - fr) * fc
        + image.at(r1, c0) * fr * (1.0 - fc)
        + image.at(r1, c1) * fr * fc
}
