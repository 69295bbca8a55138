//! Procedural seafloor terrain from seeded Perlin noise.

use super::{Result, SimError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::TAU;

/// Base feature wavelength of the lowest noise octave, meters.
const BASE_WAVELENGTH: f64 = 16.0;

/// A regular-grid elevation field. World x spans `[0, width]`, y spans
/// `[0, height]`; elevations are bounded by the generation amplitude.
#[derive(Debug, Clone)]
pub struct Heightmap {
    nx: usize,
    ny: usize,
    cell: f64,
    data: Vec<f32>,
    pub seed: u64,
}

impl Heightmap {
    pub fn width(&self) -> f64 {
        (self.nx - 1) as f64 * self.cell
    }

    pub fn height(&self) -> f64 {
        (self.ny - 1) as f64 * self.cell
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn grid(&self) -> &[f32] {
        &self.data
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && y >= 0.0 && x <= self.width() && y <= self.height()
    }

    /// Builds a heightmap directly from grid data (test scenes).
    pub fn from_grid(nx: usize, ny: usize, cell: f64, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), nx * ny);
        Self {
            nx,
            ny,
            cell,
            data,
            seed: 0,
        }
    }

    /// Bilinear elevation sample, clamped at the edges.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let gx = (x / self.cell).clamp(0.0, (self.nx - 1) as f64 - 1e-9);
        let gy = (y / self.cell).clamp(0.0, (self.ny - 1) as f64 - 1e-9);
        let ix = gx.floor() as usize;
        let iy = gy.floor() as usize;
        let fx = gx - ix as f64;
        let fy = gy - iy as f64;
        let v00 = f64::from(self.data[iy * self.nx + ix]);
        let v10 = f64::from(self.data[iy * self.nx + ix + 1]);
        let v01 = f64::from(self.data[(iy + 1) * self.nx + ix]);
        let v11 = f64::from(self.data[(iy + 1) * self.nx + ix + 1]);
        v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy
            + v11 * fx * fy
    }

    /// Outward surface normal from central differences.
    pub fn normal(&self, x: f64, y: f64) -> [f64; 3] {
        let h = self.cell;
        let dzdx = (self.sample(x + h, y) - self.sample(x - h, y)) / (2.0 * h);
        let dzdy = (self.sample(x, y + h) - self.sample(x, y - h)) / (2.0 * h);
        let norm = (dzdx * dzdx + dzdy * dzdy + 1.0).sqrt();
        [-dzdx / norm, -dzdy / norm, 1.0 / norm]
    }

    pub fn max_elevation(&self) -> f64 {
        self.data.iter().cloned().fold(f32::NEG_INFINITY, f32::max) as f64
    }
}

struct Perlin {
    perm: [u8; 512],
}

impl Perlin {
    fn new(seed: u64) -> Self {
        let mut table: Vec<u8> = (0..=255).collect();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        table.shuffle(&mut rng);
        let mut perm = [0u8; 512];
        for i in 0..512 {
            perm[i] = table[i % 256];
        }
        Self { perm }
    }

    fn gradient(&self, ix: i64, iy: i64) -> (f64, f64) {
        let h = self.perm[(self.perm[(ix & 255) as usize] as usize + (iy & 255) as usize) & 511];
        let angle = TAU * f64::from(h) / 256.0;
        (angle.cos(), angle.sin())
    }

    /// Single-octave gradient noise; |value| <= sqrt(2)/2.
    fn noise(&self, x: f64, y: f64) -> f64 {
        let ix = x.floor() as i64;
        let iy = y.floor() as i64;
        let fx = x - ix as f64;
        let fy = y - iy as f64;
        let fade = |t: f64| t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
        let dot = |gx: i64, gy: i64, dx: f64, dy: f64| {
            let (vx, vy) = self.gradient(gx, gy);
            vx * dx + vy * dy
        };
        let u = fade(fx);
        let v = fade(fy);
        let lerp = |t: f64, a: f64, b: f64| a + t * (b - a);
        lerp(
            v,
            lerp(u, dot(ix, iy, fx, fy), dot(ix + 1, iy, fx - 1.0, fy)),
            lerp(
                u,
                dot(ix, iy + 1, fx, fy - 1.0),
                dot(ix + 1, iy + 1, fx - 1.0, fy - 1.0),
            ),
        )
    }
}

/// Generates Perlin-noise terrain over a `width x height` meter extent.
///
/// Deterministic for a fixed seed; elevations are bounded by `amplitude`.
pub fn generate_terrain(
    width: f64,
    height: f64,
    cell: f64,
    seed: u64,
    amplitude: f64,
    octaves: u32,
) -> Result<Heightmap> {
    if !(width > 0.0 && height > 0.0 && cell > 0.0) {
        return Err(SimError::InvalidParameter(format!(
            "terrain extent {width}x{height} m and cell {cell} m must be positive"
        )));
    }
    if amplitude < 0.0 || octaves == 0 {
        return Err(SimError::InvalidParameter(
            "amplitude must be non-negative and octaves >= 1".into(),
        ));
    }
    let nx = (width / cell).ceil() as usize + 1;
    let ny = (height / cell).ceil() as usize + 1;
    let perlin = Perlin::new(seed);
    let mut data = vec![0.0f32; nx * ny];
    if amplitude > 0.0 {
        let total_amp: f64 = (0..octaves).map(|o| 0.5f64.powi(o as i32)).sum();
        for iy in 0..ny {
            for ix in 0..nx {
                let x = ix as f64 * cell;
                let y = iy as f64 * cell;
                let mut value = 0.0;
                let mut freq = 1.0 / BASE_WAVELENGTH;
                let mut amp = 1.0;
                for _ in 0..octaves {
                    value += amp * perlin.noise(x * freq, y * freq);
                    freq *= 2.0;
                    amp *= 0.5;
                }
                data[iy * nx + ix] = (value / total_amp * amplitude) as f32;
            }
        }
    }
    Ok(Heightmap {
        nx,
        ny,
        cell,
        data,
        seed,
    })
}
