//! Analytic target meshes and ray intersection.
//!
//! Cylinder, cone, block, and pyramid are fixed faceted shapes; the rock is
//! an icosphere with seeded radial vertex displacement so every rock
//! silhouette is distinct but reproducible.

use super::{Heightmap, TargetClass, TargetSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Indexed triangle mesh in world coordinates.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub verts: Vec<[f64; 3]>,
    pub tris: Vec<[usize; 3]>,
}

impl TriMesh {
    fn aabb(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.verts {
            for a in 0..3 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        (lo, hi)
    }
}

/// A target mesh transformed into the scene, ready for ray queries.
#[derive(Debug, Clone)]
pub struct PreparedTarget {
    pub spec: TargetSpec,
    pub mesh: TriMesh,
    aabb: ([f64; 3], [f64; 3]),
}

impl PreparedTarget {
    /// Height of the mesh top above the local seafloor.
    pub fn top_height(&self) -> f64 {
        self.aabb.1[2] - self.aabb.0[2]
    }

    /// Nearest ray-mesh intersection: returns (distance, outward normal).
    pub fn intersect(&self, origin: [f64; 3], dir: [f64; 3], max_t: f64) -> Option<(f64, [f64; 3])> {
        if !slab_hit(origin, dir, self.aabb.0, self.aabb.1, max_t) {
            return None;
        }
        let mut best: Option<(f64, [f64; 3])> = None;
        for tri in &self.mesh.tris {
            let (a, b, c) = (
                self.mesh.verts[tri[0]],
                self.mesh.verts[tri[1]],
                self.mesh.verts[tri[2]],
            );
            if let Some(t) = ray_triangle(origin, dir, a, b, c) {
                if t < max_t && best.map_or(true, |(bt, _)| t < bt) {
                    let e1 = sub(b, a);
                    let e2 = sub(c, a);
                    let mut n = normalize(cross(e1, e2));
                    // Orient against the ray so incidence cosines are positive.
                    if dot(n, dir) > 0.0 {
                        n = [-n[0], -n[1], -n[2]];
                    }
                    best = Some((t, n));
                }
            }
        }
        best
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(v, v).sqrt().max(1e-30);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Moller-Trumbore ray/triangle intersection.
fn ray_triangle(o: [f64; 3], d: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Option<f64> {
    let e1 = sub(b, a);
    let e2 = sub(c, a);
    let p = cross(d, e2);
    let det = dot(e1, p);
    if det.abs() < 1e-12 {
        return None;
    }
    let inv = 1.0 / det;
    let tv = sub(o, a);
    let u = dot(tv, p) * inv;
    if !(-1e-9..=1.0 + 1e-9).contains(&u) {
        return None;
    }
    let q = cross(tv, e1);
    let v = dot(d, q) * inv;
    if v < -1e-9 || u + v > 1.0 + 1e-9 {
        return None;
    }
    let t = dot(e2, q) * inv;
    if t > 1e-9 {
        Some(t)
    } else {
        None
    }
}

fn slab_hit(o: [f64; 3], d: [f64; 3], lo: [f64; 3], hi: [f64; 3], max_t: f64) -> bool {
    let mut tmin = 0.0f64;
    let mut tmax = max_t;
    for a in 0..3 {
        if d[a].abs() < 1e-12 {
            if o[a] < lo[a] || o[a] > hi[a] {
                return false;
            }
        } else {
            let inv = 1.0 / d[a];
            let mut t0 = (lo[a] - o[a]) * inv;
            let mut t1 = (hi[a] - o[a]) * inv;
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            tmin = tmin.max(t0);
            tmax = tmax.min(t1);
            if tmin > tmax {
                return false;
            }
        }
    }
    true
}

const SEGMENTS: usize = 16;

/// Canonical unit-size mesh before yaw/scale/translation; the shape rests
/// on z = 0.
fn canonical_mesh(class: TargetClass, rock_seed: u64) -> TriMesh {
    match class {
        TargetClass::Cylinder => cylinder(),
        TargetClass::Cone => cone(),
        TargetClass::Block => block(),
        TargetClass::Pyramid => pyramid(),
        TargetClass::Rock => rock(rock_seed),
    }
}

fn cylinder() -> TriMesh {
    // Pipe-like target lying along local x: radius 0.25, length 1.0.
    let r = 0.25;
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    for &x in &[-0.5f64, 0.5] {
        for k in 0..SEGMENTS {
            let phi = std::f64::consts::TAU * k as f64 / SEGMENTS as f64;
            verts.push([x, r * phi.cos(), r + r * phi.sin()]);
        }
    }
    let ring0 = 0;
    let ring1 = SEGMENTS;
    for k in 0..SEGMENTS {
        let k2 = (k + 1) % SEGMENTS;
        tris.push([ring0 + k, ring1 + k, ring1 + k2]);
        tris.push([ring0 + k, ring1 + k2, ring0 + k2]);
    }
    // End caps.
    let c0 = verts.len();
    verts.push([-0.5, 0.0, r]);
    let c1 = verts.len();
    verts.push([0.5, 0.0, r]);
    for k in 0..SEGMENTS {
        let k2 = (k + 1) % SEGMENTS;
        tris.push([c0, ring0 + k2, ring0 + k]);
        tris.push([c1, ring1 + k, ring1 + k2]);
    }
    TriMesh { verts, tris }
}

fn cone() -> TriMesh {
    let r = 0.5;
    let h = 0.7;
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    for k in 0..SEGMENTS {
        let phi = std::f64::consts::TAU * k as f64 / SEGMENTS as f64;
        verts.push([r * phi.cos(), r * phi.sin(), 0.0]);
    }
    let apex = verts.len();
    verts.push([0.0, 0.0, h]);
    let base = verts.len();
    verts.push([0.0, 0.0, 0.0]);
    for k in 0..SEGMENTS {
        let k2 = (k + 1) % SEGMENTS;
        tris.push([apex, k, k2]);
        tris.push([base, k2, k]);
    }
    TriMesh { verts, tris }
}

fn block() -> TriMesh {
    let (hx, hy, h) = (0.5, 0.3, 0.4);
    let verts = vec![
        [-hx, -hy, 0.0],
        [hx, -hy, 0.0],
        [hx, hy, 0.0],
        [-hx, hy, 0.0],
        [-hx, -hy, h],
        [hx, -hy, h],
        [hx, hy, h],
        [-hx, hy, h],
    ];
    let tris = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom
        [4, 5, 6],
        [4, 6, 7], // top
        [0, 1, 5],
        [0, 5, 4], // -y
        [2, 3, 7],
        [2, 7, 6], // +y
        [1, 2, 6],
        [1, 6, 5], // +x
        [3, 0, 4],
        [3, 4, 7], // -x
    ];
    TriMesh { verts, tris }
}

fn pyramid() -> TriMesh {
    let hb = 0.45;
    let h = 0.6;
    let verts = vec![
        [-hb, -hb, 0.0],
        [hb, -hb, 0.0],
        [hb, hb, 0.0],
        [-hb, hb, 0.0],
        [0.0, 0.0, h],
    ];
    let tris = vec![
        [0, 1, 4],
        [1, 2, 4],
        [2, 3, 4],
        [3, 0, 4],
        [0, 2, 1],
        [0, 3, 2],
    ];
    TriMesh { verts, tris }
}

fn rock(seed: u64) -> TriMesh {
    let mut mesh = icosphere();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Anisotropic squash plus per-vertex radial jitter.
    let sx = rng.gen_range(0.75..1.25);
    let sy = rng.gen_range(0.75..1.25);
    let sz = rng.gen_range(0.5..0.9);
    let jitter: Vec<f64> = (0..mesh.verts.len())
        .map(|_| 1.0 + rng.gen_range(-0.35..0.35))
        .collect();
    let mut min_z = f64::INFINITY;
    for (v, j) in mesh.verts.iter_mut().zip(&jitter) {
        v[0] *= 0.5 * sx * j;
        v[1] *= 0.5 * sy * j;
        v[2] *= 0.5 * sz * j;
        min_z = min_z.min(v[2]);
    }
    for v in mesh.verts.iter_mut() {
        v[2] -= min_z;
    }
    mesh
}

fn icosphere() -> TriMesh {
    // Icosahedron subdivided once: 42 verts, 80 faces.
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(|v| normalize(v).map(|c| c * 2.0))
    .map(|v| [v[0] / 2.0, v[1] / 2.0, v[2] / 2.0])
    .collect();
    let faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let mut cache: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&idx) = cache.get(&key) {
            return idx;
        }
        let m = normalize([
            (verts[a][0] + verts[b][0]) / 2.0,
            (verts[a][1] + verts[b][1]) / 2.0,
            (verts[a][2] + verts[b][2]) / 2.0,
        ]);
        verts.push(m);
        cache.insert(key, verts.len() - 1);
        verts.len() - 1
    };
    let mut tris = Vec::with_capacity(80);
    for [a, b, c] in faces {
        let ab = midpoint(a, b, &mut verts);
        let bc = midpoint(b, c, &mut verts);
        let ca = midpoint(c, a, &mut verts);
        tris.push([a, ab, ca]);
        tris.push([b, bc, ab]);
        tris.push([c, ca, bc]);
        tris.push([ab, bc, ca]);
    }
    TriMesh { verts, tris }
}

/// Transforms a target's canonical mesh into the scene: yaw about z, scale,
/// and translation so the base rests on the terrain under its position.
pub fn prepare_target(spec: &TargetSpec, terrain: &Heightmap) -> PreparedTarget {
    let canonical = canonical_mesh(spec.class, spec.rock_seed);
    let ground = terrain.sample(spec.position[0], spec.position[1]);
    let (s, c) = spec.yaw.sin_cos();
    let verts: Vec<[f64; 3]> = canonical
        .verts
        .iter()
        .map(|v| {
            let x = v[0] * spec.scale;
            let y = v[1] * spec.scale;
            let z = v[2] * spec.scale;
            [
                spec.position[0] + c * x - s * y,
                spec.position[1] + s * x + c * y,
                // Slightly embedded so the base never floats above terrain.
                ground + z - 0.02 * spec.scale,
            ]
        })
        .collect();
    let mesh = TriMesh {
        verts,
        tris: canonical.tris,
    };
    let aabb = mesh.aabb();
    PreparedTarget {
        spec: spec.clone(),
        mesh,
        aabb,
    }
}
