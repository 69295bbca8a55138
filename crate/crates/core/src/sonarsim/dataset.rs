//! Dataset generation: randomized targets imaged with the OID star.
//!
//! Layout on disk: one directory per split (`train/`, `val/`, `test/`) of
//! 16-bit grayscale PNGs plus a `manifest.json` at the root recording all
//! ground truth. Generation is deterministic per seed and parallel over
//! targets.

use super::capture::capture_oid_view;
use super::{
    generate_terrain, prepare_target, Heightmap, RenderConfig, Result, SimError, SonarImage,
    TargetClass, TargetSpec,
};
use crate::mix_seed;
use crate::nav::plan_oid_leg;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::{Path, PathBuf};

/// Intensity mapped to the full 16-bit range when writing PNGs.
pub const INTENSITY_MAX: f32 = 2.0;

/// Local terrain patch side for per-target scenes, meters.
const PATCH_SIZE: f64 = 80.0;

/// World bearing of the theta = 0 leg during dataset generation.
const REF_BEARING: f64 = -FRAC_PI_2;

/// Seed stream id for the split shuffle.
const SPLIT_STREAM: u64 = 0x5111;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub fn dir(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub n_targets: usize,
    pub k_views: usize,
    /// Train/val/test fractions; must sum to 1.
    pub splits: [f64; 3],
    pub seed: u64,
    /// Output crop size in pixels.
    pub image_px: usize,
    pub render: RenderConfig,
    /// OID pass length, meters.
    pub pass_length: f64,
    /// OID standoff radius, meters.
    pub standoff: f64,
    /// Reacquisition height from bottom, meters.
    pub hfb: f64,
    /// Terrain cell size, meters.
    pub terrain_cell: f64,
    /// Base terrain amplitude, meters (jittered per target).
    pub terrain_amplitude: f64,
    pub terrain_octaves: u32,
    /// Target characteristic size range, meters.
    pub scale_range: [f64; 2],
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            n_targets: 100,
            k_views: 6,
            splits: [0.7, 0.1, 0.2],
            seed: 0,
            image_px: 64,
            render: RenderConfig::default(),
            pass_length: 75.0,
            standoff: 12.0,
            hfb: 3.0,
            terrain_cell: 0.5,
            terrain_amplitude: 0.35,
            terrain_octaves: 3,
            scale_range: [0.8, 1.6],
        }
    }
}

/// Total image count a configuration will produce.
pub fn planned_image_count(cfg: &DatasetConfig) -> usize {
    cfg.n_targets * cfg.k_views
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestView {
    pub angle_deg: f64,
    pub file: String,
    pub hfb: f64,
    pub pass_length: f64,
    pub standoff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestTarget {
    pub id: usize,
    pub class: TargetClass,
    pub class_idx: usize,
    pub scale: f64,
    pub yaw: f64,
    pub terrain_seed: u64,
    pub rock_seed: u64,
    pub split: Split,
    pub views: Vec<ManifestView>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    pub k_views: usize,
    pub image_px: usize,
    pub resolution: f64,
    pub intensity_max: f32,
    pub targets: Vec<ManifestTarget>,
}

/// Deterministically samples the randomized attributes of target `idx`.
pub fn sample_target_spec(cfg: &DatasetConfig, idx: usize) -> (TargetSpec, u64, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(cfg.seed, idx as u64));
    let class = TargetClass::from_index(rng.gen_range(0..TargetClass::ALL.len()));
    let scale = rng.gen_range(cfg.scale_range[0]..cfg.scale_range[1]);
    let yaw = rng.gen_range(-PI..PI);
    let terrain_seed: u64 = rng.gen();
    let rock_seed: u64 = rng.gen();
    let amplitude = cfg.terrain_amplitude * rng.gen_range(0.4..1.4);
    let spec = TargetSpec {
        class,
        position: [PATCH_SIZE / 2.0, PATCH_SIZE / 2.0],
        yaw,
        scale,
        rock_seed,
    };
    (spec, terrain_seed, amplitude)
}

fn split_assignment(cfg: &DatasetConfig) -> Vec<Split> {
    let n = cfg.n_targets;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(cfg.seed, SPLIT_STREAM));
    use rand::seq::SliceRandom;
    order.shuffle(&mut rng);
    let n_train = (n as f64 * cfg.splits[0]).round() as usize;
    let n_val = (n as f64 * cfg.splits[1]).round() as usize;
    let mut assign = vec![Split::Test; n];
    for (rank, &idx) in order.iter().enumerate() {
        assign[idx] = if rank < n_train {
            Split::Train
        } else if rank < n_train + n_val {
            Split::Val
        } else {
            Split::Test
        };
    }
    assign
}

/// Renders every view of one target on its local terrain patch.
fn render_target_views(cfg: &DatasetConfig, idx: usize) -> Result<(ManifestTarget, Vec<SonarImage>)> {
    let (spec, terrain_seed, amplitude) = sample_target_spec(cfg, idx);
    let terrain = generate_terrain(
        PATCH_SIZE,
        PATCH_SIZE,
        cfg.terrain_cell,
        terrain_seed,
        amplitude,
        cfg.terrain_octaves,
    )?;
    let prepared = prepare_target(&spec, &terrain);
    let mut views = Vec::with_capacity(cfg.k_views);
    let mut records = Vec::with_capacity(cfg.k_views);
    for v in 0..cfg.k_views {
        let theta = TAU * v as f64 / cfg.k_views as f64;
        let leg = plan_oid_leg(
            spec.position,
            REF_BEARING,
            theta,
            cfg.pass_length,
            cfg.standoff,
            cfg.k_views,
        )
        .map_err(|e| SimError::InvalidParameter(e.to_string()))?;
        let img = capture_oid_view(
            &terrain,
            std::slice::from_ref(&prepared),
            &leg,
            spec.position,
            cfg.hfb,
            &cfg.render,
            cfg.image_px,
            mix_seed(terrain_seed, 1000 + v as u64),
        )?;
        records.push(ManifestView {
            angle_deg: theta.to_degrees(),
            file: format!("t{idx:05}_v{v}.png"),
            hfb: cfg.hfb,
            pass_length: cfg.pass_length,
            standoff: cfg.standoff,
        });
        views.push(img);
    }
    Ok((
        ManifestTarget {
            id: idx,
            class: spec.class,
            class_idx: spec.class.index(),
            scale: spec.scale,
            yaw: spec.yaw,
            terrain_seed,
            rock_seed: spec.rock_seed,
            split: Split::Train, // assigned by the caller
            views: records,
        },
        views,
    ))
}

fn io_err(path: &Path, source: std::io::Error) -> SimError {
    SimError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes a sonar image as 16-bit grayscale PNG.
pub fn save_png(path: &Path, img: &SonarImage) -> Result<()> {
    let mut buf = image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::new(
        img.cols as u32,
        img.rows as u32,
    );
    for (r, row) in img.data.chunks(img.cols).enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let q = (v.clamp(0.0, INTENSITY_MAX) / INTENSITY_MAX * 65535.0).round() as u16;
            buf.put_pixel(c as u32, r as u32, image::Luma([q]));
        }
    }
    buf.save(path)
        .map_err(|e| SimError::BadDataset(format!("png write {}: {e}", path.display())))
}

/// Loads a 16-bit grayscale PNG back into intensity values.
pub fn load_png(path: &Path) -> Result<(usize, usize, Vec<f32>)> {
    let img = image::open(path)
        .map_err(|e| SimError::BadDataset(format!("png read {}: {e}", path.display())))?
        .into_luma16();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img
        .pixels()
        .map(|p| f32::from(p.0[0]) / 65535.0 * INTENSITY_MAX)
        .collect();
    Ok((h, w, data))
}

/// Generates the dataset on disk and returns the manifest.
pub fn generate_dataset(cfg: &DatasetConfig, out_dir: &Path) -> Result<Manifest> {
    let total: f64 = cfg.splits.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SimError::InvalidParameter(format!(
            "split ratios {:?} must sum to 1",
            cfg.splits
        )));
    }
    if cfg.n_targets == 0 || cfg.k_views == 0 || cfg.image_px == 0 {
        return Err(SimError::InvalidParameter(
            "n_targets, k_views, image_px must be positive".into(),
        ));
    }
    for split in [Split::Train, Split::Val, Split::Test] {
        std::fs::create_dir_all(out_dir.join(split.dir())).map_err(|e| io_err(out_dir, e))?;
    }
    let assign = split_assignment(cfg);

    let mut results: Vec<(ManifestTarget, Vec<SonarImage>)> = (0..cfg.n_targets)
        .into_par_iter()
        .map(|idx| render_target_views(cfg, idx))
        .collect::<Result<Vec<_>>>()?;

    for (idx, (record, views)) in results.iter_mut().enumerate() {
        record.split = assign[idx];
        let dir = out_dir.join(record.split.dir());
        for (v, img) in views.iter().enumerate() {
            save_png(&dir.join(&record.views[v].file), img)?;
        }
    }

    let manifest = Manifest {
        version: 1,
        seed: cfg.seed,
        k_views: cfg.k_views,
        image_px: cfg.image_px,
        resolution: cfg.render.resolution,
        intensity_max: INTENSITY_MAX,
        targets: results.into_iter().map(|(r, _)| r).collect(),
    };
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| SimError::BadDataset(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}

pub fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    serde_json::from_str(&text).map_err(|e| SimError::BadDataset(e.to_string()))
}

/// One view loaded into memory.
#[derive(Debug, Clone)]
pub struct LoadedView {
    /// View angle relative to the target's first view, radians.
    pub theta: f64,
    pub pixels: Vec<f32>,
}

/// One target with all of its views.
#[derive(Debug, Clone)]
pub struct DatasetTarget {
    pub id: usize,
    pub class_idx: usize,
    pub views: Vec<LoadedView>,
}

/// An in-memory dataset split view.
#[derive(Debug)]
pub struct Dataset {
    pub manifest: Manifest,
    pub train: Vec<DatasetTarget>,
    pub val: Vec<DatasetTarget>,
    pub test: Vec<DatasetTarget>,
}

impl Dataset {
    pub fn split(&self, split: Split) -> &[DatasetTarget] {
        match split {
            Split::Train => &self.train,
            Split::Val => &self.val,
            Split::Test => &self.test,
        }
    }

    pub fn image_px(&self) -> usize {
        self.manifest.image_px
    }
}

/// Loads every split of a generated dataset into memory.
pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    let manifest = load_manifest(dir)?;
    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut test = Vec::new();
    let px = manifest.image_px;
    for t in &manifest.targets {
        let mut views = Vec::with_capacity(t.views.len());
        for v in &t.views {
            let path = dir.join(t.split.dir()).join(&v.file);
            let (rows, cols, pixels) = load_png(&path)?;
            if rows != px || cols != px {
                return Err(SimError::BadDataset(format!(
                    "{}: image is {rows}x{cols}, manifest says {px}",
                    path.display()
                )));
            }
            views.push(LoadedView {
                theta: v.angle_deg.to_radians(),
                pixels,
            });
        }
        let target = DatasetTarget {
            id: t.id,
            class_idx: t.class_idx,
            views,
        };
        match t.split {
            Split::Train => train.push(target),
            Split::Val => val.push(target),
            Split::Test => test.push(target),
        }
    }
    Ok(Dataset {
        manifest,
        train,
        val,
        test,
    })
}
