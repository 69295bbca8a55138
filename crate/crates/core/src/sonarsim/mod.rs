//! Ray-traced side-scan sonar image synthesis.
//!
//! Models the three effects that dominate side-scan appearance: Lambertian
//! backscatter (returns fall off with the cosine of the incidence angle),
//! acoustic shadowing (surfaces occluded by nearer geometry return
//! nothing), and slant-range binning (all returns at equal acoustic range
//! accumulate into the same pixel column). Scenes are procedural Perlin
//! terrain plus analytic target meshes; multiplicative speckle is applied
//! after accumulation.

mod capture;
mod dataset;
mod mesh;
mod render;
mod terrain;

pub use capture::{capture_oid_view, capture_survey_view};
pub use dataset::{
    generate_dataset, load_dataset, load_manifest, load_png, planned_image_count, save_png,
    sample_target_spec, Dataset, DatasetConfig, DatasetTarget, LoadedView, Manifest,
    ManifestTarget, ManifestView, Split, INTENSITY_MAX,
};
pub use mesh::{prepare_target, PreparedTarget, TriMesh};
pub use render::{crop_target_view, render_pass, slant_bin, LookSide, SensorPass};
pub use terrain::{generate_terrain, Heightmap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sensor pass lies outside the terrain extent")]
    PassOutsideTerrain,
    #[error("target outside the imaged swath")]
    OutOfSwath,
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad dataset: {0}")]
    BadDataset(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

/// The five target classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetClass {
    Cylinder,
    Cone,
    Block,
    Pyramid,
    Rock,
}

impl TargetClass {
    pub const ALL: [TargetClass; 5] = [
        TargetClass::Cylinder,
        TargetClass::Cone,
        TargetClass::Block,
        TargetClass::Pyramid,
        TargetClass::Rock,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn from_index(idx: usize) -> TargetClass {
        Self::ALL[idx]
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetClass::Cylinder => "cylinder",
            TargetClass::Cone => "cone",
            TargetClass::Block => "block",
            TargetClass::Pyramid => "pyramid",
            TargetClass::Rock => "rock",
        }
    }
}

/// A target instance placed in a scene.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetSpec {
    pub class: TargetClass,
    /// Ground position in meters.
    pub position: [f64; 2],
    /// Yaw in radians.
    pub yaw: f64,
    /// Characteristic size in meters.
    pub scale: f64,
    /// Mesh randomization seed; only the rock class uses it.
    pub rock_seed: u64,
}

/// A single-channel acoustic intensity raster.
///
/// Rows are pings (along-track) and columns are slant-range bins
/// (across-track). All intensities are non-negative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SonarImage {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
    /// Meters per pixel.
    pub resolution: f64,
    /// View angle relative to first contact, radians.
    pub theta: f64,
    /// Pass geometry this image was rendered from.
    pub pass: SensorPass,
    /// Sensor altitude (world z) per ping.
    pub sensor_z: Vec<f64>,
}

impl SonarImage {
    pub fn at(&self, row: usize, col: usize) -> f32 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f32] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }
}

/// Physical rendering parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderConfig {
    /// Meters per pixel, both axes.
    pub resolution: f64,
    /// Square crop side in meters.
    pub crop_meters: f64,
    /// Seabed acoustic reflectance.
    pub seabed_reflectance: f32,
    /// Target acoustic reflectance.
    pub target_reflectance: f32,
    /// Exponential range attenuation coefficient, 1/m.
    pub attenuation: f64,
    /// Speckle blend strength in [0, 1]; 0 disables.
    pub speckle_strength: f32,
    /// Rays per range bin.
    pub ray_oversample: f64,
    /// Terrain ray-march step, meters.
    pub march_step: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            resolution: 0.047,
            crop_meters: 3.0,
            seabed_reflectance: 0.35,
            target_reflectance: 1.0,
            attenuation: 0.02,
            speckle_strength: 0.5,
            ray_oversample: 2.0,
            march_step: 0.35,
        }
    }
}
