//! View capture: renders the crop a vehicle obtains from a given pass.
//!
//! Only the along-track window needed for the crop is rendered; the full
//! pass length matters for navigation time, not for imagery. Captures are
//! canonical: a leg traversed in reverse yields the same image, so cached
//! captures are independent of the approach direction.

use super::render::{render_pass, LookSide, SensorPass};
use super::{crop_target_view, Heightmap, PreparedTarget, RenderConfig, Result, SonarImage};
use crate::nav::OidLeg;

/// Extra along-track and slant margin rendered around the crop, meters.
const WINDOW_MARGIN: f64 = 2.0;

/// Renders the crop captured while flying an OID leg past a target.
pub fn capture_oid_view(
    terrain: &Heightmap,
    targets: &[PreparedTarget],
    leg: &OidLeg,
    target_pos: [f64; 2],
    hfb: f64,
    cfg: &RenderConfig,
    out_px: usize,
    speckle_seed: u64,
) -> Result<SonarImage> {
    let mid = leg.midpoint();
    let heading = leg.entry.heading;
    let (hs, hc) = (heading.sin(), heading.cos());
    let half_win = cfg.crop_meters / 2.0 + WINDOW_MARGIN;
    let start = [mid[0] - half_win * hc, mid[1] - half_win * hs];
    let end = [mid[0] + half_win * hc, mid[1] + half_win * hs];
    // The OID construction puts the target on the port side of the forward
    // traversal; derive the side from geometry anyway for robustness.
    let left = {
        let dx = target_pos[0] - start[0];
        let dy = target_pos[1] - start[1];
        -dx * hs + dy * hc
    };
    let look = if left >= 0.0 {
        LookSide::Port
    } else {
        LookSide::Starboard
    };
    let max_slant = ((hfb + 2.0).powi(2)
        + (leg.standoff + cfg.crop_meters / 2.0 + WINDOW_MARGIN).powi(2))
    .sqrt();
    let pass = SensorPass::new(
        start,
        end,
        hfb,
        max_slant,
        cfg.resolution,
        cfg.resolution,
        look,
    )?;
    let speckle = if cfg.speckle_strength > 0.0 {
        Some(speckle_seed)
    } else {
        None
    };
    let img = render_pass(terrain, targets, &pass, cfg, speckle)?;
    let tz = terrain.sample(target_pos[0], target_pos[1]);
    let mut crop = crop_target_view(&img, [target_pos[0], target_pos[1], tz], cfg.crop_meters, out_px)?;
    crop.theta = leg.theta;
    Ok(crop)
}

/// Renders the single survey-pass view of a target: the vehicle passes on a
/// straight track with the target `offset` meters abeam (positive left of
/// travel), at survey altitude and resolution.
#[allow(clippy::too_many_arguments)]
pub fn capture_survey_view(
    terrain: &Heightmap,
    targets: &[PreparedTarget],
    target_pos: [f64; 2],
    track_heading: f64,
    offset_left: f64,
    hfb: f64,
    survey_res: f64,
    cfg: &RenderConfig,
    out_px: usize,
    speckle_seed: u64,
) -> Result<SonarImage> {
    let (hs, hc) = (track_heading.sin(), track_heading.cos());
    let look = if offset_left >= 0.0 {
        LookSide::Port
    } else {
        LookSide::Starboard
    };
    let d = offset_left.abs().max(0.5);
    // Track point abeam the target.
    let left_dir = [-hs, hc];
    let abeam = [
        target_pos[0] - offset_left.signum() * d * left_dir[0],
        target_pos[1] - offset_left.signum() * d * left_dir[1],
    ];
    let half_win = cfg.crop_meters / 2.0 + WINDOW_MARGIN;
    let start = [abeam[0] - half_win * hc, abeam[1] - half_win * hs];
    let end = [abeam[0] + half_win * hc, abeam[1] + half_win * hs];
    let max_slant = ((hfb + 2.0).powi(2) + (d + cfg.crop_meters / 2.0 + WINDOW_MARGIN).powi(2)).sqrt();
    let survey_cfg = RenderConfig {
        resolution: survey_res,
        ..cfg.clone()
    };
    let pass = SensorPass::new(start, end, hfb, max_slant, survey_res, survey_res, look)?;
    let speckle = if cfg.speckle_strength > 0.0 {
        Some(speckle_seed)
    } else {
        None
    };
    let img = render_pass(terrain, targets, &pass, &survey_cfg, speckle)?;
    let tz = terrain.sample(target_pos[0], target_pos[1]);
    let mut crop = crop_target_view(&img, [target_pos[0], target_pos[1], tz], cfg.crop_meters, out_px)?;
    crop.theta = 0.0;
    Ok(crop)
}
