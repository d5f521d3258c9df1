//! Stamping the object into a screen image and rendering frame sequences.
//!
//! On disk a sequence is a directory of zero-padded numbered PGM frames plus
//! `manifest.json`, the ground-truth record (geometry, contrast, timing) that
//! downstream scoring reads back.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::imaging::{load_pnm, save_pgm, GrayImage};

use super::plan::{BlinkSchedule, ConcealmentPlan};
use super::profile::Polarity;
use super::ConcealError;

/// Manifest format revision written next to rendered frames.
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// An ordered run of display frames at a fixed rate, uniform dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSequence {
    display_fps: u32,
    frames: Vec<GrayImage>,
}

impl FrameSequence {
    pub fn new(display_fps: u32, frames: Vec<GrayImage>) -> Result<Self, ConcealError> {
        if display_fps == 0 {
            return Err(ConcealError::ZeroFps);
        }
        let Some(first) = frames.first() else {
            return Err(ConcealError::EmptySequence);
        };
        let (ew, eh) = (first.width(), first.height());
        for (index, frame) in frames.iter().enumerate() {
            if frame.width() != ew || frame.height() != eh {
                return Err(ConcealError::MixedFrameSizes {
                    index,
                    w: frame.width(),
                    h: frame.height(),
                    ew,
                    eh,
                });
            }
        }
        Ok(FrameSequence { display_fps, frames })
    }

    pub fn display_fps(&self) -> u32 {
        self.display_fps
    }

    pub fn frames(&self) -> &[GrayImage] {
        &self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    /// (width, height) shared by every frame.
    pub fn dimensions(&self) -> (usize, usize) {
        (self.frames[0].width(), self.frames[0].height())
    }
}

/// Stamp a binary object into the screen. Object pixels of value 0 (ink) are
/// drawn at the plan's object luma, each object cell replicated `scale` times
/// in both axes; 255 pixels and everything outside the object stay untouched.
pub fn embed(
    screen: &GrayImage,
    object: &GrayImage,
    plan: &ConcealmentPlan,
) -> Result<GrayImage, ConcealError> {
    let (ow, oh) = (object.width(), object.height());
    if ow == 0 || oh == 0 {
        return Err(ConcealError::EmptyObject { w: ow, h: oh });
    }
    let scale = plan.scale();
    let (x0, y0) = plan.origin();
    let fits = ow
        .checked_mul(scale)
        .and_then(|w| x0.checked_add(w))
        .is_some_and(|xe| xe <= screen.width())
        && oh
            .checked_mul(scale)
            .and_then(|h| y0.checked_add(h))
            .is_some_and(|ye| ye <= screen.height());
    if !fits {
        return Err(ConcealError::OutOfBounds {
            x: x0,
            y: y0,
            w: ow * scale,
            h: oh * scale,
            sw: screen.width(),
            sh: screen.height(),
        });
    }

    let ink = plan.object_luma();
    let mut out = screen.clone();
    for cy in 0..oh {
        for cx in 0..ow {
            match object.get(cx, cy) {
                255 => {}
                0 => {
                    for dy in 0..scale {
                        for dx in 0..scale {
                            out.set(x0 + cx * scale + dx, y0 + cy * scale + dy, ink);
                        }
                    }
                }
                value => return Err(ConcealError::NonBinaryObject { x: cx, y: cy, value }),
            }
        }
    }
    Ok(out)
}

/// Render `duration_frames` display frames: every frame embedded for a static
/// plan; for a blink plan, embedded on scheduled frames and the clean screen
/// otherwise.
pub fn render_sequence(
    screen: &GrayImage,
    object: &GrayImage,
    plan: &ConcealmentPlan,
    duration_frames: u32,
) -> Result<FrameSequence, ConcealError> {
    if duration_frames == 0 {
        return Err(ConcealError::EmptySequence);
    }
    let embedded = embed(screen, object, plan)?;
    let frames = (0..duration_frames)
        .map(|f| match plan.blink() {
            Some(schedule) if !schedule.is_on(f) => screen.clone(),
            _ => embedded.clone(),
        })
        .collect();
    FrameSequence::new(plan.display_fps(), frames)
}

/// Ground-truth record stored as `manifest.json` beside the frames.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceManifest {
    pub schema_version: u32,
    pub display_fps: u32,
    pub frame_count: usize,
    /// Top-left corner of the embedded object, screen pixels.
    pub object_origin: (usize, usize),
    /// Scaled object footprint, screen pixels.
    pub object_size_px: (usize, usize),
    pub scale: usize,
    pub delta: u8,
    pub polarity: Polarity,
    /// None for static presentation.
    pub blink: Option<BlinkSchedule>,
}

impl SequenceManifest {
    /// Record for an object of `object_cells` = (width, height) cells rendered
    /// under `plan` into `frame_count` frames.
    pub fn describe(
        plan: &ConcealmentPlan,
        object_cells: (usize, usize),
        frame_count: usize,
    ) -> Self {
        SequenceManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            display_fps: plan.display_fps(),
            frame_count,
            object_origin: plan.origin(),
            object_size_px: (object_cells.0 * plan.scale(), object_cells.1 * plan.scale()),
            scale: plan.scale(),
            delta: plan.delta(),
            polarity: plan.polarity(),
            blink: plan.blink(),
        }
    }
}

/// Name of frame `index` on disk: `0000.pgm`, `0001.pgm`, ...
pub fn frame_file_name(index: usize) -> String {
    format!("{index:04}.pgm")
}

/// Write the sequence as numbered PGMs plus `manifest.json`.
pub fn save_sequence(
    dir: impl AsRef<Path>,
    sequence: &FrameSequence,
    manifest: &SequenceManifest,
) -> Result<(), ConcealError> {
    if manifest.frame_count != sequence.frame_count() {
        return Err(ConcealError::ManifestMismatch {
            recorded: manifest.frame_count,
            actual: sequence.frame_count(),
        });
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    for (index, frame) in sequence.frames().iter().enumerate() {
        save_pgm(frame, dir.join(frame_file_name(index)))?;
    }
    let mut json = serde_json::to_vec_pretty(manifest)?;
    json.push(b'\n');
    fs::write(dir.join("manifest.json"), json)?;
    Ok(())
}

/// Read back a sequence written by [`save_sequence`].
pub fn load_sequence(
    dir: impl AsRef<Path>,
) -> Result<(FrameSequence, SequenceManifest), ConcealError> {
    let dir = dir.as_ref();
    let manifest: SequenceManifest = serde_json::from_slice(&fs::read(dir.join("manifest.json"))?)?;
    if manifest.schema_version != MANIFEST_SCHEMA_VERSION {
        return Err(ConcealError::UnsupportedSchema(manifest.schema_version));
    }
    let frames = (0..manifest.frame_count)
        .map(|index| Ok(load_pnm(dir.join(frame_file_name(index)))?.into_gray()))
        .collect::<Result<Vec<_>, ConcealError>>()?;
    let sequence = FrameSequence::new(manifest.display_fps, frames)?;
    Ok((sequence, manifest))
}
