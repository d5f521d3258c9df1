//! Finding the symbol grid in a reconstructed image.

use serde::{Deserialize, Serialize};

use crate::codecs::SYMBOL_SIZE;
use crate::conceal::SequenceManifest;
use crate::imaging::{otsu_threshold, GrayImage};

use super::ReconError;

/// Axis-aligned orientation of the sampled symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rotation {
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub fn degrees(self) -> u32 {
        match self {
            Rotation::R0 => 0,
            Rotation::R90 => 90,
            Rotation::R180 => 180,
            Rotation::R270 => 270,
        }
    }
}

/// Where the symbol sits: sub-pixel corner of module (0,0), pixels per module
/// along the symbol's column and row axes, and which way it is turned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolGeometry {
    pub origin: (f64, f64),
    pub pitch: (f64, f64),
    pub rotation: Rotation,
}

impl SymbolGeometry {
    pub fn validate(&self) -> Result<(), ReconError> {
        let ok = self.pitch.0 > 0.0
            && self.pitch.1 > 0.0
            && self.pitch.0.is_finite()
            && self.pitch.1.is_finite()
            && self.origin.0.is_finite()
            && self.origin.1.is_finite();
        if ok {
            Ok(())
        } else {
            Err(ReconError::InvalidGeometry)
        }
    }

    /// Per-module step vectors (column axis, row axis) in image pixels.
    pub(super) fn step_vectors(&self) -> ((f64, f64), (f64, f64)) {
        let (pc, pr) = self.pitch;
        match self.rotation {
            Rotation::R0 => ((pc, 0.0), (0.0, pr)),
            Rotation::R90 => ((0.0, pc), (-pr, 0.0)),
            Rotation::R180 => ((-pc, 0.0), (0.0, -pr)),
            Rotation::R270 => ((0.0, -pc), (pr, 0.0)),
        }
    }

    /// Image-pixel center of module (row, col).
    pub fn module_center(&self, row: usize, col: usize) -> (f64, f64) {
        let (cstep, rstep) = self.step_vectors();
        let (c, r) = (col as f64 + 0.5, row as f64 + 0.5);
        (self.origin.0 + c * cstep.0 + r * rstep.0, self.origin.1 + c * cstep.1 + r * rstep.1)
    }
}

/// How to find the grid: scan for finder patterns, or trust the recorded
/// geometry scaled by the capture model's resolution factor.
#[derive(Debug, Clone, Copy)]
pub enum LocateMode<'a> {
    Finder,
    Oracle { manifest: &'a SequenceManifest, capture_scale: f64 },
}

pub fn locate_symbol(img: &GrayImage, mode: LocateMode) -> Result<SymbolGeometry, ReconError> {
    match mode {
        LocateMode::Oracle { manifest, capture_scale } => {
            if !(capture_scale > 0.0 && capture_scale.is_finite()) {
                return Err(ReconError::InvalidGeometry);
            }
            let (ox, oy) = manifest.object_origin;
            let geometry = SymbolGeometry {
                origin: (ox as f64 * capture_scale, oy as f64 * capture_scale),
                pitch: (
                    manifest.scale as f64 * capture_scale,
                    manifest.scale as f64 * capture_scale,
                ),
                rotation: Rotation::R0,
            };
            geometry.validate()?;
            Ok(geometry)
        }
        LocateMode::Finder => locate_by_finder(img),
    }
}

/// One run of equal binarized pixels: (dark, start, length).
fn run_lengths(values: impl Iterator<Item = bool>) -> Vec<(bool, usize, usize)> {
    let mut runs: Vec<(bool, usize, usize)> = Vec::new();
    for (i, dark) in values.enumerate() {
        match runs.last_mut() {
            Some((d, _, len)) if *d == dark => *len += 1,
            _ => runs.push((dark, i, 1)),
        }
    }
    runs
}

/// Test five consecutive runs against the 1:1:3:1:1 finder signature; returns
/// the module unit (total/7) when they match.
///
/// Enhancement dilates binarized ink outward by up to two pixels per edge
/// (equalization crushes blurred off-white pixels into the dark class), so
/// the signature is also tried with each dilation depth undone: dark runs
/// shed 2d edge pixels, the light runs between them regain 2d. A pattern
/// that is not a dilated finder fails the strict ratio check at every depth.
fn finder_ratio(lens: [usize; 5]) -> Option<f64> {
    'depth: for d in 0..=2u32 {
        let shift = f64::from(2 * d);
        let mut adjusted = [0.0f64; 5];
        for (i, &len) in lens.iter().enumerate() {
            let a = if i % 2 == 0 { len as f64 - shift } else { len as f64 + shift };
            if a <= 0.0 {
                continue 'depth;
            }
            adjusted[i] = a;
        }
        let total: f64 = adjusted.iter().sum();
        let unit = total / 7.0;
        if unit < 1.5 {
            continue;
        }
        let slack = |target: f64| (target / 2.0).max(1.0);
        let matched = adjusted.iter().enumerate().all(|(i, &len)| {
            let target = if i == 2 { 3.0 * unit } else { unit };
            (len - target).abs() < slack(target)
        });
        if matched {
            return Some(unit);
        }
    }
    None
}

/// Geometric center of a run covering pixels [start, start+len).
fn run_center(start: usize, len: usize) -> f64 {
    start as f64 + len as f64 / 2.0 - 0.5
}

struct Candidate {
    x: f64,
    y: f64,
    unit: f64,
}

/// Find the dark run covering `index` and test its 5-run window against the
/// finder signature; returns (run start, run length, unit).
fn window_at(runs: &[(bool, usize, usize)], index: usize) -> Option<(usize, usize, f64)> {
    let mid = runs.iter().position(|&(_, s, l)| s <= index && index < s + l)?;
    if !runs[mid].0 || mid < 2 || mid + 2 >= runs.len() {
        return None;
    }
    let w = &runs[mid - 2..=mid + 2];
    let unit = finder_ratio([w[0].2, w[1].2, w[2].2, w[3].2, w[4].2])?;
    Some((runs[mid].1, runs[mid].2, unit))
}

/// Check the vertical 1:1:3:1:1 signature through (x, y); returns the refined
/// center y and the vertical unit.
fn confirm_vertical(dark: &[bool], w: usize, h: usize, x: usize, y: usize) -> Option<(f64, f64)> {
    let runs = run_lengths((0..h).map(|row| dark[row * w + x]));
    let (start, len, unit) = window_at(&runs, y)?;
    Some((run_center(start, len), unit))
}

/// Check the signature along both diagonals through (x, y). Data modules can
/// fake the row and column patterns; almost none also fake the diagonals.
fn confirm_diagonals(dark: &[bool], w: usize, h: usize, x: usize, y: usize) -> bool {
    let t = x.min(y);
    let (sx, sy) = (x - t, y - t);
    let main = (0..(w - sx).min(h - sy)).map(|i| dark[(sy + i) * w + (sx + i)]);
    if window_at(&run_lengths(main), t).is_none() {
        return false;
    }
    let t = x.min(h - 1 - y);
    let (sx, sy) = (x - t, y + t);
    let anti = (0..(w - sx).min(sy + 1)).map(|i| dark[(sy - i) * w + (sx + i)]);
    window_at(&run_lengths(anti), t).is_some()
}

struct Cluster {
    x: f64,
    y: f64,
    unit: f64,
    count: usize,
}

fn locate_by_finder(img: &GrayImage) -> Result<SymbolGeometry, ReconError> {
    let (w, h) = (img.width(), img.height());
    let level = otsu_threshold(img).map_err(|_| ReconError::FinderNotFound)?;
    let dark: Vec<bool> = img.data().iter().map(|&v| v <= level).collect();

    let mut candidates: Vec<Candidate> = Vec::new();
    for y in 0..h {
        let runs = run_lengths((0..w).map(|x| dark[y * w + x]));
        for window in runs.windows(5) {
            if !window[0].0 {
                continue;
            }
            let Some(unit) =
                finder_ratio([window[0].2, window[1].2, window[2].2, window[3].2, window[4].2])
            else {
                continue;
            };
            let cx = run_center(window[2].1, window[2].2);
            let Some((cy, vunit)) = confirm_vertical(&dark, w, h, cx.round() as usize, y) else {
                continue;
            };
            let (px, py) = (cx.round() as usize, (cy.round() as usize).min(h - 1));
            if !confirm_diagonals(&dark, w, h, px, py) {
                continue;
            }
            candidates.push(Candidate { x: cx, y: cy, unit: (unit + vunit) / 2.0 });
        }
    }

    // Merge candidates of the same finder; distinct finders sit 22 modules
    // apart, far beyond the merge radius.
    let mut clusters: Vec<Cluster> = Vec::new();
    for c in candidates {
        match clusters.iter_mut().find(|cl| {
            let r = 3.0 * (cl.unit).max(c.unit);
            (cl.x - c.x).abs() <= r && (cl.y - c.y).abs() <= r
        }) {
            Some(cl) => {
                let n = cl.count as f64;
                cl.x = (cl.x * n + c.x) / (n + 1.0);
                cl.y = (cl.y * n + c.y) / (n + 1.0);
                cl.unit = (cl.unit * n + c.unit) / (n + 1.0);
                cl.count += 1;
            }
            None => clusters.push(Cluster { x: c.x, y: c.y, unit: c.unit, count: 1 }),
        }
    }
    clusters.retain(|cl| cl.count >= 3);

    match clusters.len() {
        3 => {}
        0..=2 => return Err(ReconError::FinderNotFound),
        n => return Err(ReconError::AmbiguousFinders(n)),
    }

    // The corner finder is the one off the longest pairwise segment.
    let p: Vec<(f64, f64)> = clusters.iter().map(|c| (c.x, c.y)).collect();
    let d2 = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let longest = pairs
        .iter()
        .max_by(|a, b| d2(p[a.0], p[a.1]).partial_cmp(&d2(p[b.0], p[b.1])).unwrap())
        .unwrap();
    let corner = 3 - longest.0 - longest.1;
    let corner_pt = p[corner];
    let mut a = (p[longest.0].0 - corner_pt.0, p[longest.0].1 - corner_pt.1);
    let mut b = (p[longest.1].0 - corner_pt.0, p[longest.1].1 - corner_pt.1);
    // Right-handed: column axis cross row axis must point into the image
    // (x right, y down), matching the module layout.
    if a.0 * b.1 - a.1 * b.0 < 0.0 {
        std::mem::swap(&mut a, &mut b);
    }

    let snap = |v: (f64, f64)| -> Option<(i8, i8)> {
        if v.0.abs() >= 2.0 * v.1.abs() {
            Some((if v.0 >= 0.0 { 1 } else { -1 }, 0))
        } else if v.1.abs() >= 2.0 * v.0.abs() {
            Some((0, if v.1 >= 0.0 { 1 } else { -1 }))
        } else {
            None
        }
    };
    let (Some(ca), Some(cb)) = (snap(a), snap(b)) else {
        return Err(ReconError::NotAxisAligned);
    };
    let rotation = match (ca, cb) {
        ((1, 0), (0, 1)) => Rotation::R0,
        ((0, 1), (-1, 0)) => Rotation::R90,
        ((-1, 0), (0, -1)) => Rotation::R180,
        ((0, -1), (1, 0)) => Rotation::R270,
        _ => return Err(ReconError::NotAxisAligned),
    };

    // Finder centers are 22 modules apart; the corner center sits at module
    // (3,3)'s center, 3.5 modules in from the symbol corner on both axes.
    let span = (SYMBOL_SIZE - 7) as f64;
    let pitch = ((a.0 * a.0 + a.1 * a.1).sqrt() / span, (b.0 * b.0 + b.1 * b.1).sqrt() / span);
    let col_step = (a.0 / span, a.1 / span);
    let row_step = (b.0 / span, b.1 / span);
    let geometry = SymbolGeometry {
        origin: (
            corner_pt.0 - 3.5 * (col_step.0 + row_step.0),
            corner_pt.1 - 3.5 * (col_step.1 + row_step.1),
        ),
        pitch,
        rotation,
    };
    geometry.validate()?;
    Ok(geometry)
}
