//! Embedding plans: where the object goes, how faint it is, when it shows.

use serde::{Deserialize, Serialize};

use super::profile::{contrast_percent, BlinkMode, Polarity};
use super::ConcealError;

/// Periodic on/off presentation across display frames. The object is shown on
/// frames `f` with `(f - phase) mod period_frames < on_frames`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlinkSchedule {
    #[serde(rename = "period")]
    pub period_frames: u32,
    #[serde(rename = "on")]
    pub on_frames: u32,
    pub phase: u32,
}

impl BlinkSchedule {
    /// The standard schedule for a blink mode: one on-frame per period, phase
    /// 0, period = display_fps / blink frequency. Blink60 needs a 120 Hz
    /// display; at 60 Hz it would degenerate to a static presentation.
    pub fn for_mode(display_fps: u32, mode: BlinkMode) -> Result<Self, ConcealError> {
        if display_fps != 60 && display_fps != 120 {
            return Err(ConcealError::UnsupportedDisplayFps(display_fps));
        }
        let blink_hz = match mode {
            BlinkMode::Static => return Err(ConcealError::UnschedulableMode { mode, display_fps }),
            BlinkMode::Blink60 => 60,
            BlinkMode::Blink30 => 30,
        };
        let period_frames = display_fps / blink_hz;
        if period_frames < 2 {
            return Err(ConcealError::UnschedulableMode { mode, display_fps });
        }
        Ok(BlinkSchedule { period_frames, on_frames: 1, phase: 0 })
    }

    pub(super) fn validate(&self) -> Result<(), ConcealError> {
        if self.period_frames == 0 {
            return Err(ConcealError::InvalidSchedule("period_frames must be at least 1"));
        }
        if self.on_frames == 0 || self.on_frames > self.period_frames {
            return Err(ConcealError::InvalidSchedule("on_frames must lie in 1..=period_frames"));
        }
        if self.phase >= self.period_frames {
            return Err(ConcealError::InvalidSchedule("phase must be less than period_frames"));
        }
        Ok(())
    }

    /// Whether the object is visible on the given frame index.
    pub fn is_on(&self, frame: u32) -> bool {
        let pos =
            (frame + self.period_frames - self.phase % self.period_frames) % self.period_frames;
        pos < self.on_frames
    }

    /// All on-frame indices below `duration_frames`, ascending.
    pub fn frame_indices(&self, duration_frames: u32) -> Vec<u32> {
        (0..duration_frames).filter(|&f| self.is_on(f)).collect()
    }
}

/// On-frame indices for a standard blink presentation: one on-frame per
/// period, starting at frame 0. Exactly ceil(duration / period) indices.
pub fn schedule_blink(
    display_fps: u32,
    mode: BlinkMode,
    duration_frames: u32,
) -> Result<Vec<u32>, ConcealError> {
    Ok(BlinkSchedule::for_mode(display_fps, mode)?.frame_indices(duration_frames))
}

/// A validated embedding plan. The object is stamped at `origin`, each object
/// cell replicated `scale` times in both axes, its ink drawn `delta` levels
/// off the background `base` (darker on bright surfaces, brighter on dark
/// ones). `blink: None` means the object is present on every frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PlanRepr", into = "PlanRepr")]
pub struct ConcealmentPlan {
    polarity: Polarity,
    base: u8,
    delta: u8,
    origin: (usize, usize),
    scale: usize,
    display_fps: u32,
    blink: Option<BlinkSchedule>,
}

impl ConcealmentPlan {
    pub fn new(
        polarity: Polarity,
        base: u8,
        delta: u8,
        origin: (usize, usize),
        scale: usize,
        display_fps: u32,
        blink: Option<BlinkSchedule>,
    ) -> Result<Self, ConcealError> {
        if delta == 0 {
            return Err(ConcealError::ZeroDelta);
        }
        if scale == 0 {
            return Err(ConcealError::ZeroScale);
        }
        if display_fps == 0 {
            return Err(ConcealError::ZeroFps);
        }
        let in_range = match polarity {
            Polarity::Bright => base >= delta,
            Polarity::Dark => base.checked_add(delta).is_some(),
        };
        if !in_range {
            return Err(ConcealError::LumaOutOfRange { polarity, base, delta });
        }
        if let Some(schedule) = &blink {
            schedule.validate()?;
        }
        Ok(ConcealmentPlan { polarity, base, delta, origin, scale, display_fps, blink })
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn delta(&self) -> u8 {
        self.delta
    }

    pub fn origin(&self) -> (usize, usize) {
        self.origin
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn display_fps(&self) -> u32 {
        self.display_fps
    }

    pub fn blink(&self) -> Option<BlinkSchedule> {
        self.blink
    }

    /// The luma object ink is drawn at: base - delta (bright) or base + delta
    /// (dark). In range by construction.
    pub fn object_luma(&self) -> u8 {
        match self.polarity {
            Polarity::Bright => self.base - self.delta,
            Polarity::Dark => self.base + self.delta,
        }
    }

    /// Contrast the embedded ink presents against the background:
    /// exactly `100 * delta / 255`.
    pub fn effective_contrast_pct(&self) -> f64 {
        contrast_percent(self.base, self.object_luma())
    }
}

#[derive(Serialize, Deserialize)]
struct PlanRepr {
    polarity: Polarity,
    base: u8,
    delta: u8,
    origin: (usize, usize),
    scale: usize,
    display_fps: u32,
    blink: Option<BlinkSchedule>,
}

impl TryFrom<PlanRepr> for ConcealmentPlan {
    type Error = ConcealError;
    fn try_from(r: PlanRepr) -> Result<Self, ConcealError> {
        ConcealmentPlan::new(r.polarity, r.base, r.delta, r.origin, r.scale, r.display_fps, r.blink)
    }
}

impl From<ConcealmentPlan> for PlanRepr {
    fn from(p: ConcealmentPlan) -> Self {
        PlanRepr {
            polarity: p.polarity,
            base: p.base,
            delta: p.delta,
            origin: p.origin,
            scale: p.scale,
            display_fps: p.display_fps,
            blink: p.blink,
        }
    }
}
