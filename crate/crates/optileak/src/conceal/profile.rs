//! Perceptibility profiles and the contrast gate.
//!
//! A profile records the minimum contrast (percent) at which a given object
//! class, surface polarity, and presentation mode becomes noticeable to a
//! viewer. Concealment is compliant only strictly below that minimum. The
//! built-in table covers all 18 combinations; callers may also supply their
//! own thresholds for re-calibrated displays.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::plan::ConcealmentPlan;
use super::ConcealError;

/// Visual object class carrying the payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Qr,
    Text,
    Image,
}

/// Embedding surface: bright surfaces take a slightly darker object,
/// dark surfaces a slightly brighter one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Bright,
    Dark,
}

/// Temporal presentation: shown on every frame, or strobed at 60/30 Hz.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlinkMode {
    #[default]
    Static,
    Blink60,
    Blink30,
}

impl ObjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectKind::Qr => "qr",
            ObjectKind::Text => "text",
            ObjectKind::Image => "image",
        }
    }
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Bright => "bright",
            Polarity::Dark => "dark",
        }
    }
}

impl BlinkMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BlinkMode::Static => "static",
            BlinkMode::Blink60 => "blink60",
            BlinkMode::Blink30 => "blink30",
        }
    }
}

macro_rules! impl_display_fromstr {
    ($ty:ident, $( $text:literal => $variant:expr ),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $( $text => Ok($variant), )+
                    other => Err(format!(
                        concat!("unknown ", stringify!($ty), " {:?}; expected one of: ",
                                $( $text, " ", )+),
                        other
                    )),
                }
            }
        }
    };
}

impl_display_fromstr!(ObjectKind, "qr" => ObjectKind::Qr, "text" => ObjectKind::Text, "image" => ObjectKind::Image);
impl_display_fromstr!(Polarity, "bright" => Polarity::Bright, "dark" => Polarity::Dark);
impl_display_fromstr!(BlinkMode, "static" => BlinkMode::Static, "blink60" => BlinkMode::Blink60, "blink30" => BlinkMode::Blink30);

/// Minimum contrast (percent of full scale) at which the object becomes
/// noticeable under the given conditions. Plans must stay strictly below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StealthProfile {
    pub object_kind: ObjectKind,
    pub polarity: Polarity,
    pub mode: BlinkMode,
    pub min_threshold_pct: f64,
}

impl StealthProfile {
    /// User-supplied profile; the threshold must be a positive percentage.
    pub fn custom(
        object_kind: ObjectKind,
        polarity: Polarity,
        mode: BlinkMode,
        min_threshold_pct: f64,
    ) -> Result<Self, ConcealError> {
        if !(min_threshold_pct > 0.0 && min_threshold_pct <= 100.0) {
            return Err(ConcealError::InvalidThreshold(min_threshold_pct));
        }
        Ok(StealthProfile { object_kind, polarity, mode, min_threshold_pct })
    }

    /// Largest compliant delta for this profile, if any exists.
    pub fn max_compliant_delta(&self) -> Option<u8> {
        max_delta_below(self.min_threshold_pct)
    }
}

/// Built-in perceptibility minima for every (polarity, mode, object kind)
/// combination, ordered by polarity, then mode, then object kind. Dark-surface
/// minima are much lower than bright ones: several sit below one 8-bit step,
/// so no compliant integer delta exists for them at all.
pub const PERCEPTIBILITY_MINIMA: [StealthProfile; 18] = {
    use BlinkMode::*;
    use ObjectKind::*;
    use Polarity::*;
    const fn p(
        polarity: Polarity,
        mode: BlinkMode,
        object_kind: ObjectKind,
        min_threshold_pct: f64,
    ) -> StealthProfile {
        StealthProfile { object_kind, polarity, mode, min_threshold_pct }
    }
    [
        p(Bright, Static, Qr, 2.11),
        p(Bright, Static, Text, 3.50),
        p(Bright, Static, Image, 1.83),
        p(Bright, Blink60, Qr, 3.68),
        p(Bright, Blink60, Text, 12.00),
        p(Bright, Blink60, Image, 4.26),
        p(Bright, Blink30, Qr, 4.08),
        p(Bright, Blink30, Text, 13.50),
        p(Bright, Blink30, Image, 4.74),
        p(Dark, Static, Qr, 0.20),
        p(Dark, Static, Text, 2.50),
        p(Dark, Static, Image, 0.15),
        p(Dark, Blink60, Qr, 0.20),
        p(Dark, Blink60, Text, 6.00),
        p(Dark, Blink60, Image, 0.68),
        p(Dark, Blink30, Qr, 0.39),
        p(Dark, Blink30, Text, 6.50),
        p(Dark, Blink30, Image, 0.49),
    ]
};

/// The built-in profile for one combination; total over all 18.
pub fn builtin_profile(kind: ObjectKind, polarity: Polarity, mode: BlinkMode) -> StealthProfile {
    *PERCEPTIBILITY_MINIMA
        .iter()
        .find(|p| p.object_kind == kind && p.polarity == polarity && p.mode == mode)
        .expect("table covers all combinations")
}

/// Contrast between a background and an object luma, as a percentage of the
/// full 8-bit scale: `100 * |p_b - p_i| / 255`.
pub fn contrast_percent(p_b: u8, p_i: u8) -> f64 {
    100.0 * f64::from(p_b.abs_diff(p_i)) / 255.0
}

/// Largest integer delta whose contrast stays strictly below `threshold_pct`,
/// or `None` when even delta 1 reaches the threshold. Strictness keeps a
/// safety margin below the perceptibility minimum.
///
/// # Panics
/// If `threshold_pct` lies outside (0, 100].
pub fn max_delta_below(threshold_pct: f64) -> Option<u8> {
    assert!(
        threshold_pct > 0.0 && threshold_pct <= 100.0,
        "threshold_pct must lie in (0,100], got {threshold_pct}"
    );
    (1..=255u16).rev().find(|&d| 100.0 * f64::from(d) / 255.0 < threshold_pct).map(|d| d as u8)
}

/// Outcome of gating a plan's contrast against a perceptibility profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum StealthVerdict {
    /// Contrast strictly below the minimum; `margin_pct` is the headroom left.
    Pass { margin_pct: f64 },
    /// Contrast at or above the minimum, but a smaller delta would comply.
    Fail { excess_pct: f64 },
    /// Even delta 1 meets the minimum; no compliant embedding exists.
    Infeasible,
}

impl StealthVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, StealthVerdict::Pass { .. })
    }
}

impl fmt::Display for StealthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StealthVerdict::Pass { margin_pct } => write!(f, "pass (margin {margin_pct:.4}%)"),
            StealthVerdict::Fail { excess_pct } => write!(f, "fail (excess {excess_pct:.4}%)"),
            StealthVerdict::Infeasible => f.write_str("infeasible (even delta 1 is visible)"),
        }
    }
}

/// Gate a plan against a profile: pass iff its contrast is strictly below the
/// profile minimum. A failing plan is reported `Infeasible` rather than `Fail`
/// when no delta at all could comply.
pub fn stealth_check(plan: &ConcealmentPlan, profile: &StealthProfile) -> StealthVerdict {
    let contrast = plan.effective_contrast_pct();
    let min = profile.min_threshold_pct;
    if contrast < min {
        StealthVerdict::Pass { margin_pct: min - contrast }
    } else if contrast_percent(1, 0) >= min {
        StealthVerdict::Infeasible
    } else {
        StealthVerdict::Fail { excess_pct: contrast - min }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conceal::plan::ConcealmentPlan;

    fn plan_with_delta(polarity: Polarity, delta: u8) -> ConcealmentPlan {
        let base = match polarity {
            Polarity::Bright => 255,
            Polarity::Dark => 0,
        };
        ConcealmentPlan::new(polarity, base, delta, (0, 0), 1, 60, None).unwrap()
    }

    #[test]
    fn contrast_examples() {
        assert_eq!(format!("{:.4}", contrast_percent(255, 255)), "0.0000");
        assert_eq!(format!("{:.4}", contrast_percent(0, 255)), "100.0000");
        assert_eq!(format!("{:.4}", contrast_percent(255, 250)), "1.9608");
    }

    #[test]
    fn contrast_is_symmetric_and_bounded() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                let c = contrast_percent(a, b);
                assert_eq!(c, contrast_percent(b, a));
                assert!((0.0..=100.0).contains(&c));
            }
        }
    }

    #[test]
    fn max_delta_examples() {
        assert_eq!(max_delta_below(2.11), Some(5));
        assert_eq!(max_delta_below(0.20), None);
        assert_eq!(max_delta_below(100.0), Some(254));
    }

    #[test]
    fn max_delta_strictness_at_exact_boundary() {
        // A threshold equal to delta 5's own contrast excludes delta 5.
        let t = 100.0 * 5.0 / 255.0;
        assert_eq!(max_delta_below(t), Some(4));
    }

    #[test]
    fn max_delta_satisfies_its_definition() {
        // Definition check: the result is compliant and maximal; None means
        // even delta 1 is out.
        let mut t = 0.01f64;
        while t <= 100.0 {
            match max_delta_below(t) {
                Some(d) => {
                    assert!(100.0 * f64::from(d) / 255.0 < t, "t={t} d={d}");
                    assert!(100.0 * (f64::from(d) + 1.0) / 255.0 >= t, "t={t} d={d}");
                }
                None => assert!(100.0 / 255.0 >= t, "t={t}"),
            }
            t += 0.037;
        }
    }

    #[test]
    #[should_panic(expected = "threshold_pct")]
    fn max_delta_rejects_zero_threshold() {
        max_delta_below(0.0);
    }

    #[test]
    fn table_covers_all_combinations_once() {
        let kinds = [ObjectKind::Qr, ObjectKind::Text, ObjectKind::Image];
        let polarities = [Polarity::Bright, Polarity::Dark];
        let modes = [BlinkMode::Static, BlinkMode::Blink60, BlinkMode::Blink30];
        assert_eq!(PERCEPTIBILITY_MINIMA.len(), 18);
        for p in &polarities {
            for m in &modes {
                for k in &kinds {
                    let hits = PERCEPTIBILITY_MINIMA
                        .iter()
                        .filter(|e| e.object_kind == *k && e.polarity == *p && e.mode == *m)
                        .count();
                    assert_eq!(hits, 1, "{k} {p} {m}");
                    assert!(builtin_profile(*k, *p, *m).min_threshold_pct > 0.0);
                }
            }
        }
    }

    #[test]
    fn table_spot_values() {
        let f = |k, p, m| builtin_profile(k, p, m).min_threshold_pct;
        assert_eq!(f(ObjectKind::Qr, Polarity::Bright, BlinkMode::Static), 2.11);
        assert_eq!(f(ObjectKind::Text, Polarity::Bright, BlinkMode::Blink30), 13.50);
        assert_eq!(f(ObjectKind::Image, Polarity::Dark, BlinkMode::Static), 0.15);
        assert_eq!(f(ObjectKind::Qr, Polarity::Dark, BlinkMode::Blink30), 0.39);
    }

    #[test]
    fn exactly_four_profiles_are_infeasible() {
        // One 8-bit step is 100/255 = 0.3922%; every dark minimum at or below
        // that is unreachable by any integer delta.
        let infeasible: Vec<_> = PERCEPTIBILITY_MINIMA
            .iter()
            .filter(|p| p.max_compliant_delta().is_none())
            .map(|p| (p.polarity, p.mode, p.object_kind))
            .collect();
        assert_eq!(
            infeasible,
            vec![
                (Polarity::Dark, BlinkMode::Static, ObjectKind::Qr),
                (Polarity::Dark, BlinkMode::Static, ObjectKind::Image),
                (Polarity::Dark, BlinkMode::Blink60, ObjectKind::Qr),
                (Polarity::Dark, BlinkMode::Blink30, ObjectKind::Qr),
            ]
        );
    }

    #[test]
    fn stealth_check_examples() {
        let bright_qr = builtin_profile(ObjectKind::Qr, Polarity::Bright, BlinkMode::Static);
        match stealth_check(&plan_with_delta(Polarity::Bright, 5), &bright_qr) {
            StealthVerdict::Pass { margin_pct } => {
                assert_eq!(format!("{margin_pct:.4}"), "0.1492");
            }
            other => panic!("expected pass, got {other:?}"),
        }
        match stealth_check(&plan_with_delta(Polarity::Bright, 6), &bright_qr) {
            StealthVerdict::Fail { excess_pct } => {
                assert_eq!(format!("{excess_pct:.4}"), "0.2429");
            }
            other => panic!("expected fail, got {other:?}"),
        }
        let dark_image = builtin_profile(ObjectKind::Image, Polarity::Dark, BlinkMode::Static);
        assert_eq!(
            stealth_check(&plan_with_delta(Polarity::Dark, 1), &dark_image),
            StealthVerdict::Infeasible
        );
    }

    #[test]
    fn stealth_check_monotone_in_delta() {
        // If some delta passes a profile, every smaller delta passes too.
        for profile in &PERCEPTIBILITY_MINIMA {
            let mut failed_already = false;
            for delta in 1..=250u8 {
                let v = stealth_check(&plan_with_delta(profile.polarity, delta), profile);
                if failed_already {
                    assert!(!v.is_pass(), "non-monotone at delta {delta} for {profile:?}");
                }
                failed_already = !v.is_pass();
            }
        }
    }

    #[test]
    fn pass_iff_contrast_strictly_below_minimum() {
        for profile in &PERCEPTIBILITY_MINIMA {
            for delta in [1u8, 2, 5, 6, 17, 34, 35, 100] {
                let plan = plan_with_delta(profile.polarity, delta);
                let passed = stealth_check(&plan, profile).is_pass();
                assert_eq!(passed, plan.effective_contrast_pct() < profile.min_threshold_pct);
            }
        }
    }

    #[test]
    fn verdict_serde_shape() {
        let v = StealthVerdict::Pass { margin_pct: 0.25 };
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"verdict":"pass","margin_pct":0.25}"#);
        assert_eq!(
            serde_json::to_string(&StealthVerdict::Infeasible).unwrap(),
            r#"{"verdict":"infeasible"}"#
        );
    }

    #[test]
    fn enum_round_trip_through_strings() {
        for k in [ObjectKind::Qr, ObjectKind::Text, ObjectKind::Image] {
            assert_eq!(k.as_str().parse::<ObjectKind>().unwrap(), k);
        }
        for p in [Polarity::Bright, Polarity::Dark] {
            assert_eq!(p.as_str().parse::<Polarity>().unwrap(), p);
        }
        for m in [BlinkMode::Static, BlinkMode::Blink60, BlinkMode::Blink30] {
            assert_eq!(m.as_str().parse::<BlinkMode>().unwrap(), m);
        }
        assert!("qrcode".parse::<ObjectKind>().is_err());
    }
}
