//! The perceptibility gate over every object/surface/blink combination:
//! which profiles admit a compliant contrast step at all, and how much
//! contrast each one allows before a viewer would notice.
//!
//! Run with: cargo run --example stealth_gate

use optileak::conceal::{
    builtin_profile, contrast_percent, stealth_check, BlinkMode, ConcealmentPlan, ObjectKind,
    Polarity,
};

fn main() -> anyhow::Result<()> {
    println!(
        "{:<7} {:<8} {:<8} {:>7} {:>10} {:>11}",
        "object", "surface", "blink", "min %", "max delta", "contrast %"
    );
    let mut infeasible = Vec::new();
    for kind in [ObjectKind::Qr, ObjectKind::Text, ObjectKind::Image] {
        for polarity in [Polarity::Bright, Polarity::Dark] {
            for mode in [BlinkMode::Static, BlinkMode::Blink60, BlinkMode::Blink30] {
                let profile = builtin_profile(kind, polarity, mode);
                match profile.max_compliant_delta() {
                    Some(delta) => println!(
                        "{:<7} {:<8} {:<8} {:>7.2} {:>10} {:>11.2}",
                        kind.as_str(),
                        polarity.as_str(),
                        mode.as_str(),
                        profile.min_threshold_pct,
                        delta,
                        contrast_percent(0, delta),
                    ),
                    None => {
                        println!(
                            "{:<7} {:<8} {:<8} {:>7.2} {:>10} {:>11}",
                            kind.as_str(),
                            polarity.as_str(),
                            mode.as_str(),
                            profile.min_threshold_pct,
                            "-",
                            "infeasible",
                        );
                        infeasible.push(format!("{kind}/{polarity}/{mode}"));
                    }
                }
            }
        }
    }
    println!(
        "\n{} profiles cannot hide anything: even delta 1 ({:.2}%) meets their minimum:",
        infeasible.len(),
        contrast_percent(0, 1),
    );
    for name in &infeasible {
        println!("  {name}");
    }

    // The gate itself: the same plan passes under one profile and fails
    // under a stricter one.
    let profile = builtin_profile(ObjectKind::Qr, Polarity::Bright, BlinkMode::Static);
    let lenient = ConcealmentPlan::new(Polarity::Bright, 255, 5, (0, 0), 4, 60, None)?;
    let pushy = ConcealmentPlan::new(Polarity::Bright, 255, 6, (0, 0), 4, 60, None)?;
    println!("\ndelta 5 against bright static QR: {}", stealth_check(&lenient, &profile));
    println!("delta 6 against bright static QR: {}", stealth_check(&pushy, &profile));
    Ok(())
}
