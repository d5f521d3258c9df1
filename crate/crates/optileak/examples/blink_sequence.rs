//! Temporal concealment: strobing the object at 60 or 30 Hz exploits
//! flicker fusion, raising the perceptibility minimum and with it the
//! contrast budget, at the cost of the object appearing only on scheduled
//! frames.
//!
//! Run with: cargo run --example blink_sequence

use optileak::codecs::rasterize_text;
use optileak::conceal::{
    builtin_profile, render_sequence, schedule_blink, BlinkMode, BlinkSchedule, ConcealmentPlan,
    ObjectKind, Polarity,
};
use optileak::imaging::GrayImage;

fn main() -> anyhow::Result<()> {
    // Contrast budget per presentation mode, same object and surface.
    println!("bright text contrast budget by presentation:");
    for mode in [BlinkMode::Static, BlinkMode::Blink60, BlinkMode::Blink30] {
        let profile = builtin_profile(ObjectKind::Text, Polarity::Bright, mode);
        println!(
            "  {:<8} minimum {:>5.2}% -> delta up to {}",
            mode.as_str(),
            profile.min_threshold_pct,
            profile.max_compliant_delta().unwrap(),
        );
    }

    // Schedules divide the display rate: 120 fps shows blink30 as a
    // period-4 cycle with one lit frame, a 25% duty cycle. Blink60 needs a
    // 120 Hz display; at 60 Hz it would degenerate to a static presentation.
    for (fps, mode) in
        [(120, BlinkMode::Blink60), (60, BlinkMode::Blink30), (120, BlinkMode::Blink30)]
    {
        let schedule = BlinkSchedule::for_mode(fps, mode)?;
        let pattern: String = (0..8).map(|f| if schedule.is_on(f) { '#' } else { '.' }).collect();
        println!(
            "{:>3} fps {:<8} period {} frames, pattern {pattern} ..",
            fps,
            mode.as_str(),
            schedule.period_frames,
        );
    }

    // A rendered blink sequence carries the object only on scheduled frames.
    let object = rasterize_text("HI", 1)?;
    let screen = GrayImage::filled(120, 40, 255);
    let plan = ConcealmentPlan::new(
        Polarity::Bright,
        255,
        30,
        (10, 10),
        4,
        60,
        Some(BlinkSchedule::for_mode(60, BlinkMode::Blink30)?),
    )?;
    let sequence = render_sequence(&screen, &object, &plan, 12)?;
    let carrying: Vec<usize> = sequence
        .frames()
        .iter()
        .enumerate()
        .filter(|(_, frame)| frame.data() != screen.data())
        .map(|(index, _)| index)
        .collect();
    println!("frames carrying the object over 12 rendered: {carrying:?}");
    assert_eq!(
        carrying,
        schedule_blink(60, BlinkMode::Blink30, 12)?.iter().map(|&f| f as usize).collect::<Vec<_>>()
    );
    Ok(())
}
