//! Recover a blinking embedding from video: a 120 Hz display strobes the
//! symbol at 30 Hz, a 40 fps camera with a short shutter samples every third
//! display frame, and the receiver picks out the captures that carry the
//! object, averages them, and decodes the result.
//!
//! Run with: cargo run --example recover_video

use optileak::channel::{capture_video, CaptureModel};
use optileak::codecs::{qr_encode, Payload};
use optileak::conceal::{render_sequence, BlinkMode, BlinkSchedule, ConcealmentPlan, Polarity};
use optileak::imaging::GrayImage;
use optileak::reconstruct::{recover_from_sequence, LocateMode, RecoverConfig};

fn main() -> anyhow::Result<()> {
    let payload = Payload::numeric("27182818284590452353")?;
    let truth = qr_encode(&payload);
    let object = truth.to_image(1);

    // Blink30 on a 120 Hz display: the symbol is lit one frame in four.
    let screen = GrayImage::filled(176, 176, 255);
    let blink = BlinkSchedule::for_mode(120, BlinkMode::Blink30)?;
    let plan = ConcealmentPlan::new(Polarity::Bright, 255, 5, (24, 24), 4, 120, Some(blink))?;
    let displayed = render_sequence(&screen, &object, &plan, 120)?;
    println!(
        "displayed {} frames at {} fps, object lit every {} frames",
        displayed.frame_count(),
        displayed.display_fps(),
        plan.blink().expect("plan blinks").period_frames,
    );

    // A 1/120 s shutter at 40 fps integrates exactly one display frame per
    // capture, frame 3k for capture k, so the lit display frames 0, 4, 8, ...
    // land in every fourth capture.
    let model = CaptureModel {
        camera_fps: 40,
        exposure: Some(1.0 / 120.0),
        blur_sigma: 0.5,
        ..CaptureModel::identity(5)
    };
    let captured = capture_video(&displayed, &model)?;
    println!("captured {} frames at {} fps", captured.frames.len(), model.camera_fps);

    let mut config = RecoverConfig::new(LocateMode::Finder, Polarity::Bright);
    config.truth = Some(&truth);
    let report = recover_from_sequence(&captured.frames, &config)?;

    let detected = report.object_frames.as_deref().unwrap_or(&[]);
    println!("detector flagged {} captures as carrying: {detected:?}", detected.len());
    println!(
        "decoded: {} via {} attempt(s), module accuracy {:.1}%",
        report.decode_success,
        report.attempts,
        report.module_accuracy_pct.unwrap_or(f64::NAN),
    );
    println!("payload: {:?}", report.payload);
    assert_eq!(report.payload.as_ref(), Some(&payload));
    assert!(detected.iter().all(|&k| k % 4 == 0));
    Ok(())
}
