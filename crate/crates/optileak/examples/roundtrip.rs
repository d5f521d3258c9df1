//! Full transmitter-to-receiver pass: gate a plan against the perceptibility
//! table, hide a QR payload on a bright screen, push it through a distance
//! preset, and recover the payload.
//!
//! Run with: cargo run --example roundtrip [-- <seed>]

use optileak::channel::{capture_still, CaptureModel};
use optileak::codecs::{qr_encode, Payload};
use optileak::conceal::{
    builtin_profile, find_surface, render_sequence, stealth_check, BlinkMode, ConcealmentPlan,
    ObjectKind, Polarity,
};
use optileak::imaging::GrayImage;
use optileak::reconstruct::{recover_from_still, LocateMode, RecoverConfig, SupplementaryKernel};

fn main() -> anyhow::Result<()> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);

    let payload = Payload::numeric(format!("{:020}", seed))?;
    let truth = qr_encode(&payload);
    let object = truth.to_image(1);

    // A mostly-white screen with a band of text-like clutter at the top; the
    // placement scan must skip past it.
    let mut screen = GrayImage::filled(320, 240, 255);
    for x in 0..screen.width() {
        for y in 8..12 {
            screen.set(x, y, 40);
        }
    }

    let profile = builtin_profile(ObjectKind::Qr, Polarity::Bright, BlinkMode::Static);
    let delta = profile.max_compliant_delta().expect("bright static QR is feasible");
    println!(
        "profile minimum {:.2}% -> largest compliant delta {}",
        profile.min_threshold_pct, delta
    );

    let scale = 4;
    let origin = find_surface(&screen, 29 * scale, 29 * scale, Polarity::Bright, 0)?
        .expect("screen has a uniform region");
    println!("placing {0}x{0} object at {1:?}", 29 * scale, origin);

    let plan = ConcealmentPlan::new(Polarity::Bright, 255, delta, origin, scale, 60, None)?;
    let verdict = stealth_check(&plan, &profile);
    println!("stealth gate: {verdict}");
    anyhow::ensure!(verdict.is_pass(), "plan must pass the gate");

    let sequence = render_sequence(&screen, &object, &plan, 1)?;
    let manifest =
        optileak::conceal::SequenceManifest::describe(&plan, (object.width(), object.height()), 1);

    let model = CaptureModel {
        noise_sigma: 1.0,
        ..CaptureModel::with_preset("50cm", CaptureModel::identity(seed))?
    };
    let captured = capture_still(&sequence.frames()[0], &model)?;
    println!(
        "captured {}x{} via 50cm preset, noise sigma {}",
        captured.image.width(),
        captured.image.height(),
        model.noise_sigma
    );

    let mut config = RecoverConfig::new(
        LocateMode::Oracle { manifest: &manifest, capture_scale: model.scale },
        Polarity::Bright,
    );
    config.truth = Some(&truth);
    config.retry_kernels = SupplementaryKernel::RETRY_ORDER.to_vec();
    let report = recover_from_still(&captured.image, &config)?;

    println!(
        "decode success: {} (attempts {}, module accuracy {:.2}%)",
        report.decode_success,
        report.attempts,
        report.module_accuracy_pct.unwrap_or(f64::NAN)
    );
    anyhow::ensure!(report.payload.as_ref() == Some(&payload), "payload must roundtrip");
    println!("payload recovered: {payload:?}");
    Ok(())
}
