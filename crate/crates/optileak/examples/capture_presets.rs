//! March one embedded still through every distance preset and watch the
//! channel close: resolution and optical blur eat the sub-module detail the
//! receiver needs, until even a known-geometry decode gives out.
//!
//! Run with: cargo run --example capture_presets [-- <seed>]

use optileak::channel::{capture_still, preset_names, CaptureModel};
use optileak::codecs::{qr_encode, Payload};
use optileak::conceal::{ConcealmentPlan, Polarity, SequenceManifest};
use optileak::imaging::GrayImage;
use optileak::reconstruct::{recover_from_still, LocateMode, RecoverConfig};

fn main() -> anyhow::Result<()> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let payload = Payload::numeric("98066500000000000000")?;
    let truth = qr_encode(&payload);
    let object = truth.to_image(1);

    // Scale 8 keeps at least 3 px/module down to the 2 m preset (0.45x).
    let screen = GrayImage::filled(320, 240, 255);
    let plan = ConcealmentPlan::new(Polarity::Bright, 255, 5, (8, 4), 8, 60, None)?;
    let embedded = optileak::conceal::embed(&screen, &object, &plan)?;
    let manifest = SequenceManifest::describe(&plan, (object.width(), object.height()), 1);

    println!(
        "{:<9} {:>6} {:>6} {:>11} {:>9} {:>8} {:>10}",
        "preset", "scale", "blur", "captured", "px/module", "decoded", "accuracy"
    );
    for name in preset_names() {
        let model = CaptureModel {
            noise_sigma: 1.0,
            ..CaptureModel::with_preset(name, CaptureModel::identity(seed))?
        };
        let captured = capture_still(&embedded, &model)?;

        let mut config = RecoverConfig::new(
            LocateMode::Oracle { manifest: &manifest, capture_scale: model.scale },
            Polarity::Bright,
        );
        config.truth = Some(&truth);
        // A capture too degraded to sample at all counts the same as a
        // failed decode here.
        let (decoded, accuracy) = match recover_from_still(&captured.image, &config) {
            Ok(report) => (report.decode_success, report.module_accuracy_pct),
            Err(_) => (false, None),
        };
        println!(
            "{:<9} {:>6.2} {:>6.2} {:>5}x{:<5} {:>9.2} {:>8} {:>9.1}%",
            name,
            model.scale,
            model.blur_sigma,
            captured.image.width(),
            captured.image.height(),
            8.0 * model.scale,
            decoded,
            accuracy.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
