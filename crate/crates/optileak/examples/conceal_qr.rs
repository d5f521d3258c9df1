//! Hide a QR symbol on a textured screen and stage it to disk: numbered
//! frames plus the ground-truth manifest a receiver (or a later `capture`
//! run) needs. Prints how little the embedded frame differs from the clean
//! screen.
//!
//! Run with: cargo run --example conceal_qr [-- <digits>]

use optileak::codecs::{qr_encode, Payload};
use optileak::conceal::{
    builtin_profile, embed, find_surface, render_sequence, save_sequence, stealth_check, BlinkMode,
    ConcealmentPlan, ObjectKind, Polarity, SequenceManifest,
};
use optileak::imaging::GrayImage;

fn main() -> anyhow::Result<()> {
    let digits = std::env::args().nth(1).unwrap_or_else(|| "20200825".into());
    let payload = Payload::numeric(digits)?;
    let object = qr_encode(&payload).to_image(1);

    // A document-like screen: white page, dark header band, a sidebar.
    let mut screen = GrayImage::filled(400, 300, 255);
    for x in 0..screen.width() {
        for y in 0..24 {
            screen.set(x, y, 64);
        }
    }
    for x in 0..60 {
        for y in 24..screen.height() {
            screen.set(x, y, 230);
        }
    }

    let profile = builtin_profile(ObjectKind::Qr, Polarity::Bright, BlinkMode::Static);
    let delta = profile.max_compliant_delta().expect("bright static QR is feasible");
    let scale = 4;
    let side = object.width() * scale;
    let origin = find_surface(&screen, side, side, Polarity::Bright, 0)?
        .expect("the page area fits the symbol");
    println!("payload {payload:?}");
    println!("placing {side}x{side} px symbol at {origin:?}, delta {delta}");

    let plan = ConcealmentPlan::new(Polarity::Bright, 255, delta, origin, scale, 60, None)?;
    println!("stealth gate: {}", stealth_check(&plan, &profile));

    // Count how far the embedded frame strays from the clean screen: every
    // changed pixel moves by exactly delta, and only under ink modules.
    let embedded = embed(&screen, &object, &plan)?;
    let changed = screen.data().iter().zip(embedded.data()).filter(|(a, b)| a != b).count();
    let max_diff =
        screen.data().iter().zip(embedded.data()).map(|(a, b)| a.abs_diff(*b)).max().unwrap();
    println!(
        "{changed} of {} pixels changed ({:.2}%), none by more than {max_diff}/255 luma steps",
        screen.data().len(),
        100.0 * changed as f64 / screen.data().len() as f64,
    );

    let sequence = render_sequence(&screen, &object, &plan, 1)?;
    let manifest = SequenceManifest::describe(&plan, (object.width(), object.height()), 1);
    let out = std::env::temp_dir().join("optileak-conceal-qr");
    save_sequence(&out, &sequence, &manifest)?;
    println!("staged to {}", out.display());
    for entry in std::fs::read_dir(&out)? {
        println!("  {}", entry?.file_name().to_string_lossy());
    }
    Ok(())
}
