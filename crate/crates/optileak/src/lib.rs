//! Low-contrast screen-to-camera covert channel toolkit.
//!
//! The pipeline has four stages, each a module of this crate:
//!
//! 1. [`codecs`] turns a payload into a visual object: a 29x29 QR symbol
//!    (version 3, error correction level M, Reed-Solomon over GF(256)),
//!    rasterized text, or a binarized bitmap.
//! 2. [`conceal`] embeds the object on a bright or dark screen surface at a
//!    contrast delta kept strictly below human-detection thresholds, either
//!    statically or blinking in a periodic subset of display frames.
//! 3. [`channel`] simulates the camera capture: projective warp, downscale,
//!    optical blur, gamma, sensor noise, and temporal exposure integration
//!    for video.
//! 4. [`reconstruct`] recovers the payload: enhancement (desaturation,
//!    histogram equalization, unsharp masking, supplementary sharpening),
//!    blink-frame detection, symbol localization, grid sampling, and decode.
//!
//! [`imaging`] holds the shared raster types and processing primitives, and
//! [`harness`] wires everything into an experiment runner with on-disk frame
//! directories, JSON manifests, and CSV sweep reports.
//!
//! Each major capability has a runnable program under `examples/`; the
//! `optileak` binary exposes the same flows as subcommands.

pub mod channel;
pub mod codecs;
pub mod conceal;
pub mod harness;
pub mod imaging;
pub mod reconstruct;
