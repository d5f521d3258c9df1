//! End-to-end payload recovery from captured stills and videos.

use std::path::Path;

use crate::codecs::{qr_decode, Payload, SymbolMatrix};
use crate::conceal::Polarity;
use crate::imaging::{convolve, GrayImage};

use super::detect::{detect_object_frames, DEFAULT_DETECT_SENSITIVITY};
use super::locate::{locate_symbol, LocateMode};
use super::pipeline::{dump_stages, reconstruct_stages, ReconParams, Stage, SupplementaryKernel};
use super::sample::{module_accuracy, sample_symbol};
use super::ReconError;

/// Everything the recovery routine needs besides the captured pixels.
#[derive(Debug, Clone)]
pub struct RecoverConfig<'a> {
    pub params: ReconParams,
    /// Kernels to retry with, one per extra attempt, each applied on top of
    /// the main chain's output (not stacked on each other).
    pub retry_kernels: Vec<SupplementaryKernel>,
    pub locate: LocateMode<'a>,
    /// The embedding polarity; dark-on-dark captures carry the symbol with
    /// ink brighter than background, so the sampled matrix is inverted first.
    pub polarity: Polarity,
    /// Ground-truth modules; enables module-accuracy reporting.
    pub truth: Option<&'a SymbolMatrix>,
    pub dump_dir: Option<&'a Path>,
    pub detect_sensitivity: f64,
}

impl<'a> RecoverConfig<'a> {
    pub fn new(locate: LocateMode<'a>, polarity: Polarity) -> Self {
        Self {
            params: ReconParams::default(),
            retry_kernels: SupplementaryKernel::RETRY_ORDER.to_vec(),
            locate,
            polarity,
            truth: None,
            dump_dir: None,
            detect_sensitivity: DEFAULT_DETECT_SENSITIVITY,
        }
    }
}

/// Outcome of a recovery run. A failed decode is a report, not an error;
/// errors are reserved for inputs the pipeline cannot process at all.
#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub payload: Option<Payload>,
    pub decode_success: bool,
    /// Best module accuracy over all attempts; present only with ground truth.
    pub module_accuracy_pct: Option<f64>,
    /// Attempts consumed: 1 for the main chain, +1 per retry kernel tried.
    pub attempts: usize,
    /// Name of the attempt that decoded ("main" or a kernel name).
    pub winning_attempt: Option<&'static str>,
    /// Frames the blink detector selected (video path only).
    pub object_frames: Option<Vec<usize>>,
}

pub fn recover_from_still(
    img: &GrayImage,
    config: &RecoverConfig,
) -> Result<RecoveryReport, ReconError> {
    let stages = reconstruct_stages(img, &config.params)?;
    if let Some(dir) = config.dump_dir {
        dump_stages(dir, &stages, 0)?;
    }
    let base = &stages.last().expect("chain is never empty").image;

    let mut attempts = 0usize;
    let mut best_accuracy: Option<f64> = None;
    let mut sampled_any = false;
    let mut last_error: Option<ReconError> = None;

    let plans = std::iter::once(None).chain(config.retry_kernels.iter().copied().map(Some));
    for kernel in plans {
        attempts += 1;
        let retried;
        let image = match kernel {
            None => base,
            Some(k) => {
                retried = convolve(base, &k.kernel())?;
                if let Some(dir) = config.dump_dir {
                    let stage = Stage { name: k.name(), image: retried.clone() };
                    dump_stages(dir, std::slice::from_ref(&stage), stages.len())?;
                }
                &retried
            }
        };

        let matrix =
            match locate_symbol(image, config.locate).and_then(|g| sample_symbol(image, &g)) {
                Ok(m) => m,
                Err(e) => {
                    last_error = Some(e);
                    continue;
                }
            };
        let matrix = match config.polarity {
            Polarity::Bright => matrix,
            Polarity::Dark => matrix.invert(),
        };
        sampled_any = true;
        if let Some(truth) = config.truth {
            let acc = module_accuracy(&matrix, truth);
            best_accuracy = Some(best_accuracy.map_or(acc, |b| b.max(acc)));
        }
        if let Ok(payload) = qr_decode(&matrix) {
            return Ok(RecoveryReport {
                payload: Some(payload),
                decode_success: true,
                module_accuracy_pct: best_accuracy,
                attempts,
                winning_attempt: Some(kernel.map_or("main", |k| k.name())),
                object_frames: None,
            });
        }
    }

    if !sampled_any {
        return Err(last_error.expect("at least one attempt ran"));
    }
    Ok(RecoveryReport {
        payload: None,
        decode_success: false,
        module_accuracy_pct: best_accuracy,
        attempts,
        winning_attempt: None,
        object_frames: None,
    })
}

/// Video path: pick out the frames carrying the object, average them, then
/// run the still path on the average.
pub fn recover_from_sequence(
    frames: &[GrayImage],
    config: &RecoverConfig,
) -> Result<RecoveryReport, ReconError> {
    let detected = detect_object_frames(frames, config.detect_sensitivity)?;
    if detected.is_empty() {
        return Err(ReconError::NoObjectFrames);
    }
    let averaged = average_frames(frames, &detected);
    let mut report = recover_from_still(&averaged, config)?;
    report.object_frames = Some(detected);
    Ok(report)
}

pub(crate) fn average_frames(frames: &[GrayImage], indices: &[usize]) -> GrayImage {
    let (w, h) = (frames[indices[0]].width(), frames[indices[0]].height());
    let mut acc = vec![0.0f64; w * h];
    for &i in indices {
        for (a, &v) in acc.iter_mut().zip(frames[i].data()) {
            *a += f64::from(v);
        }
    }
    let n = indices.len() as f64;
    let data = acc.iter().map(|&s| (s / n).round().min(255.0) as u8).collect();
    GrayImage::new(w, h, data).expect("accumulator matches frame size")
}
