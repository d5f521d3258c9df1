//! Picking the frames that actually carry the object out of a recording.

use crate::imaging::GrayImage;

use super::ReconError;

/// Default multiple of the median score a frame must exceed to count as
/// carrying the object.
pub const DEFAULT_DETECT_SENSITIVITY: f64 = 3.0;

fn median_f64(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Indices of frames deviating from the per-pixel median frame: a frame is
/// returned when its mean absolute deviation exceeds `sensitivity` times the
/// median of all frames' deviations. An all-identical recording returns the
/// empty set.
pub fn detect_object_frames(
    frames: &[GrayImage],
    sensitivity: f64,
) -> Result<Vec<usize>, ReconError> {
    if frames.len() < 3 {
        return Err(ReconError::TooFewFrames { got: frames.len() });
    }
    let (w, h) = (frames[0].width(), frames[0].height());
    for (index, f) in frames.iter().enumerate() {
        if f.width() != w || f.height() != h {
            return Err(ReconError::MixedFrameSizes {
                index,
                w: f.width(),
                h: f.height(),
                ew: w,
                eh: h,
            });
        }
    }

    // Per-pixel median frame, i.e. the background most frames agree on.
    let n = frames.len();
    let mut median = vec![0.0f64; w * h];
    let mut column = vec![0u8; n];
    for (i, m) in median.iter_mut().enumerate() {
        for (j, f) in frames.iter().enumerate() {
            column[j] = f.data()[i];
        }
        column.sort_unstable();
        *m = if n % 2 == 1 {
            f64::from(column[n / 2])
        } else {
            (f64::from(column[n / 2 - 1]) + f64::from(column[n / 2])) / 2.0
        };
    }

    let scores: Vec<f64> = frames
        .iter()
        .map(|f| {
            f.data().iter().zip(&median).map(|(&v, &m)| (f64::from(v) - m).abs()).sum::<f64>()
                / (w * h) as f64
        })
        .collect();

    let mut sorted = scores.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let threshold = sensitivity * median_f64(&sorted);

    Ok(scores.iter().enumerate().filter(|(_, &s)| s > threshold).map(|(i, _)| i).collect())
}

#[cfg(test)]
mod tests {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::channel::{capture_video, CaptureModel};
    use crate::conceal::FrameSequence;
    use crate::imaging::GrayImage;

    use super::*;

    fn synthetic_sequence(total: usize, object_frames: &[usize], delta: u8) -> Vec<GrayImage> {
        let mut frames = Vec::with_capacity(total);
        for i in 0..total {
            let mut frame = GrayImage::filled(40, 30, 255);
            if object_frames.contains(&i) {
                for y in 8..24 {
                    for x in 10..30 {
                        frame.set(x, y, 255 - delta);
                    }
                }
            }
            frames.push(frame);
        }
        frames
    }

    #[test]
    fn finds_exact_object_frames_without_noise() {
        let truth = vec![10, 40, 70, 100];
        let frames = synthetic_sequence(120, &truth, 5);
        assert_eq!(detect_object_frames(&frames, DEFAULT_DETECT_SENSITIVITY).unwrap(), truth);
    }

    #[test]
    fn survives_unit_noise_without_false_positives() {
        let truth = vec![5, 17, 29];
        for seed in 0..5 {
            let display = FrameSequence::new(60, synthetic_sequence(40, &truth, 5)).unwrap();
            let model =
                CaptureModel { camera_fps: 60, noise_sigma: 1.0, seed, ..CaptureModel::default() };
            let captured = capture_video(&display, &model).unwrap();
            assert_eq!(
                detect_object_frames(&captured.frames, DEFAULT_DETECT_SENSITIVITY).unwrap(),
                truth,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn identical_frames_give_empty_set() {
        let frames = vec![GrayImage::filled(16, 16, 128); 12];
        assert_eq!(detect_object_frames(&frames, 3.0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn too_few_frames_is_an_error() {
        let frames = vec![GrayImage::filled(4, 4, 0); 2];
        assert!(matches!(
            detect_object_frames(&frames, 3.0),
            Err(ReconError::TooFewFrames { got: 2 })
        ));
    }

    #[test]
    fn permutation_covariant() {
        let truth = vec![3, 11, 19];
        let frames = synthetic_sequence(24, &truth, 5);
        let mut order: Vec<usize> = (0..frames.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(2));
        let shuffled: Vec<GrayImage> = order.iter().map(|&i| frames[i].clone()).collect();
        let mut expected: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, &src)| truth.contains(&src))
            .map(|(dst, _)| dst)
            .collect();
        expected.sort_unstable();
        assert_eq!(detect_object_frames(&shuffled, 3.0).unwrap(), expected);
    }
}
