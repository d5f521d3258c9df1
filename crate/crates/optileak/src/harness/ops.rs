//! The conceal / capture / reconstruct / roundtrip commands.
//!
//! Each command reads and writes stage directories (see the module doc), so
//! the stages can run in one process or as separate invocations on the same
//! tree. `prepare_embedding` and `recover_frames` hold the shared logic the
//! sweep runner replays in memory without touching disk per trial.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::channel::{capture_still, capture_video, CaptureModel};
use crate::codecs::{qr_encode, Payload};
use crate::conceal::{
    builtin_profile, find_surface, frame_file_name, load_sequence, render_sequence, save_sequence,
    stealth_check, BlinkMode, BlinkSchedule, ConcealmentPlan, ObjectKind, SequenceManifest,
    StealthVerdict, MANIFEST_SCHEMA_VERSION,
};
use crate::imaging::{load_pnm, save_pgm, GrayImage};
use crate::reconstruct::{
    average_frames, detect_object_frames, dump_stages, reconstruct_stages, recover_from_sequence,
    recover_from_still, LocateMode, ReconParams, RecoverConfig,
};

use super::config::{CaptureSpec, ExperimentConfig, LocateChoice};
use super::run::{RunManifest, OBJECT_FILE, RUN_SCHEMA_VERSION};
use super::score::{pixel_accuracy, PIXEL_SUCCESS_THRESHOLD_PCT};
use super::HarnessError;

/// Contrast step used when a profile has no compliant delta and the caller
/// opted in with allow-at-risk. The smallest representable step: anything
/// larger only worsens the exposure, anything smaller embeds nothing.
pub const AT_RISK_DELTA: u8 = 1;

/// A fully resolved embedding, ready to render.
pub(super) struct PreparedEmbedding {
    pub screen: GrayImage,
    pub object: GrayImage,
    pub payload: Option<Payload>,
    pub plan: ConcealmentPlan,
    pub kind: ObjectKind,
    pub mode: BlinkMode,
    pub min_threshold_pct: f64,
    pub verdict: StealthVerdict,
    pub at_risk: bool,
    pub duration_frames: u32,
}

/// Resolve every optional knob in `cfg` against the perceptibility gate.
///
/// Delta defaults to the largest compliant value, or [`AT_RISK_DELTA`] when
/// the profile admits none. A non-passing verdict is an error unless
/// `allow_at_risk`; with it, the embedding proceeds flagged `at_risk`.
pub(super) fn prepare_embedding(
    cfg: &ExperimentConfig,
    allow_at_risk: bool,
) -> Result<PreparedEmbedding, HarnessError> {
    cfg.validate()?;
    let (object, payload) = cfg.object.build()?;
    let kind = cfg.object.kind();
    let profile = builtin_profile(kind, cfg.polarity, cfg.mode);
    let screen = cfg.screen.build(cfg.polarity)?;

    let delta = cfg.plan.delta.or_else(|| profile.max_compliant_delta()).unwrap_or(AT_RISK_DELTA);
    let (w, h) = (object.width() * cfg.plan.scale, object.height() * cfg.plan.scale);
    let origin = match cfg.plan.origin {
        Some(origin) => origin,
        None => {
            find_surface(&screen, w, h, cfg.polarity, 0)?.ok_or(HarnessError::NoSurface { w, h })?
        }
    };
    let base = cfg.plan.base.unwrap_or_else(|| screen.get(origin.0, origin.1));
    let blink = match cfg.mode {
        BlinkMode::Static => None,
        mode => Some(BlinkSchedule::for_mode(cfg.plan.display_fps, mode)?),
    };
    let plan = ConcealmentPlan::new(
        cfg.polarity,
        base,
        delta,
        origin,
        cfg.plan.scale,
        cfg.plan.display_fps,
        blink,
    )?;

    let verdict = stealth_check(&plan, &profile);
    if !verdict.is_pass() && !allow_at_risk {
        return Err(HarnessError::StealthViolation { verdict });
    }
    let duration_frames = cfg.plan.duration_frames.unwrap_or(match cfg.mode {
        BlinkMode::Static => 1,
        _ => cfg.plan.display_fps,
    });

    Ok(PreparedEmbedding {
        screen,
        object,
        payload,
        plan,
        kind,
        mode: cfg.mode,
        min_threshold_pct: profile.min_threshold_pct,
        verdict,
        at_risk: !verdict.is_pass(),
        duration_frames,
    })
}

impl PreparedEmbedding {
    pub fn run_manifest(&self) -> RunManifest {
        RunManifest {
            schema_version: RUN_SCHEMA_VERSION,
            object_kind: self.kind,
            payload: self.payload.clone(),
            polarity: self.plan.polarity(),
            mode: self.mode,
            min_threshold_pct: self.min_threshold_pct,
            verdict: self.verdict,
            at_risk: self.at_risk,
            capture: None,
            captured_frame_count: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcealOutcome {
    pub out_dir: PathBuf,
    pub delta: u8,
    pub contrast_pct: f64,
    pub origin: (usize, usize),
    pub verdict: StealthVerdict,
    pub at_risk: bool,
    pub frame_count: usize,
}

/// Render the configured embedding into `out_dir`: numbered frames,
/// `manifest.json`, the object mask, and `run.json`.
pub fn cmd_conceal(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    allow_at_risk: bool,
) -> Result<ConcealOutcome, HarnessError> {
    let prep = prepare_embedding(cfg, allow_at_risk)?;
    let sequence = render_sequence(&prep.screen, &prep.object, &prep.plan, prep.duration_frames)?;
    let manifest = SequenceManifest::describe(
        &prep.plan,
        (prep.object.width(), prep.object.height()),
        sequence.frame_count(),
    );
    save_sequence(out_dir, &sequence, &manifest)?;
    save_pgm(&prep.object, out_dir.join(OBJECT_FILE))?;
    prep.run_manifest().save(out_dir)?;

    Ok(ConcealOutcome {
        out_dir: out_dir.to_path_buf(),
        delta: prep.plan.delta(),
        contrast_pct: prep.plan.effective_contrast_pct(),
        origin: prep.plan.origin(),
        verdict: prep.verdict,
        at_risk: prep.at_risk,
        frame_count: sequence.frame_count(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CaptureOutcome {
    pub out_dir: PathBuf,
    pub frame_count: usize,
    pub model: CaptureModel,
}

/// Photograph the staged sequence in `input` into `out_dir`. A single frame
/// goes through the still path; anything longer is recorded as video at the
/// model's frame rate. The ground-truth files ride along for the receiver.
pub fn cmd_capture(
    input: &Path,
    spec: &CaptureSpec,
    seed: u64,
    out_dir: &Path,
) -> Result<CaptureOutcome, HarnessError> {
    let mut run = RunManifest::load(input)?;
    let (sequence, _) = load_sequence(input)?;
    let model = spec.resolve(seed)?;

    let frames = if sequence.frame_count() == 1 {
        vec![capture_still(&sequence.frames()[0], &model)?.image]
    } else {
        capture_video(&sequence, &model)?.frames
    };

    fs::create_dir_all(out_dir)?;
    for (index, frame) in frames.iter().enumerate() {
        save_pgm(frame, out_dir.join(frame_file_name(index)))?;
    }
    fs::copy(input.join("manifest.json"), out_dir.join("manifest.json"))?;
    fs::copy(input.join(OBJECT_FILE), out_dir.join(OBJECT_FILE))?;
    run.capture = Some(model.clone());
    run.captured_frame_count = Some(frames.len());
    run.save(out_dir)?;

    Ok(CaptureOutcome { out_dir: out_dir.to_path_buf(), frame_count: frames.len(), model })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructOutcome {
    pub object_kind: ObjectKind,
    /// QR only: whether a payload decoded and matched the recorded truth.
    pub decode_success: Option<bool>,
    pub payload: Option<Payload>,
    pub module_accuracy_pct: Option<f64>,
    /// Text/image only: cellwise agreement with the object mask.
    pub pixel_accuracy_pct: Option<f64>,
    pub attempts: Option<usize>,
    pub winning_attempt: Option<&'static str>,
    pub object_frames: Option<Vec<usize>>,
}

impl ReconstructOutcome {
    /// The recovery-rate success criterion: a matching decode for symbols,
    /// mask agreement of at least [`PIXEL_SUCCESS_THRESHOLD_PCT`] otherwise.
    pub fn success(&self) -> bool {
        match self.object_kind {
            ObjectKind::Qr => self.decode_success == Some(true),
            _ => self.pixel_accuracy_pct.is_some_and(|acc| acc >= PIXEL_SUCCESS_THRESHOLD_PCT),
        }
    }
}

/// Recover the object from captured frames held in memory.
///
/// `run.capture` tells the receiver the capture scale (identity when absent,
/// i.e. reconstructing a rendered directory that never left the screen).
/// Blink captures are reduced to a still by detecting and averaging the
/// object-bearing frames; static multi-frame captures average everything.
pub(super) fn recover_frames(
    frames: &[GrayImage],
    run: &RunManifest,
    manifest: &SequenceManifest,
    params: &ReconParams,
    locate_choice: LocateChoice,
    dump_dir: Option<&Path>,
    object_mask: Option<&GrayImage>,
) -> Result<ReconstructOutcome, HarnessError> {
    let capture_scale = run.capture.as_ref().map_or(1.0, |m| m.scale);
    let all: Vec<usize> = (0..frames.len()).collect();

    if run.object_kind == ObjectKind::Qr {
        let truth = run.payload.as_ref().map(qr_encode);
        let mut config = RecoverConfig::new(
            match locate_choice {
                LocateChoice::Oracle => LocateMode::Oracle { manifest, capture_scale },
                LocateChoice::Finder => LocateMode::Finder,
            },
            run.polarity,
        );
        config.params = params.clone();
        config.truth = truth.as_ref();
        config.dump_dir = dump_dir;

        let report = if frames.len() == 1 {
            recover_from_still(&frames[0], &config)?
        } else if run.mode == BlinkMode::Static {
            recover_from_still(&average_frames(frames, &all), &config)?
        } else {
            recover_from_sequence(frames, &config)?
        };
        let decode_success = report.decode_success
            && run
                .payload
                .as_ref()
                .is_none_or(|expected| report.payload.as_ref() == Some(expected));
        return Ok(ReconstructOutcome {
            object_kind: run.object_kind,
            decode_success: Some(decode_success),
            payload: report.payload,
            module_accuracy_pct: report.module_accuracy_pct,
            pixel_accuracy_pct: None,
            attempts: Some(report.attempts),
            winning_attempt: report.winning_attempt,
            object_frames: report.object_frames,
        });
    }

    let mask = object_mask.ok_or_else(|| HarnessError::MissingObject(PathBuf::new()))?;
    let (still, object_frames) = if frames.len() == 1 {
        (frames[0].clone(), None)
    } else if run.mode == BlinkMode::Static {
        (average_frames(frames, &all), None)
    } else {
        let detected =
            detect_object_frames(frames, crate::reconstruct::DEFAULT_DETECT_SENSITIVITY)?;
        (average_frames(frames, &detected), Some(detected))
    };
    let stages = reconstruct_stages(&still, params)?;
    if let Some(dir) = dump_dir {
        dump_stages(dir, &stages, 0)?;
    }
    let recon = &stages.last().expect("chain is never empty").image;
    let origin = (
        manifest.object_origin.0 as f64 * capture_scale,
        manifest.object_origin.1 as f64 * capture_scale,
    );
    let pitch = manifest.scale as f64 * capture_scale;
    let accuracy = pixel_accuracy(recon, mask, origin, pitch, run.polarity)?;

    Ok(ReconstructOutcome {
        object_kind: run.object_kind,
        decode_success: None,
        payload: None,
        module_accuracy_pct: None,
        pixel_accuracy_pct: Some(accuracy),
        attempts: None,
        winning_attempt: None,
        object_frames,
    })
}

/// Recover the hidden object from a staged directory (captured, or rendered
/// and never captured). Stage images land in `dump_dir` when given.
pub fn cmd_reconstruct(
    input: &Path,
    params: &ReconParams,
    locate_choice: LocateChoice,
    dump_dir: Option<&Path>,
) -> Result<ReconstructOutcome, HarnessError> {
    let run = RunManifest::load(input)?;
    let manifest_path = input.join("manifest.json");
    let manifest_json = fs::read_to_string(&manifest_path)
        .map_err(|_| HarnessError::MissingManifest(manifest_path))?;
    let manifest: SequenceManifest = serde_json::from_str(&manifest_json)?;
    if manifest.schema_version > MANIFEST_SCHEMA_VERSION {
        return Err(HarnessError::UnsupportedSchema(manifest.schema_version));
    }

    // Captured directories hold the camera's frame count, not the display's.
    let count = run.captured_frame_count.unwrap_or(manifest.frame_count);
    if count == 0 {
        return Err(HarnessError::EmptyCapture(input.to_path_buf()));
    }
    let frames = (0..count)
        .map(|index| Ok(load_pnm(input.join(frame_file_name(index)))?.into_gray()))
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mask = if run.object_kind == ObjectKind::Qr {
        None
    } else {
        let path = input.join(OBJECT_FILE);
        if !path.exists() {
            return Err(HarnessError::MissingObject(path));
        }
        Some(load_pnm(&path)?.into_gray())
    };

    recover_frames(&frames, &run, &manifest, params, locate_choice, dump_dir, mask.as_ref())
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripOutcome {
    pub pass: bool,
    pub conceal: ConcealOutcome,
    pub capture: CaptureOutcome,
    pub reconstruct: ReconstructOutcome,
}

/// Conceal, capture (seeded with `cfg.base_seed`), and reconstruct under
/// `out_dir`, reporting whether the recovery met the success criterion.
/// A failed recovery is a `pass: false` outcome, not an error.
pub fn cmd_roundtrip(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    allow_at_risk: bool,
    dump: bool,
) -> Result<RoundtripOutcome, HarnessError> {
    let conceal_dir = out_dir.join("conceal");
    let captured_dir = out_dir.join("captured");
    let conceal = cmd_conceal(cfg, &conceal_dir, allow_at_risk)?;
    let capture = cmd_capture(&conceal_dir, &cfg.capture, cfg.base_seed, &captured_dir)?;
    let dump_dir = dump.then(|| out_dir.join("stages"));
    let reconstruct = cmd_reconstruct(&captured_dir, &cfg.recon, cfg.locate, dump_dir.as_deref())?;

    Ok(RoundtripOutcome { pass: reconstruct.success(), conceal, capture, reconstruct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conceal::Polarity;
    use crate::harness::config::{ObjectSpec, ScreenSpec};

    fn baseline() -> ExperimentConfig {
        ExperimentConfig::baseline(Payload::numeric("31415926535897932384").unwrap())
    }

    #[test]
    fn conceal_defaults_to_largest_compliant_delta() {
        let dir = tempfile::tempdir().unwrap();
        let outcome = cmd_conceal(&baseline(), dir.path(), false).unwrap();
        assert_eq!(outcome.delta, 5);
        assert!(!outcome.at_risk);
        assert_eq!(outcome.frame_count, 1);
        for file in ["0000.pgm", "manifest.json", OBJECT_FILE, "run.json"] {
            assert!(dir.path().join(file).exists(), "missing {file}");
        }
    }

    #[test]
    fn conceal_refuses_infeasible_profile_without_opt_in() {
        let mut cfg = baseline();
        cfg.polarity = Polarity::Dark;
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_conceal(&cfg, dir.path(), false).unwrap_err();
        assert!(matches!(err, HarnessError::StealthViolation { .. }));

        let outcome = cmd_conceal(&cfg, dir.path(), true).unwrap();
        assert_eq!(outcome.delta, AT_RISK_DELTA);
        assert!(outcome.at_risk);
        assert!(RunManifest::load(dir.path()).unwrap().at_risk);
    }

    #[test]
    fn blink_plan_renders_scheduled_frames() {
        let mut cfg = baseline();
        cfg.mode = BlinkMode::Blink30;
        let dir = tempfile::tempdir().unwrap();
        let outcome = cmd_conceal(&cfg, dir.path(), false).unwrap();
        assert_eq!(outcome.frame_count, 60);

        let (sequence, manifest) = load_sequence(dir.path()).unwrap();
        assert_eq!(manifest.blink.as_ref().map(|b| b.period_frames), Some(2));
        let frames = sequence.frames();
        assert_ne!(frames[0], frames[1]);
        for (index, frame) in frames.iter().enumerate() {
            assert_eq!(*frame, frames[index % 2], "frame {index} off schedule");
        }
    }

    #[test]
    fn capture_requires_staged_input() {
        let dir = tempfile::tempdir().unwrap();
        let out = tempfile::tempdir().unwrap();
        let err = cmd_capture(dir.path(), &CaptureSpec::default(), 0, out.path()).unwrap_err();
        assert!(matches!(err, HarnessError::MissingRunManifest(_)));
    }

    #[test]
    fn identity_capture_copies_frames_bit_exactly() {
        let stage = tempfile::tempdir().unwrap();
        cmd_conceal(&baseline(), stage.path(), false).unwrap();
        let out = tempfile::tempdir().unwrap();
        let spec = CaptureSpec { preset: Some("identity".into()), ..CaptureSpec::default() };
        let outcome = cmd_capture(stage.path(), &spec, 3, out.path()).unwrap();
        assert_eq!(outcome.frame_count, 1);
        assert_eq!(
            std::fs::read(stage.path().join("0000.pgm")).unwrap(),
            std::fs::read(out.path().join("0000.pgm")).unwrap(),
        );
        assert_eq!(
            std::fs::read(stage.path().join("manifest.json")).unwrap(),
            std::fs::read(out.path().join("manifest.json")).unwrap(),
        );
        let run = RunManifest::load(out.path()).unwrap();
        assert_eq!(run.captured_frame_count, Some(1));
        assert_eq!(run.capture.map(|m| m.seed), Some(3));
    }

    #[test]
    fn noisy_capture_is_seed_deterministic_and_preset_sensitive() {
        let stage = tempfile::tempdir().unwrap();
        cmd_conceal(&baseline(), stage.path(), false).unwrap();
        let spec_near = CaptureSpec {
            preset: Some("50cm".into()),
            model: CaptureModel { noise_sigma: 2.0, ..CaptureModel::default() },
        };
        let spec_far = CaptureSpec { preset: Some("8m".into()), ..spec_near.clone() };

        let mut bytes = Vec::new();
        for spec in [&spec_near, &spec_near, &spec_far] {
            let out = tempfile::tempdir().unwrap();
            cmd_capture(stage.path(), spec, 7, out.path()).unwrap();
            bytes.push(std::fs::read(out.path().join("0000.pgm")).unwrap());
        }
        assert_eq!(bytes[0], bytes[1], "same seed and preset must reproduce");
        assert_ne!(bytes[0], bytes[2], "presets must change the capture");
    }

    #[test]
    fn reconstruct_recovers_payload_with_oracle_and_finder() {
        let cfg = baseline();
        let stage = tempfile::tempdir().unwrap();
        cmd_conceal(&cfg, stage.path(), false).unwrap();
        let out = tempfile::tempdir().unwrap();
        cmd_capture(stage.path(), &cfg.capture, 0, out.path()).unwrap();

        for locate in [LocateChoice::Oracle, LocateChoice::Finder] {
            let outcome = cmd_reconstruct(out.path(), &cfg.recon, locate, None).unwrap();
            assert_eq!(outcome.decode_success, Some(true), "{locate:?}");
            assert_eq!(outcome.payload, Some(Payload::numeric("31415926535897932384").unwrap()));
        }
    }

    #[test]
    fn reconstruct_requires_frame_manifest() {
        let stage = tempfile::tempdir().unwrap();
        cmd_conceal(&baseline(), stage.path(), false).unwrap();
        std::fs::remove_file(stage.path().join("manifest.json")).unwrap();
        let err =
            cmd_reconstruct(stage.path(), &ReconParams::default(), LocateChoice::Oracle, None)
                .unwrap_err();
        assert!(matches!(err, HarnessError::MissingManifest(_)));
    }

    #[test]
    fn roundtrip_smoke_passes_and_dumps_stages() {
        let out = tempfile::tempdir().unwrap();
        let outcome = cmd_roundtrip(&baseline(), out.path(), false, true).unwrap();
        assert!(outcome.pass);
        assert_eq!(outcome.conceal.delta, 5);
        assert_eq!(outcome.reconstruct.winning_attempt, Some("main"));
        assert!(out.path().join("stages").join("01-desaturate.pgm").exists());
    }

    #[test]
    fn roundtrip_reports_failure_without_error_under_heavy_noise() {
        let mut cfg = baseline();
        cfg.capture.model.noise_sigma = 64.0;
        let out = tempfile::tempdir().unwrap();
        let outcome = cmd_roundtrip(&cfg, out.path(), false, false).unwrap();
        assert!(!outcome.pass);
        assert_eq!(outcome.reconstruct.decode_success, Some(false));
    }

    #[test]
    fn roundtrip_accepts_empty_numeric_payload() {
        let cfg = ExperimentConfig::baseline(Payload::numeric("").unwrap());
        let out = tempfile::tempdir().unwrap();
        let outcome = cmd_roundtrip(&cfg, out.path(), false, false).unwrap();
        assert!(outcome.pass);
        assert_eq!(outcome.reconstruct.payload, Some(Payload::numeric("").unwrap()));
    }

    #[test]
    fn text_object_roundtrip_scores_pixel_accuracy() {
        let mut cfg = baseline();
        cfg.object = ObjectSpec::Text { text: "OK".into(), scale: 1 };
        let out = tempfile::tempdir().unwrap();
        let outcome = cmd_roundtrip(&cfg, out.path(), false, false).unwrap();
        assert!(outcome.pass);
        assert_eq!(outcome.reconstruct.decode_success, None);
        assert!(outcome.reconstruct.pixel_accuracy_pct.unwrap() >= PIXEL_SUCCESS_THRESHOLD_PCT);
    }

    #[test]
    fn rect_blink_video_detects_and_scores() {
        let mut cfg = baseline();
        cfg.object = ObjectSpec::Rect { size: 8 };
        cfg.mode = BlinkMode::Blink30;
        cfg.plan.display_fps = 120;
        cfg.screen = ScreenSpec { width: 160, height: 120, ..ScreenSpec::default() };
        cfg.capture.model.camera_fps = 40;
        cfg.capture.model.exposure = Some(1.0 / 120.0);

        let out = tempfile::tempdir().unwrap();
        let outcome = cmd_roundtrip(&cfg, out.path(), false, false).unwrap();
        assert!(outcome.pass);
        assert_eq!(outcome.capture.frame_count, 40);
        let detected = outcome.reconstruct.object_frames.unwrap();
        assert!(detected.iter().all(|k| k % 4 == 0), "camera frame 4k maps to display 12k");
        assert!(detected.len() >= 3);
    }
}
