//! The enhancement chain: equalize, unsharp, optional supplementary kernels.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::imaging::{
    convolve, desaturate, emboss3, equalize_histogram, save_pgm, sharpen3, strong5, unsharp5,
    unsharp_mask, GrayImage, Kernel, RgbImage,
};

use super::ReconError;

/// How the unsharp stage runs: the fixed 5x5 convolution, or the parametric
/// Gaussian form with a large radius and strong amount.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnsharpConfig {
    FixedKernel,
    Parametric { radius: f64, amount: f64, threshold: u8 },
}

impl UnsharpConfig {
    pub const DEFAULT_RADIUS: f64 = 40.0;
    pub const DEFAULT_AMOUNT: f64 = 4.0;
    pub const DEFAULT_THRESHOLD: u8 = 0;

    fn validate(&self) -> Result<(), ReconError> {
        if let UnsharpConfig::Parametric { radius, amount, threshold } = *self {
            if !(30.0..=50.0).contains(&radius) {
                return Err(ReconError::ParamOutOfRange { what: "unsharp radius", value: radius });
            }
            if !(3.5..=5.0).contains(&amount) {
                return Err(ReconError::ParamOutOfRange { what: "unsharp amount", value: amount });
            }
            if threshold > 10 {
                return Err(ReconError::ParamOutOfRange {
                    what: "unsharp threshold",
                    value: f64::from(threshold),
                });
            }
        }
        Ok(())
    }

    fn apply(&self, img: &GrayImage) -> GrayImage {
        match *self {
            UnsharpConfig::FixedKernel => {
                convolve(img, &unsharp5()).expect("5x5 kernel fits pipeline images")
            }
            UnsharpConfig::Parametric { radius, amount, threshold } => {
                unsharp_mask(img, radius, amount, threshold)
            }
        }
    }
}

impl Default for UnsharpConfig {
    fn default() -> Self {
        UnsharpConfig::Parametric {
            radius: Self::DEFAULT_RADIUS,
            amount: Self::DEFAULT_AMOUNT,
            threshold: Self::DEFAULT_THRESHOLD,
        }
    }
}

/// Extra sharpening convolutions tried when the main chain is not enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupplementaryKernel {
    Sharpen3,
    Strong5,
    Emboss3,
}

impl SupplementaryKernel {
    /// The canonical retry order when decoding fails after the main chain.
    pub const RETRY_ORDER: [SupplementaryKernel; 3] =
        [SupplementaryKernel::Sharpen3, SupplementaryKernel::Strong5, SupplementaryKernel::Emboss3];

    pub fn name(self) -> &'static str {
        match self {
            SupplementaryKernel::Sharpen3 => "sharpen3",
            SupplementaryKernel::Strong5 => "strong5",
            SupplementaryKernel::Emboss3 => "emboss3",
        }
    }

    pub fn kernel(self) -> Kernel {
        match self {
            SupplementaryKernel::Sharpen3 => sharpen3(),
            SupplementaryKernel::Strong5 => strong5(),
            SupplementaryKernel::Emboss3 => emboss3(),
        }
    }
}

/// Which enhancement stages run and with what parameters. The default is the
/// main chain: equalize on, parametric unsharp (radius 40, amount 4.0,
/// threshold 0), no supplementary kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconParams {
    pub equalize: bool,
    pub unsharp: Option<UnsharpConfig>,
    pub supplementary: Vec<SupplementaryKernel>,
}

impl Default for ReconParams {
    fn default() -> Self {
        ReconParams {
            equalize: true,
            unsharp: Some(UnsharpConfig::default()),
            supplementary: vec![],
        }
    }
}

impl ReconParams {
    pub fn validate(&self) -> Result<(), ReconError> {
        if let Some(u) = &self.unsharp {
            u.validate()?;
        }
        for (i, k) in self.supplementary.iter().enumerate() {
            if self.supplementary[..i].contains(k) {
                return Err(ReconError::DuplicateKernel(k.name()));
            }
        }
        Ok(())
    }
}

/// One enhancement stage's labeled output.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    pub image: GrayImage,
}

/// Run the chain, keeping every stage's output. The first stage is always
/// "desaturate" (the unchanged input for images that are already grayscale),
/// then equalize, unsharp, and each supplementary kernel in order; each stage
/// feeds the next.
pub fn reconstruct_stages(img: &GrayImage, params: &ReconParams) -> Result<Vec<Stage>, ReconError> {
    params.validate()?;
    let mut stages = vec![Stage { name: "desaturate", image: img.clone() }];
    let mut current = img.clone();
    if params.equalize {
        current = equalize_histogram(&current);
        stages.push(Stage { name: "equalize", image: current.clone() });
    }
    if let Some(unsharp) = &params.unsharp {
        current = unsharp.apply(&current);
        stages.push(Stage { name: "unsharp", image: current.clone() });
    }
    for kernel in &params.supplementary {
        current = convolve(&current, &kernel.kernel()).map_err(ReconError::Image)?;
        stages.push(Stage { name: kernel.name(), image: current.clone() });
    }
    Ok(stages)
}

/// Run the chain and return the final image.
pub fn reconstruct(img: &GrayImage, params: &ReconParams) -> Result<GrayImage, ReconError> {
    Ok(reconstruct_stages(img, params)?.pop().expect("chain has >= 1 stage").image)
}

/// Color inputs are desaturated first; the rest is identical.
pub fn reconstruct_color(img: &RgbImage, params: &ReconParams) -> Result<GrayImage, ReconError> {
    reconstruct(&desaturate(img), params)
}

/// Write one PGM per stage, numbered by position: `01-desaturate.pgm`,
/// `02-equalize.pgm`, ... Pass an offset when appending retry stages to an
/// already-dumped chain.
pub fn dump_stages(
    dir: impl AsRef<Path>,
    stages: &[Stage],
    index_offset: usize,
) -> Result<(), ReconError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    for (i, stage) in stages.iter().enumerate() {
        let path = dir.join(format!("{:02}-{}.pgm", index_offset + i + 1, stage.name));
        save_pgm(&stage.image, path)?;
    }
    Ok(())
}
