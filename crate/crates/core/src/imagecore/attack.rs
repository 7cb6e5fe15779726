use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{crop_with, flip, gaussian_blur, rotate_with, CropAnchor, FlipAxis, Image, ImageError};

/// A single attack transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackKind {
    Blur,
    Rotate,
    Crop,
    FlipH,
    FlipV,
    FlipBoth,
}

/// A family of attacks generated together; one suite per family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuiteKind {
    Blur,
    Rotate,
    Crop,
    Flip,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 4] = [SuiteKind::Blur, SuiteKind::Rotate, SuiteKind::Crop, SuiteKind::Flip];

    /// The token used in file names and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Blur => "blur",
            SuiteKind::Rotate => "rotate",
            SuiteKind::Crop => "crop",
            SuiteKind::Flip => "flip",
        }
    }

    /// Number of tests in the suite; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u32 {
        match self {
            SuiteKind::Flip => 3,
            _ => 9,
        }
    }

    /// The canonical attack at 1-based `step`.
    pub fn spec(self, step: u32) -> Option<AttackSpec> {
        if step == 0 || step > self.len() {
            return None;
        }
        let s = step as f64;
        let (kind, parameter) = match self {
            SuiteKind::Blur => (AttackKind::Blur, 5.0 + 10.0 * (s - 1.0)),
            SuiteKind::Rotate => (AttackKind::Rotate, 10.0 * s),
            SuiteKind::Crop => (AttackKind::Crop, 10.0 * s),
            SuiteKind::Flip => (
                [AttackKind::FlipH, AttackKind::FlipV, AttackKind::FlipBoth][step as usize - 1],
                0.0,
            ),
        };
        Some(AttackSpec {
            kind,
            parameter,
            step,
        })
    }

    pub fn specs(self) -> Vec<AttackSpec> {
        (1..=self.len()).filter_map(|s| self.spec(s)).collect()
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = ImageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ImageError::UnknownAttack(s.to_string()))
    }
}

impl AttackKind {
    pub fn suite(self) -> SuiteKind {
        match self {
            AttackKind::Blur => SuiteKind::Blur,
            AttackKind::Rotate => SuiteKind::Rotate,
            AttackKind::Crop => SuiteKind::Crop,
            AttackKind::FlipH | AttackKind::FlipV | AttackKind::FlipBoth => SuiteKind::Flip,
        }
    }
}

/// Knobs that change how attacks are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransformOptions {
    pub crop_anchor: CropAnchor,
    pub rotate_expand: bool,
}

/// One attack in a suite: what to do, how hard, and its 1-based position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub kind: AttackKind,
    /// Blur strength %, rotation degrees or crop %; unused for flips.
    pub parameter: f64,
    pub step: u32,
}

impl AttackSpec {
    pub fn apply(&self, img: &Image, opts: &TransformOptions) -> Result<Image, ImageError> {
        match self.kind {
            AttackKind::Blur => gaussian_blur(img, self.parameter),
            AttackKind::Rotate => Ok(rotate_with(img, self.parameter, opts.rotate_expand)),
            AttackKind::Crop => crop_with(img, self.parameter, opts.crop_anchor),
            AttackKind::FlipH => Ok(flip(img, FlipAxis::Horizontal)),
            AttackKind::FlipV => Ok(flip(img, FlipAxis::Vertical)),
            AttackKind::FlipBoth => Ok(flip(img, FlipAxis::Both)),
        }
    }
}
