//! Command configs. Every struct rejects unknown keys.

use lingrowth::bv1d::BvSpec;
use lingrowth::integrand::{AnisotropySpec, IntegrandSpec};
use lingrowth::measure::{CellGrid, MeasureSpec, PairSpec};
use lingrowth::solver::SolveConfig;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub fn read<T: DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

/// serde_json errors already carry `line L column C`.
pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    pub integrand: IntegrandSpec,
    #[serde(default)]
    pub u0: [f64; 2],
    #[serde(default)]
    pub measures: Option<PairSpec>,
    pub function: BvSpec,
    /// Evaluates `w + k·sign·1_A` for `k = 1..k_max` as well.
    #[serde(default)]
    pub series: Option<SeriesConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub intervals: Vec<(f64, f64)>,
    #[serde(default = "one")]
    pub sign: f64,
    #[serde(default = "ten")]
    pub k_max: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeConfig {
    pub integrand: IntegrandSpec,
    #[serde(default)]
    pub u0: [f64; 2],
    /// Needed only when `measures` is absent.
    #[serde(default)]
    pub domain: Option<[f64; 2]>,
    #[serde(default)]
    pub measures: Option<PairSpec>,
    #[serde(default)]
    pub solver: SolveConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcConfig {
    pub mu1: MeasureSpec,
    #[serde(default)]
    pub mu2: Option<MeasureSpec>,
    /// Defaults to the Euclidean norm.
    #[serde(default)]
    pub anisotropy: Option<AnisotropySpec>,
    /// Without a constant the report gives the smallest one the family
    /// cannot falsify and the command always succeeds.
    #[serde(default)]
    pub constant: Option<f64>,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub calibration: Option<CalibrationConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    /// 1D: number of uniform interior breakpoints.
    pub intervals: Option<usize>,
    /// 2D: facet length bound.
    pub h: Option<f64>,
    pub rectangles: Option<usize>,
    pub blobs: Option<BlobConfig>,
    pub polar_balls: Option<PolarBallConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobConfig {
    pub n: [usize; 2],
    pub count: usize,
    pub max_cells: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarBallConfig {
    /// Balls of the polar of this anisotropy; defaults to the checked one.
    #[serde(default)]
    pub anisotropy: Option<AnisotropySpec>,
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    #[serde(default = "n_theta")]
    pub n_theta: usize,
}

/// A field `σ` with `div σ = measure`; 1D takes a BV `field`, 2D a
/// staggered grid field.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CalibrationConfig {
    OneD {
        measure: MeasureSpec,
        field: BvSpec,
    },
    TwoD {
        measure: MeasureSpec,
        grid: CellGrid,
        sx: Vec<f64>,
        sy: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}
fn ten() -> usize {
    10
}
fn n_theta() -> usize {
    256
}
