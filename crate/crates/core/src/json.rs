//! JSON configuration shapes for the command-line tool.
//!
//! Every argument that takes structured input accepts either inline JSON or a
//! path to a JSON file.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cone_metric::ConeMetricSpace;
use crate::cones::SolidCone;
use crate::error::{Error, Result};
use crate::fixed_point::{Maps, Tolerances, DEFAULT_MAX_ITER, DEFAULT_TOL_CONV};
use crate::gauges::{matrix_from_rows, ConeGauge, ConeGaugeSpec, GaugeFunction};
use crate::vector::Vector;

/// Parses `arg` as JSON if it looks like JSON, otherwise reads it as a file.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['{', '[']) || trimmed.parse::<f64>().is_ok() {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

/// `x ↦ F·x + b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    #[serde(rename = "F")]
    pub matrix: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AffineMap {
    matrix: DMatrix<f64>,
    offset: DVector<f64>,
}

impl TryFrom<&AffineSpec> for AffineMap {
    type Error = Error;

    fn try_from(spec: &AffineSpec) -> Result<Self> {
        let matrix = matrix_from_rows(&spec.matrix)?;
        if spec.b.len() != matrix.nrows() {
            return Err(Error::dim(matrix.nrows(), spec.b.len()));
        }
        Vector::new(spec.b.clone())?;
        Ok(AffineMap {
            matrix,
            offset: DVector::from_column_slice(&spec.b),
        })
    }
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        AffineMap {
            matrix: DMatrix::identity(dim, dim),
            offset: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let y = &self.matrix * DVector::from_column_slice(x.as_slice()) + &self.offset;
        Vector::from_raw(y.iter().copied().collect())
    }

    /// The affine system solver used as preimage selector.
    pub fn preimage_selector(&self) -> Result<impl Fn(&Vector) -> Option<Vector> + Clone> {
        let lu = self.matrix.clone().lu();
        let det = lu.determinant();
        if det.is_nan() || det.abs() <= 1e-12 {
            return Err(Error::Domain(format!(
                "g is not invertible (det = {det:e})"
            )));
        }
        let offset = self.offset.clone();
        Ok(move |y: &Vector| {
            let rhs = DVector::from_column_slice(y.as_slice()) - &offset;
            let x = lu.solve(&rhs)?;
            Vector::new(x.iter().copied().collect()).ok()
        })
    }
}

/// Real metric on ℝⁿ.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    #[default]
    Euclidean,
    Sup,
    /// `|x − y|` on ℝ¹.
    Abs,
    /// `ξ_e ∘ d` for a cone distance `d`.
    Induced {
        cone: SolidCone,
        distance: ConeDistanceSpec,
        e: Vector,
    },
}

/// Cone-valued distance on ℝⁿ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeDistanceSpec {
    CoordinatewiseAbs,
    ScaledNorm { w: Vector },
}

impl ConeDistanceSpec {
    pub fn build(&self, cone: &SolidCone) -> Result<ConeMetricSpace<Vector>> {
        match self {
            ConeDistanceSpec::CoordinatewiseAbs => {
                Ok(ConeMetricSpace::coordinatewise_abs(cone.clone()))
            }
            ConeDistanceSpec::ScaledNorm { w } => {
                ConeMetricSpace::scaled_norm(cone.clone(), w.clone())
            }
        }
    }
}

/// Five entries, or one shared by all five slots.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiveOrOne<T> {
    Five([T; 5]),
    One(T),
}

impl<T: Clone> FiveOrOne<T> {
    pub fn expand(&self) -> [T; 5] {
        match self {
            FiveOrOne::Five(all) => all.clone(),
            FiveOrOne::One(g) => std::array::from_fn(|_| g.clone()),
        }
    }
}

fn default_tol() -> f64 {
    DEFAULT_TOL_CONV
}

fn default_iter() -> usize {
    DEFAULT_MAX_ITER
}

/// Configuration of `solve`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    #[serde(default)]
    pub metric: MetricSpec,
    pub f: AffineSpec,
    /// Identity when absent.
    #[serde(default)]
    pub g: Option<AffineSpec>,
    pub gauges: FiveOrOne<GaugeFunction>,
    pub x0: Vector,
    #[serde(default = "default_tol")]
    pub tol_conv: f64,
    #[serde(default = "default_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub weakly_compatible: bool,
}

/// Configuration of `solve-tvs`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TvsSolveConfig {
    pub cone: SolidCone,
    pub distance: ConeDistanceSpec,
    pub e: Vector,
    pub f: AffineSpec,
    #[serde(default)]
    pub g: Option<AffineSpec>,
    pub psi: FiveOrOne<ConeGaugeSpec>,
    pub x0: Vector,
    #[serde(default = "default_tol")]
    pub tol_conv: f64,
    #[serde(default = "default_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub weakly_compatible: bool,
}

/// Affine `f`, `g` on ℝⁿ with `n = x0.dim()`.
pub(crate) fn affine_maps(
    f: &AffineSpec,
    g: Option<&AffineSpec>,
    dim: usize,
) -> Result<Maps<'static, Vector, Vector>> {
    let f = AffineMap::try_from(f)?;
    let g = match g {
        Some(spec) => AffineMap::try_from(spec)?,
        None => AffineMap::identity(dim),
    };
    for m in [&f, &g] {
        if m.dim() != dim {
            return Err(Error::dim(dim, m.dim()));
        }
    }
    let pre = g.preimage_selector()?;
    Ok(Maps::self_maps(
        move |x: &Vector| f.apply(x),
        move |x: &Vector| g.apply(x),
        pre,
    ))
}

pub(crate) fn tolerances(tol_conv: f64, max_iter: usize) -> Tolerances {
    Tolerances { tol_conv, max_iter }
}

pub(crate) fn cone_gauges(
    specs: &FiveOrOne<ConeGaugeSpec>,
    cone: &SolidCone,
) -> Result<[ConeGauge; 5]> {
    let built: Vec<ConeGauge> = specs
        .expand()
        .iter()
        .map(|s| s.build(cone))
        .collect::<Result<_>>()?;
    Ok(built.try_into().expect("five gauges"))
}
