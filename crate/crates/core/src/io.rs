//! JSON documents for states, tomograms and channels, and the number format
//! shared by CSV output.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{CMatrix, DensityMatrix, C64};
use crate::su2::HalfInt;
use crate::symbols::{Frame, Outcome, OutcomeSpace, Tomogram};

/// 17 significant digits in scientific notation, enough to round-trip any
/// `f64`; independent of locale.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Real table given either flat (row-major) or as a list of rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealTable {
    Flat(Vec<f64>),
    Rows(Vec<Vec<f64>>),
}

impl RealTable {
    fn into_flat(self, rows: usize, cols: usize, what: &str) -> Result<Vec<f64>> {
        let flat = match self {
            RealTable::Flat(v) => v,
            RealTable::Rows(r) => {
                if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                    return domain(format!("{what}: expected {rows} rows of {cols} entries"));
                }
                r.concat()
            }
        };
        if flat.len() != rows * cols {
            return domain(format!("{what}: {} entries, expected {}", flat.len(), rows * cols));
        }
        Ok(flat)
    }
}

/// `{ "dim": n, "dims": [...], "re": [...], "im": [...] }`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub re: RealTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<RealTable>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &CMatrix, dims: Option<Vec<usize>>) -> Self {
        let re = m.as_slice().iter().map(|z| z.re).collect();
        let im: Vec<f64> = m.as_slice().iter().map(|z| z.im).collect();
        let im = im.iter().any(|&x| x != 0.0).then_some(RealTable::Flat(im));
        MatrixDoc { dim: m.rows(), dims, re: RealTable::Flat(re), im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        if n == 0 {
            return domain("matrix dimension must be positive");
        }
        let re = self.re.clone().into_flat(n, n, "re")?;
        let im = match &self.im {
            Some(t) => t.clone().into_flat(n, n, "im")?,
            None => vec![0.0; n * n],
        };
        if re.iter().chain(&im).any(|x| !x.is_finite()) {
            return domain("matrix entries must be finite");
        }
        CMatrix::from_vec(n, n, re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect())
    }

    /// Validated density matrix; `dims` defaults to `[dim]`.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?, self.dims.clone().unwrap_or_else(|| vec![self.dim]))
    }
}

pub fn density_to_json(rho: &DensityMatrix) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MatrixDoc::from_matrix(rho.matrix(), Some(rho.dims().to_vec())))?)
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<MatrixDoc>(text)?.to_density()
}

/// Tomogram document. Exactly one of `j_twice` (spin outcomes `m = j..-j`)
/// and `dims` (lexicographic tuples) is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomogramDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_twice: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub outcomes: Vec<String>,
    pub frames: Vec<Frame>,
    /// `values[outcome][frame]`.
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_im: Option<Vec<Vec<f64>>>,
}

fn outcome_label(o: &Outcome) -> String {
    match o {
        Outcome::Spin(m) => m.to_string(),
        Outcome::Tuple(t) => t.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(""),
    }
}

impl TomogramDoc {
    pub fn from_tomogram(t: &Tomogram) -> Self {
        let (j_twice, dims) = match t.space() {
            OutcomeSpace::Spin { j } => (Some(j.twice()), None),
            OutcomeSpace::Product { dims } => (None, Some(dims.clone())),
        };
        let values = t.complex_values().iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let has_im = t.complex_values().iter().flatten().any(|z| z.im != 0.0);
        let values_im =
            has_im.then(|| t.complex_values().iter().map(|r| r.iter().map(|z| z.im).collect()).collect());
        TomogramDoc {
            j_twice,
            dims,
            outcomes: t.space().labels().iter().map(outcome_label).collect(),
            frames: t.frames().to_vec(),
            values,
            values_im,
        }
    }

    pub fn to_tomogram(&self) -> Result<Tomogram> {
        let space = match (self.j_twice, &self.dims) {
            (Some(tj), None) if tj >= 0 => OutcomeSpace::Spin { j: HalfInt::from_twice(tj) },
            (None, Some(d)) if !d.is_empty() && !d.contains(&0) => OutcomeSpace::Product { dims: d.clone() },
            _ => return domain("tomogram needs exactly one of a non-negative \"j_twice\" or non-empty \"dims\""),
        };
        if !self.outcomes.is_empty() && self.outcomes.len() != space.len() {
            return domain(format!("{} outcome labels, expected {}", self.outcomes.len(), space.len()));
        }
        let im = match &self.values_im {
            Some(im) => im.clone(),
            None => self.values.iter().map(|r| vec![0.0; r.len()]).collect(),
        };
        if im.len() != self.values.len() || im.iter().zip(&self.values).any(|(a, b)| a.len() != b.len()) {
            return domain("\"values_im\" shape differs from \"values\"");
        }
        let values: Vec<Vec<C64>> = self
            .values
            .iter()
            .zip(&im)
            .map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)).collect())
            .collect();
        if values.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("tomogram values must be finite");
        }
        Tomogram::new(space, self.frames.clone(), values)
    }
}

pub fn tomogram_to_json(t: &Tomogram) -> Result<String> {
    Ok(serde_json::to_string_pretty(&TomogramDoc::from_tomogram(t))?)
}

pub fn tomogram_from_json(text: &str) -> Result<Tomogram> {
    serde_json::from_str::<TomogramDoc>(text)?.to_tomogram()
}
