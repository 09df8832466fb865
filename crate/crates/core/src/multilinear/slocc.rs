use nalgebra::DMatrix;

use super::{AntisymTensor, Cplx};
use crate::{Error, Result};

/// Invertible mode transformation `S ∈ GL(N, ℂ)` with its determinant cached.
#[derive(Debug, Clone, PartialEq)]
pub struct SloccMatrix {
    m: DMatrix<Cplx>,
    det: Cplx,
}

impl SloccMatrix {
    /// Accepts `m` if `|det m| > 1e-12 · (max |m_ij|)^N`.
    pub fn new(m: DMatrix<Cplx>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = m.nrows();
        let det = m.clone().determinant();
        let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let threshold = 1e-12 * scale.powi(n as i32);
        if !(det.norm() > threshold) {
            return Err(Error::Singular { det_abs: det.norm(), threshold });
        }
        Ok(Self { m, det })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
            det: Cplx::new(1.0, 0.0),
        }
    }

    /// `I + Σ lower[(r, c)]` for entries strictly below the diagonal in a
    /// block sense: every `(row, col)` must have `row > col`. Such a matrix is
    /// unipotent and its determinant is exactly one.
    pub fn unipotent(n: usize, entries: &[(usize, usize, Cplx)]) -> Result<Self> {
        let mut m = DMatrix::identity(n, n);
        for &(r, c, v) in entries {
            if r <= c || r >= n {
                return Err(Error::Precondition(format!(
                    "entry ({r}, {c}) is not strictly lower triangular in a {n}x{n} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            m[(r, c)] += v;
        }
        Ok(Self {
            m,
            det: Cplx::new(1.0, 0.0),
        })
    }

    pub fn matrix(&self) -> &DMatrix<Cplx> {
        &self.m
    }

    pub fn det(&self) -> Cplx {
        self.det
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// `other · self`, i.e. apply `self` first.
    pub fn then(&self, other: &SloccMatrix) -> Self {
        Self {
            m: &other.m * &self.m,
            det: other.det * self.det,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.m.clone().try_inverse().ok_or(Error::Singular {
            det_abs: self.det.norm(),
            threshold: 0.0,
        })?;
        Ok(Self {
            m: inv,
            det: Cplx::new(1.0, 0.0) / self.det,
        })
    }
}

/// `ψ'_{μ1…μn} = S_{μ1ν1} ⋯ S_{μnνn} ψ_{ν1…νn}`.
///
/// Evaluated through Cauchy–Binet: each output component is a sum over the
/// stored input components weighted by the `n×n` minor of `S`.
pub fn slocc_apply(t: &AntisymTensor, s: &SloccMatrix) -> Result<AntisymTensor> {
    if s.dim() != t.modes() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} matrix", t.modes()),
            found: format!("{0}x{0}", s.dim()),
        });
    }
    let n = t.fermions();
    let inputs: Vec<(Vec<usize>, Cplx)> = t.iter().filter(|(_, v)| *v != Cplx::new(0.0, 0.0)).collect();
    let mut out = AntisymTensor::zeros(n, t.modes());
    for (rows, _) in t.iter() {
        let mut acc = Cplx::new(0.0, 0.0);
        for (cols, v) in &inputs {
            let minor = DMatrix::from_fn(n, n, |i, j| s.m[(rows[i], cols[j])]);
            acc += minor.determinant() * v;
        }
        out.set_sorted(&rows, acc)?;
    }
    Ok(out)
}
