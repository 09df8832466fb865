use nalgebra::DMatrix;

use super::{binomial, levi_civita, Cplx};
use crate::{Error, Result};

/// Totally antisymmetric amplitude tensor `ψ_{μ1…μn}` of `n` fermions over
/// `N` modes. Only strictly increasing index tuples are stored (colex order);
/// the state it represents is `Σ_{μ1<…<μn} ψ_{μ1…μn} p^{μ1}…p^{μn}|0⟩`.
///
/// Modes are zero-based internally.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymTensor {
    fermions: usize,
    modes: usize,
    amps: Vec<Cplx>,
}

fn colex_rank(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(k, &c)| binomial(c, k + 1)).sum()
}

fn colex_unrank(mut rank: usize, k: usize, out: &mut [usize]) {
    for pos in (0..k).rev() {
        let kk = pos + 1;
        let mut c = pos;
        while binomial(c + 1, kk) <= rank {
            c += 1;
        }
        out[pos] = c;
        rank -= binomial(c, kk);
    }
}

impl AntisymTensor {
    /// Zero tensor. Panics if `fermions > modes` or `modes > 63`.
    pub fn zeros(fermions: usize, modes: usize) -> Self {
        assert!(fermions <= modes && modes <= 63, "invalid tensor shape ({fermions}, {modes})");
        Self {
            fermions,
            modes,
            amps: vec![Cplx::new(0.0, 0.0); binomial(modes, fermions)],
        }
    }

    /// Builds a tensor from `(indices, amplitude)` pairs with strictly
    /// increasing indices. Duplicate tuples and non-finite values are rejected.
    pub fn from_sorted<I>(fermions: usize, modes: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Cplx)>,
    {
        if fermions > modes || modes > 63 {
            return Err(Error::UnsupportedShape { fermions, modes });
        }
        let mut t = Self::zeros(fermions, modes);
        let mut seen = vec![false; t.amps.len()];
        for (idx, value) in entries {
            t.check_tuple(&idx)?;
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndices {
                    indices: idx,
                    reason: "indices must be strictly increasing".into(),
                });
            }
            if !value.is_finite() {
                return Err(Error::NonFinite);
            }
            let r = colex_rank(&idx);
            if seen[r] {
                return Err(Error::InvalidIndices {
                    indices: idx,
                    reason: "duplicate amplitude".into(),
                });
            }
            seen[r] = true;
            t.amps[r] = value;
        }
        Ok(t)
    }

    /// Sum of products `coef · p^{m1} p^{m2} … |0⟩` with the modes in any order.
    /// Terms with a repeated mode vanish.
    pub fn from_terms<'a, I>(fermions: usize, modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [usize], Cplx)>,
    {
        let mut t = Self::zeros(fermions, modes);
        for (m, coef) in terms {
            t.add_term(m, coef)?;
        }
        Ok(t)
    }

    fn check_tuple(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.fermions {
            return Err(Error::InvalidIndices {
                indices: idx.to_vec(),
                reason: format!("expected {} indices", self.fermions),
            });
        }
        if let Some(&bad) = idx.iter().find(|&&m| m >= self.modes) {
            return Err(Error::InvalidIndices {
                indices: idx.to_vec(),
                reason: format!("mode {bad} out of range 0..{}", self.modes),
            });
        }
        Ok(())
    }

    /// Adds `coef · p^{modes[0]} … p^{modes[n-1]}|0⟩`.
    pub fn add_term(&mut self, modes: &[usize], coef: Cplx) -> Result<()> {
        self.check_tuple(modes)?;
        if !coef.is_finite() {
            return Err(Error::NonFinite);
        }
        let sign = levi_civita(modes);
        if sign == 0 {
            return Ok(());
        }
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        self.amps[colex_rank(&sorted)] += coef * sign as f64;
        Ok(())
    }

    /// Amplitude at an arbitrary index tuple: sign of the sorting permutation
    /// times the stored value, zero on repeated indices.
    ///
    /// Panics if the tuple has the wrong length or an out-of-range mode.
    pub fn get(&self, idx: &[usize]) -> Cplx {
        assert_eq!(idx.len(), self.fermions, "wrong number of indices");
        let sign = levi_civita(idx);
        if sign == 0 {
            return Cplx::new(0.0, 0.0);
        }
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        assert!(sorted.last().map_or(true, |&m| m < self.modes), "mode out of range");
        self.amps[colex_rank(&sorted)] * sign as f64
    }

    /// Overwrites the amplitude at a strictly increasing tuple.
    pub fn set_sorted(&mut self, idx: &[usize], value: Cplx) -> Result<()> {
        self.check_tuple(idx)?;
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndices {
                indices: idx.to_vec(),
                reason: "indices must be strictly increasing".into(),
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        self.amps[colex_rank(idx)] = value;
        Ok(())
    }

    pub fn fermions(&self) -> usize {
        self.fermions
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Number of independent components, `C(N, n)`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Stored amplitudes in colex order of their index tuples.
    pub fn amplitudes(&self) -> &[Cplx] {
        &self.amps
    }

    /// `(sorted indices, amplitude)` for every stored component.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Cplx)> + '_ {
        let k = self.fermions;
        self.amps.iter().enumerate().map(move |(r, &v)| {
            let mut idx = vec![0; k];
            colex_unrank(r, k, &mut idx);
            (idx, v)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|x| x.is_finite())
    }

    pub fn max_diff(&self, other: &AntisymTensor) -> f64 {
        assert_eq!((self.fermions, self.modes), (other.fermions, other.modes));
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Cplx) -> Self {
        Self {
            amps: self.amps.iter().map(|&x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &AntisymTensor) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &AntisymTensor) -> Result<Self> {
        self.add(&other.scale(Cplx::new(-1.0, 0.0)))
    }

    fn same_shape(&self, other: &AntisymTensor) -> Result<()> {
        if (self.fermions, self.modes) != (other.fermions, other.modes) {
            return Err(Error::DimensionMismatch {
                expected: format!("({}, {})", self.fermions, self.modes),
                found: format!("({}, {})", other.fermions, other.modes),
            });
        }
        Ok(())
    }

    /// Decomposable tensor `v_1 ∧ … ∧ v_n`, i.e. the state
    /// `(v_1·p)(v_2·p)…(v_n·p)|0⟩`. Each component is a minor determinant.
    pub fn wedge(modes: usize, vectors: &[Vec<Cplx>]) -> Result<Self> {
        let k = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != modes) {
            return Err(Error::DimensionMismatch {
                expected: format!("vectors of length {modes}"),
                found: format!("length {}", v.len()),
            });
        }
        if k > modes {
            return Err(Error::UnsupportedShape { fermions: k, modes });
        }
        let mut t = Self::zeros(k, modes);
        let mut idx = vec![0; k];
        for r in 0..t.amps.len() {
            colex_unrank(r, k, &mut idx);
            let minor = DMatrix::from_fn(k, k, |row, col| vectors[row][idx[col]]);
            t.amps[r] = if k == 0 { Cplx::new(1.0, 0.0) } else { minor.determinant() };
        }
        Ok(t)
    }

    /// Same amplitudes read as a tensor over `new_modes ≥ modes` modes.
    pub fn embed(&self, new_modes: usize) -> Result<Self> {
        if new_modes < self.modes {
            return Err(Error::DimensionMismatch {
                expected: format!("at least {} modes", self.modes),
                found: new_modes.to_string(),
            });
        }
        Self::from_sorted(self.fermions, new_modes, self.iter())
    }

    /// Restriction to the modes `keep` (relabelled `0..keep.len()` in the
    /// given order). Components touching other modes are dropped.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::zeros(self.fermions, keep.len());
        for (idx, v) in self.iter() {
            let mapped: Option<Vec<usize>> = idx
                .iter()
                .map(|m| keep.iter().position(|k| k == m))
                .collect();
            if let Some(m) = mapped {
                out.add_term(&m, v)?;
            }
        }
        Ok(out)
    }

    /// Largest amplitude among components that involve `mode`.
    pub fn max_abs_touching(&self, mode: usize) -> f64 {
        self.iter()
            .filter(|(idx, _)| idx.contains(&mode))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}
