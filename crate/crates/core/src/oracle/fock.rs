use std::collections::BTreeMap;

use crate::cluster::ModeSplit;
use crate::multilinear::{AntisymTensor, Cplx};
use crate::{Error, Result};

/// Vector in the fermionic Fock space over `modes` modes. Basis states are
/// occupation bitstrings; the bitstring with occupied modes `i1 < i2 < …`
/// stands for `p^{i1} p^{i2} … |0⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockVector {
    modes: usize,
    amps: BTreeMap<u64, Cplx>,
}

/// Single creation (`p^m`) or annihilation (`n_m`) operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOp {
    Create(usize),
    Annihilate(usize),
}

impl FockVector {
    pub fn zero(modes: usize) -> Self {
        assert!(modes <= 63);
        Self { modes, amps: BTreeMap::new() }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::basis(modes, &[])
    }

    /// `p^{i1} … p^{ik}|0⟩` for increasing `occupied`.
    pub fn basis(modes: usize, occupied: &[usize]) -> Self {
        let mut v = Self::zero(modes);
        let bits = occupied.iter().fold(0u64, |b, &m| b | (1 << m));
        v.amps.insert(bits, Cplx::new(1.0, 0.0));
        v
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitude(&self, bits: u64) -> Cplx {
        self.amps.get(&bits).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Cplx)> + '_ {
        self.amps.iter().map(|(&b, &v)| (b, v))
    }

    /// Particle numbers present with nonzero amplitude.
    pub fn sectors(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self
            .amps
            .iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(b, _)| b.count_ones())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn norm(&self) -> f64 {
        self.amps.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn add_scaled(&mut self, other: &FockVector, s: Cplx) {
        for (&b, &v) in &other.amps {
            *self.amps.entry(b).or_default() += v * s;
        }
    }

    pub fn scale(&self, s: Cplx) -> Self {
        Self {
            modes: self.modes,
            amps: self.amps.iter().map(|(&b, &v)| (b, v * s)).collect(),
        }
    }

    pub fn max_diff(&self, other: &FockVector) -> f64 {
        let mut d = self.clone();
        d.add_scaled(other, Cplx::new(-1.0, 0.0));
        d.max_abs()
    }

    /// Embeds an antisymmetric tensor as an `n`-particle Fock vector.
    pub fn from_tensor(t: &AntisymTensor) -> Self {
        let mut v = Self::zero(t.modes());
        for (idx, a) in t.iter() {
            if a != Cplx::new(0.0, 0.0) {
                let bits = idx.iter().fold(0u64, |b, &m| b | (1 << m));
                v.amps.insert(bits, a);
            }
        }
        v
    }

    /// Reads off the `fermions`-particle sector as a tensor.
    pub fn to_tensor(&self, fermions: usize) -> AntisymTensor {
        let mut t = AntisymTensor::zeros(fermions, self.modes);
        for (&bits, &a) in &self.amps {
            if bits.count_ones() as usize == fermions {
                let idx: Vec<usize> = (0..self.modes).filter(|m| bits >> m & 1 == 1).collect();
                t.add_term(&idx, a).expect("bitstring within range");
            }
        }
        t
    }
}

/// Applies one creation or annihilation operator with the Jordan–Wigner
/// sign `(-1)^{#occupied modes below m}`. Creating on an occupied mode or
/// annihilating an empty one contributes zero.
pub fn apply_mode_op(v: &FockVector, op: ModeOp) -> FockVector {
    let mut out = FockVector::zero(v.modes);
    for (&bits, &a) in &v.amps {
        if let Some((nb, sign)) = act(bits, op) {
            *out.amps.entry(nb).or_default() += a * sign;
        }
    }
    out
}

fn act(bits: u64, op: ModeOp) -> Option<(u64, f64)> {
    let (m, create) = match op {
        ModeOp::Create(m) => (m, true),
        ModeOp::Annihilate(m) => (m, false),
    };
    let occupied = bits >> m & 1 == 1;
    if occupied == create {
        return None;
    }
    let below = (bits & ((1u64 << m) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
    Some((bits ^ (1 << m), sign))
}

/// Applies an operator string; the rightmost operator acts first.
pub fn apply_ops(v: &FockVector, ops: &[ModeOp]) -> FockVector {
    let mut out = FockVector::zero(v.modes);
    'outer: for (&bits, &a) in &v.amps {
        let mut b = bits;
        let mut s = 1.0;
        for &op in ops.iter().rev() {
            match act(b, op) {
                Some((nb, sign)) => {
                    b = nb;
                    s *= sign;
                }
                None => continue 'outer,
            }
        }
        *out.amps.entry(b).or_default() += a * s;
    }
    out
}

/// Normal-ordered monomial `coef · p^{c1} … p^{ck} n_{a1} … n_{al}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: Cplx,
    pub creations: Vec<usize>,
    pub annihilations: Vec<usize>,
}

impl Monomial {
    fn ops(&self) -> Vec<ModeOp> {
        self.creations
            .iter()
            .map(|&m| ModeOp::Create(m))
            .chain(self.annihilations.iter().map(|&m| ModeOp::Annihilate(m)))
            .collect()
    }
}

/// Sum of normal-ordered monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterOperator {
    terms: Vec<Monomial>,
}

impl ClusterOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn push(&mut self, m: Monomial) {
        self.terms.push(m);
    }

    /// Adds `coef · p^{a1} n_{i1} p^{a2} n_{i2} ⋯` given as `(a, i)` pairs,
    /// rewritten in normal order. Requires every creation index to differ
    /// from every annihilation index so that the reordering is a pure sign
    /// `(-1)^{k(k-1)/2}`.
    pub fn add_excitation(&mut self, coef: Cplx, pairs: &[(usize, usize)]) -> Result<()> {
        if coef == Cplx::new(0.0, 0.0) {
            return Ok(());
        }
        if pairs.iter().any(|&(a, _)| pairs.iter().any(|&(_, i)| a == i)) {
            return Err(Error::NotExcitation(format!(
                "creation and annihilation modes overlap in {pairs:?}"
            )));
        }
        let k = pairs.len();
        let sign = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        self.terms.push(Monomial {
            coef: coef * sign,
            creations: pairs.iter().map(|p| p.0).collect(),
            annihilations: pairs.iter().map(|p| p.1).collect(),
        });
        Ok(())
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero(v.modes);
        for t in &self.terms {
            out.add_scaled(&apply_ops(v, &t.ops()), t.coef);
        }
        out
    }

    /// Every monomial creates only virtual modes and annihilates only
    /// occupied ones, in equal number.
    pub fn validate_excitation(&self, split: &ModeSplit) -> Result<()> {
        for t in &self.terms {
            let ok = t.creations.len() == t.annihilations.len()
                && !t.creations.is_empty()
                && t.creations.iter().all(|m| split.is_virtual(*m))
                && t.annihilations.iter().all(|m| split.is_occupied(*m));
            if !ok {
                return Err(Error::NotExcitation(format!(
                    "monomial creates {:?} and annihilates {:?}",
                    t.creations, t.annihilations
                )));
            }
        }
        Ok(())
    }
}

/// `e^T v` by the power series. Excitation operators are nilpotent on a
/// finite Fock space, so the series stops once a term vanishes
/// structurally (at most `modes + 1` terms).
pub fn exp_cluster(v: &FockVector, t: &ClusterOperator, split: &ModeSplit) -> Result<FockVector> {
    t.validate_excitation(split)?;
    let mut out = v.clone();
    let mut term = v.clone();
    for k in 1..=v.modes + 1 {
        term = t.apply(&term).scale(Cplx::new(1.0 / k as f64, 0.0));
        term.amps.retain(|_, a| *a != Cplx::new(0.0, 0.0));
        if term.is_empty() {
            break;
        }
        out.add_scaled(&term, Cplx::new(1.0, 0.0));
    }
    Ok(out)
}
