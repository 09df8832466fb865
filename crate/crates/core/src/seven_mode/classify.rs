use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{check, covariants7};
use crate::linalg::{eigenvalues, numerical_rank, singular_values};
use crate::multilinear::{slocc_apply, AntisymTensor, Cplx, SloccMatrix};
use crate::six_mode::{classify6, SixClass, SixClassReport};
use crate::Result;

/// Seven-mode orbit label. `VIorVII` is reported when `rank N = 1`: the
/// covariants used here do not separate those two classes. `Unresolved`
/// marks witnesses that match no row of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SevenClass {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    #[serde(rename = "VI-or-VII")]
    VIorVII,
    #[serde(rename = "unresolved")]
    Unresolved,
}

impl SevenClass {
    /// The ten orbits in order.
    pub const TABLE: [SevenClass; 10] = [
        SevenClass::I,
        SevenClass::II,
        SevenClass::III,
        SevenClass::IV,
        SevenClass::V,
        SevenClass::VI,
        SevenClass::VII,
        SevenClass::VIII,
        SevenClass::IX,
        SevenClass::X,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SevenClass::I => "I",
            SevenClass::II => "II",
            SevenClass::III => "III",
            SevenClass::IV => "IV",
            SevenClass::V => "V",
            SevenClass::VI => "VI",
            SevenClass::VII => "VII",
            SevenClass::VIII => "VIII",
            SevenClass::IX => "IX",
            SevenClass::X => "X",
            SevenClass::VIorVII => "VI-or-VII",
            SevenClass::Unresolved => "unresolved",
        }
    }

    /// Descriptive type: NULL, SEP, …, SYMPL/GHZ.
    pub fn kind(self) -> &'static str {
        match self {
            SevenClass::I => "NULL",
            SevenClass::II => "SEP",
            SevenClass::III => "BISEP",
            SevenClass::IV => "W",
            SevenClass::V => "GHZ",
            SevenClass::VI => "SYMPL/NULL",
            SevenClass::VII => "SYMPL/SEP",
            SevenClass::VIII => "SYMPL/BISEP",
            SevenClass::IX => "SYMPL/W",
            SevenClass::X => "SYMPL/GHZ",
            SevenClass::VIorVII => "SYMPL/NULL or SYMPL/SEP",
            SevenClass::Unresolved => "unresolved",
        }
    }

    /// `rank N` on the orbit, where it is fixed.
    pub fn rank_n(self) -> Option<usize> {
        match self {
            SevenClass::I | SevenClass::II | SevenClass::III | SevenClass::IV | SevenClass::V => Some(0),
            SevenClass::VI | SevenClass::VII | SevenClass::VIorVII => Some(1),
            SevenClass::VIII => Some(2),
            SevenClass::IX => Some(4),
            SevenClass::X => Some(7),
            SevenClass::Unresolved => None,
        }
    }

    /// Whether a classifier output is consistent with this true orbit.
    pub fn admits(self, reported: SevenClass) -> bool {
        self == reported || (reported == SevenClass::VIorVII && matches!(self, SevenClass::VI | SevenClass::VII))
    }

    fn from_six(c: SixClass) -> Self {
        match c {
            SixClass::Null => SevenClass::I,
            SixClass::Sep => SevenClass::II,
            SixClass::Bisep => SevenClass::III,
            SixClass::W => SevenClass::IV,
            SixClass::Ghz => SevenClass::V,
        }
    }
}

impl fmt::Display for SevenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classification result with its witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SevenClassReport {
    pub class: SevenClass,
    pub j: Cplx,
    pub rank_n: usize,
    /// Singular values of `N`, descending.
    pub n_singular_values: Vec<f64>,
    /// `σ_r / σ_{r+1}` at the rank cut (`σ_0` read as `scale³`, missing
    /// `σ_8` as zero); infinite when the next value is exactly zero.
    pub rank_gap: f64,
    /// Eigenvalues of `B = −N/6`.
    pub b_eigenvalues: Vec<Cplx>,
    /// Six-mode report when the state was reduced to six modes.
    pub six: Option<SixClassReport>,
    pub flags: Vec<String>,
    pub scale: f64,
    pub tol: f64,
}

/// Rank cut for `N`: `σ > max(1e-9 σ_max, tol · scale³)`.
pub fn rank_threshold(sigma_max: f64, scale: f64, tol: f64) -> f64 {
    (1e-9 * sigma_max).max(tol * scale.powi(3))
}

/// Orders `|J| > τs⁷ → X`, then `rank N` = 4, 2, 1 → IX, VIII, VI-or-VII.
/// For `rank N = 0` the state is moved into six modes through a vector `v`
/// with `v^I Ψ_{IJK} = 0` and classified there (I–V).
pub fn classify7(t: &AntisymTensor, tol: f64) -> Result<SevenClassReport> {
    check(t)?;
    let scale = t.max_abs();
    let cov = covariants7(t)?;
    let j = cov.j();
    let sigma = singular_values(&cov.n);
    let cut = rank_threshold(sigma[0], scale, tol);
    let rank_n = numerical_rank(&sigma, 0.0, cut);
    let upper = if rank_n == 0 { scale.powi(3) } else { sigma[rank_n - 1] };
    let lower = sigma.get(rank_n).copied().unwrap_or(0.0);
    let rank_gap = if lower == 0.0 { f64::INFINITY } else { upper / lower };
    let mut report = SevenClassReport {
        class: SevenClass::Unresolved,
        j,
        rank_n,
        n_singular_values: sigma,
        rank_gap,
        b_eigenvalues: eigenvalues(&cov.b()),
        six: None,
        flags: Vec::new(),
        scale,
        tol,
    };
    if scale == 0.0 {
        report.class = SevenClass::I;
        return Ok(report);
    }
    if j.norm() > tol * scale.powi(7) {
        report.class = SevenClass::X;
        if rank_n != 7 {
            report.flags.push(format!("J is nonzero but rank N = {rank_n}, expected 7"));
        }
        return Ok(report);
    }
    match rank_n {
        4 => report.class = SevenClass::IX,
        2 => report.class = SevenClass::VIII,
        1 => {
            report.class = SevenClass::VIorVII;
            report
                .flags
                .push("rank N = 1 does not separate VI from VII; further covariants are needed".into());
        }
        0 => match reduce_to_six(t, tol)? {
            Some(six) => {
                report.class = SevenClass::from_six(six.class);
                report.six = Some(six);
            }
            None => report
                .flags
                .push("rank N = 0 but no six-mode subspace contains the state; classes I-V not resolved".into()),
        },
        r => report
            .flags
            .push(format!("rank N = {r} with J = 0 matches no orbit")),
    }
    Ok(report)
}

/// Finds `v` with `v^I Ψ_{IJK} = 0`, moves it to the last mode with a
/// unitary change of basis and classifies the remaining six-mode tensor.
fn reduce_to_six(t: &AntisymTensor, tol: f64) -> Result<Option<SixClassReport>> {
    let pairs: Vec<(usize, usize)> = (0..7).flat_map(|j| (j + 1..7).map(move |k| (j, k))).collect();
    let m = DMatrix::from_fn(pairs.len(), 7, |r, i| t.get(&[i, pairs[r].0, pairs[r].1]));
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (kmin, smin) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("seven singular values");
    let smax = svd.singular_values.max();
    if smin > (1e-9 * smax).max(tol * t.max_abs()) {
        return Ok(None);
    }
    // rows of conj(Vᴴ) form a unitary basis; put the kernel vector last
    let mut order: Vec<usize> = (0..7).filter(|&r| r != kmin).collect();
    order.push(kmin);
    let s = DMatrix::from_fn(7, 7, |r, c| v_t[(order[r], c)].conj());
    let rotated = slocc_apply(t, &SloccMatrix::new(s)?)?;
    let six = rotated.restrict(&[0, 1, 2, 3, 4, 5])?;
    classify6(&six, tol).map(Some)
}

/// Canonical form of each orbit in the basis `E^k = p^k + i p^{k̄}`,
/// `E^{k̄} = p^k − i p^{k̄}`, `E^{4̄} = i p^{4̄}`. Classes outside the
/// table (`VIorVII`, `Unresolved`) give the zero tensor.
pub fn canonical7(class: SevenClass) -> AntisymTensor {
    let e = |k: usize| -> Vec<Cplx> {
        let mut v = vec![Cplx::new(0.0, 0.0); 7];
        match k {
            0..=2 => {
                v[k] = Cplx::new(1.0, 0.0);
                v[k + 3] = Cplx::new(0.0, 1.0);
            }
            3..=5 => {
                v[k - 3] = Cplx::new(1.0, 0.0);
                v[k] = Cplx::new(0.0, -1.0);
            }
            _ => v[6] = Cplx::new(0.0, 1.0),
        }
        v
    };
    let w = |a: usize, b: usize, c: usize| AntisymTensor::wedge(7, &[e(a), e(b), e(c)]).expect("three vectors");
    let sum = |parts: &[AntisymTensor]| {
        parts
            .iter()
            .fold(AntisymTensor::zeros(3, 7), |acc, p| acc.add(p).expect("same shape"))
    };
    let sympl = sum(&[w(0, 3, 6), w(1, 4, 6), w(2, 5, 6)]);
    let sep = w(0, 1, 2);
    let bisep = sum(&[w(0, 1, 2), w(0, 4, 5)]);
    let wst = sum(&[w(0, 1, 5), w(0, 4, 2), w(3, 1, 2)]);
    let ghz = sum(&[w(0, 1, 2), w(3, 4, 5)]);
    match class {
        SevenClass::I | SevenClass::VIorVII | SevenClass::Unresolved => AntisymTensor::zeros(3, 7),
        SevenClass::II => sep,
        SevenClass::III => bisep,
        SevenClass::IV => wst,
        SevenClass::V => ghz,
        SevenClass::VI => sympl,
        SevenClass::VII => sum(&[sympl, sep]),
        SevenClass::VIII => sum(&[sympl, bisep]),
        SevenClass::IX => sum(&[sympl, wst]),
        SevenClass::X => sum(&[sympl, ghz]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::c64;

    #[test]
    fn table_ranks_and_classes() {
        for class in SevenClass::TABLE {
            let rep = classify7(&canonical7(class), 1e-9).unwrap();
            assert_eq!(Some(rep.rank_n), class.rank_n(), "{class}: {:?}", rep.n_singular_values);
            assert!(class.admits(rep.class), "{class} classified as {}", rep.class);
            assert_eq!(rep.j.norm() > 1e-6, class == SevenClass::X);
            assert!(rep.rank_gap >= 1e6, "{class}: gap {}", rep.rank_gap);
        }
    }

    #[test]
    fn zero_state_is_class_one() {
        assert_eq!(classify7(&AntisymTensor::zeros(3, 7), 1e-9).unwrap().class, SevenClass::I);
    }

    #[test]
    fn six_mode_state_in_rotated_basis_is_found() {
        // GHZ on modes 1..6 mixed with mode 7 by a unitary rotation
        let ghz = AntisymTensor::from_terms(3, 7, [(&[0usize, 1, 2][..], c64(1.0, 0.0)), (&[3, 4, 5][..], c64(1.0, 0.0))])
            .unwrap();
        let (c, s) = (0.6, 0.8);
        let mut m = DMatrix::identity(7, 7);
        m[(0, 0)] = c64(c, 0.0);
        m[(0, 6)] = c64(s, 0.0);
        m[(6, 0)] = c64(-s, 0.0);
        m[(6, 6)] = c64(c, 0.0);
        let t = slocc_apply(&ghz, &SloccMatrix::new(m).unwrap()).unwrap();
        let rep = classify7(&t, 1e-9).unwrap();
        assert_eq!(rep.class, SevenClass::V);
        assert_eq!(rep.six.unwrap().class, SixClass::Ghz);
    }
}
