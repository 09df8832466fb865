//! JSON documents: state files, CI/CC coordinate files and reports.
//!
//! Mode indices in files are 1-based; complex numbers are `{re, im}`
//! objects and 3×3 blocks are row-major nested arrays.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cluster::{
    cc6_from_ci6, cc7_from_ci7, ci6_from_cc6, ci6_from_tensor, ci7_from_cc7, ci7_from_tensor, tensor_from_ci6,
    tensor_from_ci7, SevenModeCC, SevenModeCI, SixModeCC, SixModeCI,
};
use crate::linalg::{eigenvalues, numerical_rank, singular_values};
use crate::multilinear::{AntisymMat3, AntisymTensor, Cplx, Mat3};
use crate::seven_mode::{classify7, covariants7, j_cubed_residual, SevenClassReport};
use crate::six_mode::{classify6, covariant_k, quartic_d_from_k, SixClassReport};
use crate::{four_eight, Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest mode count accepted from files.
pub const MAX_MODES: usize = 16;

/// Tolerance for antisymmetry of `E`, `F`, `V`, `U` blocks read from files.
const ANTISYM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Cplx> for C {
    fn from(z: Cplx) -> Self {
        C { re: z.re, im: z.im }
    }
}

impl From<C> for Cplx {
    fn from(c: C) -> Self {
        Cplx::new(c.re, c.im)
    }
}

impl C {
    fn finite(self) -> Result<Cplx> {
        if self.re.is_finite() && self.im.is_finite() {
            Ok(self.into())
        } else {
            Err(Error::NonFinite)
        }
    }
}

pub type M3 = [[C; 3]; 3];

fn m3(m: &Mat3) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)].into()))
}

fn mat(m: &M3) -> Result<Mat3> {
    let mut out = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = m[i][j].finite()?;
        }
    }
    Ok(out)
}

fn antisym(m: &M3) -> Result<AntisymMat3> {
    AntisymMat3::from_matrix(&mat(m)?, ANTISYM_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// `{ "fermions": n, "modes": N, "amplitudes": [{ "indices", "re", "im" }] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub fermions: usize,
    pub modes: usize,
    pub amplitudes: Vec<AmplitudeEntry>,
}

impl StateFile {
    /// Indices must be strictly increasing, 1-based, in range and listed at
    /// most once; missing amplitudes are zero.
    pub fn to_tensor(&self) -> Result<AntisymTensor> {
        if self.modes > MAX_MODES || self.fermions > self.modes {
            return Err(Error::UnsupportedShape { fermions: self.fermions, modes: self.modes });
        }
        let mut t = AntisymTensor::zeros(self.fermions, self.modes);
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.amplitudes {
            let bad = |reason: &str| Error::InvalidIndices { indices: e.indices.clone(), reason: reason.into() };
            if e.indices.len() != self.fermions {
                return Err(bad("wrong number of indices"));
            }
            if e.indices.iter().any(|&i| i == 0 || i > self.modes) {
                return Err(bad("indices are 1-based and must not exceed the mode count"));
            }
            if e.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("indices must be strictly increasing"));
            }
            if !seen.insert(e.indices.clone()) {
                return Err(bad("duplicate entry"));
            }
            let z = C { re: e.re, im: e.im }.finite()?;
            let idx: Vec<usize> = e.indices.iter().map(|i| i - 1).collect();
            t.set_sorted(&idx, z)?;
        }
        Ok(t)
    }

    /// Nonzero amplitudes in lexicographic index order.
    pub fn from_tensor(t: &AntisymTensor) -> Self {
        let mut amplitudes: Vec<AmplitudeEntry> = t
            .iter()
            .filter(|(_, z)| *z != Cplx::new(0.0, 0.0))
            .map(|(idx, z)| AmplitudeEntry { indices: idx.iter().map(|i| i + 1).collect(), re: z.re, im: z.im })
            .collect();
        amplitudes.sort_by(|a, b| a.indices.cmp(&b.indices));
        StateFile { fermions: t.fermions(), modes: t.modes(), amplitudes }
    }
}

/// CI blocks; `D`, `E`, `F` only for seven modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiFile {
    pub modes: usize,
    pub alpha: C,
    #[serde(rename = "A")]
    pub a: M3,
    #[serde(rename = "B")]
    pub b: M3,
    pub beta: C,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<M3>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<M3>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<M3>,
}

/// CC blocks in intermediate normalization (`eta = 1`); the state is
/// `reference_scale · e^{T̂}|Ψ₀⟩`. `Z`, `V`, `U` only for seven modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcFile {
    pub modes: usize,
    pub eta: C,
    pub reference_scale: C,
    #[serde(rename = "X")]
    pub x: M3,
    #[serde(rename = "Y")]
    pub y: M3,
    pub xi: C,
    #[serde(rename = "Z", default, skip_serializing_if = "Option::is_none")]
    pub z: Option<M3>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<M3>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<M3>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoordinateFile {
    Ci(CiFile),
    Cc(CcFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateKind {
    Ci,
    Cc,
}

fn require(block: &Option<M3>, name: &str) -> Result<M3> {
    block.ok_or_else(|| Error::DimensionMismatch {
        expected: format!("block {name} for seven modes"),
        found: "missing".into(),
    })
}

fn three_fermions(t: &AntisymTensor) -> Result<()> {
    match (t.fermions(), t.modes()) {
        (3, 6) | (3, 7) => Ok(()),
        (n, m) => Err(Error::UnsupportedShape { fermions: n, modes: m }),
    }
}

impl CoordinateFile {
    /// CI blocks are read off directly; CC blocks need a nonzero reference
    /// amplitude.
    pub fn from_tensor(t: &AntisymTensor, kind: CoordinateKind) -> Result<Self> {
        three_fermions(t)?;
        let seven = t.modes() == 7;
        match kind {
            CoordinateKind::Ci if seven => {
                let c = ci7_from_tensor(t)?;
                Ok(CoordinateFile::Ci(CiFile {
                    modes: 7,
                    alpha: c.alpha.into(),
                    a: m3(&c.a),
                    b: m3(&c.b),
                    beta: c.beta.into(),
                    d: Some(m3(&c.d)),
                    e: Some(m3(&c.e.to_matrix())),
                    f: Some(m3(&c.f.to_matrix())),
                }))
            }
            CoordinateKind::Ci => {
                let c = ci6_from_tensor(t)?;
                Ok(CoordinateFile::Ci(CiFile {
                    modes: 6,
                    alpha: c.alpha.into(),
                    a: m3(&c.a),
                    b: m3(&c.b),
                    beta: c.beta.into(),
                    d: None,
                    e: None,
                    f: None,
                }))
            }
            CoordinateKind::Cc if seven => {
                let n = SevenModeCI::from_tensor_normalized(t)?;
                let c = cc7_from_ci7(&n.coords)?;
                Ok(CoordinateFile::Cc(CcFile {
                    modes: 7,
                    eta: Cplx::new(1.0, 0.0).into(),
                    reference_scale: n.scale.into(),
                    x: m3(&c.x),
                    y: m3(&c.y),
                    xi: c.xi.into(),
                    z: Some(m3(&c.z)),
                    v: Some(m3(&c.v.to_matrix())),
                    u: Some(m3(&c.u.to_matrix())),
                }))
            }
            CoordinateKind::Cc => {
                let n = SixModeCI::from_tensor_normalized(t)?;
                let c = cc6_from_ci6(&n.coords)?;
                Ok(CoordinateFile::Cc(CcFile {
                    modes: 6,
                    eta: Cplx::new(1.0, 0.0).into(),
                    reference_scale: n.scale.into(),
                    x: m3(&c.x),
                    y: m3(&c.y),
                    xi: c.xi.into(),
                    z: None,
                    v: None,
                    u: None,
                }))
            }
        }
    }

    /// Rebuilds the three-fermion state the coordinates describe.
    pub fn to_tensor(&self) -> Result<AntisymTensor> {
        match self {
            CoordinateFile::Ci(f) => {
                let (alpha, a, b, beta) = (f.alpha.finite()?, mat(&f.a)?, mat(&f.b)?, f.beta.finite()?);
                match f.modes {
                    6 => Ok(tensor_from_ci6(&SixModeCI { alpha, a, b, beta })),
                    7 => Ok(tensor_from_ci7(&SevenModeCI {
                        alpha,
                        beta,
                        a,
                        b,
                        d: mat(&require(&f.d, "D")?)?,
                        e: antisym(&require(&f.e, "E")?)?,
                        f: antisym(&require(&f.f, "F")?)?,
                    })),
                    m => Err(Error::UnsupportedShape { fermions: 3, modes: m }),
                }
            }
            CoordinateFile::Cc(f) => {
                let eta = f.eta.finite()?;
                if eta != Cplx::new(1.0, 0.0) {
                    return Err(Error::NotIntermediateNormalized { re: eta.re, im: eta.im });
                }
                let scale = f.reference_scale.finite()?;
                let (x, y, xi) = (mat(&f.x)?, mat(&f.y)?, f.xi.finite()?);
                let t = match f.modes {
                    6 => tensor_from_ci6(&ci6_from_cc6(&SixModeCC { x, y, xi })),
                    7 => tensor_from_ci7(&ci7_from_cc7(&SevenModeCC {
                        xi,
                        x,
                        y,
                        z: mat(&require(&f.z, "Z")?)?,
                        v: antisym(&require(&f.v, "V")?)?,
                        u: antisym(&require(&f.u, "U")?)?,
                    })),
                    m => return Err(Error::UnsupportedShape { fermions: 3, modes: m }),
                };
                Ok(t.scale(scale))
            }
        }
    }
}

/// Machine-readable result of `classify` or `invariants`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub tol: f64,
    pub fermions: usize,
    pub modes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub invariants: BTreeMap<String, C>,
    pub ranks: BTreeMap<String, usize>,
    pub singular_values: BTreeMap<String, Vec<f64>>,
    pub eigenvalues: BTreeMap<String, Vec<C>>,
    pub metrics: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

impl Report {
    fn new(t: &AntisymTensor, tol: f64) -> Self {
        Report {
            version: VERSION.into(),
            tol,
            fermions: t.fermions(),
            modes: t.modes(),
            class: None,
            invariants: BTreeMap::new(),
            ranks: BTreeMap::new(),
            singular_values: BTreeMap::new(),
            eigenvalues: BTreeMap::new(),
            metrics: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    /// Every number in the report is finite.
    pub fn is_finite(&self) -> bool {
        let c = |z: &C| z.re.is_finite() && z.im.is_finite();
        self.tol.is_finite()
            && self.invariants.values().all(c)
            && self.singular_values.values().flatten().all(|x| x.is_finite())
            && self.eigenvalues.values().flatten().all(c)
            && self.metrics.values().all(|x| x.is_finite())
    }

    fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite)
        }
    }

    fn add_six(&mut self, r: &SixClassReport, prefix: &str) {
        self.invariants.insert(format!("{prefix}D"), r.d.into());
        self.metrics.insert(format!("{prefix}dual_norm"), r.dual_norm);
        self.metrics.insert(format!("{prefix}k_norm"), r.k_norm);
        for (k, q) in r.q_norms.iter().enumerate() {
            self.metrics.insert(format!("{prefix}q{}_norm", k + 1), *q);
        }
    }

    fn add_seven(&mut self, r: &SevenClassReport) {
        self.invariants.insert("J".into(), r.j.into());
        self.ranks.insert("N".into(), r.rank_n);
        self.singular_values.insert("N".into(), r.n_singular_values.clone());
        self.eigenvalues.insert("B".into(), r.b_eigenvalues.iter().map(|&z| z.into()).collect());
        if r.rank_gap.is_finite() {
            self.metrics.insert("rank_gap".into(), r.rank_gap);
        } else {
            self.flags.push("rank gap unbounded: next singular value is exactly zero".into());
        }
        if let Some(six) = &r.six {
            self.add_six(six, "reduced_");
            self.metrics.insert("reduced_scale".into(), six.scale);
        }
        self.flags.extend(r.flags.iter().cloned());
    }
}

fn add_k(report: &mut Report, t: &AntisymTensor, tol: f64, scale: f64) -> Result<()> {
    let k = covariant_k(t)?;
    let sv = singular_values(&k);
    report.ranks.insert("K".into(), numerical_rank(&sv, tol, tol * scale * scale));
    report.singular_values.insert("K".into(), sv);
    Ok(())
}

/// Classifies a state of shape (3,6) or (3,7); (4,8) states get the
/// closed-orbit subspace test only.
pub fn classify_report(t: &AntisymTensor, tol: f64) -> Result<Report> {
    let mut report = Report::new(t, tol);
    match (t.fermions(), t.modes()) {
        (3, 6) => {
            let r = classify6(t, tol)?;
            report.class = Some(r.class.label().into());
            report.add_six(&r, "");
            report.metrics.insert("scale".into(), r.scale);
            add_k(&mut report, t, tol, r.scale)?;
        }
        (3, 7) => {
            let r = classify7(t, tol)?;
            report.class = Some(r.class.label().into());
            report.metrics.insert("scale".into(), r.scale);
            report.add_seven(&r);
        }
        (4, 8) => {
            let m = four_eight::subspace_membership(t)?;
            let inside = m.residual <= tol;
            report.class = Some(if inside { "CLOSED-ORBIT-SUBSPACE" } else { "OUTSIDE-SUBSPACE" }.into());
            report.metrics.insert("subspace_residual".into(), m.residual);
            for (k, c) in m.coords.iter().enumerate() {
                report.invariants.insert(format!("P{}", k + 1), (*c).into());
            }
        }
        (n, m) => return Err(Error::UnsupportedShape { fermions: n, modes: m }),
    }
    report.checked()
}

/// Invariants and covariant spectra without a class verdict.
pub fn invariants_report(t: &AntisymTensor, tol: f64) -> Result<Report> {
    let mut report = Report::new(t, tol);
    let scale = t.max_abs();
    report.metrics.insert("scale".into(), scale);
    match (t.fermions(), t.modes()) {
        (3, 6) => {
            let k = covariant_k(t)?;
            report.invariants.insert("D".into(), quartic_d_from_k(&k).into());
            report.invariants.insert("TrK2/6".into(), ((&k * &k).trace() / 6.0).into());
            add_k(&mut report, t, tol, scale)?;
        }
        (3, 7) => {
            let c = covariants7(t)?;
            let j = c.j();
            report.invariants.insert("J".into(), j.into());
            let b = c.b();
            report.invariants.insert("DetB".into(), b.determinant().into());
            report.metrics.insert("J_cubed_residual".into(), j_cubed_residual(&c));
            let sv = singular_values(&c.n);
            report.ranks.insert("N".into(), numerical_rank(&sv, tol, tol * scale.powi(3)));
            report.singular_values.insert("N".into(), sv);
            report.singular_values.insert("L".into(), singular_values(&c.l));
            report.eigenvalues.insert("B".into(), eigenvalues(&b).into_iter().map(C::from).collect());
            let l77 = c.l[(6, 6)];
            report.invariants.insert("L77".into(), l77.into());
        }
        (n, m) => return Err(Error::UnsupportedShape { fermions: n, modes: m }),
    }
    report.checked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::c64;
    use crate::perturbation::psi_minus;
    use crate::six_mode::{canonical6, SixClass};

    fn entry(idx: &[usize], re: f64) -> AmplitudeEntry {
        AmplitudeEntry { indices: idx.to_vec(), re, im: 0.0 }
    }

    #[test]
    fn state_file_validation() {
        let ok = StateFile { fermions: 3, modes: 6, amplitudes: vec![entry(&[1, 2, 3], 1.0)] };
        assert_eq!(ok.to_tensor().unwrap().get(&[0, 1, 2]), c64(1.0, 0.0));
        for bad in [
            vec![entry(&[2, 1, 3], 1.0)],
            vec![entry(&[1, 2, 3], 1.0), entry(&[1, 2, 3], 2.0)],
            vec![entry(&[0, 1, 2], 1.0)],
            vec![entry(&[1, 2, 7], 1.0)],
            vec![entry(&[1, 2], 1.0)],
        ] {
            let f = StateFile { amplitudes: bad, ..ok.clone() };
            assert!(matches!(f.to_tensor(), Err(Error::InvalidIndices { .. })));
        }
        let nan = StateFile { amplitudes: vec![entry(&[1, 2, 3], f64::NAN)], ..ok.clone() };
        assert_eq!(nan.to_tensor(), Err(Error::NonFinite));
    }

    #[test]
    fn state_file_round_trip_is_stable() {
        let t = psi_minus();
        let f = StateFile::from_tensor(&t);
        assert_eq!(f.amplitudes.len(), 7);
        assert_eq!(f.amplitudes[0].indices, vec![1, 2, 3]);
        let text = serde_json::to_string(&f).unwrap();
        let back: StateFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_tensor().unwrap(), t);
    }

    #[test]
    fn coordinate_round_trip() {
        for t in [psi_minus(), canonical6(SixClass::Ghz)] {
            for kind in [CoordinateKind::Ci, CoordinateKind::Cc] {
                let f = CoordinateFile::from_tensor(&t, kind).unwrap();
                let text = serde_json::to_string(&f).unwrap();
                let back: CoordinateFile = serde_json::from_str(&text).unwrap();
                assert_eq!(back.to_tensor().unwrap().max_diff(&t), 0.0);
            }
        }
    }

    #[test]
    fn psi_minus_cc_blocks() {
        let CoordinateFile::Cc(f) = CoordinateFile::from_tensor(&psi_minus(), CoordinateKind::Cc).unwrap() else {
            panic!("expected CC blocks")
        };
        assert_eq!(f.x[0][0], C { re: -1.0, im: 0.0 });
        assert_eq!(f.z.unwrap()[1][1], C { re: 1.0, im: 0.0 });
        assert_eq!(f.x[0][1], C::default());
    }

    #[test]
    fn eta_must_be_one() {
        let CoordinateFile::Cc(mut f) = CoordinateFile::from_tensor(&psi_minus(), CoordinateKind::Cc).unwrap() else {
            panic!("expected CC blocks")
        };
        f.eta = C { re: 2.0, im: 0.0 };
        assert!(matches!(CoordinateFile::Cc(f).to_tensor(), Err(Error::NotIntermediateNormalized { .. })));
    }

    #[test]
    fn reports() {
        let r = classify_report(&psi_minus(), 1e-9).unwrap();
        assert_eq!(r.class.as_deref(), Some("X"));
        assert!((Cplx::from(r.invariants["J"]) - c64(1.0, 0.0)).norm() < 1e-12);
        let g = classify_report(&canonical6(SixClass::Ghz), 1e-9).unwrap();
        assert_eq!(g.class.as_deref(), Some("GHZ"));
        assert_eq!(g.ranks["K"], 6);
        let p = classify_report(&four_eight::p_basis()[0], 1e-9).unwrap();
        assert_eq!(p.class.as_deref(), Some("CLOSED-ORBIT-SUBSPACE"));
        assert!(matches!(
            classify_report(&AntisymTensor::zeros(2, 4), 1e-9),
            Err(Error::UnsupportedShape { fermions: 2, modes: 4 })
        ));
        let inv = invariants_report(&psi_minus(), 1e-9).unwrap();
        assert!((Cplx::from(inv.invariants["DetB"]) - c64(1.0, 0.0)).norm() < 1e-12);
    }
}
