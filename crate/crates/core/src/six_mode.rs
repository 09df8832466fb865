//! Three fermions on six modes: the covariant `K`, the quartic invariant
//! `D`, the dual state, the Q-polynomials and the orbit ladder
//! NULL ⊂ SEP ⊂ BISEP ⊂ W ⊂ GHZ.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cluster::{ci6_from_tensor, tensor_from_ci6, SixModeCC, SixModeCI};
use crate::multilinear::{combinations, levi_civita, AntisymTensor, Cplx, Mat3};
use crate::Result;

/// `K^μ_ν`, row `μ` (upper index), column `ν` (lower index).
pub type CovariantK = DMatrix<Cplx>;

/// `K^μ_ν = (1/12) ε^{μρ1…ρ5} ψ_{νρ1ρ2} ψ_{ρ3ρ4ρ5}`.
///
/// The twelve orderings of each split of the five remaining modes into a
/// pair and a triple contribute equally, so only the ten splits are summed.
pub fn covariant_k(t: &AntisymTensor) -> Result<CovariantK> {
    check(t)?;
    let mut k = DMatrix::zeros(6, 6);
    for mu in 0..6 {
        let rest: Vec<usize> = (0..6).filter(|&m| m != mu).collect();
        for pair in combinations(5, 2) {
            let p = [rest[pair[0]], rest[pair[1]]];
            let tri: Vec<usize> = rest.iter().copied().filter(|m| !p.contains(m)).collect();
            let sign = f64::from(levi_civita(&[mu, p[0], p[1], tri[0], tri[1], tri[2]]));
            let tail = t.get(&tri) * sign;
            for nu in 0..6 {
                k[(mu, nu)] += t.get(&[nu, p[0], p[1]]) * tail;
            }
        }
    }
    Ok(k)
}

fn check(t: &AntisymTensor) -> Result<()> {
    if (t.fermions(), t.modes()) != (3, 6) {
        return Err(crate::Error::DimensionMismatch {
            expected: "3 fermions on 6 modes".into(),
            found: format!("{} fermions on {} modes", t.fermions(), t.modes()),
        });
    }
    Ok(())
}

/// `D = Tr(K²)/6`.
pub fn quartic_d_from_k(k: &CovariantK) -> Cplx {
    (k * k).trace() / 6.0
}

pub fn quartic_d(t: &AntisymTensor) -> Result<Cplx> {
    Ok(quartic_d_from_k(&covariant_k(t)?))
}

/// `κ` with `2κ = αβ − Tr(AB)`.
pub fn kappa(c: &SixModeCI) -> Cplx {
    (c.alpha * c.beta - (c.a * c.b).trace()) * 0.5
}

/// `D = 4[κ² − Tr(A♯B♯) + α DetA + β DetB]`.
pub fn quartic_d_ci(c: &SixModeCI) -> Cplx {
    let k = kappa(c);
    (k * k - c.a.adjugate().pairing(&c.b.adjugate()) + c.alpha * c.a.det() + c.beta * c.b.det()) * 4.0
}

/// `D = ξ² + 4 DetX`; the singles `Y` do not enter.
pub fn quartic_d_cc(c: &SixModeCC) -> Cplx {
    c.xi * c.xi + c.x.det() * 4.0
}

/// Coordinates of the dual state `ψ̃` in the CI layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualStateCoords {
    pub alpha: Cplx,
    pub a: Mat3,
    pub b: Mat3,
    pub beta: Cplx,
}

impl DualStateCoords {
    pub fn as_ci(&self) -> SixModeCI {
        SixModeCI {
            alpha: self.alpha,
            a: self.a,
            b: self.b,
            beta: self.beta,
        }
    }

    /// The dual as a tensor; it transforms like `ψ` up to a factor `Det S`.
    pub fn to_tensor(&self) -> AntisymTensor {
        tensor_from_ci6(&self.as_ci())
    }

    pub fn max_abs(&self) -> f64 {
        self.as_ci().max_abs()
    }
}

/// `α̃ = 2ακ + 2DetB`, `Ã = 2(βB♯ − 2B×A♯) − 2κA`,
/// `β̃ = −2βκ − 2DetA`, `B̃ = −2(αA♯ − 2A×B♯) + 2κB`.
pub fn dual_state(c: &SixModeCI) -> DualStateCoords {
    let k = kappa(c);
    let (a, b) = (c.a, c.b);
    let (ash, bsh) = (a.adjugate(), b.adjugate());
    DualStateCoords {
        alpha: c.alpha * k * 2.0 + b.det() * 2.0,
        a: (bsh * c.beta - b.cross(&ash).scale_re(2.0)).scale_re(2.0) - a * (k * 2.0),
        b: (ash * c.alpha - a.cross(&bsh).scale_re(2.0)).scale_re(-2.0) + b * (k * 2.0),
        beta: -(c.beta * k * 2.0) - a.det() * 2.0,
    }
}

/// `Q1 = αβI − AB`, `Q2 = A♯ − βB`, `Q3 = B♯ − αA`.
pub fn q_polynomials(c: &SixModeCI) -> (Mat3, Mat3, Mat3) {
    (
        Mat3::identity() * (c.alpha * c.beta) - c.a * c.b,
        c.a.adjugate() - c.b * c.beta,
        c.b.adjugate() - c.a * c.alpha,
    )
}

/// Six-mode SLOCC orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SixClass {
    Null,
    Sep,
    Bisep,
    W,
    Ghz,
}

impl SixClass {
    pub const ALL: [SixClass; 5] = [SixClass::Null, SixClass::Sep, SixClass::Bisep, SixClass::W, SixClass::Ghz];

    pub fn label(self) -> &'static str {
        match self {
            SixClass::Null => "NULL",
            SixClass::Sep => "SEP",
            SixClass::Bisep => "BISEP",
            SixClass::W => "W",
            SixClass::Ghz => "GHZ",
        }
    }
}

impl fmt::Display for SixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classification result with the witnesses that decided it. Norms are
/// max-abs norms; `scale` is the largest amplitude of the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixClassReport {
    pub class: SixClass,
    pub d: Cplx,
    pub dual_norm: f64,
    pub k_norm: f64,
    pub q_norms: [f64; 3],
    pub scale: f64,
    pub tol: f64,
}

/// Ladder `|D| > τs⁴ → GHZ`, `‖ψ̃‖ > τs³ → W`, `‖K‖ > τs² → BISEP`,
/// `‖ψ‖ > τs → SEP`, otherwise NULL, with `s = max |ψ|`.
pub fn classify6(t: &AntisymTensor, tol: f64) -> Result<SixClassReport> {
    let k = covariant_k(t)?;
    let ci = ci6_from_tensor(t)?;
    let d = quartic_d_from_k(&k);
    let dual_norm = dual_state(&ci).max_abs();
    let k_norm = k.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let (q1, q2, q3) = q_polynomials(&ci);
    let scale = t.max_abs();
    let class = if scale == 0.0 {
        SixClass::Null
    } else if d.norm() > tol * scale.powi(4) {
        SixClass::Ghz
    } else if dual_norm > tol * scale.powi(3) {
        SixClass::W
    } else if k_norm > tol * scale.powi(2) {
        SixClass::Bisep
    } else if scale > tol * scale {
        SixClass::Sep
    } else {
        SixClass::Null
    };
    Ok(SixClassReport {
        class,
        d,
        dual_norm,
        k_norm,
        q_norms: [q1.max_abs(), q2.max_abs(), q3.max_abs()],
        scale,
        tol,
    })
}

/// Canonical representatives
/// `GHZ = p^{123} + p^{12̄3̄} + p^{1̄23̄} + p^{1̄2̄3}`, `W` drops the last
/// term, `BISEP` the last two, `SEP = p^{123}`.
pub fn canonical6(class: SixClass) -> AntisymTensor {
    let terms: &[[usize; 3]] = match class {
        SixClass::Null => &[],
        SixClass::Sep => &[[0, 1, 2]],
        SixClass::Bisep => &[[0, 1, 2], [0, 4, 5]],
        SixClass::W => &[[0, 1, 2], [0, 4, 5], [3, 1, 5]],
        SixClass::Ghz => &[[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]],
    };
    let mut t = AntisymTensor::zeros(3, 6);
    for m in terms {
        t.add_term(m, Cplx::new(1.0, 0.0)).expect("valid modes");
    }
    t
}
