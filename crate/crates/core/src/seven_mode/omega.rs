//! The 6×6 antisymmetric form `ω` carried by the `4̄` components and the
//! factorization `J = ¼ Pf(ω) D(ψ)`.

use serde::{Deserialize, Serialize};

use crate::cluster::{cc_exponential_state6, SevenModeCC, SevenModeCI, SixModeCC};
use crate::multilinear::{pfaffian6, Cplx, Mat6};
use crate::oracle::{apply_ops, FockVector, ModeOp};
use crate::seven_mode::covariants7;
use crate::six_mode::quartic_d_cc;
use crate::{Error, Result};

/// `ω = [[E, D], [−Dᵀ, F]]` on the modes `1, 2, 3, 1̄, 2̄, 3̄`.
pub fn omega_matrix(c: &SevenModeCI) -> Mat6 {
    let (e, f) = (c.e.to_matrix(), c.f.to_matrix());
    let mut w = Mat6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            w[(i, j)] = e[(i, j)];
            w[(i, j + 3)] = c.d[(i, j)];
            w[(j + 3, i)] = -c.d[(i, j)];
            w[(i + 3, j + 3)] = f[(i, j)];
        }
    }
    w
}

/// `ω` of the singles-free state: `D = Z`, `E = 0`, `F = U`.
fn omega_cc(cc: &SevenModeCC) -> Mat6 {
    omega_matrix(&crate::cluster::ci7_from_cc7(&SevenModeCC {
        y: crate::multilinear::Mat3::zero(),
        v: crate::multilinear::AntisymMat3::zero(),
        ..*cc
    }))
}

/// `ZX` symmetric and `U = 0`, each within `tol` relative to the inputs.
pub fn compatible(cc: &SevenModeCC, tol: f64) -> bool {
    let zx = cc.z * cc.x;
    let scale = cc.z.max_abs() * cc.x.max_abs();
    zx.antisymmetric_part().max_abs() <= tol * scale.max(f64::MIN_POSITIVE) && cc.u.max_abs() <= tol * cc.max_abs()
}

/// Max-abs amplitude of `ω̂|ψ⟩` relative to `max|ω| · max|ψ|`, where
/// `ψ = e^{T̂2+T̂3}|ψ₀⟩` is the six-mode part built from `(X, ξ)` and
/// `ω̂ = Σ_{μ<ν} ω_{μν} p^μ p^ν p^{4̄}` with `ω = [[0, Z], [−Zᵀ, U]]`.
pub fn omega_action_norm(cc: &SevenModeCC) -> f64 {
    let six = cc_exponential_state6(&SixModeCC {
        x: cc.x,
        y: crate::multilinear::Mat3::zero(),
        xi: cc.xi,
    });
    let psi = FockVector::from_tensor(&six.embed(7).expect("six modes embed in seven"));
    let w = omega_cc(cc);
    let mut out = FockVector::zero(7);
    for mu in 0..6 {
        for nu in mu + 1..6 {
            if w[(mu, nu)] != Cplx::new(0.0, 0.0) {
                let term = apply_ops(&psi, &[ModeOp::Create(mu), ModeOp::Create(nu), ModeOp::Create(6)]);
                out.add_scaled(&term, w[(mu, nu)]);
            }
        }
    }
    let scale = w.iter().map(|x| x.norm()).fold(0.0, f64::max) * psi.max_abs();
    if scale == 0.0 {
        0.0
    } else {
        out.max_abs() / scale
    }
}

/// Both sides of `J(Ψ) = ¼ Pf(ω) D(ψ)`, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    /// `J` of the full tensor from the covariants.
    pub j: Cplx,
    pub pfaffian: Cplx,
    /// `D(ψ) = ξ² + 4 DetX` of the six-mode part.
    pub d: Cplx,
    pub residual: f64,
    pub relative: f64,
}

/// Requires `Y = V = U = 0` and `ZX` symmetric within `tol`.
pub fn factorization_check(cc: &SevenModeCC, tol: f64) -> Result<FactorizationReport> {
    if cc.y.max_abs() > 0.0 || cc.v.max_abs() > 0.0 {
        return Err(Error::Precondition("factorization needs Y = V = 0".into()));
    }
    if !compatible(cc, tol) {
        return Err(Error::Precondition("factorization needs U = 0 and ZX symmetric".into()));
    }
    let state = crate::cluster::cc_exponential_state7(cc);
    let j = covariants7(&state)?.j();
    let pfaffian = pfaffian6(&omega_cc(cc), tol)?;
    let d = quartic_d_cc(&cc.six());
    let rhs = pfaffian * d * 0.25;
    let residual = (j - rhs).norm();
    Ok(FactorizationReport {
        j,
        pfaffian,
        d,
        residual,
        relative: residual / j.norm().max(rhs.norm()).max(f64::MIN_POSITIVE),
    })
}
