//! GHZ-like seven-mode states `Ψ±` under a triples perturbation
//! `ξ p^{1̄2̄3̄} + u^1̄ p^{2̄3̄4̄} + u^2̄ p^{3̄1̄4̄} + u^3̄ p^{1̄2̄4̄}`.
//!
//! Along `Φ₋` the invariant is `J = 1 − Q²/4` with `Q² = ξ² + u·u`, so the
//! state leaves the dense orbit on the quadric `Q² = 4`. Along `Φ₊`,
//! `J = −(1 + Q²/4)`, which never vanishes for real parameters.

use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::SevenModeCC;
use crate::multilinear::{AntisymMat3, AntisymTensor, Cplx, Mat3, Vec3};
use crate::seven_mode::{classify7, covariants7, invariant_j_cc, SevenClass};
use crate::Result;

const ONE: Cplx = Cplx::new(1.0, 0.0);

/// Unperturbed state: `Ψ₋` (`X = −I`) or `Ψ₊` (`X = I`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Minus,
    Plus,
}

impl Base {
    fn sign(self) -> f64 {
        match self {
            Base::Minus => -1.0,
            Base::Plus => 1.0,
        }
    }
}

/// Triples perturbation `(ξ, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TriplesPerturbation {
    pub xi: Cplx,
    pub u: Vec3,
}

impl TriplesPerturbation {
    pub fn new(xi: Cplx, u: [Cplx; 3]) -> Self {
        Self { xi, u: Vec3(u) }
    }

    pub fn real(xi: f64, u: [f64; 3]) -> Self {
        Self::new(Cplx::new(xi, 0.0), u.map(|x| Cplx::new(x, 0.0)))
    }

    /// `Q² = ξ² + (u^1̄)² + (u^2̄)² + (u^3̄)²`.
    pub fn q_squared(&self) -> Cplx {
        self.xi * self.xi + self.u.dot(&self.u)
    }
}

/// `p^{123} ± (p^{12̄3̄} + p^{23̄1̄} + p^{31̄2̄}) + (p^{11̄} + p^{22̄} + p^{33̄}) p^{4̄}`,
/// with the minus sign for `Ψ₋`.
pub fn psi_base(base: Base) -> AntisymTensor {
    perturb(base, &TriplesPerturbation::default())
}

pub fn psi_minus() -> AntisymTensor {
    psi_base(Base::Minus)
}

pub fn psi_plus() -> AntisymTensor {
    psi_base(Base::Plus)
}

pub fn perturb(base: Base, p: &TriplesPerturbation) -> AntisymTensor {
    let s = Cplx::new(base.sign(), 0.0);
    let terms: [(&[usize], Cplx); 11] = [
        (&[0, 1, 2], ONE),
        (&[0, 4, 5], s),
        (&[1, 5, 3], s),
        (&[2, 3, 4], s),
        (&[0, 3, 6], ONE),
        (&[1, 4, 6], ONE),
        (&[2, 5, 6], ONE),
        (&[3, 4, 5], p.xi),
        (&[4, 5, 6], p.u[0]),
        (&[5, 3, 6], p.u[1]),
        (&[3, 4, 6], p.u[2]),
    ];
    AntisymTensor::from_terms(3, 7, terms).expect("valid modes")
}

/// CC coordinates of the perturbed state: `X = ∓I`, `Z = I`, `U = [u]`,
/// `Y = V = 0`.
pub fn cc_coords(base: Base, p: &TriplesPerturbation) -> SevenModeCC {
    SevenModeCC {
        xi: p.xi,
        x: Mat3::identity().scale_re(base.sign()),
        y: Mat3::zero(),
        z: Mat3::identity(),
        v: AntisymMat3::zero(),
        u: AntisymMat3::from_vector(p.u),
    }
}

/// `J` on the family: `1 − Q²/4` for `Φ₋`, `−(1 + Q²/4)` for `Φ₊`.
pub fn j_formula(base: Base, p: &TriplesPerturbation) -> Cplx {
    let q2 = p.q_squared();
    match base {
        Base::Minus => ONE - q2 / 4.0,
        Base::Plus => -(ONE + q2 / 4.0),
    }
}

/// Closed block form of `B = −N/6` on the family.
pub fn b_matrix_formula(base: Base, p: &TriplesPerturbation) -> DMatrix<Cplx> {
    let u = AntisymMat3::from_vector(p.u).to_matrix();
    let xi_i = Mat3::identity() * p.xi;
    let (top, left, corner) = match base {
        Base::Minus => (xi_i + u, xi_i - u, ONE),
        Base::Plus => (xi_i - u, xi_i + u, -ONE),
    };
    let mut b = DMatrix::zeros(7, 7);
    for i in 0..3 {
        b[(i, i)] = corner;
        b[(i + 3, i + 3)] = ONE;
        for j in 0..3 {
            b[(i, j + 3)] = top[(i, j)] * -0.5;
            b[(i + 3, j)] = left[(i, j)] * -0.5;
        }
        b[(i, 6)] = p.u[i] * -0.5;
        b[(6, i)] = p.u[i] * -0.5;
    }
    b[(6, 6)] = ONE;
    b
}

/// `B = −N/6` of the perturbed tensor.
pub fn b_matrix(base: Base, p: &TriplesPerturbation) -> Result<DMatrix<Cplx>> {
    Ok(covariants7(&perturb(base, p))?.b())
}

/// Predicted spectrum of `B` with `Q` the principal square root of `Q²`:
/// `{1 − Q/2 (×3), 1 + Q/2 (×3), 1}` for `Φ₋`,
/// `{±√(1 + Q²/4) (×3 each), 1}` for `Φ₊`.
pub fn expected_spectrum(base: Base, p: &TriplesPerturbation) -> Vec<Cplx> {
    let q2 = p.q_squared();
    let (lo, hi) = match base {
        Base::Minus => {
            let q = q2.sqrt();
            (ONE - q / 2.0, ONE + q / 2.0)
        }
        Base::Plus => {
            let r = (ONE + q2 / 4.0).sqrt();
            (-r, r)
        }
    };
    vec![lo, lo, lo, hi, hi, hi, ONE]
}

/// Complex orthogonal `S` with `SᵀBS` diagonal for `Φ₋`:
/// `S = (√2 Q)⁻¹ [[QI, QI, 0], [ξI − U, U − ξI, √2 u], [uᵀ, −uᵀ, −√2 ξ]]`.
/// `None` when `Q = 0`.
pub fn diagonalizer(p: &TriplesPerturbation) -> Option<DMatrix<Cplx>> {
    let q = p.q_squared().sqrt();
    if q.norm() == 0.0 {
        return None;
    }
    let r2 = std::f64::consts::SQRT_2;
    let u = AntisymMat3::from_vector(p.u).to_matrix();
    let mut s = DMatrix::zeros(7, 7);
    for i in 0..3 {
        s[(i, i)] = q;
        s[(i, i + 3)] = q;
        for j in 0..3 {
            let m = Mat3::identity()[(i, j)] * p.xi - u[(i, j)];
            s[(i + 3, j)] = m;
            s[(i + 3, j + 3)] = -m;
        }
        s[(i + 3, 6)] = p.u[i] * r2;
        s[(6, i)] = p.u[i];
        s[(6, i + 3)] = -p.u[i];
    }
    s[(6, 6)] = -p.xi * r2;
    Some(s / (q * r2))
}

/// `ξ² + u·u − Q₀²`; vanishes on the deformed conifold of radius `Q₀`.
pub fn conifold_residual(p: &TriplesPerturbation, q0: f64) -> Cplx {
    p.q_squared() - q0 * q0
}

/// One evaluated point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub perturbation: TriplesPerturbation,
    pub q_squared: Cplx,
    /// `J` from the covariants of the full tensor.
    pub j: Cplx,
    pub j_formula: Cplx,
    /// `J` from the closed CC form.
    pub j_closed: Cplx,
    pub rank_n: usize,
    pub class: SevenClass,
    pub b_eigenvalues: Vec<Cplx>,
}

pub fn evaluate(base: Base, p: &TriplesPerturbation, tol: f64) -> Result<SweepRecord> {
    let rep = classify7(&perturb(base, p), tol)?;
    Ok(SweepRecord {
        perturbation: *p,
        q_squared: p.q_squared(),
        j: rep.j,
        j_formula: j_formula(base, p),
        j_closed: invariant_j_cc(&cc_coords(base, p))?,
        rank_n: rep.rank_n,
        class: rep.class,
        b_eigenvalues: rep.b_eigenvalues,
    })
}

/// Evaluates every point in parallel; records come back in input order.
pub fn sweep(base: Base, path: &[TriplesPerturbation], tol: f64) -> Result<Vec<SweepRecord>> {
    path.par_iter().map(|p| evaluate(base, p, tol)).collect()
}

/// Points `start, start + step, …` up to `stop` (inclusive within half a
/// step) along one coordinate; `axis` 0 is `ξ`, 1–3 are `u^1̄..u^3̄`.
pub fn ray(axis: usize, start: f64, stop: f64, step: f64) -> Vec<TriplesPerturbation> {
    assert!(axis < 4 && step > 0.0);
    let count = ((stop - start) / step + 0.5).floor().max(-1.0) as i64 + 1;
    (0..count.max(0))
        .map(|k| {
            let x = start + k as f64 * step;
            let mut v = [0.0; 4];
            v[axis] = x;
            TriplesPerturbation::real(v[0], [v[1], v[2], v[3]])
        })
        .collect()
}

/// Uniform real points on the 3-sphere `ξ² + u·u = radius²` from normalized
/// four-dimensional Gaussian draws.
pub fn sample_sphere<R: Rng>(rng: &mut R, radius: f64, count: usize) -> Vec<TriplesPerturbation> {
    (0..count)
        .map(|_| loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                let s = radius / n;
                break TriplesPerturbation::real(g[0] * s, [g[1] * s, g[2] * s, g[3] * s]);
            }
        })
        .collect()
}

/// Complex points with real and imaginary parts uniform in `[-scale, scale]`.
pub fn sample_complex<R: Rng>(rng: &mut R, scale: f64, count: usize) -> Vec<TriplesPerturbation> {
    let mut c = || Cplx::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
    (0..count).map(|_| TriplesPerturbation::new(c(), [c(), c(), c()])).collect()
}

pub const CSV_HEADER: [&str; 16] = [
    "re_xi", "im_xi", "re_u1", "im_u1", "re_u2", "im_u2", "re_u3", "im_u3", "re_q2", "im_q2", "re_j", "im_j", "rank_n",
    "class", "re_j_formula", "im_j_formula",
];

/// Writes records as CSV with [`CSV_HEADER`]; an empty slice gives the
/// header alone.
pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let p = &r.perturbation;
        let mut row: Vec<String> = Vec::with_capacity(16);
        for z in [p.xi, p.u[0], p.u[1], p.u[2], r.q_squared, r.j] {
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        row.push(r.rank_n.to_string());
        row.push(r.class.label().to_string());
        row.push(r.j_formula.re.to_string());
        row.push(r.j_formula.im.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
