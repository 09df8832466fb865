//! Seeded random draws of states, coordinates and mode transformations.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::cluster::{SevenModeCC, SixModeCC};
use crate::multilinear::{combinations, AntisymMat3, AntisymTensor, Cplx, Mat3, SloccMatrix, Vec3};

/// Real and imaginary parts uniform in `[-1, 1)`.
pub fn cplx<R: Rng>(r: &mut R) -> Cplx {
    Cplx::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn gaussian<R: Rng>(r: &mut R) -> Cplx {
    Cplx::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

pub fn mat3<R: Rng>(r: &mut R) -> Mat3 {
    Mat3::from_fn(|_, _| cplx(r))
}

pub fn antisym3<R: Rng>(r: &mut R) -> AntisymMat3 {
    AntisymMat3::from_vector(Vec3([cplx(r), cplx(r), cplx(r)]))
}

/// Every component of an `(n, N)` tensor drawn independently.
pub fn tensor<R: Rng>(r: &mut R, fermions: usize, modes: usize) -> AntisymTensor {
    AntisymTensor::from_sorted(
        fermions,
        modes,
        combinations(modes, fermions).into_iter().map(|i| (i, cplx(r))),
    )
    .expect("complete index set")
}

/// Complex Ginibre matrix; invertible with probability one. Draws with
/// `|det| < 1e-6` are rejected.
pub fn gl<R: Rng>(r: &mut R, n: usize) -> SloccMatrix {
    loop {
        if let Ok(s) = SloccMatrix::new(DMatrix::from_fn(n, n, |_, _| gaussian(r))) {
            if s.det().norm() > 1e-6 {
                return s;
            }
        }
    }
}

pub fn cc6<R: Rng>(r: &mut R) -> SixModeCC {
    SixModeCC { x: mat3(r), y: mat3(r), xi: cplx(r) }
}

pub fn cc7<R: Rng>(r: &mut R) -> SevenModeCC {
    SevenModeCC { xi: cplx(r), x: mat3(r), y: mat3(r), z: mat3(r), v: antisym3(r), u: antisym3(r) }
}

/// `Y = V = 0`.
pub fn cc7_singles_free<R: Rng>(r: &mut R) -> SevenModeCC {
    SevenModeCC { y: Mat3::zero(), v: AntisymMat3::zero(), ..cc7(r) }
}

/// `Y = V = U = 0` with `Z = G X⁻¹` for a random symmetric `G`, so that
/// `ZX = G` is symmetric.
pub fn cc7_compatible<R: Rng>(r: &mut R) -> SevenModeCC {
    let x = loop {
        let x = mat3(r);
        if x.det().norm() > 1e-3 {
            break x;
        }
    };
    let g = mat3(r).symmetric_part();
    let z = g * x.adjugate() * (Cplx::new(1.0, 0.0) / x.det());
    SevenModeCC { xi: cplx(r), x, y: Mat3::zero(), z, v: AntisymMat3::zero(), u: AntisymMat3::zero() }
}
