use serde::{Deserialize, Serialize};

use super::{vir, EXTRA};
use crate::multilinear::{levi_civita, AntisymMat3, AntisymTensor, Cplx, Mat3, Vec3};
use crate::{Error, Result};

const ONE: Cplx = Cplx::new(1.0, 0.0);
const ZERO: Cplx = Cplx::new(0.0, 0.0);

/// Tolerance on `|α − 1|` accepted as intermediate normalization.
const NORMALIZATION_TOL: f64 = 1e-12;

/// Six-mode CI coordinates `(α, A, B, β)`.
///
/// `A^a_i` (row `a` virtual, column `i` occupied) collects the doubles,
/// `B^i_a` (row `i` occupied) the singles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SixModeCI {
    pub alpha: Cplx,
    pub a: Mat3,
    pub b: Mat3,
    pub beta: Cplx,
}

/// Six-mode CC coordinates `(X, Y, ξ)` in intermediate normalization
/// (`η = 1`). `X^a_i` rows are virtual, `Y^i_a` rows occupied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SixModeCC {
    pub x: Mat3,
    pub y: Mat3,
    pub xi: Cplx,
}

/// Seven-mode CI coordinates. `D_{ka}` has occupied rows; `E` lives on the
/// occupied modes and `F` on `1̄, 2̄, 3̄`, both paired with `4̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SevenModeCI {
    pub alpha: Cplx,
    pub beta: Cplx,
    pub a: Mat3,
    pub b: Mat3,
    pub d: Mat3,
    pub e: AntisymMat3,
    pub f: AntisymMat3,
}

/// Seven-mode CC coordinates with `η = 1`. `Z_{ka}` has occupied rows,
/// `V` carries the `4̄` singles and `U` the `4̄` triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SevenModeCC {
    pub xi: Cplx,
    pub x: Mat3,
    pub y: Mat3,
    pub z: Mat3,
    pub v: AntisymMat3,
    pub u: AntisymMat3,
}

/// Coordinates divided by the reference amplitude; `scale` is the factor
/// removed, so the original state is `scale` times the normalized one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalized<T> {
    pub coords: T,
    pub scale: Cplx,
}

impl<T> Normalized<T> {
    /// True when the input already had unit reference amplitude.
    pub fn was_rescaled(&self) -> bool {
        (self.scale - ONE).norm() > NORMALIZATION_TOL
    }
}

fn check_shape(t: &AntisymTensor, modes: usize) -> Result<()> {
    if t.fermions() != 3 || t.modes() != modes {
        return Err(Error::DimensionMismatch {
            expected: format!("3 fermions on {modes} modes"),
            found: format!("{} fermions on {} modes", t.fermions(), t.modes()),
        });
    }
    Ok(())
}

fn eps(i: usize, j: usize, k: usize) -> f64 {
    f64::from(levi_civita(&[i, j, k]))
}

/// Reads `A^a_i = ½ ε^{abc} ψ_{b̄c̄i}` and `B^i_a` (the amplitude with the
/// `i`-th occupied slot replaced by `ā`).
fn read_ab(t: &AntisymTensor) -> (Mat3, Mat3) {
    let a = Mat3::from_fn(|a, i| {
        let mut s = ZERO;
        for b in 0..3 {
            for c in 0..3 {
                let e = eps(a, b, c);
                if e != 0.0 {
                    s += t.get(&[vir(b), vir(c), i]) * (0.5 * e);
                }
            }
        }
        s
    });
    let b = Mat3::from_fn(|i, a| {
        let mut slots = [0, 1, 2];
        slots[i] = vir(a);
        t.get(&slots)
    });
    (a, b)
}

fn write_ab(t: &mut AntisymTensor, a: &Mat3, b: &Mat3) {
    for i in 0..3 {
        for x in 0..3 {
            let mut slots = [0, 1, 2];
            slots[i] = vir(x);
            t.add_term(&slots, b[(i, x)]).expect("valid indices");
            // ψ_{b̄c̄i} = ε_{abc} A^a_i for the single (b, c) with b < c
            let (y, z) = match x {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            t.add_term(&[vir(y), vir(z), i], a[(x, i)] * eps(x, y, z))
                .expect("valid indices");
        }
    }
}

/// CI coordinates of a six-mode state. `α` is the raw reference amplitude.
pub fn ci6_from_tensor(t: &AntisymTensor) -> Result<SixModeCI> {
    check_shape(t, 6)?;
    let (a, b) = read_ab(t);
    Ok(SixModeCI {
        alpha: t.get(&[0, 1, 2]),
        a,
        b,
        beta: t.get(&[3, 4, 5]),
    })
}

pub fn tensor_from_ci6(c: &SixModeCI) -> AntisymTensor {
    let mut t = AntisymTensor::zeros(3, 6);
    t.add_term(&[0, 1, 2], c.alpha).expect("valid indices");
    t.add_term(&[3, 4, 5], c.beta).expect("valid indices");
    write_ab(&mut t, &c.a, &c.b);
    t
}

pub fn ci7_from_tensor(t: &AntisymTensor) -> Result<SevenModeCI> {
    check_shape(t, 7)?;
    let (a, b) = read_ab(t);
    let d = Mat3::from_fn(|k, x| t.get(&[k, vir(x), EXTRA]));
    let e = Mat3::from_fn(|j, k| t.get(&[j, k, EXTRA]));
    let f = Mat3::from_fn(|x, y| t.get(&[vir(x), vir(y), EXTRA]));
    Ok(SevenModeCI {
        alpha: t.get(&[0, 1, 2]),
        beta: t.get(&[3, 4, 5]),
        a,
        b,
        d,
        e: AntisymMat3::from_matrix_unchecked(&e),
        f: AntisymMat3::from_matrix_unchecked(&f),
    })
}

pub fn tensor_from_ci7(c: &SevenModeCI) -> AntisymTensor {
    let mut t = AntisymTensor::zeros(3, 7);
    t.add_term(&[0, 1, 2], c.alpha).expect("valid indices");
    t.add_term(&[3, 4, 5], c.beta).expect("valid indices");
    write_ab(&mut t, &c.a, &c.b);
    let (e, f) = (c.e.to_matrix(), c.f.to_matrix());
    for r in 0..3 {
        for s in 0..3 {
            t.add_term(&[r, vir(s), EXTRA], c.d[(r, s)]).expect("valid indices");
            if r < s {
                t.add_term(&[r, s, EXTRA], e[(r, s)]).expect("valid indices");
                t.add_term(&[vir(r), vir(s), EXTRA], f[(r, s)]).expect("valid indices");
            }
        }
    }
    t
}

fn normalization(alpha: Cplx, t: &AntisymTensor) -> Result<Cplx> {
    if alpha.norm() <= NORMALIZATION_TOL * t.max_abs() || alpha == ZERO {
        return Err(Error::ReferenceDeficient {
            suggestion: suggest_reference(t),
        });
    }
    Ok(alpha)
}

impl SixModeCI {
    /// Divides by `α`, so that the result has `α = 1` exactly.
    pub fn from_tensor_normalized(t: &AntisymTensor) -> Result<Normalized<Self>> {
        let c = ci6_from_tensor(t)?;
        let scale = normalization(c.alpha, t)?;
        let inv = ONE / scale;
        Ok(Normalized {
            coords: Self {
                alpha: ONE,
                a: c.a * inv,
                b: c.b * inv,
                beta: c.beta * inv,
            },
            scale,
        })
    }

    pub fn max_abs(&self) -> f64 {
        [self.alpha.norm(), self.a.max_abs(), self.b.max_abs(), self.beta.norm()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        [
            (self.alpha - o.alpha).norm(),
            self.a.max_diff(&o.a),
            self.b.max_diff(&o.b),
            (self.beta - o.beta).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl SevenModeCI {
    pub fn from_tensor_normalized(t: &AntisymTensor) -> Result<Normalized<Self>> {
        let c = ci7_from_tensor(t)?;
        let scale = normalization(c.alpha, t)?;
        let inv = ONE / scale;
        Ok(Normalized {
            coords: Self {
                alpha: ONE,
                beta: c.beta * inv,
                a: c.a * inv,
                b: c.b * inv,
                d: c.d * inv,
                e: AntisymMat3::from_vector(c.e.v.scale(inv)),
                f: AntisymMat3::from_vector(c.f.v.scale(inv)),
            },
            scale,
        })
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        [
            (self.alpha - o.alpha).norm(),
            (self.beta - o.beta).norm(),
            self.a.max_diff(&o.a),
            self.b.max_diff(&o.b),
            self.d.max_diff(&o.d),
            (self.e.v - o.e.v).max_abs(),
            (self.f.v - o.f.v).max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl SixModeCC {
    pub fn max_diff(&self, o: &Self) -> f64 {
        [self.x.max_diff(&o.x), self.y.max_diff(&o.y), (self.xi - o.xi).norm()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        [self.x.max_abs(), self.y.max_abs(), self.xi.norm()].into_iter().fold(0.0, f64::max)
    }
}

impl SevenModeCC {
    /// The six-mode part `(X, Y, ξ)`.
    pub fn six(&self) -> SixModeCC {
        SixModeCC {
            x: self.x,
            y: self.y,
            xi: self.xi,
        }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        [
            (self.xi - o.xi).norm(),
            self.x.max_diff(&o.x),
            self.y.max_diff(&o.y),
            self.z.max_diff(&o.z),
            (self.v.v - o.v.v).max_abs(),
            (self.u.v - o.u.v).max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.xi.norm(),
            self.x.max_abs(),
            self.y.max_abs(),
            self.z.max_abs(),
            self.v.max_abs(),
            self.u.max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn require_normalized(alpha: Cplx) -> Result<()> {
    if (alpha - ONE).norm() > NORMALIZATION_TOL {
        return Err(Error::NotIntermediateNormalized {
            re: alpha.re,
            im: alpha.im,
        });
    }
    Ok(())
}

/// `Y = B`, `X = A − B♯`, `ξ = β − DetB − Tr(XB)`.
pub fn cc6_from_ci6(c: &SixModeCI) -> Result<SixModeCC> {
    require_normalized(c.alpha)?;
    let x = c.a - c.b.adjugate();
    Ok(SixModeCC {
        x,
        y: c.b,
        xi: c.beta - c.b.det() - (x * c.b).trace(),
    })
}

/// `B = Y`, `A = Y♯ + X`, `β = DetY + Tr(XY) + ξ`.
pub fn ci6_from_cc6(c: &SixModeCC) -> SixModeCI {
    SixModeCI {
        alpha: ONE,
        a: c.y.adjugate() + c.x,
        b: c.y,
        beta: c.y.det() + (c.x * c.y).trace() + c.xi,
    }
}

/// Antisymmetric matrix whose dual vector is `w`.
fn bracket(w: Vec3) -> Mat3 {
    AntisymMat3::from_vector(w).to_matrix()
}

/// Inverse of [`ci7_from_cc7`]: `Y = B`, `V = E`, `X = A − B♯`,
/// `Z = D − EB`, `ξ = β − Tr(XB) − DetB`,
/// `U = F + (ZᵀB − BᵀZ) − [(X + B♯) v]`.
pub fn cc7_from_ci7(c: &SevenModeCI) -> Result<SevenModeCC> {
    require_normalized(c.alpha)?;
    let b = c.b;
    let x = c.a - b.adjugate();
    let e = c.e.to_matrix();
    let z = c.d - e * b;
    let comm = z.transpose() * b - b.transpose() * z;
    let u = c.f.to_matrix() + comm - bracket((x + b.adjugate()).mul_vec(&c.e.v));
    Ok(SevenModeCC {
        xi: c.beta - (x * b).trace() - b.det(),
        x,
        y: b,
        z,
        v: c.e,
        u: AntisymMat3::from_matrix_unchecked(&u),
    })
}

/// `B = Y`, `A = X + Y♯`, `β = ξ + Tr(XY) + DetY`, `D = Z + VY`, `E = V`,
/// `F = U − (ZᵀY − YᵀZ) + [(X + Y♯) v]`.
pub fn ci7_from_cc7(c: &SevenModeCC) -> SevenModeCI {
    let y = c.y;
    let v = c.v.to_matrix();
    let comm = c.z.transpose() * y - y.transpose() * c.z;
    let f = c.u.to_matrix() - comm + bracket((c.x + y.adjugate()).mul_vec(&c.v.v));
    SevenModeCI {
        alpha: ONE,
        beta: c.xi + (c.x * y).trace() + y.det(),
        a: c.x + y.adjugate(),
        b: y,
        d: c.z + v * y,
        e: c.v,
        f: AntisymMat3::from_matrix_unchecked(&f),
    }
}

/// Occupied set whose Slater amplitude is largest, or `None` for the zero
/// tensor. Relabelling these modes as `1..n` gives a usable reference.
pub fn suggest_reference(t: &AntisymTensor) -> Option<Vec<usize>> {
    t.iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(idx, _)| idx)
}
