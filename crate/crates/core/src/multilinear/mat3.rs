//! 3×3 complex matrix calculus: adjugate, the bilinear cross product
//! derived from it, and the antisymmetric matrix / vector correspondence.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{levi_civita, Cplx};

const ZERO: Cplx = Cplx::new(0.0, 0.0);
const ONE: Cplx = Cplx::new(1.0, 0.0);

/// Three-component complex vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [Cplx; 3]);

impl Vec3 {
    pub fn zero() -> Self {
        Vec3([ZERO; 3])
    }

    pub fn new(x: Cplx, y: Cplx, z: Cplx) -> Self {
        Vec3([x, y, z])
    }

    /// Bilinear (non-conjugating) dot product.
    pub fn dot(&self, other: &Vec3) -> Cplx {
        (0..3).map(|i| self.0[i] * other.0[i]).sum()
    }

    pub fn outer(&self, other: &Vec3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i] * other.0[j])
    }

    pub fn scale(&self, s: Cplx) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Vec3 {
    type Output = Cplx;
    fn index(&self, i: usize) -> &Cplx {
        &self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

/// Dense 3×3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat3(pub [[Cplx; 3]; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag(ONE, ONE, ONE)
    }

    pub fn diag(a: Cplx, b: Cplx, c: Cplx) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| Cplx::new(rows[i][j], 0.0))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> Cplx {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> Cplx {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Transposed cofactor matrix, `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        // cofactor of (r, c), placed at (c, r)
        Self::from_fn(|i, j| {
            let (r, c) = (j, i);
            let rows: Vec<usize> = (0..3).filter(|&k| k != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&k| k != c).collect();
            let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
                - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
            if (r + c) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
    }

    /// Symmetric bilinear form with `cross(A, A) = adj(A)`.
    pub fn cross(&self, other: &Mat3) -> Self {
        ((*self + *other).adjugate() - self.adjugate() - other.adjugate()).scale(Cplx::new(0.5, 0.0))
    }

    pub fn scale(&self, s: Cplx) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Cplx::new(s, 0.0))
    }

    /// Bilinear pairing `(A, B) = Tr(AB)`.
    pub fn pairing(&self, other: &Mat3) -> Cplx {
        (*self * *other).trace()
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| (0..3).map(|j| self.0[i][j] * v.0[j]).sum()))
    }

    pub fn symmetric_part(&self) -> Self {
        (*self + self.transpose()).scale_re(0.5)
    }

    pub fn antisymmetric_part(&self) -> Self {
        (*self - self.transpose()).scale_re(0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_diff(&self, other: &Mat3) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = Cplx;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] + o.0[i][j])
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| self.0[i][j] - o.0[i][j])
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        Mat3::from_fn(|i, j| -self.0[i][j])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum())
    }
}

impl Mul<Cplx> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: Cplx) -> Mat3 {
        self.scale(s)
    }
}

/// Free-function form of [`Mat3::adjugate`].
pub fn adjugate(m: &Mat3) -> Mat3 {
    m.adjugate()
}

/// `½[(A+B)♯ − A♯ − B♯]`.
pub fn cross(a: &Mat3, b: &Mat3) -> Mat3 {
    a.cross(b)
}

/// Residual of `Det(A+B) = DetA + Tr(A♯B) + Tr(AB♯) + DetB`.
pub fn det_sum_identity_check(a: &Mat3, b: &Mat3) -> f64 {
    let lhs = (*a + *b).det();
    let rhs = a.det() + (a.adjugate() * *b).trace() + (*a * b.adjugate()).trace() + b.det();
    (lhs - rhs).norm()
}

/// Antisymmetric 3×3 matrix stored through its dual vector,
/// `M_ij = ε_ijk v^k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AntisymMat3 {
    pub v: Vec3,
}

impl AntisymMat3 {
    pub fn zero() -> Self {
        Self { v: Vec3::zero() }
    }

    pub fn from_vector(v: Vec3) -> Self {
        Self { v }
    }

    /// Extracts `v^i = ½ ε^{ijk} M_jk`. Fails if `M` is not antisymmetric
    /// within `tol` (relative to the largest entry).
    pub fn from_matrix(m: &Mat3, tol: f64) -> crate::Result<Self> {
        let residual = (*m + m.transpose()).max_abs();
        if residual > tol * m.max_abs().max(1.0) {
            return Err(crate::Error::NotAntisymmetric { residual });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    pub(crate) fn from_matrix_unchecked(m: &Mat3) -> Self {
        let mut v = [ZERO; 3];
        for (i, vi) in v.iter_mut().enumerate() {
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(&[i, j, k]);
                    if e != 0 {
                        *vi += m.0[j][k] * (0.5 * e as f64);
                    }
                }
            }
        }
        Self { v: Vec3(v) }
    }

    pub fn to_matrix(&self) -> Mat3 {
        Mat3::from_fn(|i, j| {
            (0..3)
                .map(|k| self.v.0[k] * levi_civita(&[i, j, k]) as f64)
                .sum()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.v.max_abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Cplx {
        Cplx::new(re, 0.0)
    }

    fn sample() -> Mat3 {
        Mat3::from_fn(|i, j| Cplx::new((i * 3 + j) as f64 * 0.7 - 2.0, (i as f64 - j as f64) * 0.3 + 0.1))
    }

    #[test]
    fn adjugate_of_identity_and_zero() {
        assert_eq!(Mat3::identity().adjugate(), Mat3::identity());
        assert_eq!(Mat3::zero().adjugate(), Mat3::zero());
    }

    #[test]
    fn adjugate_of_diagonal() {
        // cofactors by hand: adj(diag(1,2,3)) = diag(2·3, 1·3, 1·2)
        let m = Mat3::diag(c(1.0), c(2.0), c(3.0));
        assert_eq!(m.adjugate(), Mat3::diag(c(6.0), c(3.0), c(2.0)));
    }

    #[test]
    fn adjugate_identity_holds_for_singular_matrix() {
        let m = Mat3::from_real([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 5.0]]);
        assert!(m.det().norm() < 1e-14);
        assert!((m * m.adjugate()).max_abs() < 1e-12);
    }

    #[test]
    fn cross_examples() {
        let m = sample();
        assert_eq!(m.cross(&Mat3::zero()).max_abs(), 0.0);
        assert!(Mat3::identity().cross(&Mat3::identity()).max_diff(&Mat3::identity()) < 1e-15);
        let n = sample().transpose().scale(Cplx::new(0.2, -1.0));
        assert!(m.cross(&n).max_diff(&n.cross(&m)) < 1e-14);
        assert!(m.cross(&m).max_diff(&m.adjugate()) < 1e-12);
    }

    #[test]
    fn det_sum_identity() {
        assert!(det_sum_identity_check(&Mat3::identity(), &Mat3::identity()) < 1e-15);
        let a = sample();
        let b = sample().transpose() * Cplx::new(0.0, 1.3);
        assert!(det_sum_identity_check(&a, &b) < 1e-12 * (a + b).max_abs().powi(3));
    }

    #[test]
    fn antisymmetric_product_has_zero_determinant() {
        let u = AntisymMat3::from_vector(Vec3::new(c(1.0), Cplx::new(0.0, 2.0), c(-0.5)));
        let ux = u.to_matrix() * sample();
        assert!(ux.det().norm() < 1e-12);
    }

    #[test]
    fn antisym_roundtrip_and_rejection() {
        let v = Vec3::new(c(1.0), c(-2.0), Cplx::new(0.5, 0.5));
        let m = AntisymMat3::from_vector(v).to_matrix();
        assert_eq!(m, -m.transpose());
        assert_eq!(m[(0, 1)], v[2]);
        assert_eq!(AntisymMat3::from_matrix(&m, 1e-12).unwrap().v, v);
        assert!(AntisymMat3::from_matrix(&Mat3::identity(), 1e-12).is_err());
    }

    #[test]
    fn outer_product_of_dual_vector_is_adjugate() {
        // for U = [u], u uᵀ = U♯
        let u = Vec3::new(c(0.3), Cplx::new(1.0, -1.0), c(2.0));
        let m = AntisymMat3::from_vector(u).to_matrix();
        assert!(u.outer(&u).max_diff(&m.adjugate()) < 1e-14);
    }
}
