//! `J`, `N` and `L` as polynomials in the singles-free CC coordinates
//! `(ξ, X, Z, U)`.

use nalgebra::DMatrix;

use crate::cluster::SevenModeCC;
use crate::multilinear::{levi_civita, Cplx, Mat3, Vec3};
use crate::{Error, Result};

fn eps(i: usize, j: usize, k: usize) -> f64 {
    f64::from(levi_civita(&[i, j, k]))
}

fn require_singles_free(cc: &SevenModeCC) -> Result<()> {
    if cc.y.max_abs() > 0.0 || cc.v.max_abs() > 0.0 {
        return Err(Error::Precondition(
            "closed forms need Y = V = 0; remove the singles first".into(),
        ));
    }
    Ok(())
}

/// `G = ½(ZX + XᵀZᵀ)`.
fn g_matrix(cc: &SevenModeCC) -> Mat3 {
    (cc.z * cc.x).symmetric_part()
}

/// `J = −DetG − ¼[Tr((UX)♯Zᵀ) + ξ Tr(UX (Zᵀ)♯) + ξ² DetZ]`.
///
/// This is `−DetG − Det(UX + ξZᵀ)/(4ξ)` with the division carried out
/// symbolically; it uses `Det(UX) = 0`, which holds because `U` is
/// antisymmetric, and stays regular at `ξ = 0`.
pub fn invariant_j_cc(cc: &SevenModeCC) -> Result<Cplx> {
    require_singles_free(cc)?;
    let ux = cc.u.to_matrix() * cc.x;
    let zt = cc.z.transpose();
    let xi = cc.xi;
    let bracket = ux.adjugate().pairing(&zt) + xi * ux.pairing(&zt.adjugate()) + xi * xi * cc.z.det();
    Ok(-g_matrix(cc).det() - bracket * 0.25)
}

/// The literal `−DetG − Det(UX + ξZᵀ)/(4ξ)`; refuses `|ξ| ≤ 0.1`, where the
/// division loses accuracy.
pub fn invariant_j_cc_unregularized(cc: &SevenModeCC) -> Result<Cplx> {
    require_singles_free(cc)?;
    if cc.xi.norm() <= 0.1 {
        return Err(Error::Precondition("unregularized form needs |xi| > 0.1".into()));
    }
    let m = cc.u.to_matrix() * cc.x + cc.z.transpose() * cc.xi;
    Ok(-g_matrix(cc).det() - m.det() / (cc.xi * 4.0))
}

/// `J = wᵀGw − ¼uᵀHu − ¼DetZ(ξ² + 4DetX) − ¼ξ Tr(UX (Zᵀ)♯)` with
/// `W = ½(ZX − XᵀZᵀ) = [w]` and `H = ½(ZᵀX♯ + X♯ᵀZ)`.
pub fn invariant_j_alt(cc: &SevenModeCC) -> Result<Cplx> {
    require_singles_free(cc)?;
    let zx = cc.z * cc.x;
    let g = zx.symmetric_part();
    let w = crate::multilinear::AntisymMat3::from_matrix_unchecked(&zx.antisymmetric_part()).v;
    let h = (cc.z.transpose() * cc.x.adjugate()).symmetric_part();
    let u = cc.u.v;
    let xi = cc.xi;
    let d6 = xi * xi + cc.x.det() * 4.0;
    let last = xi * (cc.u.to_matrix() * cc.x).pairing(&cc.z.transpose().adjugate());
    Ok(w.dot(&g.mul_vec(&w)) - u.dot(&h.mul_vec(&u)) * 0.25 - cc.z.det() * d6 * 0.25 - last * 0.25)
}

/// `Σ_{klmn} ε_{ikl} ε_{jmn} A_km B_ln`.
fn double_eps(a: &Mat3, b: &Mat3) -> Mat3 {
    Mat3::from_fn(|i, j| {
        let mut s = Cplx::new(0.0, 0.0);
        for k in 0..3 {
            for l in 0..3 {
                let e1 = eps(i, k, l);
                if e1 == 0.0 {
                    continue;
                }
                for m in 0..3 {
                    for n in 0..3 {
                        let e2 = eps(j, m, n);
                        if e2 != 0.0 {
                            s += a[(k, m)] * b[(l, n)] * (e1 * e2);
                        }
                    }
                }
            }
        }
        s
    })
}

/// `ε_{abc} M_{bc}` as a vector.
fn eps_contract(m: &Mat3) -> Vec3 {
    let mut v = [Cplx::new(0.0, 0.0); 3];
    for (a, va) in v.iter_mut().enumerate() {
        for b in 0..3 {
            for c in 0..3 {
                let e = eps(a, b, c);
                if e != 0.0 {
                    *va += m[(b, c)] * e;
                }
            }
        }
    }
    Vec3(v)
}

fn put_block(out: &mut DMatrix<Cplx>, r0: usize, c0: usize, m: &Mat3) {
    for i in 0..3 {
        for j in 0..3 {
            out[(r0 + i, c0 + j)] = m[(i, j)];
            out[(c0 + j, r0 + i)] = m[(i, j)];
        }
    }
}

fn put_vec(out: &mut DMatrix<Cplx>, r0: usize, v: &Vec3) {
    for i in 0..3 {
        out[(r0 + i, 6)] = v[i];
        out[(6, r0 + i)] = v[i];
    }
}

/// `N` and `L` assembled block by block from `(ξ, X, Z, U)`. Rows `0..3`
/// are the occupied modes, `3..6` the virtual ones, `6` is `4̄`.
pub fn closed_form_nl(cc: &SevenModeCC) -> Result<(DMatrix<Cplx>, DMatrix<Cplx>)> {
    require_singles_free(cc)?;
    let (x, z, xi) = (cc.x, cc.z, cc.xi);
    let (u_mat, u) = (cc.u.to_matrix(), cc.u.v);
    let zx = z * x;
    let zt_xsh = z.transpose() * x.adjugate();
    let x_ztsh = x * z.transpose().adjugate();
    let zu = z.mul_vec(&u);

    let mut n = DMatrix::zeros(7, 7);
    put_block(&mut n, 0, 0, &(zx + zx.transpose()).scale_re(3.0));
    put_block(&mut n, 3, 3, &(zt_xsh + zt_xsh.transpose()).scale_re(-3.0));
    n[(6, 6)] = z.det() * -6.0;
    put_block(&mut n, 3, 0, &(u_mat * x + z.transpose() * xi).scale_re(3.0));
    put_vec(&mut n, 0, &zu.scale(Cplx::new(3.0, 0.0)));
    put_vec(&mut n, 3, &eps_contract(&x_ztsh).scale(Cplx::new(-3.0, 0.0)));

    let mut l = DMatrix::zeros(7, 7);
    let l_oo = (zx.adjugate() + zx.transpose().adjugate()).scale_re(-6.0)
        - (double_eps(&zx, &zx.transpose()) + double_eps(&zx.transpose(), &zx)).scale_re(3.0);
    put_block(&mut l, 0, 0, &l_oo);
    put_block(&mut l, 3, 3, &((x_ztsh + x_ztsh.transpose()).scale_re(12.0) + u.outer(&u).scale_re(6.0)));
    l[(6, 6)] = (xi * xi + x.det() * 4.0) * 6.0;
    let eps_zx = eps_contract(&zx);
    let l_ao = Mat3::from_fn(|a, i| {
        let mut s = Cplx::new(0.0, 0.0);
        for j in 0..3 {
            for k in 0..3 {
                let e = eps(i, j, k);
                if e != 0.0 {
                    s += x[(a, j)] * zu[k] * (12.0 * e);
                }
            }
        }
        s + u[a] * eps_zx[i] * 6.0
    }) - z.adjugate() * (xi * 12.0);
    put_block(&mut l, 3, 0, &l_ao);
    let l_o7 = Vec3(std::array::from_fn(|i| {
        let mut s = eps_zx[i] * xi * 6.0;
        for j in 0..3 {
            for k in 0..3 {
                let e = eps(i, j, k);
                if e == 0.0 {
                    continue;
                }
                for a in 0..3 {
                    for b in 0..3 {
                        s -= u_mat[(a, b)] * x[(a, j)] * x[(b, k)] * (6.0 * e);
                    }
                }
            }
        }
        s
    }));
    put_vec(&mut l, 0, &l_o7);
    put_vec(&mut l, 3, &(u.scale(-(xi * 6.0)) + eps_contract(&zt_xsh).scale(Cplx::new(12.0, 0.0))));
    Ok((n, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::cc_exponential_state7;
    use crate::multilinear::{c64, AntisymMat3};
    use crate::seven_mode::covariants7;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(r: &mut ChaCha8Rng) -> Cplx {
        c64(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    }

    fn random_cc(r: &mut ChaCha8Rng) -> SevenModeCC {
        SevenModeCC {
            xi: rc(r),
            x: Mat3::from_fn(|_, _| rc(r)),
            y: Mat3::zero(),
            z: Mat3::from_fn(|_, _| rc(r)),
            v: AntisymMat3::zero(),
            u: AntisymMat3::from_vector(Vec3::new(rc(r), rc(r), rc(r))),
        }
    }

    fn psi_minus() -> SevenModeCC {
        SevenModeCC {
            xi: c64(0.0, 0.0),
            x: -Mat3::identity(),
            y: Mat3::zero(),
            z: Mat3::identity(),
            v: AntisymMat3::zero(),
            u: AntisymMat3::zero(),
        }
    }

    #[test]
    fn psi_minus_coordinates_give_unit_j() {
        let cc = psi_minus();
        assert_eq!(invariant_j_cc(&cc).unwrap(), c64(1.0, 0.0));
        assert_eq!(invariant_j_alt(&cc).unwrap(), c64(1.0, 0.0));
        let (n, _) = closed_form_nl(&cc).unwrap();
        assert_eq!(n, DMatrix::identity(7, 7) * c64(-6.0, 0.0));
    }

    #[test]
    fn closed_forms_match_oracle() {
        let mut r = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..10 {
            let cc = random_cc(&mut r);
            let c = covariants7(&cc_exponential_state7(&cc)).unwrap();
            let j = c.j();
            let tol = 1e-10 * j.norm().max(1.0);
            assert!((invariant_j_cc(&cc).unwrap() - j).norm() < tol);
            assert!((invariant_j_alt(&cc).unwrap() - j).norm() < tol);
            if cc.xi.norm() > 0.1 {
                assert!((invariant_j_cc_unregularized(&cc).unwrap() - j).norm() < 1e-9 * j.norm().max(1.0));
            }
            let (n, l) = closed_form_nl(&cc).unwrap();
            let dn = (&n - &c.n).iter().map(|x| x.norm()).fold(0.0, f64::max);
            let dl = (&l - &c.l).iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(dn < 1e-10 && dl < 1e-10, "{dn} {dl}");
        }
    }

    #[test]
    fn symmetric_zx_without_triples() {
        // J = −DetZ (ξ² + 4DetX) / 4 when ZX is symmetric and U = 0
        let mut r = ChaCha8Rng::seed_from_u64(52);
        let s = Mat3::from_fn(|_, _| rc(&mut r)).symmetric_part();
        let mut cc = random_cc(&mut r);
        cc.u = AntisymMat3::zero();
        cc.z = Mat3::identity();
        cc.x = s;
        let expected = -(cc.xi * cc.xi + s.det() * 4.0) * 0.25;
        assert!((invariant_j_cc(&cc).unwrap() - expected).norm() < 1e-14);
        assert!((invariant_j_alt(&cc).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn l77_carries_six_mode_invariant() {
        let mut r = ChaCha8Rng::seed_from_u64(53);
        let cc = random_cc(&mut r);
        let (_, l) = closed_form_nl(&cc).unwrap();
        assert_eq!(l[(6, 6)], (cc.xi * cc.xi + cc.x.det() * 4.0) * 6.0);
    }

    #[test]
    fn singles_are_rejected() {
        let mut cc = psi_minus();
        cc.y = Mat3::identity();
        assert!(invariant_j_cc(&cc).is_err());
        assert!(closed_form_nl(&cc).is_err());
        let cc = psi_minus();
        assert!(invariant_j_cc_unregularized(&cc).is_err());
    }
}
