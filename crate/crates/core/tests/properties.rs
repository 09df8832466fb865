//! Property tests over random states, coordinates and mode transformations.

use ccent::cluster::{
    cc6_from_ci6, cc7_from_ci7, cc_exponential_state6, cc_exponential_state7, ci6_from_cc6, ci6_from_tensor,
    ci7_from_cc7, ci7_from_tensor, remove_singles, tensor_from_ci6, tensor_from_ci7, ModeSplit, SevenModeCC,
    SixModeCC,
};
use ccent::linalg::max_diff;
use ccent::multilinear::{
    combinations, pfaffian6, slocc_apply, AntisymMat3, AntisymTensor, Cplx, Mat3, Mat6, SloccMatrix, Vec3,
};
use ccent::seven_mode::{covariants7, invariant_j};
use ccent::six_mode::{covariant_k, quartic_d};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn cplx_vec(n: usize) -> impl Strategy<Value = Vec<Cplx>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(|v| v.into_iter().map(|(a, b)| Cplx::new(a, b)).collect())
}

fn tensor(modes: usize) -> impl Strategy<Value = AntisymTensor> {
    let idx = combinations(modes, 3);
    cplx_vec(idx.len()).prop_map(move |v| AntisymTensor::from_sorted(3, modes, idx.clone().into_iter().zip(v)).unwrap())
}

fn mat3() -> impl Strategy<Value = Mat3> {
    cplx_vec(9).prop_map(|v| Mat3::from_fn(|i, j| v[3 * i + j]))
}

fn antisym3() -> impl Strategy<Value = AntisymMat3> {
    cplx_vec(3).prop_map(|v| AntisymMat3::from_vector(Vec3([v[0], v[1], v[2]])))
}

/// Identity plus a bounded perturbation keeps the transform well conditioned.
fn slocc(n: usize) -> impl Strategy<Value = SloccMatrix> {
    cplx_vec(n * n).prop_filter_map("singular draw", move |v| {
        let m = DMatrix::from_fn(n, n, |i, j| v[n * i + j] * 0.6 + if i == j { Cplx::new(1.0, 0.0) } else { Cplx::new(0.0, 0.0) });
        SloccMatrix::new(m).ok().filter(|s| s.det().norm() > 1e-2)
    })
}

fn cc6() -> impl Strategy<Value = SixModeCC> {
    (mat3(), mat3(), cplx_vec(1)).prop_map(|(x, y, xi)| SixModeCC { x, y, xi: xi[0] })
}

fn cc7() -> impl Strategy<Value = SevenModeCC> {
    (mat3(), mat3(), mat3(), antisym3(), antisym3(), cplx_vec(1))
        .prop_map(|(x, y, z, v, u, xi)| SevenModeCC { xi: xi[0], x, y, z, v, u })
}

fn rel(a: Cplx, b: Cplx) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slocc_composition(t in tensor(7), s1 in slocc(7), s2 in slocc(7)) {
        let stepwise = slocc_apply(&slocc_apply(&t, &s1).unwrap(), &s2).unwrap();
        let composed = slocc_apply(&t, &s1.then(&s2)).unwrap();
        prop_assert!(stepwise.max_diff(&composed) < 1e-10);
    }

    #[test]
    fn adjugate_identity(m in mat3()) {
        let lhs = m * m.adjugate();
        prop_assert!(lhs.max_diff(&(Mat3::identity() * m.det())) < 1e-13);
    }

    #[test]
    fn pfaffian_squares_to_determinant(v in cplx_vec(15)) {
        let mut w = Mat6::zeros();
        let mut k = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                w[(i, j)] = v[k];
                w[(j, i)] = -v[k];
                k += 1;
            }
        }
        let pf = pfaffian6(&w, 1e-12).unwrap();
        prop_assert!(rel(pf * pf, w.determinant()) < 1e-10);
    }

    #[test]
    fn tensor_ci_round_trip(t6 in tensor(6), t7 in tensor(7)) {
        prop_assert_eq!(tensor_from_ci6(&ci6_from_tensor(&t6).unwrap()).max_diff(&t6), 0.0);
        prop_assert_eq!(tensor_from_ci7(&ci7_from_tensor(&t7).unwrap()).max_diff(&t7), 0.0);
    }

    #[test]
    fn dictionaries_invert(c6 in cc6(), c7 in cc7()) {
        prop_assert!(cc6_from_ci6(&ci6_from_cc6(&c6)).unwrap().max_diff(&c6) < 1e-13);
        prop_assert!(cc7_from_ci7(&ci7_from_cc7(&c7)).unwrap().max_diff(&c7) < 1e-13);
    }

    #[test]
    fn dictionaries_match_exponential(c6 in cc6(), c7 in cc7()) {
        prop_assert!(tensor_from_ci6(&ci6_from_cc6(&c6)).max_diff(&cc_exponential_state6(&c6)) < 1e-13);
        prop_assert!(tensor_from_ci7(&ci7_from_cc7(&c7)).max_diff(&cc_exponential_state7(&c7)) < 1e-13);
    }

    #[test]
    fn k_is_covariant(t in tensor(6), s in slocc(6)) {
        let k = covariant_k(&t).unwrap();
        let kt = covariant_k(&slocc_apply(&t, &s).unwrap()).unwrap();
        let m = s.matrix();
        let inv_t = m.clone().try_inverse().unwrap().transpose();
        let expected = inv_t * k * m.transpose() * s.det();
        prop_assert!(max_diff(&kt, &expected) < 1e-9 * (1.0 + ccent::linalg::max_abs(&expected)));
    }

    #[test]
    fn n_and_l_are_covariant(t in tensor(7), s in slocc(7)) {
        let c = covariants7(&t).unwrap();
        let ct = covariants7(&slocc_apply(&t, &s).unwrap()).unwrap();
        let m = s.matrix();
        let inv = m.clone().try_inverse().unwrap();
        let det = s.det();
        let n = m * &c.n * m.transpose() * det;
        let l = inv.transpose() * &c.l * &inv * (det * det);
        prop_assert!(max_diff(&ct.n, &n) < 1e-9 * (1.0 + ccent::linalg::max_abs(&n)));
        prop_assert!(max_diff(&ct.l, &l) < 1e-9 * (1.0 + ccent::linalg::max_abs(&l)));
    }

    #[test]
    fn d_and_j_are_relative_invariants(t6 in tensor(6), s6 in slocc(6), t7 in tensor(7), s7 in slocc(7)) {
        let d = quartic_d(&slocc_apply(&t6, &s6).unwrap()).unwrap();
        prop_assert!(rel(d, quartic_d(&t6).unwrap() * s6.det().powi(2)) < 1e-9);
        let j = invariant_j(&slocc_apply(&t7, &s7).unwrap()).unwrap();
        prop_assert!(rel(j, invariant_j(&t7).unwrap() * s7.det().powi(3)) < 1e-9);
    }

    #[test]
    fn singles_removal_keeps_invariants(t6 in tensor(6), t7 in tensor(7)) {
        let (out6, s6) = remove_singles(&t6, &ModeSplit::standard(3, 6).unwrap()).unwrap();
        prop_assert_eq!(s6.det(), Cplx::new(1.0, 0.0));
        prop_assert!(rel(quartic_d(&out6).unwrap(), quartic_d(&t6).unwrap()) < 1e-9);
        let (out7, _) = remove_singles(&t7, &ModeSplit::standard(3, 7).unwrap()).unwrap();
        prop_assert!(rel(invariant_j(&out7).unwrap(), invariant_j(&t7).unwrap()) < 1e-9);
    }

    #[test]
    fn covariant_identities(t in tensor(7)) {
        let c = covariants7(&t).unwrap();
        prop_assert!(max_diff(&c.n, &c.n.transpose()) < 1e-12);
        prop_assert!(max_diff(&c.l, &c.l.transpose()) < 1e-12);
        prop_assert!(ccent::seven_mode::j_cubed_residual(&c) < 1e-9 * (1.0 + c.j().norm().powi(3)));
    }
}
