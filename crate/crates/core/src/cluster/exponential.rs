use super::{vir, ModeSplit, SevenModeCC, SixModeCC, EXTRA};
use crate::multilinear::{levi_civita, AntisymMat3, AntisymTensor, Cplx, Mat3};
use crate::oracle::{exp_cluster, ClusterOperator, FockVector};

/// CC coordinates for either mode count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CcCoords {
    Six(SixModeCC),
    Seven(SevenModeCC),
}

fn eps(i: usize, j: usize, k: usize) -> f64 {
    f64::from(levi_civita(&[i, j, k]))
}

/// Doubles amplitude `T_{ab}^{ij}` for virtual labels `a, b ∈ 0..4` (3 is
/// `4̄`): `T_{āb̄}^{ij} = ε_{abc} ε^{ijk} X^c_k`, `T_{ā4̄}^{ij} = ε^{ijk} Z_{ka}`.
fn doubles(x: &Mat3, z: Option<&Mat3>, a: usize, b: usize, i: usize, j: usize) -> Cplx {
    let mut s = Cplx::new(0.0, 0.0);
    if a == b || i == j {
        return s;
    }
    match (a, b) {
        (3, _) => -doubles(x, z, b, a, i, j),
        (_, 3) => {
            let z = z.expect("4̄ doubles need Z");
            for k in 0..3 {
                s += z[(k, a)] * eps(i, j, k);
            }
            s
        }
        _ => {
            for c in 0..3 {
                for k in 0..3 {
                    let e = eps(a, b, c) * eps(i, j, k);
                    if e != 0.0 {
                        s += x[(c, k)] * e;
                    }
                }
            }
            s
        }
    }
}

fn build(x: &Mat3, y: &Mat3, xi: Cplx, seven: Option<(&Mat3, &AntisymMat3, &AntisymMat3)>) -> ClusterOperator {
    let mut op = ClusterOperator::new();
    let nv = if seven.is_some() { 4 } else { 3 };
    let vmode = |a: usize| if a == 3 { EXTRA } else { vir(a) };
    for i in 0..3 {
        for a in 0..3 {
            op.add_excitation(y[(i, a)], &[(vir(a), i)]).expect("excitation");
        }
        if let Some((_, v, _)) = seven {
            op.add_excitation(v.v[i], &[(EXTRA, i)]).expect("excitation");
        }
    }
    // ¼ T_{ab}^{ij} p^a n_i p^b n_j
    let z = seven.map(|s| s.0);
    for a in 0..nv {
        for b in 0..nv {
            for i in 0..3 {
                for j in 0..3 {
                    let t = doubles(x, z, a, b, i, j);
                    op.add_excitation(t * 0.25, &[(vmode(a), i), (vmode(b), j)])
                        .expect("excitation");
                }
            }
        }
    }
    // (1/6) T_{abc} p^a n_1 p^b n_2 p^c n_3 with T_{1̄2̄3̄} = ξ, T_{āb̄4̄} = U_ab
    let u = seven.map(|s| s.2.to_matrix());
    for a in 0..nv {
        for b in 0..nv {
            for c in 0..nv {
                let sign = f64::from(levi_civita(&[a, b, c]));
                if sign == 0.0 {
                    continue;
                }
                let mut sorted = [a, b, c];
                sorted.sort_unstable();
                let t = match (sorted, &u) {
                    ([0, 1, 2], _) => xi,
                    ([p, q, 3], Some(u)) => u[(p, q)],
                    _ => continue,
                };
                op.add_excitation(t * (sign / 6.0), &[(vmode(a), 0), (vmode(b), 1), (vmode(c), 2)])
                    .expect("excitation");
            }
        }
    }
    op
}

/// `T̂1 + T̂2 + T̂3` for six-mode CC coordinates.
pub fn cc6_operator(cc: &SixModeCC) -> ClusterOperator {
    build(&cc.x, &cc.y, cc.xi, None)
}

/// `T̂1 + T̂2 + T̂3` for seven-mode CC coordinates.
pub fn cc7_operator(cc: &SevenModeCC) -> ClusterOperator {
    build(&cc.x, &cc.y, cc.xi, Some((&cc.z, &cc.v, &cc.u)))
}

fn exponentiate(op: &ClusterOperator, modes: usize) -> AntisymTensor {
    let split = ModeSplit::standard(3, modes).expect("standard split");
    let hf = FockVector::basis(modes, split.occupied());
    exp_cluster(&hf, op, &split)
        .expect("cluster operator is an excitation")
        .to_tensor(3)
}

/// `e^{T̂1+T̂2+T̂3} p^{123}|0⟩` evaluated on the Fock engine.
pub fn cc_exponential_state6(cc: &SixModeCC) -> AntisymTensor {
    exponentiate(&cc6_operator(cc), 6)
}

pub fn cc_exponential_state7(cc: &SevenModeCC) -> AntisymTensor {
    exponentiate(&cc7_operator(cc), 7)
}

impl CcCoords {
    pub fn exponential_state(&self) -> AntisymTensor {
        match self {
            CcCoords::Six(c) => cc_exponential_state6(c),
            CcCoords::Seven(c) => cc_exponential_state7(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{cc6_from_ci6, cc7_from_ci7, ci6_from_tensor, ci7_from_tensor};
    use crate::multilinear::{c64, Vec3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(r: &mut ChaCha8Rng) -> Cplx {
        c64(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    }

    fn rm(r: &mut ChaCha8Rng) -> Mat3 {
        Mat3::from_fn(|_, _| rc(r))
    }

    #[test]
    fn zero_amplitudes_give_reference() {
        let t = cc_exponential_state6(&SixModeCC { x: Mat3::zero(), y: Mat3::zero(), xi: c64(0.0, 0.0) });
        assert_eq!(t.get(&[0, 1, 2]), c64(1.0, 0.0));
        assert_eq!(t.norm(), 1.0);
    }

    #[test]
    fn pure_singles_give_det_y() {
        let mut r = ChaCha8Rng::seed_from_u64(11);
        let y = rm(&mut r);
        let t = cc_exponential_state6(&SixModeCC { x: Mat3::zero(), y, xi: c64(0.0, 0.0) });
        assert!((t.get(&[3, 4, 5]) - y.det()).norm() < 1e-14);
    }

    #[test]
    fn singles_doubles_cross_term_is_trace() {
        let mut r = ChaCha8Rng::seed_from_u64(12);
        let (x, y) = (rm(&mut r), rm(&mut r));
        let full = cc_exponential_state6(&SixModeCC { x, y, xi: c64(0.0, 0.0) });
        let singles = cc_exponential_state6(&SixModeCC { x: Mat3::zero(), y, xi: c64(0.0, 0.0) });
        let cross = full.get(&[3, 4, 5]) - singles.get(&[3, 4, 5]);
        assert!((cross - (x * y).trace()).norm() < 1e-13);
    }

    #[test]
    fn exponential_matches_dictionary_six() {
        let mut r = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let cc = SixModeCC { x: rm(&mut r), y: rm(&mut r), xi: rc(&mut r) };
            let back = cc6_from_ci6(&ci6_from_tensor(&cc_exponential_state6(&cc)).unwrap()).unwrap();
            assert!(back.max_diff(&cc) < 1e-12);
        }
    }

    #[test]
    fn exponential_matches_dictionary_seven() {
        let mut r = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let cc = SevenModeCC {
                xi: rc(&mut r),
                x: rm(&mut r),
                y: rm(&mut r),
                z: rm(&mut r),
                v: AntisymMat3::from_vector(Vec3::new(rc(&mut r), rc(&mut r), rc(&mut r))),
                u: AntisymMat3::from_vector(Vec3::new(rc(&mut r), rc(&mut r), rc(&mut r))),
            };
            let back = cc7_from_ci7(&ci7_from_tensor(&cc_exponential_state7(&cc)).unwrap()).unwrap();
            assert!(back.max_diff(&cc) < 1e-12, "{}", back.max_diff(&cc));
        }
    }

    #[test]
    fn cluster_operators_commute_on_reference() {
        // e^{T1+T2+T3}|HF⟩ = e^{T1} e^{T2} e^{T3}|HF⟩
        let mut r = ChaCha8Rng::seed_from_u64(15);
        let (x, y, xi) = (rm(&mut r), rm(&mut r), rc(&mut r));
        let z = Mat3::zero();
        let split = ModeSplit::standard(3, 6).unwrap();
        let hf = FockVector::basis(6, &[0, 1, 2]);
        let t1 = cc6_operator(&SixModeCC { x: z, y, xi: c64(0.0, 0.0) });
        let t2 = cc6_operator(&SixModeCC { x, y: z, xi: c64(0.0, 0.0) });
        let t3 = cc6_operator(&SixModeCC { x: z, y: z, xi });
        let chained = exp_cluster(
            &exp_cluster(&exp_cluster(&hf, &t3, &split).unwrap(), &t2, &split).unwrap(),
            &t1,
            &split,
        )
        .unwrap();
        let joint = exp_cluster(&hf, &cc6_operator(&SixModeCC { x, y, xi }), &split).unwrap();
        assert!(chained.max_diff(&joint) < 1e-13);
    }

    #[test]
    fn logarithm_of_ci_operator_is_cluster_operator() {
        // T̂2 = Ĉ2 − ½Ĉ1², T̂3 = Ĉ3 − Ĉ1Ĉ2 + ⅓Ĉ1³ acting on the reference
        let mut r = ChaCha8Rng::seed_from_u64(16);
        let cc = SixModeCC { x: rm(&mut r), y: rm(&mut r), xi: rc(&mut r) };
        let ci = crate::cluster::ci6_from_cc6(&cc);
        let hf = FockVector::basis(6, &[0, 1, 2]);
        let c1 = cc6_operator(&SixModeCC { x: Mat3::zero(), y: ci.b, xi: c64(0.0, 0.0) });
        // Ĉ2 carries A as a doubles block and Ĉ3 carries β
        let c2 = cc6_operator(&SixModeCC { x: ci.a, y: Mat3::zero(), xi: c64(0.0, 0.0) });
        let c3 = cc6_operator(&SixModeCC { x: Mat3::zero(), y: Mat3::zero(), xi: ci.beta });
        let c1hf = c1.apply(&hf);
        let c2hf = c2.apply(&hf);
        let mut lhs = c2hf.clone();
        lhs.add_scaled(&c1.apply(&c1hf), c64(-0.5, 0.0));
        let t2 = cc6_operator(&SixModeCC { x: cc.x, y: Mat3::zero(), xi: c64(0.0, 0.0) });
        assert!(lhs.max_diff(&t2.apply(&hf)) < 1e-13);
        let mut lhs3 = c3.apply(&hf);
        lhs3.add_scaled(&c1.apply(&c2hf), c64(-1.0, 0.0));
        lhs3.add_scaled(&c1.apply(&c1.apply(&c1hf)), c64(1.0 / 3.0, 0.0));
        let t3 = cc6_operator(&SixModeCC { x: Mat3::zero(), y: Mat3::zero(), xi: cc.xi });
        assert!(lhs3.max_diff(&t3.apply(&hf)) < 1e-13);
    }
}
