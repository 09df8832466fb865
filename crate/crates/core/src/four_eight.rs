//! Doubles-only states of four fermions on eight modes and the closed-orbit
//! subspace spanned by `P̂₁..P̂₇|0⟩`.
//!
//! Labels `1..4` are the occupied modes `0..3` and `1̄..4̄` the virtual modes
//! `4..7`. With only four holes `T̂2³` vanishes, so
//! `e^{T̂2} p^{1234}|0⟩ = (1 + T̂2 + ½T̂2²) p^{1234}|0⟩`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::ModeSplit;
use crate::multilinear::{levi_civita, AntisymTensor, Cplx};
use crate::oracle::{exp_cluster, ClusterOperator, FockVector};
use crate::{Error, Result};

const ZERO: Cplx = Cplx::new(0.0, 0.0);
const ONE: Cplx = Cplx::new(1.0, 0.0);

/// Unordered pairs of `{0,1,2,3}` in lexicographic order.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(p: usize, q: usize) -> Option<(usize, f64)> {
    let (lo, hi, s) = if p < q { (p, q, 1.0) } else { (q, p, -1.0) };
    PAIRS.iter().position(|&x| x == (lo, hi)).map(|k| (k, s))
}

/// Occupied label `k ∈ 1..=4` to mode index.
pub fn occ(k: usize) -> usize {
    k - 1
}

/// Virtual label `k̄ ∈ 1̄..=4̄` to mode index.
pub fn vir(k: usize) -> usize {
    3 + k
}

/// `T_{ab}^{ij}` stored once per pair of pairs, so both antisymmetries hold
/// by construction. Indices are 0-based within the virtual and occupied
/// blocks.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DoublesAmplitudes48 {
    t: [[Cplx; 6]; 6],
}

impl DoublesAmplitudes48 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `T_{ab}^{ij}` for any ordering; zero on repeated indices.
    pub fn get(&self, a: usize, b: usize, i: usize, j: usize) -> Cplx {
        match (pair_index(a, b), pair_index(i, j)) {
            (Some((v, s)), Some((o, r))) => self.t[v][o] * (s * r),
            _ => ZERO,
        }
    }

    /// Sets `T_{ab}^{ij}` (and with it every reordering).
    pub fn set(&mut self, a: usize, b: usize, i: usize, j: usize, value: Cplx) -> Result<()> {
        match (pair_index(a, b), pair_index(i, j)) {
            (Some((v, s)), Some((o, r))) => {
                self.t[v][o] = value * (s * r);
                Ok(())
            }
            _ => Err(Error::InvalidIndices {
                indices: vec![a, b, i, j],
                reason: "indices must be distinct within each pair and below 4".into(),
            }),
        }
    }

    pub fn random<R: Rng>(rng: &mut R, scale: f64) -> Self {
        let mut t = [[ZERO; 6]; 6];
        for row in &mut t {
            for x in row {
                *x = Cplx::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
            }
        }
        Self { t }
    }

    /// `T̂2 = Σ_{a<b, i<j} T_{ab}^{ij} p^a p^b n_j n_i`.
    pub fn operator(&self) -> ClusterOperator {
        let mut op = ClusterOperator::new();
        for (v, &(a, b)) in PAIRS.iter().enumerate() {
            for (o, &(i, j)) in PAIRS.iter().enumerate() {
                op.add_excitation(self.t[v][o], &[(vir(a + 1), occ(i + 1)), (vir(b + 1), occ(j + 1))])
                    .expect("virtual and occupied modes are disjoint");
            }
        }
        op
    }
}

/// `e^{T̂2} p^{1234}|0⟩` on the Fock engine.
pub fn t2_state_48(t: &DoublesAmplitudes48) -> AntisymTensor {
    let split = ModeSplit::standard(4, 8).expect("standard split");
    let hf = FockVector::basis(8, split.occupied());
    exp_cluster(&hf, &t.operator(), &split)
        .expect("doubles are excitations")
        .to_tensor(4)
}

/// The same state from the closed expansion, summed over ordered virtual
/// indices:
///
/// ```text
/// p^{1234}
///   + ½(T^{12}_{ab}p^{34} + T^{34}_{ab}p^{12} − T^{13}_{ab}p^{24}
///       − T^{24}_{ab}p^{13} + T^{14}_{ab}p^{23} + T^{23}_{ab}p^{14}) p^{ab}
///   + ¼(T^{12}_{ab}T^{34}_{cd} − T^{13}_{ab}T^{24}_{cd} + T^{14}_{ab}T^{23}_{cd}) ε^{abcd} p^{1̄2̄3̄4̄}
/// ```
pub fn t2_state_48_expansion(t: &DoublesAmplitudes48) -> AntisymTensor {
    // (occupied pair carried by T, complementary pair kept from the reference, sign)
    const DOUBLES: [((usize, usize), (usize, usize), f64); 6] = [
        ((0, 1), (2, 3), 1.0),
        ((2, 3), (0, 1), 1.0),
        ((0, 2), (1, 3), -1.0),
        ((1, 3), (0, 2), -1.0),
        ((0, 3), (1, 2), 1.0),
        ((1, 2), (0, 3), 1.0),
    ];
    const QUADS: [((usize, usize), (usize, usize), f64); 3] =
        [((0, 1), (2, 3), 1.0), ((0, 2), (1, 3), -1.0), ((0, 3), (1, 2), 1.0)];

    let mut out = AntisymTensor::zeros(4, 8);
    out.add_term(&[0, 1, 2, 3], ONE).expect("valid modes");
    for &((i, j), (k, l), s) in &DOUBLES {
        for a in 0..4 {
            for b in 0..4 {
                let c = t.get(a, b, i, j) * (0.5 * s);
                if a != b && c != ZERO {
                    out.add_term(&[k, l, vir(a + 1), vir(b + 1)], c).expect("distinct modes");
                }
            }
        }
    }
    let mut quad = ZERO;
    for &((i, j), (k, l), s) in &QUADS {
        for perm in crate::oracle::permutations(4) {
            let e = levi_civita(&perm) as f64;
            quad += t.get(perm[0], perm[1], i, j) * t.get(perm[2], perm[3], k, l) * (0.25 * s * e);
        }
    }
    out.add_term(&[4, 5, 6, 7], quad).expect("valid modes");
    out
}

/// Entrywise gap between the Fock state and the closed expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionDiagnostics {
    /// Max gap over all amplitudes except `p^{1̄2̄3̄4̄}`.
    pub doubles: f64,
    /// Gap on the `p^{1̄2̄3̄4̄}` amplitude.
    pub quadruple: f64,
}

pub fn expansion_diagnostics(t: &DoublesAmplitudes48) -> ExpansionDiagnostics {
    let fock = t2_state_48(t);
    let closed = t2_state_48_expansion(t);
    let mut doubles: f64 = 0.0;
    let mut quadruple = 0.0;
    for (idx, x) in fock.sub(&closed).expect("same shape").iter() {
        if idx == [4, 5, 6, 7] {
            quadruple = x.norm();
        } else {
            doubles = doubles.max(x.norm());
        }
    }
    ExpansionDiagnostics { doubles, quadruple }
}

/// Amplitudes of the closed-orbit family:
/// `T_{1̄2̄}^{12} = T_{3̄4̄}^{34} = a`, `T_{1̄2̄}^{34} = T_{3̄4̄}^{12} = b`,
/// `T_{1̄3̄}^{13} = T_{2̄4̄}^{24} = c`, `T_{2̄4̄}^{13} = T_{1̄3̄}^{24} = d`,
/// `T_{1̄4̄}^{14} = T_{2̄3̄}^{23} = e`, `T_{2̄3̄}^{14} = T_{1̄4̄}^{23} = f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedOrbitParams {
    pub a: Cplx,
    pub b: Cplx,
    pub c: Cplx,
    pub d: Cplx,
    pub e: Cplx,
    pub f: Cplx,
}

pub const CONSTRAINT_ORACLE: &str = "a^2+b^2+c^2+d^2+e^2+f^2=1";
pub const CONSTRAINT_ALTERNATING: &str = "a^2+b^2-c^2-d^2+e^2+f^2=1";

impl ClosedOrbitParams {
    /// Completes `(a, …, e)` with the principal root
    /// `f = √(1 − a² − b² − c² − d² − e²)`, so the `p^{1̄2̄3̄4̄}` amplitude is 1.
    pub fn on_orbit(a: Cplx, b: Cplx, c: Cplx, d: Cplx, e: Cplx) -> Self {
        let f = (ONE - a * a - b * b - c * c - d * d - e * e).sqrt();
        Self { a, b, c, d, e, f }
    }

    /// Completes `(a, …, e)` using the sign pattern `a²+b²−c²−d²+e²+f² = 1`.
    pub fn on_alternating_constraint(a: Cplx, b: Cplx, c: Cplx, d: Cplx, e: Cplx) -> Self {
        let f = (ONE - a * a - b * b + c * c + d * d - e * e).sqrt();
        Self { a, b, c, d, e, f }
    }

    pub fn random<R: Rng>(rng: &mut R, scale: f64) -> [Cplx; 6] {
        std::array::from_fn(|_| Cplx::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
    }

    pub fn from_array(v: [Cplx; 6]) -> Self {
        let [a, b, c, d, e, f] = v;
        Self { a, b, c, d, e, f }
    }

    /// `a² + b² + c² + d² + e² + f² − 1`.
    pub fn oracle_constraint_residual(&self) -> Cplx {
        self.squares().iter().sum::<Cplx>() - ONE
    }

    /// `a² + b² − c² − d² + e² + f² − 1`.
    pub fn alternating_constraint_residual(&self) -> Cplx {
        let [a, b, c, d, e, f] = self.squares();
        a + b - c - d + e + f - ONE
    }

    fn squares(&self) -> [Cplx; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f].map(|x| x * x)
    }

    pub fn amplitudes(&self) -> DoublesAmplitudes48 {
        // 0-based (a, b, i, j) per parameter
        let mut t = DoublesAmplitudes48::zero();
        let entries = [
            ((0, 1, 0, 1), self.a),
            ((2, 3, 2, 3), self.a),
            ((0, 1, 2, 3), self.b),
            ((2, 3, 0, 1), self.b),
            ((0, 2, 0, 2), self.c),
            ((1, 3, 1, 3), self.c),
            ((1, 3, 0, 2), self.d),
            ((0, 2, 1, 3), self.d),
            ((0, 3, 0, 3), self.e),
            ((1, 2, 1, 2), self.e),
            ((1, 2, 0, 3), self.f),
            ((0, 3, 1, 2), self.f),
        ];
        for ((a, b, i, j), v) in entries {
            t.set(a, b, i, j, v).expect("valid indices");
        }
        t
    }

    /// Coordinates in `P̂₁..P̂₇` of the doubles block plus the reference:
    /// `P̂₁ − dP̂₂ + bP̂₃ − cP̂₄ + fP̂₅ − eP̂₆ − aP̂₇`.
    pub fn predicted_coords(&self) -> [Cplx; 7] {
        [ONE, -self.d, self.b, -self.c, self.f, -self.e, -self.a]
    }
}

/// `P̂₁..P̂₇|0⟩`, each a sum of two basis determinants written in the label
/// order shown: `P̂₁ = p^{1234} + p^{1̄2̄3̄4̄}`, `P̂₂ = p^{131̄3̄} + p^{242̄4̄}`,
/// `P̂₃ = p^{121̄2̄} + p^{343̄4̄}`, `P̂₄ = p^{132̄4̄} + p^{241̄3̄}`,
/// `P̂₅ = p^{141̄4̄} + p^{232̄3̄}`, `P̂₆ = −p^{142̄3̄} − p^{231̄4̄}`,
/// `P̂₇ = −p^{123̄4̄} − p^{341̄2̄}`.
pub fn p_basis() -> [AntisymTensor; 7] {
    let o = occ;
    let v = vir;
    let table: [(f64, [usize; 4], [usize; 4]); 7] = [
        (1.0, [o(1), o(2), o(3), o(4)], [v(1), v(2), v(3), v(4)]),
        (1.0, [o(1), o(3), v(1), v(3)], [o(2), o(4), v(2), v(4)]),
        (1.0, [o(1), o(2), v(1), v(2)], [o(3), o(4), v(3), v(4)]),
        (1.0, [o(1), o(3), v(2), v(4)], [o(2), o(4), v(1), v(3)]),
        (1.0, [o(1), o(4), v(1), v(4)], [o(2), o(3), v(2), v(3)]),
        (-1.0, [o(1), o(4), v(2), v(3)], [o(2), o(3), v(1), v(4)]),
        (-1.0, [o(1), o(2), v(3), v(4)], [o(3), o(4), v(1), v(2)]),
    ];
    table.map(|(s, x, y)| {
        let c = Cplx::new(s, 0.0);
        AntisymTensor::from_terms(4, 8, [(&x[..], c), (&y[..], c)]).expect("valid modes")
    })
}

/// Least-squares projection onto `span(P̂₁..P̂₇|0⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    /// `‖t − projection‖ / ‖t‖`.
    pub residual: f64,
    pub coords: [Cplx; 7],
}

pub fn subspace_membership(t: &AntisymTensor) -> Result<Membership> {
    if (t.fermions(), t.modes()) != (4, 8) {
        return Err(Error::UnsupportedShape { fermions: t.fermions(), modes: t.modes() });
    }
    let norm = t.norm();
    if norm == 0.0 {
        return Err(Error::ZeroState);
    }
    let basis = p_basis();
    let rows = t.len();
    let a = DMatrix::from_fn(rows, 7, |r, c| basis[c].amplitudes()[r]);
    let y = DVector::from_column_slice(t.amplitudes());
    let x = a
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let residual = (&a * &x - &y).norm() / norm;
    Ok(Membership { residual, coords: std::array::from_fn(|k| x[k]) })
}

/// Which sign pattern the Fock engine's `p^{1̄2̄3̄4̄}` amplitude follows on
/// the closed-orbit family, with the alternating form kept verbatim for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintVerdict {
    pub alternating_constraint: String,
    pub oracle_constraint: String,
    pub samples: usize,
    pub seed: u64,
    /// Max `|q − (a²+b²+c²+d²+e²+f²)|` with `q` the Fock amplitude.
    pub oracle_form_max_error: f64,
    /// Max `|q − (a²+b²−c²−d²+e²+f²)|`.
    pub alternating_form_max_error: f64,
    /// Max subspace residual with `f` solved from the oracle form.
    pub oracle_form_max_membership_residual: f64,
    /// Min subspace residual with `f` solved from the alternating form.
    pub alternating_form_min_membership_residual: f64,
    /// Max gap between the closed ε-contraction and the Fock amplitude.
    pub expansion_quadruple_max_error: f64,
    pub expansion_doubles_max_error: f64,
    /// `"oracle"`, `"alternating"`, `"both"` or `"neither"`.
    pub supported: String,
}

pub fn constraint_verdict(seed: u64, samples: usize) -> Result<ConstraintVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = ConstraintVerdict {
        alternating_constraint: CONSTRAINT_ALTERNATING.into(),
        oracle_constraint: CONSTRAINT_ORACLE.into(),
        samples,
        seed,
        oracle_form_max_error: 0.0,
        alternating_form_max_error: 0.0,
        oracle_form_max_membership_residual: 0.0,
        alternating_form_min_membership_residual: f64::INFINITY,
        expansion_quadruple_max_error: 0.0,
        expansion_doubles_max_error: 0.0,
        supported: String::new(),
    };
    for _ in 0..samples {
        let p = ClosedOrbitParams::from_array(ClosedOrbitParams::random(&mut rng, 1.0));
        let amps = p.amplitudes();
        let q = t2_state_48(&amps).get(&[4, 5, 6, 7]);
        v.oracle_form_max_error = v.oracle_form_max_error.max((q - ONE - p.oracle_constraint_residual()).norm());
        v.alternating_form_max_error = v.alternating_form_max_error.max((q - ONE - p.alternating_constraint_residual()).norm());
        let diag = expansion_diagnostics(&amps);
        v.expansion_quadruple_max_error = v.expansion_quadruple_max_error.max(diag.quadruple);
        v.expansion_doubles_max_error = v.expansion_doubles_max_error.max(diag.doubles);

        let on = ClosedOrbitParams::on_orbit(p.a, p.b, p.c, p.d, p.e);
        let m = subspace_membership(&t2_state_48(&on.amplitudes()))?;
        v.oracle_form_max_membership_residual = v.oracle_form_max_membership_residual.max(m.residual);
        let alternating = ClosedOrbitParams::on_alternating_constraint(p.a, p.b, p.c, p.d, p.e);
        let m = subspace_membership(&t2_state_48(&alternating.amplitudes()))?;
        v.alternating_form_min_membership_residual = v.alternating_form_min_membership_residual.min(m.residual);
    }
    let ok = |e: f64| e < 1e-10;
    v.supported = match (ok(v.oracle_form_max_error), ok(v.alternating_form_max_error)) {
        (true, true) => "both",
        (true, false) => "oracle",
        (false, true) => "alternating",
        (false, false) => "neither",
    }
    .into();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::c64;
    use crate::oracle::permutations;

    #[test]
    fn storage_antisymmetry() {
        let mut t = DoublesAmplitudes48::zero();
        t.set(2, 0, 3, 1, c64(1.5, -0.5)).unwrap();
        assert_eq!(t.get(0, 2, 1, 3), c64(1.5, -0.5));
        assert_eq!(t.get(2, 0, 1, 3), c64(-1.5, 0.5));
        assert_eq!(t.get(0, 0, 1, 3), ZERO);
        assert!(t.set(1, 1, 0, 2, ONE).is_err());
        assert!(t.set(0, 4, 0, 2, ONE).is_err());
    }

    #[test]
    fn zero_amplitudes_give_reference() {
        let s = t2_state_48(&DoublesAmplitudes48::zero());
        assert_eq!(s.iter().filter(|(_, x)| *x != ZERO).count(), 1);
        assert_eq!(s.get(&[0, 1, 2, 3]), ONE);
    }

    #[test]
    fn single_amplitude() {
        let mut t = DoublesAmplitudes48::zero();
        t.set(0, 1, 0, 1, c64(0.7, 0.0)).unwrap();
        let s = t2_state_48(&t);
        assert_eq!(s.get(&[2, 3, 4, 5]), c64(0.7, 0.0));
        assert_eq!(s.get(&[4, 5, 6, 7]), ZERO);
        assert_eq!(s.iter().filter(|(_, x)| *x != ZERO).count(), 2);
    }

    #[test]
    fn state_is_antisymmetric_under_all_permutations() {
        let mut r = ChaCha8Rng::seed_from_u64(81);
        let s = t2_state_48(&DoublesAmplitudes48::random(&mut r, 1.0));
        for (idx, x) in s.iter() {
            for perm in permutations(4) {
                let permuted: Vec<usize> = perm.iter().map(|&k| idx[k]).collect();
                let e = levi_civita(&perm) as f64;
                assert_eq!(s.get(&permuted), x * e);
            }
        }
    }

    #[test]
    fn expansion_matches_fock_for_random_doubles() {
        let mut r = ChaCha8Rng::seed_from_u64(82);
        for _ in 0..10 {
            let d = expansion_diagnostics(&DoublesAmplitudes48::random(&mut r, 1.0));
            assert!(d.doubles < 1e-14, "{d:?}");
            assert!(d.quadruple < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn p_basis_is_independent() {
        let b = p_basis();
        for (k, p) in b.iter().enumerate() {
            let m = subspace_membership(p).unwrap();
            assert!(m.residual < 1e-14);
            for (j, c) in m.coords.iter().enumerate() {
                let want = if j == k { ONE } else { ZERO };
                assert!((c - want).norm() < 1e-14);
            }
        }
        let cols = DMatrix::from_fn(70, 7, |r, c| b[c].amplitudes()[r]);
        assert_eq!(crate::linalg::numerical_rank(&crate::linalg::singular_values(&cols), 1e-12, 0.0), 7);
    }

    #[test]
    fn doubles_block_decomposition() {
        let mut r = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..5 {
            let p = ClosedOrbitParams::from_array(ClosedOrbitParams::random(&mut r, 1.0));
            let s = t2_state_48(&p.amplitudes());
            let mut expected = AntisymTensor::zeros(4, 8);
            for (k, (c, b)) in p.predicted_coords().iter().zip(p_basis()).enumerate() {
                let part = if k == 0 {
                    AntisymTensor::from_terms(4, 8, [(&[0usize, 1, 2, 3][..], ONE)]).unwrap()
                } else {
                    b
                };
                expected = expected.add(&part.scale(*c)).unwrap();
            }
            let mut doubles = s.clone();
            doubles.set_sorted(&[4, 5, 6, 7], ZERO).unwrap();
            assert!(doubles.max_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn closed_orbit_family_in_subspace() {
        let mut r = ChaCha8Rng::seed_from_u64(84);
        for _ in 0..20 {
            let [a, b, c, d, e, _] = ClosedOrbitParams::random(&mut r, 1.0);
            let p = ClosedOrbitParams::on_orbit(a, b, c, d, e);
            assert!(p.oracle_constraint_residual().norm() < 1e-12);
            let m = subspace_membership(&t2_state_48(&p.amplitudes())).unwrap();
            assert!(m.residual < 1e-10);
            for (x, y) in m.coords.iter().zip(p.predicted_coords()) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn generic_doubles_leave_subspace() {
        let mut r = ChaCha8Rng::seed_from_u64(85);
        let m = subspace_membership(&t2_state_48(&DoublesAmplitudes48::random(&mut r, 1.0))).unwrap();
        assert!(m.residual > 0.1);
    }

    #[test]
    fn membership_rejects_bad_input() {
        assert_eq!(subspace_membership(&AntisymTensor::zeros(4, 8)), Err(Error::ZeroState));
        assert!(matches!(
            subspace_membership(&AntisymTensor::zeros(3, 6)),
            Err(Error::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn verdict_prefers_all_plus_signs() {
        let v = constraint_verdict(7, 10).unwrap();
        assert_eq!(v.supported, "oracle", "{v:?}");
        assert!(v.oracle_form_max_membership_residual < 1e-10);
        assert!(v.alternating_form_min_membership_residual > 1e-6);
        assert!(v.expansion_quadruple_max_error < 1e-12);
    }
}
