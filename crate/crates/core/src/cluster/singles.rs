use super::{coords::suggest_reference, vir, ModeSplit};
use crate::multilinear::{slocc_apply, AntisymTensor, Cplx, Mat3, SloccMatrix};
use crate::{Error, Result};

/// Normalized singles `t_a^i = ψ(ref with slot i → a) / ψ_ref`, as
/// `(virtual mode, occupied slot, value)` triples.
pub fn singles_amplitudes(t: &AntisymTensor, split: &ModeSplit) -> Result<Vec<(usize, usize, Cplx)>> {
    if t.modes() != split.modes() || t.fermions() != split.fermions() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} fermions on {} modes", split.fermions(), split.modes()),
            found: format!("{} fermions on {} modes", t.fermions(), t.modes()),
        });
    }
    let reference = split.occupied();
    let r = t.get(reference);
    if r == Cplx::new(0.0, 0.0) || r.norm() <= 1e-12 * t.max_abs() {
        return Err(Error::ReferenceDeficient {
            suggestion: suggest_reference(t),
        });
    }
    let mut out = Vec::new();
    for (slot, &i) in reference.iter().enumerate() {
        for a in split.virtuals() {
            let mut idx = reference.to_vec();
            idx[slot] = a;
            out.push((a, i, t.get(&idx) / r));
        }
    }
    Ok(out)
}

/// Removes the singles by the unipotent transformation
/// `S = I − Σ t_a^i E_{a i}` (virtual row, occupied column), so `det S = 1`.
///
/// In exact arithmetic every singles amplitude of `S ψ` vanishes; the
/// rounding residue is cleared so that the returned tensor has exactly zero
/// singles.
pub fn remove_singles(t: &AntisymTensor, split: &ModeSplit) -> Result<(AntisymTensor, SloccMatrix)> {
    let singles = singles_amplitudes(t, split)?;
    let entries: Vec<(usize, usize, Cplx)> = singles.iter().map(|&(a, i, v)| (a, i, -v)).collect();
    let s = SloccMatrix::unipotent(split.modes(), &entries)?;
    let mut out = slocc_apply(t, &s)?;
    let reference = split.occupied();
    for (slot, _) in reference.iter().enumerate() {
        for a in split.virtuals() {
            let mut idx = reference.to_vec();
            idx[slot] = a;
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            out.set_sorted(&sorted, Cplx::new(0.0, 0.0))?;
        }
    }
    Ok((out, s))
}

/// `(p¹ + Y¹_a p^a)(p² + Y²_b p^b)(p³ + Y³_c p^c)|0⟩` on six modes.
pub fn brueckner_state(y: &Mat3) -> AntisymTensor {
    let vectors: Vec<Vec<Cplx>> = (0..3)
        .map(|i| {
            let mut v = vec![Cplx::new(0.0, 0.0); 6];
            v[i] = Cplx::new(1.0, 0.0);
            for a in 0..3 {
                v[vir(a)] = y[(i, a)];
            }
            v
        })
        .collect();
    AntisymTensor::wedge(6, &vectors).expect("three vectors on six modes")
}
