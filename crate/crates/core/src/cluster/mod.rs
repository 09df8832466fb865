//! CI and CC coordinate systems, the dictionaries between them, singles
//! removal and construction of CC exponential states.
//!
//! Mode labels are zero-based: occupied `0..n`, virtual `n..N`. For three
//! fermions the virtual modes `3, 4, 5` are `1̄, 2̄, 3̄` and mode `6` is `4̄`.

mod coords;
mod exponential;
mod singles;

pub use coords::{
    ci6_from_tensor, ci7_from_tensor, cc6_from_ci6, cc7_from_ci7, ci6_from_cc6, ci7_from_cc7, suggest_reference,
    tensor_from_ci6, tensor_from_ci7, Normalized, SevenModeCC, SevenModeCI, SixModeCC, SixModeCI,
};
pub use exponential::{cc6_operator, cc7_operator, cc_exponential_state6, cc_exponential_state7, CcCoords};
pub use singles::{brueckner_state, remove_singles, singles_amplitudes};

use crate::{Error, Result};

/// Occupied/virtual partition of the modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSplit {
    modes: usize,
    occupied: Vec<usize>,
}

impl ModeSplit {
    /// Occupied `0..fermions`, virtual `fermions..modes`.
    pub fn standard(fermions: usize, modes: usize) -> Result<Self> {
        if fermions == 0 || fermions >= modes || modes > 63 {
            return Err(Error::UnsupportedShape { fermions, modes });
        }
        Ok(Self {
            modes,
            occupied: (0..fermions).collect(),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn fermions(&self) -> usize {
        self.occupied.len()
    }

    /// Reference determinant indices (the occupied modes).
    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn virtuals(&self) -> Vec<usize> {
        (0..self.modes).filter(|m| !self.is_occupied(*m)).collect()
    }

    pub fn is_occupied(&self, m: usize) -> bool {
        self.occupied.contains(&m)
    }

    pub fn is_virtual(&self, m: usize) -> bool {
        m < self.modes && !self.is_occupied(m)
    }
}

/// Virtual mode `ā` (zero-based `a`) for three fermions.
pub(crate) const fn vir(a: usize) -> usize {
    3 + a
}

/// Mode `4̄` in the seven-mode setting.
pub(crate) const EXTRA: usize = 6;
