//! The cusp lattice, normal-form words in `(Z x Z) * Z`, and enumeration of
//! group elements whose isometric spheres may be visible over a vertical
//! fundamental domain.

mod enumerate;
mod lattice;
mod word;

use num_complex::Complex64;
use thiserror::Error;

pub use enumerate::{
    default_window_pad, enumerate, enumerate_candidates, enumerate_cosets, place_translates, Enumeration,
    EnumerationLimits, Generators, WordElement, DEFAULT_MAX_WORD_LEN,
};
pub use lattice::{gauss_reduce, CuspLattice, LatticeSummary, VerticalDomain};
pub use word::{Shift, Syllable, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("lattice translations {t_alpha} and {t_beta} are not linearly independent over R")]
    DegenerateLattice { t_alpha: Complex64, t_beta: Complex64 },
}
