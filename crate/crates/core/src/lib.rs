//! Exact transfer matrices and character decompositions for the `Q`-state
//! Potts model on cyclic strips (free across the width, periodic along the
//! length).
//!
//! The crate computes the characters `K_{1,2l+1}` as traces of powers of
//! cluster transfer-matrix blocks, assembles partition functions from them,
//! and checks every assembled quantity against brute-force enumeration.
//!
//! ```
//! use cyclic_potts::{fk_z, z_from_k, CharacterSet, CyclicStrip};
//!
//! let strip = CyclicStrip::square(2, 3)?;
//! let chars = CharacterSet::compute(&strip)?;
//! assert_eq!(z_from_k(&chars), fk_z(&strip)?);
//! # Ok::<(), cyclic_potts::Error>(())
//! ```
//!
//! A longer walk-through lives in the `book/` directory of the repository.

pub mod characters;
pub mod combinat;
mod error;
pub mod lattice;
pub mod ncpart;
pub mod oracle;
pub mod poly;
pub mod transfer;
pub mod verify;
pub mod winding;

pub use characters::{
    amp_b, amp_c, amp_cj, big_f, chi, dual_decomposition, k_from_z2j, z2j_from_k, z_ff, z_from_k,
    BerahaParam, CharacterSet, DecompositionResult, Target, Term,
};
pub use error::{Error, Result};
pub use lattice::{CyclicStrip, EdgeOp, FixedBoundaryLattice};
pub use ncpart::{
    count_states, enumerate_states, enumerate_two_slice, ConnectivityState, DetachOutcome,
    TwoSliceState,
};
pub use oracle::{
    dual_oracle, duality_witness_check, fk_enumerate, fk_z, spin_z, zff_oracle, NtcSpectrum,
};
pub use poly::{Assignment, Monomial, MultiPoly, RationalFunction, Var};
pub use transfer::{
    all_characters, character_k, column_transfer, edge_operator, verify_block_structure,
    BlockStructureReport, TransferBlock,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/minimal.md")]
    mod minimal {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}
