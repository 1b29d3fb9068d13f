//! Free k-braid groups `G_n^k`, finite k-biquandles with their coloring
//! invariants, and the virtual surface singular braid monoid `VSSB_n` with
//! its map into `G_n^2`.

pub mod biquandle;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod gnk;
pub mod perm;
pub mod vssb;
pub mod word_problem;

pub use biquandle::{
    check_axioms, conditional_involution, flat_check, flat_derived3, gaussian,
    involution_kbiquandle, is_isomorphic, load_biquandle, multiplicity_vector, swap, AxiomReport,
    FiniteKBiquandle, FlatBiquandle, Involution, MultiplicitySet,
};
pub use coloring::{
    binding_number, count_colorings, fundamental_presentation, hom_count, propagate, Coloring,
    FundamentalPresentation,
};
pub use enumerate::{classify, enumerate_kbiquandles, Classification, EnumerationResult, Family};
pub use error::{Error, Result};
pub use gnk::{parse_word_file, BraidGraph, FreeKBraidWord, KSubset, Move, ParityVector};
pub use perm::Permutation;
pub use vssb::{phi, rho, ActionState, VssbWord};
pub use word_problem::{equal_bounded, SearchBudget, Verdict, Witness};
