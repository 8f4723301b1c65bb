//! Degree-1 trigonometric determinantal 0/1 processes and their explicit
//! two-block-factor representation.
//!
//! A symbol `f(x) = b + 2|a| cos(2 pi x - phi)` taking values in `[0, 1]`
//! induces a stationary determinantal process on the integer lattice whose
//! correlation kernel is the tridiagonal Toeplitz matrix of Fourier
//! coefficients of `f`. The same process can be realised as
//! `X_i = h(Y_i, Y_{i+1})` for i.i.d. uniform `Y` and an indicator `h` of an
//! explicit finite union of boxes in the unit square.
//!
//! Module map:
//! - [`symbol`]: admissible symbols and their Fourier coefficients.
//! - [`determinantal`]: kernel matrices, window pattern probabilities, exact
//!   sequential sampling.
//! - [`recurrence`]: run probabilities `D_k` via three-term recurrence,
//!   characteristic roots, closed forms.
//! - [`blockfactor`]: the box region, the factor map `h`, the label digraph.
//! - [`verify`]: transfer-matrix evaluation of factor pattern probabilities
//!   and the cross-checks tying all routes together.

pub mod blockfactor;
pub mod determinantal;
mod linalg;
pub mod recurrence;
pub mod symbol;
pub mod verify;

pub use blockfactor::{
    build_region, count_label_sequences, h_eval, label_sequences, region_area, region_case1,
    region_case2, sample_factor, transition_digraph, CaseTag, LabeledBox, Region, RegionError,
    TransitionDigraph,
};
pub use determinantal::{
    kernel_matrix, ones_probability, pattern_probability, pattern_probability_ie, sample_window,
    Constraint, DeterminantalError, KernelMatrix, Pattern,
};
pub use recurrence::{char_roots, d_closed, d_recurrence, d_step, Roots};
pub use symbol::{SymbolError, TrigSymbolDeg1, TrigSymbolGeneral};
pub use verify::{
    build_transfer, compare_patterns, complement_duality_check, factor_pattern_probability,
    mc_estimate, one_dependence_check, run_length_table, sequence_mass, sweep_grid, symbol_grid,
    ComparisonEntry, ComparisonReport, McEstimate, RunLengthRow, TransferError, TransferMatrix,
    TransferSystem,
};
