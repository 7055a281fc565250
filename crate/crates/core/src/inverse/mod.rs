//! Row-wise linear inversion: system assembly, truncated SVD, choice of `κ`.

mod discrepancy;
mod inequalities;
mod reconstruct;
mod system;
mod tsvd;

pub use discrepancy::{
    choose_kappa_morozov_adjusted, choose_kappa_morozov_standard, choose_kappa_oracle, oracle_errors,
    DEFAULT_NU,
};
pub use inequalities::verify_inequalities;
pub use reconstruct::{
    reconstruct_connectivity, solve_rows, InversionReport, NeuronReport, RowProblem, RowStatus, Rule,
    Selection,
};
pub use system::{assemble_system, assemble_system_at, usable_onsets, NeuronSystem};
pub use tsvd::{tsvd_solve, SelectionMethod, ThinSvd, TsvdSolution, RANK_RTOL};
