//! Exact integer/rational calculus for the focal-data ladder matrices: the
//! tridiagonal generator, its Kronecker sum over two factors, first-row
//! power identities, coefficient structure, exceptional angles, and rank
//! statements. Everything here is exact; no floats.

pub mod bipoly;
pub mod checks;
pub mod matrix;
pub mod recurrence;

pub use bipoly::{det_bipoly, rat, ratio, rational_det, rational_rank, BiPoly, Rat};
pub use checks::{
    charpoly_product_check, chessboard_check, coefficient_degree_check,
    coefficient_degree_profiles, coefficient_structure_check, doubled_determinant_check,
    exceptional_angles, genericity_check, kernel_column_check, kernel_product_residual,
    kronecker_det_at_angle, rank_windows_check, row_power_identity_check, row_stack_rank,
    CoefficientStructure, DegreeProfile, ExceptionalAngles, KernelColumnReport, RankReport,
};
pub use matrix::{
    doubled_matrix, doubled_row_powers, eval_matrix, first_unit_row, kronecker_sum,
    ladder_charpoly, ladder_charpoly_expected, ladder_kernel, ladder_matrix,
    symmetrized_eigenvalues, Var,
};
pub use recurrence::{row_tables, transport_evolve, transported_corner, RowTables};
