//! The verification engine: structured residual reports for identities,
//! eigenvalue relations, generator brackets, boost actions, and matrix
//! positivity/adjointness checks.

pub mod brackets;
pub mod eigen;
pub mod fieldsuite;
pub mod report;

pub use brackets::{bracket_check, bracket_table, run_bracket_suite, BracketSuite};
pub use eigen::{eigen_residual, run_eigen_suite, EigenGrids};
pub use fieldsuite::{suite_fields, SuiteField};
pub use report::CheckReport;
