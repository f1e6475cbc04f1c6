//! Exact polynomials, truncated power series, rational functions in `t`
//! and Molien series.

mod molien;
mod poly;
mod ratfunc;
mod series;

pub use molien::{close_group, GradedAction, QMatrix};
pub use poly::{palindrome_check, QPolynomial};
pub use ratfunc::QRationalFunction;
pub use series::QSeries;
