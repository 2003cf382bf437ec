//! Exact sums of powers of arithmetic progressions over the Gaussian rationals.
//!
//! Four independent routes compute `Σ_{r=0}^{t−1} (a + r·d)^p`:
//!
//! * [`series::oracle_l`]: direct summation,
//! * [`triangular::forward_substitute`]: solving the lower-triangular recurrence system,
//! * [`elimination::l_via_elimination`]: the S-table row reduction of its Cramer numerator,
//! * [`elimination::closed_form_l`]: the fully expanded closed form.
//!
//! The [`audit`] module checks each printed identity against the direct sums and reports
//! exact residuals.

pub mod audit;
pub mod elimination;
pub mod error;
pub mod numerics;
pub mod series;
pub mod strategy;
pub mod triangular;

pub use error::{Error, Result};
pub use numerics::{GaussianRational, Rational, UniPolynomial};
pub use series::PowerSumQuery;
