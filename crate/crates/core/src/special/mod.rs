//! Reference evaluation of ζ(s), log Γ(z), the functional-equation factor
//! χ(s) and Laurent data at poles. Every other module checks itself against
//! the functions here.

mod chi;
mod gamma;
mod laurent;
mod zeta;

pub use chi::{chi_asymptotic, chi_exact, log_chi};
pub use gamma::complex_log_gamma;
pub use laurent::{euler_gamma, laurent_at_pole, laurent_at_pole_with_nodes, LaurentExpansion};
pub use zeta::{power_sum, zeta_reference, zeta_reference_with, zeta_truncated_sum, ZetaConfig};
pub(crate) use zeta::{ln_n, weighted_power_sum};

/// A point `s = σ + it`.
pub type ComplexValue = num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) fn ensure_finite(z: ComplexValue, what: &str) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(format!("{what} = {z}")))
    }
}
