//! D-property checks: every characterization returns a [`DReport`] and they
//! are expected to agree on verdict and missing set.

mod bounds;
mod checks;
mod moments;
mod report;
mod structure;

pub use bounds::{dimension_bounds, DimensionBounds};
pub use checks::{
    check_d, d_check, d_check_anf_span, d_check_bruteforce, d_check_ddt, d_check_hyperplane_quadratic,
    d_check_moment3_quadratic, d_check_moment4, d_check_plateaued, moment3_transform, moment4_transform,
    plateaued_transform, route, CheckOptions,
};
pub use moments::{
    second_order_spectrum, verify_moment_identities, IdentityResult, IdentityStatus, MomentIdentityReport,
};
pub use report::{DReport, Method, Verdict, Witness, MISSING_LIST_LIMIT};
pub use structure::{apn_check_anf, omega_report, AnfApnResult, OmegaReport, UltraTransitiveSet};

use crate::vbf::Vbf;

/// Methods that apply to `f`: quadratic-only ones need degree <= 2, the
/// plateaued one needs a plateaued function.
pub fn applicable_methods(f: &Vbf) -> Vec<Method> {
    let quadratic = f.is_quadratic();
    let plateaued = crate::spectra::plateaued_profile(f).map(|p| p.is_plateaued).unwrap_or(false);
    Method::ALL
        .into_iter()
        .filter(|m| !m.needs_quadratic() || quadratic)
        .filter(|m| *m != Method::Plateaued || plateaued)
        .collect()
}
