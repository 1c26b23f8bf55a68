//! Work-size guards.
//!
//! Every expensive routine estimates its work as a power of two and refuses
//! to run past its limit. `DILLONLAB_MAX_BITS` replaces every limit with a
//! single value ("expert mode").

use crate::error::{Error, Result};

pub const ENV_MAX_BITS: &str = "DILLONLAB_MAX_BITS";

/// General triple scan of the D-property definition: 2^{3n} iterations.
pub const TRIPLE_SCAN_BITS: u32 = 30;
/// Spectral checks (moment4, moment3): n + m.
pub const SPECTRAL_BITS: u32 = 28;
/// Exact moment identities, both sides in full: n + m.
pub const IDENTITY_BITS: u32 = 22;
/// Subset loop of the ANF span check: n - 1.
pub const ANF_SUBSET_BITS: u32 = 20;
/// Coverage bitsets and per-row counters over F_2^m: m.
pub const OUTPUT_BITS: u32 = 28;
/// Plane enumeration for the Phi map: 3n.
pub const PLANE_BITS: u32 = 30;

fn env_override() -> Option<u32> {
    std::env::var(ENV_MAX_BITS).ok()?.trim().parse().ok()
}

pub(crate) fn check(what: &'static str, bits: u32, default_limit: u32, hint: &'static str) -> Result<()> {
    let limit = env_override().unwrap_or(default_limit);
    if bits > limit {
        return Err(Error::SizeLimit { what, bits, limit, hint });
    }
    Ok(())
}
