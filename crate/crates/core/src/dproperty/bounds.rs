use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{aff_plane_count, vector_plane_count};

/// Admissible output dimensions m for an APN (n,m)-function with the
/// D-property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionBounds {
    pub n: u32,
    pub quadratic: bool,
    pub m_min: u32,
    /// largest admissible m
    pub m_max: u32,
    /// floor(log2(plane count + 1)) for the relevant family of planes
    pub log_bound: u32,
    /// closed-form strict bound: 3n - 4 in general, 2n - 2 for quadratics
    pub strict_upper: u32,
}

impl DimensionBounds {
    pub fn admits(&self, m: u32) -> bool {
        (self.m_min..=self.m_max).contains(&m)
    }
}

fn floor_log2(x: u128) -> u32 {
    127 - x.leading_zeros()
}

/// General case (n > 2): 2^m - 1 <= |AFF_{2,n}|. Quadratic case (n > 3):
/// 2^m - 1 <= |V_{2,n}|, with m_max reported as 2n - 3.
pub fn dimension_bounds(n: u32, quadratic: bool) -> Result<DimensionBounds> {
    if n > 40 {
        return Err(Error::InvalidArguments(format!("n = {n} too large")));
    }
    if quadratic {
        if n <= 3 {
            return Err(Error::InvalidArguments(format!("quadratic bound needs n > 3, got {n}")));
        }
        Ok(DimensionBounds {
            n,
            quadratic,
            m_min: n,
            m_max: 2 * n - 3,
            log_bound: floor_log2(vector_plane_count(n) + 1),
            strict_upper: 2 * n - 2,
        })
    } else {
        if n <= 2 {
            return Err(Error::InvalidArguments(format!("general bound needs n > 2, got {n}")));
        }
        let log_bound = floor_log2(aff_plane_count(n) + 1);
        Ok(DimensionBounds { n, quadratic, m_min: n, m_max: log_bound, log_bound, strict_upper: 3 * n - 4 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let b = dimension_bounds(7, false).unwrap();
        assert!(b.m_max < 17);
        assert_eq!(b.strict_upper, 17);
        let q = dimension_bounds(7, true).unwrap();
        assert_eq!(q.m_max, 11);
        assert_eq!(dimension_bounds(3, false).unwrap().m_max, 3);
        assert!(dimension_bounds(2, false).is_err());
        assert!(dimension_bounds(3, true).is_err());
    }
}
