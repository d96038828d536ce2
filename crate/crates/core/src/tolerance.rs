use serde::{Deserialize, Serialize};

/// Numerical thresholds used across the crate.
///
/// * `structural`: Hermiticity, unitarity, X-pattern and trace checks.
/// * `spectral`: eigenvalue comparisons and the PSD test of a partial transpose.
/// * `band`: width of the "marginal" zone around a degeneracy or a
///   separability boundary. Verdicts inside it are flagged, never rounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub structural: f64,
    pub spectral: f64,
    pub band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-12,
            spectral: 1e-10,
            band: 1e-9,
        }
    }
}

impl Tolerances {
    /// Largest value accepted for a user override.
    pub const MAX_OVERRIDE: f64 = 1e-3;

    /// Checks that every threshold lies in `(0, MAX_OVERRIDE]`.
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("structural", self.structural),
            ("spectral", self.spectral),
            ("band", self.band),
        ] {
            if !(v > 0.0 && v <= Self::MAX_OVERRIDE) {
                return Err(crate::Error::Domain(format!(
                    "tolerance {name} = {v} outside (0, {}]",
                    Self::MAX_OVERRIDE
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let mut t = Tolerances::default();
        t.band = 0.0;
        assert!(t.validate().is_err());
        t.band = 2e-3;
        assert!(t.validate().is_err());
        t.band = 1e-3;
        t.validate().unwrap();
    }
}
