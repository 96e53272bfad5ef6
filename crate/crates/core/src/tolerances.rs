use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical knobs shared by every module.
///
/// Defaults are the values the property suites are calibrated against;
/// changing them changes what `verify` can promise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Composite Gauss–Legendre panels for path integrals.
    pub quad_panels: usize,
    /// Nodes per panel.
    pub quad_nodes: usize,
    /// Grid size for the sup over the real line in `big_m`.
    pub sup_grid: usize,
    /// Golden-section stopping width (in the compactified angle).
    pub sup_refine_tol: f64,
    /// Random starts of the dual-norm maximizer.
    pub dual_starts: usize,
    /// Gradient-norm stopping criterion of the dual-norm maximizer.
    pub dual_tol: f64,
    /// Relative bracket width at which cometric bisection stops.
    pub bisect_rel_tol: f64,
    /// Step sweep for finite differences.
    pub fd_steps: Vec<f64>,
    /// Cells where |φ| falls below this fraction of max |φ| get a zero phase.
    pub zero_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_panels: 64,
            quad_nodes: 8,
            sup_grid: 2048,
            sup_refine_tol: 1e-10,
            dual_starts: 32,
            dual_tol: 1e-12,
            bisect_rel_tol: 1e-10,
            fd_steps: vec![1e-3, 1e-4, 1e-5, 1e-6],
            zero_floor: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let counts = [self.quad_panels, self.quad_nodes, self.sup_grid, self.dual_starts];
        let reals = [self.sup_refine_tol, self.dual_tol, self.bisect_rel_tol, self.zero_floor];
        if counts.contains(&0)
            || reals.iter().any(|&r| !(r > 0.0))
            || self.fd_steps.is_empty()
            || self.fd_steps.iter().any(|&h| !(h > 0.0))
        {
            return Err(Error::InvalidArgument(
                "tolerances must be strictly positive".into(),
            ));
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
    fn zero_entries_rejected() {
        assert!(Tolerances { quad_nodes: 0, ..Default::default() }.validate().is_err());
        assert!(Tolerances { fd_steps: vec![1e-3, -1e-4], ..Default::default() }.validate().is_err());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let t: Tolerances = serde_json::from_str(r#"{"quad_panels": 16}"#).unwrap();
        assert_eq!(t.quad_panels, 16);
        assert_eq!(t.sup_grid, 2048);
    }
}
