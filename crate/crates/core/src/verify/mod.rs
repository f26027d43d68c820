//! Identity and oracle checks for built polynomials: Cauchy and column-row
//! identities, Pieri closure, moment orthogonality, branching product
//! formulas and floating-point degeneration trends.
//!
//! Every check takes a `falsify` flag that deliberately corrupts one
//! coefficient, so that the checker itself can be shown to fail.

mod degeneration;
mod identities;
mod orthogonality;

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub use degeneration::{degeneration_check, degeneration_errors, DEFAULT_HALVINGS};
pub use identities::{
    cauchy_check, column_row_check, jack_product, macdonald_product, pieri_closure_check,
    product_formula_check, CauchySession, PieriSession, ProductKind,
};
pub use orthogonality::{oracle_points, orthogonality_check, OrthogonalitySession};

use crate::branching::{Constructor, QZeroBuilder};
use crate::error::Result;
use crate::params::{Family, ParamPoint};
use crate::partition::Partition;
use crate::scalar::GaussRational;
use crate::sympoly::SymPoly;

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub family: String,
    pub sizes: Value,
    pub params: Value,
    pub seed: Option<u64>,
    pub passed: bool,
    /// First offending term when the check fails.
    pub counterexample: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    fn new(
        check: &str,
        family: Family,
        sizes: Value,
        params: Value,
        start: Instant,
        counterexample: Option<String>,
    ) -> Self {
        CheckReport {
            check: check.to_string(),
            family: family.name().to_string(),
            sizes,
            params,
            seed: None,
            passed: counterexample.is_none(),
            counterexample,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let status = if self.passed { "pass" } else { "FAIL" };
        match &self.counterexample {
            Some(c) => format!(
                "{status} {} {} {}: {c}",
                self.check, self.family, self.sizes
            ),
            None => format!("{status} {} {} {}", self.check, self.family, self.sizes),
        }
    }
}

/// Anything that can produce `P_λ` in `n` variables at a fixed point.
pub trait PolySource {
    fn poly(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<GaussRational>>;
}

impl PolySource for Constructor {
    fn poly(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<GaussRational>> {
        self.build(lam, n)
    }
}

impl PolySource for QZeroBuilder {
    fn poly(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<GaussRational>> {
        self.build(lam, n)
    }
}

/// The polynomials whose Pieri coefficients `pieri_coeff` returns: for a
/// Whittaker point these are `P(x; 0, q, t_l)`, otherwise the family itself.
pub fn pieri_family_source(params: &ParamPoint<GaussRational>) -> Result<Box<dyn PolySource>> {
    Ok(match params.family() {
        Family::Whittaker => Box::new(QZeroBuilder::new(params)?),
        _ => Box::new(Constructor::new(params.clone())),
    })
}

fn first_difference(lhs: &SymPoly<GaussRational>, rhs: &SymPoly<GaussRational>) -> Option<String> {
    let diff = lhs.sub(rhs);
    diff.sorted_terms().first().map(|(mu, _)| {
        format!(
            "coefficient of m_{mu}: {} vs {}",
            lhs.coeff(mu),
            rhs.coeff(mu)
        )
    })
}
