//! Symmetric Hermite polynomials as the exact `β -> 0` limit of continuous
//! Hahn polynomials, and extraction of Hermite Pieri coefficients that have
//! no closed form.

use std::collections::{BTreeMap, HashMap};

use crate::branching::{ClosedForm, DualPieri, LimitBuilder, Recursion};
use crate::error::{Error, Result};
use crate::params::ParamPoint;
use crate::partition::Partition;
use crate::pieri::pieri_coeff;
use crate::scalar::{rat, GaussRational, LimitScalar, Scalar};
use crate::sympoly::{elementary, mbasis_mul, SymPoly};

/// Hermite polynomials at `(g, ω)` via continuous Hahn polynomials with
/// `g0 = 1/(ω0 β²)`, `g1 = 1/(ω1 β²)`, `ω0 + ω1 = ω`, where `u = β²` is
/// the formal variable.
type ChahnSeries<F> = Recursion<LimitScalar<F>, ClosedForm<LimitScalar<F>>>;

pub struct HermiteLimit<F: Scalar> {
    closed: ParamPoint<F>,
    chahn: LimitBuilder<F, LimitScalar<F>, ChahnSeries<F>>,
    products: HashMap<(usize, Partition, usize), BTreeMap<Partition, F>>,
}

impl<F: Scalar> HermiteLimit<F> {
    /// Uses the split `ω0 = ω1 = ω/2`.
    pub fn new(g: F, omega: F) -> Result<Self> {
        let half = omega.clone() * F::from_rational(&rat(1, 2));
        Self::with_split(g, omega, half)
    }

    pub fn with_split(g: F, omega: F, omega0: F) -> Result<Self> {
        let omega1 = omega.clone() - omega0.clone();
        if omega0.is_zero() || omega1.is_zero() {
            return Err(Error::InvalidParameters(
                "both parts of the ω split must be nonzero".into(),
            ));
        }
        let u = LimitScalar::<F>::var();
        let coupling = |w: &F| {
            (LimitScalar::constant(w.clone()) * u.clone())
                .inv()
                .expect("nonzero times the formal variable")
        };
        let chahn = ParamPoint::ContinuousHahn {
            g: LimitScalar::constant(g.clone()),
            g0: coupling(&omega0),
            g1: coupling(&omega1),
        };
        Ok(HermiteLimit {
            closed: ParamPoint::Hermite { g, omega },
            chahn: LimitBuilder::new(Recursion::closed_form(chahn)?, true),
            products: HashMap::new(),
        })
    }

    /// `P^H_λ = lim β^{|λ|} P^{cH}_λ(x/β)`, coefficient by coefficient.
    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<F>> {
        let out = self.chahn.build(lam, n)?;
        if let Some((mu, _)) = out.terms().iter().find(|(_, c)| **c != c.conj()) {
            return Err(Error::NonzeroImaginary(mu.clone()));
        }
        Ok(out)
    }

    /// Coefficients of `P^H_ν` in `e_r P^H_λ`, by triangular back-substitution.
    pub fn expand_product(
        &mut self,
        lam: &Partition,
        n: usize,
        r: usize,
    ) -> Result<BTreeMap<Partition, F>> {
        let key = (n, lam.clone(), r);
        if let Some(e) = self.products.get(&key) {
            return Ok(e.clone());
        }
        let mut rest = mbasis_mul(&elementary(r, n), &self.build(lam, n)?);
        let mut out = BTreeMap::new();
        while let Some((nu, c)) = rest.leading().map(|(a, b)| (a.clone(), b.clone())) {
            let p = self.build(&nu, n)?;
            rest = rest.sub(&p.scale(&c));
            out.insert(nu, c);
        }
        self.products.insert(key, out.clone());
        Ok(out)
    }

    /// The coefficient of `P^H_μ` in `e_r P^H_λ`.
    pub fn extract(&mut self, lam: &Partition, mu: &Partition, n: usize, r: usize) -> Result<F> {
        Ok(self
            .expand_product(lam, n, r)?
            .remove(mu)
            .unwrap_or_else(F::zero))
    }

    /// The Pieri coefficient `C^{μ,n}_{λ,r}`: the closed form when
    /// `|J| = r`, extraction otherwise.
    pub fn pieri(&mut self, lam: &Partition, mu: &Partition, n: usize, r: usize) -> Result<F> {
        match pieri_coeff(lam, mu, n, r, &self.closed) {
            Err(Error::HermiteGeneralCase { .. }) => self.extract(lam, mu, n, r),
            other => other,
        }
    }
}

impl<F: Scalar> DualPieri<F> for HermiteLimit<F> {
    fn dual_pieri(&mut self, lam: &Partition, mu: &Partition, m: usize, r: usize) -> Result<F> {
        self.pieri(lam, mu, m, r)
    }
}

pub fn build_hermite_exact(
    lam: &Partition,
    n: usize,
    g: &GaussRational,
    omega: &GaussRational,
) -> Result<SymPoly<GaussRational>> {
    HermiteLimit::new(g.clone(), omega.clone())?.build(lam, n)
}

pub fn extract_pieri_hermite(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    r: usize,
    g: &GaussRational,
    omega: &GaussRational,
) -> Result<GaussRational> {
    HermiteLimit::new(g.clone(), omega.clone())?.extract(lam, mu, n, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_bounded, index_sets, part, proximity_neighbors};

    type G = GaussRational;

    fn g(n: i64, d: i64) -> G {
        G::real(rat(n, d))
    }

    #[test]
    fn build_examples() {
        let (gg, omega) = (g(5, 3), g(3, 2));
        let mut h = HermiteLimit::new(gg.clone(), omega.clone()).unwrap();
        let p = h.build(&part(&[2]), 1).unwrap();
        assert_eq!(p.coeff(&Partition::empty()), g(-1, 3));
        let p = h.build(&part(&[1, 1]), 2).unwrap();
        assert_eq!(p.coeff(&Partition::empty()), g(5, 9));
        assert_eq!(p.terms().len(), 2);
        assert_eq!(h.build(&Partition::empty(), 3).unwrap(), SymPoly::one(3));
    }

    #[test]
    fn extraction_examples() {
        let omega = g(7, 5);
        let mut h = HermiteLimit::new(g(2, 3), omega.clone()).unwrap();
        for m in 1..=4u32 {
            let c = h.extract(&part(&[m]), &part(&[m - 1]), 1, 1).unwrap();
            assert_eq!(
                c,
                G::from_int(m as i64) * (g(2, 1) * omega.clone()).inv().unwrap()
            );
        }
        let p = ParamPoint::Hermite { g: g(2, 3), omega };
        let closed = pieri_coeff(&part(&[1]), &Partition::empty(), 2, 1, &p).unwrap();
        assert_eq!(
            h.extract(&part(&[1]), &Partition::empty(), 2, 1).unwrap(),
            closed
        );
        assert!(!h
            .extract(&part(&[1, 1]), &part(&[1, 1]), 2, 2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn closed_forms_parity_and_split_independence() {
        let (gg, omega) = (g(3, 4), g(5, 2));
        let p = ParamPoint::Hermite {
            g: gg.clone(),
            omega: omega.clone(),
        };
        let mut a = HermiteLimit::new(gg.clone(), omega.clone()).unwrap();
        let mut b = HermiteLimit::with_split(gg, omega, g(1, 3)).unwrap();
        for n in 1..=2 {
            for lam in enumerate_bounded(n, 3) {
                for r in 1..=n {
                    for mu in proximity_neighbors(&lam, r, n) {
                        let x = a.extract(&lam, &mu, n, r).unwrap();
                        assert_eq!(x, b.extract(&lam, &mu, n, r).unwrap(), "{lam} {mu} {r}");
                        if (lam.size() as usize + r + mu.size() as usize) % 2 == 1 {
                            assert!(x.is_zero());
                        }
                        if index_sets(&lam, &mu, n).j.len() == r {
                            assert_eq!(
                                x,
                                pieri_coeff(&lam, &mu, n, r, &p).unwrap(),
                                "{lam} {mu} {r}"
                            );
                        }
                    }
                }
            }
        }
    }
}
