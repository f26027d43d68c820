use std::collections::HashMap;
use std::time::Instant;

use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use super::CheckReport;
use crate::branching::Constructor;
use crate::error::{Error, Result};
use crate::params::{Family, ParamPoint};
use crate::partition::{dominance_leq, enumerate_bounded, Partition};
use crate::scalar::{int, pochhammer, powi, rat, GaussRational, Rational, Scalar};
use crate::sympoly::{mbasis_mul, ExponentMap, SymPoly};

type G = GaussRational;

fn exp_mul(a: &ExponentMap<G>, b: &ExponentMap<G>) -> ExponentMap<G> {
    let mut out = ExponentMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(G::zero);
            *entry = entry.clone() + ca.clone() * cb.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `c0 + c1 y_j` as an exponent map in `n` variables.
fn affine(j: usize, c0: G, c1: G, n: usize) -> ExponentMap<G> {
    let mut e = vec![0u32; n];
    let mut out = ExponentMap::from([(e.clone(), c0)]);
    e[j] = 1;
    out.insert(e, c1);
    out.retain(|_, c| !c.is_zero());
    out
}

fn exp_pow(a: &ExponentMap<G>, k: u32, n: usize) -> ExponentMap<G> {
    (0..k).fold(ExponentMap::from([(vec![0u32; n], G::one())]), |acc, _| {
        exp_mul(&acc, a)
    })
}

/// A real rational that must be a nonnegative integer.
fn nonneg_int(x: &G, what: &str) -> Result<u32> {
    let bad =
        || Error::UnsupportedParameters(format!("{what} = {x} must be a nonnegative integer"));
    if !x.is_real() || !x.re.is_integer() || x.re.is_negative() {
        return Err(bad());
    }
    x.re.to_integer().to_u32().ok_or_else(bad)
}

/// The exact product-measure moment functional and polynomial weight of one
/// of the classical families.
struct Oracle {
    weight: ExponentMap<G>,
    moments: Vec<G>,
}

impl Oracle {
    fn new(params: &ParamPoint<G>, n: usize, max_degree: usize) -> Result<Self> {
        let one_var = |mu: &dyn Fn(u32) -> Rational| {
            (0..=max_degree as u32)
                .map(|a| G::real(mu(a)))
                .collect::<Vec<_>>()
        };
        let diff = |j: usize, k: usize, scale: Rational| {
            let mut e = ExponentMap::from([(unit(j, n), G::real(scale.clone()))]);
            e.insert(unit(k, n), G::real(-scale));
            e
        };
        let pair_weight = |g: u32, scale: Rational| {
            let mut w = exp_pow(&ExponentMap::new(), 0, n);
            for j in 0..n {
                for k in j + 1..n {
                    w = exp_mul(&w, &exp_pow(&diff(j, k, scale.clone()), 2 * g, n));
                }
            }
            w
        };
        match params {
            ParamPoint::Hermite { g, omega } => {
                let g = nonneg_int(g, "g")?;
                let omega = omega.re.clone();
                let moments = one_var(&|a| {
                    if a % 2 == 1 {
                        return Rational::zero();
                    }
                    let dfact: Rational = (1..a).step_by(2).map(|v| int(v as i64)).product();
                    dfact / (int(2) * omega.clone()).pow(a as i32 / 2)
                });
                Ok(Oracle {
                    weight: pair_weight(g, Rational::one()),
                    moments,
                })
            }
            ParamPoint::Laguerre { g, h, omega } => {
                let g = nonneg_int(g, "g")?;
                let (h, omega) = (h.clone(), omega.clone());
                let moments = (0..=max_degree as u32)
                    .map(|a| pochhammer(&h, a) * powi(&omega, -(a as i64)).expect("ω is nonzero"))
                    .collect();
                Ok(Oracle {
                    weight: pair_weight(g, Rational::one()),
                    moments,
                })
            }
            ParamPoint::Jacobi { g, g0, g1 } => {
                let g = nonneg_int(g, "g")?;
                let half = G::real(rat(1, 2));
                let a0 = nonneg_int(&(g0.clone() - half.clone()), "g0 - 1/2")?;
                let a1 = nonneg_int(&(g1.clone() - half), "g1 - 1/2")?;
                let mut weight = pair_weight(g, rat(1, 4));
                let quarter = G::real(rat(1, 4));
                for j in 0..n {
                    let sin2 = affine(j, G::real(rat(1, 2)), -quarter.clone(), n);
                    let cos2 = affine(j, G::real(rat(1, 2)), quarter.clone(), n);
                    weight = exp_mul(
                        &weight,
                        &exp_mul(&exp_pow(&sin2, a0, n), &exp_pow(&cos2, a1, n)),
                    );
                }
                let moments = one_var(&|a| {
                    if a % 2 == 1 {
                        Rational::zero()
                    } else {
                        Rational::from_integer(binomial(a as i64, a as i64 / 2).into())
                    }
                });
                Ok(Oracle { weight, moments })
            }
            _ => Err(Error::UnsupportedFamily(format!(
                "no moment oracle for {}",
                params.family().name()
            ))),
        }
    }

    /// `∫ f W` for a polynomial `f` given in the monomial basis.
    fn pair(&self, f: &SymPoly<G>) -> G {
        let mut acc = G::zero();
        for (e, c) in exp_mul(&f.to_exponent_map(), &self.weight) {
            let m = e
                .iter()
                .fold(G::one(), |m, &a| m * self.moments[a as usize].clone());
            acc = acc + c * m;
        }
        acc
    }
}

fn unit(j: usize, n: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    e[j] = 1;
    e
}

fn pair_degree(params: &ParamPoint<G>, n: usize, size: u32) -> Result<usize> {
    let g = match params {
        ParamPoint::Hermite { g, .. }
        | ParamPoint::Laguerre { g, .. }
        | ParamPoint::Jacobi { g, .. } => nonneg_int(g, "g")?,
        _ => 0,
    };
    let extra = match params {
        ParamPoint::Jacobi { g0, g1, .. } => {
            let half = G::real(rat(1, 2));
            nonneg_int(&(g0.clone() - half.clone()), "g0 - 1/2")?
                + nonneg_int(&(g1.clone() - half), "g1 - 1/2")?
        }
        _ => 0,
    };
    Ok(2 * size as usize + 2 * g as usize * n.saturating_sub(1) + extra as usize)
}

/// Built polynomials and moment oracles at one restricted parameter point.
pub struct OrthogonalitySession {
    params: ParamPoint<G>,
    constructor: Constructor,
    oracles: HashMap<(usize, usize), Oracle>,
}

impl OrthogonalitySession {
    pub fn new(params: &ParamPoint<G>) -> Result<Self> {
        pair_degree(params, 1, 0)?;
        Oracle::new(params, 1, 0)?;
        Ok(OrthogonalitySession {
            params: params.clone(),
            constructor: Constructor::new(params.clone()),
            oracles: HashMap::new(),
        })
    }

    /// `⟨P_λ, m_μ⟩ = 0` for every `μ < λ` in dominance order fitting `n`.
    pub fn check(&mut self, n: usize, lam: &Partition, falsify: bool) -> Result<CheckReport> {
        let start = Instant::now();
        let mut p = self.constructor.build(lam, n)?;
        if falsify {
            p = falsified(&p, lam, n);
        }
        let degree = pair_degree(&self.params, n, lam.size())?;
        let key = (n, degree);
        if !self.oracles.contains_key(&key) {
            self.oracles
                .insert(key, Oracle::new(&self.params, n, degree)?);
        }
        let oracle = &self.oracles[&key];
        let mut cx = None;
        for mu in enumerate_bounded(n, lam.size()) {
            if mu == *lam || !dominance_leq(&mu, lam, n) {
                continue;
            }
            let v = oracle.pair(&mbasis_mul(&p, &SymPoly::monomial(mu.clone(), G::one(), n)));
            if !v.is_zero() {
                cx = Some(format!("<P_{lam}, m_{mu}> = {v}"));
                break;
            }
        }
        let sizes = json!({"n": n, "lambda": lam});
        Ok(CheckReport::new(
            "orthogonality",
            self.params.family(),
            sizes,
            self.params.to_json(),
            start,
            cx,
        ))
    }
}

/// Negates the lowest non-leading coefficient, or adds a constant when
/// `P_λ` is a bare monomial.
fn falsified(p: &SymPoly<G>, lam: &Partition, n: usize) -> SymPoly<G> {
    match p
        .sorted_terms()
        .into_iter()
        .rev()
        .find(|(mu, _)| *mu != lam)
    {
        Some((mu, c)) => p.sub(&SymPoly::monomial(
            mu.clone(),
            c.clone() * G::from_int(2),
            n,
        )),
        None => p.add(&SymPoly::one(n)),
    }
}

/// The restricted parameter points at which the moment oracles apply:
/// `g ∈ {0, 1, 2}` for Hermite and Laguerre, and three `(g, g0, g1)`
/// triples for Jacobi.
pub fn oracle_points(family: Family) -> Vec<ParamPoint<G>> {
    let r = |n: i64, d: i64| G::real(rat(n, d));
    match family {
        Family::Hermite => (0..3)
            .map(|g| ParamPoint::Hermite {
                g: r(g, 1),
                omega: r(3, 2),
            })
            .collect(),
        Family::Laguerre => (0..3)
            .map(|g| ParamPoint::Laguerre {
                g: r(g, 1),
                h: r(5, 2),
                omega: r(2, 1),
            })
            .collect(),
        Family::Jacobi => [
            ((1, 1), (1, 2), (1, 2)),
            ((1, 1), (3, 2), (1, 2)),
            ((2, 1), (1, 2), (3, 2)),
        ]
        .into_iter()
        .map(|(g, g0, g1)| ParamPoint::Jacobi {
            g: r(g.0, g.1),
            g0: r(g0.0, g0.1),
            g1: r(g1.0, g1.1),
        })
        .collect(),
        _ => Vec::new(),
    }
}

pub fn orthogonality_check(
    params: &ParamPoint<G>,
    n: usize,
    lam: &Partition,
    falsify: bool,
) -> Result<CheckReport> {
    OrthogonalitySession::new(params)?.check(n, lam, falsify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::part;

    fn g(n: i64, d: i64) -> G {
        G::real(rat(n, d))
    }

    #[test]
    fn moment_examples() {
        let h = ParamPoint::Hermite {
            g: g(1, 1),
            omega: g(1, 1),
        };
        assert!(
            orthogonality_check(&h, 2, &part(&[1, 1]), false)
                .unwrap()
                .passed
        );
        assert!(
            !orthogonality_check(&h, 2, &part(&[1, 1]), true)
                .unwrap()
                .passed
        );
        let h1 = ParamPoint::Hermite {
            g: g(2, 1),
            omega: g(3, 1),
        };
        assert!(
            orthogonality_check(&h1, 1, &part(&[2]), false)
                .unwrap()
                .passed
        );
        let l = ParamPoint::Laguerre {
            g: g(1, 1),
            h: g(5, 2),
            omega: g(3, 1),
        };
        assert!(
            orthogonality_check(&l, 1, &part(&[1]), false)
                .unwrap()
                .passed
        );
        assert!(
            !orthogonality_check(&l, 1, &part(&[1]), true)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn restricted_parameters() {
        let h = ParamPoint::Hermite {
            g: g(1, 2),
            omega: g(1, 1),
        };
        assert!(matches!(
            orthogonality_check(&h, 2, &part(&[1]), false),
            Err(Error::UnsupportedParameters(_))
        ));
        let j = ParamPoint::Jacobi {
            g: g(1, 1),
            g0: g(1, 1),
            g1: g(1, 2),
        };
        assert!(matches!(
            orthogonality_check(&j, 1, &part(&[1]), false),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn two_variable_jacobi() {
        let j = ParamPoint::Jacobi {
            g: g(1, 1),
            g0: g(3, 2),
            g1: g(1, 2),
        };
        for lam in [part(&[1]), part(&[1, 1]), part(&[2, 1])] {
            let rep = orthogonality_check(&j, 2, &lam, false).unwrap();
            assert!(rep.passed, "{}", rep.summary());
        }
    }
}
