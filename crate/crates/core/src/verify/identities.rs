use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use super::{first_difference, pieri_family_source, CheckReport, PolySource};
use crate::branching::{Builder, Constructor, QZeroBuilder};
use crate::error::{Error, Result};
use crate::hermite_limit::HermiteLimit;
use crate::params::{Family, ParamPoint};
use crate::partition::{
    complement, enumerate_subpartitions, is_horizontal_strip, proximity_neighbors, Partition,
};
use crate::pieri::{generator_er, pieri_coeff};
use crate::scalar::{pochhammer, powi, q_pochhammer, GaussRational, Scalar};
use crate::sympoly::{elementary, mbasis_mul, onevar_basis, OneVarPoly, SymPoly};

type G = GaussRational;

/// A polynomial in `y_1..y_m` and `w_1..w_n`, symmetric in each group:
/// `Σ_α m_α(y) Q_α(w)`.
type BiPoly = BTreeMap<Partition, SymPoly<G>>;

fn bi_add(bp: &mut BiPoly, alpha: &Partition, q: SymPoly<G>) {
    let entry = bp
        .entry(alpha.clone())
        .or_insert_with(|| SymPoly::zero(q.nvars()));
    *entry = entry.add(&q);
    if entry.is_zero() {
        bp.remove(alpha);
    }
}

fn bi_add_product(bp: &mut BiPoly, x: &SymPoly<G>, z: &SymPoly<G>, c: &G) {
    let zc = z.scale(c);
    for (alpha, a) in x.terms() {
        bi_add(bp, alpha, zc.scale(a));
    }
}

/// `Π_{j ≤ m, k ≤ n} (y_j - w_k) = Σ_{ν ⊂ n^m} m_ν(y) (-1)^{mn-|ν|} Π_j e_{n-ν_j}(w)`.
fn product_of_differences(m: usize, n: usize) -> BiPoly {
    let mut out = BiPoly::new();
    for nu in enumerate_subpartitions(m, n as u32) {
        let mut q = SymPoly::one(n);
        for j in 1..=m {
            q = mbasis_mul(&q, &elementary(n - nu.at(j) as usize, n));
        }
        let sign = if (m * n - nu.size() as usize) % 2 == 1 {
            -G::one()
        } else {
            G::one()
        };
        bi_add(&mut out, &nu, q.scale(&sign));
    }
    out
}

fn compare(lhs: &BiPoly, rhs: &BiPoly, nz: usize) -> Option<String> {
    let zero = SymPoly::zero(nz);
    let mut keys: Vec<&Partition> = lhs.keys().chain(rhs.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|alpha| {
        let (l, r) = (
            lhs.get(alpha).unwrap_or(&zero),
            rhs.get(alpha).unwrap_or(&zero),
        );
        first_difference(l, r).map(|d| format!("m_{alpha}(x) times {d} (z side)"))
    })
}

fn sign(e: usize) -> G {
    if e % 2 == 1 {
        -G::one()
    } else {
        G::one()
    }
}

/// Built polynomials on both sides of a Cauchy identity at one point.
pub struct CauchySession {
    params: ParamPoint<G>,
    x: Box<dyn PolySource>,
    z: Box<dyn PolySource>,
}

impl CauchySession {
    /// For a Whittaker point the identity pairs `P(x; q, 0, t_l)` with
    /// `P(z; 0, q, t_l)`; otherwise the dual side is the family at the dual
    /// parameters.
    pub fn new(params: &ParamPoint<G>) -> Result<Self> {
        let z: Box<dyn PolySource> = match params.family() {
            Family::Whittaker => Box::new(QZeroBuilder::new(params)?),
            _ => Box::new(Constructor::new(params.dual()?)),
        };
        Ok(CauchySession {
            params: params.clone(),
            x: Box::new(Constructor::new(params.clone())),
            z,
        })
    }

    /// Sign-and-power prefactor and the rescaling of the dual-side base
    /// variable.
    fn prefactor(&self, e: usize) -> Result<(G, G)> {
        let pole = || Error::NonGenericParameters("g vanishes".into());
        Ok(match &self.params {
            ParamPoint::Wilson { g, .. } => {
                let g2 = g.clone() * g.clone();
                (
                    powi(&-g2.clone(), e as i64).expect("nonnegative"),
                    g2.inv().ok_or_else(pole)?,
                )
            }
            ParamPoint::ContinuousHahn { g, .. } => (
                powi(&-g.clone(), e as i64).expect("nonnegative"),
                g.inv().ok_or_else(pole)?,
            ),
            _ => (sign(e), G::one()),
        })
    }

    pub fn check(&mut self, m: usize, n: usize, falsify: bool) -> Result<CheckReport> {
        let start = Instant::now();
        let lhs = product_of_differences(m, n);
        let mut rhs = BiPoly::new();
        for lam in enumerate_subpartitions(m, n as u32) {
            let px = self.x.poly(&lam, m)?;
            let dual_index = complement(m as u32, n, &lam.conjugate())?;
            let (mut c, s) = self.prefactor(m * n - lam.size() as usize)?;
            let pz = self.z.poly(&dual_index, n)?.rescale_variables(&s);
            if falsify && lam.is_empty() {
                c = -c;
            }
            bi_add_product(&mut rhs, &px, &pz, &c);
        }
        let sizes = json!({"m": m, "n": n});
        Ok(CheckReport::new(
            "cauchy",
            self.params.family(),
            sizes,
            self.params.to_json(),
            start,
            compare(&lhs, &rhs, n),
        ))
    }
}

/// Cauchy identity with `m` variables on the family side and `n` on the
/// dual side, compared as exact polynomials.
pub fn cauchy_check(
    params: &ParamPoint<G>,
    m: usize,
    n: usize,
    falsify: bool,
) -> Result<CheckReport> {
    CauchySession::new(params)?.check(m, n, falsify)
}

/// `Π_j (y_j - w) = Σ_r c_r E_r(y) b_{m-r}(w)` with the family's generators
/// `E_r` and one-variable basis `b_k`.
pub fn column_row_check(params: &ParamPoint<G>, m: usize, falsify: bool) -> Result<CheckReport> {
    let start = Instant::now();
    let lin = |a: G, b: G| OneVarPoly::linear(a, b);
    let shifted_product = |k: usize, f: &dyn Fn(usize) -> OneVarPoly<G>| {
        (0..k).fold(OneVarPoly::constant(G::one()), |acc, j| acc.mul(&f(j)))
    };
    let mut lhs_scale = G::one();
    let mut rhs = BiPoly::new();
    for r in 0..=m {
        let k = m - r;
        let (coef, basis) = match params {
            ParamPoint::AskeyWilson { t, tl, .. } => {
                let modulus_t = ParamPoint::Whittaker {
                    q: t.clone(),
                    tl: tl.clone(),
                };
                (sign(k), onevar_basis(k, &modulus_t)?)
            }
            ParamPoint::Whittaker { .. }
            | ParamPoint::Laguerre { .. }
            | ParamPoint::Hermite { .. } => (sign(k), onevar_basis(k, params)?),
            ParamPoint::Wilson { g, gl } => {
                let b = shifted_product(k, &|j| {
                    let a = gl[0].clone() + g.clone() * G::from_int(j as i64);
                    lin(a.clone() * a, G::one())
                });
                (sign(m), b)
            }
            ParamPoint::ContinuousHahn { g, g0, .. } => {
                let b = shifted_product(k, &|j| {
                    lin(
                        g0.clone() + g.clone() * G::from_int(j as i64),
                        G::imag_unit(),
                    )
                });
                (powi(&G::imag_unit(), m as i64).expect("i is invertible"), b)
            }
            ParamPoint::Jacobi { .. } => {
                lhs_scale =
                    powi(&G::from_rational(&crate::scalar::rat(-1, 4)), m as i64).expect("nonzero");
                (sign(m), onevar_basis(k, params)?)
            }
        };
        let coef = if falsify && r == 0 { -coef } else { coef };
        bi_add_product(
            &mut rhs,
            &generator_er(r, m, params)?,
            &basis.to_sympoly(),
            &coef,
        );
    }
    let lhs: BiPoly = product_of_differences(m, 1)
        .into_iter()
        .map(|(a, q)| (a, q.scale(&lhs_scale)))
        .collect();
    let sizes = json!({"m": m});
    Ok(CheckReport::new(
        "column-row",
        params.family(),
        sizes,
        params.to_json(),
        start,
        compare(&lhs, &rhs, 1),
    ))
}

/// Built polynomials and Pieri coefficients at one point.
pub struct PieriSession {
    params: ParamPoint<G>,
    polys: Box<dyn PolySource>,
    hermite: Option<HermiteLimit<G>>,
}

impl PieriSession {
    pub fn new(params: &ParamPoint<G>) -> Result<Self> {
        let hermite = match params {
            ParamPoint::Hermite { g, omega } => Some(HermiteLimit::new(g.clone(), omega.clone())?),
            _ => None,
        };
        Ok(PieriSession {
            params: params.clone(),
            polys: pieri_family_source(params)?,
            hermite,
        })
    }

    /// `C^{μ,n}_{λ,r}`, routing Hermite cases without a closed form through
    /// extraction.
    pub fn coeff(&mut self, lam: &Partition, mu: &Partition, n: usize, r: usize) -> Result<G> {
        match self.hermite.as_mut() {
            Some(h) => h.pieri(lam, mu, n, r),
            None => pieri_coeff(lam, mu, n, r, &self.params),
        }
    }

    pub fn poly(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<G>> {
        self.polys.poly(lam, n)
    }

    /// `E_r P_λ - Σ_μ C^{μ,n}_{λ,r} P_μ = 0`.
    pub fn check(
        &mut self,
        n: usize,
        lam: &Partition,
        r: usize,
        falsify: bool,
    ) -> Result<CheckReport> {
        let start = Instant::now();
        let lhs = mbasis_mul(&generator_er(r, n, &self.params)?, &self.poly(lam, n)?);
        let mut rhs = SymPoly::zero(n);
        let mut flipped = !falsify;
        for mu in proximity_neighbors(lam, r, n).into_iter().rev() {
            let mut c = self.coeff(lam, &mu, n, r)?;
            if c.is_zero() {
                continue;
            }
            if !flipped {
                c = -c;
                flipped = true;
            }
            rhs = rhs.add(&self.poly(&mu, n)?.scale(&c));
        }
        let sizes = json!({"n": n, "lambda": lam, "r": r});
        let cx = first_difference(&lhs, &rhs);
        Ok(CheckReport::new(
            "pieri-closure",
            self.params.family(),
            sizes,
            self.params.to_json(),
            start,
            cx,
        ))
    }
}

pub fn pieri_closure_check(
    params: &ParamPoint<G>,
    n: usize,
    lam: &Partition,
    r: usize,
    falsify: bool,
) -> Result<CheckReport> {
    PieriSession::new(params)?.check(n, lam, r, falsify)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    /// Leading terms of Askey-Wilson branching against Macdonald's formula.
    Macdonald,
    /// Leading terms of Hermite branching against the Jack formula.
    Jack,
}

/// Shared product over `1 ≤ j ≤ k ≤ ℓ(μ)` of four length-`λ_j - μ_j`
/// factors built by `f(a, b, c, d)` from the exponent data.
fn strip_product(
    lam: &Partition,
    mu: &Partition,
    mut f: impl FnMut(i64, i64, i64, u32) -> Result<G>,
) -> Result<G> {
    let mut acc = G::one();
    for j in 1..=mu.len() {
        let len = lam.at(j) - mu.at(j);
        for k in j..=mu.len() {
            let (mj, mk, lk1) = (mu.at(j) as i64, mu.at(k) as i64, lam.at(k + 1) as i64);
            acc = acc * f(mj - mk, mj - lk1, (k - j) as i64, len)?;
        }
    }
    Ok(acc)
}

/// Macdonald's `ψ`-type branching coefficient `B_{λ/μ}(q, t)`.
pub fn macdonald_product(lam: &Partition, mu: &Partition, q: &G, t: &G) -> Result<G> {
    let ng = || Error::NonGenericParameters("q or t vanishes".into());
    strip_product(lam, mu, |dmu, dlam, kj, len| {
        let pw = |a: i64, b: i64| -> Result<G> {
            Ok(powi(q, a).ok_or_else(ng)? * powi(t, b).ok_or_else(ng)?)
        };
        let num =
            q_pochhammer(&pw(dmu, 1 + kj)?, q, len) * q_pochhammer(&pw(1 + dlam, kj)?, q, len);
        let den =
            q_pochhammer(&pw(1 + dmu, kj)?, q, len) * q_pochhammer(&pw(dlam, 1 + kj)?, q, len);
        num.checked_div(&den)
            .ok_or_else(|| Error::NonGenericParameters("vanishing denominator".into()))
    })
}

/// The Jack branching coefficient `B_{λ/μ}(g)`.
pub fn jack_product(lam: &Partition, mu: &Partition, g: &G) -> Result<G> {
    strip_product(lam, mu, |dmu, dlam, kj, len| {
        let a = |c: i64, m: i64| G::from_int(c) + g.clone() * G::from_int(m);
        let num = pochhammer(&a(dmu, 1 + kj), len) * pochhammer(&a(1 + dlam, kj), len);
        let den = pochhammer(&a(1 + dmu, kj), len) * pochhammer(&a(dlam, 1 + kj), len);
        num.checked_div(&den)
            .ok_or_else(|| Error::NonGenericParameters("vanishing denominator".into()))
    })
}

/// `B^d_{λ/μ}` from the branching formula against the closed product
/// formula, for a horizontal strip `λ/μ` with `λ ∈ Λ_{n+1}`, `μ ∈ Λ_n`.
pub fn product_formula_check(
    kind: ProductKind,
    params: &ParamPoint<G>,
    lam: &Partition,
    mu: &Partition,
    n: usize,
    falsify: bool,
) -> Result<CheckReport> {
    let start = Instant::now();
    if !is_horizontal_strip(lam, mu) {
        return Err(Error::InvalidPartition(format!(
            "{lam}/{mu} is not a horizontal strip"
        )));
    }
    let closed = match (kind, params) {
        (ProductKind::Macdonald, ParamPoint::AskeyWilson { q, t, .. }) => {
            macdonald_product(lam, mu, q, t)?
        }
        (ProductKind::Jack, ParamPoint::Hermite { g, .. }) => jack_product(lam, mu, g)?,
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "{kind:?} product formula at a {} point",
                params.family().name()
            )))
        }
    };
    let closed = if falsify { -closed } else { closed };
    let coeffs = Builder::new(params.clone())?.branch_coeffs(lam, mu, n)?;
    let d = (lam.size() - mu.size()) as usize;
    let top = coeffs.get(d).cloned().unwrap_or_else(G::zero);
    let cx = (top != closed).then(|| format!("B^{d} = {top}, product formula = {closed}"));
    let sizes = json!({"n": n, "lambda": lam, "mu": mu});
    Ok(CheckReport::new(
        "product-formula",
        params.family(),
        sizes,
        params.to_json(),
        start,
        cx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{random_params, ALL_FAMILIES};
    use crate::partition::part;
    use crate::scalar::rat;

    fn g(n: i64, d: i64) -> G {
        G::real(rat(n, d))
    }

    #[test]
    fn hermite_cauchy_examples() {
        let p = ParamPoint::Hermite {
            g: g(3, 2),
            omega: g(2, 1),
        };
        assert!(cauchy_check(&p, 1, 1, false).unwrap().passed);
        let bad = cauchy_check(&p, 1, 1, true).unwrap();
        assert!(!bad.passed);
        assert!(bad.counterexample.unwrap().contains("m_()"));
    }

    #[test]
    fn small_cauchy_for_every_family() {
        for fam in ALL_FAMILIES {
            let p = random_params(fam, 1);
            let rep = cauchy_check(&p, 1, 2, false).unwrap();
            assert!(rep.passed, "{}", rep.summary());
        }
    }

    #[test]
    fn column_row_small() {
        for fam in ALL_FAMILIES {
            let p = random_params(fam, 4);
            for m in 1..=2 {
                let rep = column_row_check(&p, m, false).unwrap();
                assert!(rep.passed, "{}", rep.summary());
                assert!(!column_row_check(&p, m, true).unwrap().passed);
            }
        }
    }

    #[test]
    fn pieri_closure_examples() {
        let h = ParamPoint::Hermite {
            g: g(2, 3),
            omega: g(5, 4),
        };
        assert!(
            pieri_closure_check(&h, 1, &part(&[2]), 1, false)
                .unwrap()
                .passed
        );
        let l = ParamPoint::Laguerre {
            g: g(1, 2),
            h: g(3, 1),
            omega: g(2, 1),
        };
        assert!(
            pieri_closure_check(&l, 2, &part(&[1]), 2, false)
                .unwrap()
                .passed
        );
        let aw = random_params(Family::AskeyWilson, 9);
        assert!(
            pieri_closure_check(&aw, 2, &part(&[1, 1]), 1, false)
                .unwrap()
                .passed
        );
        assert!(
            !pieri_closure_check(&aw, 2, &part(&[1, 1]), 1, true)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn product_formula_examples() {
        let h = ParamPoint::Hermite {
            g: g(5, 7),
            omega: g(1, 1),
        };
        assert_eq!(
            jack_product(&part(&[1]), &Partition::empty(), &g(5, 7)).unwrap(),
            G::one()
        );
        assert!(
            product_formula_check(
                ProductKind::Jack,
                &h,
                &part(&[1]),
                &Partition::empty(),
                0,
                false
            )
            .unwrap()
            .passed
        );
        assert!(
            product_formula_check(
                ProductKind::Jack,
                &h,
                &part(&[2, 1]),
                &part(&[1, 1]),
                2,
                false
            )
            .unwrap()
            .passed
        );
        let aw = random_params(Family::AskeyWilson, 2);
        assert!(
            product_formula_check(
                ProductKind::Macdonald,
                &aw,
                &part(&[1, 1]),
                &part(&[1]),
                1,
                false
            )
            .unwrap()
            .passed
        );
    }
}
