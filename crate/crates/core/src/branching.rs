//! Branching coefficients, branching polynomials and the recursive
//! construction of n-variable polynomials from one-variable ones.

use std::collections::HashMap;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::hermite_limit::HermiteLimit;
use crate::params::ParamPoint;
use crate::partition::{complement, precedes, predecessors, Partition};
use crate::pieri::pieri_coeff;
use crate::scalar::{
    powi, rat, rational_sqrt, with_series_terms, GaussRational, LimitField, LimitScalar,
    RationalFunction, Scalar, DEFAULT_SERIES_TERMS,
};
use crate::sympoly::{merge_sum, onevar_basis, OneVarPoly, SymPoly};

type G = GaussRational;
type L = LimitScalar<G>;
type R = RationalFunction<G>;

/// The parameters at which the dual-side Pieri coefficients are evaluated.
pub fn dual_params<F: Scalar>(params: &ParamPoint<F>) -> Result<ParamPoint<F>> {
    params.dual()
}

/// A source of dual-side Pieri coefficients `C^{μ,m}_{λ,r}`.
pub trait DualPieri<F> {
    fn dual_pieri(&mut self, lam: &Partition, mu: &Partition, m: usize, r: usize) -> Result<F>;
}

/// Dual Pieri coefficients from the closed formulas.
pub struct ClosedForm<F> {
    dual: ParamPoint<F>,
}

impl<F: Scalar> ClosedForm<F> {
    pub fn new(dual: ParamPoint<F>) -> Self {
        ClosedForm { dual }
    }
}

impl<F: Scalar> DualPieri<F> for ClosedForm<F> {
    fn dual_pieri(&mut self, lam: &Partition, mu: &Partition, m: usize, r: usize) -> Result<F> {
        pieri_coeff(lam, mu, m, r, &self.dual)
    }
}

/// The branching recursion for one parameter point, with a level cache of
/// built polynomials keyed by `(n, λ)`.
pub struct Recursion<F, D> {
    params: ParamPoint<F>,
    source: D,
    polys: HashMap<(usize, Partition), SymPoly<F>>,
    basis: Vec<OneVarPoly<F>>,
}

impl<F: Scalar> Recursion<F, ClosedForm<F>> {
    pub fn closed_form(params: ParamPoint<F>) -> Result<Self> {
        let dual = params.dual()?;
        Ok(Self::with_source(params, ClosedForm::new(dual)))
    }
}

impl<F: Scalar, D: DualPieri<F>> Recursion<F, D> {
    pub fn with_source(params: ParamPoint<F>, source: D) -> Self {
        Recursion {
            params,
            source,
            polys: HashMap::new(),
            basis: Vec::new(),
        }
    }

    pub fn params(&self) -> &ParamPoint<F> {
        &self.params
    }

    fn prefactor(&self, k: usize, size_diff: i64, m: usize) -> Result<F> {
        let sign = |e: i64| {
            if e.rem_euclid(2) == 1 {
                -F::one()
            } else {
                F::one()
            }
        };
        let pole = || Error::NonGenericParameters("g vanishes".into());
        Ok(match &self.params {
            ParamPoint::AskeyWilson { .. }
            | ParamPoint::Whittaker { .. }
            | ParamPoint::Laguerre { .. }
            | ParamPoint::Hermite { .. } => sign(k as i64 + size_diff),
            ParamPoint::Wilson { g, .. } => {
                sign(size_diff + m as i64) * powi(g, 2 * (size_diff - k as i64)).ok_or_else(pole)?
            }
            ParamPoint::ContinuousHahn { g, .. } => {
                powi(&F::imag_unit(), m as i64).expect("i is invertible")
                    * sign(size_diff)
                    * powi(g, size_diff - k as i64).ok_or_else(pole)?
            }
            ParamPoint::Jacobi { .. } => F::from_int(4i64.pow(m as u32)) * sign(size_diff),
        })
    }

    /// Evaluates the branching formula for `λ ∈ Λ_{n+1}`, `μ ∈ Λ_n` without
    /// requiring `μ ⪯ λ`; `d` counts the columns with `λ'_j = μ'_j + 1`.
    pub fn formula_coeffs(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<Vec<F>> {
        if !lam.fits(n + 1) || !mu.fits(n) {
            return Err(Error::InvalidPartition(format!(
                "need {lam} in Λ_{} and {mu} in Λ_{n}",
                n + 1
            )));
        }
        let m = lam.first() as usize;
        if m == 0 {
            return Ok(vec![if mu.is_empty() { F::one() } else { F::zero() }]);
        }
        let (lc, mc) = (lam.conjugate(), mu.conjugate());
        let d = (1..=m).filter(|&j| lc.at(j) == mc.at(j) + 1).count();
        let lam_p = complement(n as u32, m, &mc)?;
        let mu_p = complement(n as u32 + 1, m, &lc)?;
        let size_diff = lam.size() as i64 - mu.size() as i64;
        (0..=d)
            .map(|k| {
                let c = self.source.dual_pieri(&lam_p, &mu_p, m, m - k)?;
                Ok(self.prefactor(k, size_diff, m)? * c)
            })
            .collect()
    }

    /// `B^0..B^d` of `P_{λ/μ}` for `μ ⪯ λ`.
    pub fn branch_coeffs(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<Vec<F>> {
        if !precedes(mu, lam, n) {
            return Err(Error::InvalidPartition(format!(
                "{mu} does not precede {lam}"
            )));
        }
        self.formula_coeffs(lam, mu, n)
    }

    fn basis(&mut self, k: usize) -> Result<&OneVarPoly<F>> {
        while self.basis.len() <= k {
            let b = onevar_basis(self.basis.len(), &self.params)?;
            self.basis.push(b);
        }
        Ok(&self.basis[k])
    }

    /// `P_{λ/μ}` in the base variable.
    pub fn branch_poly(
        &mut self,
        lam: &Partition,
        mu: &Partition,
        n: usize,
    ) -> Result<OneVarPoly<F>> {
        let coeffs = self.branch_coeffs(lam, mu, n)?;
        let mut out = OneVarPoly::zero();
        for (k, b) in coeffs.iter().enumerate() {
            if !b.is_zero() {
                out = out.add(&self.basis(k)?.scale(b));
            }
        }
        Ok(out)
    }

    /// `P_λ` in `n` variables.
    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<F>> {
        if !lam.fits(n) {
            return Err(Error::InvalidPartition(format!(
                "{lam} has more than {n} parts"
            )));
        }
        if n == 0 {
            return Ok(SymPoly::one(0));
        }
        let key = (n, lam.clone());
        if let Some(p) = self.polys.get(&key) {
            return Ok(p.clone());
        }
        let mut parts = Vec::new();
        for mu in predecessors(lam, n - 1) {
            let p = self.build(&mu, n - 1)?;
            let u = self.branch_poly(lam, &mu, n - 1)?;
            parts.push((p, u));
        }
        let refs: Vec<(&SymPoly<F>, &OneVarPoly<F>)> = parts.iter().map(|(p, u)| (p, u)).collect();
        let out = merge_sum(&refs, n - 1)?;
        self.polys.insert(key, out.clone());
        Ok(out)
    }
}

enum Inner<F: Scalar> {
    Closed(Recursion<F, ClosedForm<F>>),
    Hermite(Box<Recursion<F, HermiteLimit<F>>>),
}

/// Recursive builder for any family; Hermite dual Pieri coefficients
/// without a closed form are extracted from the exact continuous Hahn
/// limit.
pub struct Builder<F: Scalar> {
    inner: Inner<F>,
}

macro_rules! dispatch {
    ($self:ident, $r:ident => $e:expr) => {
        match &mut $self.inner {
            Inner::Closed($r) => $e,
            Inner::Hermite($r) => $e,
        }
    };
}

impl<F: Scalar> Builder<F> {
    pub fn new(params: ParamPoint<F>) -> Result<Self> {
        let inner = match params.dual()? {
            ParamPoint::Hermite { g, omega } => Inner::Hermite(Box::new(Recursion::with_source(
                params,
                HermiteLimit::new(g, omega)?,
            ))),
            dual => Inner::Closed(Recursion::with_source(params, ClosedForm::new(dual))),
        };
        Ok(Builder { inner })
    }

    pub fn params(&self) -> &ParamPoint<F> {
        match &self.inner {
            Inner::Closed(r) => r.params(),
            Inner::Hermite(r) => r.params(),
        }
    }

    pub fn formula_coeffs(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<Vec<F>> {
        dispatch!(self, r => r.formula_coeffs(lam, mu, n))
    }

    pub fn branch_coeffs(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<Vec<F>> {
        dispatch!(self, r => r.branch_coeffs(lam, mu, n))
    }

    pub fn branch_poly(
        &mut self,
        lam: &Partition,
        mu: &Partition,
        n: usize,
    ) -> Result<OneVarPoly<F>> {
        dispatch!(self, r => r.branch_poly(lam, mu, n))
    }

    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<F>> {
        dispatch!(self, r => r.build(lam, n))
    }
}

/// Anything that yields one-variable branching polynomials.
pub trait BranchSource<F> {
    fn branch_poly(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<OneVarPoly<F>>;
    /// Drops cached values, which may carry a stale series precision.
    fn clear_cache(&mut self);
}

impl<F: Scalar, D: DualPieri<F>> BranchSource<F> for Recursion<F, D> {
    fn branch_poly(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<OneVarPoly<F>> {
        Recursion::branch_poly(self, lam, mu, n)
    }
    fn clear_cache(&mut self) {
        self.polys.clear();
        self.basis.clear();
    }
}

impl<F: Scalar> BranchSource<F> for Builder<F> {
    fn branch_poly(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<OneVarPoly<F>> {
        Builder::branch_poly(self, lam, mu, n)
    }
    fn clear_cache(&mut self) {
        match &mut self.inner {
            Inner::Closed(r) => r.clear_cache(),
            Inner::Hermite(r) => r.clear_cache(),
        }
    }
}

/// The `eps -> 0` limit of a family defined over a [`LimitField`].
///
/// Each one-variable branching polynomial is taken to its limit before the
/// merge, so all n-variable arithmetic happens in `F`. This is valid because
/// the limiting polynomials stay monic triangular, hence linearly
/// independent. With `rescale`, `eps = β²` and the limit is
/// `β^{|λ|} P_λ(x/β)`, which scales the coefficient of `y^k` in `P_{λ/μ}`
/// by `β^{|λ|-|μ|-k}`.
/// Longest series tried before a limit is reported as undecidable.
const MAX_SERIES_TERMS: usize = 16 * DEFAULT_SERIES_TERMS;

pub struct LimitBuilder<F: Scalar, E, S> {
    source: S,
    rescale: bool,
    polys: HashMap<(usize, Partition), SymPoly<F>>,
    field: PhantomData<E>,
}

impl<F: Scalar, E: LimitField<F>, S: BranchSource<E>> LimitBuilder<F, E, S> {
    pub fn new(source: S, rescale: bool) -> Self {
        LimitBuilder {
            source,
            rescale,
            polys: HashMap::new(),
            field: PhantomData,
        }
    }

    /// The limit of `P_{λ/μ}` (rescaled when requested), doubling the
    /// series length while the kept terms do not decide it.
    pub fn branch_poly(
        &mut self,
        lam: &Partition,
        mu: &Partition,
        n: usize,
    ) -> Result<OneVarPoly<F>> {
        let mut terms = DEFAULT_SERIES_TERMS;
        loop {
            match with_series_terms(terms, || self.branch_poly_once(lam, mu, n)) {
                Err(Error::PrecisionExhausted(_)) if terms < MAX_SERIES_TERMS => {
                    terms *= 2;
                    self.source.clear_cache();
                }
                other => {
                    if terms > DEFAULT_SERIES_TERMS {
                        self.source.clear_cache();
                    }
                    return other;
                }
            }
        }
    }

    fn branch_poly_once(
        &mut self,
        lam: &Partition,
        mu: &Partition,
        n: usize,
    ) -> Result<OneVarPoly<F>> {
        let u = self.source.branch_poly(lam, mu, n)?;
        let shift = lam.size() as i64 - mu.size() as i64;
        let coeffs = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if self.rescale {
                    c.limit_scaled(shift - k as i64)
                } else {
                    c.limit_at_zero()
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OneVarPoly::new(coeffs))
    }

    /// The limit of `P_λ` in `n` variables.
    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<F>> {
        if !lam.fits(n) {
            return Err(Error::InvalidPartition(format!(
                "{lam} has more than {n} parts"
            )));
        }
        if n == 0 {
            return Ok(SymPoly::one(0));
        }
        let key = (n, lam.clone());
        if let Some(p) = self.polys.get(&key) {
            return Ok(p.clone());
        }
        let mut parts = Vec::new();
        for mu in predecessors(lam, n - 1) {
            let p = self.build(&mu, n - 1)?;
            let u = self.branch_poly(lam, &mu, n - 1)?;
            parts.push((p, u));
        }
        let refs: Vec<(&SymPoly<F>, &OneVarPoly<F>)> = parts.iter().map(|(p, u)| (p, u)).collect();
        let out = merge_sum(&refs, n - 1)?;
        self.polys.insert(key, out.clone());
        Ok(out)
    }
}

pub fn branch_coeffs<F: Scalar>(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    params: &ParamPoint<F>,
) -> Result<Vec<F>> {
    Builder::new(params.clone())?.branch_coeffs(lam, mu, n)
}

pub fn branch_poly<F: Scalar>(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    params: &ParamPoint<F>,
) -> Result<OneVarPoly<F>> {
    Builder::new(params.clone())?.branch_poly(lam, mu, n)
}

/// The point `params + eps v` along a fixed direction `v`, used to reach
/// non-generic points as limits. Askey-Wilson points move `t0 -> t0 (1+eps)`,
/// `t1 -> t1 / (1+eps)`, which keeps both hatted roots valid.
pub fn perturb(params: &ParamPoint<G>) -> Result<ParamPoint<R>> {
    let c = |x: &G| R::constant(x.clone());
    let e = |x: &G, n: i64, d: i64| c(x) + R::var() * R::from_rational(&rat(n, d));
    Ok(match params {
        ParamPoint::AskeyWilson {
            q,
            t,
            tl,
            hat_t0,
            dual_hat_t0,
        } => {
            let s = R::one() + R::var();
            let t1 = c(&tl[1]).checked_div(&s).expect("1 + eps is invertible");
            ParamPoint::AskeyWilson {
                q: c(q),
                t: c(t),
                tl: [c(&tl[0]) * s, t1, c(&tl[2]), c(&tl[3])],
                hat_t0: hat_t0.as_ref().map(c),
                dual_hat_t0: dual_hat_t0.as_ref().map(c),
            }
        }
        ParamPoint::Whittaker { q, tl } => ParamPoint::Whittaker {
            q: e(q, 1, 2),
            tl: [e(&tl[0], 1, 1), e(&tl[1], 1, 3), c(&tl[2]), c(&tl[3])],
        },
        ParamPoint::Wilson { g, gl } => ParamPoint::Wilson {
            g: e(g, 1, 1),
            gl: [
                e(&gl[0], 1, 2),
                e(&gl[1], 1, 3),
                e(&gl[2], 1, 5),
                e(&gl[3], 1, 7),
            ],
        },
        ParamPoint::ContinuousHahn { g, g0, g1 } => ParamPoint::ContinuousHahn {
            g: e(g, 1, 1),
            g0: e(g0, 1, 2),
            g1: e(g1, 1, 3),
        },
        ParamPoint::Jacobi { g, g0, g1 } => ParamPoint::Jacobi {
            g: e(g, 1, 1),
            g0: e(g0, 1, 2),
            g1: e(g1, 1, 3),
        },
        ParamPoint::Laguerre { g, h, omega } => ParamPoint::Laguerre {
            g: e(g, 1, 1),
            h: e(h, 1, 2),
            omega: c(omega),
        },
        ParamPoint::Hermite { g, omega } => ParamPoint::Hermite {
            g: e(g, 1, 1),
            omega: c(omega),
        },
    })
}

/// Exact builder that falls back to a limit along [`perturb`] when the
/// point is non-generic.
pub struct Constructor {
    params: ParamPoint<G>,
    exact: Option<Builder<G>>,
    regular: Option<LimitBuilder<G, R, Builder<R>>>,
}

impl Constructor {
    pub fn new(params: ParamPoint<G>) -> Self {
        let exact = Builder::new(params.clone()).ok();
        Constructor {
            params,
            exact,
            regular: None,
        }
    }

    pub fn params(&self) -> &ParamPoint<G> {
        &self.params
    }

    fn regular(&mut self) -> Result<&mut LimitBuilder<G, R, Builder<R>>> {
        if self.regular.is_none() {
            let source = Builder::new(perturb(&self.params)?)?;
            self.regular = Some(LimitBuilder::new(source, false));
        }
        Ok(self.regular.as_mut().expect("just set"))
    }

    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<G>> {
        if let Some(b) = self.exact.as_mut() {
            match b.build(lam, n) {
                Err(Error::NonGenericParameters(_)) => {}
                other => return other,
            }
        }
        self.regular()?.build(lam, n).map_err(|e| match e {
            Error::NonGenericParameters(s) => {
                Error::NonGenericParameters(format!("also along the regularizing line: {s}"))
            }
            Error::PoleAtZero(s) => {
                Error::NonGenericParameters(format!("no limit along the regularizing line: {s}"))
            }
            other => other,
        })
    }

    pub fn branch_coeffs(&mut self, lam: &Partition, mu: &Partition, n: usize) -> Result<Vec<G>> {
        match self.exact.as_mut() {
            Some(b) => b.branch_coeffs(lam, mu, n),
            None => Err(Error::NonGenericParameters(
                "dual parameters are undefined".into(),
            )),
        }
    }
}

/// `P_λ` in `n` variables with the regularizing fallback.
pub fn build(lam: &Partition, n: usize, params: &ParamPoint<G>) -> Result<SymPoly<G>> {
    Constructor::new(params.clone()).build(lam, n)
}

/// The Askey-Wilson point `(q' = eps, t = q, t_l)` whose `eps -> 0` limit is
/// the family `P(x; 0, q, t_l)` paired with a Whittaker point.
pub fn q_zero_point(params: &ParamPoint<G>) -> Result<ParamPoint<L>> {
    let ParamPoint::Whittaker { q, tl } = params else {
        return Err(Error::UnsupportedFamily(params.family().name().into()));
    };
    let prod = tl.iter().cloned().fold(G::one(), |a, b| a * b);
    let radicand = prod
        .checked_div(q)
        .ok_or_else(|| Error::InvalidParameters("q must be nonzero".into()))?;
    let root = radicand
        .is_real()
        .then(|| rational_sqrt(&radicand.re))
        .flatten()
        .ok_or_else(|| {
            Error::UnsupportedParameters("t0 t1 t2 t3 / q must be a rational square".into())
        })?;
    let c = |x: &G| L::constant(x.clone());
    Ok(ParamPoint::AskeyWilson {
        q: L::var(),
        t: c(q),
        tl: [c(&tl[0]), c(&tl[1]), c(&tl[2]), c(&tl[3])],
        hat_t0: None,
        dual_hat_t0: Some(L::constant(G::real(root))),
    })
}

/// Builder for `P(x; 0, q, t_l)` as the exact `q' -> 0` limit of
/// Askey-Wilson polynomials at `(q', q, t_l)`.
pub struct QZeroBuilder {
    inner: LimitBuilder<G, L, Builder<L>>,
}

impl QZeroBuilder {
    pub fn new(params: &ParamPoint<G>) -> Result<Self> {
        Ok(QZeroBuilder {
            inner: LimitBuilder::new(Builder::new(q_zero_point(params)?)?, false),
        })
    }

    pub fn build(&mut self, lam: &Partition, n: usize) -> Result<SymPoly<G>> {
        self.inner.build(lam, n)
    }
}
