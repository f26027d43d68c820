//! Symmetric polynomials in the monomial-symmetric basis, one-variable
//! polynomials in a family's base variable, and the `n -> n+1` merge used
//! by the recursive builder.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::params::ParamPoint;
use crate::partition::{graded_lex_cmp, Partition};
use crate::scalar::{powi, rat, GaussRational, Scalar};

/// Plain exponent vectors to coefficients.
pub type ExponentMap<F> = BTreeMap<Vec<u32>, F>;

/// `Σ c_λ m_λ(y_1, ..., y_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly<F> {
    nvars: usize,
    terms: BTreeMap<Partition, F>,
}

impl<F: Scalar> SymPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        SymPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Partition::empty(), F::one(), nvars)
    }

    /// `c · m_λ`.
    pub fn monomial(lam: Partition, c: F, nvars: usize) -> Self {
        assert!(lam.fits(nvars), "{lam} has more than {nvars} parts");
        let mut p = Self::zero(nvars);
        p.add_term(lam, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Partition, F> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Partition, F> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lam: &Partition) -> F {
        self.terms.get(lam).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, lam: Partition, c: F) {
        if c.is_zero() {
            return;
        }
        assert!(
            lam.fits(self.nvars),
            "{lam} has more than {} parts",
            self.nvars
        );
        match self.terms.remove(&lam) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(lam, s);
                }
            }
            None => {
                self.terms.insert(lam, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map<G: Scalar>(&self, mut f: impl FnMut(&F) -> G) -> SymPoly<G> {
        let mut out = SymPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    pub fn try_map<G: Scalar>(
        &self,
        mut f: impl FnMut(&Partition, &F) -> Result<G>,
    ) -> Result<SymPoly<G>> {
        let mut out = SymPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(k, v)?);
        }
        Ok(out)
    }

    /// Highest term in the graded lexicographic order, which extends
    /// dominance.
    pub fn leading(&self) -> Option<(&Partition, &F)> {
        self.terms.iter().max_by(|a, b| graded_lex_cmp(a.0, b.0))
    }

    /// Product, recollected in the m-basis.
    pub fn mul(&self, other: &Self) -> Self {
        mbasis_mul(self, other)
    }

    /// Value of the plain-monomial expansion at `point`.
    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (lam, c) in &self.terms {
            let mut m = F::zero();
            for e in orbit(&lam.padded(self.nvars)) {
                let mut term = F::one();
                for (x, &k) in point.iter().zip(&e) {
                    term = term * powi(x, k as i64).expect("nonnegative power");
                }
                m = m + term;
            }
            acc = acc + c.clone() * m;
        }
        acc
    }

    /// Expansion into plain monomials.
    pub fn to_exponent_map(&self) -> ExponentMap<F> {
        let mut out = ExponentMap::new();
        for (lam, c) in &self.terms {
            for e in orbit(&lam.padded(self.nvars)) {
                out.insert(e, c.clone());
            }
        }
        out
    }

    /// Substitutes `y_j -> s · y_j`, i.e. multiplies the coefficient of
    /// `m_λ` by `s^{|λ|}`.
    pub fn rescale_variables(&self, s: &F) -> Self {
        self.map_with_partition(|lam, c| {
            c.clone() * powi(s, lam.size() as i64).expect("nonnegative power")
        })
    }

    pub fn map_with_partition(&self, mut f: impl FnMut(&Partition, &F) -> F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(k, v));
        }
        out
    }

    /// Terms in serialization order: graded descending, so the leading
    /// term comes first.
    pub fn sorted_terms(&self) -> Vec<(&Partition, &F)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex_cmp(b.0, a.0));
        v
    }
}

impl SymPoly<GaussRational> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(mu, c)| json!({"mu": mu, "coeff": c.to_json()}))
            .collect();
        json!({"nvars": self.nvars, "basis": "monomial-symmetric", "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let nvars = v["nvars"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing nvars".into()))? as usize;
        let mut out = Self::zero(nvars);
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing terms".into()))?;
        for t in terms {
            let mu: Partition =
                serde_json::from_value(t["mu"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
            if !mu.fits(nvars) {
                return Err(Error::InvalidPartition(format!(
                    "{mu} has more than {nvars} parts"
                )));
            }
            out.add_term(mu, GaussRational::from_json(&t["coeff"])?);
        }
        Ok(out)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }
}

/// Distinct permutations of an exponent vector.
pub fn orbit(e: &[u32]) -> Vec<Vec<u32>> {
    let mut v = e.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn is_weakly_decreasing(e: &[u32]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

/// Product in the m-basis: the coefficient of `m_γ` in `m_α m_β` counts
/// pairs `(a, b)` from the orbits of `α` and `β` with `a + b = γ`.
pub fn mbasis_mul<F: Scalar>(f: &SymPoly<F>, g: &SymPoly<F>) -> SymPoly<F> {
    assert_eq!(f.nvars, g.nvars, "variable counts differ");
    let n = f.nvars;
    let mut out = SymPoly::zero(n);
    let mut orbit_cache: BTreeMap<Partition, Vec<Vec<u32>>> = BTreeMap::new();
    for (a, ca) in &f.terms {
        let ea = a.padded(n);
        for (b, cb) in &g.terms {
            let ob = orbit_cache
                .entry(b.clone())
                .or_insert_with(|| orbit(&b.padded(n)));
            let mut counts: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
            for pa in orbit(&ea) {
                for pb in ob.iter() {
                    let s: Vec<u32> = pa.iter().zip(pb).map(|(x, y)| x + y).collect();
                    if is_weakly_decreasing(&s) {
                        *counts.entry(s).or_default() += 1;
                    }
                }
            }
            for (gamma, k) in counts {
                let p = Partition::new(gamma).expect("dominant exponent");
                out.add_term(p, ca.clone() * cb.clone() * F::from_int(k));
            }
        }
    }
    out
}

/// Recollects a symmetric exponent map into the m-basis.
pub fn collect_mbasis<F: Scalar>(map: &ExponentMap<F>, nvars: usize) -> Result<SymPoly<F>> {
    let mut out = SymPoly::zero(nvars);
    let zero = F::zero();
    let scale = map.values().map(Scalar::magnitude).fold(0.0, f64::max);
    for (e, c) in map {
        if c.is_zero() {
            continue;
        }
        if e.len() != nvars {
            return Err(Error::NotSymmetric(e.clone()));
        }
        let lam = Partition::from_unsorted(e.clone());
        let dominant = lam.padded(nvars);
        if *e == dominant {
            for p in orbit(&dominant) {
                if !map.get(&p).unwrap_or(&zero).approx_eq(c, scale) {
                    return Err(Error::NotSymmetric(p));
                }
            }
            out.add_term(lam, c.clone());
        } else {
            if !map.get(&dominant).unwrap_or(&zero).approx_eq(c, scale) {
                return Err(Error::NotSymmetric(e.clone()));
            }
        }
    }
    Ok(out)
}

/// The plain-monomial product `f(y_1..y_n) · u(y_{n+1})`, not yet
/// symmetric.
pub fn merge_with_univariate<F: Scalar>(f: &SymPoly<F>, u: &OneVarPoly<F>) -> ExponentMap<F> {
    let mut out = ExponentMap::new();
    for (e, c) in f.to_exponent_map() {
        for (k, a) in u.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut e2 = e.clone();
            e2.push(k as u32);
            let v = c.clone() * a.clone();
            let entry = out.entry(e2).or_insert_with(F::zero);
            *entry = entry.clone() + v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `Σ_μ f_μ(y_1..y_n) u_μ(y_{n+1})` recollected in the m-basis of `n+1`
/// variables.
///
/// The coefficient of `m_ν` is read off from the monomial `y^ν`, whose
/// last exponent is split off as the power of `y_{n+1}`. Symmetry under
/// exchanging `y_{n+1}` with each of the other variables is verified by
/// moving every distinct part of `ν` into the last slot; together with the
/// symmetry of each `f_μ` this certifies full symmetry.
pub fn merge_sum<F: Scalar>(
    pairs: &[(&SymPoly<F>, &OneVarPoly<F>)],
    n: usize,
) -> Result<SymPoly<F>> {
    let mut candidates: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (f, u) in pairs {
        assert_eq!(f.nvars, n);
        for lam in f.terms.keys() {
            for (k, a) in u.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut e = lam.padded(n);
                e.push(k as u32);
                e.sort_unstable_by(|a, b| b.cmp(a));
                candidates.insert(e);
            }
        }
    }
    let coeff_with_last = |nu: &[u32], last_pos: usize| -> F {
        let mut rest: Vec<u32> = nu.to_vec();
        let last = rest.remove(last_pos);
        let key = Partition::new(rest).expect("sub-multiset of a partition");
        let mut acc = F::zero();
        for (f, u) in pairs {
            if let Some(c) = f.terms.get(&key) {
                if let Some(a) = u.coeffs().get(last as usize) {
                    if !a.is_zero() {
                        acc = acc + c.clone() * a.clone();
                    }
                }
            }
        }
        acc
    };
    let coeffs: Vec<(Vec<u32>, F)> = candidates
        .into_iter()
        .map(|nu| {
            let c = coeff_with_last(&nu, n);
            (nu, c)
        })
        .collect();
    let scale = coeffs
        .iter()
        .map(|(_, c)| c.magnitude())
        .fold(0.0, f64::max);
    let mut out = SymPoly::zero(n + 1);
    for (nu, c) in coeffs {
        for pos in 0..n {
            if nu[pos] != nu[pos + 1] && !coeff_with_last(&nu, pos).approx_eq(&c, scale) {
                let mut e = nu.clone();
                let v = e.remove(pos);
                e.push(v);
                return Err(Error::NotSymmetric(e));
            }
        }
        out.add_term(Partition::new(nu).expect("sorted"), c);
    }
    Ok(out)
}

/// `e_r(y_1, ..., y_n) = m_{(1^r)}`.
pub fn elementary<F: Scalar>(r: usize, n: usize) -> SymPoly<F> {
    if r > n {
        return SymPoly::zero(n);
    }
    SymPoly::monomial(Partition::new(vec![1; r]).expect("column"), F::one(), n)
}

/// Complete homogeneous symmetric polynomial `h_k` of scalar arguments.
pub fn complete_h<F: Scalar>(k: usize, args: &[F]) -> F {
    // h_k(a_1..a_j) = h_k(a_1..a_{j-1}) + a_j h_{k-1}(a_1..a_j)
    let mut h = vec![F::zero(); k + 1];
    h[0] = F::one();
    for a in args {
        for d in 1..=k {
            h[d] = h[d].clone() + a.clone() * h[d - 1].clone();
        }
    }
    h[k].clone()
}

/// Dense polynomial in a single base variable `y`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct OneVarPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> OneVarPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OneVarPoly { coeffs }
    }

    pub fn zero() -> Self {
        OneVarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `a + b y`.
    pub fn linear(a: F, b: F) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, y: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * y.clone() + c.clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> OneVarPoly<G> {
        OneVarPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// As a symmetric polynomial in one variable.
    pub fn to_sympoly(&self) -> SymPoly<F> {
        let mut out = SymPoly::zero(1);
        for (k, c) in self.coeffs.iter().enumerate() {
            out.add_term(
                Partition::new(vec![k as u32]).expect("single part"),
                c.clone(),
            );
        }
        out
    }
}

/// The `k`-th element of the family's one-variable branching basis,
/// expressed in the base variable `y`.
///
/// | family | basis | in `y` |
/// |---|---|---|
/// | Askey-Wilson, Whittaker | `⟨x; t0⟩_{q,k}` | `Π_{j=1..k} (y - q^{j-1} t0 - q^{1-j}/t0)` |
/// | Wilson | `(g0 + ix, g0 - ix)_k` | `Π_{j<k} ((g0+j)^2 + y)` |
/// | continuous Hahn | `(g0 + ix)_k` | `Π_{j<k} (g0 + j + iy)` |
/// | Jacobi | `sin^{2k}(x/2)` | `((2 - y)/4)^k` |
/// | Laguerre, Hermite | `x^{2k}`, `x^k` | `y^k` |
pub fn onevar_basis<F: Scalar>(k: usize, params: &ParamPoint<F>) -> Result<OneVarPoly<F>> {
    let mut acc = OneVarPoly::constant(F::one());
    match params {
        ParamPoint::AskeyWilson { q, tl, .. } | ParamPoint::Whittaker { q, tl } => {
            let t0i = tl[0]
                .inv()
                .ok_or_else(|| Error::InvalidParameters("t0 must be nonzero".into()))?;
            let qi = q
                .inv()
                .ok_or_else(|| Error::InvalidParameters("q must be nonzero".into()))?;
            let mut qj = F::one();
            let mut qmj = F::one();
            for _ in 0..k {
                let c = -(qj.clone() * tl[0].clone()) - qmj.clone() * t0i.clone();
                acc = acc.mul(&OneVarPoly::linear(c, F::one()));
                qj = qj * q.clone();
                qmj = qmj * qi.clone();
            }
        }
        ParamPoint::Wilson { gl, .. } => {
            for j in 0..k {
                let a = gl[0].clone() + F::from_int(j as i64);
                acc = acc.mul(&OneVarPoly::linear(a.clone() * a, F::one()));
            }
        }
        ParamPoint::ContinuousHahn { g0, .. } => {
            for j in 0..k {
                acc = acc.mul(&OneVarPoly::linear(
                    g0.clone() + F::from_int(j as i64),
                    F::imag_unit(),
                ));
            }
        }
        ParamPoint::Jacobi { .. } => {
            let lin =
                OneVarPoly::linear(F::from_rational(&rat(1, 2)), F::from_rational(&rat(-1, 4)));
            for _ in 0..k {
                acc = acc.mul(&lin);
            }
        }
        ParamPoint::Laguerre { .. } | ParamPoint::Hermite { .. } => {
            let mut c = vec![F::zero(); k + 1];
            c[k] = F::one();
            acc = OneVarPoly::new(c);
        }
    }
    Ok(acc)
}
