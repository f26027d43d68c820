//! Coefficient fields.
//!
//! Every formula in the crate is written once against [`Scalar`] and then
//! evaluated in one of four fields:
//!
//! - [`GaussRational`]: exact `a + bi` with arbitrary-precision rationals,
//!   the field all identities are certified in;
//! - [`LimitScalar`]: truncated Laurent series in a formal variable `eps`
//!   over another scalar field, with tracked precision, used for exact
//!   degeneration limits;
//! - [`RationalFunction`]: exact rational functions in `eps`, used to
//!   regularize removable singularities;
//! - [`num_complex::Complex64`]: double precision, only used for
//!   convergence-trend checks of the degeneration chains.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r = Rational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(r)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A field the Pieri and branching formulas can be evaluated in.
///
/// Exactness is a property of the implementation: `is_zero` is exact for
/// the rational fields and means "bitwise zero" for floats.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn imag_unit() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// Complex conjugation; formal variables are treated as real.
    fn conj(&self) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }

    /// Equality up to rounding relative to `scale`; exact fields compare
    /// exactly.
    fn approx_eq(&self, other: &Self, _scale: f64) -> bool {
        self == other
    }

    /// A factor that vanishes structurally; floats allow rounding.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Size used as the `scale` of [`Scalar::approx_eq`]; zero for exact
    /// fields.
    fn magnitude(&self) -> f64 {
        0.0
    }
}

/// `x^e` for any integer `e`; `None` for a negative power of zero.
pub fn powi<F: Scalar>(x: &F, e: i64) -> Option<F> {
    let base = if e < 0 { x.inv()? } else { x.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = F::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    Some(acc)
}

/// `Re(z)` computed as `(z + conj z) / 2`.
pub fn re_part<F: Scalar>(z: &F) -> F {
    (z.clone() + z.conj()) * F::from_rational(&rat(1, 2))
}

/// `i Im(z)` computed as `(z - conj z) / 2`.
pub fn i_im_part<F: Scalar>(z: &F) -> F {
    (z.clone() - z.conj()) * F::from_rational(&rat(1, 2))
}

/// Shifted factorial `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer<F: Scalar>(a: &F, k: u32) -> F {
    let mut acc = F::one();
    for j in 0..k {
        acc = acc * (a.clone() + F::from_int(j as i64));
    }
    acc
}

/// `(a;q)_k = (1-a)(1-aq)...(1-aq^{k-1})`, `(a;q)_0 = 1`.
pub fn q_pochhammer<F: Scalar>(a: &F, q: &F, k: u32) -> F {
    let mut acc = F::one();
    let mut aq = a.clone();
    for _ in 0..k {
        acc = acc * (F::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

// ---------------------------------------------------------------------------
// Gaussian rationals

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Accepts `"p/q"` (real) or a `{"re": .., "im": ..}` object.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => Ok(GaussRational::real(parse_rational(s)?)),
            serde_json::Value::Number(n) => {
                Ok(GaussRational::real(parse_rational(&n.to_string())?))
            }
            serde_json::Value::Object(o) => {
                let get = |k: &str| -> Result<Rational> {
                    match o.get(k) {
                        None => Ok(Rational::zero()),
                        Some(serde_json::Value::String(s)) => parse_rational(s),
                        Some(serde_json::Value::Number(n)) => parse_rational(&n.to_string()),
                        Some(other) => Err(Error::Parse(format!("bad {k}: {other}"))),
                    }
                };
                Ok(GaussRational::new(get("re")?, get("im")?))
            }
            other => Err(Error::Parse(format!("not a scalar: {other}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "re": self.re.to_string(), "im": self.im.to_string() })
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl From<Rational> for GaussRational {
    fn from(r: Rational) -> Self {
        GaussRational::real(r)
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::real(int(n))
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussRational {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussRational {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(self.re * o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for GaussRational {
    fn zero() -> Self {
        GaussRational::default()
    }
    fn one() -> Self {
        GaussRational::real(Rational::one())
    }
    fn from_rational(r: &Rational) -> Self {
        GaussRational::real(r.clone())
    }
    fn imag_unit() -> Self {
        GaussRational::new(Rational::zero(), Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussRational::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }
    fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Serialize for GaussRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        GaussRational::from_json(&v).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Double precision

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / *self)
        }
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn approx_eq(&self, other: &Self, scale: f64) -> bool {
        (self - other).norm() <= 1e-6 * scale.max(self.norm()).max(other.norm())
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self) -> bool {
        self.norm() < 1e-12
    }
}

// ---------------------------------------------------------------------------
// Truncated Laurent series in a formal variable

thread_local! {
    static SERIES_TERMS: Cell<usize> = const { Cell::new(DEFAULT_SERIES_TERMS) };
}

/// Relative number of terms kept when a non-monomial is inverted.
pub const DEFAULT_SERIES_TERMS: usize = 8;

/// Runs `f` with inverses expanded to `terms` terms on this thread.
pub fn with_series_terms<T>(terms: usize, f: impl FnOnce() -> T) -> T {
    let old = SERIES_TERMS.with(|c| c.replace(terms));
    let out = f();
    SERIES_TERMS.with(|c| c.set(old));
    out
}

/// A truncated Laurent series `Σ_j c_j eps^{v+j} + O(eps^prec)` in a formal
/// variable `eps` over the scalar field `F`.
///
/// Short Laurent polynomials are exact (`prec = None`); inverses of
/// non-monomials and long products keep [`with_series_terms`] terms, and
/// every operation tracks the absolute precision that remains. A value whose precision no longer
/// determines its limit reports [`Error::PrecisionExhausted`].
#[derive(Clone, PartialEq)]
pub struct LimitScalar<F> {
    v: i64,
    /// `c[0]` is nonzero unless `c` is empty.
    c: Vec<F>,
    prec: Option<i64>,
    /// Set after inverting a value whose leading term was unknown.
    lost: bool,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<F: Scalar> LimitScalar<F> {
    pub fn constant(c: F) -> Self {
        Self::normalized(0, vec![c], None)
    }

    /// The formal variable `eps`.
    pub fn var() -> Self {
        Self::normalized(1, vec![F::one()], None)
    }

    fn lost() -> Self {
        LimitScalar {
            v: 0,
            c: Vec::new(),
            prec: Some(0),
            lost: true,
        }
    }

    fn normalized(mut v: i64, mut c: Vec<F>, prec: Option<i64>) -> Self {
        let lead = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len());
        c.drain(..lead);
        v += lead as i64;
        if let Some(p) = prec {
            c.truncate((p - v).max(0) as usize);
        }
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            v = prec.unwrap_or(0);
        }
        LimitScalar {
            v,
            c,
            prec,
            lost: false,
        }
    }

    /// Lowest exponent that can carry a nonzero term.
    fn order(&self) -> i64 {
        self.v
    }

    /// Exponent of the leading term, when it is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.v)
    }

    /// Value at `eps = 0`.
    pub fn limit_at_zero(&self) -> Result<F> {
        self.limit_scaled(0)
    }

    /// `lim_{eps->0} eps^{half_power/2} * self`, for a series in
    /// `eps = beta^2` multiplied by `beta^{half_power}`.
    pub fn limit_scaled(&self, half_power: i64) -> Result<F> {
        if self.lost {
            return Err(Error::PrecisionExhausted("leading term unknown".into()));
        }
        match self.valuation() {
            None => match self.prec {
                None => Ok(F::zero()),
                Some(p) if 2 * p + half_power > 0 => Ok(F::zero()),
                Some(p) => Err(Error::PrecisionExhausted(format!(
                    "value is only known to be O(eps^{p})"
                ))),
            },
            Some(v) => {
                let order = 2 * v + half_power;
                match order.cmp(&0) {
                    std::cmp::Ordering::Greater => Ok(F::zero()),
                    std::cmp::Ordering::Equal => Ok(self.c[0].clone()),
                    std::cmp::Ordering::Less => Err(Error::PoleAtZero(format!(
                        "order {order}/2 in the formal variable: {self:?}"
                    ))),
                }
            }
        }
    }
}

impl<F: Scalar> fmt::Debug for LimitScalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lost {
            return write!(f, "<precision lost>");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| format!("({x:?}) eps^{}", self.v + j as i64))
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        match self.prec {
            Some(p) => write!(f, "{body} + O(eps^{p})"),
            None => write!(f, "{body}"),
        }
    }
}

impl<F: Scalar> Add for LimitScalar<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.lost || o.lost {
            return Self::lost();
        }
        let prec = min_prec(self.prec, o.prec);
        if self.c.is_empty() {
            return Self::normalized(o.v, o.c, prec);
        }
        if o.c.is_empty() {
            return Self::normalized(self.v, self.c, prec);
        }
        let v = self.v.min(o.v);
        let end = (self.v + self.c.len() as i64).max(o.v + o.c.len() as i64);
        let mut c = vec![F::zero(); (end - v) as usize];
        for (s, xs) in [(self.v, self.c), (o.v, o.c)] {
            for (j, x) in xs.into_iter().enumerate() {
                let k = (s - v) as usize + j;
                c[k] = c[k].clone() + x;
            }
        }
        Self::normalized(v, c, prec)
    }
}

impl<F: Scalar> Sub for LimitScalar<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Scalar> Neg for LimitScalar<F> {
    type Output = Self;
    fn neg(self) -> Self {
        LimitScalar {
            c: self.c.into_iter().map(|x| -x).collect(),
            ..self
        }
    }
}

impl<F: Scalar> Mul for LimitScalar<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.lost || o.lost {
            return Self::lost();
        }
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let v = self.v + o.v;
        // Long exact products keep the same number of terms as inverses.
        let terms = SERIES_TERMS.with(|t| t.get());
        let budget = (self.c.len() + o.c.len() > terms + 1).then_some(v + terms as i64);
        let prec = min_prec(
            min_prec(
                self.prec.map(|p| p + o.order()),
                o.prec.map(|p| p + self.order()),
            ),
            budget,
        );
        let mut len = (self.c.len() + o.c.len()).saturating_sub(1);
        if let Some(p) = prec {
            len = len.min((p - v).max(0) as usize);
        }
        let mut c = vec![F::zero(); len];
        for (i, x) in self.c.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate().take(len - i) {
                c[i + j] = c[i + j].clone() + x.clone() * y.clone();
            }
        }
        Self::normalized(v, c, prec)
    }
}

impl<F: Scalar> Scalar for LimitScalar<F> {
    fn zero() -> Self {
        Self::normalized(0, Vec::new(), None)
    }
    fn one() -> Self {
        Self::constant(F::one())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(F::from_rational(r))
    }
    fn imag_unit() -> Self {
        Self::constant(F::imag_unit())
    }
    /// Only an exact zero counts; a value known to be `O(eps^p)` does not.
    fn is_zero(&self) -> bool {
        !self.lost && self.c.is_empty() && self.prec.is_none()
    }
    fn is_one(&self) -> bool {
        !self.lost && self.prec.is_none() && self.v == 0 && self.c.len() == 1 && self.c[0].is_one()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.lost || self.c.is_empty() {
            return Some(Self::lost());
        }
        let c0_inv = self.c[0].inv()?;
        if self.c.len() == 1 && self.prec.is_none() {
            return Some(Self::normalized(-self.v, vec![c0_inv], None));
        }
        let terms = match self.prec {
            Some(p) => (p - self.v) as usize,
            None => SERIES_TERMS.with(|t| t.get()),
        };
        let mut b: Vec<F> = Vec::with_capacity(terms);
        b.push(c0_inv.clone());
        for k in 1..terms {
            let mut acc = F::zero();
            for j in 1..=k.min(self.c.len() - 1) {
                acc = acc + self.c[j].clone() * b[k - j].clone();
            }
            b.push(-(acc * c0_inv.clone()));
        }
        Some(Self::normalized(-self.v, b, Some(terms as i64 - self.v)))
    }
    fn conj(&self) -> Self {
        LimitScalar {
            c: self.c.iter().map(|x| x.conj()).collect(),
            ..self.clone()
        }
    }
}

/// A field of functions of a formal variable `eps` whose value at
/// `eps -> 0` can be read off.
pub trait LimitField<F: Scalar>: Scalar {
    fn constant(c: F) -> Self;
    /// The formal variable `eps`.
    fn var() -> Self;
    /// `lim_{eps->0} eps^{half_power/2} * self`.
    fn limit_scaled(&self, half_power: i64) -> Result<F>;
    fn limit_at_zero(&self) -> Result<F> {
        self.limit_scaled(0)
    }
}

impl<F: Scalar> LimitField<F> for LimitScalar<F> {
    fn constant(c: F) -> Self {
        LimitScalar::constant(c)
    }
    fn var() -> Self {
        LimitScalar::var()
    }
    fn limit_scaled(&self, half_power: i64) -> Result<F> {
        LimitScalar::limit_scaled(self, half_power)
    }
}

// ---------------------------------------------------------------------------
// Exact rational functions in a formal variable

mod dense {
    use super::Scalar;

    pub fn trim<F: Scalar>(mut a: Vec<F>) -> Vec<F> {
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn add<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
        let mut c = vec![F::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            c[i] = x.clone();
        }
        for (i, x) in b.iter().enumerate() {
            c[i] = c[i].clone() + x.clone();
        }
        trim(c)
    }

    pub fn mul<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![F::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] = c[i + j].clone() + x.clone() * y.clone();
            }
        }
        trim(c)
    }

    pub fn scale<F: Scalar>(a: &[F], s: &F) -> Vec<F> {
        trim(a.iter().map(|x| x.clone() * s.clone()).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem<F: Scalar>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
        let lead_inv = b.last().and_then(|x| x.inv()).expect("nonzero divisor");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![F::zero(); r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let f = r[k + b.len() - 1].clone() * lead_inv.clone();
            if !f.is_zero() {
                for (j, y) in b.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - f.clone() * y.clone();
                }
            }
            q[k] = f;
        }
        r.truncate(b.len() - 1);
        (trim(q), trim(r))
    }

    pub fn monic<F: Scalar>(a: &[F]) -> Vec<F> {
        match a.last().and_then(|x| x.inv()) {
            Some(i) => scale(a, &i),
            None => a.to_vec(),
        }
    }

    pub fn gcd<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let (_, r) = divrem(&a, &b);
            a = b;
            b = r;
        }
        monic(&a)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation<F: Scalar>(a: &[F]) -> Option<usize> {
        a.iter().position(|x| !x.is_zero())
    }
}

/// An exact rational function `num(eps) / den(eps)` over `F`, kept in
/// lowest terms with a monic denominator.
///
/// Used where values are themselves series coefficients, so that exact
/// cancellation can be decided.
#[derive(Clone, PartialEq)]
pub struct RationalFunction<F> {
    num: Vec<F>,
    den: Vec<F>,
}

impl<F: Scalar> RationalFunction<F> {
    fn reduced(num: Vec<F>, den: Vec<F>) -> Self {
        let num = dense::trim(num);
        if num.is_empty() {
            return RationalFunction {
                num,
                den: vec![F::one()],
            };
        }
        let g = if den.len() > 1 {
            dense::gcd(&num, &den)
        } else {
            Vec::new()
        };
        let (mut num, mut den) = if g.len() > 1 {
            (dense::divrem(&num, &g).0, dense::divrem(&den, &g).0)
        } else {
            (num, dense::trim(den))
        };
        let lead = den
            .last()
            .and_then(|x| x.inv())
            .expect("nonzero denominator");
        if !lead.is_one() {
            num = dense::scale(&num, &lead);
            den = dense::scale(&den, &lead);
        }
        RationalFunction { num, den }
    }
}

impl<F: Scalar> LimitField<F> for RationalFunction<F> {
    fn constant(c: F) -> Self {
        Self::reduced(vec![c], vec![F::one()])
    }
    fn var() -> Self {
        Self::reduced(vec![F::zero(), F::one()], vec![F::one()])
    }
    fn limit_scaled(&self, half_power: i64) -> Result<F> {
        let Some(vn) = dense::valuation(&self.num) else {
            return Ok(F::zero());
        };
        let vd = dense::valuation(&self.den).expect("nonzero denominator");
        let order = 2 * (vn as i64 - vd as i64) + half_power;
        match order.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(F::zero()),
            std::cmp::Ordering::Equal => self.num[vn]
                .checked_div(&self.den[vd])
                .ok_or_else(|| Error::PoleAtZero("singular leading coefficient".into())),
            std::cmp::Ordering::Less => Err(Error::PoleAtZero(format!(
                "order {order}/2 in the formal variable: {self:?}"
            ))),
        }
    }
}

impl<F: Scalar> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |a: &[F]| {
            let t: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| format!("({x:?}) eps^{j}"))
                .collect();
            if t.is_empty() {
                "0".to_string()
            } else {
                t.join(" + ")
            }
        };
        if self.den.len() == 1 {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "[{}] / [{}]", show(&self.num), show(&self.den))
        }
    }
}

impl<F: Scalar> Add for RationalFunction<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            let num = dense::add(&self.num, &o.num);
            return Self::reduced(num, self.den);
        }
        let num = dense::add(
            &dense::mul(&self.num, &o.den),
            &dense::mul(&o.num, &self.den),
        );
        Self::reduced(num, dense::mul(&self.den, &o.den))
    }
}

impl<F: Scalar> Sub for RationalFunction<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Scalar> Neg for RationalFunction<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction {
            num: self.num.into_iter().map(|x| -x).collect(),
            den: self.den,
        }
    }
}

impl<F: Scalar> Mul for RationalFunction<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.num.is_empty() || o.num.is_empty() {
            return Self::zero();
        }
        Self::reduced(dense::mul(&self.num, &o.num), dense::mul(&self.den, &o.den))
    }
}

impl<F: Scalar> Scalar for RationalFunction<F> {
    fn zero() -> Self {
        Self::reduced(Vec::new(), vec![F::one()])
    }
    fn one() -> Self {
        Self::constant(F::one())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(F::from_rational(r))
    }
    fn imag_unit() -> Self {
        Self::constant(F::imag_unit())
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn is_one(&self) -> bool {
        self.num.len() == 1 && self.den.len() == 1 && self.num[0].is_one()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_empty() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }
    fn conj(&self) -> Self {
        RationalFunction {
            num: self.num.iter().map(|x| x.conj()).collect(),
            den: self.den.iter().map(|x| x.conj()).collect(),
        }
    }
}
