//! Closed-form Pieri coefficients `C^{μ,n}_{λ,r}` and the generators
//! `E_r` they are attached to.

use crate::error::{Error, Result};
use crate::params::ParamPoint;
use crate::partition::{index_sets, proximity, signed_subsets, Partition};
use crate::scalar::{pochhammer, powi, q_pochhammer, rat, Scalar};
use crate::sympoly::{complete_h, elementary, SymPoly};

/// A running quotient `num / den`, divided out once at the end.
///
/// A vanishing numerator factor makes the quotient zero, a vanishing
/// denominator factor makes it undefined even when the numerator also
/// vanishes; floats count factors at rounding level as vanishing.
#[derive(Clone, Debug)]
struct Frac<F> {
    num: F,
    den: F,
    singular: bool,
}

impl<F: Scalar> Frac<F> {
    fn one() -> Self {
        Frac {
            num: F::one(),
            den: F::one(),
            singular: false,
        }
    }

    fn new(num: F, den: F) -> Self {
        let mut f = Self::one();
        f.mul(num, den);
        f
    }

    fn mul(&mut self, num: F, den: F) {
        self.times(num);
        self.over(den);
    }

    fn times(&mut self, x: F) {
        self.num = if x.is_negligible() {
            F::zero()
        } else {
            self.num.clone() * x
        };
    }

    fn over(&mut self, x: F) {
        self.singular |= x.is_negligible();
        self.den = self.den.clone() * x;
    }

    fn absorb(&mut self, other: Frac<F>) {
        self.num = self.num.clone() * other.num;
        self.den = self.den.clone() * other.den;
        self.singular |= other.singular;
    }

    /// The reciprocal; undefined when the numerator vanished.
    fn inverse(self) -> Self {
        Frac {
            singular: self.num.is_zero(),
            num: self.den,
            den: self.num,
        }
    }

    fn value(&self) -> Result<F> {
        let singular = || Error::NonGenericParameters("a Pieri denominator vanishes".into());
        if self.singular {
            return Err(singular());
        }
        if self.num.is_zero() {
            return Ok(F::zero());
        }
        self.num.checked_div(&self.den).ok_or_else(singular)
    }
}

fn int<F: Scalar>(n: i64) -> F {
    F::from_int(n)
}

fn pw<F: Scalar>(x: &F, e: i64) -> Result<F> {
    powi(x, e).ok_or_else(|| Error::NonGenericParameters("negative power of zero".into()))
}

/// Parameters of a Macdonald-Koornwinder family. `q = 0` selects the
/// explicit `C(0, t, t_l)` formulas; otherwise `hat` must hold `t̂_0`.
#[derive(Clone, Debug)]
pub struct Koornwinder<F> {
    pub q: F,
    pub t: F,
    pub tl: [F; 4],
    pub hat: Option<F>,
}

/// Shared data of the four families whose Pieri coefficients have the
/// `BC`-type shape: Askey-Wilson (multiplicative) and Wilson, continuous
/// Hahn, Jacobi (additive).
enum Bc<F> {
    Mult {
        q: F,
        t: F,
        t0: F,
        hat0: F,
        hats: Vec<F>,
    },
    Add {
        g: F,
        hats: Vec<F>,
        prefactor: F,
    },
}

impl<F: Scalar> Bc<F> {
    fn from_params(params: &ParamPoint<F>) -> Result<Option<Self>> {
        let add = |g: &F, prefactor: F| -> Result<Option<Self>> {
            Ok(Some(Bc::Add {
                g: g.clone(),
                hats: params.hatted().expect("additive family"),
                prefactor,
            }))
        };
        match params {
            ParamPoint::AskeyWilson {
                q, t, tl, hat_t0, ..
            } => {
                let hat = hat_t0.clone().ok_or_else(|| {
                    Error::InvalidParameters("Askey-Wilson Pieri coefficients need hat_t0".into())
                })?;
                Ok(Some(Self::mult(&Koornwinder {
                    q: q.clone(),
                    t: t.clone(),
                    tl: tl.clone(),
                    hat: Some(hat),
                })?))
            }
            ParamPoint::Wilson { g, .. } => add(g, -F::one()),
            ParamPoint::ContinuousHahn { g, .. } => add(g, F::imag_unit()),
            ParamPoint::Jacobi { g, .. } => add(g, int(4)),
            _ => Ok(None),
        }
    }

    fn mult(k: &Koornwinder<F>) -> Result<Self> {
        let hat0 = k
            .hat
            .clone()
            .ok_or_else(|| Error::InvalidParameters("missing hat_t0".into()))?;
        let inv = hat0
            .inv()
            .ok_or_else(|| Error::NonGenericParameters("hat_t0 vanishes".into()))?;
        let mut hats = vec![hat0.clone()];
        for l in 1..4 {
            hats.push(k.tl[0].clone() * k.tl[l].clone() * inv.clone());
        }
        Ok(Bc::Mult {
            q: k.q.clone(),
            t: k.t.clone(),
            t0: k.tl[0].clone(),
            hat0,
            hats,
        })
    }

    /// `τ̂_j` resp. `ρ̂_j`.
    fn base(&self, j: usize, n: usize) -> Result<F> {
        match self {
            Bc::Mult { t, hat0, .. } => Ok(pw(t, (n - j) as i64)? * hat0.clone()),
            Bc::Add { g, hats, .. } => Ok(g.clone() * int((n - j) as i64) + hats[0].clone()),
        }
    }

    /// `τ̂_j^ε q^{ελ_j}` resp. `ε(ρ̂_j + λ_j)`.
    fn shifted(&self, j: usize, eps: i8, lam_j: u32, n: usize) -> Result<F> {
        let b = self.base(j, n)?;
        match self {
            Bc::Mult { q, .. } => {
                let x = b * pw(q, lam_j as i64)?;
                if eps > 0 {
                    Ok(x)
                } else {
                    x.inv()
                        .ok_or_else(|| Error::NonGenericParameters("τ̂ vanishes".into()))
                }
            }
            Bc::Add { .. } => {
                let x = b + int(lam_j as i64);
                Ok(if eps > 0 { x } else { -x })
            }
        }
    }

    /// Same with `ε = +1`.
    fn fixed(&self, k: usize, lam_k: u32, n: usize) -> Result<F> {
        self.shifted(k, 1, lam_k, n)
    }

    fn single(&self, x: &F) -> Frac<F> {
        let mut f = Frac::one();
        match self {
            Bc::Mult { q, t0, hats, .. } => {
                for h in hats {
                    f.times(F::one() - h.clone() * x.clone());
                }
                let x2 = x.clone() * x.clone();
                f.over(t0.clone() * (F::one() - x2.clone()) * (F::one() - q.clone() * x2));
            }
            Bc::Add { hats, .. } => {
                for h in hats {
                    f.times(h.clone() + x.clone());
                }
                let two_x = x.clone() * int(2);
                f.over(two_x.clone() * (F::one() + two_x));
            }
        }
        f
    }

    /// Pair factor for `j < j'` in `J` (`u = false`) or in `I` (`u = true`).
    fn pair(&self, x: &F, y: &F, u: bool) -> Result<Frac<F>> {
        let mut f = Frac::one();
        match self {
            Bc::Mult { q, t, .. } => {
                let s = x.clone() * y.clone();
                let second = if u {
                    let ti = t
                        .inv()
                        .ok_or_else(|| Error::NonGenericParameters("t vanishes".into()))?;
                    F::one() - ti * s.clone() * q.clone()
                } else {
                    F::one() - t.clone() * s.clone() * q.clone()
                };
                f.times((F::one() - t.clone() * s.clone()) * second);
                f.over((F::one() - s.clone()) * (F::one() - q.clone() * s));
                if !u {
                    f.over(t.clone());
                }
            }
            Bc::Add { g, .. } => {
                let s = x.clone() + y.clone();
                let second = if u {
                    F::one() - g.clone() + s.clone()
                } else {
                    F::one() + g.clone() + s.clone()
                };
                f.times((g.clone() + s.clone()) * second);
                f.over(s.clone() * (F::one() + s));
            }
        }
        Ok(f)
    }

    /// Cross factor for `j` in `J` (resp. `I`) and `k` in the complement.
    fn cross(&self, x: &F, y: &F) -> Result<Frac<F>> {
        let mut f = Frac::one();
        match self {
            Bc::Mult { t, .. } => {
                let yi = y
                    .inv()
                    .ok_or_else(|| Error::NonGenericParameters("τ̂ vanishes".into()))?;
                let (a, b) = (x.clone() * y.clone(), x.clone() * yi);
                f.times((F::one() - t.clone() * a.clone()) * (F::one() - t.clone() * b.clone()));
                f.over(t.clone() * (F::one() - a) * (F::one() - b));
            }
            Bc::Add { g, .. } => {
                let (a, b) = (x.clone() + y.clone(), x.clone() - y.clone());
                f.times((g.clone() + a.clone()) * (g.clone() + b.clone()));
                f.over(a * b);
            }
        }
        Ok(f)
    }

    /// One `V`-type (or `U`-summand) product for the signed set
    /// `plus ∪ minus` against `others`.
    fn block(
        &self,
        lam: &Partition,
        plus: &[usize],
        minus: &[usize],
        others: &[usize],
        n: usize,
        u: bool,
    ) -> Result<Frac<F>> {
        let mut signed: Vec<(usize, i8)> = plus
            .iter()
            .map(|&j| (j, 1))
            .chain(minus.iter().map(|&j| (j, -1)))
            .collect();
        signed.sort_unstable();
        let xs: Vec<F> = signed
            .iter()
            .map(|&(j, e)| self.shifted(j, e, lam.at(j), n))
            .collect::<Result<_>>()?;
        let ys: Vec<F> = others
            .iter()
            .map(|&k| self.fixed(k, lam.at(k), n))
            .collect::<Result<_>>()?;
        let mut f = Frac::one();
        for (a, x) in xs.iter().enumerate() {
            f.absorb(self.single(x));
            for y in &xs[a + 1..] {
                f.absorb(self.pair(x, y, u)?);
            }
            for y in &ys {
                f.absorb(self.cross(x, y)?);
            }
        }
        Ok(f)
    }

    fn principal(&self, lam: &Partition, n: usize) -> Result<Frac<F>> {
        let mut f = Frac::one();
        let bases: Vec<F> = (1..=n).map(|j| self.base(j, n)).collect::<Result<_>>()?;
        match self {
            Bc::Mult { q, t, t0, hats, .. } => {
                for j in 1..=n {
                    let (lj, bj) = (lam.at(j), &bases[j - 1]);
                    for h in hats {
                        f.times(q_pochhammer(&(h.clone() * bj.clone()), q, lj));
                    }
                    let tau = pw(t, (n - j) as i64)? * t0.clone();
                    f.over(
                        pw(&tau, lj as i64)? * q_pochhammer(&(bj.clone() * bj.clone()), q, 2 * lj),
                    );
                    for k in j + 1..=n {
                        let (lk, bk) = (lam.at(k), &bases[k - 1]);
                        let prod = bj.clone() * bk.clone();
                        let quot = pw(t, (k - j) as i64)?;
                        f.times(
                            q_pochhammer(&(t.clone() * prod.clone()), q, lj + lk)
                                * q_pochhammer(&(t.clone() * quot.clone()), q, lj - lk),
                        );
                        f.over(q_pochhammer(&prod, q, lj + lk) * q_pochhammer(&quot, q, lj - lk));
                    }
                }
            }
            Bc::Add { g, hats, prefactor } => {
                f.times(pw(prefactor, lam.size() as i64)?);
                for j in 1..=n {
                    let (lj, bj) = (lam.at(j), &bases[j - 1]);
                    for h in hats {
                        f.times(pochhammer(&(h.clone() + bj.clone()), lj));
                    }
                    f.over(pochhammer(&(bj.clone() * int(2)), 2 * lj));
                    for k in j + 1..=n {
                        let (lk, bk) = (lam.at(k), &bases[k - 1]);
                        let (s, d) = (bj.clone() + bk.clone(), bj.clone() - bk.clone());
                        f.times(
                            pochhammer(&(g.clone() + s.clone()), lj + lk)
                                * pochhammer(&(g.clone() + d.clone()), lj - lk),
                        );
                        f.over(pochhammer(&s, lj + lk) * pochhammer(&d, lj - lk));
                    }
                }
            }
        }
        Ok(f)
    }

    fn v(&self, lam: &Partition, plus: &[usize], minus: &[usize], n: usize) -> Result<F> {
        let others = complement_of(plus, minus, &(1..=n).collect::<Vec<_>>());
        self.block(lam, plus, minus, &others, n, false)?.value()
    }

    fn u(&self, lam: &Partition, k: &[usize], p: usize, n: usize) -> Result<F> {
        signed_sum(k, p, |plus, minus, rest| {
            self.block(lam, plus, minus, rest, n, true)?.value()
        })
    }
}

fn complement_of(plus: &[usize], minus: &[usize], within: &[usize]) -> Vec<usize> {
    within
        .iter()
        .copied()
        .filter(|j| !plus.contains(j) && !minus.contains(j))
        .collect()
}

/// `(-1)^p Σ_{I_+, I_- ⊂ K} term(I_+, I_-, K \ I)`.
fn signed_sum<F: Scalar>(
    k: &[usize],
    p: usize,
    mut term: impl FnMut(&[usize], &[usize], &[usize]) -> Result<F>,
) -> Result<F> {
    if p == 0 {
        return Ok(F::one());
    }
    let mut acc = F::zero();
    for (plus, minus) in signed_subsets(k, p) {
        let rest = complement_of(&plus, &minus, k);
        acc = acc + term(&plus, &minus, &rest)?;
    }
    Ok(if p % 2 == 1 { -acc } else { acc })
}

/// Rational-family data of the Laguerre and Hermite Pieri formulas.
struct Confluent<F> {
    g: F,
    h: Option<F>,
    omega: F,
}

impl<F: Scalar> Confluent<F> {
    /// `1 ± g / ((k-j) g + λ_j - λ_k + shift)`.
    fn ratio(&self, j: usize, k: usize, lam: &Partition, shift: i64, sign: i64) -> Frac<F> {
        let d = self.g.clone() * int(k as i64 - j as i64)
            + int(lam.at(j) as i64 - lam.at(k) as i64 + shift);
        Frac::new(d.clone() + self.g.clone() * int(sign), d)
    }

    fn plus_single(&self, j: usize, lam: &Partition, n: usize) -> F {
        let h = self.h.clone().expect("Laguerre only");
        self.g.clone() * int((n - j) as i64) + h + int(lam.at(j) as i64)
    }

    fn minus_single(&self, j: usize, lam: &Partition, n: usize) -> F {
        self.g.clone() * int((n - j) as i64) + int(lam.at(j) as i64)
    }

    /// Cross-factor products common to `V^L`, `U^L` and `V^H`; `u` selects
    /// the sign in the second pair factor.
    fn cross_block(
        &self,
        lam: &Partition,
        plus: &[usize],
        minus: &[usize],
        others: &[usize],
        u: bool,
    ) -> Frac<F> {
        let mut f = Frac::one();
        for &j in plus {
            for &jp in minus {
                f.absorb(self.ratio(j, jp, lam, 0, 1));
                f.absorb(self.ratio(j, jp, lam, 1, if u { -1 } else { 1 }));
            }
            for &k in others {
                f.absorb(self.ratio(j, k, lam, 0, 1));
            }
        }
        for &j in minus {
            for &k in others {
                f.absorb(self.ratio(j, k, lam, 0, -1));
            }
        }
        f
    }

    fn jack_principal(&self, lam: &Partition, n: usize) -> Frac<F> {
        let mut f = Frac::one();
        for j in 1..=n {
            for k in j + 1..=n {
                let e = lam.at(j) - lam.at(k);
                let kj = self.g.clone() * int((k - j) as i64);
                let kj1 = self.g.clone() * int((k - j + 1) as i64);
                f.mul(pochhammer(&kj1, e), pochhammer(&kj, e));
            }
        }
        f
    }

    fn laguerre_principal(&self, lam: &Partition, n: usize) -> Result<Frac<F>> {
        let h = self.h.clone().expect("Laguerre only");
        let mut f = self.jack_principal(lam, n);
        f.times(pw(&-self.omega.clone(), -(lam.size() as i64))?);
        for j in 1..=n {
            f.times(pochhammer(
                &(self.g.clone() * int((n - j) as i64) + h.clone()),
                lam.at(j),
            ));
        }
        Ok(f)
    }

    fn laguerre_block(
        &self,
        lam: &Partition,
        plus: &[usize],
        minus: &[usize],
        others: &[usize],
        n: usize,
        u: bool,
    ) -> Frac<F> {
        let mut f = self.cross_block(lam, plus, minus, others, u);
        for &j in plus {
            f.times(self.plus_single(j, lam, n));
        }
        for &j in minus {
            f.times(self.minus_single(j, lam, n));
        }
        f
    }

    fn hermite_v(&self, lam: &Partition, plus: &[usize], minus: &[usize], n: usize) -> Frac<F> {
        let others = complement_of(plus, minus, &(1..=n).collect::<Vec<_>>());
        let mut f = self.cross_block(lam, plus, minus, &others, false);
        for &j in minus {
            f.mul(self.minus_single(j, lam, n), self.omega.clone() * int(2));
        }
        f
    }
}

/// Explicit Pieri data of the Koornwinder family at `q = 0`.
struct QZero<F> {
    t: F,
    tl: [F; 4],
    big_t: F,
}

impl<F: Scalar> QZero<F> {
    fn new(t: &F, tl: &[F; 4]) -> Self {
        let big_t = tl.iter().cloned().fold(F::one(), |a, b| a * b);
        QZero {
            t: t.clone(),
            tl: tl.clone(),
            big_t,
        }
    }

    fn tp(&self, e: i64) -> Result<F> {
        pw(&self.t, e)
    }

    /// `1 - T t^e`.
    fn one_minus_big(&self, e: i64) -> Result<F> {
        Ok(F::one() - self.big_t.clone() * self.tp(e)?)
    }

    /// `(1 - t^{1+k-j}) / (1 - t^{k-j})`.
    fn hook(&self, j: usize, k: usize) -> Result<Frac<F>> {
        let e = k as i64 - j as i64;
        Ok(Frac::new(
            F::one() - self.tp(1 + e)?,
            F::one() - self.tp(e)?,
        ))
    }

    /// `Π_{1≤l≤3} (1 - t_0 t_l t^e)`.
    fn zero_pairs(&self, e: i64) -> Result<F> {
        let te = self.tp(e)?;
        Ok((1..4).fold(F::one(), |a, l| {
            a * (F::one() - self.tl[0].clone() * self.tl[l].clone() * te.clone())
        }))
    }

    /// `Π_{1≤l<m≤3} (1 - t_l t_m t^e)`.
    fn other_pairs(&self, e: i64) -> Result<F> {
        let te = self.tp(e)?;
        let mut acc = F::one();
        for l in 1..4 {
            for m in l + 1..4 {
                acc = acc * (F::one() - self.tl[l].clone() * self.tl[m].clone() * te.clone());
            }
        }
        Ok(acc)
    }

    fn tau(&self, j: usize, n: usize) -> Result<F> {
        Ok(self.tp((n - j) as i64)? * self.tl[0].clone())
    }

    fn principal(&self, lam: &Partition, n: usize) -> Result<Frac<F>> {
        let m0 = lam.multiplicity(0, n) as i64;
        let mut f = Frac::one();
        for j in 1..=n {
            let (lj, nj) = (lam.at(j), (n - j) as i64);
            if lj > 0 {
                f.times(self.zero_pairs(nj)?);
                f.over(pw(&self.tau(j, n)?, lj as i64)?);
            }
            if lj == 1 {
                f.over(self.one_minus_big(nj + m0)?);
            }
            for k in j + 1..=n {
                if lj > lam.at(k) {
                    f.absorb(self.hook(j, k)?);
                }
            }
        }
        Ok(f)
    }

    fn v(&self, lam: &Partition, plus: &[usize], minus: &[usize], n: usize) -> Result<F> {
        let eps = crate::partition::IndexSets::from_signed(plus, minus, n).eps;
        let (m0, m1) = (lam.multiplicity(0, n) as i64, lam.multiplicity(1, n) as i64);
        let m1p = plus.iter().filter(|&&j| lam.at(j) == 1).count() as i64;
        let mut f = Frac::one();
        for &j in plus {
            let nj = (n - j) as i64;
            match lam.at(j) {
                0 => {
                    f.times(self.one_minus_big(nj + m0 + m1 - m1p)? * self.zero_pairs(nj)?);
                    f.over(self.one_minus_big(2 * nj)? * self.one_minus_big(2 * nj + 1)?);
                }
                1 => f.times(self.one_minus_big(nj + m0)?),
                _ => {}
            }
        }
        for &j in minus {
            let nj = (n - j) as i64;
            if lam.at(j) == 1 {
                f.times(self.one_minus_big(nj - 1)? * self.other_pairs(nj)?);
                f.over(self.one_minus_big(2 * nj)? * self.one_minus_big(2 * nj - 1)?);
            }
        }
        for j in 1..=n {
            for k in j + 1..=n {
                if lam.at(j) == lam.at(k) && eps[j - 1] > eps[k - 1] {
                    f.absorb(self.hook(j, k)?);
                }
            }
            f.times(pw(&self.tau(j, n)?, -(eps[j - 1] as i64))?);
        }
        f.value()
    }

    fn u(&self, lam: &Partition, kset: &[usize], p: usize, n: usize) -> Result<F> {
        let delta = |e: i8| u32::from(e == -1);
        signed_sum(kset, p, |plus, minus, _rest| {
            // moves that would create a negative part do not contribute
            if minus.iter().any(|&j| lam.at(j) == 0) {
                return Ok(F::zero());
            }
            let mut eps = vec![0i8; n + 1];
            for &j in plus {
                eps[j] = 1;
            }
            for &j in minus {
                eps[j] = -1;
            }
            let mut f = Frac::one();
            for &j in plus {
                let nj = (n - j) as i64;
                match lam.at(j) {
                    0 => {
                        f.times(self.zero_pairs(nj)?);
                        f.over(self.one_minus_big(2 * nj)?);
                    }
                    1 => f.times(self.one_minus_big(nj)?),
                    _ => {}
                }
            }
            for &j in minus {
                let nj = (n - j) as i64;
                if lam.at(j) == 1 {
                    f.times(self.other_pairs(nj)?);
                    f.over(self.one_minus_big(2 * nj)?);
                }
            }
            for &j in kset {
                for &k in kset {
                    if lam.at(j) == lam.at(k) && eps[j] > eps[k] {
                        f.absorb(self.hook(j, k)?);
                    }
                }
            }
            for &j in minus {
                for &k in plus {
                    if lam.at(j) == lam.at(k) + 1 {
                        f.absorb(self.hook(j, k)?);
                    }
                }
            }
            let two_n = 2 * n as i64;
            for &j in kset {
                for &k in kset {
                    if j >= k {
                        continue;
                    }
                    let (ej, ek) = (eps[j], eps[k]);
                    let jk = (j + k) as i64;
                    if matches!(ej + ek, -2 | 1 | 2) && lam.at(j) == 1 && lam.at(k) == delta(ek) {
                        f.mul(
                            self.one_minus_big(two_n + 1 - jk)?,
                            self.one_minus_big(two_n - jk)?,
                        );
                    }
                    let j_in_i = ej != 0;
                    let k_not_minus = ek != -1;
                    if j_in_i
                        && k_not_minus
                        && matches!(ek - ej, 0 | 1)
                        && lam.at(j) == delta(ej)
                        && lam.at(k) == 0
                    {
                        f.mul(
                            self.one_minus_big(two_n - 1 - jk)?,
                            self.one_minus_big(two_n - jk)?,
                        );
                    }
                    if ej != ek && ek == 0 {
                        f.times(self.tp(-(ej as i64))?);
                    }
                    if lam.at(j) == lam.at(k) && ek - ej == 1 {
                        f.over(self.t.clone());
                    }
                }
                f.times(pw(&self.tl[0], -(eps[j] as i64))?);
            }
            f.value()
        })
    }
}

enum Formula<F> {
    Bc(Bc<F>),
    QZero(QZero<F>),
    Laguerre(Confluent<F>),
    Hermite(Confluent<F>),
}

impl<F: Scalar> Formula<F> {
    fn of(params: &ParamPoint<F>) -> Result<Self> {
        if let Some(bc) = Bc::from_params(params)? {
            return Ok(Formula::Bc(bc));
        }
        Ok(match params {
            ParamPoint::Whittaker { q, tl } => Formula::QZero(QZero::new(q, tl)),
            ParamPoint::Laguerre { g, h, omega } => Formula::Laguerre(Confluent {
                g: g.clone(),
                h: Some(h.clone()),
                omega: omega.clone(),
            }),
            ParamPoint::Hermite { g, omega } => Formula::Hermite(Confluent {
                g: g.clone(),
                h: None,
                omega: omega.clone(),
            }),
            _ => unreachable!("handled by the BC driver"),
        })
    }

    fn of_koornwinder(k: &Koornwinder<F>) -> Result<Self> {
        if k.q.is_zero() {
            Ok(Formula::QZero(QZero::new(&k.t, &k.tl)))
        } else {
            Ok(Formula::Bc(Bc::mult(k)?))
        }
    }

    fn principal(&self, lam: &Partition, n: usize) -> Result<Frac<F>> {
        match self {
            Formula::Bc(b) => b.principal(lam, n),
            Formula::QZero(z) => z.principal(lam, n),
            Formula::Laguerre(c) => c.laguerre_principal(lam, n),
            Formula::Hermite(c) => Ok(c.jack_principal(lam, n)),
        }
    }

    fn v(&self, lam: &Partition, plus: &[usize], minus: &[usize], n: usize) -> Result<F> {
        if plus.is_empty() && minus.is_empty() {
            return Ok(F::one());
        }
        match self {
            Formula::Bc(b) => b.v(lam, plus, minus, n),
            Formula::QZero(z) => z.v(lam, plus, minus, n),
            Formula::Laguerre(c) => {
                let others = complement_of(plus, minus, &(1..=n).collect::<Vec<_>>());
                c.laguerre_block(lam, plus, minus, &others, n, false)
                    .value()
            }
            Formula::Hermite(c) => c.hermite_v(lam, plus, minus, n).value(),
        }
    }

    fn u(&self, lam: &Partition, k: &[usize], p: usize, n: usize) -> Result<F> {
        if p == 0 {
            return Ok(F::one());
        }
        match self {
            Formula::Bc(b) => b.u(lam, k, p, n),
            Formula::QZero(z) => z.u(lam, k, p, n),
            Formula::Laguerre(c) => signed_sum(k, p, |plus, minus, rest| {
                c.laguerre_block(lam, plus, minus, rest, n, true).value()
            }),
            Formula::Hermite(_) => Err(Error::UnsupportedFamily(
                "the Hermite U factor has no closed form".into(),
            )),
        }
    }

    fn coeff(&self, lam: &Partition, mu: &Partition, n: usize, r: usize) -> Result<F> {
        if !lam.fits(n) || !mu.fits(n) {
            return Err(Error::InvalidPartition(format!(
                "{lam} or {mu} has more than {n} parts"
            )));
        }
        if r > n {
            return Err(Error::InvalidParameters(format!("r = {r} exceeds n = {n}")));
        }
        if r == 0 {
            return Ok(if lam == mu { F::one() } else { F::zero() });
        }
        if !proximity(lam, mu, r, n) {
            return Ok(F::zero());
        }
        let sets = index_sets(lam, mu, n);
        if let Formula::Hermite(_) = self {
            if sets.j.len() != r {
                return Err(Error::HermiteGeneralCase { j: sets.j.len(), r });
            }
        }
        let mut f = self.principal(lam, n)?;
        f.absorb(self.principal(mu, n)?.inverse());
        let ratio = f.value()?;
        if ratio.is_zero() {
            return Ok(ratio);
        }
        let mut c = ratio * self.v(lam, &sets.jplus, &sets.jminus, n)?;
        if !c.is_zero() {
            c = c * self.u(lam, &sets.jc, r - sets.j.len(), n)?;
        }
        if let Formula::Laguerre(l) = self {
            c = c * pw(&-l.omega.clone(), -(r as i64))?;
        }
        Ok(c)
    }
}

/// `C^{μ,n}_{λ,r}`: coefficient of `P_μ` in `E_r · P_λ`.
///
/// Zero unless `μ ~_r λ`. For Hermite only `|J(λ,μ)| = r` has a closed
/// form; other cases return [`Error::HermiteGeneralCase`]. For a Whittaker
/// point `(q, t_l)` these are the coefficients `C(0, q, t_l)` of the
/// `q = 0` Koornwinder family `P(x; 0, q, t_l)`.
pub fn pieri_coeff<F: Scalar>(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    r: usize,
    params: &ParamPoint<F>,
) -> Result<F> {
    Formula::of(params)?.coeff(lam, mu, n, r)
}

/// Pieri coefficient of a Koornwinder family, dispatching to the explicit
/// formulas when `q = 0`.
pub fn koornwinder_coeff<F: Scalar>(
    lam: &Partition,
    mu: &Partition,
    n: usize,
    r: usize,
    k: &Koornwinder<F>,
) -> Result<F> {
    Formula::of_koornwinder(k)?.coeff(lam, mu, n, r)
}

/// The family's principal specialization value `p_λ`.
pub fn principal_special<F: Scalar>(
    lam: &Partition,
    n: usize,
    params: &ParamPoint<F>,
) -> Result<F> {
    Formula::of(params)?.principal(lam, n)?.value()
}

/// `V^n_{J_+, J_-}(λ)`; `1` when both sets are empty.
pub fn v_factor<F: Scalar>(
    lam: &Partition,
    jplus: &[usize],
    jminus: &[usize],
    n: usize,
    params: &ParamPoint<F>,
) -> Result<F> {
    Formula::of(params)?.v(lam, jplus, jminus, n)
}

/// `U^n_{K, p}(λ)`; `1` when `p = 0`.
pub fn u_factor<F: Scalar>(
    lam: &Partition,
    k: &[usize],
    p: usize,
    n: usize,
    params: &ParamPoint<F>,
) -> Result<F> {
    Formula::of(params)?.u(lam, k, p, n)
}

/// `E_r` of a Koornwinder family with parameters `t, t0`:
/// `Σ_m (-1)^{r+m} e_m(y) h_{r-m}(τ_r + 1/τ_r, ..., τ_n + 1/τ_n)`.
pub fn koornwinder_generator<F: Scalar>(r: usize, n: usize, t: &F, t0: &F) -> Result<SymPoly<F>> {
    let args: Vec<F> = (r.max(1)..=n)
        .map(|j| {
            let tau = pw(t, (n - j) as i64)? * t0.clone();
            let inv = tau
                .inv()
                .ok_or_else(|| Error::NonGenericParameters("τ vanishes".into()))?;
            Ok(tau + inv)
        })
        .collect::<Result<_>>()?;
    let mut out = SymPoly::zero(n);
    for m in 0..=r {
        let c = complete_h(r - m, &args);
        let sign = if (r + m) % 2 == 1 {
            -F::one()
        } else {
            F::one()
        };
        out = out.add(&elementary::<F>(m, n).scale(&(c * sign)));
    }
    Ok(out)
}

/// The generator `E_r` in the family's base variables.
pub fn generator_er<F: Scalar>(r: usize, n: usize, params: &ParamPoint<F>) -> Result<SymPoly<F>> {
    if r > n {
        return Err(Error::InvalidParameters(format!("r = {r} exceeds n = {n}")));
    }
    let sign = if r % 2 == 1 { -F::one() } else { F::one() };
    let rho = |g: &F, g0: &F, squared: bool| -> Vec<F> {
        (r.max(1)..=n)
            .map(|j| {
                let x = g.clone() * int((n - j) as i64) + g0.clone();
                if squared {
                    x.clone() * x
                } else {
                    x
                }
            })
            .collect()
    };
    match params {
        ParamPoint::AskeyWilson { t, tl, .. } => koornwinder_generator(r, n, t, &tl[0]),
        ParamPoint::Whittaker { q, tl } => koornwinder_generator(r, n, q, &tl[0]),
        ParamPoint::Wilson { g, gl } => {
            let args = rho(g, &gl[0], true);
            let mut out = SymPoly::zero(n);
            for m in 0..=r {
                out = out
                    .add(&elementary::<F>(m, n).scale(&(complete_h(r - m, &args) * sign.clone())));
            }
            Ok(out)
        }
        ParamPoint::ContinuousHahn { g, g0, .. } => {
            let args = rho(g, g0, false);
            let mut out = SymPoly::zero(n);
            for m in 0..=r {
                let c = complete_h(r - m, &args) * pw(&F::imag_unit(), m as i64)? * sign.clone();
                out = out.add(&elementary::<F>(m, n).scale(&c));
            }
            Ok(out)
        }
        ParamPoint::Jacobi { .. } => {
            // e_r((2 - y_j)/4) = Σ_k (-1/4)^k (1/2)^{r-k} C(n-k, r-k) e_k(y)
            let mut out = SymPoly::zero(n);
            let (a, b) = (F::from_rational(&rat(1, 2)), F::from_rational(&rat(-1, 4)));
            for k in 0..=r {
                let c = pw(&b, k as i64)?
                    * pw(&a, (r - k) as i64)?
                    * int(binomial(n - k, r - k))
                    * sign.clone();
                out = out.add(&elementary::<F>(k, n).scale(&c));
            }
            Ok(out)
        }
        ParamPoint::Laguerre { .. } | ParamPoint::Hermite { .. } => Ok(elementary(r, n)),
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{random_params, Family, ALL_FAMILIES};
    use crate::partition::{enumerate_bounded, part};
    use crate::scalar::GaussRational;
    use crate::scalar::LimitScalar;

    type G = GaussRational;

    fn q(n: i64, d: i64) -> G {
        G::real(rat(n, d))
    }

    fn hermite(g: G, omega: G) -> ParamPoint<G> {
        ParamPoint::Hermite { g, omega }
    }

    fn laguerre(g: G, h: G, omega: G) -> ParamPoint<G> {
        ParamPoint::Laguerre { g, h, omega }
    }

    #[test]
    fn principal_examples() {
        let h = hermite(q(3, 2), q(1, 1));
        assert_eq!(principal_special(&part(&[]), 3, &h).unwrap(), G::one());
        let g = q(5, 3);
        let h = hermite(g.clone(), q(1, 1));
        // ((1+k-j)g)_1 / ((k-j)g)_1 with k-j = 1
        assert_eq!(
            principal_special(&part(&[2, 1]), 2, &h).unwrap(),
            G::from_int(2)
        );
        // E[(x1+x2)^2] = 1/ω under the two-variable Gaussian weight
        let om = q(7, 5);
        let h2 = hermite(g.clone(), om.clone());
        assert_eq!(
            pieri_coeff(&part(&[1]), &part(&[]), 2, 1, &h2).unwrap(),
            om.inv().unwrap()
        );
        let (hh, om) = (q(7, 3), q(2, 5));
        let l = laguerre(q(1, 2), hh.clone(), om.clone());
        for m in 0..5u32 {
            let expect = powi(&-om.clone(), -(m as i64)).unwrap() * pochhammer(&hh, m);
            assert_eq!(principal_special(&part(&[m]), 1, &l).unwrap(), expect);
        }
    }

    #[test]
    fn v_and_u_examples() {
        let (g, h, om) = (q(2, 3), q(7, 3), q(2, 5));
        for m in 0..5u32 {
            let lam = part(&[m]);
            let v = v_factor(&lam, &[], &[1], 1, &hermite(g.clone(), om.clone())).unwrap();
            assert_eq!(
                v,
                G::from_int(m as i64)
                    .checked_div(&(om.clone() * G::from_int(2)))
                    .unwrap()
            );
            let v = v_factor(
                &lam,
                &[1],
                &[],
                1,
                &laguerre(g.clone(), h.clone(), om.clone()),
            )
            .unwrap();
            assert_eq!(v, h.clone() + G::from_int(m as i64));
            let u = u_factor(
                &lam,
                &[1],
                1,
                1,
                &laguerre(g.clone(), h.clone(), om.clone()),
            )
            .unwrap();
            assert_eq!(u, -(h.clone() + G::from_int(2 * m as i64)));
        }
        for f in ALL_FAMILIES {
            let p = random_params(f, 3);
            assert_eq!(v_factor(&part(&[2, 1]), &[], &[], 2, &p).unwrap(), G::one());
            if f != Family::Hermite {
                assert_eq!(
                    u_factor(&part(&[2, 1]), &[1, 2], 0, 2, &p).unwrap(),
                    G::one()
                );
            }
        }
        assert!(matches!(
            u_factor(&part(&[1]), &[1], 1, 1, &hermite(g, om)),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn one_variable_recurrences() {
        let (g, h, om) = (q(2, 3), q(7, 3), q(2, 5));
        for m in 1..=6u32 {
            let (lam, down, up) = (part(&[m]), part(&[m - 1]), part(&[m + 1]));
            let her = hermite(g.clone(), om.clone());
            let mm = G::from_int(m as i64);
            assert_eq!(
                pieri_coeff(&lam, &down, 1, 1, &her).unwrap(),
                mm.checked_div(&(om.clone() * G::from_int(2))).unwrap()
            );
            assert_eq!(pieri_coeff(&lam, &up, 1, 1, &her).unwrap(), G::one());
            let lag = laguerre(g.clone(), h.clone(), om.clone());
            let expect = (mm.clone() * (mm.clone() + h.clone() - G::one()))
                .checked_div(&(om.clone() * om.clone()))
                .unwrap();
            assert_eq!(pieri_coeff(&lam, &down, 1, 1, &lag).unwrap(), expect);
            assert_eq!(pieri_coeff(&lam, &up, 1, 1, &lag).unwrap(), G::one());
        }
    }

    #[test]
    fn hermite_general_case_is_rejected() {
        let her = hermite(q(2, 3), q(1, 1));
        assert!(matches!(
            pieri_coeff(&part(&[1, 1]), &part(&[1, 1]), 2, 2, &her),
            Err(Error::HermiteGeneralCase { j: 0, r: 2 })
        ));
    }

    #[test]
    fn support_is_proximity() {
        for f in ALL_FAMILIES {
            let p = random_params(f, 11);
            for n in 1..=3 {
                let parts = enumerate_bounded(n, 3);
                for lam in &parts {
                    for mu in &parts {
                        for r in 1..=n {
                            let c = pieri_coeff(lam, mu, n, r, &p);
                            if !proximity(lam, mu, r, n) {
                                assert!(c.unwrap().is_zero(), "{f} {lam} {mu} {r}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn monic_compatibility() {
        // adding r boxes in distinct rows: coefficient is the leading
        // coefficient of E_r
        for f in ALL_FAMILIES {
            let p = random_params(f, 5);
            let lead = match f {
                Family::ContinuousHahn => powi(&(-G::imag_unit()), 2).unwrap(),
                Family::Jacobi => q(1, 16),
                _ => G::one(),
            };
            let c = pieri_coeff(&part(&[2, 1]), &part(&[3, 2]), 2, 2, &p).unwrap();
            assert_eq!(c, lead, "{f}");
        }
    }

    #[test]
    fn generator_examples() {
        let her = hermite(q(1, 1), q(1, 1));
        assert_eq!(
            generator_er(1, 2, &her).unwrap(),
            SymPoly::monomial(part(&[1]), G::one(), 2)
        );
        let jac = random_params(Family::Jacobi, 1);
        let e = generator_er(1, 1, &jac).unwrap();
        let expect = SymPoly::monomial(part(&[1]), q(1, 4), 1).add(&SymPoly::monomial(
            part(&[]),
            q(-1, 2),
            1,
        ));
        assert_eq!(e, expect);
        let lag = random_params(Family::Laguerre, 1);
        assert_eq!(
            generator_er(2, 2, &lag).unwrap(),
            SymPoly::monomial(part(&[1, 1]), G::one(), 2)
        );
    }

    #[test]
    fn jacobi_generator_matches_substitution() {
        let jac = random_params(Family::Jacobi, 1);
        let pt = [q(1, 3), q(-2, 5), q(7, 2)];
        for r in 0..=3 {
            let e = generator_er(r, 3, &jac).unwrap();
            let s: Vec<G> = pt
                .iter()
                .map(|y| (G::from_int(2) - y.clone()) * q(1, 4))
                .collect();
            let er = elementary::<G>(r, 3).evaluate(&s);
            let sign = if r % 2 == 1 { -G::one() } else { G::one() };
            assert_eq!(e.evaluate(&pt), er * sign);
        }
    }

    /// Askey-Wilson point over `Q(i)(s)` with `q = s^2` and `t̂_0 = c/s`,
    /// `c^2 = t0 t1 t2 t3`.
    fn aw_near_zero(t: &G, tl: &[G; 4], c: &G) -> Koornwinder<LimitScalar<G>> {
        let s = LimitScalar::<G>::var();
        let lift = |x: &G| LimitScalar::constant(x.clone());
        Koornwinder {
            q: s.clone() * s.clone(),
            t: lift(t),
            tl: [lift(&tl[0]), lift(&tl[1]), lift(&tl[2]), lift(&tl[3])],
            hat: Some(lift(c).checked_div(&s).unwrap()),
        }
    }

    #[test]
    fn q_zero_formulas_are_the_limit_of_the_general_ones() {
        let (t, c) = (q(2, 5), q(3, 7));
        let (t0, t1, t2) = (q(1, 2), q(3, 4), q(2, 3));
        let t3 = (c.clone() * c.clone())
            .checked_div(&(t0.clone() * t1.clone() * t2.clone()))
            .unwrap();
        let tl = [t0, t1, t2, t3];
        let near = aw_near_zero(&t, &tl, &c);
        let zero = Koornwinder {
            q: G::zero(),
            t: t.clone(),
            tl: tl.clone(),
            hat: None,
        };
        for n in 1..=3 {
            let parts = enumerate_bounded(n, 3);
            for lam in &parts {
                for r in 1..=n {
                    for mu in crate::partition::proximity_neighbors(lam, r, n) {
                        let exact = koornwinder_coeff(lam, &mu, n, r, &zero).unwrap();
                        let lim = koornwinder_coeff(lam, &mu, n, r, &near)
                            .unwrap()
                            .limit_at_zero()
                            .unwrap();
                        assert_eq!(exact, lim, "n={n} λ={lam} μ={mu} r={r}");
                    }
                }
            }
        }
    }
}
