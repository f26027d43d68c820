//! Families and their parameter bundles.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{i_im_part, int, rat, rational_sqrt, re_part, GaussRational, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Macdonald-Koornwinder (Askey-Wilson level), trigonometric.
    AskeyWilson,
    /// Deformed q-Whittaker functions, the `t -> 0` limit of Askey-Wilson.
    Whittaker,
    Wilson,
    ContinuousHahn,
    Jacobi,
    Laguerre,
    Hermite,
}

pub const ALL_FAMILIES: [Family; 7] = [
    Family::AskeyWilson,
    Family::Whittaker,
    Family::Wilson,
    Family::ContinuousHahn,
    Family::Jacobi,
    Family::Laguerre,
    Family::Hermite,
];

/// The base variable the family's polynomials are expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseVariable {
    /// `y = e^{ix} + e^{-ix}`
    TwoCos,
    /// `y = x^2`
    Square,
    /// `y = x`
    Identity,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::AskeyWilson => "aw",
            Family::Whittaker => "whittaker",
            Family::Wilson => "wilson",
            Family::ContinuousHahn => "chahn",
            Family::Jacobi => "jacobi",
            Family::Laguerre => "laguerre",
            Family::Hermite => "hermite",
        }
    }

    pub fn base_variable(self) -> BaseVariable {
        match self {
            Family::AskeyWilson | Family::Whittaker | Family::Jacobi => BaseVariable::TwoCos,
            Family::Wilson | Family::Laguerre => BaseVariable::Square,
            Family::ContinuousHahn | Family::Hermite => BaseVariable::Identity,
        }
    }

    /// Families whose polynomials have real coefficients for real input.
    pub fn is_real(self) -> bool {
        self != Family::ContinuousHahn
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aw" | "askey-wilson" | "koornwinder" => Ok(Family::AskeyWilson),
            "whittaker" => Ok(Family::Whittaker),
            "wilson" => Ok(Family::Wilson),
            "chahn" | "continuous-hahn" | "ch" => Ok(Family::ContinuousHahn),
            "jacobi" => Ok(Family::Jacobi),
            "laguerre" => Ok(Family::Laguerre),
            "hermite" => Ok(Family::Hermite),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// A parameter point of one family, over the scalar field `F`.
///
/// Askey-Wilson points carry the square roots the Pieri formulas need:
/// `hat_t0` with `hat_t0^2 = t0 t1 t2 t3 / q` (Pieri coefficients at
/// `(q, t)`) and `dual_hat_t0` with `dual_hat_t0^2 = t0 t1 t2 t3 / t`
/// (branching, which evaluates Pieri coefficients at `(t, q)`).
///
/// A Whittaker point `(q, t_l)` describes the pair of families
/// `P(x; q, 0, t_l)` (what `build` constructs) and `P(x; 0, q, t_l)` (whose
/// Pieri coefficients `C(0, q, t_l)` govern the branching rule).
#[derive(Clone, Debug, PartialEq)]
pub enum ParamPoint<F> {
    AskeyWilson {
        q: F,
        t: F,
        tl: [F; 4],
        hat_t0: Option<F>,
        dual_hat_t0: Option<F>,
    },
    Whittaker {
        q: F,
        tl: [F; 4],
    },
    Wilson {
        g: F,
        gl: [F; 4],
    },
    ContinuousHahn {
        g: F,
        g0: F,
        g1: F,
    },
    Jacobi {
        g: F,
        g0: F,
        g1: F,
    },
    Laguerre {
        g: F,
        h: F,
        omega: F,
    },
    Hermite {
        g: F,
        omega: F,
    },
}

fn nonzero<F: Scalar>(x: &F, what: &str) -> Result<F> {
    x.inv()
        .ok_or_else(|| Error::NonGenericParameters(format!("{what} vanishes")))
}

impl<F: Scalar> ParamPoint<F> {
    pub fn family(&self) -> Family {
        match self {
            ParamPoint::AskeyWilson { .. } => Family::AskeyWilson,
            ParamPoint::Whittaker { .. } => Family::Whittaker,
            ParamPoint::Wilson { .. } => Family::Wilson,
            ParamPoint::ContinuousHahn { .. } => Family::ContinuousHahn,
            ParamPoint::Jacobi { .. } => Family::Jacobi,
            ParamPoint::Laguerre { .. } => Family::Laguerre,
            ParamPoint::Hermite { .. } => Family::Hermite,
        }
    }

    /// Applies `f` to every stored value.
    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> ParamPoint<G> {
        let arr = |a: &[F; 4]| [f(&a[0]), f(&a[1]), f(&a[2]), f(&a[3])];
        match self {
            ParamPoint::AskeyWilson {
                q,
                t,
                tl,
                hat_t0,
                dual_hat_t0,
            } => ParamPoint::AskeyWilson {
                q: f(q),
                t: f(t),
                tl: arr(tl),
                hat_t0: hat_t0.as_ref().map(&f),
                dual_hat_t0: dual_hat_t0.as_ref().map(&f),
            },
            ParamPoint::Whittaker { q, tl } => ParamPoint::Whittaker {
                q: f(q),
                tl: arr(tl),
            },
            ParamPoint::Wilson { g, gl } => ParamPoint::Wilson {
                g: f(g),
                gl: arr(gl),
            },
            ParamPoint::ContinuousHahn { g, g0, g1 } => ParamPoint::ContinuousHahn {
                g: f(g),
                g0: f(g0),
                g1: f(g1),
            },
            ParamPoint::Jacobi { g, g0, g1 } => ParamPoint::Jacobi {
                g: f(g),
                g0: f(g0),
                g1: f(g1),
            },
            ParamPoint::Laguerre { g, h, omega } => ParamPoint::Laguerre {
                g: f(g),
                h: f(h),
                omega: f(omega),
            },
            ParamPoint::Hermite { g, omega } => ParamPoint::Hermite {
                g: f(g),
                omega: f(omega),
            },
        }
    }

    /// The parameters at which the dual-side Pieri coefficients of the
    /// branching rule are evaluated: `(t, q, t_l)` for Askey-Wilson and
    /// `1/g`-rescaled parameters for the rational families. A Whittaker
    /// point is its own dual.
    pub fn dual(&self) -> Result<ParamPoint<F>> {
        Ok(match self {
            ParamPoint::AskeyWilson {
                q,
                t,
                tl,
                hat_t0,
                dual_hat_t0,
            } => {
                nonzero(q, "q")?;
                nonzero(t, "t")?;
                ParamPoint::AskeyWilson {
                    q: t.clone(),
                    t: q.clone(),
                    tl: tl.clone(),
                    hat_t0: dual_hat_t0.clone(),
                    dual_hat_t0: hat_t0.clone(),
                }
            }
            ParamPoint::Whittaker { .. } => self.clone(),
            ParamPoint::Wilson { g, gl } => {
                let gi = nonzero(g, "g")?;
                ParamPoint::Wilson {
                    g: gi.clone(),
                    gl: gl.clone().map(|x| x * gi.clone()),
                }
            }
            ParamPoint::ContinuousHahn { g, g0, g1 } => {
                let gi = nonzero(g, "g")?;
                ParamPoint::ContinuousHahn {
                    g: gi.clone(),
                    g0: g0.clone() * gi.clone(),
                    g1: g1.clone() * gi,
                }
            }
            ParamPoint::Jacobi { g, g0, g1 } => {
                let gi = nonzero(g, "g")?;
                ParamPoint::Jacobi {
                    g: gi.clone(),
                    g0: g0.clone() * gi.clone(),
                    g1: g1.clone() * gi,
                }
            }
            ParamPoint::Laguerre { g, h, omega } => {
                let gi = nonzero(g, "g")?;
                ParamPoint::Laguerre {
                    g: gi.clone(),
                    h: h.clone() * gi.clone(),
                    omega: omega.clone() * gi,
                }
            }
            ParamPoint::Hermite { g, omega } => {
                let gi = nonzero(g, "g")?;
                ParamPoint::Hermite {
                    g: gi.clone(),
                    omega: omega.clone() * gi,
                }
            }
        })
    }

    /// Hatted parameters `ĝ_l` of the Wilson, continuous Hahn and Jacobi
    /// families (length 4, 3 and 2 respectively).
    pub fn hatted(&self) -> Option<Vec<F>> {
        let half = F::from_rational(&rat(1, 2));
        match self {
            ParamPoint::Wilson { gl, .. } => {
                let s = gl.iter().cloned().fold(F::zero(), |a, b| a + b);
                let h0 = (s - F::one()) * half;
                let mut out = vec![h0.clone()];
                for l in 1..4 {
                    out.push(gl[0].clone() + gl[l].clone() - h0.clone());
                }
                Some(out)
            }
            ParamPoint::ContinuousHahn { g0, g1, .. } => {
                let (r0, r1) = (re_part(g0), re_part(g1));
                let (i0, i1) = (i_im_part(g0), i_im_part(g1));
                Some(vec![
                    r0.clone() + r1.clone() - half.clone(),
                    half.clone() + r0 - r1,
                    half + i0 - i1,
                ])
            }
            ParamPoint::Jacobi { g0, g1, .. } => Some(vec![
                (g0.clone() + g1.clone() - F::one()) * half.clone(),
                (g0.clone() - g1.clone() + F::one()) * half,
            ]),
            _ => None,
        }
    }
}

fn field(obj: &Map<String, Value>, keys: &[&str]) -> Result<Option<GaussRational>> {
    for k in keys {
        if let Some(v) = obj.get(*k) {
            return GaussRational::from_json(v).map(Some);
        }
    }
    Ok(None)
}

fn required(obj: &Map<String, Value>, keys: &[&str]) -> Result<GaussRational> {
    field(obj, keys)?
        .ok_or_else(|| Error::InvalidParameters(format!("missing parameter {:?}", keys[0])))
}

fn require_real(x: &GaussRational, what: &str) -> Result<()> {
    if x.is_real() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("{what} must be real")))
    }
}

/// Exact square root of a Gaussian rational when it is a real perfect
/// square (up to sign).
fn exact_sqrt(x: &GaussRational) -> Option<GaussRational> {
    if !x.is_real() {
        return None;
    }
    rational_sqrt(&x.re).map(GaussRational::real)
}

fn check_hat(
    hat: &GaussRational,
    prod: &GaussRational,
    base: &GaussRational,
    what: &str,
) -> Result<()> {
    let target = prod
        .checked_div(base)
        .ok_or_else(|| Error::InvalidParameters(format!("{what}: zero modulus")))?;
    if hat.clone() * hat.clone() != target {
        return Err(Error::InvalidParameters(format!(
            "{what}^2 must equal t0 t1 t2 t3 / {}",
            if what == "hat_t0" { "q" } else { "t" }
        )));
    }
    Ok(())
}

/// Validates raw JSON parameters for `family`.
///
/// Values are `"p/q"` strings or `{"re": .., "im": ..}` objects. For
/// Askey-Wilson, `hat_t0` (and `dual_hat_t0`) may be given explicitly;
/// when omitted they are computed if `t0 t1 t2 t3 / q` (resp. `/ t`) is a
/// rational square.
pub fn make_params(family: Family, raw: &Value) -> Result<ParamPoint<GaussRational>> {
    let obj = raw
        .as_object()
        .ok_or_else(|| Error::InvalidParameters("parameters must be a JSON object".into()))?;
    let four = |names: [&str; 4]| -> Result<[GaussRational; 4]> {
        Ok([
            required(obj, &[names[0]])?,
            required(obj, &[names[1]])?,
            required(obj, &[names[2]])?,
            required(obj, &[names[3]])?,
        ])
    };
    match family {
        Family::AskeyWilson => {
            let q = required(obj, &["q"])?;
            let t = required(obj, &["t"])?;
            let tl = four(["t0", "t1", "t2", "t3"])?;
            if q.is_zero() {
                return Err(Error::InvalidParameters("q must be nonzero".into()));
            }
            if t.is_zero() {
                return Err(Error::InvalidParameters("t must be nonzero".into()));
            }
            let prod = tl.iter().cloned().fold(GaussRational::one(), |a, b| a * b);
            let hat_t0 = match field(obj, &["hat_t0", "that0"])? {
                Some(h) => {
                    check_hat(&h, &prod, &q, "hat_t0")?;
                    Some(h)
                }
                None => prod.checked_div(&q).and_then(|x| exact_sqrt(&x)),
            };
            let dual_hat_t0 = match field(obj, &["dual_hat_t0"])? {
                Some(h) => {
                    check_hat(&h, &prod, &t, "dual_hat_t0")?;
                    Some(h)
                }
                None => prod.checked_div(&t).and_then(|x| exact_sqrt(&x)),
            };
            Ok(ParamPoint::AskeyWilson {
                q,
                t,
                tl,
                hat_t0,
                dual_hat_t0,
            })
        }
        Family::Whittaker => {
            let q = required(obj, &["q", "t"])?;
            if q.is_zero() {
                return Err(Error::InvalidParameters("q must be nonzero".into()));
            }
            Ok(ParamPoint::Whittaker {
                q,
                tl: four(["t0", "t1", "t2", "t3"])?,
            })
        }
        Family::Wilson => {
            let g = required(obj, &["g"])?;
            require_real(&g, "g")?;
            Ok(ParamPoint::Wilson {
                g,
                gl: four(["g0", "g1", "g2", "g3"])?,
            })
        }
        Family::ContinuousHahn => {
            let g = required(obj, &["g"])?;
            require_real(&g, "g")?;
            let g0 = required(obj, &["g0"])?;
            let g1 = required(obj, &["g1"])?;
            if !g0.re.is_positive() || !g1.re.is_positive() {
                return Err(Error::InvalidParameters(
                    "Re(g0) and Re(g1) must be positive".into(),
                ));
            }
            Ok(ParamPoint::ContinuousHahn { g, g0, g1 })
        }
        Family::Jacobi => {
            let p = ParamPoint::Jacobi {
                g: required(obj, &["g"])?,
                g0: required(obj, &["g0"])?,
                g1: required(obj, &["g1"])?,
            };
            if let ParamPoint::Jacobi { g, g0, g1 } = &p {
                for (x, n) in [(g, "g"), (g0, "g0"), (g1, "g1")] {
                    require_real(x, n)?;
                }
            }
            Ok(p)
        }
        Family::Laguerre => {
            let p = ParamPoint::Laguerre {
                g: required(obj, &["g"])?,
                h: required(obj, &["h"])?,
                omega: required(obj, &["omega", "w"])?,
            };
            if let ParamPoint::Laguerre { g, h, omega } = &p {
                for (x, n) in [(g, "g"), (h, "h"), (omega, "omega")] {
                    require_real(x, n)?;
                }
                if omega.is_zero() {
                    return Err(Error::InvalidParameters("omega must be nonzero".into()));
                }
            }
            Ok(p)
        }
        Family::Hermite => {
            let g = required(obj, &["g"])?;
            let omega = required(obj, &["omega", "w"])?;
            require_real(&g, "g")?;
            require_real(&omega, "omega")?;
            if omega.is_zero() {
                return Err(Error::InvalidParameters("omega must be nonzero".into()));
            }
            Ok(ParamPoint::Hermite { g, omega })
        }
    }
}

impl ParamPoint<GaussRational> {
    pub fn to_json(&self) -> Value {
        let j = |x: &GaussRational| {
            if x.is_real() {
                Value::String(x.re.to_string())
            } else {
                x.to_json()
            }
        };
        match self {
            ParamPoint::AskeyWilson {
                q,
                t,
                tl,
                hat_t0,
                dual_hat_t0,
            } => {
                let mut m = json!({"q": j(q), "t": j(t), "t0": j(&tl[0]), "t1": j(&tl[1]), "t2": j(&tl[2]), "t3": j(&tl[3])});
                if let Some(h) = hat_t0 {
                    m["hat_t0"] = j(h);
                }
                if let Some(h) = dual_hat_t0 {
                    m["dual_hat_t0"] = j(h);
                }
                m
            }
            ParamPoint::Whittaker { q, tl } => {
                json!({"q": j(q), "t0": j(&tl[0]), "t1": j(&tl[1]), "t2": j(&tl[2]), "t3": j(&tl[3])})
            }
            ParamPoint::Wilson { g, gl } => {
                json!({"g": j(g), "g0": j(&gl[0]), "g1": j(&gl[1]), "g2": j(&gl[2]), "g3": j(&gl[3])})
            }
            ParamPoint::ContinuousHahn { g, g0, g1 } => {
                json!({"g": j(g), "g0": j(g0), "g1": j(g1)})
            }
            ParamPoint::Jacobi { g, g0, g1 } => json!({"g": j(g), "g0": j(g0), "g1": j(g1)}),
            ParamPoint::Laguerre { g, h, omega } => {
                json!({"g": j(g), "h": j(h), "omega": j(omega)})
            }
            ParamPoint::Hermite { g, omega } => json!({"g": j(g), "omega": j(omega)}),
        }
    }
}

/// A positive rational `num/den` with `num` in `1..=max_num` and `den` in
/// `1..=max_den`.
fn small_positive(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

/// Reproducible generic parameter point with small-height rational
/// entries, drawn from a ChaCha stream seeded by `seed`.
///
/// Askey-Wilson points are drawn as `q = a^2`, `t = b^2`,
/// `t0 t1 t2 t3 = c^2` so that both hatted roots are rational; Whittaker
/// points likewise have `q` and `t0 t1 t2 t3` rational squares.
///
/// Draws are rejected until they avoid the simplest resonances: rational
/// family parameters in `ℤ/2`, and `t_j t_k = 1` or `t_j = t_k` for the
/// q-families.
pub fn random_params(family: Family, seed: u64) -> ParamPoint<GaussRational> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (family as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    loop {
        let p = draw(family, &mut rng);
        if avoids_resonances(&p) {
            return p;
        }
    }
}

fn avoids_resonances(p: &ParamPoint<GaussRational>) -> bool {
    let half_integer = |x: &GaussRational| (x.re.clone() * int(2)).is_integer();
    let distinct_pairs = |xs: &[GaussRational]| {
        (0..xs.len()).all(|j| {
            (j + 1..xs.len()).all(|k| xs[j] != xs[k] && !(xs[j].clone() * xs[k].clone()).is_one())
        })
    };
    match p {
        ParamPoint::AskeyWilson { q, t, tl, .. } => {
            let mut xs = tl.to_vec();
            xs.push(q.clone());
            xs.push(t.clone());
            distinct_pairs(&xs)
        }
        ParamPoint::Whittaker { q, tl } => {
            let mut xs = tl.to_vec();
            xs.push(q.clone());
            distinct_pairs(&xs)
        }
        ParamPoint::Wilson { g, gl } => !half_integer(g) && !gl.iter().any(half_integer),
        ParamPoint::ContinuousHahn { g, g0, g1 } | ParamPoint::Jacobi { g, g0, g1 } => {
            ![g, g0, g1].into_iter().any(half_integer)
        }
        ParamPoint::Laguerre { g, h, .. } => !half_integer(g) && !half_integer(h),
        ParamPoint::Hermite { g, .. } => !half_integer(g),
    }
}

fn draw(family: Family, rng: &mut ChaCha8Rng) -> ParamPoint<GaussRational> {
    let mut r = |n: i64, d: i64| GaussRational::real(small_positive(rng, n, d));
    // Moduli, their roots and `t0 t1 t2 t3` equal to 1 are non-generic.
    let mut r1 = |n: i64, d: i64| loop {
        let v = r(n, d);
        if !v.is_one() {
            break v;
        }
    };
    match family {
        Family::AskeyWilson => {
            let (a, c) = (r1(9, 17), r1(9, 17));
            let b = loop {
                let v = r1(9, 17);
                if v != a {
                    break v;
                }
            };
            let (t0, t1, t2) = (r1(9, 11), r1(9, 11), r1(9, 11));
            let t3 = (c.clone() * c.clone())
                .checked_div(&(t0.clone() * t1.clone() * t2.clone()))
                .expect("nonzero");
            ParamPoint::AskeyWilson {
                q: a.clone() * a.clone(),
                t: b.clone() * b.clone(),
                tl: [t0, t1, t2, t3],
                hat_t0: c.checked_div(&a),
                dual_hat_t0: c.checked_div(&b),
            }
        }
        Family::Whittaker => {
            let (a, c) = (r1(9, 17), r1(9, 17));
            let (t0, t1, t2) = (r1(9, 11), r1(9, 11), r1(9, 11));
            let t3 = (c.clone() * c)
                .checked_div(&(t0.clone() * t1.clone() * t2.clone()))
                .expect("nonzero");
            ParamPoint::Whittaker {
                q: a.clone() * a,
                tl: [t0, t1, t2, t3],
            }
        }
        Family::Wilson => ParamPoint::Wilson {
            g: r(13, 7),
            gl: [r(13, 7), r(13, 7), r(13, 7), r(13, 7)],
        },
        Family::ContinuousHahn => {
            let g = r(13, 7);
            let g0 = GaussRational::new(
                small_positive(rng, 13, 7),
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)),
            );
            let g1 = GaussRational::new(
                small_positive(rng, 13, 7),
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)),
            );
            ParamPoint::ContinuousHahn { g, g0, g1 }
        }
        Family::Jacobi => ParamPoint::Jacobi {
            g: r(13, 7),
            g0: r(13, 7),
            g1: r(13, 7),
        },
        Family::Laguerre => ParamPoint::Laguerre {
            g: r(13, 7),
            h: r(13, 7),
            omega: r(13, 7),
        },
        Family::Hermite => ParamPoint::Hermite {
            g: r(13, 7),
            omega: r(13, 7),
        },
    }
}
