use std::time::Instant;

use num_complex::Complex64;
use serde_json::json;

use super::CheckReport;
use crate::branching::{Builder, Constructor};
use crate::error::{Error, Result};
use crate::params::ParamPoint;
use crate::partition::Partition;
use crate::scalar::GaussRational;
use crate::sympoly::SymPoly;

type G = GaussRational;
type C = Complex64;

/// Minimum number of halvings of the step after the initial one.
pub const DEFAULT_HALVINGS: usize = 5;
/// Cap on the number of halvings when the error is still above tolerance.
pub const MAX_HALVINGS: usize = 12;

/// Accepted range of the error ratio between consecutive steps.
const RATIO_WINDOW: (f64, f64) = (1.5, 3.0);
const FINAL_TOLERANCE: f64 = 1e-3;
/// Below this relative error at every step the source already equals the
/// target and there is no trend to measure.
const EXACT_TOLERANCE: f64 = 1e-9;

/// Fixed evaluation point in the original variables `x_j`.
const POINT: [f64; 3] = [1.93, 1.21, -0.74];

fn cx(x: &G) -> C {
    x.to_complex64()
}

fn real(v: f64) -> C {
    C::new(v, 0.0)
}

/// The source chain of a target family and its initial step.
fn chain(target: &ParamPoint<G>) -> Result<(&'static str, f64)> {
    Ok(match target {
        ParamPoint::Wilson { .. } => ("aw->wilson", 1e-3),
        ParamPoint::ContinuousHahn { .. } => ("aw->chahn", 2.5e-4),
        ParamPoint::Jacobi { .. } => ("aw->jacobi", 5e-4),
        ParamPoint::Whittaker { .. } => ("aw->whittaker", 2e-3),
        ParamPoint::Laguerre { .. } => ("wilson->laguerre", 2e-3),
        ParamPoint::Hermite { .. } => ("chahn->hermite", 2e-3),
        ParamPoint::AskeyWilson { .. } => {
            return Err(Error::UnsupportedFamily(
                "Askey-Wilson is the top of every degeneration chain".into(),
            ))
        }
    })
}

/// Askey-Wilson point with both hatted roots taken as principal square
/// roots.
fn aw_point(q: C, t: C, tl: [C; 4]) -> ParamPoint<C> {
    let prod = tl.iter().product::<C>();
    ParamPoint::AskeyWilson {
        q,
        t,
        tl,
        hat_t0: Some((prod / q).sqrt()),
        dual_hat_t0: Some((prod / t).sqrt()),
    }
}

/// `ω = ω0 + ω1` with `ω0 = ω/3`; an unequal split keeps odd-order
/// corrections visible.
fn omega_split(omega: C) -> (C, C) {
    (omega / 3.0, omega * (2.0 / 3.0))
}

fn eval(p: &SymPoly<C>, ys: &[C]) -> C {
    p.evaluate(ys)
}

/// The scaled source polynomial at step `s`, evaluated at `x`.
fn source_value(target: &ParamPoint<G>, lam: &Partition, n: usize, s: f64, x: &[f64]) -> Result<C> {
    let size = lam.size() as i32;
    let build = |p: ParamPoint<C>| Builder::new(p)?.build(lam, n);
    // The trigonometric chains converge to second order in `α`; the step is `α²`.
    let alpha = s.sqrt();
    let e = |a: C| (-a * alpha).exp();
    match target {
        ParamPoint::Wilson { g, gl } => {
            let q = real((-alpha).exp());
            let tl = [e(cx(&gl[0])), e(cx(&gl[1])), e(cx(&gl[2])), e(cx(&gl[3]))];
            let p = build(aw_point(q, e(cx(g)), tl))?;
            let ys: Vec<C> = x.iter().map(|v| real(2.0 * (alpha * v).cos())).collect();
            Ok(eval(&p, &ys) * real(-1.0 / s).powi(size))
        }
        ParamPoint::ContinuousHahn { g, g0, g1 } => {
            let q = real((-alpha).exp());
            let i = C::i();
            let (a0, a1) = (-i * e(cx(g0)), -i * e(cx(g1)));
            let (b0, b1) = (i * e(cx(g0).conj()), i * e(cx(g1).conj()));
            let p = build(aw_point(q, e(cx(g)), [a0, a1, b0, b1]))?;
            let ys: Vec<C> = x.iter().map(|v| real(2.0 * (alpha * v).sin())).collect();
            Ok(eval(&p, &ys) * real(1.0 / (2.0 * alpha)).powi(size))
        }
        ParamPoint::Jacobi { g, g0, g1 } => {
            let q = real((-alpha).exp());
            let pw = |a: C| q.powc(a);
            // Any split `h0 + h2 = g0`, `h1 + h3 = g1` works; equal halves
            // would put the source on `t0 = t2`, which is non-generic.
            let (third, two_thirds) = (real(1.0 / 3.0), real(2.0 / 3.0));
            let tl = [
                pw(cx(g0) * third),
                -pw(cx(g1) * third),
                pw(cx(g0) * two_thirds),
                -pw(cx(g1) * two_thirds),
            ];
            let p = build(aw_point(q, pw(cx(g)), tl))?;
            let ys: Vec<C> = x.iter().map(|v| real(2.0 * v.cos())).collect();
            Ok(eval(&p, &ys))
        }
        ParamPoint::Whittaker { q, tl } => {
            let tl = [cx(&tl[0]), cx(&tl[1]), cx(&tl[2]), cx(&tl[3])];
            let p = build(aw_point(cx(q), real(s), tl))?;
            let ys: Vec<C> = x.iter().map(|v| real(2.0 * v.cos())).collect();
            Ok(eval(&p, &ys))
        }
        ParamPoint::Laguerre { g, h, omega } => {
            let half = real(0.5);
            let (w0, w1) = omega_split(cx(omega));
            let gl = [
                cx(h) * half,
                cx(h) * half,
                real(1.0 / s) / w0,
                real(1.0 / s) / w1,
            ];
            let p = build(ParamPoint::Wilson { g: cx(g), gl })?;
            let ys: Vec<C> = x.iter().map(|v| real(v * v / s)).collect();
            Ok(eval(&p, &ys) * real(s).powi(size))
        }
        ParamPoint::Hermite { g, omega } => {
            let (w0, w1) = omega_split(cx(omega));
            let p = build(ParamPoint::ContinuousHahn {
                g: cx(g),
                g0: real(1.0 / s) / w0,
                g1: real(1.0 / s) / w1,
            })?;
            let ys: Vec<C> = x.iter().map(|v| real(v / s.sqrt())).collect();
            Ok(eval(&p, &ys) * real(s.sqrt()).powi(size))
        }
        ParamPoint::AskeyWilson { .. } => Err(Error::UnsupportedFamily("aw".into())),
    }
}

fn target_value(target: &ParamPoint<G>, lam: &Partition, n: usize, x: &[f64]) -> Result<C> {
    let p = Constructor::new(target.clone()).build(lam, n)?.map(cx);
    let ys: Vec<C> = x
        .iter()
        .map(|&v| match target {
            ParamPoint::Wilson { .. } | ParamPoint::Laguerre { .. } => real(v * v),
            ParamPoint::Jacobi { .. } | ParamPoint::Whittaker { .. } => real(2.0 * v.cos()),
            _ => real(v),
        })
        .collect();
    Ok(eval(&p, &ys))
}

/// Relative errors of the degeneration towards `target` along the steps
/// `s_0 / 2^k`, together with those steps.
///
/// At least `halvings` halvings are taken; the sequence continues while the
/// error is still above the final tolerance, up to [`MAX_HALVINGS`].
pub fn degeneration_errors(
    target: &ParamPoint<G>,
    lam: &Partition,
    n: usize,
    halvings: usize,
    falsify: bool,
) -> Result<Vec<(f64, f64)>> {
    if n > POINT.len() {
        return Err(Error::InvalidParameters(format!(
            "degeneration checks support n ≤ {}",
            POINT.len()
        )));
    }
    let (_, s0) = chain(target)?;
    let x = &POINT[..n];
    let mut exact = target_value(target, lam, n, x)?;
    if falsify {
        exact *= 1.01;
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    for k in 0..=MAX_HALVINGS.max(halvings) {
        if k > halvings && out.last().is_some_and(|e| e.1 < FINAL_TOLERANCE) {
            break;
        }
        let s = s0 / f64::powi(2.0, k as i32);
        let approx = source_value(target, lam, n, s, x)?;
        out.push((
            s,
            (approx - exact).norm() / exact.norm().max(f64::MIN_POSITIVE),
        ));
    }
    Ok(out)
}

/// Float convergence of the scaled source polynomial to the exact target
/// polynomial: consecutive error ratios in `[1.5, 3]` and a final relative
/// error below `1e-3`, unless the two agree to rounding at every step.
pub fn degeneration_check(
    target: &ParamPoint<G>,
    lam: &Partition,
    n: usize,
    halvings: usize,
    falsify: bool,
) -> Result<CheckReport> {
    let start = Instant::now();
    let (name, _) = chain(target)?;
    let errors = degeneration_errors(target, lam, n, halvings, falsify)?;
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let last = errors.last().map(|e| e.1).unwrap_or(f64::INFINITY);
    let exact = errors.iter().all(|e| e.1 < EXACT_TOLERANCE);
    let cx = if exact {
        None
    } else if let Some(k) = ratios
        .iter()
        .position(|r| !(RATIO_WINDOW.0..=RATIO_WINDOW.1).contains(r))
    {
        Some(format!(
            "error ratio {:.3} between steps {:e} and {:e} outside [1.5, 3]",
            ratios[k],
            errors[k].0,
            errors[k + 1].0
        ))
    } else if last.is_nan() || last >= FINAL_TOLERANCE {
        Some(format!(
            "final relative error {last:e} is not below {FINAL_TOLERANCE:e}"
        ))
    } else {
        None
    };
    let sizes = json!({
        "n": n,
        "lambda": lam,
        "chain": name,
        "exact_at_every_step": exact,
        "errors": errors.iter().map(|e| e.1).collect::<Vec<_>>(),
    });
    Ok(CheckReport::new(
        "degeneration",
        target.family(),
        sizes,
        target.to_json(),
        start,
        cx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{random_params, Family};
    use crate::partition::part;
    use crate::scalar::rat;

    #[test]
    fn one_box_chains() {
        let l = ParamPoint::Laguerre {
            g: G::real(rat(1, 2)),
            h: G::real(rat(3, 2)),
            omega: G::real(rat(2, 1)),
        };
        let rep = degeneration_check(&l, &part(&[1]), 1, DEFAULT_HALVINGS, false).unwrap();
        assert!(rep.passed, "{}", rep.summary());
        let h = random_params(Family::Hermite, 3);
        let rep = degeneration_check(&h, &part(&[1]), 1, DEFAULT_HALVINGS, false).unwrap();
        assert!(rep.passed, "{}", rep.summary());
        assert!(
            !degeneration_check(&h, &part(&[1]), 1, DEFAULT_HALVINGS, true)
                .unwrap()
                .passed
        );
    }
}
