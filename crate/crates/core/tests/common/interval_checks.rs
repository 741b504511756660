//! Interval invariants shared by the property tests and the acceptance run.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rand::Rng;
use tscalc_core::{Error, Interval};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

pub fn random_interval(r: &mut impl Rng) -> Interval {
    let lo = r.gen_range(-50.0..50.0);
    Interval::new(lo, lo + r.gen_range(0.0..30.0))
}

/// A sub-interval of `a` chosen by two fractions.
pub fn shrink(a: Interval, u: f64, v: f64) -> Interval {
    let (u, v) = (u.min(v), u.max(v));
    Interval::new(a.lo() + u * a.width(), (a.lo() + v * a.width()).min(a.hi()))
}

fn brute_mul(a: Interval, b: Interval) -> (f64, f64) {
    let n = 40;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = if i == n { a.hi() } else { a.lo() + a.width() * i as f64 / n as f64 };
        for j in 0..=n {
            let y = if j == n { b.hi() } else { b.lo() + b.width() * j as f64 / n as f64 };
            lo = lo.min(x * y);
            hi = hi.max(x * y);
        }
    }
    (lo, hi)
}

pub fn metric(a: Interval, b: Interval, c: Interval) -> Check {
    let (ab, ba) = (a.hausdorff_dist(&b), b.hausdorff_dist(&a));
    ensure!(ab == ba, "asymmetric: {a} {b}");
    ensure!(a.hausdorff_dist(&a) == 0.0, "d(a, a) != 0 for {a}");
    ensure!((ab == 0.0) == (a == b), "identity of indiscernibles: {a} {b}");
    ensure!(a.hausdorff_dist(&c) <= ab + b.hausdorff_dist(&c) + 1e-12, "triangle: {a} {b} {c}");
    ensure!(ab >= 0.0, "negative distance");
    Ok(())
}

pub fn inclusion_monotone(a: Interval, b: Interval, f: [f64; 4]) -> Check {
    let (sa, sb) = (shrink(a, f[0], f[1]), shrink(b, f[2], f[3]));
    ensure!(sa.subset(&a) && sb.subset(&b), "shrink");
    ensure!((sa + sb).subset(&(a + b)), "add: {sa} {sb} in {a} {b}");
    ensure!((sa - sb).subset(&(a - b)), "sub: {sa} {sb} in {a} {b}");
    ensure!((sa * sb).subset(&(a * b)), "mul: {sa} {sb} in {a} {b}");
    if !b.contains(0.0) {
        let inner = sa.checked_div(sb).map_err(|e| e.to_string())?;
        let outer = a.checked_div(b).map_err(|e| e.to_string())?;
        ensure!(inner.subset(&outer), "div: {sa} {sb} in {a} {b}");
    } else {
        ensure!(
            matches!(a.checked_div(b), Err(Error::DivisionByIntervalContainingZero(_))),
            "division by {b} should fail"
        );
    }
    Ok(())
}

pub fn mul_brute_force(a: Interval, b: Interval) -> Check {
    let (lo, hi) = brute_mul(a, b);
    let p = a * b;
    ensure!((p.lo() - lo).abs() <= 1e-12 * lo.abs().max(1.0), "{a}*{b} = {p}, lower {lo}");
    ensure!((p.hi() - hi).abs() <= 1e-12 * hi.abs().max(1.0), "{a}*{b} = {p}, upper {hi}");
    Ok(())
}

/// `λ` is a signed power of two, so the round trip is exact.
pub fn scalar_inverse_exact(a: Interval, k: i32, neg: bool) -> Check {
    let lambda = if neg { -(2f64.powi(k)) } else { 2f64.powi(k) };
    let back = a.scale(1.0 / lambda).scale(lambda);
    ensure!(back == a, "{a} scaled by 1/{lambda} and back gives {back}");
    Ok(())
}

pub fn scalar_inverse_rounding(a: Interval, lambda: f64) -> Check {
    let back = a.scale(1.0 / lambda).scale(lambda);
    let ulps = 4.0 * f64::EPSILON;
    ensure!((back.lo() - a.lo()).abs() <= ulps * a.lo().abs(), "{a} by {lambda}: {back}");
    ensure!((back.hi() - a.hi()).abs() <= ulps * a.hi().abs(), "{a} by {lambda}: {back}");
    Ok(())
}

pub fn partial_order(a: Interval, b: Interval, c: Interval) -> Check {
    ensure!(a.leq(&a), "reflexivity: {a}");
    if a.leq(&b) && b.leq(&a) {
        ensure!(a == b, "antisymmetry: {a} {b}");
    }
    if a.leq(&b) && b.leq(&c) {
        ensure!(a.leq(&c), "transitivity: {a} {b} {c}");
    }
    Ok(())
}

pub fn sub_endpoints(a: Interval, b: Interval) -> Check {
    let d = a - b;
    ensure!(d.lo() == a.lo() - b.hi() && d.hi() == a.hi() - b.lo(), "{a} - {b} = {d}");
    Ok(())
}

pub fn pow_sampling(a: Interval, p: u32) -> Check {
    let r = a.pow(p as f64).map_err(|e| e.to_string())?;
    for i in 0..=32 {
        let x = a.lo() + a.width() * i as f64 / 32.0;
        let v = x.powi(p as i32);
        let slack = 1e-9 * v.abs().max(1.0);
        ensure!(r.lo() - slack <= v && v <= r.hi() + slack, "{a}^{p} = {r} misses {v}");
    }
    Ok(())
}

/// Runs every invariant on `n` random cases; returns the number of checks.
pub fn run_all(n: usize, r: &mut impl Rng) -> Result<usize, String> {
    let mut checks = 0;
    for _ in 0..n {
        let (a, b, c) = (random_interval(r), random_interval(r), random_interval(r));
        metric(a, b, c)?;
        inclusion_monotone(a, b, [r.gen(), r.gen(), r.gen(), r.gen()])?;
        mul_brute_force(a, b)?;
        scalar_inverse_exact(a, r.gen_range(-20..20), r.gen())?;
        let lambda = if r.gen() { r.gen_range(-100.0..-1e-3) } else { r.gen_range(1e-3..100.0) };
        scalar_inverse_rounding(a, lambda)?;
        partial_order(a, b, c)?;
        sub_endpoints(a, b)?;
        pow_sampling(a, r.gen_range(1..5))?;
        checks += 8;
    }
    Ok(checks)
}
