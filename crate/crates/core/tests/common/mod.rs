#![allow(dead_code)]

pub mod interval_checks;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tscalc_core::function::build::*;
use tscalc_core::{Component, Expr, Interval, IntervalFn, TimeScale};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: Interval, b: Interval, tol: f64) -> bool {
    a.hausdorff_dist(&b) <= tol
}

/// Kinds of random scales.
#[derive(Clone, Copy, Debug)]
pub enum ScaleKind {
    Continuum,
    Discrete,
    Mixed,
}

/// A random compact scale with components inside roughly [-2, 6].
pub fn random_scale(r: &mut impl Rng, kind: ScaleKind) -> TimeScale {
    let mut x: f64 = r.gen_range(-2.0..0.0);
    let mut comps = Vec::new();
    let n = match kind {
        ScaleKind::Continuum => 1,
        _ => r.gen_range(1..=4),
    };
    for i in 0..n {
        let segment = match kind {
            ScaleKind::Continuum => true,
            ScaleKind::Discrete => false,
            ScaleKind::Mixed => i % 2 == 0,
        };
        if segment {
            let len = r.gen_range(0.2..1.5);
            comps.push(Component::segment(x, x + len));
            x += len;
        } else {
            let k = r.gen_range(1..=4);
            let mut pts = Vec::new();
            for _ in 0..k {
                pts.push(x);
                x += r.gen_range(0.1..0.8);
            }
            x -= r.gen_range(0.0..0.05);
            comps.push(Component::points(&pts));
        }
        x += r.gen_range(0.1..0.8);
    }
    if matches!(kind, ScaleKind::Mixed) && n == 1 {
        comps.push(Component::points(&[x]));
    }
    if matches!(kind, ScaleKind::Discrete) && comps.iter().map(|c| match c {
        Component::Points(p) => p.len(),
        _ => 0,
    }).sum::<usize>() < 2
    {
        comps.push(Component::points(&[x]));
    }
    TimeScale::new(comps).expect("generated scale is valid")
}

pub fn random_kind(r: &mut impl Rng) -> ScaleKind {
    match r.gen_range(0..3) {
        0 => ScaleKind::Continuum,
        1 => ScaleKind::Discrete,
        _ => ScaleKind::Mixed,
    }
}

/// A random smooth real expression bounded on [-2, 6].
pub fn random_smooth(r: &mut impl Rng) -> Expr {
    let a = r.gen_range(-1.0..1.0);
    let b = r.gen_range(-1.0..1.0);
    match r.gen_range(0..4) {
        0 => c(a) + c(b) * t(),
        1 => c(a) + c(b) * t() + c(r.gen_range(-0.3..0.3)) * t().powf(2.0),
        2 => c(a) + c(b) * sin(c(r.gen_range(0.5..3.0)) * t()),
        _ => c(a) + c(b) * exp(c(r.gen_range(-0.5..0.3)) * t()),
    }
}

/// A random nonnegative smooth expression.
pub fn random_nonneg(r: &mut impl Rng) -> Expr {
    let a = r.gen_range(0.0..1.0);
    let b = r.gen_range(0.0..1.0);
    match r.gen_range(0..4) {
        0 => c(a) + c(b) * t().powf(2.0),
        1 => c(a) + c(b) * exp(c(r.gen_range(-0.5..0.3)) * t()),
        2 => c(a + b) + c(b) * sin(c(r.gen_range(0.5..3.0)) * t()),
        _ => c(a) + c(b) * abs(t()),
    }
}

pub fn abs(e: Expr) -> Expr {
    e.abs()
}

/// A random continuous interval function `[u, u + w]` with `w ≥ 0`.
pub fn random_continuous(r: &mut impl Rng) -> IntervalFn {
    let lo = random_smooth(r);
    let w = random_nonneg(r);
    IntervalFn::new(lo.clone(), lo + w)
}

/// A random continuous function with values in the nonnegative intervals.
pub fn random_positive(r: &mut impl Rng) -> IntervalFn {
    let lo = random_nonneg(r);
    let w = random_nonneg(r);
    IntervalFn::new(lo.clone(), lo + w)
}

/// A random Dirichlet-type function with constant branches.
pub fn random_dirichlet(r: &mut impl Rng) -> IntervalFn {
    let mut branch = || {
        let lo = r.gen_range(-2.0..2.0);
        (lo, lo + r.gen_range(0.0..2.0))
    };
    let rational = branch();
    let irrational = branch();
    IntervalFn::dirichlet(rational, irrational)
}

/// A member of `(a, b)_T` when one exists.
pub fn interior_member(r: &mut impl Rng, ts: &TimeScale, a: f64, b: f64) -> Option<f64> {
    let x = r.gen_range(a..b);
    ts.nearest_in_open(a, b, x)
}

/// `a ⊆ b` up to an additive tolerance on each endpoint.
pub fn subset_tol(a: Interval, b: Interval, tol: f64) -> bool {
    a.lo() >= b.lo() - tol && a.hi() <= b.hi() + tol
}

/// Scaling, (sub)additivity, additivity over the window and inclusion
/// monotonicity of the ID (or, with `ir`, the IR) integral on `n` random
/// instances. Returns the number of instances checked.
pub fn integral_property_suite(n: usize, seed: u64, ir: bool, tol: f64) -> Result<usize, String> {
    use tscalc_core::{id_integral, ir_integral};
    let mut r = rng(seed);
    let integ = |f: &IntervalFn, ts: &TimeScale, a: f64, b: f64| {
        if ir {
            ir_integral(f, ts, a, b, tol * 1e-2)
        } else {
            id_integral(f, ts, a, b, tol * 1e-2)
        }
        .map(|x| x.value)
        .map_err(|e| e.to_string())
    };
    for i in 0..n {
        let kind = random_kind(&mut r);
        let ts = random_scale(&mut r, kind);
        let (a, b) = (ts.min(), ts.max());
        let dirichlet = !ir && i % 3 == 2;
        let (f, g) = if dirichlet {
            (random_dirichlet(&mut r), random_dirichlet(&mut r))
        } else {
            (random_continuous(&mut r), random_continuous(&mut r))
        };
        let ctx = |what: &str| format!("instance {i} ({what}) on {ts}: f = {f:?}");
        let lambda = r.gen_range(-3.0..3.0);
        let if_ = integ(&f, &ts, a, b)?;
        let ig = integ(&g, &ts, a, b)?;

        let scaled = integ(&f.scale(lambda), &ts, a, b)?;
        if !close(scaled, if_.scale(lambda), tol) {
            return Err(ctx(&format!("scaling by {lambda}: {scaled} vs {}", if_.scale(lambda))));
        }

        let sum = integ(&f.add(&g), &ts, a, b)?;
        let ok = if ir { close(sum, if_ + ig, tol) } else { subset_tol(sum, if_ + ig, tol) };
        if !ok {
            return Err(ctx(&format!("sum: {sum} vs {}", if_ + ig)));
        }

        if let Some(c) = interior_member(&mut r, &ts, a, b) {
            let split = integ(&f, &ts, a, c)? + integ(&f, &ts, c, b)?;
            if !close(split, if_, tol) {
                return Err(ctx(&format!("split at {c}: {split} vs {if_}")));
            }
        }

        let wider = if dirichlet {
            let (u, v) = (r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
            f.add(&IntervalFn::dirichlet((-u, v), (-v, u)))
        } else {
            f.add(&IntervalFn::new(-random_nonneg(&mut r), random_nonneg(&mut r)))
        };
        let iw = integ(&wider, &ts, a, b)?;
        if !subset_tol(if_, iw, tol) {
            return Err(ctx(&format!("inclusion: {if_} vs {iw}")));
        }
    }
    Ok(n)
}

/// Single-cell integrals `[t, σ(t)]` at random right-scattered points equal
/// `μ(t)·f(t)` bit for bit.
pub fn single_cell_suite(scales: usize, points: usize, seed: u64) -> Result<usize, String> {
    use tscalc_core::{id_integral, Run};
    let mut r = rng(seed);
    let mut checked = 0;
    for s in 0..scales {
        let kind = if s % 2 == 0 { ScaleKind::Discrete } else { ScaleKind::Mixed };
        let ts = random_scale(&mut r, kind);
        let scattered: Vec<f64> = ts
            .continuous_runs(ts.min(), ts.max())
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter_map(|run| match run {
                Run::Scattered { t, .. } => Some(t),
                Run::Segment { .. } => None,
            })
            .collect();
        let per = points / scales;
        for _ in 0..per {
            let t = scattered[r.gen_range(0..scattered.len())];
            let f = if r.gen_bool(0.5) { random_continuous(&mut r) } else { random_dirichlet(&mut r) };
            let sigma = ts.sigma(t).map_err(|e| e.to_string())?;
            let got = id_integral(&f, &ts, t, sigma, 1e-10).map_err(|e| e.to_string())?;
            let want = f.eval(t).map_err(|e| e.to_string())?.scale(ts.mu(t).map_err(|e| e.to_string())?);
            if got.value != want || got.error_estimate != 0.0 {
                return Err(format!("at t = {t} on {ts}: {} vs {want}", got.value));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// A random positive weight bounded away from zero.
pub fn random_weight(r: &mut impl Rng) -> Expr {
    c(r.gen_range(0.1..1.0)) + random_nonneg(r)
}

/// A random positive function with polynomial or exponential endpoints.
pub fn random_positive_poly_exp(r: &mut impl Rng) -> IntervalFn {
    let part = |r: &mut dyn rand::RngCore| -> Expr {
        let a = r.gen_range(0.0..1.0);
        let b = r.gen_range(0.0..1.0);
        match r.gen_range(0..3) {
            0 => c(a) + c(b) * t().powf(2.0),
            1 => c(a) + c(b) * exp(c(r.gen_range(-0.5..0.5)) * t()),
            _ => c(a + 0.2) + c(b) * t().powf(2.0) + c(r.gen_range(0.0..0.2)) * t().powf(4.0),
        }
    };
    let lo = part(r);
    let w = part(r);
    IntervalFn::new(lo.clone(), lo + w)
}

/// A random positive convex interval function on `[-m, m]`: convex lower
/// endpoint, concave upper endpoint lying above it.
pub fn random_convex_fn(r: &mut impl Rng, m: f64) -> IntervalFn {
    let a = r.gen_range(0.0..1.0);
    let d = r.gen_range(0.0..1.0);
    let s: f64 = r.gen_range(-0.5..0.5);
    let (lo, lo_max) = if r.gen_bool(0.5) {
        let x0: f64 = r.gen_range(-1.0..1.0);
        (c(a) * (t() - c(x0)).powf(2.0) + c(d), a * (m + x0.abs()).powi(2) + d)
    } else {
        (c(a) * exp(c(s) * t()) + c(d), a * (s.abs() * m).exp() + d)
    };
    let b = r.gen_range(0.0..0.5);
    let x1: f64 = r.gen_range(-1.0..1.0);
    let k = lo_max + b * (m + x1.abs()).powi(2) + r.gen_range(0.0..2.0);
    IntervalFn::new(lo, c(k) - c(b) * (t() - c(x1)).powf(2.0))
}

/// Bound on `|g|` over the scale.
pub fn expr_bound(g: &Expr, ts: &TimeScale) -> f64 {
    ts.sample_grid(ts.min(), ts.max(), 257)
        .unwrap()
        .into_iter()
        .map(|x| g.eval(x).unwrap().abs())
        .fold(0.0, f64::max)
        + 1.0
}

/// Inequalities covered by the randomized certification.
#[derive(Clone, Copy, Debug)]
pub enum Certify {
    Jensen,
    Holder(f64),
    CauchySchwarz,
    Minkowski(f64),
    HolderNegative(f64),
    MinkowskiNegative(f64),
}

/// Runs `n` random valid instances of `which` and fails on the first one
/// not certified at `tol`.
pub fn certification_suite(which: Certify, n: usize, seed: u64, tol: f64) -> Result<usize, String> {
    use tscalc_core::inequality::{cauchy_schwarz, holder, holder_negative, jensen, minkowski, minkowski_negative};
    use tscalc_core::CheckOptions;
    let mut r = rng(seed);
    let opts = CheckOptions { tolerance: tol, ..CheckOptions::default() };
    for i in 0..n {
        let kind = random_kind(&mut r);
        let ts = random_scale(&mut r, kind);
        let (a, b) = (ts.min(), ts.max());
        let h = random_weight(&mut r);
        let f = random_positive_poly_exp(&mut r);
        let g = random_positive_poly_exp(&mut r);
        let report = match which {
            Certify::Jensen => {
                let ge = random_smooth(&mut r);
                let fc = random_convex_fn(&mut r, expr_bound(&ge, &ts));
                jensen(&fc, &ge, &h, &ts, a, b, opts)
            }
            Certify::Holder(p) => holder(&f, &g, &h, p, None, &ts, a, b, opts),
            Certify::CauchySchwarz => cauchy_schwarz(&f, &g, &h, &ts, a, b, opts),
            Certify::Minkowski(p) => minkowski(&f, &g, &h, p, &ts, a, b, opts),
            Certify::HolderNegative(p) => holder_negative(&f.scale(-1.0), &g.scale(-1.0), &h, p, None, &ts, a, b, opts),
            Certify::MinkowskiNegative(p) => minkowski_negative(&f.scale(-1.0), &g.scale(-1.0), &h, p, &ts, a, b, opts),
        }
        .map_err(|e| format!("{which:?} instance {i} on {ts}: {e}"))?;
        if !report.holds {
            return Err(format!("{which:?} instance {i} on {ts}: {report:?}"));
        }
    }
    Ok(n)
}
