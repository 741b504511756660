//! Sampled extremum search: a uniform sample followed by golden-section
//! polishing around the best samples.

use crate::error::Result;

pub const SAMPLES_PER_CELL: usize = 1025;
const REFINE_ROUNDS: usize = 3;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `(min, max)` of `f` over the closed interval `[x, y]`.
pub fn sampled_extrema<F>(f: F, x: f64, y: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if x == y {
        let v = f(x)?;
        return Ok((v, v));
    }
    let n = SAMPLES_PER_CELL - 1;
    let at = |k: usize| if k == n { y } else { x + (y - x) * k as f64 / n as f64 };
    let mut values = Vec::with_capacity(n + 1);
    for k in 0..=n {
        values.push(f(at(k))?);
    }
    let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    for k in best_indices(&values, false) {
        let (l, r) = (at(k.saturating_sub(1)), at((k + 1).min(n)));
        lo = lo.min(golden(&f, l, r, false)?);
    }
    for k in best_indices(&values, true) {
        let (l, r) = (at(k.saturating_sub(1)), at((k + 1).min(n)));
        hi = hi.max(golden(&f, l, r, true)?);
    }
    Ok((lo, hi))
}

/// Indices of the best local extrema among the samples.
fn best_indices(values: &[f64], maximize: bool) -> Vec<usize> {
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let n = values.len();
    let mut locals: Vec<usize> = (0..n)
        .filter(|&k| {
            let v = values[k];
            (k == 0 || !better(values[k - 1], v)) && (k + 1 == n || !better(values[k + 1], v))
        })
        .collect();
    locals.sort_by(|&a, &b| {
        let (va, vb) = (values[a], values[b]);
        if maximize {
            vb.total_cmp(&va)
        } else {
            va.total_cmp(&vb)
        }
    });
    locals.dedup();
    locals.truncate(REFINE_ROUNDS);
    locals
}

fn golden<F>(f: &F, mut l: f64, mut r: f64, maximize: bool) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let sign = if maximize { -1.0 } else { 1.0 };
    let g = |t: f64| f(t).map(|v| sign * v);
    let mut best = g(l)?.min(g(r)?);
    let mut c = r - INV_PHI * (r - l);
    let mut d = l + INV_PHI * (r - l);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    for _ in 0..100 {
        best = best.min(gc).min(gd);
        if (r - l).abs() <= 1e-15 * l.abs().max(r.abs()).max(1.0) {
            break;
        }
        if gc < gd {
            r = d;
            d = c;
            gd = gc;
            c = r - INV_PHI * (r - l);
            gc = g(c)?;
        } else {
            l = c;
            c = d;
            gc = gd;
            d = l + INV_PHI * (r - l);
            gd = g(d)?;
        }
    }
    Ok(sign * best.min(gc).min(gd))
}
