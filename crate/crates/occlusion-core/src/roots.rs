//! Scalar root bracketing and bisection shared by the horizon and value solvers.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs
/// (zero counts as the sign of `lo_positive == false`). Returns the midpoint of
/// the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_positive = f(lo) > 0.0;
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans `points` in order and returns the first adjacent pair `(a, b)` with
/// `pred(f(a)) == false` and `pred(f(b)) == true`.
pub fn first_transition<F, P>(points: &[f64], mut f: F, pred: P) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
    P: Fn(f64) -> bool,
{
    let mut prev: Option<(f64, bool)> = None;
    for &x in points {
        let here = pred(f(x));
        if let Some((px, pv)) = prev {
            if !pv && here {
                return Some((px, x));
            }
        }
        prev = Some((x, here));
    }
    None
}

pub fn linspace(a: f64, b: f64, cells: usize) -> Vec<f64> {
    (0..=cells).map(|k| a + (b - a) * k as f64 / cells as f64).collect()
}
