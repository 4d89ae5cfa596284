//! Bracketed one-dimensional searches shared by the norm and conjugate code.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of a bracketed scalar search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Bisection on a monotone predicate.
///
/// `pred(lo)` must be false and `pred(hi)` true. Returns the smallest
/// bracketed point known to satisfy the predicate once the bracket is
/// narrower than `abs_tol` and `rel_tol * hi`, or cannot be split further.
pub fn bisect_predicate<F>(
    mut pred: F,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_iter: usize,
) -> (f64, usize)
where
    F: FnMut(f64) -> bool,
{
    let mut iterations = 0;
    while iterations < max_iter {
        let width = hi - lo;
        if width <= abs_tol && width <= rel_tol * hi.abs() {
            break;
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    (hi, iterations)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> SearchResult
where
    F: FnMut(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a).abs() > tol && iterations < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    SearchResult {
        x,
        value,
        iterations,
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let (x, _) = bisect_predicate(|x| x * x > 2.0, 0.0, 2.0, 1e-14, 1e-15, 500);
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn golden_finds_parabola_min() {
        let r = golden_min(|x| (x - 0.3) * (x - 0.3) + 1.0, -1.0, 4.0, 1e-10, 500);
        assert!((r.x - 0.3).abs() < 1e-7);
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
    }
}
