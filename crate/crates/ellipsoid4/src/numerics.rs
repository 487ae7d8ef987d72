//! Small numerical helpers: compensated summation and bracketed root finding.

/// Neumaier-compensated sum. Keeps the running error term so that sums whose
/// result is far smaller than the individual terms remain accurate.
pub fn neumaier_sum(terms: &[f64]) -> f64 {
    let mut s = 0.0;
    let mut comp = 0.0;
    for &t in terms {
        let tmp = s + t;
        if s.abs() >= t.abs() {
            comp += (s - tmp) + t;
        } else {
            comp += (t - tmp) + s;
        }
        s = tmp;
    }
    s + comp
}

/// Bisection on a bracketing interval followed by Newton polishing.
///
/// `f` must have opposite signs at `lo` and `hi`. Returns the refined root.
pub fn bisect_newton(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    iters: usize,
) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let step = f(x) / d;
        let next = x - step;
        if !next.is_finite() || next < lo || next > hi {
            break;
        }
        x = next;
    }
    x
}

/// Plain bisection to a fixed number of iterations on a monotone predicate:
/// returns x where `f(x)` changes sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let flo = f(lo);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_handles_cancellation() {
        // 1e16 + 1 - 1e16 loses the 1 in naive f64 summation order dependent ways
        let s = neumaier_sum(&[1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn bisect_newton_finds_sqrt2() {
        let r = bisect_newton(|x| x * x - 2.0, |x| 2.0 * x, 1.0, 2.0, 40);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }
}
