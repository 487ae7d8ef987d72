//! Shared test oracles, independent of the library's production paths.

use nalgebra::Matrix3;

/// Eigenvalues of the symmetric pencil (B, G) by inverse-free bisection:
/// the inertia of B − tG (computed from leading principal minors) counts the
/// eigenvalues below t, and each eigenvalue is bisected to ~1e−14 relative.
///
/// This never touches the characteristic-cubic path it is used to audit.
pub fn pencil_eigen_bisect(b: &Matrix3<f64>, g: &Matrix3<f64>) -> [f64; 3] {
    let count_below = |t: f64| -> usize {
        let m = b - g * t;
        let d1 = m[(0, 0)];
        let d2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let d3 = m.determinant();
        // Sign changes in (1, d1, d2, d3); zero minors get a tiny nudge by
        // treating them as positive (measure-zero in the bisection).
        let signs = [1.0f64, d1, d2, d3];
        let mut changes = 0;
        let mut prev = 1.0f64;
        for &s in &signs[1..] {
            let cur = if s == 0.0 { prev } else { s };
            if cur.signum() != prev.signum() {
                changes += 1;
            }
            prev = cur;
        }
        changes
    };
    // Bracket all three eigenvalues.
    let mut lo = -1.0;
    let mut hi = 1.0;
    for _ in 0..120 {
        if count_below(lo) == 0 {
            break;
        }
        lo *= 2.0;
    }
    for _ in 0..120 {
        if count_below(hi) == 3 {
            break;
        }
        hi *= 2.0;
    }
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let (mut a, mut b_) = (lo, hi);
        for _ in 0..100 {
            let mid = 0.5 * (a + b_);
            if count_below(mid) >= i + 1 {
                b_ = mid;
            } else {
                a = mid;
            }
        }
        *slot = 0.5 * (a + b_);
    }
    out
}

/// Central-difference first and second partials of a chart coordinate map,
/// the finite-difference oracle for the algorithmic jets.
pub fn numeric_jet(f: &dyn Fn([f64; 3]) -> f64, x: [f64; 3], h: f64) -> ([f64; 3], [[f64; 3]; 3]) {
    let eval = |dx: [f64; 3]| {
        let mut y = x;
        for i in 0..3 {
            y[i] += dx[i];
        }
        f(y)
    };
    let mut grad = [0.0; 3];
    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        let mut dp = [0.0; 3];
        dp[i] = h;
        let mut dm = [0.0; 3];
        dm[i] = -h;
        grad[i] = (eval(dp) - eval(dm)) / (2.0 * h);
        hess[i][i] = (eval(dp) - 2.0 * f(x) + eval(dm)) / (h * h);
    }
    for i in 0..3 {
        for j in 0..i {
            let mut dpp = [0.0; 3];
            dpp[i] = h;
            dpp[j] = h;
            let mut dpm = dpp;
            dpm[j] = -h;
            let mut dmp = dpp;
            dmp[i] = -h;
            let mut dmm = dpp;
            dmm[i] = -h;
            dmm[j] = -h;
            hess[i][j] = (eval(dpp) - eval(dpm) - eval(dmp) + eval(dmm)) / (4.0 * h * h);
            hess[j][i] = hess[i][j];
        }
    }
    (grad, hess)
}
