//! Arclength integrals for the conformal principal charts.
//!
//! Every integral here has the shape ½ ∫ √(τ(τ−λ)/D(τ)) dτ over one gap
//! (lo, hi) between squared axes, where D may contain the vanishing endpoint
//! factors (hi − τ), (τ − lo) and a strictly positive remainder. The
//! substitution τ = lo + (hi − lo) sin²θ cancels the endpoint square-root
//! singularities against the Jacobian exactly, leaving a smooth integrand on
//! [0, π/2] that two independent backends (a fixed Gauss–Legendre rule and
//! adaptive Simpson halving) must agree on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominator variant of the radicand.
///
/// `Full` keeps every squared-axis factor; this is the variant that turns
/// the Liouville-form metric into an actually conformal chart. `Reduced`
/// omits the factor of the gap's own inner axis (the form in which the
/// integrals are often quoted) and does not yield a conformal chart. Both
/// are kept so the conformality report can state which one passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcIntegrand {
    Full,
    Reduced,
}

/// Which quadrature backend evaluates the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadBackend {
    GaussLegendre,
    AdaptiveSimpson,
}

/// Nodes and weights of the 64-point Gauss–Legendre rule on [-1, 1],
/// generated by Newton iteration on the Legendre recurrence at first use.
fn gauss_legendre_64() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = 64usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let legendre = |x: f64| {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            (p1, dp)
        };
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// ∫_a^b f via the 64-point Gauss–Legendre rule.
pub fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_64();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        s += w * f(mid + half * x);
    }
    s * half
}

/// ∫_a^b f via adaptive Simpson interval halving to tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let err = left + right - whole;
        if depth == 0 || err.abs() < 15.0 * tol {
            left + right + err / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// ½ ∫_lo^hi √( N(τ) / D(τ) ) dτ with numerator N = τ·|τ − λ| (or plain τ
/// when no slice offset applies) and denominator
/// D(τ) = (hi−τ)^{sing_hi} · (τ−lo)^{sing_lo} · other(τ),
/// where `other` is strictly positive on the closed gap. Absolute values
/// express that the caller's signed factors combine to a positive radicand;
/// the boundedness audit rejects wirings where they do not.
pub struct GapIntegral<'a> {
    pub lo: f64,
    pub hi: f64,
    pub shift: Option<f64>,
    pub sing_lo: bool,
    pub sing_hi: bool,
    pub other: &'a dyn Fn(f64) -> f64,
}

impl GapIntegral<'_> {
    /// Smooth θ-integrand after the sin² substitution; the surviving factor
    /// depends on which endpoint factors were present in D.
    pub fn theta_integrand(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let len = self.hi - self.lo;
        let tau = self.lo + len * s * s;
        let numer = match self.shift {
            Some(l) => tau * (tau - l).abs(),
            None => tau,
        };
        let core = (numer / (self.other)(tau)).sqrt();
        let jac = match (self.sing_lo, self.sing_hi) {
            (true, true) => 1.0,
            (false, true) => len.sqrt() * s,
            (true, false) => len.sqrt() * c,
            (false, false) => len * s * c,
        };
        core * jac
    }

    /// Evaluate after a boundedness audit of the substituted integrand.
    pub fn eval(&self, backend: QuadBackend) -> Result<f64> {
        if self.hi <= self.lo {
            return Ok(0.0);
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        for k in 0..=40 {
            let th = half_pi * k as f64 / 40.0;
            let v = self.theta_integrand(th);
            if !v.is_finite() || v.abs() > 1e12 {
                return Err(Error::DivergentIntegral(format!(
                    "substituted integrand {v:e} at θ = {th} on gap ({}, {})",
                    self.lo, self.hi
                )));
            }
        }
        let f = |th: f64| self.theta_integrand(th);
        Ok(match backend {
            QuadBackend::GaussLegendre => gauss_legendre(&f, 0.0, half_pi),
            QuadBackend::AdaptiveSimpson => adaptive_simpson(&f, 0.0, half_pi, 1e-13),
        })
    }
}

/// s₁ of the 3-axis ellipsoid chart: ½ ∫_{b²}^{a²} √(u/D(u)) du with
/// D = (a²−u)(u−b²)(u−c²) for `Full`, (a²−u)(u−c²) for `Reduced`.
pub fn arc_s1_ellipsoid3(
    axes: [f64; 3],
    variant: ArcIntegrand,
    backend: QuadBackend,
) -> Result<f64> {
    let [a, b, c] = axes;
    if !(a > b && b > c && c > 0.0) {
        return Err(Error::BadAxes(format!("need a > b > c > 0, got {axes:?}")));
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let other = move |u: f64| u - c2;
    GapIntegral {
        lo: b2,
        hi: a2,
        shift: None,
        sing_lo: variant == ArcIntegrand::Full,
        sing_hi: true,
        other: &other,
    }
    .eval(backend)
}

/// s₂ of the 3-axis ellipsoid chart over (c², b²): D = (a²−v)(b²−v)(v−c²)
/// for `Full`, (a²−v)(v−c²) for `Reduced`.
pub fn arc_s2_ellipsoid3(
    axes: [f64; 3],
    variant: ArcIntegrand,
    backend: QuadBackend,
) -> Result<f64> {
    let [a, b, c] = axes;
    if !(a > b && b > c && c > 0.0) {
        return Err(Error::BadAxes(format!("need a > b > c > 0, got {axes:?}")));
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let other = move |v: f64| a2 - v;
    GapIntegral {
        lo: c2,
        hi: b2,
        shift: None,
        sing_lo: true,
        sing_hi: variant == ArcIntegrand::Full,
        other: &other,
    }
    .eval(backend)
}

/// Arc integral over one gap of a four-distinct-axes surface's squared axes
/// with slice offset λ: ½ ∫ √(τ(τ−λ)/D) dτ, D the product of |squared-axis
/// − τ| factors (all four for `Full`; `Reduced` omits the inner-neighbor
/// factor of the gap, matching the three-factor form the slice integrals
/// are quoted with).
pub fn arc_slice_gap(
    sq_axes_desc: [f64; 4],
    gap: (f64, f64),
    lambda: f64,
    variant: ArcIntegrand,
    backend: QuadBackend,
) -> Result<f64> {
    let [a2, b2, c2, d2] = sq_axes_desc;
    let (lo, hi) = gap;
    if lambda >= lo && lambda <= hi {
        return Err(Error::DomainViolation(format!(
            "slice offset λ = {lambda} lies inside the integration gap ({lo}, {hi})"
        )));
    }
    // Bounded factors: every squared axis except the gap endpoints, and for
    // `Reduced` also except b² (the dropped factor) when b² is an endpoint
    // of an adjacent gap... the dropped factor is always b² by convention.
    let mut bounded: Vec<f64> = Vec::new();
    let mut sing_lo = false;
    let mut sing_hi = false;
    for &s in &[a2, b2, c2, d2] {
        if variant == ArcIntegrand::Reduced && s == b2 && (s == lo || s == hi) {
            // The quoted three-factor denominator omits |b² − τ|.
            continue;
        }
        if s == lo {
            sing_lo = true;
        } else if s == hi {
            sing_hi = true;
        } else {
            bounded.push(s);
        }
    }
    let other = move |t: f64| bounded.iter().map(|&s| (s - t).abs()).product::<f64>();
    GapIntegral {
        lo,
        hi,
        shift: Some(lambda),
        sing_lo,
        sing_hi,
        other: &other,
    }
    .eval(backend)
}

/// s₁(λ) over the top gap (b², a²).
pub fn arc_s1_slice(
    sq_axes_desc: [f64; 4],
    lambda: f64,
    variant: ArcIntegrand,
    backend: QuadBackend,
) -> Result<f64> {
    let [_, b2, _, _] = sq_axes_desc;
    arc_slice_gap(
        sq_axes_desc,
        (b2, sq_axes_desc[0]),
        lambda,
        variant,
        backend,
    )
}

/// s₂(λ) over the middle gap (c², b²).
pub fn arc_s2_slice(
    sq_axes_desc: [f64; 4],
    lambda: f64,
    variant: ArcIntegrand,
    backend: QuadBackend,
) -> Result<f64> {
    let [_, b2, c2, _] = sq_axes_desc;
    arc_slice_gap(sq_axes_desc, (c2, b2), lambda, variant, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_matches_simpson_on_smooth() {
        let f = |x: f64| (x * x).sin() + 1.0 / (2.0 + x);
        let a = gauss_legendre(&f, 0.0, 2.0);
        let b = adaptive_simpson(&f, 0.0, 2.0, 1e-13);
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn gap_integral_reproduces_a_known_closed_form() {
        // ½ ∫₁² √(τ/((2−τ)(τ−1)τ)) dτ = ½ ∫₁² dτ/√((2−τ)(τ−1)) = π/2.
        let other = |t: f64| t;
        let gi = GapIntegral {
            lo: 1.0,
            hi: 2.0,
            shift: None,
            sing_lo: true,
            sing_hi: true,
            other: &other,
        };
        let v = gi.eval(QuadBackend::GaussLegendre).unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn backends_agree_on_ellipsoid_integrals() {
        let axes = [2.0, 3f64.sqrt(), 2f64.sqrt()];
        for variant in [ArcIntegrand::Full, ArcIntegrand::Reduced] {
            let g1 = arc_s1_ellipsoid3(axes, variant, QuadBackend::GaussLegendre).unwrap();
            let s1 = arc_s1_ellipsoid3(axes, variant, QuadBackend::AdaptiveSimpson).unwrap();
            assert_relative_eq!(g1, s1, max_relative = 1e-8);
            let g2 = arc_s2_ellipsoid3(axes, variant, QuadBackend::GaussLegendre).unwrap();
            let s2 = arc_s2_ellipsoid3(axes, variant, QuadBackend::AdaptiveSimpson).unwrap();
            assert_relative_eq!(g2, s2, max_relative = 1e-8);
            assert!(g1 > 0.0 && g2 > 0.0, "{variant:?}: s1 = {g1}, s2 = {g2}");
        }
    }

    #[test]
    fn backends_agree_on_slice_integrals() {
        let sq = [4.0, 3.0, 2.0, 1.0];
        // λ in the low gap: the quoted s₁ (top gap) and s₂ (middle gap).
        for variant in [ArcIntegrand::Full, ArcIntegrand::Reduced] {
            let g1 = arc_s1_slice(sq, 1.5, variant, QuadBackend::GaussLegendre).unwrap();
            let s1 = arc_s1_slice(sq, 1.5, variant, QuadBackend::AdaptiveSimpson).unwrap();
            assert_relative_eq!(g1, s1, max_relative = 1e-8);
            let g2 = arc_s2_slice(sq, 1.5, variant, QuadBackend::GaussLegendre).unwrap();
            let s2 = arc_s2_slice(sq, 1.5, variant, QuadBackend::AdaptiveSimpson).unwrap();
            assert_relative_eq!(g2, s2, max_relative = 1e-8);
        }
        // λ in the high gap: the free gaps are the low and middle ones.
        for gap in [(1.0, 2.0), (2.0, 3.0)] {
            let g = arc_slice_gap(sq, gap, 3.5, ArcIntegrand::Full, QuadBackend::GaussLegendre)
                .unwrap();
            let s = arc_slice_gap(
                sq,
                gap,
                3.5,
                ArcIntegrand::Full,
                QuadBackend::AdaptiveSimpson,
            )
            .unwrap();
            assert_relative_eq!(g, s, max_relative = 1e-8);
            assert!(g > 0.0);
        }
        // A gap containing λ is rejected.
        assert!(arc_s1_slice(sq, 3.5, ArcIntegrand::Full, QuadBackend::GaussLegendre).is_err());
    }

    #[test]
    fn degenerate_interval_is_rejected_or_zero() {
        let r = arc_s1_ellipsoid3(
            [2.0, 2.0, 1.0],
            ArcIntegrand::Full,
            QuadBackend::GaussLegendre,
        );
        assert!(r.is_err());
    }

    #[test]
    fn reduced_radicand_positive_inside_gap() {
        // −u/((a²−u)(c²−u)) > 0 on (b², a²).
        let (a2, b2, c2) = (4.0, 3.0, 2.0);
        for k in 1..20 {
            let u = b2 + (a2 - b2) * k as f64 / 20.0;
            assert!(-u / ((a2 - u) * (c2 - u)) > 0.0);
        }
    }

    #[test]
    fn quoted_and_gap_forms_agree_for_reduced_s1() {
        // Direct adaptive integration of ½√(−u/((a²−u)(c²−u))) on a
        // slightly clipped interval approximates the substituted value.
        let axes = [2.0f64, 3f64.sqrt(), 2f64.sqrt()];
        let (a2, c2) = (4.0, 2.0);
        let f = |u: f64| 0.5 * (-u / ((a2 - u) * (c2 - u))).sqrt();
        let clipped = adaptive_simpson(&f, 3.0, 4.0 - 1e-12, 1e-11);
        let exact =
            arc_s1_ellipsoid3(axes, ArcIntegrand::Reduced, QuadBackend::GaussLegendre).unwrap();
        assert_relative_eq!(clipped, exact, max_relative = 1e-4);
    }
}
