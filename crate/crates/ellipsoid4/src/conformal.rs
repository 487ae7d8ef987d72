//! Conformal principal charts: rectangles in arclength coordinates whose
//! coordinate curves are principal lines, built for a 3-axis ellipsoid and
//! for the two-sphere-regime quartic slices of a four-distinct-axes surface.
//!
//! The construction inverts the arclength integrals of [`crate::quadrature`]
//! in the substituted θ variable (where the integrand is smooth), reflects
//! the base octant patch across the σ = 0 seams by sign flips, and sends
//! the four rectangle corners to the curvature-coincidence points.

use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::quadrature::{gauss_legendre, ArcIntegrand, GapIntegral, QuadBackend};
use crate::surface::{AxisClass, Ellipsoid4};

/// One grid node of a conformal chart.
#[derive(Debug, Clone, Copy)]
pub struct ConformalNode {
    /// Rectangle coordinates (σ1, σ2).
    pub sigma: [f64; 2],
    /// Inverted gap coordinates of the two varying directions.
    pub coords: [f64; 2],
    /// Ambient point (fourth component 0 for a 3-axis ellipsoid).
    pub ambient: Vector4<f64>,
}

/// A conformal principal chart over [−s1, s1] × [−s2, s2].
#[derive(Debug, Clone)]
pub struct ConformalChart2 {
    pub s1: f64,
    pub s2: f64,
    /// Slice parameter when built on a quartic slice.
    pub lambda: Option<f64>,
    pub n: usize,
    pub m: usize,
    /// Row-major n × m grid over (σ1, σ2).
    pub nodes: Vec<ConformalNode>,
    /// Closed-form corner images in σ-sign order (++, +−, −+, −−).
    pub corners: [Vector4<f64>; 4],
    /// max |F'| / mean(E', G') over interior nodes.
    pub max_offdiag_residual: f64,
    /// max |E' − G'| / mean(E', G') over interior nodes.
    pub max_conformality_residual: f64,
}

impl ConformalChart2 {
    pub fn node(&self, i: usize, j: usize) -> &ConformalNode {
        &self.nodes[i * self.m + j]
    }

    /// Grid corner ambient points in the same order as `corners`.
    pub fn grid_corners(&self) -> [Vector4<f64>; 4] {
        [
            self.node(self.n - 1, self.m - 1).ambient,
            self.node(self.n - 1, 0).ambient,
            self.node(0, self.m - 1).ambient,
            self.node(0, 0).ambient,
        ]
    }
}

/// Everything that distinguishes the three chart constructions.
struct RectPlan {
    /// Squared axes of every ambient coordinate.
    sq: Vec<f64>,
    /// Ambient dimension actually used (3 or 4).
    dim: usize,
    /// Fixed coordinate values entering the product formulas (the slice λ).
    fixed: Vec<f64>,
    /// Varying coordinate gaps (lo, hi), σ1 first.
    gaps: [(f64, f64); 2],
    /// For each varying coordinate: σ = 0 anchors at the hi end of the gap.
    anchor_hi: [bool; 2],
    /// Ambient coordinate index whose sign follows sign(σ1) / sign(σ2).
    flip: [usize; 2],
    /// Slice offset (None for the 3-axis ellipsoid).
    lambda: Option<f64>,
}

impl RectPlan {
    /// Denominator factors of the arclength radicand for varying gap k:
    /// all squared axes except the gap endpoints.
    fn gap_integral<'a>(&self, k: usize, other: &'a dyn Fn(f64) -> f64) -> GapIntegral<'a> {
        let (lo, hi) = self.gaps[k];
        GapIntegral {
            lo,
            hi,
            shift: self.lambda,
            sing_lo: true,
            sing_hi: true,
            other,
        }
    }

    fn other_factors(&self, k: usize) -> Vec<f64> {
        let (lo, hi) = self.gaps[k];
        self.sq
            .iter()
            .cloned()
            .filter(|&s| s != lo && s != hi)
            .collect()
    }

    /// Squared ambient coordinates and their jets in the two varying
    /// coordinates (jet variables 0 and 1). `coords` are the gap values.
    fn coordinate_jets(&self, coords: [f64; 2]) -> Vec<Jet3> {
        let c1 = Jet3::variable(coords[0], 0);
        let c2 = Jet3::variable(coords[1], 1);
        let mut out = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let sk = self.sq[k];
            let mut num = Jet3::constant(sk);
            num = num * (-c1 + sk);
            num = num * (-c2 + sk);
            for &f in &self.fixed {
                num = num.scale(sk - f);
            }
            let mut den = 1.0;
            for (l, &sl) in self.sq.iter().enumerate().take(self.dim) {
                if l != k {
                    den *= sk - sl;
                }
            }
            out.push(num.scale(1.0 / den));
        }
        out
    }

    /// Ambient point with sign control; squared coordinates are clamped at
    /// zero so boundary nodes evaluate cleanly.
    fn ambient(&self, coords: [f64; 2], signs: [f64; 2]) -> Vector4<f64> {
        let jets = self.coordinate_jets(coords);
        let mut p = Vector4::zeros();
        for k in 0..self.dim {
            p[k] = jets[k].val.max(0.0).sqrt();
        }
        for (s, &axis) in signs.iter().zip(&self.flip) {
            p[axis] *= s;
        }
        p
    }
}

/// Invert the partial arclength: find the gap coordinate whose σ-distance
/// from the anchor end is `target`.
fn invert_arclength(gi: &GapIntegral<'_>, anchor_hi: bool, total: f64, target: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if target <= 0.0 {
        let th = if anchor_hi { half_pi } else { 0.0 };
        let (lo, hi) = (gi.lo, gi.hi);
        return lo + (hi - lo) * th.sin().powi(2);
    }
    if target >= total {
        let th = if anchor_hi { 0.0 } else { half_pi };
        let (lo, hi) = (gi.lo, gi.hi);
        return lo + (hi - lo) * th.sin().powi(2);
    }
    let f = |theta: f64| {
        let part = if anchor_hi {
            gauss_legendre(&|t| gi.theta_integrand(t), theta, half_pi)
        } else {
            gauss_legendre(&|t| gi.theta_integrand(t), 0.0, theta)
        };
        part - target
    };
    // Monotone in θ (decreasing when anchored high); plain bisection.
    let (mut lo_t, mut hi_t) = (0.0, half_pi);
    let f_lo = f(lo_t);
    for _ in 0..64 {
        let mid = 0.5 * (lo_t + hi_t);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    let th = 0.5 * (lo_t + hi_t);
    gi.lo + (gi.hi - gi.lo) * th.sin().powi(2)
}

fn build_rect(
    plan: &RectPlan,
    n: usize,
    m: usize,
    corners: [Vector4<f64>; 4],
) -> Result<ConformalChart2> {
    assert!(n >= 3 && m >= 3, "grid must have at least 3 nodes per side");
    let other0_f = plan.other_factors(0);
    let other1_f = plan.other_factors(1);
    let other0 = move |t: f64| other0_f.iter().map(|&s| (s - t).abs()).product::<f64>();
    let other1 = move |t: f64| other1_f.iter().map(|&s| (s - t).abs()).product::<f64>();
    let gi0 = plan.gap_integral(0, &other0);
    let gi1 = plan.gap_integral(1, &other1);
    let s1 = gi0.eval(QuadBackend::GaussLegendre)?;
    let s2 = gi1.eval(QuadBackend::GaussLegendre)?;

    // Distinct |σ| values per axis; invert once each.
    let mut coord1 = vec![0.0; n];
    for (i, c) in coord1.iter_mut().enumerate() {
        let sigma = s1 * (2.0 * i as f64 / (n - 1) as f64 - 1.0);
        *c = invert_arclength(&gi0, plan.anchor_hi[0], s1, sigma.abs());
    }
    let mut coord2 = vec![0.0; m];
    for (j, c) in coord2.iter_mut().enumerate() {
        let sigma = s2 * (2.0 * j as f64 / (m - 1) as f64 - 1.0);
        *c = invert_arclength(&gi1, plan.anchor_hi[1], s2, sigma.abs());
    }

    let mut nodes = Vec::with_capacity(n * m);
    let mut max_off = 0.0f64;
    let mut max_conf = 0.0f64;
    for i in 0..n {
        let sig1 = s1 * (2.0 * i as f64 / (n - 1) as f64 - 1.0);
        for j in 0..m {
            let sig2 = s2 * (2.0 * j as f64 / (m - 1) as f64 - 1.0);
            let coords = [coord1[i], coord2[j]];
            let ambient = plan.ambient(coords, [sig1.signum(), sig2.signum()]);
            nodes.push(ConformalNode {
                sigma: [sig1, sig2],
                coords,
                ambient,
            });
            // Interior pullback-metric audit through the coordinate jets.
            if i > 0 && i + 1 < n && j > 0 && j + 1 < m && sig1 != 0.0 && sig2 != 0.0 {
                let jets = plan.coordinate_jets(coords);
                // dψ/dcoord from d(x²)/dcoord: dx/dc = (x²)' / (2x).
                let mut guu = 0.0;
                let mut gvv = 0.0;
                let mut guv = 0.0;
                for jet in &jets {
                    let x = jet.val.max(1e-300);
                    let dxu = jet.grad[0] / (2.0 * x.sqrt());
                    let dxv = jet.grad[1] / (2.0 * x.sqrt());
                    guu += dxu * dxu;
                    gvv += dxv * dxv;
                    guv += dxu * dxv;
                }
                // dσ/dcoord is the arclength integrand itself.
                let dsig1 = 0.5
                    * (coords[0] * plan.lambda.map_or(1.0, |l| (coords[0] - l).abs())
                        / (other0(coords[0])
                            * (plan.gaps[0].1 - coords[0])
                            * (coords[0] - plan.gaps[0].0)))
                        .sqrt();
                let dsig2 = 0.5
                    * (coords[1] * plan.lambda.map_or(1.0, |l| (coords[1] - l).abs())
                        / (other1(coords[1])
                            * (plan.gaps[1].1 - coords[1])
                            * (coords[1] - plan.gaps[1].0)))
                        .sqrt();
                let e = guu / (dsig1 * dsig1);
                let g = gvv / (dsig2 * dsig2);
                let f = guv / (dsig1 * dsig2);
                let mean = 0.5 * (e + g);
                max_off = max_off.max(f.abs() / mean);
                max_conf = max_conf.max((e - g).abs() / mean);
            }
        }
    }
    Ok(ConformalChart2 {
        s1,
        s2,
        lambda: plan.lambda,
        n,
        m,
        nodes,
        corners,
        max_offdiag_residual: max_off,
        max_conformality_residual: max_conf,
    })
}

/// Closed-form curvature-coincidence points of the 3-axis ellipsoid in the
/// σ-sign order (++, +−, −+, −−): (±a√((a²−b²)/(a²−c²)), 0, ±c√((b²−c²)/(a²−c²))).
pub fn ellipsoid3_umbilics(axes: [f64; 3]) -> [Vector4<f64>; 4] {
    let [a, b, c] = axes;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let x = a * ((a2 - b2) / (a2 - c2)).sqrt();
    let z = c * ((b2 - c2) / (a2 - c2)).sqrt();
    [
        Vector4::new(x, 0.0, z, 0.0),
        Vector4::new(x, 0.0, -z, 0.0),
        Vector4::new(-x, 0.0, z, 0.0),
        Vector4::new(-x, 0.0, -z, 0.0),
    ]
}

/// Conformal principal chart of the 3-axis ellipsoid x²/a² + y²/b² + z²/c²,
/// a > b > c, covering the half y ≥ 0 (embedded in R⁴ with fourth
/// coordinate 0). Corners map to the four umbilic points.
pub fn conformal_chart_ellipsoid3(axes: [f64; 3], n: usize, m: usize) -> Result<ConformalChart2> {
    let [a, b, c] = axes;
    if !(a > b && b > c && c > 0.0) {
        return Err(Error::BadAxes(format!("need a > b > c > 0, got {axes:?}")));
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let plan = RectPlan {
        sq: vec![a2, b2, c2],
        dim: 3,
        fixed: vec![],
        gaps: [(b2, a2), (c2, b2)],
        anchor_hi: [true, false],
        flip: [0, 2],
        lambda: None,
    };
    build_rect(&plan, n, m, ellipsoid3_umbilics(axes))
}

/// Closed-form corner images of the slice chart: where the slice meets the
/// curvature-coincidence curves. σ-sign order (++, +−, −+, −−).
pub fn slice_corner_points(surface: &Ellipsoid4, lambda: f64) -> Result<[Vector4<f64>; 4]> {
    if surface.class() != AxisClass::AllDistinct {
        return Err(Error::WrongAxisClass {
            expected: "four distinct axes",
            got: surface.class(),
        });
    }
    let [a, b, c, d] = surface.canonical_axes();
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    if lambda > d2 && lambda < c2 {
        // Corners at t = v = b², u = λ: on the curves where the two lowest
        // curvatures coincide (y = 0, w > 0).
        let x = (a2 * (a2 - lambda) * (a2 - b2) / ((a2 - c2) * (a2 - d2))).sqrt();
        let z = (c2 * (c2 - lambda) * (b2 - c2) / ((a2 - c2) * (c2 - d2))).sqrt();
        let w = (d2 * (lambda - d2) * (b2 - d2) / ((a2 - d2) * (c2 - d2))).sqrt();
        Ok([
            surface.canon_point_to_user([x, 0.0, z, w]),
            surface.canon_point_to_user([x, 0.0, -z, w]),
            surface.canon_point_to_user([-x, 0.0, z, w]),
            surface.canon_point_to_user([-x, 0.0, -z, w]),
        ])
    } else if lambda > b2 && lambda < a2 {
        // Corners at u = v = c², t = λ: on the curves where the two highest
        // curvatures coincide (z = 0, x > 0).
        let x = (a2 * (a2 - c2) * (a2 - lambda) / ((a2 - b2) * (a2 - d2))).sqrt();
        let y = (b2 * (b2 - c2) * (lambda - b2) / ((a2 - b2) * (b2 - d2))).sqrt();
        let w = (d2 * (c2 - d2) * (lambda - d2) / ((a2 - d2) * (b2 - d2))).sqrt();
        Ok([
            surface.canon_point_to_user([x, y, 0.0, w]),
            surface.canon_point_to_user([x, -y, 0.0, w]),
            surface.canon_point_to_user([x, y, 0.0, -w]),
            surface.canon_point_to_user([x, -y, 0.0, -w]),
        ])
    } else if lambda > c2 && lambda < b2 {
        Err(Error::WrongSignature { lambda })
    } else {
        Err(Error::DomainViolation(format!(
            "λ = {lambda} outside the confocal gaps"
        )))
    }
}

/// Conformal principal chart of the quartic slice at λ in a two-sphere
/// regime. Errors with `WrongSignature` in the torus regime.
///
/// The grid is built in canonical slots and mapped back to user slots; the
/// covered patch is { y ≥ 0, w > 0 } of the slice for λ below the middle
/// gap, and { z ≥ 0, x > 0 } above it.
pub fn conformal_chart_slice(
    surface: &Ellipsoid4,
    lambda: f64,
    n: usize,
    m: usize,
) -> Result<ConformalChart2> {
    if surface.class() != AxisClass::AllDistinct {
        return Err(Error::WrongAxisClass {
            expected: "four distinct axes",
            got: surface.class(),
        });
    }
    let [a, b, c, d] = surface.canonical_axes();
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let corners = slice_corner_points(surface, lambda)?;
    let plan = if lambda > d2 && lambda < c2 {
        RectPlan {
            sq: vec![a2, b2, c2, d2],
            dim: 4,
            fixed: vec![lambda],
            gaps: [(b2, a2), (c2, b2)],
            anchor_hi: [true, false],
            flip: [0, 2],
            lambda: Some(lambda),
        }
    } else {
        RectPlan {
            sq: vec![a2, b2, c2, d2],
            dim: 4,
            fixed: vec![lambda],
            gaps: [(d2, c2), (c2, b2)],
            anchor_hi: [false, true],
            flip: [3, 1],
            lambda: Some(lambda),
        }
    };
    let mut chart = build_rect(&plan, n, m, corners)?;
    // Map grid ambient points from canonical to user slots.
    for node in &mut chart.nodes {
        let canon = [
            node.ambient[0],
            node.ambient[1],
            node.ambient[2],
            node.ambient[3],
        ];
        node.ambient = surface.canon_point_to_user(canon);
    }
    Ok(chart)
}

/// Max distance between the grid's corner nodes and the closed-form corner
/// images.
pub fn corner_residual(chart: &ConformalChart2) -> f64 {
    let got = chart.grid_corners();
    let mut worst = 0.0f64;
    for (g, c) in got.iter().zip(&chart.corners) {
        worst = worst.max((g - c).norm());
    }
    worst
}

/// Conformality audit of the reduced-denominator arclength variant: the
/// rectangle built on it is *not* conformal. Returns (full residual,
/// reduced residual) on the 3-axis ellipsoid so callers can report which
/// integrand satisfies the property.
pub fn integrand_conformality_comparison(axes: [f64; 3], n: usize) -> Result<(f64, f64)> {
    let full = conformal_chart_ellipsoid3(axes, n, n)?.max_conformality_residual;

    // Rebuild with the reduced integrand: same construction, but σ is the
    // reduced arclength, so dσ/dcoord omits the middle factor.
    let [a, b, c] = axes;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let plan = RectPlan {
        sq: vec![a2, b2, c2],
        dim: 3,
        fixed: vec![],
        gaps: [(b2, a2), (c2, b2)],
        anchor_hi: [true, false],
        flip: [0, 2],
        lambda: None,
    };
    let o0 = move |u: f64| u - c2;
    let o1 = move |v: f64| a2 - v;
    let gi0 = GapIntegral {
        lo: b2,
        hi: a2,
        shift: None,
        sing_lo: false,
        sing_hi: true,
        other: &o0,
    };
    let gi1 = GapIntegral {
        lo: c2,
        hi: b2,
        shift: None,
        sing_lo: true,
        sing_hi: false,
        other: &o1,
    };
    let s1 = gi0.eval(QuadBackend::GaussLegendre)?;
    let s2 = gi1.eval(QuadBackend::GaussLegendre)?;
    let mut worst = 0.0f64;
    for i in 1..(n - 1) {
        let sig1 = s1 * (2.0 * i as f64 / (n - 1) as f64 - 1.0);
        let u = invert_arclength(&gi0, true, s1, sig1.abs());
        for j in 1..(n - 1) {
            let sig2 = s2 * (2.0 * j as f64 / (n - 1) as f64 - 1.0);
            let v = invert_arclength(&gi1, false, s2, sig2.abs());
            if sig1 == 0.0 || sig2 == 0.0 {
                continue;
            }
            let jets = plan.coordinate_jets([u, v]);
            let mut guu = 0.0;
            let mut gvv = 0.0;
            for jet in &jets {
                let x = jet.val.max(1e-300);
                guu += jet.grad[0] * jet.grad[0] / (4.0 * x);
                gvv += jet.grad[1] * jet.grad[1] / (4.0 * x);
            }
            let dsig1 = 0.5 * (u / ((a2 - u) * (u - c2))).sqrt();
            let dsig2 = 0.5 * (v / ((a2 - v) * (v - c2))).sqrt();
            let e = guu / (dsig1 * dsig1);
            let g = gvv / (dsig2 * dsig2);
            worst = worst.max((e - g).abs() / (0.5 * (e + g)));
        }
    }
    Ok((full, worst))
}

/// Which arclength integrand yields the conformal chart, as measured.
pub fn conformal_variant_report(axes: [f64; 3]) -> Result<(ArcIntegrand, f64, f64)> {
    let (full, reduced) = integrand_conformality_comparison(axes, 21)?;
    let winner = if full < reduced {
        ArcIntegrand::Full
    } else {
        ArcIntegrand::Reduced
    };
    Ok((winner, full, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ellipsoid3_chart_is_conformal_with_correct_corners() {
        let axes = [2.0, 3f64.sqrt(), 2f64.sqrt()];
        let chart = conformal_chart_ellipsoid3(axes, 21, 21).unwrap();
        assert!(
            chart.max_conformality_residual < 1e-6,
            "{}",
            chart.max_conformality_residual
        );
        assert!(
            chart.max_offdiag_residual < 1e-6,
            "{}",
            chart.max_offdiag_residual
        );
        // Corner images (±√2, 0, ±1).
        let expect = ellipsoid3_umbilics(axes);
        assert_relative_eq!(expect[0][0], 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(expect[0][2], 1.0, max_relative = 1e-14);
        assert!(
            corner_residual(&chart) < 1e-8,
            "{}",
            corner_residual(&chart)
        );
    }

    #[test]
    fn every_grid_node_is_on_the_ellipsoid() {
        let axes = [2.0, 3f64.sqrt(), 2f64.sqrt()];
        let chart = conformal_chart_ellipsoid3(axes, 15, 15).unwrap();
        for node in &chart.nodes {
            let p = node.ambient;
            let q = p[0] * p[0] / 4.0 + p[1] * p[1] / 3.0 + p[2] * p[2] / 2.0;
            assert!(
                (q - 1.0).abs() < 1e-10,
                "off-surface node, |Q-1| = {:e}",
                (q - 1.0).abs()
            );
            assert!(p[1] >= 0.0, "chart must stay in the y ≥ 0 half");
        }
    }

    #[test]
    fn reduced_variant_fails_conformality() {
        let (winner, full, reduced) =
            conformal_variant_report([2.0, 3f64.sqrt(), 2f64.sqrt()]).unwrap();
        assert_eq!(winner, ArcIntegrand::Full);
        assert!(full < 1e-8, "full-denominator residual {full}");
        assert!(
            reduced > 1e-2,
            "reduced variant should fail clearly, got {reduced}"
        );
    }

    #[test]
    fn slice_charts_in_both_sphere_regimes() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        for lambda in [1.5, 3.5] {
            let chart = conformal_chart_slice(&e, lambda, 15, 15).unwrap();
            assert!(
                chart.max_conformality_residual < 1e-6,
                "λ = {lambda}: residual {}",
                chart.max_conformality_residual
            );
            assert!(corner_residual(&chart) < 1e-8, "λ = {lambda}");
            // Corner images are curvature-coincidence points: the bottom
            // pair coincides below the middle gap, the top pair above it.
            let want = if lambda < 2.0 {
                crate::curvature::DegeneracyTag::P12
            } else {
                crate::curvature::DegeneracyTag::P23
            };
            for c in chart.corners {
                let pt = crate::surface::SurfacePoint::new(&e, c).unwrap();
                assert_eq!(crate::curvature::classify_point(&e, &pt, 1e-6), want);
            }
            // Every node on the surface and on the slice.
            for node in &chart.nodes {
                let q = e.quadric(&node.ambient);
                assert!((q - 1.0).abs() < 1e-10);
                let s = crate::confocal::confocal_quadric(&e, &node.ambient, lambda).unwrap();
                assert!(
                    (s - 1.0).abs() < 1e-9,
                    "λ = {lambda}: slice residual {:e}",
                    (s - 1.0).abs()
                );
            }
        }
    }

    #[test]
    fn torus_regime_is_rejected() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        assert!(matches!(
            conformal_chart_slice(&e, 2.5, 9, 9),
            Err(Error::WrongSignature { .. })
        ));
    }
}
