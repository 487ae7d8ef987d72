//! Umbilic points and partially umbilic curves for every axis-degeneracy
//! class, with sampled-curve verification reports.
//!
//! Curves are constructed from closed forms in the canonical slot
//! arrangement and mapped back to user slots; their kind tags are measured
//! from the curvature gaps rather than assumed, since several of the
//! published labels disagree with the computed multiplicities.

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::cubic::discriminant_terms;
use crate::curvature::{classify_gaps, classify_point, principal_curvatures, DegeneracyTag};
use crate::error::Result;
use crate::forms::pencil_cubic;
use crate::surface::{AxisClass, Ellipsoid4, SurfacePoint, EPS_DEG};

/// Kind of a singular locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusKind {
    UmbilicPoint,
    /// Closed curve (or open arc) on which the two lowest curvatures agree.
    P12Curve,
    /// Closed curve (or open arc) on which the two highest curvatures agree.
    P23Curve,
    /// A closed curve carrying both umbilic points and partially umbilic
    /// arcs (the binding ellipse of the doubled-middle-pair surface).
    MixedCurve,
}

/// Geometry payload of a singular locus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LocusGeometry {
    Points(Vec<[f64; 4]>),
    Curve(ClosedCurve),
    /// The whole surface (totally umbilic sphere).
    FullSurface,
    /// The open complement of finitely many points (triple-axis surfaces,
    /// where the partially umbilic set is two-dimensional).
    SurfaceMinusPoints(Vec<[f64; 4]>),
}

/// An ordered sampling of a curve in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedCurve {
    pub samples: Vec<[f64; 4]>,
    pub closed: bool,
    /// Human-readable provenance of the construction.
    pub chart: String,
}

impl ClosedCurve {
    pub fn points(&self) -> Vec<Vector4<f64>> {
        self.samples
            .iter()
            .map(|s| Vector4::new(s[0], s[1], s[2], s[3]))
            .collect()
    }

    /// Max gap between consecutive samples (and the seam for closed curves).
    pub fn max_spacing(&self) -> f64 {
        let pts = self.points();
        let mut worst = 0.0f64;
        for w in pts.windows(2) {
            worst = worst.max((w[0] - w[1]).norm());
        }
        if self.closed && pts.len() > 1 {
            worst = worst.max((pts[0] - pts[pts.len() - 1]).norm());
        }
        worst
    }
}

/// A singular locus with measured kind and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLocus {
    pub kind: LocusKind,
    pub geometry: LocusGeometry,
    pub provenance: String,
}

/// Closed-form umbilic points per axis class.
pub fn umbilic_points(surface: &Ellipsoid4) -> Vec<SingularLocus> {
    let canon = surface.canonical_axes();
    match surface.class() {
        AxisClass::AllEqual => vec![SingularLocus {
            kind: LocusKind::UmbilicPoint,
            geometry: LocusGeometry::FullSurface,
            provenance: "totally umbilic sphere".into(),
        }],
        AxisClass::ThreeEqualLast | AxisClass::ThreeEqualFirst => {
            let b = canon[3];
            let pts = vec![
                surface.canon_point_to_user([0.0, 0.0, 0.0, b]).into(),
                surface.canon_point_to_user([0.0, 0.0, 0.0, -b]).into(),
            ];
            vec![SingularLocus {
                kind: LocusKind::UmbilicPoint,
                geometry: LocusGeometry::Points(pts),
                provenance: "poles of the odd axis".into(),
            }]
        }
        AxisClass::PairMiddle => {
            // cos²u = (a² − c²)/(a² − b²) on the binding ellipse.
            let [a, b, c, _] = canon;
            let cos2 = (a * a - c * c) / (a * a - b * b);
            let (cu, su) = (cos2.sqrt(), (1.0 - cos2).sqrt());
            let mut pts = Vec::with_capacity(4);
            for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                pts.push(
                    surface
                        .canon_point_to_user([sx * a * cu, sy * b * su, 0.0, 0.0])
                        .into(),
                );
            }
            vec![SingularLocus {
                kind: LocusKind::UmbilicPoint,
                geometry: LocusGeometry::Points(pts),
                provenance: "four umbilics on the binding ellipse".into(),
            }]
        }
        _ => Vec::new(),
    }
}

fn circle_samples(
    surface: &Ellipsoid4,
    f: impl Fn(f64) -> [f64; 4],
    n: usize,
    closed: bool,
    range: (f64, f64),
) -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(n + 1);
    let count = if closed { n } else { n + 1 };
    for i in 0..count {
        let s = i as f64 / n as f64;
        let t = range.0 + (range.1 - range.0) * s;
        out.push(surface.canon_point_to_user(f(t)).into());
    }
    if closed {
        out.push(out[0]);
    }
    out
}

/// Measure a curve's kind from the curvature gaps at a probe sample.
fn measured_kind(surface: &Ellipsoid4, samples: &[[f64; 4]]) -> LocusKind {
    let probe = samples[samples.len() / 3];
    let p = Vector4::new(probe[0], probe[1], probe[2], probe[3]);
    let point = SurfacePoint {
        ambient: surface.project(&p),
    };
    match classify_point(surface, &point, EPS_DEG) {
        DegeneracyTag::P12 => LocusKind::P12Curve,
        DegeneracyTag::P23 => LocusKind::P23Curve,
        DegeneracyTag::Umbilic => LocusKind::UmbilicPoint,
        DegeneracyTag::Regular => LocusKind::MixedCurve,
    }
}

/// Partially umbilic curves per axis class, sampled at spacing ≈ h.
///
/// Triple-axis classes return a symbolic surface-minus-points descriptor
/// (their partially umbilic set is two-dimensional and is not a curve).
pub fn partially_umbilic_curves(surface: &Ellipsoid4, h: f64) -> Result<Vec<SingularLocus>> {
    assert!(h > 0.0, "resolution must be positive");
    let canon = surface.canonical_axes();
    let n_for = |length: f64| ((length / h).ceil() as usize).max(16);
    let tau = std::f64::consts::TAU;
    let mut out = Vec::new();
    match surface.class() {
        AxisClass::AllEqual => {}
        AxisClass::ThreeEqualLast | AxisClass::ThreeEqualFirst => {
            let b = canon[3];
            let pts = vec![
                surface.canon_point_to_user([0.0, 0.0, 0.0, b]).into(),
                surface.canon_point_to_user([0.0, 0.0, 0.0, -b]).into(),
            ];
            out.push(SingularLocus {
                kind: LocusKind::P12Curve,
                geometry: LocusGeometry::SurfaceMinusPoints(pts),
                provenance: "entire surface minus the two umbilics (2-dimensional set)".into(),
            });
        }
        AxisClass::TwoPairs => {
            let [a, _, b, _] = canon;
            for (r, plane, name) in [
                (a, [0usize, 1], "large rotation circle"),
                (b, [2, 3], "small rotation circle"),
            ] {
                let f = |t: f64| {
                    let mut p = [0.0; 4];
                    p[plane[0]] = r * t.cos();
                    p[plane[1]] = r * t.sin();
                    p
                };
                let samples = circle_samples(surface, f, n_for(tau * r), true, (0.0, tau));
                let kind = measured_kind(surface, &samples);
                out.push(SingularLocus {
                    kind,
                    geometry: LocusGeometry::Curve(ClosedCurve {
                        samples,
                        closed: true,
                        chart: name.into(),
                    }),
                    provenance: name.into(),
                });
            }
        }
        AxisClass::PairLow | AxisClass::PairHigh => {
            let [a, b, c, _] = canon;
            // Binding ellipse through the distinct-axes plane.
            let f = |t: f64| [a * t.cos(), b * t.sin(), 0.0, 0.0];
            let samples = circle_samples(surface, f, n_for(tau * a), true, (0.0, tau));
            let kind = measured_kind(surface, &samples);
            out.push(SingularLocus {
                kind,
                geometry: LocusGeometry::Curve(ClosedCurve {
                    samples,
                    closed: true,
                    chart: "binding ellipse".into(),
                }),
                provenance: "binding ellipse in the distinct-axes plane".into(),
            });
            // The two rotation circles.
            let (off_idx, off_val, rho) = if surface.class() == AxisClass::PairLow {
                // circles at x = ±a√((a²−b²)/(a²−c²)), radius c√((b²−c²)/(a²−c²))
                (
                    0usize,
                    a * ((a * a - b * b) / (a * a - c * c)).sqrt(),
                    c * ((b * b - c * c) / (a * a - c * c)).sqrt(),
                )
            } else {
                // circles at y = ±b√((a²−b²)/(c²−b²)), radius c√((c²−a²)/(c²−b²))
                (
                    1usize,
                    b * ((a * a - b * b) / (c * c - b * b)).sqrt(),
                    c * ((c * c - a * a) / (c * c - b * b)).sqrt(),
                )
            };
            for sign in [1.0, -1.0] {
                let f = |t: f64| {
                    let mut p = [0.0; 4];
                    p[off_idx] = sign * off_val;
                    p[2] = rho * t.cos();
                    p[3] = rho * t.sin();
                    p
                };
                let samples = circle_samples(surface, f, n_for(tau * rho), true, (0.0, tau));
                let kind = measured_kind(surface, &samples);
                let name = format!(
                    "rotation circle at coordinate {} = {:+.6}",
                    off_idx,
                    sign * off_val
                );
                out.push(SingularLocus {
                    kind,
                    geometry: LocusGeometry::Curve(ClosedCurve {
                        samples,
                        closed: true,
                        chart: "rotation circle".into(),
                    }),
                    provenance: name,
                });
            }
        }
        AxisClass::PairMiddle => {
            // Four open arcs of the binding ellipse between the umbilics.
            let [a, b, c, _] = canon;
            let u_plus = ((a * a - c * c) / (a * a - b * b)).sqrt().acos();
            let cuts = [
                u_plus,
                std::f64::consts::PI - u_plus,
                std::f64::consts::PI + u_plus,
                tau - u_plus,
                tau + u_plus,
            ];
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                // Open arcs: shrink away from the umbilic endpoints far
                // enough to keep the third curvature separated, close enough
                // that end samples still classify partially umbilic.
                let pad = 5e-4 * (hi - lo);
                let f = |t: f64| [a * t.cos(), b * t.sin(), 0.0, 0.0];
                let samples = circle_samples(
                    surface,
                    f,
                    n_for(a * (hi - lo)),
                    false,
                    (lo + pad, hi - pad),
                );
                let kind = measured_kind(surface, &samples);
                out.push(SingularLocus {
                    kind,
                    geometry: LocusGeometry::Curve(ClosedCurve {
                        samples,
                        closed: false,
                        chart: "binding ellipse arc".into(),
                    }),
                    provenance: format!("arc of the binding ellipse, angle ({lo:.6}, {hi:.6})"),
                });
            }
        }
        AxisClass::AllDistinct => {
            let [a, b, c, d] = canon;
            let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
            let (r, s, t) = (a2 - b2, b2 - c2, c2 - d2);
            // Ellipse pair in the z = 0 hyperplane (graph chart over w):
            // s(r+s+t)u² + (t+s)(r+s)v² = s(r+s), ambient (au, bv, 0, ±dΔ).
            let u_max = ((r + s) / (r + s + t)).sqrt();
            let v_max = (s / (s + t)).sqrt();
            for w_sign in [1.0, -1.0] {
                let f = |phi: f64| {
                    let (u, v) = (u_max * phi.cos(), v_max * phi.sin());
                    let delta = (1.0 - u * u - v * v).max(0.0).sqrt();
                    [a * u, b * v, 0.0, w_sign * d * delta]
                };
                let samples = circle_samples(surface, f, n_for(tau * a), true, (0.0, tau));
                let kind = measured_kind(surface, &samples);
                out.push(SingularLocus {
                    kind,
                    geometry: LocusGeometry::Curve(ClosedCurve {
                        samples,
                        closed: true,
                        chart: format!("graph chart over the fourth axis, sign {w_sign:+}"),
                    }),
                    provenance: format!("closed curve in the third-axis hyperplane, w {w_sign:+}"),
                });
            }
            // Ellipse pair in the y = 0 hyperplane (graph chart over x):
            // (t+s)(r+s)u² + s(r+s+t)w² = s(t+s), ambient (±aΔ, 0, cu, dw).
            let u2_max = (s / (r + s)).sqrt();
            let w2_max = ((t + s) / (r + s + t)).sqrt();
            for x_sign in [1.0, -1.0] {
                let f = |phi: f64| {
                    let (u, w) = (u2_max * phi.cos(), w2_max * phi.sin());
                    let delta = (1.0 - u * u - w * w).max(0.0).sqrt();
                    [x_sign * a * delta, 0.0, c * u, d * w]
                };
                let samples = circle_samples(surface, f, n_for(tau * a), true, (0.0, tau));
                let kind = measured_kind(surface, &samples);
                out.push(SingularLocus {
                    kind,
                    geometry: LocusGeometry::Curve(ClosedCurve {
                        samples,
                        closed: true,
                        chart: format!("graph chart over the first axis, sign {x_sign:+}"),
                    }),
                    provenance: format!("closed curve in the second-axis hyperplane, x {x_sign:+}"),
                });
            }
        }
    }
    Ok(out)
}

/// Verification report for a sampled locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    /// Max over samples of the coincident-pair curvature gap.
    pub max_pair_gap: f64,
    /// Min over samples of the separation of the third curvature.
    pub min_third_separation: f64,
    /// Max over samples of |discriminant| / (largest discriminant term).
    pub max_discriminant_residual: f64,
    /// Whether every sample classified consistently with the locus kind.
    pub tags_consistent: bool,
    pub pass: bool,
}

/// Check a sampled locus: the coincident pair must stay within `eps_deg`
/// (absolute, curvature units), the third curvature must stay separated by
/// more than 10·eps_deg, and the scaled pencil discriminant must vanish.
pub fn verify_locus(surface: &Ellipsoid4, locus: &SingularLocus, eps_deg: f64) -> LocusReport {
    let samples: Vec<[f64; 4]> = match &locus.geometry {
        LocusGeometry::Points(p) => p.clone(),
        LocusGeometry::Curve(c) => c.samples.clone(),
        LocusGeometry::FullSurface | LocusGeometry::SurfaceMinusPoints(_) => {
            // Symbolic loci: probe a handful of chart samples.
            let chart = crate::chart::Chart::default_for(surface);
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
            (0..64)
                .map(|_| {
                    let p = chart.sample_interior(&mut rng, 0.05);
                    chart.eval(p).unwrap().into()
                })
                .collect()
        }
    };
    let mut max_pair_gap = 0.0f64;
    let mut min_third = f64::INFINITY;
    let mut max_disc = 0.0f64;
    let mut tags_ok = true;
    for s in &samples {
        let p = Vector4::new(s[0], s[1], s[2], s[3]);
        let point = SurfacePoint {
            ambient: surface.project(&p),
        };
        let k = principal_curvatures(surface, &point);
        let (g12, g23) = (k[1] - k[0], k[2] - k[1]);
        let tag = classify_gaps(k, eps_deg);
        match locus.kind {
            LocusKind::P12Curve => {
                max_pair_gap = max_pair_gap.max(g12);
                min_third = min_third.min(g23);
                tags_ok &= tag == DegeneracyTag::P12;
            }
            LocusKind::P23Curve => {
                max_pair_gap = max_pair_gap.max(g23);
                min_third = min_third.min(g12);
                tags_ok &= tag == DegeneracyTag::P23;
            }
            LocusKind::UmbilicPoint => {
                max_pair_gap = max_pair_gap.max(g12.max(g23));
                min_third = 0.0;
                tags_ok &= tag == DegeneracyTag::Umbilic;
            }
            LocusKind::MixedCurve => {
                max_pair_gap = max_pair_gap.max(g12.min(g23));
                min_third = min_third.min(g12.max(g23));
                tags_ok &= tag != DegeneracyTag::Regular;
            }
        }
        // Scaled discriminant of the ambient pencil cubic.
        let (shape, _) = crate::curvature::ambient_shape_operator(surface, &point.ambient);
        let cubic = pencil_cubic(&shape, &nalgebra::Matrix3::identity());
        if let Ok(norm) = cubic.normalize() {
            let (disc, scale) = discriminant_terms(norm.a, norm.b, norm.c);
            if scale > 0.0 {
                max_disc = max_disc.max(disc.abs() / scale);
            }
        }
    }
    if min_third == f64::INFINITY {
        min_third = 0.0;
    }
    let pass = match locus.kind {
        LocusKind::UmbilicPoint => max_pair_gap < eps_deg && tags_ok,
        _ => max_pair_gap < eps_deg && min_third > 10.0 * eps_deg && tags_ok,
    };
    LocusReport {
        max_pair_gap,
        min_third_separation: min_third,
        max_discriminant_residual: max_disc,
        tags_consistent: tags_ok,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn triple_axis_umbilics_are_the_poles() {
        let e = Ellipsoid4::new([2.0, 2.0, 2.0, 1.0]).unwrap();
        let u = umbilic_points(&e);
        assert_eq!(u.len(), 1);
        let LocusGeometry::Points(pts) = &u[0].geometry else {
            panic!()
        };
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0], [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(pts[1], [0.0, 0.0, 0.0, -1.0]);
        // Odd axis first: umbilics on the first coordinate axis.
        let e = Ellipsoid4::new([1.0, 2.0, 2.0, 2.0]).unwrap();
        let u = umbilic_points(&e);
        let LocusGeometry::Points(pts) = &u[0].geometry else {
            panic!()
        };
        assert_eq!(pts[0], [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn middle_pair_has_four_umbilics_at_the_closed_form() {
        // Slot axes (2, √2, √2, 1): canonical (2, 1, √2, √2); the umbilics
        // land on the first and fourth user slots.
        let e = Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let u = umbilic_points(&e);
        let LocusGeometry::Points(pts) = &u[0].geometry else {
            panic!()
        };
        assert_eq!(pts.len(), 4);
        let x = 2.0 * (2.0f64 / 3.0).sqrt();
        let y = (1.0f64 / 3.0).sqrt();
        assert_relative_eq!(pts[0][0], x, max_relative = 1e-14);
        assert_relative_eq!(pts[0][3], y, max_relative = 1e-14);
        assert_eq!(pts[0][1], 0.0);
        assert_eq!(pts[0][2], 0.0);
        // All four classify umbilic.
        for p in pts {
            let sp = SurfacePoint::new(&e, Vector4::new(p[0], p[1], p[2], p[3])).unwrap();
            assert_eq!(classify_point(&e, &sp, EPS_DEG), DegeneracyTag::Umbilic);
        }
    }

    #[test]
    fn empty_umbilic_set_for_pair_and_distinct_classes() {
        for axes in [
            [2.0, 2.0, 1.0, 1.0],
            [2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()],
            [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
        ] {
            assert!(umbilic_points(&Ellipsoid4::new(axes).unwrap()).is_empty());
        }
    }

    #[test]
    fn two_pairs_circles_verify_with_expected_tags() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.02).unwrap();
        assert_eq!(loci.len(), 2);
        // Large circle (x,y): top pair coincides; small circle: bottom pair.
        assert_eq!(loci[0].kind, LocusKind::P23Curve);
        assert_eq!(loci[1].kind, LocusKind::P12Curve);
        for l in &loci {
            let r = verify_locus(&e, l, 1e-6);
            assert!(r.pass, "{l:?} failed: {r:?}");
            assert!(r.max_discriminant_residual < 1e-10);
        }
    }

    #[test]
    fn pair_low_structure_and_gamma_offsets() {
        // (2, √3, √2, √2): binding ellipse plus two circles at
        // x = ±a√((a²−b²)/(a²−c²)) = ±√2.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.02).unwrap();
        assert_eq!(loci.len(), 3);
        let LocusGeometry::Curve(c) = &loci[1].geometry else {
            panic!()
        };
        assert_relative_eq!(c.samples[0][0].abs(), 2f64.sqrt(), max_relative = 1e-12);
        for l in &loci {
            assert!(verify_locus(&e, l, 1e-6).pass, "{:?}", l.provenance);
        }
        // Measured kinds: the binding ellipse carries the coincident top
        // pair, the circles the coincident bottom pair.
        assert_eq!(loci[0].kind, LocusKind::P23Curve);
        assert_eq!(loci[1].kind, LocusKind::P12Curve);
        assert_eq!(loci[2].kind, LocusKind::P12Curve);
    }

    #[test]
    fn pair_high_structure_swaps_the_tags() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.5, 1.0]).unwrap();
        assert_eq!(e.class(), AxisClass::PairHigh);
        let loci = partially_umbilic_curves(&e, 0.02).unwrap();
        assert_eq!(loci.len(), 3);
        assert_eq!(loci[0].kind, LocusKind::P12Curve);
        assert_eq!(loci[1].kind, LocusKind::P23Curve);
        assert_eq!(loci[2].kind, LocusKind::P23Curve);
        for l in &loci {
            assert!(verify_locus(&e, l, 1e-6).pass, "{:?}", l.provenance);
        }
    }

    #[test]
    fn middle_pair_arcs_alternate() {
        let e = Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.01).unwrap();
        assert_eq!(loci.len(), 4);
        let kinds: Vec<LocusKind> = loci.iter().map(|l| l.kind).collect();
        // Arcs between umbilics alternate: around the long-axis ends the
        // bottom pair coincides, around the short-axis ends the top pair.
        assert_eq!(kinds[0], LocusKind::P23Curve);
        assert_eq!(kinds[1], LocusKind::P12Curve);
        assert_eq!(kinds[2], LocusKind::P23Curve);
        assert_eq!(kinds[3], LocusKind::P12Curve);
        for l in &loci {
            let r = verify_locus(&e, l, 1e-6);
            assert!(r.pass, "{:?}: {r:?}", l.provenance);
        }
    }

    #[test]
    fn all_distinct_four_closed_curves() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.02).unwrap();
        assert_eq!(loci.len(), 4);
        // z = 0 pair carries the coincident top pair, y = 0 pair the bottom.
        assert_eq!(loci[0].kind, LocusKind::P23Curve);
        assert_eq!(loci[1].kind, LocusKind::P23Curve);
        assert_eq!(loci[2].kind, LocusKind::P12Curve);
        assert_eq!(loci[3].kind, LocusKind::P12Curve);
        for l in &loci {
            let r = verify_locus(&e, l, 1e-6);
            assert!(r.pass, "{:?}: {r:?}", l.provenance);
            let LocusGeometry::Curve(c) = &l.geometry else {
                panic!()
            };
            assert!(c.closed);
            let pts = c.points();
            assert!((pts[0] - pts[pts.len() - 1]).norm() < 1e-9);
        }
    }

    #[test]
    fn sample_ellipse_point_matches_hand_value() {
        // r = s = t = 1: chart point (√(2/3), 0, 0) maps to
        // (1.632993, 0, 0, 0.577350).
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.02).unwrap();
        let LocusGeometry::Curve(c) = &loci[0].geometry else {
            panic!()
        };
        // phi = 0 is the first sample: (a·u_max, 0, 0, d√(1−u_max²)).
        assert_relative_eq!(c.samples[0][0], 1.632993161855452, max_relative = 1e-12);
        assert_relative_eq!(c.samples[0][3], 0.5773502691896257, max_relative = 1e-10);
    }

    #[test]
    fn sphere_whole_surface_verifies_umbilic() {
        let e = Ellipsoid4::new([1.5; 4]).unwrap();
        let u = umbilic_points(&e);
        assert_eq!(u[0].geometry, LocusGeometry::FullSurface);
        let r = verify_locus(&e, &u[0], 1e-6);
        assert!(r.pass);
        assert!(r.max_pair_gap < 1e-10);
    }

    #[test]
    fn curve_spacing_respects_resolution() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let loci = partially_umbilic_curves(&e, 0.05).unwrap();
        for l in &loci {
            if let LocusGeometry::Curve(c) = &l.geometry {
                assert!(c.max_spacing() < 3.0 * 0.05, "spacing {}", c.max_spacing());
            }
        }
    }
}
