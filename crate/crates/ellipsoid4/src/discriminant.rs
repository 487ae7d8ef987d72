//! Discriminant machinery for locating curvature coincidences: the quartic
//! obstruction polynomials of the doubled-middle-pair surface, the six
//! auxiliary polynomials of the four-distinct-axes surface, and the
//! repeated-root discriminant of the curvature cubic restricted to the
//! coordinate faces of the ball chart.

use serde::{Deserialize, Serialize};

use crate::cubic::{discriminant_terms, CubicPoly};
use crate::error::{Error, Result};
use crate::numerics::neumaier_sum;
use crate::surface::{AxisClass, Ellipsoid4};

/// Successive squared-axis gaps.
///
/// For four distinct axes `a² = d² + t + s + r`, `b² = d² + t + s`,
/// `c² = d² + t`; for a doubled middle pair only `s = a² − c²` and
/// `t = c² − b²` are meaningful and `r` is unused.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisGaps {
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

impl AxisGaps {
    /// Gaps of a four-distinct-axes surface, from its canonical (descending)
    /// squared axes.
    pub fn from_all_distinct(surface: &Ellipsoid4) -> Result<AxisGaps> {
        if surface.class() != AxisClass::AllDistinct {
            return Err(Error::WrongAxisClass {
                expected: "four distinct axes",
                got: surface.class(),
            });
        }
        let [a, b, c, d] = surface.canonical_axes();
        Ok(AxisGaps {
            r: a * a - b * b,
            s: b * b - c * c,
            t: c * c - d * d,
        })
    }

    /// Gaps of a doubled-middle-pair surface (canonical axes a > c > b with
    /// the pair on c): s = a² − c², t = c² − b².
    pub fn from_middle_pair(surface: &Ellipsoid4) -> Result<AxisGaps> {
        if surface.class() != AxisClass::PairMiddle {
            return Err(Error::WrongAxisClass {
                expected: "one doubled pair strictly between the distinct axes",
                got: surface.class(),
            });
        }
        let [a, b, c, _] = surface.canonical_axes();
        Ok(AxisGaps {
            r: 0.0,
            s: a * a - c * c,
            t: c * c - b * b,
        })
    }
}

/// Quartic obstruction in the polar radius R of the rotational chart of the
/// doubled-middle-pair surface:
///
/// (s cos²u − t sin²u)² R⁴ + 2[(s+t)² cos²u sin²u + st] R² + (t cos²u − s sin²u)²
///
/// Strictly positive for R > 0, so curvature coincidences exist only on the
/// binding ellipse R = 0.
pub fn pu_quartic_r(gaps: &AxisGaps, r: f64, u: f64) -> f64 {
    let (s, t) = (gaps.s, gaps.t);
    let (cu2, su2) = (u.cos() * u.cos(), u.sin() * u.sin());
    let terms = [
        (s * cu2 - t * su2).powi(2) * r.powi(4),
        2.0 * ((s + t) * (s + t) * cu2 * su2 + s * t) * r * r,
        (t * cu2 - s * su2).powi(2),
    ];
    neumaier_sum(&terms)
}

/// Quartic obstruction in the graph chart of the doubled-middle-pair
/// surface, rotation-angle independent:
///
/// (su² − tv²)² − 2(s+t)(su² + tv²) + (s+t)²
///
/// Strictly positive on u² + v² < 1: the chart interior carries no curvature
/// coincidences.
pub fn pu_quartic_uv(gaps: &AxisGaps, u: f64, v: f64) -> Result<f64> {
    if u * u + v * v >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "u² + v² = {} not < 1",
            u * u + v * v
        )));
    }
    let (s, t) = (gaps.s, gaps.t);
    let (u2, v2) = (u * u, v * v);
    let terms = [
        (s * u2 - t * v2).powi(2),
        -2.0 * (s + t) * (s * u2 + t * v2),
        (s + t) * (s + t),
    ];
    Ok(neumaier_sum(&terms))
}

/// The same quartic grouped as a quadratic form in (s, t):
///
/// s²(1−u²)² + t²(1−v²)² + 2st(1 − u²v² − u² − v²)
///
/// Algebraically identical to [`pu_quartic_uv`]; positive-definiteness of
/// this form on the open disk is the positivity argument.
pub fn pu_quartic_uv_grouped(gaps: &AxisGaps, u: f64, v: f64) -> Result<f64> {
    if u * u + v * v >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "u² + v² = {} not < 1",
            u * u + v * v
        )));
    }
    let (s, t) = (gaps.s, gaps.t);
    let (u2, v2) = (u * u, v * v);
    let terms = [
        s * s * (1.0 - u2) * (1.0 - u2),
        t * t * (1.0 - v2) * (1.0 - v2),
        2.0 * s * t * (1.0 - u2 * v2 - u2 - v2),
    ];
    Ok(neumaier_sum(&terms))
}

/// The six auxiliary polynomials whose products factor the restricted
/// discriminant on the three coordinate faces of the ball chart:
/// face u = 0 pairs with (p1, p2), v = 0 with (p3, p4), w = 0 with (p5, p6).
pub fn pu_polys(gaps: &AxisGaps, u: f64, v: f64, w: f64) -> [f64; 6] {
    let (r, s, t) = (gaps.r, gaps.s, gaps.t);
    let (u2, v2, w2) = (u * u, v * v, w * w);
    let p1 = neumaier_sum(&[
        -s * ((2.0 * t + 2.0 * s) * v2 - 2.0 * t * w2 - s),
        ((s + t) * v2 + t * w2).powi(2),
    ]);
    let p2 = (s + t) * (s + r) * v2 + r * t * w2 + r * (r + s);
    let p3 = neumaier_sum(&[
        ((s + t + r) * u2 + t * w2).powi(2),
        -(s + r) * (2.0 * (t + s + r) * u2 - 2.0 * t * w2 - s - r),
    ]);
    let p4 = neumaier_sum(&[s * (t + s + r) * u2, -r * t * w2, -r * s]);
    let p5 = neumaier_sum(&[
        -r * (2.0 * (t + s + r) * u2 - 2.0 * (s + t) * v2 - r),
        ((s + t + r) * u2 + (s + t) * v2).powi(2),
    ]);
    let p6 = neumaier_sum(&[s * (s + t + r) * u2, (s + t) * (s + r) * v2, -s * (s + r)]);
    [p1, p2, p3, p4, p5, p6]
}

/// The curvature cubic of the ball chart as a literal polynomial in the
/// squared axes and chart coordinates, constant term 1:
///
/// p(k) = 1 + C k + B k² + A k³ with
///   C = −[(a²−d²)u² + (b²−d²)v² + (c²−d²)w² − a² − b² − c²]
///   B =  (d²−a²)(b²+c²)u² + (a²+c²)(d²−b²)v² + (d²−c²)(a²+b²)w² + b²c² + a²c² + a²b²
///   A = −[b²c²(a²−d²)u² + a²c²(b²−d²)v² + a²b²(c²−d²)w² − a²b²c²]
///
/// Its roots are the negatives of the inner-normal principal curvatures (the
/// affine change k ↦ −k relates it to the pencil cubic normalized to unit
/// constant term); double roots occur at exactly the same chart points, so
/// the discriminant machinery is unaffected by the sign convention.
pub fn ball_chart_cubic(surface: &Ellipsoid4, u: f64, v: f64, w: f64) -> Result<CubicPoly> {
    if surface.class() != AxisClass::AllDistinct {
        return Err(Error::WrongAxisClass {
            expected: "four distinct axes",
            got: surface.class(),
        });
    }
    let [a, b, c, d] = surface.canonical_axes();
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let (u2, v2, w2) = (u * u, v * v, w * w);
    let cc = -((a2 - d2) * u2 + (b2 - d2) * v2 + (c2 - d2) * w2 - a2 - b2 - c2);
    let bb = (d2 - a2) * (b2 + c2) * u2
        + (a2 + c2) * (d2 - b2) * v2
        + (d2 - c2) * (a2 + b2) * w2
        + b2 * c2
        + a2 * c2
        + a2 * b2;
    let aa = -(b2 * c2 * (a2 - d2) * u2 + a2 * c2 * (b2 - d2) * v2 + a2 * b2 * (c2 - d2) * w2
        - a2 * b2 * c2);
    Ok(CubicPoly {
        a: aa,
        b: bb,
        c: cc,
        d: 1.0,
        normalized: true,
    })
}

/// Which coordinate face of the ball chart a restricted discriminant lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartFace {
    /// u = 0; pairs with (p1, p2).
    U0,
    /// v = 0; pairs with (p3, p4).
    V0,
    /// w = 0; pairs with (p5, p6).
    W0,
}

/// Restricted discriminant on a coordinate face, together with the largest
/// discriminant term (the natural scale for zero detection).
///
/// `params` are the two free chart coordinates of the face, in chart order:
/// (v, w) on U0, (u, w) on V0, (u, v) on W0.
pub fn restricted_discriminant(
    surface: &Ellipsoid4,
    face: ChartFace,
    params: [f64; 2],
) -> Result<(f64, f64)> {
    let (u, v, w) = face_coords(face, params);
    // The cubic and its discriminant are polynomials; the closed ball is
    // fine (the chart itself degenerates only at the boundary sphere).
    if u * u + v * v + w * w > 1.0 + 1e-9 {
        return Err(Error::DomainViolation(format!(
            "face point ({u}, {v}, {w}) outside the closed unit ball"
        )));
    }
    let p = ball_chart_cubic(surface, u, v, w)?;
    Ok(discriminant_terms(p.a, p.b, p.c))
}

/// The face's auxiliary product p·q² whose zero set matches the restricted
/// discriminant's.
pub fn face_poly_product(gaps: &AxisGaps, face: ChartFace, params: [f64; 2]) -> f64 {
    let (u, v, w) = face_coords(face, params);
    let p = pu_polys(gaps, u, v, w);
    match face {
        ChartFace::U0 => p[0] * p[1] * p[1],
        ChartFace::V0 => p[2] * p[3] * p[3],
        ChartFace::W0 => p[4] * p[5] * p[5],
    }
}

fn face_coords(face: ChartFace, params: [f64; 2]) -> (f64, f64, f64) {
    match face {
        ChartFace::U0 => (0.0, params[0], params[1]),
        ChartFace::V0 => (params[0], 0.0, params[1]),
        ChartFace::W0 => (params[0], params[1], 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pu_r_closed_form_checks() {
        let g = AxisGaps {
            r: 0.0,
            s: 1.0,
            t: 1.0,
        };
        // R = 0 leaves (t cos²u − s sin²u)², vanishing at tan²u = t/s.
        let u0 = (1.0f64).atan();
        assert!(pu_quartic_r(&g, 0.0, u0).abs() < 1e-15);
        assert!(pu_quartic_r(&g, 0.0, 0.3) > 0.0);
        // cos² = sin² = 1/2 kills the quartic and constant terms.
        assert_relative_eq!(
            pu_quartic_r(&g, 1.0, std::f64::consts::FRAC_PI_4),
            4.0,
            max_relative = 1e-14
        );
        // Hand-evaluated at s = t = 1, R = 0.5, u = 1.
        assert_relative_eq!(
            pu_quartic_r(&g, 0.5, 1.0),
            1.0974127316321092,
            max_relative = 1e-12
        );
    }

    #[test]
    fn pu_uv_closed_form_checks() {
        let g = AxisGaps {
            r: 0.0,
            s: 1.0,
            t: 1.0,
        };
        assert_relative_eq!(
            pu_quartic_uv(&g, 0.0, 0.0).unwrap(),
            4.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            pu_quartic_uv(&g, 0.5, 0.5).unwrap(),
            2.0,
            max_relative = 1e-14
        );
        assert!(pu_quartic_uv(&g, 0.8, 0.7).is_err());
    }

    #[test]
    fn pu_uv_two_groupings_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = AxisGaps {
                r: 0.0,
                s: rng.gen_range(0.1..3.0),
                t: rng.gen_range(0.1..3.0),
            };
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let rad = rng.gen_range(0.0..0.998f64).sqrt();
            let (u, v) = (rad * a.cos(), rad * a.sin());
            let x = pu_quartic_uv(&g, u, v).unwrap();
            let y = pu_quartic_uv_grouped(&g, u, v).unwrap();
            assert_relative_eq!(x, y, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn poly_slices_match_hand_substitution() {
        // r = s = t = 1: the p6 slice is 3u² + 4v² − 2, p4 is 3u² − w² − 1,
        // and p2 at v = w = 0 is r(r+s) > 0.
        let g = AxisGaps {
            r: 1.0,
            s: 1.0,
            t: 1.0,
        };
        let p = pu_polys(&g, 0.3, 0.4, 0.0);
        assert_relative_eq!(p[5], 3.0 * 0.09 + 4.0 * 0.16 - 2.0, max_relative = 1e-14);
        let p = pu_polys(&g, 0.3, 0.0, 0.5);
        assert_relative_eq!(p[3], 3.0 * 0.09 - 0.25 - 1.0, max_relative = 1e-14);
        let p = pu_polys(&g, 0.2, 0.0, 0.0);
        assert_relative_eq!(p[1], 2.0, max_relative = 1e-14);
    }

    #[test]
    fn restricted_discriminant_is_minus_face_product() {
        // The discriminant of the literal chart cubic equals −p·q² on each
        // face; the fitted constant for this normalization is −1.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let g = AxisGaps::from_all_distinct(&e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for face in [ChartFace::U0, ChartFace::V0, ChartFace::W0] {
            for _ in 0..50 {
                let p = [rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)];
                let (disc, scale) = restricted_discriminant(&e, face, p).unwrap();
                let prod = face_poly_product(&g, face, p);
                if prod.abs() > 1e-9 * scale {
                    assert_relative_eq!(disc / prod, -1.0, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn discriminant_vanishes_on_the_ellipse() {
        // r = s = t = 1 ellipse: 3u² + 4v² = 2 on the w = 0 face.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        for phi in [0.0, 0.7, 1.9, 3.0, 4.4, 5.5f64] {
            let u = (2.0f64 / 3.0).sqrt() * phi.cos();
            let v = (0.5f64).sqrt() * phi.sin();
            let (disc, scale) = restricted_discriminant(&e, ChartFace::W0, [u, v]).unwrap();
            assert!(
                disc.abs() < 1e-10 * scale,
                "disc {disc:e} vs scale {scale:e} at phi={phi}"
            );
        }
    }

    #[test]
    fn origin_sign_cross_check() {
        // At the chart origin of (2,√3,√2,1) the cubic is
        // 1 + 9k + 26k² + 24k³ and the discriminant equals −p5·p6² = −4.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let p = ball_chart_cubic(&e, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(p.a, 24.0, max_relative = 1e-13);
        assert_relative_eq!(p.b, 26.0, max_relative = 1e-13);
        assert_relative_eq!(p.c, 9.0, max_relative = 1e-13);
        let (disc, _) = restricted_discriminant(&e, ChartFace::W0, [0.0, 0.0]).unwrap();
        assert_relative_eq!(disc, -4.0, max_relative = 1e-12);
        let g = AxisGaps::from_all_distinct(&e).unwrap();
        let polys = pu_polys(&g, 0.0, 0.0, 0.0);
        assert_eq!((-(polys[4] * polys[5] * polys[5])).signum(), disc.signum());
    }

    #[test]
    fn ball_cubic_roots_are_negated_curvatures() {
        // Chart cubic at the pole: roots −1/2, −1/3, −1/4, the negatives of
        // the positive inner-normal curvatures there.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let p = ball_chart_cubic(&e, 0.0, 0.0, 0.0).unwrap();
        let r = p.real_roots_sorted();
        assert_relative_eq!(r[0], -0.5, max_relative = 1e-12);
        assert_relative_eq!(r[1], -1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(r[2], -0.25, max_relative = 1e-12);
    }

    #[test]
    fn gaps_require_matching_class() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        assert!(AxisGaps::from_all_distinct(&e).is_err());
        assert!(AxisGaps::from_middle_pair(&e).is_err());
        let m = Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let g = AxisGaps::from_middle_pair(&m).unwrap();
        assert_relative_eq!(g.s, 2.0, max_relative = 1e-15);
        assert_relative_eq!(g.t, 1.0, max_relative = 1e-15);
    }
}
