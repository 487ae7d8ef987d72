//! The acceptance checklist: ten numbered criteria covering closed-form
//! curvature reproduction, umbilic counts, the singular-curve loci, quartic
//! positivity, the linking table, closed leaves, confocal coordinates,
//! conformal charts, slice confinement and the discriminant factorization.
//!
//! Each criterion runs at pinned tolerances and returns a structured report;
//! the CLI `verify` subcommand and the acceptance test target both consume
//! these functions.

use nalgebra::Vector4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, ChartKind};
use crate::confocal;
use crate::conformal;
use crate::curvature::{classify_gaps, principal_curvatures, DegeneracyTag};
use crate::discriminant::{self, AxisGaps, ChartFace};
use crate::forms::chart_principal_curvatures;
use crate::loci::{self, LocusGeometry, LocusKind};
use crate::quadrature::{self, ArcIntegrand, QuadBackend};
use crate::surface::{Ellipsoid4, SurfacePoint};
use crate::topology;
use crate::tracer::{self, Termination, TraceConfig};

/// Direction of a check comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    /// value must stay below threshold
    Below,
    /// value must stay above threshold
    Above,
    /// value must equal threshold exactly (counts)
    Equal,
}

/// One measured quantity against its pinned threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub cmp: Cmp,
    pub pass: bool,
}

impl CheckLine {
    fn new(label: impl Into<String>, value: f64, threshold: f64, cmp: Cmp) -> Self {
        let pass = match cmp {
            Cmp::Below => value < threshold,
            Cmp::Above => value > threshold,
            Cmp::Equal => value == threshold,
        };
        CheckLine {
            label: label.into(),
            value,
            threshold,
            cmp,
            pass,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

impl CriterionReport {
    fn from_checks(id: usize, name: &str, checks: Vec<CheckLine>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        CriterionReport {
            id,
            name: name.into(),
            checks,
            pass,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:2}: {} — {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name
        )
    }
}

fn surfaces() -> [Ellipsoid4; 5] {
    [
        Ellipsoid4::new([2.0, 2.0, 2.0, 1.0]).unwrap(),
        Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap(),
        Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()]).unwrap(),
        Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap(),
        Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap(),
    ]
}

fn max_rel_err(sorted_numeric: [f64; 3], mut closed: [f64; 3]) -> f64 {
    closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut worst = 0.0f64;
    for i in 0..3 {
        worst = worst.max((sorted_numeric[i] - closed[i]).abs() / closed[i].abs());
    }
    worst
}

/// Criterion 1: pencil curvatures match the closed-form expressions on each
/// degenerate class at 1000 random chart points, max relative error < 1e−8.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let mut checks = Vec::new();

    // Points are drawn clear of the singular loci: resolving a curvature
    // pair split below ~1e-9 out of polynomial coefficients is ill-posed in
    // doubles, so reproduction at 1e-8 is only meaningful off the loci.

    // Triple axis: doubled b²/(aΔ) and simple ab⁴/Δ³, Δ² = (a²−b²)w² + b⁴.
    {
        let e = &surfaces()[0];
        let chart = Chart::build(e, ChartKind::PolarCap).unwrap();
        let [a, _, _, b] = chart.canonical_axes();
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let p = chart.sample_interior(&mut rng, 0.01);
            let k = chart_principal_curvatures(e, &chart, p).unwrap();
            let d = ((a * a - b * b) * p[2] * p[2] + b.powi(4)).sqrt();
            let closed = [b * b / (a * d), b * b / (a * d), a * b.powi(4) / d.powi(3)];
            worst = worst.max(max_rel_err(k, closed));
        }
        checks.push(CheckLine::new(
            "triple axis: max rel err",
            worst,
            tol,
            Cmp::Below,
        ));
    }

    // Two doubled pairs: {b/(aΔ), ab/Δ³, a/(bΔ)}, Δ² = a²sin²t + b²cos²t.
    // The singular circles sit at t ∈ {0, π/2, π} of the product chart.
    {
        let e = &surfaces()[1];
        let chart = Chart::build(e, ChartKind::BiRotation).unwrap();
        let [a, _, b, _] = chart.canonical_axes();
        let mut worst = 0.0f64;
        let mut n = 0;
        let mut attempts = 0;
        while n < 1000 && attempts < 100_000 {
            attempts += 1;
            let p = chart.sample_interior(&mut rng, 0.01);
            if (p[2] - std::f64::consts::FRAC_PI_2).abs() < 0.02 {
                continue;
            }
            n += 1;
            let k = chart_principal_curvatures(e, &chart, p).unwrap();
            let d = (a * a * p[2].sin().powi(2) + b * b * p[2].cos().powi(2)).sqrt();
            let closed = [b / (a * d), a * b / d.powi(3), a / (b * d)];
            worst = worst.max(max_rel_err(k, closed));
        }
        checks.push(CheckLine::new(
            "two doubled pairs: max rel err",
            worst,
            tol,
            Cmp::Below,
        ));
    }

    // Doubled low pair: closed forms hold on the binding ellipse and on the
    // two rotation circles.
    {
        let e = &surfaces()[2];
        let [a, b, c, _] = e.canonical_axes();
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let u = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = e.canon_point_to_user([a * u.cos(), b * u.sin(), 0.0, 0.0]);
            let k = principal_curvatures(
                e,
                &SurfacePoint {
                    ambient: e.project(&p),
                },
            );
            let d = (a * a * u.sin().powi(2) + b * b * u.cos().powi(2)).sqrt();
            let closed = [a * b / d.powi(3), a * b / (c * c * d), a * b / (c * c * d)];
            worst = worst.max(max_rel_err(k, closed));
        }
        let x0 = a * ((a * a - b * b) / (a * a - c * c)).sqrt();
        let rho = c * ((b * b - c * c) / (a * a - c * c)).sqrt();
        for _ in 0..500 {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let p = e.canon_point_to_user([sign * x0, 0.0, rho * t.cos(), rho * t.sin()]);
            let k = principal_curvatures(
                e,
                &SurfacePoint {
                    ambient: e.project(&p),
                },
            );
            let closed = [a * c / b.powi(3), a * c / b.powi(3), a / (b * c)];
            worst = worst.max(max_rel_err(k, closed));
        }
        checks.push(CheckLine::new(
            "doubled low pair: max rel err on loci",
            worst,
            tol,
            Cmp::Below,
        ));
    }

    // Doubled middle pair: binding-ellipse closed forms (the coincident pair
    // switches across the umbilics; sorting absorbs the crossover; samples
    // keep clear of the four umbilic angles where all three roots merge).
    {
        let e = &surfaces()[3];
        let [a, b, c, _] = e.canonical_axes();
        let u_plus = ((a * a - c * c) / (a * a - b * b)).sqrt().acos();
        let umbilic_angles = [
            u_plus,
            std::f64::consts::PI - u_plus,
            std::f64::consts::PI + u_plus,
            std::f64::consts::TAU - u_plus,
        ];
        let mut worst = 0.0f64;
        let mut n = 0;
        let mut attempts = 0;
        while n < 1000 && attempts < 100_000 {
            attempts += 1;
            let u = rng.gen_range(0.0..std::f64::consts::TAU);
            if umbilic_angles.iter().any(|ua| (u - ua).abs() < 0.02) {
                continue;
            }
            n += 1;
            let p = e.canon_point_to_user([a * u.cos(), b * u.sin(), 0.0, 0.0]);
            let k = principal_curvatures(
                e,
                &SurfacePoint {
                    ambient: e.project(&p),
                },
            );
            let d = (a * a * u.sin().powi(2) + b * b * u.cos().powi(2)).sqrt();
            let closed = [a * b / d.powi(3), a * b / (c * c * d), a * b / (c * c * d)];
            worst = worst.max(max_rel_err(k, closed));
        }
        checks.push(CheckLine::new(
            "doubled middle pair: max rel err on the ellipse",
            worst,
            tol,
            Cmp::Below,
        ));
    }

    // Four distinct axes: confocal closed forms (abcd/√(uvt))·(1/u,1/v,1/t).
    {
        let e = &surfaces()[4];
        let chart = Chart::build(e, ChartKind::Confocal { neg: [false; 4] }).unwrap();
        let [a, b, c, d] = e.canonical_axes();
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let p = chart.sample_interior(&mut rng, 1e-3);
            let k = chart_principal_curvatures(e, &chart, p).unwrap();
            let factor = a * b * c * d / (p[0] * p[1] * p[2]).sqrt();
            let closed = [factor / p[2], factor / p[1], factor / p[0]];
            worst = worst.max(max_rel_err(k, closed));
        }
        checks.push(CheckLine::new(
            "four distinct axes: max rel err",
            worst,
            tol,
            Cmp::Below,
        ));
    }

    CriterionReport::from_checks(1, "closed-form curvature reproduction", checks)
}

/// Criterion 2: umbilic counts and locations per class; no coincidence
/// points found by random search on the classes with empty umbilic set.
pub fn criterion_2(seed: u64) -> CriterionReport {
    criterion_2_with(seed, crate::surface::EPS_DEG)
}

/// The classification tolerance is overridable so a corrupted setting shows
/// up as controlled failures rather than silent nonsense.
pub fn criterion_2_with(seed: u64, eps_deg: f64) -> CriterionReport {
    let mut checks = Vec::new();

    // Doubled middle pair: four umbilics. Each is localized independently by
    // bisecting the sign-aware square-root factor of the binding-ellipse
    // quartic obstruction, t·cos²u − s·sin²u, whose zero is simple (machine
    // precision); the curvature-gap difference gives a second localization
    // at its noise-limited precision.
    {
        let e = Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let pts = match &loci::umbilic_points(&e)[0].geometry {
            LocusGeometry::Points(p) => p.clone(),
            _ => vec![],
        };
        checks.push(CheckLine::new(
            "middle pair: umbilic count",
            pts.len() as f64,
            4.0,
            Cmp::Equal,
        ));
        let gaps = AxisGaps::from_middle_pair(&e).unwrap();
        let [a, b, _, _] = e.canonical_axes();
        let to_ambient = |u: f64| e.canon_point_to_user([a * u.cos(), b * u.sin(), 0.0, 0.0]);
        let nearest = |p: Vector4<f64>| {
            pts.iter()
                .map(|q| (Vector4::from(*q) - p).norm())
                .fold(f64::INFINITY, f64::min)
        };
        // Quartic factor: simple zero at the umbilic angle in each quadrant.
        let quartic_factor = |u: f64| gaps.t * u.cos().powi(2) - gaps.s * u.sin().powi(2);
        let mut worst_quartic = 0.0f64;
        let mut worst_gap = 0.0f64;
        let gap_diff = |u: f64| {
            let k = principal_curvatures(
                &e,
                &SurfacePoint {
                    ambient: e.project(&to_ambient(u)),
                },
            );
            (k[1] - k[0]) - (k[2] - k[1])
        };
        for (lo, hi) in [(0.01, 1.56), (1.58, 3.13), (3.15, 4.70), (4.72, 6.27)] {
            let u_q = crate::numerics::bisect(quartic_factor, lo, hi, 90);
            worst_quartic = worst_quartic.max(nearest(to_ambient(u_q)));
            let u_g = crate::numerics::bisect(gap_diff, lo, hi, 80);
            worst_gap = worst_gap.max(nearest(to_ambient(u_g)));
        }
        checks.push(CheckLine::new(
            "middle pair: quartic-root umbilic coordinates",
            worst_quartic,
            1e-10,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            "middle pair: curvature-gap umbilic coordinates (noise-limited)",
            worst_gap,
            1e-4,
            Cmp::Below,
        ));
        // cos²u = 2/3 for these axes, and the constructed points satisfy it.
        let cos2 = gaps.s / (gaps.s + gaps.t);
        checks.push(CheckLine::new(
            "middle pair: cos²u closed form",
            (cos2 - 2.0 / 3.0).abs(),
            1e-15,
            Cmp::Below,
        ));
        let mut worst_cons = 0.0f64;
        for p in &pts {
            let canon = e.user_point_to_canon(&Vector4::from(*p));
            worst_cons = worst_cons.max(((canon[0] / a).powi(2) - cos2).abs());
        }
        checks.push(CheckLine::new(
            "middle pair: constructed points satisfy cos²u",
            worst_cons,
            1e-10,
            Cmp::Below,
        ));
    }

    // Triple axis: exactly the two poles of the odd axis.
    {
        let e = Ellipsoid4::new([2.0, 2.0, 2.0, 1.0]).unwrap();
        let pts = match &loci::umbilic_points(&e)[0].geometry {
            LocusGeometry::Points(p) => p.clone(),
            _ => vec![],
        };
        checks.push(CheckLine::new(
            "triple axis: umbilic count",
            pts.len() as f64,
            2.0,
            Cmp::Equal,
        ));
        let mut worst = 0.0f64;
        for (p, expect) in pts
            .iter()
            .zip([[0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, -1.0]])
        {
            worst = worst.max((Vector4::from(*p) - Vector4::from(expect)).norm());
            let tag = crate::curvature::classify_point(
                &e,
                &SurfacePoint::new(&e, Vector4::from(*p)).unwrap(),
                eps_deg,
            );
            if tag != DegeneracyTag::Umbilic {
                worst = f64::INFINITY;
            }
        }
        checks.push(CheckLine::new(
            "triple axis: pole coordinates",
            worst,
            1e-12,
            Cmp::Below,
        ));
    }

    // Empty classes: 10⁵ random interior samples with uvw ≠ 0 never have
    // all three curvatures coincident.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    for (axes, kind, label) in [
        (
            [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
            ChartKind::BallW { neg: false },
            "four distinct",
        ),
        (
            [2.0, 2.0, 1.0, 1.0],
            ChartKind::BiRotation,
            "two doubled pairs",
        ),
    ] {
        let e = Ellipsoid4::new(axes).unwrap();
        let chart = Chart::build(&e, kind).unwrap();
        let mut found = 0usize;
        for _ in 0..100_000 {
            let mut p = chart.sample_interior(&mut rng, 1e-4);
            if p[0] * p[1] * p[2] == 0.0 {
                p[0] += 1e-9;
            }
            let k = chart_principal_curvatures(&e, &chart, p).unwrap();
            if classify_gaps(k, eps_deg) == DegeneracyTag::Umbilic {
                found += 1;
            }
        }
        checks.push(CheckLine::new(
            format!("{label}: umbilics found in 1e5 samples"),
            found as f64,
            0.0,
            Cmp::Equal,
        ));
    }

    CriterionReport::from_checks(2, "umbilic count and location", checks)
}

/// Criterion 3: on the four singular curves of the four-distinct-axes
/// surface, the coincident pair stays within 1e−7, the third curvature stays
/// separated by 1e−3, and the scaled restricted discriminant stays below
/// 1e−10.
pub fn criterion_3(_seed: u64) -> CriterionReport {
    let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
    let [a, b, c, _] = e.canonical_axes();
    let curves = loci::partially_umbilic_curves(&e, 0.01).unwrap();
    let mut checks = Vec::new();
    checks.push(CheckLine::new(
        "curve count",
        curves.len() as f64,
        4.0,
        Cmp::Equal,
    ));
    let mut max_gap = 0.0f64;
    let mut min_sep = f64::INFINITY;
    let mut max_disc = 0.0f64;
    for locus in &curves {
        let LocusGeometry::Curve(curve) = &locus.geometry else {
            continue;
        };
        for s in &curve.samples {
            let p = Vector4::from(*s);
            let k = principal_curvatures(
                &e,
                &SurfacePoint {
                    ambient: e.project(&p),
                },
            );
            let (g12, g23) = (k[1] - k[0], k[2] - k[1]);
            match locus.kind {
                LocusKind::P12Curve => {
                    max_gap = max_gap.max(g12);
                    min_sep = min_sep.min(g23);
                }
                _ => {
                    max_gap = max_gap.max(g23);
                    min_sep = min_sep.min(g12);
                }
            }
            // Face-restricted discriminant in ball-chart coordinates.
            let canon = e.user_point_to_canon(&p);
            let (face, params) = match locus.kind {
                // Curves in the third-axis hyperplane live on the w = 0
                // face; curves in the second-axis hyperplane on v = 0.
                LocusKind::P23Curve => (ChartFace::W0, [canon[0] / a, canon[1] / b]),
                _ => (ChartFace::V0, [canon[0] / a, canon[2] / c]),
            };
            let (disc, scale) = discriminant::restricted_discriminant(&e, face, params).unwrap();
            if scale > 0.0 {
                max_disc = max_disc.max(disc.abs() / scale);
            }
        }
    }
    checks.push(CheckLine::new(
        "max coincident-pair gap",
        max_gap,
        1e-7,
        Cmp::Below,
    ));
    checks.push(CheckLine::new(
        "min third-curvature separation",
        min_sep,
        1e-3,
        Cmp::Above,
    ));
    checks.push(CheckLine::new(
        "max scaled restricted discriminant",
        max_disc,
        1e-10,
        Cmp::Below,
    ));
    CriterionReport::from_checks(
        3,
        "singular curves of the four-distinct-axes surface",
        checks,
    )
}

/// Criterion 4: strict positivity of both quartic obstruction polynomials on
/// their grids for ten random gap pairs, margin > 1e−12.
pub fn criterion_4(seed: u64) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let mut min_r = f64::INFINITY;
    let mut min_uv = f64::INFINITY;
    for _ in 0..10 {
        let gaps = AxisGaps {
            r: 0.0,
            s: rng.gen_range(0.1..3.0),
            t: rng.gen_range(0.1..3.0),
        };
        for i in 0..200 {
            let rr = 2.0 * (i as f64 + 1.0) / 200.0;
            for j in 0..200 {
                let u = std::f64::consts::TAU * j as f64 / 200.0;
                min_r = min_r.min(discriminant::pu_quartic_r(&gaps, rr, u));
            }
        }
        for i in 0..200 {
            let u = -0.999 + 1.998 * i as f64 / 199.0;
            for j in 0..200 {
                let v = -0.999 + 1.998 * j as f64 / 199.0;
                if u * u + v * v < 0.998 {
                    min_uv = min_uv.min(discriminant::pu_quartic_uv(&gaps, u, v).unwrap());
                }
            }
        }
    }
    let checks = vec![
        CheckLine::new(
            "min quartic in (R, u) over (0,2]×[0,2π)",
            min_r,
            1e-12,
            Cmp::Above,
        ),
        CheckLine::new(
            "min quartic on the open unit disk",
            min_uv,
            1e-12,
            Cmp::Above,
        ),
    ];
    CriterionReport::from_checks(4, "positivity of the quartic obstructions", checks)
}

/// Criterion 5: the linking table — crossing-count integers with Gauss
/// estimates within 0.05.
pub fn criterion_5(_seed: u64) -> CriterionReport {
    let mut checks = Vec::new();
    let curve_of = |locus: &loci::SingularLocus| match &locus.geometry {
        LocusGeometry::Curve(c) => c.clone(),
        _ => panic!("expected a curve"),
    };

    // Two doubled pairs: the two singular circles are Hopf-linked.
    {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let curves = loci::partially_umbilic_curves(&e, 0.02).unwrap();
        let rep = topology::link_curves(&e, &curve_of(&curves[0]), &curve_of(&curves[1])).unwrap();
        checks.push(CheckLine::new(
            "two pairs: |lk| of the circles",
            rep.linking_number.abs() as f64,
            1.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            "two pairs: gauss gap",
            rep.gauss_gap,
            0.05,
            Cmp::Below,
        ));
    }

    // Four distinct axes: matched top/bottom pairs link, same-family pairs
    // do not.
    {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let curves = loci::partially_umbilic_curves(&e, 0.02).unwrap();
        // Order: two curves in the third-axis hyperplane (coincident top
        // pair), then two in the second-axis hyperplane (coincident bottom).
        for i in 0..2 {
            let rep = topology::link_curves(&e, &curve_of(&curves[2 + i]), &curve_of(&curves[i]))
                .unwrap();
            checks.push(CheckLine::new(
                format!("four distinct: |lk| of matched pair {}", i + 1),
                rep.linking_number.abs() as f64,
                1.0,
                Cmp::Equal,
            ));
            checks.push(CheckLine::new(
                format!("four distinct: gauss gap of matched pair {}", i + 1),
                rep.gauss_gap,
                0.05,
                Cmp::Below,
            ));
        }
        let rep = topology::link_curves(&e, &curve_of(&curves[2]), &curve_of(&curves[3])).unwrap();
        checks.push(CheckLine::new(
            "four distinct: lk of the same-family pair",
            rep.linking_number as f64,
            0.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            "four distinct: gauss gap of the same-family pair",
            rep.gauss_gap,
            0.05,
            Cmp::Below,
        ));
    }

    // Doubled low pair: the two rotation circles are unlinked; each links
    // the binding ellipse.
    {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()]).unwrap();
        let curves = loci::partially_umbilic_curves(&e, 0.02).unwrap();
        let rep = topology::link_curves(&e, &curve_of(&curves[1]), &curve_of(&curves[2])).unwrap();
        checks.push(CheckLine::new(
            "doubled low pair: lk of the two circles",
            rep.linking_number as f64,
            0.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            "doubled low pair: gauss gap",
            rep.gauss_gap,
            0.05,
            Cmp::Below,
        ));
        let rep = topology::link_curves(&e, &curve_of(&curves[0]), &curve_of(&curves[1])).unwrap();
        checks.push(CheckLine::new(
            "doubled low pair: |lk| ellipse vs circle",
            rep.linking_number.abs() as f64,
            1.0,
            Cmp::Equal,
        ));
    }

    CriterionReport::from_checks(5, "linking table", checks)
}

/// Criterion 6: closed leaves. Fifty random traces per closing field on the
/// two-doubled-pairs and four-distinct-axes surfaces all close within the
/// arclength budget; asserted-circular leaves fit circles to 1e−6. The
/// middle field of the two-doubled-pairs surface consists of arcs ending on
/// the singular circles and is checked as a negative control.
pub fn criterion_6(seed: u64) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let mut checks = Vec::new();

    // Two doubled pairs: extreme fields close on circles.
    {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let chart = Chart::build(&e, ChartKind::BiRotation).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut seeds = Vec::new();
        for field in [0usize, 2] {
            for _ in 0..50 {
                let p = chart.sample_interior(&mut rng, 0.05);
                seeds.push((
                    SurfacePoint::new(&e, chart.eval(p).unwrap()).unwrap(),
                    field,
                ));
            }
        }
        let traces = tracer::trace_batch(&e, &seeds, &cfg);
        let mut closed = 0usize;
        let mut max_gap = 0.0f64;
        let mut max_circle = 0.0f64;
        for tr in traces.iter().map(|t| t.as_ref().unwrap()) {
            if tr.termination == Termination::Closed {
                closed += 1;
                max_gap = max_gap.max(tr.closure_gap.unwrap() / e.diameter());
                max_circle = max_circle.max(tracer::circle_fit_residual(&tr.samples));
            }
        }
        checks.push(CheckLine::new(
            "two pairs: closed leaves of 100",
            closed as f64,
            100.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            "two pairs: max gap / diameter",
            max_gap,
            1e-6,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            "two pairs: max circle residual",
            max_circle,
            1e-6,
            Cmp::Below,
        ));
        // Middle field: arcs that end on the singular circles.
        let mut arcs = 0usize;
        for _ in 0..10 {
            let p = chart.sample_interior(&mut rng, 0.1);
            let seedpt = SurfacePoint::new(&e, chart.eval(p).unwrap()).unwrap();
            let tr = tracer::trace_principal_line(&e, &seedpt, 1, &cfg).unwrap();
            if tr.termination == Termination::HitSingularLocus {
                arcs += 1;
            }
        }
        checks.push(CheckLine::new(
            "two pairs: middle-field arcs of 10",
            arcs as f64,
            10.0,
            Cmp::Equal,
        ));
    }

    // Four distinct axes: every field closes. Seeds are drawn clear of the
    // singular curves in the conserved confocal coordinates of the traced
    // field; a leaf whose invariant coordinate starts within ~0 of a gap
    // endpoint passes arbitrarily close to a singular curve (a separatrix
    // neighbor), where no finite-step integrator can hold the invariants.
    {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let chart = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let (b2, c2) = (3.0, 2.0);
        let margin = 0.05;
        let mut seeds = Vec::new();
        for field in 0..3usize {
            let mut placed = 0;
            let mut attempts = 0;
            while placed < 50 && attempts < 100_000 {
                attempts += 1;
                let p = chart.sample_interior(&mut rng, 0.05);
                let pt = SurfacePoint::new(&e, chart.eval(p).unwrap()).unwrap();
                let k = principal_curvatures(&e, &pt);
                if classify_gaps(k, 1e-4) != DegeneracyTag::Regular {
                    continue;
                }
                let Ok(coords) = confocal::to_confocal(&e, &pt) else {
                    continue;
                };
                let clear = match field {
                    // t sweeps: the leaf reaches t → b², meeting the
                    // bottom-pair curves when v is also near b².
                    0 => coords.v < b2 - margin,
                    // v sweeps through both endpoints.
                    1 => coords.t > b2 + margin && coords.u < c2 - margin,
                    // u sweeps: the leaf reaches u → c².
                    _ => coords.v > c2 + margin,
                };
                if !clear {
                    continue;
                }
                seeds.push((pt, field));
                placed += 1;
            }
        }
        let traces = tracer::trace_batch(&e, &seeds, &cfg);
        let mut closed = 0usize;
        let mut max_gap = 0.0f64;
        let mut max_len = 0.0f64;
        for tr in traces.iter().map(|t| t.as_ref().unwrap()) {
            if tr.termination == Termination::Closed {
                closed += 1;
                max_gap = max_gap.max(tr.closure_gap.unwrap() / e.diameter());
                max_len = max_len.max(*tr.arclength.last().unwrap() / e.diameter());
            }
        }
        checks.push(CheckLine::new(
            "four distinct: closed leaves of 150",
            closed as f64,
            150.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            "four distinct: max gap / diameter",
            max_gap,
            1e-6,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            "four distinct: max period / diameter",
            max_len,
            100.0,
            Cmp::Below,
        ));
    }

    // Circular rotation-orbit leaves on the single-doubled-pair surfaces.
    // The rotation field's sorted index is fixed per class by the measured
    // coincidence structure: top on a doubled low pair, middle on a doubled
    // middle pair (and bottom on a doubled high pair).
    for (axes, field, label) in [
        (
            [2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()],
            2usize,
            "doubled low pair",
        ),
        (
            [2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0],
            1usize,
            "doubled middle pair",
        ),
    ] {
        let e = Ellipsoid4::new(axes).unwrap();
        let chart = Chart::build(&e, ChartKind::PencilPolar).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut max_circle = 0.0f64;
        let mut closed = 0usize;
        let mut tried = 0usize;
        while closed < 10 && tried < 40 {
            tried += 1;
            let p = chart.sample_interior(&mut rng, 0.1);
            let pt = SurfacePoint::new(&e, chart.eval(p).unwrap()).unwrap();
            let k = principal_curvatures(&e, &pt);
            if classify_gaps(k, 1e-3) != DegeneracyTag::Regular {
                continue;
            }
            let tr = tracer::trace_principal_line(&e, &pt, field, &cfg).unwrap();
            if tr.termination == Termination::Closed {
                closed += 1;
                max_circle = max_circle.max(tracer::circle_fit_residual(&tr.samples));
            }
        }
        checks.push(CheckLine::new(
            format!("{label}: circular rotation leaves"),
            closed as f64,
            10.0,
            Cmp::Equal,
        ));
        checks.push(CheckLine::new(
            format!("{label}: max circle residual"),
            max_circle,
            1e-6,
            Cmp::Below,
        ));
    }

    CriterionReport::from_checks(6, "closed leaves and circle fits", checks)
}

/// Criterion 7: confocal roundtrip and mutual gradient orthogonality at 1000
/// interior points.
pub fn criterion_7(seed: u64) -> CriterionReport {
    let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    let [a, b, c, d] = e.canonical_axes();
    let sq = [a * a, b * b, c * c, d * d];
    let mut max_round = 0.0f64;
    let mut max_orth = 0.0f64;
    for _ in 0..1000 {
        let neg = [
            rng.gen_bool(0.5),
            rng.gen_bool(0.5),
            rng.gen_bool(0.5),
            rng.gen_bool(0.5),
        ];
        let chart = Chart::build(&e, ChartKind::Confocal { neg }).unwrap();
        let params = chart.sample_interior(&mut rng, 1e-4);
        let p = SurfacePoint::new(&e, chart.eval(params).unwrap()).unwrap();
        let coords = confocal::to_confocal(&e, &p).unwrap();
        let back = confocal::from_confocal(&e, &coords).unwrap();
        max_round = max_round.max((back.ambient - p.ambient).norm());
        let x = e.user_point_to_canon(&p.ambient);
        let grad = |l: f64| {
            let mut g = [0.0; 4];
            for i in 0..4 {
                g[i] = 2.0 * x[i] / (sq[i] - l);
            }
            g
        };
        let gs = [grad(coords.u), grad(coords.v), grad(coords.t)];
        let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|i| a[i] * b[i]).sum::<f64>();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let cosang =
                    dot(&gs[i], &gs[j]).abs() / (dot(&gs[i], &gs[i]) * dot(&gs[j], &gs[j])).sqrt();
                max_orth = max_orth.max(cosang);
            }
        }
    }
    let checks = vec![
        CheckLine::new("max roundtrip error", max_round, 1e-9, Cmp::Below),
        CheckLine::new(
            "max gradient orthogonality residual",
            max_orth,
            1e-9,
            Cmp::Below,
        ),
    ];
    CriterionReport::from_checks(7, "confocal roundtrip and orthogonality", checks)
}

/// Criterion 8: conformal charts — residuals, corner images and quadrature
/// backend agreement.
pub fn criterion_8(_seed: u64) -> CriterionReport {
    let mut checks = Vec::new();
    let axes3 = [2.0, 3f64.sqrt(), 2f64.sqrt()];
    {
        let chart = conformal::conformal_chart_ellipsoid3(axes3, 41, 41).unwrap();
        checks.push(CheckLine::new(
            "3-axis chart: conformality residual",
            chart.max_conformality_residual,
            1e-6,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            "3-axis chart: off-diagonal residual",
            chart.max_offdiag_residual,
            1e-6,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            "3-axis chart: corner error",
            conformal::corner_residual(&chart),
            1e-8,
            Cmp::Below,
        ));
    }
    let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
    for lambda in [1.5, 3.5] {
        let chart = conformal::conformal_chart_slice(&e, lambda, 41, 41).unwrap();
        checks.push(CheckLine::new(
            format!("slice λ={lambda}: conformality residual"),
            chart.max_conformality_residual,
            1e-6,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            format!("slice λ={lambda}: corner error"),
            conformal::corner_residual(&chart),
            1e-8,
            Cmp::Below,
        ));
    }
    // Quadrature backend agreement on every arclength integral in use.
    let mut worst = 0.0f64;
    for variant in [ArcIntegrand::Full, ArcIntegrand::Reduced] {
        let g = quadrature::arc_s1_ellipsoid3(axes3, variant, QuadBackend::GaussLegendre).unwrap();
        let s =
            quadrature::arc_s1_ellipsoid3(axes3, variant, QuadBackend::AdaptiveSimpson).unwrap();
        worst = worst.max((g - s).abs() / g.abs());
        let g = quadrature::arc_s2_ellipsoid3(axes3, variant, QuadBackend::GaussLegendre).unwrap();
        let s =
            quadrature::arc_s2_ellipsoid3(axes3, variant, QuadBackend::AdaptiveSimpson).unwrap();
        worst = worst.max((g - s).abs() / g.abs());
    }
    let sq = [4.0, 3.0, 2.0, 1.0];
    for lambda in [1.5f64, 3.5] {
        let gaps: [(f64, f64); 2] = if lambda < 2.0 {
            [(3.0, 4.0), (2.0, 3.0)]
        } else {
            [(1.0, 2.0), (2.0, 3.0)]
        };
        for gap in gaps {
            let g = quadrature::arc_slice_gap(
                sq,
                gap,
                lambda,
                ArcIntegrand::Full,
                QuadBackend::GaussLegendre,
            )
            .unwrap();
            let s = quadrature::arc_slice_gap(
                sq,
                gap,
                lambda,
                ArcIntegrand::Full,
                QuadBackend::AdaptiveSimpson,
            )
            .unwrap();
            worst = worst.max((g - s).abs() / g.abs());
        }
    }
    checks.push(CheckLine::new(
        "quadrature backend max relative gap",
        worst,
        1e-8,
        Cmp::Below,
    ));
    // The full-denominator integrand is the conformal one.
    let (winner, full, reduced) = conformal::conformal_variant_report(axes3).unwrap();
    checks.push(CheckLine::new(
        format!("conformal integrand is Full (full {full:.2e}, reduced {reduced:.2e})"),
        if winner == ArcIntegrand::Full {
            1.0
        } else {
            0.0
        },
        1.0,
        Cmp::Equal,
    ));
    CriterionReport::from_checks(8, "conformal charts", checks)
}

/// Criterion 9: slice confinement of the extreme-field leaves and component
/// counts of the slices.
pub fn criterion_9(seed: u64) -> CriterionReport {
    let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
    let cfg = TraceConfig::for_surface(&e);
    let mut checks = Vec::new();
    let mut max_res = 0.0f64;
    let mut closed_all = true;
    for _ in 0..10 {
        let coords = confocal::ConfocalCoords {
            u: rng.gen_range(1.1..1.9),
            v: rng.gen_range(2.1..2.9),
            t: rng.gen_range(3.1..3.9),
            octant: [
                rng.gen_bool(0.5),
                rng.gen_bool(0.5),
                rng.gen_bool(0.5),
                rng.gen_bool(0.5),
            ],
        };
        let seed_pt = confocal::from_confocal(&e, &coords).unwrap();
        // Field 0 leaves keep (u, v) fixed; field 2 leaves keep (v, t).
        for (field, lambdas) in [
            (0usize, [coords.u, coords.v]),
            (2usize, [coords.v, coords.t]),
        ] {
            let tr = tracer::trace_principal_line(&e, &seed_pt, field, &cfg).unwrap();
            closed_all &= tr.termination == Termination::Closed;
            for lam in lambdas {
                let (slice, _) = confocal::QuarticSlice::new(&e, lam).unwrap();
                max_res = max_res.max(tracer::slice_confinement(&e, &tr, &slice).unwrap());
            }
        }
    }
    checks.push(CheckLine::new(
        "all extreme-field leaves closed",
        if closed_all { 1.0 } else { 0.0 },
        1.0,
        Cmp::Equal,
    ));
    checks.push(CheckLine::new(
        "max |Q_λ − 1| along leaves",
        max_res,
        1e-7,
        Cmp::Below,
    ));
    let torus = confocal::slice_component_count(&e, 2.5, 16).unwrap();
    let spheres = confocal::slice_component_count(&e, 1.5, 16).unwrap();
    checks.push(CheckLine::new(
        "components at λ = 2.5",
        torus as f64,
        1.0,
        Cmp::Equal,
    ));
    checks.push(CheckLine::new(
        "components at λ = 1.5",
        spheres as f64,
        2.0,
        Cmp::Equal,
    ));
    CriterionReport::from_checks(9, "slice confinement and component counts", checks)
}

/// Criterion 10: the restricted discriminant is proportional to the face
/// products with a constant ratio on every face; reports the fitted constant.
pub fn criterion_10(_seed: u64) -> CriterionReport {
    let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
    let gaps = AxisGaps::from_all_distinct(&e).unwrap();
    let mut checks = Vec::new();
    for (face, label) in [
        (ChartFace::W0, "w = 0 face (p5·p6²)"),
        (ChartFace::V0, "v = 0 face (p3·p4²)"),
        (ChartFace::U0, "u = 0 face (p1·p2²)"),
    ] {
        let mut ratios = Vec::new();
        for i in 0..20 {
            for j in 0..20 {
                let x = -0.63 + 1.26 * i as f64 / 19.0;
                let y = -0.63 + 1.26 * j as f64 / 19.0;
                let (disc, scale) =
                    discriminant::restricted_discriminant(&e, face, [x, y]).unwrap();
                let prod = discriminant::face_poly_product(&gaps, face, [x, y]);
                if prod.abs() > 1e-7 * scale.max(1.0) {
                    ratios.push(disc / prod);
                }
            }
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let spread = ratios
            .iter()
            .map(|r| (r - mean).abs() / mean.abs())
            .fold(0.0f64, f64::max);
        checks.push(CheckLine::new(
            format!("{label}: ratio spread"),
            spread,
            1e-8,
            Cmp::Below,
        ));
        checks.push(CheckLine::new(
            format!("{label}: fitted constant (−1 expected; −1/6 is a different scaling)"),
            (mean - (-1.0)).abs(),
            1e-8,
            Cmp::Below,
        ));
    }
    CriterionReport::from_checks(10, "discriminant factorization on the chart faces", checks)
}

/// Run the full acceptance checklist.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    run_all_with(seed, crate::surface::EPS_DEG)
}

/// Run the checklist with an explicit classification tolerance.
pub fn run_all_with(seed: u64, eps_deg: f64) -> Vec<CriterionReport> {
    vec![
        criterion_1(seed),
        criterion_2_with(seed, eps_deg),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(seed),
        criterion_6(seed),
        criterion_7(seed),
        criterion_8(seed),
        criterion_9(seed),
        criterion_10(seed),
    ]
}
