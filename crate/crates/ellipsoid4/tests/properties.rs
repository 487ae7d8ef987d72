//! Property tests over randomly generated inputs.

use ellipsoid4::chart::{Chart, ChartKind};
use ellipsoid4::cubic::CubicPoly;
use ellipsoid4::discriminant::{pu_quartic_uv, pu_quartic_uv_grouped, AxisGaps};
use ellipsoid4::surface::Ellipsoid4;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Any interior chart point satisfies the defining equation to 1e−12.
    #[test]
    fn chart_points_satisfy_the_quadric(
        ax in 0.5f64..3.0, bx in 0.5f64..3.0, cx in 0.5f64..3.0, dx in 0.5f64..3.0,
        u in -3.0f64..3.0, r in 0.0f64..0.95, th in 0.0f64..std::f64::consts::TAU,
    ) {
        let e = Ellipsoid4::new([ax.max(bx), ax.min(bx), cx.max(dx), cx.min(dx)]).unwrap();
        let chart = Chart::default_for(&e);
        let p = match chart.kind {
            ChartKind::PolarCap => [u, 0.3 + 2.5 * r, 0.9 * (2.0 * r - 0.9) * e.canonical_axes()[3]],
            ChartKind::BiRotation => [u, th, 0.2 + 2.7 * r],
            _ => [u, r * th.cos(), r * th.sin()],
        };
        if chart.contains(p) {
            let x = chart.eval(p).unwrap();
            prop_assert!((e.quadric(&x) - 1.0).abs() < 1e-12);
        }
    }

    /// The two printed groupings of the disk quartic agree identically.
    #[test]
    fn quartic_groupings_agree(
        s in 0.05f64..4.0, t in 0.05f64..4.0,
        r in 0.0f64..0.99, th in 0.0f64..std::f64::consts::TAU,
    ) {
        let gaps = AxisGaps { r: 0.0, s, t };
        let (u, v) = (r * th.cos(), r * th.sin());
        let a = pu_quartic_uv(&gaps, u, v).unwrap();
        let b = pu_quartic_uv_grouped(&gaps, u, v).unwrap();
        let scale = (s + t) * (s + t);
        prop_assert!((a - b).abs() < 1e-12 * scale);
    }

    /// Sorted real roots reconstructed from random real triples evaluate to
    /// ~0 under the original cubic and come back sorted.
    #[test]
    fn cubic_roots_roundtrip(
        r0 in -3.0f64..3.0, d1 in 1e-6f64..3.0, d2 in 1e-6f64..3.0, lead in 0.1f64..4.0,
    ) {
        let (r1, r2) = (r0 + d1, r0 + d1 + d2);
        let a = lead;
        let b = -lead * (r0 + r1 + r2);
        let c = lead * (r0 * r1 + r0 * r2 + r1 * r2);
        let d = -lead * r0 * r1 * r2;
        let p = CubicPoly::new(a, b, c, d);
        let roots = p.real_roots_sorted();
        prop_assert!(roots[0] <= roots[1] && roots[1] <= roots[2]);
        let scale = 1.0 + r2.abs().max(r0.abs());
        for (got, want) in roots.iter().zip([r0, r1, r2]) {
            // Multiple-root clusters are resolved to the snap tolerance.
            let tol = if d1.min(d2) < 1e-4 { 1e-4 } else { 1e-9 };
            prop_assert!((got - want).abs() < tol * scale, "{got} vs {want}");
        }
    }
}
