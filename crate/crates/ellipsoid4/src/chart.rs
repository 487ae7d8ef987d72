//! Explicit parametrizations of the ellipsoid, one per degeneracy regime,
//! each evaluated together with exact first and second derivatives.
//!
//! Every chart is expressed on the *canonical* slot arrangement of its
//! surface class (see [`crate::surface::Ellipsoid4::canonical_axes`]); the
//! stored permutation carries ambient points back to user coordinate slots.

use nalgebra::Vector4;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::surface::{AxisClass, Ellipsoid4};

/// Which parametrization formula a chart uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChartKind {
    /// Spherical cap coordinates around the odd axis of a triple-axis
    /// surface: (ρ cos u sin v, ρ sin u sin v, ρ cos v, w), ρ = a√(b²−w²)/b.
    PolarCap,
    /// Tube around the equatorial ellipse x = y = 0 of a triple-axis
    /// surface: (u, v, √(a²−u²−v²) cos t, (b/a)√(a²−u²−v²) sin t).
    EquatorTube,
    /// Product-of-circles chart for two doubled pairs:
    /// (a cos u cos t, a sin u cos t, b cos v sin t, b sin v sin t).
    BiRotation,
    /// Graph over the (v,w)-disk near the large circle of two doubled
    /// pairs: (a cos u √(b²−v²−w²)/b, a sin u √(b²−v²−w²)/b, v, w).
    PairCap,
    /// Rotationally symmetric chart when the last two axes coincide:
    /// (a cos u S, b sin u S, cv, cw), S = √(1−v²−w²).
    PencilPolar,
    /// Rotation-angle graph chart when the last two axes coincide:
    /// (au, bv, c cos t S, c sin t S), S = √(1−u²−v²).
    PencilGraph,
    /// Graph over the open unit ball with the root on the last slot:
    /// (au, bv, cw, ±d√(1−u²−v²−w²)).
    BallW { neg: bool },
    /// Graph over the open unit ball with the root on the first slot:
    /// (±a√(1−u²−v²−w²), bv, cu, dw).
    BallX { neg: bool },
    /// One octant of the triply orthogonal coordinate system of a
    /// four-distinct-axes surface; `neg[i]` flips the sign of coordinate i.
    Confocal { neg: [bool; 4] },
}

/// A parametrization bound to a concrete surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub kind: ChartKind,
    axes: [f64; 4],
    canon_to_user: [usize; 4],
}

impl Chart {
    /// Bind `kind` to `surface`, checking the axis pattern the formula needs.
    pub fn build(surface: &Ellipsoid4, kind: ChartKind) -> Result<Self> {
        let axes = surface.canonical_axes();
        let eq = |i: usize, j: usize| (axes[i] - axes[j]).abs() <= 1e-12 * axes[i].abs();
        let ok = match kind {
            ChartKind::PolarCap | ChartKind::EquatorTube => eq(0, 1) && eq(1, 2),
            ChartKind::BiRotation | ChartKind::PairCap => eq(0, 1) && eq(2, 3),
            ChartKind::PencilPolar | ChartKind::PencilGraph => eq(2, 3),
            ChartKind::BallW { .. } | ChartKind::BallX { .. } => true,
            ChartKind::Confocal { .. } => surface.class() == AxisClass::AllDistinct,
        };
        if !ok {
            return Err(Error::WrongAxisClass {
                expected: "an axis pattern matching the chart formula",
                got: surface.class(),
            });
        }
        // Recover the surface's canonical permutation by probing the mapping.
        let mut canon_to_user = [0usize; 4];
        let mapped = surface.canon_point_to_user([1.0, 2.0, 3.0, 4.0]);
        for k in 0..4 {
            for i in 0..4 {
                if (mapped[i] - (k as f64 + 1.0)).abs() < 0.5 {
                    canon_to_user[k] = i;
                }
            }
        }
        Ok(Chart {
            kind,
            axes,
            canon_to_user,
        })
    }

    /// The natural atlas chart for each surface class.
    pub fn default_for(surface: &Ellipsoid4) -> Chart {
        let kind = match surface.class() {
            AxisClass::AllEqual | AxisClass::ThreeEqualLast | AxisClass::ThreeEqualFirst => {
                ChartKind::PolarCap
            }
            AxisClass::TwoPairs => ChartKind::BiRotation,
            AxisClass::PairLow | AxisClass::PairHigh | AxisClass::PairMiddle => {
                ChartKind::PencilPolar
            }
            AxisClass::AllDistinct => ChartKind::BallW { neg: false },
        };
        Chart::build(surface, kind).expect("default chart always matches the class")
    }

    /// Canonical semi-axes the formula consumes.
    pub fn canonical_axes(&self) -> [f64; 4] {
        self.axes
    }

    pub fn check_domain(&self, p: [f64; 3]) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::DomainViolation(format!(
                "{:?} outside {:?}",
                p, self.kind
            )))
        }
    }

    /// Strict interior of the chart domain. Angular parameters are
    /// unconstrained; radial / slab parameters must respect their bounds.
    pub fn contains(&self, p: [f64; 3]) -> bool {
        match self.kind {
            ChartKind::PolarCap => {
                let b = self.axes[3];
                p[1] > 0.0 && p[1] < std::f64::consts::PI && p[2].abs() < b
            }
            ChartKind::EquatorTube => {
                let a = self.axes[0];
                p[0] * p[0] + p[1] * p[1] < a * a
            }
            ChartKind::BiRotation => p[2] > 0.0 && p[2] < std::f64::consts::PI,
            ChartKind::PairCap => {
                let b = self.axes[2];
                p[1] * p[1] + p[2] * p[2] < b * b
            }
            ChartKind::PencilPolar => p[1] * p[1] + p[2] * p[2] < 1.0,
            ChartKind::PencilGraph => p[0] * p[0] + p[1] * p[1] < 1.0,
            ChartKind::BallW { .. } | ChartKind::BallX { .. } => {
                p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < 1.0
            }
            ChartKind::Confocal { .. } => {
                let [sa, sb, sc, sd] = self.squared_axes();
                p[0] > sd && p[0] < sc && p[1] > sc && p[1] < sb && p[2] > sb && p[2] < sa
            }
        }
    }

    fn squared_axes(&self) -> [f64; 4] {
        [
            self.axes[0] * self.axes[0],
            self.axes[1] * self.axes[1],
            self.axes[2] * self.axes[2],
            self.axes[3] * self.axes[3],
        ]
    }

    /// Draw a uniform interior point, shrunk away from the boundary by
    /// `margin` (a fraction of the domain size).
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, margin: f64) -> [f64; 3] {
        use std::f64::consts::PI;
        let ang = |rng: &mut R| rng.gen_range(0.0..2.0 * PI);
        let disk = |rng: &mut R, radius: f64| {
            let r = radius * (1.0 - margin) * rng.gen_range(0.0f64..1.0).sqrt();
            let th = rng.gen_range(0.0..2.0 * PI);
            (r * th.cos(), r * th.sin())
        };
        match self.kind {
            ChartKind::PolarCap => {
                let b = self.axes[3];
                [
                    ang(rng),
                    rng.gen_range(margin * PI..(1.0 - margin) * PI),
                    rng.gen_range(-b * (1.0 - margin)..b * (1.0 - margin)),
                ]
            }
            ChartKind::EquatorTube => {
                let (u, v) = disk(rng, self.axes[0]);
                [u, v, ang(rng)]
            }
            ChartKind::BiRotation => [
                ang(rng),
                ang(rng),
                rng.gen_range(margin * PI..(1.0 - margin) * PI),
            ],
            ChartKind::PairCap => {
                let (v, w) = disk(rng, self.axes[2]);
                [ang(rng), v, w]
            }
            ChartKind::PencilPolar => {
                let (v, w) = disk(rng, 1.0);
                [ang(rng), v, w]
            }
            ChartKind::PencilGraph => {
                let (u, v) = disk(rng, 1.0);
                [u, v, ang(rng)]
            }
            ChartKind::BallW { .. } | ChartKind::BallX { .. } => loop {
                let p = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                if r2 < (1.0 - margin) * (1.0 - margin) {
                    return p;
                }
            },
            ChartKind::Confocal { .. } => {
                let [sa, sb, sc, sd] = self.squared_axes();
                let span = |lo: f64, hi: f64, rng: &mut R| {
                    let m = margin * (hi - lo);
                    rng.gen_range(lo + m..hi - m)
                };
                [span(sd, sc, rng), span(sc, sb, rng), span(sb, sa, rng)]
            }
        }
    }

    /// Ambient coordinates (canonical slots) with exact first and second
    /// derivatives with respect to the chart parameters.
    pub fn eval_jet_canonical(&self, p: [f64; 3]) -> Result<[Jet3; 4]> {
        self.check_domain(p)?;
        let u = Jet3::variable(p[0], 0);
        let v = Jet3::variable(p[1], 1);
        let w = Jet3::variable(p[2], 2);
        let [a, b, c, d] = self.axes;
        Ok(match self.kind {
            ChartKind::PolarCap => {
                let (aa, bb) = (a, d);
                let rho = ((-(w * w) + bb * bb).sqrt()).scale(aa / bb);
                [
                    rho * u.cos() * v.sin(),
                    rho * u.sin() * v.sin(),
                    rho * v.cos(),
                    w,
                ]
            }
            ChartKind::EquatorTube => {
                let (aa, bb) = (a, d);
                let s = (-(u * u) - v * v + aa * aa).sqrt();
                [u, v, s * w.cos(), (s * w.sin()).scale(bb / aa)]
            }
            ChartKind::BiRotation => {
                let (aa, bb) = (a, c);
                [
                    (u.cos() * w.cos()).scale(aa),
                    (u.sin() * w.cos()).scale(aa),
                    (v.cos() * w.sin()).scale(bb),
                    (v.sin() * w.sin()).scale(bb),
                ]
            }
            ChartKind::PairCap => {
                let (aa, bb) = (a, c);
                let s = ((-(v * v) - w * w + bb * bb).sqrt()).scale(aa / bb);
                [s * u.cos(), s * u.sin(), v, w]
            }
            ChartKind::PencilPolar => {
                let s = (-(v * v) - w * w + 1.0).sqrt();
                [
                    (u.cos() * s).scale(a),
                    (u.sin() * s).scale(b),
                    v.scale(c),
                    w.scale(c),
                ]
            }
            ChartKind::PencilGraph => {
                let s = (-(u * u) - v * v + 1.0).sqrt();
                [
                    u.scale(a),
                    v.scale(b),
                    (w.cos() * s).scale(c),
                    (w.sin() * s).scale(c),
                ]
            }
            ChartKind::BallW { neg } => {
                let s = (-(u * u) - v * v - w * w + 1.0).sqrt();
                let sign = if neg { -d } else { d };
                [u.scale(a), v.scale(b), w.scale(c), s.scale(sign)]
            }
            ChartKind::BallX { neg } => {
                let s = (-(u * u) - v * v - w * w + 1.0).sqrt();
                let sign = if neg { -a } else { a };
                [s.scale(sign), v.scale(b), u.scale(c), w.scale(d)]
            }
            ChartKind::Confocal { neg } => {
                let sq = self.squared_axes();
                let mut out = [Jet3::ZERO; 4];
                for i in 0..4 {
                    let ai2 = sq[i];
                    let mut denom = 1.0;
                    for j in 0..4 {
                        if j != i {
                            denom *= ai2 - sq[j];
                        }
                    }
                    let x2 = (-u + ai2) * (-v + ai2) * (-w + ai2) * (ai2 / denom);
                    let sign = if neg[i] { -1.0 } else { 1.0 };
                    out[i] = x2.sqrt().scale(sign);
                }
                out
            }
        })
    }

    /// Ambient point in the *user's* coordinate slots.
    pub fn eval(&self, p: [f64; 3]) -> Result<Vector4<f64>> {
        let jets = self.eval_jet_canonical(p)?;
        let mut out = Vector4::zeros();
        for k in 0..4 {
            out[self.canon_to_user[k]] = jets[k].val;
        }
        Ok(out)
    }

    /// Ambient tangent vectors ∂x/∂p_i in user slots.
    pub fn tangents(&self, p: [f64; 3]) -> Result<[Vector4<f64>; 3]> {
        let jets = self.eval_jet_canonical(p)?;
        let mut out = [Vector4::zeros(); 3];
        for (k, jet) in jets.iter().enumerate() {
            for i in 0..3 {
                out[i][self.canon_to_user[k]] = jet.grad[i];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn every_chart() -> Vec<(Ellipsoid4, Chart)> {
        let mut out = Vec::new();
        let cases: Vec<([f64; 4], ChartKind)> = vec![
            ([2.0, 2.0, 2.0, 1.0], ChartKind::PolarCap),
            ([2.0, 2.0, 2.0, 1.0], ChartKind::EquatorTube),
            ([2.0, 2.0, 1.0, 1.0], ChartKind::BiRotation),
            ([2.0, 2.0, 1.0, 1.0], ChartKind::PairCap),
            (
                [2.0, 3f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()],
                ChartKind::PencilPolar,
            ),
            ([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0], ChartKind::PencilPolar),
            ([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0], ChartKind::PencilGraph),
            (
                [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
                ChartKind::BallW { neg: false },
            ),
            (
                [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
                ChartKind::BallX { neg: true },
            ),
            (
                [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
                ChartKind::Confocal { neg: [false; 4] },
            ),
            (
                [2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0],
                ChartKind::Confocal {
                    neg: [true, false, true, false],
                },
            ),
        ];
        for (axes, kind) in cases {
            let e = Ellipsoid4::new(axes).unwrap();
            out.push((e, Chart::build(&e, kind).unwrap()));
        }
        out
    }

    #[test]
    fn chart_points_lie_on_the_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (surface, chart) in every_chart() {
            for _ in 0..200 {
                let p = chart.sample_interior(&mut rng, 0.02);
                let x = chart.eval(p).unwrap();
                let q = surface.quadric(&x);
                assert!(
                    (q - 1.0).abs() < 1e-12,
                    "{:?} at {:?}: |Q-1| = {:e}",
                    chart.kind,
                    p,
                    (q - 1.0).abs()
                );
            }
        }
    }

    #[test]
    fn tangents_are_linearly_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (_, chart) in every_chart() {
            for _ in 0..50 {
                let p = chart.sample_interior(&mut rng, 0.05);
                let t = chart.tangents(p).unwrap();
                let mut gram = nalgebra::Matrix3::zeros();
                for i in 0..3 {
                    for j in 0..3 {
                        gram[(i, j)] = t[i].dot(&t[j]);
                    }
                }
                assert!(gram.determinant() > 0.0, "{:?} at {:?}", chart.kind, p);
            }
        }
    }

    #[test]
    fn ball_chart_pole() {
        // Chart origin of the positive w-half maps to the pole (0,0,0,d).
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        let x = c.eval([0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(x[3], 1.0, max_relative = 1e-15);
        assert_eq!((x[0], x[1], x[2]), (0.0, 0.0, 0.0));
    }

    #[test]
    fn confocal_worked_point() {
        // (a²,b²,c²,d²) = (4,3,2,1) at (u,v,t) = (1.5,2.5,3.5): the four
        // squared coordinates are 1.25, 0.5625, 0.375, 0.3125.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::Confocal { neg: [false; 4] }).unwrap();
        let x = c.eval([1.5, 2.5, 3.5]).unwrap();
        let expect = [1.25f64, 0.5625, 0.375, 0.3125];
        for i in 0..4 {
            assert_relative_eq!(x[i], expect[i].sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn pencil_chart_reaches_the_binding_ellipse() {
        // Doubled middle pair (2, √2, √2, 1): canonical slots (2, 1, √2, √2),
        // so the canonical point (0, 1, 0, 0) lands on user slot 3.
        let e = Ellipsoid4::new([2.0, 2f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::PencilPolar).unwrap();
        let x = c.eval([std::f64::consts::FRAC_PI_2, 0.0, 0.0]).unwrap();
        assert_relative_eq!(x[3], 1.0, epsilon = 1e-15);
        assert!(x[0].abs() < 1e-15 && x[1].abs() < 1e-15 && x[2].abs() < 1e-15);
    }

    #[test]
    fn domain_violations_are_reported() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        assert!(matches!(
            c.eval([0.9, 0.9, 0.9]),
            Err(Error::DomainViolation(_))
        ));
        let cf = Chart::build(&e, ChartKind::Confocal { neg: [false; 4] }).unwrap();
        assert!(cf.eval([0.5, 2.5, 3.5]).is_err());
    }

    #[test]
    fn chart_kind_requires_matching_class() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        assert!(Chart::build(&e, ChartKind::PolarCap).is_err());
        assert!(Chart::build(&e, ChartKind::BiRotation).is_err());
    }
}
