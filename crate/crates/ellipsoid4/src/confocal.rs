//! The triply orthogonal confocal coordinate system of a four-distinct-axes
//! ellipsoid: forward and inverse maps, closed-form fundamental forms and
//! curvatures, and the quartic slices cut by confocal quadrics.

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, ChartKind};
use crate::error::{Error, Result};
use crate::numerics::bisect_newton;
use crate::surface::{AxisClass, Ellipsoid4, SurfacePoint};

/// Confocal coordinates (u, v, t) with u ∈ (d²,c²), v ∈ (c²,b²), t ∈ (b²,a²),
/// plus the sign octant of the ambient point (in canonical slots).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfocalCoords {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    /// neg[i] = canonical coordinate i is negative.
    pub octant: [bool; 4],
}

impl ConfocalCoords {
    pub fn chart(&self, surface: &Ellipsoid4) -> Result<Chart> {
        Chart::build(surface, ChartKind::Confocal { neg: self.octant })
    }
}

/// Squared canonical axes, descending.
fn squared_axes(surface: &Ellipsoid4) -> Result<[f64; 4]> {
    if surface.class() != AxisClass::AllDistinct {
        return Err(Error::WrongAxisClass {
            expected: "four distinct axes",
            got: surface.class(),
        });
    }
    let [a, b, c, d] = surface.canonical_axes();
    Ok([a * a, b * b, c * c, d * d])
}

/// The confocal family member: Q(p, λ) = Σ xᵢ²/(aᵢ² − λ).
pub fn confocal_quadric(surface: &Ellipsoid4, p: &Vector4<f64>, lambda: f64) -> Result<f64> {
    let sq = squared_axes(surface)?;
    let x = surface.user_point_to_canon(p);
    for &s in &sq {
        if s == lambda {
            return Err(Error::PoleContact { lambda });
        }
    }
    Ok((0..4).map(|i| x[i] * x[i] / (sq[i] - lambda)).sum())
}

/// Invert the coordinate system at a surface point off the coordinate
/// hyperplanes: the three roots of Q(p, λ) = 1 in the open pole gaps.
///
/// Between consecutive poles of λ ↦ Q(p, λ) the function increases
/// monotonically from −∞ to +∞, so each gap holds exactly one root; the
/// bracket is shrunk by a pole margin and the root polished by Newton.
pub fn to_confocal(surface: &Ellipsoid4, point: &SurfacePoint) -> Result<ConfocalCoords> {
    let sq = squared_axes(surface)?;
    let x = surface.user_point_to_canon(&point.ambient);
    let scale = surface.diameter() / 2.0;
    let min_abs = x.iter().fold(f64::INFINITY, |m, xi| m.min(xi.abs()));
    if min_abs < 1e-10 * scale {
        return Err(Error::OnCoordinateHyperplane {
            min_abs_coord: min_abs,
        });
    }
    let f = |l: f64| (0..4).map(|i| x[i] * x[i] / (sq[i] - l)).sum::<f64>() - 1.0;
    let df = |l: f64| {
        (0..4)
            .map(|i| x[i] * x[i] / ((sq[i] - l) * (sq[i] - l)))
            .sum::<f64>()
    };

    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        // Gap k: (sq[3-k], sq[2-k]) — ascending gaps (d²,c²), (c²,b²), (b²,a²).
        let (lo_pole, hi_pole) = (sq[3 - k], sq[2 - k]);
        let len = hi_pole - lo_pole;
        // The root sits at distance ~ x²/(1 − rest) from a pole; shrink the
        // margin below that estimate when a coordinate is small.
        let near_lo = x[3 - k] * x[3 - k];
        let near_hi = x[2 - k] * x[2 - k];
        let mut m_lo = (1e-12 * len).min(0.25 * near_lo);
        let mut m_hi = (1e-12 * len).min(0.25 * near_hi);
        let tiny = f64::EPSILON * (1.0 + lo_pole.abs().max(hi_pole.abs()));
        m_lo = m_lo.max(tiny);
        m_hi = m_hi.max(tiny);
        let (lo, hi) = (lo_pole + m_lo, hi_pole - m_hi);
        // F runs from −∞ at the lower pole to +∞ at the upper pole.
        if !(f(lo) < 0.0 && f(hi) > 0.0) {
            // Root trapped inside a margin: asymptotic start plus Newton.
            let (pole, x2) = if f(lo) >= 0.0 {
                (lo_pole, near_lo)
            } else {
                (hi_pole, near_hi)
            };
            let rest: f64 = (0..4)
                .filter(|&i| sq[i] != pole)
                .map(|i| x[i] * x[i] / (sq[i] - pole))
                .sum();
            let mut l = pole + x2 / (1.0 - rest);
            for _ in 0..50 {
                let step = f(l) / df(l);
                if !step.is_finite() || step == 0.0 {
                    break;
                }
                l -= step;
                if step.abs() < 1e-16 * (1.0 + l.abs()) {
                    break;
                }
            }
            *root = l;
        } else {
            *root = bisect_newton(f, df, lo, hi, 80);
        }
    }
    let octant = [x[0] < 0.0, x[1] < 0.0, x[2] < 0.0, x[3] < 0.0];
    let coords = ConfocalCoords {
        u: roots[0],
        v: roots[1],
        t: roots[2],
        octant,
    };
    // Residual audit on each recovered root.
    for l in [coords.u, coords.v, coords.t] {
        let r = f(l).abs();
        if r > 1e-11 * df(l).abs().max(1.0) {
            return Err(Error::OnCoordinateHyperplane {
                min_abs_coord: min_abs,
            });
        }
    }
    Ok(coords)
}

/// Ambient point of confocal coordinates (canonical octant signs applied,
/// then mapped to user slots).
pub fn from_confocal(surface: &Ellipsoid4, coords: &ConfocalCoords) -> Result<SurfacePoint> {
    let chart = coords.chart(surface)?;
    let p = chart.eval([coords.u, coords.v, coords.t])?;
    SurfacePoint::new(surface, p)
}

/// Closed-form fundamental forms in the confocal chart, both diagonal:
///
/// I  = −¼ [ u(u−v)(u−t)/ξ(u) du² + v(v−u)(v−t)/ξ(v) dv² + t(t−u)(t−v)/ξ(t) dt² ]
/// II = −¼ (abcd/√(uvt)) [ (u−v)(u−t)/ξ(u) du² + (v−u)(v−t)/ξ(v) dv² + (t−u)(t−v)/ξ(t) dt² ]
///
/// with ξ(λ) = (a²−λ)(b²−λ)(c²−λ)(d²−λ).
pub fn confocal_forms_closed(
    surface: &Ellipsoid4,
    coords: &ConfocalCoords,
) -> Result<([f64; 3], [f64; 3])> {
    let sq = squared_axes(surface)?;
    let xi = |l: f64| (sq[0] - l) * (sq[1] - l) * (sq[2] - l) * (sq[3] - l);
    let (u, v, t) = (coords.u, coords.v, coords.t);
    let gi = [
        -0.25 * u * (u - v) * (u - t) / xi(u),
        -0.25 * v * (v - u) * (v - t) / xi(v),
        -0.25 * t * (t - u) * (t - v) / xi(t),
    ];
    let [a, b, c, d] = surface.canonical_axes();
    let factor = a * b * c * d / (u * v * t).sqrt();
    let bi = [
        -0.25 * factor * (u - v) * (u - t) / xi(u),
        -0.25 * factor * (v - u) * (v - t) / xi(v),
        -0.25 * factor * (t - u) * (t - v) / xi(t),
    ];
    Ok((gi, bi))
}

/// Closed-form principal curvatures (abcd/√(uvt))·(1/u, 1/v, 1/t), ascending.
pub fn confocal_curvatures(surface: &Ellipsoid4, coords: &ConfocalCoords) -> Result<[f64; 3]> {
    let [a, b, c, d] = surface.canonical_axes();
    if surface.class() != AxisClass::AllDistinct {
        return Err(Error::WrongAxisClass {
            expected: "four distinct axes",
            got: surface.class(),
        });
    }
    let factor = a * b * c * d / (coords.u * coords.v * coords.t).sqrt();
    // u < v < t makes 1/u > 1/v > 1/t; ascending order is (1/t, 1/v, 1/u).
    Ok([factor / coords.t, factor / coords.v, factor / coords.u])
}

/// A quartic slice: the intersection of the surface with the confocal
/// quadric at parameter λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticSlice {
    pub lambda: f64,
}

/// Which pole gap a slice parameter falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceRegime {
    /// λ ∈ (d², c²): two sphere-like components split by the sign of the
    /// fourth canonical coordinate.
    TwoSpheresLow,
    /// λ ∈ (c², b²): a single torus component.
    Torus,
    /// λ ∈ (b², a²): two sphere-like components split by the sign of the
    /// first canonical coordinate.
    TwoSpheresHigh,
}

impl QuarticSlice {
    pub fn new(surface: &Ellipsoid4, lambda: f64) -> Result<(QuarticSlice, SliceRegime)> {
        let sq = squared_axes(surface)?;
        for &s in &sq {
            if (s - lambda).abs() <= 1e-12 * sq[0] {
                return Err(Error::PoleContact { lambda });
            }
        }
        let regime = if lambda > sq[3] && lambda < sq[2] {
            SliceRegime::TwoSpheresLow
        } else if lambda > sq[2] && lambda < sq[1] {
            SliceRegime::Torus
        } else if lambda > sq[1] && lambda < sq[0] {
            SliceRegime::TwoSpheresHigh
        } else {
            return Err(Error::DomainViolation(format!(
                "λ = {lambda} outside the confocal gaps of {sq:?}"
            )));
        };
        Ok((QuarticSlice { lambda }, regime))
    }

    /// Signed membership residual Q_λ(p) − 1; ~0 for points on the slice.
    pub fn membership(&self, surface: &Ellipsoid4, p: &Vector4<f64>) -> Result<f64> {
        Ok(confocal_quadric(surface, p, self.lambda)? - 1.0)
    }
}

/// Sample the slice into an ambient point cloud: the slice fixes one
/// confocal coordinate at λ and sweeps the other two over their gaps in all
/// sixteen octants. Grid lines include near-boundary values so that octant
/// patches almost touch across the coordinate-hyperplane seams.
pub fn sample_slice(
    surface: &Ellipsoid4,
    slice: &QuarticSlice,
    n: usize,
) -> Result<Vec<Vector4<f64>>> {
    let sq = squared_axes(surface)?;
    let (_, regime) = QuarticSlice::new(surface, slice.lambda)?;
    // Free coordinate intervals, skipping the gap that holds λ.
    let gaps = [(sq[3], sq[2]), (sq[2], sq[1]), (sq[1], sq[0])];
    let fixed_gap = match regime {
        SliceRegime::TwoSpheresLow => 0,
        SliceRegime::Torus => 1,
        SliceRegime::TwoSpheresHigh => 2,
    };
    let free: Vec<(f64, f64)> = (0..3)
        .filter(|&g| g != fixed_gap)
        .map(|g| gaps[g])
        .collect();
    let mut out = Vec::with_capacity(16 * n * n);
    let margin = 1e-6;
    for oct in 0..16 {
        let neg = [oct & 1 != 0, oct & 2 != 0, oct & 4 != 0, oct & 8 != 0];
        let chart = Chart::build(surface, ChartKind::Confocal { neg })?;
        for i in 0..n {
            for j in 0..n {
                let f = |k: usize, idx: usize| {
                    let (lo, hi) = free[k];
                    let s = idx as f64 / (n - 1) as f64;
                    lo + (margin + (1.0 - 2.0 * margin) * s) * (hi - lo)
                };
                let (c1, c2) = (f(0, i), f(1, j));
                let params = match fixed_gap {
                    0 => [slice.lambda, c1, c2],
                    1 => [c1, slice.lambda, c2],
                    _ => [c1, c2, slice.lambda],
                };
                out.push(chart.eval(params)?);
            }
        }
    }
    Ok(out)
}

/// Count connected components of a point cloud by union-find with a linking
/// radius proportional to the sampling density.
pub fn component_count(points: &[Vector4<f64>], radius: f64) -> usize {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let r2 = radius * radius;
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm_squared() < r2 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Count the slice's connected components by flood fill over a sampled cloud.
///
/// Same-patch grid neighbors are connected structurally; octant seams are
/// bridged by a small distance test on the boundary layer only (mirrored
/// boundary points sit ~2√margin apart, far below any genuine component
/// separation).
pub fn slice_component_count(surface: &Ellipsoid4, lambda: f64, n: usize) -> Result<usize> {
    let (slice, _) = QuarticSlice::new(surface, lambda)?;
    let pts = sample_slice(surface, &slice, n)?;
    let total = pts.len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let union = |parent: &mut Vec<usize>, i: usize, j: usize| {
        let (ri, rj) = (find(parent, i), find(parent, j));
        if ri != rj {
            parent[ri] = rj;
        }
    };
    let id = |oct: usize, i: usize, j: usize| oct * n * n + i * n + j;
    // Structural adjacency inside each octant patch.
    for oct in 0..16 {
        for i in 0..n {
            for j in 0..n {
                if i + 1 < n {
                    union(&mut parent, id(oct, i, j), id(oct, i + 1, j));
                }
                if j + 1 < n {
                    union(&mut parent, id(oct, i, j), id(oct, i, j + 1));
                }
            }
        }
    }
    // Seam bridging: boundary-layer points of different octants within a
    // radius that covers the sampling margin offset but nothing else.
    let radius = 0.02 * surface.diameter();
    let boundary: Vec<usize> = (0..total)
        .filter(|&k| {
            let (i, j) = ((k / n) % n, k % n);
            i == 0 || j == 0 || i == n - 1 || j == n - 1
        })
        .collect();
    for (ai, &a) in boundary.iter().enumerate() {
        for &b in boundary.iter().skip(ai + 1) {
            if a / (n * n) != b / (n * n) && (pts[a] - pts[b]).norm() < radius {
                union(&mut parent, a, b);
            }
        }
    }
    let mut roots: Vec<usize> = (0..total).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}
