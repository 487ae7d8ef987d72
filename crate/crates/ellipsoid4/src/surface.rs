//! The surface: a tridimensional ellipsoid in R^4 and its axis-degeneracy class.

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether two semi-axes are equal.
pub const TAU_AXIS: f64 = 1e-12;

/// Default relative tolerance for curvature-coincidence classification.
pub const EPS_DEG: f64 = 1e-6;

/// Degeneracy pattern of the four semi-axes.
///
/// `ThreeEqualLast` / `ThreeEqualFirst` record whether the odd axis occupies
/// the last or the first coordinate slot; the three pair classes are decided
/// by where the doubled value sits relative to the two distinct values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisClass {
    AllEqual,
    ThreeEqualLast,
    ThreeEqualFirst,
    TwoPairs,
    PairLow,
    PairHigh,
    PairMiddle,
    AllDistinct,
}

impl std::fmt::Display for AxisClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The ellipsoid x1²/a1² + x2²/a2² + x3²/a3² + x4²/a4² = 1.
///
/// Semi-axes are stored in coordinate-slot order (the coefficient of x_i is
/// 1/axes[i]²). All geometric operations orient the surface by the inner
/// unit normal N = -∇Q/|∇Q|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid4 {
    axes: [f64; 4],
    class: AxisClass,
    /// canon_to_user[k] = coordinate slot where the k-th canonical axis lives.
    canon_to_user: [usize; 4],
}

impl Ellipsoid4 {
    pub fn new(axes: [f64; 4]) -> Result<Self> {
        for &a in &axes {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::BadAxes(format!("{axes:?}")));
            }
        }
        let (class, canon_to_user) = classify_axes(&axes);
        Ok(Ellipsoid4 {
            axes,
            class,
            canon_to_user,
        })
    }

    pub fn axes(&self) -> [f64; 4] {
        self.axes
    }

    pub fn class(&self) -> AxisClass {
        self.class
    }

    /// Longest extent of the surface, 2·max(axes).
    pub fn diameter(&self) -> f64 {
        2.0 * self.axes.iter().cloned().fold(0.0, f64::max)
    }

    /// Q(p) = Σ x_i²/a_i².
    pub fn quadric(&self, p: &Vector4<f64>) -> f64 {
        (0..4)
            .map(|i| p[i] * p[i] / (self.axes[i] * self.axes[i]))
            .sum()
    }

    /// ∇Q(p), pointing outward.
    pub fn quadric_gradient(&self, p: &Vector4<f64>) -> Vector4<f64> {
        Vector4::from_fn(|i, _| 2.0 * p[i] / (self.axes[i] * self.axes[i]))
    }

    /// Inner unit normal -∇Q/|∇Q|.
    pub fn inner_normal(&self, p: &Vector4<f64>) -> Vector4<f64> {
        let g = self.quadric_gradient(p);
        -g / g.norm()
    }

    /// Semi-axes rearranged into the canonical slot order of the surface's
    /// class (triple first, pair last for one doubled pair, descending for
    /// four distinct axes).
    pub fn canonical_axes(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for k in 0..4 {
            out[k] = self.axes[self.canon_to_user[k]];
        }
        out
    }

    /// Map a point expressed in canonical slots back to user slots.
    pub fn canon_point_to_user(&self, p: [f64; 4]) -> Vector4<f64> {
        let mut out = Vector4::zeros();
        for k in 0..4 {
            out[self.canon_to_user[k]] = p[k];
        }
        out
    }

    /// Map a user-slot point into canonical slots.
    pub fn user_point_to_canon(&self, p: &Vector4<f64>) -> [f64; 4] {
        let mut out = [0.0; 4];
        for k in 0..4 {
            out[k] = p[self.canon_to_user[k]];
        }
        out
    }

    /// Move an off-surface point onto the surface along the ambient gradient
    /// (one or two Newton corrections of the defining equation).
    pub fn project(&self, p: &Vector4<f64>) -> Vector4<f64> {
        let mut q = *p;
        for _ in 0..3 {
            let r = self.quadric(&q) - 1.0;
            if r.abs() < 1e-15 {
                break;
            }
            let g = self.quadric_gradient(&q);
            q -= g * (r / g.norm_squared());
        }
        q
    }
}

/// A validated point on the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub ambient: Vector4<f64>,
}

impl SurfacePoint {
    /// Membership tolerance on |Q(p) - 1| for accepting an ambient point.
    pub const MEMBERSHIP_TOL: f64 = 1e-10;

    pub fn new(surface: &Ellipsoid4, ambient: Vector4<f64>) -> Result<Self> {
        let residual = (surface.quadric(&ambient) - 1.0).abs();
        if residual > Self::MEMBERSHIP_TOL {
            return Err(Error::OffSurface { residual });
        }
        Ok(SurfacePoint { ambient })
    }
}

fn axes_equal(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TAU_AXIS * scale
}

/// Group the axes into equality classes and derive the degeneracy class plus
/// the canonical slot permutation.
fn classify_axes(axes: &[f64; 4]) -> (AxisClass, [usize; 4]) {
    let scale = axes.iter().cloned().fold(0.0, f64::max);
    // Union-find over the four slots; tolerance equality is made transitive.
    let mut rep = [0usize, 1, 2, 3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if axes_equal(axes[i], axes[j], scale) {
                let (ri, rj) = (find(&mut rep, i), find(&mut rep, j));
                if ri != rj {
                    rep[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..4).map(|i| find(&mut rep, i)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..4 {
        if roots[i] == i {
            groups.push((0..4).filter(|&j| roots[j] == i).collect());
        }
    }
    groups.sort_by(|g, h| h.len().cmp(&g.len()));

    match groups.len() {
        1 => (AxisClass::AllEqual, [0, 1, 2, 3]),
        2 if groups[0].len() == 3 => {
            let odd = groups[1][0];
            let class = if odd == 0 {
                AxisClass::ThreeEqualFirst
            } else {
                AxisClass::ThreeEqualLast
            };
            let mut map = [0usize; 4];
            for (k, &slot) in groups[0].iter().enumerate() {
                map[k] = slot;
            }
            map[3] = odd;
            (class, map)
        }
        2 => {
            // Two pairs; put the larger pair in the first two canonical slots.
            let (hi, lo) = if axes[groups[0][0]] >= axes[groups[1][0]] {
                (&groups[0], &groups[1])
            } else {
                (&groups[1], &groups[0])
            };
            (AxisClass::TwoPairs, [hi[0], hi[1], lo[0], lo[1]])
        }
        3 => {
            let pair = groups.iter().find(|g| g.len() == 2).unwrap().clone();
            let mut singles: Vec<usize> = groups
                .iter()
                .filter(|g| g.len() == 1)
                .map(|g| g[0])
                .collect();
            singles.sort_by(|&i, &j| axes[j].partial_cmp(&axes[i]).unwrap());
            let p = axes[pair[0]];
            let (hi, lo) = (axes[singles[0]], axes[singles[1]]);
            let class = if p > hi {
                AxisClass::PairHigh
            } else if p < lo {
                AxisClass::PairLow
            } else {
                AxisClass::PairMiddle
            };
            (class, [singles[0], singles[1], pair[0], pair[1]])
        }
        _ => {
            let mut order = [0usize, 1, 2, 3];
            order.sort_by(|&i, &j| axes[j].partial_cmp(&axes[i]).unwrap());
            (AxisClass::AllDistinct, order)
        }
    }
}

fn find(rep: &mut [usize; 4], mut i: usize) -> usize {
    while rep[i] != i {
        rep[i] = rep[rep[i]];
        i = rep[i];
    }
    i
}
