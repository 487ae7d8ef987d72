//! Pointwise principal curvature data: eigenvalues and eigendirections of the
//! shape operator, degeneracy classification, and the invariant 2-plane
//! fields orthogonal to each principal direction.
//!
//! Two equivalent routes are provided. The chart route assembles the
//! fundamental forms and solves det(II − k·I) = 0; the ambient route
//! restricts the quadric Hessian to an orthonormal tangent basis. They agree
//! to roundoff and are cross-checked in the test suite.

use nalgebra::{Matrix3, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::forms::{characteristic_cubic, fundamental_forms, pencil_cubic, SymmetricForm3};
use crate::surface::{Ellipsoid4, SurfacePoint, EPS_DEG};

/// Coincidence pattern of the three principal curvatures at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyTag {
    Regular,
    /// k1 = k2 < k3.
    P12,
    /// k1 < k2 = k3.
    P23,
    Umbilic,
}

/// Principal directions, as available at the point's degeneracy level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame<V> {
    /// Three simple eigenvalues: a full frame e1, e2, e3.
    Full([V; 3]),
    /// One simple eigenvalue: only its direction is defined.
    Single { index: usize, dir: V },
    /// Umbilic point: no preferred directions.
    None,
}

/// Sorted principal curvatures, frame, and degeneracy tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalData<V> {
    pub k: [f64; 3],
    pub frame: Frame<V>,
    pub tag: DegeneracyTag,
}

pub fn classify_gaps(k: [f64; 3], eps_deg: f64) -> DegeneracyTag {
    let kbar = (k[0].abs() + k[1].abs() + k[2].abs()) / 3.0;
    let scale = if kbar > 0.0 { kbar } else { 1.0 };
    let low = (k[1] - k[0]) / scale < eps_deg;
    let high = (k[2] - k[1]) / scale < eps_deg;
    match (low, high) {
        (true, true) => DegeneracyTag::Umbilic,
        (true, false) => DegeneracyTag::P12,
        (false, true) => DegeneracyTag::P23,
        (false, false) => DegeneracyTag::Regular,
    }
}

/// Null direction of a symmetric rank-2 matrix: the largest cross product of
/// row pairs. Returns `None` when the rank is below 2 (multiple eigenvalue).
fn null_direction(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let r0 = Vector3::new(m[(0, 0)], m[(0, 1)], m[(0, 2)]);
    let r1 = Vector3::new(m[(1, 0)], m[(1, 1)], m[(1, 2)]);
    let r2 = Vector3::new(m[(2, 0)], m[(2, 1)], m[(2, 2)]);
    let cands = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let scale = r0.norm().max(r1.norm()).max(r2.norm());
    let best = cands
        .iter()
        .max_by(|x, y| x.norm_squared().partial_cmp(&y.norm_squared()).unwrap())?
        .to_owned();
    if best.norm() <= 1e-10 * scale * scale {
        return None;
    }
    Some(best)
}

/// Deterministic sign convention: flip so the largest-magnitude component is
/// positive.
fn fix_sign3(v: Vector3<f64>) -> Vector3<f64> {
    let mut imax = 0;
    for i in 1..3 {
        if v[i].abs() > v[imax].abs() {
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        -v
    } else {
        v
    }
}

/// Principal data in chart coordinates: directions are chart-parameter
/// vectors normalized against the first fundamental form (eᵀGe = 1).
pub fn principal_data_chart(
    surface: &Ellipsoid4,
    chart: &Chart,
    params: [f64; 3],
    eps_deg: f64,
) -> Result<PrincipalData<Vector3<f64>>> {
    let (g, b) = fundamental_forms(surface, chart, params)?;
    let k = characteristic_cubic(&g, &b).real_roots_sorted();
    let tag = classify_gaps(k, eps_deg);
    let dir = |ki: f64| -> Option<Vector3<f64>> {
        let m = b.matrix() - g.matrix() * ki;
        let v = null_direction(&m)?;
        let norm2 = g.apply(&v, &v);
        Some(fix_sign3(v / norm2.sqrt()))
    };
    let frame = match tag {
        DegeneracyTag::Umbilic => Frame::None,
        DegeneracyTag::P12 => match dir(k[2]) {
            Some(d) => Frame::Single { index: 2, dir: d },
            None => Frame::None,
        },
        DegeneracyTag::P23 => match dir(k[0]) {
            Some(d) => Frame::Single { index: 0, dir: d },
            None => Frame::None,
        },
        DegeneracyTag::Regular => {
            let (d0, d1, d2) = (dir(k[0]), dir(k[1]), dir(k[2]));
            match (d0, d1, d2) {
                (Some(e0), Some(e1), Some(e2)) => Frame::Full([e0, e1, e2]),
                _ => Frame::None,
            }
        }
    };
    Ok(PrincipalData { k, frame, tag })
}

/// Orthonormal basis of the tangent space at an ambient point.
pub fn tangent_basis(surface: &Ellipsoid4, p: &Vector4<f64>) -> [Vector4<f64>; 3] {
    let n = surface.inner_normal(p);
    // Gram-Schmidt the standard basis against n, dropping the most aligned axis.
    let mut imax = 0;
    for i in 1..4 {
        if n[i].abs() > n[imax].abs() {
            imax = i;
        }
    }
    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(3);
    for i in 0..4 {
        if i == imax {
            continue;
        }
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v -= n * n[i];
        for b in &basis {
            v -= b * b.dot(&v);
        }
        basis.push(v / v.norm());
    }
    [basis[0], basis[1], basis[2]]
}

/// Shape operator restricted to an orthonormal tangent basis, together with
/// that basis. Eigenvalues are the principal curvatures (positive with the
/// inner normal); eigenvectors push forward through the basis.
pub fn ambient_shape_operator(
    surface: &Ellipsoid4,
    p: &Vector4<f64>,
) -> (Matrix3<f64>, [Vector4<f64>; 3]) {
    let t = tangent_basis(surface, p);
    let grad_norm = surface.quadric_gradient(p).norm();
    let axes = surface.axes();
    let hv = |v: &Vector4<f64>| Vector4::from_fn(|i, _| 2.0 * v[i] / (axes[i] * axes[i]));
    let mut s = Matrix3::zeros();
    for i in 0..3 {
        let hti = hv(&t[i]);
        for j in 0..=i {
            let val = hti.dot(&t[j]) / grad_norm;
            s[(i, j)] = val;
            s[(j, i)] = val;
        }
    }
    (s, t)
}

/// Sorted principal curvatures at an ambient surface point.
pub fn principal_curvatures(surface: &Ellipsoid4, point: &SurfacePoint) -> [f64; 3] {
    let (s, _) = ambient_shape_operator(surface, &point.ambient);
    pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted()
}

/// Principal data with ambient direction vectors (unit in R⁴).
pub fn principal_data_ambient(
    surface: &Ellipsoid4,
    point: &SurfacePoint,
    eps_deg: f64,
) -> PrincipalData<Vector4<f64>> {
    let (s, t) = ambient_shape_operator(surface, &point.ambient);
    let k = pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted();
    let tag = classify_gaps(k, eps_deg);
    let push = |v: Vector3<f64>| -> Vector4<f64> {
        let w = t[0] * v[0] + t[1] * v[1] + t[2] * v[2];
        w / w.norm()
    };
    let dir = |ki: f64| -> Option<Vector4<f64>> {
        let m = s - Matrix3::identity() * ki;
        Some(push(null_direction(&m)?))
    };
    let frame = match tag {
        DegeneracyTag::Umbilic => Frame::None,
        DegeneracyTag::P12 => match dir(k[2]) {
            Some(d) => Frame::Single { index: 2, dir: d },
            None => Frame::None,
        },
        DegeneracyTag::P23 => match dir(k[0]) {
            Some(d) => Frame::Single { index: 0, dir: d },
            None => Frame::None,
        },
        DegeneracyTag::Regular => match (dir(k[0]), dir(k[1]), dir(k[2])) {
            (Some(e0), Some(e1), Some(e2)) => Frame::Full([e0, e1, e2]),
            _ => Frame::None,
        },
    };
    PrincipalData { k, frame, tag }
}

/// Degeneracy tag of an ambient surface point.
pub fn classify_point(surface: &Ellipsoid4, point: &SurfacePoint, eps_deg: f64) -> DegeneracyTag {
    classify_gaps(principal_curvatures(surface, point), eps_deg)
}

pub fn classify_point_default(surface: &Ellipsoid4, point: &SurfacePoint) -> DegeneracyTag {
    classify_point(surface, point, EPS_DEG)
}

/// The 2-plane in chart coordinates G-orthogonal to the i-th principal
/// direction (0-based index into the sorted curvatures).
///
/// Errors with `DegenerateDirection` when k_i is not simple.
pub fn plane_field(
    surface: &Ellipsoid4,
    chart: &Chart,
    params: [f64; 3],
    i: usize,
    eps_deg: f64,
) -> Result<[Vector3<f64>; 2]> {
    let data = principal_data_chart(surface, chart, params, eps_deg)?;
    let simple = match (data.tag, i) {
        (DegeneracyTag::Regular, _) => true,
        (DegeneracyTag::P12, 2) => true,
        (DegeneracyTag::P23, 0) => true,
        _ => false,
    };
    if !simple {
        return Err(Error::DegenerateDirection { tag: data.tag });
    }
    let e_i = match data.frame {
        Frame::Full(f) => f[i],
        Frame::Single { dir, .. } => dir,
        Frame::None => return Err(Error::DegenerateDirection { tag: data.tag }),
    };
    // Null space of the covector (G e_i)ᵀ.
    let (g, _) = fundamental_forms(surface, chart, params)?;
    let cov = g.matrix() * e_i;
    let mut imax = 0;
    for k in 1..3 {
        if cov[k].abs() > cov[imax].abs() {
            imax = k;
        }
    }
    let mut span = Vec::with_capacity(2);
    for k in 0..3 {
        if k == imax {
            continue;
        }
        let mut v = Vector3::zeros();
        v[k] = cov[imax];
        v[imax] = -cov[k];
        span.push(v / v.norm());
    }
    Ok([span[0], span[1]])
}

/// Convenience: the pencil cubic at a chart point (normalized on request by
/// the caller through [`crate::cubic::CubicPoly::normalize`]).
pub fn chart_pencil_cubic(
    surface: &Ellipsoid4,
    chart: &Chart,
    params: [f64; 3],
) -> Result<crate::cubic::CubicPoly> {
    let (g, b): (SymmetricForm3, SymmetricForm3) = fundamental_forms(surface, chart, params)?;
    Ok(characteristic_cubic(&g, &b))
}
