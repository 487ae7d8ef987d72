//! Linking numbers of disjoint closed curves on the 3-sphere image of the
//! ellipsoid: coordinate rescaling onto S³, stereographic projection from a
//! clearance-maximizing pole, then two independent backends — signed
//! crossing counting in a generic planar projection and the Gauss double
//! integral — that must agree.

use nalgebra::{Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loci::ClosedCurve;
use crate::surface::Ellipsoid4;

/// A closed curve sampled on the unit 3-sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S3Curve {
    pub samples: Vec<[f64; 4]>,
}

impl S3Curve {
    pub fn points(&self) -> Vec<Vector4<f64>> {
        self.samples.iter().map(|s| Vector4::from(*s)).collect()
    }
}

/// Rescale (x₁/a₁, …, x₄/a₄): a diffeomorphism of the ellipsoid onto S³.
pub fn embed_to_s3(surface: &Ellipsoid4, curve: &ClosedCurve) -> Result<S3Curve> {
    let axes = surface.axes();
    let mut samples = Vec::with_capacity(curve.samples.len());
    for s in &curve.samples {
        let mut p = [0.0; 4];
        for i in 0..4 {
            p[i] = s[i] / axes[i];
        }
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::OffSurface {
                residual: (norm - 1.0).abs(),
            });
        }
        // Renormalize exactly onto the sphere.
        for x in &mut p {
            *x /= norm;
        }
        samples.push(p);
    }
    Ok(S3Curve { samples })
}

/// Deterministic low-discrepancy candidate poles on S³ (additive lattice in
/// the double-rotation angles).
fn candidate_poles(count: usize) -> Vec<Vector4<f64>> {
    // Kronecker sequence with plastic-constant increments.
    let g = 1.220744084605759475f64; // plastic constant
    let (a1, a2, a3) = (1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g));
    let mut out = Vec::with_capacity(count);
    let tau = std::f64::consts::TAU;
    for i in 0..count {
        let t = i as f64 + 0.5;
        let phi1 = tau * (t * a1).fract();
        let phi2 = tau * (t * a2).fract();
        let eta = ((t * a3).fract()).sqrt().asin();
        out.push(Vector4::new(
            eta.cos() * phi1.cos(),
            eta.cos() * phi1.sin(),
            eta.sin() * phi2.cos(),
            eta.sin() * phi2.sin(),
        ));
    }
    out
}

/// Pick a projection pole maximizing the minimum spherical distance to all
/// samples over a deterministic candidate grid, then stereographically
/// project every curve from it into R³.
pub fn stereographic_project(curves: &[S3Curve]) -> Result<Vec<Vec<Vector3<f64>>>> {
    let mut best: Option<(f64, Vector4<f64>)> = None;
    for pole in candidate_poles(1000) {
        let mut min_dist = f64::INFINITY;
        for c in curves {
            for s in &c.samples {
                let dot = pole.dot(&Vector4::from(*s)).clamp(-1.0, 1.0);
                min_dist = min_dist.min(dot.acos());
            }
        }
        if best.is_none() || min_dist > best.unwrap().0 {
            best = Some((min_dist, pole));
        }
    }
    let (clearance, pole) = best.expect("candidate list nonempty");
    if clearance <= 0.1 {
        return Err(Error::NoValidPole {
            best_distance: clearance,
        });
    }
    // Orthonormal frame (e1, e2, e3, pole).
    let mut frame: Vec<Vector4<f64>> = Vec::with_capacity(3);
    for i in 0..4 {
        if frame.len() == 3 {
            break;
        }
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v -= pole * pole[i];
        for b in &frame {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            frame.push(v / v.norm());
        }
    }
    let mut out = Vec::with_capacity(curves.len());
    for c in curves {
        let mut proj = Vec::with_capacity(c.samples.len());
        for s in &c.samples {
            let p = Vector4::from(*s);
            let h = pole.dot(&p);
            let denom = 1.0 - h;
            proj.push(Vector3::new(
                frame[0].dot(&p) / denom,
                frame[1].dot(&p) / denom,
                frame[2].dot(&p) / denom,
            ));
        }
        out.push(proj);
    }
    Ok(out)
}

fn dedup_closed(curve: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let mut pts: Vec<Vector3<f64>> = curve.to_vec();
    if pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() < 1e-12 {
        pts.pop();
    }
    pts
}

/// Gauss double integral over segment-pair midpoints, with one halving
/// refinement for segment pairs closer than five times their length.
pub fn gauss_linking_integral(c1: &[Vector3<f64>], c2: &[Vector3<f64>]) -> f64 {
    let a = dedup_closed(c1);
    let b = dedup_closed(c2);
    let mut total = 0.0;
    for i in 0..a.len() {
        let (p0, p1) = (a[i], a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            let (q0, q1) = (b[j], b[(j + 1) % b.len()]);
            total += segment_pair_kernel(p0, p1, q0, q1, 0);
        }
    }
    total / (4.0 * std::f64::consts::PI)
}

fn segment_pair_kernel(
    p0: Vector3<f64>,
    p1: Vector3<f64>,
    q0: Vector3<f64>,
    q1: Vector3<f64>,
    depth: usize,
) -> f64 {
    let dp = p1 - p0;
    let dq = q1 - q0;
    let pm = (p0 + p1) * 0.5;
    let qm = (q0 + q1) * 0.5;
    // (r1 − r2) · (dr1 × dr2) / |r1 − r2|³ summed over pairs.
    let r = pm - qm;
    let dist = r.norm();
    let len = dp.norm().max(dq.norm());
    if depth < 6 && dist < 5.0 * len {
        // Too close for the midpoint rule: refine both segments.
        let (pm2, qm2) = (pm, qm);
        return segment_pair_kernel(p0, pm2, q0, qm2, depth + 1)
            + segment_pair_kernel(p0, pm2, qm2, q1, depth + 1)
            + segment_pair_kernel(pm2, p1, q0, qm2, depth + 1)
            + segment_pair_kernel(pm2, p1, qm2, q1, depth + 1);
    }
    let d3 = dist * dist * dist;
    if d3 == 0.0 {
        return 0.0;
    }
    dp.cross(&dq).dot(&r) / d3
}

/// Low-discrepancy directions on S² for the crossing projection.
fn candidate_directions(count: usize) -> Vec<Vector3<f64>> {
    let g = 1.32471795724474602596f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let t = i as f64 + 0.5;
        let z = 2.0 * (t * a1).fract() - 1.0;
        let phi = std::f64::consts::TAU * (t * a2).fract();
        let r = (1.0 - z * z).max(0.0).sqrt();
        out.push(Vector3::new(r * phi.cos(), r * phi.sin(), z));
    }
    out
}

/// Signed crossings between the plane projections of the two curves along
/// direction `dir`. `None` if the projection is non-generic.
fn signed_crossings(c1: &[Vector3<f64>], c2: &[Vector3<f64>], dir: Vector3<f64>) -> Option<f64> {
    // Plane basis orthogonal to dir.
    let mut e1 = if dir[0].abs() < 0.9 {
        Vector3::new(1.0, 0.0, 0.0)
    } else {
        Vector3::new(0.0, 1.0, 0.0)
    };
    e1 -= dir * dir.dot(&e1);
    e1 /= e1.norm();
    let e2 = dir.cross(&e1);
    let flat = |p: &Vector3<f64>| (e1.dot(p), e2.dot(p), dir.dot(p));
    let a: Vec<(f64, f64, f64)> = dedup_closed(c1).iter().map(|p| flat(p)).collect();
    let b: Vec<(f64, f64, f64)> = dedup_closed(c2).iter().map(|p| flat(p)).collect();
    let mut sum = 0.0;
    for i in 0..a.len() {
        let (p0, p1) = (a[i], a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            let (q0, q1) = (b[j], b[(j + 1) % b.len()]);
            // 2D segment intersection.
            let d1 = (p1.0 - p0.0, p1.1 - p0.1);
            let d2 = (q1.0 - q0.0, q1.1 - q0.1);
            let denom = d1.0 * d2.1 - d1.1 * d2.0;
            if denom.abs() < 1e-14 {
                continue;
            }
            let rx = q0.0 - p0.0;
            let ry = q0.1 - p0.1;
            let s = (rx * d2.1 - ry * d2.0) / denom;
            let t = (rx * d1.1 - ry * d1.0) / denom;
            if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
                continue;
            }
            // Genericity: crossings at segment endpoints or at grazing
            // angles are rejected; a rotated projection is tried instead.
            let end_margin = 1e-9;
            if s < end_margin || s > 1.0 - end_margin || t < end_margin || t > 1.0 - end_margin {
                return None;
            }
            let l1 = (d1.0 * d1.0 + d1.1 * d1.1).sqrt();
            let l2 = (d2.0 * d2.0 + d2.1 * d2.1).sqrt();
            let angle = (denom / (l1 * l2)).abs();
            if angle < 1e-3 {
                return None;
            }
            // Heights along dir at the crossing.
            let h1 = p0.2 + s * (p1.2 - p0.2);
            let h2 = q0.2 + t * (q1.2 - q0.2);
            if (h1 - h2).abs() < 1e-12 {
                return None;
            }
            // Crossing sign: orientation of (d1, d2) in the plane times
            // which strand passes over.
            let over = if h1 > h2 { 1.0 } else { -1.0 };
            sum += 0.5 * over * denom.signum();
        }
    }
    Some(sum)
}

/// Linking report: the crossing-count integer and the Gauss estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkingReport {
    pub linking_number: i64,
    pub gauss_estimate: f64,
    /// |gauss − integer|.
    pub gauss_gap: f64,
    pub crossings_projection_attempts: usize,
}

/// Linking number of two disjoint projected closed curves by signed
/// crossings, cross-checked against the Gauss integral.
pub fn linking_number(c1: &[Vector3<f64>], c2: &[Vector3<f64>]) -> Result<LinkingReport> {
    // Disjointness guard.
    let mut min_d = f64::INFINITY;
    for p in c1 {
        for q in c2 {
            min_d = min_d.min((p - q).norm());
        }
    }
    if min_d < 1e-3 {
        return Err(Error::CurvesTooClose {
            min_distance: min_d,
        });
    }
    let mut lk = None;
    let mut attempts = 0;
    for dir in candidate_directions(20) {
        attempts += 1;
        if let Some(x) = signed_crossings(c1, c2, dir) {
            lk = Some(x);
            break;
        }
    }
    let Some(x) = lk else {
        return Err(Error::NonGenericProjection { attempts });
    };
    let rounded = x.round();
    let gauss = gauss_linking_integral(c1, c2);
    Ok(LinkingReport {
        linking_number: rounded as i64,
        gauss_estimate: gauss,
        gauss_gap: (gauss - rounded).abs(),
        crossings_projection_attempts: attempts,
    })
}

/// Full pipeline: embed two ambient curves on S³, project, link.
pub fn link_curves(
    surface: &Ellipsoid4,
    c1: &ClosedCurve,
    c2: &ClosedCurve,
) -> Result<LinkingReport> {
    let s1 = embed_to_s3(surface, c1)?;
    let s2 = embed_to_s3(surface, c2)?;
    let projected = stereographic_project(&[s1, s2])?;
    linking_number(&projected[0], &projected[1])
}
