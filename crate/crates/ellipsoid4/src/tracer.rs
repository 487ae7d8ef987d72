//! Numerical integration of the principal line fields: arclength-parametrized
//! leaf traces with orientation continuation, closed-leaf detection through a
//! transversal section, slice-confinement audits and circle fitting.

use nalgebra::{Matrix3, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::confocal::QuarticSlice;
use crate::curvature::ambient_shape_operator;
use crate::error::{Error, Result};
use crate::forms::pencil_cubic;
use crate::surface::{Ellipsoid4, SurfacePoint, EPS_DEG};

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// Returned to the seed with aligned tangent.
    Closed,
    /// The traced field's curvature gap collapsed (partially umbilic or
    /// umbilic locus reached).
    HitSingularLocus,
    /// The arclength budget ran out first.
    MaxLength,
}

/// An integrated leaf of one principal line field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafTrace {
    /// Sorted-curvature index of the traced field (0, 1 or 2).
    pub field: usize,
    /// Ambient samples.
    pub samples: Vec<[f64; 4]>,
    /// Arclength stamp of each sample.
    pub arclength: Vec<f64>,
    /// Principal curvatures at each sample.
    pub curvatures: Vec<[f64; 3]>,
    pub termination: Termination,
    /// Refined distance to the seed at closure.
    pub closure_gap: Option<f64>,
    /// Arclength period at closure.
    pub period: Option<f64>,
}

/// Integration controls.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Base step (arclength).
    pub step: f64,
    /// Arclength budget.
    pub max_arclen: f64,
    /// Relative curvature-gap tolerance for degeneracy classification.
    pub eps_deg: f64,
    /// Capture distance for the closure section test.
    pub closure_tol: f64,
}

impl TraceConfig {
    pub fn for_surface(surface: &Ellipsoid4) -> Self {
        let d = surface.diameter();
        TraceConfig {
            step: 0.002 * d,
            max_arclen: 100.0 * d,
            eps_deg: EPS_DEG,
            closure_tol: 1e-6 * d,
        }
    }
}

enum FieldEval {
    Dir(Vector4<f64>),
    Degenerate,
}

/// Unit eigendirection of the sorted-index field at p, oriented along
/// `prev` when given. `Degenerate` when the relevant gap is collapsed or the
/// eigenvector is numerically undefined.
fn field_direction(
    surface: &Ellipsoid4,
    p: &Vector4<f64>,
    field: usize,
    eps_deg: f64,
    prev: Option<&Vector4<f64>>,
) -> FieldEval {
    let (s, t) = ambient_shape_operator(surface, p);
    let k = pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted();
    let kbar = (k[0].abs() + k[1].abs() + k[2].abs()) / 3.0;
    let gap = match field {
        0 => k[1] - k[0],
        1 => (k[1] - k[0]).min(k[2] - k[1]),
        _ => k[2] - k[1],
    };
    if gap < 5.0 * eps_deg * kbar {
        return FieldEval::Degenerate;
    }
    let m = s - Matrix3::identity() * k[field];
    let r0 = m.row(0).transpose();
    let r1 = m.row(1).transpose();
    let r2 = m.row(2).transpose();
    let cands = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let best = cands
        .iter()
        .max_by(|x, y| x.norm_squared().partial_cmp(&y.norm_squared()).unwrap())
        .unwrap();
    if best.norm() == 0.0 {
        return FieldEval::Degenerate;
    }
    let v3 = best / best.norm();
    let mut dir = t[0] * v3[0] + t[1] * v3[1] + t[2] * v3[2];
    dir /= dir.norm();
    if let Some(prev) = prev {
        if dir.dot(prev) < 0.0 {
            dir = -dir;
        }
    }
    FieldEval::Dir(dir)
}

/// One RK4 step of the oriented field with projection back to the surface.
/// Returns the new point and the step-averaged direction, or `None` at a
/// degeneracy.
fn rk4_step(
    surface: &Ellipsoid4,
    p: &Vector4<f64>,
    dir0: &Vector4<f64>,
    h: f64,
    field: usize,
    eps_deg: f64,
) -> Option<(Vector4<f64>, Vector4<f64>)> {
    let eval = |q: &Vector4<f64>, align: &Vector4<f64>| -> Option<Vector4<f64>> {
        match field_direction(surface, &surface.project(q), field, eps_deg, Some(align)) {
            FieldEval::Dir(d) => Some(d),
            FieldEval::Degenerate => None,
        }
    };
    let k1 = *dir0;
    let k2 = eval(&(p + k1 * (0.5 * h)), &k1)?;
    let k3 = eval(&(p + k2 * (0.5 * h)), &k2)?;
    let k4 = eval(&(p + k3 * h), &k3)?;
    let incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0;
    let next = surface.project(&(p + incr * h));
    Some((next, incr.normalize()))
}

/// Integrate the `field`-th principal line field from `seed`.
///
/// Stops when the trajectory re-crosses the section through the seed within
/// `closure_tol` (Closed), when the field degenerates (HitSingularLocus) or
/// at the arclength budget (MaxLength).
pub fn trace_principal_line(
    surface: &Ellipsoid4,
    seed: &SurfacePoint,
    field: usize,
    cfg: &TraceConfig,
) -> Result<LeafTrace> {
    assert!(field < 3, "field index must be 0, 1 or 2");
    let p0 = surface.project(&seed.ambient);
    let t0 = match field_direction(surface, &p0, field, cfg.eps_deg, None) {
        FieldEval::Dir(d) => d,
        FieldEval::Degenerate => {
            let (s, _) = ambient_shape_operator(surface, &p0);
            let k = pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted();
            let kbar = (k[0] + k[1] + k[2]) / 3.0;
            let gap = match field {
                0 => k[1] - k[0],
                1 => (k[1] - k[0]).min(k[2] - k[1]),
                _ => k[2] - k[1],
            };
            return Err(Error::SeedDegenerate { gap: gap / kbar });
        }
    };

    let curv = |p: &Vector4<f64>| {
        let (s, _) = ambient_shape_operator(surface, p);
        pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted()
    };

    let mut samples = vec![p0.into()];
    let mut arclength = vec![0.0];
    let mut curvatures = vec![curv(&p0)];
    let mut p = p0;
    let mut dir = t0;
    let mut s_total = 0.0;
    let min_return_len = 10.0 * cfg.step;
    let mut termination = Termination::MaxLength;
    let mut closure_gap = None;
    let mut period = None;

    'outer: while s_total < cfg.max_arclen {
        // Adaptive halving keeps consecutive directions aligned.
        let mut h = cfg.step;
        let step_result = loop {
            match rk4_step(surface, &p, &dir, h, field, cfg.eps_deg) {
                Some((next, avg)) => {
                    match field_direction(surface, &next, field, cfg.eps_deg, Some(&avg)) {
                        FieldEval::Dir(d) => {
                            if d.dot(&dir) > 0.9 || h < cfg.step / 64.0 {
                                break Some((next, d, h));
                            }
                            h *= 0.5;
                        }
                        FieldEval::Degenerate => break None,
                    }
                }
                None => {
                    if h < cfg.step / 64.0 {
                        break None;
                    }
                    h *= 0.5;
                }
            }
        };
        let Some((next, next_dir, h_used)) = step_result else {
            termination = Termination::HitSingularLocus;
            break 'outer;
        };

        // Section test: forward crossing of ⟨p − p0, t0⟩ = 0 near the seed.
        let s_prev = (p - p0).dot(&t0);
        let s_next = (next - p0).dot(&t0);
        if s_total + h_used > min_return_len
            && s_prev < 0.0
            && s_next >= 0.0
            && (next - p0).norm() < 20.0 * cfg.step
        {
            // Newton refinement along the flow for the exact crossing.
            let mut q = p;
            let mut s_here = s_prev;
            let mut carried = 0.0;
            let mut qdir = dir;
            for _ in 0..8 {
                let delta = -s_here / qdir.dot(&t0).max(0.1);
                let step_h = delta.clamp(-h_used, h_used);
                if let Some((qn, avg)) = rk4_step(surface, &q, &qdir, step_h, field, cfg.eps_deg) {
                    carried += step_h;
                    q = qn;
                    if let FieldEval::Dir(d) =
                        field_direction(surface, &q, field, cfg.eps_deg, Some(&avg))
                    {
                        qdir = d;
                    }
                    s_here = (q - p0).dot(&t0);
                    if s_here.abs() < 1e-13 {
                        break;
                    }
                } else {
                    break;
                }
            }
            let gap = (q - p0).norm();
            if gap < cfg.closure_tol && qdir.dot(&t0) > 0.999 {
                samples.push(q.into());
                arclength.push(s_total + carried);
                curvatures.push(curv(&q));
                termination = Termination::Closed;
                closure_gap = Some(gap);
                period = Some(s_total + carried);
                break 'outer;
            }
        }

        p = next;
        dir = next_dir;
        s_total += h_used;
        samples.push(p.into());
        arclength.push(s_total);
        curvatures.push(curv(&p));
    }

    Ok(LeafTrace {
        field,
        samples,
        arclength,
        curvatures,
        termination,
        closure_gap,
        period,
    })
}

/// Run many traces concurrently over read-only surface data.
pub fn trace_batch(
    surface: &Ellipsoid4,
    seeds: &[(SurfacePoint, usize)],
    cfg: &TraceConfig,
) -> Vec<Result<LeafTrace>> {
    let workers = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(workers);
    let mut out: Vec<Option<Result<LeafTrace>>> = vec![None; seeds.len()];
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (ci, seeds_chunk) in seeds.chunks(chunk).enumerate() {
            handles.push((
                ci,
                scope.spawn(move || {
                    seeds_chunk
                        .iter()
                        .map(|(seed, field)| trace_principal_line(surface, seed, *field, cfg))
                        .collect::<Vec<_>>()
                }),
            ));
        }
        for (ci, handle) in handles {
            for (j, r) in handle
                .join()
                .expect("trace worker panicked")
                .into_iter()
                .enumerate()
            {
                out[ci * chunk + j] = Some(r);
            }
        }
    });
    out.into_iter()
        .map(|r| r.expect("all slots filled"))
        .collect()
}

/// Post-hoc closure report on an arbitrary sample sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub closed: bool,
    pub period: f64,
    pub gap: f64,
}

/// Detect a return to the start: the first sample after a minimum arclength
/// that comes within `tol` of the first sample with aligned direction of
/// motion.
pub fn detect_closure(samples: &[[f64; 4]], arclength: &[f64], tol: f64) -> ClosureReport {
    assert_eq!(samples.len(), arclength.len());
    if samples.len() < 4 {
        return ClosureReport {
            closed: false,
            period: 0.0,
            gap: f64::INFINITY,
        };
    }
    let p0 = Vector4::from(samples[0]);
    let t0 = (Vector4::from(samples[1]) - p0).normalize();
    let h = arclength[1] - arclength[0];
    let min_len = 10.0 * h;
    let mut best_gap = f64::INFINITY;
    for i in 2..samples.len() {
        if arclength[i] < min_len {
            continue;
        }
        let p = Vector4::from(samples[i]);
        let tangent = (p - Vector4::from(samples[i - 1])).normalize();
        let gap = (p - p0).norm();
        best_gap = best_gap.min(gap);
        if gap < tol && tangent.dot(&t0) > 0.999 {
            // Advance to the closest approach so the period is unbiased.
            let mut j = i;
            let mut g = gap;
            while j + 1 < samples.len() {
                let gn = (Vector4::from(samples[j + 1]) - p0).norm();
                if gn >= g {
                    break;
                }
                j += 1;
                g = gn;
            }
            return ClosureReport {
                closed: true,
                period: arclength[j],
                gap: g,
            };
        }
    }
    ClosureReport {
        closed: false,
        period: 0.0,
        gap: best_gap,
    }
}

/// Max |Q_λ(p) − 1| along the trace.
pub fn slice_confinement(
    surface: &Ellipsoid4,
    trace: &LeafTrace,
    slice: &QuarticSlice,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in &trace.samples {
        let p = Vector4::from(*s);
        worst = worst.max(slice.membership(surface, &p)?.abs());
    }
    Ok(worst)
}

/// Best-fit circle of a point cloud: PCA plane, algebraic center fit, then
/// the max deviation of samples from the fitted circle (in-plane radius
/// error plus out-of-plane offset).
pub fn circle_fit_residual(samples: &[[f64; 4]]) -> f64 {
    let n = samples.len() as f64;
    let mut centroid = Vector4::zeros();
    for s in samples {
        centroid += Vector4::from(*s);
    }
    centroid /= n;
    let mut cov = Matrix4::zeros();
    for s in samples {
        let d = Vector4::from(*s) - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    // Two largest eigenvectors span the plane.
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let e1 = eig.eigenvectors.column(idx[0]).into_owned();
    let e2 = eig.eigenvectors.column(idx[1]).into_owned();
    // In-plane coordinates and algebraic circle fit (least squares on
    // ξ² + η² = 2aξ + 2bη + c).
    let mut m = nalgebra::Matrix3::zeros();
    let mut rhs = nalgebra::Vector3::zeros();
    let coords: Vec<(f64, f64, f64)> = samples
        .iter()
        .map(|s| {
            let d = Vector4::from(*s) - centroid;
            let xi = d.dot(&e1);
            let eta = d.dot(&e2);
            let off = (d - e1 * xi - e2 * eta).norm();
            (xi, eta, off)
        })
        .collect();
    for &(xi, eta, _) in &coords {
        let row = nalgebra::Vector3::new(2.0 * xi, 2.0 * eta, 1.0);
        m += row * row.transpose();
        rhs += row * (xi * xi + eta * eta);
    }
    let Some(sol) = m.lu().solve(&rhs) else {
        return f64::INFINITY;
    };
    let (ca, cb) = (sol[0], sol[1]);
    let r = (sol[2] + ca * ca + cb * cb).max(0.0).sqrt();
    let mut worst = 0.0f64;
    for &(xi, eta, off) in &coords {
        let dr = (((xi - ca).powi(2) + (eta - cb).powi(2)).sqrt() - r).abs();
        worst = worst.max(dr.max(off));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{Chart, ChartKind};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn surface_point(surface: &Ellipsoid4, chart: &Chart, p: [f64; 3]) -> SurfacePoint {
        SurfacePoint::new(surface, chart.eval(p).unwrap()).unwrap()
    }

    #[test]
    fn two_pairs_extreme_fields_close_on_circles() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BiRotation).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for field in [0usize, 2] {
            for _ in 0..5 {
                let seed = surface_point(&e, &c, c.sample_interior(&mut rng, 0.1));
                let tr = trace_principal_line(&e, &seed, field, &cfg).unwrap();
                assert_eq!(tr.termination, Termination::Closed, "field {field}");
                assert!(tr.closure_gap.unwrap() < 1e-6 * e.diameter());
                let res = circle_fit_residual(&tr.samples);
                assert!(res < 1e-6, "field {field}: circle residual {res:e}");
            }
        }
    }

    #[test]
    fn two_pairs_middle_field_hits_the_singular_circles() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BiRotation).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let seed = surface_point(&e, &c, [0.5, 1.1, 1.0]);
        let tr = trace_principal_line(&e, &seed, 1, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::HitSingularLocus);
        // The endpoint must classify as partially umbilic within a few steps.
        let last = Vector4::from(*tr.samples.last().unwrap());
        let k = {
            let (s, _) = ambient_shape_operator(&e, &last);
            pencil_cubic(&s, &Matrix3::identity()).real_roots_sorted()
        };
        let gaps = ((k[1] - k[0]).min(k[2] - k[1])) / k[1];
        assert!(gaps < 1e-2, "end gap {gaps}");
    }

    #[test]
    fn all_distinct_random_leaves_close() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for field in 0..3 {
            for _ in 0..3 {
                let seed = surface_point(&e, &c, c.sample_interior(&mut rng, 0.15));
                let tr = trace_principal_line(&e, &seed, field, &cfg).unwrap();
                assert_eq!(tr.termination, Termination::Closed, "field {field}");
                assert!(tr.closure_gap.unwrap() < 1e-6 * e.diameter());
            }
        }
    }

    #[test]
    fn sphere_seed_is_degenerate() {
        let e = Ellipsoid4::new([1.0; 4]).unwrap();
        let p = SurfacePoint::new(&e, Vector4::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        assert!(matches!(
            trace_principal_line(&e, &p, 0, &cfg),
            Err(Error::SeedDegenerate { .. })
        ));
    }

    #[test]
    fn synthetic_circle_closure_period() {
        // Circle of radius ρ sampled at h = ρ/200: period within 0.1% of 2πρ.
        let rho = 1.7;
        let n = (std::f64::consts::TAU * 200.0) as usize;
        let mut samples = Vec::new();
        let mut arclength = Vec::new();
        for i in 0..=n + 5 {
            let t = i as f64 / 200.0;
            samples.push([rho * t.cos(), rho * t.sin(), 0.3, -0.2]);
            arclength.push(rho * t);
        }
        let rep = detect_closure(&samples, &arclength, 0.01 * rho);
        assert!(rep.closed);
        assert_relative_eq!(rep.period, std::f64::consts::TAU * rho, max_relative = 1e-3);
        // An arc is not closed.
        let rep = detect_closure(&samples[..n / 2], &arclength[..n / 2], 0.01 * rho);
        assert!(!rep.closed);
    }

    #[test]
    fn traced_leaf_stays_on_surface_and_orients_continuously() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let seed = surface_point(&e, &c, [0.2, 0.3, 0.1]);
        let tr = trace_principal_line(&e, &seed, 0, &cfg).unwrap();
        for s in &tr.samples {
            let q = e.quadric(&Vector4::from(*s));
            assert!((q - 1.0).abs() < 1e-11, "|Q-1| = {:e}", (q - 1.0).abs());
        }
        let mut prev: Option<Vector4<f64>> = None;
        for w in tr.samples.windows(2) {
            let d = (Vector4::from(w[1]) - Vector4::from(w[0])).normalize();
            if let Some(p) = prev {
                assert!(d.dot(&p) > 0.9, "direction jump {}", d.dot(&p));
            }
            prev = Some(d);
        }
    }

    #[test]
    fn field_index_is_stable_along_traces() {
        // Re-derived curvature ordering at sampled points never swaps fields.
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BallW { neg: false }).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let seed = surface_point(&e, &c, c.sample_interior(&mut rng, 0.15));
        let tr = trace_principal_line(&e, &seed, 1, &cfg).unwrap();
        for (i, s) in tr.samples.iter().enumerate().step_by(10).skip(1) {
            if i + 1 >= tr.samples.len() {
                break;
            }
            let p = Vector4::from(*s);
            let next = Vector4::from(tr.samples[i + 1]);
            let tangent = (next - p).normalize();
            // Normal curvature along the tangent equals the middle curvature.
            let g = e.quadric_gradient(&p);
            let axes = e.axes();
            let hv = Vector4::from_fn(|k, _| 2.0 * tangent[k] / (axes[k] * axes[k]));
            let k_dir = hv.dot(&tangent) / g.norm();
            // Chord-vs-tangent offset allows O(h) slack; a field swap would
            // show up as an O(1) mismatch.
            let k = tr.curvatures[i];
            assert_relative_eq!(k_dir, k[1], max_relative = 1e-2);
        }
    }

    #[test]
    fn batch_matches_sequential() {
        let e = Ellipsoid4::new([2.0, 2.0, 1.0, 1.0]).unwrap();
        let c = Chart::build(&e, ChartKind::BiRotation).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let seeds: Vec<(SurfacePoint, usize)> = (0..6)
            .map(|i| {
                (
                    surface_point(&e, &c, c.sample_interior(&mut rng, 0.1)),
                    i % 2 * 2,
                )
            })
            .collect();
        let batch = trace_batch(&e, &seeds, &cfg);
        for ((seed, field), result) in seeds.iter().zip(&batch) {
            let solo = trace_principal_line(&e, seed, *field, &cfg).unwrap();
            let b = result.as_ref().unwrap();
            assert_eq!(solo.termination, b.termination);
            assert_eq!(solo.samples.len(), b.samples.len());
        }
    }

    #[test]
    fn confinement_on_own_slices_and_negative_control() {
        let e = Ellipsoid4::new([2.0, 3f64.sqrt(), 2f64.sqrt(), 1.0]).unwrap();
        let coords = crate::confocal::ConfocalCoords {
            u: 1.4,
            v: 2.6,
            t: 3.4,
            octant: [false; 4],
        };
        let seed = crate::confocal::from_confocal(&e, &coords).unwrap();
        let cfg = TraceConfig::for_surface(&e);
        // Field 0 varies the top coordinate: the u- and v-slices are invariant.
        let tr = trace_principal_line(&e, &seed, 0, &cfg).unwrap();
        assert_eq!(tr.termination, Termination::Closed);
        for lam in [1.4, 2.6] {
            let (slice, _) = QuarticSlice::new(&e, lam).unwrap();
            let res = slice_confinement(&e, &tr, &slice).unwrap();
            assert!(res < 1e-7, "λ = {lam}: residual {res:e}");
        }
        // A slice the leaf does not lie on: residual is large.
        let (other, _) = QuarticSlice::new(&e, 1.05).unwrap();
        let res = slice_confinement(&e, &tr, &other).unwrap();
        assert!(res > 1e-3, "negative control residual {res:e}");
    }
}
