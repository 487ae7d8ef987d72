//! Real cubic polynomials: the characteristic cubic of the curvature pencil,
//! its three real roots, and the repeated-root discriminant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::neumaier_sum;

/// A k³ + B k² + C k + D with real coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicPoly {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Set when the polynomial has been rescaled so that D = 1.
    pub normalized: bool,
}

impl CubicPoly {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        CubicPoly {
            a,
            b,
            c,
            d,
            normalized: false,
        }
    }

    pub fn eval(&self, k: f64) -> f64 {
        ((self.a * k + self.b) * k + self.c) * k + self.d
    }

    pub fn deriv(&self, k: f64) -> f64 {
        (3.0 * self.a * k + 2.0 * self.b) * k + self.c
    }

    /// Rescale so the constant term is 1. The root set is unchanged.
    pub fn normalize(&self) -> Result<Self> {
        if self.d == 0.0 {
            return Err(Error::NotNormalized);
        }
        Ok(CubicPoly {
            a: self.a / self.d,
            b: self.b / self.d,
            c: self.c / self.d,
            d: 1.0,
            normalized: true,
        })
    }

    /// The three real roots in ascending order.
    ///
    /// Intended for symmetric-pencil characteristic polynomials, whose roots
    /// are always real. Simple roots come from the trigonometric method for
    /// the depressed cubic plus one Newton polish. Root extraction from
    /// coefficients is ill-conditioned at multiple roots, so clustered roots
    /// are snapped to the matching root of the derivative polynomial, where
    /// the problem is simple again; this restores near-machine accuracy at
    /// the curvature-coincidence loci.
    pub fn real_roots_sorted(&self) -> [f64; 3] {
        assert!(self.a != 0.0, "leading coefficient must be nonzero");
        let b = self.b / self.a;
        let c = self.c / self.a;
        let d = self.d / self.a;
        // k = y - b/3 gives y³ + p y + q.
        let shift = b / 3.0;
        let p = c - b * b / 3.0;
        let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
        let mut roots = if p >= 0.0 {
            [-shift; 3]
        } else {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            let mut r = [0.0; 3];
            for (j, rj) in r.iter_mut().enumerate() {
                *rj = m * (theta - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos() - shift;
            }
            r.sort_by(|x, y| x.partial_cmp(y).unwrap());
            r
        };
        // Trig-method splitting of an exact double root grows like
        // √(ε/gap-to-third-root); 2e-7 covers it until the third root is
        // within ~1e-2 of the pair, while keeping genuinely split pairs
        // (which the Newton polish can resolve) out of the snap.
        let scale = 1.0 + roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let cluster = 2e-7 * scale;
        if roots[2] - roots[0] < cluster {
            // Numerically triple: the root of p'' is exact.
            let t = -shift;
            return [t; 3];
        }
        let pair = if roots[1] - roots[0] < cluster {
            Some((0usize, 1usize))
        } else if roots[2] - roots[1] < cluster {
            Some((1usize, 2usize))
        } else {
            None
        };
        if let Some((i, j)) = pair {
            // Double root: use the root of p' nearest the cluster.
            let disc = b * b - 3.0 * c;
            if disc > 0.0 {
                let sq = disc.sqrt();
                let r1 = (-b - sq) / 3.0;
                let r2 = (-b + sq) / 3.0;
                let mid = 0.5 * (roots[i] + roots[j]);
                let snap = if (r1 - mid).abs() < (r2 - mid).abs() {
                    r1
                } else {
                    r2
                };
                roots[i] = snap;
                roots[j] = snap;
            }
            let k = 3 - i - j;
            roots[k] = self.polish(roots[k]);
        } else {
            for r in &mut roots {
                *r = self.polish(*r);
            }
        }
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots
    }

    fn polish(&self, mut r: f64) -> f64 {
        // Near-double simple roots start ~√ε off; a few Newton passes
        // converge quadratically to machine precision.
        for _ in 0..4 {
            let f = self.eval(r);
            let df = self.deriv(r);
            if f == 0.0 || df == 0.0 {
                break;
            }
            let step = f / df;
            if !step.is_finite() || step.abs() > 1e-3 * (1.0 + r.abs()) {
                break;
            }
            let cand = r - step;
            if self.eval(cand).abs() > f.abs() {
                break;
            }
            r = cand;
            if step.abs() < 1e-15 * (1.0 + r.abs()) {
                break;
            }
        }
        r
    }

    /// Repeated-root discriminant of the normalized cubic A k³ + B k² + C k + 1:
    ///
    /// 27A² − 18ABC − B²C² + 4B³ + 4AC³
    ///
    /// This is the negative of the classical discriminant: it vanishes exactly
    /// at repeated roots and is negative for three distinct real roots. The
    /// five terms are accumulated with compensated summation so that
    /// near-cancellation at the repeated-root locus stays trustworthy.
    pub fn repeated_root_discriminant(&self) -> Result<f64> {
        if !self.normalized {
            return Err(Error::NotNormalized);
        }
        Ok(discriminant_terms(self.a, self.b, self.c).0)
    }

    /// Discriminant together with the largest of its five terms (used as the
    /// natural scale when deciding whether the value is "zero").
    pub fn discriminant_with_scale(&self) -> Result<(f64, f64)> {
        if !self.normalized {
            return Err(Error::NotNormalized);
        }
        Ok(discriminant_terms(self.a, self.b, self.c))
    }
}

pub(crate) fn discriminant_terms(a: f64, b: f64, c: f64) -> (f64, f64) {
    let terms = [
        27.0 * a * a,
        -18.0 * a * b * c,
        -(b * b) * (c * c),
        4.0 * b * b * b,
        4.0 * a * c * c * c,
    ];
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    (neumaier_sum(&terms), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn roots_of_expanded_products() {
        // (k-1)(k-2)(k-5) = k³ - 8k² + 17k - 10
        let p = CubicPoly::new(1.0, -8.0, 17.0, -10.0);
        let r = p.real_roots_sorted();
        assert_relative_eq!(r[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(r[1], 2.0, max_relative = 1e-12);
        assert_relative_eq!(r[2], 5.0, max_relative = 1e-12);
    }

    #[test]
    fn triple_root() {
        // (k-3)³
        let p = CubicPoly::new(1.0, -9.0, 27.0, -27.0);
        let r = p.real_roots_sorted();
        for x in r {
            assert_relative_eq!(x, 3.0, max_relative = 1e-5);
        }
    }

    #[test]
    fn double_root() {
        // (k-1)²(k-4)
        let p = CubicPoly::new(1.0, -6.0, 9.0, -4.0);
        let r = p.real_roots_sorted();
        assert_relative_eq!(r[0], 1.0, max_relative = 1e-7);
        assert_relative_eq!(r[1], 1.0, max_relative = 1e-7);
        assert_relative_eq!(r[2], 4.0, max_relative = 1e-12);
    }

    #[test]
    fn discriminant_vanishes_at_repeated_roots() {
        // (1-k)³ → A=-1, B=3, C=-3
        let p = CubicPoly {
            a: -1.0,
            b: 3.0,
            c: -3.0,
            d: 1.0,
            normalized: true,
        };
        assert_eq!(p.repeated_root_discriminant().unwrap(), 0.0);
        // (1-k)²(1-2k) → A=-2, B=5, C=-4; terms 108 - 720 - 400 + 500 + 512
        let p = CubicPoly {
            a: -2.0,
            b: 5.0,
            c: -4.0,
            d: 1.0,
            normalized: true,
        };
        assert_eq!(p.repeated_root_discriminant().unwrap(), 0.0);
    }

    #[test]
    fn discriminant_negative_for_distinct_real_roots() {
        // (1-k)(1-2k)(1-3k) → A=-6, B=11, C=-6
        let p = CubicPoly {
            a: -6.0,
            b: 11.0,
            c: -6.0,
            d: 1.0,
            normalized: true,
        };
        assert_eq!(p.repeated_root_discriminant().unwrap(), -4.0);
    }

    #[test]
    fn normalize_requires_nonzero_constant() {
        let p = CubicPoly::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(p.normalize().unwrap_err(), Error::NotNormalized);
        let q = CubicPoly::new(2.0, 4.0, 6.0, 2.0).normalize().unwrap();
        assert!(q.normalized);
        assert_eq!(q.a, 1.0);
        // Unnormalized polynomials refuse the discriminant.
        assert!(CubicPoly::new(1.0, 1.0, 1.0, 2.0)
            .repeated_root_discriminant()
            .is_err());
    }

    #[test]
    fn normalization_preserves_roots() {
        let p = CubicPoly::new(3.0, -24.0, 51.0, -30.0);
        let q = p.normalize().unwrap();
        let (rp, rq) = (p.real_roots_sorted(), q.real_roots_sorted());
        for i in 0..3 {
            assert_relative_eq!(rp[i], rq[i], max_relative = 1e-12);
        }
    }
}
