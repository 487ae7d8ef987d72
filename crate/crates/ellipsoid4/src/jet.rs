//! Second-order forward-mode differentiation in three chart variables.
//!
//! A [`Jet3`] carries a value, its gradient and its (symmetric) Hessian with
//! respect to the three chart parameters. Chart maps written in terms of
//! `Jet3` arithmetic therefore produce exact first and second partial
//! derivatives, with no finite differencing anywhere on production paths.

/// Value, gradient and Hessian of a scalar function of three variables.
///
/// The Hessian is stored in packed lower-triangular order
/// `(00, 10, 11, 20, 21, 22)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub val: f64,
    pub grad: [f64; 3],
    pub hess: [f64; 6],
}

const HIDX: [[usize; 3]; 3] = [[0, 1, 3], [1, 2, 4], [3, 4, 5]];

impl Jet3 {
    pub const ZERO: Jet3 = Jet3::constant(0.0);

    pub const fn constant(v: f64) -> Self {
        Jet3 {
            val: v,
            grad: [0.0; 3],
            hess: [0.0; 6],
        }
    }

    /// Seed the `i`-th independent variable with value `v`.
    pub fn variable(v: f64, i: usize) -> Self {
        let mut g = [0.0; 3];
        g[i] = 1.0;
        Jet3 {
            val: v,
            grad: g,
            hess: [0.0; 6],
        }
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[HIDX[i][j]]
    }

    /// Apply a smooth univariate function given `(f, f', f'')` at `self.val`.
    fn compose(&self, f: f64, df: f64, d2f: f64) -> Self {
        let mut out = Jet3 {
            val: f,
            grad: [0.0; 3],
            hess: [0.0; 6],
        };
        for i in 0..3 {
            out.grad[i] = df * self.grad[i];
        }
        let mut k = 0;
        for i in 0..3 {
            for j in 0..=i {
                out.hess[k] = df * self.hess[k] + d2f * self.grad[i] * self.grad[j];
                k += 1;
            }
        }
        out
    }

    pub fn sqrt(&self) -> Self {
        let s = self.val.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.val;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(&self, n: i32) -> Self {
        let f = self.val.powi(n);
        let df = f64::from(n) * self.val.powi(n - 1);
        let d2f = f64::from(n) * f64::from(n - 1) * self.val.powi(n - 2);
        self.compose(f, df, d2f)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = *self;
        out.val *= c;
        for g in &mut out.grad {
            *g *= c;
        }
        for h in &mut out.hess {
            *h *= c;
        }
        out
    }
}

impl std::ops::Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut out = self;
        out.val += rhs.val;
        for i in 0..3 {
            out.grad[i] += rhs.grad[i];
        }
        for i in 0..6 {
            out.hess[i] += rhs.hess[i];
        }
        out
    }
}

impl std::ops::Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        let mut out = self;
        out.val -= rhs.val;
        for i in 0..3 {
            out.grad[i] -= rhs.grad[i];
        }
        for i in 0..6 {
            out.hess[i] -= rhs.hess[i];
        }
        out
    }
}

impl std::ops::Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let mut out = Jet3 {
            val: self.val * rhs.val,
            grad: [0.0; 3],
            hess: [0.0; 6],
        };
        for i in 0..3 {
            out.grad[i] = self.val * rhs.grad[i] + rhs.val * self.grad[i];
        }
        let mut k = 0;
        for i in 0..3 {
            for j in 0..=i {
                out.hess[k] = self.val * rhs.hess[k]
                    + rhs.val * self.hess[k]
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
                k += 1;
            }
        }
        out
    }
}

impl std::ops::Div for Jet3 {
    type Output = Jet3;
    fn div(self, rhs: Jet3) -> Jet3 {
        self * rhs.recip()
    }
}

impl std::ops::Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: f64) -> Jet3 {
        let mut out = self;
        out.val += rhs;
        out
    }
}

impl std::ops::Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: f64) -> Jet3 {
        let mut out = self;
        out.val -= rhs;
        out
    }
}

impl std::ops::Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Jet3 {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Central-difference jet of `f` at `x`, for validating the algebraic rules.
    fn numeric_jet(f: impl Fn(&[f64; 3]) -> f64, x: [f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
        let h = 1e-5;
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        let eval = |dx: [f64; 3]| {
            let mut y = x;
            for i in 0..3 {
                y[i] += dx[i];
            }
            f(&y)
        };
        for i in 0..3 {
            let mut dp = [0.0; 3];
            dp[i] = h;
            let mut dm = [0.0; 3];
            dm[i] = -h;
            grad[i] = (eval(dp) - eval(dm)) / (2.0 * h);
            hess[i][i] = (eval(dp) - 2.0 * f(&x) + eval(dm)) / (h * h);
        }
        for i in 0..3 {
            for j in 0..i {
                let mut dpp = [0.0; 3];
                dpp[i] = h;
                dpp[j] = h;
                let mut dpm = [0.0; 3];
                dpm[i] = h;
                dpm[j] = -h;
                let mut dmp = [0.0; 3];
                dmp[i] = -h;
                dmp[j] = h;
                let mut dmm = [0.0; 3];
                dmm[i] = -h;
                dmm[j] = -h;
                hess[i][j] = (eval(dpp) - eval(dpm) - eval(dmp) + eval(dmm)) / (4.0 * h * h);
                hess[j][i] = hess[i][j];
            }
        }
        (grad, hess)
    }

    #[test]
    fn matches_finite_differences_on_composite() {
        let x = [0.3, -0.4, 0.7];
        let f = |p: &[f64; 3]| {
            (p[0].sin() * p[1] + (1.0 + p[2] * p[2]).sqrt()) / (2.0 + p[0].cos() * p[2])
        };
        let u = Jet3::variable(x[0], 0);
        let v = Jet3::variable(x[1], 1);
        let w = Jet3::variable(x[2], 2);
        let j = (u.sin() * v + (w * w + 1.0).sqrt()) / (u.cos() * w + 2.0);
        assert_relative_eq!(j.val, f(&x), max_relative = 1e-14);
        let (g, h) = numeric_jet(f, x);
        for i in 0..3 {
            assert_relative_eq!(j.grad[i], g[i], max_relative = 1e-7, epsilon = 1e-9);
            for k in 0..3 {
                assert_relative_eq!(
                    j.hess_at(i, k),
                    h[i][k],
                    max_relative = 1e-4,
                    epsilon = 1e-6
                );
            }
        }
    }

    #[test]
    fn powi_consistent_with_mul() {
        let u = Jet3::variable(1.7, 1);
        let p = u.powi(3);
        let m = u * u * u;
        assert_relative_eq!(p.val, m.val, max_relative = 1e-14);
        for i in 0..6 {
            assert_relative_eq!(p.hess[i], m.hess[i], max_relative = 1e-13, epsilon = 1e-13);
        }
    }
}
