//! First and second fundamental forms in a chart, and the characteristic
//! cubic of the curvature pencil det(II − k·I) = 0.

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::chart::Chart;
use crate::cubic::CubicPoly;
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::surface::Ellipsoid4;

/// A 3×3 symmetric bilinear form in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricForm3 {
    m: Matrix3<f64>,
}

impl SymmetricForm3 {
    /// Build from the six independent entries (m00, m01, m02, m11, m12, m22).
    pub fn from_entries(e: [f64; 6]) -> Self {
        let m = Matrix3::new(e[0], e[1], e[2], e[1], e[3], e[4], e[2], e[4], e[5]);
        SymmetricForm3 { m }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn apply(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        (self.m * y).dot(x)
    }

    /// All leading principal minors strictly positive.
    pub fn is_positive_definite(&self) -> bool {
        let m = &self.m;
        let d1 = m[(0, 0)];
        let d2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        d1 > 0.0 && d2 > 0.0 && m.determinant() > 0.0
    }
}

/// First and second fundamental forms at an interior chart point, oriented by
/// the inner unit normal.
pub fn fundamental_forms(
    surface: &Ellipsoid4,
    chart: &Chart,
    params: [f64; 3],
) -> Result<(SymmetricForm3, SymmetricForm3)> {
    debug_assert_eq!(surface.canonical_axes(), chart.canonical_axes());
    let jets = chart.eval_jet_canonical(params)?;
    forms_from_jets(chart.canonical_axes(), &jets)
}

pub(crate) fn forms_from_jets(
    canon_axes: [f64; 4],
    jets: &[Jet3; 4],
) -> Result<(SymmetricForm3, SymmetricForm3)> {
    let mut g = [0.0; 6];
    for i in 0..3 {
        for j in 0..=i {
            g[pack(i, j)] = (0..4).map(|k| jets[k].grad[i] * jets[k].grad[j]).sum();
        }
    }
    let first = SymmetricForm3::from_entries([g[0], g[1], g[2], g[3], g[4], g[5]]);
    let gram_det = first.m.determinant();
    if gram_det < 1e-14 {
        return Err(Error::SingularChart { gram_det });
    }

    // Inner unit normal from the ambient gradient at the evaluated point.
    let mut grad = Vector4::zeros();
    for k in 0..4 {
        grad[k] = 2.0 * jets[k].val / (canon_axes[k] * canon_axes[k]);
    }
    let n = -grad / grad.norm();

    let mut b = [0.0; 6];
    for i in 0..3 {
        for j in 0..=i {
            b[pack(i, j)] = (0..4).map(|k| jets[k].hess_at(i, j) * n[k]).sum();
        }
    }
    let second = SymmetricForm3::from_entries([b[0], b[1], b[2], b[3], b[4], b[5]]);
    Ok((first, second))
}

/// Packed index into (00, 01, 02, 11, 12, 22) storage for i ≥ j or i < j.
fn pack(i: usize, j: usize) -> usize {
    let (i, j) = if i >= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (1, 0) => 1,
        (2, 0) => 2,
        (1, 1) => 3,
        (2, 1) => 4,
        (2, 2) => 5,
        _ => unreachable!(),
    }
}

/// Characteristic cubic of the pencil: det(II − k·I) as a polynomial in k.
///
/// Expanded by column multilinearity, so the coefficients are exact
/// polynomials in the form entries (no root-dependent steps).
pub fn characteristic_cubic(first: &SymmetricForm3, second: &SymmetricForm3) -> CubicPoly {
    pencil_cubic(second.matrix(), first.matrix())
}

/// det(B − k·G) with columns mixed combinatorially.
pub fn pencil_cubic(b: &Matrix3<f64>, g: &Matrix3<f64>) -> CubicPoly {
    let bc = [
        b.column(0).into_owned(),
        b.column(1).into_owned(),
        b.column(2).into_owned(),
    ];
    let gc = [
        g.column(0).into_owned(),
        g.column(1).into_owned(),
        g.column(2).into_owned(),
    ];
    let det = |c0: &Vector3<f64>, c1: &Vector3<f64>, c2: &Vector3<f64>| {
        c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
            + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1])
    };
    let d0 = det(&bc[0], &bc[1], &bc[2]);
    let d1 =
        det(&gc[0], &bc[1], &bc[2]) + det(&bc[0], &gc[1], &bc[2]) + det(&bc[0], &bc[1], &gc[2]);
    let d2 =
        det(&gc[0], &gc[1], &bc[2]) + det(&gc[0], &bc[1], &gc[2]) + det(&bc[0], &gc[1], &gc[2]);
    let d3 = det(&gc[0], &gc[1], &gc[2]);
    // det(B - kG) = d0 - d1 k + d2 k² - d3 k³
    CubicPoly::new(-d3, d2, -d1, d0)
}

/// Principal curvatures at a chart point: the sorted pencil eigenvalues.
pub fn chart_principal_curvatures(
    surface: &Ellipsoid4,
    chart: &Chart,
    params: [f64; 3],
) -> Result<[f64; 3]> {
    let (g, b) = fundamental_forms(surface, chart, params)?;
    Ok(characteristic_cubic(&g, &b).real_roots_sorted())
}
