//! Thin helpers over nalgebra for small complex matrices.

use crate::error::{Error, Result};
use crate::{CMatrix, C64};
use nalgebra::{DMatrix, DVector};

/// Eigenvalues through the complex Schur form; `None` if QR does not converge.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<C64>> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 2000)?;
    match schur.eigenvalues() {
        Some(ev) => Some(ev.iter().copied().collect()),
        None => {
            let (_, t) = schur.unpack();
            Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
        }
    }
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("singular matrix".into()))
}

pub fn solve(m: &CMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    let b = DVector::from_column_slice(rhs);
    m.clone()
        .lu()
        .solve(&b)
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::InvalidInput("singular matrix".into()))
}

pub fn mat_vec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub fn mat_t_vec(m: &CMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)] * v[i]).sum())
        .collect()
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inf_norm(m: &CMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Max-entry norm.
pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Infinity-norm condition number; infinite when singular.
pub fn condition(m: &CMatrix) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => inf_norm(m) * inf_norm(&inv),
        None => f64::INFINITY,
    }
}

pub fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.im)
}

/// Eigenvalues of the symmetric part of a real matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let s = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.transpose()) * C64::new(0.5, 0.0)
}
