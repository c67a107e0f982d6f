use nalgebra::{DMatrix, DVector};
use num::Zero;
use serde::Serialize;

use crate::arith::lattice::saturate;
use crate::arith::{QMatrix, Q};
use crate::hodge::IntegralRepresentation;

/// Saturated integral basis of the G-invariant alternating forms on the lattice.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantTwoFormSpace {
    pub rank: usize,
    pub basis: Vec<QMatrix>,
}

impl InvariantTwoFormSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// sum_k c_k basis_k, exactly.
    pub fn combine(&self, coords: &[Q]) -> QMatrix {
        let mut out = QMatrix::zeros(self.rank, self.rank);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }

    /// Least-squares coordinates of a real alternating matrix in the basis.
    pub fn coordinates(&self, m: &DMatrix<f64>) -> Vec<f64> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let pairs = upper_pairs(self.rank);
        let a = DMatrix::from_fn(pairs.len(), self.basis.len(), |row, col| {
            let (i, j) = pairs[row];
            crate::arith::rational::to_f64(&self.basis[col][(i, j)])
        });
        let b = DVector::from_iterator(pairs.len(), pairs.iter().map(|&(i, j)| m[(i, j)]));
        let svd = a.svd(true, true);
        svd.solve(&b, 1e-12).map(|x| x.iter().copied().collect()).unwrap_or_else(|_| vec![0.0; self.basis.len()])
    }
}

fn upper_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect()
}

/// Averages every elementary alternating form over the group and saturates
/// the span of the averages.
pub fn invariant_two_forms(rep: &IntegralRepresentation) -> InvariantTwoFormSpace {
    let r = rep.rank();
    let pairs = upper_pairs(r);
    let mut averaged: Vec<Vec<Q>> = Vec::new();
    for &(i, j) in &pairs {
        let mut eta = QMatrix::zeros(r, r);
        eta[(i, j)] = Q::from_integer(1.into());
        eta[(j, i)] = Q::from_integer((-1).into());
        let mut sum = QMatrix::zeros(r, r);
        for m in rep.matrices() {
            sum = sum.add(&m.transpose().mul(&eta).mul(m));
        }
        let v: Vec<Q> = pairs.iter().map(|&(a, b)| sum[(a, b)].clone()).collect();
        if v.iter().any(|x| !x.is_zero()) {
            averaged.push(v);
        }
    }
    let basis = saturate(&averaged, pairs.len())
        .into_iter()
        .map(|v| {
            let mut m = QMatrix::zeros(r, r);
            for (x, &(a, b)) in v.iter().zip(&pairs) {
                m[(a, b)] = Q::from_integer(x.clone());
                m[(b, a)] = Q::from_integer(-x.clone());
            }
            m
        })
        .collect();
    InvariantTwoFormSpace { rank: r, basis }
}
