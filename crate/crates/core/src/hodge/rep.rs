use std::sync::Arc;

use num::{One, Signed, ToPrimitive, Zero};

use super::HodgeError;
use crate::arith::{CyclotomicField, CyclotomicNumber, Matrix, QMatrix, Q};
use crate::group::FiniteGroup;

/// A group acting on Z^rank by integer matrices, one per group element.
#[derive(Clone, Debug)]
pub struct IntegralRepresentation {
    group: FiniteGroup,
    rank: usize,
    matrices: Vec<QMatrix>,
}

impl IntegralRepresentation {
    /// The matrix group generated by `generators` (integer square matrices);
    /// the group is taken to be the image, so the representation is faithful.
    pub fn from_generator_matrices(name: &str, rank: usize, generators: &[Vec<Vec<i64>>]) -> Result<Self, HodgeError> {
        for (k, m) in generators.iter().enumerate() {
            if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                return Err(HodgeError::InvalidRepresentation(format!("generator {k} is not {rank}x{rank}")));
            }
        }
        let flat: Vec<Vec<i64>> = generators.iter().map(|m| m.iter().flatten().copied().collect()).collect();
        let id: Vec<i64> = (0..rank * rank).map(|i| i64::from(i / rank == i % rank)).collect();
        let overflow = std::cell::Cell::new(false);
        let mul = |a: &Vec<i64>, b: &Vec<i64>| -> Vec<i64> {
            let mut out = vec![0i64; rank * rank];
            for i in 0..rank {
                for j in 0..rank {
                    let mut s: i128 = 0;
                    for k in 0..rank {
                        s += a[i * rank + k] as i128 * b[k * rank + j] as i128;
                    }
                    if s.abs() > (1i128 << 40) {
                        overflow.set(true);
                        s = 0;
                    }
                    out[i * rank + j] = s as i64;
                }
            }
            out
        };
        let (group, elems) = FiniteGroup::generate(name, id, &flat, mul)
            .map_err(|e| HodgeError::InvalidRepresentation(format!("generated group is not finite or too large: {e}")))?;
        if overflow.get() {
            return Err(HodgeError::InvalidRepresentation("matrix entries grow without bound".into()));
        }
        let matrices = elems
            .iter()
            .map(|e| Matrix::from_fn(rank, rank, |i, j| Q::from_integer(e[i * rank + j].into())))
            .collect();
        Self::from_group(group, matrices)
    }

    /// Validates that `matrices[g]` is a homomorphism into GL(rank, Z).
    pub fn from_group(group: FiniteGroup, matrices: Vec<QMatrix>) -> Result<Self, HodgeError> {
        let n = group.order();
        if matrices.len() != n {
            return Err(HodgeError::InvalidRepresentation(format!("{} matrices for a group of order {n}", matrices.len())));
        }
        let rank = matrices[0].rows();
        for (g, m) in matrices.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(HodgeError::InvalidRepresentation(format!("matrix of element {g} has the wrong shape")));
            }
            if !m.is_integral() {
                return Err(HodgeError::InvalidRepresentation(format!("matrix of element {g} is not integral")));
            }
            let d = m.determinant();
            if d.abs() != Q::one() {
                return Err(HodgeError::InvalidRepresentation(format!("matrix of element {g} has determinant {d}")));
            }
        }
        if matrices[0] != QMatrix::identity(rank) {
            return Err(HodgeError::InvalidRepresentation("identity element does not act trivially".into()));
        }
        let lefts: Vec<usize> = if n <= 64 { (0..n).collect() } else { group.generators() };
        for &a in &lefts {
            for b in 0..n {
                if matrices[a].mul(&matrices[b]) != matrices[group.mul(a, b)] {
                    return Err(HodgeError::InvalidRepresentation(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(IntegralRepresentation { group, rank, matrices })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, g: usize) -> &QMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    pub fn trace(&self, g: usize) -> i64 {
        self.matrices[g].trace().to_integer().to_i64().expect("small trace")
    }

    /// Image of a group-algebra element sum_g c_g g.
    pub fn apply(&self, coeffs: &[Q]) -> QMatrix {
        let mut acc = QMatrix::zeros(self.rank, self.rank);
        for (g, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.matrices[g].scale(c));
            }
        }
        acc
    }

    /// Image of a group-algebra element with cyclotomic coefficients.
    pub fn apply_cyclo(&self, coeffs: &[CyclotomicNumber]) -> Matrix<CyclotomicNumber> {
        let field = coeffs[0].field().clone();
        let mut acc = Matrix::filled(self.rank, self.rank, CyclotomicNumber::zero(&field));
        for (g, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = &self.matrices[g];
            acc = Matrix::from_fn(self.rank, self.rank, |i, j| {
                if m[(i, j)].is_zero() {
                    acc[(i, j)].clone()
                } else {
                    &acc[(i, j)] + &c.scale(&m[(i, j)])
                }
            });
        }
        acc
    }

    pub fn matrix_over(&self, g: usize, field: &Arc<CyclotomicField>) -> Matrix<CyclotomicNumber> {
        self.matrices[g].map(|x| CyclotomicNumber::from_rational(field, x.clone()))
    }

    pub fn matrix_f64(&self, g: usize) -> nalgebra::DMatrix<f64> {
        let m = &self.matrices[g];
        nalgebra::DMatrix::from_fn(self.rank, self.rank, |i, j| crate::arith::rational::to_f64(&m[(i, j)]))
    }

    /// Block-diagonal sum of representations of the same group.
    pub fn direct_sum(&self, other: &IntegralRepresentation) -> IntegralRepresentation {
        assert_eq!(self.group.order(), other.group.order());
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()], &Q::zero()))
            .collect();
        IntegralRepresentation { group: self.group.clone(), rank: self.rank + other.rank, matrices }
    }

    /// The same group acting trivially on Z^rank.
    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        IntegralRepresentation {
            group: group.clone(),
            rank,
            matrices: vec![QMatrix::identity(rank); group.order()],
        }
    }

    /// Generator matrices for the greedy generating set of the group.
    pub fn generator_matrices(&self) -> Vec<(usize, &QMatrix)> {
        self.group.generators().into_iter().map(|g| (g, &self.matrices[g])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_of_order_four() {
        let r = IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap();
        assert_eq!(r.group().order(), 4);
        assert_eq!(r.trace(0), 2);
        let sum: i64 = (0..4).map(|g| r.trace(g)).sum();
        assert_eq!(sum, 0);
        assert!(IntegralRepresentation::from_generator_matrices("x", 2, &[vec![vec![2, 0], vec![0, 1]]]).is_err());
        assert!(IntegralRepresentation::from_generator_matrices("x", 2, &[vec![vec![1, 1], vec![0, 1]]]).is_err());
    }
}
