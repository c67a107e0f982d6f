//! Integer lattices: Hermite normal form, integer kernels and saturation.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use super::linalg::QMatrix;
use super::rational::Q;

/// Row echelon form over Z by unimodular row operations: returns (H, U, rank)
/// with U * A = H, U unimodular, the first `rank` rows of H nonzero.
pub fn echelon_with_transform(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero entry at or below row r
            let piv = (r..rows).filter(|&i| !h[i][c].is_zero()).min_by(|&x, &y| h[x][c].abs().cmp(&h[y][c].abs()));
            let Some(p) = piv else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                for k in 0..cols {
                    let t = &q * &h[r][k];
                    h[i][k] -= t;
                }
                for k in 0..rows {
                    let t = &q * &u[r][k];
                    u[i][k] -= t;
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows).any(|i| !h[i][c].is_zero()) {
            if h[r][c].is_negative() {
                for x in h[r].iter_mut() {
                    *x = -&*x;
                }
                for x in u[r].iter_mut() {
                    *x = -&*x;
                }
            }
            // reduce rows above the pivot
            for i in 0..r {
                let q = h[i][c].div_floor(&h[r][c]);
                if q.is_zero() {
                    continue;
                }
                for k in 0..cols {
                    let t = &q * &h[r][k];
                    h[i][k] -= t;
                }
                for k in 0..rows {
                    let t = &q * &u[r][k];
                    u[i][k] -= t;
                }
            }
            r += 1;
        }
    }
    (h, u, r)
}

/// Hermite normal form basis (nonzero rows) of the Z-span of the given rows.
pub fn hnf_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (h, _, r) = echelon_with_transform(rows);
    h.into_iter().take(r).collect()
}

/// Z-basis (in Hermite normal form) of {x in Z^n : C x = 0}.
pub fn integer_kernel(c: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    if c.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
    }
    // transpose, then the rows of U past the rank span the left kernel of C^T
    let ct: Vec<Vec<BigInt>> = (0..n).map(|j| c.iter().map(|row| row[j].clone()).collect()).collect();
    let (_, u, r) = echelon_with_transform(&ct);
    hnf_basis(&u[r..])
}

/// Clears denominators of a rational vector and divides by the content.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Saturated Z-basis of (Q-span of `vectors`) intersected with Z^n.
pub fn saturate(vectors: &[Vec<Q>], n: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let complement = QMatrix::from_rows(vectors.to_vec()).nullspace();
    let c: Vec<Vec<BigInt>> = complement.iter().map(|v| primitive_integer_vector(v)).collect();
    integer_kernel(&c, n)
}

pub fn to_q_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let h = hnf_basis(&bi(&[vec![2, 4], vec![3, 5]]));
        // determinant 2*5-4*3 = -2, so the HNF is [[1, x], [0, 2]]
        assert_eq!(h, bi(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(hnf_basis(&bi(&[vec![2, 2], vec![3, 3]])), bi(&[vec![1, 1]]));
    }

    #[test]
    fn saturation_recovers_primitive_vectors() {
        let v = vec![vec![Q::from_integer(2.into()), Q::from_integer(4.into()), Q::zero()]];
        assert_eq!(saturate(&v, 3), bi(&[vec![1, 2, 0]]));
        let k = integer_kernel(&bi(&[vec![1, 1, 1]]), 3);
        assert_eq!(k.len(), 2);
        for row in &k {
            assert_eq!(row.iter().fold(BigInt::zero(), |a, b| a + b), BigInt::zero());
        }
    }
}
