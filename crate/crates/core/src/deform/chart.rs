use nalgebra::{Complex, DMatrix};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::forms::InvariantTwoFormSpace;
use super::DeformError;
use crate::arith::rational::to_f64;
use crate::arith::QMatrix;
use crate::hodge::{HodgeError, HodgeTolerances, IntegralRepresentation, NumericComplexStructure};

pub type C64 = Complex<f64>;

/// Relative singular value below which a chart direction counts as invariant.
const NULL_TOLERANCE: f64 = 1e-9;

pub(crate) fn serialize_cmatrix<S: Serializer>(m: &DMatrix<C64>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

pub(crate) fn serialize_rmatrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    rows.serialize(s)
}

pub fn qmatrix_f64(m: &QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| to_f64(&m[(i, j)]))
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// A point U_t = {u + t(u)} of the graph chart over U_0; `t` is the matrix of
/// t in the bases base and conj(base).
#[derive(Clone, Debug, Serialize)]
pub struct PeriodPoint {
    #[serde(serialize_with = "serialize_cmatrix")]
    pub base: DMatrix<C64>,
    #[serde(serialize_with = "serialize_cmatrix")]
    pub t: DMatrix<C64>,
}

impl PeriodPoint {
    pub fn origin(base: &DMatrix<C64>) -> Self {
        let n = base.ncols();
        PeriodPoint { base: base.clone(), t: DMatrix::zeros(n, n) }
    }

    /// Basis columns of U_t.
    pub fn basis(&self) -> DMatrix<C64> {
        &self.base + self.base.map(|z| z.conj()) * &self.t
    }

    pub fn distance(&self) -> f64 {
        self.t.norm()
    }

    /// Condition number of [U_t | conj U_t].
    pub fn conditioning(&self) -> f64 {
        let b = self.basis();
        let full = concat_columns(&b, &b.map(|z| z.conj()));
        let sv = full.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    }
}

fn concat_columns(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(a.nrows(), a.ncols() + b.ncols(), |i, j| if j < a.ncols() { a[(i, j)] } else { b[(i, j - a.ncols())] })
}

/// Graph chart of the G-invariant period domain around the complex structure J.
#[derive(Clone, Debug)]
pub struct PeriodChart {
    /// orthonormal basis of U_0 = ker(J - i), 2n x n
    pub base: DMatrix<C64>,
    /// action of each group element on U_0 in the basis `base`
    pub action: Vec<DMatrix<C64>>,
    /// Frobenius-orthonormal basis of {T : T R(g) = conj(R(g)) T for all g}
    pub tangent: Vec<DMatrix<C64>>,
}

impl PeriodChart {
    pub fn new(rep: &IntegralRepresentation, j: &NumericComplexStructure, tol: &HodgeTolerances) -> Result<Self, HodgeError> {
        j.validate(rep, tol)?;
        let r = rep.rank();
        let n = r / 2;
        let a = complexify(&j.j) - DMatrix::<C64>::identity(r, r) * C64::new(0.0, 1.0);
        let svd = a.svd(false, true);
        let vt = svd.v_t.ok_or_else(|| HodgeError::InvalidComplexStructure("svd failed".into()))?;
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
        if n > 0 && svd.singular_values[order[n - 1]] > 1e-6 {
            return Err(HodgeError::InvalidComplexStructure("ker(J - i) is too small".into()));
        }
        let base = DMatrix::from_fn(r, n, |row, col| vt[(order[col], row)].conj());
        let bh = base.adjoint();
        let action: Vec<DMatrix<C64>> =
            rep.matrices().iter().map(|m| &bh * complexify(&qmatrix_f64(m)) * &base).collect();
        let tangent = invariant_directions(&action, &rep.group().generators(), n);
        Ok(PeriodChart { base, action, tangent })
    }

    pub fn n(&self) -> usize {
        self.base.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.tangent.len()
    }

    pub fn origin(&self) -> PeriodPoint {
        PeriodPoint::origin(&self.base)
    }

    pub fn point(&self, coords: &[C64]) -> PeriodPoint {
        let n = self.n();
        let mut t = DMatrix::zeros(n, n);
        for (c, d) in coords.iter().zip(&self.tangent) {
            t += d * *c;
        }
        PeriodPoint { base: self.base.clone(), t }
    }

    /// The (2,0)-part B_t^T xi B_t, which is holomorphic in t and is the
    /// conjugate of the (0,2)-part for real xi.
    pub fn two_zero_part(&self, xi: &DMatrix<f64>, p: &PeriodPoint) -> DMatrix<C64> {
        let b = p.basis();
        b.transpose() * complexify(xi) * b
    }

    /// Derivative of the (2,0)-part along the invariant directions, one column
    /// per direction, rows indexed by the pairs a < b.
    pub fn linearization(&self, xi: &DMatrix<f64>, p: &PeriodPoint) -> DMatrix<C64> {
        let n = self.n();
        let c = p.basis().transpose() * complexify(xi) * self.base.map(|z| z.conj());
        let rows = n * n.saturating_sub(1) / 2;
        let mut out = DMatrix::zeros(rows, self.tangent.len());
        for (k, d) in self.tangent.iter().enumerate() {
            let cd = &c * d;
            let diff = &cd - cd.transpose();
            for (row, (a, b)) in upper_pairs(n).into_iter().enumerate() {
                out[(row, k)] = diff[(a, b)];
            }
        }
        out
    }
}

pub(crate) fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn invariant_directions(action: &[DMatrix<C64>], generators: &[usize], n: usize) -> Vec<DMatrix<C64>> {
    let m = n * n;
    let unit = |k: usize| {
        let mut e = DMatrix::<C64>::zeros(n, n);
        e[(k % n, k / n)] = C64::new(1.0, 0.0);
        e
    };
    if m == 0 {
        return Vec::new();
    }
    if generators.is_empty() {
        return (0..m).map(unit).collect();
    }
    let rows = generators.len() * m;
    let mut sys = DMatrix::<C64>::zeros(rows.max(m), m);
    for k in 0..m {
        let e = unit(k);
        for (gi, &g) in generators.iter().enumerate() {
            let r = &action[g];
            let img = &e * r - r.map(|z| z.conj()) * &e;
            for idx in 0..m {
                sys[(gi * m + idx, k)] = img[(idx % n, idx / n)];
            }
        }
    }
    let svd = sys.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let scale = svd.singular_values.iter().copied().fold(1.0, f64::max);
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= NULL_TOLERANCE * scale)
        .map(|i| DMatrix::from_fn(n, n, |a, b| vt[(i, a + b * n)].conj()))
        .collect()
}

/// xi^{0,2} at t: the restriction of xi to conj(U_t) x conj(U_t).
pub fn zero_two_part(xi: &DMatrix<f64>, p: &PeriodPoint) -> DMatrix<C64> {
    let b = p.basis().map(|z| z.conj());
    b.transpose() * complexify(xi) * b
}

/// Least eigenvalue of the Hermitian form -i xi(v, conj v) on an orthonormal
/// basis of U_t, divided by ||xi||.
pub fn positivity_margin(xi: &DMatrix<f64>, p: &PeriodPoint) -> f64 {
    let q = p.basis().qr().q();
    let h = (q.transpose() * complexify(xi) * q.map(|z| z.conj())) * C64::new(0.0, -1.0);
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let norm = xi.norm();
    if norm == 0.0 || h.nrows() == 0 {
        return 0.0;
    }
    h.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min) / norm
}

#[derive(Clone, Debug, Serialize)]
pub struct KahlerClass {
    #[serde(serialize_with = "serialize_rmatrix")]
    pub matrix: DMatrix<f64>,
    pub coordinates: Vec<f64>,
    pub relation_one_residual: f64,
    pub positivity_margin: f64,
}

/// omega = i sum_k u_k^dual ^ conj(u_k^dual) for the orthonormal basis u_k of
/// U_0, averaged over the group.
pub fn invariant_kahler_class(
    rep: &IntegralRepresentation,
    j: &NumericComplexStructure,
    chart: &PeriodChart,
    space: &InvariantTwoFormSpace,
) -> Result<KahlerClass, DeformError> {
    let n = chart.n();
    let b = &chart.base;
    let full = concat_columns(b, &b.map(|z| z.conj()));
    let inv = full.try_inverse().ok_or(DeformError::IllConditioned(f64::INFINITY))?;
    let dual = inv.rows(0, n).into_owned();
    let dual_conj = dual.map(|z| z.conj());
    let w = (dual.transpose() * &dual_conj - dual_conj.transpose() * &dual) * C64::new(0.0, 1.0);
    let omega = w.map(|z| z.re);
    let mut avg = DMatrix::<f64>::zeros(omega.nrows(), omega.ncols());
    for m in rep.matrices() {
        let mf = qmatrix_f64(m);
        avg += mf.transpose() * &omega * mf;
    }
    avg /= rep.matrices().len() as f64;
    let relation_one_residual = (j.j.transpose() * &avg * &j.j - &avg).norm() / avg.norm();
    let positivity_margin = positivity_margin(&avg, &chart.origin());
    let coordinates = space.coordinates(&avg);
    Ok(KahlerClass { matrix: avg, coordinates, relation_one_residual, positivity_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::invariant_two_forms;

    #[test]
    fn gaussian_kahler_class_is_standard() {
        let rep = IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let chart = PeriodChart::new(&rep, &j, &HodgeTolerances::default()).unwrap();
        assert_eq!(chart.dimension(), 0);
        let space = invariant_two_forms(&rep);
        let k = invariant_kahler_class(&rep, &j, &chart, &space).unwrap();
        assert!((k.matrix[(0, 1)] - 1.0).abs() < 1e-12 && (k.matrix[(1, 0)] + 1.0).abs() < 1e-12);
        assert!((k.coordinates[0] - 1.0).abs() < 1e-12);
        assert!(k.positivity_margin > 0.5);
        assert!(zero_two_part(&k.matrix, &chart.origin()).norm() < 1e-12);
    }
}
