//! Exact Hodge decompositions V (x) K = V^{1,0} + V^{0,1} over K = Q(zeta_L),
//! with L divisible by 4 and by the group exponent, and the brute-force
//! computation of equivariant maps V^{0,1} -> V^{1,0}.

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use num::integer::lcm;

use super::character::{HodgeCharacter, NumericComplexStructure};
use super::rep::IntegralRepresentation;
use super::split::IsotypicPiece;
use super::symbolic::{FieldSummand, SymbolicHodgeSpec};
use super::HodgeError;
use crate::arith::{CyclotomicField, CyclotomicNumber, EmbeddingIndex, Matrix, Q};
use crate::group::{central_idempotent, CharacterTable, GaloisOrbitDecomposition};

pub type KMatrix = Matrix<CyclotomicNumber>;

/// Largest rank accepted by the exact brute-force pathway.
pub const BRUTE_FORCE_RANK_CAP: usize = 64;

pub fn hodge_field(exponent: usize) -> Arc<CyclotomicField> {
    CyclotomicField::new(lcm(exponent, 4) as u32)
}

fn conj_matrix(m: &KMatrix) -> KMatrix {
    m.map(|x| x.conjugate())
}

fn i_unit(k: &Arc<CyclotomicField>) -> CyclotomicNumber {
    CyclotomicNumber::zeta_pow(k, k.conductor() as i64 / 4)
}

/// rho(e_chi) over K.
pub fn character_projector(
    rep: &IntegralRepresentation,
    table: &CharacterTable,
    chi: usize,
    k: &Arc<CyclotomicField>,
) -> KMatrix {
    let e: Vec<CyclotomicNumber> = central_idempotent(table, rep.group(), chi).iter().map(|x| x.lift(k)).collect();
    rep.apply_cyclo(&e)
}

#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub field: Arc<CyclotomicField>,
    /// columns span V^{1,0}; rank x n
    pub basis10: KMatrix,
}

impl HodgeDecomposition {
    /// V^{1,0} = sum of the chi-isotypic parts for the chosen characters.
    pub fn from_characters(
        rep: &IntegralRepresentation,
        table: &CharacterTable,
        chosen: &[usize],
    ) -> Result<Self, HodgeError> {
        let k = hodge_field(rep.group().exponent());
        let r = rep.rank();
        let mut p = Matrix::filled(r, r, CyclotomicNumber::zero(&k));
        for &chi in chosen {
            p = p.add(&character_projector(rep, table, chi, &k));
        }
        let cols = p.column_space();
        let basis10 = if cols.is_empty() {
            Matrix::filled(r, 0, CyclotomicNumber::zero(&k))
        } else {
            Matrix::from_columns(&cols)
        };
        let d = HodgeDecomposition { field: k, basis10 };
        d.validate(rep)?;
        Ok(d)
    }

    /// For V = M + M (two equal blocks of rank r): V^{1,0} = {(v, i v)}.
    pub fn paired(r: usize, k: &Arc<CyclotomicField>) -> Self {
        let i = i_unit(k);
        let zero = CyclotomicNumber::zero(k);
        let one = CyclotomicNumber::one(k);
        let basis10 = Matrix::from_fn(2 * r, r, |row, col| {
            if row == col {
                one.clone()
            } else if row == r + col {
                i.clone()
            } else {
                zero.clone()
            }
        });
        HodgeDecomposition { field: k.clone(), basis10 }
    }

    pub fn direct_sum(&self, other: &HodgeDecomposition) -> Self {
        assert_eq!(self.field.conductor(), other.field.conductor());
        let zero = CyclotomicNumber::zero(&self.field);
        let (r1, c1) = (self.basis10.rows(), self.basis10.cols());
        let (r2, c2) = (other.basis10.rows(), other.basis10.cols());
        let basis10 = Matrix::from_fn(r1 + r2, c1 + c2, |i, j| {
            if i < r1 && j < c1 {
                self.basis10[(i, j)].clone()
            } else if i >= r1 && j >= c1 {
                other.basis10[(i - r1, j - c1)].clone()
            } else {
                zero.clone()
            }
        });
        HodgeDecomposition { field: self.field.clone(), basis10 }
    }

    /// Re-expresses the decomposition over a larger cyclotomic field.
    pub fn lift(&self, k: &Arc<CyclotomicField>) -> Self {
        HodgeDecomposition { field: k.clone(), basis10: self.basis10.map(|x| x.lift(k)) }
    }

    pub fn n(&self) -> usize {
        self.basis10.cols()
    }

    pub fn basis01(&self) -> KMatrix {
        conj_matrix(&self.basis10)
    }

    /// rank = 2n, V^{1,0} and its conjugate are complementary, V^{1,0} is G-stable.
    pub fn validate(&self, rep: &IntegralRepresentation) -> Result<(), HodgeError> {
        let r = rep.rank();
        if self.basis10.rows() != r || 2 * self.n() != r {
            return Err(HodgeError::InvalidDecomposition(format!(
                "V^(1,0) has dimension {} inside a space of rank {r}",
                self.n()
            )));
        }
        if self.basis10.hcat(&self.basis01()).rank() != r {
            return Err(HodgeError::InvalidDecomposition("V^(1,0) meets its conjugate".into()));
        }
        for (g, _) in rep.generator_matrices() {
            if self.restricted(rep, g).is_none() {
                return Err(HodgeError::InvalidDecomposition(format!("V^(1,0) is not stable under element {g}")));
            }
        }
        Ok(())
    }

    /// Matrix of g on V^{1,0} in the basis, if V^{1,0} is g-stable.
    pub fn restricted(&self, rep: &IntegralRepresentation, g: usize) -> Option<KMatrix> {
        let img = rep.matrix_over(g, &self.field).mul(&self.basis10);
        self.basis10.solve(&img)
    }

    /// Exact trace character of V^{1,0}, with values in Q(zeta_exponent).
    pub fn hodge_character(&self, rep: &IntegralRepresentation) -> HodgeCharacter {
        let small = CyclotomicField::new(rep.group().exponent() as u32);
        let values = (0..rep.group().order())
            .map(|g| {
                let t = if self.n() == 0 {
                    CyclotomicNumber::zero(&self.field)
                } else {
                    self.restricted(rep, g).expect("stable").trace()
                };
                t.descend(&small).expect("character values lie in Q(zeta_exponent)")
            })
            .collect();
        HodgeCharacter { field: small, values }
    }

    /// J = i on V^{1,0} and -i on V^{0,1}, exactly over K.
    pub fn complex_structure(&self) -> KMatrix {
        let n = self.n();
        let m = self.basis10.hcat(&self.basis01());
        let i = i_unit(&self.field);
        let zero = CyclotomicNumber::zero(&self.field);
        let d = Matrix::from_fn(2 * n, 2 * n, |a, b| {
            if a != b {
                zero.clone()
            } else if a < n {
                i.clone()
            } else {
                i.neg()
            }
        });
        m.mul(&d).mul(&m.inverse().expect("complementary"))
    }

    /// Float image of J under the standard embedding zeta_L -> exp(2 pi i / L).
    pub fn numeric_complex_structure(&self) -> NumericComplexStructure {
        let j = self.complex_structure();
        let e = EmbeddingIndex { residue: 1 % self.field.conductor(), conductor: self.field.conductor() };
        NumericComplexStructure::new(DMatrix::from_fn(j.rows(), j.cols(), |a, b| j[(a, b)].embed_f64(e).0))
    }
}

/// dim of {phi : phi rho(g)|V01 = rho(g)|V10 phi for all g}, by exact rank over K.
pub fn brute_force_hom_dimension(rep: &IntegralRepresentation, dec: &HodgeDecomposition) -> Result<u64, HodgeError> {
    if rep.rank() > BRUTE_FORCE_RANK_CAP {
        return Err(HodgeError::RankTooLarge(rep.rank()));
    }
    dec.validate(rep)?;
    let n = dec.n();
    if n == 0 {
        return Ok(0);
    }
    let k = &dec.field;
    let zero = CyclotomicNumber::zero(k);
    let mut rows: Vec<Vec<CyclotomicNumber>> = Vec::new();
    for g in rep.group().generators() {
        let r10 = dec.restricted(rep, g).expect("validated");
        let r01 = conj_matrix(&r10);
        // (X R01 - R10 X)[a][c] = sum_b x_ab R01[b][c] - sum_b R10[a][b] x_bc
        for a in 0..n {
            for c in 0..n {
                let mut row = vec![zero.clone(); n * n];
                for b in 0..n {
                    row[a * n + b] = &row[a * n + b] + &r01[(b, c)];
                    row[b * n + c] = &row[b * n + c] - &r10[(a, b)];
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok((n * n) as u64);
    }
    let rank = Matrix::from_rows(rows).rank();
    Ok((n * n - rank) as u64)
}

/// Float version: V^{1,0} = ker(J - i), nullity of the commutation system by SVD.
pub fn brute_force_hom_dimension_numeric(
    rep: &IntegralRepresentation,
    j: &NumericComplexStructure,
    tol: f64,
) -> Result<u64, HodgeError> {
    let r = rep.rank();
    let n = r / 2;
    let jc = j.j.map(|x| Complex::new(x, 0.0));
    let a = jc - DMatrix::<Complex<f64>>::identity(r, r) * Complex::new(0.0, 1.0);
    let svd = a.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| HodgeError::InvalidComplexStructure("svd failed".into()))?;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].partial_cmp(&svd.singular_values[y]).unwrap());
    if n > 0 && svd.singular_values[order[n - 1]] > 1e-6 {
        return Err(HodgeError::InvalidComplexStructure("ker(J - i) is too small".into()));
    }
    if n == 0 {
        return Ok(0);
    }
    let b = DMatrix::from_fn(r, n, |row, col| vt[(order[col], row)].conj());
    let bh = b.adjoint();
    let mut blocks: Vec<DMatrix<Complex<f64>>> = Vec::new();
    for g in rep.group().generators() {
        let m = rep.matrix_f64(g).map(|x| Complex::new(x, 0.0));
        let r10 = &bh * &m * &b;
        let r01 = r10.map(|z| z.conj());
        let mut sys = DMatrix::<Complex<f64>>::zeros(n * n, n * n);
        for a in 0..n {
            for c in 0..n {
                for bb in 0..n {
                    sys[(a * n + c, a * n + bb)] += r01[(bb, c)];
                    sys[(a * n + c, bb * n + c)] -= r10[(a, bb)];
                }
            }
        }
        blocks.push(sys);
    }
    if blocks.is_empty() {
        return Ok((n * n) as u64);
    }
    let total = DMatrix::from_fn(blocks.len() * n * n, n * n, |row, col| blocks[row / (n * n)][(row % (n * n), col)]);
    let sv = total.singular_values();
    let scale = sv.iter().cloned().fold(1.0, f64::max);
    let nonzero = sv.iter().filter(|&&s| s > tol * scale).count();
    Ok((n * n - nonzero) as u64)
}

/// tau(sigma_i) = dim_K of the chi_i-isotypic part of V^{1,0}; n_j = dim V_j / [F_j : Q].
pub fn spec_from_decomposition(
    rep: &IntegralRepresentation,
    table: &CharacterTable,
    orbits: &GaloisOrbitDecomposition,
    pieces: &[IsotypicPiece],
    dec: &HodgeDecomposition,
) -> SymbolicHodgeSpec {
    let summands = orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let multiplicity = (pieces[j].dimension() / o.degree) as u32;
            let tau = o
                .members
                .iter()
                .zip(&o.residues)
                .map(|(&chi, &a)| {
                    let t = if dec.n() == 0 || multiplicity == 0 {
                        0
                    } else {
                        character_projector(rep, table, chi, &dec.field).mul(&dec.basis10).rank() as u32
                    };
                    (o.field.embedding_of(a).residue, t)
                })
                .collect();
            FieldSummand { field: o.field.clone(), orbit: Some(j), multiplicity, tau }
        })
        .collect();
    SymbolicHodgeSpec { summands }
}

/// tau from the multiplicities of the irreducible characters in V^{1,0}.
pub fn spec_from_multiplicities(
    table: &CharacterTable,
    orbits: &GaloisOrbitDecomposition,
    multiplicities: &[u64],
) -> SymbolicHodgeSpec {
    let summands = orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let base = o.members[0];
            let conj_row: Vec<CyclotomicNumber> = table.values[base].iter().map(|v| v.conjugate()).collect();
            let conj = table.values.iter().position(|r| *r == conj_row).expect("conjugate character exists");
            let deg = table.degrees[base];
            let multiplicity = ((multiplicities[base] + multiplicities[conj]) * deg) as u32;
            let tau = o
                .members
                .iter()
                .zip(&o.residues)
                .map(|(&chi, &a)| (o.field.embedding_of(a).residue, (multiplicities[chi] * deg) as u32))
                .collect();
            FieldSummand { field: o.field.clone(), orbit: Some(j), multiplicity, tau }
        })
        .collect();
    SymbolicHodgeSpec { summands }
}

/// Exact decomposition determined by the Hodge character alone, available when
/// every isotypic part lies wholly in V^{1,0} or in V^{0,1}.
pub fn decomposition_from_multiplicities(
    rep: &IntegralRepresentation,
    table: &CharacterTable,
    multiplicities: &[u64],
) -> Option<HodgeDecomposition> {
    let chosen: Vec<usize> = (0..table.size()).filter(|&c| multiplicities[c] > 0).collect();
    // whole isotypic parts only: the total multiplicity of chi in V must equal m10(chi)
    let f: Vec<CyclotomicNumber> = table
        .classes
        .representatives
        .iter()
        .map(|&g| CyclotomicNumber::from_rational(&table.field, Q::from_integer(rep.trace(g).into())))
        .collect();
    for &c in &chosen {
        let total = table.inner_product(&f, c).to_rational()?;
        if total != Q::from_integer(multiplicities[c].into()) {
            return None;
        }
    }
    HodgeDecomposition::from_characters(rep, table, &chosen).ok()
}
