use nalgebra::DMatrix;
use serde::Serialize;

use super::zeta::{find_zeta, primitive_matrix, trace_form, ImaginaryElement};
use super::PolarizeError;
use crate::arith::rational::{fmt_q, to_f64};
use crate::arith::{CyclotomicNumber, EmbeddingIndex, Matrix, QMatrix, Sign, Q};
use crate::group::{central_element, character_table, galois_orbits, FieldTag};
use crate::hodge::decomposition::{decomposition_from_multiplicities, spec_from_decomposition};
use crate::hodge::{
    centre_action, f_module_basis, hodge_character_from_numeric, isotypic_split, rigidity_by_character,
    HodgeDecomposition, HodgeTolerances, IntegralRepresentation, NumericComplexStructure,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarizeTolerances {
    /// bound on ||J^T E J - E|| / ||E|| for numeric complex structures
    pub relation_one: f64,
    /// lower bound on the least eigenvalue of the normalized form E(x, Jy)
    pub min_eigenvalue: f64,
}

impl Default for PolarizeTolerances {
    fn default() -> Self {
        PolarizeTolerances { relation_one: 1e-8, min_eigenvalue: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PolarizeOptions {
    pub g_invariant: bool,
    pub tolerances: PolarizeTolerances,
    pub hodge: HodgeTolerances,
}

#[derive(Clone, Copy)]
pub enum HodgeData<'a> {
    Exact(&'a HodgeDecomposition),
    Numeric(&'a NumericComplexStructure),
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationOneCheck {
    pub method: &'static str,
    pub residual: f64,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationTwoCheck {
    pub method: &'static str,
    /// least eigenvalue of the symmetric form E(x, Jy) / ||E||
    pub min_eigenvalue: f64,
    pub tolerance: Option<f64>,
    /// certified signs of the leading principal minors of -i E(v, conj w) on V^{1,0}
    pub minor_signs: Vec<Sign>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarizationCertificate {
    pub alternating: bool,
    #[serde(rename = "relation_I")]
    pub relation_one: RelationOneCheck,
    #[serde(rename = "relation_II")]
    pub relation_two: RelationTwoCheck,
    /// None when no representation was supplied
    pub rosati: Option<bool>,
    pub g_invariant: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaRecord {
    pub orbit: usize,
    pub field_degree: usize,
    #[serde(flatten)]
    pub zeta: ImaginaryElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockProvenance {
    pub orbit: usize,
    /// F-basis vectors of the summand, in lattice coordinates
    pub generators: Vec<Vec<String>>,
    /// first column of the summand in the adapted basis
    pub offset: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarizationForm {
    pub rank: usize,
    pub matrix: QMatrix,
    pub zeta_per_summand: Vec<ZetaRecord>,
    pub provenance: Vec<BlockProvenance>,
    pub certificate: PolarizationCertificate,
}

/// Orthogonal sum of trace forms Tr(zeta_j x conj(y)) over the F_j-copies of
/// every isotypic summand, in lattice coordinates, made integral and primitive.
pub fn assemble_polarization(
    rep: &IntegralRepresentation,
    hodge: HodgeData<'_>,
    opts: &PolarizeOptions,
) -> Result<PolarizationForm, PolarizeError> {
    let table = character_table(rep.group())?;
    let orbits = galois_orbits(&table, rep.group())?;
    let dec = match hodge {
        HodgeData::Exact(d) => {
            d.validate(rep)?;
            d.clone()
        }
        HodgeData::Numeric(j) => {
            let chi = hodge_character_from_numeric(rep, j, &opts.hodge)?;
            let r = rigidity_by_character(&chi, &table)?;
            if r.hom_dimension > 0 {
                return Err(PolarizeError::NotRigid { hom_dimension: r.hom_dimension });
            }
            decomposition_from_multiplicities(rep, &table, &r.multiplicities)
                .ok_or(PolarizeError::NotRigid { hom_dimension: 0 })?
        }
    };
    let rig = rigidity_by_character(&dec.hodge_character(rep), &table)?;
    if rig.hom_dimension > 0 {
        return Err(PolarizeError::NotRigid { hom_dimension: rig.hom_dimension });
    }
    let pieces = isotypic_split(rep, &orbits);
    let spec = spec_from_decomposition(rep, &table, &orbits, &pieces, &dec);
    let mut columns: Vec<Vec<Q>> = Vec::new();
    let mut blocks: Vec<QMatrix> = Vec::new();
    let mut zetas = Vec::new();
    let mut provenance = Vec::new();
    for (j, piece) in pieces.iter().enumerate() {
        if piece.dimension() == 0 {
            continue;
        }
        let o = &orbits.orbits[j];
        if o.tag != FieldTag::CM {
            return Err(PolarizeError::NonCMFieldActive { orbit: j });
        }
        let s: Vec<u32> = spec.summands[j].tau.iter().filter(|(_, &t)| t > 0).map(|(&a, _)| a).collect();
        let zeta = find_zeta(&o.field, &s)?;
        let action = centre_action(rep, &table, &orbits, j);
        let gens = f_module_basis(&piece.basis, &action);
        let block = trace_form(&o.field, &zeta.value, o.field.basis());
        provenance.push(BlockProvenance {
            orbit: j,
            generators: gens.iter().map(|v| v.iter().map(fmt_q).collect()).collect(),
            offset: columns.len(),
        });
        for v in &gens {
            for a in &action {
                columns.push(a.mul_vec(v));
            }
            blocks.push(block.clone());
        }
        zetas.push(ZetaRecord { orbit: j, field_degree: o.degree, zeta });
    }
    let b = QMatrix::from_columns(&columns);
    let bi = b.inverse().expect("the F-copies form a basis");
    let d = Matrix::block_diag(&blocks, &Q::from_integer(0.into()));
    let mut e = bi.transpose().mul(&d).mul(&bi);
    if opts.g_invariant {
        e = g_average(rep, &e);
    }
    let e = primitive_matrix(&e);
    let certificate = verify_polarization(Some(rep), &e, hodge, opts)?;
    Ok(PolarizationForm { rank: rep.rank(), matrix: e, zeta_per_summand: zetas, provenance, certificate })
}

/// (1/|G|) sum_g rho(g)^T E rho(g).
pub fn g_average(rep: &IntegralRepresentation, e: &QMatrix) -> QMatrix {
    let mut acc = QMatrix::zeros(e.rows(), e.cols());
    for m in rep.matrices() {
        acc = acc.add(&m.transpose().mul(e).mul(m));
    }
    acc.scale(&Q::new(1.into(), (rep.group().order() as i64).into()))
}

fn to_dmatrix(m: &QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |a, b| to_f64(&m[(a, b)]))
}

/// Least eigenpair of the symmetric part of E J, scaled by 1/||E||.
fn positivity(e: &DMatrix<f64>, j: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let scale = e.norm().max(1e-300);
    let ej = e * j;
    let s = (&ej + ej.transpose()) * (0.5 / scale);
    let eig = s.symmetric_eigen();
    let (k, &min) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .expect("nonempty");
    (min, eig.eigenvectors.column(k).iter().copied().collect())
}

/// Checks both bilinear relations and the Rosati condition for E against the
/// given complex structure. Exact data gives exact relation I and certified
/// Sylvester minors for relation II; numeric data uses tolerances.
pub fn verify_polarization(
    rep: Option<&IntegralRepresentation>,
    e: &QMatrix,
    hodge: HodgeData<'_>,
    opts: &PolarizeOptions,
) -> Result<PolarizationCertificate, PolarizeError> {
    if !e.is_square() || e.transpose() != e.neg() {
        return Err(PolarizeError::NotAlternating);
    }
    let ef = to_dmatrix(e);
    let (relation_one, relation_two) = match hodge {
        HodgeData::Exact(d) => {
            let k = d.field.clone();
            let ek = e.map(|x| CyclotomicNumber::from_rational(&k, x.clone()));
            let jk = d.complex_structure();
            let diff = jk.transpose().mul(&ek).mul(&jk).sub(&ek);
            for a in 0..diff.rows() {
                for b in 0..diff.cols() {
                    if !diff[(a, b)].is_zero() {
                        return Err(PolarizeError::RelationIFails(a, b, format!("exact difference {}", diff[(a, b)])));
                    }
                }
            }
            let jf = d.numeric_complex_structure().j;
            let (min, vec) = positivity(&ef, &jf);
            let n = d.n();
            let i = CyclotomicNumber::zeta_pow(&k, k.conductor() as i64 / 4);
            let h = d.basis10.transpose().mul(&ek).mul(&d.basis01()).scale(&i.neg());
            let standard = EmbeddingIndex { residue: 1 % k.conductor(), conductor: k.conductor() };
            let mut minor_signs = Vec::with_capacity(n);
            for size in 1..=n {
                let sub = Matrix::from_fn(size, size, |a, b| h[(a, b)].clone());
                let sign = sub.determinant().certified_sign_real(standard)?;
                minor_signs.push(sign);
                if sign != Sign::Positive {
                    return Err(PolarizeError::NotPositiveDefinite { witness: vec, value: min });
                }
            }
            (
                RelationOneCheck { method: "exact", residual: 0.0, tolerance: None },
                RelationTwoCheck { method: "sylvester-minors", min_eigenvalue: min, tolerance: None, minor_signs },
            )
        }
        HodgeData::Numeric(j) => {
            let jf = &j.j;
            if jf.nrows() != e.rows() {
                return Err(PolarizeError::Hodge(crate::hodge::HodgeError::InvalidComplexStructure(
                    "J and E have different sizes".into(),
                )));
            }
            let diff = jf.transpose() * &ef * jf - &ef;
            let residual = diff.norm() / ef.norm().max(1e-300);
            if residual > opts.tolerances.relation_one {
                let (a, b) = diff.iamax_full();
                return Err(PolarizeError::RelationIFails(a, b, format!("relative residual {residual:e}")));
            }
            let (min, vec) = positivity(&ef, jf);
            if min <= opts.tolerances.min_eigenvalue {
                return Err(PolarizeError::NotPositiveDefinite { witness: vec, value: min });
            }
            (
                RelationOneCheck { method: "numeric", residual, tolerance: Some(opts.tolerances.relation_one) },
                RelationTwoCheck {
                    method: "eigenvalue",
                    min_eigenvalue: min,
                    tolerance: Some(opts.tolerances.min_eigenvalue),
                    minor_signs: Vec::new(),
                },
            )
        }
    };
    let (rosati, g_invariant) = match rep {
        None => (None, None),
        Some(rep) => {
            check_rosati(rep, e)?;
            let inv = rep.matrices().iter().all(|m| m.transpose().mul(e).mul(m) == *e);
            (Some(true), Some(inv))
        }
    };
    Ok(PolarizationCertificate { alternating: true, relation_one, relation_two, rosati, g_invariant })
}

/// E(x v, w) = E(v, conj(x) w) for every basis element x of every centre field.
fn check_rosati(rep: &IntegralRepresentation, e: &QMatrix) -> Result<(), PolarizeError> {
    let table = character_table(rep.group())?;
    let orbits = galois_orbits(&table, rep.group())?;
    for (j, o) in orbits.orbits.iter().enumerate() {
        if rep.apply(&o.idempotent).is_zero() {
            continue;
        }
        for (l, x) in o.field.basis().iter().enumerate() {
            let mx = rep.apply(&central_element(&table, rep.group(), o, x));
            let mc = rep.apply(&central_element(&table, rep.group(), o, &x.conjugate()));
            if mx.transpose().mul(e) != e.mul(&mc) {
                return Err(PolarizeError::RosatiFails { orbit: j, element: l });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> (IntegralRepresentation, NumericComplexStructure) {
        let rep = IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        (rep, j)
    }

    #[test]
    fn gaussian_form_is_primitive_standard() {
        let (rep, j) = gaussian();
        let p = assemble_polarization(&rep, HodgeData::Numeric(&j), &PolarizeOptions::default()).unwrap();
        assert_eq!(p.matrix, QMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));
        assert_eq!(p.certificate.rosati, Some(true));
        assert_eq!(p.certificate.g_invariant, Some(true));
    }

    #[test]
    fn sign_flip_is_not_positive() {
        let (rep, j) = gaussian();
        let e = QMatrix::from_i64_rows(&[vec![0, -2], vec![2, 0]]);
        let r = verify_polarization(Some(&rep), &e, HodgeData::Numeric(&j), &PolarizeOptions::default());
        assert!(matches!(r, Err(PolarizeError::NotPositiveDefinite { .. })));
        let sym = QMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1]]);
        let r = verify_polarization(Some(&rep), &sym, HodgeData::Numeric(&j), &PolarizeOptions::default());
        assert!(matches!(r, Err(PolarizeError::NotAlternating)));
    }

    #[test]
    fn trivial_group_is_not_rigid() {
        let rep = IntegralRepresentation::from_generator_matrices("1", 2, &[]).unwrap();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let r = assemble_polarization(&rep, HodgeData::Numeric(&j), &PolarizeOptions::default());
        assert!(matches!(r, Err(PolarizeError::NotRigid { hom_dimension: 1 })));
    }
}
