use std::collections::BTreeMap;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use super::PolarizeError;
use crate::arith::rational::{best_rational, fmt_q};
use crate::arith::{CyclotomicNumber, QMatrix, Sign, SubfieldSpec, Q};

/// Largest denominator tried when rationalizing the LP solution.
pub const MAX_ZETA_DENOMINATOR: u64 = 1 << 24;

#[derive(Clone, Debug, Serialize)]
pub struct ImaginaryElement {
    /// residues of the embeddings on the V^{1,0} side
    pub positive_embeddings: Vec<u32>,
    /// coordinates in the field basis
    #[serde(serialize_with = "ser_q_vec")]
    pub coordinates: Vec<Q>,
    /// the element in the power basis of the ambient cyclotomic field
    pub value: CyclotomicNumber,
    /// certified sign of Im sigma(zeta) on every embedding
    pub signs: BTreeMap<u32, Sign>,
}

pub(crate) fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(fmt_q).collect::<Vec<_>>().serialize(s)
}

/// Q-basis of {x in F : conjugate(x) = -x}.
pub fn imaginary_subspace(f: &SubfieldSpec) -> Result<Vec<CyclotomicNumber>, PolarizeError> {
    if !f.is_cm() {
        return Err(PolarizeError::RealEmbeddingPresent);
    }
    let cols: Vec<Vec<Q>> = f
        .basis()
        .iter()
        .map(|b| f.coordinates(&b.conjugate()).expect("conjugation preserves a CM subfield"))
        .collect();
    let c = QMatrix::from_columns(&cols);
    let kernel = c.add(&QMatrix::identity(f.degree())).nullspace();
    Ok(kernel.iter().map(|v| f.element(&primitive(v))).collect())
}

fn primitive(v: &[Q]) -> Vec<Q> {
    let ints = crate::arith::lattice::primitive_integer_vector(v);
    ints.into_iter().map(Q::from_integer).collect()
}

/// Checks that `s` holds exactly one embedding of each conjugate pair, and
/// returns the canonical residues.
pub fn validate_cm_type(f: &SubfieldSpec, s: &[u32]) -> Result<Vec<u32>, PolarizeError> {
    let mut canon: Vec<u32> = s.iter().map(|&a| f.embedding_of(a).residue).collect();
    canon.sort_unstable();
    canon.dedup();
    for e in f.embeddings() {
        let c = f.conjugate_embedding(e).residue;
        let hits = canon.contains(&e.residue) as u8 + canon.contains(&c) as u8;
        if hits != 1 || c == e.residue {
            return Err(PolarizeError::InvalidEmbeddingSet(format!("{s:?}")));
        }
    }
    Ok(canon)
}

/// An imaginary zeta in F with Im sigma(zeta) > 0 for every sigma in `s`,
/// certified. Max-slack LP on the imaginary subspace, then rationalization
/// with denominators doubling from 16.
pub fn find_zeta(f: &SubfieldSpec, s: &[u32]) -> Result<ImaginaryElement, PolarizeError> {
    let basis = imaginary_subspace(f)?;
    let s = validate_cm_type(f, s)?;
    let m = f.ambient().conductor();
    let emb = |a: u32| crate::arith::EmbeddingIndex { residue: a, conductor: m };
    let rows: Vec<Vec<f64>> = s.iter().map(|&a| basis.iter().map(|w| w.embed_f64(emb(a)).1).collect()).collect();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = basis.iter().map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let slack = lp.add_var(1.0, (-1.0, 1.0));
    for row in &rows {
        let mut expr: Vec<(minilp::Variable, f64)> = vars.iter().copied().zip(row.iter().copied()).collect();
        expr.push((slack, -1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().map_err(|e| PolarizeError::NotCMField(format!("LP failed: {e}")))?;
    if sol.objective() <= 1e-12 {
        return Err(PolarizeError::NotCMField("the sign cone has empty interior".into()));
    }
    let x: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
    let mut den = 16u64;
    while den <= MAX_ZETA_DENOMINATOR {
        let c: Vec<Q> = x.iter().map(|&xi| best_rational(xi, den)).collect();
        let c = primitive(&c);
        if c.iter().any(|q| !q.is_zero()) {
            let mut zeta = CyclotomicNumber::zero(f.ambient());
            for (ci, w) in c.iter().zip(&basis) {
                zeta = &zeta + &w.scale(ci);
            }
            if let Some(el) = certify(f, &s, zeta)? {
                return Ok(el);
            }
        }
        den *= 2;
    }
    Err(PolarizeError::CertificationFailed)
}

fn certify(f: &SubfieldSpec, s: &[u32], zeta: CyclotomicNumber) -> Result<Option<ImaginaryElement>, PolarizeError> {
    let mut signs = BTreeMap::new();
    for e in f.embeddings() {
        signs.insert(e.residue, zeta.certified_sign_imag(e)?);
    }
    if s.iter().any(|a| signs[a] != Sign::Positive) {
        return Ok(None);
    }
    let coordinates = f.coordinates(&zeta).expect("zeta lies in F");
    Ok(Some(ImaginaryElement { positive_embeddings: s.to_vec(), coordinates, value: zeta, signs }))
}

/// Matrix of (x, y) -> Tr_{F/Q}(zeta x conjugate(y)) on the given elements of F.
pub fn trace_form(f: &SubfieldSpec, zeta: &CyclotomicNumber, elements: &[CyclotomicNumber]) -> QMatrix {
    let conj: Vec<CyclotomicNumber> = elements.iter().map(|y| y.conjugate()).collect();
    QMatrix::from_fn(elements.len(), elements.len(), |a, b| f.trace(&(&(zeta * &elements[a]) * &conj[b])))
}

/// Least common multiple of denominators and gcd of numerators, for clearing a matrix.
pub fn primitive_matrix(m: &QMatrix) -> QMatrix {
    let den = m.entries().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = m.scale(&Q::from_integer(den));
    let g = scaled.entries().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if g.is_zero() {
        return scaled;
    }
    scaled.scale(&Q::new(BigInt::one(), g.abs()))
}
