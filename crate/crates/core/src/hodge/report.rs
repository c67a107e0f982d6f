use serde::Serialize;

use super::character::{hodge_character_from_numeric, rigidity_by_character, HodgeTolerances, NumericComplexStructure};
use super::decomposition::{
    brute_force_hom_dimension, brute_force_hom_dimension_numeric, decomposition_from_multiplicities,
    spec_from_decomposition, spec_from_multiplicities, HodgeDecomposition,
};
use super::rep::IntegralRepresentation;
use super::split::isotypic_split;
use super::symbolic::{rigidity_by_centre, SymbolicHodgeSpec};
use super::HodgeError;
use crate::arith::CyclotomicNumber;
use crate::group::{character_table, galois_orbits};

/// Tolerance used to count zero singular values in the numeric brute force.
pub const NUMERIC_RANK_TOLERANCE: f64 = 1e-8;

pub enum HodgeInput<'a> {
    Numeric(&'a NumericComplexStructure),
    Exact(&'a HodgeDecomposition),
    Symbolic(&'a SymbolicHodgeSpec),
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingRow {
    pub summand: usize,
    pub degree: usize,
    pub residue: u32,
    pub conjugate_residue: u32,
    pub multiplicity: u32,
    pub tau: u32,
    pub tau_conjugate: u32,
    pub product: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodResult {
    pub method: &'static str,
    pub hom_dimension: Option<u64>,
    pub is_rigid: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    /// dim Hom_G(V^{0,1}, V^{1,0}), which is also dim H^1(T, Theta_T)^G
    pub hom_dimension: Option<u64>,
    pub is_rigid: bool,
    /// Hodge character on class representatives, when a representation is given
    pub hodge_character: Option<Vec<CyclotomicNumber>>,
    pub embeddings: Vec<EmbeddingRow>,
    pub methods: Vec<MethodResult>,
    pub all_agree: bool,
}

fn embedding_rows(spec: &SymbolicHodgeSpec) -> Vec<EmbeddingRow> {
    let mut rows = Vec::new();
    for (idx, s) in spec.summands.iter().enumerate() {
        for (&a, &t) in &s.tau {
            let c = s.conjugate_residue(a);
            let tc = s.tau[&c];
            rows.push(EmbeddingRow {
                summand: idx,
                degree: s.field.degree(),
                residue: a,
                conjugate_residue: c,
                multiplicity: s.multiplicity,
                tau: t,
                tau_conjugate: tc,
                product: t * tc,
            });
        }
    }
    rows
}

fn finish(
    hom: Option<u64>,
    hodge_character: Option<Vec<CyclotomicNumber>>,
    spec: &SymbolicHodgeSpec,
    mut methods: Vec<MethodResult>,
) -> RigidityReport {
    let reference_rigid = methods[0].is_rigid;
    for m in methods.iter_mut() {
        m.agrees = m.is_rigid == reference_rigid
            && match (m.hom_dimension, hom) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            };
    }
    let all_agree = methods.iter().all(|m| m.agrees);
    RigidityReport {
        hom_dimension: hom,
        is_rigid: reference_rigid,
        hodge_character,
        embeddings: embedding_rows(spec),
        methods,
        all_agree,
    }
}

/// Runs every applicable rigidity route and records whether they agree. The
/// character formula is the reference when a representation is available.
pub fn rigidity_report(
    rep: Option<&IntegralRepresentation>,
    input: HodgeInput<'_>,
    tol: &HodgeTolerances,
) -> Result<RigidityReport, HodgeError> {
    let rep = match (rep, &input) {
        (_, HodgeInput::Symbolic(spec)) => {
            let c = rigidity_by_centre(spec)?;
            let methods = vec![MethodResult {
                method: "centre-criterion",
                hom_dimension: None,
                is_rigid: c.is_rigid,
                agrees: true,
            }];
            return Ok(finish(None, None, spec, methods));
        }
        (Some(r), _) => r,
        (None, _) => return Err(HodgeError::InvalidRepresentation("a representation is required".into())),
    };
    let table = character_table(rep.group())?;
    let orbits = galois_orbits(&table, rep.group())?;
    let (chi10, exact_dec) = match input {
        HodgeInput::Numeric(j) => {
            let chi = hodge_character_from_numeric(rep, j, tol)?;
            (chi, None)
        }
        HodgeInput::Exact(d) => {
            d.validate(rep)?;
            (d.hodge_character(rep), Some(d.clone()))
        }
        HodgeInput::Symbolic(_) => unreachable!(),
    };
    let by_char = rigidity_by_character(&chi10, &table)?;
    let mut methods = vec![MethodResult {
        method: "character-formula",
        hom_dimension: Some(by_char.hom_dimension),
        is_rigid: by_char.hom_dimension == 0,
        agrees: true,
    }];
    let (spec, dec) = match (&input, exact_dec) {
        (HodgeInput::Numeric(_), _) => {
            (spec_from_multiplicities(&table, &orbits, &by_char.multiplicities), decomposition_from_multiplicities(rep, &table, &by_char.multiplicities))
        }
        (_, Some(d)) => {
            let pieces = isotypic_split(rep, &orbits);
            (spec_from_decomposition(rep, &table, &orbits, &pieces, &d), Some(d))
        }
        _ => unreachable!(),
    };
    let centre = rigidity_by_centre(&spec)?;
    methods.push(MethodResult { method: "centre-criterion", hom_dimension: None, is_rigid: centre.is_rigid, agrees: true });
    if let Some(d) = &dec {
        if rep.rank() <= super::decomposition::BRUTE_FORCE_RANK_CAP {
            let b = brute_force_hom_dimension(rep, d)?;
            methods.push(MethodResult { method: "brute-force-exact", hom_dimension: Some(b), is_rigid: b == 0, agrees: true });
        }
    }
    if let HodgeInput::Numeric(j) = input {
        let b = brute_force_hom_dimension_numeric(rep, j, NUMERIC_RANK_TOLERANCE)?;
        methods.push(MethodResult { method: "brute-force-numeric", hom_dimension: Some(b), is_rigid: b == 0, agrees: true });
    }
    let per_class = table.classes.representatives.iter().map(|&g| chi10.values[g].clone()).collect();
    Ok(finish(Some(by_char.hom_dimension), Some(per_class), &spec, methods))
}
