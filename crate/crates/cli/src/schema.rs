//! Input documents. Every field is optional at the parsing stage; each command
//! asks for the parts it needs and reports a schema error when they are absent.

use std::collections::BTreeMap;

use serde::Deserialize;
use toruskit::arith::rational::parse_q;
use toruskit::arith::{CyclotomicField, QPoly, SubfieldSpec};
use toruskit::group::library::by_name;
use toruskit::group::FiniteGroup;
use toruskit::hodge::{FieldSummand, IntegralRepresentation, NumericComplexStructure, SymbolicHodgeSpec};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub name: Option<String>,
    pub cayley_table: Option<Vec<Vec<usize>>>,
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    pub rank: Option<usize>,
    pub generator_matrices: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(rename = "J_matrix")]
    pub j_matrix: Option<Vec<Vec<f64>>>,
    pub symbolic_spec: Option<Vec<SummandInput>>,
    /// rational coefficients "p/q", constant term first
    pub polynomial: Option<Vec<String>>,
    pub embedding_set: Option<Vec<usize>>,
    pub module: Option<Vec<ModuleInput>>,
}

/// A subfield of Q(zeta_conductor), fixed by the subgroup of (Z/conductor)^*
/// generated by `fixing`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandInput {
    pub conductor: u32,
    pub fixing: Vec<u32>,
    pub multiplicity: u32,
    /// tau keyed by embedding residue
    pub tau: BTreeMap<u32, u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleInput {
    pub conductor: u32,
    pub fixing: Vec<u32>,
    pub multiplicity: u32,
}

pub fn parse(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
}

fn field(conductor: u32, fixing: &[u32]) -> Result<SubfieldSpec, CliError> {
    if conductor == 0 {
        return Err(CliError::Schema("conductor must be positive".into()));
    }
    if let Some(a) = fixing.iter().find(|&&a| num_gcd(a, conductor) != 1) {
        return Err(CliError::Schema(format!("{a} is not a unit modulo {conductor}")));
    }
    Ok(SubfieldSpec::fixed_by(&CyclotomicField::new(conductor), fixing))
}

fn num_gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl InputDocument {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "input".into())
    }

    pub fn group(&self) -> Result<FiniteGroup, CliError> {
        let name = self.label();
        match (&self.cayley_table, &self.permutation_generators, &self.generator_matrices) {
            (Some(t), None, None) => Ok(FiniteGroup::from_cayley_table(&name, t)?),
            (None, Some(p), None) => Ok(FiniteGroup::from_permutations(&name, p)?),
            (None, None, Some(_)) => Ok(self.representation()?.group().clone()),
            (None, None, None) => self
                .name
                .as_deref()
                .and_then(by_name)
                .ok_or_else(|| CliError::Schema(format!("no group given and no built-in group named {name}"))),
            _ => Err(CliError::Schema("give exactly one of cayley_table, permutation_generators, generator_matrices".into())),
        }
    }

    pub fn representation(&self) -> Result<IntegralRepresentation, CliError> {
        let gens = self.generator_matrices.as_ref().ok_or_else(|| CliError::Schema("generator_matrices missing".into()))?;
        let rank = self.rank.ok_or_else(|| CliError::Schema("rank missing".into()))?;
        Ok(IntegralRepresentation::from_generator_matrices(&self.label(), rank, gens)?)
    }

    pub fn complex_structure(&self) -> Result<NumericComplexStructure, CliError> {
        let rows = self.j_matrix.as_ref().ok_or_else(|| CliError::Schema("J_matrix missing".into()))?;
        Ok(NumericComplexStructure::from_rows(rows)?)
    }

    pub fn symbolic(&self) -> Result<Option<SymbolicHodgeSpec>, CliError> {
        let Some(summands) = &self.symbolic_spec else { return Ok(None) };
        let mut out = Vec::with_capacity(summands.len());
        for s in summands {
            let f = field(s.conductor, &s.fixing)?;
            let residues: Vec<u32> = f.embeddings().iter().map(|e| e.residue).collect();
            let keys: Vec<u32> = s.tau.keys().map(|&a| f.embedding_of(a).residue).collect();
            let mut sorted = keys.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != keys.len() || sorted.len() != residues.len() {
                return Err(CliError::Schema(format!(
                    "tau must have one entry per embedding of the field; expected residues {residues:?}"
                )));
            }
            let tau = s.tau.iter().map(|(&a, &t)| (f.embedding_of(a).residue, t)).collect();
            out.push(FieldSummand { field: f, orbit: None, multiplicity: s.multiplicity, tau });
        }
        let spec = SymbolicHodgeSpec { summands: out };
        spec.check_hodge_symmetry()?;
        Ok(Some(spec))
    }

    pub fn polynomial(&self) -> Result<Option<QPoly>, CliError> {
        let Some(coeffs) = &self.polynomial else { return Ok(None) };
        let parsed = coeffs
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| CliError::Schema(format!("not a rational number: {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(QPoly::new(parsed)))
    }

    pub fn module(&self) -> Result<Option<Vec<(SubfieldSpec, u32)>>, CliError> {
        let Some(m) = &self.module else { return Ok(None) };
        m.iter().map(|s| Ok((field(s.conductor, &s.fixing)?, s.multiplicity))).collect::<Result<Vec<_>, _>>().map(Some)
    }
}
