//! Hodge types over the centre: a module F_1^{n_1} + ... + F_l^{n_l} together
//! with tau(sigma) = dim of the sigma-character space inside V^{1,0}.

use std::collections::BTreeMap;

use serde::Serialize;

use super::HodgeError;
use crate::arith::SubfieldSpec;

#[derive(Clone, Debug, Serialize)]
pub struct FieldSummand {
    #[serde(skip)]
    pub field: SubfieldSpec,
    /// index of the Galois orbit this summand comes from, when known
    pub orbit: Option<usize>,
    /// n_j = dimension of V_j over F_j
    pub multiplicity: u32,
    /// tau keyed by the canonical residue of each embedding of F_j
    pub tau: BTreeMap<u32, u32>,
}

impl FieldSummand {
    pub fn conjugate_residue(&self, a: u32) -> u32 {
        self.field.conjugate_embedding(self.field.embedding_of(a)).residue
    }

    pub fn is_active(&self) -> bool {
        self.multiplicity > 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicHodgeSpec {
    pub summands: Vec<FieldSummand>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreRigidity {
    pub is_rigid: bool,
    /// (summand, residue, conjugate residue) with tau * tau_conjugate > 0
    pub violations: Vec<(usize, u32, u32)>,
    /// dim Hom over the centre: sum over embeddings of tau(sigma) tau(conj sigma)
    pub centre_hom_dimension: u64,
}

impl SymbolicHodgeSpec {
    /// Half the Q-dimension: sum of tau over all embeddings.
    pub fn dimension(&self) -> u64 {
        self.summands.iter().flat_map(|s| s.tau.values()).map(|&t| t as u64).sum()
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|s| s.multiplicity as u64 * s.field.degree() as u64).sum()
    }

    /// Checks tau(j) + tau(conj j) = n_j for every embedding.
    pub fn check_hodge_symmetry(&self) -> Result<(), HodgeError> {
        for (idx, s) in self.summands.iter().enumerate() {
            let embs = s.field.embeddings();
            if s.tau.len() != embs.len() || embs.iter().any(|e| !s.tau.contains_key(&e.residue)) {
                return Err(HodgeError::HSViolation {
                    summand: idx,
                    residue: 0,
                    detail: "tau must be given on every embedding exactly once".into(),
                });
            }
            for e in &embs {
                let c = s.conjugate_residue(e.residue);
                let (t, tc) = (s.tau[&e.residue], s.tau[&c]);
                if t + tc != s.multiplicity {
                    return Err(HodgeError::HSViolation {
                        summand: idx,
                        residue: e.residue,
                        detail: format!("tau = {t}, conjugate tau = {tc}, n = {}", s.multiplicity),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Rigidity of the centre action: tau(j) tau(conj j) = 0 for every embedding.
pub fn rigidity_by_centre(spec: &SymbolicHodgeSpec) -> Result<CentreRigidity, HodgeError> {
    spec.check_hodge_symmetry()?;
    let mut violations = Vec::new();
    let mut hom = 0u64;
    for (idx, s) in spec.summands.iter().enumerate() {
        for (&a, &t) in &s.tau {
            let c = s.conjugate_residue(a);
            let tc = s.tau[&c];
            hom += t as u64 * tc as u64;
            if t * tc > 0 && a <= c {
                violations.push((idx, a, c));
            }
        }
    }
    Ok(CentreRigidity { is_rigid: violations.is_empty(), violations, centre_hom_dimension: hom })
}

/// Embedding pairs of a field: (a, conj a) with a <= conj a; real embeddings pair with themselves.
pub fn embedding_pairs(field: &SubfieldSpec) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for e in field.embeddings() {
        let c = field.conjugate_embedding(e).residue;
        if e.residue <= c {
            out.push((e.residue, c));
        }
    }
    out
}

/// All rigid Hodge types on the module F_1^{n_1} + ... : for every active CM
/// field one side of each conjugate pair carries the whole character space.
pub fn enumerate_rigid_types(module: &[(SubfieldSpec, u32)]) -> Vec<SymbolicHodgeSpec> {
    if module.iter().any(|(f, n)| *n > 0 && f.is_totally_real()) {
        return Vec::new();
    }
    let mut out = vec![Vec::<FieldSummand>::new()];
    for (field, n) in module {
        let pairs = embedding_pairs(field);
        let mut next = Vec::new();
        let choices: u64 = if *n > 0 { 1u64 << pairs.len() } else { 1 };
        for partial in &out {
            for mask in 0..choices {
                let mut tau = BTreeMap::new();
                for (bit, &(a, c)) in pairs.iter().enumerate() {
                    let first = *n > 0 && (mask >> bit) & 1 == 0;
                    tau.insert(a, if first { *n } else { 0 });
                    tau.insert(c, if first || *n == 0 { 0 } else { *n });
                }
                let mut p = partial.clone();
                p.push(FieldSummand { field: field.clone(), orbit: None, multiplicity: *n, tau });
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(|summands| SymbolicHodgeSpec { summands }).collect()
}

/// Oracle: every tau with values in 0..=n_j, filtered by Hodge symmetry and
/// the rigidity condition. Exponential in the number of embeddings.
pub fn brute_force_rigid_type_count(module: &[(SubfieldSpec, u32)]) -> u64 {
    let mut slots: Vec<(usize, u32)> = Vec::new();
    for (idx, (f, _)) in module.iter().enumerate() {
        for e in f.embeddings() {
            slots.push((idx, e.residue));
        }
    }
    let radix: Vec<u32> = slots.iter().map(|&(i, _)| module[i].1 + 1).collect();
    let mut counter = vec![0u32; slots.len()];
    let mut count = 0u64;
    loop {
        let summands: Vec<FieldSummand> = module
            .iter()
            .enumerate()
            .map(|(i, (f, n))| FieldSummand {
                field: f.clone(),
                orbit: None,
                multiplicity: *n,
                tau: slots
                    .iter()
                    .zip(&counter)
                    .filter(|((j, _), _)| *j == i)
                    .map(|((_, a), &t)| (*a, t))
                    .collect(),
            })
            .collect();
        let spec = SymbolicHodgeSpec { summands };
        if let Ok(r) = rigidity_by_centre(&spec) {
            if r.is_rigid {
                count += 1;
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == counter.len() {
                return count;
            }
            counter[k] += 1;
            if counter[k] < radix[k] {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CyclotomicField;

    fn full(m: u32) -> SubfieldSpec {
        SubfieldSpec::fixed_by(&CyclotomicField::new(m), &[])
    }

    #[test]
    fn gaussian_type_is_rigid() {
        let f = full(4);
        let spec = SymbolicHodgeSpec {
            summands: vec![FieldSummand { field: f, orbit: None, multiplicity: 1, tau: [(1, 1), (3, 0)].into() }],
        };
        assert!(rigidity_by_centre(&spec).unwrap().is_rigid);
        assert_eq!(spec.dimension(), 1);
    }

    #[test]
    fn rational_summand_never_rigid() {
        let f = SubfieldSpec::rationals(&CyclotomicField::new(1));
        let spec = SymbolicHodgeSpec {
            summands: vec![FieldSummand { field: f.clone(), orbit: None, multiplicity: 2, tau: [(0, 1)].into() }],
        };
        let r = rigidity_by_centre(&spec).unwrap();
        assert!(!r.is_rigid);
        assert_eq!(r.centre_hom_dimension, 1);
        assert!(enumerate_rigid_types(&[(f, 2)]).is_empty());
    }

    #[test]
    fn hs_violation_detected() {
        let f = full(4);
        let spec = SymbolicHodgeSpec {
            summands: vec![FieldSummand { field: f, orbit: None, multiplicity: 1, tau: [(1, 1), (3, 1)].into() }],
        };
        assert!(matches!(rigidity_by_centre(&spec), Err(HodgeError::HSViolation { .. })));
    }

    #[test]
    fn counts_match_oracle() {
        let f5 = full(5);
        let types = enumerate_rigid_types(&[(f5.clone(), 1)]);
        assert_eq!(types.len(), 4);
        for t in &types {
            assert!(rigidity_by_centre(t).unwrap().is_rigid);
        }
        assert_eq!(brute_force_rigid_type_count(&[(f5.clone(), 1)]), 4);
        assert_eq!(enumerate_rigid_types(&[(full(4), 1)]).len(), 2);
        // zeta_5 with tau = 1 on sigma_1, sigma_2
        let spec = SymbolicHodgeSpec {
            summands: vec![FieldSummand {
                field: f5,
                orbit: None,
                multiplicity: 1,
                tau: [(1, 1), (2, 1), (3, 0), (4, 0)].into(),
            }],
        };
        assert!(rigidity_by_centre(&spec).unwrap().is_rigid);
    }
}
