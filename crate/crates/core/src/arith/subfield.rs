//! Subfields Q(zeta_m)^H of a cyclotomic field, carried inside the ambient field.

use std::sync::Arc;

use num::{One, Zero};

use super::cyclotomic::{CyclotomicField, CyclotomicNumber, EmbeddingIndex};
use super::linalg::QMatrix;
use super::rational::Q;

#[derive(Clone, Debug)]
pub struct SubfieldSpec {
    ambient: Arc<CyclotomicField>,
    fixing: Vec<u32>,
    basis: Vec<CyclotomicNumber>,
}

impl SubfieldSpec {
    /// Fixed field of the subgroup generated by `gens` in (Z/m)^*.
    pub fn fixed_by(ambient: &Arc<CyclotomicField>, gens: &[u32]) -> Self {
        let m = ambient.conductor();
        let fixing = subgroup_closure(gens, m);
        let d = ambient.degree();
        // stack (sigma_a - I) for every a in H and take the kernel
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for &a in &fixing {
            if a % m.max(1) == 1 % m.max(1) {
                continue;
            }
            let mut cols = Vec::with_capacity(d);
            for k in 0..d {
                let b = CyclotomicNumber::zeta_pow(ambient, k as i64);
                let mut c = b.galois(a as i64).coeffs().to_vec();
                c[k] -= Q::one();
                cols.push(c);
            }
            rows.extend(QMatrix::from_columns(&cols).to_rows());
        }
        let basis_vecs = if rows.is_empty() {
            (0..d)
                .map(|k| (0..d).map(|i| if i == k { Q::one() } else { Q::zero() }).collect())
                .collect()
        } else {
            let ker = QMatrix::from_rows(rows).nullspace();
            // reduced echelon form of the kernel basis gives a canonical basis
            let (r, piv) = QMatrix::from_rows(ker).rref();
            (0..piv.len()).map(|i| r.row(i)).collect::<Vec<_>>()
        };
        let mut basis: Vec<CyclotomicNumber> =
            basis_vecs.into_iter().map(|v| CyclotomicNumber::from_coeffs(ambient, v)).collect();
        // put 1 first when it is a basis element's leading coordinate
        basis.sort_by_key(|b| b.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX));
        SubfieldSpec { ambient: ambient.clone(), fixing, basis }
    }

    /// Field generated over Q by the given elements.
    pub fn generated_by(ambient: &Arc<CyclotomicField>, values: &[CyclotomicNumber]) -> Self {
        let h: Vec<u32> = ambient
            .units()
            .iter()
            .copied()
            .filter(|&a| values.iter().all(|v| v.galois(a as i64) == *v))
            .collect();
        Self::fixed_by(ambient, &h)
    }

    pub fn rationals(ambient: &Arc<CyclotomicField>) -> Self {
        Self::fixed_by(ambient, ambient.units())
    }

    pub fn ambient(&self) -> &Arc<CyclotomicField> {
        &self.ambient
    }

    pub fn fixing_subgroup(&self) -> &[u32] {
        &self.fixing
    }

    pub fn basis(&self) -> &[CyclotomicNumber] {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &CyclotomicNumber) -> bool {
        self.fixing.iter().all(|&a| x.galois(a as i64) == *x)
    }

    /// Complex conjugation restricts to a nontrivial automorphism (field is CM).
    pub fn is_cm(&self) -> bool {
        let m = self.ambient.conductor();
        m > 2 && !self.fixing.contains(&(m - 1))
    }

    pub fn is_totally_real(&self) -> bool {
        !self.is_cm()
    }

    /// One representative residue per embedding of the subfield (the least element
    /// of each coset of H), ascending.
    pub fn embeddings(&self) -> Vec<EmbeddingIndex> {
        let m = self.ambient.conductor();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &a in self.ambient.units() {
            if seen.contains(&a) {
                continue;
            }
            for &h in &self.fixing {
                seen.insert(((a as u64 * h as u64) % m as u64) as u32);
            }
            out.push(EmbeddingIndex { residue: a, conductor: m });
        }
        out
    }

    /// Canonical representative of the embedding class of residue `a`.
    pub fn embedding_of(&self, a: u32) -> EmbeddingIndex {
        let m = self.ambient.conductor() as u64;
        let r = self
            .fixing
            .iter()
            .map(|&h| ((a as u64 * h as u64) % m) as u32)
            .min()
            .unwrap_or(a);
        EmbeddingIndex { residue: r, conductor: m as u32 }
    }

    pub fn conjugate_embedding(&self, e: EmbeddingIndex) -> EmbeddingIndex {
        self.embedding_of(e.conjugate().residue)
    }

    /// Coordinates of `x` in the basis; None if `x` is not in the subfield.
    pub fn coordinates(&self, x: &CyclotomicNumber) -> Option<Vec<Q>> {
        let cols: Vec<Vec<Q>> = self.basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let a = QMatrix::from_columns(&cols);
        let rhs = QMatrix::from_columns(&[x.coeffs().to_vec()]);
        a.solve(&rhs).map(|s| s.column(0))
    }

    pub fn element(&self, coords: &[Q]) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::zero(&self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = &acc + &b.scale(c);
        }
        acc
    }

    /// Tr_{F/Q}.
    pub fn trace(&self, x: &CyclotomicNumber) -> Q {
        x.trace() / Q::from_integer((self.fixing.len() as i64).into())
    }

    /// Matrix (in the subfield basis) of multiplication by `x` in F.
    pub fn multiplication_matrix(&self, x: &CyclotomicNumber) -> QMatrix {
        let cols: Vec<Vec<Q>> = self
            .basis
            .iter()
            .map(|b| self.coordinates(&(x * b)).expect("product stays in the subfield"))
            .collect();
        QMatrix::from_columns(&cols)
    }
}

/// Closure of `gens` under multiplication mod m, sorted.
pub fn subgroup_closure(gens: &[u32], m: u32) -> Vec<u32> {
    let one = 1 % m.max(1);
    let mut set = std::collections::BTreeSet::new();
    set.insert(one);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = ((x as u64 * g as u64) % m.max(1) as u64) as u32;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}
