//! V = V_1 + ... + V_l by the rational central idempotents, and F_j-bases of
//! each summand.

use serde::Serialize;

use super::rep::IntegralRepresentation;
use crate::arith::{QMatrix, Q};
use crate::group::{central_element, CharacterTable, GaloisOrbitDecomposition};

#[derive(Clone, Debug, Serialize)]
pub struct IsotypicPiece {
    pub orbit: usize,
    /// rho(e_K(chi)), a rational projector
    pub projector: QMatrix,
    /// Q-basis of the image (columns of the projector in echelon form)
    #[serde(skip)]
    pub basis: Vec<Vec<Q>>,
}

impl IsotypicPiece {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// One piece per Galois orbit, in orbit order (pieces may be zero).
pub fn isotypic_split(rep: &IntegralRepresentation, orbits: &GaloisOrbitDecomposition) -> Vec<IsotypicPiece> {
    orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let projector = rep.apply(&o.idempotent);
            let basis = projector.column_space();
            IsotypicPiece { orbit: j, projector, basis }
        })
        .collect()
}

/// Matrices on V of the field basis elements of F_j (acting through the centre).
pub fn centre_action(
    rep: &IntegralRepresentation,
    table: &CharacterTable,
    orbits: &GaloisOrbitDecomposition,
    orbit: usize,
) -> Vec<QMatrix> {
    let o = &orbits.orbits[orbit];
    o.field
        .basis()
        .iter()
        .map(|b| rep.apply(&central_element(table, rep.group(), o, b)))
        .collect()
}

/// Greedy F-basis: walk `candidates` in the given order and keep every vector
/// outside the Q-span of the F-orbits of the vectors kept so far.
pub fn f_module_basis(candidates: &[Vec<Q>], action: &[QMatrix]) -> Vec<Vec<Q>> {
    let mut span: Vec<Vec<Q>> = Vec::new();
    let mut chosen = Vec::new();
    let mut rank = 0;
    for v in candidates {
        let mut trial = span.clone();
        trial.push(v.clone());
        if QMatrix::from_rows(trial).rank() == rank {
            continue;
        }
        for a in action {
            span.push(a.mul_vec(v));
        }
        rank = QMatrix::from_rows(span.clone()).rank();
        chosen.push(v.clone());
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{character_table, galois_orbits};

    #[test]
    fn regular_rep_of_z3() {
        let rep = IntegralRepresentation::from_generator_matrices(
            "Z3",
            3,
            &[vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]],
        )
        .unwrap();
        let t = character_table(rep.group()).unwrap();
        let o = galois_orbits(&t, rep.group()).unwrap();
        let pieces = isotypic_split(&rep, &o);
        let dims: Vec<usize> = pieces.iter().map(|p| p.dimension()).collect();
        assert_eq!(dims, vec![1, 2]);
        let mut sum = QMatrix::zeros(3, 3);
        for (i, p) in pieces.iter().enumerate() {
            assert_eq!(p.projector.mul(&p.projector), p.projector);
            for (k, q) in pieces.iter().enumerate() {
                if i != k {
                    assert!(p.projector.mul(&q.projector).is_zero());
                }
            }
            sum = sum.add(&p.projector);
        }
        assert_eq!(sum, QMatrix::identity(3));
        let act = centre_action(&rep, &t, &o, 1);
        let b = f_module_basis(&pieces[1].basis, &act);
        assert_eq!(b.len(), 1);
    }
}
