//! Concrete groups: every isomorphism type of order at most 16, plus S4.

use super::finite_group::FiniteGroup;

pub fn cyclic(n: u32) -> FiniteGroup {
    let gens: Vec<u32> = if n > 1 { vec![1] } else { vec![] };
    FiniteGroup::generate(&format!("Z{n}"), 0u32, &gens, move |a, b| (a + b) % n).expect("small").0
}

/// Product of cyclic groups Z_{n_1} x ... x Z_{n_k}.
pub fn abelian(invariants: &[u32]) -> FiniteGroup {
    let name = invariants.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x");
    let inv = invariants.to_vec();
    let gens: Vec<Vec<u32>> = (0..inv.len())
        .map(|i| (0..inv.len()).map(|j| u32::from(i == j)).collect())
        .collect();
    let id = vec![0u32; inv.len()];
    FiniteGroup::generate(&name, id, &gens, move |a: &Vec<u32>, b: &Vec<u32>| {
        a.iter().zip(b).zip(&inv).map(|((x, y), n)| (x + y) % n).collect()
    })
    .expect("small")
    .0
}

/// <x, y | x^a = 1, y^b = x^s, y x y^-1 = x^r>, elements x^i y^j.
pub fn metacyclic(name: &str, a: u32, b: u32, s: u32, r: u32) -> FiniteGroup {
    let mul = move |p: &(u32, u32), q: &(u32, u32)| {
        let rj = (0..p.1).fold(1u64, |acc, _| acc * r as u64 % a as u64);
        let mut i = (p.0 as u64 + q.0 as u64 * rj) % a as u64;
        let mut j = p.1 + q.1;
        if j >= b {
            j -= b;
            i = (i + s as u64) % a as u64;
        }
        (i as u32, j)
    };
    FiniteGroup::generate(name, (0, 0), &[(1 % a, 0), (0, 1 % b)], mul).expect("small").0
}

pub fn dihedral(order: u32) -> FiniteGroup {
    let a = order / 2;
    metacyclic(&format!("D{order}"), a, 2, 0, a - 1)
}

pub fn symmetric(k: usize) -> FiniteGroup {
    let swap: Vec<usize> = (0..k).map(|i| if i < 2 { 1 - i } else { i }).collect();
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    FiniteGroup::from_permutations(&format!("S{k}"), &[swap, cycle]).expect("small")
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("small")
}

pub fn quaternion8() -> FiniteGroup {
    metacyclic("Q8", 4, 2, 2, 3)
}

/// <a, b, c | a^4 = b^2 = c^2 = 1, ab = ba, bc = cb, cac = ab>.
fn z4z2_semidirect_z2() -> FiniteGroup {
    let mul = |p: &(u32, u32, u32), q: &(u32, u32, u32)| {
        ((p.0 + q.0) % 4, (p.1 + q.1 + p.2 * q.0) % 2, (p.2 + q.2) % 2)
    };
    FiniteGroup::generate("(Z4xZ2):Z2", (0, 0, 0), &[(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul).expect("small").0
}

/// Pauli group generated by X, Z and iI: elements i^k X^a Z^b.
fn pauli() -> FiniteGroup {
    let mul = |p: &(u32, u32, u32), q: &(u32, u32, u32)| {
        ((p.0 + q.0 + 2 * p.2 * q.1) % 4, (p.1 + q.1) % 2, (p.2 + q.2) % 2)
    };
    FiniteGroup::generate("Pauli", (0, 0, 0), &[(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul).expect("small").0
}

/// All 42 isomorphism types of groups of order 1 to 16.
pub fn groups_up_to_16() -> Vec<FiniteGroup> {
    let mut v = vec![
        cyclic(1),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        abelian(&[2, 2]),
        cyclic(5),
        cyclic(6),
        symmetric(3),
        cyclic(7),
        cyclic(8),
        abelian(&[4, 2]),
        abelian(&[2, 2, 2]),
        dihedral(8),
        quaternion8(),
        cyclic(9),
        abelian(&[3, 3]),
        cyclic(10),
        dihedral(10),
        cyclic(11),
        cyclic(12),
        abelian(&[6, 2]),
        alternating4(),
        dihedral(12),
        metacyclic("Dic12", 3, 4, 0, 2),
        cyclic(13),
        cyclic(14),
        dihedral(14),
        cyclic(15),
    ];
    v.extend(groups_of_order_16());
    v
}

pub fn groups_of_order_16() -> Vec<FiniteGroup> {
    vec![
        cyclic(16),
        abelian(&[4, 4]),
        abelian(&[8, 2]),
        abelian(&[4, 2, 2]),
        abelian(&[2, 2, 2, 2]),
        dihedral(16),
        metacyclic("Q16", 8, 2, 4, 7),
        metacyclic("SD16", 8, 2, 0, 3),
        metacyclic("M16", 8, 2, 0, 5),
        metacyclic("Z4:Z4", 4, 4, 0, 3),
        cyclic(2).direct_product(&dihedral(8), "Z2xD8"),
        cyclic(2).direct_product(&quaternion8(), "Z2xQ8"),
        z4z2_semidirect_z2(),
        pauli(),
    ]
}

/// The fixture collection: all groups of order at most 16 together with S4.
pub fn fixture_groups() -> Vec<FiniteGroup> {
    let mut v = groups_up_to_16();
    v.push(symmetric(4));
    v
}

pub fn by_name(name: &str) -> Option<FiniteGroup> {
    fixture_groups().into_iter().find(|g| g.name() == name)
}
