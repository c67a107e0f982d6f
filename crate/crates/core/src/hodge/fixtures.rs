//! Generated test material: integral lattices inside Q[G] for each Galois
//! orbit, and Hodge decompositions assembled from them with known structure.

use num::{BigInt, One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::character::NumericComplexStructure;
use super::decomposition::{hodge_field, HodgeDecomposition};
use super::rep::IntegralRepresentation;
use super::HodgeError;
use crate::arith::lattice::{hnf_basis, primitive_integer_vector};
use crate::arith::{CyclotomicNumber, Matrix, QMatrix, Q};
use crate::group::library::fixture_groups;
use crate::group::idempotent::algebra_mul;
use crate::group::{character_table, galois_orbits, CharacterTable, FieldTag, FiniteGroup, GaloisOrbitDecomposition};

/// Largest rank of a generated fixture.
pub const FIXTURE_RANK_CAP: usize = 8;

/// A G-stable lattice in Q[G] e_K(chi) for one Galois orbit.
#[derive(Clone, Debug)]
pub struct RationalBlock {
    pub orbit: usize,
    pub tag: FieldTag,
    pub rep: IntegralRepresentation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// one block; V^{1,0} is the sum of the isotypic parts of `chosen`
    Cm { chosen: Vec<usize> },
    /// two copies of a block; V^{1,0} = {(v, iv)}
    Paired,
}

#[derive(Clone, Debug)]
pub struct FixturePiece {
    pub orbit: usize,
    pub kind: PieceKind,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct HodgeFixture {
    pub name: String,
    pub rep: IntegralRepresentation,
    pub table: CharacterTable,
    pub orbits: GaloisOrbitDecomposition,
    pub pieces: Vec<FixturePiece>,
    pub decomposition: HodgeDecomposition,
    pub j: NumericComplexStructure,
}

impl HodgeFixture {
    /// Rigid by construction: only CM pieces, and no orbit used twice.
    pub fn is_rigid_by_construction(&self) -> bool {
        let mut seen = Vec::new();
        for p in &self.pieces {
            if p.kind == PieceKind::Paired || seen.contains(&p.orbit) {
                return false;
            }
            seen.push(p.orbit);
        }
        true
    }
}

fn left_translate(g: &FiniteGroup, h: usize, w: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); w.len()];
    for (x, c) in w.iter().enumerate() {
        out[g.mul(h, x)] = c.clone();
    }
    out
}

fn cyclic_averages(g: &FiniteGroup) -> Vec<Vec<Q>> {
    let n = g.order();
    let mut out = Vec::new();
    for h in 1..n {
        let o = g.element_order(h);
        let mut avg = vec![Q::zero(); n];
        let mut alt = vec![Q::zero(); n];
        for k in 0..o {
            let x = g.pow(h, k as i64);
            avg[x] += Q::new(BigInt::one(), BigInt::from(o));
            let s = if k % 2 == 0 { 1 } else { -1 };
            alt[x] += Q::new(BigInt::from(s), BigInt::from(o));
        }
        out.push(avg);
        if o % 2 == 0 {
            out.push(alt);
        }
    }
    out
}

/// Integral representation on the lattice Z[G] w for w in Q[G].
pub fn cyclic_module(g: &FiniteGroup, w: &[Q]) -> Option<IntegralRepresentation> {
    let w = primitive_integer_vector(w);
    if w.iter().all(|x| x.is_zero()) {
        return None;
    }
    let orbit: Vec<Vec<BigInt>> = (0..g.order()).map(|h| left_translate(g, h, &w)).collect();
    let basis = hnf_basis(&orbit);
    let to_q = |v: &[BigInt]| -> Vec<Q> { v.iter().map(|x| Q::from_integer(x.clone())).collect() };
    let bt = Matrix::from_columns(&basis.iter().map(|b| to_q(b)).collect::<Vec<_>>());
    let r = basis.len();
    let mut matrices = Vec::with_capacity(g.order());
    for h in 0..g.order() {
        let images: Vec<Vec<Q>> = basis.iter().map(|b| to_q(&left_translate(g, h, b))).collect();
        let coords = bt.solve(&Matrix::from_columns(&images))?;
        debug_assert_eq!(coords.rows(), r);
        matrices.push(coords);
    }
    IntegralRepresentation::from_group(g.clone(), matrices).ok()
}

/// One block per orbit, of the smallest rank among the left ideals
/// Q[G] e_K y with y running over 1 and the (signed) averages over cyclic subgroups.
pub fn rational_blocks(g: &FiniteGroup, orbits: &GaloisOrbitDecomposition) -> Vec<RationalBlock> {
    let ys = cyclic_averages(g);
    orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let mut best = cyclic_module(g, &o.idempotent).expect("e_K is nonzero");
            for y in &ys {
                let x = algebra_mul(g, &o.idempotent, y);
                if let Some(rep) = cyclic_module(g, &x) {
                    if rep.rank() < best.rank() {
                        best = rep;
                    }
                }
            }
            RationalBlock { orbit: j, tag: o.tag, rep: best }
        })
        .collect()
}

pub fn conjugate_character(table: &CharacterTable, chi: usize) -> usize {
    let conj: Vec<CyclotomicNumber> = table.values[chi].iter().map(|v| v.conjugate()).collect();
    (0..table.size()).find(|&c| table.values[c] == conj).expect("the conjugate of a character is a character")
}

/// All ways to pick one character from each conjugate pair of a CM orbit.
pub fn cm_choices(table: &CharacterTable, orbits: &GaloisOrbitDecomposition, orbit: usize) -> Vec<Vec<usize>> {
    let members = &orbits.orbits[orbit].members;
    let pairs: Vec<(usize, usize)> = members
        .iter()
        .map(|&c| (c, conjugate_character(table, c)))
        .filter(|(c, d)| c < d)
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut s: Vec<usize> =
                pairs.iter().enumerate().map(|(b, &(c, d))| if (mask >> b) & 1 == 0 { c } else { d }).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

fn random_unimodular(rng: &mut ChaCha8Rng, r: usize) -> QMatrix {
    let mut u = QMatrix::identity(r);
    if r < 2 {
        return u;
    }
    for _ in 0..r {
        let (a, b) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if a == b {
            continue;
        }
        let c = Q::from_integer(BigInt::from(if rng.gen_bool(0.5) { 1i64 } else { -1 }));
        let mut e = QMatrix::identity(r);
        e[(a, b)] = c;
        u = e.mul(&u);
    }
    u
}

/// Assembles a fixture from pieces; `scramble` applies a unimodular change of lattice basis.
pub fn assemble_fixture(
    name: &str,
    g: &FiniteGroup,
    table: &CharacterTable,
    orbits: &GaloisOrbitDecomposition,
    blocks: &[RationalBlock],
    pieces: &[(usize, PieceKind)],
    scramble: Option<&mut ChaCha8Rng>,
) -> Result<HodgeFixture, HodgeError> {
    let k = hodge_field(g.exponent());
    let mut rep: Option<IntegralRepresentation> = None;
    let mut dec: Option<HodgeDecomposition> = None;
    let mut out = Vec::new();
    for (orbit, kind) in pieces {
        let b = &blocks[*orbit].rep;
        let (prep, pdec) = match kind {
            PieceKind::Cm { chosen } => (b.clone(), HodgeDecomposition::from_characters(b, table, chosen)?),
            PieceKind::Paired => (b.direct_sum(b), HodgeDecomposition::paired(b.rank(), &k)),
        };
        out.push(FixturePiece { orbit: *orbit, kind: kind.clone(), rank: prep.rank() });
        rep = Some(match rep {
            None => prep,
            Some(r) => r.direct_sum(&prep),
        });
        dec = Some(match dec {
            None => pdec,
            Some(d) => d.direct_sum(&pdec),
        });
    }
    let mut rep = rep.ok_or_else(|| HodgeError::InvalidRepresentation("no pieces".into()))?;
    let mut dec = dec.expect("pieces present");
    if let Some(rng) = scramble {
        let u = random_unimodular(rng, rep.rank());
        let ui = u.inverse().expect("unimodular");
        let matrices = rep.matrices().iter().map(|m| u.mul(m).mul(&ui)).collect();
        rep = IntegralRepresentation::from_group(g.clone(), matrices)?;
        let uk = u.map(|x| CyclotomicNumber::from_rational(&k, x.clone()));
        dec = HodgeDecomposition { field: k.clone(), basis10: uk.mul(&dec.basis10) };
    }
    dec.validate(&rep)?;
    let j = dec.numeric_complex_structure();
    Ok(HodgeFixture {
        name: name.to_string(),
        rep,
        table: table.clone(),
        orbits: orbits.clone(),
        pieces: out,
        decomposition: dec,
        j,
    })
}

struct GroupData {
    group: FiniteGroup,
    table: CharacterTable,
    orbits: GaloisOrbitDecomposition,
    blocks: Vec<RationalBlock>,
}

fn group_data(max_order: usize) -> Vec<GroupData> {
    fixture_groups()
        .into_iter()
        .filter(|g| g.order() <= max_order)
        .map(|group| {
            let table = character_table(&group).expect("fixture tables exist");
            let orbits = galois_orbits(&table, &group).expect("fixture orbits exist");
            let blocks = rational_blocks(&group, &orbits);
            GroupData { group, table, orbits, blocks }
        })
        .collect()
}

/// Every single-block rigid fixture with rank at most the cap, over all
/// fixture groups of order at most 16 (each choice of V^{1,0}-side characters).
pub fn rigid_fixtures() -> Vec<HodgeFixture> {
    let mut out = Vec::new();
    for d in group_data(16) {
        for b in &d.blocks {
            if b.tag != FieldTag::CM || b.rep.rank() > FIXTURE_RANK_CAP {
                continue;
            }
            for chosen in cm_choices(&d.table, &d.orbits, b.orbit) {
                let name = format!("{}/orbit{}/{:?}", d.group.name(), b.orbit, chosen);
                let f = assemble_fixture(
                    &name,
                    &d.group,
                    &d.table,
                    &d.orbits,
                    &d.blocks,
                    &[(b.orbit, PieceKind::Cm { chosen })],
                    None,
                )
                .expect("CM blocks give valid decompositions");
                out.push(f);
            }
        }
    }
    out
}

/// Random fixtures over groups of order at most 16 and rank at most 8: a
/// random group, then random CM or paired pieces while the rank fits, then a
/// random unimodular change of basis.
pub fn random_fixtures(count: usize, seed: u64) -> Vec<HodgeFixture> {
    let data = group_data(16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = data.choose(&mut rng).expect("nonempty");
        let mut rank = 0;
        let mut pieces = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let b = d.blocks.choose(&mut rng).expect("nonempty");
            let cm = b.tag == FieldTag::CM && rng.gen_bool(0.7);
            let r = if cm { b.rep.rank() } else { 2 * b.rep.rank() };
            if rank + r > FIXTURE_RANK_CAP {
                continue;
            }
            rank += r;
            let kind = if cm {
                let choices = cm_choices(&d.table, &d.orbits, b.orbit);
                PieceKind::Cm { chosen: choices.choose(&mut rng).expect("nonempty").clone() }
            } else {
                PieceKind::Paired
            };
            pieces.push((b.orbit, kind));
        }
        if pieces.is_empty() {
            continue;
        }
        let name = format!("random{}/{}", out.len(), d.group.name());
        let f = assemble_fixture(&name, &d.group, &d.table, &d.orbits, &d.blocks, &pieces, Some(&mut rng))
            .expect("generated pieces give valid decompositions");
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::library::cyclic;

    #[test]
    fn blocks_of_z4() {
        let g = cyclic(4);
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        let blocks = rational_blocks(&g, &o);
        let ranks: Vec<usize> = blocks.iter().map(|b| b.rep.rank()).collect();
        let mut sorted = ranks.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 1, 2]);
        let cm = blocks.iter().find(|b| b.tag == FieldTag::CM).unwrap();
        assert_eq!(cm_choices(&t, &o, cm.orbit).len(), 2);
    }
}
