//! Central idempotents of Q[G] and C[G], Galois orbits of characters and the
//! splitting of the centre of Q[G] into character fields.

use num::{One, Zero};
use serde::Serialize;

use super::chartab::CharacterTable;
use super::finite_group::FiniteGroup;
use super::GroupError;
use crate::arith::{CyclotomicNumber, Scalar, SubfieldSpec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldTag {
    TotallyReal,
    CM,
}

/// One Galois orbit [chi] of irreducible characters.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisOrbit {
    /// Row indices into the character table, ascending; members[0] is the base character.
    pub members: Vec<usize>,
    /// members[i] = sigma_{residues[i]} applied to members[0]
    pub residues: Vec<u32>,
    /// Coefficients of e_K(chi) on the group elements.
    #[serde(serialize_with = "ser_q_vec")]
    pub idempotent: Vec<Q>,
    #[serde(skip)]
    pub field: SubfieldSpec,
    pub tag: FieldTag,
    pub degree: usize,
    pub character_degree: u64,
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(crate::arith::rational::fmt_q).collect();
    strs.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisOrbitDecomposition {
    pub orbits: Vec<GaloisOrbit>,
}

impl GaloisOrbitDecomposition {
    pub fn orbit_of(&self, chi: usize) -> usize {
        self.orbits.iter().position(|o| o.members.contains(&chi)).expect("every character lies in an orbit")
    }
}

/// Product in Q[G].
pub fn algebra_mul(g: &FiniteGroup, a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = g.order();
    let mut out = vec![Q::zero(); n];
    for (x, ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            if !by.is_zero() {
                out[g.mul(x, y)] += ax * by;
            }
        }
    }
    out
}

/// Product in Q(zeta_m)[G].
pub fn algebra_mul_cyclo(g: &FiniteGroup, a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
    let n = g.order();
    let mut out: Vec<CyclotomicNumber> = (0..n).map(|_| a[0].zero_like()).collect();
    for (x, ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            if !by.is_zero() {
                let k = g.mul(x, y);
                out[k] = &out[k] + &(ax * by);
            }
        }
    }
    out
}

/// e_chi = chi(1)/|G| sum_g chi(g^{-1}) g.
pub fn central_idempotent(table: &CharacterTable, g: &FiniteGroup, chi: usize) -> Vec<CyclotomicNumber> {
    let s = Q::new((table.degrees[chi] as i64).into(), (g.order() as i64).into());
    (0..g.order()).map(|x| table.value(chi, g.inv(x)).scale(&s)).collect()
}

pub fn galois_orbits(table: &CharacterTable, g: &FiniteGroup) -> Result<GaloisOrbitDecomposition, GroupError> {
    let d = table.size();
    let field = table.field.clone();
    let mut assigned = vec![false; d];
    let mut orbits = Vec::new();
    for base in 0..d {
        if assigned[base] {
            continue;
        }
        let mut found: Vec<(usize, u32)> = Vec::new();
        for &a in field.units() {
            let row: Vec<CyclotomicNumber> = table.values[base].iter().map(|v| v.galois(a as i64)).collect();
            let idx = table
                .values
                .iter()
                .position(|r| *r == row)
                .ok_or_else(|| GroupError::CharacterTableFailure("table not closed under Galois action".into()))?;
            if !found.iter().any(|(i, _)| *i == idx) {
                found.push((idx, a));
            }
        }
        found.sort_unstable();
        for (i, _) in &found {
            assigned[*i] = true;
        }
        let sub = SubfieldSpec::generated_by(&field, &table.values[base]);
        if sub.degree() != found.len() {
            return Err(GroupError::CharacterTableFailure("orbit length differs from field degree".into()));
        }
        let mut e: Vec<CyclotomicNumber> = (0..g.order()).map(|_| CyclotomicNumber::zero(&field)).collect();
        for (i, _) in &found {
            let ei = central_idempotent(table, g, *i);
            for (acc, x) in e.iter_mut().zip(&ei) {
                *acc = &*acc + x;
            }
        }
        let idempotent = e
            .iter()
            .map(|x| x.to_rational())
            .collect::<Option<Vec<Q>>>()
            .ok_or(GroupError::IrrationalIdempotent(base))?;
        let tag = if table.values[base].iter().all(|v| v.is_real()) { FieldTag::TotallyReal } else { FieldTag::CM };
        orbits.push(GaloisOrbit {
            members: found.iter().map(|x| x.0).collect(),
            residues: found.iter().map(|x| x.1).collect(),
            idempotent,
            degree: sub.degree(),
            field: sub,
            tag,
            character_degree: table.degrees[base],
        });
    }
    Ok(GaloisOrbitDecomposition { orbits })
}

/// One summand F_j of Z(Q[G]) together with the images of the class sums.
#[derive(Clone, Debug, Serialize)]
pub struct CentreComponent {
    pub orbit: usize,
    pub tag: FieldTag,
    pub degree: usize,
    /// fixing subgroup of F_j inside (Z/m)^*
    pub fixing_subgroup: Vec<u32>,
    /// power-basis coordinates of the chosen Q-basis of F_j
    pub field_basis: Vec<CyclotomicNumber>,
    /// class_images[k]: coordinates of the F_j-component of the class sum v_{C_k}
    pub class_images: Vec<Vec<String>>,
}

pub fn centre_decomposition(
    table: &CharacterTable,
    orbits: &GaloisOrbitDecomposition,
) -> Vec<CentreComponent> {
    orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let chi = o.members[0];
            let deg = Q::from_integer((table.degrees[chi] as i64).into());
            let class_images = (0..table.size())
                .map(|k| {
                    let size = Q::from_integer((table.classes.sizes[k] as i64).into());
                    let w = table.values[chi][k].scale(&(size / &deg));
                    o.field
                        .coordinates(&w)
                        .expect("central character values lie in the character field")
                        .iter()
                        .map(crate::arith::rational::fmt_q)
                        .collect()
                })
                .collect();
            CentreComponent {
                orbit: j,
                tag: o.tag,
                degree: o.degree,
                fixing_subgroup: o.field.fixing_subgroup().to_vec(),
                field_basis: o.field.basis().to_vec(),
                class_images,
            }
        })
        .collect()
}

/// The rational central element of Q[G] e_K(chi) corresponding to x in F_[chi]:
/// it acts on the chi_i-isotypic part by sigma_{a_i}(x).
pub fn central_element(table: &CharacterTable, g: &FiniteGroup, orbit: &GaloisOrbit, x: &CyclotomicNumber) -> Vec<Q> {
    let n = g.order();
    let mut z: Vec<CyclotomicNumber> = (0..n).map(|_| x.zero_like()).collect();
    for (&chi, &a) in orbit.members.iter().zip(&orbit.residues) {
        let s = x.galois(a as i64);
        let e = central_idempotent(table, g, chi);
        for (acc, ei) in z.iter_mut().zip(&e) {
            *acc = &*acc + &(&s * ei);
        }
    }
    z.iter().map(|c| c.to_rational().expect("Galois-stable sum is rational")).collect()
}

/// Identity of Q[G].
pub fn algebra_one(n: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[0] = Q::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::chartab::character_table;

    #[test]
    fn cyclic_four_orbits() {
        let (g, _) = FiniteGroup::generate("Z4", 0u32, &[1], |a, b| (a + b) % 4).unwrap();
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        assert_eq!(o.orbits.len(), 3);
        let tags: Vec<FieldTag> = o.orbits.iter().map(|x| x.tag).collect();
        assert_eq!(tags.iter().filter(|&&t| t == FieldTag::CM).count(), 1);
        let cm = o.orbits.iter().find(|x| x.tag == FieldTag::CM).unwrap();
        assert_eq!(cm.degree, 2);
        // sum of rational idempotents is 1
        let mut s = vec![Q::zero(); 4];
        for orb in &o.orbits {
            for (a, b) in s.iter_mut().zip(&orb.idempotent) {
                *a += b;
            }
        }
        assert_eq!(s, algebra_one(4));
        let c = centre_decomposition(&t, &o);
        assert_eq!(c.iter().map(|x| x.degree).collect::<Vec<_>>().iter().sum::<usize>(), 4);
    }

    #[test]
    fn central_element_is_ring_map() {
        let (g, _) = FiniteGroup::generate("Z5", 0u32, &[1], |a, b| (a + b) % 5).unwrap();
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        let orb = o.orbits.iter().find(|x| x.degree == 4).unwrap();
        let f = t.field.clone();
        let x = CyclotomicNumber::zeta_pow(&f, 1);
        let y = &x + &CyclotomicNumber::zeta_pow(&f, 3);
        let zx = central_element(&t, &g, orb, &x);
        let zy = central_element(&t, &g, orb, &y);
        let zxy = central_element(&t, &g, orb, &(&x * &y));
        assert_eq!(algebra_mul(&g, &zx, &zy), zxy);
        let one = central_element(&t, &g, orb, &CyclotomicNumber::one(&f));
        assert_eq!(one, orb.idempotent);
    }
}
