use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::rep::IntegralRepresentation;
use super::HodgeError;
use crate::arith::{CyclotomicField, CyclotomicNumber, Q};
use crate::group::CharacterTable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HodgeTolerances {
    /// bound on ||J^2 + I||
    pub complex_structure: f64,
    /// bound on ||J rho(g) - rho(g) J||
    pub commutation: f64,
    /// bound on the distance of recovered multiplicities from integers
    pub rounding: f64,
}

impl Default for HodgeTolerances {
    fn default() -> Self {
        HodgeTolerances { complex_structure: 1e-10, commutation: 1e-10, rounding: 1e-6 }
    }
}

/// A real 2n x 2n matrix J with J^2 = -I, in lattice coordinates.
#[derive(Clone, Debug)]
pub struct NumericComplexStructure {
    pub j: DMatrix<f64>,
}

impl NumericComplexStructure {
    pub fn new(j: DMatrix<f64>) -> Self {
        NumericComplexStructure { j }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, HodgeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(HodgeError::InvalidComplexStructure("J is not square".into()));
        }
        Ok(NumericComplexStructure { j: DMatrix::from_fn(n, n, |i, k| rows[i][k]) })
    }

    pub fn rank(&self) -> usize {
        self.j.nrows()
    }

    /// Checks J^2 = -I and J rho(g) = rho(g) J within tolerance.
    pub fn validate(&self, rep: &IntegralRepresentation, tol: &HodgeTolerances) -> Result<(), HodgeError> {
        let r = self.rank();
        if r != rep.rank() || r % 2 != 0 {
            return Err(HodgeError::InvalidComplexStructure(format!(
                "J has size {r}, representation has rank {}",
                rep.rank()
            )));
        }
        let sq = (&self.j * &self.j + DMatrix::<f64>::identity(r, r)).norm();
        if sq > tol.complex_structure {
            return Err(HodgeError::InvalidComplexStructure(format!("||J^2 + I|| = {sq:e}")));
        }
        for g in 0..rep.group().order() {
            let m = rep.matrix_f64(g);
            let c = (&self.j * &m - &m * &self.j).norm();
            if c > tol.commutation {
                return Err(HodgeError::NotInvariant { element: g, residual: c });
            }
        }
        Ok(())
    }
}

/// g -> trace of g on V^{1,0}, one value per group element.
#[derive(Clone, Debug, Serialize)]
pub struct HodgeCharacter {
    #[serde(skip)]
    pub field: Arc<CyclotomicField>,
    pub values: Vec<CyclotomicNumber>,
}

impl HodgeCharacter {
    pub fn value(&self, g: usize) -> &CyclotomicNumber {
        &self.values[g]
    }

    /// chi_{1,0}(1) = n.
    pub fn dimension(&self) -> u64 {
        self.values[0].to_rational().and_then(|q| q.to_integer().to_u64()).expect("dimension is a natural number")
    }

    /// chi_{1,0}(g) + conjugate = tr rho(g) for every g, exactly.
    pub fn satisfies_hodge_symmetry(&self, rep: &IntegralRepresentation) -> bool {
        self.values.iter().enumerate().all(|(g, v)| {
            (v + &v.conjugate()).to_rational() == Some(Q::from_integer(rep.trace(g).into()))
        })
    }
}

/// chi_{1,0}(g) = (tr rho(g) - i tr(rho(g) J)) / 2, recovered exactly: the
/// eigenvalues of g on V^{1,0} are o-th roots of unity whose multiplicities are
/// read off from the values on the powers of g.
pub fn hodge_character_from_numeric(
    rep: &IntegralRepresentation,
    j: &NumericComplexStructure,
    tol: &HodgeTolerances,
) -> Result<HodgeCharacter, HodgeError> {
    j.validate(rep, tol)?;
    let g = rep.group();
    let n = g.order();
    let field = CyclotomicField::new(g.exponent() as u32);
    let m = field.conductor() as usize;
    let numeric: Vec<Complex<f64>> = (0..n)
        .map(|x| {
            let r = rep.matrix_f64(x);
            let t = r.trace();
            let tj = (&r * &j.j).trace();
            Complex::new(t / 2.0, -tj / 2.0)
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    for x in 0..n {
        let o = g.element_order(x);
        let mut full = vec![Q::zero(); m];
        for k in 0..o {
            let mut mu = Complex::new(0.0, 0.0);
            for l in 0..o {
                let ang = -2.0 * std::f64::consts::PI * ((k * l) % o) as f64 / o as f64;
                mu += numeric[g.pow(x, l as i64)] * Complex::new(ang.cos(), ang.sin());
            }
            mu /= o as f64;
            let r = mu.re.round();
            let residual = (mu.re - r).abs().max(mu.im.abs());
            if residual > tol.rounding || r < 0.0 {
                return Err(HodgeError::RoundingFailure { element: x, residual });
            }
            if r > 0.0 {
                full[(k * (m / o)) % m] += Q::from_integer((r as i64).into());
            }
        }
        values.push(CyclotomicNumber::from_unreduced(&field, &full));
    }
    Ok(HodgeCharacter { field, values })
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRigidity {
    pub hom_dimension: u64,
    /// multiplicity of each irreducible character (table order) in V^{1,0}
    pub multiplicities: Vec<u64>,
}

fn natural(q: &CyclotomicNumber) -> Option<u64> {
    let r = q.to_rational()?;
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.to_integer().to_u64()
}

/// dim Hom_G(V^{0,1}, V^{1,0}) = (1/|G|) sum_g chi_{1,0}(g)^2, after checking that
/// chi_{1,0} is a genuine character.
pub fn rigidity_by_character(chi10: &HodgeCharacter, table: &CharacterTable) -> Result<CharacterRigidity, HodgeError> {
    let classes = &table.classes;
    if chi10.field.conductor() != table.field.conductor() {
        return Err(HodgeError::InconsistentCharacter("values live in a different cyclotomic field".into()));
    }
    for (k, members) in classes.members.iter().enumerate() {
        if members.iter().any(|&x| chi10.values[x] != chi10.values[members[0]]) {
            return Err(HodgeError::InconsistentCharacter(format!("not constant on class {k}")));
        }
    }
    let f: Vec<CyclotomicNumber> = classes.representatives.iter().map(|&r| chi10.values[r].clone()).collect();
    let mut multiplicities = Vec::with_capacity(table.size());
    for chi in 0..table.size() {
        let ip = table.inner_product(&f, chi);
        let m = natural(&ip).ok_or_else(|| {
            HodgeError::InconsistentCharacter(format!("multiplicity of character {chi} is {ip}"))
        })?;
        multiplicities.push(m);
    }
    let mut acc = CyclotomicNumber::zero(&chi10.field);
    for (k, v) in f.iter().enumerate() {
        acc = &acc + &(v * v).scale(&Q::from_integer((classes.sizes[k] as i64).into()));
    }
    let hom = acc.scale(&Q::new(1.into(), (table.group_order as i64).into()));
    let hom_dimension = natural(&hom)
        .ok_or_else(|| HodgeError::InconsistentCharacter(format!("hom dimension evaluates to {hom}")))?;
    Ok(CharacterRigidity { hom_dimension, multiplicities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::character_table;

    fn z4() -> IntegralRepresentation {
        IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap()
    }

    #[test]
    fn rotation_value_is_i() {
        let rep = z4();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let chi = hodge_character_from_numeric(&rep, &j, &HodgeTolerances::default()).unwrap();
        // the generator is element 1 and acts as J itself: value (0 - i*(-2))/2 = i
        let i = CyclotomicNumber::zeta_pow(&chi.field, 1);
        assert_eq!(chi.values[1], i);
        assert!(chi.satisfies_hodge_symmetry(&rep));
        let t = character_table(rep.group()).unwrap();
        let r = rigidity_by_character(&chi, &t).unwrap();
        assert_eq!(r.hom_dimension, 0);
    }

    #[test]
    fn trivial_group_is_not_rigid() {
        let rep = IntegralRepresentation::from_generator_matrices("1", 4, &[]).unwrap();
        let mut j = DMatrix::<f64>::zeros(4, 4);
        j[(1, 0)] = 1.0;
        j[(0, 1)] = -1.0;
        j[(3, 2)] = 1.0;
        j[(2, 3)] = -1.0;
        let chi = hodge_character_from_numeric(&rep, &NumericComplexStructure::new(j), &HodgeTolerances::default()).unwrap();
        assert_eq!(chi.dimension(), 2);
        let t = character_table(rep.group()).unwrap();
        assert_eq!(rigidity_by_character(&chi, &t).unwrap().hom_dimension, 4);
    }

    #[test]
    fn non_invariant_j_is_rejected() {
        let rep = IntegralRepresentation::from_generator_matrices("Z2", 2, &[vec![vec![1, 0], vec![0, -1]]]).unwrap();
        let j = NumericComplexStructure::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            hodge_character_from_numeric(&rep, &j, &HodgeTolerances::default()),
            Err(HodgeError::NotInvariant { .. })
        ));
    }
}
