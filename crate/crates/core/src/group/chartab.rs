//! Character tables by Burnside's class-algebra method: common eigenvectors of
//! the class-multiplication matrices are the central characters.
//!
//! The eigenvectors are located in floating point; every character value is then
//! rebuilt exactly in Q(zeta_m) from the eigenvalue multiplicities of each
//! element (integers obtained by a discrete Fourier transform over the powers of
//! the element) and the whole table is re-verified with exact arithmetic.

use std::cmp::Reverse;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classes::{conjugacy_classes, ConjugacyClassData};
use super::finite_group::FiniteGroup;
use super::GroupError;
use crate::arith::{CyclotomicField, CyclotomicNumber, Q};

pub const DEFAULT_SEED: u64 = 0x7a11_0c1d;
const MAX_ATTEMPTS: u64 = 16;

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    #[serde(skip)]
    pub field: Arc<CyclotomicField>,
    pub classes: ConjugacyClassData,
    pub group_order: usize,
    pub degrees: Vec<u64>,
    /// values[chi][class]
    pub values: Vec<Vec<CyclotomicNumber>>,
    /// Seed of the generator that produced the separating combination.
    pub seed: u64,
}

impl CharacterTable {
    pub fn size(&self) -> usize {
        self.degrees.len()
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn value(&self, chi: usize, element: usize) -> &CyclotomicNumber {
        &self.values[chi][self.classes.class_of[element]]
    }

    /// Class of g^{-1} for each class.
    pub fn inverse_classes(&self, g: &FiniteGroup) -> Vec<usize> {
        self.classes.representatives.iter().map(|&r| self.classes.class_of[g.inv(r)]).collect()
    }

    /// <f, chi> = (1/|G|) sum_k |C_k| f_k conj(chi_k) for a class function f.
    pub fn inner_product(&self, f: &[CyclotomicNumber], chi: usize) -> CyclotomicNumber {
        let mut acc = CyclotomicNumber::zero(&self.field);
        for (k, fk) in f.iter().enumerate() {
            let t = fk * &self.values[chi][k].conjugate();
            acc = &acc + &t.scale(&Q::from_integer((self.classes.sizes[k] as i64).into()));
        }
        acc.scale(&Q::new(1.into(), (self.group_order as i64).into()))
    }

    /// Exact check of both orthogonality relations and of the degree sum.
    pub fn verify(&self) -> Result<(), GroupError> {
        let d = self.size();
        let n = self.group_order as i64;
        for a in 0..d {
            for b in a..d {
                let ip = self.inner_product(&self.values[a], b);
                let want = if a == b { Q::one() } else { Q::zero() };
                if ip.to_rational() != Some(want) {
                    return Err(GroupError::CharacterTableFailure(format!("rows {a} and {b} are not orthonormal")));
                }
            }
        }
        for g in 0..d {
            for h in g..d {
                let mut acc = CyclotomicNumber::zero(&self.field);
                for chi in 0..d {
                    acc = &acc + &(&self.values[chi][g] * &self.values[chi][h].conjugate());
                }
                let want = if g == h { Q::new(n.into(), (self.classes.sizes[g] as i64).into()) } else { Q::zero() };
                if acc.to_rational() != Some(want) {
                    return Err(GroupError::CharacterTableFailure(format!("columns {g} and {h} are not orthogonal")));
                }
            }
        }
        let s: u64 = self.degrees.iter().map(|x| x * x).sum();
        if s != self.group_order as u64 {
            return Err(GroupError::CharacterTableFailure(format!("degree squares sum to {s}")));
        }
        Ok(())
    }
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, GroupError> {
    character_table_seeded(g, DEFAULT_SEED)
}

pub fn character_table_seeded(g: &FiniteGroup, seed: u64) -> Result<CharacterTable, GroupError> {
    let classes = conjugacy_classes(g);
    let field = CyclotomicField::new(g.exponent() as u32);
    let mut last = GroupError::CharacterTableFailure("no attempt made".into());
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        match attempt_table(g, &classes, &field, s) {
            Ok(t) => return Ok(t),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn attempt_table(
    g: &FiniteGroup,
    classes: &ConjugacyClassData,
    field: &Arc<CyclotomicField>,
    seed: u64,
) -> Result<CharacterTable, GroupError> {
    let d = classes.count();
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (M_j)_{i,k} = a_{j i k}; central characters are common right eigenvectors
    let coeffs: Vec<f64> = (0..d).map(|_| rng.gen_range(1..=1000) as f64 / 1000.0).collect();
    let m = DMatrix::<f64>::from_fn(d, d, |i, k| {
        (0..d).map(|j| coeffs[j] * classes.coefficients[j][i][k] as f64).sum::<f64>()
    });
    let eig: Vec<Complex<f64>> = m.complex_eigenvalues().iter().cloned().collect();
    let scale = eig.iter().map(|e| e.norm()).fold(1.0, f64::max);
    for a in 0..d {
        for b in 0..a {
            if (eig[a] - eig[b]).norm() < 1e-6 * scale {
                return Err(GroupError::CharacterTableFailure("eigenvalues not separated".into()));
            }
        }
    }
    let mc = m.map(|x| Complex::new(x, 0.0));
    let mut numeric_rows: Vec<(u64, Vec<Complex<f64>>)> = Vec::with_capacity(d);
    for lam in &eig {
        let a = &mc - DMatrix::<Complex<f64>>::identity(d, d) * *lam;
        let svd = a.svd(false, true);
        let vt = svd.v_t.ok_or_else(|| GroupError::CharacterTableFailure("svd failed".into()))?;
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        let v: DVector<Complex<f64>> = vt.row(imin).transpose().map(|z| z.conj());
        if v[0].norm() < 1e-9 {
            return Err(GroupError::CharacterTableFailure("eigenvector vanishes at the identity".into()));
        }
        let omega: Vec<Complex<f64>> = v.iter().map(|z| z / v[0]).collect();
        let s: f64 = omega.iter().zip(&classes.sizes).map(|(w, &c)| w.norm_sqr() / c as f64).sum();
        let deg = (n as f64 / s).sqrt().round();
        if deg < 1.0 || ((n as f64 / s).sqrt() - deg).abs() > 1e-4 {
            return Err(GroupError::CharacterTableFailure("degree not integral".into()));
        }
        let chi: Vec<Complex<f64>> =
            omega.iter().zip(&classes.sizes).map(|(w, &c)| w * deg / c as f64).collect();
        numeric_rows.push((deg as u64, chi));
    }
    let mexp = field.conductor() as usize;
    let mut rows: Vec<(u64, Vec<CyclotomicNumber>)> = Vec::with_capacity(d);
    for (deg, chi) in numeric_rows {
        let mut vals = Vec::with_capacity(d);
        for k in 0..d {
            let o = classes.element_orders[k];
            let mut full = vec![Q::zero(); mexp.max(1)];
            for j in 0..o {
                // multiplicity of the eigenvalue zeta_o^j
                let mut mu = Complex::new(0.0, 0.0);
                for l in 0..o {
                    let ang = -2.0 * std::f64::consts::PI * (j * l % o) as f64 / o as f64;
                    mu += chi[classes.power_map[k][l]] * Complex::new(ang.cos(), ang.sin());
                }
                mu /= o as f64;
                let r = mu.re.round();
                if (mu.re - r).abs() > 1e-4 || mu.im.abs() > 1e-4 || r < 0.0 {
                    return Err(GroupError::CharacterTableFailure("eigenvalue multiplicity not integral".into()));
                }
                if r > 0.0 {
                    full[(j * (mexp / o)) % mexp.max(1)] += Q::from_integer((r as i64).into());
                }
            }
            vals.push(CyclotomicNumber::from_unreduced(field, &full));
        }
        rows.push((deg, vals));
    }
    rows.sort_by_key(|(deg, vals)| {
        let key: Vec<Q> = vals.iter().flat_map(|v| v.coeffs().to_vec()).collect();
        (*deg, Reverse(key))
    });
    let table = CharacterTable {
        field: field.clone(),
        classes: classes.clone(),
        group_order: n,
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
        seed,
    };
    table.verify()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::q;

    #[test]
    fn s3_table() {
        let g = FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 2]);
        for row in &t.values {
            for v in row {
                assert!(v.is_rational());
            }
        }
        // identity class first
        assert_eq!(t.values[2][0].to_rational(), Some(q(2)));
    }

    #[test]
    fn cyclic_four() {
        let (g, _) = FiniteGroup::generate("Z4", 0u32, &[1], |a, b| (a + b) % 4).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.degrees, vec![1, 1, 1, 1]);
        let f = t.field.clone();
        let i = CyclotomicNumber::zeta_pow(&f, 1);
        // every row is a homomorphism to the 4th roots of unity determined by g = element 1
        let mut images: Vec<CyclotomicNumber> = t.values.iter().map(|r| t.value_row(r, &g, 1)).collect();
        images.sort_by_key(|v| v.coeffs().to_vec());
        assert!(images.contains(&i));
        assert!(images.contains(&i.conjugate()));
    }

    impl CharacterTable {
        fn value_row(&self, row: &[CyclotomicNumber], _g: &FiniteGroup, e: usize) -> CyclotomicNumber {
            row[self.classes.class_of[e]].clone()
        }
    }

    #[test]
    fn trivial_group() {
        let (g, _) = FiniteGroup::generate("1", 0u32, &[], |a, b| a + b).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.values[0][0].to_rational(), Some(q(1)));
    }
}
