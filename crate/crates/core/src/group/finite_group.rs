use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GroupError;

/// Hard cap on the number of elements produced by closure.
pub const CLOSURE_CAP: usize = 10_000;

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    permutations: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates and wraps a Cayley table (row g, column h holds g*h).
    pub fn from_cayley_table(name: &str, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > CLOSURE_CAP {
            return Err(GroupError::TooLarge(n));
        }
        for (g, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::InvalidTable(format!("row {g} has length {} (expected {n})", r.len())));
            }
            if let Some(&bad) = r.iter().find(|&&x| x >= n) {
                return Err(GroupError::InvalidTable(format!("entry {bad} in row {g} out of range")));
            }
        }
        for g in 0..n {
            if rows[0][g] != g || rows[g][0] != g {
                return Err(GroupError::InvalidTable("element 0 is not the identity".into()));
            }
        }
        // latin square
        for g in 0..n {
            let mut seen_r = vec![false; n];
            let mut seen_c = vec![false; n];
            for h in 0..n {
                seen_r[rows[g][h]] = true;
                seen_c[rows[h][g]] = true;
            }
            if seen_r.iter().any(|s| !s) || seen_c.iter().any(|s| !s) {
                return Err(GroupError::InvalidTable(format!("row or column {g} is not a permutation")));
            }
        }
        let table: Vec<u32> = rows.iter().flat_map(|r| r.iter().map(|&x| x as u32)).collect();
        let grp = Self::from_flat(name, n, table, None);
        grp.check_associative()?;
        Ok(grp)
    }

    fn from_flat(name: &str, n: usize, table: Vec<u32>, permutations: Option<Vec<Vec<usize>>>) -> Self {
        let mut inverses = vec![0; n];
        for g in 0..n {
            for h in 0..n {
                if table[g * n + h] == 0 {
                    inverses[g] = h;
                    break;
                }
            }
        }
        let mut orders = vec![1; n];
        for (g, o) in orders.iter_mut().enumerate() {
            let mut x = g;
            while x != 0 {
                x = table[x * n + g] as usize;
                *o += 1;
            }
        }
        FiniteGroup { name: name.to_string(), n, table, inverses, orders, permutations }
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.n;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..20_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Closure of `generators` under `mul`; element 0 is `identity`, others in
    /// breadth-first discovery order.
    pub fn generate<T, F>(name: &str, identity: T, generators: &[T], mul: F) -> Result<(Self, Vec<T>), GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut i = 0;
        while i < elems.len() {
            for s in generators {
                let y = mul(&elems[i], s);
                if !index.contains_key(&y) {
                    if elems.len() >= CLOSURE_CAP {
                        return Err(GroupError::TooLarge(CLOSURE_CAP + 1));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = mul(&elems[a], &elems[b]);
                let k = *index.get(&p).ok_or_else(|| GroupError::InvalidTable("product escapes the closure".into()))?;
                table[a * n + b] = k as u32;
            }
        }
        if let Some(a) = (0..n).find(|&a| !(0..n).any(|b| table[a * n + b] == 0)) {
            return Err(GroupError::InvalidTable(format!("element {a} has no inverse")));
        }
        Ok((Self::from_flat(name, n, table, None), elems))
    }

    /// Group generated by one-line permutations of {0..k-1}; product is
    /// composition (g*h)(x) = g(h(x)).
    pub fn from_permutations(name: &str, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        let k = generators.first().map(|g| g.len()).unwrap_or(0);
        for g in generators {
            let mut seen = vec![false; g.len()];
            if g.len() != k || g.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::InvalidPermutation(format!("{g:?}")));
            }
        }
        let id: Vec<usize> = (0..k).collect();
        let (mut grp, elems) = Self::generate(name, id, generators, |a: &Vec<usize>, b: &Vec<usize>| {
            b.iter().map(|&x| a[x]).collect()
        })?;
        grp.permutations = Some(elems);
        Ok(grp)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let e = k.rem_euclid(o);
        let mut x = 0;
        for _ in 0..e {
            x = self.mul(x, a);
        }
        x
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| num::integer::lcm(acc, o))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Permutation realization of each element, when built from permutations.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.permutations.as_deref()
    }

    /// Greedy generating set: repeatedly adds the least element outside the
    /// subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut members = vec![0usize];
        for g in 1..self.n {
            if inside[g] {
                continue;
            }
            gens.push(g);
            let mut i = 0;
            while i < members.len() {
                for &s in &gens {
                    let y = self.mul(members[i], s);
                    if !inside[y] {
                        inside[y] = true;
                        members.push(y);
                    }
                }
                i += 1;
            }
        }
        gens
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn centre(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z))).collect()
    }

    /// Direct product; element (g, h) has index g * |H| + h.
    pub fn direct_product(&self, other: &FiniteGroup, name: &str) -> FiniteGroup {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let g = self.mul(a / n2, b / n2);
                let h = other.mul(a % n2, b % n2);
                table[a * n + b] = (g * n2 + h) as u32;
            }
        }
        Self::from_flat(name, n, table, None)
    }

    /// Same group with elements relabelled by `perm` (new index of old element i
    /// is perm[i]); perm[0] must be 0.
    pub fn relabel(&self, perm: &[usize]) -> FiniteGroup {
        assert_eq!(perm[0], 0);
        let n = self.n;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        Self::from_flat(&self.name, n, table, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn permutation_closure() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.centre(), vec![0]);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        let t = FiniteGroup::from_cayley_table("S3", &g.cayley_table()).unwrap();
        assert_eq!(t.order(), 6);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_cayley_table("x", &[vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_cayley_table("x", &[vec![1, 0], vec![0, 1]]).is_err());
        // a loop that is a latin square with identity but not associative
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley_table("x", &loop5), Err(GroupError::NotAssociative(..))));
        assert!(FiniteGroup::from_permutations("x", &[vec![0, 0]]).is_err());
    }

    #[test]
    fn generators_generate() {
        let g = s3();
        let gens = g.generators();
        assert!(gens.len() <= 2);
        let c = g.direct_product(&s3(), "S3xS3");
        assert_eq!(c.order(), 36);
        assert_eq!(c.centre().len(), 1);
    }
}
