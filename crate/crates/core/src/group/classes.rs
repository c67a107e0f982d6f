use serde::Serialize;

use super::finite_group::FiniteGroup;

/// Conjugacy classes ordered by their least element; class 0 is {identity}.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClassData {
    pub class_of: Vec<usize>,
    pub sizes: Vec<usize>,
    pub representatives: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// coefficients[i][j][k]: number of (x, y) in C_i x C_j with x*y equal to
    /// the representative of C_k
    pub coefficients: Vec<Vec<Vec<u64>>>,
    /// power_map[k][l]: class of g^l for g in C_k, l in 0..order
    #[serde(skip)]
    pub power_map: Vec<Vec<usize>>,
    pub element_orders: Vec<usize>,
}

impl ConjugacyClassData {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClassData {
    let n = g.order();
    let gens = g.generators();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = members.len();
        let mut orbit = vec![x];
        class_of[x] = c;
        let mut i = 0;
        while i < orbit.len() {
            for &s in &gens {
                let y = g.conjugate(orbit[i], s);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        members.push(orbit);
    }
    let d = members.len();
    let sizes: Vec<usize> = members.iter().map(|m| m.len()).collect();
    let representatives: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let mut coefficients = vec![vec![vec![0u64; d]; d]; d];
    for (k, &z) in representatives.iter().enumerate() {
        for x in 0..n {
            let y = g.mul(g.inv(x), z);
            coefficients[class_of[x]][class_of[y]][k] += 1;
        }
    }
    let power_map = representatives
        .iter()
        .map(|&r| (0..g.element_order(r)).map(|l| class_of[g.pow(r, l as i64)]).collect())
        .collect();
    let element_orders = representatives.iter().map(|&r| g.element_order(r)).collect();
    ConjugacyClassData { class_of, sizes, representatives, members, coefficients, power_map, element_orders }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let g = FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let c = conjugacy_classes(&g);
        let mut sizes = c.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(c.sizes.iter().sum::<usize>(), 6);
        // class sum times class sum: C_i C_j sizes multiply
        for i in 0..3 {
            for j in 0..3 {
                let total: u64 = (0..3).map(|k| c.coefficients[i][j][k] * c.sizes[k] as u64).sum();
                assert_eq!(total, (c.sizes[i] * c.sizes[j]) as u64);
            }
        }
    }
}
