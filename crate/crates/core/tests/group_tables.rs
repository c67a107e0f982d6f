use num::{One, Zero};
use toruskit::arith::{CyclotomicNumber, Q};
use toruskit::group::idempotent::{algebra_mul, algebra_mul_cyclo, algebra_one};
use toruskit::group::library::{cyclic, fixture_groups, symmetric};
use toruskit::group::{central_idempotent, character_table, galois_orbits, FieldTag, FiniteGroup};

#[test]
fn every_fixture_table_is_exactly_orthogonal() {
    for g in fixture_groups() {
        let t = character_table(&g).unwrap_or_else(|e| panic!("{}: {e}", g.name()));
        t.verify().unwrap();
        assert_eq!(t.size(), t.classes.count(), "{}", g.name());
        let s: u64 = t.degrees.iter().map(|d| d * d).sum();
        assert_eq!(s as usize, g.order());
    }
}

#[test]
fn idempotents_of_every_fixture() {
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let n = g.order();
        let es: Vec<Vec<CyclotomicNumber>> = (0..t.size()).map(|c| central_idempotent(&t, &g, c)).collect();
        let zero: Vec<CyclotomicNumber> = (0..n).map(|_| CyclotomicNumber::zero(&t.field)).collect();
        for a in 0..es.len() {
            for b in 0..es.len() {
                let p = algebra_mul_cyclo(&g, &es[a], &es[b]);
                if a == b {
                    assert_eq!(p, es[a], "{}: e_{a} not idempotent", g.name());
                } else {
                    assert_eq!(p, zero, "{}: e_{a} e_{b} != 0", g.name());
                }
            }
        }
        let orbits = galois_orbits(&t, &g).unwrap();
        let mut total = vec![Q::zero(); n];
        for (i, o) in orbits.orbits.iter().enumerate() {
            assert_eq!(algebra_mul(&g, &o.idempotent, &o.idempotent), o.idempotent);
            for (j, o2) in orbits.orbits.iter().enumerate() {
                if i != j {
                    assert!(algebra_mul(&g, &o.idempotent, &o2.idempotent).iter().all(|c| c.is_zero()));
                }
            }
            for (acc, c) in total.iter_mut().zip(&o.idempotent) {
                *acc += c;
            }
            let real = o.members.iter().all(|&m| t.values[m].iter().all(|v| v.is_real()));
            assert_eq!(o.tag == FieldTag::TotallyReal, real);
            assert_eq!(o.tag == FieldTag::CM, o.field.is_cm());
        }
        assert_eq!(total, algebra_one(n));
    }
}

#[test]
fn symmetric_groups_have_rational_characters() {
    for g in [symmetric(3), symmetric(4)] {
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        assert_eq!(o.orbits.len(), t.size());
        for orb in &o.orbits {
            assert_eq!(orb.degree, 1);
            assert_eq!(orb.tag, FieldTag::TotallyReal);
        }
    }
    let t = character_table(&symmetric(3)).unwrap();
    let mut rows: Vec<Vec<i64>> = t
        .values
        .iter()
        .map(|r| r.iter().map(|v| v.to_rational().unwrap().to_integer().try_into().unwrap()).collect())
        .collect();
    rows.sort();
    // classes ordered by least element: identity, then the class containing element 1
    assert!(rows.contains(&vec![1, 1, 1]));
    assert!(rows.iter().any(|r| r[0] == 2 && r.iter().sum::<i64>() == 1));
}

#[test]
fn sign_character_idempotent_of_s3() {
    let g = symmetric(3);
    let t = character_table(&g).unwrap();
    let sign = (0..t.size()).find(|&c| t.degrees[c] == 1 && !t.values[c].iter().all(|v| v.is_one_elem())).unwrap();
    let e = central_idempotent(&t, &g, sign);
    let perms = g.permutations().unwrap();
    for (x, p) in perms.iter().enumerate() {
        let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let want = if inversions % 2 == 0 { Q::new(1.into(), 6.into()) } else { Q::new((-1).into(), 6.into()) };
        assert_eq!(e[x].to_rational(), Some(want));
    }
}

trait IsOne {
    fn is_one_elem(&self) -> bool;
}
impl IsOne for CyclotomicNumber {
    fn is_one_elem(&self) -> bool {
        self.to_rational().map(|q| q.is_one()).unwrap_or(false)
    }
}

#[test]
fn cyclic_characters_match_direct_formula() {
    for n in [4u32, 5, 6, 8] {
        let g = cyclic(n);
        let t = character_table(&g).unwrap();
        let f = t.field.clone();
        // element 1 generates; its powers are g^k = element index in generation order
        let gen = 1usize;
        let mut expected: Vec<Vec<CyclotomicNumber>> = (0..n as i64)
            .map(|j| (0..n as usize).map(|x| {
                // find k with gen^k = x
                let k = (0..n as i64).find(|&k| g.pow(gen, k) == x).unwrap();
                CyclotomicNumber::zeta_pow(&f, j * k)
            }).collect())
            .collect();
        let mut got: Vec<Vec<CyclotomicNumber>> =
            (0..t.size()).map(|c| (0..n as usize).map(|x| t.value(c, x).clone()).collect()).collect();
        let key = |r: &Vec<CyclotomicNumber>| r.iter().flat_map(|v| v.coeffs().to_vec()).collect::<Vec<Q>>();
        expected.sort_by_key(key);
        got.sort_by_key(key);
        assert_eq!(expected, got);
    }
}

#[test]
fn permutation_and_table_presentations_agree() {
    let g = symmetric(4);
    let h = FiniteGroup::from_cayley_table("S4", &g.cayley_table()).unwrap();
    let a = character_table(&g).unwrap();
    let b = character_table(&h).unwrap();
    assert_eq!(a.values, b.values);
    assert_eq!(a.degrees, b.degrees);
}
