use toruskit::arith::{QMatrix, SubfieldSpec};
use toruskit::group::library::{by_name, fixture_groups};
use toruskit::group::{character_table, galois_orbits, FieldTag};
use toruskit::hodge::decomposition::brute_force_hom_dimension;
use toruskit::hodge::fixtures::{random_fixtures, rigid_fixtures};
use toruskit::hodge::report::HodgeInput;
use toruskit::hodge::symbolic::brute_force_rigid_type_count;
use toruskit::hodge::{enumerate_rigid_types, isotypic_split, rigidity_report, HodgeTolerances};

#[test]
fn three_routes_agree_on_random_fixtures() {
    let fixtures = random_fixtures(200, 17);
    let tol = HodgeTolerances::default();
    let mut rigid = 0;
    for f in &fixtures {
        let exact = rigidity_report(Some(&f.rep), HodgeInput::Exact(&f.decomposition), &tol).unwrap();
        assert!(exact.all_agree, "{}: {:?}", f.name, exact.methods);
        let numeric = rigidity_report(Some(&f.rep), HodgeInput::Numeric(&f.j), &tol).unwrap();
        assert!(numeric.all_agree, "{}: {:?}", f.name, numeric.methods);
        assert_eq!(exact.hom_dimension, numeric.hom_dimension, "{}", f.name);
        let methods: Vec<&str> = exact.methods.iter().map(|m| m.method).collect();
        assert_eq!(methods, ["character-formula", "centre-criterion", "brute-force-exact"]);
        if f.is_rigid_by_construction() {
            assert!(exact.is_rigid, "{}", f.name);
        }
        if exact.is_rigid {
            rigid += 1;
        }
    }
    assert!(rigid > 20 && rigid < 180, "{rigid} rigid fixtures out of 200");
}

#[test]
fn every_rigid_block_is_rigid() {
    let fixtures = rigid_fixtures();
    assert!(fixtures.len() > 40);
    for f in &fixtures {
        assert_eq!(brute_force_hom_dimension(&f.rep, &f.decomposition).unwrap(), 0, "{}", f.name);
    }
}

#[test]
fn hodge_symmetry_of_fixture_characters() {
    for f in random_fixtures(40, 3) {
        let chi = f.decomposition.hodge_character(&f.rep);
        assert!(chi.satisfies_hodge_symmetry(&f.rep), "{}", f.name);
        assert_eq!(chi.dimension() as usize * 2, f.rep.rank());
    }
}

#[test]
fn isotypic_projectors_are_complete_and_orthogonal() {
    for f in random_fixtures(40, 5) {
        let pieces = isotypic_split(&f.rep, &f.orbits);
        let r = f.rep.rank();
        let mut sum = QMatrix::zeros(r, r);
        for (i, p) in pieces.iter().enumerate() {
            assert_eq!(p.projector.mul(&p.projector), p.projector);
            for (k, q) in pieces.iter().enumerate() {
                if i != k {
                    assert!(p.projector.mul(&q.projector).is_zero());
                }
            }
            sum = sum.add(&p.projector);
        }
        assert_eq!(sum, QMatrix::identity(r));
    }
}

#[test]
fn rigid_type_counts_match_exhaustive_enumeration() {
    let mut checked = 0;
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        let fields: Vec<(SubfieldSpec, FieldTag)> = o.orbits.iter().map(|x| (x.field.clone(), x.tag)).collect();
        // every single field with multiplicity 1 and 2, and all CM fields together
        let mut modules: Vec<Vec<(SubfieldSpec, u32)>> = Vec::new();
        for (f, _) in &fields {
            modules.push(vec![(f.clone(), 1)]);
            modules.push(vec![(f.clone(), 2)]);
        }
        modules.push(fields.iter().filter(|(_, t)| *t == FieldTag::CM).map(|(f, _)| (f.clone(), 1)).collect());
        for m in modules {
            let embeddings: usize = m.iter().map(|(f, _)| f.degree()).sum();
            let types = enumerate_rigid_types(&m);
            let expected: u64 = if m.iter().any(|(f, n)| *n > 0 && f.is_totally_real()) {
                0
            } else {
                m.iter().map(|(f, _)| 1u64 << (f.degree() / 2)).product()
            };
            assert_eq!(types.len() as u64, expected);
            if embeddings <= 12 {
                assert_eq!(brute_force_rigid_type_count(&m), expected, "{} {:?}", g.name(), m.len());
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn symmetric_groups_have_no_rigid_types() {
    for name in ["S3", "S4"] {
        let g = by_name(name).unwrap();
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        for orbit in &o.orbits {
            assert_eq!(orbit.tag, FieldTag::TotallyReal);
            for n in 1..=3 {
                assert!(enumerate_rigid_types(&[(orbit.field.clone(), n)]).is_empty());
            }
        }
        let all: Vec<(SubfieldSpec, u32)> = o.orbits.iter().map(|x| (x.field.clone(), 1)).collect();
        assert!(enumerate_rigid_types(&all).is_empty());
    }
}
