//! Acceptance suite. Every criterion runs inside one test so that the report
//! prints as a single block, one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num::{BigInt, Integer, Zero};
use toruskit::arith::rational::to_f64;
use toruskit::arith::{CyclotomicField, CyclotomicNumber, QMatrix, QPoly, Sign, SubfieldSpec, Q};
use toruskit::deform::{find_projective_neighbor, random_torus, DeformTolerances};
use toruskit::group::idempotent::{algebra_mul, algebra_mul_cyclo, algebra_one};
use toruskit::group::library::{by_name, fixture_groups};
use toruskit::group::{central_idempotent, character_table, galois_orbits, FieldTag, FiniteGroup};
use toruskit::hodge::decomposition::{brute_force_hom_dimension, spec_from_decomposition};
use toruskit::hodge::fixtures::{random_fixtures, rigid_fixtures};
use toruskit::hodge::symbolic::brute_force_rigid_type_count;
use toruskit::hodge::{enumerate_rigid_types, isotypic_split, rigidity_by_centre, rigidity_by_character, IntegralRepresentation};
use toruskit::polarize::existence::{character_field_polynomial, Obstruction, Verdict};
use toruskit::polarize::{assemble_polarization, polarization_exists, HodgeData, PolarizeError, PolarizeOptions};

struct Outcome {
    number: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn criterion(number: u32, name: &'static str, limit: Option<Duration>, body: impl FnOnce() -> String) -> Outcome {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, msg)
        }
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; runtime {:.1}s exceeds {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64());
        }
    }
    Outcome { number, name, passed, detail, elapsed }
}

// ---------------------------------------------------------------- criterion 1

fn cyc_sum(field: &std::sync::Arc<CyclotomicField>, terms: impl Iterator<Item = CyclotomicNumber>) -> CyclotomicNumber {
    terms.fold(CyclotomicNumber::zero(field), |acc, x| acc.try_add(&x).unwrap())
}

/// Class sizes and centralizer orders recomputed from the multiplication table.
fn class_sizes(g: &FiniteGroup, reps: &[usize]) -> Vec<usize> {
    reps.iter()
        .map(|&r| {
            let mut orbit: Vec<usize> = (0..g.order()).map(|x| g.mul(g.mul(x, r), g.inv(x))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            orbit.len()
        })
        .collect()
}

fn character_tables() -> String {
    let groups = fixture_groups();
    let mut small = 0;
    for g in &groups {
        let t = character_table(g).unwrap_or_else(|e| panic!("{}: {e}", g.name()));
        let n = g.order();
        let k = t.size();
        assert_eq!(k, t.classes.count(), "{}: table is not square", g.name());
        let sizes = class_sizes(g, &t.classes.representatives);
        assert_eq!(sizes.iter().sum::<usize>(), n, "{}", g.name());
        let f = &t.field;
        // rows: sum_c |C| chi(c) conj(psi(c)) = |G| delta
        for a in 0..k {
            for b in 0..k {
                let s = cyc_sum(f, (0..k).map(|c| {
                    t.values[a][c].try_mul(&t.values[b][c].conjugate()).unwrap().scale(&Q::from_integer(BigInt::from(sizes[c])))
                }));
                let expected = if a == b { n as i64 } else { 0 };
                assert_eq!(s, CyclotomicNumber::from_int(f, expected), "{}: rows {a},{b}", g.name());
            }
        }
        // columns: sum_chi chi(c) conj(chi(d)) = |C_G(c)| delta
        for c in 0..k {
            for d in 0..k {
                let s = cyc_sum(f, (0..k).map(|a| t.values[a][c].try_mul(&t.values[a][d].conjugate()).unwrap()));
                let expected = if c == d { (n / sizes[c]) as i64 } else { 0 };
                assert_eq!(s, CyclotomicNumber::from_int(f, expected), "{}: columns {c},{d}", g.name());
            }
        }
        let squares: u64 = t.degrees.iter().map(|d| d * d).sum();
        assert_eq!(squares as usize, n, "{}", g.name());
        for (a, d) in t.degrees.iter().enumerate() {
            assert_eq!(t.values[a][t.classes.class_of[0]], CyclotomicNumber::from_int(f, *d as i64));
        }
        if n <= 16 {
            small += 1;
        }
    }
    assert!(by_name("S4").is_some() && by_name("Q8").is_some());
    assert_eq!(small, 42, "groups of order at most 16");
    format!("{} groups", groups.len())
}

// ---------------------------------------------------------------- criterion 2

fn idempotents() -> String {
    let mut count = 0;
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let n = g.order();
        let es: Vec<Vec<CyclotomicNumber>> = (0..t.size()).map(|c| central_idempotent(&t, &g, c)).collect();
        let zero: Vec<CyclotomicNumber> = (0..n).map(|_| CyclotomicNumber::zero(&t.field)).collect();
        let mut total = zero.clone();
        for a in 0..es.len() {
            for b in 0..es.len() {
                let p = algebra_mul_cyclo(&g, &es[a], &es[b]);
                if a == b {
                    assert_eq!(p, es[a], "{}: e_{a}", g.name());
                } else {
                    assert_eq!(p, zero, "{}: e_{a} e_{b}", g.name());
                }
            }
            total = total.iter().zip(&es[a]).map(|(x, y)| x.try_add(y).unwrap()).collect();
        }
        let one: Vec<CyclotomicNumber> =
            algebra_one(n).into_iter().map(|q| CyclotomicNumber::from_rational(&t.field, q)).collect();
        assert_eq!(total, one, "{}: sum of e_chi", g.name());

        let orbits = galois_orbits(&t, &g).unwrap();
        let mut rational_total = vec![Q::zero(); n];
        for (i, o) in orbits.orbits.iter().enumerate() {
            // e_K(chi) is the sum of the e_chi over the Galois orbit and has rational coefficients
            let summed: Vec<CyclotomicNumber> = (0..n)
                .map(|x| cyc_sum(&t.field, o.members.iter().map(|&m| es[m][x].clone())))
                .collect();
            for (x, s) in summed.iter().enumerate() {
                assert_eq!(s.to_rational().as_ref(), Some(&o.idempotent[x]), "{}: orbit {i}", g.name());
            }
            assert_eq!(algebra_mul(&g, &o.idempotent, &o.idempotent), o.idempotent);
            for o2 in orbits.orbits.iter().skip(i + 1) {
                assert!(algebra_mul(&g, &o.idempotent, &o2.idempotent).iter().all(Q::is_zero));
            }
            for (acc, c) in rational_total.iter_mut().zip(&o.idempotent) {
                *acc += c;
            }
            count += 1;
        }
        assert_eq!(rational_total, algebra_one(n), "{}: sum of e_K", g.name());
    }
    format!("{count} rational idempotents")
}

// ---------------------------------------------------------------- criterion 3

fn centre_reduction() -> String {
    let fixtures = random_fixtures(200, 20_231);
    let mut rigid = 0;
    for f in &fixtures {
        let g = f.rep.group();
        assert!(g.order() <= 16 && f.rep.rank() <= 8, "{}", f.name);
        let table = character_table(g).unwrap();
        let orbits = galois_orbits(&table, g).unwrap();
        let chi = f.decomposition.hodge_character(&f.rep);
        let by_character = rigidity_by_character(&chi, &table).unwrap().hom_dimension;
        let pieces = isotypic_split(&f.rep, &orbits);
        let spec = spec_from_decomposition(&f.rep, &table, &orbits, &pieces, &f.decomposition);
        let by_centre = rigidity_by_centre(&spec).unwrap().is_rigid;
        let brute = brute_force_hom_dimension(&f.rep, &f.decomposition).unwrap();
        assert_eq!(by_character, brute, "{}: character formula against brute force", f.name);
        assert_eq!(by_centre, brute == 0, "{}: centre criterion against brute force", f.name);
        if brute == 0 {
            rigid += 1;
        }
    }
    format!("{} fixtures, {rigid} rigid", fixtures.len())
}

// ---------------------------------------------------------------- criterion 4

fn enclosure_avoids_integers(o: &Obstruction) -> bool {
    match o {
        Obstruction::ConjugatePairsNotGaloisStable { enclosure, .. } => {
            let lo = to_f64(&enclosure.re_mid) - to_f64(&enclosure.radius);
            let hi = to_f64(&enclosure.re_mid) + to_f64(&enclosure.radius);
            lo.ceil() > hi.floor()
        }
        _ => false,
    }
}

fn cm_classification() -> String {
    let (mut cm, mut real) = (0, 0);
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        for orbit in &o.orbits {
            assert!(matches!(orbit.tag, FieldTag::CM | FieldTag::TotallyReal), "{}: {:?}", g.name(), orbit.tag);
            // a field is CM exactly when complex conjugation acts nontrivially on the character values
            let has_imaginary = orbit.members.iter().any(|&m| t.values[m].iter().any(|v| !v.is_real()));
            assert_eq!(orbit.tag == FieldTag::CM, has_imaginary, "{}", g.name());
            let f = character_field_polynomial(&orbit.field).unwrap();
            match polarization_exists(&f, None) {
                Ok(c) => {
                    assert!(c.exists() && orbit.tag == FieldTag::CM, "{}: {f}", g.name());
                    cm += 1;
                }
                Err(PolarizeError::NotTotallyImaginary(_)) => {
                    assert_eq!(orbit.tag, FieldTag::TotallyReal, "{}: {f}", g.name());
                    real += 1;
                }
                Err(e) => panic!("{}: {f}: {e}", g.name()),
            }
        }
    }
    let quartic = QPoly::from_ints(&[1, 1, 0, 0, 1]);
    let c = polarization_exists(&quartic, None).unwrap();
    assert!(!c.exists());
    assert_eq!(c.verdict, Verdict::Infeasible);
    let o = c.obstruction.expect("an infeasibility certificate");
    assert!(enclosure_avoids_integers(&o), "{o:?}");
    format!("{cm} CM and {real} totally real fields; x^4+x+1 infeasible")
}

// ---------------------------------------------------------------- criterion 5

fn primitive(e: &QMatrix) -> bool {
    e.is_integral() && e.entries().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer())) == BigInt::from(1)
}

fn polarized_rigid_fixtures() -> String {
    let opts = PolarizeOptions::default();
    let fixtures = rigid_fixtures();
    for f in &fixtures {
        let p = assemble_polarization(&f.rep, HodgeData::Exact(&f.decomposition), &opts)
            .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        let c = &p.certificate;
        assert!(c.alternating && primitive(&p.matrix), "{}", f.name);
        assert_eq!((c.relation_one.method, c.relation_one.residual), ("exact", 0.0), "{}", f.name);
        assert_eq!(c.relation_two.method, "sylvester-minors", "{}", f.name);
        assert_eq!(c.relation_two.minor_signs.len(), f.decomposition.n(), "{}", f.name);
        assert!(c.relation_two.minor_signs.iter().all(|s| *s == Sign::Positive), "{}", f.name);
        assert_eq!(c.rosati, Some(true), "{}", f.name);
        // floating point cross-check against the numeric complex structure
        let e = DMatrix::from_fn(p.rank, p.rank, |a, b| to_f64(&p.matrix[(a, b)]));
        let j = &f.j.j;
        assert!((j.transpose() * &e * j - &e).norm() < 1e-9 * e.norm(), "{}", f.name);
        let ej = &e * j;
        assert!(((&ej + ej.transpose()) * 0.5).cholesky().is_some(), "{}", f.name);
    }
    let rep = IntegralRepresentation::from_generator_matrices("Z4", 2, &[vec![vec![0, -1], vec![1, 0]]]).unwrap();
    let table = character_table(rep.group()).unwrap();
    let i = rep.group().generators()[0];
    // V^{1,0} is the eigenline where the generator acts by i
    let chosen: Vec<usize> = (0..table.size())
        .filter(|&c| table.value(c, i) == &CyclotomicNumber::zeta_pow(&table.field, table.conductor() as i64 / 4))
        .collect();
    let dec = toruskit::hodge::decomposition::HodgeDecomposition::from_characters(&rep, &table, &chosen).unwrap();
    let p = assemble_polarization(&rep, HodgeData::Exact(&dec), &opts).unwrap();
    assert_eq!(p.matrix, QMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));
    format!("{} rigid fixtures; Gaussian form [[0,1],[-1,0]]", fixtures.len())
}

// ---------------------------------------------------------------- criterion 6

fn enumeration_counts() -> String {
    let mut checked = 0;
    let mut total = 0;
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        let fields: Vec<SubfieldSpec> = o.orbits.iter().map(|x| x.field.clone()).collect();
        let mut modules: Vec<Vec<(SubfieldSpec, u32)>> = Vec::new();
        for f in &fields {
            for n in 1..=2 {
                modules.push(vec![(f.clone(), n)]);
            }
        }
        modules.push(fields.iter().map(|f| (f.clone(), 1)).collect());
        modules.push(fields.iter().filter(|f| !f.is_totally_real()).map(|f| (f.clone(), 1)).collect());
        for m in modules {
            let embeddings: usize = m.iter().map(|(f, _)| f.degree()).sum();
            let expected: u64 = if m.iter().any(|(f, n)| *n > 0 && f.is_totally_real()) {
                0
            } else {
                m.iter().map(|(f, _)| 1u64 << (f.degree() / 2)).product()
            };
            assert_eq!(enumerate_rigid_types(&m).len() as u64, expected, "{}", g.name());
            total += 1;
            if embeddings <= 12 {
                assert_eq!(brute_force_rigid_type_count(&m), expected, "{}", g.name());
                checked += 1;
            }
        }
    }
    let zeta5 = SubfieldSpec::fixed_by(&CyclotomicField::new(5), &[1]);
    assert_eq!(enumerate_rigid_types(&[(zeta5.clone(), 1)]).len(), 4);
    assert_eq!(brute_force_rigid_type_count(&[(zeta5, 1)]), 4);
    for name in ["S3", "S4"] {
        let g = by_name(name).unwrap();
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        let all: Vec<(SubfieldSpec, u32)> = o.orbits.iter().map(|x| (x.field.clone(), 1)).collect();
        assert!(enumerate_rigid_types(&all).is_empty(), "{name}");
        for x in &o.orbits {
            for n in 1..=3 {
                assert!(enumerate_rigid_types(&[(x.field.clone(), n)]).is_empty(), "{name}");
            }
        }
    }
    format!("{total} modules, {checked} checked by brute force")
}

// ---------------------------------------------------------------- criterion 7

fn deformation_density() -> String {
    let tol = DeformTolerances::default();
    let mut tori = 0;
    for rank in [4, 6] {
        for seed in 0..20 {
            let (rep, j) = random_torus(rank, 1000 * rank as u64 + seed);
            let mut last = f64::INFINITY;
            for den in [16, 64, 256] {
                let r = find_projective_neighbor(&rep, &j, den, 1.0, &tol)
                    .unwrap_or_else(|e| panic!("rank {rank} seed {seed} denominator {den}: {e}"));
                assert!(r.residual < 1e-10, "rank {rank} seed {seed}: residual {}", r.residual);
                assert!(r.positivity_margin > 1e-8, "rank {rank} seed {seed}: margin {}", r.positivity_margin);
                assert!(r.distance <= last, "rank {rank} seed {seed}: {} after {last}", r.distance);
                last = r.distance;
            }
            tori += 1;
        }
    }
    let opts = PolarizeOptions::default();
    let fixtures = rigid_fixtures();
    for f in &fixtures {
        let exact = assemble_polarization(&f.rep, HodgeData::Exact(&f.decomposition), &opts).is_ok();
        let r = find_projective_neighbor(&f.rep, &f.j, 256, 1.0, &tol).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert_eq!(r.distance, 0.0, "{}", f.name);
        assert_eq!(r.exact_certificate.is_some(), exact, "{}: {:?}", f.name, r.exact_error);
    }
    format!("{tori} random tori, {} rigid fixtures", fixtures.len())
}

// ---------------------------------------------------------------- criterion 8

fn run_binary(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Process::new(env!("CARGO_BIN_EXE_toruskit")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn determinism() -> String {
    let runs: [&[&str]; 8] = [
        &["analyze", "--fixture", "s4"],
        &["analyze", "--fixture", "q8"],
        &["rigidity", "--fixture", "eisenstein"],
        &["enumerate-rigid", "--fixture", "zeta5_module"],
        &["polarize", "--fixture", "gaussian"],
        &["polarize", "--fixture", "quartic"],
        &["deform", "--fixture", "torus4"],
        &["selftest"],
    ];
    for args in runs {
        let mut with_seed = args.to_vec();
        with_seed.extend(["--seed", "4242"]);
        let first = run_binary(&with_seed);
        let second = run_binary(&with_seed);
        assert_eq!(first.0, second.0, "{args:?}: exit status differs");
        assert!(!first.1.is_empty(), "{args:?}: empty report");
        assert!(first.1 == second.1, "{args:?}: reports differ");
    }
    format!("{} commands run twice", runs.len())
}

#[test]
fn acceptance() {
    let minute = Duration::from_secs(60);
    let outcomes = [
        criterion(1, "character tables", Some(minute), character_tables),
        criterion(2, "central idempotents", None, idempotents),
        criterion(3, "centre reduction", Some(5 * minute), centre_reduction),
        criterion(4, "CM classification", None, cm_classification),
        criterion(5, "polarizations of rigid fixtures", None, polarized_rigid_fixtures),
        criterion(6, "rigid type counts", None, enumeration_counts),
        criterion(7, "projective neighbours", Some(5 * minute), deformation_density),
        criterion(8, "deterministic reports", None, determinism),
    ];
    println!();
    for o in &outcomes {
        println!(
            "criterion {} {:<32} {} ({:.1}s) {}",
            o.number,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.number).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
