use nalgebra::DMatrix;
use num::complex::Complex64;
use toruskit::arith::rational::{parse_q, to_f64};
use toruskit::arith::{QMatrix, QPoly};
use toruskit::group::library::fixture_groups;
use toruskit::group::{character_table, galois_orbits, FieldTag};
use toruskit::polarize::existence::{MAX_DEGREE, Obstruction, Verdict};
use toruskit::polarize::{character_field_polynomial, polarization_exists, PolarizeError};

/// Durand-Kerner in f64 from points on a circle, then Newton polish.
fn f64_roots(f: &QPoly) -> Vec<Complex64> {
    let c: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let n = c.len() - 1;
    let horner = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut r: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius.sqrt(), 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..2000 {
        for k in 0..n {
            let den = (0..n).filter(|&j| j != k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (r[k] - r[j]));
            let step = horner(r[k]) / den;
            r[k] -= step;
        }
    }
    for z in r.iter_mut() {
        for _ in 0..20 {
            let (mut p, mut d) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &a in c.iter().rev() {
                d = d * *z + p;
                p = p * *z + a;
            }
            if d.norm() > 0.0 {
                *z -= p / d;
            }
        }
    }
    r
}

fn eval(coords: &[f64], z: Complex64) -> Complex64 {
    coords.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Float check of a witness: every root with positive certified sign has
/// Im zeta(r) > 0, and E(x, Jx) > 0 for J acting as i through those roots.
fn check_witness(f: &QPoly, positive: &[usize], zeta: &[String], form: &QMatrix) {
    let roots = f64_roots(f);
    let n = roots.len();
    let zeta: Vec<f64> = zeta.iter().map(|s| to_f64(&parse_q(s).unwrap())).collect();
    // match each positive root index by looking for a root in the upper half plane with positive Im zeta
    let pos: Vec<Complex64> = roots.iter().copied().filter(|r| eval(&zeta, *r).im > 0.0).collect();
    assert_eq!(pos.len(), positive.len());
    assert!(pos.iter().all(|r| eval(&zeta, *r).im > 1e-9));
    let mut phi = DMatrix::<f64>::zeros(n, n);
    for (t, r) in pos.iter().enumerate() {
        let mut p = Complex64::new(1.0, 0.0);
        for i in 0..n {
            phi[(2 * t, i)] = p.re;
            phi[(2 * t + 1, i)] = p.im;
            p *= r;
        }
    }
    let mut rot = DMatrix::<f64>::zeros(n, n);
    for t in 0..n / 2 {
        rot[(2 * t, 2 * t + 1)] = -1.0;
        rot[(2 * t + 1, 2 * t)] = 1.0;
    }
    let j = phi.clone().try_inverse().unwrap() * rot * phi;
    let e = DMatrix::from_fn(n, n, |a, b| to_f64(&form[(a, b)]));
    assert_eq!((&e + e.transpose()).norm(), 0.0);
    let ej = &e * &j;
    assert!(((&ej + ej.transpose()) * 0.5).cholesky().is_some());
}

#[test]
fn character_fields_agree_with_cm_tags() {
    let mut cm = 0;
    let mut real = 0;
    for g in fixture_groups() {
        let t = character_table(&g).unwrap();
        let o = galois_orbits(&t, &g).unwrap();
        for orbit in &o.orbits {
            assert!(matches!(orbit.tag, FieldTag::CM | FieldTag::TotallyReal), "{} {:?}", g.name(), orbit.tag);
            if orbit.degree > MAX_DEGREE {
                continue;
            }
            let f = character_field_polynomial(&orbit.field).unwrap();
            assert_eq!(f.degree(), Some(orbit.degree));
            match polarization_exists(&f, None) {
                Ok(c) => {
                    assert!(c.exists(), "{}: {f}", g.name());
                    assert_eq!(orbit.tag, FieldTag::CM, "{}: {f}", g.name());
                    let w = c.witness.unwrap();
                    check_witness(&f, &c.positive_roots, &w.coordinates, &w.form);
                    cm += 1;
                }
                Err(PolarizeError::NotTotallyImaginary(k)) => {
                    assert_eq!(k, orbit.degree);
                    assert_eq!(orbit.tag, FieldTag::TotallyReal, "{}: {f}", g.name());
                    real += 1;
                }
                Err(e) => panic!("{}: {f}: {e}", g.name()),
            }
        }
    }
    assert!(cm > 20 && real > 20, "{cm} CM and {real} totally real fields");
}

/// For an irreducible quartic x^4 + p x^2 + q x + r the resolvent cubic is
/// y^3 - p y^2 - 4 r y + (4 p r - q^2); with no rational root the Galois group
/// is A4 or S4, so there is no quadratic subfield and the field is not CM.
fn resolvent_has_rational_root(p: i64, q: i64, r: i64) -> bool {
    let c = 4 * p * r - q * q;
    let cubic = |y: i64| y * y * y - p * y * y - 4 * r * y + c;
    if c == 0 {
        return true;
    }
    (1..=c.abs()).filter(|d| c % d == 0).any(|d| cubic(d) == 0 || cubic(-d) == 0)
}

#[test]
fn quartic_without_quadratic_subfield_has_certified_obstruction() {
    assert!(!resolvent_has_rational_root(0, 1, 1));
    let f = QPoly::from_ints(&[1, 1, 0, 0, 1]);
    for s in [[0usize, 1], [0, 3], [1, 2], [2, 3]] {
        let c = polarization_exists(&f, Some(&s)).unwrap();
        assert_eq!(c.verdict, Verdict::Infeasible);
        match c.obstruction.unwrap() {
            Obstruction::ConjugatePairsNotGaloisStable { enclosure, .. } => {
                // the enclosure is a genuine interval strictly between integers
                let lo = to_f64(&enclosure.re_mid) - to_f64(&enclosure.radius);
                let hi = to_f64(&enclosure.re_mid) + to_f64(&enclosure.radius);
                assert!(lo.ceil() > hi.floor());
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn small_quartics_match_the_resolvent_criterion() {
    // every irreducible totally imaginary x^4 + p x^2 + q x + r with small
    // coefficients whose resolvent has no rational root must be infeasible
    let mut checked = 0;
    for p in -3..=3 {
        for q in 1..=3 {
            for r in 1..=4 {
                if resolvent_has_rational_root(p, q, r) {
                    continue;
                }
                let f = QPoly::from_ints(&[r, q, p, 0, 1]);
                match polarization_exists(&f, None) {
                    Ok(c) => {
                        assert_eq!(c.verdict, Verdict::Infeasible, "{f}");
                        checked += 1;
                    }
                    Err(PolarizeError::NotTotallyImaginary(_)) | Err(PolarizeError::ReduciblePolynomial(_)) => {}
                    Err(e) => panic!("{f}: {e}"),
                }
            }
        }
    }
    assert!(checked >= 5, "{checked}");
}

#[test]
fn known_cm_and_non_cm_fields() {
    // Q(zeta_5) with S = {zeta, zeta^2}: upper roots in canonical order
    let phi5 = QPoly::from_ints(&[1, 1, 1, 1, 1]);
    let c = polarization_exists(&phi5, Some(&[0, 1])).unwrap();
    assert!(c.exists());
    let w = c.witness.unwrap();
    check_witness(&phi5, &[0, 1], &w.coordinates, &w.form);
    // Q(sqrt(-(5 + 2 sqrt 5))) is cyclic quartic and CM
    assert!(polarization_exists(&QPoly::from_ints(&[5, 0, 5, 0, 1]), None).unwrap().exists());
    // Q(i, sqrt 2)
    assert!(polarization_exists(&QPoly::from_ints(&[1, 0, 0, 0, 1]), None).unwrap().exists());
    // Q(sqrt(1 + i)): its only quadratic subfield is Q(i), so it is not CM
    assert!(resolvent_has_rational_root(-2, 0, 2));
    let c = polarization_exists(&QPoly::from_ints(&[2, 0, -2, 0, 1]), None).unwrap();
    assert_eq!(c.verdict, Verdict::Infeasible);
    // degree 6: Q(zeta_7) and Q(zeta_9)
    assert!(polarization_exists(&QPoly::from_ints(&[1, 1, 1, 1, 1, 1, 1]), None).unwrap().exists());
    assert!(polarization_exists(&QPoly::from_ints(&[1, 0, 0, 1, 0, 0, 1]), None).unwrap().exists());
}
