//! Existence of a polarization for a number field F = Q[x]/(f) acting on
//! F tensor R with a prescribed set S of V^{1,0}-side embeddings.
//!
//! F is CM exactly when pairing every root with its complex conjugate is
//! compatible with the Galois action, i.e. when x -> conj(x) is induced by a
//! polynomial c with rational coefficients. Either such a c is found and
//! verified exactly, or a symmetric function of the conjugate pairs is
//! certified to be a non-integer (so no Galois-stable pairing exists).

use std::collections::BTreeMap;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num::{BigInt, Integer, One, Signed, Zero};
use serde::Serialize;

use super::assemble::{PolarizationCertificate, RelationOneCheck, RelationTwoCheck};
use super::roots::{eval_q_poly, isolate_roots, isolate_roots_at, RootIsolation};
use super::zeta::{primitive_matrix, MAX_ZETA_DENOMINATOR};
use super::PolarizeError;
use crate::arith::ball::{Ball, CertifiedComplex};
use crate::arith::lattice::primitive_integer_vector;
use crate::arith::poly::characteristic_polynomial;
use crate::arith::rational::{best_rational, fmt_q, reconstruct, to_f64};
use crate::arith::{CyclotomicNumber, QMatrix, QPoly, Sign, SubfieldSpec, Q};

pub const MAX_DEGREE: usize = 16;

const INVOLUTION_PRECISIONS: [u32; 3] = [256, 512, 1024];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExistsWithWitness,
    Infeasible,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// S holds both roots of a conjugate pair; Im s_a(x) + Im s_b(x) = 0 for every x.
    ConjugatePairConflict { first: usize, second: usize, identity: String },
    /// A coefficient of prod_k (y - g(r_k, conj r_k)) over the upper roots is
    /// certified to lie strictly between two consecutive integers.
    ConjugatePairsNotGaloisStable {
        function: String,
        coefficient: usize,
        enclosure: CertifiedComplex,
        identity: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// zeta in the power basis 1, x, ..., x^{n-1}
    pub coordinates: Vec<String>,
    /// certified sign of Im of zeta at every root
    pub signs: BTreeMap<usize, Sign>,
    pub lp_slack: f64,
    /// c with c(r) = conj(r) at every root
    pub involution: Vec<String>,
    /// Tr(zeta x c(y)) in the power basis, made integral and primitive
    pub form: QMatrix,
    pub verification: PolarizationCertificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceCertificate {
    pub polynomial: String,
    pub degree: usize,
    pub roots: Vec<CertifiedComplex>,
    pub positive_roots: Vec<usize>,
    pub verdict: Verdict,
    /// dimension of {x : conj(x) = -x}, when conjugation is an automorphism
    pub imaginary_dimension: Option<usize>,
    pub witness: Option<Witness>,
    pub obstruction: Option<Obstruction>,
}

impl ExistenceCertificate {
    pub fn exists(&self) -> bool {
        self.verdict == Verdict::ExistsWithWitness
    }
}

fn validate(f: &QPoly) -> Result<Vec<BigInt>, PolarizeError> {
    if !f.is_monic_integral() {
        return Err(PolarizeError::NotMonicIntegral);
    }
    let n = f.degree().unwrap_or(0);
    if n == 0 || n > MAX_DEGREE {
        return Err(PolarizeError::DegreeOutOfRange(n));
    }
    if f.gcd(&f.derivative()).degree() != Some(0) {
        return Err(PolarizeError::ReduciblePolynomial(format!("{f} has a repeated factor")));
    }
    let real = f.count_real_roots();
    if real > 0 {
        return Err(PolarizeError::NotTotallyImaginary(real));
    }
    Ok(f.integer_coeffs().expect("monic integral"))
}

fn ball_poly_mul(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
    let bits = a[0].bits;
    let mut out = vec![Ball::zero(bits); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// prod over `roots` of (y - value), as ball coefficients, lowest first.
fn product_polynomial(values: &[Ball], bits: u32) -> Vec<Ball> {
    let one = Ball::exact_int(&BigInt::one(), bits);
    values.iter().fold(vec![one.clone()], |acc, v| ball_poly_mul(&acc, &[v.neg(), one.clone()]))
}

fn nearest_integer(b: &Ball) -> BigInt {
    (&b.re + (BigInt::one() << (b.bits as usize - 1))) >> (b.bits as usize)
}

/// Interval of the real part contains no integer.
fn excludes_integers(b: &Ball) -> bool {
    let unit = BigInt::one() << (b.bits as usize);
    let lo = &b.re - &b.rad;
    let hi = &b.re + &b.rad;
    lo.div_ceil(&unit) > hi.div_floor(&unit)
}

/// A proper factor, by testing every union of conjugate pairs of at most
/// half the degree. Factors of a polynomial without real roots are unions of
/// conjugate pairs, so this is exhaustive.
fn find_factor(f: &QPoly, roots: &RootIsolation) -> Option<QPoly> {
    let h = roots.degree() / 2;
    let bits = roots.bits;
    let quadratics: Vec<Vec<Ball>> = (0..h)
        .map(|k| {
            let r = &roots.balls[k];
            let c = r.conj();
            vec![r.mul(&c), r.add(&c).neg(), Ball::exact_int(&BigInt::one(), bits)]
        })
        .collect();
    for mask in 1u32..(1 << h) {
        let size = mask.count_ones() as usize;
        if 2 * size > h {
            continue;
        }
        let mut g = vec![Ball::exact_int(&BigInt::one(), bits)];
        for (k, q) in quadratics.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g = ball_poly_mul(&g, q);
            }
        }
        if g.iter().any(excludes_integers) {
            continue;
        }
        let cand = QPoly::from_bigints(&g.iter().map(nearest_integer).collect::<Vec<_>>());
        if f.rem(&cand).is_zero() {
            return Some(cand);
        }
    }
    None
}

fn pair_obstruction(roots: &RootIsolation) -> Option<Obstruction> {
    let h = roots.degree() / 2;
    let upper = &roots.balls[..h];
    let sums: Vec<Ball> = upper.iter().map(|r| r.add(&r.conj())).collect();
    let norms: Vec<Ball> = upper.iter().map(|r| r.mul(&r.conj())).collect();
    for (name, values) in [("r + conj(r)", sums), ("r conj(r)", norms)] {
        let poly = product_polynomial(&values, roots.bits);
        if let Some((i, b)) = poly.iter().enumerate().find(|(_, b)| excludes_integers(b)) {
            return Some(Obstruction::ConjugatePairsNotGaloisStable {
                function: name.to_string(),
                coefficient: i,
                enclosure: b.to_certified(),
                identity: format!(
                    "if conjugation were a field automorphism, prod_k (y - ({name})) over the upper roots would \
                     have integer coefficients; the coefficient of y^{i} is not an integer"
                ),
            });
        }
    }
    None
}

fn reduce(p: &QPoly, f: &QPoly) -> QPoly {
    p.rem(f)
}

/// Exact polynomial c of degree < n with c(r) = conj(r) at every root, if one exists.
fn conjugation_involution(f: &QPoly, coeffs: &[BigInt]) -> Result<Option<QPoly>, PolarizeError> {
    let n = coeffs.len() - 1;
    let h = n / 2;
    let disc = f.discriminant().numer().abs();
    for bits in INVOLUTION_PRECISIONS {
        let roots = isolate_roots_at(coeffs, bits)?;
        let one = Ball::exact_int(&BigInt::one(), roots.bits);
        let den = BigInt::one() << (roots.bits as usize);
        let to_q = |x: &BigInt| Q::new(x.clone(), den.clone());
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for r in &roots.balls[..h] {
            let mut p = one.clone();
            let mut re_row = Vec::with_capacity(n);
            let mut im_row = Vec::with_capacity(n);
            for _ in 0..n {
                re_row.push(to_q(&p.re));
                im_row.push(to_q(&p.im));
                p = p.mul(r);
            }
            rows.push(re_row);
            rhs.push(vec![to_q(&r.re)]);
            rows.push(im_row);
            rhs.push(vec![-to_q(&r.im)]);
        }
        let a = QMatrix::from_rows(rows);
        let Some(sol) = a.solve(&QMatrix::from_rows(rhs)) else {
            continue;
        };
        let c = QPoly::new((0..n).map(|i| reconstruct(&sol[(i, 0)], &disc)).collect());
        if verify_involution(f, &c, &roots) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn verify_involution(f: &QPoly, c: &QPoly, roots: &RootIsolation) -> bool {
    if !reduce(&f.compose(c), f).is_zero() || reduce(&c.compose(c), f) != QPoly::monomial(1) {
        return false;
    }
    (0..roots.degree()).all(|k| {
        let image = eval_q_poly(c.coeffs(), &roots.balls[k]);
        let target = roots.conjugate_index(k);
        (0..roots.degree()).all(|j| image.overlaps(&roots.balls[j]) == (j == target))
    })
}

/// Matrix of x -> p(x) x^j reduced mod f, columns j = 0..n-1, in the power basis.
fn power_basis_columns(p: &QPoly, f: &QPoly, n: usize) -> Vec<Vec<Q>> {
    let mut cur = QPoly::one();
    (0..n)
        .map(|_| {
            let col = (0..n).map(|i| cur.coeff(i)).collect();
            cur = reduce(&cur.mul(p), f);
            col
        })
        .collect()
}

fn field_trace(x: &QPoly, power_traces: &[Q]) -> Q {
    x.coeffs().iter().zip(power_traces).map(|(a, t)| a * t).sum()
}

fn power_traces(f: &QPoly, n: usize) -> Vec<Q> {
    let x = QPoly::monomial(1);
    let comp = QMatrix::from_columns(
        &(0..n).map(|j| (0..n).map(|i| reduce(&x.mul(&QPoly::monomial(j)), f).coeff(i)).collect()).collect::<Vec<_>>(),
    );
    let mut p = QMatrix::identity(n);
    (0..n)
        .map(|_| {
            let t = p.trace();
            p = p.mul(&comp);
            t
        })
        .collect()
}

fn validate_embedding_set(s: &[usize], n: usize) -> Result<(), PolarizeError> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() || s.len() * 2 != n || s.iter().any(|&k| k >= n) {
        return Err(PolarizeError::InvalidEmbeddingSet(format!("{s:?}")));
    }
    Ok(())
}

/// Decides whether F = Q[x]/(f) carries an imaginary zeta with Im s_k(zeta) > 0
/// for the roots k in `s` (default: the upper half plane roots) compatible
/// with a polarization, and returns a witness or an exact obstruction.
pub fn polarization_exists(f: &QPoly, s: Option<&[usize]>) -> Result<ExistenceCertificate, PolarizeError> {
    let coeffs = validate(f)?;
    let n = coeffs.len() - 1;
    let h = n / 2;
    let roots = isolate_roots(&coeffs)?;
    if let Some(g) = find_factor(f, &roots) {
        return Err(PolarizeError::ReduciblePolynomial(format!("{g} divides {f}")));
    }
    let s: Vec<usize> = match s {
        Some(s) => {
            validate_embedding_set(s, n)?;
            s.to_vec()
        }
        None => (0..h).collect(),
    };
    let mut cert = ExistenceCertificate {
        polynomial: f.to_string(),
        degree: n,
        roots: roots.enclosures(),
        positive_roots: s.clone(),
        verdict: Verdict::Infeasible,
        imaginary_dimension: None,
        witness: None,
        obstruction: None,
    };
    if let Some(&a) = s.iter().find(|&&a| s.contains(&roots.conjugate_index(a))) {
        let b = roots.conjugate_index(a);
        cert.obstruction = Some(Obstruction::ConjugatePairConflict {
            first: a.min(b),
            second: a.max(b),
            identity: format!("root {b} is the conjugate of root {a}, so Im s_{a}(x) + Im s_{b}(x) = 0 for every x"),
        });
        return Ok(cert);
    }
    if let Some(ob) = pair_obstruction(&roots) {
        cert.obstruction = Some(ob);
        return Ok(cert);
    }
    let c = conjugation_involution(f, &coeffs)?.ok_or(PolarizeError::CertificationFailed)?;
    let cmat = QMatrix::from_columns(&power_basis_columns(&c, f, n));
    // columns of cmat are c(x)^j; conj(sum a_j x^j) = sum a_j c(x)^j
    let imaginary: Vec<Vec<Q>> = cmat
        .add(&QMatrix::identity(n))
        .nullspace()
        .iter()
        .map(|v| primitive_integer_vector(v).into_iter().map(Q::from_integer).collect())
        .collect();
    if imaginary.len() != h {
        return Err(PolarizeError::CertificationFailed);
    }
    cert.imaginary_dimension = Some(h);
    let (zeta, slack, signs) = find_witness(&roots, &s, &imaginary)?;
    let zpoly = QPoly::new(zeta.clone());
    let traces = power_traces(f, n);
    let conj_cols = power_basis_columns(&c, f, n);
    let e = QMatrix::from_fn(n, n, |i, j| {
        let x = reduce(&zpoly.mul(&QPoly::monomial(i)), f);
        let y = QPoly::new(conj_cols[j].clone());
        field_trace(&reduce(&x.mul(&y), f), &traces)
    });
    let verification = verify_trace_form(&e, &roots, &s, &zeta)?;
    let e = primitive_matrix(&e);
    cert.verdict = Verdict::ExistsWithWitness;
    cert.witness = Some(Witness {
        coordinates: zeta.iter().map(fmt_q).collect(),
        signs,
        lp_slack: slack,
        involution: c.coeffs().iter().map(fmt_q).collect(),
        form: e,
        verification,
    });
    Ok(cert)
}

/// Certificate for E = q Tr(zeta x c(y)) with q > 0 rational. In the
/// coordinates s_k(x), k in S, E(x, Jx) = sum_k 2 q Im s_k(zeta) |s_k(x)|^2,
/// so relation I holds identically and relation II reduces to the certified
/// sign table of zeta on S.
fn verify_trace_form(
    trace_form: &QMatrix,
    roots: &RootIsolation,
    s: &[usize],
    zeta: &[Q],
) -> Result<PolarizationCertificate, PolarizeError> {
    if trace_form.transpose() != trace_form.neg() || trace_form.is_zero() {
        return Err(PolarizeError::NotAlternating);
    }
    let e = primitive_matrix(trace_form);
    let (pos, _) = trace_form.entries().enumerate().find(|(_, x)| !x.is_zero()).expect("nonzero");
    let scale = e.entries().nth(pos).expect("same shape") / trace_form.entries().nth(pos).expect("nonzero");
    if !scale.is_positive() || trace_form.scale(&scale) != e {
        return Err(PolarizeError::CertificationFailed);
    }
    let mut minor_signs = Vec::with_capacity(s.len());
    let mut least = f64::INFINITY;
    for &k in s {
        let v = eval_q_poly(zeta, &roots.balls[k]);
        let sign = match v.imag_sign() {
            Some(1) => Sign::Positive,
            Some(_) => Sign::Negative,
            None => Sign::Zero,
        };
        minor_signs.push(sign);
        if sign != Sign::Positive {
            return Err(PolarizeError::NotPositiveDefinite { witness: Vec::new(), value: v.im_f64() });
        }
        least = least.min(2.0 * v.im_f64() * to_f64(&scale));
    }
    Ok(PolarizationCertificate {
        alternating: true,
        relation_one: RelationOneCheck { method: "trace-form-identity", residual: 0.0, tolerance: None },
        relation_two: RelationTwoCheck { method: "sign-table", min_eigenvalue: least, tolerance: None, minor_signs },
        rosati: None,
        g_invariant: None,
    })
}

type WitnessParts = (Vec<Q>, f64, BTreeMap<usize, Sign>);

/// Max-slack LP over the imaginary subspace, rationalized and certified.
fn find_witness(roots: &RootIsolation, s: &[usize], basis: &[Vec<Q>]) -> Result<WitnessParts, PolarizeError> {
    let rows: Vec<Vec<f64>> =
        s.iter().map(|&k| basis.iter().map(|w| eval_q_poly(w, &roots.balls[k]).im_f64()).collect()).collect();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = basis.iter().map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let slack = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for row in &rows {
        let mut expr: Vec<(minilp::Variable, f64)> = vars.iter().copied().zip(row.iter().copied()).collect();
        expr.push((slack, -1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().map_err(|_| PolarizeError::CertificationFailed)?;
    if sol.objective() <= 1e-12 {
        return Err(PolarizeError::CertificationFailed);
    }
    let y: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
    let n = roots.degree();
    let mut den = 16u64;
    while den <= MAX_ZETA_DENOMINATOR {
        let yq: Vec<Q> = y.iter().map(|&v| best_rational(v, den)).collect();
        let mut zeta = vec![Q::zero(); n];
        for (c, w) in yq.iter().zip(basis) {
            for (z, x) in zeta.iter_mut().zip(w) {
                *z += c * x;
            }
        }
        let zeta: Vec<Q> = primitive_integer_vector(&zeta).into_iter().map(Q::from_integer).collect();
        if zeta.iter().any(|x| !x.is_zero()) {
            let mut signs = BTreeMap::new();
            for k in 0..n {
                let v = eval_q_poly(&zeta, &roots.balls[k]);
                signs.insert(
                    k,
                    match v.imag_sign() {
                        Some(1) => Sign::Positive,
                        Some(_) => Sign::Negative,
                        None => Sign::Zero,
                    },
                );
            }
            if s.iter().all(|k| signs[k] == Sign::Positive) {
                return Ok((zeta, sol.objective(), signs));
            }
        }
        den *= 2;
    }
    Err(PolarizeError::CertificationFailed)
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// Characteristic polynomial of a primitive algebraic integer of a subfield
/// of a cyclotomic field, built from small integer combinations of relative
/// traces of roots of unity.
pub fn character_field_polynomial(field: &SubfieldSpec) -> Result<QPoly, PolarizeError> {
    let k = field.ambient();
    let m = k.conductor();
    let fixing = field.fixing_subgroup();
    // relative traces of the powers of zeta_m: algebraic integers spanning F
    let mut periods: Vec<CyclotomicNumber> = Vec::new();
    for j in 1..m {
        let mut theta = CyclotomicNumber::zero(k);
        for &h in fixing {
            theta = &theta + &CyclotomicNumber::zeta_pow(k, (j as u64 * h as u64 % m as u64) as i64);
        }
        if !theta.is_rational() && !periods.contains(&theta) {
            periods.push(theta);
        }
    }
    if periods.is_empty() {
        return Ok(QPoly::from_ints(&[-1, 1]));
    }
    // single periods, then one period plus a small multiple of another, then dense combinations
    let d = periods.len();
    let mut candidates: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i)).collect();
    for i in 1..d {
        for k in [1, -1, 2, -2, 3] {
            let mut c = unit(d, 0);
            c[i] = k;
            candidates.push(c);
        }
    }
    candidates.extend((1..12u32).map(|t| (0..d).map(|i| (i as i64 + 1).pow(t)).collect()));
    for c in candidates {
        let mut x = CyclotomicNumber::zero(k);
        for (ci, p) in c.iter().zip(&periods) {
            x = &x + &p.scale(&Q::from_integer(BigInt::from(*ci)));
        }
        let p = characteristic_polynomial(&field.multiplication_matrix(&x));
        if p.gcd(&p.derivative()).degree() == Some(0) {
            return Ok(p);
        }
    }
    Err(PolarizeError::CertificationFailed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integers_exist_with_i() {
        let c = polarization_exists(&QPoly::from_ints(&[1, 0, 1]), None).unwrap();
        assert!(c.exists());
        let w = c.witness.unwrap();
        assert_eq!(w.coordinates, vec!["0", "1"]);
        assert_eq!(w.involution, vec!["0", "-1"]);
        assert_eq!(w.form, QMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));
    }

    #[test]
    fn quartic_without_quadratic_subfield_is_infeasible() {
        let c = polarization_exists(&QPoly::from_ints(&[1, 1, 0, 0, 1]), None).unwrap();
        assert_eq!(c.verdict, Verdict::Infeasible);
        assert!(matches!(c.obstruction, Some(Obstruction::ConjugatePairsNotGaloisStable { .. })));
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            polarization_exists(&QPoly::from_ints(&[-2, 0, 1]), None),
            Err(PolarizeError::NotTotallyImaginary(2))
        ));
        assert!(matches!(
            polarization_exists(&QPoly::from_ints(&[1, 0, 2, 0, 1]), None),
            Err(PolarizeError::ReduciblePolynomial(_))
        ));
        assert!(matches!(
            polarization_exists(&QPoly::from_ints(&[2, 0, 3, 0, 1]), None),
            Err(PolarizeError::ReduciblePolynomial(_))
        ));
        assert!(matches!(polarization_exists(&QPoly::from_ints(&[2, 0, 1]), None), Ok(_)));
        assert!(matches!(
            polarization_exists(&QPoly::new(vec![Q::from_integer(1.into()), Q::from_integer(0.into()), Q::new(1.into(), 2.into())]), None),
            Err(PolarizeError::NotMonicIntegral)
        ));
    }

    #[test]
    fn conjugate_pair_in_s_is_an_obstruction() {
        let c = polarization_exists(&QPoly::from_ints(&[1, 1, 1, 1, 1]), Some(&[0, 2])).unwrap();
        assert!(matches!(c.obstruction, Some(Obstruction::ConjugatePairConflict { first: 0, second: 2, .. })));
        let c = polarization_exists(&QPoly::from_ints(&[1, 1, 1, 1, 1]), Some(&[0, 3])).unwrap();
        assert!(c.exists());
    }
}
