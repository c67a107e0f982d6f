//! Exact arithmetic in cyclotomic fields Q(zeta_m), power basis modulo Phi_m.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::integer::gcd;
use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::ball::{root_of_unity_ball, Ball, CertifiedComplex};
use super::linalg::{QMatrix, Scalar};
use super::poly::{cyclotomic_polynomial, QPoly};
use super::rational::{fmt_q, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("residue {a} is not a unit modulo {m}")]
    NotAUnit { a: i64, m: u32 },
    #[error("precision cap of {0} bits exceeded while separating from zero")]
    PrecisionExhausted(u32),
}

/// Integer vector and common denominator with v = ints / den.
fn integer_numerators(v: &[Q]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| {
        if x.denom().is_one() {
            acc
        } else {
            num::Integer::lcm(&acc, x.denom())
        }
    });
    let ints = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (ints, den)
}

pub const START_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 16384;

/// The cyclotomic field Q(zeta_m).
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    /// zeta^k reduced to the power basis, for k in 0..m
    powers: Vec<Vec<Q>>,
    /// the same table with integer entries (Phi_m is monic)
    int_powers: Vec<Vec<BigInt>>,
    /// Tr(zeta^k) for k in 0..m
    traces: Vec<Q>,
    units: Vec<u32>,
}

impl CyclotomicField {
    pub fn new(m: u32) -> Arc<Self> {
        assert!(m >= 1, "conductor must be positive");
        let modulus = cyclotomic_polynomial(m);
        let degree = modulus.len() - 1;
        let phi = QPoly::from_bigints(&modulus);
        let powers: Vec<Vec<Q>> = (0..m as usize)
            .map(|k| {
                let r = QPoly::monomial(k).rem(&phi);
                (0..degree).map(|i| r.coeff(i)).collect()
            })
            .collect();
        let units: Vec<u32> = (1..=m).filter(|&a| gcd(a, m) == 1).map(|a| a % m).collect();
        let mut units = units;
        units.sort_unstable();
        let traces = (0..m as usize)
            .map(|k| {
                // sum over a of zeta^{a k}; the result is rational, read the constant term
                units
                    .iter()
                    .map(|&a| powers[(a as usize * k) % m as usize][0].clone())
                    .fold(Q::zero(), |x, y| x + y)
            })
            .collect();
        let int_powers = powers.iter().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect();
        Arc::new(CyclotomicField { conductor: m, degree, modulus, powers, int_powers, traces, units })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Phi_m, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Residues a in [0, m) coprime to m, ascending (the Galois group).
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    pub fn embeddings(&self) -> Vec<EmbeddingIndex> {
        self.units.iter().map(|&a| EmbeddingIndex { residue: a, conductor: self.conductor }).collect()
    }
}

/// Embedding sigma_a : zeta_m -> exp(2 pi i a / m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EmbeddingIndex {
    pub residue: u32,
    pub conductor: u32,
}

impl EmbeddingIndex {
    pub fn new(a: i64, m: u32) -> Result<Self, ArithError> {
        let r = a.rem_euclid(m as i64) as u32;
        if m != 1 && gcd(r, m) != 1 {
            return Err(ArithError::NotAUnit { a, m });
        }
        Ok(EmbeddingIndex { residue: r, conductor: m })
    }

    /// The complex-conjugate embedding sigma_{-a}.
    pub fn conjugate(&self) -> Self {
        let m = self.conductor;
        EmbeddingIndex { residue: (m - self.residue % m) % m, conductor: m }
    }
}

/// Element of Q(zeta_m) in power-basis coordinates 1, zeta, ..., zeta^{phi(m)-1}.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Q>,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.field.conductor == o.field.conductor && self.coeffs == o.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => fmt_q(c),
                1 => format!("{}*z", fmt_q(c)),
                _ => format!("{}*z^{}", fmt_q(c), i),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl CyclotomicNumber {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicNumber { field: field.clone(), coeffs: vec![Q::zero(); field.degree] }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Q::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, x: Q) -> Self {
        let mut c = vec![Q::zero(); field.degree];
        c[0] = x;
        CyclotomicNumber { field: field.clone(), coeffs: c }
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Self {
        Self::from_rational(field, Q::from_integer(BigInt::from(n)))
    }

    /// zeta_m^k for any integer k.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let m = field.conductor as i64;
        let idx = k.rem_euclid(m) as usize;
        CyclotomicNumber { field: field.clone(), coeffs: field.powers[idx].clone() }
    }

    /// Element with the given power-basis coordinates (length phi(m)).
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<Q>) -> Self {
        assert_eq!(coeffs.len(), field.degree);
        CyclotomicNumber { field: field.clone(), coeffs }
    }

    /// Reduces an arbitrary-length coefficient vector in zeta modulo Phi_m.
    pub fn from_unreduced(field: &Arc<CyclotomicField>, coeffs: &[Q]) -> Self {
        let m = field.conductor as usize;
        let mut c = vec![Q::zero(); field.degree];
        for (k, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if k < field.degree {
                c[k] += a;
            } else {
                for (i, p) in field.powers[k % m].iter().enumerate() {
                    if !p.is_zero() {
                        c[i] += a * p;
                    }
                }
            }
        }
        CyclotomicNumber { field: field.clone(), coeffs: c }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// The rational value, if this element is rational.
    pub fn to_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn check(&self, o: &Self) -> Result<(), ArithError> {
        if self.field.conductor != o.field.conductor {
            Err(ArithError::ConductorMismatch(self.field.conductor, o.field.conductor))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ArithError> {
        self.check(o)?;
        Ok(CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ArithError> {
        self.check(o)?;
        Ok(CyclotomicNumber {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, ArithError> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let d = self.field.degree;
        let m = self.field.conductor as usize;
        let (a, da) = integer_numerators(&self.coeffs);
        let (b, db) = integer_numerators(&o.coeffs);
        let mut full = vec![BigInt::zero(); 2 * d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        let mut c: Vec<BigInt> = full[..d].to_vec();
        for (k, x) in full.iter().enumerate().skip(d) {
            if x.is_zero() {
                continue;
            }
            for (i, p) in self.field.int_powers[k % m].iter().enumerate() {
                if !p.is_zero() {
                    c[i] += x * p;
                }
            }
        }
        let den = da * db;
        let coeffs = c.into_iter().map(|x| Q::new(x, den.clone())).collect();
        Ok(CyclotomicNumber { field: self.field.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Matrix of multiplication by `self` on the power basis (columns = images of basis vectors).
    pub fn multiplication_matrix(&self) -> QMatrix {
        let d = self.field.degree;
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let basis = Self::zeta_pow(&self.field, k as i64);
            cols.push(self.try_mul(&basis).expect("same field").coeffs);
        }
        QMatrix::from_columns(&cols)
    }

    pub fn try_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        let m = self.multiplication_matrix();
        let mut e1 = QMatrix::zeros(self.field.degree, 1);
        e1[(0, 0)] = Q::one();
        let x = m.solve(&e1).ok_or(ArithError::DivisionByZero)?;
        Ok(CyclotomicNumber { field: self.field.clone(), coeffs: x.column(0) })
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, ArithError> {
        self.try_mul(&o.try_inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    /// Galois automorphism sigma_a : zeta -> zeta^a (a coprime to m).
    pub fn galois(&self, a: i64) -> Self {
        let m = self.field.conductor as i64;
        let mut full = vec![Q::zero(); self.field.conductor as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[((a * i as i64).rem_euclid(m)) as usize] += c;
            }
        }
        Self::from_unreduced(&self.field, &full)
    }

    /// Complex conjugation, zeta -> zeta^{-1}.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// Absolute trace Tr_{Q(zeta_m)/Q}.
    pub fn trace(&self) -> Q {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &self.field.traces[i])
            .fold(Q::zero(), |a, b| a + b)
    }

    /// Image in Q(zeta_n) for a multiple n of m (zeta_m -> zeta_n^{n/m}).
    pub fn lift(&self, target: &Arc<CyclotomicField>) -> Self {
        let m = self.field.conductor;
        let n = target.conductor;
        assert!(n % m == 0, "conductor {n} is not a multiple of {m}");
        let step = (n / m) as usize;
        let mut full = vec![Q::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * step) % n as usize] += c;
        }
        Self::from_unreduced(target, &full)
    }

    /// Preimage under `lift` from Q(zeta_d), for d dividing the conductor.
    pub fn descend(&self, target: &Arc<CyclotomicField>) -> Option<Self> {
        let cols: Vec<Vec<Q>> = (0..target.degree())
            .map(|k| Self::zeta_pow(target, k as i64).lift(&self.field).coeffs)
            .collect();
        let a = QMatrix::from_columns(&cols);
        let x = a.solve(&QMatrix::from_columns(&[self.coeffs.clone()]))?;
        Some(Self::from_coeffs(target, x.column(0)))
    }

    /// Fixed-point ball enclosure of sigma_a(self) with `bits` fractional bits.
    pub fn embed_ball(&self, a: EmbeddingIndex, bits: u32) -> Ball {
        let w = root_of_unity_ball(a.residue as i64, self.field.conductor, bits + 16);
        let mut acc = Ball::zero(bits + 16);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&w).add(&Ball::from_q(c, bits + 16));
        }
        // drop guard bits, rounding outward
        let g = 16usize;
        Ball {
            re: &acc.re >> g,
            im: &acc.im >> g,
            rad: -((-&acc.rad) >> g) + BigInt::from(2),
            bits,
        }
    }

    /// Certified enclosure of sigma_a(self).
    pub fn embed(&self, a: EmbeddingIndex, precision: u32) -> CertifiedComplex {
        self.embed_ball(a, precision).to_certified()
    }

    pub fn embed_f64(&self, a: EmbeddingIndex) -> (f64, f64) {
        let b = self.embed_ball(a, 64);
        (b.re_f64(), b.im_f64())
    }

    /// Exact sign of Im sigma_a(self): zero is decided by the exact identity
    /// self = conjugate(self); nonzero signs by precision escalation.
    pub fn certified_sign_imag(&self, a: EmbeddingIndex) -> Result<Sign, ArithError> {
        if self.is_real() {
            return Ok(Sign::Zero);
        }
        escalate(|bits| self.embed_ball(a, bits).imag_sign())
    }

    /// Exact sign of Re sigma_a(self).
    pub fn certified_sign_real(&self, a: EmbeddingIndex) -> Result<Sign, ArithError> {
        if self.try_add(&self.conjugate()).expect("same field").is_zero() {
            return Ok(Sign::Zero);
        }
        escalate(|bits| self.embed_ball(a, bits).real_sign())
    }
}

fn escalate(mut f: impl FnMut(u32) -> Option<i8>) -> Result<Sign, ArithError> {
    let mut bits = START_PRECISION;
    while bits <= MAX_PRECISION {
        if let Some(s) = f(bits) {
            return Ok(if s > 0 { Sign::Positive } else { Sign::Negative });
        }
        bits *= 2;
    }
    Err(ArithError::PrecisionExhausted(MAX_PRECISION))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
        }
    }
}

/// Serialized as the list of power-basis coordinates, each a "p/q" string.
impl Serialize for CyclotomicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&fmt_q(c))?;
        }
        seq.end()
    }
}

impl Scalar for CyclotomicNumber {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.try_add(o).expect("conductor mismatch")
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.try_sub(o).expect("conductor mismatch")
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.try_mul(o).expect("conductor mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn inv_ref(&self) -> Option<Self> {
        self.try_inv().ok()
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, o: &CyclotomicNumber) -> CyclotomicNumber {
                self.$f(o).expect("conductor mismatch")
            }
        }
    };
}
forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{q, qf};
    use proptest::prelude::*;

    fn zeta(m: u32) -> CyclotomicNumber {
        CyclotomicNumber::zeta_pow(&CyclotomicField::new(m), 1)
    }

    #[test]
    fn basic_identities() {
        let f4 = CyclotomicField::new(4);
        let i = zeta(4);
        assert_eq!(&i * &i, CyclotomicNumber::from_int(&f4, -1));
        let f3 = CyclotomicField::new(3);
        let z = CyclotomicNumber::zeta_pow(&f3, 1);
        let z2 = CyclotomicNumber::zeta_pow(&f3, 2);
        assert_eq!(&z + &z2, CyclotomicNumber::from_int(&f3, -1));
        assert_eq!(i.conjugate(), i.neg());
        let r = CyclotomicNumber::from_rational(&f4, qf(3, 7));
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn embeddings() {
        let i = zeta(4);
        let e = i.embed(EmbeddingIndex::new(1, 4).unwrap(), 64);
        assert!(e.contains(0.0, 1.0));
        assert!(e.radius_f64() <= 2f64.powi(-60));
        let one = CyclotomicNumber::one(&CyclotomicField::new(7));
        for a in 1..7 {
            assert!(one.embed(EmbeddingIndex::new(a, 7).unwrap(), 64).contains(1.0, 0.0));
        }
        let z3 = zeta(3);
        assert!(z3.embed(EmbeddingIndex::new(2, 3).unwrap(), 80).contains(-0.5, -(3f64.sqrt()) / 2.0));
    }

    #[test]
    fn signs() {
        let i = zeta(4);
        assert_eq!(i.certified_sign_imag(EmbeddingIndex::new(1, 4).unwrap()), Ok(Sign::Positive));
        assert_eq!(i.certified_sign_imag(EmbeddingIndex::new(3, 4).unwrap()), Ok(Sign::Negative));
        let one = CyclotomicNumber::one(&CyclotomicField::new(4));
        assert_eq!(one.certified_sign_imag(EmbeddingIndex::new(3, 4).unwrap()), Ok(Sign::Zero));
        assert!(EmbeddingIndex::new(2, 4).is_err());
    }

    #[test]
    fn inverse_and_trace() {
        let f = CyclotomicField::new(12);
        let x = CyclotomicNumber::from_coeffs(&f, vec![q(1), q(2), q(0), qf(-1, 3)]);
        let y = x.try_inv().unwrap();
        assert_eq!(&x * &y, CyclotomicNumber::one(&f));
        // Tr(1) = phi(m)
        assert_eq!(CyclotomicNumber::one(&f).trace(), q(4));
        assert_eq!(CyclotomicNumber::zero(&f).try_inv(), Err(ArithError::DivisionByZero));
        let g = CyclotomicField::new(5);
        assert!(matches!(x.try_add(&CyclotomicNumber::one(&g)), Err(ArithError::ConductorMismatch(12, 5))));
    }

    #[test]
    fn lift_is_homomorphism() {
        let f3 = CyclotomicField::new(3);
        let f12 = CyclotomicField::new(12);
        let z = CyclotomicNumber::zeta_pow(&f3, 1);
        let lz = z.lift(&f12);
        assert_eq!(lz.pow(3), CyclotomicNumber::one(&f12));
        assert_eq!(lz, CyclotomicNumber::zeta_pow(&f12, 4));
    }

    fn arb_elem(m: u32) -> impl Strategy<Value = CyclotomicNumber> {
        let f = CyclotomicField::new(m);
        let d = f.degree();
        proptest::collection::vec((-20i64..20, 1i64..6), d).prop_map(move |v| {
            CyclotomicNumber::from_coeffs(&f, v.into_iter().map(|(n, dd)| qf(n, dd)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn field_axioms_and_conjugation(x in arb_elem(15), y in arb_elem(15)) {
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
            if !x.is_zero() {
                let f = x.field().clone();
                prop_assert_eq!(&x * &x.try_inv().unwrap(), CyclotomicNumber::one(&f));
            }
        }

        #[test]
        fn embedding_invariants(x in arb_elem(12), y in arb_elem(12)) {
            let f = x.field().clone();
            // product enclosure contains the product of midpoints
            for a in f.embeddings() {
                let ex = x.embed(a, 96);
                let ey = y.embed(a, 96);
                let exy = (&x * &y).embed(a, 96);
                let (pr, pi) = (ex.re_f64() * ey.re_f64() - ex.im_f64() * ey.im_f64(),
                                ex.re_f64() * ey.im_f64() + ex.im_f64() * ey.re_f64());
                let scale = 1.0 + pr.abs() + pi.abs();
                prop_assert!((exy.re_f64() - pr).abs() < 1e-9 * scale);
                prop_assert!((exy.im_f64() - pi).abs() < 1e-9 * scale);
                // conjugate embedding flips the imaginary sign
                prop_assert_eq!(x.certified_sign_imag(a).unwrap(), x.certified_sign_imag(a.conjugate()).unwrap().flip());
                // radius shrinks with precision
                prop_assert!(x.embed(a, 128).radius <= ex.radius);
            }
            // sum of all embeddings encloses the exact trace
            let tr = crate::arith::rational::to_f64(&x.trace());
            let s: f64 = f.embeddings().iter().map(|&a| x.embed(a, 96).re_f64()).sum();
            prop_assert!((s - tr).abs() < 1e-9 * (1.0 + tr.abs()));
        }
    }
}
