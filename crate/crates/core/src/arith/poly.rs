//! Dense univariate polynomials over the rationals.

use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use super::rational::{fmt_q, q, Q};

/// Polynomial with rational coefficients, lowest degree first. The zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = Q::one();
        QPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Self::new(quo), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + super::rational::to_f64(c))
    }

    /// Composition self(g(x)).
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(g).add(&Self::constant(c.clone())))
    }

    /// Squarefree decomposition (Yun): returns (factor, multiplicity) with
    /// monic squarefree pairwise coprime factors.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Self::one(), |acc, (f, _)| acc.mul(&f))
    }

    /// Sturm sequence of a squarefree polynomial.
    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&q(-1)));
        }
        seq
    }

    /// Number of distinct real roots (exact, via Sturm's theorem).
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        let sign_at_inf = |neg: bool| -> Vec<i32> {
            seq.iter()
                .filter_map(|p| {
                    let d = p.degree()?;
                    let s = if p.leading().is_positive() { 1 } else { -1 };
                    Some(if neg && d % 2 == 1 { -s } else { s })
                })
                .collect()
        };
        variations(&sign_at_inf(true)) - variations(&sign_at_inf(false))
    }

    /// Number of distinct real roots in the half-open interval (lo, hi].
    pub fn count_real_roots_in(&self, lo: &Q, hi: &Q) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        let signs = |x: &Q| -> Vec<i32> {
            seq.iter()
                .map(|p| {
                    let v = p.eval(x);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|&s| s != 0)
                .collect()
        };
        variations(&signs(lo)).saturating_sub(variations(&signs(hi)))
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, o: &Self) -> Q {
        let (m, n) = match (self.degree(), o.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Q::zero(),
        };
        if m == 0 && n == 0 {
            return Q::one();
        }
        let size = m + n;
        let mut rows = vec![vec![Q::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                rows[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in o.coeffs.iter().rev().enumerate() {
                rows[n + i][i + j] = c.clone();
            }
        }
        super::linalg::Matrix::from_rows(rows).determinant()
    }

    /// Discriminant of a monic polynomial: (-1)^{n(n-1)/2} Res(f, f').
    pub fn discriminant(&self) -> Q {
        let n = self.degree().unwrap_or(0);
        let r = self.resultant(&self.derivative()) / self.leading();
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    pub fn is_monic_integral(&self) -> bool {
        !self.is_zero() && self.leading().is_one() && self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if all are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.numer().clone()))
            .collect()
    }
}

fn variations(signs: &[i32]) -> usize {
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", fmt_q(c))?,
                1 => write!(f, "({})x", fmt_q(c))?,
                _ => write!(f, "({})x^{}", fmt_q(c), i)?,
            }
        }
        Ok(())
    }
}

/// The m-th cyclotomic polynomial, integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1 divided by Phi_d for all proper divisors d
    let mut num = vec![Q::zero(); m as usize + 1];
    num[0] = q(-1);
    num[m as usize] = q(1);
    let mut p = QPoly::new(num);
    for d in 1..m {
        if m % d == 0 {
            let phi_d = QPoly::from_bigints(&cyclotomic_polynomial(d));
            let (quo, r) = p.divrem(&phi_d);
            debug_assert!(r.is_zero());
            p = quo;
        }
    }
    p.integer_coeffs().expect("cyclotomic polynomials are integral")
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|&a| num::integer::gcd(a, m) == 1).count() as u32
}

/// Characteristic polynomial det(xI - A) of a square rational matrix
/// (Faddeev-LeVerrier), lowest degree first.
pub fn characteristic_polynomial(a: &super::linalg::QMatrix) -> QPoly {
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = super::linalg::QMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &coeffs[n + 1 - k];
        }
        m = next;
        let t = a.mul(&m).trace();
        coeffs[n - k] = -t / q(k as i64);
    }
    QPoly::new(coeffs)
}
