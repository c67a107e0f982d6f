//! Certified complex enclosures in fixed-point arithmetic.
//!
//! A [`Ball`] stores integers `re`, `im`, `rad` and a bit count `bits`; it
//! encloses every complex number within distance `rad / 2^bits` of
//! `(re + i im) / 2^bits`. Every rounding step enlarges the radius, so the
//! enclosure property survives all operations.

use num::bigint::{BigInt, Sign};
use num::{Integer, One, Signed, Zero};
use serde::Serialize;

use super::rational::{fmt_q, Q};

/// Certified enclosure of a complex number: the true value lies within
/// `radius` of `re_mid + i im_mid`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedComplex {
    #[serde(serialize_with = "ser_q")]
    pub re_mid: Q,
    #[serde(serialize_with = "ser_q")]
    pub im_mid: Q,
    #[serde(serialize_with = "ser_q")]
    pub radius: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

impl CertifiedComplex {
    pub fn contains(&self, re: f64, im: f64) -> bool {
        let dr = super::rational::to_f64(&self.re_mid) - re;
        let di = super::rational::to_f64(&self.im_mid) - im;
        (dr * dr + di * di).sqrt() <= super::rational::to_f64(&self.radius) + 1e-300
    }

    /// Sign of the imaginary part if certified.
    pub fn imag_sign(&self) -> Option<i8> {
        sign_if_excluded(&self.im_mid, &self.radius)
    }

    pub fn real_sign(&self) -> Option<i8> {
        sign_if_excluded(&self.re_mid, &self.radius)
    }

    pub fn re_f64(&self) -> f64 {
        super::rational::to_f64(&self.re_mid)
    }

    pub fn im_f64(&self) -> f64 {
        super::rational::to_f64(&self.im_mid)
    }

    pub fn radius_f64(&self) -> f64 {
        super::rational::to_f64(&self.radius)
    }
}

fn sign_if_excluded(mid: &Q, rad: &Q) -> Option<i8> {
    if mid.abs() > *rad {
        Some(if mid.is_positive() { 1 } else { -1 })
    } else {
        None
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub bits: u32,
}

/// floor(a / 2^k) for k >= 0
fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    a >> (k as usize)
}

/// Exact ceiling of `a / 2^k`.
fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    -((-a) >> (k as usize))
}

impl Ball {
    pub fn zero(bits: u32) -> Self {
        Ball { re: BigInt::zero(), im: BigInt::zero(), rad: BigInt::zero(), bits }
    }

    pub fn exact_int(n: &BigInt, bits: u32) -> Self {
        Ball { re: n << (bits as usize), im: BigInt::zero(), rad: BigInt::zero(), bits }
    }

    /// Encloses a rational number (rounded, with the rounding error in the radius).
    pub fn from_q(x: &Q, bits: u32) -> Self {
        let scaled = x.numer() << (bits as usize);
        let (quo, rem) = scaled.div_mod_floor(x.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        Ball { re: quo, im: BigInt::zero(), rad, bits }
    }

    pub fn from_complex_q(re: &Q, im: &Q, bits: u32) -> Self {
        let a = Self::from_q(re, bits);
        let b = Self::from_q(im, bits);
        Ball { re: a.re, im: b.re, rad: a.rad + b.rad, bits }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.bits, o.bits);
        Ball { re: &self.re + &o.re, im: &self.im + &o.im, rad: &self.rad + &o.rad, bits: self.bits }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball { re: &self.re - &o.re, im: &self.im - &o.im, rad: &self.rad + &o.rad, bits: self.bits }
    }

    pub fn neg(&self) -> Ball {
        Ball { re: -&self.re, im: -&self.im, rad: self.rad.clone(), bits: self.bits }
    }

    pub fn conj(&self) -> Ball {
        Ball { re: self.re.clone(), im: -&self.im, rad: self.rad.clone(), bits: self.bits }
    }

    /// Upper bound on |mid| in ulps (|re| + |im|).
    fn abs_bound(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let b = self.bits;
        let re_full = &self.re * &o.re - &self.im * &o.im;
        let im_full = &self.re * &o.im + &self.im * &o.re;
        let re = shr_floor(&re_full, b);
        let im = shr_floor(&im_full, b);
        // |a| rb + |b| ra + ra rb, plus one ulp of truncation per component
        let prop = self.abs_bound() * &o.rad + o.abs_bound() * &self.rad + &self.rad * &o.rad;
        let rad = shr_ceil(&prop, b) + BigInt::from(2);
        Ball { re, im, rad, bits: b }
    }

    /// Multiplication by an exact rational scalar.
    pub fn mul_q(&self, s: &Q) -> Ball {
        self.mul(&Ball::from_q(s, self.bits))
    }

    /// Division by a ball whose modulus is certified to exceed its radius.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        let inv = o.inv()?;
        Some(self.mul(&inv))
    }

    /// 1/z, if 0 is excluded from the ball.
    pub fn inv(&self) -> Option<Ball> {
        // |z| >= |mid| - rad; use |mid|^2 >= (max(|re|,|im|))^2
        let b = self.bits;
        let m2 = &self.re * &self.re + &self.im * &self.im;
        let lower = self.re.abs().max(self.im.abs());
        if lower <= self.rad {
            return None;
        }
        let gap = &lower - &self.rad; // lower bound on |z| in ulps
        // midpoint inverse: conj(mid)/|mid|^2 scaled by 2^{2b}
        let shift = 2 * b as usize;
        let re = (&self.re << shift).div_floor(&m2);
        let im = ((-&self.im) << shift).div_floor(&m2);
        // |1/z - 1/mid| <= rad / (|mid| |z|); |mid| >= lower, |z| >= gap
        let num = &self.rad << shift;
        let den = &lower * &gap;
        let rad = num.div_ceil(&den) + BigInt::from(2);
        Some(Ball { re, im, rad, bits: b })
    }

    pub fn to_certified(&self) -> CertifiedComplex {
        let den = BigInt::one() << (self.bits as usize);
        CertifiedComplex {
            re_mid: Q::new(self.re.clone(), den.clone()),
            im_mid: Q::new(self.im.clone(), den.clone()),
            radius: Q::new(self.rad.clone(), den),
        }
    }

    pub fn re_f64(&self) -> f64 {
        to_f64_scaled(&self.re, self.bits)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64_scaled(&self.im, self.bits)
    }

    pub fn rad_f64(&self) -> f64 {
        to_f64_scaled(&self.rad, self.bits)
    }

    /// Sign of the imaginary part, when certified.
    pub fn imag_sign(&self) -> Option<i8> {
        int_sign_excluded(&self.im, &self.rad)
    }

    pub fn real_sign(&self) -> Option<i8> {
        int_sign_excluded(&self.re, &self.rad)
    }

    /// Does the closed disk of `self` meet the closed disk of `o`? Conservative (may say
    /// yes for disjoint disks only if they are within rounding of each other).
    pub fn overlaps(&self, o: &Ball) -> bool {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let r = &self.rad + &o.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// Is the disk of `self` contained in the disk of `o`?
    pub fn inside(&self, o: &Ball) -> bool {
        if o.rad < self.rad {
            return false;
        }
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let r = &o.rad - &self.rad;
        &dr * &dr + &di * &di <= &r * &r
    }
}

fn int_sign_excluded(mid: &BigInt, rad: &BigInt) -> Option<i8> {
    if mid.abs() > *rad {
        Some(if mid.sign() == Sign::Minus { -1 } else { 1 })
    } else {
        None
    }
}

fn to_f64_scaled(x: &BigInt, bits: u32) -> f64 {
    super::rational::to_f64(&Q::new(x.clone(), BigInt::one() << (bits as usize)))
}

/// Enclosure of pi (as a real ball) via Machin's formula.
pub fn pi_ball(bits: u32) -> Ball {
    let guard = 16;
    let w = bits + guard;
    let a = arctan_inv(5, w);
    let b = arctan_inv(239, w);
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let mid = BigInt::from(16) * &a.0 - BigInt::from(4) * &b.0;
    let rad = BigInt::from(16) * &a.1 + BigInt::from(4) * &b.1;
    Ball {
        re: shr_floor(&mid, guard),
        im: BigInt::zero(),
        rad: shr_ceil(&rad, guard) + BigInt::one(),
        bits,
    }
}

/// (mid, rad) in ulps of 2^-w for atan(1/x), x >= 2.
fn arctan_inv(x: u64, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << (w as usize);
    let xb = BigInt::from(x);
    let x2 = &xb * &xb;
    let mut power = one.div_floor(&xb); // 1/x^{2k+1}, truncated
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut steps = BigInt::zero();
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = power.div_floor(&x2);
        k += 1;
        steps += 1;
    }
    // each truncation loses < 1 ulp (power errors accumulate but shrink by x^2);
    // alternating tail below the final (zero) term is < 1 ulp
    let rad = BigInt::from(3) * steps + BigInt::from(2);
    (sum, rad)
}

/// Enclosure of exp(2 pi i k / m).
pub fn root_of_unity_ball(k: i64, m: u32, bits: u32) -> Ball {
    let m_i = m as i64;
    let k = k.rem_euclid(m_i);
    if k == 0 {
        return Ball::exact_int(&BigInt::one(), bits);
    }
    // exact special cases keep small conductors crisp
    if 4 * k == m_i {
        return Ball { re: BigInt::zero(), im: BigInt::one() << (bits as usize), rad: BigInt::zero(), bits };
    }
    if 2 * k == m_i {
        return Ball::exact_int(&BigInt::from(-1), bits);
    }
    if 4 * k == 3 * m_i {
        return Ball { re: BigInt::zero(), im: -(BigInt::one() << (bits as usize)), rad: BigInt::zero(), bits };
    }
    let guard = 40;
    let w = bits + guard;
    // theta in (-pi, pi]: use k' = k or k - m
    let kk = if 2 * k > m_i { k - m_i } else { k };
    let pi = pi_ball(w);
    // theta = 2 pi kk / m
    let num = &pi.re * BigInt::from(2 * kk);
    let theta = num.div_floor(&BigInt::from(m_i));
    let theta_rad = (&pi.rad * BigInt::from(2 * kk.abs())).div_ceil(&BigInt::from(m_i)) + BigInt::one();
    let (c, s, err) = cos_sin_fixed(&theta, w);
    let total = err * BigInt::from(2) + theta_rad;
    Ball {
        re: shr_floor(&c, guard),
        im: shr_floor(&s, guard),
        rad: shr_ceil(&total, guard) + BigInt::from(2),
        bits,
    }
}

/// cos and sin of theta (fixed point, |theta| <= 4) with an error bound in ulps.
fn cos_sin_fixed(theta: &BigInt, w: u32) -> (BigInt, BigInt, BigInt) {
    let one = BigInt::one() << (w as usize);
    let mut term = one.clone(); // theta^n / n!
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut n: u64 = 0;
    loop {
        match n % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        n += 1;
        term = shr_floor(&(&term * theta), w).div_floor(&BigInt::from(n));
        if term.is_zero() && n > 8 {
            break;
        }
        if term.abs() <= BigInt::one() && n > 20 {
            break;
        }
    }
    // truncation per step plus amplification by at most e^4 < 2^6; tail < 2 ulps
    let err = BigInt::from(n + 4) * BigInt::from(64);
    (cos, sin, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_encloses() {
        for bits in [32u32, 64, 200] {
            let p = pi_ball(bits);
            assert!((p.re_f64() - std::f64::consts::PI).abs() <= p.rad_f64() + 1e-15);
            assert!(p.rad_f64() < 2f64.powi(-(bits as i32) + 4));
        }
    }

    #[test]
    fn roots_of_unity() {
        for m in [3u32, 5, 7, 8, 12, 16, 30] {
            for k in 0..m as i64 {
                let b = root_of_unity_ball(k, m, 64);
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                assert!((b.re_f64() - t.cos()).abs() < 1e-12, "m={m} k={k}");
                assert!((b.im_f64() - t.sin()).abs() < 1e-12);
                assert!(b.rad_f64() < 1e-15);
            }
        }
    }

    #[test]
    fn inverse_contains_truth() {
        let z = Ball::from_complex_q(&super::super::rational::qf(3, 2), &super::super::rational::qf(-1, 3), 80);
        let w = z.inv().unwrap();
        let p = z.mul(&w);
        assert!((p.re_f64() - 1.0).abs() <= p.rad_f64() + 1e-20);
        assert!(p.im_f64().abs() <= p.rad_f64() + 1e-20);
    }
}
