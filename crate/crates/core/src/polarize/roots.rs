//! Certified isolation of the roots of an integer polynomial without real
//! roots: simultaneous Weierstrass iteration on high-precision midpoints,
//! then disks of radius n |f(z)| / |f'(z)| that are checked to be disjoint.

use nalgebra::DMatrix;
use num::{BigInt, Integer, One, Signed, Zero};

use super::PolarizeError;
use crate::arith::ball::{Ball, CertifiedComplex};
use crate::arith::Q;

const PRECISIONS: [u32; 5] = [128, 256, 512, 1024, 2048];
const MAX_ITERATIONS: usize = 400;

/// Root enclosures in canonical order: the roots in the upper half plane
/// sorted by real part, then their conjugates in the same order, so that
/// root k + n/2 is the conjugate of root k.
#[derive(Clone, Debug)]
pub struct RootIsolation {
    pub bits: u32,
    pub balls: Vec<Ball>,
}

impl RootIsolation {
    pub fn degree(&self) -> usize {
        self.balls.len()
    }

    pub fn enclosures(&self) -> Vec<CertifiedComplex> {
        self.balls.iter().map(Ball::to_certified).collect()
    }

    pub fn conjugate_index(&self, k: usize) -> usize {
        let h = self.balls.len() / 2;
        if k < h {
            k + h
        } else {
            k - h
        }
    }

    /// Enclosure of p(root k) for a rational polynomial p.
    pub fn eval_q(&self, coeffs: &[Q], k: usize) -> Ball {
        eval_q_poly(coeffs, &self.balls[k])
    }
}

pub fn eval_int_poly(coeffs: &[BigInt], z: &Ball) -> Ball {
    let mut acc = Ball::zero(z.bits);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&Ball::exact_int(c, z.bits));
    }
    acc
}

pub fn eval_q_poly(coeffs: &[Q], z: &Ball) -> Ball {
    let mut acc = Ball::zero(z.bits);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&Ball::from_q(c, z.bits));
    }
    acc
}

fn midpoint(b: &Ball) -> Ball {
    Ball { re: b.re.clone(), im: b.im.clone(), rad: BigInt::zero(), bits: b.bits }
}

/// f64 seeds from the eigenvalues of the companion matrix.
fn seeds(f: &[BigInt]) -> Option<Vec<(f64, f64)>> {
    let n = f.len() - 1;
    let c: Vec<f64> = f.iter().map(|x| crate::arith::rational::to_f64(&Q::from_integer(x.clone()))).collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)?;
    Some(schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
}

fn weierstrass(f: &[BigInt], start: &[(f64, f64)], bits: u32) -> Option<Vec<Ball>> {
    let mut z: Vec<Ball> = start
        .iter()
        .enumerate()
        .map(|(k, &(re, im))| {
            // nudge exact duplicates apart
            let im = if im == 0.0 { 1e-3 * (k as f64 + 1.0) } else { im };
            let r = Q::from_float(re).unwrap_or_default();
            let i = Q::from_float(im).unwrap_or_default();
            midpoint(&Ball::from_complex_q(&r, &i, bits))
        })
        .collect();
    let target = BigInt::one() << 16usize;
    for _ in 0..MAX_ITERATIONS {
        let mut largest = BigInt::zero();
        for k in 0..z.len() {
            let mut den = Ball::exact_int(&BigInt::one(), bits);
            for j in 0..z.len() {
                if j != k {
                    den = den.mul(&z[k].sub(&z[j]));
                }
            }
            let step = eval_int_poly(f, &z[k]).div(&midpoint(&den))?;
            let size = step.re.abs() + step.im.abs();
            if size > largest {
                largest = size;
            }
            z[k] = midpoint(&z[k].sub(&step));
        }
        if largest < target {
            return Some(z);
        }
    }
    None
}

/// Disk around `z` that provably contains a root of f.
fn enclosure(f: &[BigInt], df: &[BigInt], z: &Ball) -> Option<Ball> {
    let n = BigInt::from(f.len() - 1);
    let fz = eval_int_poly(f, z);
    let dz = eval_int_poly(df, z);
    let upper = fz.re.abs() + fz.im.abs() + &fz.rad;
    let lower = dz.re.abs().max(dz.im.abs()) - &dz.rad;
    if !lower.is_positive() {
        return None;
    }
    let rad = (n * upper << (z.bits as usize)).div_ceil(&lower) + BigInt::one();
    Some(Ball { re: z.re.clone(), im: z.im.clone(), rad, bits: z.bits })
}

fn try_isolate(f: &[BigInt], start: &[(f64, f64)], bits: u32) -> Option<Vec<Ball>> {
    let n = f.len() - 1;
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let approx = weierstrass(f, start, bits)?;
    let mut upper = Vec::new();
    for z in &approx {
        let e = enclosure(f, &df, z)?;
        match e.imag_sign()? {
            1 => upper.push(e),
            _ => {}
        }
    }
    if upper.len() * 2 != n {
        return None;
    }
    for a in 0..upper.len() {
        for b in 0..a {
            if upper[a].overlaps(&upper[b]) {
                return None;
            }
        }
    }
    upper.sort_by(|a, b| (&a.re, &a.im).cmp(&(&b.re, &b.im)));
    let lower: Vec<Ball> = upper.iter().map(Ball::conj).collect();
    upper.extend(lower);
    Some(upper)
}

/// Certified enclosures of all roots of a monic squarefree integer
/// polynomial with no real roots, lowest coefficient first.
pub fn isolate_roots(f: &[BigInt]) -> Result<RootIsolation, PolarizeError> {
    isolate_roots_at(f, PRECISIONS[0])
}

/// As `isolate_roots`, with midpoints carried to at least `min_bits` bits.
pub fn isolate_roots_at(f: &[BigInt], min_bits: u32) -> Result<RootIsolation, PolarizeError> {
    let n = f.len().saturating_sub(1);
    if n == 0 || n % 2 == 1 {
        return Err(PolarizeError::CertificationFailed);
    }
    if let Some(start) = seeds(f) {
        for bits in PRECISIONS.into_iter().filter(|&b| b >= min_bits) {
            if let Some(balls) = try_isolate(f, &start, bits) {
                return Ok(RootIsolation { bits, balls });
            }
        }
    }
    // no usable seeds: restart from points on a circle
    let bound = f.iter().map(|c| crate::arith::rational::to_f64(&Q::from_integer(c.abs()))).fold(1.0, f64::max) + 1.0;
    let circle: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            (bound.sqrt() * t.cos(), bound.sqrt() * t.sin())
        })
        .collect();
    for bits in PRECISIONS.into_iter().filter(|&b| b >= min_bits) {
        if let Some(balls) = try_isolate(f, &circle, bits) {
            return Ok(RootIsolation { bits, balls });
        }
    }
    Err(PolarizeError::CertificationFailed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gaussian_roots() {
        let r = isolate_roots(&ints(&[1, 0, 1])).unwrap();
        assert_eq!(r.degree(), 2);
        assert!(r.balls[0].to_certified().contains(0.0, 1.0));
        assert!(r.balls[1].to_certified().contains(0.0, -1.0));
        assert_eq!(r.conjugate_index(0), 1);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let r = isolate_roots(&ints(&[1, 1, 1, 1, 1])).unwrap();
        let t = 2.0 * std::f64::consts::PI / 5.0;
        // upper roots sorted by real part: zeta^2 then zeta
        let near = |k: usize, a: f64| (r.balls[k].re_f64() - a.cos()).hypot(r.balls[k].im_f64() - a.sin()) < 1e-12;
        assert!(near(0, 2.0 * t) && near(1, t) && near(2, -2.0 * t) && near(3, -t));
        for b in &r.balls {
            assert!(b.rad_f64() < 1e-30);
        }
    }

    #[test]
    fn close_roots_are_separated() {
        // (x^2 + 100)^2 + 1
        let r = isolate_roots(&ints(&[10001, 0, 200, 0, 1])).unwrap();
        assert_eq!(r.degree(), 4);
    }
}
