//! Helpers around `BigRational`: construction, formatting and rational
//! approximation of floats by continued fractions.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_from_bigint(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: scale down through the integer parts
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact rational value of a finite float.
pub fn from_f64_exact(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Continued-fraction convergents of `x` with denominator at most `max_den`,
/// in order of increasing denominator.
pub fn convergents(x: f64, max_den: u64) -> Vec<Q> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    // p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        out.push(Q::new(p2.clone(), q2.clone()));
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
        if !rest.is_finite() || rest.abs() > 1e15 {
            break;
        }
    }
    out
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (closest among convergents and semiconvergents).
pub fn best_rational(x: f64, max_den: u64) -> Q {
    let max_den = max_den.max(1);
    let mut best = Q::from_integer(BigInt::from(x.round() as i64));
    let mut best_err = (x - x.round()).abs();
    let conv = convergents(x, max_den);
    let md = BigInt::from(max_den);
    for w in 0..conv.len() {
        let c = &conv[w];
        let e = (to_f64(c) - x).abs();
        if e < best_err {
            best_err = e;
            best = c.clone();
        }
        // semiconvergents between conv[w-1] and conv[w+1]
        if w >= 1 {
            let (pm, qm) = (conv[w - 1].numer().clone(), conv[w - 1].denom().clone());
            let (pc, qc) = (c.numer().clone(), c.denom().clone());
            let mut k = BigInt::one();
            loop {
                let qn = &qm + &k * &qc;
                if qn > md {
                    break;
                }
                let cand = Q::new(&pm + &k * &pc, qn);
                let e = (to_f64(&cand) - x).abs();
                if e < best_err {
                    best_err = e;
                    best = cand;
                }
                k += 1;
                if k > BigInt::from(4096) {
                    break;
                }
            }
        }
    }
    best
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_numerators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num::Integer;
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
}

/// Last continued-fraction convergent of `x` with denominator at most `max_den`.
pub fn reconstruct(x: &Q, max_den: &BigInt) -> Q {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut best = Q::from_integer(x.floor().to_integer());
    let mut rest = x.clone();
    loop {
        let a = rest.floor();
        let ai = a.to_integer();
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if &q2 > max_den {
            return best;
        }
        best = Q::new(p2.clone(), q2.clone());
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = rest - a;
        if frac.is_zero() {
            return best;
        }
        rest = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses() {
        assert_eq!(fmt_q(&qf(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(5)), "5");
        assert_eq!(parse_q("-3/2"), Some(qf(-3, 2)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("1/0"), None);
    }

    #[test]
    fn convergents_of_pi() {
        let c = convergents(std::f64::consts::PI, 1000);
        let s: Vec<String> = c.iter().map(fmt_q).collect();
        assert_eq!(s, vec!["3", "22/7", "333/106", "355/113"]);
        assert_eq!(best_rational(std::f64::consts::PI, 113), qf(355, 113));
        assert_eq!(best_rational(0.5, 16), qf(1, 2));
        assert_eq!(best_rational(-0.75, 16), qf(-3, 4));
        let near = qf(355, 113) + Q::new(BigInt::one(), BigInt::from(10).pow(30));
        assert_eq!(reconstruct(&near, &BigInt::from(1000)), qf(355, 113));
        assert_eq!(reconstruct(&qf(-7, 3), &BigInt::from(10)), qf(-7, 3));
    }
}
