//! Dense polynomials over `Q`, coefficients from low to high degree.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type QPoly = Vec<Q>;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_big(n: &BigUint) -> Q {
    Q::from_integer(BigInt::from(n.clone()))
}

pub fn trim(mut a: QPoly) -> QPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn add(a: &[Q], b: &[Q]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Q::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn sub(a: &[Q], b: &[Q]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Q::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub fn scale(a: &[Q], s: &Q) -> QPoly {
    trim(a.iter().map(|c| c * s).collect())
}

pub fn mul(a: &[Q], b: &[Q]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Euclidean division by a nonzero polynomial.
pub fn div_rem(a: &[Q], d: &[Q]) -> (QPoly, QPoly) {
    let d = trim(d.to_vec());
    assert!(!d.is_empty(), "division by the zero polynomial");
    let dd = d.len() - 1;
    let mut r = trim(a.to_vec());
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let lead = d[dd].clone();
    let mut quo = vec![Q::zero(); r.len() - dd];
    for top in (dd..r.len()).rev() {
        if r[top].is_zero() {
            continue;
        }
        let c = &r[top] / &lead;
        for (i, di) in d.iter().enumerate() {
            let t = &c * di;
            r[top - dd + i] -= t;
        }
        quo[top - dd] = c;
    }
    r.truncate(dd);
    (trim(quo), trim(r))
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: &[Q], m: &[Q]) -> Option<QPoly> {
    // Invariant: s_i * a ≡ r_i (mod m).
    let (mut r0, mut r1) = (trim(m.to_vec()), div_rem(a, m).1);
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (quo, rem) = div_rem(&r0, &r1);
        let s2 = sub(&s0, &mul(&quo, &s1));
        r0 = core::mem::replace(&mut r1, rem);
        s0 = core::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = Q::one() / &r0[0];
    Some(div_rem(&scale(&s0, &inv), m).1)
}

pub fn eval(a: &[Q], x: &Q) -> Q {
    a.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// `(1 - c T^m)^k` expanded.
pub fn one_minus_pow(c: &Q, m: u32, k: u32) -> QPoly {
    let mut base = vec![Q::zero(); m as usize + 1];
    base[0] = Q::one();
    base[m as usize] = -c.clone();
    let base = trim(base);
    (0..k).fold(vec![Q::one()], |acc, _| mul(&acc, &base))
}

/// Power series of `num / den` to order `n` (inclusive); `den(0)` must be nonzero.
pub fn series_div(num: &[Q], den: &[Q], n: usize) -> Option<QPoly> {
    let d0 = den.first().filter(|c| !c.is_zero())?.clone();
    let mut out = vec![Q::zero(); n + 1];
    for i in 0..=n {
        let mut acc = num.get(i).cloned().unwrap_or_else(Q::zero);
        for j in 1..den.len().min(i + 1) {
            acc -= &den[j] * &out[i - j];
        }
        out[i] = acc / &d0;
    }
    Some(out)
}

/// The polynomial `binom(n + s - 1, s - 1)` in `n`.
pub fn binomial_poly(s: u32) -> QPoly {
    let mut acc = vec![Q::one()];
    for i in 1..s {
        let fac = vec![q_int(i as i64) / q_int(i as i64), Q::one() / q_int(i as i64)];
        acc = mul(&acc, &fac);
    }
    acc
}

/// `binom(n + s - 1, s - 1)` for a concrete `n >= 0`.
pub fn binomial(n: u64, s: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 1..s as u64 {
        acc = acc * BigUint::from(n + i) / BigUint::from(i);
    }
    acc
}

/// `p(a*x + b)` for a polynomial `p`.
pub fn compose_linear(p: &[Q], a: &Q, b: &Q) -> QPoly {
    let lin = vec![b.clone(), a.clone()];
    let mut out: QPoly = Vec::new();
    for c in p.iter().rev() {
        out = add(&mul(&out, &lin), core::slice::from_ref(c));
    }
    out
}
