//! Exact real numbers in `Q(p^(1/n))`.
//!
//! Leading constants evaluate `zeta_K` at rational points, which produces
//! rational functions of `q^(1/n)`. Elements are stored as polynomials in
//! `θ = p^(1/n)` (real positive root, `p` prime) reduced by `θ^n = p`.
//! Since `x^n - p` is Eisenstein the ring is a field.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qpoly::{self, q_int, Q};
use crate::error::{domain, Error, Result};
use crate::ffq::prime_power;

#[derive(Clone, Debug)]
pub struct Radical {
    p: u64,
    n: u32,
    c: Vec<Q>,
}

impl Radical {
    pub fn rational(v: Q) -> Self {
        Radical { p: 1, n: 1, c: vec![v] }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    /// `q^e` for a prime power `q` and rational `e`.
    pub fn q_pow(q: u64, e: &Q) -> Self {
        let (p, k) = prime_power(q).expect("q is a prime power");
        let u = e.numer() * BigInt::from(k);
        let v = e.denom().clone();
        let g = u.gcd(&v);
        let (u, v) = (u / &g, v / &g);
        let (w, r) = u.div_mod_floor(&v);
        let pw = pow_q(p, w.to_i64().expect("exponent fits"));
        let n = v.to_u32().expect("root order fits");
        if n == 1 {
            return Self::rational(pw);
        }
        let mut c = vec![Q::zero(); n as usize];
        c[r.to_usize().expect("small")] = pw;
        Radical { p, n, c }
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.c[0].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Prime under the radical and root order; `(1, 1)` for rationals.
    pub fn field(&self) -> (u64, u32) {
        if self.n == 1 {
            (1, 1)
        } else {
            (self.p, self.n)
        }
    }

    /// Coefficients of `1, θ, ..., θ^(n-1)`.
    pub fn coefficients(&self) -> &[Q] {
        &self.c
    }

    fn lift(&self, p: u64, n: u32) -> Radical {
        if self.n == n {
            return Radical { p, ..self.clone() };
        }
        let step = (n / self.n) as usize;
        let mut c = vec![Q::zero(); n as usize];
        for (i, v) in self.c.iter().enumerate() {
            c[i * step] = v.clone();
        }
        Radical { p, n, c }
    }

    fn common(a: &Radical, b: &Radical) -> (Radical, Radical) {
        let p = match (a.n, b.n) {
            (1, _) => b.p,
            (_, 1) => a.p,
            _ => {
                assert_eq!(a.p, b.p, "mixing radicals over different primes");
                a.p
            }
        };
        let n = a.n.lcm(&b.n);
        (a.lift(p, n), b.lift(p, n))
    }

    fn normalized(mut self) -> Radical {
        let mut g = self.n;
        for (i, v) in self.c.iter().enumerate() {
            if !v.is_zero() {
                g = g.gcd(&(i as u32));
            }
        }
        if g > 1 {
            let n = self.n / g;
            self.c = (0..n as usize).map(|i| self.c[i * g as usize].clone()).collect();
            self.n = n;
        }
        if self.n == 1 {
            self.p = 1;
        }
        self
    }

    pub fn add(&self, o: &Radical) -> Radical {
        let (a, b) = Self::common(self, o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        Radical { c, ..a }.normalized()
    }

    pub fn neg(&self) -> Radical {
        Radical { c: self.c.iter().map(|x| -x).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Radical) -> Radical {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Radical) -> Radical {
        let (a, b) = Self::common(self, o);
        let n = a.n as usize;
        let p = q_int(a.p as i64);
        let mut c = vec![Q::zero(); n];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                let t = x * y;
                if i + j >= n {
                    c[i + j - n] += t * &p;
                } else {
                    c[i + j] += t;
                }
            }
        }
        Radical { c, ..a }.normalized()
    }

    pub fn scale(&self, s: &Q) -> Radical {
        self.mul(&Radical::rational(s.clone()))
    }

    pub fn inv(&self) -> Result<Radical> {
        if self.is_zero() {
            return Err(domain("inverse of zero"));
        }
        if self.n == 1 {
            return Ok(Radical::rational(Q::one() / &self.c[0]));
        }
        let mut modulus = vec![Q::zero(); self.n as usize + 1];
        modulus[0] = -q_int(self.p as i64);
        modulus[self.n as usize] = Q::one();
        let inv = qpoly::inverse_mod(&self.c, &modulus)
            .ok_or_else(|| Error::Domain(String::from("non-invertible radical")))?;
        let mut c = inv;
        c.resize(self.n as usize, Q::zero());
        Ok(Radical { c, ..self.clone() }.normalized())
    }

    pub fn div(&self, o: &Radical) -> Result<Radical> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Radical> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Radical::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Rational bounds `lo <= θ <= hi` with `hi - lo <= width`.
    fn root_bounds(&self, width: &Q) -> (Q, Q) {
        let p = q_int(self.p as i64);
        let (mut lo, mut hi) = (Q::one(), p.clone());
        let two = q_int(2);
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / &two;
            if num_traits::pow(mid.clone(), self.n as usize) <= p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    /// Exact sign, by interval refinement of `θ`.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if self.n == 1 {
            return self.c[0].cmp(&Q::zero());
        }
        let mut width = Q::new(BigInt::one(), BigInt::from(16));
        loop {
            let (lo, hi) = self.root_bounds(&width);
            let (mut vlo, mut vhi) = (Q::zero(), Q::zero());
            let (mut plo, mut phi) = (Q::one(), Q::one());
            for c in &self.c {
                if c.is_negative() {
                    vlo += c * &phi;
                    vhi += c * &plo;
                } else {
                    vlo += c * &plo;
                    vhi += c * &phi;
                }
                plo *= &lo;
                phi *= &hi;
            }
            if vlo.is_positive() {
                return Ordering::Greater;
            }
            if vhi.is_negative() {
                return Ordering::Less;
            }
            width /= q_int(256);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let theta = if self.n == 1 {
            1.0
        } else {
            let (lo, hi) = self.root_bounds(&Q::new(BigInt::one(), BigInt::from(1u64 << 52)));
            ((lo + hi) / q_int(2)).to_f64().unwrap_or(f64::NAN)
        };
        let mut acc = 0.0;
        let mut pw = 1.0;
        for c in &self.c {
            acc += c.to_f64().unwrap_or(f64::NAN) * pw;
            pw *= theta;
        }
        acc
    }
}

pub(crate) fn pow_q(p: u64, e: i64) -> Q {
    let base = q_int(p as i64);
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        Q::one() / num_traits::pow(base, (-e) as usize)
    }
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}
impl Eq for Radical {}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Radical {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum()
    }
}

impl From<Q> for Radical {
    fn from(v: Q) -> Self {
        Radical::rational(v)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut terms = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                _ => format!("{c}*{}^({i}/{})", self.p, self.n),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

/// An exact value times `log(q)^log_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledConstant {
    pub value: Radical,
    pub log_exp: i32,
}

impl ScaledConstant {
    pub fn new(value: Radical, log_exp: i32) -> Self {
        ScaledConstant { value, log_exp }
    }

    pub fn rational(value: Q, log_exp: i32) -> Self {
        ScaledConstant { value: Radical::rational(value), log_exp }
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.value.as_rational()
    }

    /// Product, adding log exponents.
    pub fn mul(&self, o: &ScaledConstant) -> ScaledConstant {
        ScaledConstant { value: self.value.mul(&o.value), log_exp: self.log_exp + o.log_exp }
    }

    /// Numeric value with `log(q)` evaluated, for display only.
    pub fn approx(&self, q: u64) -> f64 {
        let mut l = 1.0;
        let lq = ln_f64(q as f64);
        for _ in 0..self.log_exp.unsigned_abs() {
            l *= lq;
        }
        if self.log_exp < 0 {
            l = 1.0 / l;
        }
        self.value.to_f64() * l
    }
}

impl fmt::Display for ScaledConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log_exp {
            0 => write!(f, "{}", self.value),
            e => write!(f, "({}) * log(q)^{e}", self.value),
        }
    }
}

/// Natural logarithm without `std`: range reduction plus the atanh series.
fn ln_f64(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    let (mut m, mut k) = (x, 0i32);
    while m > 2.0 {
        m /= 2.0;
        k += 1;
    }
    while m < 1.0 {
        m *= 2.0;
        k -= 1;
    }
    let z = (m - 1.0) / (m + 1.0);
    let z2 = z * z;
    let (mut term, mut sum) = (z, 0.0);
    let mut i = 1.0;
    while term.abs() > 1e-18 {
        sum += term / i;
        term *= z2;
        i += 2.0;
    }
    2.0 * sum + k as f64 * core::f64::consts::LN_2
}
