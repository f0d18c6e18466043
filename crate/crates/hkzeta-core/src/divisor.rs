//! Places, divisors, Riemann–Roch dimensions, the divisor Möbius function and
//! the counting functions built from it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::curve::CurveData;
use crate::error::{domain, Error, Result};
use crate::ffq::{Factorizer, FqField, Poly, RationalFunction};
use crate::series::Q;

/// A place of the base curve. `Infinity` sorts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    /// The place of a monic irreducible polynomial of `F_q[T]`.
    Finite(Poly),
    /// A place of a curve known only through its data: `index`-th place of `degree`.
    Abstract { degree: u32, index: u32 },
}

impl Place {
    /// Residue degree `f_v`.
    pub fn degree(&self) -> u32 {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.deg0() as u32,
            Place::Abstract { degree, .. } => *degree,
        }
    }
}

/// A finite integer combination of places.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Divisor {
    coeffs: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(place: Place, coeff: i64) -> Self {
        Self::from_pairs([(place, coeff)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut d = Divisor::zero();
        for (p, c) in pairs {
            d.add_at(p, c);
        }
        d
    }

    fn add_at(&mut self, p: Place, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(p.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    /// Places with nonzero coefficient, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.coeffs.iter().map(|(p, c)| (p, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|(p, c)| p.degree() as i64 * c).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// Coefficientwise `self <= o`.
    pub fn le(&self, o: &Divisor) -> bool {
        let keys = self.coeffs.keys().chain(o.coeffs.keys());
        keys.into_iter().all(|p| self.coeff(p) <= o.coeff(p))
    }

    pub fn scale(&self, n: i64) -> Divisor {
        Divisor::from_pairs(self.coeffs.iter().map(|(p, c)| (p.clone(), c * n)))
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self + &o.scale(-1)
    }

    /// Coefficientwise floor of `D / n`.
    pub fn floor_div(&self, n: i64) -> Divisor {
        assert!(n >= 1, "floor division by a non-positive integer");
        Divisor::from_pairs(self.coeffs.iter().map(|(p, c)| (p.clone(), c.div_euclid(n))))
    }

    /// Every `D'` with `0 <= D' <= self`, in mixed-radix order over the places.
    pub fn sub_divisors(&self) -> Result<Vec<Divisor>> {
        if !self.is_effective() {
            return Err(domain("sub-divisor lattice of a non-effective divisor"));
        }
        let mut out = alloc::vec![Divisor::zero()];
        for (p, c) in &self.coeffs {
            let mut next = Vec::with_capacity(out.len() * (*c as usize + 1));
            for d in &out {
                for k in 0..=*c {
                    let mut e = d.clone();
                    e.add_at(p.clone(), k);
                    next.push(e);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, c) in &o.coeffs {
            d.add_at(p.clone(), *c);
        }
        d
    }
}

/// Coefficientwise maximum of a nonempty list.
pub fn sup_divisors(list: &[Divisor]) -> Result<Divisor> {
    let (first, rest) = list.split_first().ok_or_else(|| domain("sup of an empty list"))?;
    let mut out = first.coeffs.clone();
    for d in rest {
        for (p, c) in &d.coeffs {
            let slot = out.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(*c);
        }
        for (p, c) in out.iter_mut() {
            if !d.coeffs.contains_key(p) {
                *c = (*c).max(0);
            }
        }
    }
    Ok(Divisor::from_pairs(out))
}

/// Pole divisor `(x)_∞`; `(0)_∞ = 0`.
pub fn infinite_divisor(x: &RationalFunction, fz: &Factorizer) -> Divisor {
    if x.is_zero() {
        return Divisor::zero();
    }
    let mut d = Divisor::zero();
    for (g, m) in fz.factor(x.den()).expect("denominator is nonzero") {
        d.add_at(Place::Finite(g), m as i64);
    }
    let excess = x.num().deg0() as i64 - x.den().deg0() as i64;
    if excess > 0 {
        d.add_at(Place::Infinity, excess);
    }
    d
}

/// Zero divisor `(x)_0`; `(0)_0 = 0`.
pub fn zero_divisor(x: &RationalFunction, fz: &Factorizer) -> Divisor {
    if x.is_zero() {
        return Divisor::zero();
    }
    infinite_divisor(&x.inv(fz.field()).expect("nonzero"), fz)
}

/// Riemann–Roch dimension `ℓ(D)`.
///
/// Genus 0 uses `deg + 1` for every divisor of nonnegative degree (all degree-n
/// classes on P^1 agree). Higher genus uses Riemann–Roch above `2g - 2` and the
/// curve's table below.
pub fn ell(d: &Divisor, curve: &CurveData) -> Result<u64> {
    let deg = d.degree();
    let g = curve.genus() as i64;
    if deg < 0 {
        return Ok(0);
    }
    if g == 0 {
        return Ok(deg as u64 + 1);
    }
    if deg > 2 * g - 2 {
        return Ok((deg + 1 - g) as u64);
    }
    if d.is_zero() {
        return Ok(1);
    }
    curve
        .ell_lookup(d)
        .ok_or_else(|| Error::MissingData(format!("no ℓ value for a divisor of degree {deg}")))
}

/// All effective divisors of degree exactly `n`.
pub fn enumerate_effective(n: u32, curve: &CurveData) -> Result<Vec<Divisor>> {
    let places = curve.places_up_to(n)?;
    let mut out = Vec::new();
    let mut stack: Vec<(usize, i64)> = Vec::new();
    effective_rec(&places, 0, n as i64, &mut stack, &mut out);
    Ok(out)
}

fn effective_rec(
    places: &[Place],
    start: usize,
    left: i64,
    stack: &mut Vec<(usize, i64)>,
    out: &mut Vec<Divisor>,
) {
    if left == 0 {
        out.push(Divisor::from_pairs(stack.iter().map(|(i, c)| (places[*i].clone(), *c))));
        return;
    }
    for i in start..places.len() {
        let f = places[i].degree() as i64;
        if f > left {
            continue;
        }
        for c in 1..=left / f {
            stack.push((i, c));
            effective_rec(places, i + 1, left - c * f, stack, out);
            stack.pop();
        }
    }
}

/// All effective divisors of degree at most `n`, by increasing degree.
pub fn enumerate_effective_up_to(n: u32, curve: &CurveData) -> Result<Vec<Divisor>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(enumerate_effective(k, curve)?);
    }
    Ok(out)
}

/// The divisor Möbius function: `(-1)^deg-count` on reduced divisors, else 0.
pub fn moebius(d: &Divisor) -> Result<i64> {
    if !d.is_effective() {
        return Err(domain("Möbius function of a non-effective divisor"));
    }
    let mut sign = 1;
    for (_, c) in d.terms() {
        match c {
            1 => sign = -sign,
            _ => return Ok(0),
        }
    }
    Ok(sign)
}

/// The unit `u` of the convolution algebra.
pub fn unit(d: &Divisor) -> i64 {
    i64::from(d.is_zero())
}

/// `(f ⋆ g)(D) = Σ_{0 <= D' <= D} f(D') g(D - D')`.
pub fn convolve<T, F, G>(f: F, g: G, d: &Divisor) -> Result<T>
where
    T: Zero + Add<Output = T> + Mul<Output = T>,
    F: Fn(&Divisor) -> Result<T>,
    G: Fn(&Divisor) -> Result<T>,
{
    let mut acc = T::zero();
    for sub in d.sub_divisors()? {
        let rest = d.sub(&sub);
        acc = acc + f(&sub)? * g(&rest)?;
    }
    Ok(acc)
}

/// `N_m^n(D) = q^(m ℓ(⌊D/n⌋))`, the number of `x ∈ A^m` with `n sup (x_i)_∞ <= D`.
pub fn n_count(m: u32, n: u32, d: &Divisor, curve: &CurveData) -> Result<BigUint> {
    if !d.is_effective() {
        return Err(domain("N is defined on effective divisors"));
    }
    let l = ell(&d.floor_div(n as i64), curve)?;
    Ok(num_traits::pow(BigUint::from(curve.q()), (m as u64 * l) as usize))
}

/// `Ñ_m = N_m^1 ⋆ μ`: the number of `x ∈ A^m` with `sup (x_i)_∞ = D` exactly.
pub fn n_tilde(m: u32, d: &Divisor, curve: &CurveData) -> Result<BigInt> {
    convolve(
        |a: &Divisor| Ok(BigInt::from(n_count(m, 1, a, curve)?)),
        |b: &Divisor| Ok(BigInt::from(moebius(b)?)),
        d,
    )
}

/// `F_m(D) = ∏_{v(D) > 0} (1 - q^(-m f_v))`.
pub fn f_factor(m: u32, d: &Divisor, q: u64) -> Result<Q> {
    if !d.is_effective() {
        return Err(domain("F is defined on effective divisors"));
    }
    let mut acc = Q::one();
    for (p, c) in d.terms() {
        if c > 0 {
            let qf = num_traits::pow(BigInt::from(q), (m * p.degree()) as usize);
            acc *= Q::one() - Q::new(BigInt::one(), qf);
        }
    }
    Ok(acc)
}

/// Pole divisor helper that builds its own factorizer.
pub fn pole_divisor(x: &RationalFunction, f: &FqField) -> Divisor {
    infinite_divisor(x, &Factorizer::new(f, x.pole_degree() / 2))
}
