//! The base function field: its zeta function, special values, residue
//! constant and the sums `R_K`, `S_K`.
//!
//! For `F_q(T)` everything is built in. A curve of higher genus is described by
//! data: its L-polynomial, the number of places of each degree and the values
//! of `ℓ` on effective divisors of degree at most `2g - 2`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::divisor::{ell, enumerate_effective_up_to, Divisor, Place};
use crate::error::{domain, Error, Result};
use crate::ffq::{enumerate_monic_irreducibles, moebius_int, prime_power, FqField};
use crate::series::qpoly::q_int;
use crate::series::{FactoredRational, Radical, ScaledConstant, Q};

#[derive(Clone, Debug)]
pub enum PlaceSource {
    /// Genus 0: monic irreducibles of `F_q[T]` plus the place at infinity.
    Rational(FqField),
    /// `counts[d - 1]` places of degree `d`, known up to `counts.len()`.
    Counts(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct CurveData {
    q: u64,
    genus: u32,
    l_poly: Vec<i64>,
    places: PlaceSource,
    ell_table: BTreeMap<Divisor, u64>,
}

impl CurveData {
    /// The rational function field `F_q(T)`.
    pub fn rational(field: FqField) -> Self {
        CurveData {
            q: field.q() as u64,
            genus: 0,
            l_poly: alloc::vec![1],
            places: PlaceSource::Rational(field),
            ell_table: BTreeMap::new(),
        }
    }

    /// A curve described by data. `place_counts[d - 1]` is the number of places of degree `d`.
    pub fn new(
        q: u64,
        genus: u32,
        l_poly: Vec<i64>,
        place_counts: Vec<u64>,
        ell_table: BTreeMap<Divisor, u64>,
    ) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(domain(format!("{q} is not a prime power")));
        }
        if l_poly.len() != 2 * genus as usize + 1 || l_poly[0] != 1 {
            return Err(domain("L-polynomial must have degree 2g and constant term 1"));
        }
        if l_poly.iter().sum::<i64>() <= 0 {
            return Err(domain("class number L(1) must be positive"));
        }
        for d in ell_table.keys() {
            if !d.is_effective() || d.degree() > 2 * genus as i64 - 2 {
                return Err(domain("ℓ-table entries must be effective of degree at most 2g-2"));
            }
            if d.terms().any(|(p, _)| !matches!(p, Place::Abstract { .. })) {
                return Err(domain("curve data places must be abstract"));
            }
        }
        Ok(CurveData { q, genus, l_poly, places: PlaceSource::Counts(place_counts), ell_table })
    }

    /// Curve data whose place counts up to `max_degree` are derived from the L-polynomial.
    pub fn from_l_polynomial(
        q: u64,
        genus: u32,
        l_poly: Vec<i64>,
        max_degree: u32,
        ell_table: BTreeMap<Divisor, u64>,
    ) -> Result<Self> {
        let counts = place_counts_from_l(q, &l_poly, max_degree)?;
        Self::new(q, genus, l_poly, counts, ell_table)
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn genus(&self) -> u32 {
        self.genus
    }
    pub fn l_poly(&self) -> &[i64] {
        &self.l_poly
    }
    pub fn class_number(&self) -> u64 {
        self.l_poly.iter().sum::<i64>() as u64
    }
    /// The constant field, for the built-in genus-0 curve.
    pub fn field(&self) -> Option<&FqField> {
        match &self.places {
            PlaceSource::Rational(f) => Some(f),
            PlaceSource::Counts(_) => None,
        }
    }
    pub fn place_source(&self) -> &PlaceSource {
        &self.places
    }
    pub fn ell_table(&self) -> &BTreeMap<Divisor, u64> {
        &self.ell_table
    }
    pub fn ell_lookup(&self, d: &Divisor) -> Option<u64> {
        self.ell_table.get(d).copied()
    }

    /// Places of degree at most `n`, degree by degree.
    pub fn places_up_to(&self, n: u32) -> Result<Vec<Place>> {
        match &self.places {
            PlaceSource::Rational(f) => {
                let mut out = Vec::new();
                if n >= 1 {
                    out.push(Place::Infinity);
                }
                out.extend(enumerate_monic_irreducibles(f, n as usize).into_iter().map(Place::Finite));
                Ok(out)
            }
            PlaceSource::Counts(counts) => {
                if n as usize > counts.len() {
                    return Err(Error::MissingData(format!(
                        "place counts known only up to degree {}",
                        counts.len()
                    )));
                }
                let mut out = Vec::new();
                for (i, &c) in counts.iter().take(n as usize).enumerate() {
                    for index in 0..c as u32 {
                        out.push(Place::Abstract { degree: i as u32 + 1, index });
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Number of places of each degree `1..=max_degree` implied by an L-polynomial.
pub fn place_counts_from_l(q: u64, l_poly: &[i64], max_degree: u32) -> Result<Vec<u64>> {
    // Newton's identities for the reciprocal roots α_i of L(T) = ∏ (1 - α_i T).
    let e = |i: usize| -> i128 {
        let c = *l_poly.get(i).unwrap_or(&0) as i128;
        if i.is_multiple_of(2) { c } else { -c }
    };
    let mut power_sums: Vec<i128> = alloc::vec![0];
    for m in 1..=max_degree as usize {
        let mut s = 0i128;
        for i in 1..m {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            s += sign * e(i) * power_sums[m - i];
        }
        let sign = if m % 2 == 1 { 1 } else { -1 };
        s += sign * m as i128 * e(m);
        power_sums.push(s);
    }
    let n_points = |m: usize| (q as i128).pow(m as u32) + 1 - power_sums[m];
    let mut out = Vec::new();
    for n in 1..=max_degree as usize {
        let mut total = 0i128;
        for d in 1..=n {
            if n % d == 0 {
                total += moebius_int((n / d) as u64) as i128 * n_points(d);
            }
        }
        if total < 0 || total % n as i128 != 0 {
            return Err(domain("L-polynomial gives inconsistent place counts"));
        }
        out.push((total / n as i128) as u64);
    }
    Ok(out)
}

/// `Z_K(T) = L(T) / ((1 - T)(1 - qT))`.
pub fn zeta_k(curve: &CurveData) -> FactoredRational {
    let num = curve.l_poly.iter().map(|&c| q_int(c)).collect();
    FactoredRational::from_parts(num, &[(BigUint::one(), 1, 1), (BigUint::from(curve.q), 1, 1)])
}

/// `ζ_K(s) = Z_K(q^-s)` at an integer `s >= 2`.
pub fn zeta_k_at(curve: &CurveData, s: i64) -> Result<Q> {
    if s < 2 {
        return Err(Error::Divergent(format!("ζ_K({s}) is not given by a convergent series")));
    }
    Ok(zeta_k_at_real(curve, &q_int(s))?.as_rational().expect("integer point"))
}

/// `ζ_K(s)` at a rational `s > 1`, exactly in `Q(q^(1/den s))`.
pub fn zeta_k_at_real(curve: &CurveData, s: &Q) -> Result<Radical> {
    if s <= &Q::one() {
        return Err(Error::Divergent(format!("ζ_K({s}) is not given by a convergent series")));
    }
    let t = Radical::q_pow(curve.q, &-s.clone());
    let mut num = Radical::zero();
    let mut pw = Radical::one();
    for &c in &curve.l_poly {
        num = num.add(&pw.scale(&q_int(c)));
        pw = pw.mul(&t);
    }
    let one = Radical::one();
    let den = one.sub(&t).mul(&one.sub(&t.scale(&q_int(curve.q as i64))));
    num.div(&den)
}

/// `Res_{s=1} ζ_K(s) = h q^(1-g) / ((q-1) log q)`.
pub fn residue_constant(curve: &CurveData) -> ScaledConstant {
    let value = Radical::q_pow(curve.q, &q_int(1 - curve.genus as i64))
        .scale(&(q_int(curve.class_number() as i64) / q_int(curve.q as i64 - 1)));
    ScaledConstant::new(value, -1)
}

/// `S_K(a, b)`: the finite correction with `R_K(a,b) = q^(a(g-1)) ζ_K(a+b) + S_K(a,b)`.
pub fn s_k(curve: &CurveData, a: i64, b: &Q) -> Result<Radical> {
    let g = curve.genus as i64;
    if g == 0 {
        return Ok(Radical::zero());
    }
    let mut acc = Radical::zero();
    let a_q = q_int(a);
    for d in enumerate_effective_up_to((2 * g - 2) as u32, curve)? {
        let l = q_int(ell(&d, curve)? as i64);
        let deg = q_int(d.degree());
        let exact = Radical::q_pow(curve.q, &-(&a_q * &l + b * &deg));
        let rr = Radical::q_pow(curve.q, &(&a_q * q_int(g - 1) - (&a_q + b) * &deg));
        acc = acc.add(&exact.sub(&rr));
    }
    Ok(acc)
}

/// `R_K(a, b) = Σ_{D >= 0} q^(-(a ℓ(D) + b deg D))` for `a <= 0`, `a + b > 1`.
pub fn r_k(curve: &CurveData, a: i64, b: &Q) -> Result<Radical> {
    if a > 0 {
        return Err(domain("R_K is used with a <= 0"));
    }
    let s = q_int(a) + b;
    if s <= Q::one() {
        return Err(Error::Divergent(format!("R_K({a}, {b}) needs a + b > 1")));
    }
    let g = curve.genus as i64;
    let main = Radical::q_pow(curve.q, &q_int(a * (g - 1))).mul(&zeta_k_at_real(curve, &s)?);
    Ok(main.add(&s_k(curve, a, b)?))
}

/// `R_K` at integer arguments, as a rational.
pub fn r_k_int(curve: &CurveData, a: i64, b: i64) -> Result<Q> {
    Ok(r_k(curve, a, &q_int(b))?.as_rational().expect("integer arguments"))
}

/// Exact tail bound for the truncated defining sum of `R_K` over `deg D > n` (genus 0).
pub fn r_k_tail_bound(q: u64, a: i64, b: i64, n: u32) -> Result<Q> {
    // #{D >= 0 : deg D = k} <= 2 q^k, ℓ(D) = k + 1, so each degree contributes
    // at most 2 q^(-a) ρ^k with ρ = q^(1 - a - b) < 1.
    if a + b <= 1 {
        return Err(Error::Divergent(String::from("tail of a divergent sum")));
    }
    let qq = q_int(q as i64);
    let rho = Q::one() / num_traits::pow(qq.clone(), (a + b - 1) as usize);
    let lead = q_int(2) * num_traits::pow(qq, (-a) as usize);
    let tail = num_traits::pow(rho.clone(), n as usize + 1) / (Q::one() - rho);
    Ok(lead * tail)
}
