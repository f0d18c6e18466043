//! Finite fields `F_q`, polynomials over them and normalized elements of `F_q(T)`.
//!
//! Field elements are small integers. For `q = p^k` with `k > 1` the element
//! `c_0 + c_1 u + ... + c_{k-1} u^{k-1}` (with `u` a root of the fixed modulus)
//! is stored as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Arithmetic goes through
//! precomputed tables, so `q` is capped at [`MAX_ORDER`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{domain, parse_err, Error, Result};

pub type FqElem = u32;

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// A finite field with table-driven arithmetic.
#[derive(Clone, Debug)]
pub struct FqField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for FqField {}

// Raw polynomials over F_p, low degree first, used only to build extension tables.
fn raw_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn raw_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = raw_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = raw_trim(r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u32;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn raw_from_index(mut idx: u32, len: usize, p: u32) -> Vec<u32> {
    let mut v = vec![0; len];
    for c in v.iter_mut() {
        *c = idx % p;
        idx /= p;
    }
    v
}

fn raw_is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut g = raw_from_index(idx, d, p);
            g.push(1);
            if raw_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree `k` over `F_p`,
/// comparing coefficient vectors from `u^{k-1}` down to `u^0`.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..p.pow(k))
        .map(|idx| {
            let mut f = raw_from_index(idx, k as usize, p);
            f.push(1);
            f
        })
        .find(|f| raw_is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FqField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// The field of order `p^k`, built over the fixed modulus of degree `k`.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(domain(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(domain("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::Unsupported(format!(
                "field order {p}^{k} exceeds {MAX_ORDER}"
            )));
        };
        let q = q as u32;
        let modulus = (k > 1).then(|| smallest_irreducible(p, k));
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let digits = |x: u32| raw_from_index(x, k as usize, p);
        let pack = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = pack(&s);
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let red = match &modulus {
                    Some(m) => raw_rem(&prod, m, p),
                    None => raw_trim(prod),
                };
                let mut red = red;
                red.resize(k as usize, 0);
                mul[(a * q + b) as usize] = pack(&red);
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Ok(FqField { p, k, q, modulus, add, mul, neg, inv })
    }

    /// The field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| domain(format!("{q} is not a prime power")))?;
        if p > MAX_ORDER as u64 {
            return Err(Error::Unsupported(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        Self::new(p as u32, k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Modulus over `F_p`, low degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a == 0 {
            return Err(domain("inverse of zero"));
        }
        Ok(self.inv[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        0..self.q
    }

    /// Text form of an element: an integer for prime fields, a polynomial in `u` otherwise.
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.k == 1 {
            return format!("{a}");
        }
        let digits = raw_from_index(a, self.k as usize, self.p);
        let mut terms = Vec::new();
        for (j, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => String::from("u"),
                _ => format!("u^{j}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => format!("{c}"),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            String::from("0")
        } else {
            terms.join("+")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<FqElem> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
        let mut digits = vec![0u32; self.k as usize];
        for (coef, exp) in parse_terms(s, 'u')? {
            if exp >= self.k {
                return Err(parse_err(format!("u-degree {exp} too large in '{s}'")));
            }
            if exp > 0 && self.k == 1 {
                return Err(parse_err("'u' only exists in extension fields"));
            }
            let c: u64 = if coef.is_empty() {
                1
            } else {
                coef.parse().map_err(|_| parse_err(format!("bad coefficient '{coef}'")))?
            };
            let d = &mut digits[exp as usize];
            *d = ((*d as u64 + c) % self.p as u64) as u32;
        }
        Ok(digits.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }
}

/// Splits `s` into `(coefficient text, exponent of var)` terms at top-level `+`.
fn parse_terms(s: &str, var: char) -> Result<Vec<(String, u32)>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(parse_err(format!("unbalanced parentheses in '{s}'")));
        }
        if ch == '+' && depth == 0 {
            parts.push(core::mem::take(&mut cur));
        } else if !ch.is_whitespace() {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(parse_err(format!("unbalanced parentheses in '{s}'")));
    }
    parts.push(cur);
    let mut out = Vec::new();
    for part in parts {
        if part.is_empty() {
            return Err(parse_err(format!("empty term in '{s}'")));
        }
        // The variable is the last top-level occurrence of `var`.
        let mut depth = 0;
        let mut pos = None;
        for (i, ch) in part.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c == var && depth == 0 => pos = Some(i),
                _ => {}
            }
        }
        match pos {
            None => out.push((part, 0)),
            Some(i) => {
                let coef = String::from(part[..i].trim_end_matches('*'));
                let rest = &part[i + var.len_utf8()..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| parse_err(format!("bad exponent in '{part}'")))?
                };
                out.push((coef, exp));
            }
        }
    }
    Ok(out)
}

/// A polynomial over `F_q`, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<FqElem>,
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn one() -> Self {
        Poly { c: vec![1] }
    }
    pub fn constant(a: FqElem) -> Self {
        Self::from_coeffs(vec![a])
    }
    /// `T`.
    pub fn t() -> Self {
        Poly { c: vec![0, 1] }
    }
    /// Coefficients from low to high degree; trailing zeros are dropped.
    pub fn from_coeffs(mut c: Vec<FqElem>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }
    /// The polynomial whose coefficients are the base-`q` digits of `idx` (`len` of them).
    pub fn from_index(mut idx: u64, len: usize, q: u32) -> Self {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        Self::from_coeffs(c)
    }
    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with the zero polynomial counted as 0.
    pub fn deg0(&self) -> usize {
        self.c.len().saturating_sub(1)
    }
    pub fn lead(&self) -> FqElem {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, o: &Poly, f: &FqField) -> Poly {
        let n = self.c.len().max(o.c.len());
        let get = |v: &Vec<u32>, i: usize| v.get(i).copied().unwrap_or(0);
        Poly::from_coeffs((0..n).map(|i| f.add(get(&self.c, i), get(&o.c, i))).collect())
    }
    pub fn neg(&self, f: &FqField) -> Poly {
        Poly { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }
    pub fn sub(&self, o: &Poly, f: &FqField) -> Poly {
        self.add(&o.neg(f), f)
    }
    pub fn scale(&self, a: FqElem, f: &FqField) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|&x| f.mul(a, x)).collect())
    }
    pub fn mul(&self, o: &Poly, f: &FqField) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }
    pub fn pow(&self, e: u32, f: &FqField) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly, f: &FqField) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or_else(|| domain("polynomial division by zero"))?;
        let lead_inv = f.inv(d.lead())?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![0; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], lead_inv);
            if c == 0 {
                continue;
            }
            quo[top - dd] = c;
            for (i, &di) in d.c.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = f.sub(r[idx], f.mul(c, di));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &Poly, f: &FqField) -> Result<Poly> {
        Ok(self.div_rem(d, f)?.1)
    }

    /// `self` divided by `d` when the division is exact.
    pub fn exact_div(&self, d: &Poly, f: &FqField) -> Option<Poly> {
        match self.div_rem(d, f) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn monic(&self, f: &FqField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lead()).expect("nonzero lead");
        self.scale(inv, f)
    }

    pub fn gcd(&self, o: &Poly, f: &FqField) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, x: FqElem, f: &FqField) -> FqElem {
        self.c.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Irreducibility by trial division against all monic polynomials of degree up to half.
    pub fn is_irreducible(&self, f: &FqField) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        (1..=n / 2).all(|d| monic_polys(f, d).all(|g| !self.rem(&g, f).expect("monic").is_zero()))
    }
}

impl FqField {
    /// Text form `c_n*T^n+...+c_0`; extension-field coefficients are parenthesized `u`-polynomials.
    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return String::from("0");
        }
        let mut terms = Vec::new();
        for (i, &c) in p.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => String::from("T"),
                _ => format!("T^{i}"),
            };
            let mut coef = self.format_elem(c);
            if coef.contains('+') {
                coef = format!("({coef})");
            }
            terms.push(match (c, mono.is_empty()) {
                (_, true) => coef,
                (1, false) => mono,
                (_, false) => format!("{coef}*{mono}"),
            });
        }
        terms.join("+")
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut c: Vec<FqElem> = Vec::new();
        for (coef, exp) in parse_terms(s, 'T')? {
            let a = if coef.is_empty() { 1 } else { self.parse_elem(&coef)? };
            let e = exp as usize;
            if c.len() <= e {
                c.resize(e + 1, 0);
            }
            c[e] = self.add(c[e], a);
        }
        Ok(Poly::from_coeffs(c))
    }
}

/// All monic polynomials of degree exactly `n`, in increasing [`Poly`] order.
pub fn monic_polys(f: &FqField, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = (f.q() as u64).pow(n as u32);
    (0..count).map(move |idx| {
        let mut c = Poly::from_index(idx, n, f.q()).c;
        c.resize(n, 0);
        c.push(1);
        Poly { c }
    })
}

/// All polynomials of degree at most `n`, the zero polynomial included.
pub fn polys_up_to(f: &FqField, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let count = (f.q() as u64).pow(n as u32 + 1);
    (0..count).map(move |idx| Poly::from_index(idx, n + 1, f.q()))
}

/// All polynomials of degree exactly `n`.
pub fn polys_of_degree(f: &FqField, n: usize) -> impl Iterator<Item = Poly> + '_ {
    (1..f.q()).flat_map(move |lead| monic_polys(f, n).map(move |m| m.scale(lead, f)))
}

/// Number of monic irreducibles of degree `n` over `F_q`.
pub fn irreducible_count(q: u64, n: u32) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += moebius_int(d as u64) as i128 * (q as i128).pow(n / d);
        }
    }
    (total / n as i128) as u64
}

/// The classical Möbius function on positive integers.
pub fn moebius_int(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Monic irreducibles of degree at most `bound`, sorted by degree then coefficients.
pub fn enumerate_monic_irreducibles(f: &FqField, bound: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for n in 1..=bound {
        let small: Vec<Poly> = out.iter().filter(|g| g.deg0() <= n / 2).cloned().collect();
        for cand in monic_polys(f, n) {
            if small.iter().all(|g| !cand.rem(g, f).expect("monic").is_zero()) {
                out.push(cand);
            }
        }
    }
    out
}

/// Trial-division factorizer with a cached table of irreducibles.
#[derive(Clone, Debug)]
pub struct Factorizer {
    field: FqField,
    irreducibles: Vec<Poly>,
    bound: usize,
}

impl Factorizer {
    /// Ready to factor polynomials of degree up to `2 * half + 1` without growing its table.
    pub fn new(field: &FqField, half: usize) -> Self {
        Factorizer {
            field: field.clone(),
            irreducibles: enumerate_monic_irreducibles(field, half),
            bound: half,
        }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Monic irreducible factors with multiplicities, sorted. The leading unit is dropped.
    pub fn factor(&self, p: &Poly) -> Result<Vec<(Poly, u32)>> {
        if p.is_zero() {
            return Err(domain("cannot factor the zero polynomial"));
        }
        let f = &self.field;
        let mut rest = p.monic(f);
        if rest.deg0() / 2 > self.bound {
            return Err(Error::Unsupported(format!(
                "factorizer table covers degree {} only",
                2 * self.bound + 1
            )));
        }
        let mut out = Vec::new();
        for g in &self.irreducibles {
            if 2 * g.deg0() > rest.deg0() {
                break;
            }
            let mut mult = 0;
            while let Some(qt) = rest.exact_div(g, f) {
                rest = qt;
                mult += 1;
            }
            if mult > 0 {
                out.push((g.clone(), mult));
            }
        }
        if rest.deg0() > 0 {
            out.push((rest, 1));
            out.sort();
        }
        Ok(out)
    }
}

/// Factors `p` by trial division, building the irreducible table on the fly.
pub fn factor(f: &FqField, p: &Poly) -> Result<Vec<(Poly, u32)>> {
    Factorizer::new(f, p.deg0() / 2).factor(p)
}

/// An element of `F_q(T)` as `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly, f: &FqField) -> Result<Self> {
        if den.is_zero() {
            return Err(domain("zero denominator"));
        }
        let g = num.gcd(&den, f);
        let num = num.exact_div(&g, f).expect("gcd divides");
        let den = den.exact_div(&g, f).expect("gcd divides");
        let lc = f.inv(den.lead())?;
        Ok(RationalFunction { num: num.scale(lc, f), den: den.scale(lc, f) })
    }
    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> Self {
        RationalFunction { num: Poly::one(), den: Poly::one() }
    }
    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }
    pub fn constant(a: FqElem) -> Self {
        Self::from_poly(Poly::constant(a))
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// Degree of the pole divisor: `max(deg num, deg den)` (0 for zero).
    pub fn pole_degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn mul(&self, o: &Self, f: &FqField) -> Self {
        Self::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).expect("nonzero den")
    }
    pub fn add(&self, o: &Self, f: &FqField) -> Self {
        let n = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f);
        Self::new(n, self.den.mul(&o.den, f), f).expect("nonzero den")
    }
    pub fn neg(&self, f: &FqField) -> Self {
        RationalFunction { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn inv(&self, f: &FqField) -> Result<Self> {
        if self.is_zero() {
            return Err(domain("inverse of zero"));
        }
        Self::new(self.den.clone(), self.num.clone(), f)
    }
    pub fn pow(&self, e: u32, f: &FqField) -> Self {
        RationalFunction { num: self.num.pow(e, f), den: self.den.pow(e, f) }
    }

    pub fn format(&self, f: &FqField) -> String {
        if self.den.is_one() {
            f.format_poly(&self.num)
        } else {
            format!("({})/({})", f.format_poly(&self.num), f.format_poly(&self.den))
        }
    }
}

/// Every `x` in `F_q(T)` with pole degree at most `bound`, each once, by increasing pole degree.
///
/// There are `q^(2*bound+1)` of them.
pub fn enumerate_rational_functions(
    f: &FqField,
    bound: usize,
) -> impl Iterator<Item = RationalFunction> + '_ {
    (0..=bound).flat_map(move |n| rational_functions_of_pole_degree(f, n))
}

/// Every `x` with pole degree exactly `n`.
pub fn rational_functions_of_pole_degree(
    f: &FqField,
    n: usize,
) -> impl Iterator<Item = RationalFunction> + '_ {
    (0..=n).flat_map(move |dg| {
        monic_polys(f, dg).flat_map(move |g| {
            let nums: alloc::boxed::Box<dyn Iterator<Item = Poly>> = if dg == n {
                alloc::boxed::Box::new(polys_up_to(f, n))
            } else {
                alloc::boxed::Box::new(polys_of_degree(f, n))
            };
            nums.filter_map(move |num| {
                num.gcd(&g, f)
                    .is_one()
                    .then(|| RationalFunction { num, den: g.clone() })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_field_axioms() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FqField::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn field_examples() {
        let f2 = FqField::prime(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f3 = FqField::prime(3).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        assert!(f3.inv(0).is_err());
        let f4 = FqField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        let u = f4.parse_elem("u").unwrap();
        let u1 = f4.parse_elem("u+1").unwrap();
        assert_eq!(f4.mul(u, u1), 1);
        let f8 = FqField::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), Some(&[1, 1, 0, 1][..]));
    }

    #[test]
    fn gcd_examples() {
        let f = FqField::prime(3).unwrap();
        let a = f.parse_poly("T^2+2").unwrap();
        let b = f.parse_poly("T+2").unwrap();
        assert_eq!(a.gcd(&b, &f), b);
        let c = f.parse_poly("2*T^2+T").unwrap();
        assert_eq!(c.gcd(&Poly::zero(), &f), c.monic(&f));
        assert!(Poly::zero().gcd(&Poly::zero(), &f).is_zero());
    }

    #[test]
    fn factor_examples() {
        let f = FqField::prime(2).unwrap();
        let p = f.parse_poly("T^2+T").unwrap();
        assert_eq!(
            factor(&f, &p).unwrap(),
            vec![(Poly::t(), 1), (f.parse_poly("T+1").unwrap(), 1)]
        );
        let irr = f.parse_poly("T^2+T+1").unwrap();
        assert_eq!(factor(&f, &irr).unwrap(), vec![(irr.clone(), 1)]);
        assert!(factor(&f, &Poly::zero()).is_err());
    }

    #[test]
    fn irreducible_counts() {
        let f2 = FqField::prime(2).unwrap();
        let irr = enumerate_monic_irreducibles(&f2, 8);
        for n in 1..=8 {
            let c = irr.iter().filter(|g| g.deg0() == n).count() as u64;
            assert_eq!(c, irreducible_count(2, n as u32));
        }
        assert_eq!(irreducible_count(2, 2), 1);
        assert_eq!(irreducible_count(3, 2), 3);
        let f4 = FqField::with_order(4).unwrap();
        let irr4 = enumerate_monic_irreducibles(&f4, 3);
        assert_eq!(irr4.iter().filter(|g| g.deg0() == 3).count(), 20);
        for g in &irr4 {
            assert!(g.is_irreducible(&f4));
        }
    }

    #[test]
    fn rational_function_enumeration_counts() {
        for q in [2u64, 3, 4] {
            let f = FqField::with_order(q).unwrap();
            for b in 0..=2usize {
                let all: Vec<_> = enumerate_rational_functions(&f, b).collect();
                assert_eq!(all.len() as u64, q.pow(2 * b as u32 + 1));
                let set: HashSet<_> = all.iter().cloned().collect();
                assert_eq!(set.len(), all.len());
                for x in &all {
                    assert!(x.den().is_monic());
                    assert!(x.num().gcd(x.den(), &f).is_one());
                    assert!(x.pole_degree() <= b);
                    for c in f.elements() {
                        let y = x.add(&RationalFunction::constant(c), &f);
                        assert!(set.contains(&y));
                    }
                }
            }
        }
    }

    #[test]
    fn poly_text_round_trip() {
        let f9 = FqField::with_order(9).unwrap();
        for p in polys_up_to(&f9, 2).step_by(7) {
            let s = f9.format_poly(&p);
            assert_eq!(f9.parse_poly(&s).unwrap(), p, "{s}");
        }
        let f2 = FqField::prime(2).unwrap();
        assert_eq!(f2.format_poly(&f2.parse_poly("T^3 + T + 1").unwrap()), "T^3+T+1");
        assert!(f2.parse_poly("T^").is_err());
        assert!(f2.parse_poly("u*T").is_err());
    }
}
