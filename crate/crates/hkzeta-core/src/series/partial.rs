//! Exact partial fractions in the basis `T^j / (1 - C T^L)^s` and the
//! per-residue-class coefficient formulas they imply.
//!
//! Factors `(1 - c T^m)` whose poles lie on the same circle are merged into
//! one `(1 - C T^L)` with `L` the lcm of their `m`'s. Distinct circles give
//! coprime blocks, so each block's numerator is the numerator times the
//! inverse of the other blocks, reduced modulo the block.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::qpoly::{self, q_big, q_int, Q, QPoly};
use super::radical::{Radical, ScaledConstant};
use super::FactoredRational;
use crate::error::{domain, Error, Result};

/// All poles on one circle `|T| = C^(-1/L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleGroup {
    pub c: BigUint,
    pub m: u32,
    /// `terms[j][s-1]` is the coefficient of `T^j / (1 - C T^L)^s`.
    pub terms: Vec<Vec<Q>>,
}

impl PoleGroup {
    /// Largest `s` with a nonzero coefficient (0 if the group cancelled out).
    pub fn order(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|row| row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s as u32 + 1))
            .max()
            .unwrap_or(0)
    }

    /// Contribution of this group to the coefficient of `T^big_m`.
    pub fn coefficient(&self, big_m: u64) -> Q {
        let l = self.m as u64;
        let j = (big_m % l) as usize;
        let n = big_m / l;
        let cn = q_big(&num_traits::pow(self.c.clone(), n as usize));
        let mut acc = Q::zero();
        for (s, b) in self.terms[j].iter().enumerate() {
            if !b.is_zero() {
                acc += b * q_big(&qpoly::binomial(n, s as u32 + 1));
            }
        }
        acc * cn
    }

    /// The class polynomial `p_j(n)` with `coefficient(j + L n) = p_j(n) C^n`.
    pub fn class_polynomial(&self, j: usize) -> QPoly {
        let mut p = Vec::new();
        for (s, b) in self.terms[j].iter().enumerate() {
            p = qpoly::add(&p, &qpoly::scale(&qpoly::binomial_poly(s as u32 + 1), b));
        }
        p
    }

    /// The group as a factored rational, for re-summation checks.
    pub fn to_rational(&self) -> FactoredRational {
        let k = self.terms.first().map_or(0, Vec::len) as u32;
        let l = self.m as usize;
        let cq = q_big(&self.c);
        let mut num: QPoly = Vec::new();
        for (j, row) in self.terms.iter().enumerate() {
            for (s, b) in row.iter().enumerate() {
                let s = s as u32 + 1;
                let mut mono = vec![Q::zero(); j + 1];
                mono[j] = b.clone();
                let rest = qpoly::one_minus_pow(&cq, l as u32, k - s);
                num = qpoly::add(&num, &qpoly::mul(&mono, &rest));
            }
        }
        FactoredRational::from_parts(num, &[(self.c.clone(), self.m, k)])
    }

    /// Whether `c^(1/m)` is a power of `q`; returns the exponent `log_q(c)/m`.
    pub fn growth_exponent(&self, q: u64) -> Option<Q> {
        log_q(&self.c, q).map(|e| Q::new(e.into(), self.m.into()))
    }

    /// `C^(1/L)` when it is an integer.
    pub fn integral_root(&self) -> Option<BigUint> {
        let r = self.c.nth_root(self.m);
        (num_traits::pow(r.clone(), self.m as usize) == self.c).then_some(r)
    }
}

fn log_q(c: &BigUint, q: u64) -> Option<i64> {
    let qb = BigUint::from(q);
    let (mut rest, mut e) = (c.clone(), 0i64);
    while rest > BigUint::one() {
        let (d, r) = rest.div_rem(&qb);
        if !r.is_zero() {
            return None;
        }
        rest = d;
        e += 1;
    }
    rest.is_one().then_some(e)
}

/// `Z = polynomial + Σ groups`, groups ordered from the dominant circle outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub polynomial: QPoly,
    pub groups: Vec<PoleGroup>,
}

impl PartialFractions {
    pub fn coefficient(&self, big_m: u64) -> Q {
        let mut acc = self.polynomial.get(big_m as usize).cloned().unwrap_or_else(Q::zero);
        for g in &self.groups {
            acc += g.coefficient(big_m);
        }
        acc
    }

    /// Sum of all pieces over a common denominator.
    pub fn resum(&self) -> FactoredRational {
        self.groups
            .iter()
            .fold(FactoredRational::from_poly(self.polynomial.clone()), |acc, g| acc.add(&g.to_rational()))
    }
}

/// Compares pole circles by `c^(1/m)`, largest (dominant) first.
fn circle_cmp(a: &(BigUint, u32), b: &(BigUint, u32)) -> Ordering {
    let lhs = num_traits::pow(a.0.clone(), b.1 as usize);
    let rhs = num_traits::pow(b.0.clone(), a.1 as usize);
    rhs.cmp(&lhs)
}

pub fn partial_fractions(z: &FactoredRational) -> Result<PartialFractions> {
    if z.has_general_denominator() {
        return Err(Error::Unsupported(String::from(
            "partial fractions need the denominator as a product of (1 - c T^m) factors",
        )));
    }
    let den = z.denominator_factors();
    let mut numerator = z.numerator();

    // Group by circle and merge each group into a power of one (1 - C T^L).
    let mut groups: Vec<Vec<(BigUint, u32, u32)>> = Vec::new();
    for (c, m, k) in &den {
        let key = (c.clone(), *m);
        match groups.iter_mut().find(|g| circle_cmp(&(g[0].0.clone(), g[0].1), &key) == Ordering::Equal) {
            Some(g) => g.push((c.clone(), *m, *k)),
            None => groups.push(vec![(c.clone(), *m, *k)]),
        }
    }
    groups.sort_by(|a, b| circle_cmp(&(a[0].0.clone(), a[0].1), &(b[0].0.clone(), b[0].1)));
    let mut blocks: Vec<(BigUint, u32, u32)> = Vec::new();
    for g in &groups {
        let l = g.iter().fold(1u32, |acc, (_, m, _)| acc.lcm(m));
        let big_c = num_traits::pow(g[0].0.clone(), (l / g[0].1) as usize);
        let mut kk = 0;
        for (c, m, k) in g {
            let ratio = l / m;
            debug_assert_eq!(num_traits::pow(c.clone(), ratio as usize), big_c);
            // 1/(1 - x) = (1 + x + ... + x^(ratio-1)) / (1 - x^ratio), x = c T^m
            let mut cof = vec![Q::zero(); ((ratio - 1) * m) as usize + 1];
            let mut pw = Q::one();
            for i in 0..ratio {
                cof[(i * m) as usize] = pw.clone();
                pw *= q_big(c);
            }
            for _ in 0..*k {
                numerator = qpoly::mul(&numerator, &cof);
            }
            kk += k;
        }
        blocks.push((big_c, l, kk));
    }

    let block_polys: Vec<QPoly> =
        blocks.iter().map(|(c, l, k)| qpoly::one_minus_pow(&q_big(c), *l, *k)).collect();
    let full = block_polys.iter().fold(vec![Q::one()], |acc, b| qpoly::mul(&acc, b));
    let (polynomial, rem) = qpoly::div_rem(&numerator, &full);

    let mut out_groups = Vec::new();
    for (i, (c, l, k)) in blocks.iter().enumerate() {
        let block = &block_polys[i];
        let rest = block_polys
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(vec![Q::one()], |acc, (_, b)| qpoly::mul(&acc, b));
        let inv = qpoly::inverse_mod(&rest, block).ok_or_else(|| domain("pole blocks not coprime"))?;
        let a = qpoly::div_rem(&qpoly::mul(&rem, &inv), block).1;
        // A(T) = Σ_j T^j a_j(T^L); rewrite a_j(y) in powers of w = 1 - C y.
        let cq = q_big(c);
        let mut terms = vec![vec![Q::zero(); *k as usize]; *l as usize];
        for (j, row) in terms.iter_mut().enumerate() {
            let alpha: Vec<Q> = (0..*k as usize)
                .map(|i| a.get(j + i * *l as usize).cloned().unwrap_or_else(Q::zero))
                .collect();
            let mut beta = vec![Q::zero(); *k as usize];
            let mut cinv = Q::one();
            for (i, al) in alpha.iter().enumerate() {
                if !al.is_zero() {
                    for (e, slot) in beta.iter_mut().enumerate().take(i + 1) {
                        let sign = if e % 2 == 0 { Q::one() } else { -Q::one() };
                        *slot += al * &cinv * q_big(&choose(i as u64, e as u64)) * sign;
                    }
                }
                cinv /= &cq;
            }
            for s in 1..=*k as usize {
                row[s - 1] = beta[*k as usize - s].clone();
            }
        }
        out_groups.push(PoleGroup { c: c.clone(), m: *l, terms });
    }
    Ok(PartialFractions { polynomial, groups: out_groups })
}

fn choose(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dominant-circle data of a factored rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticExpansion {
    /// Dominant circle: main terms grow like `C^(M/L)` with `(C, L) = base`.
    pub base: (BigUint, u32),
    /// Pole order `b`; class polynomials have degree `b - 1`.
    pub order: u32,
    /// `classes[j]` is `p_j(n)` with main term `p_j(n) C^n` at `M = j + L n`.
    pub classes: Vec<QPoly>,
    /// Next circle inward, if any.
    pub next_base: Option<(BigUint, u32)>,
    pub fractions: PartialFractions,
}

pub fn asymptotics(z: &FactoredRational) -> Result<AsymptoticExpansion> {
    let pf = partial_fractions(z)?;
    let mut active = pf.groups.iter().filter(|g| g.order() > 0);
    let dom = active
        .next()
        .ok_or_else(|| domain("finitely supported: the series has no poles"))?
        .clone();
    let next_base = active.next().map(|g| (g.c.clone(), g.m));
    let classes = (0..dom.m as usize).map(|j| dom.class_polynomial(j)).collect();
    Ok(AsymptoticExpansion {
        base: (dom.c.clone(), dom.m),
        order: dom.order(),
        classes,
        next_base,
        fractions: pf,
    })
}

impl AsymptoticExpansion {
    fn dominant(&self) -> &PoleGroup {
        self.fractions
            .groups
            .iter()
            .find(|g| (g.c.clone(), g.m) == self.base)
            .expect("dominant group is present")
    }

    /// Main-term prediction for the coefficient of `T^big_m`.
    pub fn main_term(&self, big_m: u64) -> Q {
        self.dominant().coefficient(big_m)
    }

    /// `log_q` of the growth base `C^(1/L)`, when `C` is a power of `q`.
    pub fn growth_exponent(&self, q: u64) -> Option<Q> {
        self.dominant().growth_exponent(q)
    }

    /// `log_q` of the next circle's base: the error term is `O(q^(δ M))` for any larger δ.
    pub fn error_exponent(&self, q: u64) -> Option<Q> {
        let (c, m) = self.next_base.as_ref()?;
        log_q(c, q).map(|e| Q::new(e.into(), (*m).into()))
    }

    /// `Q_j(M)` with main term `Q_j(M) ρ^M`, `ρ = C^(1/L)`, when `ρ` is an integer.
    pub fn class_polynomial_in_m(&self, j: usize) -> Option<QPoly> {
        let rho = self.dominant().integral_root()?;
        let l = q_int(self.base.1 as i64);
        let p = qpoly::compose_linear(&self.classes[j], &(Q::one() / &l), &(-q_int(j as i64) / &l));
        let shift = Q::one() / q_big(&num_traits::pow(rho, j));
        Some(qpoly::scale(&p, &shift))
    }

    /// The limit `lim (s - a)^b ζ(s)` at the real pole `s = a`, with `ζ(s) = Z(q^-s)`.
    ///
    /// Equals `(b-1)!` times the average over residue classes of the leading
    /// coefficient of `Q_j(M)`, divided by `log(q)^b`. Needs `C` to be a power of `q`.
    pub fn limit_constant(&self, q: u64) -> Result<ScaledConstant> {
        let a = self
            .growth_exponent(q)
            .ok_or_else(|| Error::Unsupported(String::from("pole circle is not a power of q")))?;
        let b = self.order as usize;
        let l = self.base.1 as usize;
        let lpow = num_traits::pow(q_int(l as i64), b - 1);
        let mut sum = Radical::zero();
        for (j, p) in self.classes.iter().enumerate() {
            let lead = p.get(b - 1).cloned().unwrap_or_else(Q::zero) / &lpow;
            let shift = Radical::q_pow(q, &(-&a * q_int(j as i64)));
            sum = sum.add(&shift.scale(&lead));
        }
        let fact: u64 = (1..b as u64).product();
        let value = sum.scale(&(q_int(fact as i64) / q_int(l as i64)));
        Ok(ScaledConstant::new(value, -(self.order as i32)))
    }
}
