//! Rational functions in a formal variable `T` kept in factored form, their
//! exact power-series expansion, and coefficient asymptotics by partial fractions.
//!
//! A [`FactoredRational`] is `num(T) * ∏ (1 - c T^m)^e / g(T)` where the
//! exponents `e` may have either sign and `g` is an optional general
//! denominator, present only after dividing by something that is not a
//! product of such factors.

mod partial;
pub mod qpoly;
mod radical;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub use partial::{asymptotics, partial_fractions, AsymptoticExpansion, PartialFractions, PoleGroup};
pub use qpoly::{Q, QPoly};
pub use radical::{Radical, ScaledConstant};

use crate::error::{domain, Result};
use qpoly::q_big;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    num: QPoly,
    factors: BTreeMap<(BigUint, u32), i64>,
    general_den: Option<QPoly>,
}

impl FactoredRational {
    pub fn constant(c: Q) -> Self {
        Self::from_poly(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(Vec::new())
    }

    pub fn from_poly(num: QPoly) -> Self {
        FactoredRational { num: qpoly::trim(num), factors: BTreeMap::new(), general_den: None }
    }

    /// `(1 - c T^m)^e`; negative `e` puts the factor in the denominator.
    pub fn factor(c: BigUint, m: u32, e: i64) -> Self {
        let mut z = Self::one();
        z.push_factor(c, m, e);
        z
    }

    /// `num / ∏ (1 - c T^m)^k` from a list of `(c, m, k)`.
    pub fn from_parts(num: QPoly, den: &[(BigUint, u32, u32)]) -> Self {
        let mut z = Self::from_poly(num);
        for (c, m, k) in den {
            z.push_factor(c.clone(), *m, -(*k as i64));
        }
        z
    }

    fn push_factor(&mut self, c: BigUint, m: u32, e: i64) {
        assert!(m >= 1, "factor exponent m must be positive");
        if c.is_zero() || e == 0 {
            return;
        }
        let slot = self.factors.entry((c, m)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.retain(|_, v| *v != 0);
        }
    }

    /// Whether a general (non-factored) denominator is present.
    pub fn has_general_denominator(&self) -> bool {
        self.general_den.is_some()
    }

    pub fn general_denominator(&self) -> Option<&[Q]> {
        self.general_den.as_deref()
    }

    /// Numerator polynomial with all numerator-side factors multiplied in.
    pub fn numerator(&self) -> QPoly {
        let mut n = self.num.clone();
        for ((c, m), e) in &self.factors {
            if *e > 0 {
                n = qpoly::mul(&n, &qpoly::one_minus_pow(&q_big(c), *m, *e as u32));
            }
        }
        n
    }

    /// Denominator factors `(c, m, k)` meaning `∏ (1 - c T^m)^k`.
    pub fn denominator_factors(&self) -> Vec<(BigUint, u32, u32)> {
        self.factors
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|((c, m), e)| (c.clone(), *m, (-*e) as u32))
            .collect()
    }

    /// Expanded denominator, general part included.
    pub fn denominator(&self) -> QPoly {
        let mut d = self.general_den.clone().unwrap_or_else(|| vec![Q::one()]);
        for (c, m, k) in self.denominator_factors() {
            d = qpoly::mul(&d, &qpoly::one_minus_pow(&q_big(&c), m, k));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Coefficients `c_0 .. c_n` of the power series.
    pub fn expand(&self, n: usize) -> Vec<Q> {
        let mut s = self.numerator();
        s.resize(n + 1, Q::zero());
        s.truncate(n + 1);
        for (c, m, k) in self.denominator_factors() {
            let c = q_big(&c);
            let m = m as usize;
            for _ in 0..k {
                for i in m..=n {
                    let t = &c * &s[i - m];
                    s[i] += t;
                }
            }
        }
        if let Some(g) = &self.general_den {
            s = qpoly::series_div(&s, g, n).expect("general denominator has nonzero constant term");
        }
        s
    }

    pub fn mul(&self, o: &FactoredRational) -> FactoredRational {
        let mut z = FactoredRational {
            num: qpoly::mul(&self.num, &o.num),
            factors: self.factors.clone(),
            general_den: match (&self.general_den, &o.general_den) {
                (None, None) => None,
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (Some(a), Some(b)) => Some(qpoly::mul(a, b)),
            },
        };
        for ((c, m), e) in &o.factors {
            z.push_factor(c.clone(), *m, *e);
        }
        z
    }

    pub fn scale(&self, s: &Q) -> FactoredRational {
        FactoredRational { num: qpoly::scale(&self.num, s), ..self.clone() }
    }

    /// Quotient. Stays factored when `o` has a constant bare numerator; otherwise
    /// the bare numerator of `o` becomes a general denominator.
    pub fn div(&self, o: &FactoredRational) -> Result<FactoredRational> {
        if o.is_zero() {
            return Err(domain("division by the zero series"));
        }
        let mut inv = FactoredRational {
            num: o.general_den.clone().unwrap_or_else(|| vec![Q::one()]),
            factors: o.factors.iter().map(|(k, e)| (k.clone(), -e)).collect(),
            general_den: None,
        };
        if o.num.len() == 1 {
            inv.num = qpoly::scale(&inv.num, &(Q::one() / &o.num[0]));
        } else {
            inv.general_den = Some(o.num.clone());
        }
        Ok(self.mul(&inv))
    }

    pub fn add(&self, o: &FactoredRational) -> FactoredRational {
        let mut common: BTreeMap<(BigUint, u32), i64> = BTreeMap::new();
        for f in [self, o] {
            for (k, e) in &f.factors {
                if *e < 0 {
                    let slot = common.entry(k.clone()).or_insert(0);
                    *slot = (*slot).min(*e);
                }
            }
        }
        let lift = |f: &FactoredRational| -> QPoly {
            let mut n = f.num.clone();
            for ((c, m), e) in &f.factors {
                if *e > 0 {
                    n = qpoly::mul(&n, &qpoly::one_minus_pow(&q_big(c), *m, *e as u32));
                }
            }
            for ((c, m), e) in &common {
                let own = f.factors.get(&(c.clone(), *m)).copied().unwrap_or(0).min(0);
                let extra = own - e;
                if extra > 0 {
                    n = qpoly::mul(&n, &qpoly::one_minus_pow(&q_big(c), *m, extra as u32));
                }
            }
            n
        };
        let (mut na, mut nb) = (lift(self), lift(o));
        if let Some(g) = &o.general_den {
            na = qpoly::mul(&na, g);
        }
        if let Some(g) = &self.general_den {
            nb = qpoly::mul(&nb, g);
        }
        let general_den = match (&self.general_den, &o.general_den) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(qpoly::mul(a, b)),
        };
        FactoredRational { num: qpoly::add(&na, &nb), factors: common, general_den }
    }

    pub fn neg(&self) -> FactoredRational {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &FactoredRational) -> FactoredRational {
        self.add(&o.neg())
    }

    /// `T -> c T^m`.
    pub fn substitute(&self, c: &BigUint, m: u32) -> FactoredRational {
        let subst_poly = |p: &[Q]| -> QPoly {
            let mut out = vec![Q::zero(); (p.len().max(1) - 1) * m as usize + 1];
            let mut pw = Q::one();
            for (i, a) in p.iter().enumerate() {
                out[i * m as usize] = a * &pw;
                pw *= q_big(c);
            }
            qpoly::trim(out)
        };
        let mut z = FactoredRational {
            num: subst_poly(&self.num),
            factors: BTreeMap::new(),
            general_den: self.general_den.as_ref().map(|g| subst_poly(g)),
        };
        for ((c0, m0), e) in &self.factors {
            z.push_factor(c0 * num_traits::pow(c.clone(), *m0 as usize), m0 * m, *e);
        }
        z
    }
}
