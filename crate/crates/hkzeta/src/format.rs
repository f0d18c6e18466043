//! JSON forms of curves, divisors, rational functions in `T` and exact constants.

use std::collections::BTreeMap;
use std::path::Path;

use hkzeta_core::curve::CurveData;
use hkzeta_core::divisor::{Divisor, Place};
use hkzeta_core::ffq::FqField;
use hkzeta_core::series::{FactoredRational, Radical, ScaledConstant, Q};
use hkzeta_core::{Error, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Curve description read from `--curve`.
///
/// Genus 0 files only need `q`. Higher genus needs the L-polynomial and the
/// `ℓ` values of effective divisors of degree `1..=2g-2`, written over
/// abstract places `[degree, index]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub q: u64,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub l_poly: Vec<i64>,
    /// Places per degree; derived from `l_poly` up to `max_degree` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place_counts: Option<Vec<u64>>,
    #[serde(default = "default_max_degree")]
    pub max_degree: u32,
    #[serde(default)]
    pub ell: Vec<EllEntry>,
}

fn default_max_degree() -> u32 {
    8
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllEntry {
    /// `[degree, index, coefficient]` triples.
    pub divisor: Vec<[i64; 3]>,
    pub value: u64,
}

pub fn rational_curve(q: u64) -> Result<CurveData> {
    Ok(CurveData::rational(FqField::with_order(q)?))
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<CurveData> {
        if self.genus == 0 && self.place_counts.is_none() && self.ell.is_empty() {
            return rational_curve(self.q);
        }
        let mut table = BTreeMap::new();
        for e in &self.ell {
            table.insert(divisor_from_triples(&e.divisor)?, e.value);
        }
        let l_poly = if self.l_poly.is_empty() { vec![1] } else { self.l_poly.clone() };
        match &self.place_counts {
            Some(counts) => CurveData::new(self.q, self.genus, l_poly, counts.clone(), table),
            None => CurveData::from_l_polynomial(self.q, self.genus, l_poly, self.max_degree, table),
        }
    }

    pub fn read(path: &Path) -> Result<CurveData> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MissingData(format!("{}: {e}", path.display())))?;
        let file: CurveFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        file.to_curve()
    }
}

fn divisor_from_triples(t: &[[i64; 3]]) -> Result<Divisor> {
    let mut pairs = Vec::new();
    for &[degree, index, coeff] in t {
        if degree < 1 || index < 0 {
            return Err(Error::Parse(format!("bad place [{degree}, {index}]")));
        }
        pairs.push((Place::Abstract { degree: degree as u32, index: index as u32 }, coeff));
    }
    Ok(Divisor::from_pairs(pairs))
}

pub fn place_json(p: &Place, curve: &CurveData) -> Value {
    match p {
        Place::Infinity => json!("inf"),
        Place::Finite(poly) => match curve.field() {
            Some(f) => json!(f.format_poly(poly)),
            None => json!(format!("{poly:?}")),
        },
        Place::Abstract { degree, index } => json!([degree, index]),
    }
}

pub fn divisor_json(d: &Divisor, curve: &CurveData) -> Value {
    Value::Array(d.terms().map(|(p, c)| json!([place_json(p, curve), c])).collect())
}

fn q_str(v: &Q) -> String {
    v.to_string()
}

fn parse_q(s: &str) -> Result<Q> {
    s.parse::<Q>().map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// `{"num": [...], "den": [[c, m, k], ...], "general_den": [...] | null}` with
/// `Z(T) = num(T) / (general_den(T) ∏ (1 - c T^m)^k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredJson {
    pub num: Vec<String>,
    pub den: Vec<(String, u32, u32)>,
    pub general_den: Option<Vec<String>>,
}

impl FactoredJson {
    pub fn from_rational(z: &FactoredRational) -> Self {
        FactoredJson {
            num: z.numerator().iter().map(q_str).collect(),
            den: z.denominator_factors().into_iter().map(|(c, m, k)| (c.to_string(), m, k)).collect(),
            general_den: z.general_denominator().map(|g| g.iter().map(q_str).collect()),
        }
    }

    pub fn to_rational(&self) -> Result<FactoredRational> {
        let num = self.num.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
        let mut den = Vec::new();
        for (c, m, k) in &self.den {
            let c: BigUint = c.parse().map_err(|_| Error::Parse(format!("bad factor constant {c:?}")))?;
            den.push((c, *m, *k));
        }
        let z = FactoredRational::from_parts(num, &den);
        match &self.general_den {
            None => Ok(z),
            Some(g) => {
                let g = g.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
                z.div(&FactoredRational::from_poly(g))
            }
        }
    }
}

pub fn radical_json(r: &Radical) -> Value {
    json!({ "exact": r.to_string(), "approx": r.to_f64() })
}

/// `value · log(q)^log_exp`, exact and approximate.
pub fn constant_json(c: &ScaledConstant, q: u64) -> Value {
    json!({
        "value": c.value.to_string(),
        "log_exp": c.log_exp,
        "approx": c.approx(q),
    })
}

pub fn q_vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| json!(q_str(x))).collect())
}
