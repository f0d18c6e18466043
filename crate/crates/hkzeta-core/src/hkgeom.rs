//! Hirzebruch–Kleinschmidt varieties `X_d(a_1..a_r)`, line bundle classes in
//! the basis `{h, f}` of the Picard group, and the decomposition of `X` into
//! pieces whose heights are understood.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{domain, parse_err, Error, Result};
use crate::series::Q;

/// `β(X)` for a split toric variety.
pub const BETA: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HKVariety {
    r: u32,
    t: u32,
    a: Vec<u32>,
}

impl HKVariety {
    pub fn new(r: u32, t: u32, a: Vec<u32>) -> Result<Self> {
        if r < 1 {
            return Err(domain("r must be at least 1"));
        }
        if t < 2 {
            return Err(domain("t must be at least 2"));
        }
        if a.len() != r as usize {
            return Err(domain(format!("expected {} twist(s), got {}", r, a.len())));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(domain("twists must be nondecreasing"));
        }
        Ok(HKVariety { r, t, a })
    }

    /// Parses `HK(r=1,t=2;a=1)`; several twists are comma separated: `a=0,1,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_prefix("HK(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| parse_err(format!("expected HK(r=..,t=..;a=..), got {s:?}")))?;
        let (head, tail) = body
            .split_once(';')
            .ok_or_else(|| parse_err("missing ';' before the twist list"))?;
        let (mut r, mut t) = (None, None);
        for kv in head.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| parse_err(format!("bad field {kv:?}")))?;
            let v: u32 = v.parse().map_err(|_| parse_err(format!("bad integer {v:?}")))?;
            match k {
                "r" => r = Some(v),
                "t" => t = Some(v),
                _ => return Err(parse_err(format!("unknown field {k:?}"))),
            }
        }
        let list = tail
            .strip_prefix("a=")
            .ok_or_else(|| parse_err("twist list must start with a="))?;
        let a = list
            .split(',')
            .map(|v| v.parse::<u32>().map_err(|_| parse_err(format!("bad twist {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let r = r.ok_or_else(|| parse_err("missing r"))?;
        let t = t.ok_or_else(|| parse_err("missing t"))?;
        HKVariety::new(r, t, a)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn dim(&self) -> u32 {
        self.r + self.t - 1
    }

    pub fn abs_a(&self) -> i64 {
        self.a.iter().map(|&x| x as i64).sum()
    }

    pub fn a_r(&self) -> i64 {
        *self.a.last().expect("r >= 1") as i64
    }

    /// `N_X`: how many twists equal the largest one.
    pub fn n_x(&self) -> u32 {
        let top = self.a_r() as u32;
        self.a.iter().filter(|&&x| x == top).count() as u32
    }

    pub fn eta_x(&self) -> i64 {
        (self.r as i64 + 1).gcd(&(self.t as i64 - self.abs_a()))
    }

    /// `E = (r+1) a_r - |a|`.
    pub fn e_value(&self) -> i64 {
        (self.r as i64 + 1) * self.a_r() - self.abs_a()
    }

    /// The same twists over `P^{t'-1}`.
    pub fn with_t(&self, t: u32) -> Result<Self> {
        HKVariety::new(self.r, t, self.a.clone())
    }

    /// `X_{d-1}(a_1..a_{r-1})`; `None` when `r = 1`.
    pub fn drop_last(&self) -> Option<Self> {
        (self.r >= 2).then(|| HKVariety {
            r: self.r - 1,
            t: self.t,
            a: self.a[..self.a.len() - 1].to_vec(),
        })
    }
}

impl fmt::Display for HKVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HK(r={},t={};a=", self.r, self.t)?;
        for (i, a) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `L = γ h + ξ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBundle {
    pub gamma: i64,
    pub xi: i64,
}

impl LineBundle {
    pub fn new(gamma: i64, xi: i64) -> Self {
        LineBundle { gamma, xi }
    }

    /// Parses `"γ,ξ"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (g, x) = s
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected gamma,xi, got {s:?}")))?;
        let p = |v: &str| v.trim().parse::<i64>().map_err(|_| parse_err(format!("bad integer {v:?}")));
        Ok(LineBundle::new(p(g)?, p(x)?))
    }

    /// `η_L = gcd(γ, ξ)`.
    pub fn eta(&self) -> i64 {
        self.gamma.gcd(&self.xi)
    }

    pub fn scale(&self, m: i64) -> Self {
        LineBundle::new(self.gamma * m, self.xi * m)
    }

    /// `L / η_L`.
    pub fn primitive(&self) -> Self {
        let e = self.eta();
        if e == 0 {
            return *self;
        }
        LineBundle::new(self.gamma / e, self.xi / e)
    }

    /// `c_L = γ a_r + ξ`.
    pub fn c_l(&self, x: &HKVariety) -> i64 {
        self.gamma * x.a_r() + self.xi
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.gamma, self.xi)
    }
}

pub fn anticanonical(x: &HKVariety) -> LineBundle {
    LineBundle::new(x.r as i64 + 1, x.t as i64 - x.abs_a())
}

pub fn is_big(l: &LineBundle, x: &HKVariety) -> bool {
    l.gamma > 0 && l.xi > -l.gamma * x.a_r()
}

pub fn alpha_star(x: &HKVariety) -> Q {
    Q::new(1.into(), ((x.r as i64 + 1) * (x.e_value() + x.t as i64)).into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    EqualAB,
    ALessB,
    AGreaterB,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::EqualAB => "A=B",
            Regime::ALessB => "A<B",
            Regime::AGreaterB => "A>B",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub regime: Regime,
    pub a_l: Q,
    pub b_l: Q,
    /// `a(L) = max(A_L, B_L)`.
    pub a: Q,
    /// Pole order `b(L)`.
    pub b: u32,
    /// `a'(L)` when `a_r > 0`, otherwise `a''(L)`; bounds the error exponent.
    pub a_sub: Q,
    pub eta_l: i64,
    pub c_l: i64,
}

pub fn classify(l: &LineBundle, x: &HKVariety) -> Result<Invariants> {
    if !is_big(l, x) {
        return Err(Error::NotBig { gamma: l.gamma, xi: l.xi });
    }
    let q = |n: i64, d: i64| Q::new(n.into(), d.into());
    let (g, xi) = (l.gamma, l.xi);
    let c = l.c_l(x);
    let a_l = q(x.r as i64 + 1, g);
    let b_l = q(x.e_value() + x.t as i64, c);
    let regime = match a_l.cmp(&b_l) {
        core::cmp::Ordering::Equal => Regime::EqualAB,
        core::cmp::Ordering::Less => Regime::ALessB,
        core::cmp::Ordering::Greater => Regime::AGreaterB,
    };
    let a_sub = if x.a_r() > 0 {
        let (da, db) = (&a_l - q(1, g), &b_l - q(1, c));
        match regime {
            Regime::EqualAB => da.max(db),
            Regime::ALessB => a_l.clone().max(db),
            Regime::AGreaterB => da.max(b_l.clone()),
        }
    } else {
        let (ha, hb) = (q(1, 2 * g), q(1, 2 * xi));
        match regime {
            Regime::EqualAB => ha.max(hb),
            Regime::ALessB => a_l.clone().max(hb),
            Regime::AGreaterB => ha.max(b_l.clone()),
        }
    };
    Ok(Invariants {
        regime,
        a: a_l.clone().max(b_l.clone()),
        b: if regime == Regime::EqualAB { 2 } else { 1 },
        a_l,
        b_l,
        a_sub,
        eta_l: l.eta(),
        c_l: c,
    })
}

/// A piece of the decomposition, with the exponents of its restricted height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// `P^n` with height `H_{P^n}^weight`.
    Projective { n: u32, weight: i64 },
    /// `A^n = P^n \ P^{n-1}` with height `H_{P^n}^weight`.
    Affine { n: u32, weight: i64 },
    /// A good open subset `U(variety)` with the restricted class `bundle`.
    Good { variety: HKVariety, bundle: LineBundle },
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Projective { n, weight } => write!(f, "P^{n}[H^{weight}]"),
            Component::Affine { n, weight } => write!(f, "A^{n}[H^{weight}]"),
            Component::Good { variety, bundle } => write!(f, "U {variety} [L={bundle}]"),
        }
    }
}

/// Splits `X(K)` into projective, affine and good-open pieces, recursing
/// through `X_{d-1}(a_1..a_{r-1})` until none is left.
pub fn decompose(x: &HKVariety, l: &LineBundle) -> Vec<Component> {
    let mut out = Vec::new();
    decompose_into(x, l, &mut out);
    out
}

fn decompose_into(x: &HKVariety, l: &LineBundle, out: &mut Vec<Component>) {
    match x.drop_last() {
        Some(smaller) => decompose_into(&smaller, l, out),
        None => out.push(Component::Projective { n: x.t - 1, weight: l.xi }),
    }
    if x.a_r() > 0 {
        out.push(Component::Affine { n: x.r, weight: l.gamma });
        for t in 2..=x.t {
            out.push(Component::Good { variety: x.with_t(t).expect("t >= 2"), bundle: *l });
        }
    } else {
        out.push(Component::Good { variety: x.clone(), bundle: *l });
    }
}
