//! Heights of points on `X_d(a)`, the affine parametrization of the good open
//! subset and exhaustive point counts over `F_q(T)`.
//!
//! Everything here is brute force on purpose: these counts are the ground
//! truth the closed forms are checked against.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::curve::CurveData;
use crate::divisor::{infinite_divisor, sup_divisors, Divisor, Place};
use crate::error::{domain, Error, Result};
use crate::ffq::{enumerate_rational_functions, polys_up_to, Factorizer, FqField, Poly, RationalFunction};
use crate::hkgeom::{Component, HKVariety, LineBundle};

/// A point `([x_0 : x_ij], [y_1 : .. : y_t])` of `P^{rt} x P^{t-1}`.
///
/// `x[i][j]` holds `x_{i+1, j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HKPoint {
    pub x0: RationalFunction,
    pub x: Vec<Vec<RationalFunction>>,
    pub y: Vec<RationalFunction>,
}

impl HKPoint {
    /// Whether `x_mj y_n^a_j = x_nj y_m^a_j` holds for all `m != n` and both blocks are nonzero.
    pub fn on_variety(&self, v: &HKVariety, f: &FqField) -> bool {
        let t = v.t() as usize;
        if self.x.len() != t || self.y.len() != t {
            return false;
        }
        if self.y.iter().all(RationalFunction::is_zero) {
            return false;
        }
        if self.x0.is_zero() && self.x.iter().flatten().all(RationalFunction::is_zero) {
            return false;
        }
        for (j, &aj) in v.a().iter().enumerate() {
            let pw: Vec<RationalFunction> = self.y.iter().map(|y| y.pow(aj, f)).collect();
            for m in 0..t {
                for n in m + 1..t {
                    if self.x[m][j].mul(&pw[n], f) != self.x[n][j].mul(&pw[m], f) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every coordinate of the first block, `x_0` first.
    pub fn x_block(&self) -> Vec<RationalFunction> {
        let mut out = vec![self.x0.clone()];
        out.extend(self.x.iter().flatten().cloned());
        out
    }

    pub fn scale_blocks(&self, lx: &RationalFunction, ly: &RationalFunction, f: &FqField) -> HKPoint {
        HKPoint {
            x0: self.x0.mul(lx, f),
            x: self.x.iter().map(|row| row.iter().map(|c| c.mul(lx, f)).collect()).collect(),
            y: self.y.iter().map(|c| c.mul(ly, f)).collect(),
        }
    }
}

/// The image of `(x_1, .., x_d)` in `U_d(a)`.
pub fn param_to_point(params: &[RationalFunction], v: &HKVariety, f: &FqField) -> Result<HKPoint> {
    let (t, r) = (v.t() as usize, v.r() as usize);
    if params.len() != v.dim() as usize {
        return Err(domain(format!("expected {} parameters, got {}", v.dim(), params.len())));
    }
    let a = v.a();
    let mut x = vec![vec![RationalFunction::zero(); r]; t];
    for j in 0..r {
        let last = j + 1 == r;
        for i in 0..t {
            x[i][j] = match (i + 1 == t, last) {
                (false, false) => params[t - 1 + j].mul(&params[i].pow(a[j], f), f),
                (true, false) => params[t - 1 + j].clone(),
                (false, true) => params[i].pow(a[r - 1], f),
                (true, true) => RationalFunction::one(),
            };
        }
    }
    let mut y: Vec<RationalFunction> = params[..t - 1].to_vec();
    y.push(RationalFunction::one());
    Ok(HKPoint { x0: params[v.dim() as usize - 1].clone(), x, y })
}

/// `log_q` of the standard height on `P^n(F_q(T))`.
pub fn projective_height(coords: &[RationalFunction], f: &FqField) -> Result<i64> {
    if coords.iter().all(RationalFunction::is_zero) {
        return Err(domain("the zero vector is not a projective point"));
    }
    let mut lcm = Poly::one();
    for c in coords {
        let g = lcm.gcd(c.den(), f);
        lcm = lcm.mul(c.den(), f).exact_div(&g, f).expect("gcd divides");
    }
    let polys: Vec<Poly> = coords
        .iter()
        .map(|c| {
            let s = lcm.exact_div(c.den(), f).expect("denominator divides the lcm");
            c.num().mul(&s, f)
        })
        .collect();
    let mut g = Poly::zero();
    let mut top = 0usize;
    for p in &polys {
        g = g.gcd(p, f);
        if !p.is_zero() {
            top = top.max(p.deg0());
        }
    }
    Ok(top as i64 - g.deg0() as i64)
}

/// `log_q H_L(P)`.
pub fn height_l(p: &HKPoint, l: &LineBundle, f: &FqField) -> Result<i64> {
    Ok(l.gamma * projective_height(&p.x_block(), f)? + l.xi * projective_height(&p.y, f)?)
}

/// The divisor `d_L(x)` whose degree is `log_q H_L` of the image of `x`.
pub fn d_l(params: &[RationalFunction], v: &HKVariety, l: &LineBundle, fz: &Factorizer) -> Result<Divisor> {
    if v.a_r() == 0 {
        return Err(Error::Unsupported(
            "d_L needs a_r > 0; use the product formula when a_r = 0".into(),
        ));
    }
    let (t, r, d) = (v.t() as usize, v.r() as usize, v.dim() as usize);
    if params.len() != d {
        return Err(domain(format!("expected {d} parameters, got {}", params.len())));
    }
    let poles: Vec<Divisor> = params.iter().map(|x| infinite_divisor(x, fz)).collect();
    let dp = sup_divisors(&poles[..t - 1])?;
    let mut terms = vec![poles[d - 1].clone(), dp.scale(v.a_r())];
    for j in 0..r - 1 {
        let aj = v.a()[j] as i64;
        terms.push(poles[t - 1 + j].clone());
        terms.push(&poles[t - 1 + j] + &dp.scale(aj));
    }
    Ok(&sup_divisors(&terms)?.scale(l.gamma) + &dp.scale(l.xi))
}

/// Pole divisor as `(place id, multiplicity)` pairs sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Poles(Vec<(u32, u32)>);

impl Poles {
    fn degree(&self, place_deg: &[u32]) -> u32 {
        self.0.iter().map(|&(p, m)| place_deg[p as usize] * m).sum()
    }

    /// `sup(self, other + k * shift)`.
    fn sup_shifted(&self, other: &Poles, k: u32, shift: &Poles) -> Poles {
        let mut lifted = other.clone();
        if k > 0 {
            lifted = merge(&lifted, shift, |a, b| a + k * b);
        }
        merge(self, &lifted, u32::max)
    }

    fn scaled(&self, k: u32) -> Poles {
        if k == 0 {
            return Poles::default();
        }
        Poles(self.0.iter().map(|&(p, m)| (p, m * k)).collect())
    }

    /// `deg sup(self, other)` without building the sup.
    fn sup_degree(&self, other: &Poles, place_deg: &[u32]) -> u32 {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut acc) = (0, 0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                acc += place_deg[a[i].0 as usize] * a[i].1;
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                acc += place_deg[b[j].0 as usize] * b[j].1;
                j += 1;
            } else {
                acc += place_deg[a[i].0 as usize] * a[i].1.max(b[j].1);
                i += 1;
                j += 1;
            }
        }
        acc
    }
}

fn merge(a: &Poles, b: &Poles, op: impl Fn(u32, u32) -> u32) -> Poles {
    let (a, b) = (&a.0, &b.0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, op(a[i].1, 0)));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, op(0, b[j].1)));
            j += 1;
        } else {
            out.push((a[i].0, op(a[i].1, b[j].1)));
            i += 1;
            j += 1;
        }
    }
    Poles(out)
}

/// Pole divisors of every element of `F_q(T)` with pole degree at most `bound`.
#[derive(Clone, Debug)]
struct PoleTable {
    place_deg: Vec<u32>,
    elems: Vec<Poles>,
    /// `prefix[b]` = number of elements of pole degree at most `b`.
    prefix: Vec<usize>,
}

impl PoleTable {
    fn new(f: &FqField, bound: u32) -> Self {
        let fz = Factorizer::new(f, bound as usize / 2 + 1);
        let mut ids: BTreeMap<Place, u32> = BTreeMap::new();
        let mut place_deg = Vec::new();
        let mut elems = Vec::new();
        let mut prefix = vec![0usize; bound as usize + 1];
        for x in enumerate_rational_functions(f, bound as usize) {
            let d = infinite_divisor(&x, &fz);
            let mut parts: Vec<(u32, u32)> = d
                .terms()
                .map(|(p, m)| {
                    let next = ids.len() as u32;
                    let id = *ids.entry(p.clone()).or_insert_with(|| {
                        place_deg.push(p.degree());
                        next
                    });
                    (id, m as u32)
                })
                .collect();
            parts.sort_unstable();
            prefix[x.pole_degree()] += 1;
            elems.push(Poles(parts));
        }
        for b in 1..prefix.len() {
            prefix[b] += prefix[b - 1];
        }
        PoleTable { place_deg, elems, prefix }
    }

    fn upto(&self, b: i64) -> usize {
        if b < 0 {
            return 0;
        }
        self.prefix[(b as usize).min(self.prefix.len() - 1)]
    }
}

/// Exhaustive counter for `#{P in U(K) : H_L(P) = q^M}`, `0 <= M <= mmax`, over `F_q(T)`.
///
/// The work splits over the first parameter so callers can run disjoint ranges
/// of [`UCounter::first_len`] in parallel and add the histograms.
#[derive(Clone, Debug)]
pub struct UCounter {
    variety: HKVariety,
    bundle: LineBundle,
    mmax: u32,
    y_bound: u32,
    table: PoleTable,
}

impl UCounter {
    pub fn new(v: &HKVariety, l: &LineBundle, f: &FqField, mmax: u32) -> Result<Self> {
        let (y_bound, x_bound) = u_bounds(v, l, mmax)?;
        Ok(UCounter {
            variety: v.clone(),
            bundle: *l,
            mmax,
            y_bound,
            table: PoleTable::new(f, y_bound.max(x_bound)),
        })
    }

    /// Number of choices for the first parameter.
    pub fn first_len(&self) -> usize {
        self.table.upto(self.y_bound as i64)
    }

    pub fn count(&self) -> Vec<u64> {
        self.count_range(0..self.first_len())
    }

    /// Histogram over `M` with the first parameter restricted to `range`.
    pub fn count_range(&self, range: Range<usize>) -> Vec<u64> {
        let mut hist = vec![0u64; self.mmax as usize + 1];
        let end = range.end.min(self.first_len());
        for i in range.start..end {
            let dp = self.table.elems[i].clone();
            self.y_rec(1, dp, &mut hist);
        }
        hist
    }

    fn c_l(&self) -> i64 {
        self.bundle.c_l(&self.variety)
    }

    fn y_rec(&self, depth: usize, dp: Poles, hist: &mut [u64]) {
        let pd = &self.table.place_deg;
        if self.c_l() * dp.degree(pd) as i64 > self.mmax as i64 {
            return;
        }
        if depth + 1 == self.variety.t() as usize {
            let s0 = dp.scaled(self.variety.a_r() as u32);
            self.x_rec(0, &dp, s0, hist);
            return;
        }
        for e in &self.table.elems[..self.first_len()] {
            self.y_rec(depth + 1, merge(&dp, e, u32::max), hist);
        }
    }

    fn x_rec(&self, j: usize, dp: &Poles, s: Poles, hist: &mut [u64]) {
        let pd = &self.table.place_deg;
        let (g, xi) = (self.bundle.gamma, self.bundle.xi);
        let delta = dp.degree(pd) as i64;
        let room = self.mmax as i64 - xi * delta;
        if g * s.degree(pd) as i64 > room {
            return;
        }
        let r = self.variety.r() as usize;
        if j + 1 == r {
            for e in &self.table.elems[..self.table.upto(room / g)] {
                let m = g * s.sup_degree(e, pd) as i64 + xi * delta;
                if m <= self.mmax as i64 {
                    hist[m as usize] += 1;
                }
            }
            return;
        }
        let aj = self.variety.a()[j] as i64;
        let bound = (room - g * aj * delta).div_euclid(g);
        for e in &self.table.elems[..self.table.upto(bound)] {
            self.x_rec(j + 1, dp, s.sup_shifted(e, aj as u32, dp), hist);
        }
    }
}

/// Pole-degree bounds `(y, x)` that are sufficient for heights up to `q^mmax`.
///
/// Heights satisfy `M >= c_L deg D'` where `D'` is the sup of the first `t-1`
/// poles, and `M >= γ deg(x_k)_∞ + (ξ + γ a_j) deg D'` for the others.
fn u_bounds(v: &HKVariety, l: &LineBundle, mmax: u32) -> Result<(u32, u32)> {
    if v.a_r() == 0 {
        return Err(Error::Unsupported("the affine parametrization needs a_r > 0".into()));
    }
    if l.gamma <= 0 || l.c_l(v) <= 0 {
        return Err(Error::Divergent(format!(
            "({l}) restricted to U of {v} has infinitely many points of bounded height"
        )));
    }
    let m = mmax as i64;
    let y = m / l.c_l(v);
    let x = (0..=y)
        .map(|dp| (m - l.xi * dp).div_euclid(l.gamma))
        .max()
        .unwrap_or(0);
    Ok((y as u32, x.max(0) as u32))
}

/// Upper estimate of the number of parameter tuples [`UCounter`] visits.
pub fn u_cost(v: &HKVariety, l: &LineBundle, q: u64, mmax: u32) -> Result<f64> {
    let (y, x) = u_bounds(v, l, mmax)?;
    let pow = |base: f64, e: u32| (0..e).fold(1.0, |acc, _| acc * base);
    let per = |b: u32| pow(q as f64, 2 * b + 1);
    Ok(pow(per(y), v.t() - 1) * pow(per(x), v.r()))
}

/// Rough number of coordinate choices [`count_x_direct`] visits.
pub fn direct_cost(v: &HKVariety, l: &LineBundle, q: u64, mmax: u32) -> Result<f64> {
    if l.gamma <= 0 || l.xi <= 0 {
        return Err(Error::Unsupported("direct enumeration needs gamma > 0 and xi > 0".into()));
    }
    let pow = |e: i64| (0..e).fold(1.0, |acc, _| acc * q as f64);
    let xb = mmax as i64 / l.gamma + 1;
    let yb = mmax as i64 / l.xi + 1;
    Ok(pow(yb * v.t() as i64) * pow(xb * (v.r() as i64 + 1)))
}

/// `#{P in U(K) : H_L(P) = q^M}` for `M = 0..=mmax`, single threaded.
pub fn count_u(v: &HKVariety, l: &LineBundle, curve: &CurveData, mmax: u32) -> Result<Vec<u64>> {
    let f = genus_zero_field(curve)?;
    Ok(UCounter::new(v, l, f, mmax)?.count())
}

pub(crate) fn genus_zero_field(curve: &CurveData) -> Result<&FqField> {
    match (curve.genus(), curve.field()) {
        (0, Some(f)) => Ok(f),
        _ => Err(Error::Unsupported("exhaustive counting needs the rational function field".into())),
    }
}

/// Normalized coprime tuples: the first nonzero entry is monic.
fn coprime_tuples(f: &FqField, len: usize, bound: usize) -> Vec<(Vec<Poly>, usize)> {
    let all: Vec<Poly> = polys_up_to(f, bound).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    tuple_rec(f, &all, len, &mut cur, &mut out);
    out
}

fn tuple_rec(f: &FqField, all: &[Poly], len: usize, cur: &mut Vec<Poly>, out: &mut Vec<(Vec<Poly>, usize)>) {
    if cur.len() == len {
        let mut g = Poly::zero();
        for p in cur.iter() {
            g = g.gcd(p, f);
        }
        if g.is_one() {
            let top = cur.iter().filter(|p| !p.is_zero()).map(Poly::deg0).max().unwrap_or(0);
            out.push((cur.clone(), top));
        }
        return;
    }
    let leading_zero = cur.iter().all(Poly::is_zero);
    for p in all {
        if leading_zero && !p.is_zero() && !p.is_monic() {
            continue;
        }
        cur.push(p.clone());
        tuple_rec(f, all, len, cur, out);
        cur.pop();
    }
}

/// `#{P in P^n(F_q(T)) : H(P) = q^d}` by enumerating normalized coprime tuples.
///
/// Once a prefix is already coprime, the remaining coordinates are free and
/// are counted in one step.
pub fn count_projective(f: &FqField, n: u32, d: u32) -> u64 {
    let cop = |b: i64| -> u64 {
        if b < 0 {
            return 0;
        }
        let all: Vec<Poly> = polys_up_to(f, b as usize).collect();
        let mut total = 0u64;
        coprime_count_rec(f, &all, n as usize + 1, Poly::zero(), &mut total);
        total
    };
    cop(d as i64) - cop(d as i64 - 1)
}

fn coprime_count_rec(f: &FqField, all: &[Poly], left: usize, g: Poly, total: &mut u64) {
    if g.is_one() {
        *total += (all.len() as u64).pow(left as u32);
        return;
    }
    if left == 0 {
        return;
    }
    for p in all {
        if g.is_zero() && !p.is_zero() && !p.is_monic() {
            continue;
        }
        coprime_count_rec(f, all, left - 1, g.gcd(p, f), total);
    }
}

/// Closed form of [`count_projective`] via `Σ_{deg g = k} μ(g) ∈ {1, -q, 0}`.
pub fn projective_count_formula(q: u64, n: u32, d: u32) -> BigUint {
    let q = BigUint::from(q);
    let big_q = num_traits::pow(q.clone(), n as usize + 1);
    let one = BigUint::one();
    if d == 0 {
        return (&big_q - &one) / (&q - &one);
    }
    num_traits::pow(big_q.clone(), d as usize - 1) * (&big_q - &one) * (&big_q - &q) / (&q - &one)
}

/// `#{P in A^n : H_{P^n}(P) = q^d}` with `A^n = P^n \ P^{n-1}`.
pub fn affine_count(q: u64, n: u32, d: u32) -> BigUint {
    let lower = if n == 0 { BigUint::zero() } else { projective_count_formula(q, n - 1, d) };
    projective_count_formula(q, n, d) - lower
}

/// Exact count of one decomposition piece at height `q^M`, `M = 0..=mmax`.
pub fn count_component(comp: &Component, curve: &CurveData, mmax: u32) -> Result<Vec<u64>> {
    let f = genus_zero_field(curve)?;
    let q = f.q() as u64;
    let to_u64 = |b: BigUint| {
        b.to_u64().ok_or_else(|| Error::Unsupported("count exceeds 64 bits".into()))
    };
    let mut out = vec![0u64; mmax as usize + 1];
    match comp {
        Component::Projective { n, weight } | Component::Affine { n, weight } => {
            let affine = matches!(comp, Component::Affine { .. });
            if *weight == 0 && (affine || *n > 0) {
                return Err(Error::Divergent(format!("{comp} has infinitely many points of height 1")));
            }
            for (m, slot) in out.iter_mut().enumerate() {
                let m = m as i64;
                if *weight == 0 {
                    *slot = u64::from(m == 0);
                    continue;
                }
                if m % weight != 0 || m / weight < 0 {
                    continue;
                }
                let d = (m / weight) as u32;
                *slot = to_u64(if affine { affine_count(q, *n, d) } else { projective_count_formula(q, *n, d) })?;
            }
        }
        Component::Good { variety, bundle } if variety.a_r() == 0 => {
            // U = {x_r != 0} = A^r x P^{t-1} with heights H^γ and H^ξ.
            if bundle.gamma <= 0 || bundle.xi <= 0 {
                return Err(Error::Divergent(format!("{comp} has infinitely many points of bounded height")));
            }
            let (g, xi) = (bundle.gamma, bundle.xi);
            for (m, slot) in out.iter_mut().enumerate() {
                let m = m as i64;
                let mut acc = BigUint::zero();
                for d1 in 0..=m / g {
                    let rest = m - g * d1;
                    if rest % xi == 0 {
                        acc += affine_count(q, variety.r(), d1 as u32)
                            * projective_count_formula(q, variety.t() - 1, (rest / xi) as u32);
                    }
                }
                *slot = to_u64(acc)?;
            }
        }
        Component::Good { variety, bundle } => {
            out = UCounter::new(variety, bundle, f, mmax)?.count();
        }
    }
    Ok(out)
}

/// Direct count of `#{P in X(K) : H_L(P) = q^M}` inside `P^{rt} x P^{t-1}`.
///
/// Coordinates are assigned one at a time and each defining equation is checked
/// as soon as both of its `x` entries are known. Requires `ξ > 0` so that the
/// `y` block has bounded degree.
pub fn count_x_direct(v: &HKVariety, l: &LineBundle, curve: &CurveData, mmax: u32) -> Result<Vec<u64>> {
    let f = genus_zero_field(curve)?;
    if l.gamma <= 0 || l.xi <= 0 {
        return Err(Error::Unsupported("direct enumeration needs gamma > 0 and xi > 0".into()));
    }
    let (t, r) = (v.t() as usize, v.r() as usize);
    let xb = (mmax as i64 / l.gamma) as usize;
    let yb = (mmax as i64 / l.xi) as usize;
    let all_x: Vec<Poly> = polys_up_to(f, xb).collect();
    let mut hist = vec![0u64; mmax as usize + 1];
    for (y, ydeg) in coprime_tuples(f, t, yb) {
        let base = l.xi * ydeg as i64;
        if base > mmax as i64 {
            continue;
        }
        let pows: Vec<Vec<Poly>> = v.a().iter().map(|&aj| y.iter().map(|p| p.pow(aj, f)).collect()).collect();
        let mut st = DirectState { f, t, r, pows: &pows, all: &all_x, cur: Vec::with_capacity(1 + r * t) };
        st.rec(&mut |coords: &[Poly]| {
            let mut g = Poly::zero();
            let mut top = 0;
            for p in coords {
                g = g.gcd(p, f);
                if !p.is_zero() {
                    top = top.max(p.deg0());
                }
            }
            if !g.is_one() {
                return;
            }
            let m = l.gamma * top as i64 + base;
            if m <= mmax as i64 {
                hist[m as usize] += 1;
            }
        });
    }
    Ok(hist)
}

struct DirectState<'a> {
    f: &'a FqField,
    t: usize,
    r: usize,
    pows: &'a [Vec<Poly>],
    all: &'a [Poly],
    /// `x_0`, then `x_{i j}` with `i` fastest.
    cur: Vec<Poly>,
}

impl DirectState<'_> {
    fn rec(&mut self, leaf: &mut dyn FnMut(&[Poly])) {
        let k = self.cur.len();
        if k == 1 + self.r * self.t {
            if self.cur.iter().any(|p| !p.is_zero()) {
                leaf(&self.cur);
            }
            return;
        }
        let leading_zero = self.cur.iter().all(Poly::is_zero);
        let (j, n) = if k == 0 { (0, 0) } else { ((k - 1) / self.t, (k - 1) % self.t) };
        for idx in 0..self.all.len() {
            let p = &self.all[idx];
            if leading_zero && !p.is_zero() && !p.is_monic() {
                continue;
            }
            if k > 0 {
                let f = self.f;
                let consistent = (0..n).all(|m| {
                    let xm = &self.cur[1 + j * self.t + m];
                    xm.mul(&self.pows[j][n], f) == p.mul(&self.pows[j][m], f)
                });
                if !consistent {
                    continue;
                }
            }
            self.cur.push(p.clone());
            self.rec(leaf);
            self.cur.pop();
        }
    }
}
