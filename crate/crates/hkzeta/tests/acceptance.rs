//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, HashSet};
use std::panic;
use std::time::Instant;

use hkzeta::parallel::count_u_parallel;
use hkzeta_core::closedform::{
    component_zeta, leading_constants, p1_series, p2_series, p3_series, z_pn, z_ul, z_xl_product, zeta_u,
};
use hkzeta_core::counting::{
    count_component, count_projective, count_x_direct, d_l, height_l, param_to_point, projective_count_formula,
};
use hkzeta_core::curve::{zeta_k, zeta_k_at, CurveData};
use hkzeta_core::divisor::{
    convolve, enumerate_effective, infinite_divisor, moebius, n_count, n_tilde, sup_divisors, unit, Divisor,
};
use hkzeta_core::ffq::{enumerate_rational_functions, rational_functions_of_pole_degree, Factorizer, FqField, RationalFunction};
use hkzeta_core::hkgeom::{anticanonical, decompose, Component, HKVariety, LineBundle};
use hkzeta_core::series::qpoly::{self, q_big, q_int};
use hkzeta_core::series::{asymptotics, partial_fractions, FactoredRational, Q, QPoly, ScaledConstant};
use hkzeta_core::Error;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rational(q: u32) -> CurveData {
    CurveData::rational(FqField::with_order(q as u64).unwrap())
}

fn hk(s: &str) -> HKVariety {
    HKVariety::parse(s).unwrap()
}

fn ints(v: &[u64]) -> Vec<Q> {
    v.iter().map(|&c| q_int(c as i64)).collect()
}

fn qpow(q: u64, e: i64) -> Q {
    let b = Q::from_integer(num_traits::pow(BigInt::from(q), e.unsigned_abs() as usize));
    if e >= 0 {
        b
    } else {
        Q::one() / b
    }
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn choose(n: u64, k: u64) -> Q {
    (0..k).fold(Q::one(), |acc, i| acc * q_int((n - i) as i64) / q_int(i as i64 + 1))
}

fn truncate(mut p: QPoly, n: usize) -> QPoly {
    p.resize(n + 1, Q::zero());
    p
}

fn series_mul(a: &[Q], b: &[Q], n: usize) -> QPoly {
    truncate(qpoly::mul(a, b), n)
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Brute-force counts on `U` agree with the closed form at `L = -K`.
fn a1() -> Outcome {
    let mut checked = 0;
    for (q, mmax) in [(2u32, 6u32), (3, 4)] {
        let c = rational(q);
        for x in [hk("HK(r=1,t=2;a=1)"), hk("HK(r=1,t=2;a=2)")] {
            let k = anticanonical(&x);
            let closed = lib(zeta_u(&x, &k, &c))?.coefficients(mmax as usize);
            let counts = lib(count_u_parallel(&x, &k, &c, mmax, jobs()))?;
            ensure!(closed == ints(&counts), "{x} q={q}: closed {closed:?} vs counted {counts:?}");
            checked += counts.len();
        }
    }
    Ok(format!("{checked} coefficients"))
}

/// Hirzebruch surface with `L = H + F`: the dominant simple pole carries `C_3`, the boundary pieces `C_2`.
fn a2() -> Outcome {
    let x = hk("HK(r=1,t=2;a=1)");
    let l = LineBundle::new(1, 1);
    let mut out = Vec::new();
    for q in [2i64, 3] {
        let c = rational(q as u32);
        let c3 = frac((q * q + q + 1) * (q * q - 1), q * q);
        let c2 = frac(q * q - 1, q);
        let res = lib(z_ul(&x, &l, &c))?;
        let asy = lib(res.asymptotics())?;
        ensure!(asy.order == 1, "q={q}: pole order {}", asy.order);
        ensure!(asy.growth_exponent(q as u64) == Some(q_int(2)), "q={q}: dominant circle is not q^-2");
        for j in 0..asy.base.1 as usize {
            let p = asy.class_polynomial_in_m(j).ok_or("no integral growth base")?;
            ensure!(p == vec![c3.clone()], "q={q} class {j}: coefficient {p:?}, expected {c3}");
        }
        ensure!(
            lib(asy.limit_constant(q as u64))? == ScaledConstant::rational(c3.clone(), -1),
            "q={q}: limit constant"
        );
        let comps = decompose(&x, &l);
        let mut boundary = 0;
        for comp in &comps {
            if matches!(comp, Component::Good { .. }) {
                continue;
            }
            let lim = lib(lib(asymptotics(&lib(component_zeta(comp, &c))?))?.limit_constant(q as u64))?;
            ensure!(lim == ScaledConstant::rational(c2.clone(), -1), "q={q} {comp}: {lim}, expected {c2}");
            boundary += 1;
        }
        ensure!(boundary == 2, "q={q}: expected two boundary pieces, got {boundary}");
        ensure!(c3 > q_int(2) * &c2, "q={q}: C_3 = {c3} is not above 2 C_2 = {}", q_int(2) * &c2);
        out.push(format!("q={q}: C_3={c3} C_2={c2}"));
    }
    Ok(out.join(", "))
}

/// Anticanonical double pole on the Hirzebruch surface.
fn a3() -> Outcome {
    let q = 2u64;
    let c = rational(q as u32);
    let x = hk("HK(r=1,t=2;a=1)");
    let k = anticanonical(&x);
    let res = lib(zeta_u(&x, &k, &c))?;
    let asy = lib(res.asymptotics())?;
    ensure!(asy.order == 2, "pole order {}", asy.order);
    let z2 = lib(zeta_k_at(&c, 2))?;
    let expect = qpow(q, 4) / (&z2 * &z2 * q_int(3) * q_int(2) * qpow(q - 1, 2));
    let l = asy.base.1 as usize;
    let mut lead_sum = Q::zero();
    for j in 0..l {
        ensure!(asy.classes[j].len() == 2, "class {j} has degree {}", asy.classes[j].len() as i64 - 1);
        let p = asy.class_polynomial_in_m(j).ok_or("no integral growth base")?;
        lead_sum += &p[1];
    }
    // Average leading coefficient in M over the classes, times (b - 1)! = 1.
    ensure!(lead_sum / q_int(l as i64) == expect, "leading coefficient differs from {expect}");
    ensure!(lib(asy.limit_constant(q))? == ScaledConstant::rational(expect.clone(), -2), "limit constant");
    let lc = lib(leading_constants(&x, &k, &c))?;
    ensure!(x.eta_x() == 1, "eta_X = {}", x.eta_x());
    ensure!(lc.c_l == Some(expect.clone()), "C_1 = {:?}, expected {expect}", lc.c_l);
    Ok(format!("C_1 = {expect}"))
}

/// Projective counts against the closed form, and the residue constant of `Z_{P^n}`.
fn a4() -> Outcome {
    let mut n_checked = 0;
    for q in [2u32, 3] {
        let f = FqField::prime(q).unwrap();
        let c = CurveData::rational(f.clone());
        for n in 1..=2u32 {
            let z = lib(z_pn(n, &c))?.expand(4);
            for d in 0..=4u32 {
                let brute = count_projective(&f, n, d);
                ensure!(BigUint::from(brute) == projective_count_formula(q as u64, n, d), "q={q} n={n} d={d}");
                ensure!(z[d as usize] == q_int(brute as i64), "q={q} n={n} d={d}: zeta coefficient");
                n_checked += 1;
            }
            let lim = lib(lib(asymptotics(&lib(z_pn(n, &c))?))?.limit_constant(q as u64))?;
            let h = c.class_number() as i64;
            let expect = q_int(h) * qpow(q as u64, n as i64 + 1)
                / (lib(zeta_k_at(&c, n as i64 + 1))? * q_int(q as i64 - 1));
            ensure!(lim == ScaledConstant::rational(expect.clone(), -1), "q={q} n={n}: {lim} vs {expect}");
        }
    }
    Ok(format!("{n_checked} counts, 4 residues"))
}

/// Component counts add up to a direct count over all of `X`.
fn a5() -> Outcome {
    let c = rational(2);
    let mut out = Vec::new();
    for x in [hk("HK(r=1,t=3;a=1)"), hk("HK(r=1,t=2;a=1)")] {
        for l in [anticanonical(&x), LineBundle::new(1, 1)] {
            let mmax = 3;
            let direct = lib(count_x_direct(&x, &l, &c, mmax))?;
            let mut sum = vec![0u64; mmax as usize + 1];
            for comp in decompose(&x, &l) {
                for (acc, v) in sum.iter_mut().zip(lib(count_component(&comp, &c, mmax))?) {
                    *acc += v;
                }
            }
            ensure!(sum == direct, "{x} L={l}: components {sum:?} vs direct {direct:?}");
            out.push(format!("{x} L={l}"));
        }
    }
    Ok(out.join(", "))
}

/// Products of projective spaces through the product formula.
fn a6() -> Outcome {
    let f = FqField::prime(2).unwrap();
    let c = CurveData::rational(f.clone());
    let mmax = 4usize;
    let table = |n: u32| -> Vec<u64> { (0..=mmax as u32).map(|d| count_projective(&f, n, d)).collect() };
    for x in [hk("HK(r=1,t=2;a=0)"), hk("HK(r=1,t=3;a=0)")] {
        let (px, py) = (table(x.r()), table(x.t() - 1));
        for l in [anticanonical(&x), LineBundle::new(1, 1)] {
            let z = lib(z_xl_product(&x, &l, &c))?.coefficients(mmax);
            let (g, xi) = (l.gamma as usize, l.xi as usize);
            let conv: Vec<u64> = (0..=mmax)
                .map(|m| {
                    (0..=m / g)
                        .filter(|d1| (m - g * d1) % xi == 0)
                        .map(|d1| px[d1] * py[(m - g * d1) / xi])
                        .sum()
                })
                .collect();
            ensure!(z == ints(&conv), "{x} L={l}: {z:?} vs convolution {conv:?}");
        }
    }
    Ok(String::from("P1xP1, P1xP2 at -K and (1,1)"))
}

fn random_rational(rng: &mut StdRng) -> FactoredRational {
    let deg = rng.gen_range(0..4);
    let num: QPoly = (0..=deg).map(|_| q_int(rng.gen_range(-5..=5))).collect();
    let mut den = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        den.push((BigUint::from(rng.gen_range(1u32..=4)), rng.gen_range(1u32..=3), rng.gen_range(1u32..=3)));
    }
    FactoredRational::from_parts(if num.iter().all(Zero::is_zero) { vec![Q::one()] } else { num }, &den)
}

/// Partial fractions reproduce every coefficient.
fn a7() -> Outcome {
    let n = 20;
    let zk = zeta_k(&rational(2));
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = vec![("Z_K".to_string(), zk.clone()), ("Z_K^2".to_string(), zk.mul(&zk))];
    for i in 0..3 {
        cases.push((format!("random #{i}"), random_rational(&mut rng)));
    }
    for (name, z) in &cases {
        let pf = lib(partial_fractions(z))?;
        let exp = z.expand(n);
        ensure!(pf.resum().expand(n) == exp, "{name}: resummed series differs");
        for (m, v) in exp.iter().enumerate() {
            ensure!(pf.coefficient(m as u64) == *v, "{name}: coefficient {m}");
        }
    }
    for q in [2u32, 3] {
        for b in 1..=4u32 {
            let z = FactoredRational::factor(BigUint::from(q), 1, -(b as i64));
            let asy = lib(asymptotics(&z))?;
            let poly = asy.class_polynomial_in_m(0).ok_or("no integral growth base")?;
            for m in 0..=n as u64 {
                let want = choose(m + b as u64 - 1, b as u64 - 1);
                ensure!(qpoly::eval(&poly, &q_int(m as i64)) == want, "q={q} b={b} M={m}");
            }
        }
    }
    Ok(format!("{} rationals, 8 binomial families", cases.len()))
}

/// Möbius inversion on effective divisors over `F_2(T)`.
fn a8() -> Outcome {
    let c = rational(2);
    let mut n_div = 0;
    for k in 0..=5 {
        for d in lib(enumerate_effective(k, &c))? {
            let conv: i64 = lib(convolve(|_| Ok(1i64), moebius, &d))?;
            ensure!(conv == unit(&d), "(1 * mu)({d:?}) = {conv}");
            n_div += 1;
        }
    }
    let zk = zeta_k(&c);
    let inv = lib(FactoredRational::from_parts(zk.denominator(), &[]).div(&FactoredRational::from_poly(zk.numerator())))?;
    let inv = inv.expand(6);
    for n in 0..=6u32 {
        let mut s = 0i64;
        for d in lib(enumerate_effective(n, &c))? {
            s += lib(moebius(&d))?;
        }
        ensure!(q_int(s) == inv[n as usize], "sum of mu in degree {n}: {s} vs {}", inv[n as usize]);
    }
    Ok(format!("{n_div} divisors"))
}

/// The sup identity for pole divisors and `deg d_L = log_q H_L`.
fn a9() -> Outcome {
    let f = FqField::prime(2).unwrap();
    let fz = Factorizer::new(&f, 8);
    let poles = |x: &RationalFunction| infinite_divisor(x, &fz);
    let sup_identity = |x: &RationalFunction, y: &RationalFunction| -> Result<(), String> {
        let s = lib(sup_divisors(&[poles(x), poles(&x.mul(y, &f)), poles(y)]))?;
        ensure!(s == &poles(x) + &poles(y), "sup fails at x={} y={}", x.format(&f), y.format(&f));
        Ok(())
    };
    let b2: Vec<RationalFunction> = enumerate_rational_functions(&f, 2).collect();
    let b3: Vec<RationalFunction> = enumerate_rational_functions(&f, 3).collect();
    for x in &b2 {
        for y in &b2 {
            sup_identity(x, y)?;
        }
    }
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..1000 {
        sup_identity(&b3[rng.gen_range(0..b3.len())], &b3[rng.gen_range(0..b3.len())])?;
    }

    let height_identity = |v: &HKVariety, l: &LineBundle, params: &[RationalFunction]| -> Result<(), String> {
        let p = lib(param_to_point(params, v, &f))?;
        ensure!(p.on_variety(v, &f), "{v}: image not on the variety");
        let deg = lib(d_l(params, v, l, &fz))?.degree();
        let h = lib(height_l(&p, l, &f))?;
        ensure!(deg == h, "{v} L={l}: deg d_L = {deg}, log_q H_L = {h}");
        Ok(())
    };
    let x2 = hk("HK(r=1,t=2;a=1)");
    let mut images = HashSet::new();
    let mut full = 0;
    for a in &b2 {
        for b in &b2 {
            let params = [a.clone(), b.clone()];
            for l in [LineBundle::new(2, 1), LineBundle::new(1, 1), LineBundle::new(3, 2)] {
                height_identity(&x2, &l, &params)?;
            }
            images.insert(lib(param_to_point(&params, &x2, &f))?);
            full += 1;
        }
    }
    ensure!(images.len() == full, "param_to_point is not injective");
    for (v, l) in [
        (hk("HK(r=1,t=3;a=1)"), LineBundle::new(1, 1)),
        (hk("HK(r=2,t=2;a=0,1)"), LineBundle::new(3, 1)),
        (hk("HK(r=1,t=2;a=2)"), LineBundle::new(2, 1)),
    ] {
        for _ in 0..1000 / 3 + 1 {
            let params: Vec<RationalFunction> =
                (0..v.dim()).map(|_| b3[rng.gen_range(0..b3.len())].clone()).collect();
            height_identity(&v, &l, &params)?;
        }
    }
    Ok(format!("{} sup pairs + 1000 sampled, {full} points x 3 bundles + 1002 sampled", b2.len() * b2.len()))
}

/// Ingredients shared by the intermediate-series checks.
struct SeriesTerms<'a> {
    x: &'a HKVariety,
    l: &'a LineBundle,
    curve: &'a CurveData,
    n: usize,
    divs: Vec<Vec<Divisor>>,
}

impl<'a> SeriesTerms<'a> {
    fn new(x: &'a HKVariety, l: &'a LineBundle, curve: &'a CurveData, n: usize) -> Result<Self, String> {
        let divs = (0..=n as u32).map(|k| lib(enumerate_effective(k, curve))).collect::<Result<_, _>>()?;
        Ok(SeriesTerms { x, l, curve, n, divs })
    }

    fn q(&self) -> u64 {
        self.curve.q()
    }

    fn one_minus_g(&self) -> i64 {
        1 - self.curve.genus() as i64
    }

    /// `a_0 = 0, a_1, .., a_r`.
    fn a(&self, j: usize) -> i64 {
        if j == 0 {
            0
        } else {
            self.x.a()[j - 1] as i64
        }
    }

    fn n11(&self, d: &Divisor) -> Result<Q, String> {
        Ok(q_big(&lib(n_count(1, 1, d, self.curve))?))
    }

    fn n_tilde(&self, d: &Divisor) -> Result<Q, String> {
        Ok(Q::from_integer(lib(n_tilde(self.x.t() - 1, d, self.curve))?))
    }

    /// `R_L(D)` from the rewrite in terms of `Ñ_{t-1}` and `N_1^γ`.
    fn r_rewrite(&self, d: &Divisor) -> Result<Q, String> {
        let c = self.l.c_l(self.x);
        let mut acc = Q::zero();
        for dp in lib(d.floor_div(c).sub_divisors())? {
            let mut term = self.n_tilde(&dp)?;
            for j in 0..self.x.r() as usize {
                let e = d.sub(&dp.scale(self.l.xi + self.l.gamma * self.a(j)));
                term *= q_big(&lib(n_count(1, self.l.gamma as u32, &e, self.curve))?);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `Σ_{D ∈ Div_{γ-1}} T^deg D`.
    fn div_gamma(&self) -> QPoly {
        let g = self.l.gamma;
        self.divs.iter().map(|ds| q_int(ds.iter().filter(|d| d.terms().all(|(_, c)| c < g)).count() as i64)).collect()
    }

    /// The `Z_1`/`Z_2` double sum over `D, D' >= 0`, exact (`riemann_roch = false`) or with each
    /// factor of the product over `j <= r - N_X` replaced by `q^(1-g) q^(deg D + (a_r - a_j) deg D')`.
    fn double_sum(&self, riemann_roch: bool) -> Result<QPoly, String> {
        let (gamma, c) = (self.l.gamma as usize, self.l.c_l(self.x) as usize);
        let (r, n_x) = (self.x.r() as usize, self.x.n_x() as i32);
        let a_r = self.x.a_r();
        let mut out = vec![Q::zero(); self.n + 1];
        for kp in 0..=self.n / c {
            for dp in &self.divs[kp] {
                let nt = self.n_tilde(dp)?;
                for k in 0..=(self.n - c * kp) / gamma {
                    for dd in &self.divs[k] {
                        let mut term = nt.clone() * self.n11(dd)?.pow(n_x - 1);
                        for j in 0..=r - n_x as usize {
                            let s = a_r - self.a(j);
                            term *= if riemann_roch {
                                qpow(self.q(), self.one_minus_g() + k as i64 + s * kp as i64)
                            } else {
                                self.n11(&(dd + &dp.scale(s)))?
                            };
                        }
                        out[gamma * k + c * kp] += term;
                    }
                }
            }
        }
        Ok(series_mul(&out, &self.div_gamma(), self.n))
    }

    /// `Σ_{D'} Ñ_{t-1}(D') q^(E deg D') T^(c_L deg D')`.
    fn n_tilde_series(&self) -> Result<QPoly, String> {
        let c = self.l.c_l(self.x) as usize;
        let mut out = vec![Q::zero(); self.n + 1];
        for kp in 0..=self.n / c {
            for dp in &self.divs[kp] {
                out[c * kp] += self.n_tilde(dp)? * qpow(self.q(), self.x.e_value() * kp as i64);
            }
        }
        Ok(out)
    }

    /// `Z_3` from its defining product of sums.
    fn z3_definition(&self) -> Result<QPoly, String> {
        let (q, og) = (self.q(), self.one_minus_g());
        let (r, n_x) = (self.x.r() as i64, self.x.n_x() as i64);
        let gamma = self.l.gamma as usize;
        let mut middle = vec![Q::zero(); self.n + 1];
        for k in 0..=self.n / gamma {
            let per = qpow(q, (og + k as i64) * (n_x - 1)) * qpow(q, (r + 1 - n_x) * k as i64);
            middle[gamma * k] += per * q_int(self.divs[k].len() as i64);
        }
        let s = series_mul(&self.n_tilde_series()?, &middle, self.n);
        Ok(qpoly::scale(&series_mul(&s, &self.div_gamma(), self.n), &qpow(q, (r + 1 - n_x) * og)))
    }

    fn zk_sub(&self, e: i64, m: i64) -> FactoredRational {
        zeta_k(self.curve).substitute(&num_traits::pow(BigUint::from(self.q()), e as usize), m as u32)
    }

    /// `(q^((t-1)(1-g)) Z_K(q^(E+t-1) T^c) + P_3) / Z_K(q^E T^c)`.
    fn n_tilde_closed(&self) -> Result<FactoredRational, String> {
        let (t, e, c) = (self.x.t() as i64, self.x.e_value(), self.l.c_l(self.x));
        let head = self.zk_sub(e + t - 1, c).scale(&qpow(self.q(), (t - 1) * self.one_minus_g()));
        lib(head.add(&lib(p3_series(self.x, self.l, self.curve))?).div(&self.zk_sub(e, c)))
    }

    fn div_gamma_closed(&self) -> Result<FactoredRational, String> {
        lib(zeta_k(self.curve).div(&self.zk_sub(0, self.l.gamma)))
    }

    fn expand(&self, z: &FactoredRational) -> QPoly {
        z.expand(self.n)
    }
}

/// `#{x ∈ A^d : d_L(x) <= D}` for every effective `D` of degree `<= n`, by enumerating `x` over `F_q(T)`.
///
/// `d_L` depends on the parameters only through their pole divisors, so each slot is enumerated
/// once and grouped by pole divisor.
fn r_direct(x: &HKVariety, l: &LineBundle, f: &FqField, n: usize) -> Result<BTreeMap<Divisor, u64>, String> {
    let fz = Factorizer::new(f, n + 1);
    let (t, d) = (x.t() as usize, x.dim() as usize);
    let c = l.c_l(x) as usize;
    let gamma = l.gamma as usize;
    let mut slots: Vec<Vec<(RationalFunction, u64)>> = Vec::new();
    for i in 0..d {
        let bound = if i < t - 1 { n / c } else { n / gamma };
        let mut groups: BTreeMap<Divisor, (RationalFunction, u64)> = BTreeMap::new();
        for k in 0..=bound {
            for xf in rational_functions_of_pole_degree(f, k) {
                groups.entry(infinite_divisor(&xf, &fz)).or_insert((xf, 0)).1 += 1;
            }
        }
        slots.push(groups.into_values().collect());
    }
    let mut exact: BTreeMap<Divisor, u64> = BTreeMap::new();
    let mut idx = vec![0usize; d];
    'outer: loop {
        let params: Vec<RationalFunction> = (0..d).map(|i| slots[i][idx[i]].0.clone()).collect();
        let weight: u64 = (0..d).map(|i| slots[i][idx[i]].1).product();
        let dl = lib(d_l(&params, x, l, &fz))?;
        if dl.degree() <= n as i64 {
            *exact.entry(dl).or_insert(0) += weight;
        }
        for i in 0..d {
            idx[i] += 1;
            if idx[i] < slots[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    let curve = CurveData::rational(f.clone());
    let mut out = BTreeMap::new();
    for k in 0..=n as u32 {
        for big_d in lib(enumerate_effective(k, &curve))? {
            let v = exact.iter().filter(|(e, _)| Divisor::le(e, &big_d)).map(|(_, v)| v).sum();
            out.insert(big_d, v);
        }
    }
    Ok(out)
}

fn genus_two() -> CurveData {
    // Synthetic ℓ data: every effective divisor of degree <= 2 has ℓ = 1 except one of degree 2.
    let base = CurveData::from_l_polynomial(2, 2, vec![1, 0, 0, 0, 4], 6, BTreeMap::new()).unwrap();
    let mut table = BTreeMap::new();
    for k in 1..=2 {
        for (i, d) in enumerate_effective(k, &base).unwrap().into_iter().enumerate() {
            table.insert(d, if k == 2 && i == 0 { 2 } else { 1 });
        }
    }
    CurveData::from_l_polynomial(2, 2, vec![1, 0, 0, 0, 4], 6, table).unwrap()
}

/// Intermediate series of the closed form for `Z_{U,L}` against direct divisor sums.
fn a10() -> Outcome {
    let n = 5;
    let f = FqField::prime(2).unwrap();
    let p1 = CurveData::rational(f.clone());
    let g2 = genus_two();
    let x2 = hk("HK(r=1,t=2;a=1)");
    let x3 = hk("HK(r=1,t=3;a=1)");
    let cases = [(&x2, LineBundle::new(2, 1)), (&x3, anticanonical(&x3).primitive())];
    let mut report = Vec::new();
    for (x, l) in &cases {
        for curve in [&p1, &g2] {
            let tag = format!("{x} L={l} g={}", curve.genus());
            let s = SeriesTerms::new(x, l, curve, n)?;
            // R_L(D) as a sum over D' <= D / c_L.
            let mut z1_from_r = vec![Q::zero(); n + 1];
            if curve.genus() == 0 {
                let direct = r_direct(x, l, &f, n)?;
                for (big_d, v) in &direct {
                    let rw = s.r_rewrite(big_d)?;
                    ensure!(rw == q_int(*v as i64), "{tag}: R_L({big_d:?}) rewrite {rw} vs count {v}");
                }
                ensure!(direct.len() == s.divs.iter().map(Vec::len).sum::<usize>(), "{tag}: divisor sets differ");
            }
            for (k, ds) in s.divs.iter().enumerate() {
                for big_d in ds {
                    z1_from_r[k] += s.r_rewrite(big_d)?;
                }
            }
            // Z_1 - Z_2 through P_1.
            let z1 = s.double_sum(false)?;
            ensure!(z1 == z1_from_r, "{tag}: Z_1 {z1:?} vs sum of R_L {z1_from_r:?}");
            let z2 = s.double_sum(true)?;
            let p1_term = series_mul(&s.expand(&lib(p1_series(x, l, curve))?), &s.div_gamma(), n);
            ensure!(qpoly::sub(&z1, &z2) == qpoly::trim(p1_term.clone()), "{tag}: Z_1 - Z_2 vs P_1 term");
            ensure!(s.div_gamma() == s.expand(&s.div_gamma_closed()?), "{tag}: Div_(γ-1) series");
            // Z_2 - Z_3 through P_2, and Z_3 in closed form.
            let og = s.one_minus_g();
            let (r, n_x) = (x.r() as i64, x.n_x() as i64);
            let z3 = s.z3_definition()?;
            let p2 = s.expand(&lib(p2_series(x, l, curve))?);
            let nt = s.n_tilde_series()?;
            let rhs = qpoly::scale(
                &series_mul(&series_mul(&nt, &p2, n), &s.div_gamma(), n),
                &qpow(s.q(), (r + 1 - n_x) * og),
            );
            ensure!(qpoly::sub(&z2, &z3) == qpoly::trim(rhs), "{tag}: Z_2 - Z_3 vs P_2 term");
            ensure!(nt == s.expand(&s.n_tilde_closed()?), "{tag}: Ñ series vs Z_K quotient with P_3");
            let z3_closed = s
                .n_tilde_closed()?
                .mul(&s.zk_sub(r, l.gamma))
                .scale(&qpow(s.q(), r * og))
                .mul(&s.div_gamma_closed()?);
            ensure!(z3 == s.expand(&z3_closed), "{tag}: Z_3 vs product formula");
            // Z_{U,L} = Z_1 / Z_K.
            let zk = zeta_k(curve);
            let inv = lib(FactoredRational::from_parts(zk.denominator(), &[]).div(&FactoredRational::from_poly(zk.numerator())))?;
            let zul = series_mul(&z1, &inv.expand(n), n);
            ensure!(zul == lib(z_ul(x, l, curve))?.coefficients(n), "{tag}: Z_1 / Z_K vs closed form");
            let nonzero_p = [p1_term.iter().any(|v| !v.is_zero()), p2.iter().any(|v| !v.is_zero())];
            report.push(format!("{tag}{}", if nonzero_p.contains(&true) { " (P terms active)" } else { "" }));
        }
    }
    Ok(report.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{name:<4} pass  ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{name:<4} FAIL  ({secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
