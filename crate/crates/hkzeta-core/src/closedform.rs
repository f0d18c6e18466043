//! Height zeta functions as exact rational functions in `T = q^-s`, their
//! leading constants, and the main terms `Q_L(M)` of the point counts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::counting::projective_count_formula;
use crate::curve::{r_k, zeta_k, zeta_k_at, zeta_k_at_real, CurveData};
use crate::divisor::{convolve, ell, enumerate_effective, enumerate_effective_up_to, f_factor, n_tilde, Divisor};
use crate::error::{Error, Result};
use crate::hkgeom::{anticanonical, classify, Component, HKVariety, Invariants, LineBundle, Regime};
use crate::series::qpoly::{q_big, q_int};
use crate::series::{asymptotics, AsymptoticExpansion, FactoredRational, QPoly, Radical, ScaledConstant, Q};

#[derive(Clone, Debug)]
pub struct ZetaResult {
    /// `Z(T)` with `ζ(s) = Z(q^-s)`.
    pub z: FactoredRational,
    pub invariants: Invariants,
    /// `lim_{s -> a(L)} (s - a(L))^b(L) ζ(s)`.
    pub constant: ScaledConstant,
}

impl ZetaResult {
    pub fn coefficients(&self, n: usize) -> Vec<Q> {
        self.z.expand(n)
    }

    pub fn asymptotics(&self) -> Result<AsymptoticExpansion> {
        asymptotics(&self.z)
    }

    /// Per-class main-term polynomials `p_j(n)` at `M = j + L n` on the dominant circle.
    pub fn class_data(&self) -> Result<Vec<QPoly>> {
        Ok(self.asymptotics()?.classes)
    }
}

fn qpow(q: u64, e: i64) -> Q {
    let b = num_traits::pow(BigInt::from(q), e.unsigned_abs() as usize);
    if e >= 0 {
        Q::from_integer(b)
    } else {
        Q::new(BigInt::one(), b)
    }
}

fn one_minus_g(curve: &CurveData) -> i64 {
    1 - curve.genus() as i64
}

/// `Z_K(q^e T^m)`.
fn zk_sub(curve: &CurveData, e: i64, m: i64) -> FactoredRational {
    let c = num_traits::pow(BigUint::from(curve.q()), e as usize);
    zeta_k(curve).substitute(&c, m as u32)
}

/// Height zeta function of the good open subset `U` for a primitive big `L`, `a_r > 0`.
pub fn z_ul(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<ZetaResult> {
    if x.a_r() == 0 {
        return Err(Error::Unsupported(String::from("a_r = 0: use the product formula")));
    }
    let inv = classify(l, x)?;
    if inv.eta_l != 1 {
        return Err(Error::Domain(format!("line bundle {l} is not primitive")));
    }
    let z = z_ul_rational(x, l, curve)?;
    Ok(ZetaResult { z, constant: leading_constants(x, l, curve)?.limit, invariants: inv })
}

fn z_ul_rational(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<FactoredRational> {
    let q = curve.q();
    let (r, t) = (x.r() as i64, x.t() as i64);
    let d = x.dim() as i64;
    let e = x.e_value();
    let gamma = l.gamma;
    let c = l.c_l(x);
    let n_x = x.n_x() as i64;
    let og = one_minus_g(curve);

    let z_bc = zk_sub(curve, e + t - 1, c);
    let z_a = zk_sub(curve, r, gamma);
    let den = zk_sub(curve, e, c).mul(&zk_sub(curve, 0, gamma));
    let t1 = z_bc.mul(&z_a).scale(&qpow(q, d * og)).div(&den)?;
    if curve.genus() == 0 {
        return Ok(t1);
    }

    let p1 = p1_series(x, l, curve)?;
    let p2 = p2_series(x, l, curve)?;
    let p3 = p3_series(x, l, curve)?;
    let t2 = p3.mul(&z_a).scale(&qpow(q, r * og)).div(&den)?;
    let t3 = p2.mul(&z_bc).scale(&qpow(q, (d + 1 - n_x) * og)).div(&den)?;
    let t4 = p3.mul(&p2).scale(&qpow(q, (r + 1 - n_x) * og)).div(&den)?;
    let t5 = p1.div(&zk_sub(curve, 0, gamma))?;
    Ok(t1.add(&t2).add(&t3).add(&t4).add(&t5))
}

fn poly_add_term(p: &mut QPoly, deg: usize, v: Q) {
    if p.len() <= deg {
        p.resize(deg + 1, Q::zero());
    }
    p[deg] += v;
}

/// Correction of the `D' ≥ 0` sum against its Riemann–Roch approximation, over `deg D' <= 2g - 2`.
pub fn p3_series(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<FactoredRational> {
    let q = curve.q();
    let g = curve.genus() as i64;
    let (t, e, c) = (x.t() as i64, x.e_value(), l.c_l(x));
    let mut p = QPoly::new();
    if g == 0 {
        return Ok(FactoredRational::zero());
    }
    for dp in enumerate_effective_up_to((2 * g - 2) as u32, curve)? {
        let k = dp.degree();
        let exact = qpow(q, (t - 1) * ell(&dp, curve)? as i64);
        let approx = qpow(q, (t - 1) * (1 - g + k));
        poly_add_term(&mut p, (c * k) as usize, (exact - approx) * qpow(q, e * k));
    }
    Ok(FactoredRational::from_poly(p))
}

/// Correction of the `N_1^1(D)^(N_X - 1)` sum over `deg D <= 2g - 2`.
pub fn p2_series(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<FactoredRational> {
    let q = curve.q();
    let g = curve.genus() as i64;
    let (r, n_x) = (x.r() as i64, x.n_x() as i64);
    let mut p = QPoly::new();
    if g == 0 {
        return Ok(FactoredRational::zero());
    }
    for dd in enumerate_effective_up_to((2 * g - 2) as u32, curve)? {
        let k = dd.degree();
        let exact = qpow(q, (n_x - 1) * ell(&dd, curve)? as i64);
        let approx = qpow(q, (n_x - 1) * (1 - g + k));
        poly_add_term(&mut p, (l.gamma * k) as usize, (exact - approx) * qpow(q, (r + 1 - n_x) * k));
    }
    Ok(FactoredRational::from_poly(p))
}

/// Correction of the product over `j <= r - N_X`, over pairs with `deg D + A deg D' <= 2g - 2`.
pub fn p1_series(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<FactoredRational> {
    let q = curve.q();
    let g = curve.genus() as i64;
    if g == 0 {
        return Ok(FactoredRational::zero());
    }
    let (r, t, n_x) = (x.r() as i64, x.t() as i64, x.n_x() as i64);
    let a = x.a();
    let a_r = x.a_r();
    // a_0 = 0 precedes a_1..a_r.
    let a_j = |j: i64| if j == 0 { 0 } else { a[j as usize - 1] as i64 };
    let big_a = a_r - a_j(r - n_x);
    let c = l.c_l(x);
    let og = one_minus_g(curve);
    let bound = 2 * g - 2;
    let mut p = QPoly::new();
    let divs = enumerate_effective_up_to(bound as u32, curve)?;
    for dp in &divs {
        let kp = dp.degree();
        if big_a * kp > bound {
            continue;
        }
        let nt = Q::from_integer(n_tilde((t - 1) as u32, dp, curve)?);
        for dd in &divs {
            let k = dd.degree();
            if k + big_a * kp > bound {
                continue;
            }
            let base = qpow(q, (n_x - 1) * ell(dd, curve)? as i64);
            let mut exact = Q::one();
            let mut approx = qpow(q, (r + 1 - n_x) * og);
            for j in 0..=(r - n_x) {
                let s = a_r - a_j(j);
                exact *= qpow(q, ell(&(dd + &dp.scale(s)), curve)? as i64);
                approx *= qpow(q, k + s * kp);
            }
            poly_add_term(&mut p, (l.gamma * k + c * kp) as usize, &nt * base * (exact - approx));
        }
    }
    Ok(FactoredRational::from_poly(p))
}

/// `ζ_{U,L}` for any big `L` with `a_r > 0`, through `ζ_{U,mL}(s) = ζ_{U,L}(ms)`.
pub fn zeta_u(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<ZetaResult> {
    let inv = classify(l, x)?;
    let prim = z_ul(x, &l.primitive(), curve)?;
    let z = prim.z.substitute(&BigUint::one(), inv.eta_l as u32);
    Ok(ZetaResult { z, constant: leading_constants(x, l, curve)?.limit, invariants: inv })
}

fn require_genus_zero(curve: &CurveData, what: &str) -> Result<()> {
    if curve.genus() != 0 {
        return Err(Error::Unsupported(format!("{what} is only implemented in genus 0")));
    }
    Ok(())
}

/// `Z_{P^n}(T) = (Q - 1)(1 - qT) / ((q - 1)(1 - QT))`, `Q = q^(n+1)`.
pub fn z_pn(n: u32, curve: &CurveData) -> Result<FactoredRational> {
    require_genus_zero(curve, "the projective zeta function")?;
    let q = BigUint::from(curve.q());
    let big_q = num_traits::pow(q.clone(), n as usize + 1);
    let lead = q_big(&(&big_q - 1u32)) / q_big(&(&q - 1u32));
    Ok(FactoredRational::factor(q, 1, 1)
        .mul(&FactoredRational::factor(big_q, 1, -1))
        .scale(&lead))
}

/// `Z_{A^n} = Z_{P^n} - Z_{P^(n-1)}`.
pub fn z_an(n: u32, curve: &CurveData) -> Result<FactoredRational> {
    let lower = if n == 0 { FactoredRational::zero() } else { z_pn(n - 1, curve)? };
    Ok(z_pn(n, curve)?.sub(&lower))
}

/// `ζ_{P^n}(s)` at a rational `s > n + 1`, genus 0.
pub fn zeta_pn_at(n: u32, curve: &CurveData, s: &Q) -> Result<Radical> {
    require_genus_zero(curve, "the projective zeta function")?;
    if s <= &q_int(n as i64 + 1) {
        return Err(Error::Divergent(format!("ζ_P^{n}({s})")));
    }
    let q = curve.q();
    let qq = q_int(q as i64);
    let big_q = num_traits::pow(qq.clone(), n as usize + 1);
    let u = Radical::q_pow(q, &-s.clone());
    let one = Radical::one();
    let num = one.sub(&u.scale(&qq)).scale(&((&big_q - Q::one()) / (&qq - Q::one())));
    num.div(&one.sub(&u.scale(&big_q)))
}

/// `ζ_{X,L}(s) = ζ_{P^r}(γs) ζ_{P^(t-1)}(ξs)` for `a_r = 0`.
pub fn z_xl_product(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<ZetaResult> {
    if x.a_r() != 0 {
        return Err(Error::Domain(String::from("the product formula needs a_r = 0")));
    }
    require_genus_zero(curve, "the product formula")?;
    let inv = classify(l, x)?;
    let one = BigUint::one();
    let z = z_pn(x.r(), curve)?
        .substitute(&one, l.gamma as u32)
        .mul(&z_pn(x.t() - 1, curve)?.substitute(&one, l.xi as u32));
    Ok(ZetaResult { z, constant: leading_constants(x, l, curve)?.limit, invariants: inv })
}

/// `ζ_{U,L}` for `a_r = 0`, where `U = A^r × P^(t-1)`.
pub fn z_u_product(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<ZetaResult> {
    let full = z_xl_product(x, l, curve)?;
    let one = BigUint::one();
    let lower = if x.r() == 1 {
        FactoredRational::one()
    } else {
        z_pn(x.r() - 1, curve)?.substitute(&one, l.gamma as u32)
    };
    let z = full.z.sub(&lower.mul(&z_pn(x.t() - 1, curve)?.substitute(&one, l.xi as u32)));
    Ok(ZetaResult { z, ..full })
}

/// Height zeta function of one decomposition piece.
pub fn component_zeta(comp: &Component, curve: &CurveData) -> Result<FactoredRational> {
    let one = BigUint::one();
    match comp {
        Component::Projective { n, weight } | Component::Affine { n, weight } => {
            let affine = matches!(comp, Component::Affine { .. });
            if *weight <= 0 && (affine || *n > 0) {
                return Err(Error::Divergent(format!("{comp} has infinitely many points of bounded height")));
            }
            if *weight <= 0 {
                return Ok(FactoredRational::one());
            }
            let z = if affine { z_an(*n, curve)? } else { z_pn(*n, curve)? };
            Ok(z.substitute(&one, *weight as u32))
        }
        Component::Good { variety, bundle } if variety.a_r() == 0 => {
            if bundle.gamma <= 0 || bundle.xi <= 0 {
                return Err(Error::Divergent(format!("{comp} has infinitely many points of bounded height")));
            }
            Ok(z_u_product(variety, bundle, curve)?.z)
        }
        Component::Good { variety, bundle } => match zeta_u(variety, bundle, curve) {
            Err(Error::NotBig { .. }) => {
                Err(Error::Divergent(format!("{comp} has infinitely many points of bounded height")))
            }
            other => Ok(other?.z),
        },
    }
}

/// Leading constants of `ζ_{U,L}` (`a_r > 0`) or `ζ_{X,L}` (`a_r = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingConstants {
    pub invariants: Invariants,
    /// `lim_{s -> a(L)} (s - a(L))^b(L) ζ(s)`.
    pub limit: ScaledConstant,
    /// `C_L` in `Q_L(M) = C_L M + C̃_L(M)` when `A_L = B_L`.
    pub c_l: Option<Q>,
}

pub fn leading_constants(x: &HKVariety, l: &LineBundle, curve: &CurveData) -> Result<LeadingConstants> {
    let inv = classify(l, x)?;
    let q = curve.q();
    let h = q_int(curve.class_number() as i64);
    let og = one_minus_g(curve);
    let (r, t) = (x.r() as i64, x.t() as i64);
    let d = x.dim() as i64;
    let (gamma, xi) = (q_int(l.gamma), q_int(l.xi));
    let c = q_int(inv.c_l);
    let qm1 = q_int(q as i64 - 1);
    let zt = zeta_k_at(curve, t)?;
    let zr = zeta_k_at(curve, r + 1)?;
    let ar0 = x.a_r() == 0;
    let w = inv.a.clone();
    let (limit, c_l) = match inv.regime {
        Regime::EqualAB => {
            let weight = if ar0 { &xi * &gamma } else { &c * &gamma };
            let v = qpow(q, (d + 2) * og) * &h * &h / (&zt * &zr * weight * &qm1 * &qm1);
            let c_l = &v * q_int(inv.eta_l);
            (ScaledConstant::rational(v, -2), Some(c_l))
        }
        Regime::ALessB if ar0 => {
            let v = zeta_pn_at(x.r(), curve, &(&gamma * &w))?
                .scale(&(qpow(q, t * og) * &h / (&zt * &xi * &qm1)));
            (ScaledConstant::new(v, -1), None)
        }
        Regime::AGreaterB if ar0 => {
            let v = zeta_pn_at(x.t() - 1, curve, &(&xi * &w))?
                .scale(&(qpow(q, (r + 1) * og) * &h / (&gamma * &zr * &qm1)));
            (ScaledConstant::new(v, -1), None)
        }
        Regime::ALessB => {
            let n_x = x.n_x() as i64;
            let gw = &gamma * &w;
            let rk = r_k(curve, 1 - n_x, &(&gw - q_int(r) + q_int(n_x - 1)))?;
            let v = rk
                .div(&zeta_k_at_real(curve, &gw)?)?
                .scale(&(qpow(q, (d + 2 - n_x) * og) * &h / (&zt * &c * &qm1)));
            (ScaledConstant::new(v, -1), None)
        }
        Regime::AGreaterB => {
            let arg = &c * &w - q_int(x.e_value());
            let rk = r_k(curve, 1 - t, &arg)?;
            let v = rk
                .div(&zeta_k_at_real(curve, &arg)?)?
                .scale(&(qpow(q, (r + 1) * og) * &h / (&zr * &gamma * &qm1)));
            (ScaledConstant::new(v, -1), None)
        }
    };
    Ok(LeadingConstants { invariants: inv, limit, c_l })
}

/// `Q_L(M)` for `M ∈ η_L Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QLValue {
    /// `Q_L(M) = C_L M + C̃_L(M)`; only `C_L` is determined.
    Linear { c_l: Q },
    /// The positive divisor series truncated at degree `terms`, with the omitted part bounded by `tail_bound`.
    Series { partial: Radical, tail_bound: Radical, terms: u32 },
}

impl QLValue {
    /// Interval `[partial, partial + tail_bound]` as floats, for display.
    pub fn approx(&self) -> (f64, f64) {
        match self {
            QLValue::Linear { c_l } => {
                let v = Radical::rational(c_l.clone()).to_f64();
                (v, v)
            }
            QLValue::Series { partial, tail_bound, .. } => {
                (partial.to_f64(), partial.add(tail_bound).to_f64())
            }
        }
    }
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.mod_floor(&m)
}

/// `Σ_{n ≡ class (mod modulus), n <= cutoff} S_n q^(-n x)` and the tail bound
/// from `S_n <= lead · ρ0^n`.
fn progression_sum(
    q: u64,
    cutoff: u32,
    class: i64,
    modulus: i64,
    x: &Q,
    lead: &Q,
    growth: &Q,
    mut s_n: impl FnMut(u32) -> Result<Q>,
) -> Result<(Radical, Radical)> {
    let mut partial = Radical::zero();
    for n in 0..=cutoff {
        if (n as i64 - class).mod_floor(&modulus) != 0 {
            continue;
        }
        let s = s_n(n)?;
        partial = partial.add(&Radical::q_pow(q, &-(x * q_int(n as i64))).scale(&s));
    }
    // Tail over all n > cutoff, ignoring the congruence.
    let rho = Radical::q_pow(q, &(growth - x));
    let one = Radical::one();
    if rho.sub(&one).signum() != core::cmp::Ordering::Less {
        return Err(Error::Divergent(String::from("Q_L series does not converge")));
    }
    let tail = rho.powi(cutoff as i64 + 1)?.div(&one.sub(&rho))?.scale(lead);
    Ok((partial, tail))
}

/// The main-term coefficient `Q_L(M)`, with divisor sums truncated at degree `cutoff`.
pub fn q_l_formula(x: &HKVariety, l: &LineBundle, big_m: i64, curve: &CurveData, cutoff: u32) -> Result<QLValue> {
    let lc = leading_constants(x, l, curve)?;
    let inv = &lc.invariants;
    if big_m.mod_floor(&inv.eta_l) != 0 {
        return Err(Error::Domain(format!("M = {big_m} is not a multiple of η_L = {}", inv.eta_l)));
    }
    if let Some(c_l) = lc.c_l {
        return Ok(QLValue::Linear { c_l });
    }
    require_genus_zero(curve, "the Q_L divisor sums")?;
    let q = curve.q();
    let h = q_int(curve.class_number() as i64);
    let (r, t) = (x.r() as i64, x.t() as i64);
    let d = x.dim() as i64;
    let l0 = l.primitive();
    let m0 = big_m / inv.eta_l;
    let (g0, xi0, c0) = (l0.gamma, l0.xi, l0.c_l(x));
    let a0 = &inv.a * q_int(inv.eta_l);
    let qm1 = q_int(q as i64 - 1);
    let pre_t = h.clone() / (zeta_k_at(curve, t)? * &qm1);
    let og = one_minus_g(curve);
    let pre_r = qpow(q, (r + 1) * og) * &h / (zeta_k_at(curve, r + 1)? * &qm1);

    // Projective counts obey Ñ(P^n, k) <= q^(n+1) Q^k / (q - 1) with Q = q^(n+1).
    let projective = |n: u32, class: i64, modulus: i64, xexp: &Q| {
        let lead = qpow(q, n as i64 + 1) / &qm1;
        progression_sum(q, cutoff, class, modulus, xexp, &lead, &q_int(n as i64 + 1), |k| {
            Ok(q_big(&projective_count_formula(q, n, k)))
        })
    };
    // Divisor sums obey S_k <= 2 q^m q^((m+1) k); see the genus-0 count of effective divisors.
    let lead_div = |m: u32| q_int(2) * qpow(q, m as i64);

    let (prefactor, (partial, tail)) = match (inv.regime, x.a_r() == 0) {
        (Regime::EqualAB, _) => unreachable!("C_L is returned above"),
        (Regime::ALessB, true) => {
            let class = (m0 * inverse_mod(g0, xi0)).mod_floor(&xi0);
            (qpow(q, t * og) * &pre_t, projective(x.r(), class, xi0, &(&a0 * q_int(g0)))?)
        }
        (Regime::AGreaterB, true) => {
            let class = (m0 * inverse_mod(xi0, g0)).mod_floor(&g0);
            (pre_r, projective(x.t() - 1, class, g0, &(&a0 * q_int(xi0)))?)
        }
        (Regime::ALessB, false) => {
            let n_x = x.n_x() as i64;
            let class = (m0 * inverse_mod(g0, c0)).mod_floor(&c0);
            let xexp = &a0 * q_int(g0) - q_int(r) + q_int(n_x - 1);
            let m = (n_x - 1) as u32;
            let f_m = (r + 1 - n_x) as u32;
            let s = progression_sum(q, cutoff, class, c0, &xexp, &lead_div(m), &q_int(m as i64 + 1), |k| {
                let mut acc = Q::zero();
                for dd in enumerate_effective(k, curve)? {
                    acc += convolve(
                        |a: &Divisor| Ok(Q::from_integer(n_tilde(m, a, curve)?)),
                        |b: &Divisor| f_factor(f_m, b, q),
                        &dd,
                    )?;
                }
                Ok(acc)
            })?;
            (qpow(q, (d + 2 - n_x) * og) * &pre_t, s)
        }
        (Regime::AGreaterB, false) => {
            let class = (m0 * inverse_mod(c0, g0)).mod_floor(&g0);
            let xexp = &a0 * q_int(c0) - q_int(x.e_value());
            let m = (t - 1) as u32;
            let s = progression_sum(q, cutoff, class, g0, &xexp, &lead_div(m), &q_int(m as i64 + 1), |k| {
                let mut acc = BigInt::zero();
                for dd in enumerate_effective(k, curve)? {
                    acc += n_tilde(m, &dd, curve)?;
                }
                Ok(Q::from_integer(acc))
            })?;
            (pre_r, s)
        }
    };
    Ok(QLValue::Series { partial: partial.scale(&prefactor), tail_bound: tail.scale(&prefactor), terms: cutoff })
}

/// `ζ_{U,-K_X}` in `T = q^-s`, together with its double-pole constant at `s = 1`.
pub fn anticanonical_zeta(x: &HKVariety, curve: &CurveData) -> Result<ZetaResult> {
    let k = anticanonical(x);
    if x.a_r() > 0 {
        return zeta_u(x, &k, curve);
    }
    let eta = k.eta() as u32;
    let prim = z_u_product(x, &k.primitive(), curve)?;
    let z = prim.z.substitute(&BigUint::one(), eta);
    Ok(ZetaResult { z, invariants: classify(&k, x)?, constant: leading_constants(x, &k, curve)?.limit })
}

/// Whether every pole inside the dominant circle has `Re s <= a'(L)` (`a''(L)` when `a_r = 0`).
pub fn holomorphy_holds(res: &ZetaResult, q: u64) -> Result<bool> {
    let asy = res.asymptotics()?;
    if asy.growth_exponent(q).as_ref() != Some(&res.invariants.a) {
        return Ok(false);
    }
    Ok(match asy.error_exponent(q) {
        None => true,
        Some(e) => e <= res.invariants.a_sub,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_projective, count_u, count_x_direct};
    use crate::divisor::n_count;
    use crate::ffq::FqField;
    use crate::hkgeom::decompose;
    use alloc::collections::BTreeMap;
    use alloc::vec;
    use proptest::prelude::*;

    fn hk(r: u32, t: u32, a: &[u32]) -> HKVariety {
        HKVariety::new(r, t, a.to_vec()).unwrap()
    }
    fn p1(q: u32) -> CurveData {
        let (p, k) = match q {
            4 => (2, 2),
            8 => (2, 3),
            9 => (3, 2),
            _ => (q, 1),
        };
        CurveData::rational(FqField::new(p, k).unwrap())
    }
    fn ints(v: &[u64]) -> Vec<Q> {
        v.iter().map(|&c| q_int(c as i64)).collect()
    }
    fn zq(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn hirzebruch_surface_matches_enumeration() {
        let x = hk(1, 2, &[1]);
        let k = anticanonical(&x);
        let c = p1(2);
        let res = z_ul(&x, &k, &c).unwrap();
        // q^2 Z_K(q^2 T^3) Z_K(q T^2) / (Z_K(q T^3) Z_K(T^2)), spelled out at q = 2.
        let zk = |e: u32, m: u32| zeta_k(&c).substitute(&BigUint::from(1u32 << e), m);
        let shape = zk(2, 3).mul(&zk(1, 2)).scale(&q_int(4)).div(&zk(1, 3).mul(&zk(0, 2))).unwrap();
        assert_eq!(res.coefficients(12), shape.expand(12));
        let counts = count_u(&x, &k, &c, 6).unwrap();
        assert_eq!(res.coefficients(6), ints(&counts));
        assert!(res.coefficients(1)[0] >= Q::one());
    }

    #[test]
    fn u_zeta_matches_enumeration_in_each_regime() {
        for (x, l, q, m) in [
            (hk(1, 2, &[1]), LineBundle::new(1, 1), 2, 6),
            (hk(1, 2, &[1]), LineBundle::new(3, 1), 2, 7),
            (hk(1, 2, &[2]), LineBundle::new(1, 2), 2, 6),
            (hk(1, 2, &[1]), LineBundle::new(2, 1), 3, 4),
            (hk(2, 2, &[0, 1]), LineBundle::new(3, 1), 2, 4),
            (hk(1, 3, &[1]), LineBundle::new(1, 1), 2, 3),
        ] {
            let c = p1(q);
            let res = z_ul(&x, &l, &c).unwrap();
            let counts = count_u(&x, &l, &c, m).unwrap();
            assert_eq!(res.coefficients(m as usize), ints(&counts), "{x} L={l} q={q}");
        }
    }

    #[test]
    fn z_ul_rejects_bad_bundles() {
        let c = p1(2);
        assert!(matches!(z_ul(&hk(1, 2, &[1]), &LineBundle::new(2, 2), &c), Err(Error::Domain(_))));
        assert!(matches!(z_ul(&hk(1, 2, &[1]), &LineBundle::new(1, -1), &c), Err(Error::NotBig { .. })));
        assert!(matches!(z_ul(&hk(1, 2, &[0]), &LineBundle::new(1, 1), &c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn projective_zeta_matches_counts() {
        for q in [2u32, 3] {
            let f = FqField::prime(q).unwrap();
            let c = CurveData::rational(f.clone());
            for n in 1..=2 {
                let z = z_pn(n, &c).unwrap().expand(4);
                for d in 0..=4 {
                    assert_eq!(z[d as usize], q_int(count_projective(&f, n, d) as i64), "q={q} n={n} d={d}");
                }
            }
        }
        assert_eq!(z_pn(1, &p1(2)).unwrap().expand(0)[0], q_int(3));
    }

    #[test]
    fn projective_residue_constant() {
        for q in [2u32, 3, 4, 5] {
            let c = p1(q);
            for n in 1..=3u32 {
                let asy = asymptotics(&z_pn(n, &c).unwrap()).unwrap();
                let got = asy.limit_constant(q as u64).unwrap();
                let expect = qpow(q as u64, n as i64 + 1)
                    / (zeta_k_at(&c, n as i64 + 1).unwrap() * q_int(q as i64 - 1));
                assert_eq!(got, ScaledConstant::rational(expect, -1));
            }
        }
    }

    #[test]
    fn product_formula_for_p1_times_p1() {
        let f = FqField::prime(2).unwrap();
        let c = CurveData::rational(f.clone());
        let x = hk(1, 2, &[0]);
        let l = LineBundle::new(1, 1);
        let res = z_xl_product(&x, &l, &c).unwrap();
        let proj: Vec<u64> = (0..=5).map(|d| count_projective(&f, 1, d)).collect();
        let conv: Vec<u64> = (0..=5).map(|m| (0..=m).map(|i| proj[i] * proj[m - i]).sum()).collect();
        assert_eq!(res.coefficients(5), ints(&conv));
        assert_eq!(res.coefficients(4), ints(&count_x_direct(&x, &l, &c, 4).unwrap()));
        // Only γ d1 + ξ d2 = M contributes.
        let l2 = LineBundle::new(2, 3);
        let z = z_xl_product(&x, &l2, &c).unwrap().coefficients(10);
        for (m, v) in z.iter().enumerate() {
            let direct: u64 = (0..=m / 2)
                .filter(|d1| (m - 2 * d1) % 3 == 0)
                .map(|d1| proj[d1] * proj[(m - 2 * d1) / 3])
                .sum();
            assert_eq!(*v, q_int(direct as i64), "M={m}");
        }
    }

    #[test]
    fn product_error_cases() {
        let c = p1(2);
        assert!(z_xl_product(&hk(1, 2, &[1]), &LineBundle::new(1, 1), &c).is_err());
        let g1 = CurveData::from_l_polynomial(2, 1, vec![1, 0, 2], 4, BTreeMap::new()).unwrap();
        assert!(matches!(z_pn(1, &g1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn equal_case_constant() {
        let x = hk(1, 2, &[1]);
        let k = anticanonical(&x);
        let c = p1(2);
        let lc = leading_constants(&x, &k, &c).unwrap();
        let z2 = zeta_k_at(&c, 2).unwrap();
        let expect = q_int(16) / (&z2 * &z2 * q_int(6));
        assert_eq!(lc.limit, ScaledConstant::rational(expect.clone(), -2));
        assert_eq!(lc.c_l, Some(expect));
        let res = z_ul(&x, &k, &c).unwrap();
        assert_eq!(res.asymptotics().unwrap().limit_constant(2).unwrap(), lc.limit);
    }

    #[test]
    fn surface_constants_for_h_plus_f() {
        let x = hk(1, 2, &[1]);
        let l = LineBundle::new(1, 1);
        for q in [2i64, 3, 4, 5, 7, 8, 9] {
            let c = p1(q as u32);
            let lc = leading_constants(&x, &l, &c).unwrap();
            assert_eq!(lc.invariants.regime, Regime::AGreaterB);
            let c3 = zq((q * q + q + 1) * (q * q - 1), q * q);
            assert_eq!(lc.limit, ScaledConstant::rational(c3.clone(), -1), "q={q}");
            let c2 = zq(q * q - 1, q);
            assert!(c3 > q_int(2) * &c2);
            for comp in decompose(&x, &l) {
                let z = component_zeta(&comp, &c).unwrap();
                let asy = asymptotics(&z).unwrap();
                let lim = asy.limit_constant(q as u64).unwrap();
                match comp {
                    Component::Good { .. } => assert_eq!(lim, ScaledConstant::rational(c3.clone(), -1)),
                    _ => assert_eq!(lim, ScaledConstant::rational(c2.clone(), -1)),
                }
            }
        }
    }

    #[test]
    fn surface_q_l_series_brackets_constant() {
        let x = hk(1, 2, &[1]);
        let l = LineBundle::new(1, 1);
        let c = p1(2);
        let QLValue::Series { partial, tail_bound, .. } = q_l_formula(&x, &l, 7, &c, 12).unwrap() else {
            panic!("expected a series");
        };
        let c3 = Radical::rational(zq(21, 4));
        assert_ne!(c3.sub(&partial).signum(), core::cmp::Ordering::Less);
        assert_ne!(partial.add(&tail_bound).sub(&c3).signum(), core::cmp::Ordering::Less);
        let lc = leading_constants(&x, &l, &c).unwrap();
        assert_eq!(lc.limit.value, c3);
    }

    #[test]
    fn q_l_equal_case_is_eta_times_limit() {
        let x = hk(1, 2, &[1]);
        let c = p1(2);
        for m in [1, 2, 3] {
            let l = anticanonical(&x).scale(m);
            let lc = leading_constants(&x, &l, &c).unwrap();
            let QLValue::Linear { c_l } = q_l_formula(&x, &l, 6 * m, &c, 0).unwrap() else {
                panic!("expected C_L");
            };
            assert_eq!(Some(c_l.clone()), lc.c_l);
            assert_eq!(lc.limit.as_rational().unwrap() * q_int(m), c_l);
        }
        assert!(q_l_formula(&x, &anticanonical(&x).scale(2), 3, &c, 0).is_err());
    }

    #[test]
    fn q_l_matches_counts_in_simple_pole_cases() {
        // coefficient ≈ Q_L(M) q^(a M) for large M; compare at moderate M through the main term.
        for (x, l) in [
            (hk(1, 2, &[1]), LineBundle::new(1, 1)),
            (hk(1, 2, &[1]), LineBundle::new(3, 1)),
            (hk(1, 2, &[0]), LineBundle::new(1, 2)),
            (hk(1, 2, &[0]), LineBundle::new(2, 1)),
            (hk(2, 2, &[0, 1]), LineBundle::new(4, 1)),
            (hk(2, 2, &[1, 1]), LineBundle::new(1, 1)),
        ] {
            let c = p1(2);
            let res = if x.a_r() > 0 { zeta_u(&x, &l, &c) } else { z_xl_product(&x, &l, &c) }.unwrap();
            let asy = res.asymptotics().unwrap();
            let a = res.invariants.a.clone();
            for big_m in 30..30 + asy.base.1 as i64 {
                let main = asy.main_term(big_m as u64);
                let qa = Radical::q_pow(2, &(&a * q_int(big_m)));
                let QLValue::Series { partial, tail_bound, .. } = q_l_formula(&x, &l, big_m, &c, 10).unwrap() else {
                    panic!("{x} {l}: expected a series");
                };
                let lo = partial.mul(&qa);
                let hi = partial.add(&tail_bound).mul(&qa);
                let main = Radical::rational(main);
                assert_ne!(main.sub(&lo).signum(), core::cmp::Ordering::Less, "{x} {l} M={big_m}");
                assert_ne!(hi.sub(&main).signum(), core::cmp::Ordering::Less, "{x} {l} M={big_m}");
                assert_eq!(partial.signum(), core::cmp::Ordering::Greater);
            }
        }
    }

    #[test]
    fn anticanonical_examples() {
        let c = p1(2);
        let z2 = zeta_k_at(&c, 2).unwrap();
        let z3 = zeta_k_at(&c, 3).unwrap();
        let x = hk(1, 2, &[1]);
        let expect = q_int(16) / (&z2 * &z2 * q_int(3) * q_int(2));
        assert_eq!(anticanonical_zeta(&x, &c).unwrap().constant, ScaledConstant::rational(expect, -2));
        // P^1 x P^2.
        let x = hk(1, 3, &[0]);
        let res = anticanonical_zeta(&x, &c).unwrap();
        let expect = q_int(32) / (&z3 * &z2 * q_int(6));
        assert_eq!(res.constant, ScaledConstant::rational(expect, -2));
        assert_eq!(res.asymptotics().unwrap().limit_constant(2).unwrap(), res.constant);
        // P^1 x P^1 has η_X = 2.
        let x = hk(1, 2, &[0]);
        let res = anticanonical_zeta(&x, &c).unwrap();
        for (m, v) in res.coefficients(12).iter().enumerate() {
            if m % 2 == 1 {
                assert!(v.is_zero());
            }
        }
        assert_eq!(res.asymptotics().unwrap().limit_constant(2).unwrap(), res.constant);
        let x = hk(2, 2, &[1, 1]);
        let res = anticanonical_zeta(&x, &c).unwrap();
        let eta = x.eta_x() as usize;
        for (m, v) in res.coefficients(20).iter().enumerate() {
            if m % eta != 0 {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn anticanonical_u_for_product_matches_counts() {
        let c = p1(2);
        for x in [hk(1, 2, &[0]), hk(2, 2, &[0, 0])] {
            let res = anticanonical_zeta(&x, &c).unwrap();
            let k = anticanonical(&x);
            let comp = Component::Good { variety: x.clone(), bundle: k };
            let counts = crate::counting::count_component(&comp, &c, 8).unwrap();
            assert_eq!(res.coefficients(8), ints(&counts));
        }
    }

    /// `R_L(D)` as a sum over `D' <= D / c_L`, summed by degree and divided by `Z_K(T)`.
    fn z_ul_from_r_l(x: &HKVariety, l: &LineBundle, curve: &CurveData, n: u32) -> Vec<Q> {
        let c = l.c_l(x);
        let mut a = vec![0i64];
        a.extend(x.a()[..x.r() as usize - 1].iter().map(|&v| v as i64));
        let mut z1 = Vec::new();
        for k in 0..=n {
            let mut acc = BigInt::zero();
            for dd in enumerate_effective(k, curve).unwrap() {
                for dp in dd.floor_div(c).sub_divisors().unwrap() {
                    let mut term = n_tilde(x.t() - 1, &dp, curve).unwrap();
                    for aj in &a {
                        let e = dd.sub(&dp.scale(l.xi + l.gamma * aj));
                        term *= BigInt::from(n_count(1, l.gamma as u32, &e, curve).unwrap());
                    }
                    acc += term;
                }
            }
            z1.push(Q::from_integer(acc));
        }
        let zk = zeta_k(curve);
        let inv = FactoredRational::from_parts(zk.denominator(), &[]).div(&FactoredRational::from_poly(zk.numerator())).unwrap();
        crate::series::qpoly::mul(&z1, &inv.expand(n as usize))[..=n as usize].to_vec()
    }

    fn genus_two() -> CurveData {
        let base = CurveData::from_l_polynomial(2, 2, vec![1, 0, 0, 0, 4], 6, BTreeMap::new()).unwrap();
        let mut table = BTreeMap::new();
        let mut canonical = true;
        for k in 1..=2 {
            for d in enumerate_effective(k, &base).unwrap() {
                let v = if k == 2 && canonical { 2 } else { 1 };
                canonical &= k != 2;
                table.insert(d, v);
            }
        }
        CurveData::from_l_polynomial(2, 2, vec![1, 0, 0, 0, 4], 6, table).unwrap()
    }

    #[test]
    fn higher_genus_matches_r_l_sum() {
        let g1 = CurveData::from_l_polynomial(2, 1, vec![1, 1, 2], 6, BTreeMap::new()).unwrap();
        let g2 = genus_two();
        for curve in [&g1, &g2] {
            for (x, l) in [
                (hk(1, 2, &[1]), LineBundle::new(2, 1)),
                (hk(1, 2, &[1]), LineBundle::new(1, 1)),
                (hk(2, 2, &[0, 1]), LineBundle::new(3, 1)),
                (hk(2, 2, &[1, 1]), LineBundle::new(1, 1)),
            ] {
                let z = z_ul(&x, &l, curve).unwrap();
                let n = 5;
                assert_eq!(z.coefficients(n), z_ul_from_r_l(&x, &l, curve, n as u32), "g={} {x} {l}", curve.genus());
            }
        }
    }

    #[test]
    fn r_l_sum_matches_closed_form_in_genus_zero() {
        let c = p1(2);
        for (x, l) in [(hk(1, 2, &[1]), LineBundle::new(2, 1)), (hk(2, 2, &[0, 1]), LineBundle::new(3, 1))] {
            assert_eq!(z_ul(&x, &l, &c).unwrap().coefficients(5), z_ul_from_r_l(&x, &l, &c, 5));
        }
    }

    #[test]
    fn genus_one_constants_are_positive() {
        let g1 = CurveData::from_l_polynomial(3, 1, vec![1, -1, 3], 6, BTreeMap::new()).unwrap();
        for l in [LineBundle::new(2, 1), LineBundle::new(1, 1), LineBundle::new(3, 1)] {
            let lc = leading_constants(&hk(1, 2, &[1]), &l, &g1).unwrap();
            assert_eq!(lc.limit.value.signum(), core::cmp::Ordering::Greater, "{l}");
        }
    }

    fn small_case() -> impl Strategy<Value = (HKVariety, LineBundle, u32)> {
        (1u32..=2, 2u32..=3, 0u32..=2, 0u32..=2, 1i64..=3, -2i64..=3, prop::sample::select(vec![2u32, 3]))
            .prop_filter_map("big bundle with a_r > 0", |(r, t, a1, a2, g, xi, q)| {
                let a = if r == 1 { vec![a2] } else { vec![a1.min(a2), a1.max(a2)] };
                let x = HKVariety::new(r, t, a).ok()?;
                let l = LineBundle::new(g, xi);
                (x.a_r() > 0 && crate::hkgeom::is_big(&l, &x)).then_some((x, l, q))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling_law((x, l, q) in small_case(), m in 2i64..=3) {
            let c = p1(q);
            let base = z_ul_rational(&x, &l, &c).unwrap();
            let scaled = z_ul_rational(&x, &l.scale(m), &c).unwrap();
            let n = 8usize;
            let b = base.expand(n);
            let s = scaled.expand(n * m as usize);
            for (i, v) in s.iter().enumerate() {
                if i % m as usize == 0 {
                    prop_assert_eq!(v, &b[i / m as usize]);
                } else {
                    prop_assert!(v.is_zero());
                }
            }
            let via = zeta_u(&x, &l.scale(m), &c).unwrap();
            prop_assert_eq!(via.coefficients(n), scaled.expand(n));
        }

        #[test]
        fn pole_order_and_holomorphy((x, l, q) in small_case()) {
            let c = p1(q);
            let res = zeta_u(&x, &l, &c).unwrap();
            let asy = res.asymptotics().unwrap();
            prop_assert_eq!(asy.order, res.invariants.b);
            for p in &asy.classes {
                prop_assert!(p.len() <= res.invariants.b as usize);
            }
            prop_assert!(holomorphy_holds(&res, q as u64).unwrap());
            for v in res.coefficients(12) {
                prop_assert!(v.is_integer() && v >= Q::zero());
            }
        }

        #[test]
        fn limit_constant_matches_formula((x, l, q) in small_case()) {
            let c = p1(q);
            let res = zeta_u(&x, &l, &c).unwrap();
            prop_assert_eq!(res.asymptotics().unwrap().limit_constant(q as u64).unwrap(), res.constant);
        }

        #[test]
        fn product_constants_match((r, t, g, xi) in (1u32..=2, 2u32..=3, 1i64..=3, 1i64..=3), q in prop::sample::select(vec![2u32, 3])) {
            let c = p1(q);
            let x = HKVariety::new(r, t, vec![0; r as usize]).unwrap();
            let res = z_xl_product(&x, &LineBundle::new(g, xi), &c).unwrap();
            let asy = res.asymptotics().unwrap();
            prop_assert_eq!(asy.order, res.invariants.b);
            prop_assert_eq!(asy.limit_constant(q as u64).unwrap(), res.constant.clone());
            prop_assert!(holomorphy_holds(&res, q as u64).unwrap());
        }
    }
}
