use hkzeta_core::closedform::{component_zeta, leading_constants, zeta_u};
use hkzeta_core::counting::{count_component, count_x_direct};
use hkzeta_core::curve::CurveData;
use hkzeta_core::ffq::FqField;
use hkzeta_core::hkgeom::{anticanonical, decompose, HKVariety, LineBundle};
use hkzeta_core::series::{FactoredRational, Q};

fn rational(q: u32) -> CurveData {
    CurveData::rational(FqField::prime(q).unwrap())
}

#[test]
fn component_zetas_sum_to_direct_counts() {
    let c = rational(2);
    for (x, l, m) in [
        (HKVariety::parse("HK(r=1,t=2;a=1)").unwrap(), LineBundle::new(1, 1), 3),
        (HKVariety::parse("HK(r=1,t=2;a=1)").unwrap(), LineBundle::new(2, 1), 4),
        (HKVariety::parse("HK(r=1,t=2;a=2)").unwrap(), LineBundle::new(1, 1), 3),
    ] {
        let direct = count_x_direct(&x, &l, &c, m).unwrap();
        let mut total = FactoredRational::zero();
        let mut by_count = vec![0u64; m as usize + 1];
        for comp in decompose(&x, &l) {
            total = total.add(&component_zeta(&comp, &c).unwrap());
            for (acc, v) in by_count.iter_mut().zip(count_component(&comp, &c, m).unwrap()) {
                *acc += v;
            }
        }
        assert_eq!(by_count, direct, "{x} L={l}");
        let expect: Vec<Q> = direct.iter().map(|&v| Q::from_integer(v.into())).collect();
        assert_eq!(total.expand(m as usize), expect, "{x} L={l}");
    }
}

#[test]
fn constants_agree_across_entry_points() {
    let c = rational(3);
    let x = HKVariety::parse("HK(r=2,t=2;a=1,1)").unwrap();
    let k = anticanonical(&x);
    let res = zeta_u(&x, &k, &c).unwrap();
    let lc = leading_constants(&x, &k, &c).unwrap();
    assert_eq!(res.constant, lc.limit);
    assert_eq!(res.asymptotics().unwrap().limit_constant(3).unwrap(), lc.limit);
}
