use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsorkit::elliptic_ff::{
    aut_group_order, cubic_rational_point, curve_group_order, satisfies_hasse,
    weierstrass_reduction, PlaneCubic, WeierstrassCurve,
};
use torsorkit::modarith::{mul_mod, pow_mod};
use torsorkit::real_curves::{h1_real_size, real_two_torsion, sturm_real_roots, RationalCurve, TwoTorsion};
use torsorkit::Error;

/// `p + 1 + sum_x chi(x^3 + ax + b)` with chi from Euler's criterion.
fn legendre_count(p: u64, a: u64, b: u64) -> u64 {
    let mut t: i64 = 0;
    for x in 0..p {
        let r = (pow_mod(x, 3, p) + mul_mod(a, x, p) + b) % p;
        if r == 0 {
            continue;
        }
        t += if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 };
    }
    (p as i64 + 1 + t) as u64
}

#[test]
fn counts_match_character_sum() {
    for p in [5u64, 7, 11, 13, 17, 101] {
        for a in 0..p.min(20) {
            for b in 0..p.min(20) {
                if let Ok(e) = WeierstrassCurve::new(p, a as i64, b as i64) {
                    assert_eq!(curve_group_order(&e), legendre_count(p, a, b), "{e}");
                }
            }
        }
    }
}

#[test]
fn supersingular_counts() {
    for p in [7u64, 11, 19, 23, 31, 43] {
        let e = WeierstrassCurve::new(p, 1, 0).unwrap();
        assert_eq!(curve_group_order(&e), p + 1);
    }
    for p in [5u64, 11, 17, 23, 29] {
        let e = WeierstrassCurve::new(p, 0, 1).unwrap();
        assert_eq!(curve_group_order(&e), p + 1);
    }
}

#[test]
fn hasse_everywhere_small() {
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        for a in 0..p {
            for b in 0..p {
                match WeierstrassCurve::new(p, a as i64, b as i64) {
                    Ok(e) => assert!(satisfies_hasse(&e, curve_group_order(&e))),
                    Err(Error::Singular(_)) => {
                        assert_eq!((4 * pow_mod(a, 3, p) + 27 * mul_mod(b, b, p)) % p, 0)
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn aut_orders() {
    assert_eq!(aut_group_order(&WeierstrassCurve::new(7, 0, 1).unwrap()), 6);
    assert_eq!(aut_group_order(&WeierstrassCurve::new(5, 0, 1).unwrap()), 2);
    assert_eq!(aut_group_order(&WeierstrassCurve::new(13, 1, 0).unwrap()), 4);
    assert_eq!(aut_group_order(&WeierstrassCurve::new(7, 1, 0).unwrap()), 2);
    assert_eq!(aut_group_order(&WeierstrassCurve::new(11, 1, 1).unwrap()), 2);
}

fn weierstrass_cubic(a: i64, b: i64) -> [i64; 10] {
    // y^2 z - x^3 - a x z^2 - b z^3
    [-1, 0, 0, 0, 0, -a, 0, 1, 0, -b]
}

#[test]
fn weierstrass_shaped_cubics_smooth_iff_nonzero_discriminant() {
    for p in [5u64, 7, 11] {
        for a in 0..p as i64 {
            for b in 0..p as i64 {
                let disc = (4 * a.pow(3) + 27 * b * b).rem_euclid(p as i64);
                let c = PlaneCubic::new(p, weierstrass_cubic(a, b));
                assert_eq!(c.is_ok(), disc != 0, "p={p} a={a} b={b}");
            }
        }
    }
}

#[test]
fn diagonal_and_reducible_cubics() {
    for p in [5u64, 7, 11, 13] {
        assert!(PlaneCubic::new(p, [1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).is_ok());
        assert!(PlaneCubic::new(p, [2, 0, 0, 0, 0, 0, 3, 0, 0, 1]).is_ok());
        assert!(PlaneCubic::new(p, [1, 0, 0, 0, 0, 0, 1, 0, 0, 0]).is_err());
        // x * (x^2 + y^2 + z^2)
        assert!(PlaneCubic::new(p, [1, 0, 0, 1, 0, 1, 0, 0, 0, 0]).is_err());
    }
}

#[test]
fn reduction_preserves_counts_on_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 60 {
        let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
        let coeffs: [i64; 10] = std::array::from_fn(|_| rng.gen_range(0..p as i64));
        let Ok(c) = PlaneCubic::new(p, coeffs) else { continue };
        let pt = cubic_rational_point(&c).expect("smooth cubic over a finite field has a point");
        let r = weierstrass_reduction(&c, pt).unwrap();
        assert_eq!(r.cubic_points, r.curve_points);
        assert_eq!(r.curve_points, c.point_count());
        done += 1;
    }
}

proptest! {
    #[test]
    fn twists_by_units_keep_count_and_aut(
        p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37]),
        a in 0u64..40, b in 0u64..40, u in 1u64..40,
    ) {
        let (a, b, u) = (a % p, b % p, u % p);
        prop_assume!(u != 0);
        let Ok(e) = WeierstrassCurve::new(p, a as i64, b as i64) else { return Ok(()) };
        let u4 = pow_mod(u, 4, p);
        let u6 = pow_mod(u, 6, p);
        let f = WeierstrassCurve::new(p, mul_mod(u4, a, p) as i64, mul_mod(u6, b, p) as i64).unwrap();
        prop_assert_eq!(curve_group_order(&e), curve_group_order(&f));
        prop_assert_eq!(aut_group_order(&e), aut_group_order(&f));
        prop_assert_eq!(e.j_invariant(), f.j_invariant());
    }

    #[test]
    fn sturm_agrees_with_discriminant(
        an in -60i64..60, ad in 1i64..20, bn in -60i64..60, bd in 1i64..20,
    ) {
        let a = BigRational::new(BigInt::from(an), BigInt::from(ad));
        let b = BigRational::new(BigInt::from(bn), BigInt::from(bd));
        let inner = BigRational::from_integer(4.into()) * &a * &a * &a
            + BigRational::from_integer(27.into()) * &b * &b;
        match RationalCurve::new(a, b) {
            Ok(c) => {
                let roots = sturm_real_roots(&c.cubic()).unwrap();
                prop_assert_eq!(roots, if inner.is_negative() { 3 } else { 1 });
                let kind = real_two_torsion(&c).unwrap();
                let size = h1_real_size(&c).unwrap();
                prop_assert_eq!(size, if kind == TwoTorsion::Full { 2 } else { 1 });
            }
            Err(_) => prop_assert!(num_traits::Zero::is_zero(&inner)),
        }
    }
}

#[test]
fn real_examples() {
    assert_eq!(h1_real_size(&RationalCurve::from_integers(-1, 0).unwrap()).unwrap(), 2);
    assert_eq!(h1_real_size(&RationalCurve::from_integers(1, 0).unwrap()).unwrap(), 1);
    let c: RationalCurve = "rcurve a=-1/1 b=0/1".parse().unwrap();
    assert_eq!(c.to_string(), "rcurve a=-1/1 b=0/1");
}
