//! Scripted scenarios for the worked examples, each a list of named checks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torsorkit::brauer_fibration::{
    fiber_derived_equivalent, fiber_derived_witness, same_cyclic_in_quotient, SplitBrauerModel,
};
use torsorkit::cohomology::h1;
use torsorkit::elliptic_ff::{
    cubic_rational_point, curve_group_order, satisfies_hasse, weierstrass_reduction, PlaneCubic,
    WeierstrassCurve,
};
use torsorkit::modarith::{is_prime, unit_group, FiniteAbelianGroup};
use torsorkit::real_curves::{h1_real_size, sturm_real_roots, two_torsion_module, RationalCurve, TwoTorsion};
use torsorkit::torsor_model::{classify, WCModel};
use torsorkit::unitary_orbits::{polarized_conclusion_check_with, PolarizationModel};
use torsorkit::{Error, Guards, Result};

use crate::args::Invocation;
use crate::report::Report;

pub const NAMES: [&str; 6] = [
    "finite-field",
    "real",
    "existence",
    "moduli-spaces",
    "polarized",
    "fibration",
];

pub fn reproduce_cmd(inv: &Invocation, guards: &Guards) -> Result<Report> {
    let name = match inv.positional.as_slice() {
        [name] => name.as_str(),
        [] => return Err(Error::parse(format!("reproduce needs a name: {}", NAMES.join(", ")))),
        _ => return Err(Error::parse("reproduce takes exactly one name")),
    };
    let args = &inv.args;
    if name == "moduli-spaces" {
        args.allow(&["N"])?;
    } else {
        args.allow(&[])?;
    }
    let mut inputs: BTreeMap<String, String> = args.inputs().clone();
    inputs.insert("name".into(), name.into());
    let mut r = Report::new("reproduce", &inputs);
    r.set("seed", inv.seed);
    match name {
        "existence" => existence(&mut r),
        "moduli-spaces" => moduli_spaces(&mut r, args.u64_or("N", 3)?)?,
        "real" => real(&mut r, inv.seed)?,
        "finite-field" => finite_field(&mut r, inv.seed, guards)?,
        "polarized" => polarized(&mut r, guards)?,
        "fibration" => fibration(&mut r)?,
        _ => {
            return Err(Error::parse(format!(
                "unknown example {name:?} (expected one of: {})",
                NAMES.join(", ")
            )))
        }
    }
    Ok(r)
}

/// Period 5 with an automorphism of order 4 acting by `{1, 4}`.
fn existence(r: &mut Report) {
    let c = classify(&WCModel::new(5, &[1, 4]).expect("valid model"));
    r.set("iso_classes", &c.iso_classes)
        .set("derived_classes", &c.derived_classes)
        .check("two_iso_classes_among_generators", c.generator_iso_classes == 2)
        .check("one_derived_class_among_generators", c.generator_derived_classes == 1)
        .check("derived_class_is_all_generators", c.derived_classes.contains(&vec![1, 2, 3, 4]));
}

/// Smallest prime `p > 3N` with `A = {+-1}` has `(p-1)/2 >= N` iso classes.
fn moduli_spaces(r: &mut Report, n: u64) -> Result<()> {
    if n == 0 || n > 1_000 {
        return Err(Error::invalid("N must be between 1 and 1000"));
    }
    let p = (3 * n + 1..).find(|&p| is_prime(p)).expect("primes are unbounded");
    let c = classify(&WCModel::generic(p)?);
    let mut per_prime = BTreeMap::new();
    let mut all_ok = true;
    for q in (7..=97).filter(|&q| is_prime(q)) {
        let k = classify(&WCModel::generic(q)?).generator_iso_classes;
        all_ok &= k == (q - 1) / 2;
        per_prime.insert(q.to_string(), k);
    }
    r.set("prime", p)
        .set("generator_iso_classes", c.generator_iso_classes)
        .set("iso_classes_by_prime", per_prime)
        .check("count_is_half_of_p_minus_1", c.generator_iso_classes == (p - 1) / 2)
        .check("at_least_N_classes", c.generator_iso_classes >= n)
        .check("small_primes_match", all_ok);
    Ok(())
}

fn real(r: &mut Report, seed: u64) -> Result<()> {
    let full = h1(&two_torsion_module(TwoTorsion::Full)?)?.size();
    let swap = h1(&two_torsion_module(TwoTorsion::Half)?)?.size();
    let split = h1_real_size(&RationalCurve::from_integers(-1, 0)?)?;
    let nonsplit = h1_real_size(&RationalCurve::from_integers(1, 0)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = true;
    let mut tested = 0;
    while tested < 100 {
        let mut q = || {
            BigRational::new(
                BigInt::from(rng.gen_range(-200i64..=200)),
                BigInt::from(rng.gen_range(1i64..=50)),
            )
        };
        let (a, b) = (q(), q());
        let Ok(curve) = RationalCurve::new(a, b) else { continue };
        let expected = if curve.discriminant().is_positive() { 3 } else { 1 };
        agree &= sturm_real_roots(&curve.cubic())? == expected;
        tested += 1;
    }
    r.set("h1_e2_trivial_action", full)
        .set("h1_e2_swap_action", swap)
        .set("h1_real_x3_minus_x", split)
        .set("h1_real_x3_plus_x", nonsplit)
        .set("random_curves", tested)
        .check("trivial_action_gives_4", full == 4)
        .check("swap_action_gives_1", swap == 1)
        .check("x3_minus_x_gives_2", split == 2)
        .check("x3_plus_x_gives_1", nonsplit == 1)
        .check("sturm_matches_discriminant", agree);
    Ok(())
}

fn finite_field(r: &mut Report, seed: u64, guards: &Guards) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pointed = true;
    let mut preserved = true;
    let mut sampled = 0;
    for p in [5u64, 7] {
        let mut got = 0;
        while got < 25 {
            let coeffs: [i64; 10] = std::array::from_fn(|_| rng.gen_range(0..p as i64));
            let Ok(c) = PlaneCubic::new_with(p, coeffs, guards) else { continue };
            match cubic_rational_point(&c) {
                Some(pt) => {
                    let red = weierstrass_reduction(&c, pt)?;
                    preserved &= red.cubic_points == red.curve_points;
                }
                None => pointed = false,
            }
            got += 1;
        }
        sampled += got;
    }
    let mut hasse = true;
    let mut curves = 0;
    for p in [5u64, 7, 11, 13] {
        for a in 0..p as i64 {
            for b in 0..p as i64 {
                if let Ok(e) = WeierstrassCurve::new(p, a, b) {
                    hasse &= satisfies_hasse(&e, curve_group_order(&e));
                    curves += 1;
                }
            }
        }
    }
    r.set("smooth_cubics", sampled)
        .set("weierstrass_curves", curves)
        .check("every_smooth_cubic_has_a_point", pointed)
        .check("reduction_preserves_counts", preserved)
        .check("hasse_bound", hasse);
    Ok(())
}

fn polarized(r: &mut Report, guards: &Guards) -> Result<()> {
    let mut runs = 0;
    let mut failures = 0;
    for level in 1..=12 {
        for m in 1..=12 {
            for phi in unit_group(m)? {
                let pol = PolarizationModel::new(m, phi as i64, None)?;
                let rep = polarized_conclusion_check_with(level, m, &pol, guards)?;
                failures += rep.failures().count();
                runs += 1;
            }
        }
    }
    r.set("runs", runs)
        .set("failures", failures)
        .check("orbit_slice_is_coprime_multiples", failures == 0);
    Ok(())
}

fn fibration(r: &mut Report) -> Result<()> {
    let mut models = 0;
    let mut related = 0u64;
    let mut implication = true;
    for n in 1..=4 {
        for shape in [vec![], vec![2], vec![3], vec![4], vec![2, 2]] {
            let g = FiniteAbelianGroup::new(shape)?;
            let elems: Vec<Vec<u64>> = g.elements().collect();
            let mut seen = BTreeSet::new();
            for a in &elems {
                for b in &elems {
                    let gens = [a.clone(), b.clone()];
                    if !seen.insert(g.span(&gens)) {
                        continue;
                    }
                    let gens: Vec<Vec<i64>> =
                        gens.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
                    let model = SplitBrauerModel::new(n, g.clone(), &gens)?;
                    let classes: Vec<_> = model.classes().collect();
                    for x in &classes {
                        for y in &classes {
                            if fiber_derived_equivalent(x, y, &model)? {
                                related += 1;
                                implication &= same_cyclic_in_quotient(x, y, &model)?;
                            }
                        }
                    }
                    models += 1;
                }
            }
        }
    }
    let m = SplitBrauerModel::new(3, FiniteAbelianGroup::new(vec![2])?, &[])?;
    let w = fiber_derived_witness(&m.class(1, &[1])?, &m.class(2, &[1])?, &m)?;
    r.set("models", models)
        .set("related_pairs", related)
        .set("witness_n3_br2", w)
        .check("related_implies_same_cyclic_subgroup", implication)
        .check("witness_serves_both_coordinates", w == Some(5));
    Ok(())
}
