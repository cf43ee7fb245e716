use proptest::prelude::*;
use torsorkit::cohomology::{
    cocycles, coboundaries, cyclic_module_actions, h1, is_coboundary, is_cocycle, picd_cocycle,
    torsor_from_cocycle, Cocycle, FiniteGroup, GModule,
};
use torsorkit::modarith::{gcd, FiniteAbelianGroup};
use torsorkit::Guards;

fn cyclic_trivial(k: usize, n: u64) -> GModule {
    GModule::trivial(
        FiniteGroup::cyclic(k).unwrap(),
        FiniteAbelianGroup::cyclic(n).unwrap(),
        &Guards::default(),
    )
    .unwrap()
}

#[test]
fn trivial_action_h1_is_hom() {
    for k in 1..=6 {
        for n in 1..=12 {
            let m = cyclic_trivial(k, n);
            let h = h1(&m).unwrap();
            assert_eq!(h.size() as u64, gcd(k as u64, n), "k={k} n={n}");
            assert_eq!(h.coboundary_count, 1);
        }
    }
    let klein = FiniteGroup::cyclic(2).unwrap().product(&FiniteGroup::cyclic(2).unwrap()).unwrap();
    for n in 1..=12 {
        let m = GModule::trivial(klein.clone(), FiniteAbelianGroup::cyclic(n).unwrap(), &Guards::default())
            .unwrap();
        assert_eq!(h1(&m).unwrap().size() as u64, gcd(2, n) * gcd(2, n));
    }
}

#[test]
fn sign_action_h1() {
    // Z/2 acting by -1 on Z/n: H^1 = (Z/n)[norm] / (sigma - 1) = Z/n / 2.
    for n in 1..=16 {
        let m = GModule::from_partial_action(
            FiniteGroup::cyclic(2).unwrap(),
            FiniteAbelianGroup::cyclic(n).unwrap(),
            vec![(1, vec![vec![n - 1]])],
            &Guards::default(),
        )
        .unwrap();
        let h = h1(&m).unwrap();
        assert_eq!(h.cocycle_count as u64, n);
        assert_eq!(h.size() as u64, gcd(2, n), "n={n}");
    }
}

#[test]
fn group_order_kills_h1() {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    for n in [2, 3, 4, 6] {
        for m in cyclic_module_actions(&s3, n, &Guards::default()).unwrap() {
            for c in cocycles(&m).unwrap() {
                let killed = c.scale(&m, s3.size() as i64);
                assert!(is_coboundary(&m, &killed));
            }
        }
    }
}

#[test]
fn coboundaries_are_cocycles() {
    let g = FiniteGroup::cyclic(4).unwrap();
    for m in cyclic_module_actions(&g, 10, &Guards::default()).unwrap() {
        for b in coboundaries(&m) {
            assert!(is_cocycle(&m, b.values()));
        }
    }
}

fn arb_module() -> impl Strategy<Value = (GModule, usize)> {
    let groups = vec![
        FiniteGroup::trivial(),
        FiniteGroup::cyclic(2).unwrap(),
        FiniteGroup::cyclic(3).unwrap(),
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::cyclic(2).unwrap().product(&FiniteGroup::cyclic(2).unwrap()).unwrap(),
        FiniteGroup::cyclic(6).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
    ];
    (prop::sample::select(groups), 1u64..=12, any::<prop::sample::Index>(), any::<prop::sample::Index>()).prop_map(
        |(g, n, ai, ci)| {
            let actions = cyclic_module_actions(&g, n, &Guards::default()).unwrap();
            let m = actions[ai.index(actions.len())].clone();
            let count = cocycles(&m).unwrap().len();
            (m, ci.index(count))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisted_action_is_an_action((m, ci) in arb_module()) {
        let alpha = cocycles(&m).unwrap()[ci].clone();
        let t = torsor_from_cocycle(&m, &alpha).unwrap();
        let g = m.group();
        let module = m.module();
        for y in module.elements() {
            prop_assert_eq!(t.act(g.identity(), &y), y.clone());
            for a in 0..g.size() {
                for b in 0..g.size() {
                    prop_assert_eq!(t.act(g.mul(a, b), &y), t.act(a, &t.act(b, &y)));
                }
            }
        }
    }

    #[test]
    fn picd_is_multiplication((m, ci) in arb_module(), d in 0u64..=5) {
        let alpha = cocycles(&m).unwrap()[ci].clone();
        let beta = picd_cocycle(&m, &alpha, d).unwrap();
        prop_assert_eq!(beta, alpha.scale(&m, d as i64));
    }

    #[test]
    fn picd_additive((m, ci) in arb_module(), d1 in 0u64..=2, d2 in 0u64..=2) {
        let alpha = cocycles(&m).unwrap()[ci].clone();
        let lhs = picd_cocycle(&m, &alpha, d1 + d2).unwrap();
        let rhs = picd_cocycle(&m, &alpha, d1).unwrap().add(&m, &picd_cocycle(&m, &alpha, d2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coboundary_shift_preserves_class((m, ci) in arb_module(), x in any::<prop::sample::Index>()) {
        let alpha = cocycles(&m).unwrap()[ci].clone();
        let elems: Vec<_> = m.module().elements().collect();
        let b = Cocycle::coboundary_of(&m, &elems[x.index(elems.len())]).unwrap();
        let shifted = alpha.add(&m, &b);
        let diff = shifted.add(&m, &alpha.scale(&m, -1));
        prop_assert!(is_coboundary(&m, &diff));
        prop_assert!(is_cocycle(&m, shifted.values()));
    }
}
