use mackey::abgroup::AbGroup;
use mackey::boxprod::{box_product, MultiBox};
use mackey::gset::GSet;
use mackey::iso::find_isomorphism;
use mackey::json::{from_json, to_json};
use mackey::mackey::{burnside, fixed_point_functor, verify_mackey, MackeyFunctor};
use mackey::matrix::{vec_add, Int};
use mackey::norm::{norm_functor, NormOptions};
use mackey::tambara::{burnside_tambara, norm_tambara, ring_mod, tensor_gset};
use mackey::{GroupCtx, Level};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Kind {
    Burnside,
    Constant(u64),
    Klein,
    Norm(u64),
}

fn group(m: u64) -> AbGroup {
    if m == 0 {
        AbGroup::free(1)
    } else {
        AbGroup::cyclic(m)
    }
}

fn build(ctx: GroupCtx, kind: &Kind) -> MackeyFunctor {
    match kind {
        Kind::Burnside => burnside(ctx),
        Kind::Constant(m) => fixed_point_functor(ctx, &group(*m)),
        Kind::Klein => fixed_point_functor(ctx, &AbGroup::from_divisors(&[Int::from(2), Int::from(2)])),
        Kind::Norm(m) => {
            let bottom = fixed_point_functor(ctx.subgroup_ctx(Level(0)).unwrap(), &group(*m));
            norm_functor(&ctx, 0, &bottom, &NormOptions::default()).unwrap()
        }
    }
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Burnside),
        prop::sample::select(vec![0u64, 2, 3, 4]).prop_map(Kind::Constant),
        Just(Kind::Klein),
        prop::sample::select(vec![0u64, 2, 3]).prop_map(Kind::Norm),
    ]
}

fn ctx() -> impl Strategy<Value = GroupCtx> {
    prop::sample::select(vec![(2u64, 1u32), (2, 2), (3, 1)]).prop_map(|(p, n)| GroupCtx::new(p, n).unwrap())
}

fn same_levels(a: &MackeyFunctor, b: &MackeyFunctor) -> bool {
    a.levels.iter().zip(&b.levels).all(|(x, y)| x.is_isomorphic(y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corpus_satisfies_axioms(c in ctx(), k in kind()) {
        let m = build(c, &k);
        let rep = verify_mackey(&m);
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn json_round_trip(c in ctx(), k in kind()) {
        let m = build(c, &k);
        prop_assert_eq!(from_json(&to_json(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn transfers_ignore_the_weyl_action(c in ctx(), k in kind(), coeffs in prop::collection::vec(-3i64..=3, 8)) {
        let m = build(c, &k);
        for h in 0..m.n() {
            let g = m.levels[h].gens();
            let x: Vec<Int> = coeffs.iter().cycle().take(g).map(|&v| Int::from(v)).collect();
            let moved = m.act(h, 1, &x);
            prop_assert!(m.levels[h + 1].elem_eq(&m.tr(h, h + 1, &moved), &m.tr(h, h + 1, &x)));
            // restrictions land in the invariants
            let y: Vec<Int> = coeffs.iter().cycle().take(m.levels[h + 1].gens()).map(|&v| Int::from(v)).collect();
            let r = m.res(h + 1, h, &y);
            prop_assert!(m.levels[h].elem_eq(&m.act(h, 1, &r), &r));
        }
    }

    #[test]
    fn restriction_is_transitive(k in kind()) {
        let m = build(GroupCtx::new(2, 2).unwrap(), &k);
        let twice = m.restrict(1, false).unwrap().restrict(0, false).unwrap();
        prop_assert_eq!(twice, m.restrict(0, false).unwrap());
    }

    #[test]
    fn box_is_commutative(c in ctx(), a in kind(), b in kind()) {
        let (m, l) = (build(c, &a), build(c, &b));
        let ml = box_product(&m, &l).unwrap();
        let lm = box_product(&l, &m).unwrap();
        prop_assert!(verify_mackey(&ml).passed());
        prop_assert!(same_levels(&ml, &lm));
        if c.n() == 1 {
            prop_assert!(find_isomorphism(&ml, &lm, 200_000).unwrap().is_some());
        }
    }

    #[test]
    fn box_is_associative(a in kind(), b in kind(), d in kind()) {
        let c = GroupCtx::new(2, 1).unwrap();
        let (x, y, z) = (build(c, &a), build(c, &b), build(c, &d));
        let left = box_product(&box_product(&x, &y).unwrap(), &z).unwrap();
        let right = box_product(&x, &box_product(&y, &z).unwrap()).unwrap();
        let triple = MultiBox::new(vec![x, y, z]).unwrap().functor;
        prop_assert!(same_levels(&left, &right));
        prop_assert!(same_levels(&left, &triple));
    }

    #[test]
    fn burnside_is_the_unit(c in ctx(), k in kind()) {
        let m = build(c, &k);
        let bm = box_product(&burnside(c), &m).unwrap();
        prop_assert!(find_isomorphism(&bm, &m, 200_000).unwrap().is_some());
    }

    #[test]
    fn tensor_with_gsets(orbits in prop::collection::vec(0usize..=1, 0..=2), m in prop::sample::select(vec![0u64, 2, 3])) {
        let c = GroupCtx::new(2, 1).unwrap();
        let input = fixed_point_functor(c, &group(m));
        let x = GSet::new(c, orbits.clone()).unwrap();
        let out = tensor_gset(&x, &input, &NormOptions::default()).unwrap();
        prop_assert!(verify_mackey(&out).passed());
        // the underlying group is a tensor power of M(e), or Z for the empty set
        let want = if orbits.is_empty() { AbGroup::free(1) } else { group(m) };
        prop_assert!(out.levels[0].is_isomorphic(&want));
    }

    #[test]
    fn burnside_norms_are_multiplicative(n in 1u32..=3, a in prop::collection::vec(-2i64..=2, 3), b in prop::collection::vec(-2i64..=2, 3)) {
        let t = burnside_tambara(GroupCtx::new(2, n).unwrap());
        for h in 0..n as usize {
            let x: Vec<Int> = a.iter().take(h + 1).map(|&v| Int::from(v)).collect();
            let y: Vec<Int> = b.iter().take(h + 1).map(|&v| Int::from(v)).collect();
            let lhs = t.nm(h, &t.mul(h, &x, &y)).unwrap();
            let rhs = t.mul(h + 1, &t.nm(h, &x).unwrap(), &t.nm(h, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn burnside_sum_reciprocity(a in prop::collection::vec(-3i64..=3, 3), b in prop::collection::vec(-3i64..=3, 3)) {
        let t = burnside_tambara(GroupCtx::new(2, 3).unwrap());
        for h in 0..3usize {
            let x: Vec<Int> = a.iter().take(h + 1).map(|&v| Int::from(v)).collect();
            let y: Vec<Int> = b.iter().take(h + 1).map(|&v| Int::from(v)).collect();
            for k in h + 1..=3 {
                let direct = t.nm_up(h, k, &vec_add(&x, &y)).unwrap();
                prop_assert_eq!(direct, t.sum_formula(k, h, &x, &y).unwrap(), "h={} k={}", h, k);
            }
        }
    }

    #[test]
    fn norm_tambara_is_multiplicative(m in prop::sample::select(vec![2u64, 3, 4]), a in -4i64..=4, b in -4i64..=4) {
        let c = GroupCtx::new(2, 1).unwrap();
        let nt = norm_tambara(&c, 0, &ring_mod(2, m).unwrap(), &NormOptions::default()).unwrap();
        let t = &nt.tambara;
        let (x, y) = ([Int::from(a)], [Int::from(b)]);
        let lhs = t.nm(0, &t.mul(0, &x, &y)).unwrap();
        let rhs = t.mul(1, &t.nm(0, &x).unwrap(), &t.nm(0, &y).unwrap());
        prop_assert!(t.level(1).elem_eq(&lhs, &rhs));
    }
}
