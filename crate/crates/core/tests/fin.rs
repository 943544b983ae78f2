use proptest::prelude::*;
use topo_ramsey::engine::{Plan, TupleFunction};
use topo_ramsey::fin::{
    check_avoidance, fin_small_extract, g_function, has_splitting_tree, mad_diagnostic,
    omega_power, up_arrow, SmallCase, TupleSet,
};
use topo_ramsey::subsets::binomial;
use topo_ramsey::{Budget, Error, Fuel, NatStream, Point};

fn set(dim: usize, tuples: &[&[u64]]) -> TupleSet {
    TupleSet::new(dim, tuples.iter().map(|t| t.to_vec())).unwrap()
}

fn grid(b: u64, n: usize) -> TupleSet {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u64>| (0..b).map(move |x| [t.clone(), vec![x]].concat()))
            .collect();
    }
    TupleSet::new(n, out).unwrap()
}

/// Searches every subset of `x` for the leaf set of a `b`-splitting tree.
fn brute_force_tree(x: &TupleSet, b: usize) -> bool {
    let all: Vec<&Vec<u64>> = x.iter().collect();
    (0u32..1 << all.len()).any(|mask| {
        let leaves: Vec<&Vec<u64>> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| *t)
            .collect();
        !leaves.is_empty() && branches(&leaves, 0, b)
    })
}

fn branches(leaves: &[&Vec<u64>], depth: usize, b: usize) -> bool {
    if leaves.iter().all(|t| t.len() == depth) {
        return true;
    }
    let mut heads: Vec<u64> = leaves.iter().map(|t| t[depth]).collect();
    heads.sort();
    heads.dedup();
    heads.len() >= b
        && heads.iter().all(|h| {
            let sub: Vec<&Vec<u64>> = leaves.iter().copied().filter(|t| t[depth] == *h).collect();
            branches(&sub, depth + 1, b)
        })
}

#[test]
fn splitting_tree_examples() {
    let full = grid(3, 2);
    let tree = has_splitting_tree(&full, 3).unwrap();
    assert!(tree.check(Some(&full)));
    assert_eq!(tree.leaves().count(), 9);

    let column = TupleSet::new(2, (0..10).map(|k| vec![0, k])).unwrap();
    assert!(has_splitting_tree(&column, 2).is_none());
    let diagonal = TupleSet::new(2, (0..10).map(|k| vec![k, k])).unwrap();
    assert!(has_splitting_tree(&diagonal, 2).is_none());
}

#[test]
fn splitting_tree_is_lexicographically_least() {
    let x = set(2, &[&[0, 5], &[0, 7], &[0, 9], &[1, 1], &[2, 0], &[2, 3]]);
    let tree = has_splitting_tree(&x, 2).unwrap();
    let leaves: Vec<Vec<u64>> = tree.leaves().cloned().collect();
    assert_eq!(leaves, vec![vec![0, 5], vec![0, 7], vec![2, 0], vec![2, 3]]);
}

#[test]
fn splitting_tree_matches_brute_force_on_all_subsets_of_the_3x3_grid() {
    let cells: Vec<Vec<u64>> = grid(3, 2).iter().cloned().collect();
    for mask in 0u32..512 {
        let x = TupleSet::new(
            2,
            cells
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| c.clone()),
        )
        .unwrap();
        for b in [2, 3] {
            let found = has_splitting_tree(&x, b);
            assert_eq!(
                found.is_some(),
                brute_force_tree(&x, b),
                "mask {mask:#b}, b = {b}"
            );
            if let Some(t) = found {
                assert!(t.check(Some(&x)));
            }
        }
    }
}

#[test]
fn up_arrow_examples() {
    assert_eq!(
        up_arrow(&[0, 1, 2], 2).unwrap(),
        set(2, &[&[0, 1], &[0, 2], &[1, 2]])
    );
    assert_eq!(up_arrow(&[5], 1).unwrap(), set(1, &[&[5]]));
    assert_eq!(up_arrow(&[0, 1, 2, 3, 4, 5], 3).unwrap().len(), 20);
    assert!(matches!(
        up_arrow(&[3, 3], 1),
        Err(Error::NotIncreasing { .. })
    ));
}

#[test]
fn up_arrow_counts_are_binomial() {
    for m in 0..=10u64 {
        let b: Vec<u64> = (0..m).map(|i| 3 * i + 1).collect();
        for n in 0..=4 {
            assert_eq!(
                up_arrow(&b, n).unwrap().len() as u128,
                binomial(m, n as u64)
            );
        }
    }
}

#[test]
fn avoidance_examples() {
    let b = [0, 1, 2, 3];
    assert!(check_avoidance(&TupleSet::new(2, []).unwrap(), &b, 0).unwrap());
    let a = set(2, &[&[2, 3]]);
    assert!(!check_avoidance(&a, &b, 0).unwrap());
    assert!(check_avoidance(&a, &b, 3).unwrap());
}

#[test]
fn g_function_sorts() {
    let nat = |v: &[u64]| Point::Tuple(v.iter().map(|&k| Point::Nat(k)).collect());
    assert_eq!(g_function(1).eval(&[3, 5]).unwrap(), nat(&[3, 5]));
    assert_eq!(g_function(2).eval(&[1, 4, 9]).unwrap(), nat(&[1, 4, 9]));
    assert_eq!(g_function(2).eval(&[0, 1, 2]).unwrap(), nat(&[0, 1, 2]));
}

#[test]
fn mad_diagnostic_examples() {
    let b: Vec<u64> = (0..8).collect();
    let t = mad_diagnostic(&b, 1).unwrap();
    assert_eq!((t.branching, t.depth), (4, 2));
    assert!(t.check(Some(&up_arrow(&b, 2).unwrap())));
    let t = mad_diagnostic(&[0, 1, 2, 3, 4, 5], 1).unwrap();
    assert_eq!(t.branching, 3);
    assert!(matches!(
        mad_diagnostic(&[0, 1], 1),
        Err(Error::InsufficientLength {
            needed: 4,
            found: 2
        })
    ));
}

fn pair_fn(rule: impl Fn(u64) -> (u64, u64) + 'static) -> TupleFunction {
    TupleFunction::new(1, omega_power(2), move |s| {
        let (a, b) = rule(s[0]);
        Ok(Point::Tuple(vec![Point::Nat(a), Point::Nat(b)]))
    })
}

fn budget() -> Budget {
    Budget::new(Fuel::new(200_000, 10_000_000, 8).unwrap())
}

#[test]
fn small_extract_base_cases() {
    let b = budget();
    let base = NatStream::naturals(&b.fuel);
    let plan = Plan::new(4, 16);

    let x = fin_small_extract(&pair_fn(|k| (0, k)), &base, 2, plan, &b).unwrap();
    assert_eq!(x.case, SmallCase::Column(0));
    assert_eq!(x.prefix, (0..16).collect::<Vec<u64>>());
    assert!(x.tree_free);

    let x = fin_small_extract(&pair_fn(|k| (k, k * k)), &base, 2, plan, &b).unwrap();
    assert_eq!(x.case, SmallCase::PartialFunction);
    assert_eq!(x.prefix, (0..16).collect::<Vec<u64>>());
    assert!(x.tree_free);

    let x = fin_small_extract(&pair_fn(|k| (k % 2, k)), &base, 2, plan, &b).unwrap();
    assert_eq!(x.case, SmallCase::Column(0));
    assert!(x.prefix.iter().all(|k| k % 2 == 0));
    assert!(x.tree_free);
}

#[test]
fn small_extract_arity_two() {
    let b = budget();
    let base = NatStream::naturals(&b.fuel);
    let f = TupleFunction::new(2, omega_power(3), |s| {
        Ok(Point::Tuple(vec![
            Point::Nat(s[0] % 3),
            Point::Nat(s[0]),
            Point::Nat(s[1]),
        ]))
    });
    let x = fin_small_extract(&f, &base, 2, Plan::new(5, 12), &b).unwrap();
    assert!(x.tree_free, "{:?}", x.case);
    assert!(
        matches!(x.case, SmallCase::Pinned { coordinate: 0, .. }),
        "{:?}",
        x.case
    );

    let g = g_function(1);
    let pairs = TupleFunction::new(2, omega_power(3), move |s| {
        let mut cs = match g.eval(s)? {
            Point::Tuple(cs) => cs,
            _ => unreachable!(),
        };
        cs.push(Point::Nat(s[1] - s[0]));
        Ok(Point::Tuple(cs))
    });
    let x = fin_small_extract(&pairs, &base, 2, Plan::new(5, 12), &b).unwrap();
    assert!(x.tree_free, "{:?}", x.case);
}

proptest! {
    #[test]
    fn avoidance_is_monotone_in_the_cut(
        tuples in prop::collection::vec(prop::collection::vec(0u64..12, 2), 0..6),
        raw in prop::collection::btree_set(0u64..12, 0..10),
    ) {
        let a = TupleSet::new(2, tuples).unwrap();
        let b: Vec<u64> = raw.into_iter().collect();
        let mut seen_true = false;
        for cut in 0..14 {
            let ok = check_avoidance(&a, &b, cut).unwrap();
            prop_assert!(!seen_true || ok);
            seen_true |= ok;
        }
    }

    #[test]
    fn mad_diagnostic_trees_are_valid(raw in prop::collection::btree_set(0u64..200, 4..30), r in 1usize..3) {
        let b: Vec<u64> = raw.into_iter().collect();
        match mad_diagnostic(&b, r) {
            Ok(t) => {
                prop_assert!(t.check(Some(&up_arrow(&b, r + 1).unwrap())));
                prop_assert_eq!(t.branching, b.len() / (r + 1));
            }
            Err(Error::InsufficientLength { .. }) => prop_assert!(b.len() < 2 * (r + 1)),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn small_extract_images_are_tree_free(m in 1u64..5, c in 0u64..4, shift in 0u64..3) {
        let b = budget();
        let f = pair_fn(move |k| if k % m == 0 { (c, k) } else { (k + shift, k / 2) });
        let x = fin_small_extract(&f, &NatStream::naturals(&b.fuel), 2, Plan::new(3, 12), &b).unwrap();
        prop_assert!(x.tree_free);
    }

    #[test]
    fn tree_search_agrees_with_brute_force(cells in prop::collection::btree_set((0u64..4, 0u64..4), 0..9), b in 2usize..4) {
        let x = TupleSet::new(2, cells.into_iter().map(|(p, q)| vec![p, q])).unwrap();
        prop_assert_eq!(has_splitting_tree(&x, b).is_some(), brute_force_tree(&x, b));
    }
}
