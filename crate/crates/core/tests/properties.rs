use proptest::prelude::*;
use topo_ramsey::ramsey::homogeneity_counterexample;
use topo_ramsey::subsets::subsets;
use topo_ramsey::{
    find_homogeneous_exact, infinite_ramsey_extract, pseudo_intersection, Budget, Coloring, Dyadic,
    Fuel, LazyChain, LocatedLimit, NatStream, Point, Space,
};

fn arb_space() -> impl Strategy<Value = Space> {
    let leaf = prop_oneof![
        (1usize..3).prop_map(Space::UnitCube),
        Just(Space::OmegaPlusOne),
        Just(Space::Cantor),
        (1u64..4).prop_map(Space::Discrete),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(Space::Product),
            inner.prop_map(|s| Space::Countable(Box::new(s))),
        ]
    })
}

fn arb_unit() -> impl Strategy<Value = Dyadic> {
    (0u64..7).prop_flat_map(|e| (0i64..=(1 << e)).prop_map(move |n| Dyadic::new(n, e)))
}

fn arb_point(space: &Space) -> BoxedStrategy<Point> {
    match space {
        Space::UnitCube(d) => prop::collection::vec(arb_unit(), *d)
            .prop_map(Point::Cube)
            .boxed(),
        Space::OmegaPlusOne => {
            prop_oneof![(0u64..12).prop_map(Point::Nat), Just(Point::Inf)].boxed()
        }
        Space::Cantor => (prop::collection::vec(any::<bool>(), 0..8), any::<bool>())
            .prop_map(|(p, t)| Point::bits(p, t))
            .boxed(),
        Space::Discrete(k) => (0..*k).prop_map(Point::Discrete).boxed(),
        Space::Product(spaces) => spaces
            .iter()
            .map(arb_point)
            .collect::<Vec<_>>()
            .prop_map(Point::Tuple)
            .boxed(),
        Space::Countable(inner) => (
            prop::collection::vec(arb_point(inner), 0..4),
            arb_point(inner),
        )
            .prop_map(|(c, t)| Point::seq(c, t))
            .boxed(),
    }
}

fn space_with_points(k: usize) -> impl Strategy<Value = (Space, Vec<Point>)> {
    arb_space().prop_flat_map(move |s| {
        let pts = prop::collection::vec(arb_point(&s), k);
        (Just(s), pts)
    })
}

proptest! {
    #[test]
    fn metric_axioms((space, pts) in space_with_points(3)) {
        let d = |a: &Point, b: &Point| space.distance(a, b).unwrap();
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        prop_assert!(d(x, x).is_zero());
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert_eq!(d(x, y).is_zero(), x == y);
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
        prop_assert!(d(x, y) <= Dyadic::one());
        prop_assert!(!d(x, y).is_negative());
    }

    #[test]
    fn covers_are_sound((space, pts) in space_with_points(1), n in 0usize..5) {
        let cover = space.cover(n);
        prop_assume!(cover.is_ok());
        let cover = cover.unwrap();
        let p = &pts[0];
        let i = cover.locate(p).unwrap();
        let c = cover.center(i).unwrap();
        prop_assert!(space.contains(&c));
        prop_assert!(space.distance(p, &c).unwrap() <= cover.radius());
        if cover.len() <= 5000 {
            prop_assert_eq!(cover.locate_by_scan(p).unwrap(), i);
        }
    }

    #[test]
    fn located_points_satisfy_the_modulus((space, pts) in space_with_points(1)) {
        prop_assume!(space.cover(5).is_ok());
        let centers = (0..6)
            .map(|n| {
                let cover = space.cover(n).unwrap();
                cover.center(cover.locate(&pts[0]).unwrap()).unwrap()
            })
            .collect();
        prop_assert_eq!(LocatedLimit::new(centers).modulus_violation(&space).unwrap(), None);
    }

    #[test]
    fn space_descriptors_round_trip(space in arb_space()) {
        prop_assert_eq!(space.to_string().parse::<Space>().unwrap(), space);
    }

    #[test]
    fn pseudo_intersections_are_exact(
        steps in prop::collection::vec((0u32..3, prop::collection::btree_set(0u64..40, 0..6)), 1..8),
    ) {
        use topo_ramsey::Chain;
        let fuel = Fuel::default();
        let make = move |steps: Vec<(u32, std::collections::BTreeSet<u64>)>| {
            LazyChain::new(move |n, built: &[NatStream]| {
                if n == 0 {
                    return Ok(NatStream::naturals(&fuel));
                }
                let (shift, drop) = steps[(n - 1) % steps.len()].clone();
                let q = 1u64 << shift;
                Ok(NatStream::filter(&built[n - 1], move |x| Ok(x % q == 0 && !drop.contains(&x)), &fuel))
            })
        };
        let mut reference = make(steps.clone());
        let links: Vec<NatStream> = (0..=12).map(|n| reference.link(n).unwrap()).collect();
        let b = pseudo_intersection(make(steps), &fuel);
        let prefix = b.materialize(12).unwrap();
        for (n, link) in links.iter().enumerate() {
            for (pos, &x) in prefix.iter().enumerate() {
                if !link.contains(x).unwrap() {
                    prop_assert!(pos < n, "b_{} = {} missing from A_{}", pos, x, n);
                }
            }
        }
    }

    #[test]
    fn materialize_is_prefix_monotone(step in 1u64..5, start in 0u64..10, m in 0usize..20, extra in 0usize..20) {
        let s = NatStream::arithmetic(start, step, &Fuel::default());
        let long = s.materialize(m + extra).unwrap();
        let short = s.materialize(m).unwrap();
        prop_assert_eq!(&long[..m], &short[..]);
        prop_assert_eq!(s.materialize(m).unwrap(), short);
    }

    #[test]
    fn extracted_streams_are_homogeneous(r in 1usize..4, k in 2u64..4, period in 1u64..4, salt in 0u64..50) {
        let c = Coloring::new(r, k, move |s| {
            Ok(s.iter().enumerate().map(|(i, x)| (x % (period + 1)) * (i as u64 + salt)).sum::<u64>() % k)
        });
        let budget = Budget::new(Fuel::new(200_000, 20_000_000, 6).unwrap());
        let h = infinite_ramsey_extract(&c, &NatStream::naturals(&budget.fuel), &budget).unwrap();
        let prefix = h.stream.materialize(10).unwrap();
        prop_assert_eq!(homogeneity_counterexample(&c, &prefix, h.color, 0).unwrap(), None);
    }

    #[test]
    fn exact_search_matches_brute_force(bits in any::<u16>(), m in 2usize..5) {
        let pairs: Vec<Vec<u64>> = subsets(&[0, 1, 2, 3, 4], 2).collect();
        let table = pairs.clone();
        let c = Coloring::new(2, 2, move |s| {
            let i = table.iter().position(|p| p == s).unwrap();
            Ok(u64::from(bits >> i & 1 == 1))
        });
        let brute = subsets(&[0, 1, 2, 3, 4], m).find(|h| {
            let colors: Vec<u64> = subsets(h, 2).map(|p| c.color(&p).unwrap()).collect();
            colors.iter().all(|&x| x == colors[0])
        });
        let found = find_homogeneous_exact(&c, 5, m).unwrap();
        prop_assert_eq!(found.as_ref().map(|w| w.subset.clone()), brute);
        if let Some(w) = found {
            prop_assert!(w.holds(&c).unwrap());
        }
    }
}

#[test]
fn stream_examples() {
    let fuel = Fuel::default();
    assert_eq!(
        NatStream::naturals(&fuel).materialize(5).unwrap(),
        vec![0, 1, 2, 3, 4]
    );
    assert_eq!(
        NatStream::arithmetic(0, 2, &fuel).materialize(4).unwrap(),
        vec![0, 2, 4, 6]
    );
    let threes = NatStream::above(&NatStream::arithmetic(0, 3, &fuel), 10, &fuel);
    assert_eq!(threes.materialize(3).unwrap(), vec![12, 15, 18]);

    let constant: Vec<NatStream> = vec![NatStream::naturals(&fuel)];
    assert_eq!(
        pseudo_intersection(constant, &fuel).materialize(6).unwrap(),
        vec![0, 1, 2, 3, 4, 5]
    );
    let shrinking =
        LazyChain::new(move |n, _: &[NatStream]| Ok(NatStream::arithmetic(n as u64, 1, &fuel)));
    assert_eq!(
        pseudo_intersection(shrinking, &fuel)
            .materialize(6)
            .unwrap(),
        vec![0, 1, 2, 3, 4, 5]
    );
}
