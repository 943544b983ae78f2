//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::thread;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topo_ramsey::dsl::compile;
use topo_ramsey::engine::{
    extract_convergent, extract_nice, extract_product, lift_coloring, verify_certificate,
    verify_nice, Plan,
};
use topo_ramsey::fin::{
    fin_small_extract, has_splitting_tree, mad_diagnostic, omega_power, up_arrow, SmallCase,
    TupleSet,
};
use topo_ramsey::{
    find_homogeneous_exact, homogeneity_counterexample, infinite_ramsey_extract,
    pseudo_intersection, Budget, Coloring, Dyadic, Fuel, LazyChain, NatStream, Point, Space,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0x5eed_2024;

fn space(s: &str) -> Space {
    s.parse().expect("space descriptor")
}

fn budget() -> Budget {
    Budget::new(Fuel::default())
}

fn scratch() -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Ten extraction configurations, arities 2 and 3.
fn round_trip_cases() -> Vec<Vec<&'static str>> {
    vec![
        vec![
            "--fixture",
            "min-decay",
            "--arity",
            "2",
            "--space",
            "unit-cube:1",
        ],
        vec![
            "--fixture",
            "sum-decay",
            "--arity",
            "2",
            "--space",
            "unit-cube:1",
        ],
        vec![
            "--fixture",
            "mad-pair",
            "--arity",
            "2",
            "--space",
            "product(omega1,omega1)",
        ],
        vec![
            "--fixture",
            "min-decay",
            "--arity",
            "3",
            "--space",
            "unit-cube:1",
        ],
        vec![
            "--fixture",
            "sum-decay",
            "--arity",
            "3",
            "--space",
            "unit-cube:1",
        ],
        vec![
            "--dsl",
            "(x0, x2)",
            "--arity",
            "3",
            "--space",
            "product(omega1,omega1)",
        ],
        vec![
            "--dsl",
            "(pow2neg(x0), pow2neg(x1 - x0))",
            "--arity",
            "2",
            "--space",
            "unit-cube:2",
        ],
        vec![
            "--dsl",
            "(x0 mod 2, pow2neg(x0 + x1 + x2))",
            "--arity",
            "3",
            "--space",
            "unit-cube:2",
        ],
        vec![
            "--fixture",
            "sum-decay",
            "--arity",
            "2",
            "--space",
            "countable(unit-cube:1)",
        ],
        vec![
            "--dsl",
            "(x0, x1, x0 + x1)",
            "--arity",
            "2",
            "--space",
            "countable(omega1)",
            "--engine",
            "product",
        ],
    ]
}

fn run_extract(case: &[&str], out: &Path) -> Result<(), String> {
    let mut args = vec![
        "extract",
        "--levels",
        "6",
        "--prefix",
        "32",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(case);
    let o = Command::new(env!("CARGO_BIN_EXE_topo-ramsey"))
        .args(&args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.code() == Some(0), || {
        format!(
            "extract {case:?} exited {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr).trim()
        )
    })
}

fn run_verify(cert: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_topo-ramsey"))
        .args(["verify", "--certificate", cert.to_str().unwrap()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.code() == Some(0), || {
        format!(
            "verify {} exited {:?}: {}",
            cert.display(),
            o.status.code(),
            String::from_utf8_lossy(&o.stdout).trim()
        )
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dir = scratch();
    let cases = round_trip_cases();
    for (i, case) in cases.iter().enumerate() {
        let path = dir.join(format!("c1-{i}.json"));
        run_extract(case, &path)?;
        run_verify(&path)?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "{} certificates extracted and verified in {elapsed:.1?}",
        cases.len()
    ))
}

fn edge_index(i: u64, j: u64, n: u64) -> u64 {
    (0..i).map(|a| n - 1 - a).sum::<u64>() + (j - i - 1)
}

fn triangle_free_oracle(colors: &[u64], n: u64, witness: &[u64]) -> bool {
    witness.len() == 3
        && witness.windows(2).all(|w| w[0] < w[1])
        && witness.iter().all(|&x| x < n)
        && {
            let e = |a: u64, b: u64| colors[edge_index(a, b, n) as usize];
            let (a, b, c) = (witness[0], witness[1], witness[2]);
            e(a, b) == e(a, c) && e(a, c) == e(b, c)
        }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let n = 6u64;
    for mask in 0u64..1 << 15 {
        let colors: Vec<u64> = (0..15).map(|b| mask >> b & 1).collect();
        let table = colors.clone();
        let c = Coloring::new(2, 2, move |s| Ok(table[edge_index(s[0], s[1], n) as usize]));
        let w = find_homogeneous_exact(&c, n, 3)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no witness for coloring {mask:#06x}"))?;
        ensure(triangle_free_oracle(&colors, n, &w.subset), || {
            format!("bad witness {:?} for coloring {mask:#06x}", w.subset)
        })?;
    }
    let pentagon = Coloring::new(2, 2, |s| Ok(u64::from(matches!(s[1] - s[0], 1 | 4))));
    let none = find_homogeneous_exact(&pentagon, 5, 3).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || format!("pentagon produced {none:?}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "32768 colorings of [0,6)^2 all have a triangle, pentagon has none, {elapsed:.1?}"
    ))
}

fn pick_vars(rng: &mut ChaCha8Rng, r: usize) -> (String, String) {
    let i = rng.random_range(0..r);
    let j = rng.random_range(i..r);
    let j = if r > 1 && j == i {
        (i + 1).min(r - 1)
    } else {
        j
    };
    (format!("x{i}"), format!("x{j}"))
}

fn random_color_term(rng: &mut ChaCha8Rng, r: usize, k: u64) -> String {
    let (xi, xj) = pick_vars(rng, r);
    let ordered = xi != xj;
    match rng.random_range(0..7) {
        0 => format!(
            "{} * {xi} + {} * {xj} + {}",
            rng.random_range(0..4),
            rng.random_range(0..4),
            rng.random_range(0..k)
        ),
        1 => format!("min({xi}, {})", rng.random_range(0..6)),
        2 => format!(
            "if({xi} mod {} < {}, {}, {})",
            rng.random_range(2..5),
            rng.random_range(1..3),
            rng.random_range(0..k),
            rng.random_range(0..k)
        ),
        3 => format!("{xi} * {xj} + {}", rng.random_range(0..k)),
        4 if ordered => format!(
            "if({xj} - {xi} < {}, {}, {})",
            rng.random_range(1..5),
            rng.random_range(0..k),
            rng.random_range(0..k)
        ),
        5 => format!(
            "max({xi} mod {}, {})",
            rng.random_range(2..5),
            rng.random_range(0..3)
        ),
        _ if ordered => format!("{xj} - {xi}"),
        _ => format!("{xi} + {}", rng.random_range(0..k)),
    }
}

fn random_coloring_source(rng: &mut ChaCha8Rng, r: usize, k: u64) -> String {
    let terms: Vec<String> = (0..rng.random_range(1..3))
        .map(|_| random_color_term(rng, r, k))
        .collect();
    format!("({}) mod {k}", terms.join(" + "))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut tuples = 0usize;
    for trial in 0..200 {
        let r = rng.random_range(1..=3);
        let k = rng.random_range(2..=3);
        let src = random_coloring_source(&mut rng, r, k);
        let f = compile(&src, r, &Space::Discrete(k))
            .map_err(|e| format!("`{src}`: {e}"))?
            .into_function();
        let c = f.coloring().map_err(|e| e.to_string())?;
        let b = budget();
        let h = infinite_ramsey_extract(&c, &NatStream::naturals(&b.fuel), &b)
            .map_err(|e| format!("trial {trial} `{src}` r={r}: {e}"))?;
        let prefix = h
            .stream
            .materialize(24)
            .map_err(|e| format!("trial {trial} `{src}` r={r}: {e}"))?;
        let bad = homogeneity_counterexample(&c, &prefix, h.color, 0).map_err(|e| e.to_string())?;
        ensure(bad.is_none(), || {
            format!("trial {trial} `{src}`: {bad:?} breaks color {}", h.color)
        })?;
        // independent recount of every r-subset
        let mut seen = BTreeSet::new();
        for_each_subset(&prefix, r, &mut |s| {
            seen.insert(c.color(s).unwrap());
            tuples += 1;
        });
        ensure(seen.len() == 1, || {
            format!("trial {trial} `{src}`: colors {seen:?}")
        })?;
    }
    Ok(format!(
        "200 colorings homogeneous on 24-element prefixes, {tuples} tuples checked"
    ))
}

fn for_each_subset(items: &[u64], r: usize, visit: &mut dyn FnMut(&[u64])) {
    fn go(items: &[u64], r: usize, from: usize, acc: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        if acc.len() == r {
            visit(acc);
            return;
        }
        for i in from..items.len() {
            acc.push(items[i]);
            go(items, r, i + 1, acc, visit);
            acc.pop();
        }
    }
    go(items, r, 0, &mut Vec::new(), visit);
}

fn random_unit_term(rng: &mut ChaCha8Rng) -> String {
    let a = rng.random_range(1..4);
    let b = rng.random_range(1..4);
    match rng.random_range(0..7) {
        0 => format!("pow2neg(x0 + {a})"),
        1 => format!("pow2neg(x1 + {a})"),
        2 => format!("pow2neg(x0 + {a}) + pow2neg(x1 + {b})"),
        3 => format!("min(pow2neg(x0 + {a}), pow2neg(x1 + {b}))"),
        4 => format!(
            "if(x0 mod {} < 1, pow2neg(x1 + {a}), {} * pow2neg(3))",
            rng.random_range(2..4),
            rng.random_range(0..9)
        ),
        5 => format!("pow2neg(x1 - x0 + {a})"),
        _ => format!("{} * pow2neg(2)", rng.random_range(0..5)),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for trial in 0..20 {
        let src = random_unit_term(&mut rng);
        let g = compile(&src, 2, &Space::UnitCube(1))
            .map_err(|e| format!("`{src}`: {e}"))?
            .into_function();
        let f = lift_coloring(&g);
        let b = budget();
        let conv = extract_convergent(&f, &NatStream::naturals(&b.fuel), Plan::new(4, 16), &b)
            .map_err(|e| format!("trial {trial} `{src}`: {e}"))?;
        ensure(verify_certificate(&f, &conv.certificate).is_valid(), || {
            format!("trial {trial} `{src}`: lifted certificate rejected")
        })?;
        let low = conv
            .certificate
            .lowered()
            .ok_or_else(|| format!("trial {trial} `{src}`: no lowered certificate"))?;
        let v = verify_certificate(&g, &low);
        ensure(v.is_valid(), || {
            format!("trial {trial} `{src}`: {:?}", v.failure)
        })?;
    }
    Ok("20 lowered certificates verify for their arity-2 functions".into())
}

/// Splitting tree by exhaustive choice of leaves.
fn brute_force_tree(x: &[Vec<u64>], b: usize, depth: usize) -> bool {
    fn splits(leaves: &[&Vec<u64>], at: usize, depth: usize, b: usize) -> bool {
        if at == depth {
            return true;
        }
        let heads: BTreeSet<u64> = leaves.iter().map(|t| t[at]).collect();
        heads.len() >= b
            && heads.iter().all(|h| {
                let sub: Vec<&Vec<u64>> = leaves.iter().copied().filter(|t| t[at] == *h).collect();
                splits(&sub, at + 1, depth, b)
            })
    }
    (1u32..1 << x.len()).any(|mask| {
        let leaves: Vec<&Vec<u64>> = (0..x.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &x[i])
            .collect();
        splits(&leaves, 0, depth, b)
    })
}

fn criterion_5() -> Outcome {
    let grid: Vec<Vec<u64>> = (0..3)
        .flat_map(|i| (0..3).map(move |j| vec![i, j]))
        .collect();
    let mut with_tree = [0usize; 2];
    for (slot, b) in [2usize, 3].into_iter().enumerate() {
        for mask in 0u32..512 {
            let x: Vec<Vec<u64>> = (0..9)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| grid[i].clone())
                .collect();
            let set = TupleSet::new(2, x.clone()).map_err(|e| e.to_string())?;
            let fast = has_splitting_tree(&set, b);
            let slow = brute_force_tree(&x, b, 2);
            ensure(fast.is_some() == slow, || {
                format!("b={b}, set {x:?}: {} vs oracle {slow}", fast.is_some())
            })?;
            if let Some(t) = fast {
                ensure(t.check(Some(&set)), || {
                    format!("b={b}, set {x:?}: witness tree invalid")
                })?;
                with_tree[slot] += 1;
            }
        }
    }
    Ok(format!(
        "512 subsets agree with brute force ({} with a 2-tree, {} with a 3-tree)",
        with_tree[0], with_tree[1]
    ))
}

fn random_image_source(rng: &mut ChaCha8Rng) -> String {
    let a = rng.random_range(1..4);
    let c = rng.random_range(0..6);
    let m = rng.random_range(2..5);
    match rng.random_range(0..8) {
        0 => format!("({c}, {a} * x0 + {})", rng.random_range(0..4)),
        1 => format!("(x0, x0 * x0 + {c})"),
        2 => format!("(x0 mod {m}, x0)"),
        3 => format!("(min(x0, {c}), x0)"),
        4 => format!("({a} * x0 + {c}, {})", rng.random_range(0..4)),
        5 => format!("(x0 + {c}, x0 mod {m})"),
        6 => format!("(if(x0 mod 2 = 0, {c}, x0), x0)"),
        _ => format!("(max(x0, {c}), x0 + 1)"),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut tally = [0usize; 2];
    for trial in 0..50 {
        let src = random_image_source(&mut rng);
        let f = compile(&src, 1, &omega_power(2))
            .map_err(|e| format!("`{src}`: {e}"))?
            .into_function();
        let b = budget();
        let x = fin_small_extract(&f, &NatStream::naturals(&b.fuel), 2, Plan::new(6, 20), &b)
            .map_err(|e| format!("trial {trial} `{src}`: {e}"))?;
        ensure(x.prefix.len() >= 20, || {
            format!("trial {trial} `{src}`: prefix {}", x.prefix.len())
        })?;
        let image: Vec<Vec<u64>> = x
            .prefix
            .iter()
            .map(|&k| match f.eval(&[k]) {
                Ok(Point::Tuple(p)) => p
                    .iter()
                    .map(|q| match q {
                        Point::Nat(n) => *n,
                        other => panic!("non-natural coordinate {other:?}"),
                    })
                    .collect(),
                other => panic!("unexpected value {other:?}"),
            })
            .collect();
        let heads: BTreeSet<u64> = image.iter().map(|p| p[0]).collect();
        match x.case {
            SmallCase::Column(k) => {
                ensure(heads.len() == 1 && heads.contains(&k), || {
                    format!("trial {trial} `{src}`: not column {k}")
                })?;
                tally[0] += 1;
            }
            SmallCase::PartialFunction => {
                let pairs: BTreeSet<&Vec<u64>> = image.iter().collect();
                ensure(pairs.len() == heads.len(), || {
                    format!("trial {trial} `{src}`: not a partial function")
                })?;
                tally[1] += 1;
            }
            other => return Err(format!("trial {trial} `{src}`: case {other}")),
        }
        let set = TupleSet::new(2, image).map_err(|e| e.to_string())?;
        ensure(x.tree_free && has_splitting_tree(&set, 2).is_none(), || {
            format!("trial {trial} `{src}`: image has a 2-splitting tree")
        })?;
    }
    Ok(format!(
        "50 images tree-free ({} column, {} partial function)",
        tally[0], tally[1]
    ))
}

fn random_factor(rng: &mut ChaCha8Rng) -> (String, String) {
    match rng.random_range(0..4) {
        0 => ("unit-cube:1".into(), random_unit_term(rng)),
        1 => {
            let a = rng.random_range(0..4);
            let e = match rng.random_range(0..4) {
                0 => format!("x0 + {a}"),
                1 => format!("min(x1, {a})"),
                2 => format!("x1 mod {}", a + 2),
                _ => "x1 - x0".to_string(),
            };
            ("omega1".into(), e)
        }
        k => {
            let k = k as u64;
            (
                format!("discrete:{k}"),
                format!("({}) mod {k}", random_color_term(rng, 2, k)),
            )
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut coordinate_certs = 0;
    for trial in 0..10 {
        let factors: Vec<(String, String)> = (0..3).map(|_| random_factor(&mut rng)).collect();
        let target = space(&format!(
            "product({})",
            factors
                .iter()
                .map(|f| f.0.as_str())
                .collect::<Vec<_>>()
                .join(",")
        ));
        let src = format!(
            "({})",
            factors
                .iter()
                .map(|f| f.1.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let f = compile(&src, 2, &target)
            .map_err(|e| format!("`{src}` into {target}: {e}"))?
            .into_function();
        let b = budget();
        let x = extract_product(&f, &NatStream::naturals(&b.fuel), Plan::new(4, 16), &b)
            .map_err(|e| format!("trial {trial} `{src}`: {e}"))?;
        let v = verify_certificate(&f, &x.convergent.certificate);
        ensure(v.is_valid(), || {
            format!("trial {trial} `{src}` into {target}: {:?}", v.failure)
        })?;
        ensure(!x.coordinates.is_empty(), || {
            format!("trial {trial}: no coordinate certificates")
        })?;
        for (i, cert) in x.coordinates.iter().enumerate() {
            let proj = f.project(i).map_err(|e| e.to_string())?;
            let v = verify_certificate(&proj, cert);
            ensure(v.is_valid(), || {
                format!("trial {trial} `{src}` coordinate {i}: {:?}", v.failure)
            })?;
            coordinate_certs += 1;
        }
    }
    Ok(format!(
        "10 product certificates and {coordinate_certs} coordinate certificates verify"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for trial in 0..20 {
        let mut b = Vec::with_capacity(24);
        let mut x = rng.random_range(0..10u64);
        for _ in 0..24 {
            b.push(x);
            x += rng.random_range(1..20u64);
        }
        let tree = mad_diagnostic(&b, 1).map_err(|e| format!("trial {trial}: {e}"))?;
        let up = up_arrow(&b, 2).map_err(|e| e.to_string())?;
        ensure(
            tree.branching == 12 && tree.depth == 2 && tree.check(Some(&up)),
            || format!("trial {trial}: tree fails its own check"),
        )?;
        // independent reading of the tree
        let members: BTreeSet<u64> = b.iter().copied().collect();
        let roots = tree.children(&[]);
        ensure(roots.len() >= 12, || {
            format!("trial {trial}: root has {} children", roots.len())
        })?;
        for r in roots {
            let kids = tree.children(&[r]);
            ensure(kids.len() >= 12, || {
                format!("trial {trial}: node {r} has {} children", kids.len())
            })?;
            ensure(
                kids.iter()
                    .all(|&k| k > r && members.contains(&k) && members.contains(&r)),
                || format!("trial {trial}: leaf below {r} outside B^(2)"),
            )?;
        }
    }
    Ok("20 random B of length 24 carry a 12-splitting tree inside B^(2)".into())
}

fn criterion_9() -> Outcome {
    let f =
        topo_ramsey::fixtures::builtin("sum-decay", Some(2), None).map_err(|e| e.to_string())?;
    let b = budget();
    let sys = extract_nice(&f, &NatStream::naturals(&b.fuel), Plan::new(5, 24), &b)
        .map_err(|e| e.to_string())?;
    verify_nice(&f, &sys).map_err(|e| format!("{e:?}"))?;
    let unit = Space::UnitCube(1);
    let radius = Dyadic::pow2_neg(5);
    ensure(sys.sections.len() >= 8, || {
        format!("only {} sections", sys.sections.len())
    })?;
    for s in sys.sections.iter().take(8) {
        let k = s.set[0];
        let c5 = s.limit().at(5).ok_or("section limit has no level 5")?;
        let expected = Point::scalar(Dyadic::pow2_neg(k + 1));
        let d = unit.distance(c5, &expected).map_err(|e| e.to_string())?;
        ensure(d <= radius, || {
            format!("x_{{{k}}} is {d} away from 2^-{}", k + 1)
        })?;
    }
    let (g, sub) = match (&sys.induced_function, &sys.induced) {
        (Some(g), Some(sub)) => (g, sub),
        _ => return Err("no induced system".into()),
    };
    ensure(g.arity() == 1 && sub.arity == 1, || {
        "induced system is not 1-ary".into()
    })?;
    verify_nice(g, sub).map_err(|e| format!("induced: {e:?}"))?;
    Ok("x_{k} within 2^-5 of 2^-(k+1) for the first 8 k; induced system is 1-nice".into())
}

fn criterion_10() -> Outcome {
    let fuel = Fuel::default();
    let chain = LazyChain::new(move |n: usize, _: &[NatStream]| {
        Ok(NatStream::arithmetic(0, 1 << n, &fuel))
    });
    let b = pseudo_intersection(chain, &fuel)
        .materialize(16)
        .map_err(|e| e.to_string())?;
    for n in 0..=10usize {
        let outside: Vec<usize> = (0..b.len()).filter(|&i| b[i] % (1 << n) != 0).collect();
        ensure(outside.iter().all(|&i| i < n), || {
            format!("n={n}: B\\A_n at positions {outside:?}")
        })?;
    }
    Ok(format!(
        "B = {:?}... leaves A_n only within its first n elements",
        &b[..8]
    ))
}

fn criterion_11() -> Outcome {
    let dir = scratch();
    for (i, case) in round_trip_cases().iter().enumerate() {
        let first = dir.join(format!("c1-{i}.json"));
        let again = dir.join(format!("c11-{i}.json"));
        run_extract(case, &again)?;
        let (a, b) = (
            fs::read(&first).map_err(|e| e.to_string())?,
            fs::read(&again).map_err(|e| e.to_string())?,
        );
        ensure(a == b, || format!("case {case:?} differs between runs"))?;
    }
    Ok("second run of the 10 extractions is byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("extract/verify round trip", criterion_1),
        ("exhaustive finite Ramsey", criterion_2),
        ("extractor soundness", criterion_3),
        ("r => r-1 lift", criterion_4),
        ("splitting-tree oracle", criterion_5),
        ("FIN smallness at n=1", criterion_6),
        ("product extraction", criterion_7),
        ("mad diagnostic", criterion_8),
        ("nice systems", criterion_9),
        ("pseudo-intersection exactness", criterion_10),
        ("determinism", criterion_11),
    ];
    let worker = thread::Builder::new().stack_size(512 << 20).spawn(move || {
        let mut failed = 0;
        for (i, (name, check)) in criteria.into_iter().enumerate() {
            let start = Instant::now();
            let outcome = check();
            let t = start.elapsed();
            match outcome {
                Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{t:.1?}]", i + 1),
                Err(why) => {
                    failed += 1;
                    println!("criterion {:>2} {name}: FAIL ({why}) [{t:.1?}]", i + 1);
                }
            }
        }
        failed
    });
    match worker.expect("spawn").join() {
        Ok(0) => ExitCode::SUCCESS,
        _ => ExitCode::FAILURE,
    }
}
