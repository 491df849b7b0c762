//! End-to-end acceptance checks. Each criterion runs under its own time limit
//! and prints one PASS/FAIL line; the test fails if any criterion does.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_traits::{Signed, Zero};
use plucker_lab::combinatorics::{
    cyclic_shift_tuple, is_weakly_separated, layout, reflect_tuple, tuple_sign, GrassmannShape, IndexTuple,
};
use plucker_lab::inequality::{
    all_systems, build_system, certify_all, generalized_laplace_system, sample_point, search_counterexample,
    QuadraticForm,
};
use plucker_lab::linalg::{embed, int, rat, PluckerTable, Rational, RationalMatrix};
use plucker_lab::tl::{
    all_immanants, compatible_set, diagrams, enumerate_diagrams, immanant, permutation_image, prematch,
    transport_diagram, KauffmanDiagram, Permutation,
};
use plucker_lab::tnn::{random_tnn, reflect_point, shift_point, GeneratorConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(m: usize, n: usize, e: &[usize]) -> IndexTuple {
    IndexTuple::from_slice(m, n, e).unwrap()
}

fn k(s: usize, edges: &[(usize, usize)]) -> KauffmanDiagram {
    KauffmanDiagram::from_edges(s, edges).unwrap()
}

fn set(ks: &[&KauffmanDiagram]) -> BTreeSet<KauffmanDiagram> {
    ks.iter().map(|k| (*k).clone()).collect()
}

fn rational_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
}

fn tnn(seed: u64, size: usize) -> RationalMatrix {
    random_tnn(&GeneratorConfig::standard(seed, size, size).unwrap())
}

type Check = Box<dyn FnOnce()>;

fn run(id: usize, name: &str, limit_secs: u64, check: Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check));
    let elapsed = start.elapsed();
    let within = elapsed <= Duration::from_secs(limit_secs);
    let ok = outcome.is_ok() && within;
    let reason = match (&outcome, within) {
        (Err(e), _) => e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()),
        (Ok(_), false) => format!("over the {limit_secs} s limit"),
        _ => String::new(),
    };
    println!(
        "criterion {id:>2} {}: {name} ({:.2} s){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if reason.is_empty() { String::new() } else { format!(" -- {reason}") }
    );
    ok
}

fn catalan_counts() {
    let sizes: Vec<usize> = (1..=6).map(|s| enumerate_diagrams(s).len()).collect();
    assert_eq!(sizes, vec![1, 2, 5, 14, 42, 132]);
}

fn three_by_three_difference() {
    let k2 = k(3, &[(1, 6), (2, 3), (4, 5)]);
    let mut positive = 0;
    for seed in 0..100 {
        let a = tnn(seed, 3);
        let x = embed(&a).unwrap();
        let lhs = row_minor(&x, &[1, 2, 4]) * row_minor(&x, &[3, 5, 6]) - row_minor(&x, &[1, 2, 3]) * row_minor(&x, &[4, 5, 6]);
        let rhs = immanant(&k2, &a).unwrap();
        assert_eq!(lhs, rhs, "seed {seed}");
        assert!(!lhs.is_negative(), "seed {seed}");
        positive += lhs.is_positive() as usize;
    }
    assert!(positive > 50, "only {positive} strictly positive samples");
}

fn telescoping_n3() {
    let k0 = k(3, &[(1, 6), (2, 5), (3, 4)]);
    let k1 = k(3, &[(1, 6), (2, 3), (4, 5)]);
    let k2 = k(3, &[(1, 4), (2, 3), (5, 6)]);
    let pairs = [([1, 2, 3], [4, 5, 6]), ([1, 2, 4], [3, 5, 6]), ([1, 2, 5], [3, 4, 6]), ([1, 2, 6], [3, 4, 5])];
    let expected = [set(&[&k0]), set(&[&k0, &k1]), set(&[&k1, &k2]), set(&[&k2])];
    for ((i, j), want) in pairs.iter().zip(&expected) {
        let phi: BTreeSet<_> = compatible_set(&t(3, 3, i), &t(3, 3, j)).unwrap().into_iter().collect();
        assert_eq!(&phi, want, "{i:?} {j:?}");
    }
    let sizes: Vec<usize> = expected.iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![1, 2, 2, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..20 {
        let x = rational_matrix(&mut rng, 6, 3);
        let mut acc = Rational::zero();
        for (idx, (i, j)) in pairs.iter().enumerate() {
            let p = row_minor(&x, i) * row_minor(&x, j);
            if idx % 2 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
        }
        assert!(acc.is_zero());
    }
}

fn laplace_n7_d4() {
    // (rows, cols) of the two minors of A in each product
    let products: [([&[usize]; 2], [&[usize]; 2]); 8] = [
        ([&[1, 2, 3, 4], &[4, 5, 6, 7]], [&[5, 6, 7], &[1, 2, 3]]),
        ([&[1, 2, 3, 4], &[3, 5, 6, 7]], [&[5, 6, 7], &[1, 2, 4]]),
        ([&[1, 2, 3, 4], &[3, 4, 6, 7]], [&[5, 6, 7], &[1, 2, 5]]),
        ([&[1, 2, 3, 4], &[3, 4, 5, 7]], [&[5, 6, 7], &[1, 2, 6]]),
        ([&[1, 2, 3, 4], &[3, 4, 5, 6]], [&[5, 6, 7], &[1, 2, 7]]),
        ([&[1, 2, 3, 4, 7], &[3, 4, 5, 6, 7]], [&[5, 6], &[1, 2]]),
        ([&[1, 2, 3, 4, 6], &[3, 4, 5, 6, 7]], [&[5, 7], &[1, 2]]),
        ([&[1, 2, 3, 4, 5], &[3, 4, 5, 6, 7]], [&[6, 7], &[1, 2]]),
    ];
    let lap = generalized_laplace_system(7, 4).unwrap();
    assert_eq!(lap.terms.len(), 8);
    let mut positive = 0;
    for seed in 0..20 {
        // sparse factorizations kill the corner minors, so half the seeds use every factor
        let density = if seed < 10 { int(1) } else { rat(1, 2) };
        let a = random_tnn(&GeneratorConfig::new(seed, 7, 7, int(3), density).unwrap());
        let terms: Vec<Rational> = products
            .iter()
            .map(|(p, q)| sub_minor(&a, p[0], p[1]) * sub_minor(&a, q[0], q[1]))
            .collect();
        let rows = lap.evaluate_point(&embed(&a).unwrap()).unwrap();
        for l in 1..=7 {
            let mut item = Rational::zero();
            for (kk, v) in terms.iter().enumerate().take(l + 1) {
                if (l + kk) % 2 == 0 {
                    item += v;
                } else {
                    item -= v;
                }
            }
            assert!(!item.is_negative(), "seed {seed} item {l}");
            positive += item.is_positive() as usize;
            assert_eq!(item, rows[l], "seed {seed} row {l}");
        }
        let last = &rows[7];
        assert!(last.is_zero(), "seed {seed}");
    }
    assert!(positive >= 60, "only {positive} strictly positive items");
}

fn separated_six_by_six() {
    let i = t(6, 6, &[1, 2, 3, 4, 10, 11]);
    let j = t(6, 6, &[5, 6, 7, 8, 9, 11]);
    let s = 6;
    let m = (11, 12);
    let fixtures: Vec<KauffmanDiagram> = [
        [(1, 8), (2, 7), (3, 6), (4, 5), (9, 10)],
        [(1, 8), (2, 3), (4, 7), (5, 6), (9, 10)],
        [(1, 2), (3, 8), (4, 7), (5, 6), (9, 10)],
        [(1, 2), (3, 8), (4, 5), (6, 7), (9, 10)],
        [(1, 8), (2, 3), (4, 5), (6, 7), (9, 10)],
        [(1, 6), (2, 3), (4, 5), (7, 8), (9, 10)],
        [(1, 2), (3, 6), (4, 5), (7, 8), (9, 10)],
        [(1, 6), (2, 3), (4, 5), (7, 10), (8, 9)],
        [(1, 2), (3, 6), (4, 5), (7, 10), (8, 9)],
    ]
    .iter()
    .map(|e| {
        let mut e = e.to_vec();
        e.push(m);
        k(s, &e)
    })
    .collect();
    let kk = |idx: &[usize]| -> BTreeSet<KauffmanDiagram> { idx.iter().map(|&x| fixtures[x].clone()).collect() };

    let sys = build_system(&i, &j, 3).unwrap();
    let mut products = vec![(i.clone(), j.clone())];
    products.extend(sys.terms.iter().map(|t| (t.i.clone(), t.j.clone())));
    let phis: Vec<BTreeSet<KauffmanDiagram>> = products
        .iter()
        .map(|(a, b)| compatible_set(a, b).unwrap().into_iter().collect())
        .collect();
    let sizes: Vec<usize> = phis.iter().map(|p| p.len()).collect();
    assert_eq!(sizes, vec![1, 2, 4, 5, 4, 2]);
    let want = [kk(&[0]), kk(&[1, 2]), kk(&[1, 2, 3, 4]), kk(&[3, 4, 5, 6, 0]), kk(&[5, 6, 7, 8]), kk(&[7, 8])];
    assert_eq!(phis, want);

    // the three displayed inequalities are the partial sums through k = 2, 3, 4
    let certs = certify_all(&sys).unwrap();
    let unit = |c: &plucker_lab::inequality::Certificate| -> BTreeSet<KauffmanDiagram> {
        assert!(c.coefficients.values().all(|&v| v == 1), "non-unit coefficients at l={}", c.l);
        c.coefficients.keys().cloned().collect()
    };
    assert_eq!(unit(&certs[0]), kk(&[1, 2]));
    assert_eq!(unit(&certs[1]), kk(&[3, 4]));
    assert_eq!(unit(&certs[2]), kk(&[5, 6]));
    assert_eq!(unit(&certs[3]), kk(&[7, 8]));
    assert!(certs[4].is_zero());
}

fn forward_sweep() {
    for ambient in 2..=7usize {
        for m in 1..=ambient / 2 {
            let n = ambient - m;
            let shape = GrassmannShape::new(m, n).unwrap();
            let subs = shape.subsets();
            let points: Vec<RationalMatrix> = (0..5)
                .map(|s| sample_point(&GeneratorConfig::standard(1000 + s, n, m).unwrap(), s).unwrap())
                .collect();
            let tables: Vec<PluckerTable> = points.iter().map(|x| PluckerTable::new(x, shape).unwrap()).collect();
            for a in &subs {
                for b in &subs {
                    if a == b || !weakly_separated(a.entries(), b.entries(), ambient) {
                        continue;
                    }
                    assert!(is_weakly_separated(a, b).unwrap());
                    let eta = layout(a, b).unwrap().eta;
                    if eta < 2 {
                        continue;
                    }
                    for sys in all_systems(a, b).unwrap() {
                        for c in certify_all(&sys).unwrap() {
                            assert!(c.is_nonnegative(), "{a} {b} r={} l={}", sys.r, c.l);
                        }
                        for (x, table) in points.iter().zip(&tables) {
                            let v = sys.evaluate_table(table);
                            assert_eq!(v, oracle_partial_sums(a.entries(), b.entries(), sys.r, x));
                            assert!(v.iter().all(|v| !v.is_negative()), "{a} {b} r={}", sys.r);
                            assert!(v[eta - 1].is_zero());
                        }
                    }
                }
            }
        }
    }
}

fn orbit(i: &IndexTuple, j: &IndexTuple) -> BTreeSet<(IndexTuple, IndexTuple)> {
    let ambient = i.shape().ambient() as i64;
    let mut out = BTreeSet::new();
    for s in 0..ambient {
        let (a, b) = (cyclic_shift_tuple(i, s).sorted(), cyclic_shift_tuple(j, s).sorted());
        out.insert((reflect_tuple(&a).sorted(), reflect_tuple(&b).sorted()));
        out.insert((a, b));
    }
    out
}

fn converse(i: IndexTuple, j: IndexTuple) {
    let shape = i.shape();
    for (a, b) in orbit(&i, &j) {
        assert!(!weakly_separated(a.entries(), b.entries(), shape.ambient()));
        let cfg = GeneratorConfig::standard(0, shape.n(), shape.m()).unwrap();
        let w = search_counterexample(&a, &b, 20_000, &cfg)
            .unwrap()
            .unwrap_or_else(|| panic!("no witness for {a} {b}"));
        assert!(all_maximal_minors_nonnegative(&w.x), "{a} {b}");
        let v = oracle_partial_sums(a.entries(), b.entries(), w.r, &w.x);
        assert!(v[w.l - 1].is_negative(), "{a} {b}");
        assert_eq!(v[w.l - 1], w.value);
    }
}

fn complementary_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for s in 1..=4usize {
        let ds = diagrams(s);
        let mats: Vec<RationalMatrix> = (0..10).map(|_| rational_matrix(&mut rng, s, s)).collect();
        let imms: Vec<Vec<Rational>> = mats.iter().map(|x| all_immanants(x).unwrap()).collect();
        let bars: Vec<RationalMatrix> = mats.iter().map(|x| embed(x).unwrap()).collect();
        for i in k_subsets(2 * s, s) {
            let c: Vec<usize> = (1..=2 * s).filter(|v| !i.contains(v)).collect();
            let b: Vec<bool> = ds
                .iter()
                .map(|d| d.edges().iter().all(|&(x, y)| i.contains(&x) != i.contains(&y)))
                .collect();
            for (xb, im) in bars.iter().zip(&imms) {
                let lhs = row_minor(xb, &i) * row_minor(xb, &c);
                let rhs: Rational = im.iter().zip(&b).filter(|(_, &bb)| bb).map(|(v, _)| v.clone()).sum();
                assert_eq!(lhs, rhs, "s={s} I={i:?}");
            }
        }
    }
}

/// A reduced word read off by always removing the leftmost (or rightmost)
/// descent: `w = (w ∘ s_i) ∘ s_i`.
fn descent_word(w: &[usize], leftmost: bool) -> Vec<usize> {
    let mut w = w.to_vec();
    let mut word = Vec::new();
    loop {
        let mut d: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
        if d.is_empty() {
            break;
        }
        if !leftmost {
            d.reverse();
        }
        let p = d[0];
        w.swap(p, p + 1);
        word.push(p + 1);
    }
    word.reverse();
    word
}

fn reduced_words() {
    let mut distinct = 0;
    for w in Permutation::all(4) {
        let a = descent_word(w.images(), true);
        let b = descent_word(w.images(), false);
        assert_eq!(a.len(), w.inversions());
        assert_eq!(Permutation::from_word(4, &a).unwrap(), w);
        assert_eq!(Permutation::from_word(4, &b).unwrap(), w);
        if a != b {
            distinct += 1;
        }
        let ia = plucker_lab::tl::algebra::permutation_image_from_word(4, &a).unwrap();
        let ib = plucker_lab::tl::algebra::permutation_image_from_word(4, &b).unwrap();
        assert_eq!(ia, ib);
        assert_eq!(ia, permutation_image(&w).unwrap());
    }
    assert!(distinct > 0);
}

fn map_form(f: &QuadraticForm, g: &dyn Fn(&IndexTuple) -> IndexTuple) -> QuadraticForm {
    QuadraticForm {
        terms: f.terms.iter().map(|(c, i, j)| (*c, g(i), g(j))).collect(),
    }
}

fn symmetry_transport() {
    let mut rng = ChaCha8Rng::seed_from_u64(310);
    let mut done = 0;
    while done < 20 {
        let ambient = rng.gen_range(4..=7usize);
        let m = rng.gen_range(2..=ambient / 2);
        let shape = GrassmannShape::new(m, ambient - m).unwrap();
        let subs = shape.subsets();
        let a = subs[rng.gen_range(0..subs.len())].clone();
        let b = subs[rng.gen_range(0..subs.len())].clone();
        if a == b {
            continue;
        }
        done += 1;
        let x = rational_matrix(&mut rng, ambient, m);
        let t0 = PluckerTable::new(&x, shape).unwrap();
        let moves: [(&dyn Fn(&IndexTuple) -> IndexTuple, &dyn Fn(usize) -> usize, &dyn Fn(&RationalMatrix) -> RationalMatrix); 2] = [
            (&|t| cyclic_shift_tuple(t, 1), &|v| v % ambient + 1, &shift_point),
            (&reflect_tuple, &|v| ambient + 1 - v, &reflect_point),
        ];
        for (g, f, point) in moves {
            let (ga, gb) = (g(&a), g(&b));
            let eps = (tuple_sign(&a) * tuple_sign(&b) * tuple_sign(&ga) * tuple_sign(&gb)) as i64;
            let from = prematch(&a, &b).unwrap();
            let to = prematch(&ga, &gb).unwrap();
            let t1 = PluckerTable::new(&point(&x), shape).unwrap();
            for sys in all_systems(&a, &b).unwrap() {
                for c in certify_all(&sys).unwrap() {
                    let form = sys.partial_sum(c.l).unwrap();
                    let image = map_form(&form, g);
                    let moved: std::collections::BTreeMap<_, _> = c
                        .coefficients
                        .iter()
                        .map(|(kd, v)| (transport_diagram(kd, &from, &to, f).unwrap(), eps * v))
                        .collect();
                    assert_eq!(image.coefficients().unwrap(), moved, "{a} {b} r={} l={}", c.r, c.l);
                    assert_eq!(image.evaluate(&t1), form.evaluate(&t0) * int(eps));
                }
            }
        }
    }
}

fn immanant_positivity() {
    for s in 1..=4usize {
        for seed in 0..50 {
            let a = tnn(seed, s);
            for v in all_immanants(&a).unwrap() {
                assert!(!v.is_negative(), "s={s} seed={seed}");
            }
        }
    }
}

fn main() {
    let checks: Vec<(usize, &str, u64, Check)> = vec![
        (1, "diagram counts follow the Catalan numbers", 1, Box::new(catalan_counts)),
        (2, "3x3 product difference is a single immanant", 5, Box::new(three_by_three_difference)),
        (3, "n = 3 telescoping sum", 5, Box::new(telescoping_n3)),
        (4, "generalized Laplace rows for n = 7, d = 4", 60, Box::new(laplace_n7_d4)),
        (5, "separated 6x6 pair at r = 3", 120, Box::new(separated_six_by_six)),
        (6, "forward sweep over separated pairs with m + n <= 7", 600, Box::new(forward_sweep)),
        (7, "witness for (1,3)/(2,4) and its orbit", 60, Box::new(|| converse(t(2, 2, &[1, 3]), t(2, 2, &[2, 4])))),
        (7, "witness for (1,3,5)/(2,4,6) and its orbit", 60, Box::new(|| converse(t(3, 3, &[1, 3, 5]), t(3, 3, &[2, 4, 6])))),
        (8, "complementary products expand in immanants", 120, Box::new(complementary_identity)),
        (9, "permutation images do not depend on the reduced word", 5, Box::new(reduced_words)),
        (10, "certificates transport under shift and reflection", 60, Box::new(symmetry_transport)),
        (11, "immanants are nonnegative on random TNN matrices", 60, Box::new(immanant_positivity)),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, check) in checks {
        if !run(id, name, limit, check) {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
