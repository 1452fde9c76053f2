//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! (written straight to stderr so it shows without `--nocapture`) and then
//! asserts the same outcome.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use primetree::algebra::{
    div_map, exp_map, fuse, fuse_linear, fusion_associativity_report, star_rational,
};
use primetree::analytic::{
    chebyshev_psi, chebyshev_psi_by_primes, chebyshev_psi_direct, conjecture_sweep, integral,
    prime_pi,
};
use primetree::certificates::{
    generate_certificate, strip_to_tree, verify_certificate, CertifiedFactor,
};
use primetree::poset::{generators, PosetView};
use primetree::trees::{b_plus, support_grading, total_weight};
use primetree::{
    Error, GpElement, PositiveRational, PrattCertificate, PrimeTable, PrimeTreeCache, RootedTree,
};

/// Collects named checks for one criterion and reports a single verdict.
struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    start: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str, budget_secs: u64) -> Self {
        Criterion {
            id,
            title,
            budget: Duration::from_secs(budget_secs),
            start: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "runtime {elapsed:?} exceeds budget {:?}",
                self.budget
            ));
        }
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut err = std::io::stderr().lock();
        writeln!(
            err,
            "\ncriterion {}: {verdict} - {} ({:.2?})",
            self.id, self.title, elapsed
        )
        .unwrap();
        for f in self.failures.iter().take(10) {
            writeln!(err, "    {f}").unwrap();
        }
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.id,
            self.failures
        );
    }
}

fn table(limit: u64) -> Arc<PrimeTable> {
    Arc::new(PrimeTable::new(limit).unwrap())
}

fn q(n: u64, d: u64) -> PositiveRational {
    PositiveRational::new(n, d).unwrap()
}

fn x(terms: &[(u64, i64)]) -> GpElement {
    GpElement::from_terms(terms.iter().copied())
}

fn trial_is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[test]
fn criterion_1_golden_values() {
    let mut c = Criterion::new(1, "golden values", 1);
    let t = table(10_000);
    let cache = PrimeTreeCache::new(t.clone());

    c.check(generators(&t, 19).unwrap() == vec![2, 3], "generators(19)");
    c.check(support_grading(&t, 19).unwrap() == 2, "w(19)");
    c.check(total_weight(&t, 19).unwrap() == 3, "W(19)");
    c.check(
        t.aut_structure(19).unwrap() == vec![(2, 1), (3, 2)],
        "Aut(F_19)",
    );
    c.check(
        star_rational(&q(3, 1), &q(5, 1)).unwrap() == q(9, 1),
        "3*5 = 9",
    );
    for &p in t.primes() {
        c.check(
            star_rational(&q(2, 1), &q(p, 1)).unwrap() == q(p, 1),
            format!("2*{p} = {p}"),
        );
        c.check(
            fuse(&t, 2, p).unwrap() == GpElement::basis(p),
            format!("X2*X{p}"),
        );
    }

    let leaf = RootedTree::leaf;
    let t5 = b_plus([leaf(), leaf()]);
    let t11 = b_plus([leaf(), t5]);
    let t23 = b_plus([leaf(), t11]);
    let t47 = b_plus([leaf(), t23]);
    let got47 = cache.prime_tree(47).unwrap();
    c.check(got47 == t47, "t(47) shape");
    c.check(got47.degree() == 9, "deg t(47) = 9");
    c.check(got47.height() == 5, "t(47) has five levels");

    let t181 = cache.prime_tree(181).unwrap();
    let mut kids: Vec<RootedTree> = t181.children().to_vec();
    kids.sort();
    let p = |n| cache.prime_tree(n).unwrap();
    let mut expected = vec![p(2), p(2), p(3), p(3), p(5)];
    expected.sort();
    c.check(kids == expected, "t(181) children {t2,t2,t3,t3,t5}");
    c.check(t181.degree() == 10, "deg t(181) = 10");
    c.finish();
}

#[test]
fn criterion_2_formal_group_laws() {
    let mut c = Criterion::new(2, "formal group laws of star", 5);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let rand_q = |rng: &mut ChaCha8Rng| q(rng.gen_range(1..=1000), rng.gen_range(1..=1000));
    let two = q(2, 1);
    let (mut checked, mut skipped) = (0, 0);
    while checked < 10_000 {
        let (a, b, d) = (rand_q(&mut rng), rand_q(&mut rng), rand_q(&mut rng));
        c.check(star_rational(&two, &a).unwrap() == a, format!("2*{a}"));
        c.check(star_rational(&a, &two).unwrap() == a, format!("{a}*2"));
        let ab = star_rational(&a, &b);
        let ba = star_rational(&b, &a);
        c.check(
            ab.clone().ok() == ba.ok(),
            format!("commutativity at {a}, {b}"),
        );
        // ⋆ is only closed where (x-1)(y-1) > -1; compare where both sides exist
        let left = ab.and_then(|ab| star_rational(&ab, &d));
        let right = star_rational(&b, &d).and_then(|bd| star_rational(&a, &bd));
        match (left, right) {
            (Ok(l), Ok(r)) => {
                c.check(l == r, format!("associativity at {a}, {b}, {d}"));
                checked += 1;
            }
            (Err(Error::Domain(_)), _) | (_, Err(Error::Domain(_))) => skipped += 1,
            (l, r) => c.check(false, format!("unexpected {l:?} / {r:?}")),
        }
    }
    c.check(skipped < checked, "too many triples outside the domain");
    c.finish();
}

#[test]
fn criterion_3_fusion_associativity_report() {
    let mut c = Criterion::new(3, "fusion associativity report to 200", 10);
    let t = table(1_000_000);
    let report = fusion_associativity_report(&t, 200).unwrap();
    let n = t.primes_between(2, 200).len();
    c.check(
        report.triples_checked == n * n * n,
        "exhaustive triple count",
    );
    match report.find(3, 5, 7) {
        Some(m) => {
            c.check(m.left == x(&[(13, 2)]), format!("(X3*X5)*X7 = {}", m.left));
            c.check(m.right == x(&[(3, 4)]), format!("X3*(X5*X7) = {}", m.right));
        }
        None => c.check(false, "(3,5,7) missing from the report"),
    }
    // independent recomputation of the reported triple
    let (x3, x5, x7) = (
        GpElement::basis(3),
        GpElement::basis(5),
        GpElement::basis(7),
    );
    let l = fuse_linear(&t, &fuse_linear(&t, &x3, &x5).unwrap(), &x7).unwrap();
    let r = fuse_linear(&t, &x3, &fuse_linear(&t, &x5, &x7).unwrap()).unwrap();
    c.check(l != r, "direct expansion disagrees");
    let mut err = std::io::stderr().lock();
    writeln!(
        err,
        "    fusion rule: {} of {} triples non-associative",
        report.mismatches.len(),
        report.triples_checked
    )
    .unwrap();
    drop(err);
    c.finish();
}

#[test]
fn criterion_4_homomorphisms_and_integral() {
    let mut c = Criterion::new(4, "Exp/Div homomorphisms and the integral", 30);
    let t = table(1_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);

    for _ in 0..1000 {
        let r = q(rng.gen_range(1..=1_000_000), rng.gen_range(1..=1_000_000));
        let s = q(rng.gen_range(1..=1_000_000), rng.gen_range(1..=1_000_000));
        let rs = r.checked_mul(&s).unwrap();
        c.check(
            div_map(&t, &rs) == &div_map(&t, &r) + &div_map(&t, &s),
            format!("Div({r} * {s})"),
        );
    }

    let primes: Vec<u64> = t.primes_between(2, 100).to_vec();
    let element = |rng: &mut ChaCha8Rng| {
        let terms = rng.gen_range(0..=4);
        GpElement::from_terms(
            (0..terms).map(|_| (*primes.choose(rng).unwrap(), rng.gen_range(-3i64..=3))),
        )
    };
    let mut pairs = 0;
    while pairs < 1000 {
        let (a, b) = (element(&mut rng), element(&mut rng));
        let (Ok(ea), Ok(eb), Ok(eab)) = (exp_map(&a), exp_map(&b), exp_map(&(&a + &b))) else {
            continue;
        };
        let Ok(prod) = ea.checked_mul(&eb) else {
            continue;
        };
        c.check(eab == prod, format!("Exp({a} + {b})"));
        pairs += 1;
    }

    for n in 2..=10_000u64 {
        let v = integral(&div_map(&t, &q(n, 1)));
        let ln = (n as f64).ln();
        c.check(
            (v - ln).abs() <= 1e-12 * ln.abs(),
            format!("integral(Div({n}))"),
        );
    }
    c.finish();
}

// One random mutation of a valid certificate at a random node. Every kind
// breaks a verified invariant: g^2 is never a primitive root, dropped or
// re-weighted factors break the product, swapped sub-certificates no longer
// prove their q, and base-case edits give the base a witness.
fn mutate(cert: &mut PrattCertificate, rng: &mut ChaCha8Rng) {
    let target = rng.gen_range(0..cert.node_count());
    let mut seen = 0;
    mutate_at(cert, target, &mut seen, rng);
}

fn mutate_at(
    cert: &mut PrattCertificate,
    target: usize,
    seen: &mut usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    if *seen == target {
        apply_mutation(cert, rng);
        return true;
    }
    *seen += 1;
    for f in &mut cert.factors {
        if mutate_at(&mut f.cert, target, seen, rng) {
            return true;
        }
    }
    false
}

fn apply_mutation(cert: &mut PrattCertificate, rng: &mut ChaCha8Rng) {
    if cert.n == 2 {
        cert.witness = Some(rng.gen_range(0..5));
        return;
    }
    let n = cert.n;
    match rng.gen_range(0..4) {
        0 => {
            let g = cert.witness.unwrap();
            cert.witness = Some((g as u128 * g as u128 % n as u128) as u64);
        }
        1 => {
            let i = rng.gen_range(0..cert.factors.len());
            cert.factors.remove(i);
        }
        2 => {
            let i = rng.gen_range(0..cert.factors.len());
            let f = &mut cert.factors[i];
            f.k = if rng.gen_bool(0.5) { f.k + 1 } else { f.k - 1 };
        }
        _ => {
            let i = rng.gen_range(0..cert.factors.len());
            let f = &mut cert.factors[i];
            f.cert = PrattCertificate {
                n: f.q + 2,
                witness: Some(2),
                factors: vec![],
            };
        }
    }
}

// A certificate for composite m whose factorization of m - 1 and all
// sub-certificates are genuine; only the witness can be wrong.
fn forge_composite(t: &PrimeTable, m: u64, g: u64) -> PrattCertificate {
    let factors = t
        .factorize(m - 1)
        .unwrap()
        .iter()
        .map(|(q, k)| CertifiedFactor {
            q,
            k: k as u32,
            cert: generate_certificate(t, q).unwrap(),
        })
        .collect();
    PrattCertificate {
        n: m,
        witness: Some(g),
        factors,
    }
}

#[test]
fn criterion_5_certificates() {
    let mut c = Criterion::new(5, "Pratt certificate soundness and rejection", 60);
    let t = table(10_000);
    let cache = PrimeTreeCache::new(t.clone());

    let mut certs = Vec::new();
    for &p in t.primes() {
        let cert = generate_certificate(&t, p).unwrap();
        c.check(verify_certificate(&cert), format!("verify(generate({p}))"));
        match strip_to_tree(&cert) {
            Ok(tree) => c.check(
                tree.encode() == cache.prime_tree(p).unwrap().encode(),
                format!("strip(cert({p})) = t({p})"),
            ),
            Err(e) => c.check(false, format!("strip({p}): {e}")),
        }
        certs.push(cert);
    }

    let mut composites = 0;
    for n in 4..=10_000u64 {
        if !trial_is_prime(n) {
            composites += 1;
            c.check(
                generate_certificate(&t, n) == Err(Error::NotPrime(n)),
                format!("generate({n}) rejected"),
            );
        }
    }
    c.check(composites == (10_000 - 3) - (1229 - 2), "composite count");
    c.check(
        generate_certificate(&t, 561) == Err(Error::NotPrime(561)),
        "Carmichael 561",
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for i in 0..1000 {
        let mut cert = certs.choose(&mut rng).unwrap().clone();
        mutate(&mut cert, &mut rng);
        c.check(
            !verify_certificate(&cert),
            format!("mutation {i} accepted: {cert:?}"),
        );
    }

    // forged composites, including every witness for 561
    for g in 2..561 {
        c.check(
            !verify_certificate(&forge_composite(&t, 561, g)),
            format!("561 with g={g}"),
        );
    }
    for _ in 0..1000 {
        let m = loop {
            let m = rng.gen_range(9..10_000u64) | 1;
            if !trial_is_prime(m) {
                break m;
            }
        };
        let g = rng.gen_range(2..m);
        c.check(
            !verify_certificate(&forge_composite(&t, m, g)),
            format!("forged {m}"),
        );
    }
    c.finish();
}

#[test]
fn criterion_6_analytic_checks() {
    let mut c = Criterion::new(6, "Chebyshev psi and prime counting", 30);
    let t = table(1_000_000);

    for x in [10u64, 100, 1000, 10_000] {
        let a = chebyshev_psi_direct(&t, x).unwrap();
        let b = chebyshev_psi_by_primes(&t, x).unwrap();
        c.check(
            (a - b).abs() <= 1e-9 * b.abs(),
            format!("psi routes at {x}"),
        );
    }

    // oracle: enumerate prime powers <= 10 by trial division
    let mut psi10 = 0.0;
    for p in (2..=10u64).filter(|&p| trial_is_prime(p)) {
        let mut pk = p;
        while pk <= 10 {
            psi10 += (p as f64).ln();
            pk *= p;
        }
    }
    let got = chebyshev_psi(&t, 10).unwrap();
    c.check((got - psi10).abs() < 1e-12, "psi(10) matches enumeration");
    c.check((got - 7.832015).abs() <= 1e-5, format!("psi(10) = {got}"));

    let oracle_pi = (2..=1_000_000u64).filter(|&n| trial_is_prime(n)).count() as u64;
    c.check(
        oracle_pi == 78_498,
        "trial-division count of primes to 10^6",
    );
    let pi = prime_pi(&t, 1_000_000).unwrap();
    c.check(pi == oracle_pi, format!("pi(10^6) = {pi}"));

    let ratio = pi as f64 * 1e6f64.ln() / 1e6;
    c.check(
        (1.083..=1.086).contains(&ratio),
        format!("pi ln x / x = {ratio}"),
    );
    let psi_ratio = chebyshev_psi(&t, 1_000_000).unwrap() / 1e6;
    c.check(
        (0.97..=1.01).contains(&psi_ratio),
        format!("psi(10^6)/10^6 = {psi_ratio}"),
    );
    c.finish();
}

// Regression baselines from the first full run of the sweep over [2, 10^5].
const BASELINE_ROWS: usize = 9592;
const BASELINE_SLOPE: f64 = 2.017258744567246;
const BASELINE_PEARSON_R: f64 = 0.915554818792687;

#[test]
fn criterion_7_conjecture_pipeline() {
    let mut c = Criterion::new(7, "ln p vs deg t(p) sweep to 10^5", 60);
    let t = table(1_000_000);

    let mut csvs = Vec::new();
    let mut reports = Vec::new();
    for threads in [1usize, 2, 4, 8, 1] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let cache = PrimeTreeCache::new(t.clone());
        let sweep = pool
            .install(|| conjecture_sweep(2, 100_000, &cache))
            .unwrap();
        csvs.push(sweep.to_csv());
        reports.push(sweep.report);
    }
    c.check(
        csvs.windows(2).all(|w| w[0] == w[1]),
        "CSV byte-stable across runs and thread counts",
    );

    let rep = &reports[0];
    c.check(rep.rows == BASELINE_ROWS, format!("rows = {}", rep.rows));
    c.check(rep.slope > 0.0, format!("slope = {}", rep.slope));
    c.check(
        rep.pearson_r > 0.0,
        format!("pearson_r = {}", rep.pearson_r),
    );
    c.check(
        (rep.slope - BASELINE_SLOPE).abs() < 1e-9,
        format!("slope baseline {}", rep.slope),
    );
    c.check(
        (rep.pearson_r - BASELINE_PEARSON_R).abs() < 1e-9,
        format!("pearson_r baseline {}", rep.pearson_r),
    );

    let means: Vec<(u32, f64)> = rep
        .bucket_means
        .iter()
        .filter(|b| (4..=16).contains(&b.k))
        .map(|b| (b.k, b.mean_deg_t))
        .collect();
    c.check(
        means.iter().map(|m| m.0).collect::<Vec<_>>() == (4..=16).collect::<Vec<_>>(),
        "buckets k = 4..16 present",
    );
    c.check(
        means.windows(2).all(|w| w[0].1 <= w[1].1),
        format!("bucket means nondecreasing: {means:?}"),
    );

    let cache = PrimeTreeCache::new(t.clone());
    let sweep = conjecture_sweep(2, 100_000, &cache).unwrap();
    for r in &sweep.rows {
        c.check(
            r.deg_t > r.big_w as u64 && r.w <= r.big_w && r.depth as u64 <= r.deg_t,
            format!("row invariants at {}", r.p),
        );
    }
    c.finish();
}

// Random tree on n nodes: node i > 0 hangs below a uniform earlier node.
fn random_children(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); n];
    for i in 1..n {
        children[rng.gen_range(0..i)].push(i);
    }
    children
}

fn build_tree(node: usize, children: &[Vec<usize>]) -> RootedTree {
    b_plus(children[node].iter().map(|&c| build_tree(c, children)))
}

#[test]
fn criterion_8_structural_invariants() {
    let mut c = Criterion::new(8, "tree laws, AHU invariance, poset connectivity", 60);
    let t = table(1_000_000);
    let cache = PrimeTreeCache::new(t.clone());

    for &p in t.primes_between(2, 10_000) {
        let tree = cache.prime_tree(p).unwrap();
        let f = t.factorize(p - 1).unwrap();
        let mut deg = 1;
        for (q, k) in f.iter() {
            deg += k as usize * cache.prime_tree(q).unwrap().degree();
        }
        c.check(tree.degree() == deg, format!("degree law at {p}"));
        let big_w = total_weight(&t, p).unwrap() as usize;
        let w = support_grading(&t, p).unwrap() as usize;
        c.check(
            tree.children().len() == big_w,
            format!("child count = W at {p}"),
        );
        let distinct: BTreeSet<&str> = tree.children().iter().map(|c| c.encode()).collect();
        c.check(distinct.len() == w, format!("distinct children = w at {p}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for i in 0..1000 {
        let n = rng.gen_range(1..=20);
        let children = random_children(n, &mut rng);
        let mut shuffled = children.clone();
        for kids in &mut shuffled {
            kids.shuffle(&mut rng);
        }
        let a = build_tree(0, &children);
        let b = build_tree(0, &shuffled);
        c.check(
            a.encode() == b.encode(),
            format!("AHU invariance, tree {i}"),
        );
        c.check(a.degree() == n, format!("degree of random tree {i}"));
    }

    let view = PosetView::build(t.clone());
    c.check(view.verify_connectivity(), "every prime <= 10^6 reaches 2");
    c.check(
        view.edges().len() + 1 == t.primes().len(),
        "every odd prime has an edge list",
    );
    c.finish();
}
