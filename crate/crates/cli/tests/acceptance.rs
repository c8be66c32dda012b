//! Acceptance suite: one PASS/FAIL line per criterion, with its time limit.
//! Exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use hullcode::codes::{random_code, random_scaling};
use hullcode::constructions::{lemma3ab_rescale, sum_hull_predict, theorem42_construct, ConstructionError, Frame};
use hullcode::exec::map_indices;
use hullcode::{Exec, Felt, Field, LinearCode, DEFAULT_BUDGET};
use hullcode_cli::golden;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn rng(criterion: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(criterion * 1_000_000 + i as u64)
}

fn small_field(i: usize) -> Field {
    if i.is_multiple_of(2) {
        Field::gf4()
    } else {
        Field::gf8()
    }
}

/// Runs the listed worked examples; every fact must match.
fn golden_rows(ids: &[&str]) -> Verdict {
    let mut failed = Vec::new();
    let mut facts = 0;
    for id in ids {
        for r in golden::run(Some(id)).expect("known example id") {
            facts += r.facts.len();
            failed.extend(
                r.facts
                    .iter()
                    .filter(|f| !f.holds())
                    .map(|f| format!("{id}: {} expected {}, got {}", f.name, f.expected, f.actual)),
            );
        }
    }
    let detail = if failed.is_empty() {
        format!("{facts} facts match")
    } else {
        format!("{}/{facts} facts differ\n      {}", failed.len(), failed.join("\n      "))
    };
    Verdict { pass: failed.is_empty(), detail }
}

/// Counts `Some` failures over `count` seeded instances.
fn sweep(criterion: u64, count: usize, what: &str, f: impl Fn(usize, &mut ChaCha8Rng) -> Option<String> + Sync + Send) -> Verdict {
    let failures: Vec<String> =
        map_indices(Exec::default(), count, |i| f(i, &mut rng(criterion, i))).into_iter().flatten().collect();
    let mut detail = format!("{count} {what}, {} violations", failures.len());
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Verdict { pass: failures.is_empty(), detail }
}

fn c6_hull_formulas() -> Verdict {
    sweep(6, 1000, "codes", |i, rng| {
        let f = small_field(i);
        let n = rng.gen_range(1..=12);
        let k = rng.gen_range(1..=n.min(6));
        let c = random_code(&f, n, k, rng);
        let d = c.hull_dims();
        let oracle = c.hull_oracle(DEFAULT_BUDGET).expect("q^k within budget");
        let agree = d.from_gram == d.from_dual_gram && d.from_gram == d.from_stack && d.from_stack == oracle;
        (!agree).then(|| format!("instance {i}: {d:?}, oracle {oracle}"))
    })
}

fn c7_single_coordinate() -> Verdict {
    sweep(7, 200, "codes (every coordinate and scalar)", |i, rng| {
        let f = small_field(i);
        let n = rng.gen_range(2..=10);
        let k = rng.gen_range(1..=n.min(5));
        let c = random_code(&f, n, k, rng);
        let before = c.hull().dim;
        for j in 1..=n {
            for a in f.nonzero_elements().into_iter().filter(|&a| a != Felt::ONE) {
                match lemma3ab_rescale(&c, j, a) {
                    Ok(r) if before.abs_diff(r.verified_hull) <= 1 => {}
                    Ok(r) => return Some(format!("instance {i}, j = {j}: {before} -> {}", r.verified_hull)),
                    Err(e) => return Some(format!("instance {i}, j = {j}: {e}")),
                }
            }
        }
        None
    })
}

/// A GF(8) code whose hull is raised `lifts` times beforehand, when possible.
fn c8_candidate(rng: &mut ChaCha8Rng, lifts: usize) -> LinearCode {
    let f = Field::gf8();
    let n = rng.gen_range(4..=10);
    let k = rng.gen_range(2..=n - 2);
    let mut c = random_code(&f, n, k, rng);
    for _ in 0..lifts {
        match theorem42_construct(&c, Frame::Default) {
            Ok(r) => c = r.output,
            Err(_) => break,
        }
    }
    c
}

fn c8_hull_increase() -> Verdict {
    const WANTED: usize = 500;
    const ATTEMPTS: usize = 4000;
    // None: hypotheses fail; Some((l, failure)): qualifying instance
    let runs = map_indices(Exec::default(), ATTEMPTS, |i| {
        let mut rng = rng(8, i);
        let c = c8_candidate(&mut rng, i % 3);
        let ell = c.hull().dim;
        match theorem42_construct(&c, Frame::Default) {
            Err(ConstructionError::Hypothesis(_)) => None,
            Err(e) => Some((ell, Some(format!("instance {i}: {e}")))),
            Ok(r) => {
                let block = r.check("G_lambda G_lambda^T = diag(0_l, G'G'^T)").is_some_and(|c| c.holds);
                let det = r.check("det(G'G'^T) = 0").is_some_and(|c| c.holds);
                let ok = block && det && r.verified_hull == ell + 1 && r.all_checks_hold();
                Some((ell, (!ok).then(|| format!("instance {i}: hull {ell} -> {}", r.verified_hull))))
            }
        }
    });
    let qualifying: Vec<_> = runs.into_iter().flatten().take(WANTED).collect();
    let failures: Vec<&String> = qualifying.iter().filter_map(|(_, f)| f.as_ref()).collect();
    let mut by_ell = [0usize; 3];
    for (ell, _) in &qualifying {
        by_ell[(*ell).min(2)] += 1;
    }
    let mut detail = format!(
        "{} qualifying codes (hull 0: {}, 1: {}, >= 2: {}), {} failures",
        qualifying.len(),
        by_ell[0],
        by_ell[1],
        by_ell[2],
        failures.len()
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Verdict { pass: qualifying.len() == WANTED && failures.is_empty(), detail }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (LinearCode, LinearCode) {
    let f = Field::gf4();
    let n = rng.gen_range(2..=8);
    let k1 = rng.gen_range(1..n);
    let k2 = rng.gen_range(1..n);
    (random_code(&f, n, k1, rng), random_code(&f, n, k2, rng))
}

fn c9_sum_theorem() -> Verdict {
    const WANTED: usize = 500;
    const EQUALITY: &str = "hull(C1 + C2) = l1 + l2 - l";
    let constrained: Vec<_> = map_indices(Exec::default(), 4 * WANTED, |i| {
        let (c1, c2) = random_pair(&mut rng(9, i));
        let r = sum_hull_predict(&c1, &c2).expect("same length and field");
        let eq = r.check(EQUALITY)?;
        Some((!eq.holds).then(|| format!("instance {i}: hulls {} and {}, sum {}", r.input_hull, c2.hull().dim, eq.witness)))
    })
    .into_iter()
    .flatten()
    .take(WANTED)
    .collect();
    let eq_fail: Vec<&String> = constrained.iter().flatten().collect();

    let ranges = map_indices(Exec::default(), WANTED, |i| {
        let (c1, c2) = random_pair(&mut rng(90, i));
        let r = sum_hull_predict(&c1, &c2).expect("same length and field");
        r.checks
            .iter()
            .filter(|c| !c.name.starts_with("hull(C1 + C2)") && !c.holds)
            .map(|c| format!("instance {i}: {} ({})", c.name, c.witness))
            .collect::<Vec<_>>()
    });
    let range_fail: Vec<String> = ranges.into_iter().flatten().collect();

    let mut detail = format!(
        "{} pairs meeting the containment hypotheses, {} equality violations; {WANTED} unconstrained pairs, {} range violations",
        constrained.len(),
        eq_fail.len(),
        range_fail.len()
    );
    for first in [eq_fail.first().map(|s| s.as_str()), range_fail.first().map(|s| s.as_str())].into_iter().flatten() {
        detail.push_str(&format!("\n      e.g. {first}"));
    }
    Verdict { pass: constrained.len() == WANTED && eq_fail.is_empty() && range_fail.is_empty(), detail }
}

fn c10_dual_scaling_and_frobenius() -> Verdict {
    let fields = [Field::gf4(), Field::gf8(), Field::gf16(), Field::default_for(3).unwrap(), Field::default_for(9).unwrap()];
    sweep(10, 1000, "instances", |i, rng| {
        let f = &fields[i % fields.len()];
        let n = rng.gen_range(1..=12);
        let k = rng.gen_range(1..=n);
        let c = random_code(f, n, k, rng);
        let a = random_scaling(f, n, rng);
        if !c.dual_scaling_law_check(&a).expect("matching length") {
            return Some(format!("instance {i}: dual scaling law"));
        }
        if f.is_char2() {
            let q = f.order() as u16;
            let x = Felt::from_code(rng.gen_range(0..q));
            let y = Felt::from_code(rng.gen_range(0..q));
            let sq = |v| f.mul(v, v);
            let r = f.sqrt(x).expect("char 2");
            let frob = f.pow(x, f.order() as i64).expect("nonnegative exponent");
            let half = f.pow(x, (f.order() / 2) as i64).expect("nonnegative exponent");
            let ok = sq(r) == x && r == half && sq(f.add(x, y)) == f.add(sq(x), sq(y)) && frob == x;
            if !ok {
                return Some(format!("instance {i}: sqrt/Frobenius at {} and {}", f.render(x), f.render(y)));
            }
        }
        None
    })
}

fn main() {
    type Check = Box<dyn FnOnce() -> Verdict>;
    let criteria: Vec<(u32, &str, u64, Check)> = vec![
        (1, "[10,3,7] LCD code to a one-dimensional hull", 1, Box::new(|| golden_rows(&["ex-3.1"]))),
        (2, "[6,3,3] code with a one-dimensional hull", 1, Box::new(|| golden_rows(&["ex-4.1"]))),
        (3, "[4,2,2] code, corollary and hull increase", 1, Box::new(|| golden_rows(&["ex-4.2"]))),
        (4, "length extension determinants and witnesses", 5, Box::new(|| golden_rows(&["con1-gf4", "con1-gf8", "con1-gf16"]))),
        (5, "sums and dual-word extensions", 2, Box::new(|| golden_rows(&["ex-5.1", "ex-5.2", "ex-5.3", "ex-5.4"]))),
        (6, "three hull formulas agree with enumeration", 30, Box::new(c6_hull_formulas)),
        (7, "single-coordinate scaling moves the hull by at most one", 30, Box::new(c7_single_coordinate)),
        (8, "hull increase from l to l + 1", 60, Box::new(c8_hull_increase)),
        (9, "hull of a sum of codes", 60, Box::new(c9_sum_theorem)),
        (10, "dual scaling law and square roots", 10, Box::new(c10_dual_scaling_and_frobenius)),
    ];
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = v.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {id:>2} {title} ({:.2} s, limit {limit} s{}): {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", too slow" },
            v.detail
        );
    }
    println!("{}/10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
