//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always print; exits non-zero when any criterion outside
//! `KNOWN_FAILURES` fails, or a known failure stops failing.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use whistle::euclid::{stage_records, AgentOrder};
use whistle::harmonic::split_search;
use whistle::verifier::column_records;
use whistle::{
    atomic_unit, build_cyclic, build_euclidean, build_proportions, euclid_trace, fibonacci_analysis, greedy_simulate,
    matrix_to_scheme, object_progress, optimum_time, timing, type_matrix, validate, ProblemSpec, Rational,
};

const SEED: u64 = 0x5eed_2024;

// Runtime limits.
const LIMIT_GOLDEN: Duration = Duration::from_secs(1);
const LIMIT_PARTITION: Duration = Duration::from_secs(5);
const LIMIT_OPTIMALITY: Duration = Duration::from_secs(30);

// Fibonacci bound: h <= 2.078 ln n + 1.
const FIB_SLOPE: f64 = 2.078;
const FIB_OFFSET: f64 = 1.0;

/// Criteria expected to fail, with the reason. See the decisions ledger.
const KNOWN_FAILURES: &[(u32, &str)] =
    &[(4, "{8,9,12,18,24} has a third split {12} | {8,9,18,24}; singleton parts count (as {3,6} | {4} must)")];

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| Rational::integer(v)).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pairs(max_n: u64) -> Vec<(u64, u64)> {
    (3..=max_n)
        .flat_map(|n| (1..n).map(move |r2| (n - r2, r2)))
        .filter(|&(r1, r2)| r1 > r2 && gcd(r1, r2) == 1)
        .collect()
}

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn record_pair(v: &Value) -> (u64, u64) {
    (v[0].as_u64().unwrap(), v[1].as_u64().unwrap())
}

/// Plan E(180, 53) through the binary.
fn golden_euclid() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_whistle"))
        .args(["plan", "--strategy", "euclid", "--r1", "180", "--r2", "53"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    if !out.status.success() {
        return check(false, format!("exit {:?}", out.status.code()));
    }
    let v: Value = serde_json::from_slice(&out.stdout).expect("summary JSON");
    let quotients: Vec<u64> = v["quotients"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let lengths: Vec<u64> = v["stage_lengths"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let records: Vec<((u64, u64), (u64, u64))> = v["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (record_pair(&s["passive_record"]), record_pair(&s["active_record"])))
        .collect();
    // (t_1, t_2)_i and (T_1, T_2)_i as worked through in the paper
    let paper = vec![
        ((106, 53), (159, 0)),
        ((180, 21), (159, 42)),
        ((159, 53), (170, 42)),
        ((180, 42), (170, 52)),
        ((180, 53), (180, 53)),
    ];
    let closed: Vec<((u64, u64), (u64, u64))> = stage_records(&euclid_trace(180, 53).unwrap())
        .iter()
        .map(|r| (r.at_stage_end.passive, r.at_stage_end.active))
        .collect();
    let pass = v["halts"] == 17
        && quotients == [3, 2, 1, 1, 10]
        && lengths == [159, 42, 11, 10, 11]
        && lengths.iter().sum::<u64>() == 233
        && records == paper
        && closed == paper
        && elapsed < LIMIT_GOLDEN;
    check(
        pass,
        format!(
            "halts={} a={quotients:?} lengths={lengths:?} records match={} in {elapsed:.2?}",
            v["halts"],
            records == paper
        ),
    )
}

const FIGURE_2: [[usize; 13]; 13] = [
    [1, 1, 1, 1, 1, 6, 6, 6, 6, 6, 6, 6, 6],
    [2, 2, 2, 2, 2, 7, 7, 7, 7, 7, 7, 7, 7],
    [3, 3, 3, 3, 3, 8, 8, 8, 8, 8, 8, 8, 8],
    [4, 4, 4, 4, 4, 9, 9, 9, 9, 9, 9, 9, 9],
    [5, 5, 5, 5, 5, 10, 10, 10, 10, 10, 10, 10, 10],
    [6, 6, 6, 6, 6, 1, 1, 1, 1, 1, 11, 11, 11],
    [7, 7, 7, 7, 7, 2, 2, 2, 2, 2, 12, 12, 12],
    [8, 8, 8, 8, 8, 3, 3, 3, 11, 11, 1, 1, 13],
    [9, 9, 9, 9, 9, 4, 4, 4, 12, 12, 2, 13, 1],
    [10, 10, 10, 10, 10, 5, 5, 5, 13, 13, 13, 2, 2],
    [11, 11, 11, 11, 11, 11, 11, 11, 3, 3, 3, 3, 3],
    [12, 12, 12, 12, 12, 12, 12, 12, 4, 4, 4, 4, 4],
    [13, 13, 13, 13, 13, 13, 13, 13, 5, 5, 5, 5, 5],
];

fn figure_two() -> Outcome {
    let e = build_euclidean(8, 5, AgentOrder::Type2First).unwrap();
    let m = e.matrix(Rational::one()).unwrap();
    let mismatches = m
        .rows()
        .iter()
        .zip(FIGURE_2.iter())
        .flat_map(|(row, want)| row.iter().zip(want).filter(|(a, w)| a.0 != **w))
        .count();
    let halts = m.halt_instants();
    check(mismatches == 0 && halts == [5, 8, 10, 11, 12], format!("{mismatches} cells differ, halts at {halts:?}"))
}

fn harmonic_formulas() -> Outcome {
    let spec = ProblemSpec::from_pairs([(q("1"), 3), (q("2"), 4), (q("4"), 1)]).unwrap();
    let h = optimum_time(&spec);
    let au = atomic_unit(&spec);
    let p = build_proportions(&spec);
    let scheme = matrix_to_scheme(&build_cyclic(&spec).unwrap());
    let progress = object_progress(&scheme, &spec, 5, &(&au * Rational::integer(6))).unwrap();
    let pass = h == q("32/21") && au == q("4/21") && p == [q("4/7"), q("8/21"), q("1/21")] && progress == q("5/7");
    check(pass, format!("H={h} au={au} p=({}, {}, {}) O5@6={progress}", p[0], p[1], p[2]))
}

fn partition_search() -> Outcome {
    let start = Instant::now();
    let eleven = split_search(&ints(&[2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 15])).unwrap();
    let five = split_search(&ints(&[8, 9, 12, 18, 24])).unwrap();
    let elapsed = start.elapsed();
    let has =
        |splits: &[whistle::HarmonicPartition], part: &[i64]| splits.iter().any(|s| s.parts.contains(&ints(part)));
    let eleven_ok = eleven.len() == 2
        && has(&eleven, &[2, 7, 9, 10, 15])
        && has(&eleven, &[2, 5, 6, 10, 14, 15])
        && eleven.iter().all(|s| s.mean == q("315/58"));
    let five_ok = five.len() == 2 && has(&five, &[8, 24]) && has(&five, &[9, 18]);
    // the only tolerated difference from the expected pair is the {12} singleton split
    let known_shape = five.len() == 3 && has(&five, &[8, 24]) && has(&five, &[9, 18]) && has(&five, &[12]) && eleven_ok;
    assert!(five_ok || known_shape, "5-list deviates beyond the known {{12}} split");
    let five_parts: Vec<String> = five
        .iter()
        .map(|s| {
            s.parts
                .iter()
                .map(|p| format!("{{{}}}", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    check(
        eleven_ok && five_ok && elapsed < LIMIT_PARTITION,
        format!(
            "11-list: {} splits (ok={eleven_ok}); 5-list: {} splits [{}] (ok={five_ok}); {elapsed:.2?}",
            eleven.len(),
            five.len(),
            five_parts.join("; ")
        ),
    )
}

fn timing_table() -> Outcome {
    let eps = q("0.005");
    let two = q("2");
    let mut rows = Vec::new();
    let mut pass = true;
    for (r1, r2, want) in [(8u64, 5u64, ["1.2381", "1.3031", "1.2681"]), (180, 53, ["1.1283", "2.2933", "1.2183"])] {
        let h = timing::optimal_time_two_type(r1, r2, &two).unwrap();
        let c = timing::total_time(&h, r1 + r2 - 1, &eps).unwrap().total;
        let halts = whistle::halt_number(&euclid_trace(r1, r2).unwrap());
        let e = timing::total_time(&h, halts, &eps).unwrap().total;
        let got = [h.to_significant(5), c.to_significant(5), e.to_significant(5)];
        pass &= got == want;
        rows.push(format!("({r1},{r2}) H={} C={} E={}", got[0], got[1], got[2]));
    }
    check(pass, rows.join("; "))
}

fn fibonacci_property() -> Outcome {
    let mut worst = String::new();
    let mut pass = true;
    for p in 2..=20u32 {
        let r = fibonacci_analysis(p).unwrap();
        let bound = FIB_SLOPE * (r.n as f64).ln() + FIB_OFFSET;
        if r.halts != u64::from(p) || r.halts as f64 > bound {
            pass = false;
            worst = format!("p={p}: h={} bound={bound:.3}", r.halts);
        }
    }
    check(pass, if pass { "h = p and within bound for p = 2..=20".to_string() } else { worst })
}

fn optimality_suite() -> Outcome {
    let start = Instant::now();
    let mut euclid_checked = 0;
    for (r1, r2) in coprime_pairs(60) {
        for order in [AgentOrder::Type1First, AgentOrder::Type2First] {
            let e = build_euclidean(r1, r2, order).unwrap();
            let spec = e.spec(&q("2")).unwrap();
            let au = atomic_unit(&spec);
            let report = validate(&spec, &e.scheme(&au)).unwrap();
            let k = type_matrix(&spec, &e.matrix(au).unwrap()).unwrap().k_uniform;
            if !(report.optimal && report.uniform && k) {
                return check(
                    false,
                    format!("E({r1},{r2}) {order:?}: optimal={} uniform={} k={k}", report.optimal, report.uniform),
                );
            }
            euclid_checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cyclic_checked = 0;
    while cyclic_checked < 300 {
        let m = rng.gen_range(1..=4usize);
        let mut pairs: Vec<(Rational, u64)> = Vec::new();
        while pairs.len() < m {
            let t = Rational::new(rng.gen_range(1..=60), rng.gen_range(1..=12)).unwrap();
            if pairs.iter().all(|(u, _)| *u != t) {
                pairs.push((t, rng.gen_range(1..=6)));
            }
        }
        let spec = ProblemSpec::from_pairs(pairs).unwrap();
        if spec.agents() > 20 {
            continue;
        }
        let matrix = build_cyclic(&spec).unwrap();
        let report = validate(&spec, &matrix_to_scheme(&matrix)).unwrap();
        let two_type_ok = spec.class_count() != 2 || (report.uniform && type_matrix(&spec, &matrix).unwrap().k_uniform);
        if !report.optimal || !two_type_ok {
            return check(false, format!("C_n for {} failed", spec.to_json_string()));
        }
        cyclic_checked += 1;
    }
    let elapsed = start.elapsed();
    check(
        elapsed < LIMIT_OPTIMALITY,
        format!("{euclid_checked} Euclidean and {cyclic_checked} cyclic schemes optimal; {elapsed:.2?}"),
    )
}

fn greedy_oracle() -> Outcome {
    let pairs = coprime_pairs(30);
    for &(r1, r2) in &pairs {
        let e = build_euclidean(r1, r2, AgentOrder::Type1First).unwrap();
        let g = greedy_simulate(r1, r2).unwrap();
        if g.halts != e.halts() {
            return check(false, format!("({r1},{r2}): greedy halts {:?}, Euclid {:?}", g.halts, e.halts()));
        }
        let m = e.matrix(Rational::one()).unwrap();
        for (h, greedy_records) in g.halts.iter().zip(&g.records) {
            let mut records = column_records(&m, *h as usize, |a| a.0 <= r1 as usize);
            records.sort_unstable();
            if &records != greedy_records {
                return check(false, format!("({r1},{r2}): records differ at a.u. {h}"));
            }
        }
    }
    check(true, format!("{} pairs agree on halts and record multisets", pairs.len()))
}

fn biker_hiker() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut tested = 0;
    while tested < 1000 {
        let r1 = rng.gen_range(1..=500u64);
        let r2 = rng.gen_range(1..=500u64);
        let t = Rational::new(rng.gen_range(1..=1000), rng.gen_range(1..=1000)).unwrap();
        if t == 1 {
            continue;
        }
        let lhs = timing::optimal_time_two_type(r1, r2, &t).unwrap();
        let rhs = timing::biker_hiker_time(r1, r2, &t).unwrap();
        if lhs >= rhs {
            return check(false, format!("({r1},{r2},{t}): {lhs} >= {rhs}"));
        }
        tested += 1;
    }
    check(true, format!("{tested} random cases, strict inequality by exact comparison"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "Euclidean golden case E(180,53)", golden_euclid),
        (2, "Figure 2 reproduction", figure_two),
        (3, "harmonic formulas", harmonic_formulas),
        (4, "partition search", partition_search),
        (5, "timing table", timing_table),
        (6, "Fibonacci halts", fibonacci_property),
        (7, "optimality suite", optimality_suite),
        (8, "greedy oracle", greedy_oracle),
        (9, "Biker-hiker inequality", biker_hiker),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let outcome = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        let status = match (outcome.pass, known) {
            (true, None) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (true, Some(_)) => {
                unexpected += 1;
                "PASS (expected failure; update KNOWN_FAILURES)"
            }
            (false, None) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {id} [{status}] {name}: {}", outcome.detail);
        if let (false, Some((_, why))) = (outcome.pass, known) {
            println!("    known: {why}");
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
