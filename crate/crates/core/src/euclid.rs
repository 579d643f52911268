//! The Euclidean `(r1, r2)`-scheme for two agent types.
//!
//! `r1` type-1 agents and `r2 < r1` type-2 agents, coprime. Each stage of the
//! scheme follows one line `r_i = a_i·r_{i+1} + r_{i+2}` of the division
//! chain for `(r1, r2)`: the active objects are cut into blocks
//! `S_0, …, S_a` of `r_{i+1}` objects and a remainder block `S_{a+1}`; every
//! `r_{i+1}` a.u. the minority agents trade their objects with the next
//! block. After the `a`-th trade, `S_0..S_{a-1}` stay put until the end and
//! `S_a ∪ S_{a+1}` carry on with the agent roles swapped. The last stage
//! closes with one extra a.u. in which everyone finishes.
//!
//! Halts total `Σ a_i`, against `n − 1` for the cyclic scheme.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::matrix_to_scheme;
use crate::model::{AgentClass, AgentId, AssignmentMatrix, ProblemSpec, Scheme};
use crate::rational::Rational;

/// One line `dividend = quotient · divisor + remainder`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EuclidLine {
    pub dividend: u64,
    pub quotient: u64,
    pub divisor: u64,
    pub remainder: u64,
}

/// The division chain of a coprime pair `r1 > r2 >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EuclidTrace {
    r1: u64,
    r2: u64,
    lines: Vec<EuclidLine>,
}

pub fn euclid_trace(r1: u64, r2: u64) -> Result<EuclidTrace> {
    if r2 == 0 || r1 <= r2 {
        return Err(Error::ArgumentOrder { r1, r2 });
    }
    let gcd = r1.gcd(&r2);
    if gcd != 1 {
        return Err(Error::NotCoprime { r1, r2, gcd });
    }
    let mut lines = Vec::new();
    let (mut dividend, mut divisor) = (r1, r2);
    while divisor != 0 {
        let (quotient, remainder) = dividend.div_rem(&divisor);
        lines.push(EuclidLine { dividend, quotient, divisor, remainder });
        (dividend, divisor) = (divisor, remainder);
    }
    Ok(EuclidTrace { r1, r2, lines })
}

impl EuclidTrace {
    pub fn r1(&self) -> u64 {
        self.r1
    }

    pub fn r2(&self) -> u64 {
        self.r2
    }

    pub fn n(&self) -> u64 {
        self.r1 + self.r2
    }

    pub fn lines(&self) -> &[EuclidLine] {
        &self.lines
    }

    /// Number of lines, which is also the number of stages.
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn quotients(&self) -> Vec<u64> {
        self.lines.iter().map(|l| l.quotient).collect()
    }

    /// Remainder `r_k`, 1-based: `r_1 = r1`, `r_2 = r2`, and past the chain
    /// `r_{t+1} = 1`, `r_{t+2} = 0`.
    pub fn remainder(&self, k: usize) -> u64 {
        match k {
            0 => panic!("remainders are 1-based"),
            1 => self.r1,
            _ => {
                let t = self.lines.len();
                if k <= t + 1 {
                    self.lines[k - 2].divisor
                } else {
                    0
                }
            }
        }
    }
}

/// `h = Σ a_i`.
pub fn halt_number(trace: &EuclidTrace) -> u64 {
    trace.lines.iter().map(|l| l.quotient).sum()
}

/// Stage lengths in a.u.: `a_i · r_{i+1}` for all but the last stage, which
/// runs `a_t + 1`.
pub fn stage_lengths(trace: &EuclidTrace) -> Vec<u64> {
    let t = trace.len();
    trace
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| if i + 1 == t { l.quotient + 1 } else { l.quotient * l.divisor })
        .collect()
}

/// A.u. worked by (type 1, type 2).
pub type Record = (u64, u64);

/// Work records of the passive and active objects of one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecordPair {
    pub passive: Record,
    pub active: Record,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageRecords {
    /// Right after the stage's last exchange.
    pub at_last_exchange: RecordPair,
    /// At the end of the stage. Differs from `at_last_exchange` only in the
    /// final stage, whose closing a.u. completes every object at `(r1, r2)`.
    pub at_stage_end: RecordPair,
}

/// Closed-form work records for every stage.
///
/// Odd stages: passive `(r1 − r_{i+1} − r_{i+2}, r2)`, active
/// `(r1 − r_{i+2}, r2 − r_{i+1})`. Even stages: passive
/// `(r1, r2 − r_{i+1} − r_{i+2})`, active `(r1 − r_{i+1}, r2 − r_{i+2})`.
pub fn stage_records(trace: &EuclidTrace) -> Vec<StageRecords> {
    let (r1, r2) = (trace.r1, trace.r2);
    let t = trace.len();
    (1..=t)
        .map(|i| {
            let next = trace.remainder(i + 1);
            let after = trace.remainder(i + 2);
            let at_last_exchange = if i % 2 == 1 {
                RecordPair { passive: (r1 - next - after, r2), active: (r1 - after, r2 - next) }
            } else {
                RecordPair { passive: (r1, r2 - next - after), active: (r1 - next, r2 - after) }
            };
            let at_stage_end =
                if i == t { RecordPair { passive: (r1, r2), active: (r1, r2) } } else { at_last_exchange };
            StageRecords { at_last_exchange, at_stage_end }
        })
        .collect()
}

/// How agents (and so objects) are numbered in a two-type problem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentOrder {
    /// Agents `1..=r1` are type 1.
    #[default]
    Type1First,
    /// Agents `1..=r2` are type 2.
    Type2First,
}

/// The two-type problem: `r1` agents taking 1 hour per object and `r2`
/// taking `slow_time` hours, listed in `order`.
pub fn two_type_spec(r1: u64, r2: u64, slow_time: &Rational, order: AgentOrder) -> Result<ProblemSpec> {
    if *slow_time == 1 {
        return Err(Error::EqualSpeeds);
    }
    let type1 = AgentClass::new(Rational::one(), r1)?;
    let type2 = AgentClass::new(slow_time.clone(), r2)?;
    match order {
        AgentOrder::Type1First => ProblemSpec::new(vec![type1, type2]),
        AgentOrder::Type2First => ProblemSpec::new(vec![type2, type1]),
    }
}

/// What happened in one stage of a constructed scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub length_au: u64,
    /// A.u. instants (from the start of the scheme) of this stage's halts.
    pub halts_at: Vec<u64>,
    /// Simulated records, as [`StageRecords::at_stage_end`].
    pub passive_record: Record,
    pub active_record: Record,
    /// Simulated records right after the last exchange.
    pub records_at_last_exchange: RecordPair,
    /// Object ids (1-based) of `S_0, …, S_{a+1}`.
    pub blocks: Vec<Vec<usize>>,
    /// Objects still exchanging once the stage is over (0 after the last).
    pub active_after: usize,
}

/// A constructed Euclidean scheme on the a.u. grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanScheme {
    trace: EuclidTrace,
    order: AgentOrder,
    /// Per object, `(start a.u., agent)` for each run of one agent.
    runs: Vec<Vec<(u64, AgentId)>>,
    stages: Vec<StageReport>,
    halts: Vec<u64>,
}

/// Per-object bookkeeping during construction, in canonical labels.
struct Tracker {
    holder: Vec<usize>,
    since: Vec<u64>,
    worked: Vec<[u64; 2]>,
    runs: Vec<Vec<(u64, usize)>>,
    type2_agents: usize,
}

impl Tracker {
    fn kind(&self, agent: usize) -> usize {
        // 0 = type 1, 1 = type 2
        usize::from(agent < self.type2_agents)
    }

    fn record(&self, object: usize, now: u64) -> Record {
        let mut w = self.worked[object];
        w[self.kind(self.holder[object])] += now - self.since[object];
        (w[0], w[1])
    }

    fn swap(&mut self, x: usize, y: usize, now: u64) {
        for o in [x, y] {
            let k = self.kind(self.holder[o]);
            self.worked[o][k] += now - self.since[o];
            self.since[o] = now;
        }
        self.holder.swap(x, y);
        self.runs[x].push((now, self.holder[x]));
        self.runs[y].push((now, self.holder[y]));
    }
}

/// Construct `E(r1, r2)`.
///
/// Object `i` starts with agent `i`. Internally agents are numbered type 2
/// first; the active objects are kept as a list whose first block is `S_0`.
/// Stage 1 uses objects in ascending order, and each later stage takes the
/// reversed tail `S_a ∪ S_{a+1}` of the previous list, so that `S_{a+1}`
/// (held by the new minority) leads and the blocks march outward from it.
/// Block trades pair objects by list position.
pub fn build_euclidean(r1: u64, r2: u64, order: AgentOrder) -> Result<EuclideanScheme> {
    let trace = euclid_trace(r1, r2)?;
    let n = usize::try_from(trace.n()).map_err(|_| Error::Unsupported("scheme too large".into()))?;
    let mut tracker = Tracker {
        holder: (0..n).collect(),
        since: vec![0; n],
        worked: vec![[0, 0]; n],
        runs: (0..n).map(|o| vec![(0, o)]).collect(),
        type2_agents: r2 as usize,
    };
    let mut list: Vec<usize> = (0..n).collect();
    let mut now = 0u64;
    let mut halts = Vec::new();
    let mut stages = Vec::with_capacity(trace.len());
    let t = trace.len();

    for (idx, line) in trace.lines.iter().enumerate() {
        let block = line.divisor as usize;
        let a = line.quotient as usize;
        debug_assert_eq!(list.len() as u64, line.dividend + line.divisor);
        let mut blocks: Vec<Vec<usize>> = (0..=a).map(|j| list[j * block..(j + 1) * block].to_vec()).collect();
        blocks.push(list[(a + 1) * block..].to_vec());

        let start = now;
        let mut halts_at = Vec::with_capacity(a);
        for j in 0..a {
            now += block as u64;
            halts_at.push(now);
            for (&x, &y) in blocks[j].iter().zip(&blocks[j + 1]) {
                tracker.swap(x, y, now);
            }
        }
        let records_at_last_exchange =
            RecordPair { passive: tracker.record(blocks[0][0], now), active: tracker.record(blocks[a][0], now) };
        let last = idx + 1 == t;
        if last {
            now += 1;
        }
        let passive_record = tracker.record(blocks[0][0], now);
        let active_record = tracker.record(blocks[a][0], now);
        if !last {
            list = list[a * block..].iter().rev().copied().collect();
        }
        halts.extend_from_slice(&halts_at);
        stages.push(StageReport {
            stage: idx + 1,
            length_au: now - start,
            halts_at,
            passive_record,
            active_record,
            records_at_last_exchange,
            blocks,
            active_after: if last { 0 } else { list.len() },
        });
    }
    debug_assert_eq!(now, trace.n());

    // canonical label c -> label under `order`
    let relabel = |c: usize| -> usize {
        match order {
            AgentOrder::Type2First => c,
            AgentOrder::Type1First if c < r2 as usize => r1 as usize + c,
            AgentOrder::Type1First => c - r2 as usize,
        }
    };
    let mut runs = vec![Vec::new(); n];
    for (o, object_runs) in tracker.runs.into_iter().enumerate() {
        runs[relabel(o)] =
            object_runs.into_iter().map(|(at, agent)| (at, AgentId::from_index(relabel(agent)))).collect();
    }
    for stage in &mut stages {
        for b in &mut stage.blocks {
            for o in b.iter_mut() {
                *o = relabel(*o) + 1;
            }
        }
    }
    Ok(EuclideanScheme { trace, order, runs, stages, halts })
}

impl EuclideanScheme {
    pub fn trace(&self) -> &EuclidTrace {
        &self.trace
    }

    pub fn order(&self) -> AgentOrder {
        self.order
    }

    pub fn stages(&self) -> &[StageReport] {
        &self.stages
    }

    /// Halt instants in a.u.
    pub fn halts(&self) -> &[u64] {
        &self.halts
    }

    pub fn n(&self) -> usize {
        self.runs.len()
    }

    /// Per object, the `(start a.u., agent)` runs.
    pub fn runs(&self) -> &[Vec<(u64, AgentId)>] {
        &self.runs
    }

    /// The problem this scheme solves when type-2 agents take `slow_time`
    /// hours.
    pub fn spec(&self, slow_time: &Rational) -> Result<ProblemSpec> {
        two_type_spec(self.trace.r1, self.trace.r2, slow_time, self.order)
    }

    /// The full `n × n` grid; `au_hours` only labels it.
    pub fn matrix(&self, au_hours: Rational) -> Result<AssignmentMatrix> {
        let n = self.n();
        let rows = self
            .runs
            .iter()
            .map(|runs| {
                let mut row = Vec::with_capacity(n);
                for (k, &(start, agent)) in runs.iter().enumerate() {
                    let end = runs.get(k + 1).map_or(n as u64, |r| r.0);
                    row.extend(std::iter::repeat_n(agent, (end - start) as usize));
                }
                row
            })
            .collect();
        AssignmentMatrix::new(rows, au_hours)
    }

    /// Hour-valued scheme without materialising the grid.
    pub fn scheme(&self, au_hours: &Rational) -> Scheme {
        let n = self.n() as u64;
        let objects = self
            .runs
            .iter()
            .map(|runs| {
                runs.iter()
                    .enumerate()
                    .map(|(k, &(start, agent))| {
                        let end = runs.get(k + 1).map_or(n, |r| r.0);
                        crate::model::Segment::new(
                            agent,
                            au_hours * Rational::from(start),
                            au_hours * Rational::from(end),
                        )
                    })
                    .collect()
            })
            .collect();
        Scheme::new(objects).expect("runs are ordered and non-empty")
    }
}

/// Convenience: the matrix of `E(r1, r2)` together with its stage reports.
pub fn build_euclidean_matrix(
    r1: u64,
    r2: u64,
    order: AgentOrder,
    slow_time: &Rational,
) -> Result<(AssignmentMatrix, Vec<StageReport>)> {
    let e = build_euclidean(r1, r2, order)?;
    let spec = e.spec(slow_time)?;
    let matrix = e.matrix(crate::harmonic::atomic_unit(&spec))?;
    Ok((matrix, e.stages.clone()))
}

/// Fibonacci numbers with `f_1 = f_2 = 1`; `None` past `u64`.
pub fn fibonacci(k: u32) -> Option<u64> {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        let next = a.checked_add(b)?;
        (a, b) = (b, next);
    }
    Some(a)
}

/// Largest `n` for which the Fibonacci analysis constructs the scheme
/// rather than reading halts off the division chain.
pub const FIBONACCI_BUILD_LIMIT: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FibonacciReport {
    pub p: u32,
    pub r1: u64,
    pub r2: u64,
    pub n: u64,
    pub halts: u64,
    pub halt_instants: Vec<u64>,
    pub stage_lengths: Vec<u64>,
    /// Whether the halts were counted on a constructed scheme.
    pub constructed: bool,
    /// `log_φ n`.
    pub log_phi_n: f64,
    /// `h <= log_φ n`; may fail for small `p`.
    pub within_log_bound: bool,
}

/// Analyse `E(f_{p+1}, f_p)`, whose quotients are all 1 but the last.
pub fn fibonacci_analysis(p: u32) -> Result<FibonacciReport> {
    if p < 2 {
        return Err(Error::Unsupported(format!("need p >= 2, got {p}")));
    }
    let too_big = || Error::Unsupported(format!("f_{} does not fit in 64 bits", p + 2));
    let r1 = fibonacci(p + 1).ok_or_else(too_big)?;
    let r2 = fibonacci(p).ok_or_else(too_big)?;
    let n = fibonacci(p + 2).ok_or_else(too_big)?;
    let trace = euclid_trace(r1, r2)?;
    let (halts, halt_instants, constructed) = if n <= FIBONACCI_BUILD_LIMIT {
        let e = build_euclidean(r1, r2, AgentOrder::Type2First)?;
        let spec = e.spec(&Rational::integer(2))?;
        let scheme = e.scheme(&crate::harmonic::atomic_unit(&spec));
        (scheme.halt_instants().len() as u64, e.halts().to_vec(), true)
    } else {
        let lengths = stage_lengths(&trace);
        let mut instants = Vec::new();
        let mut at = 0;
        for (line, len) in trace.lines().iter().zip(&lengths) {
            for j in 1..=line.quotient {
                instants.push(at + j * line.divisor);
            }
            at += len;
        }
        (halt_number(&trace), instants, false)
    };
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let log_phi_n = (n as f64).ln() / phi.ln();
    Ok(FibonacciReport {
        p,
        r1,
        r2,
        n,
        halts,
        halt_instants,
        stage_lengths: stage_lengths(&trace),
        constructed,
        log_phi_n,
        within_log_bound: (halts as f64) <= log_phi_n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairHalts {
    pub r1: u64,
    pub r2: u64,
    pub halts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HaltStatistics {
    pub n: u64,
    pub mean: Rational,
    pub per_pair: Vec<PairHalts>,
}

/// Halt numbers of every coprime split `n = r1 + r2`, `r1 > r2 >= 1`, with
/// their exact mean. Pairs are listed by descending `r1`.
pub fn halt_statistics(n: u64) -> Result<HaltStatistics> {
    if n < 3 {
        return Err(Error::Unsupported(format!("need n >= 3, got {n}")));
    }
    let per_pair: Vec<PairHalts> = (1..=(n - 1) / 2)
        .filter(|&r2| n.gcd(&r2) == 1 && n - r2 > r2)
        .map(|r2| {
            let r1 = n - r2;
            let trace = euclid_trace(r1, r2).expect("coprime and ordered");
            PairHalts { r1, r2, halts: halt_number(&trace) }
        })
        .collect();
    let total: u64 = per_pair.iter().map(|p| p.halts).sum();
    let mean = Rational::from(total) / Rational::from(per_pair.len());
    Ok(HaltStatistics { n, mean, per_pair })
}

/// Hour-valued scheme of `E(r1, r2)` for the given slow time.
pub fn euclidean_scheme(r1: u64, r2: u64, order: AgentOrder, slow_time: &Rational) -> Result<(ProblemSpec, Scheme)> {
    let e = build_euclidean(r1, r2, order)?;
    let spec = e.spec(slow_time)?;
    let matrix = e.matrix(crate::harmonic::atomic_unit(&spec))?;
    Ok((spec, matrix_to_scheme(&matrix)))
}
