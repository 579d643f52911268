//! Checking schemes: validity, optimality, uniformity, k-uniform type
//! matrices, and an independent greedy simulation for two agent types.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::{euclid_trace, Record};
use crate::harmonic::{atomic_unit, optimum_time};
use crate::model::{AgentId, AssignmentMatrix, ProblemSpec, Scheme, TimeUnit, WorkRecord};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Every object is worked without a gap from time 0 to its finish.
    pub continuous_per_object: bool,
    /// Every agent works without a gap from time 0 to the scheme's end.
    pub agents_always_busy: bool,
    /// No agent holds two objects at once.
    pub no_agent_overlap: bool,
    /// Every object finishes at the same instant.
    pub simultaneous_finish: bool,
    /// Every object receives exactly one object's worth of work.
    pub objects_complete: bool,
    pub duration: Rational,
    pub optimum_time: Rational,
    pub optimal: bool,
    pub uniform: bool,
    pub halt_count: usize,
    /// Time per object per class, in atomic units.
    pub work_records: WorkRecord,
    /// Fraction of each object built by the end of the scheme.
    pub progress: Vec<Rational>,
}

fn check_agents(spec: &ProblemSpec, scheme: &Scheme) -> Result<()> {
    let n = spec.agents();
    if scheme.object_count() != n {
        return Err(Error::MalformedScheme(format!(
            "scheme has {} objects, problem has {n} agents",
            scheme.object_count()
        )));
    }
    if scheme.max_agent() > n {
        return Err(Error::MalformedScheme(format!(
            "agent {} does not exist (problem has {n} agents)",
            scheme.max_agent()
        )));
    }
    Ok(())
}

/// Sorted `(start, end)` intervals per agent (index = id − 1).
fn agent_intervals(n: usize, scheme: &Scheme) -> Vec<Vec<(Rational, Rational)>> {
    let mut by_agent = vec![Vec::new(); n];
    for s in scheme.objects().iter().flatten() {
        by_agent[s.agent.index()].push((s.start.clone(), s.end.clone()));
    }
    for iv in &mut by_agent {
        iv.sort();
    }
    by_agent
}

pub fn validate(spec: &ProblemSpec, scheme: &Scheme) -> Result<ValidationReport> {
    check_agents(spec, scheme)?;
    let n = spec.agents();
    let times = spec.expanded_times();
    let classes = spec.agent_classes();
    let duration = scheme.duration();
    let h = optimum_time(spec);
    let au = atomic_unit(spec);

    let continuous_per_object = scheme
        .objects()
        .iter()
        .all(|segs| segs.first().is_some_and(|s| s.start.is_zero()) && segs.windows(2).all(|w| w[0].end == w[1].start));
    let simultaneous_finish = scheme.objects().iter().all(|segs| segs.last().is_some_and(|s| s.end == duration));

    let intervals = agent_intervals(n, scheme);
    let no_agent_overlap = intervals.iter().all(|iv| iv.windows(2).all(|w| w[0].1 <= w[1].0));
    let agents_always_busy = intervals.iter().all(|iv| {
        iv.first().is_some_and(|f| f.0.is_zero())
            && iv.last().is_some_and(|l| l.1 == duration)
            && iv.windows(2).all(|w| w[0].1 == w[1].0)
    });

    let mut per_object = Vec::with_capacity(n);
    let mut progress = Vec::with_capacity(n);
    for segs in scheme.objects() {
        let mut by_class = vec![Rational::zero(); spec.class_count()];
        let mut built = Rational::zero();
        for s in segs {
            let a = s.agent.index();
            let d = s.duration();
            built += &d / &times[a];
            by_class[classes[a]] += d;
        }
        per_object.push(by_class.into_iter().map(|t| t / &au).collect::<Vec<_>>());
        progress.push(built);
    }
    let objects_complete = progress.iter().all(|p| *p == 1);

    let uniform = continuous_per_object
        && objects_complete
        && per_object
            .iter()
            .all(|rec: &Vec<Rational>| rec.iter().zip(spec.classes()).all(|(t, c)| *t == Rational::from(c.count)));
    let optimal = continuous_per_object
        && agents_always_busy
        && no_agent_overlap
        && simultaneous_finish
        && objects_complete
        && duration == h;

    Ok(ValidationReport {
        continuous_per_object,
        agents_always_busy,
        no_agent_overlap,
        simultaneous_finish,
        objects_complete,
        duration,
        optimum_time: h,
        optimal,
        uniform,
        halt_count: scheme.halt_instants().len(),
        work_records: WorkRecord { unit: TimeUnit::AtomicUnits, per_object },
        progress,
    })
}

pub fn is_uniform(spec: &ProblemSpec, scheme: &Scheme) -> Result<bool> {
    Ok(validate(spec, scheme)?.uniform)
}

/// Class of every cell of a two-class matrix, with the k-uniform test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeMatrix {
    /// `cells[i][j]` is 1 or 2.
    pub cells: Vec<Vec<u8>>,
    /// Agents per class, `(k_1, k_2)`.
    pub counts: (u64, u64),
    /// Every row and every column holds exactly `k_1` class-1 cells.
    pub k_uniform: bool,
}

impl TypeMatrix {
    /// 0/1 projection: cells of `zero_class` become 0, the rest 1.
    pub fn binary(&self, zero_class: u8) -> Vec<Vec<u8>> {
        self.cells.iter().map(|row| row.iter().map(|&c| u8::from(c != zero_class)).collect()).collect()
    }
}

pub fn type_matrix(spec: &ProblemSpec, matrix: &AssignmentMatrix) -> Result<TypeMatrix> {
    type_grid(spec, matrix.rows())
}

/// As [`type_matrix`], for a grid that need not have permutation columns.
pub fn type_grid(spec: &ProblemSpec, rows: &[Vec<AgentId>]) -> Result<TypeMatrix> {
    if spec.class_count() != 2 {
        return Err(Error::Unsupported(format!(
            "type matrices need exactly 2 agent classes, got {}",
            spec.class_count()
        )));
    }
    let n = spec.agents();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMatrix(format!("grid is not {n}×{n}")));
    }
    let classes = spec.agent_classes();
    let cells = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| {
                    if (1..=n).contains(&a.0) {
                        Ok(classes[a.index()] as u8 + 1)
                    } else {
                        Err(Error::InvalidMatrix(format!("agent id {} outside 1..={n}", a.0)))
                    }
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let k1 = spec.classes()[0].count;
    let counts = (k1, spec.classes()[1].count);
    let rows_ok = cells.iter().all(|r| r.iter().filter(|&&c| c == 1).count() as u64 == k1);
    let cols_ok = (0..n).all(|j| cells.iter().filter(|r| r[j] == 1).count() as u64 == k1);
    Ok(TypeMatrix { cells, counts, k_uniform: rows_ok && cols_ok })
}

/// `(type 1, type 2)` a.u. worked by each object over the first `columns`
/// columns of a two-type grid whose type-1 agents are `is_type1`.
pub fn column_records(matrix: &AssignmentMatrix, columns: usize, is_type1: impl Fn(AgentId) -> bool) -> Vec<Record> {
    matrix
        .rows()
        .iter()
        .map(|row| {
            let ones = row[..columns].iter().filter(|&&a| is_type1(a)).count() as u64;
            (ones, columns as u64 - ones)
        })
        .collect()
}

/// Result of the greedy simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRun {
    /// Type-1 agents first, one column per a.u.; `au_hours` is 1.
    pub matrix: AssignmentMatrix,
    /// Halt instants in a.u.
    pub halts: Vec<u64>,
    /// Sorted multiset of object records at each halt.
    pub records: Vec<Vec<Record>>,
}

impl GreedyRun {
    pub fn scheme(&self, au_hours: &Rational) -> Result<Scheme> {
        let m = AssignmentMatrix::new(self.matrix.rows().to_vec(), au_hours.clone())?;
        Ok(crate::grid::matrix_to_scheme(&m))
    }
}

/// Run `r1` type-1 and `r2` type-2 agents without halting until some object
/// would exceed its quota of `r1` a.u. with type 1 or `r2` with type 2.
///
/// At a halt, forced objects on opposite types trade agents first; each
/// forced object left over takes the agent of an unforced object on the
/// other type that still has quota on its own type, preferring the largest
/// remaining quota, then the lowest index.
pub fn greedy_simulate(r1: u64, r2: u64) -> Result<GreedyRun> {
    euclid_trace(r1, r2)?;
    let (n1, n) = (r1 as usize, (r1 + r2) as usize);
    let kind = |agent: usize| usize::from(agent >= n1);
    let mut holder: Vec<usize> = (0..n).collect();
    let mut left: Vec<[u64; 2]> = vec![[r1, r2]; n];
    let mut rows: Vec<Vec<AgentId>> = vec![Vec::with_capacity(n); n];
    let mut halts = Vec::new();
    let mut records = Vec::new();

    for step in 0..n {
        let forced: Vec<usize> = (0..n).filter(|&o| left[o][kind(holder[o])] == 0).collect();
        if !forced.is_empty() {
            let (mut on1, mut on2): (Vec<usize>, Vec<usize>) = forced.iter().partition(|&&o| kind(holder[o]) == 0);
            let pairs = on1.len().min(on2.len());
            for (&x, &y) in on1.iter().zip(&on2).take(pairs) {
                holder.swap(x, y);
            }
            let rest: Vec<usize> = on1.drain(pairs..).chain(on2.drain(pairs..)).collect();
            let mut moved = vec![false; n];
            for o in forced.iter() {
                moved[*o] = true;
            }
            for o in rest {
                let from = kind(holder[o]);
                let partner = (0..n)
                    .filter(|&p| !moved[p] && kind(holder[p]) != from && left[p][from] > 0)
                    .max_by_key(|&p| (left[p][from], std::cmp::Reverse(p)))
                    .ok_or_else(|| Error::Unsupported(format!("greedy run stuck at a.u. {step}")))?;
                moved[partner] = true;
                let (a, b) = (holder[o], holder[partner]);
                holder[o] = b;
                holder[partner] = a;
            }
            halts.push(step as u64);
            let mut snapshot: Vec<Record> = left.iter().map(|l| (r1 - l[0], r2 - l[1])).collect();
            snapshot.sort_unstable();
            records.push(snapshot);
        }
        for o in 0..n {
            let k = kind(holder[o]);
            if left[o][k] == 0 {
                return Err(Error::Unsupported(format!("greedy run overworks object {} at a.u. {step}", o + 1)));
            }
            left[o][k] -= 1;
            rows[o].push(AgentId::from_index(holder[o]));
        }
    }
    let matrix = AssignmentMatrix::new(rows, Rational::one())?;
    Ok(GreedyRun { matrix, halts, records })
}
