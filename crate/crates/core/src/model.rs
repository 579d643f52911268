//! Problems, schemes and assignment matrices.
//!
//! Agents are numbered `1..=n`, flattened class by class in the order the
//! classes are listed. Objects are numbered `1..=n` as well, and object `i`
//! starts out with agent `i`. Scheme times are exact hours.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A 1-based agent label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub usize);

impl AgentId {
    pub fn index(self) -> usize {
        self.0 - 1
    }

    pub fn from_index(index: usize) -> Self {
        AgentId(index + 1)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0)
    }
}

/// `count` identical agents that each need `completion_time` hours to build
/// one object alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentClass {
    #[serde(rename = "time")]
    pub completion_time: Rational,
    pub count: u64,
}

impl AgentClass {
    pub fn new(completion_time: Rational, count: u64) -> Result<Self> {
        if !completion_time.is_positive() {
            return Err(Error::InvalidProblem(format!("completion time must be positive, got {completion_time}")));
        }
        if count == 0 {
            return Err(Error::InvalidProblem("class count must be at least 1".into()));
        }
        Ok(Self { completion_time, count })
    }

    /// Objects per hour for one agent of this class.
    pub fn rate(&self) -> Rational {
        self.completion_time.recip().expect("completion time is positive")
    }
}

#[derive(Deserialize)]
struct RawSpec {
    classes: Vec<AgentClass>,
    #[serde(default)]
    objects: Option<u64>,
}

/// A production order: agent classes plus the number of objects `p >= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ProblemSpec {
    classes: Vec<AgentClass>,
    objects: u64,
}

impl TryFrom<RawSpec> for ProblemSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let classes =
            raw.classes.into_iter().map(|c| AgentClass::new(c.completion_time, c.count)).collect::<Result<Vec<_>>>()?;
        ProblemSpec::with_objects(classes, raw.objects)
    }
}

impl ProblemSpec {
    /// Classes with `p = n`.
    pub fn new(classes: Vec<AgentClass>) -> Result<Self> {
        Self::with_objects(classes, None)
    }

    pub fn with_objects(classes: Vec<AgentClass>, objects: Option<u64>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidProblem("at least one agent class is required".into()));
        }
        for c in &classes {
            AgentClass::new(c.completion_time.clone(), c.count)?;
        }
        for (i, a) in classes.iter().enumerate() {
            if classes[..i].iter().any(|b| b.completion_time == a.completion_time) {
                return Err(Error::InvalidProblem(format!(
                    "completion time {} appears in two classes",
                    a.completion_time
                )));
            }
        }
        let n = classes
            .iter()
            .try_fold(0u64, |acc, c| acc.checked_add(c.count))
            .ok_or_else(|| Error::InvalidProblem("agent count overflows".into()))?;
        let objects = objects.unwrap_or(n);
        if objects < n {
            return Err(Error::InvalidProblem(format!("object count {objects} is below the agent count {n}")));
        }
        Ok(Self { classes, objects })
    }

    /// Build from `(time, count)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, u64)>,
    {
        let classes = pairs.into_iter().map(|(t, k)| AgentClass::new(t, k)).collect::<Result<Vec<_>>>()?;
        Self::new(classes)
    }

    /// One agent per listed completion time.
    pub fn from_times(times: &[Rational]) -> Result<Self> {
        Self::from_pairs(times.iter().map(|t| (t.clone(), 1)))
    }

    pub fn classes(&self) -> &[AgentClass] {
        &self.classes
    }

    /// Number of agents `n`.
    pub fn agents(&self) -> usize {
        self.classes.iter().map(|c| c.count as usize).sum()
    }

    /// Number of objects `p`.
    pub fn objects(&self) -> u64 {
        self.objects
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class index (0-based) of every agent, in agent order.
    pub fn agent_classes(&self) -> Vec<usize> {
        self.classes.iter().enumerate().flat_map(|(i, c)| std::iter::repeat_n(i, c.count as usize)).collect()
    }

    pub fn class_of(&self, agent: AgentId) -> Option<usize> {
        if agent.0 == 0 {
            return None;
        }
        let mut remaining = agent.index();
        for (i, c) in self.classes.iter().enumerate() {
            if remaining < c.count as usize {
                return Some(i);
            }
            remaining -= c.count as usize;
        }
        None
    }

    /// The completion time of every agent, in agent order.
    pub fn expanded_times(&self) -> Vec<Rational> {
        self.agent_classes().into_iter().map(|c| self.classes[c].completion_time.clone()).collect()
    }

    /// Same classes, `p = n`.
    pub fn square(&self) -> Self {
        Self { classes: self.classes.clone(), objects: self.agents() as u64 }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("problem JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }
}

/// One agent working one object over `[start, end)` hours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub agent: AgentId,
    pub start: Rational,
    pub end: Rational,
}

impl Segment {
    pub fn new(agent: AgentId, start: Rational, end: Rational) -> Self {
        Self { agent, start, end }
    }

    pub fn duration(&self) -> Rational {
        &self.end - &self.start
    }
}

/// Per-object ordered work segments, in hours.
///
/// Construction checks that each segment is non-empty, agent ids are
/// positive, and that the segments of one object are ordered and do not
/// overlap. Adjacent segments of the same agent are merged, so two schemes
/// describing the same work compare equal. Continuity, agent double-booking
/// and optimality are questions for the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scheme {
    objects: Vec<Vec<Segment>>,
}

#[derive(Deserialize)]
struct RawScheme {
    objects: Vec<Vec<Segment>>,
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawScheme::deserialize(d)?;
        Scheme::new(raw.objects).map_err(serde::de::Error::custom)
    }
}

impl Scheme {
    pub fn new(objects: Vec<Vec<Segment>>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::MalformedScheme("scheme has no objects".into()));
        }
        let mut merged = Vec::with_capacity(objects.len());
        for (o, segments) in objects.into_iter().enumerate() {
            if segments.is_empty() {
                return Err(Error::MalformedScheme(format!("object {} has no segments", o + 1)));
            }
            let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
            for seg in segments {
                if seg.agent.0 == 0 {
                    return Err(Error::MalformedScheme("agent ids start at 1".into()));
                }
                if seg.start >= seg.end {
                    return Err(Error::MalformedScheme(format!(
                        "object {}: segment [{}, {}) is empty or reversed",
                        o + 1,
                        seg.start,
                        seg.end
                    )));
                }
                if seg.start.is_negative() {
                    return Err(Error::MalformedScheme(format!("object {}: segment starts before time 0", o + 1)));
                }
                match out.last_mut() {
                    Some(prev) if seg.start < prev.end => {
                        return Err(Error::MalformedScheme(format!(
                            "object {}: segments overlap or are out of order at {}",
                            o + 1,
                            seg.start
                        )));
                    }
                    Some(prev) if prev.agent == seg.agent && prev.end == seg.start => {
                        prev.end = seg.end;
                    }
                    _ => out.push(seg),
                }
            }
            merged.push(out);
        }
        Ok(Self { objects: merged })
    }

    pub fn objects(&self) -> &[Vec<Segment>] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Latest segment end over all objects.
    pub fn duration(&self) -> Rational {
        self.objects.iter().filter_map(|segs| segs.last()).map(|s| s.end.clone()).max().unwrap_or_default()
    }

    /// Largest agent id mentioned.
    pub fn max_agent(&self) -> usize {
        self.objects.iter().flatten().map(|s| s.agent.0).max().unwrap_or(0)
    }

    /// Distinct interior instants at which some object changes hands or
    /// starts or stops being worked, sorted ascending.
    pub fn halt_instants(&self) -> Vec<Rational> {
        let end = self.duration();
        let mut instants: Vec<Rational> = self
            .objects
            .iter()
            .flat_map(|segs| segs.iter().flat_map(|s| [s.start.clone(), s.end.clone()]))
            .filter(|t| t.is_positive() && *t < end)
            .collect();
        instants.sort();
        instants.dedup();
        instants
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("scheme JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }
}

/// Object-by-interval grid of agent ids: row `i` is object `i + 1`, column
/// `j` is the `j + 1`-th atomic unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentMatrix {
    rows: Vec<Vec<AgentId>>,
    au_hours: Rational,
}

impl AssignmentMatrix {
    /// Checks squareness, that `au_hours > 0`, and that every column is a
    /// permutation of `1..=n`.
    pub fn new(rows: Vec<Vec<AgentId>>, au_hours: Rational) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix is empty".into()));
        }
        if !au_hours.is_positive() {
            return Err(Error::InvalidMatrix(format!("atomic unit must be positive, got {au_hours}")));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
        }
        let mut seen = vec![usize::MAX; n];
        for col in 0..n {
            for row in &rows {
                let a = row[col].0;
                if a == 0 || a > n {
                    return Err(Error::InvalidMatrix(format!("column {}: agent id {a} outside 1..={n}", col + 1)));
                }
                if seen[a - 1] == col {
                    return Err(Error::InvalidMatrix(format!("column {}: agent {a} works two objects", col + 1)));
                }
                seen[a - 1] = col;
            }
        }
        Ok(Self { rows, au_hours })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn au_hours(&self) -> &Rational {
        &self.au_hours
    }

    pub fn rows(&self) -> &[Vec<AgentId>] {
        &self.rows
    }

    pub fn get(&self, object: usize, interval: usize) -> AgentId {
        self.rows[object][interval]
    }

    pub fn column(&self, interval: usize) -> Vec<AgentId> {
        self.rows.iter().map(|r| r[interval]).collect()
    }

    /// Column boundaries `j` (1-based a.u. instants) where some row changes.
    pub fn halt_instants(&self) -> Vec<usize> {
        let n = self.size();
        (1..n).filter(|&j| self.rows.iter().any(|r| r[j - 1] != r[j])).collect()
    }

    /// Same grid with rows reordered: row `i` of the result is row
    /// `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let n = self.size();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidMatrix("row order is not a permutation".into()));
        }
        Ok(Self { rows: order.iter().map(|&i| self.rows[i].clone()).collect(), au_hours: self.au_hours.clone() })
    }
}

/// Time worked on each object by each agent class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkRecord {
    pub unit: TimeUnit,
    /// `per_object[o][c]`: time object `o + 1` spent with class `c + 1`.
    pub per_object: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    Hours,
    AtomicUnits,
}

impl WorkRecord {
    pub fn totals(&self) -> Vec<Rational> {
        self.per_object.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Per-class time per object accumulated up to `until` hours.
pub fn work_record_until(
    spec: &ProblemSpec,
    scheme: &Scheme,
    until: &Rational,
) -> Result<Vec<BTreeMap<usize, Rational>>> {
    scheme
        .objects()
        .iter()
        .map(|segs| {
            let mut by_class = BTreeMap::new();
            for s in segs {
                if &s.start >= until {
                    break;
                }
                let class = spec
                    .class_of(s.agent)
                    .ok_or_else(|| Error::MalformedScheme(format!("unknown agent {}", s.agent)))?;
                let end = if &s.end < until { &s.end } else { until };
                *by_class.entry(class).or_insert_with(Rational::zero) += end - &s.start;
            }
            Ok(by_class)
        })
        .collect()
}
