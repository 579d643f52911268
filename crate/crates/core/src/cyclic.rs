//! The n-cyclic scheme and the constructions built around it: gcd reduction,
//! extension to `p > n` objects, and direct sums of schemes sharing a
//! harmonic optimum.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::matrix_to_scheme;
use crate::harmonic::{atomic_unit, optimum_time};
use crate::model::{AgentClass, AgentId, AssignmentMatrix, ProblemSpec, Scheme, Segment};
use crate::rational::Rational;
use crate::verifier::validate;

fn require_square(spec: &ProblemSpec) -> Result<()> {
    if spec.objects() != spec.agents() as u64 {
        return Err(Error::InvalidProblem(format!(
            "expected as many objects as agents ({}), got {}",
            spec.agents(),
            spec.objects()
        )));
    }
    Ok(())
}

/// `C_n`: at the end of every a.u. each agent passes its object to the next
/// agent, so object `i` is worked in turn by agents `i, i+1, …, i-1`.
pub fn build_cyclic(spec: &ProblemSpec) -> Result<AssignmentMatrix> {
    require_square(spec)?;
    let n = spec.agents();
    let rows = (0..n).map(|i| (0..n).map(|j| AgentId::from_index((i + j) % n)).collect()).collect();
    AssignmentMatrix::new(rows, atomic_unit(spec))
}

/// Fraction of `object` (1-based) built by `time` hours.
pub fn object_progress(scheme: &Scheme, spec: &ProblemSpec, object: usize, time: &Rational) -> Result<Rational> {
    let segments = object.checked_sub(1).and_then(|o| scheme.objects().get(o)).ok_or(Error::UnknownObject(object))?;
    if time.is_negative() || time > &scheme.duration() {
        return Err(Error::TimeOutOfRange(time.to_string()));
    }
    let mut done = Rational::zero();
    for s in segments {
        if &s.start >= time {
            break;
        }
        let class =
            spec.class_of(s.agent).ok_or_else(|| Error::MalformedScheme(format!("unknown agent {}", s.agent)))?;
        let end = if &s.end < time { &s.end } else { time };
        done += (end - &s.start) * spec.classes()[class].rate();
    }
    Ok(done)
}

/// Group agents and objects into `d`-sets, `d = gcd(k_1, …, k_m)`.
/// Returns the reduced problem and `d`.
pub fn gcd_reduce(spec: &ProblemSpec) -> Result<(ProblemSpec, u64)> {
    require_square(spec)?;
    let d = spec.classes().iter().fold(0u64, |acc, c| acc.gcd(&c.count));
    if d == 1 {
        return Ok((spec.clone(), 1));
    }
    let classes = spec
        .classes()
        .iter()
        .map(|c| AgentClass::new(c.completion_time.clone(), c.count / d))
        .collect::<Result<Vec<_>>>()?;
    Ok((ProblemSpec::new(classes)?, d))
}

/// `p = rounds · n + remainder` objects: the base scheme repeated `rounds`
/// times, then a cyclic scheme on the `remainder` fastest agents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductionPlan {
    pub rounds: u64,
    pub remainder: u64,
    pub base_scheme: Scheme,
    pub base_time: Rational,
    /// Problem solved by the remainder agents, in their local numbering.
    pub remainder_spec: Option<ProblemSpec>,
    pub remainder_scheme: Option<Scheme>,
    /// Global id of each remainder agent, indexed by local id − 1.
    pub remainder_agents: Vec<AgentId>,
    pub total_time: Rational,
}

pub fn extend_to_p(spec: &ProblemSpec, base: &Scheme) -> Result<ProductionPlan> {
    let square = spec.square();
    if !validate(&square, base)?.optimal {
        return Err(Error::NotOptimal);
    }
    let n = spec.agents() as u64;
    let p = spec.objects();
    let (rounds, remainder) = p.div_rem(&n);
    let base_time = optimum_time(&square);
    let mut total_time = Rational::from(rounds) * &base_time;

    let mut plan = ProductionPlan {
        rounds,
        remainder,
        base_scheme: base.clone(),
        base_time,
        remainder_spec: None,
        remainder_scheme: None,
        remainder_agents: Vec::new(),
        total_time: Rational::zero(),
    };
    if remainder > 0 {
        // fastest first; within a class, lowest id first
        let classes = spec.agent_classes();
        let mut agents: Vec<usize> = (0..classes.len()).collect();
        agents.sort_by(|&a, &b| {
            spec.classes()[classes[a]].completion_time.cmp(&spec.classes()[classes[b]].completion_time).then(a.cmp(&b))
        });
        agents.truncate(remainder as usize);

        let mut sub_classes: Vec<AgentClass> = Vec::new();
        let mut last_class = None;
        for &a in &agents {
            if last_class == Some(classes[a]) {
                sub_classes.last_mut().expect("class pushed").count += 1;
            } else {
                sub_classes.push(AgentClass::new(spec.classes()[classes[a]].completion_time.clone(), 1)?);
                last_class = Some(classes[a]);
            }
        }
        let sub_spec = ProblemSpec::new(sub_classes)?;
        let sub_scheme = matrix_to_scheme(&build_cyclic(&sub_spec)?);
        total_time += optimum_time(&sub_spec);
        plan.remainder_agents = agents.into_iter().map(AgentId::from_index).collect();
        plan.remainder_spec = Some(sub_spec);
        plan.remainder_scheme = Some(sub_scheme);
    }
    plan.total_time = total_time;
    Ok(plan)
}

/// Run optimal schemes with a common harmonic optimum side by side.
///
/// Agents and objects are renumbered part by part in input order. Classes of
/// the combined problem are the distinct completion times in order of first
/// appearance; parts sharing a time pool into one class.
pub fn direct_sum(parts: &[(ProblemSpec, Scheme)]) -> Result<(ProblemSpec, Scheme)> {
    let (first, _) = parts.first().ok_or_else(|| Error::IncompatibleParts("no parts given".into()))?;
    let h = optimum_time(first);
    for (i, (spec, scheme)) in parts.iter().enumerate() {
        require_square(spec)?;
        let hi = optimum_time(spec);
        if hi != h {
            return Err(Error::IncompatibleParts(format!("part {} has harmonic optimum {hi}, part 1 has {h}", i + 1)));
        }
        if scheme.object_count() != spec.agents() || scheme.max_agent() > spec.agents() {
            return Err(Error::IncompatibleParts(format!("part {} scheme does not match its problem", i + 1)));
        }
    }

    let mut times: Vec<Rational> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    // global class of each (part, local class)
    let mut class_map: Vec<Vec<usize>> = Vec::new();
    for (spec, _) in parts {
        let mut local = Vec::new();
        for c in spec.classes() {
            let g = match times.iter().position(|t| *t == c.completion_time) {
                Some(g) => g,
                None => {
                    times.push(c.completion_time.clone());
                    counts.push(0);
                    times.len() - 1
                }
            };
            counts[g] += c.count;
            local.push(g);
        }
        class_map.push(local);
    }
    let combined = ProblemSpec::from_pairs(times.into_iter().zip(counts.iter().copied()))?;
    let class_start: Vec<usize> = counts
        .iter()
        .scan(0usize, |acc, &k| {
            let start = *acc;
            *acc += k as usize;
            Some(start)
        })
        .collect();

    let mut used = vec![0usize; counts.len()];
    let mut objects = Vec::new();
    for ((spec, scheme), local_to_global) in parts.iter().zip(&class_map) {
        // global id of each local agent
        let mut ids = Vec::with_capacity(spec.agents());
        for (c, class) in spec.classes().iter().enumerate() {
            let g = local_to_global[c];
            for r in 0..class.count as usize {
                ids.push(AgentId::from_index(class_start[g] + used[g] + r));
            }
            used[g] += class.count as usize;
        }
        for segs in scheme.objects() {
            objects.push(
                segs.iter().map(|s| Segment::new(ids[s.agent.index()], s.start.clone(), s.end.clone())).collect(),
            );
        }
    }
    Ok((combined, Scheme::new(objects)?))
}
