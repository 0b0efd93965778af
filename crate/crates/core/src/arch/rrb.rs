//! Register reduction and balancing: pipeline stages from merged ASAP levels.

use serde::{Deserialize, Serialize};

use super::graph::{DelayModel, UnrolledGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSchedule {
    /// Stage (1-based) of every node.
    pub stage_of: Vec<usize>,
    /// Number of stages; equals the largest stage index.
    pub depth: usize,
    /// Critical combinational delay inside each stage.
    pub per_stage_delay: Vec<f64>,
    /// ASAP level of every node.
    pub level_of: Vec<usize>,
}

/// ASAP levels: sources are level 0, every other node sits one above its
/// highest predecessor. Node ids must be a topological order.
pub fn asap_levels(g: &UnrolledGraph) -> Vec<usize> {
    let preds = g.predecessors();
    let mut level = vec![0usize; g.nodes.len()];
    for v in 0..g.nodes.len() {
        level[v] = preds[v].iter().map(|&p| level[p] + 1).max().unwrap_or(0);
    }
    level
}

/// Greedy consecutive-level merging under `clock_budget`.
///
/// Levels are appended to the open stage while the longest delay path
/// through the stage's nodes stays within budget. Feasibility of a level
/// range only shrinks when the range grows, so the greedy cut count is the
/// minimum over all consecutive merges.
pub fn rrb_schedule(g: &UnrolledGraph, clock_budget: f64) -> Result<PipelineSchedule> {
    if let Some(n) = g.nodes.iter().find(|n| n.delay > clock_budget) {
        return Err(Error::Infeasible {
            node: n.id,
            kind: n.kind.name(),
            delay: n.delay,
            budget: clock_budget,
        });
    }
    let level_of = asap_levels(g);
    let preds = g.predecessors();
    let levels = level_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut by_level = vec![Vec::new(); levels];
    for (v, &l) in level_of.iter().enumerate() {
        by_level[l].push(v);
    }

    let mut stage_of = vec![0usize; g.nodes.len()];
    let mut arrival = vec![0.0f64; g.nodes.len()];
    let mut per_stage_delay = Vec::new();
    let mut stage = 0usize;
    let mut crit = 0.0f64;

    for nodes in &by_level {
        // arrival times if this level joins the open stage
        let joined: Vec<f64> = nodes
            .iter()
            .map(|&v| {
                let start = preds[v]
                    .iter()
                    .filter(|&&p| stage > 0 && stage_of[p] == stage)
                    .map(|&p| arrival[p])
                    .fold(0.0, f64::max);
                start + g.nodes[v].delay
            })
            .collect();
        let level_crit = joined.iter().copied().fold(0.0, f64::max);
        if stage > 0 && crit.max(level_crit) <= clock_budget {
            crit = crit.max(level_crit);
            *per_stage_delay.last_mut().unwrap() = crit;
            for (&v, &a) in nodes.iter().zip(&joined) {
                stage_of[v] = stage;
                arrival[v] = a;
            }
        } else {
            stage += 1;
            crit = 0.0;
            for &v in nodes {
                stage_of[v] = stage;
                arrival[v] = g.nodes[v].delay;
                crit = crit.max(arrival[v]);
            }
            per_stage_delay.push(crit);
        }
    }
    Ok(PipelineSchedule {
        stage_of,
        depth: stage,
        per_stage_delay,
        level_of,
    })
}

/// Checks the schedule invariants against its graph.
pub fn validate_schedule(g: &UnrolledGraph, s: &PipelineSchedule, clock_budget: f64) -> bool {
    let edges_ok = g.edges.iter().all(|&(a, b)| s.stage_of[a] <= s.stage_of[b]);
    let depth_ok = s.stage_of.iter().copied().max().unwrap_or(0) == s.depth && s.per_stage_delay.len() == s.depth;
    let delay_ok = s.per_stage_delay.iter().all(|&d| d <= clock_budget);
    edges_ok && depth_ok && delay_ok
}

/// Result of fitting the delay model to a target depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Seconds per normalized delay unit.
    pub seconds_per_unit: f64,
    /// Budget, in delay units, that reaches the target at the reference clock.
    pub reference_budget: f64,
    /// Depth actually reached (can undershoot when the depth curve jumps).
    pub depth: usize,
}

impl Calibration {
    /// Budget in delay units for a clock frequency.
    pub fn budget_for(&self, clock_hz: f64) -> f64 {
        1.0 / clock_hz / self.seconds_per_unit
    }

    pub fn scaled_model(&self, model: &DelayModel) -> DelayModel {
        model.scaled(self.seconds_per_unit)
    }
}

/// Scales the delay model so the schedule depth at `reference_hz` meets
/// `target_depth`: finds the smallest budget (in delay units) whose depth is
/// at most the target and maps it onto one reference clock period.
pub fn calibrate(g: &UnrolledGraph, target_depth: usize, reference_hz: f64) -> Result<Calibration> {
    if target_depth == 0 {
        return Err(Error::Parameter("target depth must be >= 1".into()));
    }
    let max_node = g.nodes.iter().map(|n| n.delay).fold(0.0, f64::max);
    let total: f64 = g.nodes.iter().map(|n| n.delay).sum();
    let depth_at = |b: f64| rrb_schedule(g, b).map(|s| s.depth);
    let mut lo = max_node;
    let mut hi = total.max(max_node);
    if depth_at(lo)? <= target_depth {
        hi = lo;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if depth_at(mid)? <= target_depth {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
    }
    if hi <= 0.0 {
        return Err(Error::Config("delay model has no positive delays".into()));
    }
    Ok(Calibration {
        seconds_per_unit: 1.0 / reference_hz / hi,
        reference_budget: hi,
        depth: depth_at(hi)?,
    })
}
