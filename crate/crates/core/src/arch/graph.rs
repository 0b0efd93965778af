//! Unrolled dataflow graph of one SC decode.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::PolarCode;
use crate::decoder::{DecodePlan, NodeKind, Op, ShortcutNode};
use crate::error::{Error, Result};

/// Kind of a hardware block in the unrolled decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitKind {
    FLayer,
    GLayer,
    /// Length-1 leaf; frozen leaves are constants.
    Decision { frozen: bool },
    Shortcut(NodeKind),
    FeedbackXor,
}

impl UnitKind {
    pub fn name(&self) -> String {
        match self {
            UnitKind::FLayer => "f-layer".into(),
            UnitKind::GLayer => "g-layer".into(),
            UnitKind::Decision { frozen: true } => "frozen-decision".into(),
            UnitKind::Decision { frozen: false } => "decision".into(),
            UnitKind::Shortcut(k) => k.name().into(),
            UnitKind::FeedbackXor => "feedback-xor".into(),
        }
    }
}

/// Combinational delay per block kind, in normalized cell-delay units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DelayModel {
    pub f_layer: f64,
    pub g_layer: f64,
    pub decision: f64,
    /// Rate-1 blocks are parallel sign decisions.
    pub rate1: f64,
    /// Rate-0 blocks are constants.
    pub rate0: f64,
    /// Repetition(M) = `repetition_per_stage * log2(M) + repetition_base`.
    pub repetition_per_stage: f64,
    pub repetition_base: f64,
    /// SPC(M) = `spc_per_stage * log2(M) + spc_base`.
    pub spc_per_stage: f64,
    pub spc_base: f64,
    pub feedback_xor: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        Self {
            f_layer: 1.0,
            g_layer: 1.2,
            decision: 0.5,
            rate1: 0.5,
            rate0: 0.0,
            repetition_per_stage: 0.5,
            repetition_base: 0.5,
            spc_per_stage: 0.5,
            spc_base: 1.0,
            feedback_xor: 0.3,
        }
    }
}

impl DelayModel {
    /// Parses a `{kind: delay}` map; unknown kinds are configuration errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("delay model: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.f_layer,
            self.g_layer,
            self.decision,
            self.rate1,
            self.rate0,
            self.repetition_per_stage,
            self.repetition_base,
            self.spc_per_stage,
            self.spc_base,
            self.feedback_xor,
        ];
        if all.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::Config("delays must be finite and non-negative".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            f_layer: self.f_layer * s,
            g_layer: self.g_layer * s,
            decision: self.decision * s,
            rate1: self.rate1 * s,
            rate0: self.rate0 * s,
            repetition_per_stage: self.repetition_per_stage * s,
            repetition_base: self.repetition_base * s,
            spc_per_stage: self.spc_per_stage * s,
            spc_base: self.spc_base * s,
            feedback_xor: self.feedback_xor * s,
        }
    }

    pub fn delay(&self, kind: UnitKind, len: usize) -> f64 {
        let stages = f64::from(len.max(1).trailing_zeros());
        match kind {
            UnitKind::FLayer => self.f_layer,
            UnitKind::GLayer => self.g_layer,
            UnitKind::Decision { frozen: true } => 0.0,
            UnitKind::Decision { frozen: false } => self.decision,
            UnitKind::Shortcut(NodeKind::Rate0) => self.rate0,
            UnitKind::Shortcut(NodeKind::Rate1) => self.rate1,
            UnitKind::Shortcut(NodeKind::Repetition) => self.repetition_per_stage * stages + self.repetition_base,
            UnitKind::Shortcut(NodeKind::Spc) => self.spc_per_stage * stages + self.spc_base,
            UnitKind::Shortcut(NodeKind::Generic) => self.decision,
            UnitKind::FeedbackXor => self.feedback_xor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub kind: UnitKind,
    /// Length of the code segment the block serves.
    pub len: usize,
    pub delay: f64,
}

/// Acyclic dataflow graph; node ids are a topological order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UnrolledGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<(usize, usize)>,
}

impl UnrolledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, kind: UnitKind, len: usize, delay: f64) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GraphNode { id, kind, len, delay });
        id
    }

    /// Edges must point forward (producer id < consumer id).
    pub fn add_edge(&mut self, from: usize, to: usize) {
        debug_assert!(from < to);
        self.edges.push((from, to));
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            p[b].push(a);
        }
        p
    }

    /// Nodes with no consumers.
    pub fn terminals(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.nodes.len()];
        for &(a, _) in &self.edges {
            has_out[a] = true;
        }
        (0..self.nodes.len()).filter(|&i| !has_out[i]).collect()
    }

    pub fn kind_counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for n in &self.nodes {
            *m.entry(n.kind.name()).or_insert(0) += 1;
        }
        m
    }
}

/// Builds the unrolled graph of one frame's decode.
///
/// Every tree node that is split contributes an F layer, a G layer and a
/// feedback XOR; every leaf contributes one decision block. A node's input
/// producer feeds both its F and G layers (or its leaf block), the left
/// child's result feeds the G layer and the XOR, and the right child's
/// result feeds the XOR.
pub fn build_unrolled_graph(code: &PolarCode, shortcuts: &[ShortcutNode], delays: &DelayModel) -> Result<UnrolledGraph> {
    delays.validate()?;
    let plan = DecodePlan::new(code, shortcuts)?;
    let mut g = UnrolledGraph::new();
    struct Frame {
        input: Option<usize>,
        left: Option<usize>,
    }
    let mut stack: Vec<Frame> = Vec::new();
    // producer of the LLRs entering the node currently being opened
    let mut pending_input: Option<usize> = None;
    let mut last_result: Option<usize> = None;

    for op in plan.ops() {
        match *op {
            Op::F { len, .. } => {
                let f = g.add_node(UnitKind::FLayer, len, delays.delay(UnitKind::FLayer, len));
                if let Some(p) = pending_input {
                    g.add_edge(p, f);
                }
                stack.push(Frame {
                    input: pending_input,
                    left: None,
                });
                pending_input = Some(f);
            }
            Op::G { len, .. } => {
                let top = stack.last_mut().expect("G inside a split");
                let left = last_result.expect("left child decoded");
                let gn = g.add_node(UnitKind::GLayer, len, delays.delay(UnitKind::GLayer, len));
                if let Some(p) = top.input {
                    g.add_edge(p, gn);
                }
                g.add_edge(left, gn);
                top.left = Some(left);
                pending_input = Some(gn);
            }
            Op::Leaf { node, .. } => {
                let kind = if node.kind == NodeKind::Generic {
                    UnitKind::Decision {
                        frozen: code.is_frozen(node.start),
                    }
                } else {
                    UnitKind::Shortcut(node.kind)
                };
                let id = g.add_node(kind, node.len, delays.delay(kind, node.len));
                if let Some(p) = pending_input {
                    g.add_edge(p, id);
                }
                last_result = Some(id);
            }
            Op::Combine { len, .. } => {
                let top = stack.pop().expect("combine closes a split");
                let right = last_result.expect("right child decoded");
                let x = g.add_node(UnitKind::FeedbackXor, len, delays.delay(UnitKind::FeedbackXor, len));
                g.add_edge(top.left.expect("left child decoded"), x);
                g.add_edge(right, x);
                last_result = Some(x);
            }
        }
    }
    Ok(g)
}
