use super::shortcut::{NodeKind, ShortcutNode};
use crate::code::PolarCode;
use crate::error::{config, Result};

/// One step of the iterative decode schedule.
///
/// `depth` is the recursion depth of the node the step belongs to; its LLRs
/// live in the depth-`depth` buffer (length `N >> depth`) and its estimate in
/// `xhat[start..start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Check-node layer feeding the left child.
    F { depth: u32, len: usize },
    /// Variable-node layer feeding the right child, using the left estimate at `start`.
    G { depth: u32, start: usize, len: usize },
    /// A leaf resolved directly from its input LLRs.
    Leaf { depth: u32, node: ShortcutNode },
    /// Feedback XOR merging the two children's estimates.
    Combine { depth: u32, start: usize, len: usize },
}

/// The pruned SC tree flattened into execution order.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodePlan {
    n: u32,
    ops: Vec<Op>,
    leaves: Vec<ShortcutNode>,
}

impl DecodePlan {
    /// Builds the plan, checking that `shortcuts` tile the code and that every
    /// leaf's pattern matches the frozen mask.
    pub fn new(code: &PolarCode, shortcuts: &[ShortcutNode]) -> Result<Self> {
        let mut ops = Vec::with_capacity(4 * shortcuts.len());
        let mut next = 0;
        build(code, shortcuts, &mut next, 0, code.len(), 0, &mut ops)?;
        if next != shortcuts.len() {
            return config(format!(
                "{} shortcut nodes left over after tiling the code",
                shortcuts.len() - next
            ));
        }
        Ok(Self {
            n: code.n(),
            ops,
            leaves: shortcuts.to_vec(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn leaves(&self) -> &[ShortcutNode] {
        &self.leaves
    }
}

fn build(
    code: &PolarCode,
    shortcuts: &[ShortcutNode],
    next: &mut usize,
    start: usize,
    len: usize,
    depth: u32,
    ops: &mut Vec<Op>,
) -> Result<()> {
    let Some(&node) = shortcuts.get(*next) else {
        return config(format!("no shortcut node covers position {start}"));
    };
    if node.start != start {
        return config(format!(
            "shortcut node at {} found where position {start} was expected",
            node.start
        ));
    }
    if node.len == len {
        let seg = &code.frozen_mask()[start..start + len];
        if !node.kind.matches(seg) {
            return config(format!(
                "{} node [{start}, {}) does not match the frozen pattern",
                node.kind.name(),
                start + len
            ));
        }
        if node.kind == NodeKind::Generic && len != 1 {
            return config("generic nodes must have length 1");
        }
        *next += 1;
        ops.push(Op::Leaf { depth, node });
        return Ok(());
    }
    if node.len > len || len == 1 {
        return config(format!(
            "shortcut node [{start}, {}) is not aligned to the recursion tree",
            start + node.len
        ));
    }
    let half = len / 2;
    ops.push(Op::F { depth, len });
    build(code, shortcuts, next, start, half, depth + 1, ops)?;
    ops.push(Op::G { depth, start, len });
    build(code, shortcuts, next, start + half, half, depth + 1, ops)?;
    ops.push(Op::Combine { depth, start, len });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{detect_shortcuts, ShortcutCaps};

    #[test]
    fn two_bit_plan_without_shortcuts() {
        let code = PolarCode::from_mask(vec![true, false]).unwrap();
        let leaves = detect_shortcuts(&code, &ShortcutCaps { repetition: 2, ..ShortcutCaps::minimal() }).unwrap();
        assert_eq!(leaves.len(), 1);
        let plan = DecodePlan::new(&code, &leaves).unwrap();
        assert_eq!(plan.ops().len(), 1);

        let generic = [
            ShortcutNode { kind: NodeKind::Generic, start: 0, len: 1 },
            ShortcutNode { kind: NodeKind::Generic, start: 1, len: 1 },
        ];
        let plan = DecodePlan::new(&code, &generic).unwrap();
        assert_eq!(plan.ops().len(), 5);
        assert!(matches!(plan.ops()[0], Op::F { depth: 0, len: 2 }));
        assert!(matches!(plan.ops()[4], Op::Combine { .. }));
    }

    #[test]
    fn rejects_inconsistent_lists() {
        let code = PolarCode::from_mask(vec![true, false, false, false]).unwrap();
        let wrong_kind = [ShortcutNode { kind: NodeKind::Rate1, start: 0, len: 4 }];
        assert!(DecodePlan::new(&code, &wrong_kind).is_err());
        let gap = [ShortcutNode { kind: NodeKind::Repetition, start: 0, len: 2 }];
        assert!(DecodePlan::new(&code, &gap).is_err());
        let misaligned = [
            ShortcutNode { kind: NodeKind::Generic, start: 0, len: 1 },
            ShortcutNode { kind: NodeKind::Rate1, start: 1, len: 2 },
            ShortcutNode { kind: NodeKind::Generic, start: 3, len: 1 },
        ];
        assert!(DecodePlan::new(&code, &misaligned).is_err());
        let extra = [
            ShortcutNode { kind: NodeKind::Spc, start: 0, len: 4 },
            ShortcutNode { kind: NodeKind::Generic, start: 4, len: 1 },
        ];
        assert!(DecodePlan::new(&code, &extra).is_err());
    }
}
