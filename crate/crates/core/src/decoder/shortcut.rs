use serde::{Deserialize, Serialize};

use crate::code::PolarCode;
use crate::error::{param, Result};

/// Leaf type of the pruned SC tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    /// All positions frozen.
    Rate0,
    /// No position frozen.
    Rate1,
    /// Only the last position free.
    Repetition,
    /// Only the first position frozen.
    Spc,
    /// A single position resolved by the plain leaf rule.
    Generic,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Rate0 => "rate0",
            NodeKind::Rate1 => "rate1",
            NodeKind::Repetition => "repetition",
            NodeKind::Spc => "spc",
            NodeKind::Generic => "generic",
        }
    }

    /// True when the frozen pattern of `seg` is the one this kind decodes.
    pub fn matches(self, seg: &[bool]) -> bool {
        let len = seg.len();
        match self {
            NodeKind::Rate0 => seg.iter().all(|&f| f),
            NodeKind::Rate1 => seg.iter().all(|&f| !f),
            NodeKind::Repetition => len >= 2 && !seg[len - 1] && seg[..len - 1].iter().all(|&f| f),
            NodeKind::Spc => len >= 2 && seg[0] && seg[1..].iter().all(|&f| !f),
            NodeKind::Generic => len == 1,
        }
    }
}

/// A decoded segment `[start, start + len)` of the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutNode {
    pub kind: NodeKind,
    pub start: usize,
    pub len: usize,
}

/// Longest segment each shortcut kind may cover. `usize::MAX` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutCaps {
    pub rate0: usize,
    pub rate1: usize,
    pub repetition: usize,
    pub spc: usize,
}

impl Default for ShortcutCaps {
    fn default() -> Self {
        Self {
            rate0: usize::MAX,
            rate1: usize::MAX,
            repetition: 16,
            spc: 8,
        }
    }
}

impl ShortcutCaps {
    /// Caps of 1 / 1 / 2 / 2 keep every split down to pairs.
    pub fn minimal() -> Self {
        Self {
            rate0: 1,
            rate1: 1,
            repetition: 2,
            spc: 2,
        }
    }

    pub fn unlimited() -> Self {
        Self {
            rate0: usize::MAX,
            rate1: usize::MAX,
            repetition: usize::MAX,
            spc: usize::MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, cap, min) in [
            ("rate0", self.rate0, 1),
            ("rate1", self.rate1, 1),
            ("repetition", self.repetition, 2),
            ("spc", self.spc, 2),
        ] {
            if cap != usize::MAX && (!cap.is_power_of_two() || cap < min) {
                return param(format!("{name} cap {cap} must be a power of two >= {min}"));
            }
        }
        Ok(())
    }

    fn cap(&self, kind: NodeKind) -> usize {
        match kind {
            NodeKind::Rate0 => self.rate0,
            NodeKind::Rate1 => self.rate1,
            NodeKind::Repetition => self.repetition,
            NodeKind::Spc => self.spc,
            NodeKind::Generic => 1,
        }
    }
}

/// Leaves of the pruned recursion tree, in decoding order.
///
/// Recursion stops at the first (largest) segment whose frozen pattern is a
/// shortcut within its cap. Single positions that remain become `Generic`.
pub fn detect_shortcuts(code: &PolarCode, caps: &ShortcutCaps) -> Result<Vec<ShortcutNode>> {
    caps.validate()?;
    let mut out = Vec::new();
    walk(code.frozen_mask(), 0, code.len(), caps, &mut out);
    Ok(out)
}

fn walk(mask: &[bool], start: usize, len: usize, caps: &ShortcutCaps, out: &mut Vec<ShortcutNode>) {
    let seg = &mask[start..start + len];
    if len >= 2 {
        for kind in [NodeKind::Rate0, NodeKind::Rate1, NodeKind::Repetition, NodeKind::Spc] {
            if len <= caps.cap(kind) && kind.matches(seg) {
                out.push(ShortcutNode { kind, start, len });
                return;
            }
        }
    } else {
        out.push(ShortcutNode {
            kind: NodeKind::Generic,
            start,
            len,
        });
        return;
    }
    walk(mask, start, len / 2, caps, out);
    walk(mask, start + len / 2, len / 2, caps, out);
}
