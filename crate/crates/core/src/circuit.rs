use alloc::string::String;
use alloc::vec::Vec;

use crate::gate::GateOp;

/// An ordered list of gate operations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    pub label: String,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, op: GateOp) {
        self.ops.push(op);
    }

    pub fn append(&mut self, other: &Circuit) {
        self.ops.extend(other.ops.iter().cloned());
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Reversed order, each operation inverted.
    pub fn inverse(&self) -> Circuit {
        let mut label = self.label.clone();
        label.push_str("^-1");
        Circuit {
            label,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    pub fn counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for op in &self.ops {
            match op {
                GateOp::Single { .. } => counts.single += 1,
                GateOp::Controlled { .. } => counts.controlled += 1,
                GateOp::SelectivePhase { .. } => counts.selective_phase += 1,
                GateOp::Block { .. } => counts.block += 1,
            }
        }
        counts
    }
}

impl Extend<GateOp> for Circuit {
    fn extend<T: IntoIterator<Item = GateOp>>(&mut self, iter: T) {
        self.ops.extend(iter);
    }
}

/// Operation counts by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateCounts {
    pub single: usize,
    pub controlled: usize,
    pub selective_phase: usize,
    pub block: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.single + self.controlled + self.selective_phase + self.block
    }
}
