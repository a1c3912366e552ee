use crate::codes::{CodeSpec, LogicalGate};

/// Brickwork geometry: blocks of `block` logical qubits, an optional
/// entangling in-block layer, and block-pair layers acting slot by slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Architecture {
    pub block: usize,
    pub in_block: bool,
}

impl Architecture {
    pub const SURFACE: Architecture = Architecture {
        block: 1,
        in_block: false,
    };
    pub const COLOR422: Architecture = Architecture {
        block: 2,
        in_block: true,
    };

    pub fn for_code(c: &CodeSpec) -> Architecture {
        Architecture {
            block: c.kappa,
            in_block: c.transversal_table.keys().any(|g| matches!(g, LogicalGate::Cz(..))),
        }
    }

    fn in_block_step(&self, cone: &mut [bool]) {
        if !self.in_block {
            return;
        }
        for blk in cone.chunks_mut(self.block) {
            if blk.iter().any(|&c| c) {
                blk.iter_mut().for_each(|c| *c = true);
            }
        }
    }

    fn pair_step(&self, cone: &mut [bool], parity: usize) {
        let b = self.block;
        let blocks = cone.len() / b;
        for a in (parity..blocks.saturating_sub(1)).step_by(2) {
            for s in 0..b {
                let (p, q) = (a * b + s, (a + 1) * b + s);
                let hit = cone[p] || cone[q];
                cone[p] = hit;
                cone[q] = hit;
            }
        }
    }

    /// Backward light cone size of the `k`-qubit window starting at
    /// `start` after `steps` time steps on a chain of `len` qubits.
    fn cone(&self, k: usize, start: usize, steps: usize, len: usize) -> usize {
        let mut cone = vec![false; len];
        cone[start..start + k].iter_mut().for_each(|c| *c = true);
        for _ in 0..steps {
            self.pair_step(&mut cone, 1);
            self.pair_step(&mut cone, 0);
            self.in_block_step(&mut cone);
        }
        cone.iter().filter(|&&c| c).count()
    }

    /// Smallest backward light cone of a contiguous `k`-window in the bulk
    /// after `steps` time steps.
    pub fn min_cone(&self, k: usize, steps: usize) -> usize {
        let b = self.block;
        let margin = b * (2 * steps + 2) + k;
        let len = (2 * margin + 2 * b + k).div_ceil(2 * b) * 2 * b;
        (margin..margin + 2 * b)
            .map(|s| self.cone(k, s, steps, len))
            .min()
            .unwrap_or(0)
    }
}

/// Smallest number of time steps (in-block layer, even block-pair layer,
/// odd block-pair layer) after which every bulk `k`-window has at least
/// `2k` qubits in its backward light cone.
pub fn min_depth_lightcone(k: usize, arch: Architecture) -> usize {
    (0..)
        .find(|&t| arch.min_cone(k, t) >= 2 * k)
        .expect("light cones grow without bound")
}
