// SPDX-License-Identifier: Apache-2.0

//! Index map of the one-excitation subspace.
//!
//! Layout: the shared ground/sink state at index 0, then one block per node:
//! qubit, `groups` spin-excited states, optionally `groups` optically excited
//! spin states, and the cavity photon.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisState {
    /// Everything in its ground state; all decay channels end here.
    GroundSink,
    QubitExcited(usize),
    /// `SpinExcited(node, group)`: one excitation in the spin-flip level of a group.
    SpinExcited(usize, usize),
    /// `SpinOptical(node, group)`: one excitation in the optical excited level.
    /// Only present in bases built with [`OesBasis::with_optical_levels`].
    SpinOptical(usize, usize),
    CavityPhoton(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OesBasis {
    nodes: usize,
    groups: usize,
    optical: bool,
}

impl OesBasis {
    pub fn new(nodes: usize, groups: usize) -> Result<Self> {
        if !(1..=2).contains(&nodes) {
            return Err(Error::config(format!("node count must be 1 or 2, got {nodes}")));
        }
        if groups == 0 {
            return Err(Error::config("spin group count must be at least 1"));
        }
        Ok(Self { nodes, groups, optical: false })
    }

    pub fn single(groups: usize) -> Result<Self> {
        Self::new(1, groups)
    }

    pub fn pair(groups: usize) -> Result<Self> {
        Self::new(2, groups)
    }

    /// Single-node basis that also carries the optical excited level of every
    /// group (dimension `2 * groups + 3`).
    pub fn with_optical_levels(groups: usize) -> Result<Self> {
        let mut b = Self::single(groups)?;
        b.optical = true;
        Ok(b)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn has_optical_levels(&self) -> bool {
        self.optical
    }

    fn block(&self) -> usize {
        if self.optical {
            2 * self.groups + 2
        } else {
            self.groups + 2
        }
    }

    pub fn dim(&self) -> usize {
        1 + self.nodes * self.block()
    }

    pub fn sink(&self) -> usize {
        0
    }

    pub fn qubit(&self, node: usize) -> usize {
        debug_assert!(node < self.nodes);
        1 + node * self.block()
    }

    pub fn spin(&self, node: usize, group: usize) -> usize {
        debug_assert!(group < self.groups);
        self.qubit(node) + 1 + group
    }

    /// Panics if the basis has no optical levels.
    pub fn optical(&self, node: usize, group: usize) -> usize {
        assert!(self.optical, "basis has no optical excited levels");
        debug_assert!(group < self.groups);
        self.qubit(node) + 1 + self.groups + group
    }

    pub fn cavity(&self, node: usize) -> usize {
        self.qubit(node) + self.block() - 1
    }

    pub fn spin_range(&self, node: usize) -> std::ops::Range<usize> {
        let s = self.spin(node, 0);
        s..s + self.groups
    }

    pub fn index(&self, state: BasisState) -> Result<usize> {
        let node_ok = |l: usize| {
            if l < self.nodes {
                Ok(())
            } else {
                Err(Error::config(format!("node {l} outside a {}-node basis", self.nodes)))
            }
        };
        let group_ok = |j: usize| {
            if j < self.groups {
                Ok(())
            } else {
                Err(Error::config(format!("group {j} outside {} groups", self.groups)))
            }
        };
        match state {
            BasisState::GroundSink => Ok(0),
            BasisState::QubitExcited(l) => node_ok(l).map(|_| self.qubit(l)),
            BasisState::CavityPhoton(l) => node_ok(l).map(|_| self.cavity(l)),
            BasisState::SpinExcited(l, j) => {
                node_ok(l)?;
                group_ok(j)?;
                Ok(self.spin(l, j))
            }
            BasisState::SpinOptical(l, j) => {
                node_ok(l)?;
                group_ok(j)?;
                if !self.optical {
                    return Err(Error::config("basis has no optical excited levels"));
                }
                Ok(self.optical(l, j))
            }
        }
    }

    pub fn state(&self, index: usize) -> Option<BasisState> {
        if index == 0 {
            return Some(BasisState::GroundSink);
        }
        if index >= self.dim() {
            return None;
        }
        let k = index - 1;
        let node = k / self.block();
        let off = k % self.block();
        let g = self.groups;
        Some(if off == 0 {
            BasisState::QubitExcited(node)
        } else if off == self.block() - 1 {
            BasisState::CavityPhoton(node)
        } else if off <= g {
            BasisState::SpinExcited(node, off - 1)
        } else {
            BasisState::SpinOptical(node, off - 1 - g)
        })
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.dim()).map(|i| self.state(i).expect("index within dimension"))
    }
}
