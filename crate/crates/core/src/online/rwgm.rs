use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MatchError, OnlineMatcher, Served};
use crate::hst::{HstTree, NodeId};
use crate::metric::PointMapping;

/// How Pick-a-leaf descends from a green node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionPolicy {
    /// Uniform over green children at every level.
    #[default]
    Uniform,
    /// Child chosen with probability proportional to its unassigned servers.
    /// Provided for comparison only.
    Proportional,
}

/// Outcome of one RWGM step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    /// Leaf whose server was used.
    pub leaf: NodeId,
    /// Lowest green ancestor of the request, i.e. the turning point of the
    /// pair; `None` when the request was served at its own leaf.
    pub meet: Option<NodeId>,
    /// Tree distance between request and server, in metric units.
    pub cost: f64,
}

/// Mutable state of one RWGM episode on a fixed tree.
///
/// A node is green while its subtree still holds an unassigned server.
/// `remaining[v]` counts unassigned servers below `v`; for a leaf that is its
/// remaining multiplicity.
#[derive(Debug, Clone)]
pub struct RwgmState<'t> {
    tree: &'t HstTree,
    remaining: Vec<u32>,
    green: Vec<bool>,
    served: u64,
    total: u64,
    rng: ChaCha8Rng,
    policy: SelectionPolicy,
}

impl<'t> RwgmState<'t> {
    pub fn new(tree: &'t HstTree, rng: ChaCha8Rng, policy: SelectionPolicy) -> Result<Self, MatchError> {
        let total = tree.total_multiplicity();
        if total == 0 {
            return Err(MatchError::NoServers);
        }
        let remaining = subtree_counts(tree, tree.multiplicities());
        let green = remaining.iter().map(|&c| c > 0).collect();
        Ok(Self {
            tree,
            remaining,
            green,
            served: 0,
            total,
            rng,
            policy,
        })
    }

    pub fn with_seed(tree: &'t HstTree, seed: u64) -> Result<Self, MatchError> {
        Self::new(tree, ChaCha8Rng::seed_from_u64(seed), SelectionPolicy::Uniform)
    }

    pub fn tree(&self) -> &'t HstTree {
        self.tree
    }

    pub fn is_green(&self, node: NodeId) -> bool {
        self.green[node]
    }

    pub fn green_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.green.len()).filter(|&v| self.green[v])
    }

    /// Unassigned servers at `leaf`.
    pub fn remaining_multiplicity(&self, leaf: NodeId) -> u32 {
        self.remaining[leaf]
    }

    pub fn served(&self) -> u64 {
        self.served
    }

    pub fn unassigned(&self) -> u64 {
        self.total - self.served
    }

    /// Serves a request located at `request_leaf`.
    pub fn serve(&mut self, request_leaf: NodeId) -> Result<Assignment, MatchError> {
        let node = self
            .tree
            .nodes()
            .get(request_leaf)
            .ok_or(crate::hst::HstError::NoSuchNode(request_leaf))?;
        if !node.is_leaf() {
            return Err(crate::hst::HstError::NotALeaf(request_leaf).into());
        }
        if self.served == self.total {
            return Err(MatchError::Exhausted);
        }
        let mut u = request_leaf;
        while !self.green[u] {
            u = self.tree.node(u).parent.ok_or(MatchError::Exhausted)?;
        }
        let leaf = self.pick_a_leaf(u)?;
        self.consume(leaf);
        let (meet, cost) = if leaf == request_leaf {
            (None, 0.0)
        } else {
            (Some(u), self.tree.meet_distance(self.tree.node(u).height))
        };
        Ok(Assignment { leaf, meet, cost })
    }

    /// Descends from green node `u` to a leaf with an unassigned server,
    /// choosing among green children according to the policy. One integer is
    /// drawn per level that offers a choice of children.
    pub fn pick_a_leaf(&mut self, u: NodeId) -> Result<NodeId, MatchError> {
        if !self.green.get(u).copied().unwrap_or(false) {
            return Err(MatchError::NotGreen(u));
        }
        let mut v = u;
        let mut candidates = Vec::new();
        while !self.tree.node(v).is_leaf() {
            candidates.clear();
            candidates.extend(self.tree.node(v).children.iter().copied().filter(|&c| self.green[c]));
            v = match self.policy {
                SelectionPolicy::Uniform => candidates[self.rng.gen_range(0..candidates.len())],
                SelectionPolicy::Proportional => {
                    let total: u32 = candidates.iter().map(|&c| self.remaining[c]).sum();
                    let mut ticket = self.rng.gen_range(0..total);
                    let mut chosen = candidates[candidates.len() - 1];
                    for &c in &candidates {
                        if ticket < self.remaining[c] {
                            chosen = c;
                            break;
                        }
                        ticket -= self.remaining[c];
                    }
                    chosen
                }
            };
        }
        Ok(v)
    }

    fn consume(&mut self, leaf: NodeId) {
        let mut v = Some(leaf);
        while let Some(id) = v {
            self.remaining[id] -= 1;
            if self.remaining[id] == 0 {
                self.green[id] = false;
            }
            v = self.tree.node(id).parent;
        }
        self.served += 1;
    }

    /// Recomputes the green set from leaf multiplicities alone and compares
    /// it with the incrementally maintained one.
    pub fn green_is_consistent(&self) -> bool {
        let leaf_counts: Vec<u32> = (0..self.remaining.len())
            .map(|v| {
                if self.tree.node(v).is_leaf() {
                    self.remaining[v]
                } else {
                    0
                }
            })
            .collect();
        let fresh = subtree_counts(self.tree, &leaf_counts);
        fresh
            .iter()
            .zip(&self.green)
            .all(|(&count, &green)| (count > 0) == green)
            && fresh == self.remaining
    }
}

fn subtree_counts(tree: &HstTree, leaf_counts: &[u32]) -> Vec<u32> {
    let mut counts = vec![0u32; tree.nodes().len()];
    for leaf in tree.leaves() {
        let m = leaf_counts[leaf];
        if m == 0 {
            continue;
        }
        let mut v = Some(leaf);
        while let Some(id) = v {
            counts[id] += m;
            v = tree.node(id).parent;
        }
    }
    counts
}

/// RWGM exposed over the points of an instance whose servers were embedded
/// into `tree` through `mapping`. Requests must be server points.
#[derive(Debug, Clone)]
pub struct TreeMatcher<'t> {
    state: RwgmState<'t>,
    mapping: &'t PointMapping,
    // server instances (parent point indices) still parked at each leaf
    slots: Vec<Vec<usize>>,
    last: Option<Assignment>,
}

impl<'t> TreeMatcher<'t> {
    /// `servers` are the instance's server points (parent indices); `tree`
    /// must already carry them as multiplicities.
    pub fn new(
        tree: &'t HstTree,
        mapping: &'t PointMapping,
        servers: &[usize],
        rng: ChaCha8Rng,
        policy: SelectionPolicy,
    ) -> Result<Self, MatchError> {
        let mut slots = vec![Vec::new(); tree.nodes().len()];
        for &s in servers.iter().rev() {
            let leaf = mapping
                .to_sub
                .get(s)
                .copied()
                .flatten()
                .and_then(|p| tree.leaf_of_point(p))
                .ok_or(MatchError::NotAServerPoint(s))?;
            slots[leaf].push(s);
        }
        Ok(Self {
            state: RwgmState::new(tree, rng, policy)?,
            mapping,
            slots,
            last: None,
        })
    }

    pub fn state(&self) -> &RwgmState<'t> {
        &self.state
    }

    /// The tree-level outcome of the most recent request.
    pub fn last_assignment(&self) -> Option<Assignment> {
        self.last
    }
}

impl OnlineMatcher for TreeMatcher<'_> {
    fn serve(&mut self, request: usize) -> Result<Served, MatchError> {
        let tree = self.state.tree();
        let leaf = self
            .mapping
            .to_sub
            .get(request)
            .copied()
            .flatten()
            .and_then(|p| tree.leaf_of_point(p))
            .ok_or(MatchError::NotAServerPoint(request))?;
        let a = self.state.serve(leaf)?;
        self.last = Some(a);
        let server = self.slots[a.leaf].pop().expect("leaf multiplicity matches its slots");
        Ok(Served { server, cost: a.cost })
    }
}
