//! Hierarchically well-separated trees.
//!
//! Heights are counted from the leaves: leaves sit at height 0 and the root
//! at height `h`. The edge between a node of height `i - 1` and its parent
//! weighs `λ^(i-1)` tree units, so leaf edges weigh one and weights grow by
//! `λ` per level toward the root. Two leaves whose lowest common ancestor has
//! height `k` are `2 · (1 + λ + … + λ^(k-1))` tree units apart; `scale`
//! converts tree units into the units of the source metric.
//!
//! Every [`HstTree`] is normalized: all leaves are at depth `h`, which makes
//! every internal node's children either all leaves or all internal.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{FiniteMetric, Instance, PointMapping};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HstError {
    #[error("lambda must exceed 1, got {0}")]
    Lambda(f64),
    #[error("scale must be positive and finite, got {0}")]
    Scale(f64),
    #[error("instance size must be at least 1")]
    ZeroSize,
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("node {0} does not exist")]
    NoSuchNode(NodeId),
    #[error("raw tree contains a cycle through node {0}")]
    Cyclic(NodeId),
    #[error("raw tree is disconnected: {0} roots")]
    Disconnected(usize),
    #[error("raw tree is empty")]
    Empty,
    #[error("leaf {0} carries no point")]
    LeafWithoutPoint(NodeId),
    #[error("internal node {0} carries a point")]
    InternalWithPoint(NodeId),
    #[error("point {0} appears on more than one leaf")]
    DuplicatePoint(usize),
    #[error("server point {0} is not a leaf of the tree")]
    MissingServerLeaf(usize),
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// `2 (1 + ln n)`, the separation factor used for an instance of `n` servers.
pub fn lambda_for_n(n: usize) -> Result<f64, HstError> {
    if n == 0 {
        return Err(HstError::ZeroSize);
    }
    Ok(2.0 * (1.0 + (n as f64).ln()))
}

/// `1 + λ + … + λ^(k-1)`: half the leaf-to-leaf distance through a meet of
/// height `k`, in tree units.
pub fn half_path_weight(lambda: f64, k: u32) -> f64 {
    (0..k).map(|i| lambda.powi(i as i32)).fold(0.0, |acc, x| acc + x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HstNode {
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub height: u32,
    /// Source-metric points sitting at this leaf. Several points share a leaf
    /// only when they are at distance zero from each other.
    pub points: Vec<usize>,
}

impl HstNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HstTree {
    nodes: Vec<HstNode>,
    root: NodeId,
    height: u32,
    lambda: f64,
    scale: f64,
    multiplicity: Vec<u32>,
    point_leaf: Vec<Option<NodeId>>,
    half_paths: Vec<f64>,
}

impl HstTree {
    fn assemble(nodes: Vec<HstNode>, root: NodeId, lambda: f64, scale: f64) -> Result<Self, HstError> {
        if !(lambda > 1.0 && lambda.is_finite()) {
            return Err(HstError::Lambda(lambda));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(HstError::Scale(scale));
        }
        let height = nodes[root].height;
        let num_points = nodes
            .iter()
            .flat_map(|n| n.points.iter().copied())
            .max()
            .map_or(0, |p| p + 1);
        let mut point_leaf = vec![None; num_points];
        for (id, node) in nodes.iter().enumerate() {
            for &p in &node.points {
                if point_leaf[p].replace(id).is_some() {
                    return Err(HstError::DuplicatePoint(p));
                }
            }
        }
        let half_paths = (0..=height).map(|k| half_path_weight(lambda, k)).collect();
        let tree = Self {
            multiplicity: vec![0; nodes.len()],
            nodes,
            root,
            height,
            lambda,
            scale,
            point_leaf,
            half_paths,
        };
        tree.validate()?;
        Ok(tree)
    }

    /// Height-1 star with `leaves` leaves; leaf `i` carries point `i`.
    /// This is the uniform metric (all leaf pairs `2 · scale` apart).
    pub fn star(leaves: usize, lambda: f64, scale: f64) -> Result<Self, HstError> {
        if leaves == 0 {
            return Err(HstError::Empty);
        }
        let mut nodes = vec![HstNode {
            parent: None,
            children: (1..=leaves).collect(),
            height: 1,
            points: vec![],
        }];
        nodes.extend((0..leaves).map(|i| HstNode {
            parent: Some(0),
            children: vec![],
            height: 0,
            points: vec![i],
        }));
        Self::assemble(nodes, 0, lambda, scale)
    }

    pub fn nodes(&self) -> &[HstNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &HstNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Weight of an edge from a level `i - 1` node up to its level `i`
    /// parent, in tree units. Only meaningful for `1 <= i <= height`.
    pub fn level_weight(&self, i: u32) -> f64 {
        self.lambda.powi(i as i32 - 1)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&id| self.nodes[id].is_leaf())
    }

    pub fn num_points(&self) -> usize {
        self.point_leaf.len()
    }

    pub fn leaf_of_point(&self, point: usize) -> Option<NodeId> {
        self.point_leaf.get(point).copied().flatten()
    }

    pub fn multiplicity(&self, leaf: NodeId) -> u32 {
        self.multiplicity[leaf]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicity
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicity.iter().map(|&m| m as u64).sum()
    }

    fn check_leaf(&self, id: NodeId) -> Result<(), HstError> {
        match self.nodes.get(id) {
            None => Err(HstError::NoSuchNode(id)),
            Some(n) if !n.is_leaf() => Err(HstError::NotALeaf(id)),
            Some(_) => Ok(()),
        }
    }

    /// Lowest common ancestor of two leaves.
    pub fn meet(&self, a: NodeId, b: NodeId) -> Result<NodeId, HstError> {
        self.check_leaf(a)?;
        self.check_leaf(b)?;
        Ok(self.meet_unchecked(a, b))
    }

    pub(crate) fn meet_unchecked(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        // all leaves share a depth, so climbing in lockstep meets at the LCA
        while a != b {
            a = self.nodes[a].parent.expect("leaves share a depth");
            b = self.nodes[b].parent.expect("leaves share a depth");
        }
        a
    }

    /// Distance between two leaves in source-metric units.
    pub fn tree_distance(&self, a: NodeId, b: NodeId) -> Result<f64, HstError> {
        let u = self.meet(a, b)?;
        Ok(self.meet_distance(self.nodes[u].height))
    }

    /// Leaf-to-leaf distance through a meet of the given height, in metric units.
    #[inline]
    pub fn meet_distance(&self, height: u32) -> f64 {
        self.scale * 2.0 * self.half_paths[height as usize]
    }

    /// Distance between two source points through their leaves.
    pub fn point_distance(&self, x: usize, y: usize) -> Option<f64> {
        let a = self.leaf_of_point(x)?;
        let b = self.leaf_of_point(y)?;
        Some(self.meet_distance(self.nodes[self.meet_unchecked(a, b)].height))
    }

    /// Same value as [`tree_distance`](Self::tree_distance), obtained by
    /// summing edge weights along the explicit leaf-to-leaf path.
    pub fn tree_distance_by_walk(&self, a: NodeId, b: NodeId) -> Result<f64, HstError> {
        self.check_leaf(a)?;
        self.check_leaf(b)?;
        let path_up = |start: NodeId| {
            let mut path = vec![start];
            let mut cur = start;
            while let Some(p) = self.nodes[cur].parent {
                path.push(p);
                cur = p;
            }
            path
        };
        let pa = path_up(a);
        let pb = path_up(b);
        let common = pa.iter().rev().zip(pb.iter().rev()).take_while(|(x, y)| x == y).count();
        // each side summed leaf-upward, then the two sides added
        let side = |path: &[NodeId]| -> f64 {
            path[..path.len() - common]
                .iter()
                .map(|&v| {
                    let parent = self.nodes[v].parent.expect("below the meet");
                    self.level_weight(self.nodes[parent].height)
                })
                .fold(0.0, |acc, w| acc + w)
        };
        Ok(self.scale * (side(&pa) + side(&pb)))
    }

    /// Returns a copy with server multiplicities set from `server_points`,
    /// given in this tree's point indices (repetition allowed).
    pub fn with_servers(&self, server_points: &[usize]) -> Result<Self, HstError> {
        let mut multiplicity = vec![0u32; self.nodes.len()];
        for &p in server_points {
            let leaf = self.leaf_of_point(p).ok_or(HstError::MissingServerLeaf(p))?;
            multiplicity[leaf] += 1;
        }
        Ok(Self {
            multiplicity,
            ..self.clone()
        })
    }

    /// Attaches the servers of `inst`, whose points are translated into this
    /// tree's point space through `mapping` (as returned by
    /// [`Instance::submetric_of_servers`]).
    pub fn attach_servers(&self, inst: &Instance, mapping: &PointMapping) -> Result<Self, HstError> {
        let points = inst
            .servers()
            .iter()
            .map(|&s| {
                mapping
                    .to_sub
                    .get(s)
                    .copied()
                    .flatten()
                    .ok_or(HstError::MissingServerLeaf(s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.with_servers(&points)
    }

    /// Checks every structural invariant of a normalized λ-HST.
    pub fn validate(&self) -> Result<(), HstError> {
        let bad = |msg: String| Err(HstError::Malformed(msg));
        if self.nodes[self.root].parent.is_some() {
            return bad("root has a parent".into());
        }
        if self.height < 1 {
            return bad("height must be at least 1".into());
        }
        if self.multiplicity.len() != self.nodes.len() {
            return bad("multiplicity table size".into());
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![(self.root, 0u32)];
        while let Some((id, depth)) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                return bad(format!("node {id} reached twice"));
            }
            let node = &self.nodes[id];
            if node.height + depth != self.height {
                return bad(format!("node {id} has height {} at depth {depth}", node.height));
            }
            if node.is_leaf() {
                if node.height != 0 {
                    return bad(format!("leaf {id} above the bottom level"));
                }
                if node.points.is_empty() {
                    return Err(HstError::LeafWithoutPoint(id));
                }
            } else {
                if !node.points.is_empty() {
                    return Err(HstError::InternalWithPoint(id));
                }
                if self.multiplicity[id] != 0 {
                    return bad(format!("internal node {id} has multiplicity"));
                }
                let leaf_children = node.children.iter().filter(|&&c| self.nodes[c].is_leaf()).count();
                if leaf_children != 0 && leaf_children != node.children.len() {
                    return bad(format!("node {id} mixes leaf and internal children"));
                }
                for &c in &node.children {
                    if self.nodes[c].parent != Some(id) {
                        return bad(format!("child {c} does not point back to {id}"));
                    }
                    stack.push((c, depth + 1));
                }
            }
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return bad(format!("node {id} unreachable from the root"));
        }
        for (p, leaf) in self.point_leaf.iter().enumerate() {
            if let Some(l) = leaf {
                if !self.nodes[*l].points.contains(&p) {
                    return bad(format!("point {p} index disagrees with leaf {l}"));
                }
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> TreeDump {
        self.dump_mapped(None)
    }

    /// JSON-friendly dump; `to_parent`, when given, renames the tree's points
    /// back into the parent instance's indices.
    pub fn dump_mapped(&self, to_parent: Option<&[usize]>) -> TreeDump {
        let name = |p: usize| to_parent.map_or(p, |m| m[p]);
        TreeDump {
            lambda: self.lambda,
            scale: self.scale,
            height: self.height,
            root: self.root,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeDump {
                    id,
                    parent: n.parent,
                    level: n.height,
                    leaf_point: n.points.first().map(|&p| name(p)),
                    points: n.points.iter().map(|&p| name(p)).collect(),
                    multiplicity: self.multiplicity[id],
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDump {
    pub lambda: f64,
    pub scale: f64,
    pub height: u32,
    pub root: NodeId,
    pub nodes: Vec<NodeDump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub level: u32,
    pub leaf_point: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<usize>,
    pub multiplicity: u32,
}

/// A rooted tree given by parent links, with leaves possibly at different
/// depths. Edge weights are implied by depth: once padded, an edge from
/// depth `d` to `d + 1` weighs `λ^(h-d-1)` where `h` is the deepest leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTree {
    pub parent: Vec<Option<NodeId>>,
    /// Point carried by each node; required on leaves, forbidden elsewhere.
    pub point: Vec<Option<usize>>,
    pub lambda: f64,
    pub scale: f64,
}

impl RawTree {
    pub fn from_tree(tree: &HstTree) -> Self {
        assert!(
            tree.nodes.iter().all(|n| n.points.len() <= 1),
            "raw trees carry one point per leaf"
        );
        Self {
            parent: tree.nodes.iter().map(|n| n.parent).collect(),
            point: tree.nodes.iter().map(|n| n.points.first().copied()).collect(),
            lambda: tree.lambda,
            scale: tree.scale,
        }
    }
}

/// Pads every shallow leaf with a chain of single-child dummy vertices so
/// all leaves end up at the same depth. Node ids of the input are kept;
/// dummies are appended after them.
pub fn normalize_hst(raw: &RawTree) -> Result<HstTree, HstError> {
    let len = raw.parent.len();
    if len == 0 {
        return Err(HstError::Empty);
    }
    if raw.point.len() != len {
        return Err(HstError::Malformed("point table size".into()));
    }
    let mut children = vec![Vec::new(); len];
    let mut roots = Vec::new();
    for (id, parent) in raw.parent.iter().enumerate() {
        match *parent {
            None => roots.push(id),
            Some(p) if p >= len => return Err(HstError::NoSuchNode(p)),
            Some(p) if p == id => return Err(HstError::Cyclic(id)),
            Some(p) => children[p].push(id),
        }
    }
    let root = match roots.as_slice() {
        [] => return Err(HstError::Cyclic(0)),
        [r] => *r,
        _ => return Err(HstError::Disconnected(roots.len())),
    };
    let mut depth = vec![None::<u32>; len];
    depth[root] = Some(0);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let id = order[i];
        i += 1;
        for &c in &children[id] {
            depth[c] = Some(depth[id].unwrap() + 1);
            order.push(c);
        }
    }
    if let Some(id) = depth.iter().position(Option::is_none) {
        // with a single root, anything unreachable hangs off a cycle
        return Err(HstError::Cyclic(id));
    }
    for id in 0..len {
        match (children[id].is_empty(), raw.point[id]) {
            (true, None) => return Err(HstError::LeafWithoutPoint(id)),
            (false, Some(_)) => return Err(HstError::InternalWithPoint(id)),
            _ => {}
        }
    }

    let max_leaf_depth = (0..len)
        .filter(|&id| children[id].is_empty())
        .map(|id| depth[id].unwrap())
        .max()
        .unwrap();

    let mut nodes: Vec<HstNode> = (0..len)
        .map(|id| HstNode {
            parent: raw.parent[id],
            children: children[id].clone(),
            height: 0,
            points: raw.point[id].into_iter().collect(),
        })
        .collect();

    let (root, height) = if max_leaf_depth == 0 {
        // lone leaf: hang it under a dummy root
        nodes.push(HstNode {
            parent: None,
            children: vec![root],
            height: 1,
            points: vec![],
        });
        nodes[root].parent = Some(len);
        (len, 1)
    } else {
        (root, max_leaf_depth)
    };

    for id in 0..len {
        let d = depth[id].unwrap() + if max_leaf_depth == 0 { 1 } else { 0 };
        nodes[id].height = height - d;
        if !children[id].is_empty() || d == height {
            continue;
        }
        // chain of dummies between the leaf and its parent
        let parent = nodes[id].parent.expect("shallow leaf has a parent");
        let slot = nodes[parent].children.iter().position(|&c| c == id).unwrap();
        let mut below = id;
        for level in 1..=(height - d) {
            let dummy = nodes.len();
            nodes.push(HstNode {
                parent: None,
                children: vec![below],
                height: level,
                points: vec![],
            });
            nodes[below].parent = Some(dummy);
            below = dummy;
        }
        nodes[id].height = 0;
        nodes[below].parent = Some(parent);
        nodes[parent].children[slot] = below;
    }

    HstTree::assemble(nodes, root, raw.lambda, raw.scale)
}

/// Parameters of one sampled embedding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingParams {
    pub lambda: f64,
    pub seed: u64,
}

impl EmbeddingParams {
    pub fn new(lambda: f64, seed: u64) -> Result<Self, HstError> {
        if !(lambda > 1.0 && lambda.is_finite()) {
            return Err(HstError::Lambda(lambda));
        }
        Ok(Self { lambda, seed })
    }

    /// Uses `λ = lambda_for_n(n)`.
    pub fn for_size(n: usize, seed: u64) -> Result<Self, HstError> {
        Self::new(lambda_for_n(n)?, seed)
    }
}

/// Samples a λ-HST that dominates `metric`, by a random hierarchical
/// decomposition.
///
/// The metric is measured in units of its smallest nonzero distance `d_min`
/// (stored as the tree's `scale`). A random permutation of the points fixes
/// the order in which they act as cluster centers, and a radius factor
/// `β ∈ [1, λ)` is drawn with density proportional to `1/β`. Clusters at
/// height `k ≥ 2` have radius `β · λ^(k-2) · d_min`: each point of a parent
/// cluster joins the first center (in permutation order) within that radius.
/// Height-1 clusters group points at distance zero, and each becomes a
/// single leaf. A pair separated below a height-`k` cluster is at most
/// `2 β λ^(k-2) < 2 λ^(k-1)` apart, which the tree distance through that
/// node always exceeds; the root height is the least `h ≥ 2` whose meet
/// distance covers the diameter.
///
/// The result is a deterministic function of `(metric, lambda, seed)`.
pub fn frt_embed(metric: &FiniteMetric, params: EmbeddingParams) -> Result<HstTree, HstError> {
    let lambda = params.lambda;
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(HstError::Lambda(lambda));
    }
    let n = metric.len();
    if n == 0 {
        return Err(HstError::Empty);
    }
    let Some(d_min) = metric.min_positive_distance() else {
        // every point coincides: one leaf under a root
        let nodes = vec![
            HstNode {
                parent: None,
                children: vec![1],
                height: 1,
                points: vec![],
            },
            HstNode {
                parent: Some(0),
                children: vec![],
                height: 0,
                points: (0..n).collect(),
            },
        ];
        return HstTree::assemble(nodes, 0, lambda, 1.0);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let beta = lambda.powf(rng.gen::<f64>());

    let spread = metric.diameter() / d_min;
    let mut height = 2u32;
    while 2.0 * half_path_weight(lambda, height) < spread {
        height += 1;
    }

    // first center in permutation order within `radius` of `x`
    let center_of = |x: usize, radius: f64| -> usize {
        *perm
            .iter()
            .find(|&&c| metric.distance(x, c) <= radius)
            .expect("x is within any radius of itself")
    };

    let mut nodes = vec![HstNode {
        parent: None,
        children: vec![],
        height,
        points: vec![],
    }];
    // (node, members) at the current height
    let mut frontier: Vec<(NodeId, Vec<usize>)> = vec![(0, (0..n).collect())];
    for k in (1..height).rev() {
        let radius = if k == 1 {
            0.0
        } else {
            beta * lambda.powi(k as i32 - 2) * d_min
        };
        let mut next = Vec::new();
        for (parent, members) in frontier {
            let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
            for &x in &members {
                let c = center_of(x, radius);
                match groups.iter_mut().find(|(center, _)| *center == c) {
                    Some((_, g)) => g.push(x),
                    None => groups.push((c, vec![x])),
                }
            }
            for (_, group) in groups {
                let id = nodes.len();
                nodes.push(HstNode {
                    parent: Some(parent),
                    children: vec![],
                    height: k,
                    points: vec![],
                });
                nodes[parent].children.push(id);
                next.push((id, group));
            }
        }
        frontier = next;
    }
    for (parent, members) in frontier {
        let id = nodes.len();
        nodes.push(HstNode {
            parent: Some(parent),
            children: vec![],
            height: 0,
            points: members,
        });
        nodes[parent].children.push(id);
    }
    HstTree::assemble(nodes, 0, lambda, d_min)
}
