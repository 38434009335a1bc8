//! Tree data model: construction, validation, Prüfer coding, random
//! generation, and the structural edits (vertex deletion, neighborhood
//! expansion) used by the cover properties.
//!
//! Vertices are dense integer ids `0..n-1`. All values are immutable after
//! construction and every operation is a pure function.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} appears in no edge (isolated vertices are not allowed)")]
    IsolatedVertex(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cycle detected")]
    CycleDetected,
    #[error("a tree needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("Prüfer entry {entry} out of range for {n} vertices")]
    PrueferEntryOutOfRange { entry: usize, n: usize },
    #[error("deleting every vertex leaves no graph")]
    DeletedEverything,
    #[error("expansion set is empty")]
    EmptyExpansion,
}

/// A set of vertex ids within a specific tree, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.members.binary_search(&v) {
            self.members.insert(pos, v);
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// Vertices of `0..n` not in this set, in ascending order.
    pub fn complement(&self, n: usize) -> VertexSet {
        (0..n).filter(|&v| !self.contains(v)).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn max_id(&self) -> Option<usize> {
        self.members.last().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }
}

impl From<&[usize]> for VertexSet {
    fn from(slice: &[usize]) -> Self {
        slice.iter().copied().collect()
    }
}

/// A connected, acyclic, simple graph on vertices `0..n-1` with `n >= 2`.
///
/// Adjacency lists are sorted, symmetric, and free of self-loops and
/// duplicates; every vertex has degree at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    adjacency: Vec<Vec<usize>>,
}

impl Tree {
    /// Builds a tree from an undirected edge list.
    ///
    /// The vertex set is implied: ids `0..=max_id`. Every violated invariant
    /// (self-loop, duplicate, isolated id, disconnection, cycle) is rejected
    /// with its own error.
    pub fn from_edge_list(edges: &[(usize, usize)]) -> Result<Tree, TreeError> {
        if edges.is_empty() {
            return Err(TreeError::EmptyEdgeList);
        }
        let mut n = 0;
        for &(u, v) in edges {
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            n = n.max(u + 1).max(v + 1);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if adjacency[u].contains(&v) {
                return Err(TreeError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        if let Some(v) = (0..n).find(|&v| adjacency[v].is_empty()) {
            return Err(TreeError::IsolatedVertex(v));
        }
        // BFS reachability from 0; with exactly n-1 edges this certifies a tree.
        let mut seen = vec![false; n];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push(w);
                }
            }
        }
        if reached != n {
            return Err(TreeError::Disconnected);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::CycleDetected);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(Tree { adjacency })
    }

    /// Decodes a Prüfer sequence into the unique labeled tree with that code.
    ///
    /// An empty sequence yields the single edge on 2 vertices.
    pub fn from_pruefer(seq: &[usize]) -> Result<Tree, TreeError> {
        let n = seq.len() + 2;
        if let Some(&entry) = seq.iter().find(|&&s| s >= n) {
            return Err(TreeError::PrueferEntryOutOfRange { entry, n });
        }
        let mut degree = vec![1usize; n];
        for &s in seq {
            degree[s] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &s in seq {
            let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
            if degree[s] == 1 {
                leaves.push(Reverse(s));
            }
        }
        let Reverse(a) = leaves.pop().expect("two vertices remain");
        let Reverse(b) = leaves.pop().expect("two vertices remain");
        edges.push((a, b));
        Tree::from_edge_list(&edges)
    }

    /// Encodes this tree as its Prüfer sequence (length `n - 2`).
    pub fn to_pruefer(&self) -> Vec<usize> {
        let n = self.n();
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut seq = Vec::with_capacity(n - 2);
        for _ in 0..n - 2 {
            let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
            removed[leaf] = true;
            let parent = *self.adjacency[leaf]
                .iter()
                .find(|&&w| !removed[w])
                .expect("a non-removed leaf has one live neighbor");
            seq.push(parent);
            degree[parent] -= 1;
            if degree[parent] == 1 {
                leaves.push(Reverse(parent));
            }
        }
        seq
    }

    /// Draws a uniformly random labeled tree on `n` vertices.
    ///
    /// Deterministic per `(n, seed)`: the generator is the ChaCha8 stream
    /// cipher RNG seeded with `seed`, and each Prüfer entry is drawn from
    /// `next_u64` by rejection sampling (reject values above the largest
    /// multiple of `n`, then reduce mod `n`). Uniformity over labeled trees
    /// follows from the Prüfer bijection.
    pub fn random(n: usize, seed: u64) -> Result<Tree, TreeError> {
        if n < 2 {
            return Err(TreeError::TooFewVertices(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<usize> = (0..n - 2)
            .map(|_| uniform_below(&mut rng, n as u64) as usize)
            .collect();
        Tree::from_pruefer(&seq)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n() - 1);
        for u in 0..self.n() {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Vertices of degree 1.
    pub fn leaves(&self) -> VertexSet {
        (0..self.n()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Measure (volume) of a vertex set: the sum of its degrees.
    pub fn measure(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.degree(v)).sum()
    }

    fn check_ids(&self, s: &VertexSet) -> Result<(), TreeError> {
        match s.max_id() {
            Some(id) if id >= self.n() => Err(TreeError::VertexOutOfRange { id, n: self.n() }),
            _ => Ok(()),
        }
    }

    /// Deletes a vertex set and returns the connected components of what
    /// remains. Components keep their original labels; singletons are
    /// legitimate components here even though they are not `Tree`s.
    pub fn delete_vertices(&self, z: &VertexSet) -> Result<Forest, TreeError> {
        self.check_ids(z)?;
        if z.len() == self.n() {
            return Err(TreeError::DeletedEverything);
        }
        let n = self.n();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] || z.contains(start) {
                continue;
            }
            let mut vertices = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                vertices.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] && !z.contains(w) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            let edges = induced_edges(self, &vertices);
            components.push(Component { vertices, edges });
        }
        Ok(Forest { components })
    }

    /// The subgraph expanded by `c`: vertex set `c ∪ N(c)`, edge set all
    /// edges incident to `c`. Returned as connected components (edges
    /// between two non-`c` vertices are *not* part of the expansion).
    pub fn expand_subgraph(&self, c: &VertexSet) -> Result<Forest, TreeError> {
        if c.is_empty() {
            return Err(TreeError::EmptyExpansion);
        }
        self.check_ids(c)?;
        let n = self.n();
        let mut in_expansion = vec![false; n];
        let mut adjacency = vec![Vec::new(); n];
        for u in c.iter() {
            in_expansion[u] = true;
            for &v in &self.adjacency[u] {
                in_expansion[v] = true;
                if !adjacency[u].contains(&v) {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if !in_expansion[start] || seen[start] {
                continue;
            }
            let mut vertices = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                vertices.push(u);
                for &w in &adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            let mut edges = Vec::new();
            for &u in &vertices {
                for &v in &adjacency[u] {
                    if u < v {
                        edges.push((u, v));
                    }
                }
            }
            edges.sort_unstable();
            components.push(Component { vertices, edges });
        }
        Ok(Forest { components })
    }
}

/// Rooted orientation of a tree: BFS parents from vertex 0 and a vertex
/// order whose reverse is a valid post-order (children before parents).
pub(crate) struct Rooted {
    pub parent: Vec<usize>,
    pub order: Vec<usize>,
}

pub(crate) const NO_PARENT: usize = usize::MAX;

impl Rooted {
    pub fn children(&self, t: &Tree, v: usize) -> Vec<usize> {
        t.neighbors(v)
            .iter()
            .copied()
            .filter(|&c| self.parent[c] == v)
            .collect()
    }
}

pub(crate) fn root_at_zero(t: &Tree) -> Rooted {
    let n = t.n();
    let mut parent = vec![NO_PARENT; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    Rooted { parent, order }
}

fn induced_edges(t: &Tree, vertices: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for &u in vertices {
        for &v in t.neighbors(u) {
            if u < v && vertices.binary_search(&v).is_ok() {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Uniform draw from `0..n` using rejection sampling on `next_u64`.
fn uniform_below(rng: &mut impl RngCore, n: u64) -> u64 {
    let limit = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < limit {
            return x % n;
        }
    }
}

/// One connected piece of a deleted or expanded tree, in the labels of the
/// host tree. May be a single vertex with no edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Component {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Relabels this component as a standalone `Tree` with vertices
    /// `0..len`, together with the map from local ids back to host labels.
    /// `None` for singletons, which cannot form a `Tree`.
    pub fn to_tree(&self) -> Option<(Tree, Vec<usize>)> {
        if self.is_singleton() {
            return None;
        }
        let local: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let lu = self.vertices.binary_search(&u).expect("endpoint in component");
                let lv = self.vertices.binary_search(&v).expect("endpoint in component");
                (lu, lv)
            })
            .collect();
        let tree = Tree::from_edge_list(&local).expect("component is a valid tree");
        Some((tree, self.vertices.clone()))
    }
}

/// The components of a tree after deleting vertices or expanding around a
/// subset, ordered by smallest contained vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub components: Vec<Component>,
}

impl Forest {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Union of all component vertex sets.
    pub fn vertices(&self) -> VertexSet {
        self.components
            .iter()
            .flat_map(|c| c.vertices.iter().copied())
            .collect()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeListParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] TreeError),
}

/// Parses the edge-list text format: one edge per line as `u v` with
/// 0-based decimal ids; `#` starts a comment; blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Tree, EdgeListParseError> {
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |field: Option<&str>, idx: usize| -> Result<usize, EdgeListParseError> {
            field
                .ok_or_else(|| EdgeListParseError::Malformed {
                    line: idx + 1,
                    message: "expected two vertex ids".into(),
                })?
                .parse::<usize>()
                .map_err(|e| EdgeListParseError::Malformed {
                    line: idx + 1,
                    message: format!("invalid vertex id: {e}"),
                })
        };
        let u = parse(fields.next(), idx)?;
        let v = parse(fields.next(), idx)?;
        if fields.next().is_some() {
            return Err(EdgeListParseError::Malformed {
                line: idx + 1,
                message: "expected exactly two vertex ids".into(),
            });
        }
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(TreeError::EmptyEdgeList.into());
    }
    Ok(Tree::from_edge_list(&edges)?)
}

/// Formats a tree in the edge-list text format accepted by
/// [`parse_edge_list`].
pub fn format_edge_list(t: &Tree) -> String {
    let mut out = String::new();
    for (u, v) in t.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Deterministic ensemble of random trees: sizes drawn uniformly from
/// `min_n..=max_n` and per-tree seeds, all derived from one ChaCha8 stream
/// seeded with `seed`. Returns `(tree_seed, tree)` pairs.
pub fn random_ensemble(
    count: usize,
    min_n: usize,
    max_n: usize,
    seed: u64,
) -> Result<Vec<(u64, Tree)>, TreeError> {
    if min_n < 2 || min_n > max_n {
        return Err(TreeError::TooFewVertices(min_n));
    }
    let mut meta = ChaCha8Rng::seed_from_u64(seed);
    let span = (max_n - min_n + 1) as u64;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = min_n + uniform_below(&mut meta, span) as usize;
        let tree_seed = meta.next_u64();
        out.push((tree_seed, Tree::random(n, tree_seed)?));
    }
    Ok(out)
}
