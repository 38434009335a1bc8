//! Maximum matchings and minimum vertex covers on trees, computed exactly
//! by linear-time dynamic programming, plus the cover properties used in
//! the spectral arguments (deletion, leaves, expansion, exclusion) as
//! checkable predicates.
//!
//! The [`oracle`] submodule holds exponential-time reference algorithms for
//! cross-checking the DP on small instances.

use serde::Serialize;
use thiserror::Error;

use crate::tree::{root_at_zero, Forest, Rooted, Tree, VertexSet};

/// Sentinel for infeasible DP states; large enough to never be a real size,
/// small enough to add without overflow.
const INF: usize = usize::MAX / 4;

/// Default cap on enumerated minimum covers.
pub const DEFAULT_COVER_CAP: usize = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {0} is both forced in and forced out")]
    OverlappingForces(usize),
    #[error("the given set is not a vertex cover: edge ({0}, {1}) is uncovered")]
    NotACover(usize, usize),
}

/// Minimum-cover / maximum-matching summary for one tree.
///
/// `cover_union` collects every vertex that belongs to at least one minimum
/// cover; `always_excluded` is its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub cover_size: usize,
    pub witness_cover: VertexSet,
    pub matching_size: usize,
    pub witness_matching: Vec<(usize, usize)>,
    pub cover_union: VertexSet,
    pub always_excluded: VertexSet,
}

/// A maximum-cardinality matching, as edges `(u, v)` with `u < v`.
///
/// Greedy leaf-pruning in post-order, which is exact on trees: a vertex is
/// matched to its lowest-id unmatched child the moment it is processed.
pub fn max_matching(t: &Tree) -> Vec<(usize, usize)> {
    let rooted = root_at_zero(t);
    let mut matched = vec![false; t.n()];
    let mut edges = Vec::new();
    for &v in rooted.order.iter().rev() {
        if matched[v] {
            continue;
        }
        // Children in ascending id order (adjacency is sorted).
        for &c in t.neighbors(v) {
            if rooted.parent[c] == v && !matched[c] {
                matched[v] = true;
                matched[c] = true;
                edges.push((v.min(c), v.max(c)));
                break;
            }
        }
    }
    edges.sort_unstable();
    edges
}

fn cover_dp(t: &Tree, rooted: &Rooted, forced_in: &VertexSet, forced_out: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let n = t.n();
    let mut dp_in = vec![0usize; n];
    let mut dp_out = vec![0usize; n];
    for &v in rooted.order.iter().rev() {
        let mut best_in = 1usize;
        let mut best_out = 0usize;
        for &c in t.neighbors(v) {
            if rooted.parent[c] != v {
                continue;
            }
            best_in = (best_in + dp_in[c].min(dp_out[c])).min(INF);
            best_out = (best_out + dp_in[c]).min(INF);
        }
        dp_in[v] = if forced_out.contains(v) { INF } else { best_in };
        dp_out[v] = if forced_in.contains(v) { INF } else { best_out };
    }
    (dp_in, dp_out)
}

/// Exact minimum vertex cover size with one deterministic witness.
///
/// Two-state tree DP. Witness ties resolve to the uncovered state at the
/// root and to the covered state elsewhere, with children visited in
/// ascending id order, so repeated calls return the identical set.
pub fn min_vertex_cover(t: &Tree) -> (usize, VertexSet) {
    let rooted = root_at_zero(t);
    let none = VertexSet::new();
    let (dp_in, dp_out) = cover_dp(t, &rooted, &none, &none);
    let size = dp_in[0].min(dp_out[0]);

    let mut in_cover = vec![false; t.n()];
    // (vertex, is_in_cover) decided top-down.
    let mut stack = vec![(0usize, dp_in[0] < dp_out[0])];
    while let Some((v, v_in)) = stack.pop() {
        in_cover[v] = v_in;
        for &c in t.neighbors(v) {
            if rooted.parent[c] != v {
                continue;
            }
            let c_in = if v_in { dp_in[c] <= dp_out[c] } else { true };
            stack.push((c, c_in));
        }
    }
    let witness: VertexSet = (0..t.n()).filter(|&v| in_cover[v]).collect();
    (size, witness)
}

/// Minimum cover size subject to membership constraints, or `None` when the
/// constraints are unsatisfiable (two adjacent vertices forced out).
pub fn min_cover_with_forced(
    t: &Tree,
    forced_in: &VertexSet,
    forced_out: &VertexSet,
) -> Result<Option<usize>, CoverError> {
    if let Some(v) = forced_in.iter().find(|&v| forced_out.contains(v)) {
        return Err(CoverError::OverlappingForces(v));
    }
    let rooted = root_at_zero(t);
    let (dp_in, dp_out) = cover_dp(t, &rooted, forced_in, forced_out);
    let size = dp_in[0].min(dp_out[0]);
    Ok(if size >= INF { None } else { Some(size) })
}

/// Splits the vertices into those contained in at least one minimum cover
/// (`cover_union`) and those excluded from every minimum cover.
pub fn cover_membership(t: &Tree) -> (VertexSet, VertexSet) {
    let (size, _) = min_vertex_cover(t);
    let none = VertexSet::new();
    let mut union = VertexSet::new();
    for v in 0..t.n() {
        let forced: VertexSet = [v].into_iter().collect();
        let constrained = min_cover_with_forced(t, &forced, &none)
            .expect("disjoint force sets")
            .expect("forcing a vertex in is always feasible");
        if constrained == size {
            union.insert(v);
        }
    }
    let excluded = union.complement(t.n());
    (union, excluded)
}

/// All minimum vertex covers, up to `cap`, via backtracking over the
/// minimum-achieving DP states. The flag reports truncation.
pub fn enumerate_min_covers(t: &Tree, cap: usize) -> (Vec<VertexSet>, bool) {
    let rooted = root_at_zero(t);
    let none = VertexSet::new();
    let (dp_in, dp_out) = cover_dp(t, &rooted, &none, &none);
    let best = dp_in[0].min(dp_out[0]);

    let mut covers = Vec::new();
    let mut truncated = false;
    let mut states = vec![false; t.n()];

    // Recurse over the BFS order: each vertex's admissible states depend
    // only on its parent's chosen state.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        t: &Tree,
        rooted: &Rooted,
        dp_in: &[usize],
        dp_out: &[usize],
        best: usize,
        states: &mut Vec<bool>,
        covers: &mut Vec<VertexSet>,
        truncated: &mut bool,
        cap: usize,
    ) {
        if covers.len() >= cap {
            *truncated = true;
            return;
        }
        if idx == rooted.order.len() {
            covers.push((0..t.n()).filter(|&v| states[v]).collect());
            return;
        }
        let v = rooted.order[idx];
        let allowed: &[bool] = if v == 0 {
            match (dp_out[0] == best, dp_in[0] == best) {
                (true, true) => &[false, true],
                (true, false) => &[false],
                (false, true) => &[true],
                (false, false) => unreachable!("root achieves the optimum"),
            }
        } else if !states[rooted.parent[v]] {
            &[true]
        } else {
            let m = dp_in[v].min(dp_out[v]);
            match (dp_out[v] == m, dp_in[v] == m) {
                (true, true) => &[false, true],
                (true, false) => &[false],
                (false, true) => &[true],
                (false, false) => unreachable!(),
            }
        };
        for &s in allowed {
            states[v] = s;
            rec(idx + 1, t, rooted, dp_in, dp_out, best, states, covers, truncated, cap);
        }
    }

    rec(0, t, &rooted, &dp_in, &dp_out, best, &mut states, &mut covers, &mut truncated, cap);
    (covers, truncated)
}

/// True when every edge of `t` has at least one endpoint in `s`.
pub fn is_vertex_cover(t: &Tree, s: &VertexSet) -> bool {
    t.edges().iter().all(|&(u, v)| s.contains(u) || s.contains(v))
}

/// True when no edge of `t` joins two members of `s`.
pub fn is_independent(t: &Tree, s: &VertexSet) -> bool {
    t.edges().iter().all(|&(u, v)| !(s.contains(u) && s.contains(v)))
}

/// Full cover/matching summary: sizes, witnesses, and membership split.
pub fn cover_report(t: &Tree) -> CoverReport {
    let (cover_size, witness_cover) = min_vertex_cover(t);
    let witness_matching = max_matching(t);
    let (cover_union, always_excluded) = cover_membership(t);
    CoverReport {
        cover_size,
        witness_cover,
        matching_size: witness_matching.len(),
        witness_matching,
        cover_union,
        always_excluded,
    }
}

/// Minimum cover size of a forest: sum of the per-component DP sizes
/// (singleton components need no cover).
pub fn forest_min_cover_size(f: &Forest) -> usize {
    f.components
        .iter()
        .filter_map(|c| c.to_tree())
        .map(|(tree, _)| min_vertex_cover(&tree).0)
        .sum()
}

/// Outcome of checking the four minimum-cover properties on one tree.
/// Failures carry a verbatim counterexample description; any failure would
/// contradict a proved statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverPropertyReport {
    pub deletion_ok: bool,
    pub leaves_ok: bool,
    pub expansion_ok: bool,
    pub exclusion_ok: bool,
    pub covers_checked: usize,
    pub covers_truncated: bool,
    pub failures: Vec<String>,
}

impl CoverPropertyReport {
    pub fn passed(&self) -> bool {
        self.deletion_ok && self.leaves_ok && self.expansion_ok && self.exclusion_ok
    }
}

/// Nonempty subsets of `cover` to probe: all of them when `|cover| <= 10`,
/// otherwise singletons, the full set, and 64 subsets drawn from a fixed
/// ChaCha8 stream so runs are reproducible.
fn probe_subsets(cover: &VertexSet) -> Vec<VertexSet> {
    let members: Vec<usize> = cover.iter().collect();
    let k = members.len();
    if k <= 10 {
        return (1u64..(1 << k))
            .map(|mask| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
    }
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let mut subsets: Vec<VertexSet> = members.iter().map(|&v| [v].into_iter().collect()).collect();
    subsets.push(cover.clone());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    for _ in 0..64 {
        let mask = rng.next_u64() | 1;
        subsets.push(
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    subsets
}

/// Checks, for every enumerated minimum cover `C` and probed subsets `C'`:
///
/// * deletion: the minimum cover of `t - C'` has size `|C| - |C'|`;
/// * leaves: the leaf set is never contained in a minimum cover;
/// * expansion: `C'` is a minimum cover of the subgraph expanded by `C'`;
/// * exclusion: deleting an always-excluded vertex keeps the size, so every
///   minimum cover of `t` is one of `t - z`.
pub fn check_cover_properties(t: &Tree) -> CoverPropertyReport {
    let (cover_size, _) = min_vertex_cover(t);
    let (covers, truncated) = enumerate_min_covers(t, DEFAULT_COVER_CAP);
    let (_, always_excluded) = cover_membership(t);
    let leaves = t.leaves();

    let mut report = CoverPropertyReport {
        deletion_ok: true,
        leaves_ok: true,
        expansion_ok: true,
        exclusion_ok: true,
        covers_checked: covers.len(),
        covers_truncated: truncated,
        failures: Vec::new(),
    };

    for cover in &covers {
        if leaves.iter().all(|l| cover.contains(l)) {
            report.leaves_ok = false;
            report
                .failures
                .push(format!("leaves {:?} contained in minimum cover {:?}", leaves.as_slice(), cover.as_slice()));
        }
        for sub in probe_subsets(cover) {
            if sub.len() < cover.len() {
                let remaining = t.delete_vertices(&sub).expect("proper subset of the cover");
                let got = forest_min_cover_size(&remaining);
                if got != cover_size - sub.len() {
                    report.deletion_ok = false;
                    report.failures.push(format!(
                        "deletion: cover {:?} minus {:?} left size {} != {}",
                        cover.as_slice(),
                        sub.as_slice(),
                        got,
                        cover_size - sub.len()
                    ));
                }
            } else {
                // C' = C: the remainder is an independent set, cover size 0.
                let remaining = t.delete_vertices(&sub).expect("cover is a proper subset");
                if forest_min_cover_size(&remaining) != 0 {
                    report.deletion_ok = false;
                    report
                        .failures
                        .push(format!("deletion: complement of {:?} is not independent", sub.as_slice()));
                }
            }
            let expanded = t.expand_subgraph(&sub).expect("nonempty subset");
            for comp in &expanded.components {
                let Some((comp_tree, labels)) = comp.to_tree() else {
                    continue;
                };
                let local_cover: VertexSet = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, orig)| sub.contains(**orig))
                    .map(|(local, _)| local)
                    .collect();
                let (comp_size, _) = min_vertex_cover(&comp_tree);
                if comp_size != local_cover.len() || !is_vertex_cover(&comp_tree, &local_cover) {
                    report.expansion_ok = false;
                    report.failures.push(format!(
                        "expansion: subset {:?} not minimum on component {:?} (expected {}, got {})",
                        sub.as_slice(),
                        comp.vertices(),
                        comp_size,
                        local_cover.len()
                    ));
                }
            }
        }
    }

    for z in always_excluded.iter() {
        let z_set: VertexSet = [z].into_iter().collect();
        let remaining = t.delete_vertices(&z_set).expect("single vertex");
        let got = forest_min_cover_size(&remaining);
        if got != cover_size {
            report.exclusion_ok = false;
            report.failures.push(format!(
                "exclusion: deleting always-excluded {} changed cover size {} -> {}",
                z, cover_size, got
            ));
        }
        for cover in &covers {
            if cover.contains(z) {
                report.exclusion_ok = false;
                report
                    .failures
                    .push(format!("exclusion: {} listed excluded but appears in {:?}", z, cover.as_slice()));
            }
        }
    }

    report
}

/// Exponential-time reference implementations, for validating the DP on
/// small instances. Subset enumeration over bitmasks; keep `n` below ~24.
pub mod oracle {
    use super::*;

    /// Minimum cover size and every minimum cover, by trying all `2^n`
    /// vertex subsets.
    pub fn min_covers_bruteforce(t: &Tree) -> (usize, Vec<VertexSet>) {
        let n = t.n();
        assert!(n <= 24, "oracle is exponential; n = {n} too large");
        let edges = t.edges();
        let mut best = n;
        let mut covers: Vec<VertexSet> = Vec::new();
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size > best {
                continue;
            }
            let covered = edges
                .iter()
                .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1);
            if !covered {
                continue;
            }
            if size < best {
                best = size;
                covers.clear();
            }
            covers.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
        (best, covers)
    }

    /// Maximum matching cardinality, by trying all edge subsets.
    pub fn max_matching_size_bruteforce(t: &Tree) -> usize {
        let edges = t.edges();
        let m = edges.len();
        assert!(m <= 24, "oracle is exponential; {m} edges too many");
        let mut best = 0;
        for mask in 0u32..(1 << m) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let mut used = 0u64;
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    continue;
                }
                let bits = 1u64 << u | 1u64 << v;
                if used & bits != 0 {
                    ok = false;
                    break;
                }
                used |= bits;
            }
            if ok {
                best = size;
            }
        }
        best
    }
}
