//! Directed and undirected multigraph primitives.
//!
//! Vertex ids are dense `0..vertex_count`; file formats shift them to 1-based.
//! Arc and edge ids are positions in the arc/edge list and never change for a
//! given value. Contraction produces a fresh value plus a [`VertexPartition`]
//! so that anything computed on the contracted graph can be lifted back to the
//! original vertex ids.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArcId = usize;
pub type EdgeId = usize;

fn check_endpoints(n: usize, u: VertexId, v: VertexId) -> Result<()> {
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                count: n,
            });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok(())
}

/// Vertices reachable from `start` in an adjacency-list graph.
pub(crate) fn reach(adj: &[Vec<VertexId>], start: VertexId) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Strong connectivity of an adjacency-list digraph: forward and backward
/// reachability from vertex 0 both cover everything.
pub(crate) fn adjacency_strongly_connected(out: &[Vec<VertexId>]) -> bool {
    let n = out.len();
    if n <= 1 {
        return true;
    }
    if !reach(out, 0).iter().all(|&b| b) {
        return false;
    }
    let mut rev = vec![Vec::new(); n];
    for (u, vs) in out.iter().enumerate() {
        for &v in vs {
            rev[v].push(u);
        }
    }
    reach(&rev, 0).iter().all(|&b| b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<(VertexId, VertexId)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for &(u, v) in &arcs {
            check_endpoints(vertex_count, u, v)?;
        }
        Ok(Self { vertex_count, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    /// Deduplicated, sorted out-adjacency lists.
    pub fn out_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn out_neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.arcs.iter().filter(|a| a.0 == v).map(|a| a.1).collect()
    }

    pub fn in_neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.arcs.iter().filter(|a| a.1 == v).map(|a| a.0).collect()
    }

    /// Vertices joined to `v` by an arc in either direction.
    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut set = self.out_neighbors(v);
        set.extend(self.in_neighbors(v));
        set
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn is_strongly_connected(&self) -> bool {
        adjacency_strongly_connected(&self.out_adjacency())
    }

    /// Every arc `uv` has its reverse `vu`.
    pub fn is_bidirected(&self) -> bool {
        self.first_unmatched_arc().is_none()
    }

    pub(crate) fn first_unmatched_arc(&self) -> Option<(VertexId, VertexId)> {
        let set: BTreeSet<_> = self.arcs.iter().copied().collect();
        set.iter().copied().find(|&(u, v)| !set.contains(&(v, u)))
    }

    /// Vertices reachable from `start` using only arcs for which `forbidden`
    /// returns false. `start` is always included.
    pub fn reachable_avoiding<F>(&self, start: VertexId, forbidden: F) -> BTreeSet<VertexId>
    where
        F: Fn(ArcId, VertexId, VertexId) -> bool,
    {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (id, &(u, v)) in self.arcs.iter().enumerate() {
            if !forbidden(id, u, v) {
                adj[u].push(v);
            }
        }
        reach(&adj, start)
            .into_iter()
            .enumerate()
            .filter_map(|(v, r)| r.then_some(v))
            .collect()
    }

    /// Merge `block` into one vertex. Arcs inside the block disappear and
    /// duplicate arcs are merged (first occurrence kept, order preserved).
    pub fn contract(&self, block: &[VertexId]) -> Result<(Digraph, VertexPartition)> {
        let part = VertexPartition::identity(self.vertex_count).merge(block)?;
        let mut seen = BTreeSet::new();
        let mut arcs = Vec::new();
        for &(u, v) in &self.arcs {
            let (a, b) = (part.current_of(u), part.current_of(v));
            if a != b && seen.insert((a, b)) {
                arcs.push((a, b));
            }
        }
        Ok((
            Digraph {
                vertex_count: part.current_count(),
                arcs,
            },
            part,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
}

/// Result of contracting a multigraph: surviving edges keep their relative
/// order and `edge_origin[i]` is the id the i-th new edge had before.
#[derive(Debug, Clone)]
pub struct MultiContraction {
    pub graph: Multigraph,
    pub partition: VertexPartition,
    pub edge_origin: Vec<EdgeId>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for &(u, v) in &edges {
            check_endpoints(vertex_count, u, v)?;
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Incidence lists of (neighbor, edge id), sorted by neighbor then id.
    pub fn incidence(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((v, id));
            inc[v].push((u, id));
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let adj: Vec<Vec<VertexId>> = self
            .incidence()
            .into_iter()
            .map(|l| l.into_iter().map(|(v, _)| v).collect())
            .collect();
        reach(&adj, 0).iter().all(|&b| b)
    }

    /// Ids of bridge edges. Parallel edges are never bridges.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let n = self.vertex_count;
        let inc = self.incidence();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut bridges = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, edge used to enter it, next incidence index)
            let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(top) = stack.last_mut() {
                let (u, via, idx) = *top;
                if idx < inc[u].len() {
                    top.2 += 1;
                    let (v, e) = inc[u][idx];
                    if Some(e) == via {
                        continue;
                    }
                    if disc[v] == usize::MAX {
                        disc[v] = time;
                        low[v] = time;
                        time += 1;
                        stack.push((v, Some(e), 0));
                    } else {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > disc[p] {
                            bridges.push(via.expect("non-root vertex has an entry edge"));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Connected and bridgeless. A single vertex qualifies.
    pub fn is_two_edge_connected(&self) -> bool {
        self.vertex_count >= 1 && self.is_connected() && self.bridges().is_empty()
    }

    /// Merge `block` into one vertex, deleting edges inside it and keeping
    /// every other edge, parallels included.
    pub fn contract(&self, block: &[VertexId]) -> Result<MultiContraction> {
        let partition = VertexPartition::identity(self.vertex_count).merge(block)?;
        let mut edges = Vec::new();
        let mut edge_origin = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            let (a, b) = (partition.current_of(u), partition.current_of(v));
            if a != b {
                edges.push((a, b));
                edge_origin.push(id);
            }
        }
        Ok(MultiContraction {
            graph: Multigraph {
                vertex_count: partition.current_count(),
                edges,
            },
            partition,
            edge_origin,
        })
    }
}

/// Mapping from original vertex ids to current (contracted) vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    map: Vec<VertexId>,
    current_count: usize,
}

impl VertexPartition {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            current_count: n,
        }
    }

    pub fn original_count(&self) -> usize {
        self.map.len()
    }

    pub fn current_count(&self) -> usize {
        self.current_count
    }

    pub fn current_of(&self, original: VertexId) -> VertexId {
        self.map[original]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.map
    }

    /// Relabelling applied by [`merge`](Self::merge): block members go to the
    /// smallest block member, and the surviving ids are compacted in order.
    pub fn merge_relabel(current_count: usize, block: &[VertexId]) -> Result<Vec<VertexId>> {
        let Some(&rep) = block.iter().min() else {
            return Err(Error::EmptyBlock);
        };
        if let Some(&bad) = block.iter().find(|&&v| v >= current_count) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                count: current_count,
            });
        }
        let mut in_block = vec![false; current_count];
        for &v in block {
            in_block[v] = true;
        }
        let mut relabel = vec![0; current_count];
        let mut next = 0;
        for v in 0..current_count {
            if !in_block[v] || v == rep {
                relabel[v] = next;
                next += 1;
            }
        }
        for v in 0..current_count {
            if in_block[v] {
                relabel[v] = relabel[rep];
            }
        }
        Ok(relabel)
    }

    /// Merge a block of *current* vertices into one.
    pub fn merge(&self, block: &[VertexId]) -> Result<Self> {
        let relabel = Self::merge_relabel(self.current_count, block)?;
        let current_count = relabel.iter().max().map_or(0, |m| m + 1);
        Ok(Self {
            map: self.map.iter().map(|&c| relabel[c]).collect(),
            current_count,
        })
    }

    /// Original vertices that currently live in `current`.
    pub fn members(&self, current: VertexId) -> Vec<VertexId> {
        (0..self.map.len())
            .filter(|&o| self.map[o] == current)
            .collect()
    }

    /// Lift a set of current vertices to the sorted set of original vertices
    /// they contain.
    pub fn lift<'a, I>(&self, current: I) -> Vec<VertexId>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let mut mark = vec![false; self.current_count];
        for &c in current {
            mark[c] = true;
        }
        (0..self.map.len()).filter(|&o| mark[self.map[o]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Digraph {
        Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn cycle4() -> Multigraph {
        Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k4() -> Multigraph {
        Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn strong_connectivity() {
        assert!(triangle().is_strongly_connected());
        assert!(!Digraph::new(3, vec![(0, 1), (1, 2)])
            .unwrap()
            .is_strongly_connected());
        assert!(Digraph::new(1, vec![]).unwrap().is_strongly_connected());
    }

    #[test]
    fn two_edge_connectivity() {
        assert!(cycle4().is_two_edge_connected());
        assert!(!Multigraph::new(3, vec![(0, 1), (1, 2)])
            .unwrap()
            .is_two_edge_connected());
        assert!(Multigraph::new(2, vec![(0, 1), (0, 1)])
            .unwrap()
            .is_two_edge_connected());
        assert!(Multigraph::new(1, vec![]).unwrap().is_two_edge_connected());
        // two triangles sharing a bridge
        let g = Multigraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)],
        )
        .unwrap();
        assert_eq!(g.bridges(), vec![3]);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Digraph::new(2, vec![(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Multigraph::new(2, vec![(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn neighbor_sets() {
        assert_eq!(triangle().out_neighbors(0), BTreeSet::from([1]));
        let bi = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(bi.neighbors(0), BTreeSet::from([1]));
        assert_eq!(bi.in_neighbors(0), bi.out_neighbors(0));
        assert_eq!(k4().neighbors(0), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn contract_whole_cycle() {
        let c = cycle4().contract(&[0, 1, 2, 3]).unwrap();
        assert_eq!(c.graph.vertex_count(), 1);
        assert!(c.graph.edges().is_empty());
    }

    #[test]
    fn contract_pair_of_cycle() {
        let c = cycle4().contract(&[0, 1]).unwrap();
        assert_eq!(c.graph.vertex_count(), 3);
        // s=0, old 2 -> 1, old 3 -> 2
        assert_eq!(c.graph.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(c.edge_origin, vec![1, 2, 3]);
    }

    #[test]
    fn contract_k4_keeps_parallels() {
        let c = k4().contract(&[0, 1]).unwrap();
        assert_eq!(c.graph.vertex_count(), 3);
        let mut edges: Vec<_> = c
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort();
        // s-3 twice, s-4 twice, 3-4 once (in new ids: 0-1 x2, 0-2 x2, 1-2)
        assert_eq!(edges, vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)]);
        assert_eq!(c.edge_origin, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn contract_errors() {
        assert_eq!(cycle4().contract(&[]).unwrap_err(), Error::EmptyBlock);
        assert!(matches!(
            cycle4().contract(&[7]),
            Err(Error::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn digraph_contract_merges_duplicates() {
        let g = Digraph::new(3, vec![(0, 2), (1, 2), (2, 0), (2, 1)]).unwrap();
        let (h, part) = g.contract(&[0, 1]).unwrap();
        assert_eq!(h.arcs(), &[(0, 1), (1, 0)]);
        assert_eq!(part.as_slice(), &[0, 0, 1]);
        assert_eq!(part.lift(&[0]), vec![0, 1]);
    }

    #[test]
    fn reachable_avoiding_examples() {
        let t = triangle();
        let inside = |_: ArcId, u: VertexId, v: VertexId| u < 3 && v < 3;
        assert_eq!(t.reachable_avoiding(1, inside), BTreeSet::from([1]));
        assert_eq!(
            t.reachable_avoiding(0, |_, _, _| false),
            BTreeSet::from([0, 1, 2])
        );
        let path = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            path.reachable_avoiding(0, |_, u, v| (u, v) == (1, 2)),
            BTreeSet::from([0, 1])
        );
    }

    #[test]
    fn partition_merges_compose() {
        let p = VertexPartition::identity(5).merge(&[1, 3]).unwrap();
        assert_eq!(p.as_slice(), &[0, 1, 2, 1, 3]);
        let q = p.merge(&[0, 3]).unwrap();
        assert_eq!(q.as_slice(), &[0, 1, 2, 1, 0]);
        assert_eq!(q.members(0), vec![0, 4]);
        assert_eq!(q.current_count(), 3);
    }
}
