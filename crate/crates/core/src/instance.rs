//! Problem instances, the conversions between DPA and bidirected SSC, and
//! the two feasibility semantics (connectivity and cut covering).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{adjacency_strongly_connected, reach, Digraph, Multigraph, VertexId};

pub type StarId = usize;

/// Default vertex limit for [`check_cut_feasible`].
pub const CUT_ENUMERATION_LIMIT: usize = 12;

/// A set of arcs sharing one source. Sinks are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Star {
    pub source: VertexId,
    pub sinks: Vec<VertexId>,
}

impl Star {
    pub fn new<I: IntoIterator<Item = VertexId>>(source: VertexId, sinks: I) -> Self {
        let mut sinks: Vec<_> = sinks.into_iter().collect();
        sinks.sort_unstable();
        sinks.dedup();
        Self { source, sinks }
    }

    pub fn has_sink(&self, v: VertexId) -> bool {
        self.sinks.binary_search(&v).is_ok()
    }

    pub fn contains_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.source == u && self.has_sink(v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.sinks.iter().map(move |&v| (self.source, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SscInstance {
    vertex_count: usize,
    stars: Vec<Star>,
}

impl SscInstance {
    /// Validates star shape and strong connectivity of the arc union.
    pub fn new(vertex_count: usize, stars: Vec<Star>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter(
                "instance needs at least one vertex".into(),
            ));
        }
        for (id, star) in stars.iter().enumerate() {
            for &x in std::iter::once(&star.source).chain(&star.sinks) {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: vertex_count,
                    });
                }
            }
            if star.sinks.is_empty() || star.has_sink(star.source) {
                return Err(Error::MalformedStar(id));
            }
        }
        let instance = Self {
            vertex_count,
            stars: stars
                .into_iter()
                .map(|s| Star::new(s.source, s.sinks))
                .collect(),
        };
        if !instance.star_subset_connects(0..instance.stars.len()) {
            return Err(Error::NotStronglyConnected);
        }
        Ok(instance)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn star(&self, id: StarId) -> Result<&Star> {
        self.stars.get(id).ok_or(Error::UnknownId(id))
    }

    /// The arc union of all stars, deduplicated, in star order.
    pub fn derived_digraph(&self) -> Digraph {
        let mut seen = BTreeSet::new();
        let arcs = self
            .stars
            .iter()
            .flat_map(Star::arcs)
            .filter(|a| seen.insert(*a))
            .collect();
        Digraph::new(self.vertex_count, arcs).expect("stars were validated")
    }

    pub fn is_bidirected(&self) -> bool {
        self.derived_digraph().is_bidirected()
    }

    fn star_subset_connects<I: IntoIterator<Item = StarId>>(&self, ids: I) -> bool {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for id in ids {
            let s = &self.stars[id];
            adj[s.source].extend_from_slice(&s.sinks);
        }
        adjacency_strongly_connected(&adj)
    }

    /// Whether the selected stars span a strongly connected digraph.
    pub fn is_feasible(&self, selected: &[StarId]) -> Result<bool> {
        if let Some(&bad) = selected.iter().find(|&&id| id >= self.stars.len()) {
            return Err(Error::UnknownId(bad));
        }
        Ok(self.star_subset_connects(selected.iter().copied()))
    }

    /// Star ids with source inside `side` and some sink outside.
    pub fn crossing_stars(&self, side: &[bool]) -> Vec<StarId> {
        self.stars
            .iter()
            .enumerate()
            .filter(|(_, s)| side[s.source] && s.sinks.iter().any(|&v| !side[v]))
            .map(|(id, _)| id)
            .collect()
    }
}

/// MSCS input: a strongly connected digraph where every arc costs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MscsInstance {
    digraph: Digraph,
}

impl MscsInstance {
    pub fn new(digraph: Digraph) -> Result<Self> {
        if digraph.vertex_count() == 0 {
            return Err(Error::InvalidParameter(
                "instance needs at least one vertex".into(),
            ));
        }
        if !digraph.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        Ok(Self { digraph })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// Whether the selected arcs span a strongly connected digraph.
    pub fn is_feasible(&self, selected: &[usize]) -> Result<bool> {
        let arcs = self.digraph.arcs();
        let mut adj = vec![Vec::new(); self.digraph.vertex_count()];
        for &id in selected {
            let &(u, v) = arcs.get(id).ok_or(Error::UnknownId(id))?;
            adj[u].push(v);
        }
        Ok(adjacency_strongly_connected(&adj))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpaEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: u8,
}

/// DPA input: an undirected graph with {0,1} edge costs, read as the
/// bidirected digraph with equal costs on both arcs of every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpaInstance {
    vertex_count: usize,
    edges: Vec<DpaEdge>,
}

impl DpaInstance {
    /// Validates the edge list and feasibility (all-high-power strong
    /// connectivity, i.e. connectivity of the underlying graph).
    pub fn new(vertex_count: usize, edges: Vec<DpaEdge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter(
                "instance needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: vertex_count,
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
            if e.cost > 1 {
                return Err(Error::BadCost(e.cost));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::DuplicateEdge(e.u, e.v));
            }
        }
        let instance = Self {
            vertex_count,
            edges,
        };
        let all: Vec<_> = (0..vertex_count).collect();
        if !dpa_induced_graph(&instance, &all).is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        Ok(instance)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[DpaEdge] {
        &self.edges
    }

    /// Whether raising the `high` vertices to high power makes the induced
    /// digraph strongly connected.
    pub fn is_feasible(&self, high: &[VertexId]) -> Result<bool> {
        if let Some(&bad) = high.iter().find(|&&v| v >= self.vertex_count) {
            return Err(Error::UnknownId(bad));
        }
        Ok(dpa_induced_graph(self, high).is_strongly_connected())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoEcsInstance {
    graph: Multigraph,
}

impl TwoEcsInstance {
    pub fn new(graph: Multigraph) -> Result<Self> {
        if graph.vertex_count() == 0 {
            return Err(Error::InvalidParameter(
                "instance needs at least one vertex".into(),
            ));
        }
        if !graph.is_two_edge_connected() {
            return Err(Error::NotTwoEdgeConnected);
        }
        Ok(Self { graph })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    /// Whether the selected edges form a 2-edge-connected spanning subgraph.
    pub fn is_feasible(&self, selected: &[usize]) -> Result<bool> {
        let edges = self.graph.edges();
        let mut sub = Vec::with_capacity(selected.len());
        for &id in selected {
            sub.push(*edges.get(id).ok_or(Error::UnknownId(id))?);
        }
        Ok(Multigraph::new(self.graph.vertex_count(), sub)?.is_two_edge_connected())
    }
}

/// Any of the four supported inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ssc(SscInstance),
    Mscs(MscsInstance),
    Dpa(DpaInstance),
    TwoEcs(TwoEcsInstance),
}

impl Instance {
    pub fn vertex_count(&self) -> usize {
        match self {
            Instance::Ssc(s) => s.vertex_count(),
            Instance::Mscs(m) => m.digraph().vertex_count(),
            Instance::Dpa(d) => d.vertex_count(),
            Instance::TwoEcs(t) => t.graph().vertex_count(),
        }
    }
}

/// Feasibility by direct connectivity test. `solution` holds star ids,
/// arc ids, high-power vertices or edge ids depending on the problem.
pub fn check_feasible(instance: &Instance, solution: &[usize]) -> Result<bool> {
    match instance {
        Instance::Ssc(s) => s.is_feasible(solution),
        Instance::Mscs(m) => m.is_feasible(solution),
        Instance::Dpa(d) => d.is_feasible(solution),
        Instance::TwoEcs(t) => t.is_feasible(solution),
    }
}

/// Feasibility through the cut formulation: every cut is left by some
/// selected star. Enumerates all `2^n - 2` cuts.
pub fn check_cut_feasible(s: &SscInstance, solution: &[StarId], limit: usize) -> Result<bool> {
    let n = s.vertex_count();
    if n > limit.min(63) {
        return Err(Error::TooLarge { size: n, limit });
    }
    let mut masks = Vec::with_capacity(solution.len());
    for &id in solution {
        let star = s.star(id)?;
        let sinks = star.sinks.iter().fold(0u64, |m, &v| m | 1 << v);
        masks.push((1u64 << star.source, sinks));
    }
    let full = (1u64 << n) - 1;
    Ok((1..full).all(|side| {
        masks
            .iter()
            .any(|&(src, sinks)| side & src != 0 && sinks & !side != 0)
    }))
}

/// Arc `xy` is present iff edge `{x,y}` exists and it costs 0 or `x` is high.
pub fn dpa_induced_graph(d: &DpaInstance, high: &[VertexId]) -> Digraph {
    let mut is_high = vec![false; d.vertex_count()];
    for &v in high {
        is_high[v] = true;
    }
    let mut arcs = Vec::new();
    for e in d.edges() {
        if e.cost == 0 || is_high[e.u] {
            arcs.push((e.u, e.v));
        }
        if e.cost == 0 || is_high[e.v] {
            arcs.push((e.v, e.u));
        }
    }
    Digraph::new(d.vertex_count(), arcs).expect("edges were validated")
}

/// Result of [`dpa_to_ssc`]: the SSC instance plus the star/vertex bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpaConversion {
    pub ssc: SscInstance,
    /// DPA vertex owning each star.
    pub star_vertex: Vec<VertexId>,
    /// SSC vertex (zero-cost component) of each DPA vertex.
    pub component: Vec<VertexId>,
}

impl DpaConversion {
    /// High-power vertices for a star solution.
    pub fn to_power(&self, stars: &[StarId]) -> Vec<VertexId> {
        let mut high: Vec<_> = stars.iter().map(|&f| self.star_vertex[f]).collect();
        high.sort_unstable();
        high
    }

    /// Stars for a set of high-power vertices; vertices without a star are
    /// dropped since raising them adds no arc between components.
    pub fn to_stars(&self, high: &[VertexId]) -> Vec<StarId> {
        let set: BTreeSet<_> = high.iter().copied().collect();
        (0..self.star_vertex.len())
            .filter(|&f| set.contains(&self.star_vertex[f]))
            .collect()
    }
}

/// One SSC vertex per zero-cost component, one star per DPA vertex that has
/// an edge leaving its component. Stars are numbered by DPA vertex.
pub fn dpa_to_ssc(d: &DpaInstance) -> Result<DpaConversion> {
    let n = d.vertex_count();
    let mut zero = vec![Vec::new(); n];
    for e in d.edges().iter().filter(|e| e.cost == 0) {
        zero[e.u].push(e.v);
        zero[e.v].push(e.u);
    }
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        if component[v] == usize::MAX {
            for (u, r) in reach(&zero, v).into_iter().enumerate() {
                if r {
                    component[u] = count;
                }
            }
            count += 1;
        }
    }
    let mut sinks: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for e in d.edges() {
        let (cu, cv) = (component[e.u], component[e.v]);
        if cu != cv {
            sinks.entry(e.u).or_default().insert(cv);
            sinks.entry(e.v).or_default().insert(cu);
        }
    }
    let mut stars = Vec::new();
    let mut star_vertex = Vec::new();
    for (v, set) in sinks {
        stars.push(Star::new(component[v], set));
        star_vertex.push(v);
    }
    Ok(DpaConversion {
        ssc: SscInstance::new(count, stars)?,
        star_vertex,
        component,
    })
}

/// One DPA vertex per star. Stars sharing a source are tied together by a
/// zero-cost cycle; stars holding opposite arcs `uv`, `vu` get a cost-1 edge.
pub fn ssc_to_dpa(s: &SscInstance) -> Result<DpaInstance> {
    if let Some((u, v)) = s.derived_digraph().first_unmatched_arc() {
        return Err(Error::NotBidirected(u, v));
    }
    let mut by_source: BTreeMap<VertexId, Vec<StarId>> = BTreeMap::new();
    for (id, star) in s.stars().iter().enumerate() {
        by_source.entry(star.source).or_default().push(id);
    }
    let mut edges = Vec::new();
    for group in by_source.values() {
        match group.len() {
            1 => {}
            2 => edges.push(DpaEdge {
                u: group[0],
                v: group[1],
                cost: 0,
            }),
            len => {
                for i in 0..len {
                    edges.push(DpaEdge {
                        u: group[i],
                        v: group[(i + 1) % len],
                        cost: 0,
                    });
                }
            }
        }
    }
    let mut paired = BTreeSet::new();
    for (f, a) in s.stars().iter().enumerate() {
        for &v in &a.sinks {
            for &g in by_source.get(&v).into_iter().flatten() {
                if s.stars()[g].has_sink(a.source) && paired.insert((f.min(g), f.max(g))) {
                    edges.push(DpaEdge {
                        u: f.min(g),
                        v: f.max(g),
                        cost: 1,
                    });
                }
            }
        }
    }
    DpaInstance::new(s.stars().len(), edges)
}

/// One singleton star per arc, in arc order.
pub fn mscs_to_ssc(g: &Digraph) -> Result<SscInstance> {
    let stars = g.arcs().iter().map(|&(u, v)| Star::new(u, [v])).collect();
    SscInstance::new(g.vertex_count(), stars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i1() -> SscInstance {
        SscInstance::new(2, vec![Star::new(0, [1]), Star::new(1, [0])]).unwrap()
    }

    fn i2() -> SscInstance {
        mscs_to_ssc(&Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()).unwrap()
    }

    fn edge(u: usize, v: usize, cost: u8) -> DpaEdge {
        DpaEdge { u, v, cost }
    }

    #[test]
    fn rejects_malformed_stars() {
        assert_eq!(
            SscInstance::new(2, vec![Star::new(0, [0, 1]), Star::new(1, [0])]),
            Err(Error::MalformedStar(0))
        );
        assert_eq!(
            SscInstance::new(2, vec![Star::new(0, []), Star::new(1, [0])]),
            Err(Error::MalformedStar(0))
        );
        assert_eq!(
            SscInstance::new(2, vec![Star::new(0, [1])]),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn triangle_feasibility() {
        let s = i2();
        assert!(s.is_feasible(&[0, 1, 2]).unwrap());
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert!(!s.is_feasible(&pair).unwrap());
        }
        assert_eq!(s.is_feasible(&[5]), Err(Error::UnknownId(5)));
    }

    #[test]
    fn cut_semantics_examples() {
        let s = i2();
        assert!(check_cut_feasible(&s, &[0, 1, 2], CUT_ENUMERATION_LIMIT).unwrap());
        assert!(!check_cut_feasible(&s, &[0, 1], CUT_ENUMERATION_LIMIT).unwrap());
        assert!(!check_cut_feasible(&i1(), &[0], CUT_ENUMERATION_LIMIT).unwrap());
        assert!(check_cut_feasible(&i1(), &[0, 1], CUT_ENUMERATION_LIMIT).unwrap());
        assert!(matches!(
            check_cut_feasible(&s, &[0], 2),
            Err(Error::TooLarge { size: 3, limit: 2 })
        ));
    }

    #[test]
    fn dpa_all_unit_triangle() {
        let d = DpaInstance::new(3, vec![edge(0, 1, 1), edge(1, 2, 1), edge(2, 0, 1)]).unwrap();
        let conv = dpa_to_ssc(&d).unwrap();
        assert_eq!(conv.ssc.vertex_count(), 3);
        assert_eq!(conv.ssc.stars().len(), 3);
        assert_eq!(conv.ssc.stars()[0], Star::new(0, [1, 2]));
        assert!(conv.ssc.is_bidirected());
    }

    #[test]
    fn dpa_single_zero_edge_collapses() {
        let d = DpaInstance::new(2, vec![edge(0, 1, 0)]).unwrap();
        let conv = dpa_to_ssc(&d).unwrap();
        assert_eq!(conv.ssc.vertex_count(), 1);
        assert!(conv.ssc.stars().is_empty());
        assert!(d.is_feasible(&[]).unwrap());
    }

    #[test]
    fn dpa_mixed_components() {
        // {0,1} joined at zero cost, 2 reached by unit edges from both
        let d = DpaInstance::new(3, vec![edge(0, 1, 0), edge(1, 2, 1), edge(2, 0, 1)]).unwrap();
        let conv = dpa_to_ssc(&d).unwrap();
        assert_eq!(conv.component, vec![0, 0, 1]);
        assert_eq!(conv.star_vertex, vec![0, 1, 2]);
        assert_eq!(
            conv.ssc.stars(),
            &[Star::new(0, [1]), Star::new(0, [1]), Star::new(1, [0])]
        );
        assert_eq!(conv.to_power(&[1, 2]), vec![1, 2]);
        assert_eq!(conv.to_stars(&[0, 2]), vec![0, 2]);
    }

    #[test]
    fn dpa_validation() {
        assert_eq!(
            DpaInstance::new(2, vec![edge(0, 1, 1), edge(1, 0, 0)]),
            Err(Error::DuplicateEdge(1, 0))
        );
        assert_eq!(
            DpaInstance::new(2, vec![edge(0, 1, 2)]),
            Err(Error::BadCost(2))
        );
        assert_eq!(
            DpaInstance::new(3, vec![edge(0, 1, 1)]),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn ssc_to_dpa_two_vertices() {
        let d = ssc_to_dpa(&i1()).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edges(), &[edge(0, 1, 1)]);
    }

    #[test]
    fn ssc_to_dpa_shared_source_gets_zero_edges() {
        let s = SscInstance::new(
            2,
            vec![Star::new(0, [1]), Star::new(0, [1]), Star::new(1, [0])],
        )
        .unwrap();
        let d = ssc_to_dpa(&s).unwrap();
        assert!(d.edges().contains(&edge(0, 1, 0)));
        assert!(d.edges().contains(&edge(0, 2, 1)));
        assert!(d.edges().contains(&edge(1, 2, 1)));
        assert_eq!(d.edges().len(), 3);
    }

    #[test]
    fn ssc_to_dpa_requires_bidirected() {
        assert!(matches!(ssc_to_dpa(&i2()), Err(Error::NotBidirected(..))));
    }

    #[test]
    fn induced_graph() {
        let d = DpaInstance::new(2, vec![edge(0, 1, 1)]).unwrap();
        assert_eq!(dpa_induced_graph(&d, &[0]).arcs(), &[(0, 1)]);
        let z = DpaInstance::new(3, vec![edge(0, 1, 0), edge(1, 2, 0)]).unwrap();
        let g = dpa_induced_graph(&z, &[]);
        assert!(g.is_bidirected() && g.is_strongly_connected());
    }

    #[test]
    fn mscs_stars_follow_arcs() {
        let g = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let s = mscs_to_ssc(&g).unwrap();
        assert_eq!(s.stars(), &[Star::new(0, [1]), Star::new(1, [0])]);
        assert_eq!(i2().stars().len(), 3);
    }

    #[test]
    fn two_ecs_feasibility() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        let t = TwoEcsInstance::new(g).unwrap();
        assert!(t.is_feasible(&[0, 1, 2]).unwrap());
        assert!(!t.is_feasible(&[0, 3]).unwrap());
        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(TwoEcsInstance::new(path), Err(Error::NotTwoEdgeConnected));
    }
}
