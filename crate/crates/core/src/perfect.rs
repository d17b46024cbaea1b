//! Quasiperfect and perfect star sets, augmentation, internal cuts, and
//! contraction of perfect sets.
//!
//! A [`LiveInstance`] is the shrinking SSC instance seen by the algorithms:
//! vertices are supervertices of the original instance and every star keeps
//! its original id while its sink set shrinks.

use std::collections::BTreeSet;

use crate::advisor::{choose_from, Advisor, ChoicePoint};
use crate::certificate::Cut;
use crate::error::{Error, Result};
use crate::graph::{adjacency_strongly_connected, Digraph, VertexId, VertexPartition};
use crate::instance::{SscInstance, StarId};
use crate::report::{IterationRecord, RecordKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveStar {
    pub id: StarId,
    pub source: VertexId,
    pub sinks: Vec<VertexId>,
}

impl LiveStar {
    pub fn has_sink(&self, v: VertexId) -> bool {
        self.sinks.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveInstance {
    partition: VertexPartition,
    stars: Vec<LiveStar>,
}

impl LiveInstance {
    pub fn new(base: &SscInstance) -> Self {
        Self {
            partition: VertexPartition::identity(base.vertex_count()),
            stars: base
                .stars()
                .iter()
                .enumerate()
                .map(|(id, s)| LiveStar {
                    id,
                    source: s.source,
                    sinks: s.sinks.clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.partition.current_count()
    }

    pub fn partition(&self) -> &VertexPartition {
        &self.partition
    }

    /// Live stars in increasing id order.
    pub fn stars(&self) -> &[LiveStar] {
        &self.stars
    }

    pub fn star(&self, id: StarId) -> Result<&LiveStar> {
        self.stars
            .binary_search_by_key(&id, |s| s.id)
            .map(|i| &self.stars[i])
            .map_err(|_| Error::DeadStar(id))
    }

    pub fn is_live(&self, id: StarId) -> bool {
        self.star(id).is_ok()
    }

    /// Sorted, deduplicated out-neighbor lists of the current digraph.
    pub fn out_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for s in &self.stars {
            adj[s.source].extend_from_slice(&s.sinks);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn digraph(&self) -> Digraph {
        let adj = self.out_adjacency();
        let arcs = adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
            .collect();
        Digraph::new(self.vertex_count(), arcs).expect("live stars are well formed")
    }

    pub fn is_strongly_connected(&self) -> bool {
        adjacency_strongly_connected(&self.out_adjacency())
    }

    pub fn stars_at(&self, v: VertexId) -> Vec<StarId> {
        self.stars
            .iter()
            .filter(|s| s.source == v)
            .map(|s| s.id)
            .collect()
    }

    /// Live stars containing arc `uv`, by increasing id.
    pub fn stars_with_arc(&self, u: VertexId, v: VertexId) -> Vec<StarId> {
        self.stars
            .iter()
            .filter(|s| s.source == u && s.has_sink(v))
            .map(|s| s.id)
            .collect()
    }

    /// Live stars leaving the vertex set given by `side`.
    pub fn crossing(&self, side: &[bool]) -> Vec<StarId> {
        self.stars
            .iter()
            .filter(|s| side[s.source] && s.sinks.iter().any(|&v| !side[v]))
            .map(|s| s.id)
            .collect()
    }

    /// Membership mask of a cut over current vertices.
    pub fn cut_mask(&self, cut: &[VertexId]) -> Result<Vec<bool>> {
        let n = self.vertex_count();
        let mut m = vec![false; n];
        for &v in cut {
            if v >= n {
                return Err(Error::InvalidCut);
            }
            m[v] = true;
        }
        let size = m.iter().filter(|&&b| b).count();
        if size == 0 || size == n {
            return Err(Error::InvalidCut);
        }
        Ok(m)
    }

    /// The cut expressed over original vertex ids.
    pub fn lift(&self, cut: &[VertexId]) -> Cut {
        Cut::new(self.partition.lift(cut))
    }

    /// Contract the sources of a perfect set into one supervertex.
    pub fn contract(&self, q: &[StarId]) -> Result<LiveInstance> {
        if !is_perfect(self, q)? {
            return Err(Error::NotPerfect);
        }
        let block = sources(self, q)?;
        let relabel = VertexPartition::merge_relabel(self.vertex_count(), &block)?;
        let partition = self.partition.merge(&block)?;
        let stars = self
            .stars
            .iter()
            .filter_map(|s| {
                let source = relabel[s.source];
                let mut sinks: Vec<_> = s
                    .sinks
                    .iter()
                    .map(|&v| relabel[v])
                    .filter(|&v| v != source)
                    .collect();
                sinks.sort_unstable();
                sinks.dedup();
                (!sinks.is_empty()).then_some(LiveStar {
                    id: s.id,
                    source,
                    sinks,
                })
            })
            .collect();
        Ok(LiveInstance { partition, stars })
    }
}

/// Sources of the stars in `q`, in the order of `q`.
pub fn sources(li: &LiveInstance, q: &[StarId]) -> Result<Vec<VertexId>> {
    q.iter().map(|&id| li.star(id).map(|s| s.source)).collect()
}

pub fn is_quasiperfect(li: &LiveInstance, q: &[StarId]) -> Result<bool> {
    let src = sources(li, q)?;
    if q.is_empty() {
        return Ok(false);
    }
    let distinct: BTreeSet<_> = src.iter().copied().collect();
    if distinct.len() != src.len() {
        return Ok(false);
    }
    // index sources 0..|q| and keep only arcs between them
    let index = |v: VertexId| src.iter().position(|&s| s == v);
    let mut adj = vec![Vec::new(); src.len()];
    for (i, &id) in q.iter().enumerate() {
        adj[i].extend(li.star(id)?.sinks.iter().filter_map(|&v| index(v)));
    }
    Ok(adjacency_strongly_connected(&adj))
}

pub fn is_perfect(li: &LiveInstance, q: &[StarId]) -> Result<bool> {
    if !is_quasiperfect(li, q)? {
        return Ok(false);
    }
    let src: BTreeSet<_> = sources(li, q)?.into_iter().collect();
    for &id in q {
        if li.star(id)?.sinks.iter().any(|v| !src.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First sink of a star in `q` (in `q` order) that is not a source of `q`.
fn external_sink(li: &LiveInstance, q: &[StarId], src: &BTreeSet<VertexId>) -> Option<VertexId> {
    q.iter().find_map(|&id| {
        li.star(id)
            .ok()?
            .sinks
            .iter()
            .copied()
            .find(|v| !src.contains(v))
    })
}

/// Depth-first search from `start` to any vertex of `targets`, never passing
/// through a target on the way. Returns the vertex sequence.
fn path_to_targets<A: Advisor + ?Sized>(
    adj: &[Vec<VertexId>],
    start: VertexId,
    targets: &BTreeSet<VertexId>,
    advisor: &mut A,
) -> Option<Vec<VertexId>> {
    let mut visited = vec![false; adj.len()];
    visited[start] = true;
    let mut path = vec![start];
    while let Some(&x) = path.last() {
        let open: Vec<_> = adj[x].iter().copied().filter(|&y| !visited[y]).collect();
        if open.is_empty() {
            path.pop();
            continue;
        }
        let y = choose_from(advisor, ChoicePoint::AugmentStep, &open);
        path.push(y);
        if targets.contains(&y) {
            return Some(path);
        }
        visited[y] = true;
    }
    None
}

/// Grow a quasiperfect set into a perfect one: while some star of the set
/// has a sink outside the sources, route a path from that sink back to the
/// sources and add one star per path arc.
pub fn augment_to_perfect<A: Advisor + ?Sized>(
    li: &LiveInstance,
    q: &[StarId],
    advisor: &mut A,
) -> Result<Vec<StarId>> {
    if !is_quasiperfect(li, q)? {
        return Err(Error::NotQuasiperfect);
    }
    let adj = li.out_adjacency();
    let mut q = q.to_vec();
    let mut src: BTreeSet<_> = sources(li, &q)?.into_iter().collect();
    while let Some(u) = external_sink(li, &q, &src) {
        let path = path_to_targets(&adj, u, &src, advisor).ok_or(Error::NotStronglyConnected)?;
        for arc in path.windows(2) {
            let star = choose_from(
                advisor,
                ChoicePoint::StarForArc,
                &li.stars_with_arc(arc[0], arc[1]),
            );
            q.push(star);
            src.insert(arc[0]);
        }
    }
    Ok(q)
}

/// Every star leaving the cut has its source and all sinks among the
/// sources of `q`.
pub fn is_internal_cut(li: &LiveInstance, q: &[StarId], cut: &[VertexId]) -> Result<bool> {
    let mask = li.cut_mask(cut)?;
    let src: BTreeSet<_> = sources(li, q)?.into_iter().collect();
    for id in li.crossing(&mask) {
        let s = li.star(id)?;
        if !src.contains(&s.source) || s.sinks.iter().any(|v| !src.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No live star leaves both cuts.
pub fn are_star_disjoint(li: &LiveInstance, a: &[VertexId], b: &[VertexId]) -> Result<bool> {
    let ca: BTreeSet<_> = li.crossing(&li.cut_mask(a)?).into_iter().collect();
    let cb = li.crossing(&li.cut_mask(b)?);
    Ok(cb.iter().all(|id| !ca.contains(id)))
}

/// A perfect set chosen by one iteration, with its internal cuts over
/// current vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub stars: Vec<StarId>,
    pub cuts: Vec<Vec<VertexId>>,
    pub kind: RecordKind,
}

/// Check that a selection is perfect, that its cuts are internal, pairwise
/// star-disjoint, and sized as its kind promises.
pub fn check_selection(li: &LiveInstance, sel: &Selection) -> Result<()> {
    let fail = |msg: String| Err(Error::Construction(msg));
    if !is_perfect(li, &sel.stars)? {
        return fail(format!("stars {:?} are not perfect", sel.stars));
    }
    for cut in &sel.cuts {
        if cut.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!(
                "cut {cut:?} is not a strictly increasing vertex list"
            ));
        }
        if !is_internal_cut(li, &sel.stars, cut)? {
            return fail(format!("cut {cut:?} is not internal to {:?}", sel.stars));
        }
    }
    for (i, a) in sel.cuts.iter().enumerate() {
        for b in &sel.cuts[i + 1..] {
            if !are_star_disjoint(li, a, b)? {
                return fail(format!("cuts {a:?} and {b:?} share a star"));
            }
        }
    }
    let sized = match sel.kind {
        RecordKind::Cycle => false,
        RecordKind::BigOneCut => sel.stars.len() >= 4 && sel.cuts.len() == 1,
        RecordKind::TwoCuts => sel.cuts.len() == 2,
    };
    if !sized {
        return fail(format!(
            "{:?} with {} stars and {} cuts",
            sel.kind,
            sel.stars.len(),
            sel.cuts.len()
        ));
    }
    Ok(())
}

/// Run `step` until a single vertex is left, contracting each selection.
/// Every selection is validated before it is contracted.
pub fn contract_until_done<A, F>(
    base: &SscInstance,
    advisor: &mut A,
    mut step: F,
) -> Result<Vec<IterationRecord>>
where
    A: Advisor + ?Sized,
    F: FnMut(&LiveInstance, &mut A) -> Result<Selection>,
{
    let mut li = LiveInstance::new(base);
    let mut records = Vec::new();
    while li.vertex_count() > 1 {
        let sel = step(&li, advisor)?;
        check_selection(&li, &sel)?;
        let mut selected = sel.stars.clone();
        selected.sort_unstable();
        records.push(IterationRecord {
            selected,
            cuts: sel.cuts.iter().map(|c| li.lift(c)).collect(),
            kind: sel.kind,
        });
        li = li.contract(&sel.stars)?;
    }
    Ok(records)
}
