//! 3/2-approximation for 2ECS by repeatedly contracting a cycle that has a
//! vertex whose every incident edge stays inside the cycle.

use crate::advisor::{choose_from, Advisor, ChoicePoint};
use crate::certificate::Cut;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId, VertexPartition};
use crate::instance::TwoEcsInstance;
use crate::report::{IterationRecord, Problem, RecordKind, RunReport};

/// A cycle given by its vertices in order and the edge after each vertex
/// (the last edge closes the cycle). All neighbors of `cut_vertex` lie on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub cut_vertex: VertexId,
}

/// Oriented edges `(u, v, id)` in edge id order, forward orientation first.
pub fn start_candidates(g: &Multigraph) -> Vec<(VertexId, VertexId, EdgeId)> {
    g.edges()
        .iter()
        .enumerate()
        .flat_map(|(id, &(u, v))| [(u, v, id), (v, u, id)])
        .collect()
}

/// Neighbors of the last path vertex that are not on the path, sorted.
pub fn extension_candidates(g: &Multigraph, path: &[VertexId]) -> Vec<VertexId> {
    let last = *path.last().expect("path is nonempty");
    g.neighbors(last)
        .into_iter()
        .filter(|v| !path.contains(v))
        .collect()
}

fn smallest_edge(
    incidence: &[Vec<(VertexId, EdgeId)>],
    u: VertexId,
    v: VertexId,
    except: Option<EdgeId>,
) -> Option<EdgeId> {
    incidence[u]
        .iter()
        .filter(|&&(w, e)| w == v && Some(e) != except)
        .map(|&(_, e)| e)
        .min()
}

/// Grow a path until its end has no neighbor off the path, then close it at
/// the end's earliest neighbor on the path. The end is the cut vertex.
pub fn find_cycle_with_internal_cut<A: Advisor + ?Sized>(
    g: &Multigraph,
    advisor: &mut A,
) -> Result<CycleWitness> {
    if g.vertex_count() < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    if !g.is_two_edge_connected() {
        return Err(Error::NotTwoEdgeConnected);
    }
    let incidence = g.incidence();
    let (r, v, e) = choose_from(advisor, ChoicePoint::StartArc, &start_candidates(g));
    let mut path = vec![r, v];
    let mut path_edges = vec![e];
    loop {
        let ext = extension_candidates(g, &path);
        let last = *path.last().unwrap();
        if ext.is_empty() {
            break;
        }
        let u = choose_from(advisor, ChoicePoint::Extend, &ext);
        path_edges.push(smallest_edge(&incidence, last, u, None).expect("u is a neighbor"));
        path.push(u);
    }
    let end = *path.last().unwrap();
    let iw = path
        .iter()
        .position(|p| incidence[end].iter().any(|&(w, _)| w == *p))
        .expect("end has a neighbor");
    let closing = if iw + 2 == path.len() {
        // closing back to the predecessor needs a parallel edge
        smallest_edge(&incidence, end, path[iw], path_edges.last().copied())
    } else {
        smallest_edge(&incidence, end, path[iw], None)
    }
    .ok_or_else(|| Error::Construction("no closing edge".into()))?;
    let vertices = path[iw..].to_vec();
    let mut edges = path_edges[iw..].to_vec();
    edges.push(closing);
    if incidence[end].iter().any(|(w, _)| !vertices.contains(w)) {
        return Err(Error::Construction(format!(
            "vertex {end} has a neighbor off the cycle"
        )));
    }
    Ok(CycleWitness {
        vertices,
        edges,
        cut_vertex: end,
    })
}

/// Contract cycles until one vertex is left; the union of cycle edges is
/// 2-edge-connected and the cut vertices form a feasible certificate.
pub fn approx_2ecs<A: Advisor + ?Sized>(t: &TwoEcsInstance, advisor: &mut A) -> Result<RunReport> {
    let n = t.graph().vertex_count();
    let mut g = t.graph().clone();
    let mut origin: Vec<EdgeId> = (0..g.edge_count()).collect();
    let mut partition = VertexPartition::identity(n);
    let mut records = Vec::new();
    while g.vertex_count() > 1 {
        let c = find_cycle_with_internal_cut(&g, advisor)?;
        let mut selected: Vec<_> = c.edges.iter().map(|&e| origin[e]).collect();
        selected.sort_unstable();
        records.push(IterationRecord {
            selected,
            cuts: vec![Cut::new(partition.lift([c.cut_vertex].iter()))],
            kind: RecordKind::Cycle,
        });
        let contraction = g.contract(&c.vertices)?;
        origin = contraction.edge_origin.iter().map(|&e| origin[e]).collect();
        partition = partition.merge(&c.vertices)?;
        g = contraction.graph;
    }
    let mut solution: Vec<_> = records.iter().flat_map(|r| r.selected.clone()).collect();
    solution.sort_unstable();
    if !t.is_feasible(&solution)? {
        return Err(Error::Construction(
            "edge set is not 2-edge-connected".into(),
        ));
    }
    Ok(RunReport::assemble(
        Problem::TwoEcs,
        n,
        records,
        solution,
        advisor.stats(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advisor::{DefaultAdvisor, ScriptedAdvisor};
    use crate::certificate::verify_certificate;

    fn k4() -> TwoEcsInstance {
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        TwoEcsInstance::new(Multigraph::new(4, edges).unwrap()).unwrap()
    }

    #[test]
    fn k4_default_run() {
        let c = find_cycle_with_internal_cut(k4().graph(), &mut DefaultAdvisor).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2, 3]);
        assert_eq!(c.cut_vertex, 3);
        let r = approx_2ecs(&k4(), &mut DefaultAdvisor).unwrap();
        assert_eq!(r.cost, 4);
        assert_eq!(r.k, 1);
        assert!(r.identity_failures().is_empty());
        assert!(verify_certificate(&k4(), &r.certificate).unwrap().feasible);
    }

    #[test]
    fn parallel_pair_closes_with_the_other_edge() {
        let t = TwoEcsInstance::new(Multigraph::new(2, vec![(0, 1), (1, 0)]).unwrap()).unwrap();
        let c = find_cycle_with_internal_cut(t.graph(), &mut DefaultAdvisor).unwrap();
        assert_eq!(c.edges, vec![0, 1]);
        let r = approx_2ecs(&t, &mut DefaultAdvisor).unwrap();
        assert_eq!((r.cost, r.k), (2, 1));
    }

    #[test]
    fn two_triangles_sharing_a_vertex() {
        let edges = vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
        let t = TwoEcsInstance::new(Multigraph::new(5, edges).unwrap()).unwrap();
        for script in [vec![], vec![3], vec![7, 1]] {
            let r = approx_2ecs(&t, &mut ScriptedAdvisor::new(script)).unwrap();
            assert_eq!(r.cost, 6);
            assert!(
                r.identity_failures().is_empty(),
                "{:?}",
                r.identity_failures()
            );
            assert!(verify_certificate(&t, &r.certificate).unwrap().feasible);
        }
    }

    #[test]
    fn single_vertex_is_free() {
        let t = TwoEcsInstance::new(Multigraph::new(1, vec![]).unwrap()).unwrap();
        let r = approx_2ecs(&t, &mut DefaultAdvisor).unwrap();
        assert_eq!((r.cost, r.k, r.ratio), (0, 0, None));
    }
}
