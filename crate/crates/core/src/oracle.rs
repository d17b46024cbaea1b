//! Exhaustive reference solvers for small instances. They share no code
//! with the approximation algorithms beyond instance types and use bitmask
//! reachability of their own.

use crate::certificate::{lower_bounds, DualCertificate};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{
    mscs_to_ssc, DpaInstance, MscsInstance, SscInstance, StarId, TwoEcsInstance,
};
use crate::perfect::LiveInstance;

pub const SSC_STAR_LIMIT: usize = 22;
pub const TWO_ECS_EDGE_LIMIT: usize = 20;
pub const DPA_VERTEX_LIMIT: usize = 20;
pub const INTERNAL_CUT_LIMIT: usize = 16;

/// An optimum and one optimal solution (lexicographically first among the
/// smallest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact {
    pub opt: usize,
    pub solution: Vec<usize>,
}

fn too_large(size: usize, limit: usize) -> Error {
    Error::TooLarge { size, limit }
}

/// Vertices reachable from vertex 0 along `succ` masks.
fn reach_mask(succ: &[u64], full: u64) -> u64 {
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= succ[v];
        }
        frontier = next & !seen & full;
        seen |= frontier;
    }
    seen
}

fn strongly_connected(out: &[u64], inc: &[u64]) -> bool {
    let n = out.len();
    if n <= 1 {
        return true;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    reach_mask(out, full) == full && reach_mask(inc, full) == full
}

/// Calls `visit` on every `k`-subset of `0..m` in lexicographic order until
/// it returns true; `prune(chosen, next)` may cut a branch early.
fn first_subset<P, V>(m: usize, k: usize, prune: &P, visit: &mut V) -> Option<Vec<usize>>
where
    P: Fn(&[usize], usize) -> bool,
    V: FnMut(&[usize]) -> bool,
{
    fn rec<P, V>(
        m: usize,
        k: usize,
        next: usize,
        chosen: &mut Vec<usize>,
        prune: &P,
        visit: &mut V,
    ) -> bool
    where
        P: Fn(&[usize], usize) -> bool,
        V: FnMut(&[usize]) -> bool,
    {
        if chosen.len() == k {
            return visit(chosen);
        }
        if m - next < k - chosen.len() || prune(chosen, next) {
            return false;
        }
        for i in next..m {
            if m - i < k - chosen.len() {
                break;
            }
            chosen.push(i);
            if rec(m, k, i + 1, chosen, prune, visit) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    rec(m, k, 0, &mut chosen, prune, visit).then_some(chosen)
}

/// Minimum number of stars whose arcs make the digraph strongly connected.
pub fn exact_ssc(s: &SscInstance, limit: usize) -> Result<Exact> {
    let n = s.vertex_count();
    let m = s.stars().len();
    if m > limit {
        return Err(too_large(m, limit));
    }
    if n > 64 {
        return Err(too_large(n, 64));
    }
    if n <= 1 {
        return Ok(Exact {
            opt: 0,
            solution: vec![],
        });
    }
    let src: Vec<u64> = s.stars().iter().map(|f| 1u64 << f.source).collect();
    let sink: Vec<u64> = s
        .stars()
        .iter()
        .map(|f| f.sinks.iter().fold(0, |a, &v| a | 1u64 << v))
        .collect();
    // suffix unions: which vertices can still become a source / a sink
    let mut suffix_src = vec![0u64; m + 1];
    let mut suffix_sink = vec![0u64; m + 1];
    for i in (0..m).rev() {
        suffix_src[i] = suffix_src[i + 1] | src[i];
        suffix_sink[i] = suffix_sink[i + 1] | sink[i];
    }
    let full = (1u64 << n) - 1;
    let prune = |chosen: &[usize], next: usize| {
        let have_src = chosen.iter().fold(0, |a, &i| a | src[i]);
        let have_sink = chosen.iter().fold(0, |a, &i| a | sink[i]);
        (have_src | suffix_src[next]) != full || (have_sink | suffix_sink[next]) != full
    };
    let mut check = |chosen: &[usize]| {
        let mut out = vec![0u64; n];
        let mut inc = vec![0u64; n];
        for &i in chosen {
            let f = &s.stars()[i];
            out[f.source] |= sink[i];
            for &v in &f.sinks {
                inc[v] |= src[i];
            }
        }
        strongly_connected(&out, &inc)
    };
    for k in n..=m {
        if let Some(solution) = first_subset(m, k, &prune, &mut check) {
            return Ok(Exact { opt: k, solution });
        }
    }
    Err(Error::NotStronglyConnected)
}

/// Minimum strongly connected spanning subgraph, as arc ids.
pub fn exact_mscs(g: &MscsInstance, limit: usize) -> Result<Exact> {
    exact_ssc(&mscs_to_ssc(g.digraph())?, limit)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let up = parent[y];
        parent[y] = r;
        y = up;
    }
    r
}

fn connected_without(
    n: usize,
    edges: &[(VertexId, VertexId)],
    chosen: &[usize],
    skip: usize,
) -> bool {
    let mut parent: Vec<_> = (0..n).collect();
    let mut parts = n;
    for (j, &i) in chosen.iter().enumerate() {
        if j == skip {
            continue;
        }
        let (a, b) = (find(&mut parent, edges[i].0), find(&mut parent, edges[i].1));
        if a != b {
            parent[a] = b;
            parts -= 1;
        }
    }
    parts == 1
}

/// Minimum 2-edge-connected spanning subgraph, as edge ids.
pub fn exact_2ecs(t: &TwoEcsInstance, limit: usize) -> Result<Exact> {
    let g = t.graph();
    let (n, m) = (g.vertex_count(), g.edge_count());
    if m > limit {
        return Err(too_large(m, limit));
    }
    if n <= 1 {
        return Ok(Exact {
            opt: 0,
            solution: vec![],
        });
    }
    let edges = g.edges();
    // remaining incident edges per vertex from index i on
    let mut suffix_deg = vec![vec![0usize; n]; m + 1];
    for i in (0..m).rev() {
        suffix_deg[i] = suffix_deg[i + 1].clone();
        suffix_deg[i][edges[i].0] += 1;
        suffix_deg[i][edges[i].1] += 1;
    }
    let prune = |chosen: &[usize], next: usize| {
        let mut deg = suffix_deg[next].clone();
        for &i in chosen {
            deg[edges[i].0] += 1;
            deg[edges[i].1] += 1;
        }
        deg.iter().any(|&d| d < 2)
    };
    let mut check = |chosen: &[usize]| {
        connected_without(n, edges, chosen, usize::MAX)
            && (0..chosen.len()).all(|j| connected_without(n, edges, chosen, j))
    };
    for k in n..=m {
        if let Some(solution) = first_subset(m, k, &prune, &mut check) {
            return Ok(Exact { opt: k, solution });
        }
    }
    Err(Error::NotTwoEdgeConnected)
}

/// Minimum number of high-power vertices, as vertex ids.
pub fn exact_dpa(d: &DpaInstance, limit: usize) -> Result<Exact> {
    let n = d.vertex_count();
    if n > limit.min(64) {
        return Err(too_large(n, limit));
    }
    let mut zero = vec![0u64; n];
    let mut unit = vec![0u64; n];
    for e in d.edges() {
        let target = if e.cost == 0 { &mut zero } else { &mut unit };
        target[e.u] |= 1 << e.v;
        target[e.v] |= 1 << e.u;
    }
    let prune = |_: &[usize], _: usize| false;
    let mut check = |high: &[usize]| {
        let mut out = zero.clone();
        for &v in high {
            out[v] |= unit[v];
        }
        let mut inc = vec![0u64; n];
        for (u, &mask) in out.iter().enumerate() {
            for (v, slot) in inc.iter_mut().enumerate() {
                if mask >> v & 1 == 1 {
                    *slot |= 1 << u;
                }
            }
        }
        strongly_connected(&out, &inc)
    };
    for k in 0..=n {
        if let Some(solution) = first_subset(n, k, &prune, &mut check) {
            return Ok(Exact { opt: k, solution });
        }
    }
    Err(Error::NotStronglyConnected)
}

/// Every cut `S` of the live instance such that each star leaving `S` has
/// its source and all its sinks among the sources of `q`. Cuts are listed by
/// increasing membership mask.
pub fn enumerate_internal_cuts(
    li: &LiveInstance,
    q: &[StarId],
    limit: usize,
) -> Result<Vec<Vec<VertexId>>> {
    let n = li.vertex_count();
    if n > limit.min(63) {
        return Err(too_large(n, limit));
    }
    let mut sources = 0u64;
    for &id in q {
        sources |= 1 << li.star(id)?.source;
    }
    let stars: Vec<(u64, u64)> = li
        .stars()
        .iter()
        .map(|s| {
            (
                1u64 << s.source,
                s.sinks.iter().fold(0, |a, &v| a | 1u64 << v),
            )
        })
        .collect();
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    for side in 1..full {
        let internal = stars.iter().all(|&(src, sinks)| {
            let crosses = side & src != 0 && sinks & !side != 0;
            !crosses || (src & !sources == 0 && sinks & !sources == 0)
        });
        if internal {
            out.push((0..n).filter(|&v| side >> v & 1 == 1).collect());
        }
    }
    Ok(out)
}

/// Whether two of the given cuts are left by no common live star.
pub fn has_star_disjoint_pair(li: &LiveInstance, cuts: &[Vec<VertexId>]) -> bool {
    let leaving: Vec<Vec<bool>> = cuts
        .iter()
        .map(|c| {
            let mut side = vec![false; li.vertex_count()];
            for &v in c {
                side[v] = true;
            }
            li.stars()
                .iter()
                .map(|s| side[s.source] && s.sinks.iter().any(|&v| !side[v]))
                .collect()
        })
        .collect();
    (0..cuts.len()).any(|i| {
        (i + 1..cuts.len()).any(|j| leaving[i].iter().zip(&leaving[j]).all(|(&a, &b)| !(a && b)))
    })
}

/// A feasible solution whose size meets a feasible certificate's bound is
/// optimal; returns whether that is the case.
pub fn certify_exact_by_bound(
    s: &SscInstance,
    solution: &[StarId],
    cert: &DualCertificate,
) -> Result<bool> {
    if !s.is_feasible(solution)? {
        return Ok(false);
    }
    let bounds = lower_bounds(s, cert)?;
    Ok(solution.len() == bounds.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::singleton_certificate;
    use crate::graph::{Digraph, Multigraph};
    use crate::instance::{DpaEdge, Star};

    fn complete(n: usize) -> SscInstance {
        let arcs = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        mscs_to_ssc(&Digraph::new(n, arcs).unwrap()).unwrap()
    }

    #[test]
    fn ssc_optima() {
        assert_eq!(exact_ssc(&complete(4), 22).unwrap().opt, 4);
        let tri = complete(3);
        let e = exact_ssc(&tri, 22).unwrap();
        assert_eq!(e.opt, 3);
        assert!(tri.is_feasible(&e.solution).unwrap());
        // one star covering both others
        let s = SscInstance::new(
            3,
            vec![Star::new(0, [1, 2]), Star::new(1, [0]), Star::new(2, [0])],
        )
        .unwrap();
        assert_eq!(exact_ssc(&s, 22).unwrap().opt, 3);
        assert!(matches!(
            exact_ssc(&complete(6), 22),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn two_ecs_optima() {
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let t = TwoEcsInstance::new(Multigraph::new(4, edges).unwrap()).unwrap();
        assert_eq!(exact_2ecs(&t, 20).unwrap().opt, 4);
        let bowtie = vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)];
        let t = TwoEcsInstance::new(Multigraph::new(5, bowtie).unwrap()).unwrap();
        assert_eq!(exact_2ecs(&t, 20).unwrap().opt, 6);
    }

    #[test]
    fn dpa_optima() {
        let e = |u, v, cost| DpaEdge { u, v, cost };
        let path = DpaInstance::new(3, vec![e(0, 1, 1), e(1, 2, 1)]).unwrap();
        assert_eq!(exact_dpa(&path, 20).unwrap().opt, 3);
        let zero = DpaInstance::new(3, vec![e(0, 1, 0), e(1, 2, 0)]).unwrap();
        assert_eq!(exact_dpa(&zero, 20).unwrap().opt, 0);
        let mixed = DpaInstance::new(3, vec![e(0, 1, 0), e(1, 2, 1)]).unwrap();
        assert_eq!(
            exact_dpa(&mixed, 20).unwrap(),
            Exact {
                opt: 2,
                solution: vec![1, 2]
            }
        );
    }

    #[test]
    fn internal_cuts_of_a_triangle() {
        let li = LiveInstance::new(&complete(3));
        let all: Vec<_> = li.stars().iter().map(|s| s.id).collect();
        assert_eq!(enumerate_internal_cuts(&li, &all, 16).unwrap().len(), 6);
        // only the 0->1 and 1->0 stars: cuts not separating {0,1} from 2 fail
        let pair = [li.stars_with_arc(0, 1)[0], li.stars_with_arc(1, 0)[0]];
        let cuts = enumerate_internal_cuts(&li, &pair, 16).unwrap();
        assert!(cuts.is_empty(), "{cuts:?}");
        assert!(has_star_disjoint_pair(&li, &[vec![0], vec![1]]));
        assert!(!has_star_disjoint_pair(&li, &[vec![0], vec![0, 1]]));
    }

    #[test]
    fn bound_certifies_cycles() {
        let tri = complete(3);
        let e = exact_ssc(&tri, 22).unwrap();
        assert!(certify_exact_by_bound(&tri, &e.solution, &singleton_certificate(3)).unwrap());
        assert!(!certify_exact_by_bound(&tri, &[0, 1], &singleton_certificate(3)).unwrap());
    }
}
