//! 3/2-approximation for bidirected SSC, and through it for DPA with {0,1}
//! costs. Every contracted set comes with two star-disjoint internal cuts.

use std::collections::BTreeSet;

use crate::advisor::{choose, choose_from, Advisor, ChoicePoint};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{dpa_to_ssc, DpaInstance, SscInstance, StarId};
use crate::perfect::{augment_to_perfect, contract_until_done, LiveInstance, Selection};
use crate::report::{Problem, RecordKind, RunReport};

/// Cycle found by path growth with rotations. Consecutive vertices are
/// adjacent and the last is adjacent to the first. `vertices[0]` is the end
/// vertex of the final path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCycle {
    pub vertices: Vec<VertexId>,
    /// End of the final path; all its non-leaf neighbors are on the cycle.
    pub end: VertexId,
    /// Path successor of the end's earliest path neighbor. Its non-leaf
    /// neighbors are on the cycle too, else the path would have rotated.
    pub pivot: VertexId,
}

fn is_leaf(adj: &[Vec<VertexId>], v: VertexId) -> bool {
    adj[v].len() == 1
}

fn non_leaf_off_path(adj: &[Vec<VertexId>], v: VertexId, on_path: &[bool]) -> Vec<VertexId> {
    adj[v]
        .iter()
        .copied()
        .filter(|&u| !on_path[u] && !is_leaf(adj, u))
        .collect()
}

fn require_bidirected(li: &LiveInstance) -> Result<()> {
    match li.digraph().first_unmatched_arc() {
        Some((u, v)) => Err(Error::NotBidirected(u, v)),
        None => Ok(()),
    }
}

/// Arcs `(r, v)` whose head is not a leaf, sorted.
pub fn start_candidates(li: &LiveInstance) -> Vec<(VertexId, VertexId)> {
    let adj = li.out_adjacency();
    adj.iter()
        .enumerate()
        .flat_map(|(r, vs)| vs.iter().map(move |&v| (r, v)))
        .filter(|&(_, v)| !is_leaf(&adj, v))
        .collect()
}

/// Non-leaf neighbors of the path end that are off the path, sorted.
pub fn extension_candidates(li: &LiveInstance, path: &[VertexId]) -> Vec<VertexId> {
    let adj = li.out_adjacency();
    let mut on_path = vec![false; adj.len()];
    for &p in path {
        on_path[p] = true;
    }
    non_leaf_off_path(&adj, *path.last().expect("path is nonempty"), &on_path)
}

/// Grow a path through non-leaf vertices. When the end `v` is stuck, let `w`
/// be its earliest neighbor on the path and `w'` the vertex after `w`. If
/// `w'` can still be extended, reverse the path segment after `w` so that
/// `w'` becomes the end and keep growing; otherwise close a cycle through
/// `v`, `w`, and the earliest path neighbor of `w'`.
pub fn build_rotation_cycle<A: Advisor + ?Sized>(
    li: &LiveInstance,
    advisor: &mut A,
) -> Result<RotationCycle> {
    if li.vertex_count() < 3 {
        return Err(Error::Precondition("need at least three vertices".into()));
    }
    require_bidirected(li)?;
    if !li.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let adj = li.out_adjacency();
    let n = adj.len();
    let (r, v) = choose_from(advisor, ChoicePoint::StartArc, &start_candidates(li));
    let mut path = vec![r, v];
    let mut on_path = vec![false; n];
    on_path[r] = true;
    on_path[v] = true;
    loop {
        let last = *path.last().unwrap();
        let ext = non_leaf_off_path(&adj, last, &on_path);
        if !ext.is_empty() {
            let u = choose_from(advisor, ChoicePoint::Extend, &ext);
            path.push(u);
            on_path[u] = true;
            continue;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &p) in path.iter().enumerate() {
            pos[p] = i;
        }
        let earliest = |x: VertexId| {
            adj[x]
                .iter()
                .copied()
                .filter(|&y| on_path[y])
                .min_by_key(|&y| pos[y])
                .expect("path vertices have a path neighbor")
        };
        let iw = pos[earliest(last)];
        let pivot = path[iw + 1];
        let rot = non_leaf_off_path(&adj, pivot, &on_path);
        if !rot.is_empty() {
            path[iw + 1..].reverse();
            let u = choose_from(advisor, ChoicePoint::Rotate, &rot);
            path.push(u);
            on_path[u] = true;
            continue;
        }
        let ix = pos[earliest(pivot)];
        let mut vertices = vec![last];
        vertices.extend(path[ix..=iw].iter().rev());
        vertices.extend(&path[iw + 1..path.len() - 1]);
        return Ok(RotationCycle {
            vertices,
            end: last,
            pivot,
        });
    }
}

fn star_for_arc<A: Advisor + ?Sized>(
    li: &LiveInstance,
    u: VertexId,
    v: VertexId,
    advisor: &mut A,
) -> StarId {
    choose_from(advisor, ChoicePoint::StarForArc, &li.stars_with_arc(u, v))
}

fn two_cuts(stars: Vec<StarId>, mut a: Vec<VertexId>, mut b: Vec<VertexId>) -> Selection {
    a.sort_unstable();
    b.sort_unstable();
    Selection {
        stars,
        cuts: vec![a, b],
        kind: RecordKind::TwoCuts,
    }
}

fn all_but(n: usize, v: VertexId) -> Vec<VertexId> {
    (0..n).filter(|&u| u != v).collect()
}

/// A perfect set with two star-disjoint internal cuts in a bidirected,
/// strongly connected live instance with at least two vertices.
pub fn find_perfect_two_cuts<A: Advisor + ?Sized>(
    li: &LiveInstance,
    advisor: &mut A,
) -> Result<Selection> {
    let n = li.vertex_count();
    if n < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    if n == 2 {
        require_bidirected(li)?;
        let a = choose_from(advisor, ChoicePoint::StarForArc, &li.stars_at(0));
        let b = choose_from(advisor, ChoicePoint::StarForArc, &li.stars_at(1));
        return Ok(two_cuts(vec![a, b], vec![0], vec![1]));
    }
    let cyc = build_rotation_cycle(li, advisor)?;
    let adj = li.out_adjacency();
    let (end, pivot) = (cyc.end, cyc.pivot);
    let on_cycle: BTreeSet<_> = cyc.vertices.iter().copied().collect();
    let leaf_sinks = |id: StarId| -> Vec<VertexId> {
        li.star(id)
            .map(|s| {
                s.sinks
                    .iter()
                    .copied()
                    .filter(|&v| is_leaf(&adj, v))
                    .collect()
            })
            .unwrap_or_default()
    };
    let leaves_of = |c: VertexId| -> Vec<VertexId> {
        adj[c]
            .iter()
            .copied()
            .filter(|&v| is_leaf(&adj, v))
            .collect()
    };
    let centers: Vec<_> = if end == pivot {
        vec![end]
    } else {
        vec![end, pivot]
    };

    // a star with two leaf sinks: both leaves are singleton cuts
    for &c in &centers {
        let cands: Vec<_> = li
            .stars_at(c)
            .into_iter()
            .filter(|&f| leaf_sinks(f).len() >= 2)
            .collect();
        if cands.is_empty() {
            continue;
        }
        let f = choose_from(advisor, ChoicePoint::LeafStar, &cands);
        let mut leaves = leaf_sinks(f);
        let l1 = leaves.remove(choose(advisor, ChoicePoint::LeafPair, leaves.len()));
        let l2 = choose_from(advisor, ChoicePoint::LeafPair, &leaves);
        let q = augment_to_perfect(li, &[f], advisor)?;
        return Ok(two_cuts(q, vec![l1], vec![l2]));
    }

    if end == pivot {
        // the cycle is the pair [v, w]; v has no other non-leaf neighbor
        let w = cyc.vertices[1];
        let leaves: Vec<_> = leaves_of(end).into_iter().filter(|&l| l != w).collect();
        if leaves.is_empty() {
            return Err(Error::Construction(
                "two-vertex cycle without a leaf".into(),
            ));
        }
        let l = choose_from(advisor, ChoicePoint::Leaf, &leaves);
        let mut pair = vec![l, w];
        pair.sort_unstable();
        let big: Vec<_> = li
            .stars_at(end)
            .into_iter()
            .filter(|&f| li.star(f).map(|s| s.sinks == pair).unwrap_or(false))
            .collect();
        let q = if big.is_empty() {
            let a = choose_from(
                advisor,
                ChoicePoint::StarForArc,
                &li.stars_at(end)
                    .into_iter()
                    .filter(|&f| li.star(f).map(|s| s.sinks == [l]).unwrap_or(false))
                    .collect::<Vec<_>>(),
            );
            let b = choose_from(advisor, ChoicePoint::StarForArc, &li.stars_at(l));
            vec![a, b]
        } else {
            let f = choose_from(advisor, ChoicePoint::LeafCycleStar, &big);
            augment_to_perfect(li, &[f], advisor)?
        };
        return Ok(two_cuts(q, vec![l], all_but(n, l)));
    }

    // a star at a center holding a leaf and a cycle vertex
    let m = cyc.vertices.len();
    for &c in &centers {
        let cands: Vec<_> = li
            .stars_at(c)
            .into_iter()
            .filter(|&f| {
                let s = li.star(f).unwrap();
                s.sinks.iter().any(|&v| is_leaf(&adj, v))
                    && s.sinks.iter().any(|v| on_cycle.contains(v))
            })
            .collect();
        if cands.is_empty() {
            continue;
        }
        let start = cyc.vertices.iter().position(|&v| v == c).unwrap();
        let forward = choose(advisor, ChoicePoint::Direction, 2) == 0;
        let seq: Vec<_> = (0..m)
            .map(|i| {
                let j = if forward { start + i } else { start + m - i };
                cyc.vertices[j % m]
            })
            .collect();
        let dist = |v: VertexId| seq.iter().position(|&x| x == v);
        let nearest = cands
            .iter()
            .flat_map(|&f| li.star(f).unwrap().sinks.clone())
            .filter_map(&dist)
            .min()
            .expect("candidates have a cycle sink");
        let u = seq[nearest];
        let with_u: Vec<_> = cands
            .into_iter()
            .filter(|&f| li.star(f).unwrap().has_sink(u))
            .collect();
        let f = choose_from(advisor, ChoicePoint::LeafCycleStar, &with_u);
        let l = leaf_sinks(f)[0];
        let mut q0 = vec![f];
        for i in nearest..m {
            q0.push(star_for_arc(li, seq[i], seq[(i + 1) % m], advisor));
        }
        let q = augment_to_perfect(li, &q0, advisor)?;
        return Ok(two_cuts(q, vec![l], all_but(n, l)));
    }

    // both ends with their leaves
    let q0: Vec<_> = (0..m)
        .map(|i| star_for_arc(li, cyc.vertices[i], cyc.vertices[(i + 1) % m], advisor))
        .collect();
    let q = augment_to_perfect(li, &q0, advisor)?;
    let mut a = leaves_of(end);
    a.push(end);
    let mut b = leaves_of(pivot);
    b.push(pivot);
    Ok(two_cuts(q, a, b))
}

/// Approximate a bidirected SSC instance.
pub fn approx_dpa_ssc<A: Advisor + ?Sized>(s: &SscInstance, advisor: &mut A) -> Result<RunReport> {
    if let Some((u, v)) = s.derived_digraph().first_unmatched_arc() {
        return Err(Error::NotBidirected(u, v));
    }
    let records = contract_until_done(s, advisor, |li, a| find_perfect_two_cuts(li, a))?;
    let mut solution: Vec<_> = records.iter().flat_map(|r| r.selected.clone()).collect();
    solution.sort_unstable();
    if !s.is_feasible(&solution)? {
        return Err(Error::Construction(
            "star set is not strongly connecting".into(),
        ));
    }
    Ok(RunReport::assemble(
        Problem::Dpa,
        s.vertex_count(),
        records,
        solution,
        advisor.stats(),
    ))
}

/// Approximate a DPA instance through its SSC conversion. The solution is
/// the set of high-power vertices; `n` is the number of zero-cost components.
pub fn approx_dpa<A: Advisor + ?Sized>(d: &DpaInstance, advisor: &mut A) -> Result<RunReport> {
    let conv = dpa_to_ssc(d)?;
    let mut report = approx_dpa_ssc(&conv.ssc, advisor)?;
    report.solution = conv.to_power(&report.core_solution);
    if !d.is_feasible(&report.solution)? {
        return Err(Error::Construction(
            "power assignment is not feasible".into(),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advisor::{DefaultAdvisor, RandomAdvisor};
    use crate::certificate::verify_certificate;
    use crate::graph::Digraph;
    use crate::instance::{mscs_to_ssc, DpaEdge, Star};

    fn bidirected(n: usize, edges: &[(usize, usize)]) -> SscInstance {
        let arcs = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
        mscs_to_ssc(&Digraph::new(n, arcs).unwrap()).unwrap()
    }

    fn check(s: &SscInstance, r: &RunReport) {
        assert!(
            r.identity_failures().is_empty(),
            "{:?}",
            r.identity_failures()
        );
        assert!(verify_certificate(s, &r.certificate).unwrap().feasible);
        assert!(s.is_feasible(&r.solution).unwrap());
    }

    #[test]
    fn rotation_cycle_on_a_path_with_chord() {
        // 0-1-2-3 path plus chord 1-3
        let s = bidirected(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]);
        let li = LiveInstance::new(&s);
        let c = build_rotation_cycle(&li, &mut DefaultAdvisor).unwrap();
        for (i, &v) in c.vertices.iter().enumerate() {
            let next = c.vertices[(i + 1) % c.vertices.len()];
            assert!(!li.stars_with_arc(v, next).is_empty());
        }
        check(&s, &approx_dpa_ssc(&s, &mut DefaultAdvisor).unwrap());
    }

    #[test]
    fn stars_and_paths() {
        for s in [
            bidirected(2, &[(0, 1)]),
            bidirected(4, &[(0, 1), (0, 2), (0, 3)]),
            bidirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]),
            bidirected(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]),
        ] {
            for seed in 0..20 {
                let r = approx_dpa_ssc(&s, &mut RandomAdvisor::new(seed)).unwrap();
                check(&s, &r);
                assert!(2 * r.cost < 3 * r.bounds.best.max(1) || r.n < 2);
            }
        }
    }

    #[test]
    fn leaf_pair_star() {
        // a center with one star reaching two leaves at once
        let s = SscInstance::new(
            4,
            vec![
                Star::new(0, [1, 2]),
                Star::new(0, [3]),
                Star::new(1, [0]),
                Star::new(2, [0]),
                Star::new(3, [0]),
            ],
        )
        .unwrap();
        let r = approx_dpa_ssc(&s, &mut DefaultAdvisor).unwrap();
        check(&s, &r);
    }

    #[test]
    fn rejects_one_way_arcs() {
        let s = mscs_to_ssc(&Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()).unwrap();
        assert!(matches!(
            approx_dpa_ssc(&s, &mut DefaultAdvisor),
            Err(Error::NotBidirected(..))
        ));
    }

    #[test]
    fn dpa_solution_is_a_power_assignment() {
        let e = |u, v, cost| DpaEdge { u, v, cost };
        let d = DpaInstance::new(
            5,
            vec![e(0, 1, 0), e(1, 2, 1), e(2, 3, 0), e(3, 4, 1), e(4, 0, 1)],
        )
        .unwrap();
        let r = approx_dpa(&d, &mut DefaultAdvisor).unwrap();
        assert!(d.is_feasible(&r.solution).unwrap());
        assert_eq!(r.n, 3);
        assert!(r.identity_failures().is_empty());
    }
}
