//! Tight families with adversarial advice, and seeded random instances.
//!
//! Random instances use ChaCha8 seeded with `seed_from_u64`, so a seed
//! gives the same instance on every platform.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::advisor::ScriptedAdvisor;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Multigraph, VertexId};
use crate::instance::{
    mscs_to_ssc, DpaEdge, DpaInstance, Instance, SscInstance, Star, TwoEcsInstance,
};
use crate::perfect::LiveInstance;
use crate::{dpa, ssc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub alg_cost: usize,
    pub opt_cost: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub advice: Option<Vec<usize>>,
    pub expected: Option<Expected>,
}

/// Which contraction step an advice script is written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// The two-cut step for bidirected instances (DPA).
    Bidirected,
    /// The general SSC step.
    General,
}

/// Advice indices that make the path construction follow `path` (current
/// vertex ids) from its first arc on.
fn steering_prefix(li: &LiveInstance, solver: Solver, path: &[VertexId]) -> Result<Vec<usize>> {
    let miss = |what: &str| Error::InvalidParameter(format!("planned {what} is not a candidate"));
    let starts = match solver {
        Solver::Bidirected => dpa::start_candidates(li),
        Solver::General => ssc::start_candidates(li),
    };
    let mut prefix = Vec::new();
    let i = starts
        .iter()
        .position(|&a| a == (path[0], path[1]))
        .ok_or_else(|| miss("start arc"))?;
    if starts.len() >= 2 {
        prefix.push(i);
    }
    for j in 2..path.len() {
        let ext = match solver {
            Solver::Bidirected => dpa::extension_candidates(li, &path[..j]),
            Solver::General => ssc::extension_candidates(li, &path[..j]),
        };
        let i = ext
            .iter()
            .position(|&v| v == path[j])
            .ok_or_else(|| miss("extension"))?;
        if ext.len() >= 2 {
            prefix.push(i);
        }
    }
    Ok(prefix)
}

/// Simulate a run, steering iteration `i` along `plan[i]` (original vertex
/// ids; any member of a merged vertex stands for it). Unplanned choices get
/// index 0. Returns the full list of answers given.
pub fn derive_script(
    s: &SscInstance,
    solver: Solver,
    plan: &[Vec<VertexId>],
) -> Result<Vec<usize>> {
    let mut li = LiveInstance::new(s);
    let mut script = Vec::new();
    let mut iteration = 0;
    while li.vertex_count() > 1 {
        let prefix = match plan.get(iteration) {
            Some(p) => {
                let cur: Vec<_> = p.iter().map(|&v| li.partition().current_of(v)).collect();
                steering_prefix(&li, solver, &cur)?
            }
            None => Vec::new(),
        };
        let mut adv = ScriptedAdvisor::new(prefix);
        let sel = match solver {
            Solver::Bidirected => dpa::find_perfect_two_cuts(&li, &mut adv)?,
            Solver::General => ssc::find_perfect_set(&li, &mut adv)?,
        };
        script.extend_from_slice(adv.log());
        li = li.contract(&sel.stars)?;
        iteration += 1;
    }
    Ok(script)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// The bidirected family with ends `v` = 0, `w` = 1, path vertices
/// `u_i` = 1 + i and ear vertices `l_i` = k + 2 + i; every arc is its own
/// star.
pub fn dpa_tight_instance(k: usize) -> Result<SscInstance> {
    check_k(k)?;
    let (v, w) = (0, 1);
    let u = |i: usize| 1 + i;
    let l = |i: usize| k + 2 + i;
    let mut edges = vec![(v, u(1)), (u(k + 1), w), (w, v), (v, u(k + 1)), (w, u(k))];
    for i in 1..=k {
        edges.extend([(u(i), u(i + 1)), (u(i), l(i)), (l(i), u(i + 1))]);
    }
    let mut seen = BTreeSet::new();
    edges.retain(|&(a, b)| seen.insert((a.min(b), a.max(b))));
    let arcs = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    mscs_to_ssc(&Digraph::new(2 * k + 3, arcs)?)
}

/// First contraction: the cycle through both ends and all path vertices,
/// built from `u_{k+1}` through `w`, `u_k`, ..., `u_1` to `v`.
fn dpa_tight_plan(k: usize) -> Vec<Vec<VertexId>> {
    let mut path = vec![k + 2, 1];
    path.extend((1..=k).rev().map(|i| 1 + i));
    path.push(0);
    vec![path]
}

/// The advice drives both the bidirected and the general step through the
/// same bad run: the two derived scripts agree up to trailing zeros, so the
/// longer one serves both.
pub fn gen_dpa_tight(k: usize) -> Result<GeneratedInstance> {
    let s = dpa_tight_instance(k)?;
    let a = derive_script(&s, Solver::Bidirected, &dpa_tight_plan(k))?;
    let b = derive_script(&s, Solver::General, &dpa_tight_plan(k))?;
    if a.iter().zip(&b).any(|(x, y)| x != y) {
        return Err(Error::Construction(
            "scripts for the two steps disagree".into(),
        ));
    }
    let advice = if a.len() >= b.len() { a } else { b };
    Ok(GeneratedInstance {
        instance: Instance::Ssc(s),
        advice: Some(advice),
        expected: Some(Expected {
            alg_cost: 3 * k + 3,
            opt_cost: 2 * k + 3,
        }),
    })
}

/// Hamiltonian witness `v, u_1, l_1, u_2, ..., l_k, u_{k+1}, w`.
pub fn dpa_tight_witness(k: usize) -> Vec<VertexId> {
    let mut order = vec![0];
    for i in 1..=k {
        order.extend([1 + i, k + 2 + i]);
    }
    order.extend([k + 2, 1]);
    order
}

/// Labels of one level of the directed family.
#[derive(Debug, Clone, Copy)]
struct Level {
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    y: usize,
}

/// The directed family: a 7-vertex base whose vertex `x` is repeatedly
/// replaced by a 6-vertex gadget. Returns the arcs over compact ids, the
/// vertex count, the levels (base first) and the top `x`.
fn ssc_tight_layout(k: usize) -> (usize, Vec<(usize, usize)>, Vec<Level>, usize) {
    // sparse labels first; removed x's are compacted away at the end
    let mut next = 7;
    let mut arcs: Vec<(usize, usize)> = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 0),
        (5, 4),
        (4, 2),
        (2, 0),
        (0, 5),
    ];
    let mut levels = vec![Level {
        a: 0,
        b: 1,
        c: 2,
        d: 3,
        y: 5,
    }];
    let mut x = 4;
    for _ in 1..k {
        let cur = *levels.last().unwrap();
        let [a, b, c, d, nx, y] = std::array::from_fn(|i| next + i);
        next += 6;
        arcs.retain(|&(p, q)| p != x && q != x);
        arcs.extend([
            (cur.d, a),
            (a, cur.c),
            (y, cur.y),
            (cur.y, y),
            (a, b),
            (b, c),
            (c, d),
            (d, nx),
            (nx, y),
            (y, nx),
            (nx, c),
            (c, a),
            (a, y),
        ]);
        levels.push(Level { a, b, c, d, y });
        x = nx;
    }
    let mut used: Vec<_> = arcs.iter().flat_map(|&(p, q)| [p, q]).collect();
    used.sort_unstable();
    used.dedup();
    let id = |v: usize| used.binary_search(&v).unwrap();
    let arcs = arcs.iter().map(|&(p, q)| (id(p), id(q))).collect();
    let levels = levels
        .iter()
        .map(|l| Level {
            a: id(l.a),
            b: id(l.b),
            c: id(l.c),
            d: id(l.d),
            y: id(l.y),
        })
        .collect();
    (used.len(), arcs, levels, id(x))
}

pub fn ssc_tight_instance(k: usize) -> Result<SscInstance> {
    check_k(k)?;
    let (n, arcs, _, _) = ssc_tight_layout(k);
    mscs_to_ssc(&Digraph::new(n, arcs)?)
}

/// Newest level first: the 4-cycle `c a y x` (with the contracted upper
/// levels standing in for `x`), then the two-cycles through `d` and `b`,
/// and at the base also through `z`.
fn ssc_tight_plan(k: usize) -> Vec<Vec<VertexId>> {
    let (_, _, levels, top_x) = ssc_tight_layout(k);
    let mut plan = Vec::new();
    for (j, l) in levels.iter().enumerate().rev() {
        let x = if j + 1 == levels.len() {
            top_x
        } else {
            levels[j + 1].a
        };
        plan.push(vec![l.c, l.a, l.y, x]);
        plan.push(vec![l.c, l.d]);
        plan.push(vec![l.c, l.b]);
    }
    // z keeps id 6 of the base: only x (id 4) below it can disappear
    let z = if k == 1 { 6 } else { 5 };
    plan.push(vec![levels[0].c, z]);
    plan
}

pub fn gen_ssc_tight(k: usize) -> Result<GeneratedInstance> {
    let s = ssc_tight_instance(k)?;
    let advice = derive_script(&s, Solver::General, &ssc_tight_plan(k))?;
    Ok(GeneratedInstance {
        instance: Instance::Ssc(s),
        advice: Some(advice),
        expected: Some(Expected {
            alg_cost: 8 * k + 2,
            opt_cost: 5 * k + 2,
        }),
    })
}

/// Arc ids of a Hamiltonian cycle of the directed family.
pub fn ssc_tight_witness(k: usize) -> Vec<usize> {
    let (_, arcs, levels, top_x) = ssc_tight_layout(k);
    let base = levels[0];
    let z = if k == 1 { 6 } else { 5 };
    // a b c d, then each level's a' b' c' d', then x y' ... y z
    let mut order = vec![base.a, base.b, base.c, base.d];
    for l in &levels[1..] {
        order.extend([l.a, l.b, l.c, l.d]);
    }
    order.push(top_x);
    order.extend(levels.iter().rev().map(|l| l.y));
    order.push(z);
    (0..order.len())
        .map(|i| {
            let arc = (order[i], order[(i + 1) % order.len()]);
            arcs.iter()
                .position(|&a| a == arc)
                .expect("witness arc exists")
        })
        .collect()
}

fn extra_count(n: usize, factor: f64) -> Result<usize> {
    if !(factor.is_finite() && factor >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "extra factor {factor} must be a nonnegative number"
        )));
    }
    Ok((factor * n as f64).round() as usize)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    Ok(())
}

/// Split each vertex's out-arcs, in random order, into stars of 1 to
/// `max_fan` sinks.
fn partition_into_stars(
    rng: &mut ChaCha8Rng,
    n: usize,
    arcs: &[(usize, usize)],
    max_fan: usize,
) -> Vec<Star> {
    let mut out = vec![Vec::new(); n];
    for &(u, v) in arcs {
        out[u].push(v);
    }
    let mut stars = Vec::new();
    for (u, mut sinks) in out.into_iter().enumerate() {
        sinks.shuffle(rng);
        let mut rest = &sinks[..];
        while !rest.is_empty() {
            let size = rng.random_range(1..=max_fan.min(rest.len()));
            stars.push(Star::new(u, rest[..size].iter().copied()));
            rest = &rest[size..];
        }
    }
    stars
}

/// Add up to `count` random new pairs; gives up after a bounded number of
/// attempts on dense graphs.
fn add_random_pairs(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
    seen: &mut BTreeSet<(usize, usize)>,
    symmetric: bool,
) -> Vec<(usize, usize)> {
    let mut added = Vec::new();
    let mut attempts = 0;
    while added.len() < count && attempts < 20 * (count + n) {
        attempts += 1;
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let key = if symmetric {
            (u.min(v), u.max(v))
        } else {
            (u, v)
        };
        if u != v && seen.insert(key) {
            added.push((u, v));
        }
    }
    added
}

fn check_fan(max_fan: usize) -> Result<()> {
    if max_fan == 0 {
        return Err(Error::InvalidParameter(
            "max star fan must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Random SSC instance: a random Hamiltonian cycle plus
/// `round(extra_arc_factor * n)` extra arcs.
pub fn gen_random_ssc(
    n: usize,
    extra_arc_factor: f64,
    max_fan: usize,
    seed: u64,
) -> Result<GeneratedInstance> {
    check_n(n)?;
    check_fan(max_fan)?;
    let extra = extra_count(n, extra_arc_factor)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<_> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut arcs: Vec<_> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    let mut seen: BTreeSet<_> = arcs.iter().copied().collect();
    arcs.extend(add_random_pairs(&mut rng, n, extra, &mut seen, false));
    let stars = partition_into_stars(&mut rng, n, &arcs, max_fan);
    Ok(GeneratedInstance {
        instance: Instance::Ssc(SscInstance::new(n, stars)?),
        advice: None,
        expected: None,
    })
}

/// Random bidirected SSC instance: a random spanning tree (so leaves occur)
/// plus `round(extra_edge_factor * n)` extra edges, both directions of each.
pub fn gen_random_bidirected(
    n: usize,
    extra_edge_factor: f64,
    max_fan: usize,
    seed: u64,
) -> Result<GeneratedInstance> {
    check_n(n)?;
    check_fan(max_fan)?;
    let extra = extra_count(n, extra_edge_factor)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_tree(&mut rng, n);
    let mut seen: BTreeSet<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    edges.extend(add_random_pairs(&mut rng, n, extra, &mut seen, true));
    let arcs: Vec<_> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    let stars = partition_into_stars(&mut rng, n, &arcs, max_fan);
    Ok(GeneratedInstance {
        instance: Instance::Ssc(SscInstance::new(n, stars)?),
        advice: None,
        expected: None,
    })
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<_> = (0..n).collect();
    order.shuffle(rng);
    (1..n)
        .map(|i| (order[rng.random_range(0..i)], order[i]))
        .collect()
}

/// Random 2ECS instance: a random Hamiltonian cycle (a parallel pair when
/// n = 2) plus `round(extra_edge_factor * n)` random edges, parallels
/// allowed.
pub fn gen_random_2ecs(n: usize, extra_edge_factor: f64, seed: u64) -> Result<GeneratedInstance> {
    check_n(n)?;
    let extra = extra_count(n, extra_edge_factor)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<_> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges: Vec<_> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    if n == 2 {
        edges.truncate(1);
        edges.push((order[1], order[0]));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = (u + rng.random_range(1..n)) % n;
        edges.push((u, v));
    }
    Ok(GeneratedInstance {
        instance: Instance::TwoEcs(TwoEcsInstance::new(Multigraph::new(n, edges)?)?),
        advice: None,
        expected: None,
    })
}

/// Random DPA instance: a random spanning tree plus about n/2 extra edges,
/// each edge free with probability `zero_cost_prob`.
pub fn gen_random_dpa(n: usize, zero_cost_prob: f64, seed: u64) -> Result<GeneratedInstance> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&zero_cost_prob) {
        return Err(Error::InvalidParameter(format!(
            "probability {zero_cost_prob} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_tree(&mut rng, n);
    let mut seen: BTreeSet<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    edges.extend(add_random_pairs(&mut rng, n, n / 2, &mut seen, true));
    let edges = edges
        .into_iter()
        .map(|(u, v)| DpaEdge {
            u,
            v,
            cost: if rng.random_bool(zero_cost_prob) {
                0
            } else {
                1
            },
        })
        .collect();
    Ok(GeneratedInstance {
        instance: Instance::Dpa(DpaInstance::new(n, edges)?),
        advice: None,
        expected: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advisor::ScriptedAdvisor;
    use crate::dpa::approx_dpa_ssc;
    use crate::ssc::approx_ssc;

    fn ssc(g: &GeneratedInstance) -> &SscInstance {
        match &g.instance {
            Instance::Ssc(s) => s,
            other => panic!("expected an SSC instance, got {other:?}"),
        }
    }

    #[test]
    fn dpa_family_is_tight_for_small_k() {
        for k in 1..=6 {
            let g = gen_dpa_tight(k).unwrap();
            let s = ssc(&g);
            assert_eq!(s.vertex_count(), 2 * k + 3);
            let mut adv = ScriptedAdvisor::new(g.advice.clone().unwrap());
            let r = approx_dpa_ssc(s, &mut adv).unwrap();
            assert_eq!(r.cost, 3 * k + 3, "k = {k}");
            assert_eq!(r.advisor.fallbacks(), 0);
            let witness = dpa_tight_witness(k);
            let stars: Vec<_> = (0..witness.len())
                .map(|i| {
                    let (a, b) = (witness[i], witness[(i + 1) % witness.len()]);
                    s.stars()
                        .iter()
                        .position(|f| f.source == a && f.sinks == [b])
                        .unwrap()
                })
                .collect();
            assert!(s.is_feasible(&stars).unwrap());
        }
    }

    #[test]
    fn dpa_family_under_the_general_step() {
        for k in 1..=6 {
            let g = gen_dpa_tight(k).unwrap();
            let mut adv = ScriptedAdvisor::new(g.advice.clone().unwrap());
            let r = approx_ssc(ssc(&g), &mut adv).unwrap();
            assert_eq!(r.cost, 3 * k + 3);
            assert_eq!(r.advisor.fallbacks(), 0);
        }
    }

    #[test]
    fn ssc_family_is_tight_for_small_k() {
        for k in 1..=6 {
            let g = gen_ssc_tight(k).unwrap();
            let s = ssc(&g);
            assert_eq!(s.vertex_count(), 5 * k + 2);
            assert_eq!(s.stars().len(), 9 * k + 2);
            let mut adv = ScriptedAdvisor::new(g.advice.clone().unwrap());
            let r = approx_ssc(s, &mut adv).unwrap();
            assert_eq!(r.cost, 8 * k + 2, "k = {k}");
            assert_eq!(r.advisor.fallbacks(), 0);
            let witness = ssc_tight_witness(k);
            assert_eq!(witness.len(), 5 * k + 2);
            assert!(s.is_feasible(&witness).unwrap());
        }
    }

    #[test]
    fn random_generators_are_deterministic() {
        assert_eq!(
            gen_random_ssc(6, 1.0, 2, 9).unwrap(),
            gen_random_ssc(6, 1.0, 2, 9).unwrap()
        );
        assert_eq!(
            gen_random_dpa(6, 0.3, 9).unwrap(),
            gen_random_dpa(6, 0.3, 9).unwrap()
        );
        let cycle = gen_random_ssc(5, 0.0, 1, 4).unwrap();
        let s = ssc(&cycle);
        assert_eq!(s.stars().len(), 5);
        assert!(s.stars().iter().all(|f| f.sinks.len() == 1));
        match gen_random_2ecs(4, 0.0, 3).unwrap().instance {
            Instance::TwoEcs(t) => assert_eq!(t.graph().edge_count(), 4),
            other => panic!("{other:?}"),
        }
        assert!(gen_random_ssc(1, 0.0, 1, 0).is_err());
        assert!(gen_random_ssc(4, -1.0, 1, 0).is_err());
        assert!(gen_random_dpa(4, 1.5, 0).is_err());
    }

    #[test]
    fn random_bidirected_instances_are_bidirected() {
        for seed in 0..20 {
            let g = gen_random_bidirected(7, 0.5, 3, seed).unwrap();
            assert!(ssc(&g).is_bidirected());
        }
    }
}
