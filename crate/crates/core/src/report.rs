//! Run reports: solution, per-iteration records, certificate, bounds and
//! the accounting identities that tie them together.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::advisor::AdvisorStats;
use crate::certificate::{n_bound, Cut, DualCertificate, DualKind};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "2ecs")]
    TwoEcs,
    #[serde(rename = "mscs")]
    Mscs,
    #[serde(rename = "dpa")]
    Dpa,
    #[serde(rename = "ssc")]
    Ssc,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::TwoEcs => "2ecs",
            Problem::Mscs => "mscs",
            Problem::Dpa => "dpa",
            Problem::Ssc => "ssc",
        }
    }

    /// Guaranteed ratio as (numerator, denominator).
    pub fn guarantee(self) -> (usize, usize) {
        match self {
            Problem::TwoEcs | Problem::Dpa => (3, 2),
            Problem::Mscs | Problem::Ssc => (8, 5),
        }
    }

    fn dual_kind(self) -> DualKind {
        match self {
            Problem::TwoEcs => DualKind::TwoEcs,
            _ => DualKind::Ssc,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "2ecs" => Ok(Problem::TwoEcs),
            "mscs" => Ok(Problem::Mscs),
            "dpa" => Ok(Problem::Dpa),
            "ssc" => Ok(Problem::Ssc),
            other => Err(Error::InvalidParameter(format!(
                "unknown problem {other:?}"
            ))),
        }
    }
}

/// How a contracted set certifies itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    /// A 2ECS cycle with one internal vertex cut.
    Cycle,
    /// A perfect set of at least four stars with one internal cut.
    BigOneCut,
    /// A perfect set with two star-disjoint internal cuts.
    TwoCuts,
}

/// One contraction step, with cuts over original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Star ids, or edge ids for 2ECS.
    pub selected: Vec<usize>,
    pub cuts: Vec<Cut>,
    pub kind: RecordKind,
}

impl IterationRecord {
    pub fn size(&self) -> usize {
        self.selected.len()
    }
}

/// An exact, unreduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

impl Ratio {
    pub fn new(num: usize, den: usize) -> Self {
        Self { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self <= other`, exactly.
    pub fn le(self, other: Ratio) -> bool {
        (self.num as u128) * (other.den as u128) <= (other.num as u128) * (self.den as u128)
    }

    /// `self < other`, exactly.
    pub fn lt(self, other: Ratio) -> bool {
        (self.num as u128) * (other.den as u128) < (other.num as u128) * (self.den as u128)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} ≈ {:.4}", self.num, self.den, self.to_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Objective of the run's certificate.
    pub dual_objective: usize,
    /// The counting bound n (0 for a single vertex).
    pub n_bound: usize,
    pub best: usize,
    /// The convex combination of the two bounds used by the analysis:
    /// (2n + D)/3 for 2ECS and DPA, (3(n-1) + D)/4 for SSC and MSCS.
    pub convex: Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: Problem,
    /// Vertex count of the instance the contraction loop ran on.
    pub n: usize,
    pub cost: usize,
    /// Solution in problem units: star ids, arc ids, high-power vertices or
    /// edge ids.
    pub solution: Vec<usize>,
    /// Star ids (or edge ids for 2ECS) of the contracted sets.
    pub core_solution: Vec<usize>,
    pub k: usize,
    /// Number of contracted sets of each size.
    pub histogram: BTreeMap<usize, usize>,
    pub iterations: Vec<IterationRecord>,
    pub certificate: DualCertificate,
    pub bounds: Bounds,
    /// cost / best lower bound; absent when both are 0.
    pub ratio: Option<Ratio>,
    pub advisor: AdvisorStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
}

impl RunReport {
    /// Derive every accounting field from the iteration records.
    pub fn assemble(
        problem: Problem,
        n: usize,
        iterations: Vec<IterationRecord>,
        solution: Vec<usize>,
        advisor: AdvisorStats,
    ) -> Self {
        let mut core_solution: Vec<_> =
            iterations.iter().flat_map(|r| r.selected.clone()).collect();
        core_solution.sort_unstable();
        let mut histogram = BTreeMap::new();
        for r in &iterations {
            *histogram.entry(r.size()).or_insert(0) += 1;
        }
        let kind = problem.dual_kind();
        let certificate = DualCertificate {
            kind,
            cuts: iterations.iter().flat_map(|r| r.cuts.clone()).collect(),
        };
        let bounds = compute_bounds(problem, n, certificate.cuts.len());
        let cost = solution.len();
        let ratio = (bounds.best > 0).then(|| Ratio::new(cost, bounds.best));
        RunReport {
            problem,
            n,
            cost,
            solution,
            core_solution,
            k: iterations.len(),
            histogram,
            iterations,
            certificate,
            bounds,
            ratio,
            advisor,
            instance_digest: None,
        }
    }

    /// Every accounting identity and guarantee that fails, as messages.
    /// Only uses integer arithmetic.
    pub fn identity_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut fail = |cond: bool, msg: String| {
            if !cond {
                out.push(msg);
            }
        };
        let n = self.n;
        let k = self.iterations.len();
        let sizes: usize = self.iterations.iter().map(|r| r.size()).sum();
        let contracted: usize = self
            .iterations
            .iter()
            .map(|r| r.size().saturating_sub(1))
            .sum();
        fail(
            self.k == k,
            format!("k = {} but {} iterations recorded", self.k, k),
        );
        fail(
            self.cost == self.solution.len(),
            format!(
                "cost {} differs from solution size {}",
                self.cost,
                self.solution.len()
            ),
        );
        fail(
            self.cost == sizes,
            format!("cost {} differs from total selected {}", self.cost, sizes),
        );
        fail(
            self.iterations.iter().all(|r| r.size() >= 2),
            "a contracted set has fewer than two elements".into(),
        );
        fail(
            contracted + 1 == n.max(1),
            format!(
                "sum of (size - 1) is {contracted}, expected n - 1 = {}",
                n.saturating_sub(1)
            ),
        );
        let mut union: Vec<_> = self
            .iterations
            .iter()
            .flat_map(|r| r.selected.clone())
            .collect();
        union.sort_unstable();
        let distinct = union.windows(2).all(|w| w[0] != w[1]);
        fail(distinct, "an id is selected in two iterations".into());
        fail(
            union == self.core_solution,
            "core solution is not the union of the iterations".into(),
        );
        let mut hist = BTreeMap::new();
        for r in &self.iterations {
            *hist.entry(r.size()).or_insert(0) += 1;
        }
        fail(
            hist == self.histogram,
            "histogram does not match the iterations".into(),
        );
        let cuts: Vec<_> = self
            .iterations
            .iter()
            .flat_map(|r| r.cuts.clone())
            .collect();
        fail(
            cuts == self.certificate.cuts,
            "certificate is not the concatenation of the iteration cuts".into(),
        );
        fail(
            self.certificate.kind == self.problem.dual_kind(),
            "certificate kind does not match the problem".into(),
        );
        let expected = compute_bounds(self.problem, n, self.certificate.cuts.len());
        fail(
            self.bounds == expected,
            format!("bounds {:?} should be {:?}", self.bounds, expected),
        );
        let ratio = (expected.best > 0).then(|| Ratio::new(self.cost, expected.best));
        fail(
            self.ratio == ratio,
            "ratio does not match cost and best bound".into(),
        );

        let d = self.certificate.cuts.len() * self.certificate.kind.weight();
        match self.problem {
            Problem::TwoEcs | Problem::Dpa => {
                fail(
                    self.cost + 1 == n.max(1) + k,
                    format!(
                        "cost {} differs from n + k - 1 = {}",
                        self.cost,
                        (n + k).saturating_sub(1)
                    ),
                );
                let per = if self.problem == Problem::TwoEcs {
                    1
                } else {
                    2
                };
                fail(
                    self.iterations.iter().all(|r| r.cuts.len() == per),
                    format!("every iteration should carry {per} cut(s)"),
                );
                fail(
                    2 * self.cost < 3 * n.max(d).max(1),
                    format!(
                        "2·cost = {} is not below 3·max(n, 2k) = {}",
                        2 * self.cost,
                        3 * n.max(d)
                    ),
                );
            }
            Problem::Mscs | Problem::Ssc => {
                let mut kinds_ok = true;
                let mut d_needed = 0;
                for r in &self.iterations {
                    match r.kind {
                        RecordKind::BigOneCut => kinds_ok &= r.size() >= 4 && r.cuts.len() == 1,
                        RecordKind::TwoCuts => kinds_ok &= r.cuts.len() == 2,
                        RecordKind::Cycle => kinds_ok = false,
                    }
                    d_needed += if r.size() <= 3 { 2 } else { 1 };
                }
                fail(
                    kinds_ok,
                    "an iteration breaks the one-big-cut / two-cuts contract".into(),
                );
                fail(
                    d >= d_needed,
                    format!("certificate objective {d} is below 2A2 + 2A3 + sum A_i = {d_needed}"),
                );
                fail(
                    5 * self.cost <= 6 * n.saturating_sub(1) + 2 * d,
                    format!(
                        "5·cost = {} exceeds 6(n-1) + 2D = {}",
                        5 * self.cost,
                        6 * n.saturating_sub(1) + 2 * d
                    ),
                );
            }
        }
        out
    }
}

fn compute_bounds(problem: Problem, n: usize, cuts: usize) -> Bounds {
    let d = cuts * problem.dual_kind().weight();
    let nb = n_bound(n);
    let convex = match problem {
        Problem::TwoEcs | Problem::Dpa => Ratio::new(2 * nb + d, 3),
        Problem::Mscs | Problem::Ssc => Ratio::new(3 * n.saturating_sub(1) + d, 4),
    };
    Bounds {
        dual_objective: d,
        n_bound: nb,
        best: nb.max(d),
        convex,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(selected: Vec<usize>, cuts: Vec<Vec<usize>>, kind: RecordKind) -> IterationRecord {
        IterationRecord {
            selected,
            cuts: cuts.into_iter().map(Cut::new).collect(),
            kind,
        }
    }

    fn triangle_report() -> RunReport {
        RunReport::assemble(
            Problem::Ssc,
            3,
            vec![record(
                vec![0, 1, 2],
                vec![vec![2], vec![1]],
                RecordKind::TwoCuts,
            )],
            vec![0, 1, 2],
            AdvisorStats::default(),
        )
    }

    #[test]
    fn assembled_report_is_consistent() {
        let r = triangle_report();
        assert_eq!(r.cost, 3);
        assert_eq!(r.bounds.best, 3);
        assert_eq!(r.bounds.convex, Ratio::new(8, 4));
        assert_eq!(r.ratio, Some(Ratio::new(3, 3)));
        assert!(
            r.identity_failures().is_empty(),
            "{:?}",
            r.identity_failures()
        );
    }

    #[test]
    fn tampering_is_detected() {
        let mut r = triangle_report();
        r.cost = 2;
        assert!(!r.identity_failures().is_empty());
        let mut r = triangle_report();
        r.certificate.cuts.push(Cut::new([0]));
        assert!(!r.identity_failures().is_empty());
        let mut r = triangle_report();
        r.histogram.insert(3, 2);
        assert!(!r.identity_failures().is_empty());
    }

    #[test]
    fn two_ecs_guarantee_is_strict() {
        // a 4-cycle: cost 4, k 1, bound max(4, 2)
        let r = RunReport::assemble(
            Problem::TwoEcs,
            4,
            vec![record(vec![0, 1, 2, 3], vec![vec![3]], RecordKind::Cycle)],
            vec![0, 1, 2, 3],
            AdvisorStats::default(),
        );
        assert_eq!(r.bounds.dual_objective, 2);
        assert_eq!(r.ratio, Some(Ratio::new(4, 4)));
        assert!(r.identity_failures().is_empty());
    }

    #[test]
    fn ratio_display_and_order() {
        assert_eq!(Ratio::new(12, 9).to_string(), "12/9 ≈ 1.3333");
        assert!(Ratio::new(3, 2).le(Ratio::new(6, 4)));
        assert!(!Ratio::new(3, 2).lt(Ratio::new(6, 4)));
        assert!(Ratio::new(153, 103).lt(Ratio::new(3, 2)));
    }

    #[test]
    fn problem_names_round_trip() {
        for p in [Problem::TwoEcs, Problem::Mscs, Problem::Dpa, Problem::Ssc] {
            assert_eq!(p.name().parse::<Problem>().unwrap(), p);
        }
        assert!("foo".parse::<Problem>().is_err());
    }
}
