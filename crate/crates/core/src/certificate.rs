//! Integer dual solutions: families of cuts with unit multipliers.
//!
//! For SSC a family is feasible when no star leaves two of its cuts; the
//! objective is the number of cuts. For 2ECS no edge may cross two cuts and
//! each cut is worth 2. Checks here only look at the original instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{SscInstance, TwoEcsInstance};

/// One side of a cut, as sorted original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cut(Vec<VertexId>);

impl Cut {
    pub fn new<I: IntoIterator<Item = VertexId>>(side: I) -> Self {
        let mut v: Vec<_> = side.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Cut(v)
    }

    pub fn side(&self) -> &[VertexId] {
        &self.0
    }

    /// Membership vector; fails unless the side is a nonempty proper subset.
    pub fn mask(&self, n: usize) -> Result<Vec<bool>> {
        if self.0.is_empty() || self.0.len() >= n || self.0.iter().any(|&v| v >= n) {
            return Err(Error::InvalidCut);
        }
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualKind {
    Ssc,
    #[serde(rename = "2ecs")]
    TwoEcs,
}

impl DualKind {
    /// Objective contribution of one cut.
    pub fn weight(self) -> usize {
        match self {
            DualKind::Ssc => 1,
            DualKind::TwoEcs => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub kind: DualKind,
    pub cuts: Vec<Cut>,
}

/// A star or edge crossing more than one cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub item: usize,
    pub cuts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCheck {
    pub feasible: bool,
    pub objective: usize,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBounds {
    pub dual_objective: usize,
    pub n_bound: usize,
    pub best: usize,
}

/// An instance a cut family can be checked against.
pub trait DualTarget {
    fn kind(&self) -> DualKind;
    fn vertex_count(&self) -> usize;
    /// Ids of the stars or edges crossing the cut given as a membership mask.
    fn crossers(&self, side: &[bool]) -> Vec<usize>;
}

impl DualTarget for SscInstance {
    fn kind(&self) -> DualKind {
        DualKind::Ssc
    }

    fn vertex_count(&self) -> usize {
        SscInstance::vertex_count(self)
    }

    fn crossers(&self, side: &[bool]) -> Vec<usize> {
        self.crossing_stars(side)
    }
}

impl DualTarget for TwoEcsInstance {
    fn kind(&self) -> DualKind {
        DualKind::TwoEcs
    }

    fn vertex_count(&self) -> usize {
        self.graph().vertex_count()
    }

    fn crossers(&self, side: &[bool]) -> Vec<usize> {
        self.graph()
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| side[u] != side[v])
            .map(|(id, _)| id)
            .collect()
    }
}

/// Stars leaving `cut`: source inside, some sink outside.
pub fn crossing_stars(s: &SscInstance, cut: &Cut) -> Result<Vec<usize>> {
    Ok(s.crossers(&cut.mask(s.vertex_count())?))
}

/// Edges with exactly one endpoint in `cut`.
pub fn crossing_edges(t: &TwoEcsInstance, cut: &Cut) -> Result<Vec<usize>> {
    Ok(t.crossers(&cut.mask(t.graph().vertex_count())?))
}

pub fn verify_certificate<T: DualTarget + ?Sized>(
    target: &T,
    cert: &DualCertificate,
) -> Result<CertificateCheck> {
    if cert.kind != target.kind() {
        return Err(Error::Precondition(format!(
            "certificate kind {:?} does not match instance kind {:?}",
            cert.kind,
            target.kind()
        )));
    }
    let n = target.vertex_count();
    let mut hits: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, cut) in cert.cuts.iter().enumerate() {
        for item in target.crossers(&cut.mask(n)?) {
            hits.entry(item).or_default().push(i);
        }
    }
    let violations: Vec<_> = hits
        .into_iter()
        .filter(|(_, cuts)| cuts.len() > 1)
        .map(|(item, cuts)| Violation { item, cuts })
        .collect();
    Ok(CertificateCheck {
        feasible: violations.is_empty(),
        objective: cert.kind.weight() * cert.cuts.len(),
        violations,
    })
}

/// The counting bound: every vertex needs an outgoing star (SSC) or two
/// incident edges (2ECS), so OPT >= n once there are two vertices.
pub fn n_bound(n: usize) -> usize {
    if n >= 2 {
        n
    } else {
        0
    }
}

pub fn lower_bounds<T: DualTarget + ?Sized>(
    target: &T,
    cert: &DualCertificate,
) -> Result<LowerBounds> {
    let check = verify_certificate(target, cert)?;
    if !check.feasible {
        return Err(Error::InfeasibleCertificate(check.violations.len()));
    }
    let n_bound = n_bound(target.vertex_count());
    Ok(LowerBounds {
        dual_objective: check.objective,
        n_bound,
        best: n_bound.max(check.objective),
    })
}

/// The certificate made of all singleton cuts, feasible on every SSC instance.
pub fn singleton_certificate(n: usize) -> DualCertificate {
    DualCertificate {
        kind: DualKind::Ssc,
        cuts: if n >= 2 {
            (0..n).map(|v| Cut::new([v])).collect()
        } else {
            Vec::new()
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Digraph, Multigraph};
    use crate::instance::{mscs_to_ssc, Star};

    fn i1() -> SscInstance {
        SscInstance::new(2, vec![Star::new(0, [1]), Star::new(1, [0])]).unwrap()
    }

    fn i2() -> SscInstance {
        mscs_to_ssc(&Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()).unwrap()
    }

    fn c4() -> TwoEcsInstance {
        TwoEcsInstance::new(Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap())
            .unwrap()
    }

    fn two_ecs_cert(cuts: &[&[usize]]) -> DualCertificate {
        DualCertificate {
            kind: DualKind::TwoEcs,
            cuts: cuts.iter().map(|c| Cut::new(c.iter().copied())).collect(),
        }
    }

    #[test]
    fn star_crossings() {
        assert_eq!(crossing_stars(&i2(), &Cut::new([0])).unwrap(), vec![0]);
        assert_eq!(crossing_stars(&i2(), &Cut::new([0, 1])).unwrap(), vec![1]);
        assert_eq!(crossing_stars(&i1(), &Cut::new([1])).unwrap(), vec![1]);
        assert_eq!(
            crossing_stars(&i1(), &Cut::new([0, 1])),
            Err(Error::InvalidCut)
        );
        assert_eq!(crossing_stars(&i1(), &Cut::new([])), Err(Error::InvalidCut));
    }

    #[test]
    fn edge_crossings() {
        assert_eq!(crossing_edges(&c4(), &Cut::new([0])).unwrap(), vec![0, 3]);
        assert_eq!(
            crossing_edges(&c4(), &Cut::new([0, 1])).unwrap(),
            vec![1, 3]
        );
        let pair = TwoEcsInstance::new(Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap()).unwrap();
        assert_eq!(crossing_edges(&pair, &Cut::new([0])).unwrap(), vec![0, 1]);
    }

    #[test]
    fn singletons_are_feasible() {
        let s = i2();
        let check = verify_certificate(&s, &singleton_certificate(3)).unwrap();
        assert!(check.feasible);
        assert_eq!(check.objective, 3);
    }

    #[test]
    fn two_ecs_certificates() {
        let bad = verify_certificate(&c4(), &two_ecs_cert(&[&[0], &[1]])).unwrap();
        assert!(!bad.feasible);
        assert_eq!(
            bad.violations,
            vec![Violation {
                item: 0,
                cuts: vec![0, 1]
            }]
        );
        let good = verify_certificate(&c4(), &two_ecs_cert(&[&[0], &[2]])).unwrap();
        assert!(good.feasible);
        assert_eq!(good.objective, 4);
    }

    #[test]
    fn bounds_from_certificates() {
        let cert = DualCertificate {
            kind: DualKind::Ssc,
            cuts: vec![Cut::new([2]), Cut::new([1])],
        };
        let b = lower_bounds(&i2(), &cert).unwrap();
        assert_eq!((b.dual_objective, b.n_bound, b.best), (2, 3, 3));
        let empty = DualCertificate {
            kind: DualKind::Ssc,
            cuts: vec![],
        };
        assert_eq!(lower_bounds(&i2(), &empty).unwrap().best, 3);
        let doubled = DualCertificate {
            kind: DualKind::Ssc,
            cuts: vec![Cut::new([2]), Cut::new([2])],
        };
        assert_eq!(
            lower_bounds(&i2(), &doubled),
            Err(Error::InfeasibleCertificate(1))
        );
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        assert!(matches!(
            verify_certificate(&c4(), &singleton_certificate(4)),
            Err(Error::Precondition(_))
        ));
    }
}
