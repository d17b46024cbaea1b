//! Resolution of the free choices left open by the constructions.
//!
//! Whenever a construction may pick "any" element of a candidate list, it
//! sorts the candidates canonically (by vertex or star id) and asks an
//! [`Advisor`] for an index. Advisors are only consulted when there are at
//! least two candidates, so a script lists exactly the real decisions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Where a choice is being made. Carried for logging and debugging; the
/// advisor protocol itself is purely positional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChoicePoint {
    /// First arc (or oriented edge) of the path.
    StartArc,
    /// Next path vertex among the unvisited candidates.
    Extend,
    /// Vertex appended after re-routing the path through the end vertex.
    Rotate,
    /// Star realizing a given arc.
    StarForArc,
    /// Next vertex tried by the augmenting depth-first search.
    AugmentStep,
    /// Star with several leaf sinks, and the two leaves used as cuts.
    LeafStar,
    LeafPair,
    /// Leaf of the end vertex when the cycle has length two.
    Leaf,
    /// Direction around the cycle, and the leaf/cycle star picked with it.
    Direction,
    LeafCycleStar,
    /// Cycle-arc star with a sink outside a triangle.
    ExternalStar,
    /// Star leaving a two-cycle through a third vertex, and that vertex.
    BranchStar,
    BranchSink,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvisorStats {
    /// Decisions taken (choice points with two or more candidates).
    pub decisions: usize,
    /// Script entries that were out of range and replaced by 0.
    pub out_of_range: usize,
    /// Decisions taken after the script ran out, all answered with 0.
    pub exhausted: usize,
}

impl AdvisorStats {
    pub fn fallbacks(&self) -> usize {
        self.out_of_range + self.exhausted
    }
}

pub trait Advisor {
    /// Index into a candidate list of length `count >= 2`.
    fn pick(&mut self, point: ChoicePoint, count: usize) -> usize;

    fn stats(&self) -> AdvisorStats {
        AdvisorStats::default()
    }
}

impl<A: Advisor + ?Sized> Advisor for &mut A {
    fn pick(&mut self, point: ChoicePoint, count: usize) -> usize {
        (**self).pick(point, count)
    }

    fn stats(&self) -> AdvisorStats {
        (**self).stats()
    }
}

/// Consult `advisor` only if there is a real choice; out-of-range answers
/// become 0.
pub fn choose<A: Advisor + ?Sized>(advisor: &mut A, point: ChoicePoint, count: usize) -> usize {
    if count <= 1 {
        return 0;
    }
    let i = advisor.pick(point, count);
    if i < count {
        i
    } else {
        0
    }
}

/// Pick an element of a nonempty candidate slice.
pub fn choose_from<A: Advisor + ?Sized, T: Copy>(
    advisor: &mut A,
    point: ChoicePoint,
    items: &[T],
) -> T {
    items[choose(advisor, point, items.len())]
}

/// Always the first (smallest) candidate.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultAdvisor;

impl Advisor for DefaultAdvisor {
    fn pick(&mut self, _: ChoicePoint, _: usize) -> usize {
        0
    }
}

/// Replays a fixed list of indices and logs what it actually answered, so
/// the log of one run is a script that reproduces it.
#[derive(Debug, Clone, Default)]
pub struct ScriptedAdvisor {
    script: Vec<usize>,
    cursor: usize,
    stats: AdvisorStats,
    log: Vec<usize>,
}

impl ScriptedAdvisor {
    pub fn new(script: Vec<usize>) -> Self {
        Self {
            script,
            ..Self::default()
        }
    }

    /// The answers given so far.
    pub fn log(&self) -> &[usize] {
        &self.log
    }

    pub fn remaining(&self) -> usize {
        self.script.len().saturating_sub(self.cursor)
    }
}

impl Advisor for ScriptedAdvisor {
    fn pick(&mut self, _: ChoicePoint, count: usize) -> usize {
        self.stats.decisions += 1;
        let answer = match self.script.get(self.cursor) {
            Some(&i) if i < count => i,
            Some(_) => {
                self.stats.out_of_range += 1;
                0
            }
            None => {
                self.stats.exhausted += 1;
                0
            }
        };
        self.cursor += 1;
        self.log.push(answer);
        answer
    }

    fn stats(&self) -> AdvisorStats {
        self.stats
    }
}

/// Uniform choices from a seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct RandomAdvisor {
    rng: ChaCha8Rng,
    stats: AdvisorStats,
}

impl RandomAdvisor {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            stats: AdvisorStats::default(),
        }
    }
}

impl Advisor for RandomAdvisor {
    fn pick(&mut self, _: ChoicePoint, count: usize) -> usize {
        self.stats.decisions += 1;
        self.rng.random_range(0..count)
    }

    fn stats(&self) -> AdvisorStats {
        self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_candidates_are_not_consulted() {
        let mut a = ScriptedAdvisor::new(vec![1]);
        assert_eq!(choose(&mut a, ChoicePoint::Extend, 1), 0);
        assert_eq!(a.stats().decisions, 0);
        assert_eq!(choose(&mut a, ChoicePoint::Extend, 3), 1);
        assert_eq!(a.log(), &[1]);
    }

    #[test]
    fn script_fallbacks_are_counted() {
        let mut a = ScriptedAdvisor::new(vec![5, 1]);
        assert_eq!(choose(&mut a, ChoicePoint::StartArc, 2), 0);
        assert_eq!(choose(&mut a, ChoicePoint::StartArc, 2), 1);
        assert_eq!(choose(&mut a, ChoicePoint::StartArc, 2), 0);
        let s = a.stats();
        assert_eq!((s.decisions, s.out_of_range, s.exhausted), (3, 1, 1));
        assert_eq!(s.fallbacks(), 2);
        assert_eq!(a.log(), &[0, 1, 0]);
    }

    #[test]
    fn log_replays_the_same_answers() {
        let mut r = RandomAdvisor::new(7);
        let answers: Vec<_> = (2..20)
            .map(|c| choose(&mut r, ChoicePoint::Extend, c))
            .collect();
        let mut s = ScriptedAdvisor::new(answers.clone());
        let replay: Vec<_> = (2..20)
            .map(|c| choose(&mut s, ChoicePoint::Extend, c))
            .collect();
        assert_eq!(answers, replay);
        assert_eq!(s.stats().fallbacks(), 0);
    }

    #[test]
    fn random_advisor_is_deterministic() {
        let a: Vec<_> = {
            let mut r = RandomAdvisor::new(3);
            (0..10).map(|_| r.pick(ChoicePoint::Extend, 5)).collect()
        };
        let mut r = RandomAdvisor::new(3);
        let b: Vec<_> = (0..10).map(|_| r.pick(ChoicePoint::Extend, 5)).collect();
        assert_eq!(a, b);
    }
}
