//! Orbit exploration: seeded mutation walks with watched invariants,
//! breadth-first enumeration of integer-quiver orbits, and a boundary
//! continuity diagnostic for carriage-wise polynomials.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariant::CarriageWisePolynomial;
use crate::quiver::Quiver;
use crate::rat::Rat;
use crate::rng::SplitMix64;

/// One row of a walk report. The first row is the start quiver (no vertex);
/// each later row records the vertex just applied. Watched values are
/// recorded whenever the evaluation is well defined (always at inner steps).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WalkStep {
    pub vertex: Option<usize>,
    pub inner: bool,
    pub upper: Vec<Rat>,
    pub watched: Vec<Option<Rat>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WalkReport {
    pub n: usize,
    pub seed: u64,
    pub start: Vec<Rat>,
    pub watched_names: Vec<String>,
    pub steps: Vec<WalkStep>,
}

impl WalkReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("walk report serialization");
        s.push('\n');
        s
    }

    /// True when every watched column is exactly constant over the inner
    /// steps with a recorded value.
    pub fn watched_constant_over_inner_steps(&self) -> bool {
        for w in 0..self.watched_names.len() {
            let mut seen: Option<&Rat> = None;
            for step in self.steps.iter().filter(|s| s.inner) {
                if let Some(value) = &step.watched[w] {
                    match seen {
                        None => seen = Some(value),
                        Some(prev) if prev == value => {}
                        Some(_) => return false,
                    }
                }
            }
        }
        true
    }
}

/// Applies `steps` uniformly random mutations, recording the exact values
/// of the watched functions along the way. Deterministic in the seed.
pub fn random_mutation_walk(
    start: &Quiver,
    steps: usize,
    seed: u64,
    watch: &[(String, CarriageWisePolynomial)],
) -> WalkReport {
    let n = start.n();
    assert!(
        watch.iter().all(|(_, f)| f.n() == n),
        "watched invariants must match the quiver size"
    );
    let mut rng = SplitMix64::new(seed);
    let record = |q: &Quiver, vertex: Option<usize>| WalkStep {
        vertex,
        inner: q.is_inner(),
        upper: q.upper().to_vec(),
        watched: watch.iter().map(|(_, f)| f.evaluate(q).ok()).collect(),
    };
    let mut rows = vec![record(start, None)];
    let mut q = start.clone();
    for _ in 0..steps {
        let k = 1 + rng.below(n as u64) as usize;
        q = q.mutate(k).expect("vertex in range");
        rows.push(record(&q, Some(k)));
    }
    WalkReport {
        n,
        seed,
        start: start.upper().to_vec(),
        watched_names: watch.iter().map(|(name, _)| name.clone()).collect(),
        steps: rows,
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OrbitSummary {
    pub n: usize,
    pub start: Vec<Rat>,
    pub visited: usize,
    pub exhausted: bool,
    pub cap: usize,
}

impl OrbitSummary {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("orbit summary serialization");
        s.push('\n');
        s
    }
}

/// Breadth-first closure of an integer quiver under all single mutations,
/// up to `cap` visited quivers. No isomorphism reduction: the canonical
/// form of a quiver is its raw upper-triangle tuple.
pub fn integer_orbit_bfs(start: &Quiver, cap: usize) -> Result<OrbitSummary> {
    let (summary, _) = integer_orbit(start, cap)?;
    Ok(summary)
}

/// Same traversal, also returning the visited quivers in discovery order.
/// The start quiver is always visited, so the effective cap is at least 1.
pub fn integer_orbit(start: &Quiver, cap: usize) -> Result<(OrbitSummary, Vec<Quiver>)> {
    let cap = cap.max(1);
    let key_of = |q: &Quiver| -> Result<Vec<BigInt>> {
        q.upper()
            .iter()
            .enumerate()
            .map(|(pos, v)| v.to_integer().ok_or(Error::NonIntegerEntry { pos }))
            .collect()
    };
    let n = start.n();
    let mut visited: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    visited.insert(key_of(start)?);
    members.push(start.clone());
    queue.push_back(start.clone());
    let mut exhausted = true;
    'bfs: while let Some(q) = queue.pop_front() {
        for k in 1..=n {
            let next = q.mutate(k)?;
            let key = key_of(&next)?;
            if visited.contains(&key) {
                continue;
            }
            if visited.len() >= cap {
                exhausted = false;
                break 'bfs;
            }
            visited.insert(key);
            members.push(next.clone());
            queue.push_back(next);
        }
    }
    Ok((
        OrbitSummary {
            n,
            start: start.upper().to_vec(),
            visited: visited.len(),
            exhausted,
            cap,
        },
        members,
    ))
}

/// Samples boundary quivers (one entry zeroed) and checks that all
/// compatible pieces of `f` agree there. A disagreement means the function
/// is not well defined on that carriage wall.
pub fn boundary_continuity_check(f: &CarriageWisePolynomial, trials: usize, seed: u64) -> bool {
    let n = f.n();
    let m = crate::positions::entry_count(n);
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let mut upper: Vec<Rat> = (0..m).map(|_| rng.signed_band()).collect();
        upper[rng.below(m as u64) as usize] = Rat::zero();
        let q = Quiver::new(n, upper).expect("well-formed quiver");
        let mut value: Option<Rat> = None;
        for s in q.compatible_patterns() {
            let v = f.piece(&s).eval(q.upper());
            match &value {
                None => value = Some(v),
                Some(prev) if *prev == v => {}
                Some(_) => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::{det_invariant, markov_invariant};
    use crate::poly::Poly;
    use crate::quiver::SignPattern;
    use std::collections::BTreeMap;

    #[test]
    fn walk_reports_are_seed_reproducible() {
        let q = Quiver::from_ints(4, &[1, 1, 2, 1, -3, -1]).unwrap();
        let watch = vec![("det".to_string(), det_invariant(4).unwrap())];
        let a = random_mutation_walk(&q, 50, 99, &watch);
        let b = random_mutation_walk(&q, 50, 99, &watch);
        assert_eq!(a.to_json_string(), b.to_json_string());
        let c = random_mutation_walk(&q, 50, 100, &watch);
        assert_ne!(a.to_json_string(), c.to_json_string());
    }

    /// Entry heights along generic exact walks grow doubly exponentially
    /// with depth (the dynamics are Markov-like), so long walks use a start
    /// with a finite mutation orbit; a shorter walk exercises real growth.
    #[test]
    fn det_column_is_constant_along_walks() {
        let bounded = Quiver::from_ints(4, &[-2, 1, 1, -1, -1, -1]).unwrap();
        let watch = vec![("det".to_string(), det_invariant(4).unwrap())];
        let report = random_mutation_walk(&bounded, 1000, 7, &watch);
        assert!(report.watched_constant_over_inner_steps());
        assert_eq!(report.steps[0].watched[0], Some(Rat::from_int(4)));

        let generic = Quiver::from_ints(4, &[1, 1, 2, 1, -3, -1]).unwrap();
        let report = random_mutation_walk(&generic, 50, 7, &watch);
        assert!(report.watched_constant_over_inner_steps());
        assert_eq!(report.steps[0].watched[0], Some(Rat::from_int(16)));
    }

    #[test]
    fn markov_column_is_constant_from_the_sample_start() {
        let q = Quiver::from_ints(3, &[2, -2, 2]).unwrap();
        let watch = vec![("markov".to_string(), markov_invariant(3).unwrap())];
        let report = random_mutation_walk(&q, 500, 11, &watch);
        assert!(report.watched_constant_over_inner_steps());
        assert_eq!(report.steps[0].watched[0], Some(Rat::from_int(4)));
    }

    #[test]
    fn zero_steps_gives_only_the_start_row() {
        let q = Quiver::from_ints(3, &[2, -2, 2]).unwrap();
        let report = random_mutation_walk(&q, 0, 1, &[]);
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].vertex, None);
    }

    #[test]
    fn sample_integer_orbit_has_two_elements() {
        let q = Quiver::from_ints(3, &[2, -2, 2]).unwrap();
        let (summary, members) = integer_orbit(&q, 10_000).unwrap();
        assert_eq!(summary.visited, 2);
        assert!(summary.exhausted);
        let expected = Quiver::from_ints(3, &[-2, 2, -2]).unwrap();
        assert!(members.contains(&expected));
    }

    #[test]
    fn zero_quiver_orbit_is_a_fixed_point() {
        let summary = integer_orbit_bfs(&Quiver::zero(4), 100).unwrap();
        assert_eq!(summary.visited, 1);
        assert!(summary.exhausted);
    }

    #[test]
    fn capped_orbit_reports_truthfully() {
        let q = Quiver::from_ints(3, &[1, -1, 1]).unwrap();
        let summary = integer_orbit_bfs(&q, 10_000).unwrap();
        assert!(summary.visited <= 10_000);
        if !summary.exhausted {
            assert_eq!(summary.visited, 10_000);
        }
        // A cap of 1 on a non-fixed point must report a truncated orbit;
        // cap 0 clamps to 1 since the start is always visited.
        let capped = integer_orbit_bfs(&q, 1).unwrap();
        assert_eq!(capped.visited, 1);
        assert!(!capped.exhausted);
        let clamped = integer_orbit_bfs(&q, 0).unwrap();
        assert_eq!((clamped.visited, clamped.cap), (1, 1));
    }

    #[test]
    fn exhausted_orbits_are_mutation_closed() {
        let q = Quiver::from_ints(3, &[2, -2, 2]).unwrap();
        let (summary, members) = integer_orbit(&q, 10_000).unwrap();
        assert!(summary.exhausted);
        for member in &members {
            for k in 1..=3 {
                assert!(members.contains(&member.mutate(k).unwrap()));
            }
        }
    }

    #[test]
    fn non_integer_start_is_rejected() {
        let q = Quiver::new(
            3,
            vec![Rat::from_frac(1, 2), Rat::from_int(1), Rat::from_int(1)],
        )
        .unwrap();
        assert!(matches!(
            integer_orbit_bfs(&q, 10),
            Err(Error::NonIntegerEntry { pos: 0 })
        ));
    }

    #[test]
    fn boundary_continuity_of_the_builtin_invariants() {
        assert!(boundary_continuity_check(
            &det_invariant(4).unwrap(),
            200,
            3
        ));
        assert!(boundary_continuity_check(
            &markov_invariant(3).unwrap(),
            200,
            3
        ));
    }

    #[test]
    fn boundary_continuity_fails_for_a_jump() {
        let mut pieces: BTreeMap<SignPattern, Poly> = SignPattern::enumerate(3)
            .into_iter()
            .map(|s| (s, Poly::one(3)))
            .collect();
        pieces.insert(
            SignPattern::all_plus(3),
            Poly::constant(3, Rat::from_int(2)),
        );
        let f = CarriageWisePolynomial::new(3, pieces).unwrap();
        assert!(!boundary_continuity_check(&f, 500, 3));
    }
}
