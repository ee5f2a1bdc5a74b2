//! Per-carriage polynomial extensions of the mutation map.
//!
//! On a fixed carriage the case split in the mutation rule is constant, so
//! the mutation is the restriction of a global polynomial map. That map
//! depends only on the mutated vertex and the signs of the entries incident
//! to it; this module builds it, enumerates which carriages a mutation can
//! send an open set of a carriage into, and verifies the symbolic identities
//! those maps satisfy.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyVec};
use crate::positions::{entry_count, index_of, pair_of};
use crate::quiver::{Sign, SignPattern};
use crate::rat::Rat;

/// What the polynomial mutation map actually depends on: the vertex and the
/// signs of the entries incident to it. Patterns differing only away from
/// `k` produce equal keys, hence equal maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MutationMapKey {
    k: usize,
    incident_signs: Vec<Sign>,
}

impl MutationMapKey {
    pub fn new(k: usize, s: &SignPattern) -> Result<Self> {
        let n = s.n();
        if k < 1 || k > n {
            return Err(Error::VertexOutOfRange { k, n });
        }
        let incident_signs = (0..entry_count(n))
            .filter(|&pos| {
                let (i, j) = pair_of(n, pos);
                i == k || j == k
            })
            .map(|pos| s.sign(pos))
            .collect();
        Ok(MutationMapKey { k, incident_signs })
    }

    pub fn vertex(&self) -> usize {
        self.k
    }
}

/// Sign of the term x_{i,k}·x_{k,j} added to the off-k entry (i,j) on
/// carriage `s`: positive when both factors are positive, negative when
/// both are negative, `None` when the rule adds nothing.
fn added_term_sign(s: &SignPattern, k: usize, i: usize, j: usize) -> Option<Sign> {
    let a = s.entry_sign(i, k);
    let b = s.entry_sign(k, j);
    if a == b {
        Some(a)
    } else {
        None
    }
}

/// The product x_{i,k}·x_{k,j} as a polynomial in the upper-triangle
/// variables, with skew-symmetry signs folded into the coefficient.
fn incident_product(n: usize, i: usize, k: usize, j: usize) -> Poly {
    let m = entry_count(n);
    let (pos_a, sign_a) = if i < k {
        (index_of(n, i, k), 1)
    } else {
        (index_of(n, k, i), -1)
    };
    let (pos_b, sign_b) = if k < j {
        (index_of(n, k, j), 1)
    } else {
        (index_of(n, j, k), -1)
    };
    let p = &Poly::var(m, pos_a) * &Poly::var(m, pos_b);
    if sign_a * sign_b < 0 {
        -&p
    } else {
        p
    }
}

/// The global polynomial map agreeing with the mutation at `k` on every
/// inner point of carriage `s`.
pub fn mu_poly(k: usize, s: &SignPattern) -> Result<PolyVec> {
    let n = s.n();
    if k < 1 || k > n {
        return Err(Error::VertexOutOfRange { k, n });
    }
    let m = entry_count(n);
    let mut components = Vec::with_capacity(m);
    for pos in 0..m {
        let (i, j) = pair_of(n, pos);
        let var = Poly::var(m, pos);
        if i == k || j == k {
            components.push(-&var);
        } else {
            match added_term_sign(s, k, i, j) {
                Some(Sign::Plus) => components.push(&var + &incident_product(n, i, k, j)),
                Some(Sign::Minus) => components.push(&var - &incident_product(n, i, k, j)),
                None => components.push(var),
            }
        }
    }
    Ok(PolyVec::new(components))
}

/// Carriages that the mutation at `k` sends a nonempty open subset of the
/// inner points of `s` into.
///
/// Entries incident to k flip sign. An off-k entry keeps its sign when the
/// added term vanishes; when the term has sign t, the entry's target sign is
/// forced to t if it already is t, and is free otherwise (for fixed incident
/// values the term is a constant and the entry an independent coordinate, so
/// both magnitude relations happen on open sets). Landings on a carriage
/// boundary have measure zero and are excluded.
pub fn feasible_targets(s: &SignPattern, k: usize) -> Result<BTreeSet<SignPattern>> {
    let n = s.n();
    if k < 1 || k > n {
        return Err(Error::VertexOutOfRange { k, n });
    }
    let m = entry_count(n);
    let mut choices: Vec<Vec<Sign>> = Vec::with_capacity(m);
    for pos in 0..m {
        let (i, j) = pair_of(n, pos);
        let current = s.sign(pos);
        if i == k || j == k {
            choices.push(vec![current.flip()]);
        } else {
            match added_term_sign(s, k, i, j) {
                None => choices.push(vec![current]),
                Some(t) if t == current => choices.push(vec![current]),
                Some(t) => choices.push(vec![current, t]),
            }
        }
    }
    let mut targets = BTreeSet::new();
    let mut stack: Vec<Vec<Sign>> = vec![Vec::with_capacity(m)];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == m {
            targets.insert(SignPattern::new(prefix));
            continue;
        }
        for &choice in &choices[prefix.len()] {
            let mut next = prefix.clone();
            next.push(choice);
            stack.push(next);
        }
    }
    Ok(targets)
}

/// Checks that following the mutation map of `s` by the map of any feasible
/// target carriage composes to the identity, as polynomials.
pub fn verify_involution_identity(s: &SignPattern, k: usize) -> Result<bool> {
    let forward = mu_poly(k, s)?;
    for target in feasible_targets(s, k)? {
        let back = mu_poly(k, &target)?;
        if !back.compose(&forward).is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two double-mutation translation families on 4-quivers.
///
/// For vertex 4 on carriages with x14 > 0, x24 < 0, x34 < 0, applying the
/// mutation map twice translates (x12, x13) by (-2·x14·x24, -2·x14·x34); in
/// letters, (x, y) gains 2z·(v, -w). The mirror family is vertex 3 on
/// carriages with x13 > 0, x23 < 0, x34 > 0, translating (x12, x14) by
/// (-2·x13·x23, 2·x13·x34).
pub fn verify_double_mutation_translation(s: &SignPattern, k: usize) -> Result<bool> {
    let n = s.n();
    if n != 4 {
        return Err(Error::UnsupportedSize {
            expected: 4,
            got: n,
        });
    }
    let m = entry_count(4);
    let pos = |i, j| index_of(4, i, j);
    let (required, translated): (Vec<(usize, Sign)>, Vec<(usize, usize, usize, i64)>) = match k {
        // (required signs) and (component, factor position, factor position, scale)
        4 => (
            vec![
                (pos(1, 4), Sign::Plus),
                (pos(2, 4), Sign::Minus),
                (pos(3, 4), Sign::Minus),
            ],
            vec![
                (pos(1, 2), pos(1, 4), pos(2, 4), -2),
                (pos(1, 3), pos(1, 4), pos(3, 4), -2),
            ],
        ),
        3 => (
            vec![
                (pos(1, 3), Sign::Plus),
                (pos(2, 3), Sign::Minus),
                (pos(3, 4), Sign::Plus),
            ],
            vec![
                (pos(1, 2), pos(1, 3), pos(2, 3), -2),
                (pos(1, 4), pos(1, 3), pos(3, 4), 2),
            ],
        ),
        _ => {
            return Err(Error::WrongCarriage(format!(
                "no translation identity is recorded for vertex {k}"
            )))
        }
    };
    for (p, want) in &required {
        if s.sign(*p) != *want {
            return Err(Error::WrongCarriage(format!(
                "vertex {k} family needs sign {} at position {p}, pattern is {s}",
                want.as_char()
            )));
        }
    }
    let map = mu_poly(k, s)?;
    let double = map.compose(&map);
    let mut expected: Vec<Poly> = (0..m).map(|v| Poly::var(m, v)).collect();
    for (component, a, b, scale) in translated {
        let delta = (&Poly::var(m, a) * &Poly::var(m, b)).scale(&Rat::from_int(scale));
        expected[component] = &expected[component] + &delta;
    }
    Ok(double == PolyVec::new(expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::rng::SplitMix64;

    fn pattern(text: &str) -> SignPattern {
        text.parse().unwrap()
    }

    /// Random inner quiver lying in carriage `s`.
    pub(crate) fn random_in_carriage(s: &SignPattern, rng: &mut SplitMix64) -> Quiver {
        let upper = s
            .signs()
            .iter()
            .map(|sign| {
                let mag = rng.magnitude_band();
                match sign {
                    Sign::Plus => mag,
                    Sign::Minus => -mag,
                }
            })
            .collect();
        Quiver::new(s.n(), upper).unwrap()
    }

    #[test]
    fn mu_poly_matches_worked_letter_example() {
        // Carriage with z = x14 > 0, v = -x24 > 0, w = x34 < 0; in letters
        // the map is (x+vz, y+(-w)z, -z, u, -v, -w).
        let s = pattern("-+++--");
        let map = mu_poly(4, &s).unwrap();
        let expect = [
            "x12 - x14*x24",
            "x13 - x14*x34",
            "-x14",
            "x23",
            "-x24",
            "-x34",
        ];
        for (c, text) in expect.iter().enumerate() {
            assert_eq!(map.component(c), &Poly::parse(text, 4).unwrap());
        }
    }

    #[test]
    fn mu_poly_all_plus_only_negates_incident_entries() {
        let s = SignPattern::all_plus(4);
        let map = mu_poly(4, &s).unwrap();
        let expect = ["x12", "x13", "-x14", "x23", "-x24", "-x34"];
        for (c, text) in expect.iter().enumerate() {
            assert_eq!(map.component(c), &Poly::parse(text, 4).unwrap());
        }
    }

    #[test]
    fn mu_poly_agrees_with_mutation_on_its_carriage() {
        let mut rng = SplitMix64::new(2024);
        for n in [3usize, 4] {
            for s in SignPattern::enumerate(n) {
                for k in 1..=n {
                    let map = mu_poly(k, &s).unwrap();
                    for _ in 0..25 {
                        let q = random_in_carriage(&s, &mut rng);
                        assert_eq!(map.eval(q.upper()), q.mutate(k).unwrap().upper());
                    }
                }
            }
        }
    }

    #[test]
    fn mu_poly_depends_only_on_the_map_key() {
        for k in 1..=4usize {
            let mut by_key = std::collections::BTreeMap::new();
            for s in SignPattern::enumerate(4) {
                let key = MutationMapKey::new(k, &s).unwrap();
                let map = mu_poly(k, &s).unwrap();
                by_key.entry(key).or_insert_with(Vec::new).push(map);
            }
            assert_eq!(by_key.len(), 8);
            for maps in by_key.values() {
                assert_eq!(maps.len(), 8);
                assert!(maps.iter().all(|m| m == &maps[0]));
            }
        }
    }

    #[test]
    fn feasible_targets_all_plus_is_forced() {
        let targets = feasible_targets(&SignPattern::all_plus(4), 4).unwrap();
        assert_eq!(targets.len(), 1);
        assert!(targets.contains(&pattern("++-+--")));
    }

    #[test]
    fn feasible_targets_with_one_free_position() {
        let targets = feasible_targets(&pattern("-+++--"), 4).unwrap();
        let expected: BTreeSet<SignPattern> =
            [pattern("-+-+++"), pattern("++-+++")].into_iter().collect();
        assert_eq!(targets, expected);
    }

    #[test]
    fn feasible_targets_n2() {
        let targets = feasible_targets(&pattern("+"), 1).unwrap();
        assert_eq!(targets.len(), 1);
        assert!(targets.contains(&pattern("-")));
    }

    #[test]
    fn feasible_targets_rejects_bad_vertex() {
        assert!(feasible_targets(&pattern("+++"), 0).is_err());
        assert!(mu_poly(5, &pattern("+++")).is_err());
    }

    /// Constructs an inner quiver in `s` that the mutation at `k` provably
    /// sends into the chosen target: free entries get magnitude 1/2 (to be
    /// overwhelmed by the added term) or 2 (to survive it).
    fn witness_quiver(s: &SignPattern, k: usize, t: &SignPattern) -> Quiver {
        let n = s.n();
        let upper = (0..entry_count(n))
            .map(|p| {
                let (i, j) = pair_of(n, p);
                let unit = Rat::from_int(s.sign(p).unit());
                if i == k || j == k {
                    unit
                } else if t.sign(p) == s.sign(p) {
                    &unit * &Rat::from_int(2)
                } else {
                    &unit * &Rat::from_frac(1, 2)
                }
            })
            .collect();
        Quiver::new(n, upper).unwrap()
    }

    #[test]
    fn sampled_landings_stay_within_feasible_targets() {
        let mut rng = SplitMix64::new(31);
        for n in [3usize, 4] {
            for s in SignPattern::enumerate(n) {
                for k in 1..=n {
                    let targets = feasible_targets(&s, k).unwrap();
                    for _ in 0..10_000 {
                        let q = random_in_carriage(&s, &mut rng);
                        let image = q.mutate(k).unwrap();
                        if let Ok(landed) = image.sign_pattern() {
                            assert!(
                                targets.contains(&landed),
                                "mutation of {s} at {k} landed in unexpected {landed}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn every_claimed_target_is_witnessed() {
        for n in [2usize, 3, 4] {
            for s in SignPattern::enumerate(n) {
                for k in 1..=n {
                    for t in feasible_targets(&s, k).unwrap() {
                        let q = witness_quiver(&s, k, &t);
                        assert_eq!(q.sign_pattern().unwrap(), s);
                        let landed = q.mutate(k).unwrap().sign_pattern().unwrap();
                        assert_eq!(landed, t, "witness for {s} --{k}--> {t} landed in {landed}");
                    }
                }
            }
        }
    }

    /// Composing the Pfaffian with any carriage map negates it; cross-check
    /// the symbolic identity numerically against the recursive Pfaffian.
    #[test]
    fn pfaffian_composition_cross_checked_numerically() {
        use crate::quiver::pfaffian_poly;
        let pf = pfaffian_poly(4).unwrap();
        let s = SignPattern::all_plus(4);
        let map = mu_poly(4, &s).unwrap();
        let composed = pf.compose(&map);
        assert_eq!(composed, -&pf);
        let mut rng = SplitMix64::new(64);
        for _ in 0..10 {
            let q = random_in_carriage(&s, &mut rng);
            assert_eq!(composed.eval(q.upper()), -&q.pfaffian().unwrap());
            assert_eq!(
                composed.eval(q.upper()),
                q.mutate(4).unwrap().pfaffian().unwrap()
            );
        }
    }

    #[test]
    fn involution_identity_holds_exhaustively_for_n3() {
        for s in SignPattern::enumerate(3) {
            for k in 1..=3 {
                assert!(verify_involution_identity(&s, k).unwrap());
            }
        }
    }

    #[test]
    fn involution_identity_sample_n4_cases() {
        assert!(verify_involution_identity(&SignPattern::all_plus(4), 4).unwrap());
        assert!(verify_involution_identity(&pattern("-+++--"), 4).unwrap());
    }

    #[test]
    fn involution_identity_n2() {
        for s in SignPattern::enumerate(2) {
            for k in 1..=2 {
                assert!(verify_involution_identity(&s, k).unwrap());
            }
        }
    }

    #[test]
    fn translation_identity_for_vertex4_family() {
        // x14 > 0, x24 < 0, x34 < 0; the other three signs are free.
        let mut count = 0;
        for s in SignPattern::enumerate(4) {
            if s.sign(2) == Sign::Plus && s.sign(4) == Sign::Minus && s.sign(5) == Sign::Minus {
                assert!(verify_double_mutation_translation(&s, 4).unwrap());
                count += 1;
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn translation_identity_for_mirror_vertex3_family() {
        // x13 > 0, x23 < 0, x34 > 0.
        let mut count = 0;
        for s in SignPattern::enumerate(4) {
            if s.sign(1) == Sign::Plus && s.sign(3) == Sign::Minus && s.sign(5) == Sign::Plus {
                assert!(verify_double_mutation_translation(&s, 3).unwrap());
                count += 1;
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn translation_identity_rejects_wrong_carriage() {
        let err = verify_double_mutation_translation(&SignPattern::all_plus(4), 4);
        assert!(matches!(err, Err(Error::WrongCarriage(_))));
        let err = verify_double_mutation_translation(&pattern("-+++--"), 2);
        assert!(matches!(err, Err(Error::WrongCarriage(_))));
        let err = verify_double_mutation_translation(&pattern("+++"), 4);
        assert!(matches!(err, Err(Error::UnsupportedSize { .. })));
    }
}
