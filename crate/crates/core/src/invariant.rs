//! Carriage-wise polynomial functions and symbolic invariance checking.
//!
//! A carriage-wise polynomial assigns one polynomial piece to every sign
//! pattern; it is mutation-invariant exactly when, for every carriage s,
//! vertex k and feasible target carriage t, the piece of s equals, as a
//! polynomial, the piece of t composed with the mutation map of s. The
//! checker here verifies that identity exhaustively and produces a concrete
//! witness (including a rational counterexample point) when it fails.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{feasible_targets, mu_poly, MutationMapKey};
use crate::poly::Poly;
use crate::positions::entry_count;
use crate::quiver::{determinant_poly, Quiver, SignPattern};
use crate::rat::Rat;
use crate::rng::SplitMix64;

/// One polynomial piece per carriage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarriageWisePolynomial {
    n: usize,
    pieces: BTreeMap<SignPattern, Poly>,
}

impl CarriageWisePolynomial {
    /// Builds from a complete piece map: one piece per pattern, each over
    /// the n(n-1)/2 entry variables.
    pub fn new(n: usize, pieces: BTreeMap<SignPattern, Poly>) -> Result<Self> {
        let m = entry_count(n);
        let expected = 1usize << m;
        if pieces.len() != expected {
            return Err(Error::InvalidFile(format!(
                "need {expected} pieces for n = {n}, got {}",
                pieces.len()
            )));
        }
        for (pattern, piece) in &pieces {
            if pattern.len() != m || piece.num_vars() != m {
                return Err(Error::InvalidFile(format!(
                    "piece at {pattern} has the wrong variable count"
                )));
            }
        }
        Ok(CarriageWisePolynomial { n, pieces })
    }

    /// The same polynomial on every carriage.
    pub fn uniform(n: usize, piece: Poly) -> Self {
        assert_eq!(piece.num_vars(), entry_count(n));
        let pieces = SignPattern::enumerate(n)
            .into_iter()
            .map(|s| (s, piece.clone()))
            .collect();
        CarriageWisePolynomial { n, pieces }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &BTreeMap<SignPattern, Poly> {
        &self.pieces
    }

    pub fn piece(&self, s: &SignPattern) -> &Poly {
        &self.pieces[s]
    }

    /// Max total degree across pieces.
    pub fn degree_bound(&self) -> u32 {
        self.pieces.values().map(Poly::degree).max().unwrap_or(0)
    }

    /// The common piece, when all pieces coincide.
    pub fn common_piece(&self) -> Option<&Poly> {
        let first = self.pieces.values().next()?;
        self.pieces.values().all(|p| p == first).then_some(first)
    }

    /// Value at a quiver: an inner quiver uses its own carriage's piece; a
    /// boundary quiver is accepted only if every compatible piece agrees.
    pub fn evaluate(&self, q: &Quiver) -> Result<Rat> {
        if q.n() != self.n {
            return Err(Error::UnsupportedSize {
                expected: self.n,
                got: q.n(),
            });
        }
        let patterns = q.compatible_patterns();
        let mut value: Option<Rat> = None;
        for s in &patterns {
            let v = self.pieces[s].eval(q.upper());
            match &value {
                None => value = Some(v),
                Some(prev) if *prev == v => {}
                Some(_) => return Err(Error::AmbiguousBoundary),
            }
        }
        Ok(value.expect("at least one compatible pattern"))
    }

    pub fn to_json_string(&self) -> String {
        let file = InvariantFile {
            n: self.n,
            degree: self.degree_bound(),
            pieces: self
                .pieces
                .iter()
                .map(|(pattern, poly)| PieceFile {
                    pattern: pattern.clone(),
                    poly: poly.to_string(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("invariant serialization");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: InvariantFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
        let mut pieces = BTreeMap::new();
        for piece in file.pieces {
            let poly = Poly::parse(&piece.poly, file.n)?;
            if piece.pattern.len() != entry_count(file.n) {
                return Err(Error::InvalidFile(format!(
                    "pattern {} does not fit n = {}",
                    piece.pattern, file.n
                )));
            }
            if pieces.insert(piece.pattern.clone(), poly).is_some() {
                return Err(Error::InvalidFile(format!(
                    "duplicate piece for pattern {}",
                    piece.pattern
                )));
            }
        }
        CarriageWisePolynomial::new(file.n, pieces)
    }
}

#[derive(Serialize, Deserialize)]
struct InvariantFile {
    n: usize,
    degree: u32,
    pieces: Vec<PieceFile>,
}

#[derive(Serialize, Deserialize)]
struct PieceFile {
    pattern: SignPattern,
    poly: String,
}

/// The determinant as a carriage-wise polynomial on 4-quivers: the same
/// degree-4 polynomial (the squared Pfaffian) on every carriage.
pub fn det_invariant(n: usize) -> Result<CarriageWisePolynomial> {
    if n != 4 {
        return Err(Error::UnsupportedSize {
            expected: 4,
            got: n,
        });
    }
    Ok(CarriageWisePolynomial::uniform(4, determinant_poly(4)))
}

/// The piecewise invariant on 3-quivers: x12² + x13² + x23² ± x12·x13·x23,
/// the sign depending on the carriage class. In the letter dictionary
/// (x, y, z) = (x12, -x13, x23) this is x² + y² + z² - xyz when at least
/// two of x, y, z are positive, and x² + y² + z² + xyz otherwise.
pub fn markov_invariant(n: usize) -> Result<CarriageWisePolynomial> {
    if n != 3 {
        return Err(Error::UnsupportedSize {
            expected: 3,
            got: n,
        });
    }
    let squares = Poly::parse("x12^2 + x13^2 + x23^2", 3)?;
    let product = Poly::parse("x12*x13*x23", 3)?;
    let pieces = SignPattern::enumerate(3)
        .into_iter()
        .map(|s| {
            let plus_letters = [s.sign(0), s.sign(1).flip(), s.sign(2)]
                .iter()
                .filter(|&&sig| sig == crate::quiver::Sign::Plus)
                .count();
            let piece = if plus_letters >= 2 {
                &squares + &product
            } else {
                &squares - &product
            };
            (s, piece)
        })
        .collect();
    CarriageWisePolynomial::new(3, pieces)
}

/// Certificate that a carriage-wise polynomial fails invariance: the pieces
/// of `source` and `target` disagree after composing with the mutation map
/// at `vertex`, and (when sampling succeeds) a concrete inner rational
/// quiver where the function value changes under the mutation.
#[derive(Clone, Debug)]
pub struct Witness {
    pub source: SignPattern,
    pub vertex: usize,
    pub target: SignPattern,
    pub difference: Poly,
    pub counterexample: Option<CounterexamplePoint>,
}

#[derive(Clone, Debug)]
pub struct CounterexamplePoint {
    pub quiver: Quiver,
    pub mutated: Quiver,
    pub value_before: Rat,
    pub value_after: Rat,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "piece of {} minus (piece of {} after mutation map at {}) = {}",
            self.source, self.target, self.vertex, self.difference
        )?;
        if let Some(point) = &self.counterexample {
            write!(
                f,
                "; at {} mutation at {} gives {} vs {}",
                point.quiver, self.vertex, point.value_before, point.value_after
            )?;
        }
        Ok(())
    }
}

/// Exhaustive symbolic invariance check: for every carriage s, vertex k and
/// feasible target t, the identity piece(s) = piece(t) ∘ map(k, s) must hold
/// as polynomials. Returns the first failure in deterministic order, or
/// None when the function is invariant.
pub fn check_invariant_symbolic(f: &CarriageWisePolynomial) -> Option<Witness> {
    let n = f.n();
    // Compositions depend only on (map key, target piece); cache them.
    let mut cache: BTreeMap<(MutationMapKey, SignPattern), Poly> = BTreeMap::new();
    for s in SignPattern::enumerate(n) {
        for k in 1..=n {
            let key = MutationMapKey::new(k, &s).expect("valid vertex");
            for t in feasible_targets(&s, k).expect("valid vertex") {
                let composed = cache
                    .entry((key.clone(), t.clone()))
                    .or_insert_with(|| {
                        let map = mu_poly(k, &s).expect("valid vertex");
                        f.piece(&t).compose(&map)
                    })
                    .clone();
                let difference = f.piece(&s) - &composed;
                if !difference.is_zero() {
                    let counterexample = sample_counterexample(f, &s, k, &t);
                    return Some(Witness {
                        source: s,
                        vertex: k,
                        target: t,
                        difference,
                        counterexample,
                    });
                }
            }
        }
    }
    None
}

/// Hunts for an inner rational quiver in `s` whose mutation lands in `t`
/// with a different function value.
fn sample_counterexample(
    f: &CarriageWisePolynomial,
    s: &SignPattern,
    k: usize,
    t: &SignPattern,
) -> Option<CounterexamplePoint> {
    let mut rng = SplitMix64::new(0x5eed_c0de);
    for _ in 0..10_000 {
        let upper: Vec<Rat> = s
            .signs()
            .iter()
            .map(|sign| {
                let mag = rng.magnitude_band();
                match sign {
                    crate::quiver::Sign::Plus => mag,
                    crate::quiver::Sign::Minus => -mag,
                }
            })
            .collect();
        let q = Quiver::new(s.n(), upper).expect("well-formed quiver");
        let mutated = q.mutate(k).expect("valid vertex");
        if !mutated.is_inner() || &mutated.sign_pattern().expect("inner") != t {
            continue;
        }
        let value_before = f.piece(s).eval(q.upper());
        let value_after = f.piece(t).eval(mutated.upper());
        if value_before != value_after {
            return Some(CounterexamplePoint {
                quiver: q,
                mutated,
                value_before,
                value_after,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::pfaffian_poly;

    #[test]
    fn det_invariant_pieces_are_the_squared_pfaffian() {
        let det = det_invariant(4).unwrap();
        let pf = pfaffian_poly(4).unwrap();
        let square = &pf * &pf;
        assert_eq!(det.common_piece(), Some(&square));
        assert_eq!(det.degree_bound(), 4);
        assert!(det_invariant(3).is_err());
    }

    #[test]
    fn det_invariant_is_symbolically_invariant() {
        assert!(check_invariant_symbolic(&det_invariant(4).unwrap()).is_none());
    }

    #[test]
    fn det_invariant_evaluates_to_the_determinant() {
        let det = det_invariant(4).unwrap();
        let q = Quiver::from_ints(4, &[1, 1, 2, 1, -3, -1]).unwrap();
        assert_eq!(det.evaluate(&q).unwrap(), Rat::from_int(16));
        assert_eq!(det.evaluate(&Quiver::zero(4)).unwrap(), Rat::zero());
    }

    #[test]
    fn constant_tuple_evaluates_everywhere() {
        let one = CarriageWisePolynomial::uniform(4, Poly::one(6));
        let q = Quiver::from_ints(4, &[0, 0, 2, 0, -3, 0]).unwrap();
        assert_eq!(one.evaluate(&q).unwrap(), Rat::one());
    }

    #[test]
    fn markov_piece_formula_matches_the_letter_classes() {
        let markov = markov_invariant(3).unwrap();
        // Pattern (+,-,+) puts all three letters positive.
        let s: SignPattern = "+-+".parse().unwrap();
        assert_eq!(
            markov.piece(&s),
            &Poly::parse("x12^2 + x13^2 + x23^2 + x12*x13*x23", 3).unwrap()
        );
        let s: SignPattern = "-+-".parse().unwrap();
        assert_eq!(
            markov.piece(&s),
            &Poly::parse("x12^2 + x13^2 + x23^2 - x12*x13*x23", 3).unwrap()
        );
        assert!(markov_invariant(4).is_err());
    }

    #[test]
    fn markov_is_symbolically_invariant() {
        assert!(check_invariant_symbolic(&markov_invariant(3).unwrap()).is_none());
    }

    #[test]
    fn markov_value_on_the_sample_orbit() {
        let markov = markov_invariant(3).unwrap();
        let q = Quiver::from_ints(3, &[2, -2, 2]).unwrap();
        assert_eq!(markov.evaluate(&q).unwrap(), Rat::from_int(4));
        // Walk mu_3, mu_1, mu_2 and watch the value stay put.
        let mut walk = q;
        for k in [3usize, 1, 2] {
            walk = walk.mutate(k).unwrap();
            assert_eq!(markov.evaluate(&walk).unwrap(), Rat::from_int(4));
        }
    }

    #[test]
    fn perturbed_markov_yields_a_witness() {
        let markov = markov_invariant(3).unwrap();
        let mut pieces = markov.pieces().clone();
        let key: SignPattern = "+++".parse().unwrap();
        let wrong = pieces[&key].clone();
        let flipped = &wrong - &Poly::parse("2*x12*x13*x23", 3).unwrap();
        pieces.insert(key, flipped);
        let broken = CarriageWisePolynomial::new(3, pieces).unwrap();
        let witness = check_invariant_symbolic(&broken).expect("must fail");
        let point = witness.counterexample.expect("samplable region");
        assert_ne!(point.value_before, point.value_after);
    }

    #[test]
    fn single_coordinate_tuple_yields_a_witness() {
        let f = CarriageWisePolynomial::uniform(4, Poly::var(6, 0));
        let witness = check_invariant_symbolic(&f).expect("x12 is not invariant");
        assert!(!witness.difference.is_zero());
        let point = witness.counterexample.expect("samplable region");
        // The witness point genuinely changes the function value.
        let before = f.piece(&witness.source).eval(point.quiver.upper());
        let after = f.piece(&witness.target).eval(point.mutated.upper());
        assert_ne!(before, after);
    }

    #[test]
    fn witness_point_agrees_with_the_difference_polynomial() {
        let f = CarriageWisePolynomial::uniform(4, Poly::var(6, 0));
        let witness = check_invariant_symbolic(&f).unwrap();
        let point = witness.counterexample.as_ref().unwrap();
        let diff_value = witness.difference.eval(point.quiver.upper());
        assert_eq!(diff_value, &point.value_before - &point.value_after);
        assert!(!diff_value.is_zero());
    }

    #[test]
    fn evaluate_rejects_disagreeing_boundary() {
        // Piece 2 on the all-plus carriage, 1 elsewhere: any boundary point
        // compatible with all-plus and a neighbor is ambiguous.
        let mut pieces: BTreeMap<SignPattern, Poly> = SignPattern::enumerate(3)
            .into_iter()
            .map(|s| (s, Poly::one(3)))
            .collect();
        pieces.insert(
            SignPattern::all_plus(3),
            Poly::constant(3, Rat::from_int(2)),
        );
        let f = CarriageWisePolynomial::new(3, pieces).unwrap();
        let boundary = Quiver::from_ints(3, &[0, 1, 1]).unwrap();
        assert!(matches!(
            f.evaluate(&boundary),
            Err(Error::AmbiguousBoundary)
        ));
        // Fully inner points still evaluate.
        let inner = Quiver::from_ints(3, &[-1, 1, 1]).unwrap();
        assert_eq!(f.evaluate(&inner).unwrap(), Rat::one());
    }

    #[test]
    fn evaluate_checks_sizes() {
        let det = det_invariant(4).unwrap();
        assert!(det.evaluate(&Quiver::zero(3)).is_err());
    }

    #[test]
    fn invariant_file_round_trip() {
        let markov = markov_invariant(3).unwrap();
        let text = markov.to_json_string();
        let back = CarriageWisePolynomial::from_json_str(&text).unwrap();
        assert_eq!(back, markov);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn invariant_file_rejects_malformed() {
        assert!(CarriageWisePolynomial::from_json_str("{}").is_err());
        let missing = r#"{"n": 3, "degree": 0, "pieces": [{"pattern": "+++", "poly": "1"}]}"#;
        assert!(CarriageWisePolynomial::from_json_str(missing).is_err());
        let bad_poly = r#"{"n": 2, "degree": 0, "pieces": [{"pattern": "+", "poly": "x34"}, {"pattern": "-", "poly": "1"}]}"#;
        assert!(CarriageWisePolynomial::from_json_str(bad_poly).is_err());
    }

    #[test]
    fn determinant_composition_is_fixed_by_every_map() {
        // Spot check of what the sweep verifies: Det ∘ map = Det.
        let det = det_invariant(4).unwrap();
        let s = SignPattern::all_plus(4);
        let map = mu_poly(4, &s).unwrap();
        let composed = det.piece(&s).compose(&map);
        assert_eq!(&composed, det.common_piece().unwrap());
    }
}
