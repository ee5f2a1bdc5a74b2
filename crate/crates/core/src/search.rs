//! Degree-bounded search for mutation-invariant carriage-wise polynomials.
//!
//! Invariance of a carriage-wise polynomial is a family of polynomial
//! identities, one per (carriage, vertex, feasible target): matching
//! coefficients of those identities gives an exact linear system in the
//! unknown piece coefficients. The nullspace of that system, computed by
//! fraction-free elimination, is the space of invariants up to the degree
//! bound. Every returned basis element is re-verified by the independent
//! symbolic checker before it is released; a failure aborts the search.
//!
//! Two assembly modes are exposed. `Full` keeps one polynomial unknown per
//! carriage. `Collapsed` keeps one unknown per flip-graph component, which
//! is licensed by the single-entry flip relation and leaves a single
//! unknown polynomial for n = 4. An optional sampling pre-pass discovers
//! the candidate space from evaluation constraints at random rational
//! points (solved modulo a large prime and lifted back to exact
//! rationals); its output is subject to the same symbolic verification and
//! falls back to the exact assembly when anything fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flip_graph::FlipGraph;
use crate::invariant::{check_invariant_symbolic, CarriageWisePolynomial};
use crate::linalg::{self, modp};
use crate::piecewise::{feasible_targets, mu_poly, MutationMapKey};
use crate::poly::{Monomial, Poly, PolyVec};
use crate::positions::entry_count;
use crate::quiver::{determinant_poly, Quiver, Sign, SignPattern};
use crate::rat::Rat;
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Full,
    Collapsed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Full => write!(f, "full"),
            Mode::Collapsed => write!(f, "collapsed"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "collapsed" => Ok(Mode::Collapsed),
            other => Err(Error::InvalidFile(format!("unknown mode {other:?}"))),
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Column layout shared by the exact assembly and the sampling pre-pass:
/// piece representatives (all patterns in full mode, flip-component least
/// members in collapsed mode) crossed with all monomials up to the degree
/// bound, in (pattern, graded-lex) order.
struct SearchSpace {
    n: usize,
    degree: u32,
    mode: Mode,
    reps: Vec<SignPattern>,
    piece_of: BTreeMap<SignPattern, usize>,
    monomials: Vec<Monomial>,
    /// (index of the monomial divided by one variable, that variable).
    mono_parent: Vec<Option<(usize, usize)>>,
}

impl SearchSpace {
    fn build(n: usize, degree: u32, mode: Mode) -> Result<Self> {
        let patterns = SignPattern::enumerate(n);
        let (reps, piece_of) = match mode {
            Mode::Full => {
                let piece_of = patterns
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect();
                (patterns.clone(), piece_of)
            }
            Mode::Collapsed => {
                let graph = FlipGraph::build(n)?;
                let reps: Vec<SignPattern> =
                    graph.components().iter().map(|c| c[0].clone()).collect();
                let piece_of = patterns
                    .iter()
                    .map(|s| (s.clone(), graph.component_of(s)))
                    .collect();
                (reps, piece_of)
            }
        };
        let monomials = monomials_up_to(entry_count(n), degree);
        let mono_index: BTreeMap<Monomial, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mono_parent = monomials
            .iter()
            .map(|mono| {
                let var = mono.exponents().iter().position(|&e| e > 0)?;
                let mut exps = mono.exponents().to_vec();
                exps[var] -= 1;
                Some((mono_index[&Monomial::from_exponents(exps)], var))
            })
            .collect();
        Ok(SearchSpace {
            n,
            degree,
            mode,
            reps,
            piece_of,
            monomials,
            mono_parent,
        })
    }

    fn ncols(&self) -> usize {
        self.reps.len() * self.monomials.len()
    }

    fn col(&self, piece: usize, mono: usize) -> usize {
        piece * self.monomials.len() + mono
    }

    /// Monomial values at a point, in monomial order, via the division
    /// table. `value` turns a coordinate into the scalar type.
    fn monomial_values<T: Clone>(&self, coords: &[T], one: T, mul: impl Fn(&T, &T) -> T) -> Vec<T> {
        let mut values = Vec::with_capacity(self.monomials.len());
        for (idx, parent) in self.mono_parent.iter().enumerate() {
            let v = match parent {
                None => one.clone(),
                Some((p, var)) => mul(&values[*p], &coords[*var]),
            };
            debug_assert_eq!(values.len(), idx);
            values.push(v);
        }
        values
    }

    fn reconstitute(&self, vector: &[Rat]) -> CarriageWisePolynomial {
        let m = entry_count(self.n);
        let rep_polys: Vec<Poly> = (0..self.reps.len())
            .map(|piece| {
                Poly::from_terms(
                    m,
                    self.monomials.iter().enumerate().filter_map(|(mi, mono)| {
                        let c = &vector[self.col(piece, mi)];
                        (!c.is_zero()).then(|| (mono.clone(), c.clone()))
                    }),
                )
            })
            .collect();
        let pieces = SignPattern::enumerate(self.n)
            .into_iter()
            .map(|s| {
                let poly = rep_polys[self.piece_of[&s]].clone();
                (s, poly)
            })
            .collect();
        CarriageWisePolynomial::new(self.n, pieces).expect("complete piece map")
    }
}

/// All monomials of total degree <= `degree` in `m` variables, in graded
/// lexicographic order.
pub fn monomials_up_to(m: usize, degree: u32) -> Vec<Monomial> {
    fn rec(m: usize, pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == m {
            out.push(Monomial::from_exponents(current.clone()));
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            rec(m, pos + 1, remaining - e, current, out);
        }
        current[pos] = 0;
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    rec(m, 0, degree, &mut current, &mut out);
    out.sort();
    out
}

/// Where a constraint row came from: matching the coefficient of
/// `monomial` in the identity for mutating carriage `source` at `vertex`
/// into carriage `target`.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub source: SignPattern,
    pub vertex: usize,
    pub target: SignPattern,
    pub monomial: Monomial,
}

#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub entries: Vec<(usize, Rat)>,
    pub provenance: Provenance,
}

pub struct ConstraintSystem {
    pub n: usize,
    pub degree: u32,
    pub mode: Mode,
    columns: Vec<(SignPattern, Monomial)>,
    pub rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[(SignPattern, Monomial)] {
        &self.columns
    }
}

/// Builds the exact coefficient-matching system for all invariance
/// identities at the given size, degree bound and mode. Rows are
/// deduplicated; each surviving row keeps the provenance of its first
/// occurrence.
pub fn assemble_system(n: usize, degree: u32, mode: Mode) -> Result<ConstraintSystem> {
    let space = SearchSpace::build(n, degree, mode)?;
    let rows = assemble_rows(&space, None)?;
    let columns = space
        .reps
        .iter()
        .flat_map(|rep| {
            space
                .monomials
                .iter()
                .map(move |mono| (rep.clone(), mono.clone()))
        })
        .collect();
    Ok(ConstraintSystem {
        n,
        degree,
        mode,
        columns,
        rows,
    })
}

/// Row generation. With `only_sign_maps` set, restricts to mutation maps
/// that are pure sign changes (used by the sampling pre-pass, where those
/// rows are as cheap as evaluations but carry exact information).
fn assemble_rows(space: &SearchSpace, only_sign_maps: Option<bool>) -> Result<Vec<ConstraintRow>> {
    let n = space.n;
    let sign_maps_only = only_sign_maps.unwrap_or(false);
    // Group (source, vertex, target) triples by the map that realizes them
    // and by the piece pair they constrain; one row block per group.
    type PiecePair = (usize, usize);
    let mut groups: BTreeMap<
        MutationMapKey,
        BTreeMap<PiecePair, (SignPattern, usize, SignPattern)>,
    > = BTreeMap::new();
    for s in SignPattern::enumerate(n) {
        for k in 1..=n {
            let key = MutationMapKey::new(k, &s)?;
            for t in feasible_targets(&s, k)? {
                let pair = (space.piece_of[&s], space.piece_of[&t]);
                groups
                    .entry(key.clone())
                    .or_default()
                    .entry(pair)
                    .or_insert_with(|| (s.clone(), k, t));
            }
        }
    }
    let mut seen: BTreeSet<Vec<(usize, Rat)>> = BTreeSet::new();
    let mut rows: Vec<ConstraintRow> = Vec::new();
    for pairs in groups.values() {
        let (sample_s, k, _) = pairs.values().next().expect("nonempty group").clone();
        let map = mu_poly(k, &sample_s)?;
        if sign_maps_only && !is_sign_map(&map) {
            continue;
        }
        // Compositions of every unknown monomial with the map, built
        // incrementally along the division table.
        let mut composed: Vec<Poly> = Vec::with_capacity(space.monomials.len());
        for parent in &space.mono_parent {
            let p = match parent {
                None => Poly::one(entry_count(n)),
                Some((pidx, var)) => &composed[*pidx] * map.component(*var),
            };
            composed.push(p);
        }
        for (&(piece_s, piece_t), (s, k, t)) in pairs {
            let mut by_matched: BTreeMap<Monomial, BTreeMap<usize, Rat>> = BTreeMap::new();
            for (mi, mono) in space.monomials.iter().enumerate() {
                {
                    let row = by_matched.entry(mono.clone()).or_default();
                    let slot = row.entry(space.col(piece_s, mi)).or_insert_with(Rat::zero);
                    *slot += &Rat::one();
                }
                for (matched, coef) in composed[mi].terms() {
                    let row = by_matched.entry(matched.clone()).or_default();
                    let slot = row.entry(space.col(piece_t, mi)).or_insert_with(Rat::zero);
                    *slot -= coef;
                }
            }
            for (matched, entries) in by_matched {
                let entries: Vec<(usize, Rat)> =
                    entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if entries.is_empty() || !seen.insert(entries.clone()) {
                    continue;
                }
                rows.push(ConstraintRow {
                    entries,
                    provenance: Provenance {
                        source: s.clone(),
                        vertex: *k,
                        target: t.clone(),
                        monomial: matched,
                    },
                });
            }
        }
    }
    Ok(rows)
}

fn is_sign_map(map: &PolyVec) -> bool {
    (0..map.len()).all(|c| {
        let p = map.component(c);
        p.num_terms() == 1
            && p.terms().all(|(mono, coef)| {
                mono == &Monomial::var(map.num_vars(), c) && coef.abs().is_one()
            })
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub mode: Mode,
    pub sample_prepass: bool,
    /// Bypasses the resource guard.
    pub force: bool,
}

impl SearchOptions {
    pub fn new(mode: Mode) -> Self {
        SearchOptions {
            mode,
            sample_prepass: false,
            force: false,
        }
    }

    pub fn with_prepass(mut self) -> Self {
        self.sample_prepass = true;
        self
    }
}

/// Default feasibility envelope for the exact search.
pub fn resource_guard(n: usize, degree: u32, mode: Mode) -> bool {
    match mode {
        Mode::Full => match n {
            2 => degree <= 16,
            3 => degree <= 4,
            4 => degree <= 2,
            _ => false,
        },
        Mode::Collapsed => match n {
            2 => degree <= 16,
            3 => degree <= 6,
            4 => degree <= 8,
            _ => false,
        },
    }
}

/// A verified basis of the invariant space up to the degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBasis {
    pub n: usize,
    pub degree: u32,
    pub mode: Mode,
    elements: Vec<CarriageWisePolynomial>,
}

impl InvariantBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CarriageWisePolynomial] {
        &self.elements
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct BasisFile {
            n: usize,
            degree: u32,
            mode: Mode,
            dimension: usize,
            verified: bool,
            elements: Vec<serde_json::Value>,
        }
        let file = BasisFile {
            n: self.n,
            degree: self.degree,
            mode: self.mode,
            dimension: self.elements.len(),
            verified: true,
            elements: self
                .elements
                .iter()
                .map(|e| serde_json::from_str(&e.to_json_string()).expect("element serialization"))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("basis serialization");
        s.push('\n');
        s
    }
}

/// Assembles the invariance system, solves for its exact nullspace, and
/// returns the canonical basis once every element has passed the symbolic
/// invariance checker. An element failing that check aborts the search;
/// nothing unverified is ever returned.
pub fn search_invariants(n: usize, degree: u32, options: SearchOptions) -> Result<InvariantBasis> {
    if !options.force && !resource_guard(n, degree, options.mode) {
        return Err(Error::ResourceGuard {
            n,
            degree: degree as usize,
            mode: match options.mode {
                Mode::Full => "full",
                Mode::Collapsed => "collapsed",
            },
        });
    }
    let space = SearchSpace::build(n, degree, options.mode)?;
    let vectors = if options.sample_prepass {
        match sample_prepass(&space)? {
            Some(vectors) => vectors,
            None => exact_nullspace(&space)?,
        }
    } else {
        exact_nullspace(&space)?
    };
    let mut elements = Vec::with_capacity(vectors.len());
    for vector in &vectors {
        let element = space.reconstitute(vector);
        if let Some(witness) = check_invariant_symbolic(&element) {
            return Err(Error::InternalVerification(witness.to_string()));
        }
        elements.push(element);
    }
    Ok(InvariantBasis {
        n,
        degree,
        mode: options.mode,
        elements,
    })
}

fn exact_nullspace(space: &SearchSpace) -> Result<Vec<Vec<Rat>>> {
    let rows = assemble_rows(space, None)?;
    Ok(linalg::nullspace(
        space.ncols(),
        rows.iter().map(|r| linalg::row_from_rationals(&r.entries)),
    ))
}

/// Sampling pre-pass: exact rows for the sign-change maps plus evaluation
/// constraints at random rational points, solved modulo a prime and lifted
/// back to rationals. Returns None when reconstruction or symbolic
/// verification does not settle within the round budget; the caller then
/// falls back to the exact route. Any returned basis spans exactly the
/// invariant space (verification certifies it), so the canonical output
/// coincides with the exact route's.
fn sample_prepass(space: &SearchSpace) -> Result<Option<Vec<Vec<Rat>>>> {
    let n = space.n;
    let ncols = space.ncols();
    let sign_rows = assemble_rows(space, Some(true))?;

    // Columns forced to zero by single-entry rows can be dropped.
    let mut dead = vec![false; ncols];
    for row in &sign_rows {
        if row.entries.len() == 1 {
            dead[row.entries[0].0] = true;
        }
    }
    let live: Vec<usize> = (0..ncols).filter(|&c| !dead[c]).collect();
    let live_index: BTreeMap<usize, usize> =
        live.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut dense = modp::DenseModRref::new(live.len());
    for row in &sign_rows {
        if row.entries.len() == 1 {
            continue;
        }
        let mut r = vec![0u64; live.len()];
        for (c, v) in &row.entries {
            if let Some(&lc) = live_index.get(c) {
                r[lc] = modp::from_rat(v);
            }
        }
        dense.insert(r);
    }

    let seed = 0x5a5a_0000
        ^ ((n as u64) << 24)
        ^ ((space.degree as u64) << 8)
        ^ match space.mode {
            Mode::Full => 0,
            Mode::Collapsed => 1,
        };
    let mut rng = SplitMix64::new(seed);
    let patterns = SignPattern::enumerate(n);
    for _round in 0..8 {
        for s in &patterns {
            for k in 1..=n {
                let Some(row) = evaluation_row(space, s, k, &live, &live_index, &mut rng) else {
                    continue;
                };
                dense.insert(row);
            }
        }
        if let Some(vectors) = lift_candidates(space, &dense, &live) {
            let canonical = linalg::canonical_basis(vectors);
            let verified = canonical
                .iter()
                .all(|v| check_invariant_symbolic(&space.reconstitute(v)).is_none());
            if verified {
                return Ok(Some(canonical));
            }
        }
    }
    Ok(None)
}

/// One evaluation constraint: a random inner quiver in carriage `s`, its
/// mutation at `k`, and the identity "value before = value after" expanded
/// over the unknown coefficients, reduced mod P.
fn evaluation_row(
    space: &SearchSpace,
    s: &SignPattern,
    k: usize,
    live: &[usize],
    live_index: &BTreeMap<usize, usize>,
    rng: &mut SplitMix64,
) -> Option<Vec<u64>> {
    let upper: Vec<Rat> = s
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
    let q = Quiver::new(space.n, upper).expect("well-formed quiver");
    let image = q.mutate(k).expect("vertex in range");
    if !image.is_inner() {
        return None;
    }
    let t = image.sign_pattern().expect("inner");
    let piece_s = space.piece_of[s];
    let piece_t = space.piece_of[&t];
    let coords_before: Vec<u64> = q.upper().iter().map(modp::from_rat).collect();
    let coords_after: Vec<u64> = image.upper().iter().map(modp::from_rat).collect();
    let values_before = space.monomial_values(&coords_before, 1u64, |a, b| modp::mul(*a, *b));
    let values_after = space.monomial_values(&coords_after, 1u64, |a, b| modp::mul(*a, *b));
    let mut row = vec![0u64; live.len()];
    for mi in 0..space.monomials.len() {
        if let Some(&lc) = live_index.get(&space.col(piece_s, mi)) {
            row[lc] = modp::add(row[lc], values_before[mi]);
        }
        if let Some(&lc) = live_index.get(&space.col(piece_t, mi)) {
            row[lc] = modp::sub(row[lc], values_after[mi]);
        }
    }
    Some(row)
}

fn lift_candidates(
    space: &SearchSpace,
    dense: &modp::DenseModRref,
    live: &[usize],
) -> Option<Vec<Vec<Rat>>> {
    let mut vectors = Vec::new();
    for candidate in dense.nullspace() {
        let mut full = vec![Rat::zero(); space.ncols()];
        for (lc, &value) in candidate.iter().enumerate() {
            if value != 0 {
                full[live[lc]] = modp::reconstruct(value)?;
            }
        }
        vectors.push(full);
    }
    Some(vectors)
}

/// Coefficient vector of a carriage-wise polynomial over the full
/// (pattern, monomial) column layout at the given degree bound; None when a
/// piece exceeds the bound. Used for span and monotonicity comparisons.
pub fn coefficient_vector(f: &CarriageWisePolynomial, degree: u32) -> Option<Vec<Rat>> {
    if f.degree_bound() > degree {
        return None;
    }
    let monomials = monomials_up_to(entry_count(f.n()), degree);
    let mut vector = Vec::with_capacity(f.pieces().len() * monomials.len());
    for piece in f.pieces().values() {
        for mono in &monomials {
            vector.push(piece.coeff(mono));
        }
    }
    Some(vector)
}

/// A univariate polynomial in the determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetExpansion {
    /// `coefficients[j]` multiplies Det^j.
    pub coefficients: Vec<Rat>,
}

impl fmt::Display for DetExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut printed = false;
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if printed {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            printed = true;
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if j == 1 {
                        write!(f, "Det")?;
                    } else {
                        write!(f, "Det^{j}")?;
                    }
                }
            }
        }
        if !printed {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Expresses each element as a polynomial in the determinant with degree
/// at most `degree / 4`, by an exact linear solve on coefficients. An
/// element outside the span produces a certificate error naming it.
pub fn verify_spanned_by_det(
    elements: &[CarriageWisePolynomial],
    degree: u32,
) -> Result<Vec<DetExpansion>> {
    let det = determinant_poly(4);
    let max_power = (degree / 4) as usize;
    let mut det_powers = vec![Poly::one(6)];
    for _ in 0..max_power {
        det_powers.push(det_powers.last().unwrap() * &det);
    }
    let mut out = Vec::with_capacity(elements.len());
    for (index, element) in elements.iter().enumerate() {
        if element.n() != 4 {
            return Err(Error::UnsupportedSize {
                expected: 4,
                got: element.n(),
            });
        }
        let Some(piece) = element.common_piece() else {
            return Err(Error::NotSpannedByDet {
                element: index,
                detail: "pieces differ between carriages".to_string(),
            });
        };
        // Augmented system [powers | piece] over the union of supports.
        let mut support: BTreeSet<Monomial> = piece.terms().map(|(m, _)| m.clone()).collect();
        for p in &det_powers {
            support.extend(p.terms().map(|(m, _)| m.clone()));
        }
        let rhs_col = det_powers.len();
        let mut echelon = linalg::RowEchelon::new();
        for mono in &support {
            let mut entries: Vec<(usize, Rat)> = det_powers
                .iter()
                .enumerate()
                .filter_map(|(j, p)| {
                    let c = p.coeff(mono);
                    (!c.is_zero()).then_some((j, c))
                })
                .collect();
            let rhs = piece.coeff(mono);
            if !rhs.is_zero() {
                entries.push((rhs_col, rhs));
            }
            echelon.insert(linalg::row_from_rationals(&entries));
        }
        let rref = echelon.into_rref();
        let mut coefficients = vec![Rat::zero(); det_powers.len()];
        let mut consistent = true;
        for row in rref.rows() {
            let pivot = row[0].0;
            if pivot == rhs_col {
                consistent = false;
                break;
            }
            coefficients[pivot] = row
                .iter()
                .find(|(c, _)| *c == rhs_col)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rat::zero);
        }
        if !consistent {
            return Err(Error::NotSpannedByDet {
                element: index,
                detail: format!("no polynomial in Det of degree <= {max_power} matches"),
            });
        }
        out.push(DetExpansion { coefficients });
    }
    Ok(out)
}

/// Evaluation-level counterpart of the determinant classification: two
/// inner quivers with equal Pfaffian must get equal values from any
/// invariant. Pairs are built by solving for the last coordinate.
pub fn dot_product_dependence_check(
    f: &CarriageWisePolynomial,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if f.n() != 4 {
        return Err(Error::UnsupportedSize {
            expected: 4,
            got: f.n(),
        });
    }
    let mut rng = SplitMix64::new(seed);
    let random_inner = |rng: &mut SplitMix64| -> Quiver {
        Quiver::new(4, (0..6).map(|_| rng.signed_band()).collect()).expect("well-formed")
    };
    for _ in 0..trials {
        let first = random_inner(&mut rng);
        let target = first.pfaffian().expect("even size");
        let second = loop {
            let mut upper: Vec<Rat> = (0..5).map(|_| rng.signed_band()).collect();
            // Pf = x12*x34 - x13*x24 + x14*x23; solve for x34.
            let x34 =
                (&(&target + &(&upper[1] * &upper[4])) - &(&upper[2] * &upper[3])) / &upper[0];
            if x34.is_zero() {
                continue;
            }
            upper.push(x34);
            break Quiver::new(4, upper).expect("well-formed");
        };
        debug_assert_eq!(second.pfaffian().unwrap(), target);
        if f.evaluate(&first)? != f.evaluate(&second)? {
            return Ok(false);
        }
    }
    Ok(true)
}
