//! Quivers, sign patterns, the cluster mutation, and the Pfaffian and
//! determinant of the entry matrix.
//!
//! A quiver of size n is an n×n skew-symmetric matrix with rational
//! entries, stored as its strict upper triangle in position order.
//! Skew-symmetry is structural: the lower triangle and the diagonal are
//! reconstructed on access and can never disagree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::positions::{self, entry_count, index_of, pair_of};
use crate::rat::Rat;

/// Sign of a nonzero entry. `Plus` orders before `Minus`, matching the
/// text form where `'+' < '-'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(value: &Rat) -> Option<Sign> {
        match value.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Strict sign vector over the upper-triangle positions; indexes a carriage.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignPattern { signs }
    }

    /// Pattern of all-plus signs for an `n`-vertex quiver.
    pub fn all_plus(n: usize) -> Self {
        SignPattern {
            signs: vec![Sign::Plus; entry_count(n)],
        }
    }

    /// Every pattern for an `n`-vertex quiver, in lexicographic order.
    pub fn enumerate(n: usize) -> Vec<SignPattern> {
        let m = entry_count(n);
        (0..1u64 << m)
            .map(|bits| SignPattern {
                signs: (0..m)
                    .map(|pos| {
                        if bits >> (m - 1 - pos) & 1 == 0 {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Vertex count recovered from the triangular length.
    pub fn n(&self) -> usize {
        positions::size_from_entry_count(self.signs.len())
            .expect("sign pattern length is not triangular")
    }

    pub fn sign(&self, pos: usize) -> Sign {
        self.signs[pos]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn with_flipped(&self, pos: usize) -> SignPattern {
        let mut signs = self.signs.clone();
        signs[pos] = signs[pos].flip();
        SignPattern { signs }
    }

    /// Sign of the full-matrix entry (i,j), i != j, via skew-symmetry.
    pub fn entry_sign(&self, i: usize, j: usize) -> Sign {
        let n = self.n();
        assert!(i != j && 1 <= i && i <= n && 1 <= j && j <= n);
        if i < j {
            self.signs[index_of(n, i, j)]
        } else {
            self.signs[index_of(n, j, i)].flip()
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::InvalidPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if positions::size_from_entry_count(signs.len()).is_none() {
            return Err(Error::InvalidPattern(s.to_string()));
        }
        Ok(SignPattern { signs })
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// n×n skew-symmetric matrix stored as its strict upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    upper: Vec<Rat>,
}

impl Quiver {
    pub fn new(n: usize, upper: Vec<Rat>) -> Result<Self> {
        if n < 2 || upper.len() != entry_count(n) {
            return Err(Error::InvalidFile(format!(
                "quiver of size {n} needs {} upper entries, got {}",
                entry_count(n),
                upper.len()
            )));
        }
        Ok(Quiver { n, upper })
    }

    pub fn from_ints(n: usize, upper: &[i64]) -> Result<Self> {
        Self::new(n, upper.iter().map(|&v| Rat::from_int(v)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Quiver {
            n,
            upper: vec![Rat::zero(); entry_count(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[Rat] {
        &self.upper
    }

    /// Full-matrix entry x_{i,j}; the diagonal is zero and the lower
    /// triangle is the negated upper triangle. Panics on out-of-range
    /// indices.
    pub fn entry(&self, i: usize, j: usize) -> Rat {
        assert!(
            1 <= i && i <= self.n && 1 <= j && j <= self.n,
            "entry ({i},{j}) out of range for n={}",
            self.n
        );
        if i == j {
            Rat::zero()
        } else if i < j {
            self.upper[index_of(self.n, i, j)].clone()
        } else {
            -&self.upper[index_of(self.n, j, i)]
        }
    }

    pub fn is_inner(&self) -> bool {
        self.upper.iter().all(|v| !v.is_zero())
    }

    /// Cluster mutation at vertex k.
    ///
    /// Entries incident to k are negated. An off-k entry x_{i,j} gains
    /// x_{i,k}·x_{k,j} when both factors are positive, loses it when both
    /// are negative, and is unchanged otherwise (including when either
    /// factor is zero).
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        if k < 1 || k > self.n {
            return Err(Error::VertexOutOfRange { k, n: self.n });
        }
        let mut upper = Vec::with_capacity(self.upper.len());
        for (pos, old) in self.upper.iter().enumerate() {
            let (i, j) = pair_of(self.n, pos);
            if i == k || j == k {
                upper.push(-old);
            } else {
                let a = self.entry(i, k);
                let b = self.entry(k, j);
                if a.is_positive() && b.is_positive() {
                    upper.push(old + &(&a * &b));
                } else if a.is_negative() && b.is_negative() {
                    upper.push(old - &(&a * &b));
                } else {
                    upper.push(old.clone());
                }
            }
        }
        Ok(Quiver { n: self.n, upper })
    }

    /// Applies a sequence of mutations left to right.
    pub fn mutate_seq(&self, seq: &[usize]) -> Result<Quiver> {
        let mut q = self.clone();
        for &k in seq {
            q = q.mutate(k)?;
        }
        Ok(q)
    }

    /// Componentwise signs; requires an inner quiver.
    pub fn sign_pattern(&self) -> Result<SignPattern> {
        let signs = self
            .upper
            .iter()
            .enumerate()
            .map(|(pos, v)| Sign::of(v).ok_or(Error::NotInner { pos }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignPattern::new(signs))
    }

    /// All strict patterns agreeing with the quiver on its nonzero
    /// entries: 2^z patterns where z counts the zero entries.
    pub fn compatible_patterns(&self) -> Vec<SignPattern> {
        let mut patterns = vec![Vec::with_capacity(self.upper.len())];
        for v in &self.upper {
            match Sign::of(v) {
                Some(s) => {
                    for p in &mut patterns {
                        p.push(s);
                    }
                }
                None => {
                    patterns = patterns
                        .into_iter()
                        .flat_map(|p| {
                            let mut plus = p.clone();
                            plus.push(Sign::Plus);
                            let mut minus = p;
                            minus.push(Sign::Minus);
                            [plus, minus]
                        })
                        .collect();
                }
            }
        }
        let mut out: Vec<SignPattern> = patterns.into_iter().map(SignPattern::new).collect();
        out.sort();
        out
    }

    /// Exact Pfaffian via recursive expansion along the first row.
    pub fn pfaffian(&self) -> Result<Rat> {
        if self.n % 2 != 0 {
            return Err(Error::OddSize { n: self.n });
        }
        let rows: Vec<usize> = (1..=self.n).collect();
        Ok(pfaffian_rec(self, &rows))
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn determinant(&self) -> Rat {
        let n = self.n;
        let mut mat: Vec<Vec<Rat>> = (1..=n)
            .map(|i| (1..=n).map(|j| self.entry(i, j)).collect())
            .collect();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(pivot_row) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
                return Rat::zero();
            };
            if pivot_row != col {
                mat.swap(pivot_row, col);
                det = -det;
            }
            let pivot = mat[col][col].clone();
            det *= &pivot;
            let inv = pivot.recip();
            for r in col + 1..n {
                if mat[r][col].is_zero() {
                    continue;
                }
                let factor = &mat[r][col] * &inv;
                for c in col..n {
                    let delta = &factor * &mat[col][c];
                    mat[r][c] = &mat[r][c] - &delta;
                }
            }
        }
        det
    }

    /// The letter dictionary tuple (x, y, z, u, v, w) for n = 4, where
    /// x = x12, y = x13, z = x14, u = x23, v = -x24, w = x34.
    pub fn letters(&self) -> Option<Vec<Rat>> {
        if self.n != 4 {
            return None;
        }
        let mut l = self.upper.clone();
        l[4] = -&l[4];
        Some(l)
    }

    pub fn to_json_string(&self) -> String {
        let file = QuiverFile {
            n: self.n,
            upper: self.upper.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("quiver serialization");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Quiver> {
        let file: QuiverFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
        Quiver::new(file.n, file.upper)
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, v) in self.upper.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    n: usize,
    upper: Vec<Rat>,
}

fn pfaffian_rec(q: &Quiver, rows: &[usize]) -> Rat {
    if rows.is_empty() {
        return Rat::one();
    }
    let first = rows[0];
    let mut acc = Rat::zero();
    let mut sign = Rat::one();
    for idx in 1..rows.len() {
        let j = rows[idx];
        let factor = q.entry(first, j);
        if !factor.is_zero() {
            let rest: Vec<usize> = rows[1..].iter().copied().filter(|&r| r != j).collect();
            acc += &(&(&sign * &factor) * &pfaffian_rec(q, &rest));
        }
        sign = -sign;
    }
    acc
}

/// The Pfaffian of the generic n×n skew-symmetric matrix, as a polynomial
/// in the entry variables. Same expansion as the numeric route.
pub fn pfaffian_poly(n: usize) -> Result<Poly> {
    if n % 2 != 0 {
        return Err(Error::OddSize { n });
    }
    let rows: Vec<usize> = (1..=n).collect();
    Ok(pfaffian_poly_rec(n, &rows))
}

fn pfaffian_poly_rec(n: usize, rows: &[usize]) -> Poly {
    let m = entry_count(n);
    if rows.is_empty() {
        return Poly::one(m);
    }
    let first = rows[0];
    let mut acc = Poly::zero(m);
    let mut negate = false;
    for idx in 1..rows.len() {
        let j = rows[idx];
        let var = Poly::var(m, index_of(n, first, j));
        let rest: Vec<usize> = rows[1..].iter().copied().filter(|&r| r != j).collect();
        let term = &var * &pfaffian_poly_rec(n, &rest);
        acc = if negate { &acc - &term } else { &acc + &term };
        negate = !negate;
    }
    acc
}

/// The determinant of the generic n×n skew-symmetric matrix as a
/// polynomial, by cofactor expansion. Independent of the Pfaffian route.
pub fn determinant_poly(n: usize) -> Poly {
    let m = entry_count(n);
    let entries: Vec<Vec<Poly>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if i == j {
                        Poly::zero(m)
                    } else if i < j {
                        Poly::var(m, index_of(n, i, j))
                    } else {
                        -&Poly::var(m, index_of(n, j, i))
                    }
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    det_cofactor(&entries, 0, &cols)
}

fn det_cofactor(entries: &[Vec<Poly>], row: usize, cols: &[usize]) -> Poly {
    let m = entries[0][0].num_vars();
    if cols.is_empty() {
        return Poly::one(m);
    }
    let mut acc = Poly::zero(m);
    let mut negate = false;
    for (idx, &c) in cols.iter().enumerate() {
        let e = &entries[row][c];
        if !e.is_zero() {
            let rest: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, &cc)| cc)
                .collect();
            let term = e * &det_cofactor(entries, row + 1, &rest);
            acc = if negate { &acc - &term } else { &acc + &term };
        }
        negate = !negate;
    }
    acc
}
