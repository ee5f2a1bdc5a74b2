//! Exact sparse linear algebra: fraction-free row reduction, reduced
//! echelon forms and canonical nullspace bases over the rationals, plus a
//! small dense mod-p kernel used by the sampling pre-pass.
//!
//! Rows are kept as primitive integer vectors (content divided out after
//! every combination), which keeps entries small through long eliminations.
//! All outputs are canonical: the reduced echelon form of a row space is
//! unique, so results do not depend on row processing order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::rat::Rat;

/// Sparse integer row: strictly increasing column indices, nonzero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Clears denominators and divides out the content, normalizing the leading
/// entry to be positive. Returns an empty row for a zero row.
pub fn row_from_rationals(entries: &[(usize, Rat)]) -> SparseRow {
    let mut lcm = BigInt::one();
    for (_, value) in entries {
        if !value.is_zero() {
            lcm = lcm.lcm(value.denom());
        }
    }
    let mut row: SparseRow = entries
        .iter()
        .filter(|(_, value)| !value.is_zero())
        .map(|(col, value)| (*col, value.numer() * (&lcm / value.denom())))
        .collect();
    row.sort_by_key(|&(col, _)| col);
    normalize(&mut row);
    row
}

fn normalize(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut content = BigInt::zero();
    for (_, v) in row.iter() {
        content = content.gcd(v);
        if content.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &content;
        }
    }
}

/// `a*row - b*pivot`, merged by column; the shared leading column cancels.
fn combine(row: &SparseRow, a: &BigInt, pivot: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = a * vi - b * vj;
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, a * vi));
                i += 1;
            }
            (Some(_), Some((cj, vj))) => {
                out.push((*cj, -(b * vj)));
                j += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, a * vi));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                out.push((*cj, -(b * vj)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    normalize(&mut out);
    out
}

/// Incremental fraction-free row echelon form.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces a row against the current pivots without inserting it.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            let Some(pivot) = self.pivots.get(&lead) else {
                break;
            };
            let g = row[0].1.gcd(&pivot[0].1);
            let a = &pivot[0].1 / &g;
            let b = &row[0].1 / &g;
            row = combine(&row, &a, pivot, &b);
        }
        row
    }

    /// Reduces and inserts; returns true when the row increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            Some(&(lead, _)) => {
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }

    /// Full reduced echelon form over the rationals, pivots normalized to 1.
    pub fn into_rref(self) -> Rref {
        let pivot_cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut rows: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
        for (&col, row) in self.pivots.iter().rev() {
            let lead = Rat::new(row[0].1.clone(), BigInt::one());
            let mut rational: BTreeMap<usize, Rat> = row
                .iter()
                .map(|(c, v)| (*c, Rat::new(v.clone(), BigInt::one()) / &lead))
                .collect();
            // Eliminate later pivot columns using already-reduced rows.
            for &later in pivot_cols.iter().filter(|&&c| c > col) {
                let Some(factor) = rational.get(&later).cloned() else {
                    continue;
                };
                if factor.is_zero() {
                    rational.remove(&later);
                    continue;
                }
                for (c, v) in &rows[&later] {
                    let delta = &factor * v;
                    let slot = rational.entry(*c).or_insert_with(Rat::zero);
                    *slot -= &delta;
                    if slot.is_zero() {
                        rational.remove(c);
                    }
                }
            }
            rows.insert(col, rational.into_iter().collect());
        }
        Rref {
            rows: rows.into_values().collect(),
        }
    }
}

/// Reduced row echelon form: rows sorted by pivot column, pivot entries 1,
/// pivot columns cleared elsewhere.
#[derive(Clone, Debug)]
pub struct Rref {
    rows: Vec<Vec<(usize, Rat)>>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Rat)>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Canonical nullspace basis: one vector per free column in ascending
    /// order, with 1 at the free column, 0 at every other free column.
    pub fn nullspace(&self, ncols: usize) -> Vec<Vec<Rat>> {
        let pivot_cols = self.pivot_columns();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; ncols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut vector = vec![Rat::zero(); ncols];
            vector[free] = Rat::one();
            for row in &self.rows {
                let pivot_col = row[0].0;
                if let Some((_, coeff)) = row.iter().find(|(c, _)| *c == free) {
                    vector[pivot_col] = -coeff;
                }
            }
            basis.push(vector);
        }
        basis
    }
}

/// Exact nullspace of a sparse rational system, as the canonical reduced
/// echelon basis of the solution subspace.
pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<Vec<Rat>> {
    let mut echelon = RowEchelon::new();
    let mut incoming: Vec<SparseRow> = rows.into_iter().collect();
    // Short rows first: cheap pivots that keep later reductions sparse.
    incoming.sort_by_key(|r| r.len());
    for row in incoming {
        echelon.insert(row);
    }
    let raw = echelon.into_rref().nullspace(ncols);
    canonical_basis(raw)
}

/// Reduced-echelon canonical form of the subspace spanned by the given
/// vectors. The result is independent of the presentation of the input.
pub fn canonical_basis(vectors: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let Some(ncols) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut echelon = RowEchelon::new();
    for v in &vectors {
        let entries: Vec<(usize, Rat)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.clone()))
            .collect();
        echelon.insert(row_from_rationals(&entries));
    }
    echelon
        .into_rref()
        .rows()
        .iter()
        .map(|row| {
            let mut dense = vec![Rat::zero(); ncols];
            for (c, v) in row {
                dense[*c] = v.clone();
            }
            dense
        })
        .collect()
}

/// True when `vector` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rat>], vector: &[Rat]) -> bool {
    let mut echelon = RowEchelon::new();
    for v in basis {
        let entries: Vec<(usize, Rat)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.clone()))
            .collect();
        echelon.insert(row_from_rationals(&entries));
    }
    let entries: Vec<(usize, Rat)> = vector
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect();
    echelon.reduce(row_from_rationals(&entries)).is_empty()
}

// ---------------------------------------------------------------------------
// Dense arithmetic modulo a fixed prime, for the sampling pre-pass.
// ---------------------------------------------------------------------------

pub mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use crate::rat::Rat;

    /// Mersenne prime 2^61 - 1.
    pub const P: u64 = (1 << 61) - 1;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn pow(mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> u64 {
        debug_assert!(a % P != 0);
        pow(a % P, P - 2)
    }

    pub fn from_bigint(v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(P)).to_u64().expect("reduced")
    }

    /// Image of a rational with denominator coprime to P.
    pub fn from_rat(r: &Rat) -> u64 {
        mul(from_bigint(r.numer()), inv(from_bigint(r.denom())))
    }

    /// Rational reconstruction with numerator and denominator bounded by
    /// sqrt(P/2); returns None when no such fraction exists.
    pub fn reconstruct(a: u64) -> Option<Rat> {
        if a == 0 {
            return Some(Rat::zero());
        }
        let bound: i128 = 1_073_741_824; // 2^30 < sqrt(P/2)
        let (mut r0, mut r1) = (P as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 >= bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.unsigned_abs() as i128 > bound {
            return None;
        }
        let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
        let num = BigInt::from(num);
        let den = BigInt::from(den);
        if num.gcd(&den) != BigInt::from(1) {
            return None;
        }
        let candidate = Rat::new(num, den);
        // Confirm the congruence candidate ≡ a (mod P).
        if from_rat(&candidate) == a {
            Some(candidate)
        } else {
            None
        }
    }

    /// Incremental dense Gauss-Jordan elimination mod P.
    pub struct DenseModRref {
        ncols: usize,
        rows: Vec<Vec<u64>>,
        pivot_col_of_row: Vec<usize>,
        pivot_row_of_col: Vec<Option<usize>>,
    }

    impl DenseModRref {
        pub fn new(ncols: usize) -> Self {
            DenseModRref {
                ncols,
                rows: Vec::new(),
                pivot_col_of_row: Vec::new(),
                pivot_row_of_col: vec![None; ncols],
            }
        }

        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        /// Returns true when the row increased the rank.
        pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
            debug_assert_eq!(row.len(), self.ncols);
            for col in 0..self.ncols {
                if row[col] == 0 {
                    continue;
                }
                match self.pivot_row_of_col[col] {
                    Some(r) => {
                        let factor = row[col];
                        let pivot = self.rows[r].clone();
                        for c in col..self.ncols {
                            if pivot[c] != 0 {
                                row[c] = sub(row[c], mul(factor, pivot[c]));
                            }
                        }
                    }
                    None => {
                        let scale = inv(row[col]);
                        for v in row.iter_mut() {
                            *v = mul(*v, scale);
                        }
                        // Clear this column from existing rows.
                        for r in 0..self.rows.len() {
                            let factor = self.rows[r][col];
                            if factor != 0 {
                                for c in 0..self.ncols {
                                    if row[c] != 0 {
                                        self.rows[r][c] = sub(self.rows[r][c], mul(factor, row[c]));
                                    }
                                }
                            }
                        }
                        self.pivot_row_of_col[col] = Some(self.rows.len());
                        self.pivot_col_of_row.push(col);
                        self.rows.push(row);
                        return true;
                    }
                }
            }
            false
        }

        /// Free-column nullspace basis mod P.
        pub fn nullspace(&self) -> Vec<Vec<u64>> {
            let mut basis = Vec::new();
            for free in (0..self.ncols).filter(|&c| self.pivot_row_of_col[c].is_none()) {
                let mut v = vec![0u64; self.ncols];
                v[free] = 1;
                for (ridx, &pcol) in self.pivot_col_of_row.iter().enumerate() {
                    let coeff = self.rows[ridx][free];
                    if coeff != 0 {
                        v[pcol] = sub(0, coeff);
                    }
                }
                basis.push(v);
            }
            basis
        }
    }
}
