//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are the upper-triangle entry positions of a quiver, in the
//! fixed order of [`crate::positions`]. Terms live in a `BTreeMap` keyed by
//! graded-lex ordered monomials, so iteration order, printing and the
//! column order of assembled linear systems are all deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::positions;
use crate::rat::Rat;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn constant(num_vars: usize) -> Self {
        Monomial {
            exponents: vec![0; num_vars],
        }
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index out of range");
        let mut exponents = vec![0; num_vars];
        exponents[index] = 1;
        Monomial { exponents }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Product of monomials: componentwise exponent sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Graded lexicographic: total degree first, then the exponent vector.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: Rat) -> Self {
        let mut p = Poly::zero(num_vars);
        if !value.is_zero() {
            p.terms.insert(Monomial::constant(num_vars), value);
        }
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Poly::constant(num_vars, Rat::one())
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut p = Poly::zero(num_vars);
        p.terms.insert(Monomial::var(num_vars, index), Rat::one());
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut p = Poly::zero(num_vars);
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "monomial width mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    pub fn scale(&self, factor: &Rat) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(self.num_vars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `map[v]` for variable `v`. The result lives in the
    /// variable space of the map's components.
    pub fn compose(&self, map: &PolyVec) -> Poly {
        assert_eq!(
            self.num_vars,
            map.len(),
            "composition map must cover every variable"
        );
        let target_vars = map.num_vars();
        // Cached powers per variable, extended on demand.
        let mut powers: Vec<Vec<Poly>> = (0..map.len())
            .map(|_| vec![Poly::one(target_vars)])
            .collect();
        let mut result = Poly::zero(target_vars);
        for (mono, coef) in &self.terms {
            let mut term = Poly::constant(target_vars, coef.clone());
            for (v, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap() * map.component(v);
                    powers[v].push(next);
                }
                term = &term * &powers[v][e as usize];
            }
            result = &result + &term;
        }
        result
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(
            self.num_vars,
            point.len(),
            "evaluation point width mismatch"
        );
        let mut acc = Rat::zero();
        for (mono, coef) in &self.terms {
            let mut v = coef.clone();
            for (x, &e) in point.iter().zip(mono.exponents()) {
                if e > 0 {
                    v *= &x.pow(e);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Parses the canonical text form, e.g. `"x12^2 - 3/2*x13*x34 + 1"`,
    /// for an `n`-vertex quiver's entry variables.
    pub fn parse(text: &str, n: usize) -> Result<Poly> {
        parse_poly(text, n)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match positions::size_from_entry_count(self.num_vars) {
            Some(n) => (0..self.num_vars)
                .map(|p| positions::var_name(n, p))
                .collect(),
            None => (0..self.num_vars).map(|v| format!("v{v}")).collect(),
        };
        write!(f, "{}", self.to_string_with_names(&names))
    }
}

impl Poly {
    /// Canonical text: terms in descending graded-lex order.
    pub fn to_string_with_names(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (mono, coef)) in self.terms.iter().rev().enumerate() {
            let negative = coef.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let abs = coef.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || mono.is_constant() {
                factors.push(abs.to_string());
            }
            for (v, &e) in mono.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "polynomial width mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "polynomial width mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "polynomial width mismatch");
        let mut out = Poly::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// A polynomial map: one component per entry position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    components: Vec<Poly>,
}

impl PolyVec {
    pub fn new(components: Vec<Poly>) -> Self {
        assert!(!components.is_empty());
        let nv = components[0].num_vars();
        assert!(
            components.iter().all(|c| c.num_vars() == nv),
            "all components must share num_vars"
        );
        PolyVec { components }
    }

    /// The identity map on `num_vars` variables.
    pub fn identity(num_vars: usize) -> Self {
        PolyVec {
            components: (0..num_vars).map(|v| Poly::var(num_vars, v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Variable count of the component polynomials.
    pub fn num_vars(&self) -> usize {
        self.components[0].num_vars()
    }

    pub fn component(&self, index: usize) -> &Poly {
        &self.components[index]
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `self` after `inner`: component c is `self[c](inner)`.
    pub fn compose(&self, inner: &PolyVec) -> PolyVec {
        PolyVec {
            components: self.components.iter().map(|c| c.compose(inner)).collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Vec<Rat> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.len() == self.num_vars()
            && self
                .components
                .iter()
                .enumerate()
                .all(|(v, c)| *c == Poly::var(self.len(), v))
    }
}

// ---------------------------------------------------------------------------
// Parsing of the canonical text form.
// ---------------------------------------------------------------------------

fn parse_poly(text: &str, n: usize) -> Result<Poly> {
    let num_vars = positions::entry_count(n);
    let bad = |msg: &str| Error::InvalidPoly(format!("{msg} in {text:?}"));
    let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if stripped.is_empty() {
        return Err(bad("empty input"));
    }
    if stripped == "0" {
        return Ok(Poly::zero(num_vars));
    }

    // Split into signed terms.
    let mut terms: Vec<(i8, String)> = Vec::new();
    let mut current = String::new();
    let mut sign: i8 = 1;
    let mut chars = stripped.chars().peekable();
    // Leading sign.
    if let Some(&c) = chars.peek() {
        if c == '-' {
            sign = -1;
            chars.next();
        } else if c == '+' {
            chars.next();
        }
    }
    for c in chars {
        if c == '+' || c == '-' {
            if current.is_empty() {
                return Err(bad("dangling sign"));
            }
            terms.push((sign, std::mem::take(&mut current)));
            sign = if c == '-' { -1 } else { 1 };
        } else {
            current.push(c);
        }
    }
    if current.is_empty() {
        return Err(bad("trailing sign"));
    }
    terms.push((sign, current));

    let mut poly = Poly::zero(num_vars);
    for (sgn, term) in terms {
        let mut coef = Rat::from_int(sgn as i64);
        let mut exps = vec![0u32; num_vars];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(bad("empty factor"));
            }
            if factor.starts_with('x') {
                let (var_part, exp) = match factor.split_once('^') {
                    Some((v, e)) => {
                        let e: u32 = e.parse().map_err(|_| bad("bad exponent"))?;
                        (v, e)
                    }
                    None => (factor, 1),
                };
                let index = parse_var(var_part, n).ok_or_else(|| bad("unknown variable"))?;
                exps[index] += exp;
            } else {
                let r: Rat = factor.parse().map_err(|_| bad("bad coefficient"))?;
                coef *= &r;
            }
        }
        poly.add_term(Monomial::from_exponents(exps), coef);
    }
    Ok(poly)
}

fn parse_var(name: &str, n: usize) -> Option<usize> {
    let body = name.strip_prefix('x')?;
    let (i, j) = if let Some((a, b)) = body.split_once('_') {
        (a.parse().ok()?, b.parse().ok()?)
    } else {
        if body.len() != 2 || n > 9 {
            return None;
        }
        let mut it = body.chars();
        let i = it.next()?.to_digit(10)? as usize;
        let j = it.next()?.to_digit(10)? as usize;
        (i, j)
    };
    if 1 <= i && i < j && j <= n {
        Some(positions::index_of(n, i, j))
    } else {
        None
    }
}
