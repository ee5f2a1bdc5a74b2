//! The flip relation on sign patterns and its connected components.
//!
//! Two patterns differing in the sign of a single entry (i,j) are related
//! when some third vertex k sees equal signs on x_{i,k} and x_{k,j}; along
//! such an edge the corresponding pieces of any invariant carriage-wise
//! polynomial must coincide. For n = 4 the graph is connected, so a single
//! polynomial piece suffices; for n = 3 it splits into two 4-element
//! components.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::positions::{entry_count, pair_of};
use crate::quiver::SignPattern;

/// Largest n for which the 2^(n(n-1)/2)-node graph is built by default.
pub const DEFAULT_CAP: usize = 5;

/// True when flipping the sign at `pos` is licensed: some vertex k off the
/// entry's endpoints has sign(x_{i,k}) = sign(x_{k,j}).
pub fn flip_allowed(s: &SignPattern, pos: usize) -> bool {
    let n = s.n();
    let (i, j) = pair_of(n, pos);
    (1..=n).any(|k| k != i && k != j && s.entry_sign(i, k) == s.entry_sign(k, j))
}

/// Flip graph over all sign patterns of an n-vertex quiver, stored as its
/// partition into connected components.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    n: usize,
    components: Vec<Vec<SignPattern>>,
    component_of: Vec<usize>,
}

impl FlipGraph {
    pub fn build(n: usize) -> Result<Self> {
        Self::build_with_cap(n, DEFAULT_CAP)
    }

    pub fn build_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::CapExceeded { n, cap });
        }
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let m = entry_count(n);
        let nodes = SignPattern::enumerate(n);
        let mut component_of = vec![usize::MAX; nodes.len()];
        let mut components: Vec<Vec<SignPattern>> = Vec::new();
        for start in 0..nodes.len() {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            component_of[start] = id;
            while let Some(idx) = queue.pop_front() {
                members.push(nodes[idx].clone());
                for pos in 0..m {
                    if !flip_allowed(&nodes[idx], pos) {
                        continue;
                    }
                    let neighbor = nodes[idx].with_flipped(pos);
                    let nidx = pattern_index(&neighbor);
                    if component_of[nidx] == usize::MAX {
                        component_of[nidx] = id;
                        queue.push_back(nidx);
                    }
                }
            }
            members.sort();
            components.push(members);
        }
        Ok(FlipGraph {
            n,
            components,
            component_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Components ordered by their lexicographically least member; members
    /// sorted within each component.
    pub fn components(&self) -> &[Vec<SignPattern>] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of(&self, s: &SignPattern) -> usize {
        debug_assert_eq!(s.n(), self.n);
        self.component_of[pattern_index(s)]
    }

    /// Least member of the component containing `s`.
    pub fn representative(&self, s: &SignPattern) -> &SignPattern {
        &self.components[self.component_of(s)][0]
    }

    /// One-line summary, e.g. "2 components: 4, 4".
    pub fn headline(&self) -> String {
        let sizes: Vec<String> = self
            .components
            .iter()
            .map(|c| c.len().to_string())
            .collect();
        let label = if self.components.len() == 1 {
            "component"
        } else {
            "components"
        };
        format!("{} {}: {}", self.components.len(), label, sizes.join(", "))
    }

    /// Per-component listing with sizes and least members.
    pub fn detailed_report(&self) -> String {
        let mut out = self.headline();
        for (idx, members) in self.components.iter().enumerate() {
            write!(
                out,
                "\ncomponent {}: size {}, least {}",
                idx + 1,
                members.len(),
                members[0]
            )
            .unwrap();
        }
        out.push('\n');
        out
    }
}

/// Number of components of the flip graph (convenience wrapper).
pub fn components(n: usize) -> Result<Vec<Vec<SignPattern>>> {
    Ok(FlipGraph::build(n)?.components().to_vec())
}

pub fn is_connected(n: usize) -> Result<bool> {
    Ok(FlipGraph::build(n)?.is_connected())
}

/// Index of a pattern in [`SignPattern::enumerate`] order.
fn pattern_index(s: &SignPattern) -> usize {
    s.signs().iter().fold(0usize, |acc, sign| {
        (acc << 1)
            | match sign {
                crate::quiver::Sign::Plus => 0,
                crate::quiver::Sign::Minus => 1,
            }
    })
}
