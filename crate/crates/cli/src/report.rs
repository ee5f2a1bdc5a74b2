//! Shared formatting helpers for human-readable reports.

use quiver_lab::poly::{Poly, PolyVec};
use quiver_lab::quiver::Quiver;

/// Componentwise signs with '0' marking zero entries, so boundary quivers
/// still get a readable trail.
pub fn pattern_marks(q: &Quiver) -> String {
    q.upper()
        .iter()
        .map(|v| match v.signum() {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

/// The letter dictionary tuple for n = 4.
pub fn letters_line(q: &Quiver) -> Option<String> {
    let letters = q.letters()?;
    let parts: Vec<String> = letters.iter().map(|v| v.to_string()).collect();
    Some(format!("(x,y,z,u,v,w) = ({})", parts.join(", ")))
}

/// An n = 4 entry polynomial rewritten in the letter dictionary
/// x = x12, y = x13, z = x14, u = x23, v = -x24, w = x34.
pub fn poly_letters(p: &Poly) -> Option<String> {
    if p.num_vars() != 6 {
        return None;
    }
    let mut components: Vec<Poly> = (0..6).map(|v| Poly::var(6, v)).collect();
    components[4] = -&components[4];
    let in_letters = p.compose(&PolyVec::new(components));
    let names: Vec<String> = ["x", "y", "z", "u", "v", "w"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    Some(in_letters.to_string_with_names(&names))
}

/// One trail line for a quiver state.
pub fn quiver_line(q: &Quiver) -> String {
    let mut line = format!("{q}  pattern {}", pattern_marks(q));
    if q.n() % 2 == 0 {
        if let Ok(pf) = q.pfaffian() {
            line.push_str(&format!("  Pf {pf}"));
        }
    }
    if let Some(letters) = letters_line(q) {
        line.push_str(&format!("  {letters}"));
    }
    line
}
