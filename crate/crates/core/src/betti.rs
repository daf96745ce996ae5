//! Bigraded Betti tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Which module the table describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Ideal,
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Koszul,
    Resolution,
}

/// `dim Tor_p(M, k)_(i,j)` for bidegrees with `i + j <= window` (or every
/// bidegree when `window` is `None`, as for a finished resolution). Only
/// nonzero entries are stored; anything outside the window is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub target: Target,
    pub method: Method,
    pub window: Option<usize>,
    entries: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Serialize)]
struct JsonEntry {
    p: usize,
    i: usize,
    j: usize,
    dim: usize,
}

impl BettiTable {
    pub fn new(target: Target, method: Method, window: Option<usize>) -> Self {
        BettiTable { target, method, window, entries: BTreeMap::new() }
    }

    pub fn in_window(&self, i: usize, j: usize) -> bool {
        self.window.is_none_or(|w| i + j <= w)
    }

    pub fn set(&mut self, p: usize, i: usize, j: usize, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(p, i, j));
        } else {
            self.entries.insert((p, i, j), dim);
        }
    }

    /// `None` when `(i, j)` lies outside the scanned window.
    pub fn get(&self, p: usize, i: usize, j: usize) -> Option<usize> {
        if !self.in_window(i, j) {
            return None;
        }
        Some(self.entries.get(&(p, i, j)).copied().unwrap_or(0))
    }

    /// Nonzero entries as `((p, i, j), dim)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), usize)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest homological degree with a nonzero entry.
    pub fn max_p(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn total(&self, p: usize) -> usize {
        self.entries.iter().filter(|(k, _)| k.0 == p).map(|(_, v)| v).sum()
    }

    /// Converts a quotient table `S/I` to the table of the ideal `I`, using
    /// `Tor_p(I) = Tor_{p+1}(S/I)`.
    pub fn to_ideal(&self) -> BettiTable {
        assert_eq!(self.target, Target::Quotient);
        let mut t = BettiTable::new(Target::Ideal, self.method, self.window);
        for (&(p, i, j), &v) in &self.entries {
            if p >= 1 {
                t.set(p - 1, i, j, v);
            }
        }
        t
    }

    /// Swaps the two grading components.
    pub fn transpose(&self) -> BettiTable {
        let mut t = BettiTable::new(self.target, self.method, self.window);
        for (&(p, i, j), &v) in &self.entries {
            t.set(p, j, i, v);
        }
        t
    }

    /// Keeps only the entries with `i + j <= window`.
    pub fn restrict(&self, window: usize) -> BettiTable {
        let w = self.window.map_or(window, |x| x.min(window));
        let mut t = BettiTable::new(self.target, self.method, Some(w));
        for (&(p, i, j), &v) in &self.entries {
            if i + j <= w {
                t.set(p, i, j, v);
            }
        }
        t
    }

    /// Same entries, ignoring method and provenance.
    pub fn same_numbers(&self, other: &BettiTable) -> bool {
        self.target == other.target && self.window == other.window && self.entries == other.entries
    }

    /// The generating polynomial `∑_p dim Tor_p(i,j) t^p` for one bidegree.
    pub fn cell(&self, i: usize, j: usize) -> String {
        let mut terms = Vec::new();
        for (&(p, ii, jj), &v) in &self.entries {
            if ii == i && jj == j {
                let c = if v == 1 && p > 0 { String::new() } else { v.to_string() };
                terms.push(match p {
                    0 => v.to_string(),
                    1 => format!("{c}t"),
                    _ => format!("{c}t^{p}"),
                });
            }
        }
        if terms.is_empty() {
            ".".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Grid with the second grading index increasing upwards and the first
    /// increasing to the right, each cell a polynomial in `t`.
    pub fn format_grid(&self) -> String {
        if self.entries.is_empty() {
            return "(zero)\n".to_string();
        }
        let imin = self.entries.keys().map(|k| k.1).min().unwrap_or(0);
        let imax = self.entries.keys().map(|k| k.1).max().unwrap_or(0);
        let jmin = self.entries.keys().map(|k| k.2).min().unwrap_or(0);
        let jmax = self.entries.keys().map(|k| k.2).max().unwrap_or(0);
        let cells: Vec<Vec<String>> =
            (jmin..=jmax).rev().map(|j| (imin..=imax).map(|i| self.cell(i, j)).collect()).collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for (row, j) in cells.iter().zip((jmin..=jmax).rev()) {
            let _ = write!(out, "{j:>3} |");
            for c in row {
                let _ = write!(out, " {c:>width$}");
            }
            out.push('\n');
        }
        let _ = write!(out, "    +");
        for _ in imin..=imax {
            let _ = write!(out, "{}", "-".repeat(width + 1));
        }
        out.push('\n');
        let _ = write!(out, "     ");
        for i in imin..=imax {
            let _ = write!(out, " {i:>width$}");
        }
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<JsonEntry> =
            self.entries.iter().map(|(&(p, i, j), &dim)| JsonEntry { p, i, j, dim }).collect();
        serde_json::json!({
            "target": self.target,
            "method": self.method,
            "window": self.window,
            "entries": entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_transpose_and_format() {
        let mut q = BettiTable::new(Target::Quotient, Method::Koszul, Some(4));
        q.set(0, 0, 0, 1);
        q.set(1, 1, 1, 5);
        q.set(2, 2, 1, 1);
        q.set(2, 1, 2, 1);
        let i = q.to_ideal();
        assert_eq!(i.get(0, 1, 1), Some(5));
        assert_eq!(i.get(1, 2, 1), Some(1));
        assert_eq!(i.get(0, 3, 3), None);
        assert_eq!(i.get(0, 2, 2), Some(0));
        assert_eq!(i.transpose().get(1, 1, 2), Some(1));
        assert_eq!(i.cell(1, 1), "5");
        assert_eq!(i.cell(2, 1), "t");
        let grid = i.format_grid();
        assert!(grid.contains("5"));
        assert_eq!(i.max_p(), Some(1));
        assert_eq!(i.total(1), 2);
    }
}
