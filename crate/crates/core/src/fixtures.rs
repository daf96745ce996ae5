//! Built-in realizations.

use crate::field::Field;
use crate::linalg::ExactMatrix;
use crate::matroid::{MatroidError, Realization};

/// An integer realization matrix with a registry name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub description: &'static str,
    pub rows: Vec<Vec<i64>>,
}

impl Fixture {
    pub fn realization<K: Field>(&self, k: &K) -> Result<Realization<K>, MatroidError> {
        Realization::new(self.name.clone(), ExactMatrix::from_i64(k, &self.rows)?)
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }
}

/// The `n × n` identity: the Boolean arrangement.
pub fn boolean(n: usize) -> Fixture {
    let rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    Fixture { name: format!("boolean({n})"), description: "coordinate hyperplanes (free matroid)", rows }
}

/// Vandermonde columns `(1, t, ..., t^(r-1))` at `t = 1..=n`: a realization of `U(r,n)`.
pub fn uniform(r: usize, n: usize) -> Fixture {
    let rows = (0..r).map(|e| (1..=n as i64).map(|t| t.pow(e as u32)).collect()).collect();
    Fixture { name: format!("u({r},{n})"), description: "uniform matroid via Vandermonde columns", rows }
}

/// Signed incidence matrix of the complete graph `K4` (the braid arrangement `A3`).
pub fn a3() -> Fixture {
    Fixture {
        name: "a3".into(),
        description: "braid arrangement A3, columns e_i - e_j of K4",
        rows: vec![
            vec![1, 1, 1, 0, 0, 0],
            vec![-1, 0, 0, 1, 1, 0],
            vec![0, -1, 0, -1, 0, 1],
            vec![0, 0, -1, 0, -1, -1],
        ],
    }
}

/// Nine hyperplanes in four-space.
pub fn bracelet9() -> Fixture {
    Fixture {
        name: "bracelet9".into(),
        description: "nine hyperplanes in 4-space, not free, all minimal cyclic flats of rank 2",
        rows: vec![
            vec![1, 0, 0, 1, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1, 1, 1],
        ],
    }
}

/// Seven planes in three-space with two rank-2 cyclic flats.
pub fn seven() -> Fixture {
    Fixture {
        name: "seven".into(),
        description: "seven hyperplanes in 3-space with cyclic flats 1246 and 1357",
        rows: vec![vec![1, 1, 1, 1, 1, 1, 1], vec![0, 1, 0, 2, 0, 3, 0], vec![0, 0, 1, 0, 2, 0, 3]],
    }
}

/// `U(1,{4}) ⊕ U(3,{1,2,3,5})`.
pub fn fail_a() -> Fixture {
    Fixture {
        name: "fail_A".into(),
        description: "U(1,{4}) + U(3,{1,2,3,5})",
        rows: vec![vec![0, 1, 0, 0, 1], vec![0, 0, 1, 0, 1], vec![0, 0, 0, 1, 0], vec![1, 1, 1, 1, 1]],
    }
}

/// `P · fail_A` with the transvection `P = I + E_(3,1)` (row 3 += row 1).
pub fn fail_pa() -> Fixture {
    let mut rows = fail_a().rows;
    let r1 = rows[0].clone();
    for (x, y) in rows[2].iter_mut().zip(r1) {
        *x += y;
    }
    Fixture { name: "fail_PA".into(), description: "fail_A transformed by row3 += row1", rows }
}

/// Names accepted by [`lookup`], for listing.
pub fn registry() -> Vec<Fixture> {
    vec![boolean(3), uniform(2, 4), uniform(3, 5), a3(), bracelet9(), seven(), fail_a(), fail_pa()]
}

fn parse_args(s: &str, prefix: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Resolves `a3`, `bracelet9`, `seven`, `fail_A`, `fail_PA`, `boolean(n)`,
/// `u(r,n)` (also `u24`-style shorthands for single-digit parameters).
pub fn lookup(name: &str) -> Option<Fixture> {
    match name {
        "a3" | "A3" => return Some(a3()),
        "bracelet9" | "bracelet" => return Some(bracelet9()),
        "seven" => return Some(seven()),
        "fail_A" | "fail_a" => return Some(fail_a()),
        "fail_PA" | "fail_pa" => return Some(fail_pa()),
        _ => {}
    }
    if let Some(a) = parse_args(name, "boolean") {
        return (a.len() == 1 && a[0] >= 1).then(|| boolean(a[0]));
    }
    if let Some(a) = parse_args(name, "u") {
        return (a.len() == 2 && a[0] >= 1 && a[0] <= a[1]).then(|| uniform(a[0], a[1]));
    }
    let b = name.as_bytes();
    if b.len() == 3 && b[0] == b'u' && b[1].is_ascii_digit() && b[2].is_ascii_digit() {
        let (r, n) = ((b[1] - b'0') as usize, (b[2] - b'0') as usize);
        return (r >= 1 && r <= n).then(|| uniform(r, n));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("u(2,4)"), Some(uniform(2, 4)));
        assert_eq!(lookup("u35"), Some(uniform(3, 5)));
        assert_eq!(lookup("boolean(4)").unwrap().n(), 4);
        assert!(lookup("u(5,2)").is_none());
        assert!(lookup("nope").is_none());
        assert_eq!(fail_pa().rows[2], vec![0, 1, 0, 1, 1]);
    }

    #[test]
    fn uniform_is_uniform() {
        for (r, n) in [(1, 3), (2, 4), (3, 5), (3, 6)] {
            let m = uniform(r, n).realization(&Rationals).unwrap().matroid();
            assert!(m.is_uniform());
            assert_eq!(m.rank_total(), r);
        }
    }
}
