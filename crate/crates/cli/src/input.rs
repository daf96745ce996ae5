//! The JSON input format and its conversion to a realization.
//!
//! ```json
//! {"name": "seven", "field": "rational",
//!  "matrix": [[1, 1, 1], [0, "1/2", 3]],
//!  "options": {"drop_loops": false, "window": 9, "bound": 4}}
//! ```
//! `field` is either `"rational"` or `{"prime": p}`.

use std::path::Path;

use pairs_core::field::{Field, FieldError, PrimeField, Rational, Scalar};
use pairs_core::fixtures::Fixture;
use pairs_core::linalg::{ExactMatrix, LinalgError};
use pairs_core::matroid::{MatroidError, Realization};
use pairs_core::poly::MAX_VARS;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid input JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix entry at row {row}, column {col}: {source}")]
    Scalar { row: usize, col: usize, source: FieldError },
    #[error("matrix is not rectangular: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("ground set of size {0} exceeds the supported maximum {MAX_VARS}")]
    TooLarge(usize),
    #[error("prime {p} is not larger than the number of columns {n}; pass --allow-small-prime to proceed anyway")]
    SmallPrime { p: u64, n: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

/// A matrix entry: an integer or a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn scalar(&self) -> Result<Scalar, FieldError> {
        Ok(Scalar::Rational(match self {
            Entry::Int(v) => Rational::from_int(*v),
            Entry::Text(s) => Rational::parse(s)?,
        }))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub drop_loops: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub name: String,
    pub field: FieldSpec,
    pub matrix: Vec<Vec<Entry>>,
    #[serde(default)]
    pub options: Options,
}

impl InputSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let spec: InputSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_file(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn from_fixture(f: &Fixture) -> Self {
        InputSpec {
            name: f.name.clone(),
            field: FieldSpec::Rational,
            matrix: f.rows.iter().map(|r| r.iter().map(|&v| Entry::Int(v)).collect()).collect(),
            options: Options::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    fn validate(&self) -> Result<(), InputError> {
        let n = self.n();
        if self.matrix.is_empty() || n == 0 {
            return Err(InputError::Empty);
        }
        for (row, r) in self.matrix.iter().enumerate() {
            if r.len() != n {
                return Err(InputError::Ragged { row: row + 1, got: r.len(), expected: n });
            }
            for (col, e) in r.iter().enumerate() {
                e.scalar().map_err(|source| InputError::Scalar { row: row + 1, col: col + 1, source })?;
            }
        }
        if n > MAX_VARS {
            return Err(InputError::TooLarge(n));
        }
        if let FieldSpec::Prime(p) = self.field {
            PrimeField::new(p)?;
        }
        Ok(())
    }

    /// Checks the `p > n` rule for prime fields; returns a warning when the
    /// rule is broken but overridden.
    pub fn check_prime(&self, allow_small_prime: bool) -> Result<Option<String>, InputError> {
        match self.field {
            FieldSpec::Prime(p) if p <= self.n() as u64 => {
                if allow_small_prime {
                    Ok(Some(format!("prime {p} does not exceed n = {}; results may differ from characteristic 0", self.n())))
                } else {
                    Err(InputError::SmallPrime { p, n: self.n() })
                }
            }
            _ => Ok(None),
        }
    }

    /// The realization over `k`, which must match `self.field`.
    pub fn realization<K: Field>(&self, k: &K) -> Result<Realization<K>, InputError> {
        let mut rows = Vec::with_capacity(self.matrix.len());
        for (row, r) in self.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(r.len());
            for (col, e) in r.iter().enumerate() {
                out.push(e.scalar().map_err(|source| InputError::Scalar { row: row + 1, col: col + 1, source })?);
            }
            rows.push(out);
        }
        let m = ExactMatrix::from_scalars(k, &rows)?;
        Ok(Realization::new(self.name.clone(), m)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pairs_core::field::Rationals;
    use pairs_core::fixtures;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_schema() {
        let s = InputSpec::parse(
            r#"{"name":"t","field":{"prime":101},"matrix":[[1,"1/2"],[0,"-3"]],"options":{"drop_loops":true,"window":5,"bound":3}}"#,
        )
        .unwrap();
        assert_eq!(s.field, FieldSpec::Prime(101));
        assert_eq!(s.options, Options { drop_loops: true, window: Some(5), bound: Some(3) });
        assert_eq!(s.matrix[0][1], Entry::Text("1/2".into()));
        let bare = InputSpec::parse(r#"{"name":"t","field":"rational","matrix":[[1]]}"#).unwrap();
        assert_eq!(bare.options, Options::default());
    }

    #[test]
    fn rejects_bad_input() {
        let zero_den = InputSpec::parse(r#"{"name":"t","field":"rational","matrix":[["1/0"]]}"#);
        assert!(matches!(zero_den, Err(InputError::Scalar { row: 1, col: 1, .. })));
        let ragged = InputSpec::parse(r#"{"name":"t","field":"rational","matrix":[[1,2],[3]]}"#);
        assert!(matches!(ragged, Err(InputError::Ragged { row: 2, .. })));
        assert!(InputSpec::parse(r#"{"name":"t","field":"complex","matrix":[[1]]}"#).is_err());
        assert!(InputSpec::parse(r#"{"name":"t","field":{"prime":100},"matrix":[[1]]}"#).is_err());
        assert!(InputSpec::parse(r#"{"name":"t","field":"rational","matrix":[]}"#).is_err());
    }

    #[test]
    fn small_primes_need_an_override() {
        let s = InputSpec::parse(r#"{"name":"t","field":{"prime":3},"matrix":[[1,1,1]]}"#).unwrap();
        assert!(matches!(s.check_prime(false), Err(InputError::SmallPrime { p: 3, n: 3 })));
        assert!(s.check_prime(true).unwrap().is_some());
    }

    #[test]
    fn fixture_files_give_the_expected_shapes() {
        let b = InputSpec::parse(&InputSpec::from_fixture(&fixtures::bracelet9()).render()).unwrap();
        let re = b.realization(&Rationals).unwrap();
        assert_eq!((re.matrix().nrows(), re.n(), re.rank()), (4, 9, 4));
        let s = InputSpec::from_fixture(&fixtures::seven()).realization(&Rationals).unwrap();
        assert_eq!((s.matrix().nrows(), s.n(), s.rank()), (3, 7, 3));
    }

    fn entry() -> impl Strategy<Value = Entry> {
        prop_oneof![
            (-50i64..50).prop_map(Entry::Int),
            (-50i64..50, 1i64..20).prop_map(|(a, b)| Entry::Text(format!("{a}/{b}"))),
        ]
    }

    proptest! {
        #[test]
        fn render_then_parse_round_trips(
            rows in (1usize..4, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(entry(), c), r)),
            prime in any::<bool>(),
            drop_loops in any::<bool>(),
            window in prop::option::of(0usize..12),
            bound in prop::option::of(0usize..6),
        ) {
            let spec = InputSpec {
                name: "p".into(),
                field: if prime { FieldSpec::Prime(10007) } else { FieldSpec::Rational },
                matrix: rows,
                options: Options { drop_loops, window, bound },
            };
            prop_assert_eq!(InputSpec::parse(&spec.render()).unwrap(), spec);
        }
    }
}
