//! JSON formats for algebras, vector lists and matrices. Indices are 1-based
//! and coefficients are rational strings such as `"3"` or `"-1/2"`.

use std::collections::BTreeSet;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::SparseVec;
use crate::scalar::Scalar;

/// Version tag carried by JSON reports and algebra files.
pub const SCHEMA: &str = "nilmult/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

/// `[b_left, b_right] = sum value[k].1 * b_{value[k].0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    pub value: Vec<(usize, Coefficient)>,
}

/// A rational coefficient; integers are accepted unquoted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Text(String),
    Integer(i64),
}

impl Coefficient {
    fn parse<F: Scalar>(&self, path: impl Fn() -> String) -> Result<F> {
        match self {
            Coefficient::Integer(n) => Ok(F::from_i64(*n)),
            Coefficient::Text(s) => F::parse_exact(s).ok_or_else(|| Error::Schema {
                path: path(),
                message: format!("'{s}' is not a rational p or p/q"),
            }),
        }
    }
}

fn from_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })
}

fn check_index(index: usize, dim: usize) -> Result<usize> {
    if index == 0 || index > dim {
        return Err(Error::Index { index, dim });
    }
    Ok(index - 1)
}

impl AlgebraFile {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        from_json(bytes)
    }

    /// Validates indices, duplicates and coefficients.
    pub fn to_algebra<F: Scalar>(&self) -> Result<Algebra<F>> {
        let labels = match &self.basis {
            Some(b) if b.len() != self.dim => {
                return Err(Error::Schema {
                    path: "basis".into(),
                    message: format!("{} labels for dimension {}", b.len(), self.dim),
                })
            }
            Some(b) => b.clone(),
            None => Algebra::<F>::default_labels(self.dim),
        };
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(Error::Schema {
                path: "basis".into(),
                message: "duplicate basis labels".into(),
            });
        }
        let mut products = Vec::with_capacity(self.brackets.len());
        for (n, b) in self.brackets.iter().enumerate() {
            let i = check_index(b.left, self.dim)?;
            let j = check_index(b.right, self.dim)?;
            let mut entries = Vec::with_capacity(b.value.len());
            let mut seen = BTreeSet::new();
            for (k, (idx, coeff)) in b.value.iter().enumerate() {
                let t = check_index(*idx, self.dim)?;
                if !seen.insert(t) {
                    return Err(Error::Schema {
                        path: format!("brackets[{n}].value[{k}]"),
                        message: format!("index {idx} repeated"),
                    });
                }
                entries.push((
                    t,
                    coeff.parse::<F>(|| format!("brackets[{n}].value[{k}][1]"))?,
                ));
            }
            products.push(((i, j), SparseVec::from_entries(entries)));
        }
        Algebra::new(self.name.clone(), labels, products)
    }

    /// Canonical form: sorted brackets and entries, labels always present.
    pub fn from_algebra<F: Scalar>(a: &Algebra<F>) -> Self {
        let brackets = a
            .products()
            .map(|(i, j, v)| BracketEntry {
                left: i + 1,
                right: j + 1,
                value: v
                    .entries()
                    .iter()
                    .map(|(k, x)| (k + 1, Coefficient::Text(x.to_string())))
                    .collect(),
            })
            .collect();
        Self {
            schema: Some(SCHEMA.into()),
            name: a.name().to_string(),
            dim: a.dim(),
            basis: Some(a.labels().to_vec()),
            brackets,
        }
    }

    /// Same content with brackets sorted and zero coefficients dropped.
    pub fn canonical<F: Scalar>(&self) -> Result<Self> {
        Ok(Self::from_algebra(&self.to_algebra::<F>()?))
    }
}

/// Parses an algebra file, running the Leibniz check when `check` is set.
pub fn parse_algebra<F: Scalar>(bytes: &[u8], check: bool) -> Result<Algebra<F>> {
    let a = AlgebraFile::from_bytes(bytes)?.to_algebra()?;
    if check {
        a.ensure_leibniz()?;
    }
    Ok(a)
}

/// Pretty JSON in canonical form.
pub fn serialize_algebra<F: Scalar>(a: &Algebra<F>) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(a)).expect("algebra files serialize")
}

fn parse_rows<F: Scalar>(
    rows: &[Vec<Coefficient>],
    width: usize,
    what: &str,
) -> Result<Vec<Vec<F>>> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    expected: width,
                    found: row.len(),
                });
            }
            row.iter()
                .enumerate()
                .map(|(k, c)| c.parse::<F>(|| format!("{what}[{r}][{k}]")))
                .collect()
        })
        .collect()
}

/// A JSON list of coordinate vectors of length `dim`.
pub fn parse_vectors<F: Scalar>(bytes: &[u8], dim: usize) -> Result<Vec<SparseVec<F>>> {
    let raw: Vec<Vec<Coefficient>> = from_json(bytes)?;
    Ok(parse_rows::<F>(&raw, dim, "")?
        .iter()
        .map(|v| SparseVec::from_dense(v))
        .collect())
}

/// A JSON matrix with `rows` rows and `cols` columns, returned as columns.
pub fn parse_matrix<F: Scalar>(
    bytes: &[u8],
    rows: usize,
    cols: usize,
) -> Result<Vec<SparseVec<F>>> {
    let raw: Vec<Vec<Coefficient>> = from_json(bytes)?;
    if raw.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: raw.len(),
        });
    }
    let dense = parse_rows::<F>(&raw, cols, "")?;
    Ok((0..cols)
        .map(|j| SparseVec::from_entries((0..rows).map(|i| (i, dense[i][j].clone())).collect()))
        .collect())
}

/// Dense rational-string rendering of a vector.
pub fn vector_strings<F: Scalar>(v: &SparseVec<F>, dim: usize) -> Vec<String> {
    v.to_dense(dim).iter().map(|x| x.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_rational::BigRational as Q;

    #[test]
    fn q2_round_trip() {
        let text = serialize_algebra(&catalog::q2::<Q>());
        let back: Algebra<Q> = parse_algebra(text.as_bytes(), true).unwrap();
        assert!(back.same_table(&catalog::q2()));
        assert_eq!(serialize_algebra(&back), text);
    }

    #[test]
    fn identity_failure_is_reported() {
        let text = r#"{"name":"bad","dim":2,"brackets":[
            {"left":1,"right":1,"value":[[2,"1"]]},
            {"left":2,"right":1,"value":[[1,"1"]]}]}"#;
        match parse_algebra::<Q>(text.as_bytes(), true) {
            Err(Error::IdentityFailure { triple, .. }) => assert_eq!(triple, (1, 2, 1)),
            other => panic!("{other:?}"),
        }
        assert!(parse_algebra::<Q>(text.as_bytes(), false).is_ok());
    }

    #[test]
    fn grammar() {
        let ok = r#"{"name":"h","dim":2,"brackets":[{"left":2,"right":2,"value":[[1,"1/2"]]}]}"#;
        assert!(parse_algebra::<Q>(ok.as_bytes(), true).is_ok());
        let bad = ok.replace("1/2", "1.5");
        match parse_algebra::<Q>(bad.as_bytes(), true) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "brackets[0].value[0][1]"),
            other => panic!("{other:?}"),
        }
        let idx = ok.replace(r#""right":2"#, r#""right":3"#);
        assert_eq!(
            parse_algebra::<Q>(idx.as_bytes(), true).unwrap_err(),
            Error::Index { index: 3, dim: 2 }
        );
        let missing = r#"{"name":"h","brackets":[]}"#;
        assert_eq!(
            parse_algebra::<Q>(missing.as_bytes(), true)
                .unwrap_err()
                .code(),
            "SCHEMA_ERROR"
        );
        let dup = r#"{"name":"h","dim":2,"brackets":[{"left":2,"right":2,"value":[]},{"left":2,"right":2,"value":[]}]}"#;
        assert_eq!(
            parse_algebra::<Q>(dup.as_bytes(), true).unwrap_err().code(),
            "SCHEMA_ERROR"
        );
    }

    #[test]
    fn vectors_and_matrices() {
        let v = parse_vectors::<Q>(br#"[["1","0"],["0","-2/3"]]"#, 2).unwrap();
        assert_eq!(v[1].get(1), "-2/3".parse().unwrap());
        let cols = parse_matrix::<Q>(br#"[["0","1","0","0"],["1","0","0","0"]]"#, 2, 4).unwrap();
        assert_eq!(cols[0], SparseVec::unit(1));
        assert_eq!(cols[1], SparseVec::unit(0));
        assert!(cols[2].is_zero());
        assert!(parse_matrix::<Q>(b"[[1]]", 2, 1).is_err());
    }
}
