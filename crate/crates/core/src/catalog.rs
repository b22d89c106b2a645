//! Built-in algebras.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactlin::SparseVec;
use crate::free::{FreeTruncation, DEFAULT_DIM_CAP};
use crate::scalar::Scalar;

/// Free truncations above this dimension skip the load-time identity check;
/// their products are forced by the identity during construction.
pub const CHECK_LIMIT: usize = 400;

fn unit<F: Scalar>(i: usize) -> SparseVec<F> {
    SparseVec::unit(i)
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn build<F: Scalar>(
    name: &str,
    labels: Vec<String>,
    products: &[((usize, usize), usize)],
) -> Algebra<F> {
    Algebra::new(name, labels, products.iter().map(|&(p, v)| (p, unit(v))))
        .expect("catalog table is well formed")
}

/// `[e2, e2] = e1`.
pub fn q2<F: Scalar>() -> Algebra<F> {
    build("q2", labels("e", 2), &[((1, 1), 0)])
}

/// `[a2, a1] = a3`, `[a2, a2] = a4`, `[a3, a1] = a4`.
///
/// The table with every product mirrored, `[a1, a2] = a3` and so on, only
/// satisfies the mirrored identity `[x,[y,z]] = [[x,y],z] + [y,[x,z]]`.
/// Lie-commutators are symmetric, so every Lie invariant agrees on both.
pub fn g_a<F: Scalar>() -> Algebra<F> {
    build(
        "g_a",
        labels("a", 4),
        &[((1, 0), 2), ((1, 1), 3), ((2, 0), 3)],
    )
}

/// `[a1, a1] = a2`, `[a2, a1] = a3`, `[a3, a1] = a4`; mirrored as for [`g_a`].
pub fn g_b<F: Scalar>() -> Algebra<F> {
    build(
        "g_b",
        labels("a", 4),
        &[((0, 0), 1), ((1, 0), 2), ((2, 0), 3)],
    )
}

/// Same basis with every product mirrored, `[x, y]' = [y, x]`.
pub fn opposite<F: Scalar>(a: &Algebra<F>) -> Algebra<F> {
    Algebra::new(
        format!("{}^op", a.name()),
        a.labels().to_vec(),
        a.products().map(|(i, j, v)| ((j, i), v.clone())),
    )
    .expect("mirrored table is well formed")
}

pub fn abelian<F: Scalar>(n: usize) -> Algebra<F> {
    build(&format!("abelian({n})"), labels("e", n), &[])
}

/// Three-dimensional Heisenberg Lie algebra, `[x, y] = z = -[y, x]`.
pub fn heisenberg<F: Scalar>() -> Algebra<F> {
    let labels = vec!["x".into(), "y".into(), "z".into()];
    Algebra::new(
        "heisenberg",
        labels,
        [((0, 1), unit(2)), ((1, 0), unit::<F>(2).neg())],
    )
    .expect("catalog table is well formed")
}

/// `q2` plus a one-dimensional abelian summand spanned by `e3`.
pub fn q2_plus_k<F: Scalar>() -> Algebra<F> {
    let a = q2::<F>()
        .direct_sum(&abelian::<F>(1))
        .expect("direct sum of catalog algebras");
    Algebra::new(
        "q2+k",
        labels("e", 3),
        a.products().map(|(i, j, v)| ((i, j), v.clone())),
    )
    .expect("catalog table is well formed")
}

pub fn free<F: Scalar>(d: usize, m: usize, cap: usize) -> Result<FreeTruncation<F>> {
    FreeTruncation::new(d, m, cap)
}

/// Names accepted by [`lookup`], with one-line descriptions.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("q2", "2-dim, [e2,e2]=e1; Lie-class 2"),
        (
            "g_a",
            "4-dim, [a2,a1]=a3, [a2,a2]=a4, [a3,a1]=a4; Lie-class 3",
        ),
        (
            "g_b",
            "4-dim, [a1,a1]=a2, [a2,a1]=a3, [a3,a1]=a4; Lie-class 4",
        ),
        ("abelian:N", "N-dim abelian algebra"),
        (
            "free:D:M",
            "free algebra on D generators truncated at word length M",
        ),
        ("heisenberg", "3-dim Heisenberg Lie algebra"),
        ("q2+k", "q2 plus a 1-dim abelian summand"),
    ]
}

fn parse_args(s: &str) -> Option<Vec<usize>> {
    let inner = if let Some(rest) = s.strip_prefix(':') {
        rest.to_string()
    } else if s.starts_with('(') && s.ends_with(')') {
        s[1..s.len() - 1].replace(',', ":")
    } else {
        return None;
    };
    inner.split(':').map(|p| p.trim().parse().ok()).collect()
}

/// Resolves a catalog name such as `q2`, `abelian:3`, `abelian(3)`,
/// `free:2:4` or `free(2,4)`, running the Leibniz check where it applies.
pub fn lookup<F: Scalar>(name: &str, cap: usize) -> Result<Algebra<F>> {
    let key = name.trim().to_ascii_lowercase();
    let bad = || Error::InvalidArgument(format!("unknown catalog entry '{name}'"));
    let a = match key.as_str() {
        "q2" => q2(),
        "g_a" | "ga" => g_a(),
        "g_b" | "gb" => g_b(),
        "heisenberg" => heisenberg(),
        "q2+k" | "q2+abelian(1)" => q2_plus_k(),
        _ => {
            if let Some(rest) = key.strip_prefix("abelian") {
                match parse_args(rest).as_deref() {
                    Some([n]) => abelian(*n),
                    _ => return Err(bad()),
                }
            } else if let Some(rest) = key.strip_prefix("free") {
                match parse_args(rest).as_deref() {
                    Some([d, m]) => {
                        let f = free::<F>(*d, *m, cap)?;
                        let a = f.algebra().as_ref().clone();
                        if a.dim() <= CHECK_LIMIT {
                            a.ensure_leibniz()?;
                        }
                        return Ok(a);
                    }
                    _ => return Err(bad()),
                }
            } else {
                return Err(bad());
            }
        }
    };
    a.ensure_leibniz()?;
    Ok(a)
}

/// [`lookup`] with the default dimension cap.
pub fn get<F: Scalar>(name: &str) -> Result<Algebra<F>> {
    lookup(name, DEFAULT_DIM_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational as Q;

    #[test]
    fn entries_are_leibniz() {
        for name in [
            "q2",
            "g_a",
            "g_b",
            "abelian:3",
            "abelian(0)",
            "free:2:3",
            "free(1,4)",
            "heisenberg",
            "q2+k",
        ] {
            assert!(lookup::<Q>(name, DEFAULT_DIM_CAP).is_ok(), "{name}");
        }
    }

    #[test]
    fn names() {
        assert_eq!(get::<Q>("abelian(3)").unwrap().dim(), 3);
        assert_eq!(get::<Q>("free:2:3").unwrap().dim(), 14);
        assert!(get::<Q>("nope").is_err());
        assert!(get::<Q>("abelian:x").is_err());
        assert_eq!(get::<Q>("q2+k").unwrap().dim(), 3);
    }

    #[test]
    fn mirrored_tables_fail_the_identity() {
        assert!(!opposite(&g_a::<Q>()).check_leibniz().holds);
        assert!(!opposite(&g_b::<Q>()).check_leibniz().holds);
        assert!(opposite(&q2::<Q>()).same_table(&q2()));
    }

    #[test]
    fn g_b_is_free_one_four() {
        let f = free::<Q>(1, 4, 100).unwrap();
        assert!(f.algebra().same_table(&g_b()));
    }
}
