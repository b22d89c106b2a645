use std::path::Path;
use std::sync::Arc;

use nilmult_core::exactlin::SparseVec;
use nilmult_core::{catalog, format, Error, LeibnizAlgebra, Rational, Result};

use crate::Global;

pub const CATALOG_SCHEME: &str = "catalog:";

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `catalog:NAME` or a path to an algebra file.
pub fn algebra(g: &Global, source: &str) -> Result<Arc<LeibnizAlgebra>> {
    let a = match source.strip_prefix(CATALOG_SCHEME) {
        Some(name) => catalog::lookup(name, g.max_dim)?,
        None => format::parse_algebra(&read(Path::new(source))?, !g.no_check)?,
    };
    Ok(Arc::new(a))
}

pub fn vectors(path: &Path, dim: usize) -> Result<Vec<SparseVec<Rational>>> {
    format::parse_vectors(&read(path)?, dim)
}

pub fn matrix(path: &Path, rows: usize, cols: usize) -> Result<Vec<SparseVec<Rational>>> {
    format::parse_matrix(&read(path)?, rows, cols)
}
