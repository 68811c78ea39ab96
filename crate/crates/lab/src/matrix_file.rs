//! Matrix files on disk, in the text format of [`qcompound::qcore::text`].

use std::path::Path;

use qcompound::qcore::{ComplexMatrix, DensityMatrix, Layout, Projector};

pub use qcompound::qcore::text::{format_matrix, MatrixFile};

use crate::error::{LabError, LabResult};

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

pub fn parse_matrix(text: &str) -> LabResult<MatrixFile> {
    Ok(qcompound::qcore::text::parse_matrix(text)?)
}

/// Reads a matrix file, returning its parsed contents and raw bytes.
pub fn read_matrix(path: &Path) -> LabResult<(MatrixFile, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| bad(format!("{} is not UTF-8", path.display())))?;
    let parsed = parse_matrix(text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok((parsed, bytes))
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix, layout: Option<&Layout>) -> LabResult<()> {
    std::fs::write(path, format_matrix(m, layout))
        .map_err(|e| LabError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// A density matrix; files without a layout line get a single register `A`.
pub fn state_from(file: MatrixFile) -> LabResult<DensityMatrix> {
    let layout = match file.layout {
        Some(l) => l,
        None => Layout::single("A", file.matrix.nrows())?,
    };
    Ok(DensityMatrix::new(file.matrix, layout)?)
}

pub fn projector_from(file: MatrixFile) -> LabResult<Projector> {
    Ok(Projector::new(file.matrix)?)
}
