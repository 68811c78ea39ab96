//! Text format for dense complex matrices.
//!
//! ```text
//! dim 4
//! layout B:2 R:2
//! 5.0000000000000000e-1,0.0000000000000000e0 ...
//! ```
//!
//! The `layout` line is optional. Each of the `dim` rows holds `dim`
//! whitespace-separated `re,im` pairs. Values are written with 17
//! significant digits, which round-trips every `f64` exactly. Blank lines and
//! lines starting with `#` are ignored.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::{c64, ComplexMatrix, Layout, C64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub matrix: ComplexMatrix,
    pub layout: Option<Layout>,
}

fn bad(msg: String) -> Error {
    Error::Invalid(msg)
}

fn parse_layout(rest: &str) -> Result<Layout> {
    let mut regs = Vec::new();
    for tok in rest.split_whitespace() {
        let (label, dim) = tok
            .split_once(':')
            .ok_or_else(|| bad(format!("layout entry `{tok}` is not label:dim")))?;
        let dim: usize = dim.parse().map_err(|_| bad(format!("bad register dimension in `{tok}`")))?;
        regs.push((label.to_string(), dim));
    }
    if regs.is_empty() {
        return Err(bad("empty layout line".into()));
    }
    Layout::new(regs)
}

fn parse_entry(tok: &str) -> Result<C64> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| bad(format!("entry `{tok}` is not re,im")))?;
    let re: f64 = re.parse().map_err(|_| bad(format!("bad real part in `{tok}`")))?;
    let im: f64 = im.parse().map_err(|_| bad(format!("bad imaginary part in `{tok}`")))?;
    Ok(c64(re, im))
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| bad("empty matrix file".into()))?;
    let n: usize = header
        .strip_prefix("dim")
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("first line must be `dim <n>`, found `{header}`")))?;
    if n == 0 {
        return Err(bad("dim must be positive".into()));
    }
    let mut layout = None;
    let mut data = Vec::with_capacity(n * n);
    let mut rows = 0;
    for line in lines {
        if let Some(rest) = line.strip_prefix("layout") {
            if layout.is_some() || rows > 0 {
                return Err(bad("layout line must come right after the dim line".into()));
            }
            layout = Some(parse_layout(rest)?);
            continue;
        }
        let row: Vec<_> = line.split_whitespace().map(parse_entry).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(bad(format!("row {} has {} entries, expected {n}", rows + 1, row.len())));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != n {
        return Err(bad(format!("found {rows} rows, expected {n}")));
    }
    if let Some(l) = &layout {
        if l.total_dim() != n {
            return Err(bad(format!("layout dimension {} does not match dim {n}", l.total_dim())));
        }
    }
    Ok(MatrixFile {
        matrix: ComplexMatrix::from_row_slice(n, n, &data),
        layout,
    })
}

pub fn format_matrix(m: &ComplexMatrix, layout: Option<&Layout>) -> String {
    let n = m.nrows();
    let mut out = format!("dim {n}\n");
    if let Some(l) = layout {
        out.push_str("layout");
        for r in l.registers() {
            let _ = write!(out, " {}:{}", r.label, r.dim);
        }
        out.push('\n');
    }
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            let _ = write!(out, "{:.16e},{:.16e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}
