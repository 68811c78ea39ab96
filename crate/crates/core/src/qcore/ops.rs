use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::layout::Layout;
use super::matrix::{identity, kron, ComplexMatrix, C64};
use crate::{Error, Result};

fn check_square(m: &ComplexMatrix, layout: &Layout) -> Result<()> {
    let d = layout.total_dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// Flat offsets contributed by every multi-index over `regs`, enumerated in
/// the lexicographic order of those registers.
fn offsets(layout: &Layout, regs: &[usize]) -> Vec<usize> {
    let strides = layout.strides();
    let dims = layout.dims();
    let mut out = alloc::vec![0usize];
    for &r in regs {
        let mut next = Vec::with_capacity(out.len() * dims[r]);
        for &base in &out {
            for k in 0..dims[r] {
                next.push(base + k * strides[r]);
            }
        }
        out = next;
    }
    out
}

/// Reorders registers so that the result has layout `layout.subset(order)`.
/// `order` must name every register exactly once.
pub fn permute(m: &ComplexMatrix, layout: &Layout, order: &[&str]) -> Result<(ComplexMatrix, Layout)> {
    check_square(m, layout)?;
    let target = layout.subset(order)?;
    if target.len() != layout.len() {
        return Err(Error::Invalid(alloc::format!(
            "permutation names {} of {} registers",
            target.len(),
            layout.len()
        )));
    }
    let regs: Vec<usize> = order.iter().map(|l| layout.position(l)).collect::<Result<_>>()?;
    let map = offsets(layout, &regs);
    let d = map.len();
    let out = DMatrix::from_fn(d, d, |i, j| m[(map[i], map[j])]);
    Ok((out, target))
}

/// Traces out every register not named in `keep`; kept registers stay in layout order.
pub fn partial_trace(m: &ComplexMatrix, layout: &Layout, keep: &[&str]) -> Result<(ComplexMatrix, Layout)> {
    check_square(m, layout)?;
    for l in keep {
        layout.position(l)?;
    }
    let kept: Vec<usize> = (0..layout.len())
        .filter(|&i| keep.contains(&layout.registers()[i].label.as_str()))
        .collect();
    let traced: Vec<usize> = (0..layout.len()).filter(|i| !kept.contains(i)).collect();
    let ko = offsets(layout, &kept);
    let to = offsets(layout, &traced);
    let dk = ko.len();
    let mut out = DMatrix::from_element(dk, dk, C64::new(0.0, 0.0));
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &to {
                acc += m[(ko[i] + t, ko[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    let kept_layout = Layout::new(
        kept.iter()
            .map(|&i| (layout.registers()[i].label.clone(), layout.registers()[i].dim)),
    )?;
    Ok((out, kept_layout))
}

/// `op` acting on the registers `labels` (in that order), identity elsewhere,
/// expressed in the basis of `layout`.
pub fn embed(op: &ComplexMatrix, labels: &[&str], layout: &Layout) -> Result<ComplexMatrix> {
    let sub = layout.subset(labels)?;
    check_square(op, &sub)?;
    let rest = layout.complement(labels)?;
    let full = kron(op, &identity(rest.total_dim()));
    let joint = sub.concat(&rest)?;
    let order = layout.labels();
    Ok(permute(&full, &joint, &order)?.0)
}
