use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result, DIM_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

/// Ordered tensor factors. The first register is the most significant digit
/// of the computational basis index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Layout {
    registers: Vec<Register>,
}

impl Layout {
    pub fn new<S: Into<String>>(regs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut registers: Vec<Register> = Vec::new();
        for (label, dim) in regs {
            let label = label.into();
            if dim == 0 {
                return Err(Error::EmptyRegister);
            }
            if registers.iter().any(|r| r.label == label) {
                return Err(Error::DuplicateRegister(label));
            }
            registers.push(Register { label, dim });
        }
        let layout = Layout { registers };
        layout.checked_dim()?;
        Ok(layout)
    }

    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    fn checked_dim(&self) -> Result<usize> {
        let mut total: usize = 1;
        for r in &self.registers {
            total = total.saturating_mul(r.dim);
            if total > DIM_CAP {
                return Err(Error::Capacity {
                    dim: total,
                    cap: DIM_CAP,
                });
            }
        }
        Ok(total)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.registers.iter().map(|r| r.dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.registers.iter().map(|r| r.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.registers.iter().any(|r| r.label == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.registers[self.position(label)?].dim)
    }

    pub fn concat(&self, other: &Layout) -> Result<Layout> {
        Layout::new(
            self.registers
                .iter()
                .chain(other.registers.iter())
                .map(|r| (r.label.clone(), r.dim)),
        )
    }

    /// Registers named in `labels`, in that order.
    pub fn subset(&self, labels: &[&str]) -> Result<Layout> {
        let mut regs = Vec::with_capacity(labels.len());
        for l in labels {
            let r = &self.registers[self.position(l)?];
            regs.push((r.label.clone(), r.dim));
        }
        Layout::new(regs)
    }

    /// Registers not named in `labels`, in layout order.
    pub fn complement(&self, labels: &[&str]) -> Result<Layout> {
        for l in labels {
            self.position(l)?;
        }
        Layout::new(
            self.registers
                .iter()
                .filter(|r| !labels.contains(&r.label.as_str()))
                .map(|r| (r.label.clone(), r.dim)),
        )
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Layout> {
        let pos = self.position(from)?;
        Layout::new(self.registers.iter().enumerate().map(|(i, r)| {
            if i == pos {
                (to.to_string(), r.dim)
            } else {
                (r.label.clone(), r.dim)
            }
        }))
    }

    /// Row-major strides of each register in the flat basis index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = alloc::vec![1usize; self.len()];
        for i in (0..self.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.registers[i + 1].dim;
        }
        strides
    }
}
