use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::math;

pub type C64 = Complex64;
/// Dense complex matrix. Text formats serialize it row-major.
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(n: usize) -> ComplexMatrix {
    DMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

/// Kronecker product with `a` as the more significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_power(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut out = identity(1);
    for _ in 0..n {
        out = kron(&out, a);
    }
    out
}

/// `|v><v|`
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// `Tr[AB]` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| {
        let v = math::sqrt(z.norm_sqr());
        if v > m {
            v
        } else {
            m
        }
    })
}

/// Largest entry of `|A - A^H|`.
pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = a[(i, j)] - a[(j, i)].conj();
            dev = dev.max(math::sqrt(d.norm_sqr()));
        }
    }
    dev
}

pub fn to_row_major(a: &ComplexMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out.push(a[(i, j)]);
        }
    }
    out
}

pub fn from_row_major(n: usize, data: &[C64]) -> ComplexMatrix {
    assert_eq!(data.len(), n * n, "row-major data must hold n*n entries");
    DMatrix::from_row_slice(n, n, data)
}
