//! Log-barrier path following for
//!
//! ```text
//! minimize  max_{omega in Alt} Tr[M omega]
//! s.t.      0 <= M <= I,   Tr[M rho_j] >= c_j
//! ```
//!
//! in epigraph form over the real coordinates of Hermitian `M` plus the
//! epigraph variable `z`. The alternative set is either the convex hull of
//! finitely many operators or `{ sigma (x) T : sigma a state }` on a
//! bipartite space.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::qcore::{eigh, kron, trace_product, ComplexMatrix, C64};
use crate::{math, Error, Result};

pub(crate) enum Alternatives {
    Vertices(Vec<ComplexMatrix>),
    /// `sigma (x) second` for every state `sigma` on a `first_dim` factor.
    FreeFirst { first_dim: usize, second: ComplexMatrix },
}

pub(crate) struct Problem {
    pub dim: usize,
    pub nulls: Vec<(ComplexMatrix, f64)>,
    pub alternatives: Alternatives,
}

pub(crate) struct Outcome {
    pub m: ComplexMatrix,
    /// `max_{omega} Tr[M omega]` at the returned `M`.
    pub objective: f64,
    /// Lagrangian lower bound on the optimal objective.
    pub lower_bound: f64,
    /// Central-path weights on the vertices (empty for `FreeFirst`).
    pub weights: Vec<f64>,
    /// Central-path state on the first factor (`FreeFirst` only).
    pub dual_state: Option<ComplexMatrix>,
    pub newton_steps: usize,
}

#[derive(Clone, Copy)]
enum Kind {
    Diag,
    Re,
    Im,
}

#[derive(Clone, Copy)]
struct Coord {
    k: usize,
    l: usize,
    kind: Kind,
}

fn coords(d: usize) -> Vec<Coord> {
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(Coord { k, l: k, kind: Kind::Diag });
    }
    for k in 0..d {
        for l in k + 1..d {
            out.push(Coord { k, l, kind: Kind::Re });
            out.push(Coord { k, l, kind: Kind::Im });
        }
    }
    out
}

/// Component of a Hermitian matrix entry along coordinate `c`: `Tr[G E_c]`.
#[inline]
fn component(c: &Coord, entry: C64) -> f64 {
    match c.kind {
        Kind::Diag => entry.re,
        Kind::Re => 2.0 * entry.re,
        Kind::Im => 2.0 * entry.im,
    }
}

fn project(g: &ComplexMatrix, cs: &[Coord]) -> Vec<f64> {
    cs.iter().map(|c| component(c, g[(c.k, c.l)])).collect()
}

fn assemble(x: &[f64], cs: &[Coord], d: usize) -> ComplexMatrix {
    let mut m = DMatrix::zeros(d, d);
    for (c, &v) in cs.iter().zip(x) {
        match c.kind {
            Kind::Diag => m[(c.k, c.k)] = C64::new(v, 0.0),
            Kind::Re => {
                m[(c.k, c.l)] += C64::new(v, 0.0);
                m[(c.l, c.k)] += C64::new(v, 0.0);
            }
            Kind::Im => {
                m[(c.k, c.l)] += C64::new(0.0, v);
                m[(c.l, c.k)] += C64::new(0.0, -v);
            }
        }
    }
    m
}

/// Entry `(m, n)` of `A E_p A` for Hermitian `A`.
#[inline]
fn sandwich_entry(a: &ComplexMatrix, p: &Coord, m: usize, n: usize) -> C64 {
    match p.kind {
        Kind::Diag => a[(m, p.k)] * a[(p.k, n)],
        Kind::Re => a[(m, p.k)] * a[(p.l, n)] + a[(m, p.l)] * a[(p.k, n)],
        Kind::Im => (a[(m, p.k)] * a[(p.l, n)] - a[(m, p.l)] * a[(p.k, n)]) * C64::new(0.0, 1.0),
    }
}

/// Adds the Hessian of `-log det X` (with `A = X^{-1}`) to the leading block.
fn add_logdet_hessian(h: &mut DMatrix<f64>, a: &ComplexMatrix, cs: &[Coord]) {
    for (i, p) in cs.iter().enumerate() {
        for (j, q) in cs.iter().enumerate().skip(i) {
            let v = component(q, sandwich_entry(a, p, q.k, q.l));
            h[(i, j)] += v;
            if i != j {
                h[(j, i)] += v;
            }
        }
    }
}

struct Lmi<'a> {
    da: usize,
    db: usize,
    t: &'a ComplexMatrix,
}

impl Lmi<'_> {
    /// `Tr_B[M (I (x) T)]`
    fn reduce(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let (da, db) = (self.da, self.db);
        DMatrix::from_fn(da, da, |a, a2| {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..db {
                for b2 in 0..db {
                    acc += m[(a * db + b, a2 * db + b2)] * self.t[(b2, b)];
                }
            }
            acc
        })
    }

    /// `Tr_B[E_c (I (x) T)]` for a coordinate basis element.
    fn reduce_coord(&self, c: &Coord) -> ComplexMatrix {
        let db = self.db;
        let mut out = DMatrix::zeros(self.da, self.da);
        let mut add = |k: usize, l: usize, coef: C64| {
            let (ak, bk, al, bl) = (k / db, k % db, l / db, l % db);
            out[(ak, al)] += coef * self.t[(bl, bk)];
        };
        match c.kind {
            Kind::Diag => add(c.k, c.k, C64::new(1.0, 0.0)),
            Kind::Re => {
                add(c.k, c.l, C64::new(1.0, 0.0));
                add(c.l, c.k, C64::new(1.0, 0.0));
            }
            Kind::Im => {
                add(c.k, c.l, C64::new(0.0, 1.0));
                add(c.l, c.k, C64::new(0.0, -1.0));
            }
        }
        out
    }
}

struct Solver<'a> {
    p: &'a Problem,
    cs: Vec<Coord>,
    null_grads: Vec<Vec<f64>>,
    vertex_grads: Vec<Vec<f64>>,
    lmi: Option<Lmi<'a>>,
    lmi_coords: Vec<ComplexMatrix>,
}

impl<'a> Solver<'a> {
    fn new(p: &'a Problem) -> Self {
        let cs = coords(p.dim);
        let null_grads = p.nulls.iter().map(|(r, _)| project(r, &cs)).collect();
        let (vertex_grads, lmi) = match &p.alternatives {
            Alternatives::Vertices(vs) => (vs.iter().map(|v| project(v, &cs)).collect(), None),
            Alternatives::FreeFirst { first_dim, second } => (
                Vec::new(),
                Some(Lmi {
                    da: *first_dim,
                    db: second.nrows(),
                    t: second,
                }),
            ),
        };
        let lmi_coords = match &lmi {
            Some(l) => cs.iter().map(|c| l.reduce_coord(c)).collect(),
            None => Vec::new(),
        };
        Self {
            p,
            cs,
            null_grads,
            vertex_grads,
            lmi,
            lmi_coords,
        }
    }

    fn barrier_degree(&self) -> f64 {
        let alt = match &self.lmi {
            Some(l) => l.da,
            None => self.vertex_grads.len(),
        };
        (2 * self.p.dim + self.p.nulls.len() + alt) as f64
    }

    fn objective(&self, m: &ComplexMatrix) -> f64 {
        match (&self.p.alternatives, &self.lmi) {
            (_, Some(l)) => eigh(&l.reduce(m)).max(),
            (Alternatives::Vertices(vs), None) => vs
                .iter()
                .map(|v| trace_product(m, v).re)
                .fold(f64::NEG_INFINITY, f64::max),
            _ => unreachable!(),
        }
    }

    /// Barrier function value, or `None` outside the domain.
    fn phi(&self, t: f64, m: &ComplexMatrix, z: f64) -> Option<f64> {
        let e = eigh(m);
        if e.min() <= 0.0 || e.max() >= 1.0 {
            return None;
        }
        let mut val = t * z;
        for &v in &e.values {
            val -= math::ln(v) + math::ln(1.0 - v);
        }
        for (r, c) in &self.p.nulls {
            let a = trace_product(m, r).re - c;
            if a <= 0.0 {
                return None;
            }
            val -= math::ln(a);
        }
        match (&self.p.alternatives, &self.lmi) {
            (_, Some(l)) => {
                let s = ComplexMatrix::identity(l.da, l.da) * C64::new(z, 0.0) - l.reduce(m);
                let es = eigh(&s);
                if es.min() <= 0.0 {
                    return None;
                }
                for &v in &es.values {
                    val -= math::ln(v);
                }
            }
            (Alternatives::Vertices(vs), None) => {
                for v in vs {
                    let b = z - trace_product(m, v).re;
                    if b <= 0.0 {
                        return None;
                    }
                    val -= math::ln(b);
                }
            }
            _ => unreachable!(),
        }
        Some(val)
    }

    fn grad_hess(&self, t: f64, m: &ComplexMatrix, z: f64) -> (Vec<f64>, DMatrix<f64>) {
        let nm = self.cs.len();
        let n = nm + 1;
        let mut g = alloc::vec![0.0; n];
        let mut h = DMatrix::<f64>::zeros(n, n);
        g[nm] = t;

        let e = eigh(m);
        let a = e.map(|v| 1.0 / v);
        let b = e.map(|v| 1.0 / (1.0 - v));
        for (i, c) in self.cs.iter().enumerate() {
            g[i] += -component(c, a[(c.k, c.l)]) + component(c, b[(c.k, c.l)]);
        }
        add_logdet_hessian(&mut h, &a, &self.cs);
        add_logdet_hessian(&mut h, &b, &self.cs);

        for ((r, c), gv) in self.p.nulls.iter().zip(&self.null_grads) {
            let a = trace_product(m, r).re - c;
            for i in 0..nm {
                g[i] -= gv[i] / a;
                for j in 0..nm {
                    h[(i, j)] += gv[i] * gv[j] / (a * a);
                }
            }
        }

        match (&self.p.alternatives, &self.lmi) {
            (_, Some(l)) => {
                let s = ComplexMatrix::identity(l.da, l.da) * C64::new(z, 0.0) - l.reduce(m);
                let sinv = eigh(&s).map(|v| 1.0 / v);
                let gm = project(&kron(&sinv, l.t), &self.cs);
                for i in 0..nm {
                    g[i] += gm[i];
                }
                g[nm] -= sinv.trace().re;
                let ys: Vec<ComplexMatrix> = self.lmi_coords.iter().map(|k| &sinv * k * &sinv).collect();
                for i in 0..nm {
                    for j in i..nm {
                        let v = trace_product(&ys[i], &self.lmi_coords[j]).re;
                        h[(i, j)] += v;
                        if i != j {
                            h[(j, i)] += v;
                        }
                    }
                    let v = -trace_product(&ys[i], &ComplexMatrix::identity(l.da, l.da)).re;
                    h[(i, nm)] += v;
                    h[(nm, i)] += v;
                }
                h[(nm, nm)] += trace_product(&sinv, &sinv).re;
            }
            (Alternatives::Vertices(vs), None) => {
                for (v, hv) in vs.iter().zip(&self.vertex_grads) {
                    let bk = z - trace_product(m, v).re;
                    let b2 = bk * bk;
                    for i in 0..nm {
                        g[i] += hv[i] / bk;
                        for j in 0..nm {
                            h[(i, j)] += hv[i] * hv[j] / b2;
                        }
                        h[(i, nm)] -= hv[i] / b2;
                        h[(nm, i)] -= hv[i] / b2;
                    }
                    g[nm] -= 1.0 / bk;
                    h[(nm, nm)] += 1.0 / b2;
                }
            }
            _ => unreachable!(),
        }
        (g, h)
    }

    fn newton_direction(g: &[f64], h: DMatrix<f64>) -> Option<Vec<f64>> {
        let n = g.len();
        let rhs = nalgebra::DVector::from_iterator(n, g.iter().map(|v| -v));
        let scale = (0..n).map(|i| h[(i, i)]).fold(0.0, f64::max).max(1e-300);
        let mut shift = 0.0;
        for _ in 0..8 {
            let mut hs = h.clone();
            for i in 0..n {
                hs[(i, i)] += shift;
            }
            if let Some(ch) = hs.cholesky() {
                return Some(ch.solve(&rhs).iter().copied().collect());
            }
            shift = if shift == 0.0 { 1e-14 * scale } else { shift * 100.0 };
        }
        None
    }

    fn solve(&self) -> Result<Outcome> {
        let d = self.p.dim;
        let nm = self.cs.len();
        let c_max = self.p.nulls.iter().map(|(_, c)| *c).fold(0.0, f64::max);
        let alpha = 0.5 * (1.0 + c_max);
        let mut m = ComplexMatrix::identity(d, d) * C64::new(alpha, 0.0);
        let f0 = self.objective(&m);
        let mut z = 1.5 * f0 + 1e-6;
        let mut x = project(&m, &self.cs);

        let degree = self.barrier_degree();
        let mut t = degree / z.max(1e-12);
        let mut steps = 0usize;
        for _outer in 0..80 {
            // Damped Newton: the step 1/(1+lambda) keeps a self-concordant
            // barrier inside its domain without evaluating it.
            let mut stalled = true;
            for _inner in 0..100 {
                let (g, h) = self.grad_hess(t, &m, z);
                let dx = Self::newton_direction(&g, h).ok_or(Error::Solver("singular Newton system"))?;
                let dec: f64 = -g.iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
                if dec <= 1e-14 {
                    stalled = false;
                    break;
                }
                let lambda = math::sqrt(dec.max(0.0));
                let mut s = if lambda < 0.25 { 1.0 } else { 1.0 / (1.0 + lambda) };
                let mut moved = false;
                for _ in 0..60 {
                    let xn: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + s * b).collect();
                    let zn = z + s * dx[nm];
                    let mn = assemble(&xn, &self.cs, d);
                    if self.phi(t, &mn, zn).is_some() {
                        x = xn;
                        z = zn;
                        m = mn;
                        moved = true;
                        break;
                    }
                    s *= 0.5;
                }
                steps += 1;
                if !moved {
                    break;
                }
                if dec <= 1e-10 {
                    stalled = false;
                    break;
                }
            }
            let obj = self.objective(&m);
            if degree / t <= 1e-9 * obj.max(1e-300) || t > 1e18 || stalled {
                break;
            }
            t *= 8.0;
        }
        Ok(self.finish(m, z, t, steps))
    }

    fn finish(&self, m: ComplexMatrix, z: f64, t: f64, newton_steps: usize) -> Outcome {
        let objective = self.objective(&m);
        let mut mult_sum = 0.0;
        let mut w_null = DMatrix::zeros(self.p.dim, self.p.dim);
        for (r, c) in &self.p.nulls {
            let a = trace_product(&m, r).re - c;
            let mu = 1.0 / (t * a);
            mult_sum += mu * c;
            w_null += r * C64::new(mu, 0.0);
        }
        let (alt, weights, dual_state) = match (&self.p.alternatives, &self.lmi) {
            (_, Some(l)) => {
                let s = ComplexMatrix::identity(l.da, l.da) * C64::new(z, 0.0) - l.reduce(&m);
                let sinv = eigh(&s).map(|v| 1.0 / v);
                let sigma = &sinv / sinv.trace();
                (kron(&sigma, l.t), Vec::new(), Some(sigma))
            }
            (Alternatives::Vertices(vs), None) => {
                let raw: Vec<f64> = vs.iter().map(|v| 1.0 / (z - trace_product(&m, v).re)).collect();
                let total: f64 = raw.iter().sum();
                let w: Vec<f64> = raw.iter().map(|r| r / total).collect();
                let mut alt = DMatrix::zeros(self.p.dim, self.p.dim);
                for (v, wk) in vs.iter().zip(&w) {
                    alt += v * C64::new(*wk, 0.0);
                }
                (alt, w, None)
            }
            _ => unreachable!(),
        };
        // With one null constraint the exact Neyman-Pearson value at the
        // recovered alternative is a tight weak-duality bound.
        let lower_bound = match self.p.nulls.as_slice() {
            [(r, c)] => super::neyman_pearson::hypothesis_test_mat(r, &alt, 1.0 - c).test.type2_bound,
            _ => mult_sum - crate::qcore::negative_part_trace(&(alt - w_null)),
        };
        Outcome {
            m,
            objective,
            lower_bound,
            weights,
            dual_state,
            newton_steps,
        }
    }
}

pub(crate) fn solve(p: &Problem) -> Result<Outcome> {
    Solver::new(p).solve()
}
