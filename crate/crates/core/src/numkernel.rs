//! Dense complex linear algebra for the small (4x4 and 16x16) operators used
//! throughout the crate.
//!
//! Everything here is a pure function of its inputs. Operator overloads on
//! `&CMatrix` panic on shape mismatch (as ndarray and nalgebra do); the named
//! functions [`commutator`], [`matmul`] and [`kron`] return `Result` instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Absolute/relative tolerance pair used by every comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-10,
            rel_eps: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Self {
        Tolerance { abs_eps, rel_eps }
    }

    /// Same absolute and relative bound.
    pub fn uniform(eps: f64) -> Self {
        Tolerance::new(eps, eps)
    }

    /// Bound applied to a residual whose natural magnitude is `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale.abs()
    }

    pub fn admits(&self, residual: f64, scale: f64) -> bool {
        residual.is_finite() && residual <= self.bound(scale)
    }

    /// Elementwise comparison; symmetric in its arguments.
    pub fn approx_eq(&self, a: &CMatrix, b: &CMatrix) -> bool {
        if a.shape() != b.shape() {
            return false;
        }
        a.data
            .iter()
            .zip(&b.data)
            .all(|(x, y)| (x - y).norm() <= self.abs_eps + self.rel_eps * x.norm().max(y.norm()))
    }
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::Contract("non-finite matrix entry".into()));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Build from nested rows; all rows must have the same length.
    pub fn from_rows<const C: usize>(rows: &[[C64; C]]) -> Self {
        CMatrix::from_fn(rows.len(), C, |i, j| rows[i][j])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Result<CMatrix> {
        let n = cols.first().map(Vec::len).unwrap_or(0);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("ragged columns".into()));
        }
        CMatrix::new(n, cols.len(), (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect())
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Outer product `u v^dagger`.
    pub fn outer(u: &[C64], v: &[C64]) -> CMatrix {
        CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[(r, col)].norm().total_cmp(&a[(s, col)].norm()))
                .unwrap();
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::Contract("matrix is singular".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * aj;
                    inv[(r, j)] -= f * ij;
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), o.shape(), "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), o.shape(), "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, o.rows, "mul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..o.cols {
                    out.data[i * o.cols + j] += a * o.data[k * o.cols + j];
                }
            }
        }
        out
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, o: CMatrix) -> CMatrix {
        &self + &o
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, o: CMatrix) -> CMatrix {
        &self - &o
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, o: CMatrix) -> CMatrix {
        &self * &o
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, s: f64) -> CMatrix {
        self.scale_real(s)
    }
}

impl Mul<C64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, s: C64) -> CMatrix {
        self.scale(s)
    }
}

fn require_square_pair(a: &CMatrix, b: &CMatrix, what: &str) -> Result<()> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "{what} needs square matrices of equal size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Checked matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!("product of {:?} and {:?}", a.shape(), b.shape())));
    }
    Ok(a * b)
}

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    require_square_pair(a, b, "commutator")?;
    Ok(&(a * b) - &(b * a))
}

/// `AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    require_square_pair(a, b, "anticommutator")?;
    Ok(&(a * b) + &(b * a))
}

/// Kronecker product; the first factor carries the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = b.shape();
    CMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `sum_i coeffs[i] * ops[i]`, e.g. `a . S` for a three-vector `a`.
pub fn linear_combination(coeffs: &[f64], ops: &[CMatrix]) -> CMatrix {
    assert_eq!(coeffs.len(), ops.len());
    let (r, c) = ops[0].shape();
    let mut out = CMatrix::zeros(r, c);
    for (&k, op) in coeffs.iter().zip(ops) {
        if k != 0.0 {
            for (o, z) in out.data.iter_mut().zip(&op.data) {
                *o += z * k;
            }
        }
    }
    out
}

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series. The scaled matrix has 1-norm below 0.5.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("expm of {:?}", a.shape())));
    }
    let n = a.rows;
    let norm = a.norm1();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) >= 0.5 {
        squarings += 1;
    }
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= f64::EPSILON * 1e-2 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.is_finite() {
        return Err(Error::Contract("matrix exponential overflowed".into()));
    }
    Ok(sum)
}

/// Conjugate inner product `<u|v>`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector along `v`, or `None` if `v` vanishes.
pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = vector_norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|z| z / n).collect())
}

/// Multiply `v` by a global phase so that its first non-negligible component
/// is real and positive.
pub fn fix_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12 * scale).copied() {
        let phase = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// One eigenvalue level after clustering numerically equal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues (ascending) with orthonormal, phase-fixed eigenvectors stored
/// as columns, plus the clustered levels.
#[derive(Debug, Clone)]
pub struct SpinSpectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub levels: Vec<Level>,
    /// Column ranges of `vectors` belonging to each level.
    level_columns: Vec<std::ops::Range<usize>>,
}

impl SpinSpectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Orthogonal projector onto the eigenspace of `levels[level]`.
    pub fn projector(&self, level: usize) -> CMatrix {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        for k in self.level_columns[level].clone() {
            let v = self.vectors.column(k);
            p = &p + &CMatrix::outer(&v, &v);
        }
        p
    }

    /// Index of the level closest to `value`.
    pub fn level_near(&self, value: f64) -> usize {
        (0..self.levels.len())
            .min_by(|&a, &b| {
                (self.levels[a].value - value)
                    .abs()
                    .total_cmp(&(self.levels[b].value - value).abs())
            })
            .unwrap_or(0)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Eigenvalues are ascending; eigenvalues closer than `1e-8 * ||A||_F` are
/// grouped into one [`Level`], and inside a level the eigenvectors are
/// ordered lexicographically after phase fixing.
pub fn hermitian_eigensystem(a: &CMatrix, tol: Tolerance) -> Result<SpinSpectrum> {
    if !a.is_square() {
        return Err(Error::Shape(format!("eigensystem of {:?}", a.shape())));
    }
    let defect = a.hermiticity_defect();
    if !tol.admits(defect, a.max_abs()) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let n = a.rows;
    // Work on the exactly Hermitian part.
    let mut m = CMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let fro = m.frobenius_norm();

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * fro || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut values: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut columns: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut c = v.column(k);
            fix_phase(&mut c);
            c
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let cluster_eps = (1e-8 * fro).max(f64::MIN_POSITIVE);

    // Chain clustering over the sorted values.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(g) if values[k] - values[*g.last().unwrap()] <= cluster_eps => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let mut sorted_vals = Vec::with_capacity(n);
    let mut sorted_cols = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(groups.len());
    let mut level_columns = Vec::with_capacity(groups.len());
    for mut g in groups {
        g.sort_by(|&x, &y| lexicographic(&columns[x], &columns[y]));
        let start = sorted_vals.len();
        let mean = g.iter().map(|&k| values[k]).sum::<f64>() / g.len() as f64;
        for &k in &g {
            sorted_vals.push(values[k]);
            sorted_cols.push(std::mem::take(&mut columns[k]));
        }
        levels.push(Level {
            value: mean,
            multiplicity: g.len(),
        });
        level_columns.push(start..sorted_vals.len());
    }
    values = sorted_vals;

    Ok(SpinSpectrum {
        values,
        vectors: CMatrix::from_columns(&sorted_cols)?,
        levels,
        level_columns,
    })
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Zero `m[(p,q)]` with the unitary `U = D R`, where `D` removes the phase
/// of the pivot and `R` is a real Givens rotation.
fn jacobi_rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{i phi}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = m.rows;
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * u_pp + mkq * u_qp;
        m[(k, q)] = mkp * u_pq + mkq * u_qq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// The 2x2 Pauli matrices.
pub fn pauli() -> [CMatrix; 3] {
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        CMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        CMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
        CMatrix::from_rows(&[[ONE, ZERO], [ZERO, c(-1.0, 0.0)]]),
    ]
}
