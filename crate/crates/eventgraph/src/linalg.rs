//! Dense complex linear algebra for small Hermitian problems.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::Error;

pub type C64 = Complex64;

pub const TOL_HERM: f64 = 1e-9;
pub const TOL_PSD: f64 = 1e-9;
pub const TOL_TRACE: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let cl = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, cl);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cl, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Self {
        let rr: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        Self::from_rows(&rr)
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        m
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        assert_eq!(self.rows, self.cols, "matrix is not square");
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_mul(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut s = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                s += self[(i, k)] * other[(k, i)];
            }
        }
        s
    }

    /// Frobenius inner product `Tr(self† other)`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.max_abs().max(1.0)
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let a = self.adjoint();
        (self + &a).scale_re(0.5)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, cl) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Self::zeros(r, cl);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    /// Row-major `[[re, im], ...]` nested arrays.
    pub fn to_json(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| [self[(i, j)].re, self[(i, j)].im]).collect()).collect()
    }

    pub fn from_json(rows: &[Vec<[f64; 2]>]) -> Result<Self, Error> {
        let cl = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cl) {
            return Err(Error::Param("ragged matrix".into()));
        }
        let rr: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|p| c(p[0], p[1])).collect()).collect();
        Ok(Self::from_rows(&rr))
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut m = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    m.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CMat> for &'a CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues ascending with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Householder tridiagonalization followed by implicit QL with shifts.
pub fn hermitian_eig(m: &CMat) -> Result<Eigen, Error> {
    if !m.is_square() {
        return Err(Error::Param(format!("matrix is {}x{}", m.rows, m.cols)));
    }
    if !m.all_finite() {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    if !m.is_hermitian(TOL_HERM) {
        return Err(Error::Param(format!("matrix is not Hermitian (defect {:.3e})", m.hermiticity_defect())));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: CMat::zeros(0, 0) });
    }
    let mut a = m.hermitian_part();
    let mut q = CMat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm = vnorm(&x);
        if norm < 1e-300 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { c(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let v2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v2 < 1e-300 {
            continue;
        }
        let beta = 2.0 / v2;
        // a <- H a
        for j in 0..n {
            let w: C64 = (0..v.len()).map(|t| v[t].conj() * a[(k + 1 + t, j)]).sum();
            for t in 0..v.len() {
                a[(k + 1 + t, j)] -= v[t] * w * beta;
            }
        }
        // a <- a H, q <- q H
        for mat in [&mut a, &mut q] {
            for i in 0..n {
                let w: C64 = (0..v.len()).map(|t| mat[(i, k + 1 + t)] * v[t]).sum();
                for t in 0..v.len() {
                    mat[(i, k + 1 + t)] -= w * v[t].conj() * beta;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = c(1.0, 0.0);
    for col in 0..n {
        if col > 0 {
            let sub = a[(col, col - 1)];
            let r = sub.norm();
            e[col - 1] = r;
            if r > 0.0 {
                phase *= sub / r;
            }
        }
        for i in 0..n {
            q[(i, col)] *= phase;
        }
    }
    tql_implicit(&mut d, &mut e, &mut q)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap().then(i.cmp(&j)));
    let mut vectors = CMat::zeros(n, n);
    for (newc, &oldc) in idx.iter().enumerate() {
        let mut v = q.col(oldc);
        fix_phase(&mut v);
        for i in 0..n {
            vectors[(i, newc)] = v[i];
        }
    }
    Ok(Eigen { values: idx.iter().map(|&i| d[i]).collect(), vectors })
}

/// Rotates a vector so its largest component (first on ties) is real positive.
pub fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut bn = -1.0;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > bn + 1e-12 {
            bn = x.norm();
            best = i;
        }
    }
    if bn > 0.0 {
        let p = v[best].conj() / v[best].norm();
        for x in v.iter_mut() {
            *x *= p;
        }
    }
}

fn tql_implicit(d: &mut [f64], e: &mut [f64], z: &mut CMat) -> Result<(), Error> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Numeric("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut cc, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = cc * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                cc = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cc * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cc * r - b;
                for k in 0..n {
                    let fz = z[(k, i + 1)];
                    z[(k, i + 1)] = z[(k, i)] * s + fz * cc;
                    z[(k, i)] = z[(k, i)] * cc - fz * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

pub fn eigenvalues(m: &CMat) -> Result<Vec<f64>, Error> {
    Ok(hermitian_eig(m)?.values)
}

pub fn min_eigenvalue(m: &CMat) -> Result<f64, Error> {
    Ok(eigenvalues(m)?[0])
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn operator_norm(m: &CMat) -> Result<f64, Error> {
    Ok(eigenvalues(m)?.iter().fold(0.0f64, |a, x| a.max(x.abs())))
}

/// Minimum eigenvalue at least `-tol * max(1, |M|_max)`.
pub fn is_psd(m: &CMat, tol: f64) -> Result<bool, Error> {
    let scale = m.max_abs().max(1.0);
    Ok(min_eigenvalue(m)? >= -tol * scale)
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &CMat) -> C64 {
    let n = m.dim();
    let mut a = m.clone();
    let mut det = c(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().partial_cmp(&a[(j, k)].norm()).unwrap()).unwrap();
        if a[(p, k)].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            det = -det;
        }
        det *= a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    det
}

/// Every principal minor nonnegative (real part) within `tol`.
pub fn sylvester_psd(m: &CMat, tol: f64) -> bool {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut sub = CMat::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                sub[(a, b)] = m[(i, j)];
            }
        }
        if det(&sub).re < -tol * scale.powi(idx.len() as i32) {
            return false;
        }
    }
    true
}

/// Pivoted Cholesky factor: `m ≈ l l†` with `l` of shape `n × rank`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    pub l: CMat,
    /// Pivot order: step `k` eliminated row `pivots[k]`.
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Cholesky {
    /// Realizing vectors `psi_i[k] = conj(l[i][k])`, so `<psi_i|psi_j> = m[i][j]`.
    pub fn vectors(&self) -> Vec<Vec<C64>> {
        (0..self.l.rows()).map(|i| self.l.row(i).iter().map(|x| x.conj()).collect()).collect()
    }
}

/// Outer-product Cholesky with diagonal pivoting; handles rank deficiency.
pub fn cholesky_psd(m: &CMat, tol: f64) -> Result<Cholesky, Error> {
    let n = m.dim();
    if !m.is_hermitian(TOL_HERM) {
        return Err(Error::Param("matrix is not Hermitian".into()));
    }
    let scale = m.max_abs().max(1.0);
    let mut s = m.hermitian_part();
    let mut done = vec![false; n];
    let mut cols: Vec<Vec<C64>> = Vec::new();
    let mut pivots = Vec::new();
    for _ in 0..n {
        let mut p = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            if !done[i] && s[(i, i)].re > best {
                best = s[(i, i)].re;
                p = i;
            }
        }
        if best <= tol * scale {
            break;
        }
        let piv = best.sqrt();
        let col: Vec<C64> = (0..n).map(|i| if done[i] { c(0.0, 0.0) } else { s[(i, p)] / piv }).collect();
        for i in 0..n {
            for j in 0..n {
                if !done[i] && !done[j] {
                    let t = col[i] * col[j].conj();
                    s[(i, j)] -= t;
                }
            }
        }
        done[p] = true;
        pivots.push(p);
        cols.push(col);
    }
    for i in 0..n {
        if done[i] {
            continue;
        }
        for j in 0..n {
            if done[j] {
                continue;
            }
            let bound = if i == j { tol * scale } else { tol.sqrt() * scale };
            if (i == j && s[(i, i)].re < -bound) || (i != j && s[(i, j)].norm() > bound) {
                return Err(Error::Numeric("matrix is not positive semidefinite".into()));
            }
        }
    }
    let rank = cols.len();
    let mut l = CMat::zeros(n, rank);
    for (k, col) in cols.iter().enumerate() {
        for i in 0..n {
            l[(i, k)] = col[i];
        }
    }
    Ok(Cholesky { l, pivots, rank })
}

/// Gram matrix `G[i][j] = <v_i|v_j>`.
pub fn gram(vs: &[Vec<C64>]) -> CMat {
    let n = vs.len();
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = vdot(&vs[i], &vs[j]);
        }
    }
    g
}

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self, Error> {
        let nrm = vnorm(&amps);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::Numeric("zero or non-finite state vector".into()));
        }
        if (nrm - 1.0).abs() > 1e-12 {
            return Err(Error::Param(format!("state norm {nrm} != 1")));
        }
        Ok(Self { amps })
    }

    /// Normalizes the input.
    pub fn normalized(amps: Vec<C64>) -> Result<Self, Error> {
        let nrm = vnorm(&amps);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::Numeric("zero or non-finite state vector".into()));
        }
        Ok(Self { amps: amps.into_iter().map(|x| x / nrm).collect() })
    }

    pub fn from_real(x: &[f64]) -> Result<Self, Error> {
        Self::normalized(x.iter().map(|&r| c(r, 0.0)).collect())
    }

    pub fn basis(d: usize, k: usize) -> Self {
        let mut a = vec![c(0.0, 0.0); d];
        a[k] = c(1.0, 0.0);
        Self { amps: a }
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        vdot(&self.amps, &other.amps)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix(CMat::outer(&self.amps))
    }
}

/// Hermitian PSD trace-one matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self, Error> {
        if !m.is_square() {
            return Err(Error::Param("density matrix must be square".into()));
        }
        if !m.is_hermitian(TOL_HERM) {
            return Err(Error::Param("density matrix must be Hermitian".into()));
        }
        let t = m.trace();
        if (t.re - 1.0).abs() > TOL_TRACE || t.im.abs() > TOL_TRACE {
            return Err(Error::Param(format!("trace {t} != 1")));
        }
        if !is_psd(&m, TOL_PSD)? {
            return Err(Error::Param("density matrix must be PSD".into()));
        }
        Ok(Self(m))
    }

    /// Wraps without validation; callers guarantee the invariants.
    pub fn new_unchecked(m: CMat) -> Self {
        Self(m)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(CMat::identity(d).scale_re(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_mul(&self.0).re
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vec(d: usize, r: &mut ChaCha8Rng) -> Vec<C64> {
    (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(r);
            let im: f64 = StandardNormal.sample(r);
            c(re, im)
        })
        .collect()
}

/// Haar-random pure state from normalized complex Gaussians.
pub fn random_pure_state_rng(d: usize, r: &mut ChaCha8Rng) -> PureState {
    loop {
        if let Ok(s) = PureState::normalized(gaussian_vec(d, r)) {
            return s;
        }
    }
}

pub fn random_pure_state(d: usize, seed: u64) -> PureState {
    random_pure_state_rng(d, &mut rng(seed))
}

/// Haar unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary_rng(d: usize, r: &mut ChaCha8Rng) -> CMat {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vec(d, r);
        for u in &cols {
            let p = vdot(u, &v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let nrm = vnorm(&v);
        if nrm > 1e-10 {
            cols.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    let mut u = CMat::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..d {
            u[(i, j)] = col[i];
        }
    }
    u
}

/// `U Λ U†` with Haar `U` and `Λ` uniform on the simplex.
pub fn random_density_rng(d: usize, r: &mut ChaCha8Rng) -> DensityMatrix {
    let u = random_unitary_rng(d, r);
    let w: Vec<f64> = (0..d).map(|_| Exp1.sample(r)).collect();
    let s: f64 = w.iter().sum();
    let lam = CMat::diag(&w.iter().map(|x| x / s).collect::<Vec<_>>());
    DensityMatrix(&(&u * &lam) * &u.adjoint()).hermitian_clean()
}

pub fn random_density(d: usize, seed: u64) -> DensityMatrix {
    random_density_rng(d, &mut rng(seed))
}

impl DensityMatrix {
    fn hermitian_clean(self) -> Self {
        Self(self.0.hermitian_part())
    }
}

/// Top eigenvector; ties broken toward the vector whose leading nonzero
/// component has the lowest index.
pub fn top_eigvec(m: &CMat) -> Result<(f64, Vec<C64>), Error> {
    let e = hermitian_eig(m)?;
    let n = e.values.len();
    let lmax = e.values[n - 1];
    let tie = 1e-12 * m.max_abs().max(1.0);
    let lead = |v: &[C64]| v.iter().position(|x| x.norm() > 1e-9).unwrap_or(usize::MAX);
    let mut best = n - 1;
    let mut best_lead = lead(&e.vectors.col(n - 1));
    for k in (0..n - 1).rev() {
        if lmax - e.values[k] > tie {
            break;
        }
        let l = lead(&e.vectors.col(k));
        if l <= best_lead {
            best = k;
            best_lead = l;
        }
    }
    Ok((e.values[best], e.vectors.col(best)))
}

/// Rank-one maximizer of `Tr(X M)` over density matrices.
pub fn top_eig_projector(m: &CMat) -> Result<DensityMatrix, Error> {
    let (_, v) = top_eigvec(m)?;
    Ok(DensityMatrix(CMat::outer(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_z() -> CMat {
        CMat::from_real(&[vec![1.0, 0.0], vec![0.0, -1.0]])
    }

    fn random_hermitian(d: usize, seed: u64) -> CMat {
        let mut r = rng(seed);
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let re: f64 = StandardNormal.sample(&mut r);
                let im: f64 = StandardNormal.sample(&mut r);
                m[(i, j)] = c(re, im);
            }
        }
        m.hermitian_part()
    }

    fn check_decomposition(m: &CMat) {
        let e = hermitian_eig(m).unwrap();
        let v = &e.vectors;
        let lam = CMat::diag(&e.values);
        let scale = m.max_abs().max(1.0);
        assert!((&(m * v) - &(v * &lam)).max_abs() <= 1e-9 * scale);
        assert!((&(&v.adjoint() * v) - &CMat::identity(m.dim())).max_abs() <= 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pauli_and_identity() {
        assert_eq!(eigenvalues(&pauli_z()).unwrap(), vec![-1.0, 1.0]);
        let e = eigenvalues(&CMat::identity(4)).unwrap();
        assert!(e.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn random_decompositions() {
        for d in 1..=12 {
            for s in 0..5 {
                check_decomposition(&random_hermitian(d, 100 * d as u64 + s));
            }
        }
        check_decomposition(&random_hermitian(40, 9));
    }

    #[test]
    fn degenerate_spectrum() {
        let u = random_unitary_rng(5, &mut rng(3));
        let m = &(&u * &CMat::diag(&[1.0, 1.0, 1.0, -2.0, -2.0])) * &u.adjoint();
        check_decomposition(&m);
        let e = eigenvalues(&m).unwrap();
        assert!((e[0] + 2.0).abs() < 1e-12 && (e[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_projector_eigenvalues() {
        let (th, al, ph) = (0.4f64, 1.1f64, 2.3f64);
        let s0 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let s1 = vec![c(th.cos(), 0.0), c(th.sin(), 0.0)];
        let s2 = vec![c(al.cos(), 0.0), C64::from_polar(al.sin(), ph)];
        let m = &(&CMat::outer(&s0) + &CMat::outer(&s1)) + &CMat::outer(&s2);
        let root = (2.0 * (2.0 * al).sin() * (2.0 * th).sin() * ph.cos()
            + 4.0 * (2.0 * al).cos() * th.cos().powi(2)
            + 2.0 * (2.0 * th).cos()
            + 3.0)
            .sqrt();
        let e = eigenvalues(&m).unwrap();
        assert!((e[1] - (1.5 + 0.5 * root)).abs() < 1e-12);
        assert!((e[0] - (1.5 - 0.5 * root)).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMat::from_real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(hermitian_eig(&m).is_err());
    }

    #[test]
    fn psd_examples() {
        let m = CMat::from_real(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 5.0], vec![3.0, 5.0, 6.0]]);
        assert!(!is_psd(&m, TOL_PSD).unwrap());
        assert!(!sylvester_psd(&m, TOL_PSD));
        let h = CMat::from_real(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]);
        assert!((det(&h).re + 1.0).abs() < 1e-12);
        assert!(!is_psd(&h, TOL_PSD).unwrap());
        let vs: Vec<_> = (0..4).map(|s| random_pure_state(3, s).amps().to_vec()).collect();
        assert!(is_psd(&gram(&vs), TOL_PSD).unwrap());
    }

    #[test]
    fn cholesky_identity_and_rank_one() {
        let ch = cholesky_psd(&CMat::identity(3), 1e-12).unwrap();
        assert_eq!(ch.rank, 3);
        assert!((&ch.l - &CMat::identity(3)).max_abs() < 1e-15);
        let v = random_pure_state(4, 11).amps().to_vec();
        let m = CMat::outer(&v);
        let ch = cholesky_psd(&m, 1e-10).unwrap();
        assert_eq!(ch.rank, 1);
        let col = ch.l.col(0);
        let ratio = col[0] / v[0];
        for i in 0..4 {
            assert!((col[i] - ratio * v[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn cholesky_reconstructs_gram() {
        for s in 0..20 {
            let vs: Vec<_> = (0..5).map(|k| random_pure_state(3, 1000 * s + k).amps().to_vec()).collect();
            let g = gram(&vs);
            let ch = cholesky_psd(&g, 1e-12).unwrap();
            assert!(ch.rank <= 3);
            assert!((&gram(&ch.vectors()) - &g).max_abs() < 1e-8);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let h = CMat::from_real(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]);
        assert!(cholesky_psd(&h, 1e-10).is_err());
    }

    #[test]
    fn top_projectors() {
        let z = pauli_z();
        let p = top_eig_projector(&z).unwrap();
        assert!((p.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        let p = top_eig_projector(&z.scale_re(-1.0)).unwrap();
        assert!((p.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        let plus = vec![c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)];
        let p = top_eig_projector(&CMat::outer(&plus)).unwrap();
        assert!((p.matrix() - &CMat::outer(&plus)).max_abs() < 1e-12);
        let p = top_eig_projector(&CMat::identity(3)).unwrap();
        assert!((p.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_states_deterministic() {
        assert_eq!(random_pure_state(4, 5), random_pure_state(4, 5));
        assert_eq!(random_density(3, 5), random_density(3, 5));
        let s = random_pure_state(1, 9);
        assert!((s.amps()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_density_valid() {
        for s in 0..50 {
            let rho = random_density(4, s);
            DensityMatrix::new(rho.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn random_density_mean_is_maximally_mixed() {
        let (d, n) = (3, 10_000);
        let mut r = rng(77);
        let mut acc = CMat::zeros(d, d);
        let mut sq = vec![0.0; d * d];
        for _ in 0..n {
            let rho = random_density_rng(d, &mut r);
            acc = &acc + rho.matrix();
            for (k, x) in rho.matrix().data().iter().enumerate() {
                sq[k] += x.norm_sqr();
            }
        }
        let mean = acc.scale_re(1.0 / n as f64);
        for i in 0..d {
            for j in 0..d {
                let k = i * d + j;
                let m = mean[(i, j)];
                let var = sq[k] / n as f64 - m.norm_sqr();
                let sigma = (var / n as f64).sqrt();
                let target = if i == j { 1.0 / d as f64 } else { 0.0 };
                assert!((m - c(target, 0.0)).norm() <= 3.0 * sigma + 1e-12, "entry ({i},{j})");
            }
        }
    }
}
