//! Small dense complex matrices and the eigen-solvers built on them.
//!
//! Everything here is sized at compile time: the crate only ever needs
//! 2×2 blocks, 4×4 two-qubit operators, the 7×7 Gram matrix and the 8×8
//! real embedding of a 4×4 Hermitian matrix.

use std::f64::consts::PI;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense N×N complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMatrix<const N: usize>(pub [[C64; N]; N]);

pub type Matrix2 = SquareMatrix<2>;
pub type Matrix4 = SquareMatrix<4>;

impl<const N: usize> Default for SquareMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> SquareMatrix<N> {
    pub fn zeros() -> Self {
        Self([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [C64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// ‖M − M†‖_max.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// ‖M M† − I‖_max.
    pub fn unitary_deviation(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Self::identity())
    }

    /// `u · self · u†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        *u * *self * u.adjoint()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap();
            if a[pivot][col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..N {
                let f = a[row][col] / a[col][col];
                for k in col..N {
                    let v = a[col][k];
                    a[row][k] -= f * v;
                }
            }
        }
        det
    }

    /// Maximum absolute row sum.
    fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring with a truncated Taylor series.
    ///
    /// The argument is scaled to norm ≤ 1/2, where 24 Taylor terms are far
    /// below double precision round-off.
    pub fn exp(&self) -> Self {
        let norm = self.norm_inf();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let a = self.scale(C64::new(0.5f64.powi(squarings), 0.0));
        let mut sum = Self::identity();
        let mut term = Self::identity();
        for k in 1..=24 {
            term = (term * a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum + term;
            if term.max_abs() < 1e-20 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl<const N: usize> Index<(usize, usize)> for SquareMatrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for SquareMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for SquareMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for SquareMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for SquareMatrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Mul<C64> for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for SquareMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// `ab − ba`
pub fn commutator<const N: usize>(a: &SquareMatrix<N>, b: &SquareMatrix<N>) -> SquareMatrix<N> {
    *a * *b - *b * *a
}

/// Kronecker product with the first factor acting on the first qubit:
/// `(a ⊗ b)[2i+k][2j+l] = a[i][j]·b[k][l]`, basis order |00⟩,|01⟩,|10⟩,|11⟩.
pub fn kron2(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    Matrix4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// `[[a, 0], [0, b]]` as a 4×4 matrix.
pub fn block_diag(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m.0[i][j] = a.0[i][j];
            m.0[i + 2][j + 2] = b.0[i][j];
        }
    }
    m
}

/// Pauli matrix σ_μ for μ = 0 (identity), 1 (x), 2 (y), 3 (z).
pub fn pauli(mu: usize) -> Matrix2 {
    match mu {
        0 => Matrix2::identity(),
        1 => Matrix2::from_real([[0.0, 1.0], [1.0, 0.0]]),
        2 => SquareMatrix([[ZERO, -I], [I, ZERO]]),
        3 => Matrix2::from_real([[1.0, 0.0], [0.0, -1.0]]),
        _ => panic!("pauli index {mu} out of range"),
    }
}

/// Hermitian 2×2 matrix `[[a, b], [b̄, c]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    pub a: f64,
    pub c: f64,
    pub b: C64,
}

impl HermitianMatrix2 {
    pub fn new(a: f64, b: C64, c: f64) -> Self {
        Self { a, c, b }
    }

    pub fn matrix(&self) -> Matrix2 {
        SquareMatrix([
            [C64::new(self.a, 0.0), self.b],
            [self.b.conj(), C64::new(self.c, 0.0)],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b.norm_sqr()
    }
}

/// Dense 4×4 matrix that passed a Hermiticity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix4(Matrix4);

impl HermitianMatrix4 {
    pub fn new(m: Matrix4) -> Result<Self> {
        Self::with_tolerance(m, crate::Tolerances::default().structural)
    }

    pub fn with_tolerance(m: Matrix4, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = m.hermitian_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }
}

/// Element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Matrix2);

impl Unitary2 {
    pub fn new(m: Matrix2) -> Result<Self> {
        let tol = crate::Tolerances::default().structural;
        let dev = m.unitary_deviation().max((m.det() - ONE).norm());
        if !m.is_finite() || dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `exp(iψσ₃/2) · exp(iφσ₂/2)`
    pub fn from_angles(phi: f64, psi: f64) -> Self {
        let (s, c) = (phi / 2.0).sin_cos();
        let e = C64::from_polar(1.0, psi / 2.0);
        let ec = e.conj();
        Self(SquareMatrix([[e * c, e * s], [-ec * s, ec * c]]))
    }

    /// `exp(iθσ₃/2)`
    pub fn z_rotation(theta: f64) -> Self {
        let e = C64::from_polar(1.0, theta / 2.0);
        Self(Matrix2::diag([e, e.conj()]))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }
}

/// Closed-form spectral decomposition of a 2×2 Hermitian block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEigen {
    /// Larger eigenvalue.
    pub high: f64,
    /// Smaller eigenvalue.
    pub low: f64,
    /// First column is the eigenvector of `high`, second of `low`.
    pub rotation: Unitary2,
}

/// Eigen-decomposition `m = U·diag(high, low)·U†` with U ∈ SU(2).
///
/// U is always of the form `exp(iψσ₃/2)·exp(iφσ₂/2)` with φ ∈ [0, π] and
/// ψ ∈ [0, 2π). A scalar block gets U = I.
pub fn eig2(m: &HermitianMatrix2) -> BlockEigen {
    let mean = 0.5 * (m.a + m.c);
    let half = 0.5 * (m.a - m.c);
    let radius = half.hypot(m.b.norm());
    if radius == 0.0 {
        return BlockEigen {
            high: mean,
            low: mean,
            rotation: Unitary2::identity(),
        };
    }
    let phi = (2.0 * m.b.norm()).atan2(m.a - m.c);
    let psi = if m.b.norm() > 0.0 {
        wrap_angle((-m.b).arg())
    } else {
        0.0
    };
    BlockEigen {
        high: mean + radius,
        low: mean - radius,
        rotation: Unitary2::from_angles(phi, psi),
    }
}

/// Maps an angle into [0, 2π).
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y >= 2.0 * PI {
        0.0
    } else {
        y
    }
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted in descending order.
pub fn symmetric_eigenvalues<const N: usize>(m: &[[f64; N]; N]) -> Result<[f64; N]> {
    let mut a = *m;
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    let off_norm = |a: &[[f64; N]; N]| {
        let mut s = 0.0;
        for p in 0..N {
            for q in p + 1..N {
                s += a[p][q] * a[p][q];
            }
        }
        s.sqrt()
    };
    let threshold = 4.0 * f64::EPSILON * norm;
    let mut converged = norm == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // negligible against both diagonals: drop it
                if sweeps > 3
                    && a[p][p].abs() + 100.0 * apq.abs() == a[p][p].abs()
                    && a[q][q].abs() + 100.0 * apq.abs() == a[q][q].abs()
                {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..N {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_norm(&a),
        });
    }
    let mut ev = [0.0; N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i];
    }
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Eigenvalues of a 4×4 Hermitian matrix in descending order.
///
/// Works on the real symmetric embedding `[[Re, −Im], [Im, Re]]`, whose
/// spectrum is that of the input with every value doubled. No use is made
/// of any sparsity pattern, so this serves as the reference solver.
pub fn eig4(m: &HermitianMatrix4) -> Result<[f64; 4]> {
    let h = m.matrix();
    let mut big = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = h.0[i][j];
            big[i][j] = z.re;
            big[i + 4][j + 4] = z.re;
            big[i][j + 4] = -z.im;
            big[i + 4][j] = z.im;
        }
    }
    let ev = symmetric_eigenvalues(&big)?;
    Ok([
        0.5 * (ev[0] + ev[1]),
        0.5 * (ev[2] + ev[3]),
        0.5 * (ev[4] + ev[5]),
        0.5 * (ev[6] + ev[7]),
    ])
}
