//! Orbits of X-states under the X-structure preserving group G_X.
//!
//! The orbit through ρ has tangent vectors `t_k = [α_k, ρ]`. Their Gram
//! matrix has spectrum {μ₁, μ₁, μ₂, μ₂, 0, 0, 0}, where μ₁ and μ₂ are four
//! times the squared eigen-gaps of the upper and lower blocks. A vanishing
//! gap enlarges the isotropy group and drops the orbit dimension by two.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{block_diag, commutator, eig2, symmetric_eigenvalues, wrap_angle, Matrix4, Unitary2};
use crate::su4::{permutation_pi, ALPHA_X};
use crate::xstate::NON_X_POSITIONS;
use crate::{Error, HVector, Result, Tolerances, XState};
use num_complex::Complex64 as C64;

/// `[α_k, ρ]` for the seven α_X generators in ascending index order.
pub fn tangent_vectors(x: &XState) -> [Matrix4; 7] {
    let rho = x.to_dense();
    ALPHA_X.map(|g| commutator(&g.matrix(), &rho))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix(pub [[f64; 7]; 7]);

impl GramMatrix {
    /// Descending eigenvalues.
    pub fn eigenvalues(&self) -> Result<[f64; 7]> {
        symmetric_eigenvalues(&self.0)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        Ok(self.eigenvalues()?.iter().filter(|&&e| e > threshold).count())
    }
}

/// `G_kl = 4·Tr(t_k t_l)`.
///
/// The tangent vectors are Hermitian, so the trace form is already positive
/// semi-definite. The factor 4 makes the nonzero eigenvalues equal μ₁, μ₂.
pub fn gram(x: &XState) -> GramMatrix {
    let t = tangent_vectors(x);
    let mut g = [[0.0; 7]; 7];
    for k in 0..7 {
        for l in k..7 {
            let v = 4.0 * (t[k] * t[l]).trace().re;
            g[k][l] = v;
            g[l][k] = v;
        }
    }
    GramMatrix(g)
}

/// `μ₁ = (h₃+h₆)² + (h₈+h₁₀)² + (h₇+h₁₁)²`,
/// `μ₂ = (h₃−h₆)² + (h₈−h₁₀)² + (h₇−h₁₁)²`.
pub fn mu_values(h: &HVector) -> (f64, f64) {
    let mu1 = (h.h3 + h.h6).powi(2) + (h.h8 + h.h10).powi(2) + (h.h7 + h.h11).powi(2);
    let mu2 = (h.h3 - h.h6).powi(2) + (h.h8 - h.h10).powi(2) + (h.h7 - h.h11).powi(2);
    (mu1, mu2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitKind {
    Generic4D,
    /// r₁ = r₂
    DegenerateUpper2D,
    /// r₃ = r₄
    DegenerateLower2D,
    /// Both blocks scalar. Besides I/4 this covers the whole segment
    /// `(I + 2i·h₁₅·λ₁₅)/4`, each point of which is a fixed point of G_X.
    MaximallyMixed0D,
}

impl OrbitKind {
    pub fn isotropy_dim(self) -> usize {
        match self {
            OrbitKind::Generic4D => 3,
            OrbitKind::DegenerateUpper2D | OrbitKind::DegenerateLower2D => 5,
            OrbitKind::MaximallyMixed0D => 7,
        }
    }

    pub fn orbit_dim(self) -> usize {
        7 - self.isotropy_dim()
    }

    fn from_degeneracy(upper: bool, lower: bool) -> Self {
        match (upper, lower) {
            (false, false) => OrbitKind::Generic4D,
            (true, false) => OrbitKind::DegenerateUpper2D,
            (false, true) => OrbitKind::DegenerateLower2D,
            (true, true) => OrbitKind::MaximallyMixed0D,
        }
    }
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    pub isotropy_dim: usize,
    pub mu1: f64,
    pub mu2: f64,
    /// Some eigen-gap sits near the degeneracy threshold.
    pub marginal: bool,
}

impl OrbitClass {
    fn from_gaps(gap1: f64, gap2: f64, tol: &Tolerances) -> Self {
        let kind = OrbitKind::from_degeneracy(gap1 <= tol.band, gap2 <= tol.band);
        let near = |g: f64| g > tol.structural && g <= 2.0 * tol.band;
        Self {
            kind,
            isotropy_dim: kind.isotropy_dim(),
            mu1: 4.0 * gap1 * gap1,
            mu2: 4.0 * gap2 * gap2,
            marginal: near(gap1) || near(gap2),
        }
    }

    pub fn orbit_dim(&self) -> usize {
        self.kind.orbit_dim()
    }
}

/// Classifies by which of μ₁, μ₂ vanish. The threshold applies to the
/// eigen-gap √μ/2, so this agrees with [`classify_by_block_spectra`].
pub fn classify_orbit(x: &XState, tol: &Tolerances) -> OrbitClass {
    let (mu1, mu2) = mu_values(&x.h_coefficients());
    let mut c = OrbitClass::from_gaps(mu1.sqrt() / 2.0, mu2.sqrt() / 2.0, tol);
    c.mu1 = mu1;
    c.mu2 = mu2;
    c
}

/// Classifies by equal eigenvalues within each block.
pub fn classify_by_block_spectra(x: &XState, tol: &Tolerances) -> OrbitClass {
    let (upper, lower) = x.block_form();
    let (e1, e2) = (eig2(&upper), eig2(&lower));
    OrbitClass::from_gaps(e1.high - e1.low, e2.high - e2.low, tol)
}

/// A point of the partially ordered simplex: Σrᵢ = 1, r₁ ≥ r₂ ≥ 0, r₃ ≥ r₄ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderedSpectrum {
    r: [f64; 4],
}

impl OrderedSpectrum {
    pub fn new(r: [f64; 4]) -> Result<Self> {
        Self::with_tolerances(r, &Tolerances::default())
    }

    pub fn with_tolerances(r: [f64; 4], tol: &Tolerances) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let s = tol.structural;
        let sum: f64 = r.iter().sum();
        if (sum - 1.0).abs() > s {
            return Err(Error::Domain(format!("spectrum sums to {sum}")));
        }
        if r.iter().any(|&x| x < -s) {
            return Err(Error::Domain(format!("negative eigenvalue in {r:?}")));
        }
        if r[1] > r[0] + s || r[3] > r[2] + s {
            return Err(Error::Domain(format!("pairs not descending in {r:?}")));
        }
        Ok(Self { r })
    }

    pub fn r1(&self) -> f64 {
        self.r[0]
    }
    pub fn r2(&self) -> f64 {
        self.r[1]
    }
    pub fn r3(&self) -> f64 {
        self.r[2]
    }
    pub fn r4(&self) -> f64 {
        self.r[3]
    }

    pub fn to_array(&self) -> [f64; 4] {
        self.r
    }

    pub fn upper_gap(&self) -> f64 {
        self.r[0] - self.r[1]
    }

    pub fn lower_gap(&self) -> f64 {
        self.r[2] - self.r[3]
    }
}

/// Angles of `W = P_π · blockdiag(e^{iω}U, e^{−iω}V) · P_π` with
/// `U = e^{iψ₁σ₃/2}e^{iφ₁σ₂/2}` and `V = e^{iψ₂σ₃/2}e^{iφ₂σ₂/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiagonalizingFrame {
    pub phi1: f64,
    pub psi1: f64,
    pub phi2: f64,
    pub psi2: f64,
    pub omega: f64,
}

impl DiagonalizingFrame {
    pub fn u(&self) -> Unitary2 {
        Unitary2::from_angles(self.phi1, self.psi1)
    }

    pub fn v(&self) -> Unitary2 {
        Unitary2::from_angles(self.phi2, self.psi2)
    }

    pub fn w(&self) -> Matrix4 {
        let e = C64::from_polar(1.0, self.omega);
        let u = *self.u().matrix() * e;
        let v = *self.v().matrix() * e.conj();
        block_diag(&u, &v).conjugate_by(&permutation_pi())
    }
}

/// Recovers (φ, ψ) with φ ∈ [0, π], ψ ∈ [0, 2π) from U = e^{iψσ₃/2}e^{iφσ₂/2}.
///
/// U and −U give the same angles; both conjugate a block identically.
pub fn angles_from_unitary(u: &Unitary2) -> (f64, f64) {
    let m = u.matrix();
    let (u11, u12, u21) = (m[(0, 0)], m[(0, 1)], m[(1, 0)]);
    let phi = 2.0 * u21.norm().atan2(u11.norm());
    let pivot = if u11.norm() >= u12.norm() { u11 } else { u12 };
    (phi, wrap_angle(2.0 * pivot.arg()))
}

/// Blockwise spectral decomposition `ρ = W·D·W†`.
///
/// Each block is diagonalized with its larger eigenvalue first. A block whose
/// eigen-gap is within the structural tolerance gets the canonical frame
/// φ = ψ = 0. ω is pure gauge and set to 0.
pub fn diagonalize(x: &XState, tol: &Tolerances) -> Result<(OrderedSpectrum, DiagonalizingFrame)> {
    let (upper, lower) = x.block_form();
    let (e1, e2) = (eig2(&upper), eig2(&lower));
    let angles = |e: &crate::linalg::BlockEigen| {
        if e.high - e.low <= tol.structural {
            (0.0, 0.0)
        } else {
            angles_from_unitary(&e.rotation)
        }
    };
    let ((phi1, psi1), (phi2, psi2)) = (angles(&e1), angles(&e2));
    let r = OrderedSpectrum::with_tolerances([e1.high, e1.low, e2.high, e2.low], tol)?;
    Ok((r, DiagonalizingFrame { phi1, psi1, phi2, psi2, omega: 0.0 }))
}

/// `P_π·(diag(r₁,r₂) ⊕ diag(r₃,r₄))·P_π = diag(r₁, r₄, r₃, r₂)`.
pub fn spectrum_matrix(r: &OrderedSpectrum) -> Matrix4 {
    let [r1, r2, r3, r4] = r.to_array();
    Matrix4::diag([r1, r4, r3, r2].map(|v| C64::new(v, 0.0)))
}

/// The X-state `W·D·W†`.
pub fn reconstruct(r: &OrderedSpectrum, frame: &DiagonalizingFrame, tol: &Tolerances) -> Result<XState> {
    let u = frame.u();
    let v = frame.v();
    let up = blockwise(u.matrix(), r.r1(), r.r2());
    let lo = blockwise(v.matrix(), r.r3(), r.r4());
    XState::with_tolerances([up.0, lo.1, lo.0, up.1], up.2, lo.2.conj(), tol)
}

/// Diagonal entries and top-right entry of `U·diag(hi, lo)·U†`.
fn blockwise(u: &crate::linalg::Matrix2, hi: f64, lo: f64) -> (f64, f64, C64) {
    let (a, b) = (u[(0, 0)], u[(0, 1)]);
    let (c, d) = (u[(1, 0)], u[(1, 1)]);
    let top = hi * a.norm_sqr() + lo * b.norm_sqr();
    let bottom = hi * c.norm_sqr() + lo * d.norm_sqr();
    let off = a * c.conj() * hi + b * d.conj() * lo;
    (top, bottom, off)
}

/// How far `w` is from the block-phase form `P_π·blockdiag(A, B)·P_π` with
/// A, B of shape `[[a, b], [−b̄, ā]]`, |a|² + |b|² = 1.
pub fn block_phase_deviation(w: &Matrix4) -> f64 {
    let mut dev: f64 = NON_X_POSITIONS.iter().map(|&(i, j)| w[(i, j)].norm()).fold(0.0, f64::max);
    let p = w.conjugate_by(&permutation_pi());
    for off in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)] {
        dev = dev.max(p[off].norm());
    }
    for s in [0, 2] {
        let (a, b) = (p[(s, s)], p[(s, s + 1)]);
        let (c, d) = (p[(s + 1, s)], p[(s + 1, s + 1)]);
        dev = dev
            .max((c + b.conj()).norm())
            .max((d - a.conj()).norm())
            .max((a.norm_sqr() + b.norm_sqr() - 1.0).abs());
    }
    dev
}
