//! The su(4) generators λ₁…λ₁₅, their commutator table, the Cartan split,
//! the seven-element X-subalgebra and the groups it exponentiates to.
//!
//! Normalization: λ_k = (i/2)·σ_μ⊗σ_ν, so `Tr(λ_j λ_k) = −δ_jk`.
//! Generators 1–6 span 𝔩 (single-qubit terms), 7–15 span 𝔭.

use std::sync::LazyLock;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::linalg::{block_diag, commutator, kron2, pauli, Matrix2, Matrix4, Unitary2, I, ONE, ZERO};
use crate::{Error, Result};

/// (μ, ν) of σ_μ⊗σ_ν for each λ_k, k = 1..=15.
pub const PAULI_PAIRS: [(usize, usize); 15] = [
    (1, 0),
    (2, 0),
    (3, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 3),
];

/// Index of a generator, 1-based as in the usual λ labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BasisIndex(u8);

impl BasisIndex {
    pub fn new(k: usize) -> Result<Self> {
        if (1..=15).contains(&k) {
            Ok(Self(k as u8))
        } else {
            Err(Error::BasisIndex(k))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// True for λ₁…λ₆.
    pub fn in_l(self) -> bool {
        self.0 <= 6
    }

    pub fn all() -> impl Iterator<Item = BasisIndex> {
        (1..=15).map(|k| BasisIndex(k as u8))
    }
}

static BASIS: LazyLock<[Matrix4; 15]> = LazyLock::new(|| {
    let half_i = C64::new(0.0, 0.5);
    PAULI_PAIRS.map(|(mu, nu)| kron2(&pauli(mu), &pauli(nu)) * half_i)
});

/// λ_k built from the Pauli tensor products.
pub fn lambda(k: usize) -> Result<Matrix4> {
    BasisIndex::new(k).map(|k| basis(k))
}

pub fn basis(k: BasisIndex) -> Matrix4 {
    BASIS[k.get() - 1]
}

type Pattern = [[(i8, i8); 4]; 4];

const O: (i8, i8) = (0, 0);
const P: (i8, i8) = (1, 0);
const N: (i8, i8) = (-1, 0);
const J: (i8, i8) = (0, 1);
const K: (i8, i8) = (0, -1);

/// The fifteen generators written out entry by entry, without the (i/2)
/// prefactor. Kept separately from the Kronecker construction so the two can
/// be compared.
const TRANSCRIBED: [Pattern; 15] = [
    [[O, O, P, O], [O, O, O, P], [P, O, O, O], [O, P, O, O]],
    [[O, O, K, O], [O, O, O, K], [J, O, O, O], [O, J, O, O]],
    [[P, O, O, O], [O, P, O, O], [O, O, N, O], [O, O, O, N]],
    [[O, P, O, O], [P, O, O, O], [O, O, O, P], [O, O, P, O]],
    [[O, K, O, O], [J, O, O, O], [O, O, O, K], [O, O, J, O]],
    [[P, O, O, O], [O, N, O, O], [O, O, P, O], [O, O, O, N]],
    [[O, O, O, P], [O, O, P, O], [O, P, O, O], [P, O, O, O]],
    [[O, O, O, K], [O, O, J, O], [O, K, O, O], [J, O, O, O]],
    [[O, O, P, O], [O, O, O, N], [P, O, O, O], [O, N, O, O]],
    [[O, O, O, K], [O, O, K, O], [O, J, O, O], [J, O, O, O]],
    [[O, O, O, N], [O, O, P, O], [O, P, O, O], [N, O, O, O]],
    [[O, O, K, O], [O, O, O, J], [J, O, O, O], [O, K, O, O]],
    [[O, P, O, O], [P, O, O, O], [O, O, O, N], [O, O, N, O]],
    [[O, K, O, O], [J, O, O, O], [O, O, O, J], [O, O, K, O]],
    [[P, O, O, O], [O, N, O, O], [O, O, N, O], [O, O, O, P]],
];

/// λ_k from the written-out entry table.
pub fn transcribed_lambda(k: BasisIndex) -> Matrix4 {
    let pat = &TRANSCRIBED[k.get() - 1];
    Matrix4::from_fn(|i, j| C64::new(pat[i][j].0 as f64, pat[i][j].1 as f64) * C64::new(0.0, 0.5))
}

/// Largest entry deviation between the two constructions of the basis.
pub fn transcription_deviation() -> f64 {
    BasisIndex::all()
        .map(|k| basis(k).max_abs_diff(&transcribed_lambda(k)))
        .fold(0.0, f64::max)
}

/// `TABLE[j-1][k-1] = s·m` encodes `[λ_j, λ_k] = sign(s)·λ_|m|`; 0 means the
/// generators commute.
///
/// The cell [λ₅, λ₁₅] carries −13. Printed copies of this table show +λ₁₃
/// there, which contradicts the antisymmetric partner [λ₁₅, λ₅] = +λ₁₃.
pub const COMMUTATOR_TABLE: [[i8; 15]; 15] = [
    [0, -3, 2, 0, 0, 0, 0, 0, 0, -13, -14, -15, 10, 11, 12],
    [3, 0, -1, 0, 0, 0, 13, 14, 15, 0, 0, 0, -7, -8, -9],
    [-2, 1, 0, 0, 0, 0, -10, -11, -12, 7, 8, 9, 0, 0, 0],
    [0, 0, 0, 0, -6, 5, 0, -9, 8, 0, -12, 11, 0, -15, 14],
    [0, 0, 0, 6, 0, -4, 9, 0, -7, 12, 0, -10, 15, 0, -13],
    [0, 0, 0, -5, 4, 0, -8, 7, 0, -11, 10, 0, -14, 13, 0],
    [0, -13, 10, 0, -9, 8, 0, -6, 5, -3, 0, 0, 2, 0, 0],
    [0, -14, 11, 9, 0, -7, 6, 0, -4, 0, -3, 0, 0, 2, 0],
    [0, -15, 12, -8, 7, 0, -5, 4, 0, 0, 0, -3, 0, 0, 2],
    [13, 0, -7, 0, -12, 11, 3, 0, 0, 0, -6, 5, -1, 0, 0],
    [14, 0, -8, 12, 0, -10, 0, 3, 0, 6, 0, -4, 0, -1, 0],
    [15, 0, -9, -11, 10, 0, 0, 0, 3, -5, 4, 0, 0, 0, -1],
    [-10, 7, 0, 0, -15, 14, -2, 0, 0, 1, 0, 0, 0, -6, 5],
    [-11, 8, 0, 15, 0, -13, 0, -2, 0, 0, 1, 0, 6, 0, -4],
    [-12, 9, 0, -14, 13, 0, 0, 0, -2, 0, 0, 1, -5, 4, 0],
];

fn table_matrix(code: i8) -> Matrix4 {
    if code == 0 {
        Matrix4::zeros()
    } else {
        let m = BASIS[code.unsigned_abs() as usize - 1];
        if code < 0 {
            -m
        } else {
            m
        }
    }
}

/// Expansion coefficients of an element of su(4) over the λ basis,
/// `c_k = −Tr(λ_k m)`.
pub fn coefficients(m: &Matrix4) -> [f64; 15] {
    let mut c = [0.0; 15];
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = -(BASIS[k] * *m).trace().re;
    }
    c
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorMismatch {
    pub row: usize,
    pub col: usize,
    pub expected: i8,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutatorReport {
    pub total: usize,
    pub matches: usize,
    pub max_deviation: f64,
    pub mismatches: Vec<CommutatorMismatch>,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.matches == self.total
    }
}

/// Evaluates all 225 commutators and compares each with the table entry.
pub fn verify_commutator_table(tol: f64) -> CommutatorReport {
    let mut report = CommutatorReport {
        total: 225,
        matches: 0,
        max_deviation: 0.0,
        mismatches: Vec::new(),
    };
    for j in 0..15 {
        for k in 0..15 {
            let got = commutator(&BASIS[j], &BASIS[k]);
            let expected = COMMUTATOR_TABLE[j][k];
            let dev = got.max_abs_diff(&table_matrix(expected));
            report.max_deviation = report.max_deviation.max(dev);
            if dev <= tol {
                report.matches += 1;
            } else {
                report.mismatches.push(CommutatorMismatch {
                    row: j + 1,
                    col: k + 1,
                    expected,
                    deviation: dev,
                });
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subspace {
    L,
    P,
}

#[derive(Debug, Clone, Serialize)]
pub struct CartanViolation {
    pub row: usize,
    pub col: usize,
    pub allowed: Subspace,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CartanReport {
    pub pairs_checked: usize,
    pub max_residual: f64,
    pub violations: Vec<CartanViolation>,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Projects every commutator onto the subspace it must lie in:
/// [𝔩,𝔩] ⊂ 𝔩, [𝔭,𝔩] ⊂ 𝔭, [𝔭,𝔭] ⊂ 𝔩.
pub fn verify_cartan_split(tol: f64) -> CartanReport {
    let mut report = CartanReport {
        pairs_checked: 0,
        max_residual: 0.0,
        violations: Vec::new(),
    };
    for a in BasisIndex::all() {
        for b in BasisIndex::all() {
            let allowed = if a.in_l() == b.in_l() { Subspace::L } else { Subspace::P };
            let c = commutator(&basis(a), &basis(b));
            let coef = coefficients(&c);
            let mut proj = Matrix4::zeros();
            for k in BasisIndex::all() {
                if (allowed == Subspace::L) == k.in_l() {
                    proj = proj + basis(k) * coef[k.get() - 1];
                }
            }
            let residual = c.max_abs_diff(&proj);
            report.pairs_checked += 1;
            report.max_residual = report.max_residual.max(residual);
            if residual > tol {
                report.violations.push(CartanViolation {
                    row: a.get(),
                    col: b.get(),
                    allowed,
                    residual,
                });
            }
        }
    }
    report
}

/// One element of α_X: a basis generator with the sign it enters with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedGenerator {
    pub index: usize,
    pub sign: f64,
}

impl SignedGenerator {
    pub fn matrix(&self) -> Matrix4 {
        BASIS[self.index - 1] * self.sign
    }
}

/// The X-subalgebra generators in ascending index order
/// (λ₃, λ₆, λ₇, λ₈, λ₁₀, −λ₁₁, λ₁₅). The minus sign on λ₁₁ is metadata;
/// the stored basis is never negated.
pub const ALPHA_X: [SignedGenerator; 7] = [
    SignedGenerator { index: 3, sign: 1.0 },
    SignedGenerator { index: 6, sign: 1.0 },
    SignedGenerator { index: 7, sign: 1.0 },
    SignedGenerator { index: 8, sign: 1.0 },
    SignedGenerator { index: 10, sign: 1.0 },
    SignedGenerator { index: 11, sign: -1.0 },
    SignedGenerator { index: 15, sign: 1.0 },
];

/// The customary listing order of α_X: (15, 10, 6, −11, 8, 3, 7).
pub const ALPHA_X_LISTED: [usize; 7] = [15, 10, 6, 11, 8, 3, 7];

/// Largest component of a commutator of two α_X elements outside span(α_X).
pub fn alpha_closure_residual() -> f64 {
    let mut worst: f64 = 0.0;
    for a in ALPHA_X {
        for b in ALPHA_X {
            let c = commutator(&a.matrix(), &b.matrix());
            let coef = coefficients(&c);
            let proj = ALPHA_X
                .iter()
                .fold(Matrix4::zeros(), |acc, g| acc + basis_raw(g.index) * coef[g.index - 1]);
            worst = worst.max(c.max_abs_diff(&proj));
        }
    }
    worst
}

fn basis_raw(k: usize) -> Matrix4 {
    BASIS[k - 1]
}

/// P_π: the permutation matrix exchanging |01⟩ and |11⟩.
pub fn permutation_pi() -> Matrix4 {
    Matrix4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
}

/// The su(2) ⊕ su(2) pseudospin operators built from α_X.
#[derive(Debug, Clone)]
pub struct Pseudospins {
    pub s_z: Matrix4,
    pub s_plus: Matrix4,
    pub s_minus: Matrix4,
    pub t_z: Matrix4,
    pub t_plus: Matrix4,
    pub t_minus: Matrix4,
}

impl Pseudospins {
    /// Cartesian triple {(S₊+S₋)/2, i(S₊−S₋)/2, S_z}.
    pub fn s(&self) -> [Matrix4; 3] {
        cartesian(&self.s_plus, &self.s_minus, &self.s_z)
    }

    pub fn t(&self) -> [Matrix4; 3] {
        cartesian(&self.t_plus, &self.t_minus, &self.t_z)
    }
}

fn cartesian(plus: &Matrix4, minus: &Matrix4, z: &Matrix4) -> [Matrix4; 3] {
    [
        (*plus + *minus) * 0.5,
        (*plus - *minus) * C64::new(0.0, 0.5),
        *z,
    ]
}

pub fn pseudospins() -> Pseudospins {
    let l = basis_raw;
    let i = I;
    Pseudospins {
        s_z: (l(3) + l(6)) * i,
        s_plus: (l(8) + l(10)) + (l(7) - l(11)) * i,
        s_minus: -(l(8) + l(10)) + (l(7) - l(11)) * i,
        t_z: (l(3) - l(6)) * i,
        t_plus: -(l(8) - l(10)) + (l(7) + l(11)) * i,
        t_minus: (l(8) - l(10)) + (l(7) + l(11)) * i,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl RelationReport {
    fn new(checks: Vec<RelationCheck>, tolerance: f64) -> Self {
        let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        Self {
            checks,
            max_residual,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| c.residual > self.tolerance)
    }
}

/// Checks [S_z,S_±] = ±2S_±, [S₊,S₋] = 4S_z, the same for T, and that every
/// S operator commutes with every T operator.
pub fn verify_pseudospins(tol: f64) -> RelationReport {
    let p = pseudospins();
    let mut checks = Vec::new();
    let mut push = |name: &str, lhs: Matrix4, rhs: Matrix4| {
        checks.push(RelationCheck {
            name: name.to_string(),
            residual: lhs.max_abs_diff(&rhs),
        })
    };
    push("[S_z,S_+] = 2S_+", commutator(&p.s_z, &p.s_plus), p.s_plus * 2.0);
    push("[S_z,S_-] = -2S_-", commutator(&p.s_z, &p.s_minus), p.s_minus * -2.0);
    push("[S_+,S_-] = 4S_z", commutator(&p.s_plus, &p.s_minus), p.s_z * 4.0);
    push("[T_z,T_+] = 2T_+", commutator(&p.t_z, &p.t_plus), p.t_plus * 2.0);
    push("[T_z,T_-] = -2T_-", commutator(&p.t_z, &p.t_minus), p.t_minus * -2.0);
    push("[T_+,T_-] = 4T_z", commutator(&p.t_plus, &p.t_minus), p.t_z * 4.0);
    let s_ops = [("S_z", p.s_z), ("S_+", p.s_plus), ("S_-", p.s_minus)];
    let t_ops = [("T_z", p.t_z), ("T_+", p.t_plus), ("T_-", p.t_minus)];
    for (sn, s) in &s_ops {
        for (tn, t) in &t_ops {
            push(&format!("[{sn},{tn}] = 0"), commutator(s, t), Matrix4::zeros());
        }
    }
    RelationReport::new(checks, tol)
}

/// Checks the block forms of P_π g P_π for the seven α_X elements.
pub fn ppi_conjugation_table(tol: f64) -> RelationReport {
    let pi = permutation_pi();
    let s = |mu| pauli(mu);
    let neg = |m: Matrix2| -m;
    let half_i = C64::new(0.0, 0.5);
    let expected: [(usize, Matrix4); 7] = [
        (3, block_diag(&s(3), &neg(s(3)))),
        (6, block_diag(&s(3), &s(3))),
        (7, block_diag(&s(1), &s(1))),
        (8, block_diag(&s(2), &s(2))),
        (10, block_diag(&s(2), &neg(s(2)))),
        (11, block_diag(&s(1), &neg(s(1)))),
        (15, block_diag(&s(0), &neg(s(0)))),
    ];
    let checks = expected
        .iter()
        .map(|(k, block)| {
            let g = ALPHA_X.iter().find(|g| g.index == *k).unwrap();
            let got = g.matrix().conjugate_by(&pi);
            let label = if g.sign < 0.0 { format!("-λ{k}") } else { format!("λ{k}") };
            RelationCheck {
                name: format!("P_π {label} P_π"),
                residual: got.max_abs_diff(&(*block * half_i)),
            }
        })
        .collect();
    RelationReport::new(checks, tol)
}

/// Coefficients v over α_X (ascending order, same as [`ALPHA_X`]) of an
/// element of the X-subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupElementGX {
    pub v: [f64; 7],
}

impl GroupElementGX {
    pub fn new(v: [f64; 7]) -> Self {
        Self { v }
    }

    /// Σ v_k α_k
    pub fn generator(&self) -> Matrix4 {
        ALPHA_X
            .iter()
            .zip(self.v)
            .fold(Matrix4::zeros(), |acc, (g, v)| acc + g.matrix() * v)
    }
}

/// `exp(Σ v_k α_k)`, an X-structure preserving element of SU(4).
pub fn exp_gx(g: &GroupElementGX) -> Result<Matrix4> {
    if g.v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(g.generator().exp())
}

/// An element of the local subgroup together with its tensor factors.
#[derive(Debug, Clone, Copy)]
pub struct LocalElement {
    pub matrix: Matrix4,
    pub first: Unitary2,
    pub second: Unitary2,
}

/// `P_π · blockdiag(exp(iφ₁σ₃/2), exp(iφ₂σ₃/2)) · P_π`.
///
/// The result is the product `g₁⊗g₂` with
/// `g₁ = exp(i(φ₁−φ₂)σ₃/4)`, `g₂ = exp(i(φ₁+φ₂)σ₃/4)`.
pub fn local_group_element(phi1: f64, phi2: f64) -> LocalElement {
    let u1 = Unitary2::z_rotation(phi1);
    let u2 = Unitary2::z_rotation(phi2);
    let matrix = block_diag(u1.matrix(), u2.matrix()).conjugate_by(&permutation_pi());
    LocalElement {
        matrix,
        first: Unitary2::z_rotation(0.5 * (phi1 - phi2)),
        second: Unitary2::z_rotation(0.5 * (phi1 + phi2)),
    }
}

impl LocalElement {
    /// ‖g₁⊗g₂ − matrix‖_max
    pub fn factorization_error(&self) -> f64 {
        kron2(self.first.matrix(), self.second.matrix()).max_abs_diff(&self.matrix)
    }
}

/// ‖(Tr(λ_j λ_k)) + I‖_max over all 225 pairs.
pub fn orthonormality_deviation() -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..15 {
        for k in 0..15 {
            let t = (BASIS[j] * BASIS[k]).trace();
            let want = if j == k { -ONE } else { ZERO };
            worst = worst.max((t - want).norm());
        }
    }
    worst
}
