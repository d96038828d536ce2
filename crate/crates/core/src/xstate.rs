//! The X-state data model.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩. An X-state keeps the four
//! populations ρ₁₁…ρ₄₄ and the two coherences ρ₁₄, ρ₂₃; every other entry
//! of the density matrix is zero.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linalg::{HermitianMatrix2, HermitianMatrix4, Matrix4, ZERO};
use crate::{Block, Error, Result, Tolerances, Violation};

/// Entries of a 4×4 matrix that must vanish for an X-state.
pub const NON_X_POSITIONS: [(usize, usize); 8] =
    [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "XStateRecord", into = "XStateRecord")]
pub struct XState {
    d: [f64; 4],
    c14: C64,
    c23: C64,
}

impl XState {
    /// Validated constructor with default tolerances.
    pub fn new(d: [f64; 4], c14: C64, c23: C64) -> Result<Self> {
        Self::with_tolerances(d, c14, c23, &Tolerances::default())
    }

    pub fn with_tolerances(d: [f64; 4], c14: C64, c23: C64, tol: &Tolerances) -> Result<Self> {
        let x = Self { d, c14, c23 };
        x.validate(tol)?;
        Ok(x)
    }

    /// Skips validation. Only meant for perturbation experiments.
    pub fn new_unchecked(d: [f64; 4], c14: C64, c23: C64) -> Self {
        Self { d, c14, c23 }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let finite = self.d.iter().all(|x| x.is_finite())
            && [self.c14, self.c23].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        let mut violations = Vec::new();
        let trace: f64 = self.d.iter().sum();
        if (trace - 1.0).abs() > tol.structural {
            violations.push(Violation::Trace { trace });
        }
        for (index, &value) in self.d.iter().enumerate() {
            if value < -tol.structural {
                violations.push(Violation::NegativePopulation { index, value });
            }
        }
        let (upper, lower) = self.block_form();
        for (block, m) in [(Block::Upper, upper), (Block::Lower, lower)] {
            let det = m.det();
            if det < -tol.structural {
                violations.push(Violation::Positivity { block, det });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked([0.25; 4], ZERO, ZERO)
    }

    /// |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
    pub fn bell_phi_plus() -> Self {
        Self::new_unchecked([0.5, 0.0, 0.0, 0.5], C64::new(0.5, 0.0), ZERO)
    }

    /// `p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4`
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("Werner weight {p} outside [0, 1]")));
        }
        let outer = (1.0 - p) / 4.0;
        Self::new(
            [outer + p / 2.0, outer, outer, outer + p / 2.0],
            C64::new(p / 2.0, 0.0),
            ZERO,
        )
    }

    /// ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄
    pub fn populations(&self) -> [f64; 4] {
        self.d
    }

    /// ρ₁₄
    pub fn c14(&self) -> C64 {
        self.c14
    }

    /// ρ₂₃
    pub fn c23(&self) -> C64 {
        self.c23
    }

    pub fn to_dense(&self) -> Matrix4 {
        let mut m = Matrix4::diag(self.d.map(|x| C64::new(x, 0.0)));
        m.0[0][3] = self.c14;
        m.0[3][0] = self.c14.conj();
        m.0[1][2] = self.c23;
        m.0[2][1] = self.c23.conj();
        m
    }

    /// Accepts a Hermitian matrix whose eight off-X entries are below the
    /// structural tolerance.
    pub fn from_dense(m: &HermitianMatrix4, tol: &Tolerances) -> Result<Self> {
        let a = m.matrix();
        let offending: Vec<_> = NON_X_POSITIONS
            .iter()
            .copied()
            .filter(|&(i, j)| a.0[i][j].norm() > tol.structural)
            .collect();
        if !offending.is_empty() {
            return Err(Error::NotXStructured(offending));
        }
        let d = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re, a.0[3][3].re];
        let c14 = 0.5 * (a.0[0][3] + a.0[3][0].conj());
        let c23 = 0.5 * (a.0[1][2] + a.0[2][1].conj());
        Self::with_tolerances(d, c14, c23, tol)
    }

    /// The two blocks of `P_π ρ P_π`:
    /// upper `[[ρ₁₁, ρ₁₄], [ρ₄₁, ρ₄₄]]`, lower `[[ρ₃₃, ρ₃₂], [ρ₂₃, ρ₂₂]]`.
    pub fn block_form(&self) -> (HermitianMatrix2, HermitianMatrix2) {
        (
            HermitianMatrix2::new(self.d[0], self.c14, self.d[3]),
            HermitianMatrix2::new(self.d[2], self.c23.conj(), self.d[1]),
        )
    }

    /// Inverse of [`XState::block_form`].
    pub fn from_blocks(upper: &HermitianMatrix2, lower: &HermitianMatrix2, tol: &Tolerances) -> Result<Self> {
        Self::with_tolerances([upper.a, lower.c, lower.a, upper.c], upper.b, lower.b.conj(), tol)
    }

    pub fn h_coefficients(&self) -> HVector {
        let [d1, d2, d3, d4] = self.d;
        let (a, b) = (self.c14, self.c23);
        HVector {
            h3: -d1 - d2 + d3 + d4,
            h6: -d1 + d2 - d3 + d4,
            h7: -2.0 * a.re - 2.0 * b.re,
            h8: 2.0 * a.im - 2.0 * b.im,
            h10: 2.0 * a.im + 2.0 * b.im,
            h11: -2.0 * a.re + 2.0 * b.re,
            h15: -d1 + d2 + d3 - d4,
        }
    }

    /// State with the given expansion coefficients, i.e.
    /// `ρ = (I + 2i Σ h_k α_k)/4` over the X-subalgebra.
    pub fn from_h(h: &HVector, tol: &Tolerances) -> Result<Self> {
        let d = [
            (1.0 - h.h3 - h.h6 - h.h15) / 4.0,
            (1.0 - h.h3 + h.h6 + h.h15) / 4.0,
            (1.0 + h.h3 - h.h6 + h.h15) / 4.0,
            (1.0 + h.h3 + h.h6 - h.h15) / 4.0,
        ];
        let c14 = C64::new(-(h.h7 + h.h11), h.h8 + h.h10) / 4.0;
        let c23 = C64::new(h.h11 - h.h7, h.h10 - h.h8) / 4.0;
        Self::with_tolerances(d, c14, c23, tol)
    }

    /// `g ρ g†`, which must again be an X-state.
    pub fn conjugate_by(&self, g: &Matrix4, tol: &Tolerances) -> Result<Self> {
        let m = HermitianMatrix4::with_tolerance(self.to_dense().conjugate_by(g), tol.structural)?;
        Self::from_dense(&m, tol)
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.d[0], self.d[1], self.d[2], self.d[3], self.c14.re, self.c14.im, self.c23.re, self.c23.im
        )
    }

    /// Parses `d1,d2,d3,d4,c14re,c14im,c23re,c23im`.
    pub fn from_csv_row(line: &str, tol: &Tolerances) -> Result<Self> {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("not a number: {:?}", f.trim())))
            })
            .collect::<Result<_>>()?;
        if fields.len() != 8 {
            return Err(Error::Parse(format!("expected 8 fields, found {}", fields.len())));
        }
        Self::with_tolerances(
            [fields[0], fields[1], fields[2], fields[3]],
            C64::new(fields[4], fields[5]),
            C64::new(fields[6], fields[7]),
            tol,
        )
    }
}

/// Column names of the CSV row form.
pub const CSV_HEADER: &str = "d1,d2,d3,d4,c14re,c14im,c23re,c23im";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    pub im: f64,
}

/// JSON shape `{"d": [..4], "c14": {"re", "im"}, "c23": {"re", "im"}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XStateRecord {
    pub d: [f64; 4],
    pub c14: ComplexRecord,
    pub c23: ComplexRecord,
}

impl From<XState> for XStateRecord {
    fn from(x: XState) -> Self {
        Self {
            d: x.d,
            c14: ComplexRecord { re: x.c14.re, im: x.c14.im },
            c23: ComplexRecord { re: x.c23.re, im: x.c23.im },
        }
    }
}

impl TryFrom<XStateRecord> for XState {
    type Error = Error;

    fn try_from(r: XStateRecord) -> Result<Self> {
        r.validate(&Tolerances::default())
    }
}

impl XStateRecord {
    pub fn validate(&self, tol: &Tolerances) -> Result<XState> {
        XState::with_tolerances(
            self.d,
            C64::new(self.c14.re, self.c14.im),
            C64::new(self.c23.re, self.c23.im),
            tol,
        )
    }
}

/// Expansion coefficients over the X-subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HVector {
    pub h3: f64,
    pub h6: f64,
    pub h7: f64,
    pub h8: f64,
    pub h10: f64,
    pub h11: f64,
    pub h15: f64,
}

impl HVector {
    /// Components in ascending index order (3, 6, 7, 8, 10, 11, 15).
    pub fn to_array(&self) -> [f64; 7] {
        [self.h3, self.h6, self.h7, self.h8, self.h10, self.h11, self.h15]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            h3: a[0],
            h6: a[1],
            h7: a[2],
            h8: a[3],
            h10: a[4],
            h11: a[5],
            h15: a[6],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su4::ALPHA_X;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(d: [f64; 4]) -> XState {
        XState::new(d, ZERO, ZERO).unwrap()
    }

    #[test]
    fn construction_examples() {
        let mm = XState::new([0.25; 4], ZERO, ZERO).unwrap();
        assert_eq!(mm, XState::maximally_mixed());
        XState::new([0.5, 0.0, 0.0, 0.5], C64::new(0.5, 0.0), ZERO).unwrap();
        let err = XState::new([0.5, 0.0, 0.0, 0.5], C64::new(0.6, 0.0), ZERO).unwrap_err();
        assert!(err.violates_block(Block::Upper));
        assert!(!err.violates_block(Block::Lower));
    }

    #[test]
    fn rejection_lists_every_failure() {
        let err = XState::new([0.5, 0.1, 0.1, 0.5], C64::new(0.6, 0.0), C64::new(0.0, 0.2)).unwrap_err();
        match err {
            Error::InvalidState(v) => {
                assert!(v.iter().any(|x| matches!(x, Violation::Trace { .. })));
                assert!(v.iter().any(|x| matches!(x, Violation::Positivity { block: Block::Upper, .. })));
                assert!(v.iter().any(|x| matches!(x, Violation::Positivity { block: Block::Lower, .. })));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(XState::new([f64::NAN, 0.0, 0.0, 1.0], ZERO, ZERO), Err(Error::NonFinite)));
        let neg = XState::new([1.1, -0.1, 0.0, 0.0], ZERO, ZERO).unwrap_err();
        assert!(matches!(neg, Error::InvalidState(ref v) if matches!(v[0], Violation::NegativePopulation { index: 1, .. })));
    }

    #[test]
    fn from_dense_examples() {
        let mm = HermitianMatrix4::new(Matrix4::identity() * 0.25).unwrap();
        assert_eq!(XState::from_dense(&mm, &tol()).unwrap(), XState::maximally_mixed());

        let mut m = Matrix4::identity() * 0.25;
        m.0[0][1] = C64::new(0.1, 0.0);
        m.0[1][0] = C64::new(0.1, 0.0);
        let err = XState::from_dense(&HermitianMatrix4::new(m).unwrap(), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotXStructured(ref e) if e == &vec![(0, 1), (1, 0)]));

        // product of two diagonal qubit states
        use crate::linalg::{kron2, Matrix2};
        let a = Matrix2::from_real([[0.7, 0.0], [0.0, 0.3]]);
        let b = Matrix2::from_real([[0.4, 0.0], [0.0, 0.6]]);
        let x = XState::from_dense(&HermitianMatrix4::new(kron2(&a, &b)).unwrap(), &tol()).unwrap();
        let p = x.populations();
        let want = [0.28, 0.42, 0.12, 0.18];
        for i in 0..4 {
            assert!((p[i] - want[i]).abs() < 1e-15);
        }
        assert_eq!((x.c14(), x.c23()), (ZERO, ZERO));
    }

    #[test]
    fn block_form_examples() {
        let (u, l) = XState::maximally_mixed().block_form();
        assert_eq!((u.a, u.c, u.b), (0.25, 0.25, ZERO));
        assert_eq!((l.a, l.c, l.b), (0.25, 0.25, ZERO));

        let (u, l) = XState::bell_phi_plus().block_form();
        assert_eq!((u.a, u.c, u.b), (0.5, 0.5, C64::new(0.5, 0.0)));
        assert_eq!((l.a, l.c, l.b), (0.0, 0.0, ZERO));

        let (u, l) = diag([0.4, 0.3, 0.2, 0.1]).block_form();
        assert_eq!((u.a, u.c), (0.4, 0.1));
        assert_eq!((l.a, l.c), (0.2, 0.3));
    }

    #[test]
    fn block_form_reassembles_through_ppi() {
        use crate::linalg::block_diag;
        use crate::su4::permutation_pi;
        let x = XState::new([0.3, 0.2, 0.25, 0.25], C64::new(0.1, -0.05), C64::new(-0.02, 0.15)).unwrap();
        let (u, l) = x.block_form();
        let rebuilt = block_diag(&u.matrix(), &l.matrix()).conjugate_by(&permutation_pi());
        assert_eq!(rebuilt, x.to_dense());
        assert_eq!(XState::from_blocks(&u, &l, &tol()).unwrap(), x);
    }

    #[test]
    fn h_examples() {
        assert_eq!(XState::maximally_mixed().h_coefficients(), HVector::default());
        let h = XState::bell_phi_plus().h_coefficients();
        assert_eq!(
            h,
            HVector { h3: 0.0, h6: 0.0, h7: -1.0, h8: 0.0, h10: 0.0, h11: -1.0, h15: -1.0 }
        );
        let h = diag([0.4, 0.3, 0.2, 0.1]).h_coefficients();
        assert!((h.h3 + 0.4).abs() < 1e-15);
        assert!((h.h6 + 0.2).abs() < 1e-15);
        assert!(h.h15.abs() < 1e-15);
        assert_eq!((h.h7, h.h8, h.h10, h.h11), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn from_h_examples() {
        assert_eq!(XState::from_h(&HVector::default(), &tol()).unwrap(), XState::maximally_mixed());
        let bell = HVector { h7: -1.0, h11: -1.0, h15: -1.0, ..Default::default() };
        assert_eq!(XState::from_h(&bell, &tol()).unwrap(), XState::bell_phi_plus());
        let bad = HVector { h3: -10.0, ..Default::default() };
        assert!(matches!(XState::from_h(&bad, &tol()), Err(Error::InvalidState(_))));
    }

    /// The real-arithmetic expansion agrees with the literal matrix sum
    /// (I + 2i Σ h_k α_k)/4.
    #[test]
    fn h_expansion_matches_dense_sum() {
        let x = XState::new([0.31, 0.19, 0.22, 0.28], C64::new(0.08, -0.11), C64::new(-0.05, 0.09)).unwrap();
        let h = x.h_coefficients().to_array();
        let mut sum = Matrix4::identity();
        for (g, hk) in ALPHA_X.iter().zip(h) {
            sum = sum + g.matrix() * C64::new(0.0, 2.0 * hk);
        }
        let dense = sum * 0.25;
        assert!(dense.max_abs_diff(&x.to_dense()) < 1e-15);
    }

    #[test]
    fn werner_family() {
        assert_eq!(XState::werner(0.0).unwrap(), XState::maximally_mixed());
        assert_eq!(XState::werner(1.0).unwrap(), XState::bell_phi_plus());
        assert!(XState::werner(1.5).is_err());
    }

    #[test]
    fn json_and_csv_forms() {
        let x = XState::new([0.4, 0.3, 0.2, 0.1], C64::new(0.1, 0.05), C64::new(0.0, -0.1)).unwrap();
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"d":[0.4,0.3,0.2,0.1],"c14":{"re":0.1,"im":0.05},"c23":{"re":0.0,"im":-0.1}}"#);
        let back: XState = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        assert_eq!(XState::from_csv_row(&x.to_csv_row(), &tol()).unwrap(), x);
        let bad = r#"{"d":[0.5,0,0,0.5],"c14":{"re":0.6,"im":0},"c23":{"re":0,"im":0}}"#;
        assert!(serde_json::from_str::<XState>(bad).is_err());
        assert!(matches!(XState::from_csv_row("0.25,0.25,0.25", &tol()), Err(Error::Parse(_))));
        assert!(matches!(XState::from_csv_row("a,0,0,0,0,0,0,0", &tol()), Err(Error::Parse(_))));
    }
}
