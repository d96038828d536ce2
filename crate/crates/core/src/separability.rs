//! Separability of X-states by the PPT criterion, evaluated three ways.
//!
//! * [`ppt_oracle`]: dense partial transpose plus a general eigensolver.
//! * [`ppt_elementwise`]: the X-structure shortcut d₁d₄ ≥ |ρ₂₃|², d₂d₃ ≥ |ρ₁₄|².
//! * [`ineq_spectrum_angles`]: the same two conditions written in terms of
//!   the block spectrum and the diagonalizer angles φ₁, φ₂.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::linalg::{eig2, eig4, HermitianMatrix4, Matrix4};
use crate::orbit::{reconstruct, DiagonalizingFrame, OrderedSpectrum};
use crate::{Error, Result, Tolerances, XState};

/// Which of the two PPT conditions sets the margin.
///
/// `First` is the upper-block condition d₁d₄ ≥ |ρ₂₃|², `Second` the
/// lower-block one d₂d₃ ≥ |ρ₁₄|². `None` means no coherence enters either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Binding {
    First,
    Second,
    Both,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// Smaller of the two slacks; negative means violated.
    pub margin: f64,
    pub slack1: f64,
    pub slack2: f64,
    pub binding: Binding,
    /// |margin| ≤ band.
    pub marginal: bool,
}

impl SeparabilityVerdict {
    fn from_slacks(slack1: f64, slack2: f64, coherent: bool, tol: &Tolerances) -> Self {
        let margin = slack1.min(slack2);
        let binding = if !coherent {
            Binding::None
        } else if (slack1 - slack2).abs() <= tol.band {
            Binding::Both
        } else if slack1 < slack2 {
            Binding::First
        } else {
            Binding::Second
        };
        Self {
            separable: margin >= -tol.band,
            margin,
            slack1,
            slack2,
            binding,
            marginal: margin.abs() <= tol.band,
        }
    }
}

/// `⟨ij|ρ^{T₂}|kl⟩ = ⟨il|ρ|kj⟩`
pub fn partial_transpose(m: &Matrix4) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + j][2 * k + l] = m.0[2 * i + l][2 * k + j];
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    /// Smallest eigenvalue of the dense partial transpose.
    pub min_eigenvalue: f64,
    /// Same quantity from the two 2×2 blocks of the transposed X-state.
    pub reduced_min_eigenvalue: f64,
    pub separable: bool,
}

impl OracleVerdict {
    /// The dense and block paths agree to `tol`.
    pub fn paths_agree(&self, tol: f64) -> bool {
        (self.min_eigenvalue - self.reduced_min_eigenvalue).abs() <= tol
    }
}

/// Dense Peres-Horodecki test. Separable iff the smallest eigenvalue of
/// ρ^{T₂} is at least −spectral.
pub fn ppt_oracle(x: &XState, tol: &Tolerances) -> Result<OracleVerdict> {
    let pt = HermitianMatrix4::with_tolerance(partial_transpose(&x.to_dense()), tol.structural)?;
    let min_eigenvalue = eig4(&pt)?[3];
    // transposing the second qubit swaps ρ₁₄ and ρ₂₃
    let swapped = XState::new_unchecked(x.populations(), x.c23(), x.c14());
    let (upper, lower) = swapped.block_form();
    let reduced_min_eigenvalue = eig2(&upper).low.min(eig2(&lower).low);
    Ok(OracleVerdict {
        min_eigenvalue,
        reduced_min_eigenvalue,
        separable: min_eigenvalue >= -tol.spectral,
    })
}

/// Closed-form PPT test: slack1 = d₁d₄ − |ρ₂₃|², slack2 = d₂d₃ − |ρ₁₄|².
pub fn ppt_elementwise(x: &XState, tol: &Tolerances) -> SeparabilityVerdict {
    let [d1, d2, d3, d4] = x.populations();
    let (a, b) = (x.c14().norm_sqr(), x.c23().norm_sqr());
    let coherent = a.max(b) > tol.structural * tol.structural;
    SeparabilityVerdict::from_slacks(d1 * d4 - b, d2 * d3 - a, coherent, tol)
}

/// The PPT conditions in spectral form:
///
/// (r₁−r₂)²cos²φ₁ + (r₃−r₄)²sin²φ₂ ≤ (r₁+r₂)²
/// (r₃−r₄)²cos²φ₂ + (r₁−r₂)²sin²φ₁ ≤ (r₃+r₄)²
///
/// Each slack is four times the matching element-wise slack.
pub fn ineq_spectrum_angles(r: &OrderedSpectrum, phi1: f64, phi2: f64, tol: &Tolerances) -> SeparabilityVerdict {
    let g1 = r.upper_gap().powi(2);
    let g2 = r.lower_gap().powi(2);
    let (s1, c1) = phi1.sin_cos();
    let (s2, c2) = phi2.sin_cos();
    let slack1 = (r.r1() + r.r2()).powi(2) - g1 * c1 * c1 - g2 * s2 * s2;
    let slack2 = (r.r3() + r.r4()).powi(2) - g2 * c2 * c2 - g1 * s1 * s1;
    let coherent = (g1 * s1 * s1).max(g2 * s2 * s2) > tol.structural;
    SeparabilityVerdict::from_slacks(slack1, slack2, coherent, tol)
}

/// Result of re-running the oracle across a grid of the ψ angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSweep {
    pub evaluated: usize,
    /// Every grid point got the same oracle verdict.
    pub invariant: bool,
    pub separable: bool,
    /// max − min of the oracle's smallest eigenvalue over the grid.
    pub spread: f64,
}

/// Sweeps ψ₁, ψ₂ over an `n × n` grid in [0, 2π)², offset by the given
/// ψ values, and checks that the oracle verdict never changes.
pub fn angle_independence_check(
    r: &OrderedSpectrum,
    phi1: f64,
    phi2: f64,
    psi1: f64,
    psi2: f64,
    n: usize,
    tol: &Tolerances,
) -> Result<AngleSweep> {
    let step = 2.0 * PI / n as f64;
    let mut verdicts = Vec::with_capacity(n * n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..n {
            let frame = DiagonalizingFrame {
                phi1,
                psi1: psi1 + i as f64 * step,
                phi2,
                psi2: psi2 + j as f64 * step,
                omega: 0.0,
            };
            let v = ppt_oracle(&reconstruct(r, &frame, tol)?, tol)?;
            lo = lo.min(v.min_eigenvalue);
            hi = hi.max(v.min_eigenvalue);
            verdicts.push(v.separable);
        }
    }
    Ok(AngleSweep {
        evaluated: verdicts.len(),
        invariant: verdicts.iter().all(|&v| v == verdicts[0]),
        separable: verdicts[0],
        spread: hi - lo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsSepVerdict {
    pub abs_separable: bool,
    /// 4r₃r₄ − (r₁−r₂)²
    pub slack1: f64,
    /// 4r₁r₂ − (r₃−r₄)²
    pub slack2: f64,
}

/// Separable for every choice of diagonalizer angles.
pub fn absolutely_separable(r: &OrderedSpectrum, tol: &Tolerances) -> AbsSepVerdict {
    let slack1 = 4.0 * r.r3() * r.r4() - r.upper_gap().powi(2);
    let slack2 = 4.0 * r.r1() * r.r2() - r.lower_gap().powi(2);
    AbsSepVerdict {
        abs_separable: slack1 >= -tol.band && slack2 >= -tol.band,
        slack1,
        slack2,
    }
}

/// ζ* = 3 − 2√2, where 4ζ/(1−ζ)² reaches 1.
pub const CRITICAL_RATIO: f64 = 3.0 - 2.0 * SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateBound {
    /// 4ζ/(1−ζ)²
    pub bound: f64,
    /// min(1, bound)
    pub max_cos2_phi2: f64,
    /// ζ ≥ ζ*, so every φ₂ passes.
    pub unconstrained: bool,
}

/// The published separability bound for the degenerate orbit r₁ = r₂:
/// cos²φ₂ ≤ 4ζ/(1−ζ)² with ζ = r₄/r₃.
///
/// Implemented as stated. The dense oracle gives a different condition,
/// (r₃−r₄)²sin²φ₂ ≤ 4r₁²; see [`degenerate_cross_check`].
pub fn degenerate_criterion(zeta: f64) -> Result<DegenerateBound> {
    if !(0.0..1.0).contains(&zeta) {
        return Err(Error::Domain(format!("ratio {zeta} outside [0, 1)")));
    }
    let bound = 4.0 * zeta / (1.0 - zeta).powi(2);
    Ok(DegenerateBound {
        bound,
        max_cos2_phi2: bound.min(1.0),
        unconstrained: zeta >= CRITICAL_RATIO,
    })
}

/// Bisection for the ratio at which the degenerate bound reaches 1.
pub fn critical_ratio_by_bisection(tol: f64) -> f64 {
    let f = |z: f64| 4.0 * z / (1.0 - z).powi(2) - 1.0;
    let (mut lo, mut hi) = (0.0, 0.5);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateRow {
    pub phi2: f64,
    pub published: bool,
    pub oracle: bool,
    pub oracle_min_eigenvalue: f64,
    /// 4r₁² − (r₃−r₄)²sin²φ₂, the exact PPT slack on this orbit.
    pub ppt_slack: f64,
    pub marginal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub r1: f64,
    pub r3: f64,
    pub r4: f64,
    pub zeta: f64,
    pub rows: Vec<DegenerateRow>,
    /// Fraction of non-marginal rows on which both verdicts agree.
    pub agreement: f64,
    /// φ₂ ∈ [0, π/2] where the published bound saturates, if it binds.
    pub published_boundary: Option<f64>,
    /// φ₂ ∈ [0, π/2] where the oracle verdict flips, by bisection.
    pub oracle_boundary: Option<f64>,
    /// Oracle verdicts equal the closed-form slack sign on every row.
    pub oracle_consistent: bool,
}

/// Compares the published degenerate-orbit bound with the dense oracle
/// along φ₂ ∈ [0, π] for the spectrum (r₁, r₁, r₃, r₄).
pub fn degenerate_cross_check(r1: f64, r3: f64, r4: f64, steps: usize, tol: &Tolerances) -> Result<DegenerateReport> {
    let r = OrderedSpectrum::with_tolerances([r1, r1, r3, r4], tol)?;
    if r3 <= 0.0 {
        return Err(Error::Domain("degenerate check needs r3 > 0".into()));
    }
    let zeta = r4 / r3;
    // at ζ = 1 the bound diverges, so every angle passes
    let crit = if zeta < 1.0 {
        degenerate_criterion(zeta)?
    } else {
        DegenerateBound { bound: f64::INFINITY, max_cos2_phi2: 1.0, unconstrained: true }
    };
    let state_at = |phi2: f64| {
        let frame = DiagonalizingFrame { phi2, ..Default::default() };
        reconstruct(&r, &frame, tol)
    };
    let mut rows = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let phi2 = PI * i as f64 / steps as f64;
        let v = ppt_oracle(&state_at(phi2)?, tol)?;
        let ppt_slack = 4.0 * r1 * r1 - (r3 - r4).powi(2) * phi2.sin().powi(2);
        rows.push(DegenerateRow {
            phi2,
            published: crit.unconstrained || phi2.cos().powi(2) <= crit.max_cos2_phi2,
            oracle: v.separable,
            oracle_min_eigenvalue: v.min_eigenvalue,
            ppt_slack,
            marginal: ppt_slack.abs() <= tol.band,
        });
    }
    let clear: Vec<_> = rows.iter().filter(|x| !x.marginal).collect();
    let agreement = if clear.is_empty() {
        1.0
    } else {
        clear.iter().filter(|x| x.published == x.oracle).count() as f64 / clear.len() as f64
    };
    let oracle_consistent = clear.iter().all(|x| x.oracle == (x.ppt_slack >= 0.0));

    let published_boundary = (!crit.unconstrained).then(|| crit.bound.sqrt().acos());
    let sep_at = |phi2: f64| -> Result<bool> { Ok(ppt_oracle(&state_at(phi2)?, tol)?.separable) };
    let oracle_boundary = if sep_at(0.0)? != sep_at(PI / 2.0)? {
        let (mut lo, mut hi) = (0.0, PI / 2.0);
        let at_lo = sep_at(lo)?;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if sep_at(mid)? == at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    } else {
        None
    };
    Ok(DegenerateReport {
        r1,
        r3,
        r4,
        zeta,
        rows,
        agreement,
        published_boundary,
        oracle_boundary,
        oracle_consistent,
    })
}

/// PPT boundary of p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4, by bisection on the sign of the
/// dense oracle's smallest eigenvalue.
pub fn werner_threshold(tol: &Tolerances) -> Result<f64> {
    let min_eig = |p: f64| -> Result<f64> { Ok(ppt_oracle(&XState::werner(p)?, tol)?.min_eigenvalue) };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if min_eig(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First (φ₁, φ₂) on an `n × n` grid over [0, π]² whose reconstructed state
/// the oracle calls separable.
pub fn find_separable_angles(r: &OrderedSpectrum, n: usize, tol: &Tolerances) -> Result<Option<(f64, f64)>> {
    let step = PI / (n.max(2) - 1) as f64;
    for i in 0..n.max(2) {
        for j in 0..n.max(2) {
            let frame = DiagonalizingFrame {
                phi1: i as f64 * step,
                phi2: j as f64 * step,
                ..Default::default()
            };
            if ppt_oracle(&reconstruct(r, &frame, tol)?, tol)?.separable {
                return Ok(Some((frame.phi1, frame.phi2)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::orbit::diagonalize;
    use crate::su4::local_group_element;
    use num_complex::Complex64 as C64;
    use std::f64::consts::FRAC_PI_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn spec(r: [f64; 4]) -> OrderedSpectrum {
        OrderedSpectrum::new(r).unwrap()
    }

    #[test]
    fn partial_transpose_index_rule() {
        let m = Matrix4::from_fn(|i, j| C64::new((4 * i + j) as f64, 0.0));
        let pt = partial_transpose(&m);
        assert_eq!(pt[(0, 1)], m[(1, 0)]);
        assert_eq!(pt[(0, 2)], m[(0, 2)]);
        assert_eq!(pt[(0, 3)].re, m[(1, 2)].re);
        assert_eq!(pt[(1, 2)].re, m[(0, 3)].re);
        assert_eq!(partial_transpose(&pt), m);
    }

    #[test]
    fn oracle_examples() {
        let t = tol();
        let v = ppt_oracle(&XState::maximally_mixed(), &t).unwrap();
        assert!((v.min_eigenvalue - 0.25).abs() < 1e-14 && v.separable);
        let v = ppt_oracle(&XState::bell_phi_plus(), &t).unwrap();
        assert!((v.min_eigenvalue + 0.5).abs() < 1e-14 && !v.separable);
        assert!(v.paths_agree(1e-14));
        let v = ppt_oracle(&XState::werner(1.0 / 3.0).unwrap(), &t).unwrap();
        assert!(v.min_eigenvalue.abs() < 1e-14 && v.separable);
    }

    #[test]
    fn elementwise_examples() {
        let t = tol();
        let v = ppt_elementwise(&XState::bell_phi_plus(), &t);
        assert_eq!((v.separable, v.margin, v.binding), (false, -0.25, Binding::Second));
        let (q, p) = ([0.7, 0.3], [0.4, 0.6]);
        let prod = XState::new([q[0] * p[0], q[0] * p[1], q[1] * p[0], q[1] * p[1]], ZERO, ZERO).unwrap();
        let v = ppt_elementwise(&prod, &t);
        assert!(v.separable && v.margin >= 0.0);
        assert_eq!(v.binding, Binding::None);
        assert!(ppt_elementwise(&XState::werner(0.2).unwrap(), &t).separable);
        assert!(!ppt_elementwise(&XState::werner(0.4).unwrap(), &t).separable);
    }

    #[test]
    fn spectral_examples() {
        let t = tol();
        let v = ineq_spectrum_angles(&spec([0.4, 0.3, 0.2, 0.1]), 0.0, 0.0, &t);
        assert!(v.separable);
        assert!((v.slack1 - 0.48).abs() < 1e-15 && (v.slack2 - 0.08).abs() < 1e-15);
        let v = ineq_spectrum_angles(&spec([0.5, 0.45, 0.05, 0.0]), FRAC_PI_2, 0.0, &t);
        assert!(!v.separable);
        assert!((v.slack2 + 0.0025).abs() < 1e-15);
        assert_eq!(v.binding, Binding::Second);
        let r = spec([0.3, 0.3, 0.2, 0.2]);
        let v = ineq_spectrum_angles(&r, 1.0, 1.0, &t);
        assert!(v.separable && (v.slack1 - 0.36).abs() < 1e-15);
        assert_eq!(v.binding, Binding::None);
    }

    #[test]
    fn spectral_slacks_are_four_times_elementwise() {
        let t = tol();
        let x = XState::new([0.31, 0.19, 0.22, 0.28], C64::new(0.08, -0.11), C64::new(-0.05, 0.09)).unwrap();
        let (r, f) = diagonalize(&x, &t).unwrap();
        let a = ineq_spectrum_angles(&r, f.phi1, f.phi2, &t);
        let b = ppt_elementwise(&x, &t);
        assert!((a.slack1 - 4.0 * b.slack1).abs() < 1e-15);
        assert!((a.slack2 - 4.0 * b.slack2).abs() < 1e-15);
    }

    #[test]
    fn psi_sweeps() {
        let t = tol();
        let s = angle_independence_check(&spec([0.25; 4]), 0.3, 0.4, 0.0, 0.0, 8, &t).unwrap();
        assert!(s.invariant && s.separable && s.evaluated == 64);
        let s = angle_independence_check(&spec([1.0, 0.0, 0.0, 0.0]), FRAC_PI_2, 0.0, 0.0, 0.0, 8, &t).unwrap();
        assert!(s.invariant && !s.separable);
        let s = angle_independence_check(&spec([0.5, 0.2, 0.2, 0.1]), 1.2, 2.0, 0.1, 0.2, 8, &t).unwrap();
        assert!(s.invariant && s.spread < 1e-14);
    }

    #[test]
    fn absolute_examples() {
        let t = tol();
        let v = absolutely_separable(&spec([0.25; 4]), &t);
        assert!(v.abs_separable && v.slack1 == 0.25 && v.slack2 == 0.25);
        assert!(absolutely_separable(&spec([0.3, 0.3, 0.2, 0.2]), &t).abs_separable);
        let v = absolutely_separable(&spec([0.7, 0.1, 0.1, 0.1]), &t);
        assert!(!v.abs_separable);
        assert!((v.slack1 + 0.32).abs() < 1e-15);
    }

    #[test]
    fn degenerate_bound_examples() {
        let b = degenerate_criterion(CRITICAL_RATIO).unwrap();
        assert!((b.bound - 1.0).abs() < 1e-12 && b.unconstrained);
        assert_eq!(degenerate_criterion(0.0).unwrap().max_cos2_phi2, 0.0);
        let b = degenerate_criterion(0.5).unwrap();
        assert_eq!((b.bound, b.max_cos2_phi2, b.unconstrained), (8.0, 1.0, true));
        assert!(!degenerate_criterion(0.1).unwrap().unconstrained);
        assert!(degenerate_criterion(1.0).is_err());
        assert!(degenerate_criterion(-0.1).is_err());
        assert!((critical_ratio_by_bisection(1e-13) - CRITICAL_RATIO).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cross_check_examples() {
        let t = tol();
        let rep = degenerate_cross_check(0.25, 0.25, 0.25, 16, &t).unwrap();
        assert!(rep.rows.iter().all(|r| r.oracle && r.published));
        assert_eq!(rep.agreement, 1.0);

        // ζ = 0: published bound allows only φ₂ = π/2, the oracle allows every φ₂
        let rep = degenerate_cross_check(0.45, 0.1, 0.0, 16, &t).unwrap();
        assert!(rep.oracle_consistent);
        assert!(rep.rows.iter().all(|r| r.oracle));
        assert!(rep.agreement < 0.2);
        assert!((rep.published_boundary.unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(rep.oracle_boundary, None);

        // small r₁: the oracle boundary is sin φ₂ = 2r₁/(r₃−r₄)
        let rep = degenerate_cross_check(0.05, 0.8, 0.1, 64, &t).unwrap();
        assert!(rep.oracle_consistent);
        let want = (2.0 * 0.05 / 0.7_f64).asin();
        assert!((rep.oracle_boundary.unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn werner_threshold_is_one_third() {
        assert!((werner_threshold(&tol()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn separable_angles_exist() {
        let t = tol();
        let hit = find_separable_angles(&spec([1.0, 0.0, 0.0, 0.0]), 5, &t).unwrap();
        assert_eq!(hit, Some((0.0, 0.0)));
    }

    #[test]
    fn local_conjugation_keeps_verdict() {
        let t = tol();
        let x = XState::new([0.31, 0.19, 0.22, 0.28], C64::new(0.08, -0.11), C64::new(-0.05, 0.09)).unwrap();
        let g = local_group_element(0.7, -1.9);
        let y = x.conjugate_by(&g.matrix, &t).unwrap();
        let (a, b) = (ppt_elementwise(&x, &t), ppt_elementwise(&y, &t));
        assert_eq!(a.separable, b.separable);
        assert!((a.margin - b.margin).abs() < 1e-15);
        let (a, b) = (ppt_oracle(&x, &t).unwrap(), ppt_oracle(&y, &t).unwrap());
        assert!((a.min_eigenvalue - b.min_eigenvalue).abs() < 1e-14);
    }
}
