//! Seeded random X-states and the tetrahedron picture of the spectrum simplex.
//!
//! Streams use ChaCha8 seeded with `seed_from_u64`, so a (measure, seed,
//! count) triple fixes the output bit for bit on every platform.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::orbit::{reconstruct, DiagonalizingFrame, OrderedSpectrum};
use crate::separability::absolutely_separable;
use crate::{Error, Result, Tolerances, XState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// Uniform on the 3-simplex of spectra, pair-sorted, with uniform angles.
    SpectrumUniform,
    /// Populations uniform on the simplex, each coherence uniform on its
    /// positivity disc (by rejection from the bounding square).
    ParamUniformRejection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub measure: Measure,
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(measure: Measure, seed: u64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        Ok(Self { measure, seed, count })
    }
}

/// Infinite source of draws. [`sample_spectrum`] and [`sample_xstate`] cap
/// it at the configured count.
pub struct SimplexSampler {
    rng: ChaCha8Rng,
    tol: Tolerances,
}

impl SimplexSampler {
    pub fn new(seed: u64, tol: Tolerances) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            tol,
        }
    }

    /// Uniform point of the 3-simplex from normalized exponential spacings.
    pub fn simplex_point(&mut self) -> [f64; 4] {
        let e: [f64; 4] = std::array::from_fn(|_| self.rng.sample::<f64, _>(Exp1));
        let s: f64 = e.iter().sum();
        e.map(|x| x / s)
    }

    pub fn spectrum(&mut self) -> OrderedSpectrum {
        loop {
            let [a, b, c, d] = self.simplex_point();
            let r = [a.max(b), a.min(b), c.max(d), c.min(d)];
            if let Ok(s) = OrderedSpectrum::with_tolerances(r, &self.tol) {
                return s;
            }
        }
    }

    pub fn frame(&mut self) -> DiagonalizingFrame {
        DiagonalizingFrame {
            phi1: self.rng.random_range(0.0..=PI),
            psi1: self.rng.random_range(0.0..2.0 * PI),
            phi2: self.rng.random_range(0.0..=PI),
            psi2: self.rng.random_range(0.0..2.0 * PI),
            omega: 0.0,
        }
    }

    pub fn xstate(&mut self, measure: Measure) -> XState {
        loop {
            let x = match measure {
                Measure::SpectrumUniform => {
                    let r = self.spectrum();
                    let f = self.frame();
                    reconstruct(&r, &f, &self.tol)
                }
                Measure::ParamUniformRejection => {
                    let d = self.simplex_point();
                    let c14 = self.disc((d[0] * d[3]).sqrt());
                    let c23 = self.disc((d[1] * d[2]).sqrt());
                    XState::with_tolerances(d, c14, c23, &self.tol)
                }
            };
            if let Ok(x) = x {
                return x;
            }
        }
    }

    fn disc(&mut self, radius: f64) -> C64 {
        if radius == 0.0 {
            return C64::new(0.0, 0.0);
        }
        loop {
            let x: f64 = self.rng.random_range(-1.0..=1.0);
            let y: f64 = self.rng.random_range(-1.0..=1.0);
            if x * x + y * y <= 1.0 {
                return C64::new(x * radius, y * radius);
            }
        }
    }
}

pub fn sample_spectrum(cfg: &SamplerConfig, tol: &Tolerances) -> impl Iterator<Item = OrderedSpectrum> {
    let mut s = SimplexSampler::new(cfg.seed, *tol);
    (0..cfg.count).map(move |_| s.spectrum())
}

pub fn sample_xstate(cfg: &SamplerConfig, tol: &Tolerances) -> impl Iterator<Item = XState> {
    let mut s = SimplexSampler::new(cfg.seed, *tol);
    let measure = cfg.measure;
    (0..cfg.count).map(move |_| s.xstate(measure))
}

/// Places the corners A, B, C, D of the spectrum simplex on a regular
/// tetrahedron.
///
/// A = (1,0,0,0), B = (½,½,0,0), C = (0,0,1,0), D = (0,0,½,½); a spectrum
/// has barycentric weights (r₁−r₂, 2r₂, r₃−r₄, 2r₄) over them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetrahedronEmbedding;

impl TetrahedronEmbedding {
    pub const LABELS: [&'static str; 4] = ["A", "B", "C", "D"];
    pub const SPECTRA: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.5, 0.5, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.5, 0.5],
    ];
    pub const XYZ: [[f64; 3]; 4] = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    /// Corners of the fully ordered part r₁ ≥ r₂ ≥ r₃ ≥ r₄: A, B, C′, D′.
    pub const FULL_ORDER_SPECTRA: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.5, 0.5, 0.0, 0.0],
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0],
        [0.25, 0.25, 0.25, 0.25],
    ];

    pub fn weights(r: &[f64; 4]) -> [f64; 4] {
        [r[0] - r[1], 2.0 * r[1], r[2] - r[3], 2.0 * r[3]]
    }

    pub fn embed(r: &[f64; 4]) -> [f64; 3] {
        let w = Self::weights(r);
        std::array::from_fn(|k| (0..4).map(|v| w[v] * Self::XYZ[v][k]).sum())
    }

    /// Inverse of [`TetrahedronEmbedding::embed`] on the affine hull.
    pub fn invert(p: &[f64; 3]) -> [f64; 4] {
        let [x, y, z] = *p;
        let a = (1.0 + x + y + z) / 4.0;
        let b = (1.0 + x - y - z) / 4.0;
        let c = (1.0 - x + y - z) / 4.0;
        let d = (1.0 - x - y + z) / 4.0;
        [a + b / 2.0, b / 2.0, c + d / 2.0, d / 2.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub r: [f64; 4],
    pub xyz: [f64; 3],
    pub abs_separable: bool,
    /// r₂ ≥ r₃, i.e. inside the fully ordered tetrahedron A B C′ D′.
    pub full_order: bool,
}

/// Barycentric grid with `resolution` subdivisions per edge of ABCD.
pub fn region_export(resolution: usize, tol: &Tolerances) -> Result<Vec<RegionPoint>> {
    if resolution < 2 {
        return Err(Error::Domain(format!("resolution {resolution} below 2")));
    }
    let n = resolution;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            for k in 0..=n - i - j {
                let l = n - i - j - k;
                let w = [i, j, k, l].map(|v| v as f64 / n as f64);
                let r = [w[0] + w[1] / 2.0, w[1] / 2.0, w[2] + w[3] / 2.0, w[3] / 2.0];
                let spec = OrderedSpectrum::with_tolerances(r, tol)?;
                out.push(RegionPoint {
                    r,
                    xyz: TetrahedronEmbedding::embed(&r),
                    abs_separable: absolutely_separable(&spec, tol).abs_separable,
                    full_order: r[1] >= r[2] - tol.structural,
                });
            }
        }
    }
    Ok(out)
}

pub const REGION_CSV_HEADER: &str = "r1,r2,r3,r4,x,y,z,abs_sep,full_order";

/// Comment lines carrying the vertex table and tolerances.
pub fn region_csv_preamble(tol: &Tolerances) -> Vec<String> {
    let mut lines = Vec::new();
    for (v, label) in TetrahedronEmbedding::LABELS.iter().enumerate() {
        let r = TetrahedronEmbedding::SPECTRA[v];
        let p = TetrahedronEmbedding::XYZ[v];
        lines.push(format!(
            "# vertex {label} r=({},{},{},{}) xyz=({},{},{})",
            r[0], r[1], r[2], r[3], p[0], p[1], p[2]
        ));
    }
    for (label, r) in ["A", "B", "C'", "D'"].iter().zip(TetrahedronEmbedding::FULL_ORDER_SPECTRA) {
        let p = TetrahedronEmbedding::embed(&r);
        lines.push(format!(
            "# full-order vertex {label} r=({},{},{},{}) xyz=({},{},{})",
            r[0], r[1], r[2], r[3], p[0], p[1], p[2]
        ));
    }
    lines.push(format!(
        "# tolerances structural={} spectral={} band={}",
        tol.structural, tol.spectral, tol.band
    ));
    lines
}

pub fn region_csv_row(p: &RegionPoint) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        p.r[0], p.r[1], p.r[2], p.r[3], p.xyz[0], p.xyz[1], p.xyz[2], p.abs_separable as u8, p.full_order as u8
    )
}

pub fn write_region_csv<W: Write>(mut w: W, points: &[RegionPoint], tol: &Tolerances) -> io::Result<()> {
    for line in region_csv_preamble(tol) {
        writeln!(w, "{line}")?;
    }
    writeln!(w, "{REGION_CSV_HEADER}")?;
    for p in points {
        writeln!(w, "{}", region_csv_row(p))?;
    }
    Ok(())
}
