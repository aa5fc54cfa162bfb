//! Truncated sine-series states and their geometry.
//!
//! A state holds the first `N` Fourier sine coefficients of position and
//! velocity on (0, 1) with homogeneous Dirichlet ends. The free wave flow acts
//! mode by mode as a rotation, so propagation is exact; the module also
//! provides the energies, the restricted mass matrices `∫_ω sin(mπx)sin(nπx)`
//! in closed form, pointwise synthesis, and coefficient recovery from uniform
//! samples.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// sin(π t) with exact zeros at integer t.
///
/// Reduces the argument by the exact IEEE remainder modulo the period 2 before
/// calling `sin`, so multiples of π map to exactly 0.0 and the absolute error
/// stays near one ulp of the reduced argument even for large t. All spatial
/// trigonometry in this crate goes through here: it makes boundary values,
/// full-domain mass matrices, and whole-period phases exact rather than
/// merely small.
pub(crate) fn sinpi(t: f64) -> f64 {
    let r = t % 2.0;
    if r == 0.0 || r == 1.0 || r == -1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// sin and cos of nπr for a 1-based mode index, with exact values whenever
/// n·r is an integer (the mode has returned to its axis). Keeps whole-period
/// propagation bitwise exact and the phase argument small for every mode.
pub(crate) fn phase_sin_cos(n: usize, r: f64) -> (f64, f64) {
    let ph = (n as f64 * r) % 2.0;
    if ph == 0.0 {
        (0.0, 1.0)
    } else if ph == 1.0 || ph == -1.0 {
        (0.0, -1.0)
    } else {
        (PI * ph).sin_cos()
    }
}

/// Which field of a state to synthesize on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Position,
    Velocity,
}

/// Convention for the squared weak (L² × H⁻¹-style) norm.
///
/// `Coefficient` is the plain coefficient sum Σ (aₙ² + bₙ²/(nπ)²);
/// `Integral` carries the ∫ sin² = 1/2 factor and is half of that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakNormConvention {
    Integral,
    Coefficient,
}

/// Truncated sine-series state: position Σ aₙ sin(nπx) and velocity
/// Σ bₙ sin(nπx), n = 1..=N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModalState {
    pos: Vec<f64>,
    vel: Vec<f64>,
}

impl ModalState {
    /// Builds a state from position and velocity coefficient vectors of equal,
    /// nonzero length; all entries must be finite.
    pub fn new(pos: Vec<f64>, vel: Vec<f64>) -> Result<Self> {
        if pos.is_empty() {
            return Err(Error::EmptyState);
        }
        if pos.len() != vel.len() {
            return Err(Error::DimensionMismatch {
                what: "velocity coefficients",
                expected: pos.len(),
                actual: vel.len(),
            });
        }
        for &c in pos.iter().chain(&vel) {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "coefficient",
                    value: c,
                });
            }
        }
        Ok(Self { pos, vel })
    }

    /// The zero state with `n_modes` modes.
    pub fn zero(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::EmptyState);
        }
        Ok(Self {
            pos: vec![0.0; n_modes],
            vel: vec![0.0; n_modes],
        })
    }

    /// Number of retained modes.
    pub fn n_modes(&self) -> usize {
        self.pos.len()
    }

    /// Position coefficients a₁..a_N.
    pub fn position_coeffs(&self) -> &[f64] {
        &self.pos
    }

    /// Velocity coefficients b₁..b_N.
    pub fn velocity_coeffs(&self) -> &[f64] {
        &self.vel
    }

    /// Advances the free wave flow by `dt` (any sign). Exact per mode:
    ///
    /// aₙ' = aₙ cos(nπ dt) + bₙ sin(nπ dt)/(nπ)
    /// bₙ' = −aₙ nπ sin(nπ dt) + bₙ cos(nπ dt)
    ///
    /// The flow has period 2, so `dt` is first reduced modulo 2 (the IEEE
    /// remainder is exact); whole periods therefore return the state bitwise
    /// unchanged, and `propagate(s) ∘ propagate(t) = propagate(s + t)` holds
    /// to rounding.
    pub fn propagate(&self, dt: f64) -> Result<Self> {
        if !dt.is_finite() {
            return Err(Error::NonFinite {
                what: "dt",
                value: dt,
            });
        }
        let r = dt % 2.0;
        let n = self.pos.len();
        let mut pos = Vec::with_capacity(n);
        let mut vel = Vec::with_capacity(n);
        for (k, (&a, &b)) in self.pos.iter().zip(&self.vel).enumerate() {
            let w = (k + 1) as f64 * PI;
            let (s, c) = phase_sin_cos(k + 1, r);
            pos.push(a * c + b * s / w);
            vel.push(-a * w * s + b * c);
        }
        Ok(Self { pos, vel })
    }

    /// Squared energy norm of the pair (u, u_t) in H¹₀ × L²:
    /// ∫ u_x² + ∫ u_t² = (1/2) Σ ((nπ aₙ)² + bₙ²).
    pub fn energy(&self) -> f64 {
        let mut sum = 0.0;
        for (k, (&a, &b)) in self.pos.iter().zip(&self.vel).enumerate() {
            let w = (k + 1) as f64 * PI;
            sum += (w * a) * (w * a) + b * b;
        }
        0.5 * sum
    }

    /// Squared weak norm under the chosen convention (see
    /// [`WeakNormConvention`]).
    pub fn weak_norm_sq(&self, convention: WeakNormConvention) -> f64 {
        let mut sum = 0.0;
        for (k, (&a, &b)) in self.pos.iter().zip(&self.vel).enumerate() {
            let w = (k + 1) as f64 * PI;
            sum += a * a + (b / w) * (b / w);
        }
        match convention {
            WeakNormConvention::Coefficient => sum,
            WeakNormConvention::Integral => 0.5 * sum,
        }
    }

    /// Synthesizes the selected field at the given points of [0, 1].
    pub fn evaluate(&self, points: &[f64], field: Field) -> Result<Vec<f64>> {
        let coeffs = match field {
            Field::Position => &self.pos,
            Field::Velocity => &self.vel,
        };
        let mut values = Vec::with_capacity(points.len());
        for &x in points {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::PointOutsideDomain { value: x });
            }
            let mut v = 0.0;
            for (k, &c) in coeffs.iter().enumerate() {
                v += c * sinpi((k + 1) as f64 * x);
            }
            values.push(v);
        }
        Ok(values)
    }

    /// Returns a copy with `delta` added to the velocity coefficients.
    pub(crate) fn with_velocity_kick(&self, delta: &[f64]) -> Self {
        let vel = self.vel.iter().zip(delta).map(|(&b, &d)| b + d).collect();
        Self {
            pos: self.pos.clone(),
            vel,
        }
    }
}

/// A nondegenerate subinterval ω = (lo, hi) of the domain (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubInterval {
    lo: f64,
    hi: f64,
}

impl SubInterval {
    /// Validates 0 ≤ lo < hi ≤ 1.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::BadSubInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The full domain (0, 1).
    pub fn full() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Restricted mass matrix of the first `n_modes` sine modes on this
    /// subinterval; see [`MassMatrix::new`].
    pub fn mass_matrix(&self, n_modes: usize) -> MassMatrix {
        MassMatrix::new(*self, n_modes)
    }
}

/// The symmetric matrix E with entries E(m,n) = ∫_ω sin(mπx) sin(nπx) dx,
/// evaluated in closed form (no quadrature).
#[derive(Debug, Clone, PartialEq)]
pub struct MassMatrix {
    omega: SubInterval,
    mat: DMatrix<f64>,
}

/// Antiderivative of sin(mπx)sin(nπx) evaluated at x, for 1-based modes m, n.
/// Exact at integer multiples of 1/(m±n) thanks to [`sinpi`]; in particular
/// the full-domain matrix comes out exactly diag(1/2).
fn overlap_antiderivative(m: usize, n: usize, x: f64) -> f64 {
    if m == n {
        let k = 2 * m;
        x / 2.0 - sinpi(k as f64 * x) / (2.0 * k as f64 * PI)
    } else {
        let d = m as f64 - n as f64;
        let s = (m + n) as f64;
        sinpi(d * x) / (2.0 * d * PI) - sinpi(s * x) / (2.0 * s * PI)
    }
}

impl MassMatrix {
    /// Builds the n×n matrix for modes 1..=n on ω.
    pub fn new(omega: SubInterval, n_modes: usize) -> Self {
        let n = n_modes.max(1);
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = overlap_antiderivative(i + 1, j + 1, omega.hi)
                    - overlap_antiderivative(i + 1, j + 1, omega.lo);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
        Self { omega, mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn omega(&self) -> SubInterval {
        self.omega
    }

    /// Entry for 0-based mode indices (i, j), i.e. modes i+1 and j+1.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    /// The underlying dense matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Matrix-vector product E·c.
    pub fn apply(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "mass-matrix operand",
                expected: self.dim(),
                actual: c.len(),
            });
        }
        let out = (0..self.dim())
            .map(|i| {
                c.iter()
                    .enumerate()
                    .map(|(j, &cj)| self.mat[(i, j)] * cj)
                    .sum()
            })
            .collect();
        Ok(out)
    }

    /// Quadratic form vᵀ E v = ∫_ω |Σ vₙ sin(nπx)|² dx.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        let ev = self.apply(v)?;
        Ok(v.iter().zip(&ev).map(|(&a, &b)| a * b).sum())
    }

    /// Smallest eigenvalue (symmetric eigensolve). For short subintervals and
    /// many modes the true value sinks below f64 resolution and the returned
    /// number is accurate only to ~1e-16 absolutely.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Recovers the first `n_modes` sine coefficients from samples taken at the
/// interior points x_j = j/(m+1), j = 1..=m, of a uniform grid.
///
/// Uses the composite trapezoid rule for cₙ = 2∫₀¹ f sin(nπx) dx, which by
/// discrete sine orthogonality is exact (to rounding) whenever the sampled
/// function is band-limited to at most m modes. Endpoint values are not taken:
/// they multiply sin(0) = sin(nπ) = 0 and cannot contribute.
pub fn coeffs_from_samples(samples: &[f64], n_modes: usize) -> Result<Vec<f64>> {
    if n_modes == 0 {
        return Err(Error::EmptyState);
    }
    let m = samples.len();
    if m < 4 * n_modes {
        return Err(Error::GridTooCoarse {
            needed: 4 * n_modes,
            actual: m,
        });
    }
    for &s in samples {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                what: "sample",
                value: s,
            });
        }
    }
    let h = 1.0 / (m + 1) as f64;
    let mut coeffs = Vec::with_capacity(n_modes);
    for n in 1..=n_modes {
        let mut acc = 0.0;
        for (j, &s) in samples.iter().enumerate() {
            acc += s * sinpi(n as f64 * (j + 1) as f64 * h);
        }
        coeffs.push(2.0 * h * acc);
    }
    Ok(coeffs)
}
