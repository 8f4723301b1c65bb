//! Trigonometric symbols on the unit circle.
//!
//! The degree-1 symbol is
//!
//! ```text
//! f(x) = b + 2|a| cos(2 pi x - phi),    x in [0, 1),
//! ```
//!
//! with Fourier coefficients `fhat(0) = b`, `fhat(1) = a = |a| e^{i phi}`,
//! `fhat(-1) = conj(a)` and zero beyond degree 1, where
//! `fhat(k) = integral of f(x) e^{-i 2 pi k x} dx` over `[0, 1]`.
//! A symbol is admissible when it maps into `[0, 1]`, which for degree 1 is
//! exactly `b - 2|a| >= 0` and `b + 2|a| <= 1`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Tolerance used by the grid admissibility check for range violations.
const RANGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("symbol parameters must be finite")]
    NotFinite,
    #[error("|a| = {0} violates |a| >= 0")]
    NegativeMagnitude(f64),
    #[error("b - 2|a| = {0} violates b - 2|a| >= 0 (symbol dips below 0)")]
    DipsBelowZero(f64),
    #[error("b + 2|a| = {0} violates b + 2|a| <= 1 (symbol exceeds 1)")]
    ExceedsOne(f64),
    #[error("coefficient list must be nonempty")]
    EmptyCoefficients,
    #[error("constant coefficient must be real, got imaginary part {0}")]
    NonRealConstant(f64),
}

/// Admissible degree-1 symbol, stored as `(b, |a|, phi)` with the phase
/// reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigSymbolDeg1 {
    b: f64,
    a_mag: f64,
    a_phase: f64,
}

impl TrigSymbolDeg1 {
    /// Validates admissibility and builds the symbol. The phase may be any
    /// finite real; it is reduced modulo `2 pi`.
    pub fn new(b: f64, a_mag: f64, a_phase: f64) -> Result<Self, SymbolError> {
        if !(b.is_finite() && a_mag.is_finite() && a_phase.is_finite()) {
            return Err(SymbolError::NotFinite);
        }
        if a_mag < 0.0 {
            return Err(SymbolError::NegativeMagnitude(a_mag));
        }
        let min = b - 2.0 * a_mag;
        if min < 0.0 {
            return Err(SymbolError::DipsBelowZero(min));
        }
        let max = b + 2.0 * a_mag;
        if max > 1.0 {
            return Err(SymbolError::ExceedsOne(max));
        }
        Ok(Self {
            b,
            a_mag,
            a_phase: a_phase.rem_euclid(TAU),
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn a_mag(&self) -> f64 {
        self.a_mag
    }

    /// Phase of the off-diagonal coefficient, in `[0, 2 pi)`.
    pub fn a_phase(&self) -> f64 {
        self.a_phase
    }

    /// The coefficient `a = fhat(1)` in Cartesian form.
    pub fn a(&self) -> Complex64 {
        Complex64::from_polar(self.a_mag, self.a_phase)
    }

    /// Fourier coefficient at lag `k`: `b` at 0, `a` at 1, `conj(a)` at -1,
    /// zero for `|k| >= 2`.
    pub fn fourier_coeff(&self, k: i64) -> Complex64 {
        match k {
            0 => Complex64::new(self.b, 0.0),
            1 => self.a(),
            -1 => self.a().conj(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Pointwise value `f(x) = b + 2|a| cos(2 pi x - phi)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.b + 2.0 * self.a_mag * (TAU * x - self.a_phase).cos()
    }

    /// The symbol of `g = 1 - f`: constant `1 - b`, same magnitude, phase
    /// advanced by `pi`. Admissibility of `f` makes `g` admissible, so this
    /// cannot fail.
    pub fn complement(&self) -> TrigSymbolDeg1 {
        TrigSymbolDeg1 {
            b: 1.0 - self.b,
            a_mag: self.a_mag,
            a_phase: (self.a_phase + PI).rem_euclid(TAU),
        }
    }

    /// The same symbol as a general coefficient list `[b, a]`.
    pub fn to_general(&self) -> TrigSymbolGeneral {
        TrigSymbolGeneral {
            coeffs: vec![Complex64::new(self.b, 0.0), self.a()],
        }
    }
}

/// Trigonometric symbol of arbitrary degree, stored as the coefficients
/// `c_0, c_1, ..., c_m` of `f(x) = c_0 + 2 sum_k Re(c_k e^{-i 2 pi k x})`,
/// so that `fhat(k) = c_k` for `0 <= k <= m` and `fhat(-k) = conj(c_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSymbolGeneral {
    coeffs: Vec<Complex64>,
}

impl TrigSymbolGeneral {
    /// Builds a symbol from `[c_0, ..., c_m]`. The constant term must be
    /// real for `f` to be real-valued; no range check is performed here,
    /// see [`TrigSymbolGeneral::is_admissible_on_grid`].
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SymbolError> {
        if coeffs.is_empty() {
            return Err(SymbolError::EmptyCoefficients);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SymbolError::NotFinite);
        }
        if coeffs[0].im != 0.0 {
            return Err(SymbolError::NonRealConstant(coeffs[0].im));
        }
        Ok(Self { coeffs })
    }

    /// Highest stored lag `m`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn fourier_coeff(&self, k: i64) -> Complex64 {
        let mag = k.unsigned_abs() as usize;
        if mag >= self.coeffs.len() {
            return Complex64::new(0.0, 0.0);
        }
        if k >= 0 {
            self.coeffs[mag]
        } else {
            self.coeffs[mag].conj()
        }
    }

    /// Pointwise value; real by conjugate symmetry of the coefficients.
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut v = self.coeffs[0].re;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let angle = -TAU * k as f64 * x;
            v += 2.0 * (c * Complex64::from_polar(1.0, angle)).re;
        }
        v
    }

    /// Checks `0 <= f <= 1` (within 1e-12) over the uniform grid
    /// `x = i / grid_size`. Degree <= 1 symbols short-circuit to the exact
    /// closed-form extrema `c_0 -+ 2|c_1|` instead of scanning.
    pub fn is_admissible_on_grid(&self, grid_size: usize) -> bool {
        assert!(grid_size >= 2, "grid must have at least two points");
        if self.degree() <= 1 {
            let b = self.coeffs[0].re;
            let two_mag = 2.0 * self.fourier_coeff(1).norm();
            return b - two_mag >= -RANGE_TOL && b + two_mag <= 1.0 + RANGE_TOL;
        }
        (0..grid_size).all(|i| {
            let v = self.evaluate(i as f64 / grid_size as f64);
            (-RANGE_TOL..=1.0 + RANGE_TOL).contains(&v)
        })
    }
}
