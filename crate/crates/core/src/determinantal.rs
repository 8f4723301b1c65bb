//! Window probabilities of the determinantal process and exact sampling.
//!
//! For positions `e_1 < ... < e_k` the probability of seeing ones at all of
//! them is `det [fhat(e_j - e_i)]_{i,j}`. A window pattern mixing required
//! ones, required zeros and unconstrained positions is evaluated by the
//! signed determinant
//!
//! ```text
//! P(pattern) = (-1)^{|Z|} det (K_W - I_Z),
//! ```
//!
//! where `W` is the set of constrained positions, `K_W` the kernel matrix on
//! `W`, `Z` the positions required to be zero and `I_Z` the diagonal 0/1
//! matrix marking them. An inclusion-exclusion oracle over the zero set is
//! kept alongside as an independent route to the same number.

use crate::linalg;
use crate::symbol::TrigSymbolDeg1;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Largest zero-constraint count accepted by the inclusion-exclusion oracle;
/// the subset sum is exponential in it.
pub const MAX_IE_ZEROS: usize = 20;

/// Imaginary residue above which a kernel determinant is reported as a bug
/// rather than rounded away.
const IMAG_TOL: f64 = 1e-9;

/// Floor for the running continuant ratio in sequential sampling.
const RATIO_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeterminantalError {
    #[error("pattern must be nonempty")]
    EmptyPattern,
    #[error("invalid pattern character {0:?}, expected '1', '0' or '.'")]
    InvalidPatternChar(char),
    #[error("positions must be strictly increasing")]
    PositionsNotIncreasing,
    #[error("kernel determinant has imaginary residue {0:e}")]
    NonRealDeterminant(f64),
    #[error("{0} zero constraints exceed the inclusion-exclusion limit of {MAX_IE_ZEROS}")]
    TooManyZeros(usize),
    #[error("conditional law degenerate at step {step}")]
    DegenerateConditional { step: usize },
}

/// Constraint at one window position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    One,
    Zero,
    Free,
}

/// A nonempty constraint word over consecutive window positions `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    constraints: Vec<Constraint>,
}

impl Pattern {
    pub fn new(constraints: Vec<Constraint>) -> Result<Self, DeterminantalError> {
        if constraints.is_empty() {
            return Err(DeterminantalError::EmptyPattern);
        }
        Ok(Self { constraints })
    }

    /// Parses a word over `1` (one), `0` (zero), `.` (free), e.g. `"1.0"`.
    pub fn parse(text: &str) -> Result<Self, DeterminantalError> {
        let constraints = text
            .chars()
            .map(|ch| match ch {
                '1' => Ok(Constraint::One),
                '0' => Ok(Constraint::Zero),
                '.' => Ok(Constraint::Free),
                other => Err(DeterminantalError::InvalidPatternChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(constraints)
    }

    /// All-ones pattern of the given length.
    pub fn all_ones(len: usize) -> Self {
        assert!(len >= 1, "pattern must be nonempty");
        Self {
            constraints: vec![Constraint::One; len],
        }
    }

    /// All-free pattern of the given length.
    pub fn all_free(len: usize) -> Self {
        assert!(len >= 1, "pattern must be nonempty");
        Self {
            constraints: vec![Constraint::Free; len],
        }
    }

    /// Fully constrained pattern of the given length whose position `i` is
    /// One iff bit `i` of `mask` is set.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!((1..=64).contains(&len), "mask patterns hold 1..=64 positions");
        Self {
            constraints: (0..len)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Constraint::One
                    } else {
                        Constraint::Zero
                    }
                })
                .collect(),
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn get(&self, i: usize) -> Constraint {
        self.constraints[i]
    }

    /// Indices constrained to one.
    pub fn one_positions(&self) -> Vec<usize> {
        self.positions_of(Constraint::One)
    }

    /// Indices constrained to zero.
    pub fn zero_positions(&self) -> Vec<usize> {
        self.positions_of(Constraint::Zero)
    }

    fn positions_of(&self, which: Constraint) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == which)
            .map(|(i, _)| i)
            .collect()
    }

    /// Swaps One and Zero constraints, leaving Free positions free.
    pub fn flipped(&self) -> Self {
        Self {
            constraints: self
                .constraints
                .iter()
                .map(|c| match c {
                    Constraint::One => Constraint::Zero,
                    Constraint::Zero => Constraint::One,
                    Constraint::Free => Constraint::Free,
                })
                .collect(),
        }
    }

    /// Concatenates `self`, `gap` free positions, then `other`.
    pub fn joined(&self, gap: usize, other: &Pattern) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.extend(std::iter::repeat_n(Constraint::Free, gap));
        constraints.extend_from_slice(&other.constraints);
        Self { constraints }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            f.write_str(match c {
                Constraint::One => "1",
                Constraint::Zero => "0",
                Constraint::Free => ".",
            })?;
        }
        Ok(())
    }
}

/// Kernel matrix `[fhat(e_j - e_i)]` over a finite position set.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    size: usize,
    entries: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.size && j < self.size, "kernel index out of range");
        self.entries[i * self.size + j]
    }

    fn determinant(&self) -> Complex64 {
        linalg::determinant(self.size, self.entries.clone())
    }
}

/// Builds the kernel matrix for strictly increasing integer positions.
pub fn kernel_matrix(
    symbol: &TrigSymbolDeg1,
    positions: &[i64],
) -> Result<KernelMatrix, DeterminantalError> {
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DeterminantalError::PositionsNotIncreasing);
    }
    let n = positions.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(symbol.fourier_coeff(positions[j] - positions[i]));
        }
    }
    Ok(KernelMatrix { size: n, entries })
}

fn real_determinant(det: Complex64) -> Result<f64, DeterminantalError> {
    if det.im.abs() > IMAG_TOL {
        return Err(DeterminantalError::NonRealDeterminant(det.im));
    }
    Ok(det.re)
}

/// `P(ones at all positions)`, the determinant of the kernel matrix. The
/// empty position set has probability 1.
pub fn ones_probability(
    symbol: &TrigSymbolDeg1,
    positions: &[i64],
) -> Result<f64, DeterminantalError> {
    real_determinant(kernel_matrix(symbol, positions)?.determinant())
}

/// Probability of a constraint pattern over a window of consecutive
/// positions, via the signed determinant `(-1)^{|Z|} det(K_W - I_Z)`.
pub fn pattern_probability(
    symbol: &TrigSymbolDeg1,
    pattern: &Pattern,
) -> Result<f64, DeterminantalError> {
    let fixed: Vec<(i64, Constraint)> = pattern
        .constraints()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != Constraint::Free)
        .map(|(i, &c)| (i as i64, c))
        .collect();
    if fixed.is_empty() {
        return Ok(1.0);
    }
    let n = fixed.len();
    let mut m = Vec::with_capacity(n * n);
    for &(pi, _) in &fixed {
        for &(pj, _) in &fixed {
            m.push(symbol.fourier_coeff(pj - pi));
        }
    }
    let mut zeros = 0usize;
    for (row, &(_, c)) in fixed.iter().enumerate() {
        if c == Constraint::Zero {
            m[row * n + row] -= Complex64::new(1.0, 0.0);
            zeros += 1;
        }
    }
    let det = real_determinant(linalg::determinant(n, m))?;
    Ok(if zeros % 2 == 1 { -det } else { det })
}

/// Independent評 route for [`pattern_probability`]: inclusion-exclusion over
/// the zero set, `sum over S subset Z of (-1)^{|S|} P(ones at O union S)`.
/// Rejects more than [`MAX_IE_ZEROS`] zero constraints.
pub fn pattern_probability_ie(
    symbol: &TrigSymbolDeg1,
    pattern: &Pattern,
) -> Result<f64, DeterminantalError> {
    let ones = pattern.one_positions();
    let zeros = pattern.zero_positions();
    if zeros.len() > MAX_IE_ZEROS {
        return Err(DeterminantalError::TooManyZeros(zeros.len()));
    }
    let mut total = 0.0;
    for mask in 0u64..(1u64 << zeros.len()) {
        let mut positions: Vec<i64> = ones.iter().map(|&i| i as i64).collect();
        for (bit, &z) in zeros.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                positions.push(z as i64);
            }
        }
        positions.sort_unstable();
        let term = ones_probability(symbol, &positions)?;
        if mask.count_ones() % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    Ok(total)
}

/// Conditional law of the next bit given a sampled prefix.
///
/// The signed prefix determinants satisfy the tridiagonal continuant
/// recurrence `det M_i = d_{i-1} det M_{i-1} - |a|^2 det M_{i-2}` with
/// diagonal `d_j = b` where bit `j` is one and `b - 1` where it is zero, so
/// the one-probability of the next bit is `b - |a|^2 / rho` with
/// `rho = det M_i / det M_{i-1}` carried forward in O(1) per step. Prefix
/// determinants themselves decay geometrically and would underflow near
/// window length 10^5; the ratio stays bounded.
pub(crate) struct WindowSampler {
    b: f64,
    a2: f64,
    ratio: f64,
    step: usize,
}

impl WindowSampler {
    pub(crate) fn new(symbol: &TrigSymbolDeg1) -> Self {
        Self {
            b: symbol.b(),
            a2: symbol.a_mag() * symbol.a_mag(),
            ratio: f64::NAN,
            step: 0,
        }
    }

    /// `P(next bit = 1 | prefix)`, before clamping.
    pub(crate) fn next_one_probability(&self) -> Result<f64, DeterminantalError> {
        if self.step == 0 {
            return Ok(self.b);
        }
        if self.ratio.abs() < RATIO_FLOOR {
            return Err(DeterminantalError::DegenerateConditional { step: self.step });
        }
        Ok(self.b - self.a2 / self.ratio)
    }

    /// Appends a sampled bit to the prefix.
    pub(crate) fn push(&mut self, bit: bool) {
        let diag = if bit { self.b } else { self.b - 1.0 };
        self.ratio = if self.step == 0 {
            diag
        } else {
            diag - self.a2 / self.ratio
        };
        self.step += 1;
    }
}

/// Draws an exact length-`n` window of the process, one bit per uniform
/// variate, conditioning each bit on the prefix sampled so far.
pub fn sample_window<R: Rng + ?Sized>(
    symbol: &TrigSymbolDeg1,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u8>, DeterminantalError> {
    let mut sampler = WindowSampler::new(symbol);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let q = sampler.next_one_probability()?.clamp(0.0, 1.0);
        let bit = rng.gen::<f64>() < q;
        sampler.push(bit);
        out.push(u8::from(bit));
    }
    Ok(out)
}
