//! Exact cross-checks between the determinantal and factor descriptions.
//!
//! The factor side is evaluated without sampling: box endpoints cut `[0, 1]`
//! into intervals on which membership is constant, so integrating out the
//! i.i.d. uniforms is a product of small transfer matrices
//!
//! ```text
//! M_c[s][t] = |I_t| * [cell (I_s, I_t) consistent with constraint c],
//! ```
//!
//! applied left-to-right along the pattern, starting from the interval
//! length vector. This is exact up to floating-point rounding, which lets
//! pattern probabilities, run probabilities and per-label-sequence masses
//! from the geometry be compared against determinants at tight tolerances.

use crate::blockfactor::{build_region, h_eval, Region};
use crate::determinantal::{ones_probability, pattern_probability, Constraint, Pattern};
use crate::recurrence::{char_roots, d_closed, d_recurrence};
use crate::symbol::TrigSymbolDeg1;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransferError {
    #[error("box {label} breaks the cell partition at [{x_lo}, {x_hi}) x [{y_lo}, {y_hi})")]
    PartitionMismatch {
        label: u8,
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
    },
}

/// Small dense real matrix over the interval index set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferMatrix {
    size: usize,
    data: Vec<f64>,
}

impl TransferMatrix {
    fn zero(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, s: usize, t: usize) -> f64 {
        assert!(s < self.size && t < self.size, "index out of range");
        self.data[s * self.size + t]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// Row-vector product `v M`.
    fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.size);
        let mut out = vec![0.0; self.size];
        for (s, &vs) in v.iter().enumerate() {
            if vs == 0.0 {
                continue;
            }
            let row = &self.data[s * self.size..(s + 1) * self.size];
            for (o, &m) in out.iter_mut().zip(row) {
                *o += vs * m;
            }
        }
        out
    }
}

/// Interval partition and transfer matrices of a region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferSystem {
    breakpoints: Vec<f64>,
    lengths: Vec<f64>,
    m_one: TransferMatrix,
    m_zero: TransferMatrix,
    m_free: TransferMatrix,
    label_mats: BTreeMap<u8, TransferMatrix>,
    start: Vec<f64>,
    flip: bool,
}

impl TransferSystem {
    /// Partition points `0 = t_0 < ... < t_p = 1`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn interval_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn m_one(&self) -> &TransferMatrix {
        &self.m_one
    }

    pub fn m_zero(&self) -> &TransferMatrix {
        &self.m_zero
    }

    pub fn m_free(&self) -> &TransferMatrix {
        &self.m_free
    }

    pub fn label_matrix(&self, label: u8) -> Option<&TransferMatrix> {
        self.label_mats.get(&label)
    }

    pub fn labels(&self) -> impl Iterator<Item = u8> + '_ {
        self.label_mats.keys().copied()
    }

    /// Matrix for membership bit 1 of the factor output (accounts for the
    /// complement flip).
    fn effective(&self, c: Constraint) -> &TransferMatrix {
        match (c, self.flip) {
            (Constraint::Free, _) => &self.m_free,
            (Constraint::One, false) | (Constraint::Zero, true) => &self.m_one,
            (Constraint::Zero, false) | (Constraint::One, true) => &self.m_zero,
        }
    }
}

/// Builds the interval partition and transfer matrices. Region constructors
/// reuse shared endpoint expressions, so equal coordinates compare equal and
/// the exact dedup below yields the minimal partition.
pub fn build_transfer(region: &Region) -> Result<TransferSystem, TransferError> {
    let mut points = vec![0.0, 1.0];
    for b in &region.boxes {
        points.extend([b.x_lo, b.x_hi, b.y_lo, b.y_hi]);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let p = points.len() - 1;
    let lengths: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();

    let mut m_one = TransferMatrix::zero(p);
    let mut label_mats: BTreeMap<u8, TransferMatrix> = region
        .boxes
        .iter()
        .map(|b| (b.label, TransferMatrix::zero(p)))
        .collect();
    let mut owner = vec![None::<u8>; p * p];
    let locate = |x: f64| points.binary_search_by(|q| q.total_cmp(&x));
    for b in &region.boxes {
        let span = (
            locate(b.x_lo),
            locate(b.x_hi),
            locate(b.y_lo),
            locate(b.y_hi),
        );
        let (Ok(xs), Ok(xe), Ok(ys), Ok(ye)) = span else {
            return Err(TransferError::PartitionMismatch {
                label: b.label,
                x_lo: b.x_lo,
                x_hi: b.x_hi,
                y_lo: b.y_lo,
                y_hi: b.y_hi,
            });
        };
        for s in xs..xe {
            for t in ys..ye {
                if owner[s * p + t].is_some() {
                    return Err(TransferError::PartitionMismatch {
                        label: b.label,
                        x_lo: points[s],
                        x_hi: points[s + 1],
                        y_lo: points[t],
                        y_hi: points[t + 1],
                    });
                }
                owner[s * p + t] = Some(b.label);
                m_one.data[s * p + t] = lengths[t];
                label_mats
                    .get_mut(&b.label)
                    .expect("every box label has a matrix")
                    .data[s * p + t] = lengths[t];
            }
        }
    }

    let mut m_zero = TransferMatrix::zero(p);
    let mut m_free = TransferMatrix::zero(p);
    for s in 0..p {
        for (t, &len) in lengths.iter().enumerate() {
            m_free.data[s * p + t] = len;
            m_zero.data[s * p + t] = len - m_one.data[s * p + t];
        }
    }

    Ok(TransferSystem {
        breakpoints: points,
        start: lengths.clone(),
        lengths,
        m_one,
        m_zero,
        m_free,
        label_mats,
        flip: region.complemented,
    })
}

/// Exact pattern probability of the factor process, by transfer matrices.
pub fn factor_pattern_probability(transfer: &TransferSystem, pattern: &Pattern) -> f64 {
    let mut v = transfer.start.clone();
    for &c in pattern.constraints() {
        v = transfer.effective(c).apply_left(&v);
    }
    v.iter().sum()
}

/// Probability that `(Y_i, Y_{i+1})` lands in box `j_i` for every `i`,
/// i.e. the mass of one label sequence. Labels refer to the stored geometry
/// (the complement flip plays no role). Unknown labels carry no mass; the
/// empty sequence has mass 1.
pub fn sequence_mass(transfer: &TransferSystem, labels: &[u8]) -> f64 {
    let mut v = transfer.start.clone();
    for &l in labels {
        match transfer.label_mats.get(&l) {
            Some(m) => v = m.apply_left(&v),
            None => return 0.0,
        }
    }
    v.iter().sum()
}

/// One row of a two-route comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonEntry {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    /// Whether the row counts toward the verdict. Diagnostic rows (e.g.
    /// adjacent windows in the one-dependence check) are kept but unscored.
    pub scored: bool,
}

/// Result of comparing two evaluation routes over a family of inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub check: String,
    pub b: f64,
    pub a_mag: f64,
    pub a_phase: f64,
    pub max_len: usize,
    pub tolerance: f64,
    pub max_abs_diff: f64,
    pub pass: bool,
    pub entries: Vec<ComparisonEntry>,
}

impl ComparisonReport {
    fn from_entries(
        check: &str,
        symbol: &TrigSymbolDeg1,
        max_len: usize,
        tolerance: f64,
        entries: Vec<ComparisonEntry>,
    ) -> Self {
        let max_abs_diff = entries
            .iter()
            .filter(|e| e.scored)
            .map(|e| e.abs_diff)
            .fold(0.0, f64::max);
        Self {
            check: check.to_string(),
            b: symbol.b(),
            a_mag: symbol.a_mag(),
            a_phase: symbol.a_phase(),
            max_len,
            tolerance,
            max_abs_diff,
            pass: max_abs_diff <= tolerance,
            entries,
        }
    }

    /// Scored entry with the largest deviation.
    pub fn worst_entry(&self) -> Option<&ComparisonEntry> {
        self.entries
            .iter()
            .filter(|e| e.scored)
            .max_by(|x, y| x.abs_diff.total_cmp(&y.abs_diff))
    }
}

fn entry(label: String, lhs: f64, rhs: f64, scored: bool) -> ComparisonEntry {
    ComparisonEntry {
        label,
        lhs,
        rhs,
        abs_diff: (lhs - rhs).abs(),
        scored,
    }
}

/// Compares determinantal and factor probabilities over every fully
/// constrained pattern of length `1..=max_len`.
pub fn compare_patterns(symbol: &TrigSymbolDeg1, max_len: usize, tol: f64) -> ComparisonReport {
    assert!(
        (1..=12).contains(&max_len),
        "pattern enumeration is exponential; max_len must be in 1..=12"
    );
    let transfer =
        build_transfer(&build_region(symbol)).expect("constructed regions align with their grid");
    let mut entries = Vec::new();
    for len in 1..=max_len {
        for mask in 0u64..(1 << len) {
            let p = Pattern::from_mask(len, mask);
            let det = pattern_probability(symbol, &p).expect("kernel determinant is real");
            let fac = factor_pattern_probability(&transfer, &p);
            entries.push(entry(p.to_string(), det, fac, true));
        }
    }
    ComparisonReport::from_entries("factor-vs-determinantal", symbol, max_len, tol, entries)
}

/// Checks that windows at positional distance >= 2 factorize. Adjacent
/// windows (distance 1) are genuinely dependent; their rows are recorded
/// for inspection but not scored.
pub fn one_dependence_check(symbol: &TrigSymbolDeg1, max_len: usize, tol: f64) -> ComparisonReport {
    assert!(
        (2..=10).contains(&max_len),
        "combined window length must be in 2..=10"
    );
    let mut entries = Vec::new();
    for left_len in 1..max_len {
        for right_len in 1..=max_len - left_len {
            for left_mask in 0u64..(1 << left_len) {
                let left = Pattern::from_mask(left_len, left_mask);
                let left_p = pattern_probability(symbol, &left).expect("determinant is real");
                for right_mask in 0u64..(1 << right_len) {
                    let right = Pattern::from_mask(right_len, right_mask);
                    let right_p =
                        pattern_probability(symbol, &right).expect("determinant is real");
                    for distance in 1..=3usize {
                        let joint_pattern = left.joined(distance - 1, &right);
                        let joint = pattern_probability(symbol, &joint_pattern)
                            .expect("determinant is real");
                        entries.push(entry(
                            format!("{left} <{distance}> {right}"),
                            joint,
                            left_p * right_p,
                            distance >= 2,
                        ));
                    }
                }
            }
        }
    }
    ComparisonReport::from_entries("one-dependence", symbol, max_len, tol, entries)
}

/// Checks `P_f(pattern) = P_{1-f}(flipped pattern)` over every fully
/// constrained pattern of length `1..=max_len`.
pub fn complement_duality_check(
    symbol: &TrigSymbolDeg1,
    max_len: usize,
    tol: f64,
) -> ComparisonReport {
    assert!(
        (1..=12).contains(&max_len),
        "pattern enumeration is exponential; max_len must be in 1..=12"
    );
    let comp = symbol.complement();
    let mut entries = Vec::new();
    for len in 1..=max_len {
        for mask in 0u64..(1 << len) {
            let p = Pattern::from_mask(len, mask);
            let lhs = pattern_probability(symbol, &p).expect("determinant is real");
            let rhs = pattern_probability(&comp, &p.flipped()).expect("determinant is real");
            entries.push(entry(p.to_string(), lhs, rhs, true));
        }
    }
    ComparisonReport::from_entries("complement-duality", symbol, max_len, tol, entries)
}

/// One row of the run-probability table: `P(k + 1 consecutive ones)` by all
/// four routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunLengthRow {
    pub k: usize,
    pub det: f64,
    pub recurrence: f64,
    pub closed: f64,
    pub factor: f64,
}

/// Tabulates `D_0..D_{k_max}` by kernel determinant, three-term recurrence,
/// closed form and transfer matrices. The factor column is built
/// incrementally, one matrix application per row.
pub fn run_length_table(symbol: &TrigSymbolDeg1, k_max: usize) -> Vec<RunLengthRow> {
    assert!(k_max <= 30, "direct determinants are limited to k_max <= 30");
    let rec = d_recurrence(symbol, k_max);
    let roots = char_roots(symbol);
    let transfer =
        build_transfer(&build_region(symbol)).expect("constructed regions align with their grid");
    let one = transfer.effective(Constraint::One);
    let mut v = transfer.start.clone();
    let mut rows = Vec::with_capacity(k_max + 1);
    for (k, &recurrence) in rec.iter().enumerate() {
        v = one.apply_left(&v);
        let positions: Vec<i64> = (0..=k as i64).collect();
        rows.push(RunLengthRow {
            k,
            det: ones_probability(symbol, &positions).expect("kernel determinant is real"),
            recurrence,
            closed: d_closed(&roots, k),
            factor: v.iter().sum(),
        });
    }
    rows
}

/// Monte Carlo check of one factor pattern probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub pattern: String,
    pub n: usize,
    pub frequency: f64,
    pub std_error: f64,
    pub exact: f64,
    pub z_score: f64,
}

/// Estimates the pattern probability from `n` independent replications of
/// the factor window (fresh uniforms each time, so the binomial standard
/// error is exact) and compares against the transfer-matrix value.
pub fn mc_estimate<R: Rng + ?Sized>(
    region: &Region,
    pattern: &Pattern,
    n: usize,
    rng: &mut R,
) -> McEstimate {
    assert!(n >= 1000, "too few replications for a meaningful z-score");
    let transfer = build_transfer(region).expect("constructed regions align with their grid");
    let exact = factor_pattern_probability(&transfer, pattern);
    let w = pattern.len();
    let mut ys = vec![0.0f64; w + 1];
    let mut hits = 0usize;
    for _ in 0..n {
        for y in ys.iter_mut() {
            *y = rng.gen();
        }
        let ok = (0..w).all(|i| match pattern.get(i) {
            Constraint::Free => true,
            Constraint::One => h_eval(region, ys[i], ys[i + 1]) == 1,
            Constraint::Zero => h_eval(region, ys[i], ys[i + 1]) == 0,
        });
        hits += usize::from(ok);
    }
    let frequency = hits as f64 / n as f64;
    let std_error = (frequency * (1.0 - frequency) / n as f64).sqrt();
    let diff = frequency - exact;
    let z_score = if diff == 0.0 { 0.0 } else { diff / std_error };
    McEstimate {
        pattern: pattern.to_string(),
        n,
        frequency,
        std_error,
        exact,
        z_score,
    }
}

/// Deterministic admissible symbol family for sweeps: b from 0.05 to 0.95
/// in steps of 0.05 crossed with `|a| = t min(b, 1-b)/2` for
/// `t in {0, 0.35, 0.7, 1}`, plus boundary and reference symbols. `t = 1`
/// lands exactly on `b = 2|a|` (b <= 1/2) or `b + 2|a| = 1` (b > 1/2).
pub fn symbol_grid() -> Vec<TrigSymbolDeg1> {
    let mut pairs: Vec<(f64, f64)> = vec![
        (0.0, 0.0),
        (1.0, 0.0),
        (0.5, 0.0),
        (0.1, 0.05),
        (0.3, 0.15),
        (0.5, 0.25),
        (0.25, 0.1),
        (0.4, 0.15),
        (0.5, 0.2),
        (0.6, 0.15),
        (0.7, 0.1),
        (0.75, 0.1),
        (0.9, 0.05),
    ];
    for i in 1..=19u32 {
        let b = f64::from(i) * 0.05;
        for t in [0.0, 0.35, 0.7, 1.0] {
            pairs.push((b, t * b.min(1.0 - b) / 2.0));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut grid: Vec<TrigSymbolDeg1> = pairs
        .into_iter()
        .filter(|&(b, a)| seen.insert((b.to_bits(), a.to_bits())))
        .map(|(b, a)| TrigSymbolDeg1::new(b, a, 0.0).expect("grid symbols are admissible"))
        .collect();
    grid.sort_by(|x, y| {
        x.b()
            .total_cmp(&y.b())
            .then(x.a_mag().total_cmp(&y.a_mag()))
    });
    grid
}

/// Runs [`compare_patterns`] over the whole [`symbol_grid`] on the rayon
/// pool, preserving grid order.
pub fn sweep_grid(max_len: usize, tol: f64) -> Vec<ComparisonReport> {
    use rayon::prelude::*;
    symbol_grid()
        .par_iter()
        .map(|s| compare_patterns(s, max_len, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockfactor::{label_sequences, region_case1, region_case2, transition_digraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(b: f64, a_mag: f64) -> TrigSymbolDeg1 {
        TrigSymbolDeg1::new(b, a_mag, 0.0).expect("test symbol is admissible")
    }

    #[test]
    fn transfer_partition_of_the_quarter_grid() {
        let ts = build_transfer(&build_region(&sym(0.5, 0.25))).unwrap();
        assert_eq!(ts.breakpoints(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(ts.lengths(), &[0.25; 4]);
        assert_eq!(ts.interval_count(), 4);
        assert!(!ts.flip());
        // box 1 = [0, 1/4) x [0, 1/4) occupies cell (0, 0)
        assert_eq!(ts.m_one().entry(0, 0), 0.25);
        assert_eq!(ts.m_one().entry(0, 1), 0.0);
        assert_eq!(ts.m_zero().entry(0, 1), 0.25);
        assert_eq!(ts.m_free().entry(3, 2), 0.25);
        assert_eq!(ts.labels().count(), 8);
    }

    #[test]
    fn transfer_partition_stays_small_for_distinct_roots() {
        let ts = build_transfer(&build_region(&sym(0.4, 0.15))).unwrap();
        assert_eq!(ts.interval_count(), 8, "shared endpoints must dedup bit-exactly");
        assert!(ts.interval_count() <= 12);
    }

    #[test]
    fn transfer_of_the_empty_region() {
        let ts = build_transfer(&build_region(&sym(0.0, 0.0))).unwrap();
        assert_eq!(ts.breakpoints(), &[0.0, 1.0]);
        assert_eq!(ts.m_zero().entry(0, 0), 1.0);
        assert_eq!(ts.m_one().entry(0, 0), 0.0);

        let full = build_transfer(&build_region(&sym(1.0, 0.0))).unwrap();
        assert!(full.flip());
        assert_eq!(
            factor_pattern_probability(&full, &Pattern::all_ones(3)),
            1.0
        );
    }

    #[test]
    fn membership_splitting_is_bitwise_exact() {
        for s in symbol_grid() {
            let ts = build_transfer(&build_region(&s)).unwrap();
            let p = ts.interval_count();
            for i in 0..p * p {
                let one = ts.m_one().entries()[i];
                let zero = ts.m_zero().entries()[i];
                let free = ts.m_free().entries()[i];
                assert!(one + zero == free, "splitting at entry {i} for {s:?}");
                let label_sum: f64 = ts
                    .labels()
                    .map(|l| ts.label_matrix(l).unwrap().entries()[i])
                    .sum();
                assert!(label_sum == one, "label decomposition at entry {i} for {s:?}");
            }
        }
    }

    #[test]
    fn free_patterns_have_unit_mass() {
        for s in symbol_grid() {
            let ts = build_transfer(&build_region(&s)).unwrap();
            for n in 1..=10 {
                let total = factor_pattern_probability(&ts, &Pattern::all_free(n));
                assert!(
                    (total - 1.0).abs() <= 1e-12,
                    "normalization at n = {n} for {s:?}: {total}"
                );
            }
        }
    }

    #[test]
    fn overlapping_boxes_break_the_partition() {
        let mut region = build_region(&sym(0.5, 0.25));
        let mut dup = region.boxes[0];
        dup.label = 9;
        region.boxes.push(dup);
        assert!(matches!(
            build_transfer(&region),
            Err(TransferError::PartitionMismatch { .. })
        ));
    }

    #[test]
    fn factor_matches_determinant_on_reference_symbols() {
        for s in [sym(0.4, 0.15), sym(0.5, 0.25), sym(0.7, 0.1), sym(0.3, 0.0)] {
            let report = compare_patterns(&s, 6, 1e-9);
            assert!(
                report.pass,
                "factor vs determinant for {s:?}: max diff {}",
                report.max_abs_diff
            );
            assert_eq!(report.entries.len(), 2 + 4 + 8 + 16 + 32 + 64);
        }
    }

    #[test]
    fn double_root_sequence_masses_are_uniform() {
        let region = region_case1(0.5).unwrap();
        let ts = build_transfer(&region).unwrap();
        let digraph = transition_digraph(&region).unwrap();
        let r: f64 = 0.25;
        for k in 0..=5 {
            for seq in label_sequences(&digraph, k) {
                let mass = sequence_mass(&ts, &seq);
                let expected = 0.25 * r.powi(k as i32 + 1);
                assert!(
                    (mass - expected).abs() <= 1e-12,
                    "mass of {seq:?} = {mass}, expected {expected}"
                );
            }
        }
        assert_eq!(sequence_mass(&ts, &[]), 1.0, "empty sequence is unconstrained");
        assert_eq!(sequence_mass(&ts, &[42]), 0.0, "unknown label has no mass");
    }

    #[test]
    fn distinct_root_sequence_masses_recurse_through_r2() {
        let roots = char_roots(&sym(0.4, 0.15));
        let region = region_case2(roots.r1, roots.r2).unwrap();
        let ts = build_transfer(&region).unwrap();
        let digraph = transition_digraph(&region).unwrap();
        let c = roots.c.unwrap();

        for k in 0..=8usize {
            let ones = vec![1u8; k + 1];
            let mass = sequence_mass(&ts, &ones);
            let expected = c * roots.r1.powi(k as i32 + 2);
            assert!(
                (mass - expected).abs() <= 1e-12,
                "all-ones mass at k = {k}: {mass} vs {expected}"
            );
        }

        for k in 1..=6usize {
            for seq in label_sequences(&digraph, k) {
                if seq[k - 1] == 1 || seq[k - 1] == 2 {
                    continue;
                }
                let mass = sequence_mass(&ts, &seq);
                let prefix_mass = sequence_mass(&ts, &seq[..k]);
                assert!(
                    (mass - roots.r2 * prefix_mass).abs() <= 1e-12,
                    "extension mass of {seq:?}: {mass} vs r2 * {prefix_mass}"
                );
            }
        }
    }

    #[test]
    fn run_length_table_reference_values() {
        let rows = run_length_table(&sym(0.4, 0.15), 2);
        assert_eq!(rows.len(), 3);
        let last = &rows[2];
        assert_eq!(last.k, 2);
        for (name, value) in [
            ("det", last.det),
            ("recurrence", last.recurrence),
            ("closed", last.closed),
            ("factor", last.factor),
        ] {
            assert!((value - 0.046).abs() < 1e-12, "{name} column: {value}");
        }
    }

    #[test]
    fn run_length_table_flips_for_complemented_symbols() {
        let rows = run_length_table(&sym(0.7, 0.1), 5);
        let rec = d_recurrence(&sym(0.7, 0.1), 5);
        for (row, want) in rows.iter().zip(&rec) {
            assert!(
                (row.factor - want).abs() <= 1e-12,
                "factor column at k = {}: {} vs {want}",
                row.k,
                row.factor
            );
        }
    }

    #[test]
    fn mc_estimate_lands_within_four_sigma() {
        let s = sym(0.4, 0.15);
        let region = build_region(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(1002);
        let p = Pattern::parse("11").unwrap();
        let est = mc_estimate(&region, &p, 200_000, &mut rng);
        assert!((est.exact - 0.1375).abs() < 1e-12);
        assert!(est.z_score.abs() <= 4.0, "z = {}", est.z_score);
        assert_eq!(est.pattern, "11");

        let free = Pattern::parse("1.1").unwrap();
        let est = mc_estimate(&region, &free, 200_000, &mut rng);
        assert!((est.exact - 0.16).abs() < 1e-12);
        assert!(est.z_score.abs() <= 4.0, "z = {}", est.z_score);
    }

    #[test]
    fn one_dependence_check_scores_only_separated_windows() {
        let report = one_dependence_check(&sym(0.4, 0.15), 5, 1e-10);
        assert!(report.pass, "max scored diff {}", report.max_abs_diff);
        let adjacent = report
            .entries
            .iter()
            .find(|e| e.label == "1 <1> 1")
            .expect("adjacent pair is recorded");
        assert!(!adjacent.scored);
        assert!((adjacent.lhs - 0.1375).abs() < 1e-12);
        assert!((adjacent.rhs - 0.16).abs() < 1e-12);
        assert!(adjacent.abs_diff > 1e-3, "adjacent windows are dependent");
    }

    #[test]
    fn complement_duality_check_passes() {
        for s in [sym(0.7, 0.1), sym(0.4, 0.15), sym(0.5, 0.25)] {
            let report = complement_duality_check(&s, 6, 1e-10);
            assert!(report.pass, "duality for {s:?}: {}", report.max_abs_diff);
        }
    }

    #[test]
    fn worst_entry_picks_the_largest_scored_deviation() {
        let report = one_dependence_check(&sym(0.4, 0.15), 4, 1e-10);
        let worst = report.worst_entry().expect("entries exist");
        assert!(worst.scored);
        assert_eq!(worst.abs_diff, report.max_abs_diff);
    }

    #[test]
    fn symbol_grid_is_large_deterministic_and_covers_the_corners() {
        let grid = symbol_grid();
        assert!(grid.len() >= 50, "got {}", grid.len());
        assert_eq!(grid, symbol_grid(), "grid must be reproducible");
        assert!(grid.iter().any(|s| s.b() == 0.0));
        assert!(grid.iter().any(|s| s.b() == 1.0));
        assert!(grid.iter().any(|s| s.a_mag() == 0.0 && s.b() == 0.5));
        assert!(
            grid.iter().any(|s| s.b() <= 0.5 && s.b() == 2.0 * s.a_mag()),
            "double-root symbols present"
        );
        assert!(
            grid.iter().any(|s| s.b() > 0.5 && s.b() + 2.0 * s.a_mag() == 1.0),
            "complemented boundary symbols present"
        );
    }

    #[test]
    fn sweep_preserves_grid_order() {
        let reports = sweep_grid(3, 1e-9);
        let grid = symbol_grid();
        assert_eq!(reports.len(), grid.len());
        for (report, s) in reports.iter().zip(&grid) {
            assert_eq!((report.b, report.a_mag), (s.b(), s.a_mag()));
            assert!(report.pass, "sweep entry for {s:?}");
        }
    }
}
