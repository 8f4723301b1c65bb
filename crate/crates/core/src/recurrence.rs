//! Run probabilities `D_k = P(ones at k+1 consecutive positions)`.
//!
//! Expanding the tridiagonal kernel determinant along its last row gives the
//! three-term recurrence
//!
//! ```text
//! D_k = b D_{k-1} - |a|^2 D_{k-2},    D_0 = b,  D_1 = b^2 - |a|^2,
//! ```
//!
//! whose characteristic equation `r^2 - b r + |a|^2 = 0` has roots
//! `r1 >= r2 >= 0`. Admissibility makes the discriminant nonnegative, and
//! the closed form is `D_k = (r1^{k+2} - r2^{k+2}) / (r1 - r2)` for distinct
//! roots and `D_k = (k r + 2 r) r^k` at the double root `r = b / 2`.

use crate::symbol::TrigSymbolDeg1;
use serde::Serialize;

/// Roots closer than this are treated as a double root.
pub const EQUAL_ROOTS_EPS: f64 = 1e-12;

/// Below this separation the distinct-root closed form switches to a
/// divided-difference sum to dodge cancellation in `r1^{k+2} - r2^{k+2}`.
const NEAR_EQUAL_EPS: f64 = 1e-6;

/// Characteristic roots of the run recurrence and derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Roots {
    /// Larger root `b/2 + sqrt(b^2/4 - |a|^2)`.
    pub r1: f64,
    /// Smaller root, recovered as `|a|^2 / r1` to avoid cancellation.
    pub r2: f64,
    /// Raw discriminant `b^2/4 - |a|^2` (may round slightly negative).
    pub discriminant: f64,
    /// Whether the two roots coincide within [`EQUAL_ROOTS_EPS`].
    pub equal: bool,
    /// Normalizing constant `1 / (2 (r1 + r2))`; absent when `b = 0`.
    pub c: Option<f64>,
    /// Coefficient `r1^2 / (r1 - r2)` of `r1^k`; absent at a double root.
    pub c1: Option<f64>,
    /// Coefficient `-r2^2 / (r1 - r2)` of `r2^k`; absent at a double root.
    pub c2: Option<f64>,
}

/// Solves `r^2 - b r + |a|^2 = 0` for an admissible symbol. A discriminant
/// that rounds below zero is clamped: admissibility guarantees it is
/// nonnegative in exact arithmetic.
pub fn char_roots(symbol: &TrigSymbolDeg1) -> Roots {
    let b = symbol.b();
    let a2 = symbol.a_mag() * symbol.a_mag();
    let discriminant = b * b / 4.0 - a2;
    let r1 = b / 2.0 + discriminant.max(0.0).sqrt();
    // a2 / r1 can overshoot r1 by an ulp right at b = 2|a|; the exact value
    // never does, so restore the ordering
    let r2 = if r1 > 0.0 { (a2 / r1).min(r1) } else { 0.0 };
    let equal = r1 - r2 <= EQUAL_ROOTS_EPS;
    let c = (b > 0.0).then(|| 1.0 / (2.0 * (r1 + r2)));
    let (c1, c2) = if equal {
        (None, None)
    } else {
        let gap = r1 - r2;
        (Some(r1 * r1 / gap), Some(-(r2 * r2) / gap))
    };
    Roots {
        r1,
        r2,
        discriminant,
        equal,
        c,
        c1,
        c2,
    }
}

/// `D_0, ..., D_{k_max}` by the three-term recurrence.
pub fn d_recurrence(symbol: &TrigSymbolDeg1, k_max: usize) -> Vec<f64> {
    let b = symbol.b();
    let a2 = symbol.a_mag() * symbol.a_mag();
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(b);
    if k_max >= 1 {
        out.push(b * b - a2);
    }
    for k in 2..=k_max {
        let next = b * out[k - 1] - a2 * out[k - 2];
        out.push(next);
    }
    out
}

/// `D_k` in closed form from the characteristic roots.
pub fn d_closed(roots: &Roots, k: usize) -> f64 {
    let Roots { r1, r2, .. } = *roots;
    if roots.equal {
        let r = r1;
        return (k as f64 * r + 2.0 * r) * r.powi(k as i32);
    }
    if r1 - r2 < NEAR_EQUAL_EPS {
        // sum_{j=0}^{k+1} r1^j r2^{k+1-j}, stable when the roots nearly touch
        return (0..=k + 1)
            .map(|j| r1.powi(j as i32) * r2.powi((k + 1 - j) as i32))
            .sum();
    }
    (r1.powi(k as i32 + 2) - r2.powi(k as i32 + 2)) / (r1 - r2)
}

/// One step of the first-order form `D_k = r1^{k+1} + r2 D_{k-1}`.
pub fn d_step(roots: &Roots, d_prev: f64, k: usize) -> f64 {
    debug_assert!(k >= 1, "the first-order form starts at k = 1");
    roots.r1.powi(k as i32 + 1) + roots.r2 * d_prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinantal::ones_probability;
    use crate::verify::symbol_grid;

    fn sym(b: f64, a_mag: f64) -> TrigSymbolDeg1 {
        TrigSymbolDeg1::new(b, a_mag, 0.0).expect("test symbol is admissible")
    }

    fn rel_close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
    }

    #[test]
    fn roots_of_the_reference_symbol() {
        let roots = char_roots(&sym(0.4, 0.15));
        assert!(!roots.equal);
        assert!((roots.r1 - 0.332_287_565_553_229_5).abs() < 1e-15);
        assert!((roots.r2 - 0.067_712_434_446_770_5).abs() < 1e-15);
        assert!((roots.r1 + roots.r2 - 0.4).abs() < 1e-15, "Vieta sum");
        assert!((roots.r1 * roots.r2 - 0.0225).abs() < 1e-16, "Vieta product");
        assert!((roots.c.unwrap() - 1.25).abs() < 1e-14);
        // C1 + C2 telescopes back to r1 + r2
        assert!((roots.c1.unwrap() + roots.c2.unwrap() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn double_root_at_b_equals_two_a() {
        let roots = char_roots(&sym(0.5, 0.25));
        assert!(roots.equal);
        assert_eq!(roots.r1, 0.25);
        assert_eq!(roots.r2, 0.25);
        assert_eq!(roots.c1, None);
        assert_eq!(roots.c2, None);
        assert!((roots.c.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_symbols() {
        let zero = char_roots(&sym(0.0, 0.0));
        assert_eq!((zero.r1, zero.r2), (0.0, 0.0));
        assert!(zero.equal);
        assert_eq!(zero.c, None);

        let iid = char_roots(&sym(0.3, 0.0));
        assert_eq!((iid.r1, iid.r2), (0.3, 0.0));
        assert!(!iid.equal);
    }

    #[test]
    fn recurrence_prefix_values() {
        let d = d_recurrence(&sym(0.4, 0.15), 2);
        assert_eq!(d.len(), 3);
        assert!((d[0] - 0.4).abs() < 1e-15);
        assert!((d[1] - 0.1375).abs() < 1e-15);
        assert!((d[2] - 0.046).abs() < 1e-15);
    }

    #[test]
    fn closed_form_at_the_double_root() {
        let roots = char_roots(&sym(0.5, 0.25));
        // (k r + 2 r) r^k at r = 1/4, k = 2
        assert!((d_closed(&roots, 2) - 0.0625).abs() < 1e-15);
        let d = d_recurrence(&sym(0.5, 0.25), 10);
        for (k, &dk) in d.iter().enumerate() {
            assert!(
                rel_close(d_closed(&roots, k), dk, 1e-12),
                "double root k = {k}"
            );
        }
    }

    #[test]
    fn first_order_step_reproduces_d1() {
        let roots = char_roots(&sym(0.4, 0.15));
        let d1 = d_step(&roots, 0.4, 1);
        assert!((d1 - 0.1375).abs() < 1e-14);
    }

    #[test]
    fn iid_runs_are_geometric() {
        let s = sym(0.3, 0.0);
        let roots = char_roots(&s);
        for k in 0..10 {
            let expected = 0.3f64.powi(k as i32 + 1);
            assert!(rel_close(d_closed(&roots, k), expected, 1e-14), "k = {k}");
        }
    }

    #[test]
    fn roots_satisfy_vieta_across_the_grid() {
        for s in symbol_grid() {
            let roots = char_roots(&s);
            let a2 = s.a_mag() * s.a_mag();
            assert!(roots.r1 >= roots.r2 && roots.r2 >= 0.0, "ordering for {s:?}");
            assert!(
                (roots.r1 + roots.r2 - s.b()).abs() <= 1e-12,
                "Vieta sum for {s:?}"
            );
            assert!(
                (roots.r1 * roots.r2 - a2).abs() <= 1e-12,
                "Vieta product for {s:?}"
            );
            if s.b() > 0.0 && s.b() <= 0.5 {
                assert!(
                    roots.c.unwrap() >= 1.0 - 1e-12,
                    "C >= 1 when the symbol stays below 1/2, got {:?}",
                    roots.c
                );
            }
        }
    }

    #[test]
    fn recurrence_closed_form_and_determinant_all_agree() {
        for s in symbol_grid() {
            let roots = char_roots(&s);
            let d = d_recurrence(&s, 30);
            for (k, &dk) in d.iter().enumerate() {
                assert!(
                    rel_close(d_closed(&roots, k), dk, 1e-10),
                    "closed vs recurrence at k = {k} for {s:?}"
                );
                if k <= 12 {
                    let positions: Vec<i64> = (0..=k as i64).collect();
                    let det = ones_probability(&s, &positions).unwrap();
                    assert!(
                        (det - dk).abs() <= 1e-12,
                        "determinant {det} vs recurrence {dk} at k = {k} for {s:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn runs_decay_monotonically() {
        for s in symbol_grid() {
            let d = d_recurrence(&s, 30);
            let mut prev = 1.0;
            for (k, &dk) in d.iter().enumerate() {
                assert!(
                    dk >= -1e-15 && dk <= prev + 1e-15,
                    "D_{k} = {dk} after {prev} for {s:?}"
                );
                prev = dk;
            }
        }
    }

    #[test]
    fn folding_the_first_order_form_recovers_the_recurrence() {
        for s in symbol_grid() {
            let roots = char_roots(&s);
            let d = d_recurrence(&s, 20);
            let mut prev = d[0];
            for (k, &dk) in d.iter().enumerate().skip(1) {
                let stepped = d_step(&roots, prev, k);
                assert!(
                    rel_close(stepped, dk, 1e-12),
                    "first-order step at k = {k} for {s:?}: {stepped} vs {dk}"
                );
                prev = stepped;
            }
        }
    }
}
