//! The explicit two-block-factor representation.
//!
//! For an admissible symbol with `b <= 1/2` there is a finite union of
//! axis-aligned boxes `A` in the unit square such that `X_i = 1_A(Y_i,
//! Y_{i+1})` with i.i.d. uniform `Y` has exactly the determinantal window
//! distribution of the symbol. When the double root occurs (`b = 2|a|`,
//! radius `r = b/2`) the square splits into four x-columns of width 1/4 with
//! one height-`r` band per column arrangement; with distinct roots `r1 >
//! r2` the columns have widths `C r1, C r1, C r2, C r2` for
//! `C = 1 / (2 (r1 + r2))` and the bands have heights `r1` or `r2`.
//! Symbols with `b > 1/2` are handled through the complement: the region is
//! built for `g = 1 - f` and the factor output is flipped.
//!
//! Boxes are half-open, `[x_lo, x_hi) x [y_lo, y_hi)`, so membership is
//! unambiguous on shared edges.

use crate::recurrence::char_roots;
use crate::symbol::TrigSymbolDeg1;
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("{param} = {value} violates {requirement}")]
    OutOfRange {
        param: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("y-interval of box {label} straddles an x-column boundary")]
    AmbiguousTransition { label: u8 },
}

/// One labeled box of the factor region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabeledBox {
    pub label: u8,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl LabeledBox {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.x_lo <= u && u < self.x_hi && self.y_lo <= v && v < self.y_hi
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    fn is_degenerate(&self) -> bool {
        self.width() == 0.0 || self.height() == 0.0
    }
}

/// Which root configuration produced the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    EqualRoots,
    DistinctRoots,
}

/// Factor region: boxes, the root case, whether the output is flipped, and
/// the symbol the region represents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub boxes: Vec<LabeledBox>,
    pub case_tag: CaseTag,
    pub complemented: bool,
    pub source: TrigSymbolDeg1,
}

fn bx(label: u8, x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> LabeledBox {
    LabeledBox {
        label,
        x_lo,
        x_hi,
        y_lo,
        y_hi,
    }
}

/// Double-root region for `b = 2|a|`, `0 < b <= 1/2`: four quarter columns,
/// bands of height `r = b/2` at offsets 0, 1/4, 1/2, 3/4.
pub fn region_case1(b: f64) -> Result<Region, RegionError> {
    if !(b > 0.0 && b <= 0.5) {
        return Err(RegionError::OutOfRange {
            param: "b",
            value: b,
            requirement: "0 < b <= 1/2",
        });
    }
    let r = b / 2.0;
    let boxes = vec![
        bx(1, 0.0, 0.25, 0.0, r),
        bx(2, 0.25, 0.5, 0.25, 0.25 + r),
        bx(3, 0.0, 0.25, 0.5, 0.5 + r),
        bx(4, 0.25, 0.5, 0.5, 0.5 + r),
        bx(5, 0.0, 0.25, 0.75, 0.75 + r),
        bx(6, 0.25, 0.5, 0.75, 0.75 + r),
        bx(7, 0.5, 0.75, 0.5, 0.5 + r),
        bx(8, 0.75, 1.0, 0.75, 0.75 + r),
    ];
    let source = TrigSymbolDeg1::new(b, r, 0.0).expect("b = 2|a| <= 1/2 is admissible");
    Ok(Region {
        boxes,
        case_tag: CaseTag::EqualRoots,
        complemented: false,
        source,
    })
}

/// Distinct-root region for roots `r1 >= r2 >= 0`, `r1 > 0`,
/// `r1 + r2 <= 1/2`. Shared endpoint expressions are computed once so equal
/// coordinates are bit-identical, which downstream breakpoint dedup relies
/// on. Boxes that collapse to zero width or height (only possible at
/// `r2 = 0`) are dropped.
pub fn region_case2(r1: f64, r2: f64) -> Result<Region, RegionError> {
    if r1.is_nan() || r1 <= 0.0 {
        return Err(RegionError::OutOfRange {
            param: "r1",
            value: r1,
            requirement: "r1 > 0",
        });
    }
    if !(r2 >= 0.0 && r2 <= r1) {
        return Err(RegionError::OutOfRange {
            param: "r2",
            value: r2,
            requirement: "0 <= r2 <= r1",
        });
    }
    // The sum may overshoot 1/2 by rounding when built from computed roots
    // of a boundary symbol; the geometry renormalizes through C, so allow a
    // hair of slack.
    if r1 + r2 > 0.5 + 1e-9 {
        return Err(RegionError::OutOfRange {
            param: "r1 + r2",
            value: r1 + r2,
            requirement: "r1 + r2 <= 1/2",
        });
    }
    // Right at r1 + r2 = 1/2 distinct breakpoint expressions coincide (C =
    // 1 makes column and band edges meet). Rounded roots land within a few
    // ulps of the boundary, which would leave ulp-wide slivers in the
    // breakpoint grid; pinning the sum to exactly 1/2 makes the
    // coincidences bit-exact. The subtraction below is exact.
    let r2 = if r2 > 0.0 && (r1 + r2 - 0.5).abs() <= 1e-12 {
        0.5 - r1
    } else {
        r2
    };
    let c = 1.0 / (2.0 * (r1 + r2));
    let cr1 = c * r1;
    let cr2 = c * r2;
    let x1 = cr1;
    let x2 = 2.0 * cr1;
    let x3 = x2 + cr2;
    let band1_top = r1;
    let band2_top = x1 + r1;
    let band3_top = x2 + r2;
    let band4_top = x3 + r2;
    let boxes: Vec<LabeledBox> = vec![
        bx(1, 0.0, x1, 0.0, band1_top),
        bx(2, x1, x2, x1, band2_top),
        bx(3, 0.0, x1, x2, band3_top),
        bx(4, x1, x2, x2, band3_top),
        bx(5, 0.0, x1, x3, band4_top),
        bx(6, x1, x2, x3, band4_top),
        bx(7, x2, x3, x2, band3_top),
        bx(8, x3, 1.0, x3, band4_top),
    ]
    .into_iter()
    .filter(|b| !b.is_degenerate())
    .collect();
    let source = TrigSymbolDeg1::new(r1 + r2, (r1 * r2).sqrt(), 0.0)
        .expect("b = r1 + r2, |a| = sqrt(r1 r2) is admissible when r1 + r2 <= 1/2");
    Ok(Region {
        boxes,
        case_tag: CaseTag::DistinctRoots,
        complemented: false,
        source,
    })
}

/// Region for any admissible symbol. Symbols with `b > 1/2` get the region
/// of their complement with the output flip recorded; `b = 0` (and through
/// the complement `b = 1`) yields the empty region. The root case is chosen
/// by [`char_roots`], so `b` within `EQUAL_ROOTS_EPS` of `2|a|` takes the
/// double-root geometry.
pub fn build_region(symbol: &TrigSymbolDeg1) -> Region {
    let (base, complemented) = if symbol.b() > 0.5 {
        (symbol.complement(), true)
    } else {
        (*symbol, false)
    };
    let mut region = if base.b() == 0.0 {
        Region {
            boxes: vec![],
            case_tag: CaseTag::EqualRoots,
            complemented: false,
            source: base,
        }
    } else {
        let roots = char_roots(&base);
        if roots.equal {
            region_case1(base.b())
        } else {
            region_case2(roots.r1, roots.r2)
        }
        .expect("roots of an admissible symbol with b <= 1/2 are in range")
    };
    region.complemented = complemented;
    region.source = *symbol;
    region
}

/// The factor map: indicator of the region, flipped when the region was
/// built for the complement symbol.
pub fn h_eval(region: &Region, u: f64, v: f64) -> u8 {
    let inside = region.boxes.iter().any(|b| b.contains(u, v));
    u8::from(inside != region.complemented)
}

/// Total area of the boxes (the region itself, ignoring the flip).
pub fn region_area(region: &Region) -> f64 {
    region.boxes.iter().map(LabeledBox::area).sum()
}

/// Draws `X_1..X_n` from the factor representation using `n + 1` uniform
/// variates: `X_i = h(Y_i, Y_{i+1})`.
pub fn sample_factor<R: Rng + ?Sized>(region: &Region, n: usize, rng: &mut R) -> Vec<u8> {
    if n == 0 {
        return Vec::new();
    }
    let mut prev: f64 = rng.gen();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let next: f64 = rng.gen();
        out.push(h_eval(region, prev, next));
        prev = next;
    }
    out
}

/// Successor structure of the labels: box `m` can follow box `l` when a
/// point of the process can sit in `l` and the next point in `m`, i.e. when
/// the y-interval of `l` lies inside the x-interval of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionDigraph {
    successors: BTreeMap<u8, BTreeSet<u8>>,
}

impl TransitionDigraph {
    pub fn labels(&self) -> impl Iterator<Item = u8> + '_ {
        self.successors.keys().copied()
    }

    pub fn successors(&self, label: u8) -> Option<&BTreeSet<u8>> {
        self.successors.get(&label)
    }

    pub fn as_map(&self) -> &BTreeMap<u8, BTreeSet<u8>> {
        &self.successors
    }
}

/// Reads the successor sets off the geometry. Each y-interval must be
/// contained in the x-columns it meets; a straddling interval has no
/// well-defined successor set and is reported as an error.
pub fn transition_digraph(region: &Region) -> Result<TransitionDigraph, RegionError> {
    let mut successors = BTreeMap::new();
    for b in &region.boxes {
        let mut succ = BTreeSet::new();
        for m in &region.boxes {
            let lo = b.y_lo.max(m.x_lo);
            let hi = b.y_hi.min(m.x_hi);
            if lo < hi {
                if m.x_lo <= b.y_lo && b.y_hi <= m.x_hi {
                    succ.insert(m.label);
                } else {
                    return Err(RegionError::AmbiguousTransition { label: b.label });
                }
            }
        }
        successors.insert(b.label, succ);
    }
    Ok(TransitionDigraph { successors })
}

/// Number of label sequences `j_0, ..., j_k` the digraph admits.
pub fn count_label_sequences(digraph: &TransitionDigraph, k: usize) -> u64 {
    let mut ways: BTreeMap<u8, u64> = digraph.successors.keys().map(|&l| (l, 1)).collect();
    for _ in 0..k {
        ways = digraph
            .successors
            .iter()
            .map(|(&l, succ)| (l, succ.iter().map(|m| ways[m]).sum()))
            .collect();
    }
    ways.values().sum()
}

/// Enumerates the admissible label sequences `j_0, ..., j_k`.
pub fn label_sequences(digraph: &TransitionDigraph, k: usize) -> Vec<Vec<u8>> {
    fn extend(
        digraph: &TransitionDigraph,
        stack: &mut Vec<u8>,
        k: usize,
        out: &mut Vec<Vec<u8>>,
    ) {
        if stack.len() == k + 1 {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().expect("stack holds the path so far");
        for &m in &digraph.successors[&last] {
            stack.push(m);
            extend(digraph, stack, k, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for &l in digraph.successors.keys() {
        stack.push(l);
        extend(digraph, &mut stack, k, &mut out);
        stack.pop();
    }
    out
}
