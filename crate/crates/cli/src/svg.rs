//! SVG rendering of a factor region: the unit square with shaded labeled
//! boxes and gridlines at the transfer breakpoints. Output is a pure
//! function of the region, so renders are diffable in CI.

use std::fmt::Write;
use trigdet::Region;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Renders the region as a standalone SVG document.
pub fn render_region_svg(region: &Region, breakpoints: &[f64]) -> String {
    let total = SIZE + 2.0 * MARGIN;
    let px = |u: f64| MARGIN + SIZE * u;
    let py = |v: f64| MARGIN + SIZE * (1.0 - v);
    let mut doc = String::new();
    let _ = writeln!(
        doc,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total:.0}\" height=\"{total:.0}\" \
         viewBox=\"0 0 {total:.0} {total:.0}\" data-case=\"{:?}\" data-complemented=\"{}\">",
        region.case_tag, region.complemented
    );
    doc.push_str(
        "<style>\
         .box{fill:#7aa6d6;fill-opacity:.55;stroke:#1f4e79;stroke-width:1}\
         .grid{stroke:#999;stroke-width:.5;stroke-dasharray:3 3}\
         .frame{fill:none;stroke:#222;stroke-width:1.5}\
         .label{font:14px sans-serif;text-anchor:middle;dominant-baseline:middle;fill:#10263f}\
         </style>\n",
    );
    for &t in breakpoints {
        let _ = writeln!(
            doc,
            "<line class=\"grid\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\"/>",
            px(t),
            py(0.0),
            px(t),
            py(1.0)
        );
        let _ = writeln!(
            doc,
            "<line class=\"grid\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\"/>",
            px(0.0),
            py(t),
            px(1.0),
            py(t)
        );
    }
    for b in &region.boxes {
        let _ = writeln!(
            doc,
            "<rect class=\"box\" x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\"/>",
            px(b.x_lo),
            py(b.y_hi),
            SIZE * b.width(),
            SIZE * b.height()
        );
    }
    for b in &region.boxes {
        let _ = writeln!(
            doc,
            "<text class=\"label\" x=\"{:.4}\" y=\"{:.4}\">{}</text>",
            px(0.5 * (b.x_lo + b.x_hi)),
            py(0.5 * (b.y_lo + b.y_hi)),
            b.label
        );
    }
    let _ = writeln!(
        doc,
        "<rect class=\"frame\" x=\"{MARGIN:.4}\" y=\"{MARGIN:.4}\" \
         width=\"{SIZE:.4}\" height=\"{SIZE:.4}\"/>"
    );
    doc.push_str("</svg>\n");
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use trigdet::{build_region, build_transfer, region_case1, TrigSymbolDeg1};

    fn render(b: f64, a_mag: f64) -> String {
        let region = build_region(&TrigSymbolDeg1::new(b, a_mag, 0.0).expect("admissible"));
        let transfer = build_transfer(&region).expect("grid-aligned");
        render_region_svg(&region, transfer.breakpoints())
    }

    #[test]
    fn eight_boxes_render_as_eight_rects_and_labels() {
        let doc = render(0.4, 0.15);
        assert_eq!(doc.matches("class=\"box\"").count(), 8);
        for label in 1..=8 {
            assert!(
                doc.contains(&format!(">{label}</text>")),
                "label {label} missing from the render"
            );
        }
        assert!(doc.contains("data-case=\"DistinctRoots\""));
        assert!(doc.contains("data-complemented=\"false\""));
    }

    #[test]
    fn quarter_grid_lines_show_up_at_multiples_of_a_quarter() {
        let region = region_case1(0.5).expect("b = 1/2 builds");
        let transfer = build_transfer(&region).expect("grid-aligned");
        let doc = render_region_svg(&region, transfer.breakpoints());
        // 5 breakpoints, one vertical and one horizontal line each
        assert_eq!(doc.matches("class=\"grid\"").count(), 10);
        assert!(doc.contains("x1=\"160.0000\""), "gridline at u = 1/4");
    }

    #[test]
    fn empty_region_renders_a_bare_frame() {
        let doc = render(0.0, 0.0);
        assert_eq!(doc.matches("class=\"box\"").count(), 0);
        assert_eq!(doc.matches("class=\"frame\"").count(), 1);
    }

    #[test]
    fn renders_are_byte_deterministic() {
        assert_eq!(render(0.7, 0.1), render(0.7, 0.1));
    }
}
