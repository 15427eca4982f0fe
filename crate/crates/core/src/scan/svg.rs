//! Flat SVG rasters of region grids: one rectangle per horizontal run of equal
//! verdicts, crisp edges, fixed palette and a legend.

use std::fmt::Write;

use super::{CellVerdict, RegionGrid};
use crate::rational::format_rational;

const CANVAS: usize = 600;
const LEGEND_WIDTH: usize = 200;
const MARGIN: usize = 10;

pub fn verdict_color(v: CellVerdict) -> &'static str {
    match v {
        CellVerdict::OutsideCone => "#d3d3d3",
        CellVerdict::Maximal => "#ffffff",
        CellVerdict::Nonmaximal => "#ffd700",
        CellVerdict::InnerDeterminant => "#2e8b57",
        CellVerdict::BoundaryUncertain => "#d62728",
    }
}

/// Renders `grid` with `t` increasing upwards.
pub fn render_svg(grid: &RegionGrid) -> String {
    let n = grid.resolution;
    let px = (CANVAS / n).max(1);
    let side = n * px;
    let width = side + 2 * MARGIN + LEGEND_WIDTH;
    let height = (side + 2 * MARGIN).max(6 * 24 + 2 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##);
    for j in 0..n {
        let y = MARGIN + (n - 1 - j) * px;
        let mut i = 0;
        while i < n {
            let v = grid.cell(i, j);
            let start = i;
            while i < n && grid.cell(i, j) == v {
                i += 1;
            }
            if v == CellVerdict::Maximal {
                continue;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{y}" width="{}" height="{px}" fill="{}"/>"#,
                MARGIN + start * px,
                (i - start) * px,
                verdict_color(v)
            );
        }
    }
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="#000000"/>"##
    );
    let lx = side + 2 * MARGIN;
    let font = r#"font-family="monospace" font-size="12""#;
    let _ =
        writeln!(out, r#"<text x="{lx}" y="{}" {font}>{} ({})</text>"#, MARGIN + 12, grid.family, grid.method.label());
    for (k, v) in CellVerdict::ALL.iter().enumerate() {
        let y = MARGIN + 24 * (k + 1);
        let _ = writeln!(
            out,
            r##"<rect x="{lx}" y="{y}" width="14" height="14" fill="{}" stroke="#000000"/>"##,
            verdict_color(*v)
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}" {font}>{}</text>"#, lx + 20, y + 12, v.label());
    }
    let ranges = format!(
        "s: [{}, {}]  t: [{}, {}]",
        format_rational(&grid.s_range.0),
        format_rational(&grid.s_range.1),
        format_rational(&grid.t_range.0),
        format_rational(&grid.t_range.1)
    );
    let _ = writeln!(out, r#"<text x="{lx}" y="{}" {font}>{ranges}</text>"#, MARGIN + 24 * 6 + 12);
    out += "</svg>\n";
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{run_scan, Method, ScanConfig, ScanFamily};

    #[test]
    fn runs_cover_each_row() {
        let grid = run_scan(&ScanConfig::new(ScanFamily::Circulant3, 7, Method::Lp)).unwrap();
        let svg = render_svg(&grid);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains(verdict_color(CellVerdict::Nonmaximal)));
        for v in CellVerdict::ALL {
            assert!(svg.contains(v.label()));
        }
        // Cell widths in the nonmaximal runs add up to the nonmaximal count.
        let px = 600 / 7;
        let gold: usize = svg
            .lines()
            .filter(|l| l.contains("#ffd700") && !l.contains("width=\"14\""))
            .map(|l| {
                let w = l.split("width=\"").nth(1).unwrap().split('"').next().unwrap();
                w.parse::<usize>().unwrap() / px
            })
            .sum();
        assert_eq!(gold, grid.count(CellVerdict::Nonmaximal));
        assert_eq!(svg, render_svg(&grid));
    }
}
