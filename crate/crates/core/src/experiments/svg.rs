use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::geom::{CompactSet, Point};

fn coords(pts: &[Point<f64>]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", p.x, -p.y);
    }
    s
}

/// One `<path>` per ring (holes painted white over their outer ring),
/// chains as polylines, single points as dots. `y` points up.
pub fn svg_string(set: &CompactSet<f64>) -> String {
    let (lo, hi) = set
        .bbox()
        .unwrap_or((Point::new(-1.0, -1.0), Point::new(1.0, 1.0)));
    let size = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let pad = 0.05 * size;
    let stroke = size / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="512" height="512">"#,
        lo.x - pad,
        -hi.y - pad,
        hi.x - lo.x + 2.0 * pad,
        hi.y - lo.y + 2.0 * pad
    );
    for region in set.regions() {
        let _ = writeln!(
            s,
            r##"<path d="M {} Z" fill="#4a78b5" stroke="none"/>"##,
            coords(region.outer().vertices()).replace(' ', " L ")
        );
        for hole in region.holes() {
            let _ = writeln!(
                s,
                r##"<path d="M {} Z" fill="#ffffff" stroke="none"/>"##,
                coords(hole.vertices()).replace(' ', " L ")
            );
        }
    }
    for chain in set.chains() {
        if chain.is_point() {
            let p = chain.points()[0];
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{}" fill="#c0392b"/>"##, p.x, -p.y, 2.0 * stroke);
        } else {
            let _ = writeln!(
                s,
                r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="{}"/>"##,
                coords(chain.points()),
                stroke
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(path: impl AsRef<Path>, set: &CompactSet<f64>) -> Result<()> {
    fs::write(path, svg_string(set))?;
    Ok(())
}
