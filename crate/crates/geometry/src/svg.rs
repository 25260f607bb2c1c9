//! Minimal SVG plot of a region in its domain square.

use std::fmt::Write;

use crate::Region;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const FILLS: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#b07aa1"];

/// Renders `region` with `t` to the right and `t*` upwards, the diagonal
/// `t* = t` dashed, and `title` plus a polygon count as the legend.
pub fn render(region: &Region, title: &str) -> String {
    let r = region.domain().size();
    let scale = SIZE / r;
    let px = |x: f64| MARGIN + x * scale;
    let py = |y: f64| MARGIN + SIZE - y * scale;
    let total = SIZE + 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{h}" viewBox="0 0 {total} {h}">"#,
        h = total + 20.0
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>"#
    );
    for (k, poly) in region.polygons().iter().enumerate() {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|v| format!("{:.3},{:.3}", px(v.x), py(v.y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.6" stroke="black" stroke-width="0.3"/>"#,
            pts.join(" "),
            FILLS[k % FILLS.len()]
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="4 3"/>"#,
        px(0.0),
        py(0.0),
        px(r),
        py(r)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">t</text>"#,
        MARGIN + SIZE + 8.0,
        MARGIN + SIZE
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">t*</text>"#,
        MARGIN - 8.0,
        MARGIN - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.3}" font-family="sans-serif" font-size="12">{} ({} polygons, r = {r})</text>"#,
        MARGIN + SIZE + 28.0,
        escape(title),
        region.len()
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Domain;

    #[test]
    fn empty_region_has_frame_and_legend() {
        let svg = render(&Region::empty(Domain::new(10.0).unwrap()), "x < 1 && y > 2");
        assert!(svg.starts_with("<svg"));
        assert!(!svg.contains("<polygon"));
        assert!(svg.contains("x &lt; 1 &amp;&amp; y &gt; 2 (0 polygons"));
    }

    #[test]
    fn full_region_draws_one_polygon() {
        let svg = render(&Region::full(Domain::new(10.0).unwrap()), "true");
        assert_eq!(svg.matches("<polygon").count(), 1);
    }
}
