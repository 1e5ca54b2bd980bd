//! Static SVG plot of a rotation-set hull.

use std::fmt::Write as _;

use torusrot::geom::Vec2;

/// Hull polygon in a fixed `[-1, 1]²` view box, scaled uniformly so the hull fits
/// inside `[-0.9, 0.9]²` when it would not otherwise.
pub fn hull_svg(vertices: &[Vec2], title: &str) -> String {
    let reach = vertices.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
    let scale = if reach > 0.9 { 0.9 / reach } else { 1.0 };
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1 -1 2 2" width="400" height="400">"#);
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, r##"  <rect x="-1" y="-1" width="2" height="2" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"  <g stroke="#999999" stroke-width="0.005">"##);
    let _ = writeln!(out, r#"    <line x1="-1" y1="0" x2="1" y2="0"/>"#);
    let _ = writeln!(out, r#"    <line x1="0" y1="-1" x2="0" y2="1"/>"#);
    let _ = writeln!(out, "  </g>");
    let pts: Vec<String> = vertices.iter().map(|p| format!("{:.6},{:.6}", p.x * scale + 0.0, -p.y * scale + 0.0)).collect();
    match vertices.len() {
        1 => {
            let _ = writeln!(out, r##"  <circle cx="{:.6}" cy="{:.6}" r="0.02" fill="#1f5fa8"/>"##, vertices[0].x * scale + 0.0, -vertices[0].y * scale + 0.0);
        }
        2 => {
            let _ = writeln!(out, r##"  <polyline points="{}" stroke="#1f5fa8" stroke-width="0.02" fill="none"/>"##, pts.join(" "));
        }
        _ => {
            let _ = writeln!(
                out,
                r##"  <polygon points="{}" fill="#1f5fa8" fill-opacity="0.3" stroke="#1f5fa8" stroke-width="0.01"/>"##,
                pts.join(" ")
            );
        }
    }
    let _ = writeln!(out, r##"  <text x="-0.95" y="0.95" font-size="0.06" fill="#333333">scale {scale:.4}</text>"##);
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
