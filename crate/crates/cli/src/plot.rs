//! SVG picture of a run: the region, optionally the tested boxes, and the
//! cluster discs. Output depends only on its inputs.

use std::fmt::Write;

use rug::Rational;

use rootclust::clustering::Cluster;
use rootclust::geometry::ComplexBox;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;
/// Smallest drawn radius, in pixels, so that tiny clusters stay visible.
const MIN_RADIUS: f64 = 3.0;

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn new(roi: &ComplexBox) -> Self {
        let w = roi.width().to_f64();
        let (cx, cy) = (roi.center().0.to_f64(), roi.center().1.to_f64());
        Frame {
            x0: cx - w / 2.0,
            y1: cy + w / 2.0,
            scale: (SIZE - 2.0 * MARGIN) / w,
        }
    }

    fn x(&self, re: &Rational) -> f64 {
        MARGIN + (re.to_f64() - self.x0) * self.scale
    }

    fn y(&self, im: &Rational) -> f64 {
        MARGIN + (self.y1 - im.to_f64()) * self.scale
    }

    fn rect(&self, out: &mut String, b: &ComplexBox, class: &str) {
        let half = Rational::from(b.width() / 2u32);
        let left = Rational::from(&b.center().0 - &half);
        let top = Rational::from(&b.center().1 + &half);
        let w = b.width().to_f64() * self.scale;
        let _ = writeln!(
            out,
            r#"  <rect class="{class}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            self.x(&left),
            self.y(&top),
            w,
            w
        );
    }
}

pub fn render(roi: &ComplexBox, clusters: &[Cluster], boxes: &[ComplexBox]) -> String {
    let f = Frame::new(roi);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out += "  <style>\n    .roi { fill: white; stroke: black; stroke-width: 1.5 }\n    \
            .box { fill: none; stroke: #9bb; stroke-width: 0.3 }\n    \
            .cluster { fill: #c33; fill-opacity: 0.6; stroke: #800; stroke-width: 0.8 }\n    \
            text { font: 11px sans-serif; fill: #400 }\n  </style>\n";
    f.rect(&mut out, roi, "roi");
    for b in boxes {
        f.rect(&mut out, b, "box");
    }
    for c in clusters {
        let (re, im) = c.disc.center();
        let r = (c.disc.radius().to_f64() * f.scale).max(MIN_RADIUS);
        let (x, y) = (f.x(re), f.y(im));
        let _ = writeln!(
            out,
            r#"  <circle class="cluster" cx="{x:.3}" cy="{y:.3}" r="{r:.3}"/>"#
        );
        if c.multiplicity > 1 {
            let _ = writeln!(
                out,
                r#"  <text x="{:.3}" y="{:.3}">{}</text>"#,
                x + r + 2.0,
                y - r,
                c.multiplicity
            );
        }
    }
    out += "</svg>\n";
    out
}
