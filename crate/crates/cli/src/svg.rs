//! Minimal SVG writer. Input coordinates are mathematical (y up); the view box
//! is the bounding box grown by 5% on every side.

use std::fmt::Write as _;

pub struct Canvas {
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
    stroke: f64,
    body: String,
}

impl Canvas {
    pub fn new(lo: (f64, f64), hi: (f64, f64)) -> Self {
        let w = (hi.0 - lo.0).max(1.0);
        let h = (hi.1 - lo.1).max(1.0);
        let (mx, my) = (0.05 * w, 0.05 * h);
        Canvas {
            min_x: lo.0 - mx,
            max_y: hi.1 + my,
            width: w + 2.0 * mx,
            height: h + 2.0 * my,
            stroke: w.max(h) / 400.0,
            body: String::new(),
        }
    }

    fn at(&self, x: f64, y: f64) -> (f64, f64) {
        (x - self.min_x, self.max_y - y)
    }

    pub fn rect(&mut self, lo: (f64, f64), hi: (f64, f64), fill: &str) {
        let (x, y) = self.at(lo.0, hi.1);
        let s = self.stroke;
        writeln!(
            self.body,
            r#"<rect x="{x}" y="{y}" width="{}" height="{}" fill="{fill}" fill-opacity="0.35" stroke="black" stroke-width="{s}"/>"#,
            hi.0 - lo.0,
            hi.1 - lo.1
        )
        .unwrap();
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], closed: bool) {
        let mut coords: Vec<String> = pts.iter().map(|&(x, y)| self.at(x, y)).map(|(x, y)| format!("{x},{y}")).collect();
        if closed {
            if let Some(first) = coords.first().cloned() {
                coords.push(first);
            }
        }
        let s = self.stroke;
        writeln!(self.body, r#"<polyline points="{}" fill="none" stroke="navy" stroke-width="{s}"/>"#, coords.join(" ")).unwrap();
    }

    pub fn circle(&mut self, x: f64, y: f64) {
        let (cx, cy) = self.at(x, y);
        let r = 2.0 * self.stroke;
        writeln!(self.body, r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="crimson"/>"#).unwrap();
    }

    pub fn text(&mut self, x: f64, y: f64, label: &str) {
        let (tx, ty) = self.at(x, y);
        let size = 8.0 * self.stroke;
        let label = label.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        writeln!(self.body, r#"<text x="{tx}" y="{ty}" font-size="{size}">{label}</text>"#).unwrap();
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            self.width, self.height, self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_and_flip() {
        let mut c = Canvas::new((0.0, 0.0), (100.0, 50.0));
        c.circle(0.0, 50.0);
        let s = c.finish();
        assert!(s.contains(r#"viewBox="0 0 110 55""#));
        assert!(s.contains(r#"cx="5" cy="2.5""#));
    }
}
