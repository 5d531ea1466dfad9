//! Deterministic SVG rendering of charts and signed marked subdivisions.
//!
//! All geometry is computed in exact rationals; pixel coordinates are
//! emitted as truncated 3-decimal strings so identical inputs always
//! produce byte-identical documents. No timestamps, no random ids.

use num::{BigInt, BigRational, Signed, Zero};

use realtrop::tropcurve::{Chart, QPoint, SignedMarkedSubdivision};
use realtrop::Rat;

pub struct RenderSpec {
    /// [xmin, ymin, xmax, ymax] in problem coordinates.
    pub bbox: [Rat; 4],
    /// Pixels per problem unit.
    pub scale: Rat,
    pub labels: bool,
}

pub fn default_box() -> [Rat; 4] {
    let r = |n: i64| Rat::from_integer(BigInt::from(n));
    [r(-5), r(-5), r(5), r(5)]
}

/// Formats a rational pixel coordinate as a decimal string truncated to
/// three places, with no trailing zeros beyond the integer part rule:
/// always exactly three fractional digits for stability.
fn px(r: &Rat) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scaled = &a * BigRational::from_integer(BigInt::from(1000));
    let units = scaled.floor().to_integer();
    let int_part = &units / BigInt::from(1000);
    let frac_part = &units % BigInt::from(1000);
    let sign = if neg && !units.is_zero() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part:03}")
}

struct Canvas {
    spec_scale: Rat,
    xmin: Rat,
    ymax: Rat,
    width: Rat,
    height: Rat,
    x_offset: Rat,
    body: String,
}

impl Canvas {
    fn new(spec: &RenderSpec, x_offset_units: i64) -> Canvas {
        let width = (&spec.bbox[2] - &spec.bbox[0]) * &spec.scale;
        let height = (&spec.bbox[3] - &spec.bbox[1]) * &spec.scale;
        Canvas {
            spec_scale: spec.scale.clone(),
            xmin: spec.bbox[0].clone(),
            ymax: spec.bbox[3].clone(),
            width,
            height,
            x_offset: &spec.scale * Rat::from_integer(BigInt::from(x_offset_units)),
            body: String::new(),
        }
    }

    /// Problem coordinates to pixel coordinates (y axis flipped).
    fn to_px(&self, p: &QPoint) -> (Rat, Rat) {
        let x = (&p[0] - &self.xmin) * &self.spec_scale + &self.x_offset;
        let y = (&self.ymax - &p[1]) * &self.spec_scale;
        (x, y)
    }

    fn line(&mut self, a: &QPoint, b: &QPoint, class: &str) {
        let (x1, y1) = self.to_px(a);
        let (x2, y2) = self.to_px(b);
        self.body.push_str(&format!(
            "  <line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            px(&x1),
            px(&y1),
            px(&x2),
            px(&y2)
        ));
    }

    fn dot(&mut self, p: &QPoint, filled: bool) {
        let (cx, cy) = self.to_px(p);
        let class = if filled { "marked" } else { "white" };
        self.body.push_str(&format!(
            "  <circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"3.000\"/>\n",
            px(&cx),
            px(&cy)
        ));
    }

    fn text(&mut self, p: &QPoint, dx: i64, dy: i64, content: &str) {
        let (cx, cy) = self.to_px(p);
        let cx = cx + Rat::from_integer(BigInt::from(dx));
        let cy = cy + Rat::from_integer(BigInt::from(dy));
        self.body.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\">{}</text>\n",
            px(&cx),
            px(&cy),
            content
        ));
    }

    fn axes(&mut self, spec: &RenderSpec) {
        let zero = Rat::zero();
        if spec.bbox[0] <= zero && zero <= spec.bbox[2] {
            let a = [zero.clone(), spec.bbox[1].clone()];
            let b = [zero.clone(), spec.bbox[3].clone()];
            self.line(&a, &b, "axis");
        }
        if spec.bbox[1] <= zero && zero <= spec.bbox[3] {
            let a = [spec.bbox[0].clone(), zero.clone()];
            let b = [spec.bbox[2].clone(), zero.clone()];
            self.line(&a, &b, "axis");
        }
    }
}

/// Clips the ray `base + t*dir`, `t >= 0`, to the box; returns the
/// visible endpoints, or `None` if it leaves the box immediately.
fn clip_ray(base: &QPoint, dir: (i64, i64), bbox: &[Rat; 4]) -> Option<(QPoint, QPoint)> {
    let d = [
        Rat::from_integer(BigInt::from(dir.0)),
        Rat::from_integer(BigInt::from(dir.1)),
    ];
    let mut t_end: Option<Rat> = None;
    for axis in 0..2 {
        let (lo, hi) = (&bbox[axis], &bbox[axis + 2]);
        if d[axis].is_zero() {
            if &base[axis] < lo || &base[axis] > hi {
                return None;
            }
            continue;
        }
        let bound = if d[axis].is_positive() { hi } else { lo };
        let t = (bound - &base[axis]) / &d[axis];
        if t < Rat::zero() {
            return None;
        }
        t_end = Some(match t_end {
            Some(cur) if cur < t => cur,
            _ => t,
        });
    }
    let t_end = t_end?;
    let tip = [&base[0] + &t_end * &d[0], &base[1] + &t_end * &d[1]];
    Some((base.clone(), tip))
}

fn document(width: &Rat, height: &Rat, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <style>\n\
         .axis {{ stroke: #cccccc; stroke-width: 1; }}\n\
         .edge {{ stroke: #000000; stroke-width: 2; }}\n\
         .edge2 {{ stroke: #000000; stroke-width: 4; }}\n\
         .cell {{ stroke: #333333; stroke-width: 1; fill: none; }}\n\
         .marked {{ fill: #000000; }}\n\
         .white {{ fill: #ffffff; stroke: #000000; stroke-width: 1; }}\n\
         text {{ font-family: monospace; font-size: 12px; }}\n\
         </style>\n{body}</svg>\n",
        w = px(width),
        h = px(height),
        body = body
    )
}

/// Renders one or more charts side by side, each in its own copy of the
/// bounding box. Rays are clipped to the box.
pub fn render_charts(charts: &[Chart], spec: &RenderSpec) -> String {
    let units = (&spec.bbox[2] - &spec.bbox[0])
        .to_integer()
        .to_string()
        .parse::<i64>()
        .unwrap_or(10)
        + 1;
    let mut body = String::new();
    let mut total_width = Rat::zero();
    let mut height = Rat::zero();
    for (k, chart) in charts.iter().enumerate() {
        let mut canvas = Canvas::new(spec, units * k as i64);
        canvas.axes(spec);
        for seg in &chart.segments {
            let class = if seg.weight >= 2 { "edge2" } else { "edge" };
            canvas.line(&seg.a, &seg.b, class);
        }
        for ray in &chart.rays {
            if let Some((a, b)) = clip_ray(&ray.base, ray.dir, &spec.bbox) {
                let class = if ray.weight >= 2 { "edge2" } else { "edge" };
                canvas.line(&a, &b, class);
            }
        }
        for v in &chart.vertices {
            canvas.dot(v, true);
        }
        if spec.labels {
            let label: String = chart.sign_index.iter().map(|s| s.to_char()).collect();
            let corner = [spec.bbox[0].clone(), spec.bbox[3].clone()];
            canvas.text(&corner, 4, 14, &label);
        }
        total_width = &canvas.x_offset + &canvas.width;
        height = canvas.height.clone();
        body.push_str(&canvas.body);
    }
    document(&total_width, &height, &body)
}

/// Renders a signed marked subdivision: cell boundaries, marked points
/// filled, white points hollow, optional sign labels.
pub fn render_subdivision(t: &SignedMarkedSubdivision, spec: &RenderSpec) -> String {
    let mut canvas = Canvas::new(spec, 0);
    canvas.axes(spec);
    let to_q = |p: (i64, i64)| -> QPoint {
        [
            Rat::from_integer(BigInt::from(p.0)),
            Rat::from_integer(BigInt::from(p.1)),
        ]
    };
    for cell in &t.cells {
        let k = cell.vertices.len();
        for i in 0..k {
            let a = to_q(cell.vertices[i]);
            let b = to_q(cell.vertices[(i + 1) % k]);
            canvas.line(&a, &b, "cell");
        }
    }
    let marked = t.marked_points();
    for (i, &p) in t.support.iter().enumerate() {
        canvas.dot(&to_q(p), marked.contains(&i));
        if spec.labels {
            if let Some(signs) = &t.signs {
                canvas.text(&to_q(p), 6, -6, &signs.get(i).to_char().to_string());
            }
        }
    }
    let width = canvas.width.clone();
    let height = canvas.height.clone();
    document(&width, &height, &canvas.body)
}
