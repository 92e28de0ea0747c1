//! Deterministic SVG rendering of the two-dimensional complex: the triangle
//! region with grid lines, additive faces filled (optionally colored by
//! covered component), additive edges and vertices marked, the function drawn
//! along the left and upper borders, and component shadows on the axes.
//! Identical input yields byte-identical output.

use dff_core::complex2d::{additive_faces, covered_components, Cover, Face, Proj};
use dff_core::pwl::PwlFunction;
use dff_core::rational::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt::Write;

pub struct PlotSpec {
    pub show_function_on_borders: bool,
    pub color_additive_faces: bool,
    pub color_by_component: bool,
    pub canvas_size: u32,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            show_function_on_borders: true,
            color_additive_faces: true,
            color_by_component: false,
            canvas_size: 720,
        }
    }
}

const PALETTE: [&str; 6] = [
    "#8fd18f", "#8ab4f8", "#f4a4a0", "#ffe082", "#ce93d8", "#80deea",
];

/// Decimal form of a rational with six significant digits, trailing zeros
/// trimmed; exact when the value needs fewer digits.
pub fn fmt_coord(r: &Rational) -> String {
    if r.is_zero() {
        return "0".to_owned();
    }
    let neg = r.is_negative();
    let abs = r.abs();
    // Find the decimal exponent e with 10^e <= abs < 10^(e+1).
    let ten = BigInt::from(10);
    let mut e: i32 = 0;
    let (num, den) = (abs.numer().clone(), abs.denom().clone());
    let mut lo = num.clone();
    let mut hi = den.clone();
    while lo < hi {
        lo *= &ten;
        e -= 1;
    }
    while lo >= &hi * &ten {
        hi *= &ten;
        e += 1;
    }
    // Round abs * 10^(5-e) to an integer: six significant digits.
    let shift = 5 - e;
    let (mut scaled_num, mut scaled_den) = (num, den);
    if shift >= 0 {
        scaled_num *= ten.pow(shift as u32);
    } else {
        scaled_den *= ten.pow((-shift) as u32);
    }
    let digits: BigInt = (&scaled_num + &scaled_den / 2u8) / &scaled_den; // round half up
    let mut text = digits.to_string();
    // Place the decimal point after the first digit + e positions.
    let point = e + 1;
    if point <= 0 {
        let zeros = "0".repeat((-point) as usize);
        text = format!("0.{zeros}{text}");
    } else if (point as usize) < text.len() {
        text.insert(point as usize, '.');
    } else {
        text.push_str(&"0".repeat(point as usize - text.len()));
    }
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    if neg {
        format!("-{text}")
    } else {
        text
    }
}

struct Canvas {
    pad: Rational,
    scale: Rational,
    size: Rational,
}

impl Canvas {
    fn new(size: u32) -> Self {
        let size = Rational::from_integer(BigInt::from(size));
        let pad = &size / Rational::from_integer(BigInt::from(6));
        let scale = &size - Rational::from_integer(BigInt::from(2)) * &pad;
        Canvas { pad, scale, size }
    }
    fn x(&self, v: &Rational) -> String {
        fmt_coord(&(&self.pad + v * &self.scale))
    }
    fn y(&self, v: &Rational) -> String {
        fmt_coord(&(&self.size - &self.pad - v * &self.scale))
    }
    fn pt(&self, x: &Rational, y: &Rational) -> String {
        format!("{},{}", self.x(x), self.y(y))
    }
}

fn component_of(cover: &Cover, p: &Proj) -> Option<usize> {
    cover
        .components
        .iter()
        .position(|c| c.iter().any(|(a, b)| a <= p.lo() && p.hi() <= b))
}

fn face_corners(face: &Face) -> Vec<(Rational, Rational)> {
    // Order the lex-sorted vertex list counterclockwise around the centroid.
    let vs = &face.vertices;
    let n = Rational::from_integer(BigInt::from(vs.len() as i64));
    let cx: Rational = vs.iter().map(|v| v.0.clone()).sum::<Rational>() / &n;
    let cy: Rational = vs.iter().map(|v| v.1.clone()).sum::<Rational>() / &n;
    let mut out = vs.clone();
    out.sort_by(|a, b| {
        let (ax, ay) = (&a.0 - &cx, &a.1 - &cy);
        let (bx, by) = (&b.0 - &cx, &b.1 - &cy);
        let ha = (ay.is_negative() as u8, ax.is_negative() as u8);
        let hb = (by.is_negative() as u8, bx.is_negative() as u8);
        // Half-plane bucket first, then cross product.
        let qa = match ha {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        let qb = match hb {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        qa.cmp(&qb)
            .then_with(|| (&bx * &ay).cmp(&(&ax * &by)))
            .then_with(|| a.cmp(b))
    });
    out
}

pub fn render(f: &PwlFunction, spec: &PlotSpec) -> String {
    let c = Canvas::new(spec.canvas_size);
    let cover = covered_components(f);
    let additive = additive_faces(f);
    let size = spec.canvas_size;

    let mut s = String::new();
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    let zero = Rational::zero();
    let one = Rational::from_integer(BigInt::from(1));

    // Filled additive 2-dimensional faces.
    if spec.color_additive_faces {
        for face in additive.iter().filter(|f| f.dim == 2) {
            let color = if spec.color_by_component {
                component_of(&cover, &face.i)
                    .map(|k| PALETTE[k % PALETTE.len()])
                    .unwrap_or(PALETTE[0])
            } else {
                PALETTE[0]
            };
            let pts: Vec<String> = face_corners(face)
                .iter()
                .map(|(x, y)| c.pt(x, y))
                .collect();
            let _ = write!(
                s,
                "<polygon points=\"{}\" fill=\"{color}\" stroke=\"none\"/>\n",
                pts.join(" ")
            );
        }
    }

    // Grid lines at the breakpoints, clipped to the triangle.
    let breaks = f.breakpoint_xs();
    for b in &breaks {
        let rest = &one - b;
        if b > &zero && b < &one {
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n",
                c.x(b), c.y(&zero), c.x(b), c.y(&rest)
            );
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n",
                c.x(&zero), c.y(b), c.x(&rest), c.y(b)
            );
        }
        if b > &zero {
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"0.7\"/>\n",
                c.x(&zero), c.y(b), c.x(b), c.y(&zero)
            );
        }
    }
    // Triangle border.
    let _ = write!(
        s,
        "<polygon points=\"{} {} {}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\"/>\n",
        c.pt(&zero, &zero),
        c.pt(&one, &zero),
        c.pt(&zero, &one)
    );

    // Additive edges and isolated additive vertices.
    for face in additive.iter().filter(|f| f.dim == 1) {
        let (a, b) = (&face.vertices[0], &face.vertices[1]);
        let _ = write!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#2e7d32\" stroke-width=\"2.4\"/>\n",
            c.x(&a.0), c.y(&a.1), c.x(&b.0), c.y(&b.1)
        );
    }
    for face in additive.iter().filter(|f| f.dim == 0) {
        let v = &face.vertices[0];
        let _ = write!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#2e7d32\"/>\n",
            c.x(&v.0),
            c.y(&v.1)
        );
    }

    // The function along the upper and left borders.
    if spec.show_function_on_borders {
        let strip = Rational::new(BigInt::from(1), BigInt::from(8));
        let gap = Rational::new(BigInt::from(1), BigInt::from(40));
        let bps = f.breakpoints();
        for w in bps.windows(2) {
            let (x0, x1) = (&w[0].x, &w[1].x);
            let (v0, v1) = (
                w[0].limit_right.as_ref().unwrap(),
                w[1].limit_left.as_ref().unwrap(),
            );
            // Upper border: graph above the line y = 1.
            let y0 = &one + &gap + v0 * &strip;
            let y1 = &one + &gap + v1 * &strip;
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1a237e\" stroke-width=\"1.5\"/>\n",
                c.x(x0), c.y(&y0), c.x(x1), c.y(&y1)
            );
            // Left border: graph left of the line x = 0, growing leftward.
            let lx0 = -(&gap + v0 * &strip);
            let lx1 = -(&gap + v1 * &strip);
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1a237e\" stroke-width=\"1.5\"/>\n",
                c.x(&lx0), c.y(x0), c.x(&lx1), c.y(x1)
            );
        }
    }

    // Covered-component shadows along the axes.
    for (k, comp) in cover.components.iter().enumerate() {
        let color = if spec.color_by_component {
            PALETTE[k % PALETTE.len()]
        } else {
            "#9e9e9e"
        };
        let off = Rational::new(BigInt::from(-1), BigInt::from(20));
        for (a, b) in comp {
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"6\"/>\n",
                c.x(a), c.y(&off), c.x(b), c.y(&off)
            );
            let _ = write!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"6\"/>\n",
                c.x(&off), c.y(a), c.x(&off), c.y(b)
            );
        }
    }

    s.push_str("</svg>\n");
    s
}
