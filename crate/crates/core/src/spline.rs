//! Cubic interpolating splines used as one-dimensional fitness landscapes.
//!
//! A [`SplineFitness`] is built from a strictly increasing list of [`Knot`]s and
//! stores one cubic per segment in the local form
//! `y = a + b·t + c·t² + d·t³` with `t = x − xᵢ`. The second derivatives at the
//! knots come from a tridiagonal system solved with the Thomas algorithm; the
//! boundary rows depend on the chosen [`Boundary`].

use std::fs;
use std::path::Path;

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Largest chromosome length for which exhaustive sweeps are allowed.
pub const EXHAUSTIVE_BITS_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot {
    pub x: f64,
    pub y: f64,
}

impl Knot {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// End conditions closing the spline system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Zero second derivative at both ends.
    #[default]
    Natural,
    /// Third derivative continuous across the second and penultimate knots.
    NotAKnot,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(Boundary::Natural),
            "not-a-knot" | "not_a_knot" | "notaknot" => Ok(Boundary::NotAKnot),
            other => Err(Error::InvalidArgument(format!(
                "unknown spline boundary {other:?} (expected natural or not-a-knot)"
            ))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Natural => "natural",
            Boundary::NotAKnot => "not-a-knot",
        })
    }
}

/// The fifteen knots of the reference test landscape on `[0, 200]`.
pub const REFERENCE_KNOTS: [Knot; 15] = [
    Knot::new(0.0, 0.0),
    Knot::new(10.0, 20.0),
    Knot::new(20.0, 40.0),
    Knot::new(30.0, 10.0),
    Knot::new(40.0, 25.0),
    Knot::new(56.0, 33.0),
    Knot::new(60.0, 80.0),
    Knot::new(65.0, 45.0),
    Knot::new(80.0, 60.0),
    Knot::new(90.0, 20.0),
    Knot::new(100.0, 0.0),
    Knot::new(120.0, 20.0),
    Knot::new(150.0, 40.0),
    Knot::new(180.0, 20.0),
    Knot::new(200.0, 0.0),
];

/// Boundary used by [`SplineFitness::reference`]; it places the landscape's
/// best 20-bit string at `01001101011011001110`.
pub const REFERENCE_BOUNDARY: Boundary = Boundary::NotAKnot;

#[derive(Debug, Clone, PartialEq)]
pub struct SplineFitness {
    knots: Vec<Knot>,
    coeffs: Vec<[f64; 4]>,
    boundary: Boundary,
}

/// Builds a natural cubic interpolating spline.
pub fn build_spline(knots: &[Knot]) -> Result<SplineFitness> {
    SplineFitness::new(knots, Boundary::Natural)
}

impl SplineFitness {
    pub fn new(knots: &[Knot], boundary: Boundary) -> Result<Self> {
        if knots.len() < 4 {
            return Err(Error::TooFewKnots(knots.len()));
        }
        for (i, w) in knots.windows(2).enumerate() {
            if !w[0].x.is_finite() || !w[1].x.is_finite() || w[1].x <= w[0].x {
                return Err(Error::NonMonotoneKnots {
                    index: i + 1,
                    prev: w[0].x,
                    next: w[1].x,
                });
            }
        }
        let m = second_derivatives(knots, boundary);
        let coeffs = knots
            .windows(2)
            .zip(m.windows(2))
            .map(|(k, mm)| {
                let h = k[1].x - k[0].x;
                let a = k[0].y;
                let b = (k[1].y - k[0].y) / h - h * (2.0 * mm[0] + mm[1]) / 6.0;
                let c = mm[0] / 2.0;
                let d = (mm[1] - mm[0]) / (6.0 * h);
                [a, b, c, d]
            })
            .collect();
        Ok(Self {
            knots: knots.to_vec(),
            coeffs,
            boundary,
        })
    }

    /// The reference landscape on `[0, 200]`.
    pub fn reference() -> Self {
        Self::new(&REFERENCE_KNOTS, REFERENCE_BOUNDARY).expect("reference knots are valid")
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn lo(&self) -> f64 {
        self.knots[0].x
    }

    pub fn hi(&self) -> f64 {
        self.knots[self.knots.len() - 1].x
    }

    /// Per-segment `[a, b, c, d]` coefficients in powers of `x − xᵢ`.
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.lo(), self.hi());
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        Ok(self.eval_in_domain(x))
    }

    fn segment(&self, x: f64) -> usize {
        // first knot strictly greater than x, minus one, clamped to the last segment
        let i = self.knots.partition_point(|k| k.x <= x);
        i.saturating_sub(1).min(self.coeffs.len() - 1)
    }

    fn eval_in_domain(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let [a, b, c, d] = self.coeffs[i];
        let t = x - self.knots[i].x;
        a + t * (b + t * (c + t * d))
    }

    /// Second derivative of the piece containing `x`; at interior knots this is
    /// the right-hand piece.
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.eval(x)?;
        let i = self.segment(x);
        let [_, _, c, d] = self.coeffs[i];
        let t = x - self.knots[i].x;
        Ok(2.0 * c + 6.0 * d * t)
    }

    /// Fitness of a chromosome decoded onto the spline's domain.
    pub fn chromosome_fitness(&self, c: &BinaryChromosome) -> f64 {
        self.eval_in_domain(c.decode(self.lo(), self.hi()))
    }

    /// Fitness of the `m`-bit chromosome whose big-endian value is `v`.
    pub fn value_fitness(&self, v: u64, m: usize) -> f64 {
        let (lo, hi) = (self.lo(), self.hi());
        let max = (m as f64).exp2() - 1.0;
        self.eval_in_domain(lo + (hi - lo) * v as f64 / max)
    }

    /// Grid scan with step `grid_step`, then golden-section refinement around the
    /// best grid point down to an `x` tolerance of 1e-6.
    pub fn global_argmax(&self, grid_step: f64) -> Result<(f64, f64)> {
        if !grid_step.is_finite() || grid_step <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive, got {grid_step}"
            )));
        }
        let (lo, hi) = (self.lo(), self.hi());
        let n = ((hi - lo) / grid_step).ceil() as usize;
        let mut best = (lo, self.eval_in_domain(lo));
        for k in 1..=n {
            let x = (lo + k as f64 * grid_step).min(hi);
            let y = self.eval_in_domain(x);
            if y > best.1 {
                best = (x, y);
            }
        }
        let a = (best.0 - grid_step).max(lo);
        let b = (best.0 + grid_step).min(hi);
        let (x, y) = golden_section_max(|x| self.eval_in_domain(x), a, b, 1e-6);
        Ok(if y >= best.1 { (x, y) } else { best })
    }

    /// Mean fitness over all `2^m` chromosomes of length `m`.
    pub fn mean_fitness_exhaustive(&self, m: usize) -> Result<f64> {
        if m > EXHAUSTIVE_BITS_CAP {
            return Err(Error::TooLarge {
                what: "exhaustive sweep bit length",
                size: m,
                cap: EXHAUSTIVE_BITS_CAP,
            });
        }
        if m == 0 {
            return Err(Error::InvalidArgument(
                "bit length must be at least 1".into(),
            ));
        }
        let count = 1u64 << m;
        let sum: CompensatedSum = (0..count).map(|v| self.value_fitness(v, m)).collect();
        Ok(sum.value() / count as f64)
    }
}

impl SplineFitness {
    /// The `m`-bit chromosome with the highest fitness (lowest value on ties).
    pub fn best_chromosome_exhaustive(&self, m: usize) -> Result<(BinaryChromosome, f64)> {
        if m > EXHAUSTIVE_BITS_CAP {
            return Err(Error::TooLarge {
                what: "exhaustive sweep bit length",
                size: m,
                cap: EXHAUSTIVE_BITS_CAP,
            });
        }
        let (v, f) = (0..1u64 << m).map(|v| (v, self.value_fitness(v, m))).fold(
            (0, f64::NEG_INFINITY),
            |acc, (v, f)| if f > acc.1 { (v, f) } else { acc },
        );
        Ok((BinaryChromosome::from_value(v, m), f))
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Second derivatives at every knot.
fn second_derivatives(knots: &[Knot], boundary: Boundary) -> Vec<f64> {
    let n = knots.len();
    let h: Vec<f64> = knots.windows(2).map(|w| w[1].x - w[0].x).collect();
    let slope: Vec<f64> = knots
        .windows(2)
        .zip(&h)
        .map(|(w, h)| (w[1].y - w[0].y) / h)
        .collect();

    // unknowns M_1..M_{n-2}; rows i = 1..n-2
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for r in 0..k {
        let i = r + 1;
        sub[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        sup[r] = h[i];
        rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
    }

    if boundary == Boundary::NotAKnot {
        // M_0 = ((h0 + h1) M_1 − h0 M_2) / h1, folded into the first row
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        sup[0] -= h0 * h0 / h1;
        // M_{n-1} = ((hl + hp) M_{n-2} − hl M_{n-3}) / hp, folded into the last row
        let (hp, hl) = (h[n - 3], h[n - 2]);
        diag[k - 1] += hl * (hp + hl) / hp;
        sub[k - 1] -= hl * hl / hp;
    }

    let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&interior);
    if boundary == Boundary::NotAKnot {
        let (h0, h1) = (h[0], h[1]);
        m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
        let (hp, hl) = (h[n - 3], h[n - 2]);
        m[n - 1] = ((hl + hp) * m[n - 2] - hl * m[n - 3]) / hp;
    }
    m
}

/// Thomas algorithm. `sub[0]` and `sup[last]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Parses a knot list: one `x y` pair per line, `#` starts a comment.
pub fn parse_knots(text: &str, origin: &str) -> Result<Vec<Knot>> {
    let mut knots = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Format {
            path: origin.to_string(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(bad(format!("expected `x y`, found {line:?}")));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| bad(format!("bad number {s:?}: {e}")))
        };
        knots.push(Knot::new(parse(fields[0])?, parse(fields[1])?));
    }
    Ok(knots)
}

pub fn read_knots(path: impl AsRef<Path>) -> Result<Vec<Knot>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_knots(&text, &path.display().to_string())
}
