//! Rotation lookup table: maps the observed bit, the best solution's bit and the
//! fitness comparison to a signed rotation angle.
//!
//! Text format, one row per line, `#` comments:
//!
//! ```text
//! # x b f(x)>=f(b) delta/pi sign
//! 0 1 false 0.01 toward_one
//! ```
//!
//! All eight `(x, b, f(x)>=f(b))` combinations must appear exactly once.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qubit::QubitGene;

/// How the sign of a rotation is derived from the gene's amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    /// Always 0.
    Zero,
    /// Increase `β²`. `sign(αβ)`; at `β = 0` rotate by `+θ`, at `α = 0` stay.
    TowardOne,
    /// Increase `α²`. `−sign(αβ)`; at `α = 0` rotate by `+θ`, at `β = 0` stay.
    TowardZero,
    /// `sign(αβ)`, zero on the axes.
    SignOfProduct,
    /// `−sign(αβ)`, zero on the axes.
    NegSignOfProduct,
}

impl SignRule {
    pub fn sign(self, g: &QubitGene) -> f64 {
        let (a, b) = (g.alpha(), g.beta());
        let product_sign = |p: f64| {
            if p > 0.0 {
                1.0
            } else if p < 0.0 {
                -1.0
            } else {
                0.0
            }
        };
        match self {
            SignRule::Zero => 0.0,
            SignRule::SignOfProduct => product_sign(a * b),
            SignRule::NegSignOfProduct => -product_sign(a * b),
            SignRule::TowardOne => {
                if a == 0.0 {
                    0.0
                } else if b == 0.0 {
                    1.0
                } else {
                    product_sign(a * b)
                }
            }
            SignRule::TowardZero => {
                if b == 0.0 {
                    0.0
                } else if a == 0.0 {
                    1.0
                } else {
                    -product_sign(a * b)
                }
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            SignRule::Zero => "zero",
            SignRule::TowardOne => "toward_one",
            SignRule::TowardZero => "toward_zero",
            SignRule::SignOfProduct => "sign_of_product",
            SignRule::NegSignOfProduct => "neg_sign_of_product",
        }
    }
}

impl FromStr for SignRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zero" => SignRule::Zero,
            "toward_one" => SignRule::TowardOne,
            "toward_zero" => SignRule::TowardZero,
            "sign_of_product" => SignRule::SignOfProduct,
            "neg_sign_of_product" => SignRule::NegSignOfProduct,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown sign code {other:?}"
                )))
            }
        })
    }
}

impl fmt::Display for SignRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookupRow {
    /// Rotation magnitude in radians, within `[0, π/2]`.
    pub delta_theta: f64,
    pub sign_rule: SignRule,
}

impl LookupRow {
    pub const ZERO: LookupRow = LookupRow {
        delta_theta: 0.0,
        sign_rule: SignRule::Zero,
    };
}

/// Eight rows indexed by `(x_bit, b_bit, f(x) >= f(b))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationLookupTable {
    rows: [LookupRow; 8],
}

fn row_index(x_bit: bool, b_bit: bool, fx_ge_fb: bool) -> usize {
    (usize::from(x_bit) << 2) | (usize::from(b_bit) << 1) | usize::from(fx_ge_fb)
}

impl Default for RotationLookupTable {
    /// Rotates only when the observed bit differs from the best solution's bit
    /// and the observed individual is worse, by `0.01π` toward the best bit.
    fn default() -> Self {
        let step = 0.01 * std::f64::consts::PI;
        let mut t = Self::zeroed();
        t.rows[row_index(false, true, false)] = LookupRow {
            delta_theta: step,
            sign_rule: SignRule::TowardOne,
        };
        t.rows[row_index(true, false, false)] = LookupRow {
            delta_theta: step,
            sign_rule: SignRule::TowardZero,
        };
        t
    }
}

impl RotationLookupTable {
    pub fn zeroed() -> Self {
        Self {
            rows: [LookupRow::ZERO; 8],
        }
    }

    pub fn new(rows: [LookupRow; 8]) -> Result<Self> {
        let t = Self { rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for r in &self.rows {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&r.delta_theta) {
                return Err(Error::InvalidArgument(format!(
                    "rotation magnitude {} rad outside [0, pi/2]",
                    r.delta_theta
                )));
            }
        }
        Ok(())
    }

    pub fn row(&self, x_bit: bool, b_bit: bool, fx_ge_fb: bool) -> &LookupRow {
        &self.rows[row_index(x_bit, b_bit, fx_ge_fb)]
    }

    pub fn set(&mut self, x_bit: bool, b_bit: bool, fx_ge_fb: bool, row: LookupRow) -> Result<()> {
        let old = std::mem::replace(&mut self.rows[row_index(x_bit, b_bit, fx_ge_fb)], row);
        if let Err(e) = self.validate() {
            self.rows[row_index(x_bit, b_bit, fx_ge_fb)] = old;
            return Err(e);
        }
        Ok(())
    }

    /// Signed rotation angle for a gene.
    pub fn lookup_delta(&self, x_bit: bool, b_bit: bool, fx_ge_fb: bool, g: &QubitGene) -> f64 {
        let row = self.row(x_bit, b_bit, fx_ge_fb);
        if row.delta_theta == 0.0 {
            return 0.0;
        }
        row.sign_rule.sign(g) * row.delta_theta
    }

    pub fn is_zero(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.delta_theta == 0.0 || r.sign_rule == SignRule::Zero)
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rows: [Option<LookupRow>; 8] = [None; 8];
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
            let f: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if f.len() != 5 {
                return Err(bad(format!(
                    "expected `x_bit b_bit fx_ge_fb delta_pi sign`, found {line:?}"
                )));
            }
            let bit = |s: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(format!("bit must be 0 or 1, found {s:?}"))),
            };
            let flag = |s: &str| match s {
                "true" | "1" => Ok(true),
                "false" | "0" => Ok(false),
                _ => Err(bad(format!("expected true/false, found {s:?}"))),
            };
            let (x, b, ge) = (bit(f[0])?, bit(f[1])?, flag(f[2])?);
            let delta_pi: f64 = f[3]
                .parse()
                .map_err(|e| bad(format!("bad angle {:?}: {e}", f[3])))?;
            if !(0.0..=0.5).contains(&delta_pi) {
                return Err(bad(format!("angle {delta_pi}π outside [0, 0.5]π")));
            }
            let sign_rule: SignRule = f[4].parse().map_err(|e: Error| bad(e.to_string()))?;
            let slot = &mut rows[row_index(x, b, ge)];
            if slot.is_some() {
                return Err(bad(format!("duplicate row for ({}, {}, {ge})", f[0], f[1])));
            }
            *slot = Some(LookupRow {
                delta_theta: delta_pi * std::f64::consts::PI,
                sign_rule,
            });
        }
        let mut out = [LookupRow::ZERO; 8];
        for (i, r) in rows.iter().enumerate() {
            out[i] = r.ok_or_else(|| Error::Format {
                path: origin.to_string(),
                line: 0,
                message: format!(
                    "missing row ({}, {}, {})",
                    i >> 2 & 1,
                    i >> 1 & 1,
                    i & 1 == 1
                ),
            })?;
        }
        Self::new(out)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Renders the table in the text format accepted by [`RotationLookupTable::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::from("# x_bit b_bit fx_ge_fb delta_theta/pi sign\n");
        for x in [false, true] {
            for b in [false, true] {
                for ge in [false, true] {
                    let r = self.row(x, b, ge);
                    s.push_str(&format!(
                        "{} {} {} {} {}\n",
                        u8::from(x),
                        u8::from(b),
                        ge,
                        r.delta_theta / std::f64::consts::PI,
                        r.sign_rule
                    ));
                }
            }
        }
        s
    }
}
