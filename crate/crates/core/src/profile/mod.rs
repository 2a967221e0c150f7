//! Bernoulli speed laws `h` on an interval `J = (y_lo, y_hi]`.

mod hypotheses;
mod pchip;

pub use hypotheses::{check_hypotheses, ClauseA, ClauseB, ClauseC, HypothesisReport};
pub use pchip::MonotoneCubic;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(h, h', log h)` at one height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue<T> {
    pub h: T,
    pub dh: T,
    pub log_h: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind<T> {
    /// `h(Y) = sqrt(λ - 2gY)`.
    WaterWave { g: T, lambda: T },
    /// Monotone C¹ interpolant of `(Y, h)` samples, evaluated at `Y + shift`.
    Tabulated { table: MonotoneCubic<T>, shift: T },
}

/// Speed law `h` with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    kind: ProfileKind<T>,
    lo: T,
    hi: T,
}

impl<T: Real> Profile<T> {
    pub fn water_wave(g: T, lambda: T) -> Result<Self> {
        for (name, value) in [("g", g), ("lambda", lambda)] {
            if !(value > T::zero() && value.is_finite()) {
                return Err(Error::Parameter {
                    name,
                    value: value.as_f64(),
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(Self {
            kind: ProfileKind::WaterWave { g, lambda },
            lo: T::zero(),
            hi: lambda / (T::lit(2.0) * g),
        })
    }

    /// Tabulated profile from knots `ys` (strictly increasing, first ≥ 0) and
    /// finite non-negative speeds.
    pub fn tabulated(ys: Vec<T>, speeds: Vec<T>) -> Result<Self> {
        if speeds.iter().any(|&h| h < T::zero()) {
            return Err(Error::Input("speeds must be non-negative".into()));
        }
        let table = MonotoneCubic::new(ys, speeds)?;
        if table.first() < T::zero() {
            return Err(Error::Input("profile heights must start at or above 0".into()));
        }
        let (lo, hi) = (table.first(), table.last());
        Ok(Self {
            kind: ProfileKind::Tabulated {
                table,
                shift: T::zero(),
            },
            lo,
            hi,
        })
    }

    /// Parses the two-column text format with header line `Y,h`.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, header)) if header.replace(' ', "") == "Y,h" => {}
            Some((n, header)) => {
                return Err(Error::Input(format!("line {n}: expected header `Y,h`, found `{header}`")))
            }
            None => return Err(Error::Input("empty profile table".into())),
        }
        let (mut ys, mut hs) = (Vec::new(), Vec::new());
        for (n, line) in lines {
            let mut cols = line.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<T> {
                let s = s.ok_or_else(|| Error::Input(format!("line {n}: expected two columns")))?;
                s.parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| Error::Input(format!("line {n}: malformed number `{s}`")))
            };
            ys.push(parse(cols.next())?);
            hs.push(parse(cols.next())?);
            if cols.next().is_some() {
                return Err(Error::Input(format!("line {n}: expected two columns")));
            }
        }
        Self::tabulated(ys, hs)
    }

    pub fn kind(&self) -> &ProfileKind<T> {
        &self.kind
    }

    /// `(y_lo, y_hi)`.
    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn gravity(&self) -> Option<T> {
        match self.kind {
            ProfileKind::WaterWave { g, .. } => Some(g),
            ProfileKind::Tabulated { .. } => None,
        }
    }

    /// Top of the domain when `h` vanishes there (the stagnation height `d`).
    pub fn stagnation_height(&self) -> Option<T> {
        match self.speed(self.hi) {
            Ok(h) if h == T::zero() => Some(self.hi),
            _ => None,
        }
    }

    /// The parameter released during continuation: `λ` for the water-wave law,
    /// the vertical datum shift for tables.
    pub fn released_parameter(&self) -> T {
        match &self.kind {
            ProfileKind::WaterWave { lambda, .. } => *lambda,
            ProfileKind::Tabulated { shift, .. } => *shift,
        }
    }

    pub fn with_released_parameter(&self, value: T) -> Result<Self> {
        match &self.kind {
            ProfileKind::WaterWave { g, .. } => Self::water_wave(*g, value),
            ProfileKind::Tabulated { table, .. } => Ok(Self {
                kind: ProfileKind::Tabulated {
                    table: table.clone(),
                    shift: value,
                },
                lo: table.first() - value,
                hi: table.last() - value,
            }),
        }
    }

    /// `true` for `y_lo < y ≤ y_hi`.
    #[inline]
    pub fn contains(&self, y: T) -> bool {
        y > self.lo && y <= self.hi
    }

    fn check(&self, y: T) -> Result<()> {
        if self.contains(y) {
            Ok(())
        } else {
            Err(Error::OutsideProfile {
                y: y.as_f64(),
                lo: self.lo.as_f64(),
                hi: self.hi.as_f64(),
            })
        }
    }

    /// `(h, h')` without the logarithm; `h' = -∞` at a water-wave endpoint.
    pub fn speed_and_slope(&self, y: T) -> Result<(T, T)> {
        self.check(y)?;
        Ok(match &self.kind {
            ProfileKind::WaterWave { g, lambda } => {
                if y == self.hi {
                    (T::zero(), T::neg_infinity())
                } else {
                    let h = (*lambda - T::lit(2.0) * *g * y).max(T::zero()).sqrt();
                    (h, -*g / h)
                }
            }
            ProfileKind::Tabulated { table, shift } => {
                let (h, dh) = table.eval(y + *shift);
                (h.max(T::zero()), dh)
            }
        })
    }

    pub fn speed(&self, y: T) -> Result<T> {
        self.speed_and_slope(y).map(|(h, _)| h)
    }

    /// `(h, h', log h)`; fails where `h = 0`.
    pub fn eval(&self, y: T) -> Result<ProfileValue<T>> {
        let (h, dh) = self.speed_and_slope(y)?;
        if !(h > T::zero()) {
            return Err(Error::SingularLog { y: y.as_f64() });
        }
        Ok(ProfileValue {
            h,
            dh,
            log_h: h.ln(),
        })
    }
}
