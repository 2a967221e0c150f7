use super::Solution;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the sampled polyline continues past its last point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Closure<T> {
    /// No continuation.
    Open,
    /// The first and last points coincide.
    Closed,
    /// The sampled points cover one period; the curve repeats with the
    /// parameter advanced by `param_period` and `u` shifted by `shift`.
    Periodic { param_period: T, shift: T },
}

/// A parametrised physical curve `(u(t), v(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeCurve<T> {
    params: Vec<T>,
    points: Vec<(T, T)>,
    tangent_angles: Option<Vec<T>>,
    closure: Closure<T>,
}

impl<T: Real> FreeCurve<T> {
    pub fn new(params: Vec<T>, points: Vec<(T, T)>, tangent_angles: Option<Vec<T>>, closure: Closure<T>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                got: params.len(),
            });
        }
        if let Some(angles) = &tangent_angles {
            if angles.len() != points.len() {
                return Err(Error::LengthMismatch {
                    expected: points.len(),
                    got: angles.len(),
                });
            }
        }
        if points.len() < 3 {
            return Err(Error::Input("a curve needs at least three points".into()));
        }
        if points.iter().any(|&(u, v)| !(u.is_finite() && v.is_finite())) || params.iter().any(|t| !t.is_finite()) {
            return Err(Error::Input("curve coordinates must be finite".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Input(format!(
                    "consecutive points {} and {} coincide",
                    i,
                    i + 1
                )));
            }
        }
        match closure {
            Closure::Closed if points[0] != points[points.len() - 1] => {
                return Err(Error::Input("closed curve must end at its first point".into()))
            }
            Closure::Periodic { param_period, .. } if !(param_period > T::zero()) => {
                return Err(Error::Input("periodic curve needs a positive parameter period".into()))
            }
            _ => {}
        }
        Ok(Self {
            params,
            points,
            tangent_angles,
            closure,
        })
    }

    /// Closed polygon from vertices (the first vertex is appended at the end),
    /// parametrised by vertex index.
    pub fn polygon(vertices: Vec<(T, T)>) -> Result<Self> {
        let mut points = vertices;
        if let Some(&first) = points.first() {
            points.push(first);
        }
        let params = (0..points.len()).map(T::from_count).collect();
        Self::new(params, points, None, Closure::Closed)
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn tangent_angles(&self) -> Option<&[T]> {
        self.tangent_angles.as_deref()
    }

    pub fn closure(&self) -> Closure<T> {
        self.closure
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.closure, Closure::Closed)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct samples: the closing duplicate of a closed curve is dropped.
    fn core_len(&self) -> usize {
        match self.closure {
            Closure::Closed => self.points.len() - 1,
            _ => self.points.len(),
        }
    }

    /// Neighbour `i + offset` (offset ±1) with wrap-around where the closure
    /// allows it; `None` past the ends of an open curve.
    fn neighbour(&self, i: usize, forward: bool) -> Option<(T, (T, T))> {
        let n = self.core_len();
        match self.closure {
            Closure::Open => {
                let j = if forward { i.checked_add(1).filter(|&j| j < n)? } else { i.checked_sub(1)? };
                Some((self.params[j], self.points[j]))
            }
            Closure::Closed => {
                let span = self.params[n] - self.params[0];
                if forward {
                    if i + 1 < n {
                        Some((self.params[i + 1], self.points[i + 1]))
                    } else {
                        Some((self.params[0] + span, self.points[0]))
                    }
                } else if i > 0 {
                    Some((self.params[i - 1], self.points[i - 1]))
                } else {
                    Some((self.params[n - 1] - span, self.points[n - 1]))
                }
            }
            Closure::Periodic { param_period, shift } => {
                if forward {
                    if i + 1 < n {
                        Some((self.params[i + 1], self.points[i + 1]))
                    } else {
                        let (u, v) = self.points[0];
                        Some((self.params[0] + param_period, (u + shift, v)))
                    }
                } else if i > 0 {
                    Some((self.params[i - 1], self.points[i - 1]))
                } else {
                    let (u, v) = self.points[n - 1];
                    Some((self.params[n - 1] - param_period, (u - shift, v)))
                }
            }
        }
    }

    /// Centred-difference stencil at sample `i` (one-sided at open ends):
    /// `(Δt, Δu, Δv)`.
    fn stencil(&self, i: usize) -> (T, T, T) {
        let here = (self.params[i], self.points[i]);
        let back = self.neighbour(i, false).unwrap_or(here);
        let fwd = self.neighbour(i, true).unwrap_or(here);
        (fwd.0 - back.0, fwd.1 .0 - back.1 .0, fwd.1 .1 - back.1 .1)
    }

    /// Tangent angle at each distinct sample: the stored angles when present,
    /// otherwise `atan2` of centred differences.
    pub fn angles(&self) -> Vec<T> {
        let n = self.core_len();
        match &self.tangent_angles {
            Some(a) => a[..n].to_vec(),
            None => (0..n)
                .map(|i| {
                    let (_, du, dv) = self.stencil(i);
                    dv.atan2(du)
                })
                .collect(),
        }
    }

    /// `|w'|` at each distinct sample: chord length over parameter increment
    /// of the centred stencil.
    pub fn speeds(&self) -> Vec<T> {
        (0..self.core_len())
            .map(|i| {
                let (dt, du, dv) = self.stencil(i);
                (du * du + dv * dv).sqrt() / dt.abs()
            })
            .collect()
    }

    /// Heights at the distinct samples.
    pub fn heights(&self) -> Vec<T> {
        self.points[..self.core_len()].iter().map(|p| p.1).collect()
    }

    /// Parameters at the distinct samples.
    pub fn sample_params(&self) -> &[T] {
        &self.params[..self.core_len()]
    }

    /// Polyline edges; periodic curves include the edge into the next period.
    pub fn edges(&self) -> Vec<((T, T), (T, T))> {
        let mut e: Vec<_> = self.points.windows(2).map(|w| (w[0], w[1])).collect();
        if let Closure::Periodic { shift, .. } = self.closure {
            let last = self.points[self.points.len() - 1];
            let (u0, v0) = self.points[0];
            e.push((last, (u0 + shift, v0)));
        }
        e
    }
}

/// Physical free surface of a solution: points `(u(t_j), v(t_j))` over one
/// period with tangent angles `θ(t_j)` and period shift `Λ`.
pub fn reconstruct_curve<T: Real>(solution: &Solution<T>) -> Result<FreeCurve<T>> {
    let params: Vec<T> = solution.v().nodes().collect();
    let points = solution
        .u()
        .into_iter()
        .zip(solution.v().samples())
        .map(|(u, &v)| (u, v))
        .collect();
    FreeCurve::new(
        params,
        points,
        Some(solution.theta().samples().to_vec()),
        Closure::Periodic {
            param_period: solution.domain().period(),
            shift: solution.period_shift(),
        },
    )
}
