//! Polyline turning angle and self-intersection.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solver::{Closure, FreeCurve};

/// Sum of exterior angles of a closed polyline, each taken in `(-π, π]`.
pub fn turning_angle<T: Real>(curve: &FreeCurve<T>) -> Result<T> {
    if !curve.is_closed() {
        return Err(Error::Input("turning angle needs a closed curve".into()));
    }
    let pts = &curve.points()[..curve.len() - 1];
    let n = pts.len();
    let mut total = T::zero();
    for i in 0..n {
        let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        let (ux, uy) = (b.0 - a.0, b.1 - a.1);
        let (vx, vy) = (c.0 - b.0, c.1 - b.1);
        if (ux == T::zero() && uy == T::zero()) || (vx == T::zero() && vy == T::zero()) {
            return Err(Error::Input(format!("zero-length edge at vertex {i}")));
        }
        let mut turn = (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
        if turn == -T::PI() {
            turn = T::PI();
        }
        total = total + turn;
    }
    Ok(total)
}

/// A pair of non-adjacent polyline edges that meet. `translated` is set when
/// the second edge belongs to the next period of a periodic curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntersectionWitness {
    pub first: usize,
    pub second: usize,
    pub translated: bool,
}

type Segment<T> = ((T, T), (T, T));

fn orientation<T: Real>(a: (T, T), b: (T, T), c: (T, T)) -> T {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment<T: Real>(a: (T, T), b: (T, T), p: (T, T)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Closed-segment intersection, touching included.
fn segments_meet<T: Real>(s: Segment<T>, t: Segment<T>) -> bool {
    let (p1, p2) = s;
    let (q1, q2) = t;
    if p1.0.max(p2.0) < q1.0.min(q2.0)
        || q1.0.max(q2.0) < p1.0.min(p2.0)
        || p1.1.max(p2.1) < q1.1.min(q2.1)
        || q1.1.max(q2.1) < p1.1.min(p2.1)
    {
        return false;
    }
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    let zero = T::zero();
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero)) && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero)) {
        return true;
    }
    (d1 == zero && on_segment(q1, q2, p1))
        || (d2 == zero && on_segment(q1, q2, p2))
        || (d3 == zero && on_segment(p1, p2, q1))
        || (d4 == zero && on_segment(p1, p2, q2))
}

/// First intersecting pair of non-adjacent edges, sweeping one period and,
/// for periodic curves, its translate by the period shift.
pub fn self_intersection<T: Real>(curve: &FreeCurve<T>) -> Option<IntersectionWitness> {
    let edges = curve.edges();
    let m = edges.len();
    let closed = curve.is_closed();
    for i in 0..m {
        for j in i + 2..m {
            if closed && i == 0 && j == m - 1 {
                continue;
            }
            if segments_meet(edges[i], edges[j]) {
                return Some(IntersectionWitness {
                    first: i,
                    second: j,
                    translated: false,
                });
            }
        }
    }
    if let Closure::Periodic { shift, .. } = curve.closure() {
        let moved: Vec<Segment<T>> = edges
            .iter()
            .map(|&((a, b), (c, d))| ((a + shift, b), (c + shift, d)))
            .collect();
        for (i, &edge) in edges.iter().enumerate() {
            for (j, &e) in moved.iter().enumerate() {
                // The wrap edge ends where the translated first edge starts.
                if i == m - 1 && j == 0 {
                    continue;
                }
                if segments_meet(edge, e) {
                    return Some(IntersectionWitness {
                        first: i,
                        second: j,
                        translated: true,
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn ngon(n: usize, ccw: bool) -> FreeCurve<f64> {
        let s = if ccw { 1.0 } else { -1.0 };
        FreeCurve::polygon(
            (0..n)
                .map(|i| {
                    let t = s * TAU * i as f64 / n as f64;
                    (t.cos(), t.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    fn figure_eight(n: usize) -> FreeCurve<f64> {
        FreeCurve::polygon(
            (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    (t.sin(), (2.0 * t).sin() / 2.0)
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn regular_polygons_turn_once() {
        assert!((turning_angle(&ngon(64, true)).unwrap() - TAU).abs() < 1e-12);
        assert!((turning_angle(&ngon(64, false)).unwrap() + TAU).abs() < 1e-12);
        assert!(self_intersection(&ngon(64, true)).is_none());
    }

    #[test]
    fn figure_eight_is_flagged() {
        let c = figure_eight(64);
        let total = turning_angle(&c).unwrap();
        assert!(total.abs() < 1e-9, "{total}");
        assert!(self_intersection(&c).is_some());
    }

    #[test]
    fn open_curve_has_no_turning_angle() {
        let c = FreeCurve::new(vec![0.0, 1.0, 2.0], vec![(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)], None, Closure::Open)
            .unwrap();
        assert!(turning_angle(&c).is_err());
    }

    #[test]
    fn hairpin_turn_counts_as_plus_pi() {
        // Back-tracking vertices: exterior angle exactly π, never -π.
        let c = FreeCurve::polygon(vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.0)]).unwrap();
        let total = turning_angle(&c).unwrap();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn periodic_curve_meeting_its_translate() {
        // A loop whose right end pokes past the left end of the next period.
        let pts = vec![(0.0, 0.0), (1.5, 0.0), (1.5, 1.0), (0.5, 1.0), (0.5, -0.5), (1.0, -0.5)];
        let params = (0..pts.len()).map(|i| i as f64).collect();
        let c = FreeCurve::new(
            params,
            pts,
            None,
            Closure::Periodic {
                param_period: 6.0,
                shift: 1.0,
            },
        )
        .unwrap();
        assert!(self_intersection(&c).is_some());

        let params = (0..4).map(|i| i as f64).collect();
        let wave = vec![(0.0, 0.0), (0.25, 0.1), (0.5, 0.0), (0.75, -0.1)];
        let c = FreeCurve::new(
            params,
            wave,
            None,
            Closure::Periodic {
                param_period: 4.0,
                shift: 1.0,
            },
        )
        .unwrap();
        assert!(self_intersection(&c).is_none());
    }

    proptest! {
        #[test]
        fn turning_is_rotation_and_scale_invariant(
            radii in proptest::collection::vec(0.5f64..1.5, 12..40),
            angle in -PI..PI,
            scale in 0.01f64..100.0,
        ) {
            let n = radii.len();
            let star: Vec<(f64, f64)> = radii
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let t = TAU * i as f64 / n as f64;
                    (r * t.cos(), r * t.sin())
                })
                .collect();
            let (s, c) = angle.sin_cos();
            let moved: Vec<(f64, f64)> =
                star.iter().map(|&(x, y)| (scale * (c * x - s * y), scale * (s * x + c * y))).collect();
            let a = turning_angle(&FreeCurve::polygon(star).unwrap()).unwrap();
            let b = turning_angle(&FreeCurve::polygon(moved).unwrap()).unwrap();
            prop_assert!((a - TAU).abs() < 1e-12);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
