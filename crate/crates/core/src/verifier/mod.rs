//! Certificates on a computed solution or an imported curve.
//!
//! Every "almost everywhere" statement is checked at the samples only; the
//! report carries the sample count and grid so that a failure is a concrete,
//! reproducible claim.

mod checks;
mod geometry;
mod qfield;

pub use checks::{
    bernoulli_residual, bernoulli_residual_curve, czam_check, czam_check_curve, graph_check, graph_check_curve,
    stagnation_detect, CzamCheck, GraphCheck,
};
pub use geometry::{self_intersection, turning_angle, IntersectionWitness};
pub use qfield::{q_field_check, QFieldCheck};

use crate::error::Result;
use crate::profile::Profile;
use crate::scalar::Real;
use crate::solver::{reconstruct_curve, FreeCurve, Solution};
use crate::strip::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions<T> {
    /// Columns and rows of the `Q` grid on `0 < y < C`.
    pub grid_nx: usize,
    pub grid_ny: usize,
    /// Samples with `d - v < stagnation_tol` count as stagnant.
    pub stagnation_tol: T,
    /// Smaller Richardson offset for the `Q` trace, relative to `C`.
    pub boundary_offset: T,
    /// Bernoulli residual above which a solution is flagged.
    pub bernoulli_tol: T,
    /// The same for imported curves, whose `|w'|` comes from differences.
    pub curve_bernoulli_tol: T,
    /// Allowed distance of a closed curve's turning angle from `±2π`.
    pub turning_tol: T,
}

impl<T: Real> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self {
            grid_nx: 64,
            grid_ny: 32,
            stagnation_tol: T::lit(1e-6),
            boundary_offset: T::lit(1e-4),
            bernoulli_tol: T::lit(1e-8),
            curve_bernoulli_tol: T::lit(1e-3),
            turning_tol: T::lit(1e-6),
        }
    }
}

/// All margins for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport<T> {
    pub sample_count: usize,
    /// `(nx, ny)` of the `Q` grid when the barrier was evaluated.
    pub grid: Option<(usize, usize)>,
    pub bernoulli_sup: T,
    pub min_cos_theta: T,
    /// Parameter where `cos θ` is smallest.
    pub min_cos_theta_at: T,
    pub min_u_prime: T,
    pub graph_property: bool,
    pub czam_margin: T,
    pub czam_excluded: usize,
    pub q_max_interior: Option<T>,
    pub q_boundary_dev: Option<T>,
    pub q_path_difference: Option<T>,
    pub stagnation_set: Vec<(T, T)>,
    pub self_intersects: bool,
    pub intersection_witness: Option<IntersectionWitness>,
    /// Total turning of a closed input, in radians.
    pub turning_number: Option<T>,
    /// Names of the failed certificates; empty when everything holds.
    pub failures: Vec<&'static str>,
}

impl<T> DiagnosticsReport<T> {
    pub fn certified(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Parts<T> {
    sample_count: usize,
    bernoulli: T,
    bernoulli_tol: T,
    graph: GraphCheck<T>,
    czam: CzamCheck<T>,
    q: Option<(QFieldCheck<T>, (usize, usize))>,
    stagnation: Vec<(T, T)>,
    witness: Option<IntersectionWitness>,
    turning: Option<T>,
    turning_tol: T,
}

fn assemble<T: Real>(p: Parts<T>) -> DiagnosticsReport<T> {
    let mut failures = Vec::new();
    if !(p.bernoulli <= p.bernoulli_tol) {
        failures.push("bernoulli");
    }
    if !p.graph.graph_property {
        failures.push("graph");
    }
    if !(p.czam.margin > T::zero()) {
        failures.push("czam");
    }
    if let Some((q, _)) = &p.q {
        if !(q.q_max_interior < T::zero()) {
            failures.push("q_interior");
        }
    }
    if !p.stagnation.is_empty() {
        failures.push("stagnation");
    }
    if p.witness.is_some() {
        failures.push("self_intersection");
    }
    if let Some(total) = p.turning {
        if !((total.abs() - T::TAU()).abs() <= p.turning_tol) {
            failures.push("turning");
        }
    }
    DiagnosticsReport {
        sample_count: p.sample_count,
        grid: p.q.as_ref().map(|(_, g)| *g),
        bernoulli_sup: p.bernoulli,
        min_cos_theta: p.graph.min_cos_theta,
        min_cos_theta_at: p.graph.witness,
        min_u_prime: p.graph.min_u_prime,
        graph_property: p.graph.graph_property,
        czam_margin: p.czam.margin,
        czam_excluded: p.czam.excluded.len(),
        q_max_interior: p.q.as_ref().map(|(q, _)| q.q_max_interior),
        q_boundary_dev: p.q.as_ref().map(|(q, _)| q.q_boundary_dev),
        q_path_difference: p.q.as_ref().map(|(q, _)| q.path_difference),
        stagnation_set: p.stagnation,
        self_intersects: p.witness.is_some(),
        intersection_witness: p.witness,
        turning_number: p.turning,
        failures,
    }
}

/// Full certificate for a computed solution.
pub fn diagnose<T: Real>(solution: &Solution<T>, options: &VerifyOptions<T>) -> Result<DiagnosticsReport<T>> {
    let profile = solution.profile();
    let params: Vec<T> = solution.v().nodes().collect();
    let stagnation = stagnation_detect(profile, &params, solution.v().samples(), options.stagnation_tol)?;
    let grid = Grid::upper_half(solution.domain(), options.grid_nx, options.grid_ny)?;
    let q = q_field_check(solution, &grid, &stagnation, options.boundary_offset)?;
    let curve = reconstruct_curve(solution)?;
    Ok(assemble(Parts {
        sample_count: solution.len(),
        bernoulli: bernoulli_residual(solution)?,
        bernoulli_tol: options.bernoulli_tol.max(solution.residual_norm()),
        graph: graph_check(solution),
        czam: czam_check(solution, options.stagnation_tol)?,
        q: Some((q, (options.grid_nx, options.grid_ny))),
        stagnation,
        witness: self_intersection(&curve),
        turning: None,
        turning_tol: options.turning_tol,
    }))
}

/// Certificate for an imported curve against a profile. The barrier `Q`
/// needs strip data and is not evaluated; the turning angle is reported for
/// closed curves.
pub fn diagnose_curve<T: Real>(
    curve: &FreeCurve<T>,
    profile: &Profile<T>,
    options: &VerifyOptions<T>,
) -> Result<DiagnosticsReport<T>> {
    let heights = curve.heights();
    let stagnation = stagnation_detect(profile, curve.sample_params(), &heights, options.stagnation_tol)?;
    let turning = if curve.is_closed() { Some(turning_angle(curve)?) } else { None };
    Ok(assemble(Parts {
        sample_count: heights.len(),
        bernoulli: bernoulli_residual_curve(curve, profile)?,
        bernoulli_tol: options.curve_bernoulli_tol,
        graph: graph_check_curve(curve),
        czam: czam_check_curve(curve, profile, options.stagnation_tol)?,
        q: None,
        stagnation,
        witness: self_intersection(curve),
        turning,
        turning_tol: options.turning_tol,
    }))
}
