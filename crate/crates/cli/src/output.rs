//! Artifact writers. Every float is printed with 17 significant digits so that
//! two runs of the same input can be compared byte for byte.

use std::path::Path;

use serde_json::{json, Map, Number, Value};

use freesurf_core::solver::Closure;
use freesurf_core::{DiagnosticsReport, FreeCurve, HypothesisReport, Solution};

use crate::RunError;

/// `x` with 17 significant digits in exponent form.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // Avoid `-0.0000000000000000e0`.
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // With `arbitrary_precision` the digits are kept verbatim.
    Value::Number(fmt17(x).parse::<Number>().expect("formatted float is a JSON number"))
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|e| RunError::io(path, e))
}

pub fn to_json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

/// `t,u,v,theta,abs_wprime` on the N nodes plus the closing row at `t = P`,
/// which repeats the first row shifted by one period.
pub fn solution_csv(s: &Solution) -> String {
    let n = s.len();
    let u = s.u();
    let (v, th, wp) = (s.v().samples(), s.theta().samples(), s.abs_wp().samples());
    let nodes: Vec<f64> = s.v().nodes().collect();
    let mut out = String::from("t,u,v,theta,abs_wprime\n");
    for j in 0..=n {
        let (i, t, uu) = if j < n {
            (j, nodes[j], u[j])
        } else {
            (0, s.domain().period(), u[0] + s.period_shift())
        };
        out += &format!("{},{},{},{},{}\n", fmt17(t), fmt17(uu), fmt17(v[i]), fmt17(th[i]), fmt17(wp[i]));
    }
    out
}

pub struct BranchStep {
    pub amplitude: f64,
    pub parameter: f64,
    pub newton_iterations: usize,
    pub residual_norm: f64,
}

pub fn solution_json(s: &Solution, steps: &[BranchStep]) -> Value {
    let p = s.profile();
    let mut m = Map::new();
    m.insert("C".into(), num(s.domain().half_width()));
    m.insert("P".into(), num(s.domain().period()));
    m.insert("N".into(), json!(s.len()));
    match p.gravity() {
        Some(g) => {
            m.insert("g".into(), num(g));
            m.insert("lambda".into(), num(p.released_parameter()));
        }
        None => {
            m.insert("g".into(), Value::Null);
            m.insert("lambda".into(), Value::Null);
            m.insert("datum_shift".into(), num(p.released_parameter()));
        }
    }
    m.insert("amplitude".into(), num(s.amplitude()));
    m.insert("residual_norm".into(), num(s.residual_norm()));
    m.insert("branch".into(), json!(s.branch().name()));
    m.insert("newton_iterations".into(), json!(s.newton_iterations()));
    m.insert("period_shift".into(), num(s.period_shift()));
    m.insert(
        "continuation".into(),
        Value::Array(
            steps
                .iter()
                .map(|b| {
                    json!({
                        "amplitude": num(b.amplitude),
                        "released_parameter": num(b.parameter),
                        "newton_iterations": b.newton_iterations,
                        "residual_norm": num(b.residual_norm),
                    })
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

pub struct Sampling {
    pub source: &'static str,
    pub stagnation_tol: f64,
    pub boundary_offset: f64,
}

pub fn report_json(r: &DiagnosticsReport, sampling: &Sampling) -> Value {
    let witness = r.intersection_witness.as_ref().map_or(Value::Null, |w| {
        json!({ "first_segment": w.first, "second_segment": w.second, "translated": w.translated })
    });
    json!({
        "source": sampling.source,
        "certified": r.certified(),
        "failures": r.failures,
        "sampling": {
            "sample_count": r.sample_count,
            "grid": r.grid.map_or(Value::Null, |(nx, ny)| json!([nx, ny])),
            "stagnation_tol": num(sampling.stagnation_tol),
            "boundary_offset": num(sampling.boundary_offset),
        },
        "bernoulli_sup": num(r.bernoulli_sup),
        "min_cos_theta": num(r.min_cos_theta),
        "min_cos_theta_at": num(r.min_cos_theta_at),
        "min_u_prime": num(r.min_u_prime),
        "graph_property": r.graph_property,
        "czam_margin": num(r.czam_margin),
        "czam_excluded": r.czam_excluded,
        "q_max_interior": opt(r.q_max_interior),
        "q_boundary_dev": opt(r.q_boundary_dev),
        "q_path_difference": opt(r.q_path_difference),
        "stagnation_set": r.stagnation_set.iter().map(|&(a, b)| json!([num(a), num(b)])).collect::<Vec<_>>(),
        "self_intersects": r.self_intersects,
        "intersection_witness": witness,
        "turning_number": opt(r.turning_number),
    })
}

pub fn hypothesis_json(r: &HypothesisReport) -> Value {
    json!({
        "sample_count": r.sample_count,
        "overall": r.overall,
        "failed_clauses": r.failed_clauses(),
        "clause_a": {
            "pass": r.clause_a.pass,
            "endpoint_value": num(r.clause_a.endpoint_value),
            "min_interior_speed": num(r.clause_a.min_interior_speed),
        },
        "clause_b": {
            "pass": r.clause_b.pass,
            "max_slope_mismatch": num(r.clause_b.max_slope_mismatch),
        },
        "clause_c": {
            "pass": r.clause_c.pass,
            "strictly_decreasing": r.clause_c.strictly_decreasing,
            "log_concave": r.clause_c.log_concave,
            "decrease_margin": num(r.clause_c.decrease_margin),
            "log_concavity_margin": num(r.clause_c.log_concavity_margin),
        },
    })
}

/// Reads a curve CSV with header `t,u,v` or `t,u,v,theta`.
///
/// A last row that repeats the first height one step further along in `t`
/// and `u` (as in `solution.csv`) marks a periodic curve and is dropped; a
/// last point equal to the first closes the curve; otherwise it is open.
pub fn read_curve(path: &Path) -> Result<FreeCurve, RunError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let with_theta = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["t", "u", "v"] => false,
        ["t", "u", "v", "theta", ..] => true,
        _ => {
            return Err(RunError::Parse(format!(
                "{}: expected header t,u,v[,theta], found {}",
                path.display(),
                header.join(",")
            )))
        }
    };
    let (mut ts, mut pts, mut angles) = (Vec::new(), Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?;
        let field = |i: usize| -> Result<f64, RunError> {
            let s = record.get(i).unwrap_or("");
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| RunError::Parse(format!("{} line {line}: malformed number `{s}`", path.display())))
        };
        ts.push(field(0)?);
        pts.push((field(1)?, field(2)?));
        if with_theta {
            angles.push(field(3)?);
        }
    }
    if pts.len() < 4 {
        return Err(RunError::Parse(format!("{}: a curve needs at least 4 points", path.display())));
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.0.abs()).max(p.1.abs()));
    let closure = if first == last {
        Closure::Closed
    } else if (last.1 - first.1).abs() <= 1e-12 * scale && last.0 > first.0 && ts[ts.len() - 1] > ts[0] {
        let closure = Closure::Periodic {
            param_period: ts[ts.len() - 1] - ts[0],
            shift: last.0 - first.0,
        };
        ts.pop();
        pts.pop();
        angles.pop();
        closure
    } else {
        Closure::Open
    };
    let angles = with_theta.then_some(angles);
    Ok(FreeCurve::new(ts, pts, angles, closure)?)
}
