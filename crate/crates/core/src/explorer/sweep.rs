use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analyze::ORACLE_TOL;
use super::InitialState;
use crate::error::{Error, Result};
use crate::families::{build, FamilySpec};
use crate::oracle::{optimal_moments, QuadratureSpec};

/// Default cap on the number of grid points.
pub const DEFAULT_MAX_ROWS: usize = 1_000_000;
/// Every n-th row is re-checked against the quadrature oracle.
pub const DEFAULT_ORACLE_EVERY: usize = 50;

/// Result columns that can be selected in [`SweepSpec::outputs`].
pub const OUTPUT_FIELDS: &[&str] =
    &["f_max", "delta", "det_t", "choi_rank", "unital", "useful", "universal", "uqt", "oracle_checked"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.start <= self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Spec(format!(
                "axis `{}` needs step > 0 and start <= stop (got {}..{} step {})",
                self.param, self.start, self.stop, self.step
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

/// Grid sweep over the parameters of one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Fixed parameters; axis parameters override them.
    pub family: FamilySpec,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub initial_state: InitialState,
    /// Subset of [`OUTPUT_FIELDS`]; all of them when absent.
    #[serde(default)]
    pub outputs: Option<Vec<String>>,
    #[serde(default)]
    pub max_rows: Option<usize>,
    #[serde(default)]
    pub oracle_every: Option<usize>,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn columns(&self) -> Result<Vec<&str>> {
        match &self.outputs {
            None => Ok(OUTPUT_FIELDS.to_vec()),
            Some(list) => list
                .iter()
                .map(|name| {
                    OUTPUT_FIELDS
                        .iter()
                        .find(|f| **f == name.as_str())
                        .copied()
                        .ok_or_else(|| Error::Spec(format!("unknown output field `{name}`")))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: Vec<(String, f64)>,
    pub f_max: Option<f64>,
    pub delta: Option<f64>,
    pub det_t: Option<f64>,
    pub choi_rank: Option<usize>,
    pub unital: Option<bool>,
    pub useful: Option<bool>,
    pub universal: Option<bool>,
    pub uqt: Option<bool>,
    pub oracle_checked: bool,
    /// Largest formula-versus-quadrature gap when the row was re-checked.
    pub oracle_gap: Option<f64>,
    /// `ok`, or the reason the grid point was rejected.
    pub status: String,
}

impl SweepRow {
    fn invalid(params: Vec<(String, f64)>, reason: String) -> Self {
        SweepRow {
            params,
            f_max: None,
            delta: None,
            det_t: None,
            choi_rank: None,
            unital: None,
            useful: None,
            universal: None,
            uqt: None,
            oracle_checked: false,
            oracle_gap: None,
            status: reason,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub family: String,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows whose quadrature check disagreed with the formula beyond tolerance.
    pub fn oracle_disagreements(&self) -> usize {
        self.rows.iter().filter(|r| r.oracle_gap.is_some_and(|g| g > ORACLE_TOL)).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let names: Vec<String> = match self.rows.first() {
            Some(r) => r.params.iter().map(|(k, _)| format!("param:{k}")).collect(),
            None => Vec::new(),
        };
        let mut header = vec!["family".to_string()];
        header.extend(names);
        header.extend(self.columns.iter().cloned());
        header.push("status".into());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![self.family.clone()];
            rec.extend(row.params.iter().map(|(_, v)| float(Some(*v))));
            for col in &self.columns {
                rec.push(match col.as_str() {
                    "f_max" => float(row.f_max),
                    "delta" => float(row.delta),
                    "det_t" => float(row.det_t),
                    "choi_rank" => row.choi_rank.map(|r| r.to_string()).unwrap_or_default(),
                    "unital" => flag(row.unital),
                    "useful" => flag(row.useful),
                    "universal" => flag(row.universal),
                    "uqt" => flag(row.uqt),
                    "oracle_checked" => row.oracle_checked.to_string(),
                    other => unreachable!("column {other} validated earlier"),
                });
            }
            rec.push(row.status.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv writer emits UTF-8"))
    }
}

fn float(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn flag(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn grid(axes: &[Axis], cap: usize) -> Result<Vec<Vec<f64>>> {
    let values: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect::<Result<_>>()?;
    let total = values.iter().try_fold(1usize, |acc, v| acc.checked_mul(v.len()));
    match total {
        Some(n) if n <= cap => {}
        _ => return Err(Error::Spec(format!("sweep grid exceeds the cap of {cap} rows"))),
    }
    let mut points = vec![Vec::new()];
    for axis in &values {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

fn evaluate(spec: &SweepSpec, point: &[f64], check_oracle: bool) -> SweepRow {
    let mut family = spec.family.clone();
    let params: Vec<(String, f64)> =
        spec.axes.iter().zip(point).map(|(a, v)| (a.param.clone(), *v)).collect();
    for (k, v) in &params {
        family.params.insert(k.clone(), *v);
    }
    let channel = match build(&family) {
        Ok(ch) => ch,
        Err(e) => return SweepRow::invalid(params, e.to_string()),
    };
    let state = match spec.initial_state.evolve(&channel) {
        Ok(s) => s,
        Err(e) => return SweepRow::invalid(params, e.to_string()),
    };
    let report = channel.report();
    let prof = state.profile();
    let oracle_gap = (check_oracle && prof.formula_valid).then(|| {
        let m = optimal_moments(&state, &QuadratureSpec::default());
        let f = (m.mean_f - prof.f_max.unwrap_or(f64::NAN)).abs();
        let d = (m.delta - prof.delta.unwrap_or(f64::NAN)).abs();
        f.max(d)
    });
    SweepRow {
        params,
        f_max: prof.f_max,
        delta: prof.delta,
        det_t: Some(prof.det_t),
        choi_rank: Some(report.choi_rank),
        unital: Some(report.unital),
        useful: Some(prof.useful),
        universal: Some(prof.universal),
        uqt: Some(prof.uqt),
        oracle_checked: oracle_gap.is_some(),
        oracle_gap,
        status: "ok".into(),
    }
}

/// Evaluate every grid point, in lexicographic axis order (first axis outermost).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let columns = spec.columns()?.into_iter().map(String::from).collect();
    for a in &spec.axes {
        if spec.axes.iter().filter(|b| b.param == a.param).count() > 1 {
            return Err(Error::Spec(format!("axis `{}` appears twice", a.param)));
        }
    }
    let points = grid(&spec.axes, spec.max_rows.unwrap_or(DEFAULT_MAX_ROWS))?;
    let every = spec.oracle_every.unwrap_or(DEFAULT_ORACLE_EVERY).max(1);
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| evaluate(spec, p, i % every == 0))
        .collect();
    Ok(SweepResult { family: spec.family.family.clone(), columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dephasing_spec() -> SweepSpec {
        SweepSpec {
            family: FamilySpec::new("dephasing", &[]),
            axes: vec![Axis { param: "p".into(), start: 0.1, stop: 0.9, step: 0.1 }],
            initial_state: InitialState::Bell(1),
            outputs: None,
            max_rows: None,
            oracle_every: Some(4),
        }
    }

    #[test]
    fn dephasing_sweep_follows_piecewise_law() {
        let res = run_sweep(&dephasing_spec()).unwrap();
        assert_eq!(res.rows.len(), 9);
        for row in &res.rows {
            let p = row.params[0].1;
            let want = if p >= 0.5 { (2.0 * p + 1.0) / 3.0 } else { 1.0 - 2.0 * p / 3.0 };
            match row.f_max {
                Some(f) => assert!((f - want).abs() < 1e-12),
                None => assert!((p - 0.5).abs() < 1e-9),
            }
            assert_eq!(row.uqt, Some(false));
        }
        assert_eq!(res.rows.iter().filter(|r| r.oracle_checked).count(), 3);
        assert_eq!(res.oracle_disagreements(), 0);
    }

    #[test]
    fn depolarizing_sweep_useful_below_half() {
        let spec = SweepSpec {
            family: FamilySpec::new("depolarizing_m", &[]),
            axes: vec![Axis { param: "p".into(), start: 0.0, stop: 0.74, step: 0.02 }],
            initial_state: InitialState::Bell(1),
            outputs: Some(vec!["f_max".into(), "useful".into()]),
            max_rows: None,
            oracle_every: None,
        };
        let res = run_sweep(&spec).unwrap();
        for row in &res.rows {
            let p = row.params[0].1;
            assert!((row.f_max.unwrap() - (1.0 - 2.0 * p / 3.0)).abs() < 1e-12);
            assert_eq!(row.useful.unwrap(), p < 0.5 - 1e-9);
        }
        let csv = res.to_csv_string().unwrap();
        assert!(csv.starts_with("family,param:p,f_max,useful,status\n"));
    }

    #[test]
    fn invalid_points_are_kept_and_marked() {
        let mut spec = dephasing_spec();
        spec.axes[0].stop = 1.3;
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 13);
        assert!(res.rows.iter().filter(|r| !r.is_ok()).all(|r| r.params[0].1 > 1.0));
        assert_eq!(res.rows.iter().filter(|r| !r.is_ok()).count(), 3);
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let spec = SweepSpec {
            family: FamilySpec::new("gadc", &[]),
            axes: vec![
                Axis { param: "gamma".into(), start: 0.0, stop: 1.0, step: 0.1 },
                Axis { param: "N".into(), start: 0.0, stop: 1.0, step: 0.25 },
            ],
            initial_state: InitialState::Bell(1),
            outputs: None,
            max_rows: None,
            oracle_every: None,
        };
        let a = run_sweep(&spec).unwrap().to_csv_string().unwrap();
        let b = run_sweep(&spec).unwrap().to_csv_string().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 11 * 5);
        let second = a.lines().nth(2).unwrap();
        assert!(second.starts_with("gadc,0.0000000000000000e0,2.5000000000000000e-1,"));
    }

    #[test]
    fn spec_validation() {
        let mut spec = dephasing_spec();
        spec.axes[0].step = 0.0;
        assert!(run_sweep(&spec).is_err());
        let mut spec = dephasing_spec();
        spec.max_rows = Some(3);
        assert!(run_sweep(&spec).is_err());
        let mut spec = dephasing_spec();
        spec.outputs = Some(vec!["fidelity".into()]);
        assert!(run_sweep(&spec).is_err());
        let json = r#"{"family":{"family":"werner"},"axes":[{"param":"p","start":0.3,"stop":0.9,"step":0.3}],"initial_state":"bell1"}"#;
        assert_eq!(run_sweep(&SweepSpec::from_json(json).unwrap()).unwrap().rows.len(), 3);
    }
}
