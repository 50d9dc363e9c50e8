//! Parameter-grid sweeps over (c, s, q) with deterministic output.
//!
//! Grid points are pure, independent evaluations; with the `parallel`
//! feature they fan out over a rayon pool and are collected back in grid
//! order, so output bytes never depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{classify, densities_general, SingularityResult};

/// Sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisParam {
    C,
    S,
    Q,
}

impl std::fmt::Display for AxisParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxisParam::C => write!(f, "c"),
            AxisParam::S => write!(f, "s"),
            AxisParam::Q => write!(f, "q"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// One sweep axis: parameter, range, point count, spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl AxisSpec {
    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Domain(format!(
                "axis {} needs count >= 2, got {}",
                self.param, self.count
            )));
        }
        if !(self.min > 0.0 && self.max > self.min) {
            return Err(Error::Domain(format!(
                "axis {}: need 0 < min < max, got [{}, {}]",
                self.param, self.min, self.max
            )));
        }
        Ok(())
    }

    fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

/// A full sweep: one or two axes plus fixed values for the other parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<AxisSpec>,
    pub fixed_c: f64,
    pub fixed_s: f64,
    pub fixed_q: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Domain(format!(
                "sweep needs 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Domain(format!(
                "sweep axes must be distinct, both are {}",
                self.axes[0].param
            )));
        }
        for ax in &self.axes {
            ax.validate()?;
        }
        for (name, v) in [
            ("c", self.fixed_c),
            ("s", self.fixed_s),
            ("q", self.fixed_q),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("fixed {name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    /// Grid points (c, s, q) in row-major order (first axis outer).
    pub fn grid(&self) -> Result<Vec<(f64, f64, f64)>> {
        self.validate()?;
        let apply = |base: (f64, f64, f64), param: AxisParam, v: f64| {
            let (c, s, q) = base;
            match param {
                AxisParam::C => (v, s, q),
                AxisParam::S => (c, v, q),
                AxisParam::Q => (c, s, v),
            }
        };
        let base = (self.fixed_c, self.fixed_s, self.fixed_q);
        let mut out = Vec::new();
        let a0 = self.axes[0].values();
        if self.axes.len() == 1 {
            for &v0 in &a0 {
                out.push(apply(base, self.axes[0].param, v0));
            }
        } else {
            let a1 = self.axes[1].values();
            for &v0 in &a0 {
                for &v1 in &a1 {
                    let p = apply(base, self.axes[0].param, v0);
                    out.push(apply(p, self.axes[1].param, v1));
                }
            }
        }
        Ok(out)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub s: f64,
    pub q: f64,
    pub result: Option<SingularityResult>,
    pub contacts: Option<f64>,
    pub area: Option<f64>,
    pub error: Option<String>,
}

fn eval_point(c: f64, s: f64, q: f64) -> SweepRow {
    match classify(c, s, q) {
        Ok(result) => match densities_general(c, s, q) {
            Ok(d) => SweepRow {
                c,
                s,
                q,
                result: Some(result),
                contacts: Some(d.contacts),
                area: d.area,
                error: None,
            },
            Err(e) => SweepRow {
                c,
                s,
                q,
                result: Some(result),
                contacts: None,
                area: None,
                error: Some(sanitize(&e.to_string())),
            },
        },
        Err(e) => SweepRow {
            c,
            s,
            q,
            result: None,
            contacts: None,
            area: None,
            error: Some(sanitize(&e.to_string())),
        },
    }
}

/// Keep error text CSV-safe: the dialect never quotes.
fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r'], ";")
}

/// Evaluate the sweep one point after another.
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    Ok(spec
        .grid()?
        .into_iter()
        .map(|(c, s, q)| eval_point(c, s, q))
        .collect())
}

/// Evaluate the sweep, fanning grid points out over a thread pool when the
/// `parallel` feature is enabled; rows come back in grid order regardless.
/// `jobs` = None uses the default pool size (logical cores).
pub fn run_sweep(spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<SweepRow>> {
    #[cfg(feature = "parallel")]
    {
        let grid = spec.grid()?;
        let work = || {
            grid.par_iter()
                .map(|&(c, s, q)| eval_point(c, s, q))
                .collect()
        };
        return Ok(match jobs {
            Some(j) if j > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
                .install(work),
            _ => work(),
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        run_sweep_sequential(spec)
    }
}

/// Fixed CSV dialect: header row, columns c,s,q,t_c,kind,phase,contacts,
/// area,error; comma-separated, LF endings, shortest round-trip floats,
/// `NA` for undefined values.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 64 + 64);
    out.push_str("c,s,q,t_c,kind,phase,contacts,area,error\n");
    for r in rows {
        let t_c = r
            .result
            .map(|x| x.t_c.to_string())
            .unwrap_or_else(|| "NA".into());
        let kind = r
            .result
            .and_then(|x| x.kind)
            .map(|k| k.to_string())
            .unwrap_or_else(|| "NA".into());
        let phase = r
            .result
            .map(|x| x.phase.to_string())
            .unwrap_or_else(|| "NA".into());
        let contacts = r
            .contacts
            .map(|v| v.to_string())
            .unwrap_or_else(|| "NA".into());
        let area = r
            .area
            .map(|v| v.to_string())
            .unwrap_or_else(|| "NA".into());
        let error = r.error.clone().unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.c, r.s, r.q, t_c, kind, phase, contacts, area, error
        ));
    }
    out
}

/// JSON form: array of row objects.
pub fn rows_to_json(rows: &[SweepRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("sweep rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;

    fn q1_spec() -> SweepSpec {
        SweepSpec {
            axes: vec![
                AxisSpec {
                    param: AxisParam::C,
                    min: 1.0,
                    max: 2.0,
                    count: 5,
                    spacing: Spacing::Linear,
                },
                AxisSpec {
                    param: AxisParam::S,
                    min: 0.25,
                    max: 4.0,
                    count: 3,
                    spacing: Spacing::Log,
                },
            ],
            fixed_c: 1.0,
            fixed_s: 1.0,
            fixed_q: 1.0,
        }
    }

    #[test]
    fn grid_shape_and_order() {
        let g = q1_spec().grid().unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g[0], (1.0, 0.25, 1.0));
        assert_eq!(g[1].1, 1.0); // inner axis varies fastest
        assert_eq!(g[14], (2.0, 4.0, 1.0));
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = q1_spec();
        s.axes[1].param = AxisParam::C;
        assert!(s.validate().is_err());
        let mut s2 = q1_spec();
        s2.axes[0].count = 1;
        assert!(s2.validate().is_err());
        let mut s3 = q1_spec();
        s3.fixed_q = 0.0;
        assert!(s3.validate().is_err());
        let mut s4 = q1_spec();
        s4.axes.clear();
        assert!(s4.validate().is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let spec = q1_spec();
        let seq = run_sweep_sequential(&spec).unwrap();
        let par = run_sweep(&spec, Some(2)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn csv_is_deterministic_and_well_formed() {
        let spec = q1_spec();
        let a = rows_to_csv(&run_sweep(&spec, None).unwrap());
        let b = rows_to_csv(&run_sweep(&spec, Some(1)).unwrap());
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(
            lines.next().unwrap(),
            "c,s,q,t_c,kind,phase,contacts,area,error"
        );
        for line in lines {
            assert_eq!(line.matches(',').count(), 8, "bad row: {line}");
        }
    }

    #[test]
    fn q1_rows_carry_phase_structure() {
        let rows = run_sweep_sequential(&q1_spec()).unwrap();
        // c = 1 rows are unbound with area NA; c = 2 rows are bound
        let unbound: Vec<_> = rows.iter().filter(|r| r.c == 1.0).collect();
        assert!(unbound
            .iter()
            .all(|r| r.result.unwrap().phase == Phase::Unbound && r.area.is_none()));
        let bound: Vec<_> = rows.iter().filter(|r| r.c == 2.0).collect();
        assert!(bound
            .iter()
            .all(|r| r.result.unwrap().phase == Phase::Bound && r.contacts.unwrap() > 0.0));
    }
}
