//! Batch runs over an [`ExperimentConfig`], one CSV row per (instance, rule).

use std::io::{self, Write};
use std::path::Path;

use ausolab::bounds::{maxmin_bound, reachgen_bound, theorem1_bound, ReachGen};
use ausolab::reach::reach_report;
use ausolab::walks::{expected_visits_exact, expected_visits_f64, monte_carlo, MAX_EXACT_DP_VERTICES};
use ausolab::{Auso, Rational};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::config::{ExperimentConfig, RuleSpec};
use crate::{generate, Family};

pub const CSV_HEADER: [&str; 17] = [
    "family", "d", "n", "seed", "rule", "trials", "mean", "stderr", "min", "max", "exact", "theorem1", "maxmin", "f_tk",
    "g_tk", "reachgen_tk", "error",
];

/// Reach statistics are skipped above this many vertices.
pub const MAX_REACH_VERTICES: usize = 1 << 16;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row {
    pub family: String,
    pub d: Option<usize>,
    pub n: Option<usize>,
    pub seed: u64,
    pub rule: String,
    pub trials: Option<u64>,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub exact: Option<f64>,
    pub theorem1: Option<f64>,
    pub maxmin: Option<f64>,
    pub f_tk: String,
    pub g_tk: String,
    pub reachgen_tk: String,
    pub error: Option<String>,
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn int<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    fn fields(&self) -> [String; 17] {
        [
            self.family.clone(),
            int(self.d),
            int(self.n),
            self.seed.to_string(),
            self.rule.clone(),
            int(self.trials),
            num(self.mean),
            num(self.stderr),
            int(self.min),
            int(self.max),
            num(self.exact),
            num(self.theorem1),
            num(self.maxmin),
            self.f_tk.clone(),
            self.g_tk.clone(),
            self.reachgen_tk.clone(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Per-instance columns shared by every rule row.
struct InstanceColumns {
    exact: Option<f64>,
    theorem1: Option<f64>,
    maxmin: f64,
    f_tk: String,
    g_tk: String,
    reachgen_tk: String,
}

fn ratio_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn instance_columns(auso: &Auso, tks: &[(usize, usize)]) -> ausolab::Result<InstanceColumns> {
    let n = auso.vertex_count();
    let d = auso.dim();
    let exact = if n <= MAX_EXACT_DP_VERTICES {
        ratio_f64(&expected_visits_exact(auso)?[auso.source()])
    } else {
        expected_visits_f64(auso)[auso.source()]
    };
    let (mut f_tk, mut g_tk, mut reachgen_tk) = (Vec::new(), Vec::new(), Vec::new());
    if n <= MAX_REACH_VERTICES {
        for &(t, k) in tks {
            let report = reach_report(auso, t, k);
            f_tk.push(report.f.to_string());
            g_tk.push(report.g.map_or_else(|| "inf".to_string(), |g| g.to_string()));
            let rg = if t >= 2 {
                let g = report.g.map(|g| ausolab::numerics::rational_int(g as i64));
                reachgen_bound(&BigUint::from(n), d as u64, t, g.as_ref(), &BigUint::from(report.f))?
            } else {
                ReachGen::Inapplicable("t < 2".into())
            };
            reachgen_tk.push(rg.value().map_or_else(|| "nan".to_string(), |v| format!("{:.6}", ratio_f64(v))));
        }
    }
    Ok(InstanceColumns {
        exact: Some(exact),
        theorem1: theorem1_bound(n as u64, d as u64).ok().map(|b| b.to_f64()),
        maxmin: ratio_f64(&maxmin_bound(&auso.h_vector())),
        f_tk: f_tk.join(";"),
        g_tk: g_tk.join(";"),
        reachgen_tk: reachgen_tk.join(";"),
    })
}

fn load_file_instance(cfg: &ExperimentConfig) -> ausolab::Result<Auso> {
    let path = cfg.path.as_deref().expect("validated by the config parser");
    crate::load_input(path, cfg.graph.as_deref())
}

fn failed(cfg: &ExperimentConfig, base: &Row, e: ausolab::Error) -> Vec<Row> {
    let msg = e.to_string();
    cfg.rules.iter().map(|r| Row { rule: r.to_string(), error: Some(msg.clone()), ..base.clone() }).collect()
}

fn rows_for_instance(cfg: &ExperimentConfig, family: Family, d: Option<usize>, seed: u64) -> Vec<Row> {
    let base = Row { family: family.as_str().to_string(), d, seed, ..Row::default() };
    let instance = match family {
        Family::File => load_file_instance(cfg),
        _ => generate(family, d.unwrap(), cfg.cuts, seed, None).map(|i| i.auso),
    };
    let auso = match instance {
        Ok(a) => a,
        Err(e) => return failed(cfg, &base, e),
    };
    let base = Row { d: Some(auso.dim()), n: Some(auso.vertex_count()), ..base };
    let cols = match instance_columns(&auso, &cfg.tk_pairs()) {
        Ok(c) => c,
        Err(e) => return failed(cfg, &base, e),
    };
    let base = Row {
        exact: cols.exact,
        theorem1: cols.theorem1,
        maxmin: Some(cols.maxmin),
        f_tk: cols.f_tk,
        g_tk: cols.g_tk,
        reachgen_tk: cols.reachgen_tk,
        ..base
    };
    let start = match cfg.start.resolve(&auso, seed) {
        Ok(s) => s,
        Err(e) => return failed(cfg, &base, e),
    };
    cfg.rules
        .iter()
        .map(|&rule| {
            let mut row = Row { rule: rule.to_string(), ..base.clone() };
            if let RuleSpec::Walk(r) = rule {
                match monte_carlo(&auso, start, r, cfg.trials, seed) {
                    Ok(s) => {
                        row.trials = Some(s.trials);
                        row.mean = Some(s.mean);
                        row.stderr = Some(s.stderr);
                        row.min = Some(s.min);
                        row.max = Some(s.max);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            row
        })
        .collect()
}

/// Rows in config order: dimensions, then instance seeds, then rules.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<Row> {
    if cfg.family == Family::File {
        return rows_for_instance(cfg, Family::File, None, cfg.seed);
    }
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        for j in 0..cfg.instances {
            rows.extend(rows_for_instance(cfg, cfg.family, Some(d), cfg.seed.wrapping_add(j)));
        }
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()
}

/// `key=value` echo of the config, written next to the CSV.
pub fn write_meta(cfg: &ExperimentConfig, path: &Path) -> io::Result<()> {
    let mut text = String::from("ausolab experiment\n");
    for (k, v) in &cfg.echo {
        text.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(path, text)
}
