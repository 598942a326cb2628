//! Parameter scans over the two structured families.

use std::path::PathBuf;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;

use witnesskit::detection::{detect, DetectConfig};
use witnesskit::states::{example_34, example_35, DensityMatrix};
use witnesskit::Verdict;

use crate::{parse_complex, write_output, CliError, CliResult};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    E34,
    E35,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(clap::Args, Debug)]
pub struct ScanArgs {
    family: Family,
    /// Fixed parameter `name=value`; complex values as `re:im`. Repeatable.
    #[arg(long = "set")]
    set: Vec<String>,
    /// Grid axis `name=start:stop:count` or `name=v1,v2,...`. Repeatable; axes combine as a product.
    #[arg(long = "grid")]
    grid: Vec<String>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Largest n tried by the entry criterion.
    #[arg(long, default_value_t = 6)]
    n_cap: usize,
    #[arg(long, env = "WITNESSKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Family {
    fn q_count(self) -> usize {
        match self {
            Family::E34 => 3,
            Family::E35 => 4,
        }
    }

    fn off_diagonal(self) -> &'static [&'static str] {
        match self {
            Family::E34 => &["a", "b", "c"],
            Family::E35 => &["a", "b", "c", "d"],
        }
    }

    /// Reference point; the last weight is derived from the others unless set.
    fn defaults(self) -> (Vec<f64>, Complex64) {
        match self {
            Family::E34 => (vec![0.2, 0.1], Complex64::new(0.05, 0.0)),
            Family::E35 => (vec![0.05, 0.1, 0.425], Complex64::new(0.025, 0.0)),
        }
    }

    fn names(self) -> Vec<String> {
        (1..=self.q_count()).map(|i| format!("q{i}")).chain(self.off_diagonal().iter().map(|s| s.to_string())).collect()
    }

    fn build(self, q: &[f64], z: &[Complex64]) -> witnesskit::Result<DensityMatrix> {
        match self {
            Family::E34 => example_34(q[0], q[1], q[2], z[0], z[1], z[2]),
            Family::E35 => example_35(q[0], q[1], q[2], q[3], z[0], z[1], z[2], z[3]),
        }
    }
}

fn split_assignment(s: &str) -> CliResult<(&str, &str)> {
    s.split_once('=').ok_or_else(|| CliError::Input(format!("`{s}`: expected name=value")))
}

fn parse_axis(spec: &str) -> CliResult<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| CliError::Input(format!("grid value `{t}`: {e}")));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (num(start)?, num(stop)?);
            let n: usize = count.trim().parse().map_err(|e| CliError::Input(format!("grid count `{count}`: {e}")))?;
            Ok(match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            })
        }
        [_] => spec.split(',').filter(|t| !t.trim().is_empty()).map(num).collect(),
        _ => Err(CliError::Input(format!("grid `{spec}`: expected start:stop:count or a comma list"))),
    }
}

#[derive(Serialize)]
struct Row {
    params: serde_json::Map<String, serde_json::Value>,
    ppt_min_eig: f64,
    ccnr_norm: f64,
    best_entry_value: Option<f64>,
    verdict: Verdict,
}

pub fn run(args: &ScanArgs) -> CliResult<()> {
    let fam = args.family;
    let names = fam.names();
    let known = |name: &str| -> CliResult<usize> {
        names.iter().position(|n| n == name).ok_or_else(|| {
            CliError::Input(format!("unknown parameter `{name}` for {fam:?} (expected one of {})", names.join(", ")))
        })
    };

    let qn = fam.q_count();
    let (q_default, z_default) = fam.defaults();
    let mut fixed: Vec<Option<Complex64>> = vec![None; names.len()];
    for s in &args.set {
        let (name, value) = split_assignment(s)?;
        let idx = known(name)?;
        let v = parse_complex(value).map_err(|e| CliError::Input(format!("--set {name}: {e}")))?;
        if idx < qn && v.im != 0.0 {
            return Err(CliError::Input(format!("--set {name}: weights are real")));
        }
        fixed[idx] = Some(v);
    }
    let mut axes: Vec<(usize, Vec<f64>)> = Vec::new();
    for g in &args.grid {
        let (name, spec) = split_assignment(g)?;
        let idx = known(name)?;
        if fixed[idx].is_some() || axes.iter().any(|(i, _)| *i == idx) {
            return Err(CliError::Input(format!("parameter `{name}` given more than once")));
        }
        axes.push((idx, parse_axis(spec)?));
    }

    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let config = DetectConfig { n_cap: args.n_cap, seed: args.seed, run_distill: false, ..DetectConfig::default() };
    let mut rows = Vec::with_capacity(total);
    for flat in 0..total {
        let mut point = fixed.clone();
        let mut rem = flat;
        for (idx, values) in axes.iter().rev() {
            point[*idx] = Some(Complex64::new(values[rem % values.len()], 0.0));
            rem /= values.len();
        }
        let mut q: Vec<f64> = (0..qn - 1).map(|i| point[i].map_or(q_default[i], |v| v.re)).collect();
        q.push(point[qn - 1].map_or_else(|| 1.0 - q.iter().sum::<f64>(), |v| v.re));
        let z: Vec<Complex64> = (qn..names.len()).map(|i| point[i].unwrap_or(z_default)).collect();

        let mut params = serde_json::Map::new();
        for (name, v) in names.iter().zip(&q) {
            params.insert(name.clone(), (*v).into());
        }
        for (name, v) in names[qn..].iter().zip(&z) {
            params.insert(name.clone(), serde_json::json!([v.re, v.im]));
        }
        let rho = fam
            .build(&q, &z)
            .map_err(|e| CliError::Input(format!("grid point {}: {e}", serde_json::Value::Object(params.clone()))))?;
        let report = detect(&rho, &config)?;
        rows.push(Row {
            params,
            ppt_min_eig: report.ppt_min_eig,
            ccnr_norm: report.ccnr_trace_norm,
            best_entry_value: report.best_entry_value(),
            verdict: report.verdict,
        });
    }

    let text = match args.format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("plain data serializes");
            s.push('\n');
            s
        }
        TableFormat::Csv => to_csv(&names[..qn], &names[qn..], &rows)?,
    };
    write_output(args.out.as_deref(), &text)
}

/// Shortest round-trip form, with an exponent for tiny magnitudes.
fn num(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

fn to_csv(q_names: &[String], z_names: &[String], rows: &[Row]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = q_names.to_vec();
    for z in z_names {
        header.push(format!("{z}_re"));
        header.push(format!("{z}_im"));
    }
    header.extend(["ppt_min_eig", "ccnr_norm", "best_entry_value", "verdict"].map(String::from));
    let io_err = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(&header).map_err(io_err)?;
    for r in rows {
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        for name in q_names {
            rec.push(r.params[name].to_string());
        }
        for name in z_names {
            let pair = r.params[name].as_array().expect("complex stored as pair");
            rec.push(pair[0].to_string());
            rec.push(pair[1].to_string());
        }
        rec.push(num(r.ppt_min_eig));
        rec.push(num(r.ccnr_norm));
        rec.push(r.best_entry_value.map_or(String::new(), num));
        rec.push(serde_json::to_value(r.verdict).expect("enum serializes").as_str().unwrap_or_default().to_string());
        w.write_record(&rec).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
