//! Energy and labeling file formats, plus report serialization.
//!
//! The energy format is whitespace separated text with no comments:
//!
//! ```text
//! MSE 1
//! n l m oriented
//! <n rows of l reals>            unary costs D
//! <m lines of "i j w">           stored edges, 0-based, i <= j unless oriented
//! <l rows of l reals>            label interactions V
//! ```
//!
//! Reals are written with 17 significant digits so files round-trip doubles
//! exactly. Reports are line-oriented key/value text; their exact schema is
//! documented in the repository README. Everything written here is a pure
//! function of its inputs, so identical seeds produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::bench::BenchReport;
use crate::energy::{Edge, EdgeWeights, Energy, Labeling};
use crate::error::{Error, Result};
use crate::pyramid::SolveReport;

const MAGIC: &str = "MSE";
const VERSION: &str = "1";

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes an energy in the `MSE 1` text format.
pub fn write_energy<W: Write>(energy: &Energy, out: &mut W) -> Result<()> {
    let violations = energy.validate();
    if let Some(first) = violations.first() {
        return Err(Error::Format(format!("refusing to write invalid energy: {first}")));
    }
    let n = energy.num_vars();
    let l = energy.num_labels();
    writeln!(out, "{MAGIC} {VERSION}")?;
    writeln!(
        out,
        "{n} {l} {} {}",
        energy.weights.len(),
        energy.weights.oriented as u8
    )?;
    for i in 0..n {
        let row: Vec<String> = (0..l).map(|a| fmt_real(energy.unary[[i, a]])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    for edge in energy.weights.iter() {
        writeln!(out, "{} {} {}", edge.i, edge.j, fmt_real(edge.weight))?;
    }
    for a in 0..l {
        let row: Vec<String> = (0..l).map(|b| fmt_real(energy.interaction[[a, b]])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn write_energy_file<P: AsRef<Path>>(energy: &Energy, path: P) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_energy(energy, &mut out)
}

struct Tokens<'a> {
    iter: std::str::SplitWhitespace<'a>,
    consumed: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            iter: text.split_whitespace(),
            consumed: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        self.consumed += 1;
        self.iter
            .next()
            .ok_or_else(|| Error::Format(format!("unexpected end of file, expected {what}")))
    }

    fn usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| Error::Format(format!("bad {what}: {tok:?}")))
    }

    fn real(&mut self, what: &str) -> Result<f64> {
        let tok = self.next(what)?;
        let v: f64 = tok
            .parse()
            .map_err(|_| Error::Format(format!("bad {what}: {tok:?}")))?;
        if !v.is_finite() {
            return Err(Error::Format(format!("non-finite {what}: {tok}")));
        }
        Ok(v)
    }
}

/// Parses the `MSE 1` text format.
pub fn read_energy<R: Read>(input: &mut R) -> Result<Energy> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut tokens = Tokens::new(&text);

    let magic = tokens.next("magic")?;
    if magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}, expected {MAGIC:?}")));
    }
    let version = tokens.next("version")?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version:?}")));
    }
    let n = tokens.usize("variable count")?;
    let l = tokens.usize("label count")?;
    let m = tokens.usize("edge count")?;
    let oriented = match tokens.next("oriented flag")? {
        "0" => false,
        "1" => true,
        other => return Err(Error::Format(format!("bad oriented flag {other:?}"))),
    };
    if n == 0 || l == 0 {
        return Err(Error::Format(format!("bad dimensions n={n} l={l}")));
    }

    let mut unary = Array2::zeros((n, l));
    for i in 0..n {
        for a in 0..l {
            unary[[i, a]] = tokens.real(&format!("D entry ({i}, {a})"))?;
        }
    }

    let mut entries = Vec::with_capacity(m);
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..m {
        let i = tokens.usize(&format!("edge {k} endpoint i"))?;
        let j = tokens.usize(&format!("edge {k} endpoint j"))?;
        let w = tokens.real(&format!("edge {k} weight"))?;
        if i >= n || j >= n {
            return Err(Error::Format(format!(
                "edge ({i}, {j}) out of range for {n} variables"
            )));
        }
        if !oriented && i > j {
            return Err(Error::Format(format!(
                "edge ({i}, {j}) violates the i <= j storage convention"
            )));
        }
        if !seen.insert((i, j)) {
            return Err(Error::Format(format!("duplicate edge ({i}, {j})")));
        }
        entries.push(Edge::new(i, j, w));
    }

    let mut interaction = Array2::zeros((l, l));
    for a in 0..l {
        for b in 0..l {
            interaction[[a, b]] = tokens.real(&format!("V entry ({a}, {b})"))?;
        }
    }
    if tokens.iter.next().is_some() {
        return Err(Error::Format("trailing data after V table".to_string()));
    }

    Ok(Energy::new(
        unary,
        EdgeWeights::from_entries(oriented, entries),
        interaction,
    ))
}

pub fn read_energy_file<P: AsRef<Path>>(path: P) -> Result<Energy> {
    read_energy(&mut File::open(path)?)
}

/// Writes a labeling as whitespace-separated integers.
pub fn write_labeling<W: Write>(labeling: &Labeling, out: &mut W) -> Result<()> {
    let text: Vec<String> = labeling.0.iter().map(|v| v.to_string()).collect();
    writeln!(out, "{}", text.join(" "))?;
    Ok(())
}

pub fn write_labeling_file<P: AsRef<Path>>(labeling: &Labeling, path: P) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_labeling(labeling, &mut out)
}

/// Reads a labeling and checks it against the expected variable and label
/// counts.
pub fn read_labeling<R: Read>(input: &mut R, num_vars: usize, num_labels: usize) -> Result<Labeling> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut labels = Vec::with_capacity(num_vars);
    for tok in text.split_whitespace() {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::Format(format!("bad label {tok:?}")))?;
        if v >= num_labels {
            return Err(Error::LabelOutOfRange {
                variable: labels.len(),
                label: v,
                label_count: num_labels,
            });
        }
        labels.push(v);
    }
    if labels.len() != num_vars {
        return Err(Error::Format(format!(
            "labeling has {} entries, expected {num_vars}",
            labels.len()
        )));
    }
    Ok(Labeling(labels))
}

pub fn read_labeling_file<P: AsRef<Path>>(
    path: P,
    num_vars: usize,
    num_labels: usize,
) -> Result<Labeling> {
    read_labeling(&mut File::open(path)?, num_vars, num_labels)
}

/// Context lines shared by every solve report.
#[derive(Clone, Debug)]
pub struct SolveMeta {
    pub method: String,
    pub seed: u64,
    pub num_vars: usize,
    pub num_labels: usize,
}

/// Serializes a multiscale solve report (`report solve 1` schema).
pub fn write_solve_report<W: Write>(
    meta: &SolveMeta,
    report: &SolveReport,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "report solve 1")?;
    writeln!(out, "method {}", meta.method)?;
    writeln!(out, "seed {}", meta.seed)?;
    writeln!(out, "n {}", meta.num_vars)?;
    writeln!(out, "l {}", meta.num_labels)?;
    writeln!(out, "termination {}", report.termination.as_str())?;
    writeln!(out, "levels {}", report.per_level.len())?;
    for (idx, level) in report.per_level.iter().enumerate() {
        // Coarsest level first; the scale index counts down to level 0.
        let s = report.per_level.len() - 1 - idx;
        writeln!(
            out,
            "level {s} {} {} {}",
            level.num_vars, level.energy, level.sweeps
        )?;
    }
    writeln!(out, "total_sweeps {}", report.total_sweeps)?;
    writeln!(out, "final_energy {}", report.final_energy)?;
    writeln!(out, "end")?;
    Ok(())
}

/// Serializes a single-scale ICM run (`report solve 1` schema, `restart`
/// lines instead of `level` lines).
pub fn write_icm_report<W: Write>(
    meta: &SolveMeta,
    energies: &[f64],
    sweeps: &[usize],
    final_energy: f64,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "report solve 1")?;
    writeln!(out, "method {}", meta.method)?;
    writeln!(out, "seed {}", meta.seed)?;
    writeln!(out, "n {}", meta.num_vars)?;
    writeln!(out, "l {}", meta.num_labels)?;
    writeln!(out, "restarts {}", energies.len())?;
    for (k, (&energy, &used)) in energies.iter().zip(sweeps).enumerate() {
        writeln!(out, "restart {k} {energy} {used}")?;
    }
    writeln!(out, "total_sweeps {}", sweeps.iter().sum::<usize>())?;
    writeln!(out, "final_energy {final_energy}")?;
    writeln!(out, "end")?;
    Ok(())
}

/// Serializes a benchmark report (`report bench 1` schema).
///
/// Wall-clock timings are intentionally omitted so reruns with the same seed
/// are byte identical.
pub fn write_bench_report<W: Write>(report: &BenchReport, out: &mut W) -> Result<()> {
    let config = &report.config;
    writeln!(out, "report bench 1")?;
    writeln!(out, "master_seed {}", config.template.seed)?;
    writeln!(out, "instances {}", config.instances)?;
    writeln!(out, "rows {}", config.template.rows)?;
    writeln!(out, "cols {}", config.template.cols)?;
    writeln!(out, "labels {}", config.template.labels)?;
    writeln!(out, "lambda {}", config.template.lambda)?;
    writeln!(out, "oracle {}", config.oracle as u8)?;
    let names: Vec<&str> = config.methods.iter().map(|m| m.as_str()).collect();
    writeln!(out, "methods {}", names.join(" "))?;
    for record in &report.records {
        write!(out, "instance {} {}", record.index, record.seed)?;
        for outcome in &record.outcomes {
            write!(out, " {} {} {}", outcome.method.as_str(), outcome.energy, outcome.sweeps)?;
        }
        if let Some(optimum) = record.optimum {
            write!(out, " optimum {optimum}")?;
        }
        writeln!(out)?;
    }
    for &method in &config.methods {
        if let Some(mean) = report.mean_energy(method) {
            writeln!(out, "mean {} {mean}", method.as_str())?;
        }
    }
    for (a_idx, &a) in config.methods.iter().enumerate() {
        for &b in &config.methods[a_idx + 1..] {
            if let Some(margin) = report.margin(a, b) {
                writeln!(out, "margin {} {} {margin}", a.as_str(), b.as_str())?;
            }
        }
    }
    if config.oracle {
        for &method in &config.methods {
            if let Some(gap) = report.mean_gap(method) {
                writeln!(out, "mean_gap {} {gap}", method.as_str())?;
            }
            if let Some(rate) = report.optimum_rate(method) {
                writeln!(out, "optimum_rate {} {rate}", method.as_str())?;
            }
        }
    }
    writeln!(out, "end")?;
    Ok(())
}

pub fn write_bench_report_file<P: AsRef<Path>>(report: &BenchReport, path: P) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_bench_report(report, &mut out)
}
