use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tlsg::anneal::{anneal_once, sample_bitstrings, AnnealConfig, AnnealRow, CSV_HEADER};
use tlsg::encoder::{encode_with, overhead_estimate, verify as verify_encoding, EncodeOptions, SourceProblem, VerifyReport};
use tlsg::gadget::{search as run_search, Gadget, Objective, PinSelection, SearchConfig};
use tlsg::lattice::{GridLayout, LatticeFamily};

use crate::config::{resolve, write_atomic, Resolved};
use crate::inputs::{
    parse_family, parse_pin_set, parse_weights, read_constraint, read_encoding, read_graph, read_layout, read_library,
};
use crate::Exit;

/// Environment variable overriding the number of worker threads.
pub const THREADS_VAR: &str = "TLSG_THREADS";

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn positive<T: PartialOrd + Default + Copy + std::fmt::Display>(name: &str, v: Option<T>) -> Result<()> {
    match v {
        Some(x) if x <= T::default() => Err(Exit::parse(format!("{name} must be positive, got {x}")).into()),
        _ => Ok(()),
    }
}

#[derive(Args, Serialize, Deserialize)]
pub struct SearchArgs {
    /// Gate name (and, nand, or, nor, xor, not, copy, crossing,
    /// crossing-edge) or truth-table file; repeatable.
    #[arg(long)]
    pub constraint: Vec<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// `combinations` or `permutations` of open boundary sites.
    #[arg(long)]
    pub pins: Option<String>,
    /// Fixed pin coordinates "x,y x,y …"; repeatable, overrides --pins.
    #[arg(long)]
    pub pin_set: Vec<String>,
    #[arg(long)]
    pub weight_cap: Option<i64>,
    /// `sum` or `max`.
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub stream_cap: Option<u64>,
    #[arg(long)]
    pub node_limit: Option<u64>,
    #[arg(long)]
    pub max_target_sets: Option<u64>,
    #[arg(long)]
    pub min_sites: Option<usize>,
    #[arg(long)]
    pub max_sites: Option<usize>,
    /// Gadgets kept per constraint, best first.
    #[arg(long)]
    pub keep: Option<usize>,
    /// Stop at the first gadget of each constraint.
    #[arg(long)]
    pub first: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rank(g: &Gadget) -> (i64, usize, i64) {
    (g.mwis_energy, g.graph.n(), g.graph.weights().iter().sum())
}

pub fn search(args: SearchArgs, seed: Option<u64>, file: Option<&Path>) -> Result<()> {
    let r = resolve("search", args, seed, file)?;
    let a = &r.args;
    if a.constraint.is_empty() {
        return Err(Exit::parse("at least one --constraint is required").into());
    }
    positive("weight_cap", a.weight_cap)?;
    positive("stream_cap", a.stream_cap)?;
    positive("node_limit", a.node_limit)?;
    positive("max_target_sets", a.max_target_sets)?;
    positive("keep", a.keep)?;
    let kind = parse_family(a.family.as_deref())?;
    let (rows, cols) = (a.rows.unwrap_or(3), a.cols.unwrap_or(3));
    if rows == 0 || cols == 0 {
        return Err(Exit::parse("patch dimensions must be positive").into());
    }
    let mut entries = Vec::new();
    let mut missing = Vec::new();
    for spec in &a.constraint {
        let c = read_constraint(spec)?;
        let mut cfg = SearchConfig::new(LatticeFamily::of(kind), rows, cols, c);
        cfg.pins = if !a.pin_set.is_empty() {
            PinSelection::Explicit(a.pin_set.iter().map(|s| parse_pin_set(s)).collect::<Result<_>>()?)
        } else {
            match a.pins.as_deref().unwrap_or("permutations") {
                "permutations" => PinSelection::Permutations,
                "combinations" => PinSelection::Combinations,
                other => return Err(Exit::parse(format!("unknown pin selection {other:?}")).into()),
            }
        };
        cfg.objective = match a.objective.as_deref().unwrap_or("sum") {
            "sum" => Objective::Sum,
            "max" => Objective::Max,
            other => return Err(Exit::parse(format!("unknown objective {other:?}")).into()),
        };
        if let Some(v) = a.weight_cap {
            cfg.weight_cap = v;
        }
        if let Some(v) = a.stream_cap {
            cfg.stream_cap = v;
        }
        if let Some(v) = a.node_limit {
            cfg.ilp_node_limit = v;
        }
        if let Some(v) = a.max_target_sets {
            cfg.max_target_sets = v;
        }
        if let Some(v) = a.min_sites {
            cfg.min_sites = v;
        }
        if let Some(v) = a.max_sites {
            cfg.max_sites = v;
        }
        cfg.stop_at_first = a.first;
        let mut found = Vec::new();
        let mut failure = None;
        for item in run_search(cfg)? {
            match item {
                Ok(g) => found.push(g),
                Err(e) => failure = Some(e),
            }
        }
        found.sort_by_key(rank);
        found.truncate(a.keep.unwrap_or(1));
        if found.is_empty() {
            missing.push((spec.clone(), failure));
            continue;
        }
        for g in found {
            let wmax = g.graph.weights().iter().copied().max().unwrap_or(0);
            println!("{spec}: energy {}, {} sites, weights 1..={wmax}", g.mwis_energy, g.graph.n());
            entries.push(json!({
                "constraint": spec,
                "family": kind,
                "energy": g.mwis_energy,
                "sites": g.graph.n(),
                "record": g.to_record(),
            }));
        }
    }
    let db = json!({ "meta": r.meta(), "gadgets": entries });
    if let Some(p) = &a.out {
        write_atomic(p, &(serde_json::to_string_pretty(&db)? + "\n"))?;
    }
    if let Some((spec, failure)) = missing.into_iter().next() {
        return Err(match failure {
            Some(e @ (tlsg::Error::Budget(_) | tlsg::Error::NodeBudget { .. })) => {
                anyhow::Error::new(e).context(format!("no gadget found for constraint {spec}"))
            }
            _ => Exit::empty(format!("no gadget found for constraint {spec} on a {rows}x{cols} {kind} patch")).into(),
        });
    }
    Ok(())
}

#[derive(Args, Serialize, Deserialize)]
pub struct EncodeArgs {
    /// graph6 string, graph6 file, or JSON `{n, edges, weights}` file.
    #[arg(long)]
    pub graph: Option<String>,
    /// Comma-separated vertex weights, overriding those of the input.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    /// Readout shift as a fraction such as `1/8`.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub no_trim: bool,
    #[arg(long)]
    pub no_verify: bool,
    /// Tile library file replacing the bundled one.
    #[arg(long)]
    pub library: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn mismatch_diagnostic(rep: &VerifyReport) -> String {
    let mut why = Vec::new();
    if !rep.decoded_independent {
        why.push("decoded set is not independent".to_string());
    }
    if rep.decoded_weight != rep.source_optimum {
        why.push(format!("decoded weight {} differs from the source optimum {}", rep.decoded_weight, rep.source_optimum));
    }
    if !rep.wires_consistent {
        why.push("a wire does not alternate".to_string());
    }
    if !rep.offset_consistent {
        why.push(format!(
            "encoded optimum {} does not match offset {} plus the scaled decoded weight",
            rep.encoded_optimum, rep.energy_offset
        ));
    }
    format!("verification failed: {}", why.join("; "))
}

pub fn encode(args: EncodeArgs, seed: Option<u64>, file: Option<&Path>) -> Result<()> {
    let r = resolve("encode", args, seed, file)?;
    let a = &r.args;
    let spec = a.graph.as_deref().ok_or_else(|| Exit::parse("--graph is required"))?;
    let mut g = read_graph(spec)?;
    if let Some(w) = &a.weights {
        g = g.with_weights(parse_weights(w)?)?;
    }
    let kind = parse_family(a.family.as_deref())?;
    let epsilon = a
        .epsilon
        .as_deref()
        .map(|e| e.parse::<Rational64>().map_err(|err| Exit::parse(format!("epsilon {e:?}: {err}"))))
        .transpose()?;
    let library = a.library.as_deref().map(|p| read_library(p, kind)).transpose()?;
    let (n, m) = (g.n(), g.edges().len());
    let p = SourceProblem::new(g)?;
    let opts = EncodeOptions { trim: !a.no_trim, epsilon, library };
    let enc = encode_with(&p, LatticeFamily::of(kind), &opts)?;
    let bound = overhead_estimate(n, m, kind);
    let sites = enc.layout.len();
    eprintln!("{sites} sites, bound {bound} for n = {n}, m = {m}");
    let report = if a.no_verify { None } else { Some(verify_encoding(&enc)?) };
    let mut doc = json!({
        "meta": r.meta(),
        "encoding": enc,
        "summary": { "sites": sites, "bound": bound },
    });
    if let Some(rep) = &report {
        doc["report"] = serde_json::to_value(rep)?;
    }
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    if let Some(svg) = &a.svg {
        write_atomic(svg, &svg_with_banner(&enc.to_svg(), &r))?;
    }
    match report {
        Some(rep) if !rep.pass => Err(Exit::mismatch(mismatch_diagnostic(&rep)).into()),
        _ => Ok(()),
    }
}

#[derive(Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Encoding file written by `encode`.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn verify(args: VerifyArgs, seed: Option<u64>, file: Option<&Path>) -> Result<()> {
    let r = resolve("verify", args, seed, file)?;
    let a = &r.args;
    let input = a.input.as_deref().ok_or_else(|| Exit::parse("--input is required"))?;
    let enc = read_encoding(input)?;
    let rep = verify_encoding(&enc)?;
    let doc = json!({ "meta": r.meta(), "report": rep });
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    eprintln!(
        "{}: source optimum {}, decoded weight {}, encoded optimum {}, offset {}",
        if rep.pass { "pass" } else { "FAIL" },
        rep.source_optimum,
        rep.decoded_weight,
        rep.encoded_optimum,
        rep.energy_offset
    );
    if !rep.pass {
        return Err(Exit::mismatch(mismatch_diagnostic(&rep)).into());
    }
    Ok(())
}

#[derive(Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Layout source: `tile:<family>/<crossing|crossing-edge>`, or an
    /// encoding, gadget database, gadget or layout file; repeatable.
    #[arg(long)]
    pub layout: Vec<String>,
    /// Total anneal times in μs.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    /// Peak Rabi frequency Ω/2π in MHz.
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Peak detuning as a multiple of the peak Rabi frequency.
    #[arg(long)]
    pub delta_factor: Option<f64>,
    /// Fraction of the anneal spent on each Rabi ramp.
    #[arg(long)]
    pub ramp: Option<f64>,
    /// Time step in μs.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Layout weight that receives the full detuning.
    #[arg(long)]
    pub detuning_unit: Option<f64>,
    /// Measurement shots per run written to --samples.
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Exit::parse(format!("{THREADS_VAR}={v:?} is not a positive integer")).into()),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

type Job<'a> = (usize, &'a GridLayout, f64);
type Outcome = (AnnealRow, Option<Vec<String>>);

pub fn simulate(args: SimulateArgs, seed: Option<u64>, file: Option<&Path>) -> Result<()> {
    let r = resolve("simulate", args, seed, file)?;
    let a = &r.args;
    if a.layout.is_empty() {
        return Err(Exit::parse("at least one --layout is required").into());
    }
    for (name, v) in [
        ("omega_max", a.omega_max),
        ("delta_factor", a.delta_factor),
        ("ramp", a.ramp),
        ("dt", a.dt),
        ("detuning_unit", a.detuning_unit),
    ] {
        positive(name, v)?;
    }
    positive("shots", a.shots)?;
    let times = if a.times.is_empty() { vec![1.0, 2.0, 3.0, 4.0] } else { a.times.clone() };
    if let Some(t) = times.iter().find(|t| !(**t > 0.0)) {
        return Err(Exit::parse(format!("anneal time {t} is not positive")).into());
    }
    let mut cfg = AnnealConfig::default();
    if let Some(f) = a.omega_max {
        cfg.atoms.omega_max = 2.0 * std::f64::consts::PI * f;
    }
    cfg.delta_max = a.delta_factor.unwrap_or(5.0) * cfg.atoms.omega_max;
    if let Some(v) = a.ramp {
        cfg.ramp = v;
    }
    cfg.dt = a.dt;
    cfg.atoms.detuning_unit = a.detuning_unit;
    let layouts: Vec<GridLayout> = a.layout.iter().map(|s| read_layout(s)).collect::<Result<_>>()?;
    let shots = if a.samples.is_some() { a.shots.unwrap_or(1000) } else { 0 };

    let jobs: Vec<Job> = layouts
        .iter()
        .enumerate()
        .flat_map(|(i, l)| times.iter().map(move |&t| (i, l, t)))
        .collect();
    let threads = thread_count()?.min(jobs.len()).max(1);
    let run = |k: usize, &(_, layout, t): &Job| -> Result<Outcome> {
        let (row, state) = anneal_once(layout, t, &cfg)?;
        let samples = if shots > 0 {
            // one stream per job so results do not depend on scheduling
            let s = r.seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            Some(sample_bitstrings(&state, shots, s)?.iter().map(|c| c.to_string()).collect())
        } else {
            None
        };
        Ok((row, samples))
    };
    let mut outcomes: Vec<Option<Result<Outcome>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let jobs = &jobs;
                let run = &run;
                scope.spawn(move || {
                    (w..jobs.len()).step_by(threads).map(|k| (k, run(k, &jobs[k]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, res) in h.join().expect("simulation worker panicked") {
                outcomes[k] = Some(res);
            }
        }
    });
    let mut csv = format!("# {}\n{CSV_HEADER}\n", r.banner());
    let mut sample_doc = Vec::new();
    for (k, o) in outcomes.into_iter().enumerate() {
        let (row, samples) = o.expect("every job ran")?;
        csv.push_str(&row.csv());
        csv.push('\n');
        if let Some(s) = samples {
            sample_doc.push(json!({
                "layout": a.layout[jobs[k].0],
                "family": row.family,
                "T_us": row.total_us,
                "shots": s,
            }));
        }
    }
    emit(a.out.as_deref(), &csv)?;
    if let Some(p) = &a.samples {
        let doc = json!({ "meta": r.meta(), "runs": sample_doc });
        write_atomic(p, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(())
}

#[derive(Args, Serialize, Deserialize)]
pub struct ExportArgs {
    /// Encoding, gadget database, gadget or layout file, or a `tile:` name.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn svg_with_banner<A>(svg: &str, r: &Resolved<A>) -> String {
    format!("<!-- {} -->\n{svg}", r.banner())
}

pub fn export_svg(args: ExportArgs, seed: Option<u64>, file: Option<&Path>) -> Result<()> {
    let r = resolve("export-svg", args, seed, file)?;
    let a = &r.args;
    let input = a.input.as_deref().ok_or_else(|| Exit::parse("--input is required"))?;
    let svg = match read_encoding(input) {
        Ok(enc) => enc.to_svg(),
        Err(_) => read_layout(input).with_context(|| format!("reading {input}"))?.to_svg(&[]),
    };
    let text = svg_with_banner(&svg, &r);
    emit(a.out.as_deref(), &text)?;
    Ok(())
}
