//! `formlab`: classify alternating forms and polyvectors from JSON documents.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 3 for
//! inputs outside the supported domain (n > 12, singular matrices, invalid
//! (n, k), too many trials).

pub mod document;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use formlab_core::catalog::catalog;
use formlab_core::classifier::{classify, fingerprint};
use formlab_core::duality::musical;
use formlab_core::exterior::{act, act_vectors, Form};
use formlab_core::invariants::{
    alternating_rank, is_multisymplectic, kernel_vectors, length_and_sign, rank, reduce,
    stabilizer_dim,
};
use formlab_core::linalg::{Matrix, Rat};
use formlab_core::linmap::LinMap;
use formlab_core::sampling::{sample_orbit_statistics, MAX_TRIALS};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use document::{matrix_value, parse_rational, rat_value, to_pretty, Element, FormDocument, MAX_N};
use report::{fingerprint_value, form_value, insert_length_sign, render_text, verdict_value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "formlab",
    version,
    about = "GL(n)-orbit invariants of alternating forms"
)]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct DualityArgs {
    /// Volume form scale, overriding the document (e.g. `2` or `-1/3`).
    #[arg(long, allow_hyphen_values = true)]
    pub volume: Option<String>,
    /// JSON file holding a symmetric positive definite matrix, overriding the document.
    #[arg(long)]
    pub metric: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the GL(n)-orbit of the input.
    Classify {
        input: PathBuf,
        #[command(flatten)]
        duality: DualityArgs,
    },
    /// Rank, kernel, reduction, stabilizer and witnesses of the input.
    Invariants {
        input: PathBuf,
        #[command(flatten)]
        duality: DualityArgs,
    },
    /// Fingerprint histogram of random k-forms on Rⁿ.
    Sample {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Coefficients are uniform in [-bound, bound].
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Known orbit representatives for (n, k).
    Catalog { n: usize, k: usize },
    /// Apply an invertible matrix to the input and print the new document.
    Act {
        input: PathBuf,
        /// JSON file holding an n×n matrix.
        #[arg(long)]
        matrix: PathBuf,
    },
}

/// Runs a parsed command and returns the text for standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let value = match &cli.command {
        Command::Classify { input, duality } => cmd_classify(input, duality)?,
        Command::Invariants { input, duality } => cmd_invariants(input, duality)?,
        Command::Sample {
            n,
            k,
            trials,
            bound,
            seed,
        } => cmd_sample(*n, *k, *trials, *bound, *seed)?,
        Command::Catalog { n, k } => {
            let v = cmd_catalog(*n, *k)?;
            if cli.format == Format::Text {
                return Ok(catalog_text(&v));
            }
            v
        }
        Command::Act { input, matrix } => return cmd_act(input, matrix),
    };
    Ok(match cli.format {
        Format::Text => render_text(&value),
        Format::Structured => to_pretty(&value),
    })
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(FormDocument, Value), CliError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::Parse(format!("{} is not UTF-8", path.display())))?;
    let doc = FormDocument::parse(text)?;
    let input = json!({
        "sha256": format!("{:x}", Sha256::digest(&bytes)),
        "n": doc.n(),
        "k": doc.k(),
        "variance": doc.element.variance(),
    });
    Ok((doc, input))
}

fn load_matrix(path: &Path, what: &str) -> Result<Matrix, CliError> {
    let bytes = read(path)?;
    let v: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Parse(format!("{what} {}: invalid JSON: {e}", path.display())))?;
    matrix_value(&v).map_err(|e| CliError::Parse(format!("{what} {}: {e}", path.display())))
}

fn domain(e: formlab_core::error::Error) -> CliError {
    CliError::Domain(e.to_string())
}

/// The form the orbit computations run on: the input itself, or the lowered
/// form `μ(x)` for a polyvector.
fn working_form(
    doc: &FormDocument,
    duality: &DualityArgs,
    notes: &mut Vec<String>,
) -> Result<Form, CliError> {
    match &doc.element {
        Element::Form(f) => Ok(f.clone()),
        Element::Vector(x) => {
            let metric = duality
                .metric
                .as_deref()
                .map(|p| load_matrix(p, "metric"))
                .transpose()?;
            let mu = doc.inner_product(metric.as_ref())?;
            notes.push(
                "vector input: orbit invariants are computed for the lowered form μ(x)".into(),
            );
            musical(&mu, x).map_err(domain)
        }
    }
}

fn volume_scale(duality: &DualityArgs) -> Result<Option<Rat>, CliError> {
    duality
        .volume
        .as_deref()
        .map(|s| parse_rational(s).map_err(|e| CliError::Parse(format!("--volume: {e}"))))
        .transpose()
}

pub fn cmd_classify(input: &Path, duality: &DualityArgs) -> Result<Value, CliError> {
    let (doc, input_value) = load(input)?;
    let omega = doc.volume_form(volume_scale(duality)?.as_ref())?;
    let mut notes = Vec::new();
    let phi = working_form(&doc, duality, &mut notes)?;
    let r = classify(&phi, &omega).map_err(domain)?;
    notes.extend(r.notes.iter().cloned());

    let mut inv = Map::new();
    inv.insert(
        "rank".into(),
        r.invariants.rank.map_or(Value::Null, Value::from),
    );
    let stab = match &r.invariants.fingerprint {
        Some(fp) => {
            inv.insert("fingerprint".into(), fingerprint_value(fp));
            fp.stab_dim
        }
        None => stabilizer_dim(&phi),
    };
    inv.insert("stab_dim".into(), Value::from(stab));
    if let Some(ls) = &r.invariants.length_sign {
        insert_length_sign(&mut inv, ls);
    }
    let witnesses = report::witnesses(&doc.element, &mut notes);
    Ok(json!({
        "command": "classify",
        "input": input_value,
        "invariants": inv,
        "verdict": verdict_value(&r),
        "witnesses": witnesses,
        "notes": notes,
    }))
}

pub fn cmd_invariants(input: &Path, duality: &DualityArgs) -> Result<Value, CliError> {
    let (doc, input_value) = load(input)?;
    let omega = doc.volume_form(volume_scale(duality)?.as_ref())?;
    let mut notes = Vec::new();
    let phi = working_form(&doc, duality, &mut notes)?;
    let (n, k) = (phi.n(), phi.degree());

    let mut inv = Map::new();
    if let Element::Vector(x) = &doc.element {
        inv.insert(
            "vector_rank".into(),
            Value::from(alternating_rank(x).map_err(domain)?),
        );
    }
    inv.insert("rank".into(), Value::from(rank(&phi).map_err(domain)?));
    inv.insert(
        "multisymplectic".into(),
        Value::from(is_multisymplectic(&phi).map_err(domain)?),
    );
    let kernel: Vec<Value> = kernel_vectors(&phi)
        .map_err(domain)?
        .iter()
        .map(|v| {
            Value::Array(
                (1..=n)
                    .map(|i| rat_value(&v.coefficient_at(&[i])))
                    .collect(),
            )
        })
        .collect();
    inv.insert("kernel".into(), Value::Array(kernel));
    let reduction = if phi.is_zero() {
        notes.push("zero form: no reduction".into());
        Value::Null
    } else {
        let red = reduce(&phi).map_err(domain)?;
        json!({
            "rank": red.rank,
            "reduced": form_value(&red.reduced),
            "embedding": document::matrix_to_value(&red.embedding),
        })
    };
    inv.insert("reduction".into(), reduction);
    let fp = fingerprint(&phi);
    inv.insert("stab_dim".into(), Value::from(fp.stab_dim));
    inv.insert("orbit_dimension".into(), Value::from(fp.orbit_dimension(n)));
    inv.insert("stable".into(), Value::from(fp.is_stable(n, k)));
    inv.insert("fingerprint".into(), fingerprint_value(&fp));
    if n >= 3 && k + 2 == n {
        insert_length_sign(&mut inv, &length_and_sign(&phi, &omega).map_err(domain)?);
    }
    let witnesses = report::witnesses(&doc.element, &mut notes);
    Ok(json!({
        "command": "invariants",
        "input": input_value,
        "invariants": inv,
        "witnesses": witnesses,
        "notes": notes,
    }))
}

fn check_dims(n: usize, k: usize) -> Result<(), CliError> {
    if n > MAX_N {
        return Err(CliError::Domain(format!(
            "n = {n} exceeds the cap n ≤ {MAX_N}"
        )));
    }
    if k > n {
        return Err(CliError::Domain(format!("degree k = {k} exceeds n = {n}")));
    }
    Ok(())
}

pub fn cmd_sample(
    n: usize,
    k: usize,
    trials: usize,
    bound: i64,
    seed: u64,
) -> Result<Value, CliError> {
    check_dims(n, k)?;
    if trials > MAX_TRIALS {
        return Err(CliError::Domain(format!("at most {MAX_TRIALS} trials")));
    }
    let stats = sample_orbit_statistics(n, k, trials, bound, seed).map_err(domain)?;
    Ok(report::sample_value(&stats))
}

pub fn cmd_catalog(n: usize, k: usize) -> Result<Value, CliError> {
    check_dims(n, k)?;
    let entries = catalog(n, k);
    let mut notes = Vec::new();
    if entries.is_empty() {
        notes.push("no catalog coverage".to_string());
    }
    Ok(json!({
        "command": "catalog",
        "n": n,
        "k": k,
        "entries": entries.iter().map(report::catalog_entry_value).collect::<Vec<_>>(),
        "notes": notes,
    }))
}

fn catalog_text(v: &Value) -> String {
    let mut out = format!("catalog n={} k={}\n", v["n"], v["k"]);
    for e in v["entries"].as_array().into_iter().flatten() {
        let fp = &e["fingerprint"];
        let sig = &fp["killing_signature"];
        out.push_str(&format!(
            "{} [{}, {}] stab={} killing=({},{},{}) components={}: {}\n",
            e["name"].as_str().unwrap_or_default(),
            e["provenance"].as_str().unwrap_or_default(),
            e["source"].as_str().unwrap_or_default(),
            fp["stab_dim"],
            sig["positive"],
            sig["negative"],
            sig["null"],
            e["components"],
            e["representative_text"].as_str().unwrap_or_default(),
        ));
    }
    for note in v["notes"].as_array().into_iter().flatten() {
        out.push_str(&format!("note: {}\n", note.as_str().unwrap_or_default()));
    }
    out
}

/// Applies `g` to the input (`act` on forms, `act_vectors` on polyvectors)
/// and returns the normalized document.
pub fn cmd_act(input: &Path, matrix: &Path) -> Result<String, CliError> {
    let (doc, _) = load(input)?;
    let m = load_matrix(matrix, "matrix")?;
    if m.rows() != doc.n() || m.cols() != doc.n() {
        return Err(CliError::Domain(format!(
            "matrix is {}×{}, expected {n}×{n}",
            m.rows(),
            m.cols(),
            n = doc.n()
        )));
    }
    let g = LinMap::new(m).map_err(domain)?;
    let element = match &doc.element {
        Element::Form(f) => Element::Form(act(&g, f).map_err(domain)?),
        Element::Vector(x) => Element::Vector(act_vectors(&g, x).map_err(domain)?),
    };
    Ok(FormDocument { element, ..doc }.to_json())
}
