//! Batch command-line front end.
//!
//! Every command reads files, runs one computation, and prints a report
//! to stdout; identical inputs and seeds produce identical bytes. Exit
//! codes: 0 on success, 1 on domain errors (with a structured error
//! object on stderr) and on failed validation, 2 on usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::apl::{apl_cochain_compare, FiniteSimplicialSet, FormFamily, PolyForm};
use crate::cdga::CdgaPresentation;
use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::holonomy::{lemma31_check, RelativeSullivan};
use crate::lie::{abelianization_dim, fundamental_lie, homotopy_dims, lcs_quotients};
use crate::model::{degree1_stages, minimal_model_sc, Construction, ModelBuild};
use crate::target::Target;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(
    name = "sullivan",
    version,
    about = "Exact rational homotopy computations: presentations, cohomology, minimal models, holonomy"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check d^2 = 0 and minimality of a presentation.
    Validate { input: PathBuf },
    /// Cohomology dimensions and representatives up to a degree.
    Cohomology {
        input: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Build a minimal model of a target (`.target` formal ring or
    /// `.cdga` presentation); emits a model file next to the report.
    Model {
        input: PathBuf,
        /// Top degree for the simply connected construction.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Stage cap for the degree-1 tower.
        #[arg(long, default_value_t = 4)]
        max_stage: usize,
        /// Where to write the model presentation.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Homotopy-group dimensions of a minimal presentation.
    Homotopy {
        input: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Fundamental Lie algebra, lower central series, nilpotency.
    Lie {
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Fiber filtration and holonomy action matrices of a relative
    /// presentation.
    Holonomy {
        input: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Validate a family of forms on a finite simplicial set and check
    /// the integration cochain identity.
    AplCheck { input: PathBuf },
    /// Random property suite for the functional-sum statement on a
    /// relative presentation.
    Lemma31 {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(Outcome { report, tsv, valid }) => {
            match cli.format {
                Format::Json => print_json(&report),
                Format::Tsv => print!("{tsv}"),
            }
            if valid {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let err = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            eprintln!(
                "{}",
                serde_json::to_string(&err).expect("error object serializes")
            );
            1
        }
    }
}

struct Outcome {
    report: Value,
    tsv: String,
    valid: bool,
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("report serializes")
    );
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Validate { input } => cmd_validate(input),
        Command::Cohomology { input, max_degree } => cmd_cohomology(input, *max_degree),
        Command::Model {
            input,
            max_degree,
            max_stage,
            output,
        } => cmd_model(input, *max_degree, *max_stage, output.as_deref()),
        Command::Homotopy { input, max_degree } => cmd_homotopy(input, *max_degree),
        Command::Lie { input, depth } => cmd_lie(input, *depth),
        Command::Holonomy { input, max_degree } => cmd_holonomy(input, *max_degree),
        Command::AplCheck { input } => cmd_apl_check(input),
        Command::Lemma31 {
            input,
            trials,
            seed,
        } => cmd_lemma31(input, *trials, *seed),
    }
}

fn parse_presentation_file(path: &Path) -> Result<CdgaPresentation> {
    CdgaPresentation::parse(&read(path)?)
}

fn cmd_validate(input: &Path) -> Result<Outcome> {
    let p = parse_presentation_file(input)?;
    if p.has_fiber() {
        let rs = RelativeSullivan::new(p)?;
        let report = rs.validate()?;
        let valid = report.total_d_squared_zero && report.filtration_exists;
        let mut tsv = String::new();
        tsv.push_str(&format!("filtration_exists\t{}\n", report.filtration_exists));
        tsv.push_str(&format!("fiber_minimal\t{}\n", report.fiber_minimal));
        tsv.push_str(&format!(
            "base_d_squared_zero\t{}\n",
            report.base_d_squared_zero
        ));
        tsv.push_str(&format!(
            "total_d_squared_zero\t{}\n",
            report.total_d_squared_zero
        ));
        Ok(Outcome {
            report: json!({
                "command": "validate",
                "input": input.display().to_string(),
                "relative": to_value(&report),
                "valid": valid,
            }),
            tsv,
            valid,
        })
    } else {
        let report = p.validate();
        let valid = report.d_squared_zero;
        let mut tsv = String::new();
        tsv.push_str(&format!("d_squared_zero\t{}\n", report.d_squared_zero));
        tsv.push_str(&format!("minimal\t{}\n", report.minimal));
        tsv.push_str(&format!("checked_up_to\t{}\n", report.checked_up_to));
        for v in &report.violations {
            tsv.push_str(&format!("violation\t{v}\n"));
        }
        Ok(Outcome {
            report: json!({
                "command": "validate",
                "input": input.display().to_string(),
                "report": to_value(&report),
                "valid": valid,
            }),
            tsv,
            valid,
        })
    }
}

fn cmd_cohomology(input: &Path, max_degree: Option<usize>) -> Result<Outcome> {
    let mut p = parse_presentation_file(input)?;
    let top = max_degree.unwrap_or_else(|| p.max_degree().saturating_sub(1));
    if p.max_degree() < top + 1 {
        p.set_max_degree(top + 1);
    }
    let mut dims = Vec::new();
    let mut results = Vec::new();
    let mut tsv = String::from("degree\tdim\trepresentatives\n");
    for n in 0..=top {
        let h = cohomology(&p, n)?;
        dims.push(h.dim);
        let reps: Vec<String> = h.representatives.iter().map(|r| r.render()).collect();
        tsv.push_str(&format!("{n}\t{}\t{}\n", h.dim, reps.join("; ")));
        results.push(json!({
            "degree": n,
            "dim": h.dim,
            "representatives": reps,
            "coboundary_dim": h.coboundary_dim,
        }));
    }
    Ok(Outcome {
        report: json!({
            "command": "cohomology",
            "input": input.display().to_string(),
            "dims": dims,
            "results": results,
        }),
        tsv,
        valid: true,
    })
}

fn load_target(path: &Path) -> Result<Target> {
    Target::parse(&path.display().to_string(), &read(path)?)
}

fn cmd_model(
    input: &Path,
    max_degree: usize,
    max_stage: usize,
    output: Option<&Path>,
) -> Result<Outcome> {
    let mut target = load_target(input)?;
    if let Target::Cdga(p) = &mut target {
        if p.max_degree() < max_degree + 2 {
            p.set_max_degree(max_degree + 2);
        }
    }
    let h1_dim = crate::cohomology::CohomologySpace::compute(&target, 1)?.dim;
    let build: ModelBuild = if h1_dim == 0 {
        minimal_model_sc(&target, max_degree)?
    } else {
        degree1_stages(&target, max_stage)?
    };
    let model_path = match output {
        Some(p) => p.to_path_buf(),
        None => input.with_extension("model.cdga"),
    };
    std::fs::write(&model_path, build.model.render())?;

    let mut tsv = String::from("stage\tadded\tcumulative_dim\n");
    for e in &build.stage_log {
        tsv.push_str(&format!("{}\t{}\t{}\n", e.stage, e.added, e.cumulative_dim));
    }
    tsv.push_str("degree\tdim\tstabilized\n");
    let finite_type = build.finite_type_report();
    for row in &finite_type {
        tsv.push_str(&format!(
            "{}\t{}\t{}\n",
            row.degree, row.dim, row.stabilized
        ));
    }
    let construction = match build.construction {
        Construction::SimplyConnected => "simply_connected",
        Construction::Degree1Stages => "degree1_stages",
    };
    Ok(Outcome {
        report: json!({
            "command": "model",
            "input": input.display().to_string(),
            "construction": construction,
            "stage_log": to_value(&build.stage_log),
            "finite_type": to_value(&finite_type),
            "stabilized": build.stabilized,
            "generators": build.model.gens().len(),
            "model_file": model_path.display().to_string(),
        }),
        tsv,
        valid: true,
    })
}

fn cmd_homotopy(input: &Path, max_degree: Option<usize>) -> Result<Outcome> {
    let p = parse_presentation_file(input)?;
    let top = max_degree.unwrap_or_else(|| p.max_degree());
    let dims = homotopy_dims(&p, top)?;
    let mut pi = serde_json::Map::new();
    let mut tsv = String::from("degree\tdim\n");
    tsv.push_str(&format!("1\t{}\n", dims.degree1_dim));
    for &(n, d) in &dims.higher {
        pi.insert(n.to_string(), json!(d));
        tsv.push_str(&format!("{n}\t{d}\n"));
    }
    Ok(Outcome {
        report: json!({
            "command": "homotopy",
            "input": input.display().to_string(),
            "pi": pi,
            "v1": {
                "dim": dims.degree1_dim,
                "stages": dims.degree1_stages,
            },
        }),
        tsv,
        valid: true,
    })
}

fn cmd_lie(input: &Path, depth: usize) -> Result<Outcome> {
    let p = parse_presentation_file(input)?;
    let lie = fundamental_lie(&p)?;
    let table = lcs_quotients(&lie, depth)?;
    let ab = abelianization_dim(&lie);
    let mut brackets = Vec::new();
    for i in 0..lie.dim() {
        for j in (i + 1)..lie.dim() {
            let b = lie.basis_bracket(i, j);
            if b.iter().any(|c| !num_traits::Zero::is_zero(c)) {
                let coeffs: Vec<String> = b.iter().map(|c| c.to_string()).collect();
                brackets.push(json!([i, j, coeffs]));
            }
        }
    }
    let mut tsv = String::from("n\tdim\n");
    for &(n, d) in &table.rows {
        tsv.push_str(&format!("{n}\t{d}\n"));
    }
    tsv.push_str(&format!(
        "nilpotency_index\t{}\n",
        table
            .nilpotency_index
            .map_or("null".to_string(), |k| k.to_string())
    ));
    tsv.push_str(&format!("abelianization_dim\t{ab}\n"));
    Ok(Outcome {
        report: json!({
            "command": "lie",
            "input": input.display().to_string(),
            "basis": lie.basis_names,
            "brackets": brackets,
            "lcs": table.rows,
            "nilpotency_index": table.nilpotency_index,
            "abelianization_dim": ab,
        }),
        tsv,
        valid: true,
    })
}

fn matrix_rows(m: &crate::linalg::QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn cmd_holonomy(input: &Path, max_degree: Option<usize>) -> Result<Outcome> {
    let mut rs = RelativeSullivan::parse(&read(input)?)?;
    if let Some(cap) = max_degree {
        if rs.total().max_degree() < cap {
            rs.set_max_degree(cap);
        }
    }
    let filtration = rs.fiber_filtration()?;
    let fiber = rs.fiber_presentation()?;
    let top = rs.total().max_degree().saturating_sub(1);
    let mut matrices = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut nilpotency = BTreeMap::new();
    let mut nilpotent = true;
    let mut tsv = String::from("degree\tdual\tnilpotency_index\tmatrix\n");
    for n in 1..=top {
        if fiber.dim(n)? == 0 {
            continue;
        }
        let hm = rs.holonomy_matrices(n)?;
        if hm.class_labels.is_empty() {
            continue;
        }
        let mut per_dual = BTreeMap::new();
        let mut per_dual_nil = BTreeMap::new();
        for (name, m) in &hm.matrices {
            per_dual.insert(name.clone(), matrix_rows(m));
            per_dual_nil.insert(name.clone(), hm.nilpotency[name]);
            tsv.push_str(&format!(
                "{n}\t{name}\t{}\t{:?}\n",
                hm.nilpotency[name]
                    .map_or("null".to_string(), |k| k.to_string()),
                matrix_rows(m)
            ));
        }
        nilpotent &= hm.nilpotent;
        labels.insert(n.to_string(), hm.class_labels.clone());
        matrices.insert(n.to_string(), per_dual);
        nilpotency.insert(n.to_string(), per_dual_nil);
    }
    Ok(Outcome {
        report: json!({
            "command": "holonomy",
            "input": input.display().to_string(),
            "filtration": to_value(&filtration),
            "matrices": matrices,
            "class_labels": labels,
            "nilpotency": nilpotency,
            "nilpotent": nilpotent,
        }),
        tsv,
        valid: true,
    })
}

#[derive(serde::Deserialize)]
struct AplCheckInput {
    complex: serde_json::Value,
    degree: usize,
    family: BTreeMap<String, String>,
}

fn cmd_apl_check(input: &Path) -> Result<Outcome> {
    let raw: AplCheckInput = serde_json::from_str(&read(input)?)
        .map_err(|e| Error::Domain(format!("bad apl-check input: {e}")))?;
    let k = FiniteSimplicialSet::from_json(&raw.complex.to_string())?;
    let mut forms = BTreeMap::new();
    for (name, text) in &raw.family {
        let dim = k
            .dim_of(name)
            .ok_or_else(|| Error::Domain(format!("family names unknown simplex `{name}`")))?;
        forms.insert(name.clone(), PolyForm::parse(dim, text)?);
    }
    let family = FormFamily {
        degree: raw.degree,
        forms,
    };
    let report = apl_cochain_compare(&k, &family, raw.degree)?;
    let valid = report.compatible && report.coboundary_identity;
    let mut tsv = String::from("simplex\tvalue\n");
    for (name, v) in &report.cochain {
        tsv.push_str(&format!("{name}\t{v}\n"));
    }
    tsv.push_str(&format!("compatible\t{}\n", report.compatible));
    tsv.push_str(&format!(
        "coboundary_identity\t{}\n",
        report.coboundary_identity
    ));
    Ok(Outcome {
        report: json!({
            "command": "apl-check",
            "input": input.display().to_string(),
            "degree": raw.degree,
            "compatible": report.compatible,
            "cochain": report.cochain,
            "coboundary_identity": report.coboundary_identity,
            "violations": report.violations,
        }),
        tsv,
        valid,
    })
}

fn cmd_lemma31(input: &Path, trials: usize, seed: u64) -> Result<Outcome> {
    let rs = RelativeSullivan::parse(&read(input)?)?;
    let filtration = rs.fiber_filtration()?;
    let report = lemma31_check(&rs, trials, seed)?;
    let valid = report.violations.is_empty();
    let mut tsv = String::new();
    tsv.push_str(&format!("trials\t{}\n", report.trials));
    tsv.push_str(&format!("passed\t{}\n", report.passed));
    tsv.push_str(&format!("nonvacuous\t{}\n", report.nonvacuous));
    for v in &report.violations {
        tsv.push_str(&format!("violation\t{v}\n"));
    }
    Ok(Outcome {
        report: json!({
            "command": "lemma31",
            "input": input.display().to_string(),
            "filtration": to_value(&filtration),
            "lemma31": to_value(&report),
        }),
        tsv,
        valid,
    })
}
