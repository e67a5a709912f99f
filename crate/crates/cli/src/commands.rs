use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use pgm_core::completion::{max_det_completion, CompletionOptions, CompletionReport, InitialFill};
use pgm_core::format::{display_matrix, format_short, parse_partial, print_matrix};
use pgm_core::linalg::DEFAULT_PD_TOL;
use pgm_core::means::{
    entropy_identities, gaussian_entropy, karcher_mean, partial_geomean_maxdet, KarcherOptions,
    WeightVector, DEFAULT_QUAD_POINTS,
};
use pgm_core::pattern::Chordality;
use pgm_core::sweep::{run_sweep, SweepSpec};
use pgm_core::{Error, PartialMatrix};

use crate::{Cli, Command};

/// Bad invocations detected outside the library, such as unreadable files.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 2 for malformed input, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return if e.is_usage() { 2 } else { 1 };
        }
    }
    1
}

fn load(path: &Path) -> Result<PartialMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_partial(&text).with_context(|| format!("{}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn one_based(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn options(cli: &Cli) -> CompletionOptions {
    CompletionOptions {
        tol: cli.tol,
        max_cycles: cli.max_cycles,
        ..CompletionOptions::default()
    }
}

fn complete_converged(m: &PartialMatrix, opts: &CompletionOptions) -> Result<CompletionReport> {
    Ok(max_det_completion(m, opts)?.require_converged()?)
}

pub fn run(cli: &Cli) -> Result<()> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Usage(format!("--tol must be positive, got {}", cli.tol)).into());
    }
    match &cli.command {
        Command::Check { file } => check(&load(file)?, &options(cli)),
        Command::Complete { file, out } => complete(&load(file)?, &options(cli), out.as_deref()),
        Command::Geomean { a, b, t, out } => {
            geomean(&load(a)?, &load(b)?, *t, &options(cli), out.as_deref())
        }
        Command::Karcher { weights, files } => karcher(weights, files, &options(cli)),
        Command::Entropy { files, t } => entropy(files, *t, &options(cli)),
        Command::Sweep { grid, .. } if *grid < 2 => {
            Err(Usage(format!("--grid needs at least 2 points, got {grid}")).into())
        }
        Command::Sweep { a, b, grid, t, out } => sweep(
            SweepSpec {
                a: load(a)?,
                b: load(b)?,
                grid: *grid,
                t: *t,
            },
            out,
        ),
    }
}

fn check(m: &PartialMatrix, opts: &CompletionOptions) -> Result<()> {
    let pattern = m.pattern();
    let chordal = match pattern.chordality() {
        Chordality::Chordal(order) => {
            println!("pattern: chordal (perfect elimination order {})", one_based(&order.order));
            true
        }
        Chordality::NotChordal(cycle) => {
            println!("pattern: not chordal (chordless cycle {})", one_based(&cycle));
            false
        }
    };
    println!("maximal cliques:");
    let mut partial_pd = true;
    for clique in pattern.maximal_cliques() {
        let block = m.clique_block(&clique);
        let lo = block.min_eigenvalue()?;
        let pd = block.is_pd(DEFAULT_PD_TOL);
        partial_pd &= pd;
        println!(
            "  {{{}}}: {} (smallest eigenvalue {})",
            one_based(&clique).replace(' ', ", "),
            if pd { "positive definite" } else { "NOT positive definite" },
            format_short(lo)
        );
    }
    println!("partial positive definite: {}", if partial_pd { "yes" } else { "no" });
    let verdict = if !partial_pd {
        "no (not partial positive definite)".to_string()
    } else if chordal {
        "yes (chordal pattern)".to_string()
    } else {
        match max_det_completion(m, opts) {
            Ok(r) if r.converged => "yes for this matrix, although the pattern is not chordal".into(),
            Ok(_) => "undecided (completion iteration did not converge)".into(),
            Err(e) => format!("no ({e})"),
        }
    };
    println!("completable: {verdict}");
    Ok(())
}

fn print_completion(label: &str, r: &CompletionReport) {
    println!("{label}:");
    print!("{}", display_matrix(&r.matrix));
    println!("determinant: {}", format_short(r.determinant));
    println!("iterations: {}", r.iterations);
    println!(
        "inverse residual: {} (relative {})",
        format_short(r.residual),
        format_short(r.residual / r.inverse_norm)
    );
    let fill = match r.initial_fill {
        InitialFill::None => "none (fully specified)",
        InitialFill::Zero => "zero",
        InitialFill::EliminationOrder => "elimination order",
    };
    println!("initial fill: {fill}");
}

fn complete(m: &PartialMatrix, opts: &CompletionOptions, out: Option<&Path>) -> Result<()> {
    let r = max_det_completion(m, opts)?;
    print_completion("completion", &r);
    if let Some(path) = out {
        write(path, &print_matrix(&r.matrix))?;
    }
    r.require_converged()?;
    Ok(())
}

fn geomean(
    a: &PartialMatrix,
    b: &PartialMatrix,
    t: f64,
    opts: &CompletionOptions,
    out: Option<&Path>,
) -> Result<()> {
    let r = partial_geomean_maxdet(a, b, t, opts)?;
    println!("t = {}", format_short(t));
    println!("mean of the max-det completions:");
    print!("{}", display_matrix(&r.mean));
    println!("determinant: {}", format_short(r.determinant));
    println!(
        "det(A)^(1-t) det(B)^t: {} (relative gap {})",
        format_short(r.predicted_determinant),
        format_short((r.determinant - r.predicted_determinant).abs() / r.predicted_determinant)
    );
    if let Some(path) = out {
        write(path, &print_matrix(&r.mean))?;
    }
    Ok(())
}

fn karcher(weights: &[f64], files: &[std::path::PathBuf], opts: &CompletionOptions) -> Result<()> {
    if weights.len() != files.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} files",
            weights.len(),
            files.len()
        ))
        .into());
    }
    let w = WeightVector::normalized(weights)?;
    let mats = files
        .iter()
        .map(|f| Ok(complete_converged(&load(f)?, opts)?.matrix))
        .collect::<Result<Vec<_>>>()?;
    let r = karcher_mean(&w, &mats, &KarcherOptions::default())?;
    println!("Karcher mean:");
    print!("{}", display_matrix(&r.mean));
    println!("inductive steps: {}", r.steps);
    println!("refinement steps: {}", r.refine_steps);
    println!("gradient norm: {}", format_short(r.gradient_norm));
    r.require_converged()?;
    Ok(())
}

fn entropy(files: &[std::path::PathBuf], t: f64, opts: &CompletionOptions) -> Result<()> {
    let first = complete_converged(&load(&files[0])?, opts)?.matrix;
    let Some(second) = files.get(1) else {
        println!("entropy: {}", format_short(gaussian_entropy(&first)?));
        return Ok(());
    };
    let second = complete_converged(&load(second)?, opts)?.matrix;
    let e = entropy_identities(&first, &second, t, DEFAULT_QUAD_POINTS)?;
    println!("H0: {}", format_short(e.h0));
    println!("H1: {}", format_short(e.h1));
    println!(
        "H1 - H0: {}  half integral: {}  (gap {})",
        format_short(e.entropy_gap),
        format_short(e.half_integral),
        format_short(e.integral_gap())
    );
    println!(
        "H(mean, t = {}): {}  interpolated: {}  (gap {})",
        format_short(t),
        format_short(e.mean_entropy),
        format_short(e.interpolated_entropy),
        format_short(e.mean_gap())
    );
    Ok(())
}

fn sweep(spec: SweepSpec, out: &Path) -> Result<()> {
    let r = run_sweep(&spec)?;
    write(out, &r.to_csv())?;
    let feasible = r.rows.iter().filter(|row| row.is_feasible()).count();
    println!("cells: {} ({} feasible)", r.rows.len(), feasible);
    for (axis, e) in ["x", "y"].iter().zip(&r.entries) {
        println!(
            "{axis}: entry ({}, {}) of {:?}, range ({}, {})",
            e.position.0 + 1,
            e.position.1 + 1,
            e.operand,
            format_short(e.range.lower()),
            format_short(e.range.upper())
        );
    }
    if let Some(best) = r.argmax_det() {
        let y = best.y.map(format_short).unwrap_or_default();
        println!(
            "max determinant {} at x = {}{}",
            format_short(best.det.unwrap_or(f64::NAN)),
            format_short(best.x),
            if y.is_empty() { String::new() } else { format!(", y = {y}") }
        );
    }
    Ok(())
}
