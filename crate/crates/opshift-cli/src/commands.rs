//! Command dispatch and report emission.
//!
//! Exit codes: 0 when every verdict in the emitted report passes, 2 when
//! a mathematical verdict fails, 1 for usage, parse, or invariant
//! errors. Reports go to stdout as text; `--json <path>` additionally
//! writes a machine-readable document whose fields mirror the library
//! report types. All numeric text output uses 17 significant digits and
//! JSON floats round-trip exactly, so identical inputs produce
//! byte-identical reports.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use opshift::banded::BandedOperator;
use opshift::equivalence::{
    build_unitary, column_gram_defect, diagonal_support, diagonal_unitary_check,
    intertwining_residual, spectra_necessary_check, verify_u0, ColumnIsometry, EquivalenceReport,
};
use opshift::gallery::{canonical_u0, certify_min_support, generate_k_diagonal_pair, EigenGrid};
use opshift::twodim::{construct_two_diagonal_unitary, eigen_data_for, match_sigma_tau};
use opshift::weights::WeightSequence;
use opshift::{CMatrix, Error};

use crate::config::{
    matrix_to_desc, parse_config, sequence_to_desc, ConfigDoc, Params, ParamsDesc, ProblemConfig,
    RowBlockDesc, U0Desc,
};
use crate::CliError;

#[derive(Parser)]
#[command(
    name = "opshift",
    about = "Bilateral weighted shifts with matrix weights: verification and construction of unitary equivalences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Truncation window half-width N
    #[arg(long = "N")]
    n: Option<i64>,
    /// Largest power checked in the moduli and wandering conditions
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Interior margin for truncation-safe comparisons
    #[arg(long)]
    margin: Option<i64>,
    /// Comparison tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Write the machine-readable report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print truncation shape, bands, and norms of the configured shifts
    Describe {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Weightwise polar decomposition summary of S
    Polar {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the zeroth-column equivalence conditions
    Verify {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify and assemble the intertwining unitary
    Build {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Scan offsets for a diagonal-form equivalence
    CheckDiagonal {
        config: PathBuf,
        /// Scan offsets p in [-p_range, p_range]
        #[arg(long = "p-range")]
        p_range: Option<i64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Two-diagonal pipeline for 2x2 positive commuting weights
    TwoDim {
        config: PathBuf,
        /// Search branch offsets in [-tau_range, tau_range]
        #[arg(long = "tau-range")]
        tau_range: Option<i64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit a k-diagonal example pair as a config document
    GenExample {
        /// Weight dimension k (at least 2)
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Certify the minimal zeroth-column support of an example pair
    CertifyMinSupport {
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn classify(err: &Error) -> i32 {
    match err {
        Error::PreconditionFailed { .. }
        | Error::VerificationFailed { .. }
        | Error::IsometryViolation { .. }
        | Error::NotUnitary { .. }
        | Error::NoMatch { .. } => 2,
        _ => 1,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError {
            message: err.to_string(),
            exit: classify(&err),
        }
    }
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn load(path: &PathBuf, common: &CommonOpts) -> Result<ProblemConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| CliError::usage(format!("cannot read {}: {err}", path.display())))?;
    let mut problem = parse_config(&text)?;
    if let Some(n) = common.n {
        problem.params.n = n;
    }
    if let Some(n_max) = common.n_max {
        problem.params.n_max = n_max;
        problem.params.margin = i64::from(n_max);
    }
    if let Some(margin) = common.margin {
        problem.params.margin = margin;
    }
    if let Some(tol) = common.tol {
        problem.params.tol = tol;
    }
    Ok(problem)
}

fn target_or_source(problem: &ProblemConfig) -> WeightSequence {
    problem.t.clone().unwrap_or_else(|| problem.s.clone())
}

fn default_u0(problem: &ProblemConfig) -> ColumnIsometry {
    problem
        .u0
        .clone()
        .unwrap_or_else(|| ColumnIsometry::single(0, CMatrix::identity(problem.dim)))
}

struct Outcome {
    text: String,
    json: serde_json::Value,
    pass: bool,
}

#[derive(Serialize)]
struct SequenceSummary {
    name: String,
    kind: String,
    window_lo: Option<i64>,
    window_hi: Option<i64>,
    period: Option<usize>,
    sup_norm: f64,
    truncation_band: Vec<i64>,
    truncation_blocks: usize,
}

fn summarize(name: &str, seq: &WeightSequence, window: i64) -> SequenceSummary {
    let truncated = opshift::truncate_shift(seq, window);
    let (window_lo, window_hi) = match seq.window_bounds() {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    SequenceSummary {
        name: name.to_string(),
        kind: match seq.kind() {
            opshift::SequenceKind::Windowed { .. } => "windowed".to_string(),
            opshift::SequenceKind::Periodic { .. } => "periodic".to_string(),
        },
        window_lo,
        window_hi,
        period: seq.period(),
        sup_norm: seq.sup_norm(),
        truncation_band: truncated.band().into_iter().collect(),
        truncation_blocks: truncated.block_count(),
    }
}

fn describe(problem: &ProblemConfig) -> Result<Outcome, CliError> {
    let mut sequences = vec![summarize("S", &problem.s, problem.params.n)];
    if let Some(t) = &problem.t {
        sequences.push(summarize("T", t, problem.params.n));
    }
    let mut text = format!(
        "command: describe\ndim: {}\nN: {}\n",
        problem.dim, problem.params.n
    );
    for s in &sequences {
        text.push_str(&format!(
            "sequence {}: kind={} sup_norm={} band={:?} blocks={}\n",
            s.name,
            s.kind,
            sig17(s.sup_norm),
            s.truncation_band,
            s.truncation_blocks
        ));
    }
    text.push_str("overall: PASS\n");
    Ok(Outcome {
        json: json!({
            "command": "describe",
            "params": problem.params,
            "dim": problem.dim,
            "sequences": sequences,
            "pass": true,
        }),
        text,
        pass: true,
    })
}

fn polar(problem: &ProblemConfig) -> Result<Outcome, CliError> {
    let params = problem.params;
    let (factors, moduli) = problem.s.shift_polar()?;
    let mut max_unitarity = 0.0_f64;
    for i in factors.description_indices() {
        max_unitarity = max_unitarity.max(factors.weight_at(i).unitarity_defect());
    }
    let factor_shift = opshift::truncate_shift(&factors, params.n);
    let modulus_diag =
        BandedOperator::diagonal_operator(problem.dim, params.n, |i| moduli.weight_at(i + 1))?;
    let recombined = factor_shift.mul(&modulus_diag)?;
    let original = opshift::truncate_shift(&problem.s, params.n);
    let reconstruction =
        opshift::max_interior_block_diff(&recombined, &original, 1) / problem.s.sup_norm().max(1.0);
    let pass = reconstruction <= params.tol && max_unitarity <= params.tol;
    let text = format!(
        "command: polar\nreconstruction_residual: {}\nmax_factor_unitarity_defect: {}\noverall: {}\n",
        sig17(reconstruction),
        sig17(max_unitarity),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(Outcome {
        json: json!({
            "command": "polar",
            "params": params,
            "reconstruction_residual": reconstruction,
            "max_factor_unitarity_defect": max_unitarity,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn render_equivalence(report: &EquivalenceReport) -> String {
    let line = |name: &str, residual: f64, pass: bool| {
        format!(
            "condition {name}: residual {} {}\n",
            sig17(residual),
            if pass { "PASS" } else { "FAIL" }
        )
    };
    let mut text = String::new();
    text.push_str(&line(
        "moduli_forward",
        report.residual_moduli_forward,
        report.pass_moduli_forward,
    ));
    text.push_str(&line(
        "moduli_backward",
        report.residual_moduli_backward,
        report.pass_moduli_backward,
    ));
    text.push_str(&line(
        "wandering",
        report.residual_wandering,
        report.pass_wandering,
    ));
    text.push_str(&format!(
        "condition span: defect {} threshold {} {}\n",
        sig17(report.span_defect),
        sig17(report.span_threshold),
        if report.pass_span { "PASS" } else { "FAIL" }
    ));
    text
}

fn verify(problem: &ProblemConfig) -> Result<Outcome, CliError> {
    let params = problem.params;
    let t = target_or_source(problem);
    let u0 = default_u0(problem);
    let report = verify_u0(&u0, &problem.s, &t, params.n_max, params.n, params.tol)?;
    let pass = report.pass;
    let mut text = String::from("command: verify\n");
    text.push_str(&render_equivalence(&report));
    text.push_str(&format!(
        "overall: {}\n",
        if pass { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome {
        json: json!({
            "command": "verify",
            "params": params,
            "equivalence": report,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn build(problem: &ProblemConfig) -> Result<Outcome, CliError> {
    let params = problem.params;
    let t = target_or_source(problem);
    let u0 = default_u0(problem);
    let col_range = params.n_max;
    let report = verify_u0(&u0, &problem.s, &t, col_range, params.n, params.tol)?;
    if !report.pass {
        let mut text = String::from("command: build\n");
        text.push_str(&render_equivalence(&report));
        text.push_str("overall: FAIL (column verification failed; nothing assembled)\n");
        return Ok(Outcome {
            json: json!({
                "command": "build",
                "params": params,
                "equivalence": report,
                "pass": false,
            }),
            text,
            pass: false,
        });
    }
    let built = build_unitary(&u0, &problem.s, &t, params.n, col_range, params.tol)?;
    let support: Vec<i64> = diagonal_support(&built, params.tol).into_iter().collect();
    let unitarity = column_gram_defect(&built, i64::from(col_range));
    let residual_margin = params.margin.max(params.n - i64::from(col_range) + 1);
    let residual = intertwining_residual(&built, &problem.s, &t, 1, residual_margin)?;
    let pass = unitarity <= params.tol && residual <= params.tol;
    let mut text = String::from("command: build\n");
    text.push_str(&render_equivalence(&report));
    text.push_str(&format!(
        "diagonal_support: {support:?}\nunitarity_defect: {}\nintertwining_residual: {}\noverall: {}\n",
        sig17(unitarity),
        sig17(residual),
        if pass { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome {
        json: json!({
            "command": "build",
            "params": params,
            "equivalence": report,
            "diagonal_support": support,
            "col_range": col_range,
            "unitarity_defect": unitarity,
            "intertwining_residual": residual,
            "pass": pass,
        }),
        text,
        pass,
    })
}

/// Candidate unitary blocks for the diagonal-form scan: the identity, a
/// user-provided single-row block, branch permutations (diagonal
/// weights), the 2x2 eigenbasis bijections, and a fixed seeded unitary
/// sample.
fn diagonal_candidates(
    problem: &ProblemConfig,
    t: &WeightSequence,
) -> Result<Vec<CMatrix>, CliError> {
    let dim = problem.dim;
    let tol = problem.params.tol;
    let mut candidates = vec![CMatrix::identity(dim)];
    if let Some(u0) = &problem.u0 {
        if u0.support().len() == 1 && u0.support()[0].1.is_unitary(tol) {
            candidates.push(u0.support()[0].1.clone());
        }
    }
    let all_diagonal = |seq: &WeightSequence| {
        seq.description_indices()
            .into_iter()
            .all(|i| seq.weight_at(i).is_diagonal(1e-12))
    };
    if all_diagonal(&problem.s) && all_diagonal(t) {
        let mut perm = vec![0usize; dim];
        fn push_perms(
            dim: usize,
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            depth: usize,
            out: &mut Vec<CMatrix>,
        ) {
            if depth == dim {
                let mut entries = vec![0.0; dim * dim];
                for (j, &target) in perm.iter().enumerate() {
                    entries[target * dim + j] = 1.0;
                }
                out.push(CMatrix::from_real_rows(dim, &entries).expect("finite entries"));
                return;
            }
            for next in 0..dim {
                if !used[next] {
                    used[next] = true;
                    perm[depth] = next;
                    push_perms(dim, used, perm, depth + 1, out);
                    used[next] = false;
                }
            }
        }
        push_perms(dim, &mut vec![false; dim], &mut perm, 0, &mut candidates);
    }
    if dim == 2 {
        let eigen_pair = || -> Result<(Vec<CMatrix>,), Error> {
            let (_, s_mod) = problem.s.shift_polar()?;
            let (_, t_mod) = t.shift_polar()?;
            let (s_lo, s_hi) = s_mod.window_bounds().unwrap_or((-4, 4));
            let (t_lo, t_hi) = t_mod.window_bounds().unwrap_or((-4, 4));
            let sdata = eigen_data_for(&s_mod, s_lo, s_hi, tol)?;
            let tdata = eigen_data_for(&t_mod, t_lo, t_hi, tol)?;
            let mut out = Vec::new();
            for sigma in [[0usize, 1], [1usize, 0]] {
                let mut block = CMatrix::zeros(2);
                for (j, &target) in sigma.iter().enumerate() {
                    let w = tdata.basis_column(target);
                    let v = sdata.basis_column(j);
                    block = block.add(&CMatrix::outer(&w, &v));
                }
                out.push(block);
            }
            Ok((out,))
        };
        if let Ok((blocks,)) = eigen_pair() {
            candidates.extend(blocks);
        }
    }
    let mut rng = opshift::gen::rng(0x5EED);
    for _ in 0..4 {
        candidates.push(opshift::gen::random_unitary(&mut rng, dim));
    }
    Ok(candidates)
}

fn check_diagonal(problem: &ProblemConfig, p_range: Option<i64>) -> Result<Outcome, CliError> {
    let mut params = problem.params;
    if let Some(p_range) = p_range {
        params.p_range = p_range;
    }
    let t = target_or_source(problem);
    let candidates = diagonal_candidates(problem, &t)?;

    #[derive(Serialize)]
    struct OffsetScan {
        p: i64,
        spectra_pass: bool,
        spectra_mismatch: f64,
        candidates_checked: usize,
        best_residual: Option<f64>,
        diagonal_form_found: bool,
    }

    let mut offsets = Vec::new();
    let mut found_offset = None;
    for p in -params.p_range..=params.p_range {
        let spectra = spectra_necessary_check(&problem.s, &t, p, params.tol);
        let mut best: Option<f64> = None;
        let mut found = false;
        let mut checked = 0usize;
        if spectra.pass {
            for candidate in &candidates {
                let report =
                    diagonal_unitary_check(&problem.s, &t, p, candidate, params.n_max, params.tol)?;
                checked += 1;
                best = Some(best.map_or(report.max_residual, |b: f64| b.min(report.max_residual)));
                found |= report.pass;
            }
        }
        if found && found_offset.is_none() {
            found_offset = Some(p);
        }
        offsets.push(OffsetScan {
            p,
            spectra_pass: spectra.pass,
            spectra_mismatch: spectra.max_mismatch,
            candidates_checked: checked,
            best_residual: best,
            diagonal_form_found: found,
        });
    }
    let pass = found_offset.is_some();
    let mut text = format!("command: check-diagonal\np_range: {}\n", params.p_range);
    for scan in &offsets {
        text.push_str(&format!(
            "p={}: spectra {} (mismatch {}), candidates {}, diagonal form {}\n",
            scan.p,
            if scan.spectra_pass { "PASS" } else { "FAIL" },
            sig17(scan.spectra_mismatch),
            scan.candidates_checked,
            if scan.diagonal_form_found {
                "FOUND"
            } else {
                "none"
            },
        ));
    }
    text.push_str(&format!(
        "overall: {}\n",
        if pass {
            "PASS"
        } else {
            "FAIL (no diagonal-form equivalence found)"
        }
    ));
    Ok(Outcome {
        json: json!({
            "command": "check-diagonal",
            "params": params,
            "offsets": offsets,
            "found_offset": found_offset,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn extraction_window(seq: &WeightSequence, params: &Params) -> (i64, i64) {
    match seq.window_bounds() {
        Some((lo, hi)) => (lo, hi),
        None => {
            let period = seq.period().unwrap_or(1) as i64;
            (-(params.tau_range + period), params.tau_range + period)
        }
    }
}

fn two_dim(problem: &ProblemConfig, tau_range: Option<i64>) -> Result<Outcome, CliError> {
    let mut params = problem.params;
    if let Some(tau_range) = tau_range {
        params.tau_range = tau_range;
    }
    if problem.dim != 2 {
        return Err(CliError::usage(format!(
            "two-dim requires dim = 2, got {}",
            problem.dim
        )));
    }
    let t = target_or_source(problem);
    let (s_lo, s_hi) = extraction_window(&problem.s, &params);
    let (t_lo, t_hi) = extraction_window(&t, &params);
    let sdata = eigen_data_for(&problem.s, s_lo, s_hi, params.tol)?;
    let tdata = eigen_data_for(&t, t_lo, t_hi, params.tol)?;

    let matched = match match_sigma_tau(&sdata, &tdata, params.tau_range, params.tol) {
        Ok(st) => st,
        Err(Error::NoMatch { tau_range }) => {
            let text = format!(
                "command: two-dim\nmatched: false (no branch alignment within tau_range {tau_range})\noverall: FAIL\n"
            );
            return Ok(Outcome {
                json: json!({
                    "command": "two-dim",
                    "params": params,
                    "matched": false,
                    "pass": false,
                }),
                text,
                pass: false,
            });
        }
        Err(err) => return Err(err.into()),
    };

    let max_tau = matched.tau.iter().map(|t| t.abs()).max().unwrap_or(0);
    let col_range = i64::from(params.n_max).min(params.n - max_tau);
    if col_range < 1 {
        return Err(CliError::usage(format!(
            "window N = {} too small for matched offsets {:?}",
            params.n, matched.tau
        )));
    }
    let (built, report) = construct_two_diagonal_unitary(
        &problem.s,
        &t,
        &matched,
        &sdata,
        &tdata,
        params.n,
        col_range as u32,
        params.tol,
    )?;
    let support: Vec<i64> = diagonal_support(&built, params.tol).into_iter().collect();
    let unitarity = column_gram_defect(&built, col_range);
    let residual_margin = params.margin.max(params.n - col_range + 1);
    let residual = intertwining_residual(&built, &problem.s, &t, 1, residual_margin)?;
    let pass =
        report.pass && support.len() <= 2 && unitarity <= params.tol && residual <= params.tol;
    let mut text = format!(
        "command: two-dim\nmatched: true\nsigma: {:?}\ntau: {:?}\ndiagonal_support: {support:?}\n",
        matched.sigma, matched.tau
    );
    text.push_str(&render_equivalence(&report));
    text.push_str(&format!(
        "unitarity_defect: {}\nintertwining_residual: {}\noverall: {}\n",
        sig17(unitarity),
        sig17(residual),
        if pass { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome {
        json: json!({
            "command": "two-dim",
            "params": params,
            "matched": true,
            "sigma": matched.sigma,
            "tau": matched.tau,
            "diagonal_support": support,
            "equivalence": report,
            "unitarity_defect": unitarity,
            "intertwining_residual": residual,
            "pass": pass,
        }),
        text,
        pass,
    })
}

fn gen_example(k: usize, common: &CommonOpts) -> Result<Outcome, CliError> {
    let n = common.n.unwrap_or(8);
    let n_max = common.n_max.unwrap_or(3);
    let tol = common.tol.unwrap_or(1e-8);
    let reach = k as i64 + i64::from(n_max) + 2;
    let grid = EigenGrid::default_affine(k, -reach, reach)?;
    let (s, t) = generate_k_diagonal_pair(&grid)?;
    let u0 = canonical_u0(k)?;
    let doc = ConfigDoc {
        dim: k,
        s: sequence_to_desc(&s),
        t: Some(sequence_to_desc(&t)),
        u0: Some(U0Desc {
            support: u0
                .support()
                .iter()
                .map(|(row, block)| RowBlockDesc {
                    row: *row,
                    block: matrix_to_desc(block),
                })
                .collect(),
        }),
        params: Some(ParamsDesc {
            n: Some(n),
            n_max: Some(n_max),
            margin: Some(i64::from(n_max)),
            tol: Some(tol),
            tau_range: Some(k as i64 + 1),
            p_range: Some(6),
        }),
    };
    let rendered = serde_json::to_string_pretty(&doc)
        .map_err(|err| CliError::usage(format!("serialization failed: {err}")))?;
    Ok(Outcome {
        json: serde_json::to_value(&doc)
            .map_err(|err| CliError::usage(format!("serialization failed: {err}")))?,
        text: format!("{rendered}\n"),
        pass: true,
    })
}

fn certify(problem: &ProblemConfig) -> Result<Outcome, CliError> {
    let params = problem.params;
    let k = problem.dim;
    let t = problem.t.clone().ok_or_else(|| {
        CliError::usage("certify-min-support needs both S and T in the config".to_string())
    })?;
    let Some((s_lo, s_hi)) = problem.s.window_bounds() else {
        return Err(CliError::usage(
            "certify-min-support needs a windowed S description".to_string(),
        ));
    };
    // the grid is the diagonal of S over its stored window
    let values: Vec<Vec<f64>> = (s_lo..=s_hi)
        .map(|n| {
            let w = problem.s.weight_at(n);
            (0..k).map(|i| w.entry(i, i).re).collect()
        })
        .collect();
    let grid = EigenGrid::new(k, s_lo, values)?;
    let certificate = certify_min_support(&problem.s, &t, &grid, k - 1)?;
    let pass = certificate.exceeds_requested && certificate.min_support == k;
    let mut text = format!(
        "command: certify-min-support\nk: {k}\nmin_support: {}\n",
        certificate.min_support
    );
    for (branch, rows) in certificate.admissible_rows.iter().enumerate() {
        text.push_str(&format!("branch {branch}: admissible rows {rows:?}\n"));
    }
    text.push_str(&format!(
        "no unitary with at most {} diagonals intertwines the pair: {}\noverall: {}\n",
        k - 1,
        certificate.exceeds_requested,
        if pass { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome {
        json: json!({
            "command": "certify-min-support",
            "params": params,
            "certificate": certificate,
            "pass": pass,
        }),
        text,
        pass,
    })
}

/// Runs one CLI invocation. `argv` includes the program name.
pub fn run_command(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    1
                }
            };
        }
    };
    let (outcome, json_path) = match &cli.command {
        Command::Describe { config, common } => (
            load(config, common).and_then(|p| describe(&p)),
            common.json.clone(),
        ),
        Command::Polar { config, common } => (
            load(config, common).and_then(|p| polar(&p)),
            common.json.clone(),
        ),
        Command::Verify { config, common } => (
            load(config, common).and_then(|p| verify(&p)),
            common.json.clone(),
        ),
        Command::Build { config, common } => (
            load(config, common).and_then(|p| build(&p)),
            common.json.clone(),
        ),
        Command::CheckDiagonal {
            config,
            p_range,
            common,
        } => (
            load(config, common).and_then(|p| check_diagonal(&p, *p_range)),
            common.json.clone(),
        ),
        Command::TwoDim {
            config,
            tau_range,
            common,
        } => (
            load(config, common).and_then(|p| two_dim(&p, *tau_range)),
            common.json.clone(),
        ),
        Command::GenExample { k, common } => (gen_example(*k, common), common.json.clone()),
        Command::CertifyMinSupport { config, common } => (
            load(config, common).and_then(|p| certify(&p)),
            common.json.clone(),
        ),
    };
    match outcome {
        Ok(outcome) => {
            let _ = write!(stdout, "{}", outcome.text);
            if let Some(path) = json_path {
                let rendered =
                    serde_json::to_string_pretty(&outcome.json).expect("reports serialize cleanly");
                if let Err(err) = std::fs::write(&path, format!("{rendered}\n")) {
                    let _ = writeln!(stderr, "error: cannot write {}: {err}", path.display());
                    return 1;
                }
            }
            if outcome.pass {
                0
            } else {
                2
            }
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", err.message);
            err.exit
        }
    }
}
