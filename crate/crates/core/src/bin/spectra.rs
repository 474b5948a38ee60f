//! Command-line front end: pencil ingestion, bundled examples, JSON reports.
//!
//! Exit codes: 0 = verified, 2 = honest verification failure, 3 = input
//! error, 4 = internal invariant breach (a proved statement failed, which
//! means a solver bug).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use spectrahedra::certify::{self, CertifyConfig, PairConfig};
use spectrahedra::error::Error;
use spectrahedra::faces;
use spectrahedra::library;
use spectrahedra::pencil::{parse_pencil_file, ParsedPencil, PencilFile, SymmetricPencil};
use spectrahedra::perron;
use spectrahedra::povm;
use spectrahedra::sampling::{self, SplitMix64};
use spectrahedra::sections::{build_gamma, SectionConfig};
use spectrahedra::strata;
use spectrahedra::Tolerances;

const EXIT_OK: u8 = 0;
const EXIT_UNVERIFIED: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "spectra")]
#[command(about = "Facial geometry and separation certificates for compact spectrahedra")]
#[command(version)]
struct Cli {
    /// Absolute tolerance floor for all eigenvalue comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for every randomized probe.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    /// Comma-separated coordinates, e.g. `--x 1,0`.
    #[arg(long, allow_hyphen_values = true)]
    x: Point,

    #[arg(long, allow_hyphen_values = true)]
    y: Point,
}

/// Comma-separated coordinate list.
#[derive(Debug, Clone)]
struct Point(Vec<f64>);

impl std::str::FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad coordinate `{t}`: {e}"))
            })
            .collect::<Result<Vec<f64>, _>>()
            .map(Point)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a point against the spectrahedron.
    Membership {
        pencil: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: Point,
    },

    /// Sample the boundary and label each point by kernel dimension.
    Stratify {
        pencil: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },

    /// Test sampled boundary points for extremeness, cross-validated by the
    /// geometric oracle, with a sampled closedness heuristic.
    Extremes {
        pencil: PathBuf,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },

    /// Sweep random positive symmetric matrices and verify the Perron
    /// entry bounds on every one.
    PerronCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },

    /// Build a kernel section at an extreme boundary point.
    Section {
        pencil: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },

    /// Build and verify a full separation certificate, then audit it.
    Certify {
        pencil: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },

    /// Certify a pair of extreme points with per-stratum covering cells.
    CertifyPair {
        pencil: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 48)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },

    /// Random PVM/POVM sweep of the finite separation principle, or check
    /// one instance file.
    PovmSweep {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        hmax: usize,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },

    /// Reduce a pencil to the affine hull of its spectrahedron.
    Reduce { pencil: PathBuf },

    /// Write the bundled example pencils as JSON files.
    Examples {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match Tolerances::new(cli.tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match run(&cli, &tol) {
        Ok((report, code)) => {
            let text = format!("{report}\n");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write report: {e}");
                    return ExitCode::from(EXIT_INPUT);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidTolerance { .. }
        | Error::AsymmetryTooLarge { .. }
        | Error::MalformedHermitian { .. }
        | Error::DimensionMismatch { .. } => EXIT_INPUT,
        Error::BoundViolation { .. }
        | Error::HadamardCriterionViolated { .. }
        | Error::EqualityBoundExceeded { .. }
        | Error::ResidualTooLarge { .. }
        | Error::AuditMismatch { .. } => EXIT_INTERNAL,
        _ => EXIT_UNVERIFIED,
    }
}

fn load(path: &std::path::Path) -> Result<(SymmetricPencil, bool), Error> {
    let parsed = parse_pencil_file(path)?;
    let hermitian = parsed.is_hermitian();
    if hermitian {
        eprintln!(
            "note: Hermitian pencil doubled to a real symmetric pencil of size {}",
            parsed.symmetric().size()
        );
    }
    match parsed {
        ParsedPencil::Symmetric(p) => Ok((p, false)),
        ParsedPencil::Hermitian { doubled, .. } => Ok((doubled, true)),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn run(cli: &Cli, tol: &Tolerances) -> Result<(String, u8), Error> {
    match &cli.command {
        Command::Membership { pencil, z } => {
            let (p, hermitian_doubled) = load(pencil)?;
            let verdict = p.membership(&z.0, tol)?;
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                point: &'a [f64],
                hermitian_doubled: bool,
                verdict: spectrahedra::pencil::MembershipVerdict,
            }
            let report = Report {
                command: "membership",
                point: &z.0,
                hermitian_doubled,
                verdict,
            };
            Ok((to_json(&report)?, EXIT_OK))
        }

        Command::Stratify { pencil, samples } => {
            let (p, _) = load(pencil)?;
            let (interior, depth) = p.find_deepest_point(tol, cli.seed)?;
            if depth < -tol.rel(1.0) {
                return Err(Error::EmptySpectrahedron { best: depth });
            }
            let singleton = strata::detect_full_kernel_singleton(&p, tol)?;
            let rows = if singleton.is_some() {
                Vec::new()
            } else {
                let pts = strata::sample_boundary(&p, &interior, *samples, tol)?;
                strata::stratify_samples(&p, &pts, tol)?
            };
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                samples: Vec<strata::StratumSample>,
                full_kernel_singleton: Option<Vec<f64>>,
            }
            let report = Report {
                command: "stratify",
                samples: rows,
                full_kernel_singleton: singleton,
            };
            Ok((to_json(&report)?, EXIT_OK))
        }

        Command::Extremes { pencil, samples } => {
            let (p, _) = load(pencil)?;
            let (interior, depth) = p.find_deepest_point(tol, cli.seed)?;
            if depth < -tol.rel(1.0) {
                return Err(Error::EmptySpectrahedron { best: depth });
            }
            let pts = strata::sample_boundary(&p, &interior, *samples, tol)?;
            let mut rows = Vec::with_capacity(pts.len());
            for (i, z) in pts.iter().enumerate() {
                rows.push(faces::extreme_report_row(
                    &p,
                    z,
                    tol,
                    8,
                    cli.seed ^ i as u64,
                )?);
            }
            let candidates = faces::discover_extreme_candidates(&p, &pts, tol, cli.seed)?;
            let mut candidate_rows = Vec::with_capacity(candidates.len());
            for (i, z) in candidates.iter().enumerate() {
                candidate_rows.push(faces::extreme_report_row(
                    &p,
                    z,
                    tol,
                    8,
                    cli.seed ^ (0x1000 + i as u64),
                )?);
            }
            let disagreements = rows
                .iter()
                .chain(&candidate_rows)
                .filter(|r| !r.oracle_agrees)
                .count();
            let heuristic = closedness_heuristic(&rows);
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                rows: Vec<faces::ExtremeReportRow>,
                vertex_candidates: Vec<faces::ExtremeReportRow>,
                disagreements: usize,
                heuristic: Heuristic,
            }
            let report = Report {
                command: "extremes",
                rows,
                vertex_candidates: candidate_rows,
                disagreements,
                heuristic,
            };
            let code = if disagreements == 0 {
                EXIT_OK
            } else {
                EXIT_UNVERIFIED
            };
            Ok((to_json(&report)?, code))
        }

        Command::PerronCheck { trials, nmax } => {
            let mut rng = SplitMix64::new(cli.seed);
            let mut violations = 0usize;
            let mut worst = [f64::INFINITY; 3];
            for _ in 0..*trials {
                let n = 1 + rng.next_usize(*nmax);
                let a = perron::random_positive_symmetric(n, 0.5, 3.0, &mut rng);
                let pd = perron::perron_eigenpair(&a, tol)?;
                match perron::verify_perron_bounds(&pd, tol) {
                    Ok(rep) => {
                        for (w, fam) in worst.iter_mut().zip(&rep.families) {
                            *w = w.min(fam.min_slack);
                        }
                    }
                    Err(Error::BoundViolation { .. }) => violations += 1,
                    Err(e) => return Err(e),
                }
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                trials: usize,
                violations: usize,
                worst_slack_vector_range: f64,
                worst_slack_eigenvalue: f64,
                worst_slack_rank_one_floor: f64,
            }
            let report = Report {
                command: "perron-check",
                trials: *trials,
                violations,
                worst_slack_vector_range: worst[0],
                worst_slack_eigenvalue: worst[1],
                worst_slack_rank_one_floor: worst[2],
            };
            let code = if violations == 0 {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            };
            Ok((to_json(&report)?, code))
        }

        Command::Section {
            pencil,
            points,
            grid,
        } => {
            let (p, _) = load(pencil)?;
            let cfg = SectionConfig {
                grid_target: *grid,
                seed: cli.seed,
                ..SectionConfig::default()
            };
            let ks = build_gamma(&p, &points.x.0, &points.y.0, tol, &cfg)?;
            #[derive(Serialize)]
            struct Report<'a> {
                command: &'static str,
                x: &'a [f64],
                y: &'a [f64],
                stratum: usize,
                epsilon: f64,
                radius: f64,
                c: f64,
                b: f64,
                grid_stats: &'a spectrahedra::sections::GridStats,
            }
            let report = Report {
                command: "section",
                x: &points.x.0,
                y: &points.y.0,
                stratum: ks.stratum(),
                epsilon: ks.epsilon(),
                radius: ks.radius(),
                c: ks.inf_bound(),
                b: ks.sup_bound(),
                grid_stats: ks.stats(),
            };
            Ok((to_json(&report)?, EXIT_OK))
        }

        Command::Certify {
            pencil,
            points,
            eps,
            grid,
            samples,
        } => {
            let (p, _) = load(pencil)?;
            let scfg = SectionConfig {
                grid_target: *grid,
                seed: cli.seed,
                ..SectionConfig::default()
            };
            let ks = build_gamma(&p, &points.x.0, &points.y.0, tol, &scfg)?;
            let cfg = CertifyConfig {
                epsilon: *eps,
                grid_target: *grid,
                domination_samples: *samples,
                seed: cli.seed,
            };
            let cert = certify::certify_separation(&ks, &points.y.0, &cfg, tol)?;
            let audit = certify::audit_certificate(&p, &cert, tol)?;
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                certificate: certify::SeparationCertificate,
                audit: certify::AuditReport,
            }
            let code = match (cert.verified, audit.all_passed) {
                (true, true) => EXIT_OK,
                (true, false) => EXIT_INTERNAL,
                _ => EXIT_UNVERIFIED,
            };
            let report = Report {
                command: "certify",
                certificate: cert,
                audit,
            };
            Ok((to_json(&report)?, code))
        }

        Command::CertifyPair {
            pencil,
            points,
            eps,
            grid,
            samples,
        } => {
            let (p, _) = load(pencil)?;
            let cfg = PairConfig {
                epsilon: *eps,
                grid_target: *grid,
                domination_samples: *samples,
                seed: cli.seed,
                ..PairConfig::default()
            };
            let pc = certify::certify_pair(&p, &points.x.0, &points.y.0, &cfg, tol)?;
            // audit every embedded certificate
            let mut audits_passed = true;
            for sc in &pc.strata {
                for entry in &sc.entries {
                    if let certify::BaseOutcome::Covered { cells } = &entry.outcome {
                        for cell in cells {
                            if let certify::TargetOutcome::Certificate(cert) = &cell.outcome {
                                let audit = certify::audit_certificate(&p, cert, tol)?;
                                audits_passed &= audit.all_passed;
                            }
                        }
                    }
                }
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                pair: certify::PairCertificate,
                audits_passed: bool,
            }
            let code = match (pc.verified, audits_passed) {
                (true, true) => EXIT_OK,
                (true, false) => EXIT_INTERNAL,
                _ => EXIT_UNVERIFIED,
            };
            let report = Report {
                command: "certify-pair",
                pair: pc,
                audits_passed,
            };
            Ok((to_json(&report)?, code))
        }

        Command::PovmSweep {
            trials,
            hmax,
            nmax,
            input,
        } => {
            if let Some(path) = input {
                let text = std::fs::read_to_string(path)?;
                let file: povm::MeasureInstanceFile = serde_json::from_str(&text)?;
                let (pvm, pov) = file.build()?;
                pvm.validate(tol)?;
                pov.validate(tol)?;
                let hyp = povm::hypothesis_holds(&pvm, &pov, tol)?;
                let equality = if hyp.holds {
                    Some(povm::conclude_equality_check(&pvm, &pov, tol)?)
                } else {
                    None
                };
                #[derive(Serialize)]
                struct Report {
                    command: &'static str,
                    hypothesis: povm::HypothesisReport,
                    equality: Option<bool>,
                }
                let code = if equality == Some(true) {
                    EXIT_OK
                } else {
                    EXIT_UNVERIFIED
                };
                let report = Report {
                    command: "povm-check",
                    hypothesis: hyp,
                    equality,
                };
                return Ok((to_json(&report)?, code));
            }
            let mut rng = SplitMix64::new(cli.seed);
            let mut hypothesis_held = 0usize;
            let mut violations = 0usize;
            for _ in 0..*trials {
                let h = 2 + rng.next_usize(hmax.saturating_sub(1).max(1));
                let n = 1 + rng.next_usize(h.min(*nmax));
                let pvm = povm::random_pvm(h, n, &mut rng);
                let pov = povm::perturbed_povm(&pvm, 0.2 * tol.abs, &mut rng);
                let hyp = povm::hypothesis_holds(&pvm, &pov, tol)?;
                if hyp.holds {
                    hypothesis_held += 1;
                    match povm::conclude_equality_check(&pvm, &pov, tol) {
                        Ok(true) => {}
                        Ok(false) | Err(Error::EqualityBoundExceeded { .. }) => violations += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            // tightness: a hypothesis-violating instance with E != P per atom count
            let mut tightness = Vec::new();
            for n in 2..=*nmax {
                let h = (n + 2).min(*hmax);
                let pvm = povm::random_pvm(h, n, &mut rng);
                let pov = povm::rotated_povm(&pvm, 0.4);
                let hyp = povm::hypothesis_holds(&pvm, &pov, tol)?;
                let differs = pvm
                    .atoms
                    .iter()
                    .zip(&pov.atoms)
                    .any(|(a, b)| spectrahedra::linalg::max_abs_entry(&(a - b)) > 1e-6);
                tightness.push(TightnessRow {
                    atoms: n,
                    hypothesis_broken: !hyp.holds,
                    differs,
                });
            }
            #[derive(Serialize)]
            struct TightnessRow {
                atoms: usize,
                hypothesis_broken: bool,
                differs: bool,
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                trials: usize,
                hypothesis_held: usize,
                implication_violations: usize,
                tightness: Vec<TightnessRow>,
            }
            let tight_ok = tightness.iter().all(|t| t.hypothesis_broken && t.differs);
            let report = Report {
                command: "povm-sweep",
                trials: *trials,
                hypothesis_held,
                implication_violations: violations,
                tightness,
            };
            let code = if violations > 0 {
                EXIT_INTERNAL
            } else if tight_ok {
                EXIT_OK
            } else {
                EXIT_UNVERIFIED
            };
            Ok((to_json(&report)?, code))
        }

        Command::Reduce { pencil } => {
            let (p, _) = load(pencil)?;
            let injectivity_violation = p.injectivity_probe(64, tol, cli.seed)?;
            let red = p.affine_hull_reduce(tol, cli.seed)?;
            // sampled round-trip deviation
            let mut rng = SplitMix64::new(cli.seed);
            let mut max_dev = 0.0f64;
            for _ in 0..100 {
                let w: Vec<f64> = (0..red.reduced_dim)
                    .map(|_| rng.next_range(-1.0, 1.0))
                    .collect();
                let z = red.embed(&w)?;
                let qa = red.reduced.evaluate(&w)?;
                let qb = p.evaluate(&z)?;
                max_dev = max_dev.max(spectrahedra::linalg::max_abs_entry(&(qa - qb)));
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                original_dim: usize,
                reduced_dim: usize,
                embed_offset: Vec<f64>,
                embed_matrix: Vec<Vec<f64>>,
                reduced_pencil: PencilFile,
                roundtrip_max_deviation: f64,
                injectivity_violation: Option<(Vec<f64>, Vec<f64>)>,
            }
            let report = Report {
                command: "reduce",
                original_dim: p.ambient_dim(),
                reduced_dim: red.reduced_dim,
                embed_offset: red.embed_offset.clone(),
                embed_matrix: red.embed_matrix.clone(),
                reduced_pencil: PencilFile::from_symmetric(&red.reduced),
                roundtrip_max_deviation: max_dev,
                injectivity_violation,
            };
            Ok((to_json(&report)?, EXIT_OK))
        }

        Command::Examples { dir } => {
            std::fs::create_dir_all(dir)?;
            let mut written = Vec::new();
            for (name, file) in library::bundled_files() {
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&file)?))?;
                written.push(path.display().to_string());
            }
            #[derive(Serialize)]
            struct Report {
                command: &'static str,
                written: Vec<String>,
            }
            Ok((
                to_json(&Report {
                    command: "examples",
                    written,
                })?,
                EXIT_OK,
            ))
        }
    }
}

#[derive(Serialize)]
struct Heuristic {
    label: &'static str,
    consistent: bool,
    flagged_points: Vec<Vec<f64>>,
}

/// Sampled closedness check for the set of extreme points: flag any
/// non-extreme sample at which extreme samples accumulate (three or more
/// within three median spacings). Sampling cannot decide closedness, hence
/// the label.
fn closedness_heuristic(rows: &[faces::ExtremeReportRow]) -> Heuristic {
    let extreme: Vec<&faces::ExtremeReportRow> = rows.iter().filter(|r| r.is_extreme).collect();
    let mut spacings: Vec<f64> = Vec::new();
    for r in rows {
        let mut nearest = f64::INFINITY;
        for q in rows {
            if std::ptr::eq(r, q) {
                continue;
            }
            nearest = nearest.min(sampling::dist(&r.point, &q.point));
        }
        if nearest.is_finite() {
            spacings.push(nearest);
        }
    }
    spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = spacings.get(spacings.len() / 2).copied().unwrap_or(0.0);
    let mut flagged = Vec::new();
    for r in rows.iter().filter(|r| !r.is_extreme) {
        let close = extreme
            .iter()
            .filter(|e| sampling::dist(&e.point, &r.point) <= 3.0 * h)
            .count();
        if close >= 3 {
            flagged.push(r.point.clone());
        }
    }
    Heuristic {
        label: "HEURISTIC: sampled check only; closedness is not decidable by sampling",
        consistent: flagged.is_empty(),
        flagged_points: flagged,
    }
}
