use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use tricensus::charvec::{
    build_angle_frame, build_radial_frame, charvec_of_polyline, polyline_from_charvec,
    psi_injectivity_check, CharVector, Polyline, PsiOutcome, DEFAULT_PSI_CAP,
};
use tricensus::enumerate::{
    count_full, count_partial, enumerate_full, enumerate_partial, DEFAULT_ENUMERATE_CAP,
};
use tricensus::format::{format_points, parse_points};
use tricensus::generators::{Family, GenSpec};
use tricensus::harness::{run_corpus, RunConfig, Source, VerifyOptions, DEFAULT_BUDGET_MS};
use tricensus::structure::classify;
use tricensus::{catalan, w, PointSet};

#[derive(Parser)]
#[command(
    name = "tricensus",
    version,
    about = "Exact triangulation counts for small planar point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Full,
    Partial,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated point set in the v1 point format.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Hull sides that get an interior point (quasi_convex only).
        #[arg(long, value_delimiter = ',')]
        sides: Option<Vec<usize>>,
        #[arg(long, default_value_t = 64)]
        scale: u64,
        #[arg(long)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count (or list) full or partial triangulations.
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "partial")]
        mode: Mode,
        /// Print every triangulation before the count.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_CAP)]
        cap: usize,
    },
    /// Report which interior points are close to which hull sides.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Polyline of a characteristic vector, or Ψ injectivity around a centre.
    #[command(group(ArgGroup::new("angle").args(["chi", "line"]).multiple(false)))]
    Charvec {
        file: PathBuf,
        #[arg(long, conflicts_with = "radial")]
        apex: Option<usize>,
        /// Left and right arm, as `i,j`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        arms: Option<Vec<usize>>,
        /// Bits for the remaining points, in left-to-right order.
        #[arg(long)]
        chi: Option<String>,
        /// Internal polyline vertices (file indices); prints the vector.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        line: Option<Vec<usize>>,
        #[arg(long)]
        radial: bool,
        #[arg(long, requires = "radial")]
        center: Option<usize>,
        #[arg(long, requires = "radial")]
        check_psi: bool,
    },
    /// Print c_n and W_{n+2}.
    Catalan {
        #[arg(long)]
        n: usize,
    },
    /// Check the lower bound and its equality case over a corpus.
    #[command(group(ArgGroup::new("source").args(["family", "input"]).required(true)))]
    Verify {
        #[arg(long, requires = "n")]
        family: Option<Family>,
        /// Glob of point files.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        scale: u64,
        #[arg(long, value_delimiter = ',')]
        sides: Option<Vec<usize>>,
        #[arg(long)]
        full_suite: bool,
        /// JSONL report file; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATE_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET_MS)]
        budget_ms: u64,
        /// Record per-instance runtimes (reports then differ between runs).
        #[arg(long)]
        timing: bool,
    },
}

/// Checks ran and at least one failed.
struct CheckFailed;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CheckFailed)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let points = parse_points(&text).with_context(|| format!("parsing {}", path.display()))?;
    PointSet::new(points).with_context(|| format!("loading {}", path.display()))
}

fn run(command: Command) -> Result<std::result::Result<(), CheckFailed>> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Gen {
            family,
            n,
            sides,
            scale,
            seed,
            output,
        } => {
            let spec = GenSpec {
                family,
                n,
                scale,
                seed,
                sides,
            };
            let text = format_points(spec.generate()?.points());
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Count {
            file,
            mode,
            enumerate,
            cap,
        } => {
            let m = load(&file)?;
            if enumerate {
                let all = match mode {
                    Mode::Full => enumerate_full(&m, cap)?,
                    Mode::Partial => enumerate_partial(&m, cap)?,
                };
                for t in &all {
                    writeln!(out, "{}", t.to_line())?;
                }
                writeln!(out, "{}", all.len())?;
            } else {
                let c = match mode {
                    Mode::Full => count_full(&m),
                    Mode::Partial => count_partial(&m),
                };
                writeln!(out, "{c}")?;
            }
        }
        Command::Classify { file, json } => {
            let m = load(&file)?;
            let report = classify(&m);
            if json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                writeln!(
                    out,
                    "quasi-convex: {}",
                    if report.is_quasi_convex { "yes" } else { "no" }
                )?;
                for wit in &report.witnesses {
                    match wit.side {
                        Some((q, r)) => {
                            writeln!(out, "point {} close to side {q}-{r}", wit.interior_index)?
                        }
                        None => {
                            writeln!(out, "point {} close to no side", wit.interior_index)?;
                            for f in &wit.failing_apexes {
                                writeln!(
                                    out,
                                    "  side {}-{}: triangle at apex {} misses it",
                                    f.side.0, f.side.1, f.apex
                                )?;
                            }
                        }
                    }
                }
                if let Some(order) = &report.polygon_order {
                    writeln!(out, "polygon order: {}", join(order))?;
                }
            }
        }
        Command::Charvec {
            file,
            apex,
            arms,
            chi,
            line,
            radial,
            center,
            check_psi,
        } => {
            let m = load(&file)?;
            let pts = m.points();
            if radial {
                let Some(c) = center else {
                    bail!("--radial needs --center")
                };
                m.check_index(c)?;
                let others: Vec<usize> = (0..pts.len()).filter(|&i| i != c).collect();
                let frame = build_radial_frame(
                    pts[c].clone(),
                    others.iter().map(|&i| pts[i].clone()).collect(),
                )?;
                let order: Vec<usize> = (0..frame.len())
                    .map(|k| others[frame.input_index(k)])
                    .collect();
                writeln!(out, "order: {}", join(&order))?;
                if check_psi {
                    match psi_injectivity_check(&frame, DEFAULT_PSI_CAP)? {
                        PsiOutcome::Injective { good_polygons } => {
                            writeln!(out, "injective over {good_polygons} good polygons")?;
                        }
                        PsiOutcome::Collision(a, b) => {
                            let map = |v: &[usize]| {
                                join(&v.iter().map(|&k| order[k]).collect::<Vec<_>>())
                            };
                            writeln!(
                                out,
                                "collision: {} and {}",
                                map(a.vertices()),
                                map(b.vertices())
                            )?;
                            out.flush()?;
                            return Ok(Err(CheckFailed));
                        }
                    }
                }
            } else {
                let (Some(a), Some(arms)) = (apex, arms) else {
                    bail!("an angle needs --apex and --arms")
                };
                let [b, c] = arms[..] else {
                    bail!("--arms takes exactly two indices")
                };
                for i in [a, b, c] {
                    m.check_index(i)?;
                }
                if a == b || a == c || b == c {
                    bail!("apex and arms must be distinct points");
                }
                let others: Vec<usize> = (0..pts.len())
                    .filter(|&i| i != a && i != b && i != c)
                    .collect();
                let frame = build_angle_frame(
                    pts[a].clone(),
                    pts[b].clone(),
                    pts[c].clone(),
                    others.iter().map(|&i| pts[i].clone()).collect(),
                )?;
                let order: Vec<usize> = (0..frame.len())
                    .map(|k| others[frame.input_index(k)])
                    .collect();
                if let Some(bits) = chi {
                    let chi: CharVector = bits.parse()?;
                    let poly = polyline_from_charvec(&frame, &chi)?;
                    let mut path = vec![b];
                    path.extend(poly.internal_vertices().iter().map(|&k| order[k]));
                    path.push(c);
                    writeln!(out, "{}", join(&path))?;
                } else if let Some(vertices) = line {
                    let mut pos = Vec::with_capacity(vertices.len());
                    for v in vertices {
                        let k = order
                            .iter()
                            .position(|&i| i == v)
                            .with_context(|| format!("point {v} is not inside the angle"))?;
                        pos.push(k);
                    }
                    pos.sort_unstable();
                    writeln!(out, "{}", charvec_of_polyline(&frame, &Polyline::new(pos))?)?;
                } else {
                    writeln!(out, "order: {}", join(&order))?;
                }
            }
        }
        Command::Catalan { n } => {
            writeln!(out, "c_{n} = {}", catalan(n))?;
            writeln!(out, "W_{} = {}", n + 2, w(n + 2)?)?;
        }
        Command::Verify {
            family,
            input,
            n,
            trials,
            seed,
            scale,
            sides,
            full_suite,
            report,
            cap,
            budget_ms,
            timing,
        } => {
            let source = match (family, input) {
                (Some(family), None) => Source::Family {
                    family,
                    n: n.context("--family needs --n")?,
                    trials,
                    seed,
                    scale,
                    sides,
                },
                (None, Some(pattern)) => {
                    let mut paths = Vec::new();
                    for entry in
                        glob::glob(&pattern).with_context(|| format!("bad glob `{pattern}`"))?
                    {
                        paths.push(entry?);
                    }
                    paths.sort();
                    Source::Files(paths)
                }
                _ => bail!("give exactly one of --family and --input"),
            };
            let config = RunConfig {
                source,
                full_suite,
                suite_seed: seed,
                options: VerifyOptions {
                    cap,
                    budget_ms,
                    timing,
                },
            };
            let corpus = run_corpus(&config)?;
            match report {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    corpus.write_jsonl(&mut w)?;
                    w.flush()?;
                    let s = &corpus.summary;
                    eprintln!(
                        "{} instances: {} checked, {} skipped, {} errors; lower bound failures {}, equality failures {}, suite failures {}",
                        s.instances, s.checked, s.skipped, s.errors, s.lower_bound_failed, s.equality_iff_failed, s.suites_failed
                    );
                }
                None => corpus.write_jsonl(&mut out)?,
            }
            if !corpus.all_passed() {
                out.flush()?;
                return Ok(Err(CheckFailed));
            }
        }
    }
    out.flush()?;
    Ok(Ok(()))
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
