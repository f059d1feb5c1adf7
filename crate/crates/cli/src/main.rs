use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ford_core::ford::Verdict;
use ford_core::report::{
    from_json, log_steps, parse_classes, render_svg, run_analysis, run_homology, run_sweep, to_json, AnalysisReport,
    GeneratorSpec, ScenarioConfig, SweepParameter, DEFAULT_SAFETY,
};

#[derive(Parser)]
#[command(name = "ford", version, about = "Ford domains and tunnel lengths for the (1,2)-compression body")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate, classify and certify one configuration.
    Analyze {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the pipeline along a path of parameter values.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// `t_alpha` (its length) or `epsilon`.
        #[arg(long, default_value = "t_alpha")]
        param: SweepParameter,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of samples, spaced evenly in log scale.
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a report, or a freshly analyzed configuration, as SVG.
    Render {
        #[arg(long, conflicts_with_all = ["config", "target_r"])]
        report: Option<PathBuf>,
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick a cyclic quotient of homology in which no listed class generates.
    Homology {
        /// JSON list of `[a, b]` pairs.
        #[arg(long)]
        classes: PathBuf,
        /// Kernel basis index; larger values give longer slopes.
        #[arg(long, default_value_t = 0)]
        k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// JSON scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use the family member whose tunnel is at least this long.
    #[arg(long = "target-R")]
    target_r: Option<f64>,
    #[arg(long, requires = "target_r")]
    safety: Option<f64>,
    #[arg(long)]
    max_word_len: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    /// Also compare against a sampled visibility check on this grid.
    #[arg(long)]
    grid: Option<usize>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioConfig, String> {
        let mut cfg = match (&self.config, self.target_r) {
            (Some(path), _) => from_json::<ScenarioConfig>(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
            (None, Some(_)) => ScenarioConfig::family(1.0),
            (None, None) => return Err("give --config PATH or --target-R X".to_string()),
        };
        if let Some(r) = self.target_r {
            cfg.generator = GeneratorSpec::target(r, self.safety.unwrap_or(DEFAULT_SAFETY));
        }
        if let Some(n) = self.max_word_len {
            cfg.enumeration.max_word_len = n;
        }
        if let Some(tol) = self.tol {
            cfg.tolerance = tol;
        }
        if let Some(grid) = self.grid {
            cfg.oracle_grid = Some(grid);
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_code(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Inconclusive => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}

fn summarize(report: &AnalysisReport) {
    eprint!("{}: {} visible of {} spheres", report.verdict(), report.visible_spheres().count(), report.spheres.len());
    if let Some(t) = &report.tunnel {
        eprint!(", tunnel length >= {:.12}", t.length);
    }
    if let Some(w) = &report.certificate.indiscreteness {
        eprint!(", witness {} with radius {} > {}", w.word, w.radius, w.min_translation_length);
    }
    eprintln!();
    for d in &report.certificate.diagnostics {
        eprintln!("  {d}");
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { scenario, out, svg } => {
            let cfg = scenario.load()?;
            let started = Instant::now();
            let report = run_analysis(&cfg).map_err(|e| e.to_string())?;
            summarize(&report);
            eprintln!("  finished in {:.3} s", started.elapsed().as_secs_f64());
            emit(out.as_ref(), &to_json(&report).map_err(|e| e.to_string())?)?;
            if let Some(path) = svg {
                write(&path, &render_svg(&report))?;
            }
            Ok(verdict_code(report.verdict()))
        }
        Command::Sweep { scenario, param, from, to, steps, out } => {
            let cfg = scenario.load()?;
            if !(from > 0.0 && to > 0.0) {
                return Err("sweep endpoints must be positive".to_string());
            }
            let report = run_sweep(&cfg, param, &log_steps(from, to, steps));
            for row in &report.rows {
                let length = row.tunnel_length.map(|l| format!("{l:.6}")).unwrap_or_else(|| "-".to_string());
                let mark = if row.transition { "  <- transition" } else { "" };
                eprintln!("{param} = {:<12.6} {:<20} {length}{mark}", row.parameter, row.verdict.to_string());
            }
            match report.bracket {
                Some([a, b]) => eprintln!("transition bracketed by {param} in [{}, {}]", a.min(b), a.max(b)),
                None => eprintln!("no transition"),
            }
            emit(out.as_ref(), &to_json(&report).map_err(|e| e.to_string())?)?;
            let inconclusive = report.rows.iter().any(|r| r.verdict == Verdict::Inconclusive);
            Ok(if inconclusive { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Render { report, scenario, svg, out } => {
            let report = match report {
                Some(path) => from_json::<AnalysisReport>(&read(&path)?).map_err(|e| format!("{}: {e}", path.display()))?,
                None => run_analysis(&scenario.load()?).map_err(|e| e.to_string())?,
            };
            emit(svg.as_ref().or(out.as_ref()), &render_svg(&report))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Homology { classes, k, out } => {
            let parsed = parse_classes(&read(&classes)?).map_err(|e| format!("{}: {e}", classes.display()))?;
            let report = run_homology(&parsed, k).map_err(|e| e.to_string())?;
            if let Some(m) = report.basis_change {
                eprintln!("changed basis by {m:?} so that no class has zero first coordinate");
            }
            eprintln!("n = {}", report.n);
            emit(out.as_ref(), &to_json(&report).map_err(|e| e.to_string())?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
