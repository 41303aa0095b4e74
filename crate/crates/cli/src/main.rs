use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use qlinset::criteria::{check_e_relations, classify};
use qlinset::imageset::{direction_bounds, image_of_ratio, survey_image_sizes, SurveyMode};
use qlinset::verify::{run_suite, Suite, SuiteOptions, SuiteReport, SurveyRecord, VerifyError};
use qlinset::{FieldCtx, QPoly};

const OUT_DIR_ENV: &str = "QLINSET_OUT_DIR";

const EXIT_FALSIFIED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qlinset",
    version,
    about = "Image sets of q-polynomials and linear sets of PG(1, q^n)"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field as `p,h,n` for F_{q^n} with q = p^h.
    #[arg(long)]
    field: Option<String>,
    /// Modulus coefficients over F_p, lowest degree first.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the field construction.
    Field {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Size of Im(f(x)/x), the direction window and the field of linearity.
    Image {
        #[command(flatten)]
        field: FieldArgs,
        /// Coefficients `a0,...,a{n-1}` in `0`/`g^k` notation.
        f: String,
        /// Also list the image elements.
        #[arg(long)]
        elements: bool,
    },
    /// Explain why two polynomials have the same image.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        f: String,
        g: String,
    },
    /// Run a verification suite and write its JSON report.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
        /// Test every admissible mu instead of a sample.
        #[arg(long)]
        all_mu: bool,
    },
    /// Histogram of image sizes over strictly F_q-linear polynomials, as CSV.
    Survey {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    #[arg(long)]
    samples: Option<u64>,
    /// Output file; defaults to `$QLINSET_OUT_DIR/<name>` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FieldArgs {
    fn build(&self, default: (u32, u32, u32)) -> Result<FieldCtx> {
        let (p, h, n) = match &self.field {
            Some(s) => parse_field(s)?,
            None => default,
        };
        let ctx = match &self.modulus {
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .with_context(|| format!("bad modulus {m:?}"))?;
                FieldCtx::with_modulus(p, h, n, &coeffs)?
            }
            None => FieldCtx::new(p, h, n)?,
        };
        Ok(ctx)
    }

    fn require(&self) -> Result<FieldCtx> {
        if self.field.is_none() {
            bail!("--field p,h,n is required");
        }
        self.build((0, 0, 0))
    }
}

fn parse_field(s: &str) -> Result<(u32, u32, u32)> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad field {s:?}; expected p,h,n"))?;
    match parts[..] {
        [p, h, n] => Ok((p, h, n)),
        _ => bail!("bad field {s:?}; expected p,h,n"),
    }
}

fn resolve_out(out: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
    out.clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| Path::new(&d).join(name)))
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn write_survey_csv(rows: &[SurveyRecord], path: &Path) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_field(ctx: &FieldCtx) -> Result<u8> {
    print!(
        "{}",
        pretty(&json!({
            "field": ctx.spec_string(),
            "p": ctx.p(),
            "h": ctx.h(),
            "n": ctx.n(),
            "q": ctx.q(),
            "order": ctx.order(),
            "modulus": ctx.modulus(),
        }))
    );
    Ok(0)
}

fn cmd_image(ctx: &FieldCtx, f: &str, elements: bool) -> Result<u8> {
    let f = QPoly::parse(ctx, f)?;
    let im = image_of_ratio(&f);
    let (lo, hi) = direction_bounds(ctx);
    let strict = f.is_strictly_fq_linear();
    let mut report = json!({
        "field": ctx.spec_string(),
        "f": f.to_string(),
        "size": im.len(),
        "window": [lo, hi],
        "strictly_fq_linear": strict,
        "max_field_of_linearity": f.max_field_of_linearity().ok(),
    });
    if !strict {
        report["note"] = json!("not strictly F_q-linear; the window does not apply");
    }
    if elements {
        report["elements"] = json!(im.to_vec());
    }
    print!("{}", pretty(&report));
    Ok(0)
}

fn cmd_classify(ctx: &FieldCtx, f: &str, g: &str) -> Result<u8> {
    let f = QPoly::parse(ctx, f)?;
    let g = QPoly::parse(ctx, g)?;
    let outcome = classify(&f, &g)?;
    let mut report = json!({
        "field": ctx.spec_string(),
        "f": f.to_string(),
        "g": g.to_string(),
        "outcome": outcome,
    });
    if ctx.n() == 5 {
        report["e_relations"] = json!(check_e_relations(&f, &g)?);
    }
    print!("{}", pretty(&report));
    Ok(if outcome.is_inconsistent() {
        EXIT_FALSIFIED
    } else {
        0
    })
}

fn cmd_verify(ctx: &FieldCtx, suite: Suite, run: &RunArgs, all_mu: bool) -> Result<u8> {
    let opts = SuiteOptions {
        seed: run.seed,
        samples: run.samples,
        exhaustive: run.exhaustive,
        all_mu,
    };
    let report: SuiteReport = match run_suite(suite, ctx, &opts) {
        Ok(r) => r,
        Err(e) if e.is_guard() => {
            eprintln!("guard: {e}");
            return Ok(EXIT_GUARD);
        }
        Err(e @ VerifyError::UnsupportedField { .. }) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
        Err(e) => return Err(e.into()),
    };
    let path = resolve_out(&run.out, &format!("{suite}.json"));
    emit(&pretty(&report), path.as_deref())?;
    if let (Some(rows), Some(p)) = (&report.survey, &path) {
        write_survey_csv(rows, &p.with_extension("csv"))?;
    }
    for c in &report.checks {
        eprintln!(
            "{} {} ({} instances, {} failures)",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.instances,
            c.failures
        );
    }
    Ok(if report.passed { 0 } else { EXIT_FALSIFIED })
}

fn cmd_survey(ctx: &FieldCtx, run: &RunArgs) -> Result<u8> {
    let mode = match (run.exhaustive, run.samples) {
        (_, Some(count)) => SurveyMode::Sample {
            count,
            seed: run.seed,
        },
        _ => SurveyMode::Exhaustive,
    };
    let survey = match survey_image_sizes(ctx, mode) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("guard: {e}");
            return Ok(EXIT_GUARD);
        }
    };
    let rows = SurveyRecord::from_survey(&survey);
    match resolve_out(&run.out, "survey.csv") {
        Some(p) => write_survey_csv(&rows, &p)?,
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    match cli.cmd {
        Command::Field { field } => cmd_field(&field.require()?),
        Command::Image { field, f, elements } => cmd_image(&field.require()?, &f, elements),
        Command::Classify { field, f, g } => cmd_classify(&field.require()?, &f, &g),
        Command::Verify {
            field,
            suite,
            run,
            all_mu,
        } => cmd_verify(&field.build(suite.default_field())?, suite, &run, all_mu),
        Command::Survey { field, run } => cmd_survey(&field.require()?, &run),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
