use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cremona::pipeline::{run_pipeline, Mode};
use cremona::report::{
    classify_document, threshold_document, verify_document, OptionOverrides, ReportDocument, SurfaceDescriptor,
};
use cremona::Error;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "cremona", version, about = "Linearize rational surfaces of degree at most four by Cremona transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect which construction applies to a surface.
    Classify(RunArgs),
    /// Build the chain of maps and its certificates.
    Linearize(RunArgs),
    /// Effective threshold of a class on a catalog model.
    Threshold(ThresholdArgs),
    /// Re-check a report against fresh samples.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Certificate,
}

#[derive(Args)]
struct RunArgs {
    /// Surface descriptor (JSON).
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// One of p3, blowup-p3-pt, p1xp2, wps1112, quadric-cone-q4.
    #[arg(long)]
    model: String,
    /// Comma-separated coordinates, e.g. `3,2`.
    #[arg(long, allow_hyphen_values = true)]
    class: String,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// A report produced by `linearize`; when absent the pipeline is run first.
    #[arg(long)]
    report: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> OptionOverrides {
        OptionOverrides {
            prime: self.prime,
            seed: self.seed,
            samples: self.samples,
            mode: self.mode.map(|m| match m {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Certificate => Mode::Certificate,
            }),
        }
    }

    fn descriptor(&self) -> Result<SurfaceDescriptor, Error> {
        let src = fs::read_to_string(&self.input)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", self.input.display())))?;
        SurfaceDescriptor::from_json(&src)
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn exit_for(success: bool) -> u8 {
    if success {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Classify(args) => {
            let input = args.descriptor()?.to_input(&args.overrides())?;
            let doc = classify_document(&input);
            emit(&to_json(&doc), args.output.as_ref())?;
            for n in &doc.notes {
                eprintln!("note: {n}");
            }
            Ok(exit_for(doc.status == "classified"))
        }
        Command::Linearize(args) => {
            let input = args.descriptor()?.to_input(&args.overrides())?;
            let doc = ReportDocument::from_report(&run_pipeline(&input)?);
            emit(&doc.to_json(), args.output.as_ref())?;
            Ok(exit_for(doc.is_success()))
        }
        Command::Threshold(args) => {
            let doc = threshold_document(&args.model, &args.class)?;
            emit(&to_json(&doc), args.output.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let input = args.run.descriptor()?.to_input(&args.run.overrides())?;
            let doc = match &args.report {
                Some(path) => {
                    let src = fs::read_to_string(path)
                        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
                    ReportDocument::from_json(&src)?
                }
                None => ReportDocument::from_report(&run_pipeline(&input)?),
            };
            let out = verify_document(&input, &doc, input.options.samples)?;
            emit(&to_json(&out), args.run.output.as_ref())?;
            Ok(exit_for(out.verified))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
