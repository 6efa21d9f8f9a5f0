use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tightmaps_cli::commands::{run, Options, Request};

#[derive(Parser)]
#[command(name = "tightmaps", version, about = "Exact certificates for tight homomorphisms of Hermitian Lie algebras")]
struct Cli {
    /// Emit JSON (the only format; accepted for scripts that pass it).
    #[arg(long, global = true)]
    json: bool,
    /// Include exact matrices (images, block bases) in the report.
    #[arg(long, global = true)]
    matrices: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Expression, e.g. "comp(std(SP_TO_SU,2), rho(2))".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    expr: Option<String>,
    /// Read the expression from a file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl Input {
    fn text(&self) -> Result<String, String> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e)),
            (None, None) => Err("no expression given".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the bracket relations of a map.
    Verify(Input),
    /// Pullback coefficients, tightness and holomorphy.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Exit 1 unless the map is tight.
        #[arg(long)]
        expect_tight: bool,
        /// Exit 1 unless the map is holomorphic.
        #[arg(long)]
        expect_holomorphic: bool,
    },
    /// Decompose the target representation into invariant blocks.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hermitian hull of a tight positive map.
    Hull {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the shapes of tight embeddings into a target, e.g. `enumerate su 3 3`.
    Enumerate {
        family: String,
        params: Vec<usize>,
        /// Largest block or factor parameter.
        #[arg(long)]
        bounds: Option<usize>,
    },
    /// Build the map of a shape literal and check it.
    Realize {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rewrite an algebra along the low-rank isomorphisms.
    Canonicalize(Input),
    /// Embedding diagrams: `so2 P`, `e6` or `e7`.
    Catalog {
        which: String,
        p: Option<usize>,
        /// List the paths between two nodes.
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
}

fn request(cmd: Command) -> Result<Request, String> {
    Ok(match cmd {
        Command::Verify(i) => Request::Verify { expr: i.text()? },
        Command::Certify { input, expect_tight, expect_holomorphic } => {
            Request::Certify { expr: input.text()?, expect_tight, expect_holomorphic }
        }
        Command::Decompose { input, seed } => Request::Decompose { expr: input.text()?, seed },
        Command::Hull { input, seed } => Request::Hull { expr: input.text()?, seed },
        Command::Enumerate { family, params, bounds } => Request::Enumerate { family, params, bounds },
        Command::Realize { input, seed } => Request::Realize { expr: input.text()?, seed },
        Command::Canonicalize(i) => Request::Canonicalize { expr: i.text()? },
        Command::Catalog { which, p, from, to } => Request::Catalog { which, p, from, to },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { matrices: cli.matrices };
    let req = match request(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    match run(&req, &opts) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.document).expect("report serializes");
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{}", text);
            for n in &out.notes {
                eprintln!("{}", n);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
