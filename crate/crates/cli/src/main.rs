mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vrmat_core::acceptance::{run_all, CRITERIA};
use vrmat_core::admissible::{build_admissible, check_admissible, sequence_from_admissible};
use vrmat_core::analysis::{fit_pascal_recurrence, infer_lambda, verify_lambda, Mode};
use vrmat_core::lab::{conjecture1_explore, conjecture2_explore, minpoly_report};
use vrmat_core::ladder::{
    compare_mnt, identity13_check, identity15_check, mnt, mnt2, transfer_polys,
};
use vrmat_core::ltmatrix::{lt_from_json, lt_inverse, lt_pow};
use vrmat_core::sequences::parse_seqspec;
use vrmat_core::vrm::{
    build_vrm, decompose_chain, decompose_step_with, pascal, pascal_func, pascal_kelim, s_matrix,
    toeplitz, toeplitz_block, vrm_inverse,
};
use vrmat_core::{Integer, LtMatrix, Seq, VrmSpec};

use output::{Format, Rendered, Style};

const AFTER_HELP: &str = "\
Sizes are given as --order N, the number of rows. A matrix of order N has
rows 0..N-1, i.e. it is V_n with n = N - 1.

Sequence specs: ones, nat, catalan, const:C, geom:R, binom:C, list:A,B,...

Exit codes: 0 success, 1 a requested check failed, 2 usage error,
3 input or domain error.";

#[derive(Parser)]
#[command(name = "vrmat", version, about = "Exact vertically-recurrent matrices", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Out {
    /// Output format [default: pretty, or json when --out is given]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// A matrix read from JSON, or a vertically-recurrent matrix built on the spot.
#[derive(Args)]
struct Source {
    /// JSON matrix file.
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["seq", "first_col"])]
    input: Option<PathBuf>,
    #[arg(long, value_name = "SEQSPEC", value_parser = parse_seq)]
    seq: Option<Seq>,
    /// Number of rows (n + 1).
    #[arg(long, value_name = "N", value_parser = parse_order)]
    order: Option<usize>,
    /// Explicit column 0, comma separated; its length must equal the order.
    #[arg(
        long = "first-col",
        value_name = "LIST",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    first_col: Option<Vec<Integer>>,
}

#[derive(Args)]
struct SeqOrder {
    #[arg(long, value_name = "SEQSPEC", value_parser = parse_seq)]
    seq: Seq,
    /// Number of rows (n + 1).
    #[arg(long, value_name = "N", value_parser = parse_order)]
    order: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Vrm,
    Pascal,
    PascalFunc,
    PascalKelim,
    S,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    General,
    Verify,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a matrix (vertically-recurrent by default, or a Pascal-family one).
    Build {
        #[arg(long, value_enum, default_value_t = Kind::Vrm)]
        kind: Kind,
        #[arg(long, value_name = "SEQSPEC", value_parser = parse_seq)]
        seq: Option<Seq>,
        /// Number of rows (n + 1).
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        /// Explicit column 0 for a general matrix.
        #[arg(
            long = "first-col",
            value_name = "LIST",
            value_delimiter = ',',
            allow_hyphen_values = true
        )]
        first_col: Option<Vec<Integer>>,
        /// Argument of the Pascal-family kinds.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<Integer>,
        #[command(flatten)]
        out: Out,
    },
    /// Toeplitz matrix of the weights, or the block I_k (+) T_{n-k} with --k.
    Toeplitz {
        #[command(flatten)]
        so: SeqOrder,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Factor V_n into Toeplitz blocks (or one step with --step).
    Factor {
        #[command(flatten)]
        so: SeqOrder,
        /// Single step T_n and [1] (+) V_{n-1}; column 0 is taken to be the weights.
        #[arg(long)]
        step: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Exact integer inverse.
    Inverse {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// m-th power.
    Power {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Detect the associated sequence of a matrix.
    Detect {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        /// Weights to verify against (verify mode).
        #[arg(long, value_name = "SEQSPEC", value_parser = parse_seq)]
        seq: Option<Seq>,
        /// In verify mode, also require column 0 to equal the weights.
        #[arg(long)]
        lambda_column: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Fit a_{i,k} = alpha a_{i-1,k-1} + beta a_{i-1,k}.
    Fit {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Admissible matrices.
    Admissible {
        #[command(subcommand)]
        cmd: AdmissibleCmd,
    },
    /// Ladder-network polynomials and triangles.
    Ladder {
        #[command(subcommand)]
        cmd: LadderCmd,
    },
    /// Explore the open conjectures.
    Conjecture {
        #[command(subcommand)]
        cmd: ConjectureCmd,
    },
    /// Minimal polynomial over F_p, independently re-verified.
    Minpoly {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Corrupt one entry inside criterion ID; that criterion must then fail.
        #[arg(long, value_name = "ID")]
        corrupt: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum AdmissibleCmd {
    /// Admissible matrix of the subdiagonal increments s.
    Build {
        #[command(flatten)]
        so: SeqOrder,
        #[command(flatten)]
        out: Out,
    },
    /// Unit diagonal and inner-product property.
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Recover s from the subdiagonal.
    Extract {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum LadderCmd {
    /// Transfer polynomials T_0..T_n.
    Polys {
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Coefficient triangle of the transfer polynomials.
    Mnt {
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Triangle C(i+2j, 3j+1).
    Mnt2 {
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Compare the triangle with both closed forms.
    Compare {
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Sweep both binomial identities for 1 <= k <= n <= MAX.
    Identities {
        #[arg(long, value_name = "MAX")]
        max: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum ConjectureCmd {
    /// Row-weighted triangle a_{i,k} = alpha a_{i-1,k-1} + alpha_{i-1} a_{i-1,k}.
    #[command(name = "1")]
    One {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Integer,
        /// The row weights alpha_i.
        #[arg(long, value_name = "SEQSPEC", value_parser = parse_seq)]
        seq: Seq,
        /// Number of rows (n + 1), at least 4.
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Two readings of the Catalan triangle.
    #[command(name = "2")]
    Two {
        /// Number of rows (n + 1), at least 5.
        #[arg(long, value_name = "N", value_parser = parse_order)]
        order: usize,
        #[command(flatten)]
        out: Out,
    },
}

fn parse_seq(s: &str) -> Result<Seq, String> {
    parse_seqspec(s).map_err(|e| e.to_string())
}

fn parse_order(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("order must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<vrmat_core::Error> for Failure {
    fn from(e: vrmat_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn read_matrix(path: &PathBuf) -> Result<LtMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    lt_from_json(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn vrm_spec(seq: Seq, first_col: Option<Vec<Integer>>) -> VrmSpec {
    match first_col {
        Some(col) => VrmSpec::general(seq, col),
        None => VrmSpec::strict(seq),
    }
}

impl Source {
    fn matrix(self) -> Result<LtMatrix, Failure> {
        match (self.input, self.seq, self.order) {
            (Some(path), _, _) => read_matrix(&path),
            (None, Some(seq), Some(order)) => {
                Ok(build_vrm(&vrm_spec(seq, self.first_col), order - 1)?)
            }
            _ => Err(Failure::Usage(
                "give --in FILE, or --seq and --order".into(),
            )),
        }
    }
}

impl Out {
    fn format(&self) -> Format {
        self.format.unwrap_or(if self.out.is_some() {
            Format::Json
        } else {
            Format::Pretty
        })
    }
}

fn emit(rendered: &Rendered, out: &Out) -> Result<(), Failure> {
    let text = rendered.text(out.format());
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Domain(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn style(out: &Out) -> Style {
    Style::detect(out.format(), out.out.is_some())
}

fn run(cmd: Cmd) -> Result<bool, Failure> {
    let (rendered, out) = match cmd {
        Cmd::Build {
            kind,
            seq,
            order,
            first_col,
            x,
            out,
        } => {
            let n = order - 1;
            let need_x = || {
                x.clone()
                    .ok_or_else(|| Failure::Usage("this kind needs --x".into()))
            };
            let a = match kind {
                Kind::Vrm => {
                    let seq = seq.ok_or_else(|| Failure::Usage("--kind vrm needs --seq".into()))?;
                    build_vrm(&vrm_spec(seq, first_col), n)?
                }
                Kind::Pascal => pascal(n),
                Kind::PascalFunc => pascal_func(n, &need_x()?),
                Kind::PascalKelim => pascal_kelim(n, &need_x()?),
                Kind::S => s_matrix(n, &need_x()?),
            };
            (output::matrix(&a), out)
        }
        Cmd::Toeplitz { so, k, out } => {
            let n = so.order - 1;
            let a = match k {
                Some(k) => toeplitz_block(&so.seq, n, k)?,
                None => toeplitz(&so.seq, n)?,
            };
            (output::matrix(&a), out)
        }
        Cmd::Factor { so, step, out } => {
            let n = so.order - 1;
            if step {
                let spec = VrmSpec::weights_as_column(so.seq, n)?;
                let (t, shifted) = decompose_step_with(&spec, n)?;
                let labels = [format!("T_{n}"), format!("[1] (+) V_{}", n - 1)];
                (output::matrices(&labels, &[t, shifted]), out)
            } else {
                let factors = decompose_chain(&so.seq, n)?;
                let labels: Vec<String> = (0..factors.len())
                    .map(|k| format!("factor {k}: I_{k} (+) T_{}", n - k))
                    .collect();
                (output::matrices(&labels, &factors), out)
            }
        }
        Cmd::Inverse { src, out } => {
            let inverse = match (&src.input, &src.seq, &src.order, &src.first_col) {
                (None, Some(seq), Some(order), None) => vrm_inverse(seq, order - 1)?,
                _ => lt_inverse(&src.matrix()?)?,
            };
            (output::matrix(&inverse), out)
        }
        Cmd::Power { src, m, out } => (output::matrix(&lt_pow(&src.matrix()?, m)), out),
        Cmd::Detect {
            input,
            mode,
            seq,
            lambda_column,
            out,
        } => {
            let a = read_matrix(&input)?;
            let report = match mode {
                ModeArg::Strict => infer_lambda(&a, Mode::Strict),
                ModeArg::General => infer_lambda(&a, Mode::General),
                ModeArg::Verify => {
                    let seq =
                        seq.ok_or_else(|| Failure::Usage("--mode verify needs --seq".into()))?;
                    verify_lambda(&a, &seq, lambda_column)?
                }
            };
            (output::detection(&report, style(&out)), out)
        }
        Cmd::Fit { input, out } => {
            let report = fit_pascal_recurrence(&read_matrix(&input)?);
            (output::fit(&report, style(&out)), out)
        }
        Cmd::Admissible { cmd } => match cmd {
            AdmissibleCmd::Build { so, out } => (
                output::matrix(&build_admissible(&so.seq, so.order - 1)?),
                out,
            ),
            AdmissibleCmd::Check { input, out } => {
                let report = check_admissible(&read_matrix(&input)?);
                (output::admissible(&report, style(&out)), out)
            }
            AdmissibleCmd::Extract { input, out } => (
                output::integers(&sequence_from_admissible(&read_matrix(&input)?)),
                out,
            ),
        },
        Cmd::Ladder { cmd } => match cmd {
            LadderCmd::Polys { order, out } => (output::transfer(&transfer_polys(order - 1)), out),
            LadderCmd::Mnt { order, out } => (output::matrix(&mnt(order - 1)), out),
            LadderCmd::Mnt2 { order, out } => (output::matrix(&mnt2(order - 1)), out),
            LadderCmd::Compare { order, out } => (
                output::comparison(&compare_mnt(order - 1), style(&out)),
                out,
            ),
            LadderCmd::Identities { max, out } => {
                let reports = [identity13_check(max), identity15_check(max)];
                (output::identities(&reports, style(&out)), out)
            }
        },
        Cmd::Conjecture { cmd } => match cmd {
            ConjectureCmd::One {
                alpha,
                seq,
                order,
                out,
            } => {
                if order < 4 {
                    return Err(Failure::Usage(
                        "conjecture 1 needs --order 4 or more".into(),
                    ));
                }
                let report = conjecture1_explore(&alpha, &seq, order - 1)?;
                (output::conjecture(&report, style(&out)), out)
            }
            ConjectureCmd::Two { order, out } => {
                if order < 5 {
                    return Err(Failure::Usage(
                        "conjecture 2 needs --order 5 or more".into(),
                    ));
                }
                let report = conjecture2_explore(order - 1)?;
                (output::conjecture(&report, style(&out)), out)
            }
        },
        Cmd::Minpoly { src, p, out } => {
            let report = minpoly_report(&src.matrix()?, p)?;
            (output::minpoly(&report, style(&out)), out)
        }
        Cmd::Selftest { corrupt, out } => {
            if let Some(id) = corrupt {
                if !(1..=CRITERIA).contains(&id) {
                    return Err(Failure::Usage(format!(
                        "--corrupt takes 1..={CRITERIA}, got {id}"
                    )));
                }
            }
            let criteria = run_all(corrupt);
            for c in criteria.iter().filter(|c| !c.passed) {
                eprintln!("vrmat: criterion {} ({}) failed", c.id, c.name);
            }
            (output::selftest(&criteria, style(&out)), out)
        }
    };
    emit(&rendered, &out)?;
    Ok(rendered.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("vrmat: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("vrmat: {msg}");
            ExitCode::from(3)
        }
    }
}
