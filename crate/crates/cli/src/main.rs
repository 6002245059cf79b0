use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use autocell::christol::kernel_system;
use autocell::engine::{column_stream, guess_dfao, rewind, simulate, Guess};
use autocell::normalizer::{is_embeddable, swap_with_zero};
use autocell::render::{digit_grid, pgm, RenderOptions};
use autocell::synthesizer::{compile, CaSpec, WrappedCa, COMPILE_PREFIX, INVERTIBLE_SEARCH};
use autocell::{normalize, normalize_invertible, verify_equation, Dfao, FieldElem, OreEquation, SeqPrefix};

#[derive(Parser)]
#[command(name = "autocell", version, about = "Linear cellular automata containing automatic sequences as columns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EquationChoice {
    /// Use this equation for the generating series instead of the kernel one.
    #[arg(long)]
    equation: Option<PathBuf>,
    /// Choose the shift so that the automaton can be run backward.
    #[arg(long)]
    invertible: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel system and algebraic equation of an automatic sequence.
    Christol {
        dfao: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Normalization chain of the equation.
    Normalize {
        dfao: PathBuf,
        #[command(flatten)]
        choice: EquationChoice,
    },
    /// Build the cellular automaton spec.
    Compile {
        dfao: PathBuf,
        #[command(flatten)]
        choice: EquationChoice,
        /// Compare the target column with the sequence for this many terms.
        #[arg(long)]
        check: Option<usize>,
        /// Move the sequence to this column.
        #[arg(long, allow_negative_numbers = true)]
        column: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Rows of the spacetime diagram as digits.
    Simulate {
        spec: PathBuf,
        #[arg(long, default_value_t = 64)]
        rows: usize,
        /// Inclusive column range `a:b`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare a column with an automaton.
    Verify {
        spec: PathBuf,
        dfao: PathBuf,
        #[arg(long, default_value_t = 4096)]
        rows: usize,
    },
    /// Plain graymap of the spacetime diagram.
    Render {
        spec: PathBuf,
        #[arg(long, default_value_t = 256)]
        rows: usize,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Highlighted column; defaults to the spec's target column.
        #[arg(long, allow_negative_numbers = true)]
        column: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Extend an invertible spec backward; the result starts `steps` rows earlier.
    Invert {
        spec: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Label of the first row of the window to extend; defaults to 1 for
        /// synthesized specs and to the first initial row otherwise.
        #[arg(long, allow_negative_numbers = true)]
        from: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Memoryless automaton over tuples of rows.
    Wrap {
        spec: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Guess an automaton for a column.
    Guess {
        spec: PathBuf,
        #[arg(long, default_value_t = 4096)]
        rows: usize,
        #[arg(long, allow_negative_numbers = true)]
        column: Option<i64>,
        /// Numeration base; defaults to the field characteristic.
        #[arg(long)]
        base: Option<u32>,
        #[arg(long, default_value_t = 1024)]
        horizon: usize,
        #[command(flatten)]
        output: Output,
    },
}

enum Outcome {
    Ok,
    Mismatch,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_dfao(path: &Path) -> Result<Dfao> {
    Dfao::parse(&read(path)?).with_context(|| format!("parsing automaton {}", path.display()))
}

fn load_spec(path: &Path) -> Result<CaSpec> {
    CaSpec::parse(&read(path)?).with_context(|| format!("parsing spec {}", path.display()))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| anyhow!("window must look like `a:b`, got `{s}`"))?;
    let a: i64 = a.trim().parse().with_context(|| format!("bad window start `{a}`"))?;
    let b: i64 = b.trim().parse().with_context(|| format!("bad window end `{b}`"))?;
    if a > b {
        bail!("window {a}:{b} is empty");
    }
    Ok((a, b))
}

fn window_or_default(window: &Option<String>, column: i64, rows: usize) -> Result<(i64, i64)> {
    match window {
        Some(w) => parse_window(w),
        None => Ok((column - rows as i64, column + rows as i64)),
    }
}

fn load_equation(dfao: &Dfao, path: &Path) -> Result<OreEquation> {
    let eq = OreEquation::parse(dfao.ctx(), &read(path)?)
        .with_context(|| format!("parsing equation {}", path.display()))?;
    Ok(eq)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Christol { dfao, output } => {
            let d = load_dfao(&dfao)?;
            let sys = kernel_system(&d).context("christol: kernel system")?;
            let eq = autocell::algebraic_equation(&d).context("christol: relation")?;
            emit(&output, &format!("{sys}\n{eq} = 0\n"))?;
        }
        Command::Normalize { dfao, choice } => {
            let d = load_dfao(&dfao)?;
            let eq = match &choice.equation {
                Some(p) => load_equation(&d, p)?,
                None => autocell::algebraic_equation(&d).context("christol")?,
            };
            let s = d.prefix(COMPILE_PREFIX);
            let neq = if choice.invertible {
                normalize_invertible(&eq, &s, INVERTIBLE_SEARCH)
            } else {
                normalize(&eq, &s)
            }
            .with_context(|| format!("normalizer: equation `{eq}`"))?;
            println!("equation  {eq} = 0");
            println!("reduced   {} = 0", neq.reduced);
            println!("stripped  {} = 0  (r* = {})", neq.stripped, neq.r_star);
            println!("P         {}", neq.p);
            println!("r = {}  d = {}  m = {}  memory = {}", neq.r, neq.d, neq.m, neq.d + neq.r + 1);
            let consumed: Vec<String> = neq.consumed.iter().map(|&v| d.ctx().fmt_elem(v)).collect();
            println!("consumed  {}", consumed.join(" "));
            println!("embeddable {}", is_embeddable(&neq));
        }
        Command::Compile { dfao, choice, check, column, output } => {
            let d = load_dfao(&dfao)?;
            let eq = choice.equation.as_deref().map(|p| load_equation(&d, p)).transpose()?;
            if let Some(e) = &eq {
                if !verify_equation(e, &d.prefix(COMPILE_PREFIX)) {
                    bail!("christol: `{e}` is not satisfied by the sequence of {}", dfao.display());
                }
            }
            let c = compile(&d, eq.as_ref(), choice.invertible).context("compile")?;
            let mut spec = c.spec;
            if let Some(m) = column {
                spec = spec.translate(m);
            }
            eprintln!("P = {}", c.normalized.p);
            eprintln!("r = {}  d = {}  memory = {}", c.normalized.r, c.normalized.d, spec.memory());
            if let Some(a) = spec.relabel {
                eprintln!("relabel: {} swapped with 0", d.ctx().fmt_elem(a));
            }
            emit(&output, &spec.to_text())?;
            if let Some(n) = check {
                let col = column_stream(&spec, spec.target_column, n);
                let want = expected(&d, spec.relabel, n);
                if let Some(i) = (0..n).find(|&i| col[i] != want[i]) {
                    eprintln!("check FAILED at n = {i}");
                    return Ok(Outcome::Mismatch);
                }
                eprintln!("check passed for {n} terms");
            }
        }
        Command::Simulate { spec, rows, window, output } => {
            let ca = load_spec(&spec)?;
            if rows == 0 {
                bail!("--rows must be positive");
            }
            let w = window_or_default(&window, ca.target_column, rows)?;
            let diag = simulate(&ca, rows);
            emit(&output, &digit_grid(&diag, w)?)?;
        }
        Command::Verify { spec, dfao, rows } => {
            let d = load_dfao(&dfao)?;
            let text = read(&spec)?;
            let is_wrapped = text.lines().any(|l| l.trim_start().starts_with("wrapped"));
            let (col, zero_col, relabel) = if is_wrapped {
                let w = WrappedCa::parse(&text).with_context(|| format!("parsing wrapped spec {}", spec.display()))?;
                (w.column(w.target_column, rows), None, w.relabel)
            } else {
                let ca = CaSpec::parse(&text).with_context(|| format!("parsing spec {}", spec.display()))?;
                let zero = ca.provenance.is_some().then(|| column_stream(&ca, ca.target_column + 1, rows));
                (column_stream(&ca, ca.target_column, rows), zero, ca.relabel)
            };
            let want = expected(&d, relabel, rows);
            let mut ok = true;
            match (0..rows).find(|&i| col[i] != want[i]) {
                Some(i) => {
                    ok = false;
                    println!(
                        "column: FAIL at index {i} (diagram {}, automaton {})",
                        d.ctx().fmt_elem(col[i]),
                        d.ctx().fmt_elem(want[i])
                    );
                }
                None => println!("column: PASS for {rows} terms"),
            }
            if let Some(z) = zero_col {
                match z.iter().position(|v| !v.is_zero()) {
                    Some(i) => {
                        ok = false;
                        println!("zero column: FAIL at index {i}");
                    }
                    None => println!("zero column: PASS"),
                }
            }
            if !ok {
                return Ok(Outcome::Mismatch);
            }
        }
        Command::Render { spec, rows, window, column, output } => {
            let ca = load_spec(&spec)?;
            if rows == 0 {
                bail!("--rows must be positive");
            }
            let c = column.unwrap_or(ca.target_column);
            let mut opts = RenderOptions::new(window_or_default(&window, c, rows)?);
            opts.highlight_column = Some(c);
            let diag = simulate(&ca, rows);
            emit(&output, &pgm(&diag, &opts)?)?;
        }
        Command::Invert { spec, steps, from, output } => {
            let ca = load_spec(&spec)?;
            let from = from.unwrap_or(if ca.provenance.is_some() { 1 } else { ca.first_label });
            let out = rewind(&ca, from, steps).context("invert")?;
            emit(&output, &out.to_text())?;
        }
        Command::Wrap { spec, output } => {
            let ca = load_spec(&spec)?;
            emit(&output, &autocell::wrap_memoryless(&ca).to_text())?;
        }
        Command::Guess { spec, rows, column, base, horizon, output } => {
            let ca = load_spec(&spec)?;
            let c = column.unwrap_or(ca.target_column);
            let s = SeqPrefix::new(&ca.ctx, column_stream(&ca, c, rows), autocell::Origin::CaColumn);
            let k = base.unwrap_or(ca.ctx.p());
            match guess_dfao(&s, k, horizon) {
                Guess::Found(cand) => {
                    eprintln!(
                        "candidate with {} states, consistent with {} terms (heuristic)",
                        cand.dfao.num_states(),
                        cand.prefix_len
                    );
                    emit(&output, &cand.dfao.to_text())?;
                }
                Guess::NoCandidate(why) => {
                    eprintln!("no candidate: {why}");
                    return Ok(Outcome::Mismatch);
                }
            }
        }
    }
    Ok(Outcome::Ok)
}

fn expected(d: &Dfao, relabel: Option<FieldElem>, n: usize) -> Vec<FieldElem> {
    let vals = d.prefix(n).values;
    match relabel {
        Some(a) => vals.into_iter().map(swap_with_zero(a)).collect(),
        None => vals,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
