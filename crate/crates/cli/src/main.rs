//! `expocon`: generate, solve and verify order conditions from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use expocon::orderconds::{condition_residuals, CONDITION_TOL};
use expocon::polyring::{format_rational, rational_to_f64};
use expocon::schemes::CATALOG_NAMES;
use expocon::{
    catalog, coeff_right_factors, coeff_word, gauss_rule, gauss_substitute, generate_conditions, leading_error, lem,
    lem_lower_bound, lyndon_words, newton_solve, standard_bracketing, transform_matrix, Alphabet, BasisChoice,
    ExactKind, NewtonConfig, OrderConditionSystem, Rational, Scheme, Word,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "expocon", version, about = "Order conditions for splitting and Magnus-type integrators")]
struct Cli {
    /// Machine-readable output, including errors.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lyndon words of a grade, their standard bracketings, or the matrix T_q.
    Lyndon {
        /// `ab` or `magnus:K`.
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        grade: u32,
        #[arg(long, conflicts_with = "matrix")]
        basis: bool,
        #[arg(long)]
        matrix: bool,
    },
    /// Coefficient of a word in a scheme.
    Coeff {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        word: String,
        /// Also report every right factor of the word.
        #[arg(long)]
        right_factors: bool,
    },
    /// Polynomial order conditions of a parametrized scheme.
    Conditions {
        #[arg(long)]
        scheme: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        order: u32,
        /// Extra condition, e.g. for a higher-grade error term; repeatable.
        #[arg(long = "add-word")]
        add_word: Vec<String>,
        /// Write the system as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Real solutions of a condition system by damped Newton with restarts.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
    },
    /// Leading local error term and its norm.
    Error {
        #[arg(long)]
        scheme: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Basis::Lyndon)]
        basis: Basis,
    },
    /// Lower bound on the local error measure of a Magnus integrator.
    LemBound {
        #[arg(long)]
        order: u32,
        /// Largest generator used by the scheme; defaults to order/2.
        #[arg(long)]
        max_generator: Option<u32>,
    },
    /// Gauss-Legendre substitution of the generators.
    Substitute {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        gauss: u32,
    },
    /// Residuals of all order conditions up to the given order.
    Verify {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        order: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Split,
    Magnus,
}

impl From<Kind> for ExactKind {
    fn from(k: Kind) -> ExactKind {
        match k {
            Kind::Split => ExactKind::Splitting,
            Kind::Magnus => ExactKind::Magnus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Lyndon,
    Rightnormed5,
}

#[derive(Debug)]
enum CliError {
    Lib(expocon::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<expocon::Error> for CliError {
    fn from(e: expocon::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::Lib(e) => format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect(),
            CliError::Io(..) => "Io".into(),
            CliError::Usage(_) => "Usage".into(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(p, e) => format!("{}: {e}", p.display()),
            CliError::Usage(m) => m.clone(),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    /// False when the command ran but its check failed.
    ok: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, ok: true }
    }
}

/// 17 significant digits, positional notation where reasonable.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..17).contains(&e) {
        format!("{:.*}", (16 - e) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_scheme(name: &str) -> Result<Scheme, CliError> {
    if CATALOG_NAMES.contains(&name) {
        return Ok(catalog(name)?);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(expocon::Error::UnknownScheme(name.to_string()).into());
    }
    Ok(Scheme::from_json(&read(path)?)?)
}

fn parse_alphabet(s: &str) -> Result<Alphabet, CliError> {
    match s.split_once(':') {
        None if s.eq_ignore_ascii_case("ab") => Ok(Alphabet::splitting()),
        Some((m, k)) if m.eq_ignore_ascii_case("magnus") => match k.parse::<u8>() {
            Ok(k) if k > 0 => Ok(Alphabet::magnus(k)),
            _ => Err(CliError::Usage(format!("bad generator count `{k}`"))),
        },
        _ => Err(CliError::Usage(format!("alphabet must be `ab` or `magnus:K`, got `{s}`"))),
    }
}

fn cmd_lyndon(alphabet: &str, grade: u32, basis: bool, matrix: bool) -> Result<Output, CliError> {
    let alphabet = parse_alphabet(alphabet)?;
    let words = lyndon_words(alphabet, grade).words;
    let names: Vec<String> = words.iter().map(Word::to_string).collect();
    if matrix {
        let t = transform_matrix(grade, alphabet);
        let entries: Vec<Vec<String>> = t.entries.iter().map(|r| rationals(r)).collect();
        let mut text = String::new();
        for (w, row) in names.iter().zip(&entries) {
            writeln!(text, "{w:>16}  {}", row.join(" ")).unwrap();
        }
        return Ok(Output::new(json!({ "grade": grade, "words": names, "matrix": entries }), text));
    }
    if basis {
        let brackets: Vec<String> = words
            .iter()
            .map(|w| Ok(standard_bracketing(w)?.to_string_in(alphabet.kind)))
            .collect::<Result<_, expocon::Error>>()?;
        let text = names.iter().zip(&brackets).map(|(w, b)| format!("{w}  {b}\n")).collect();
        let items: Vec<Value> = names.iter().zip(&brackets).map(|(w, b)| json!({ "word": w, "bracket": b })).collect();
        return Ok(Output::new(json!({ "grade": grade, "basis": items }), text));
    }
    let text = names.iter().map(|w| format!("{w}\n")).collect();
    Ok(Output::new(json!({ "grade": grade, "words": names }), text))
}

fn cmd_coeff(scheme: &str, word: &str, right_factors: bool) -> Result<Output, CliError> {
    let s = load_scheme(scheme)?;
    let w = Word::parse(word, s.alphabet.kind)?;
    let x = s.to_expr();
    let pairs = if right_factors { coeff_right_factors(&w, &x)? } else { vec![(w.clone(), coeff_word(&w, &x)?)] };
    let text = pairs.iter().map(|(v, c)| format!("{v}  {c}\n")).collect();
    let items: Vec<Value> =
        pairs.iter().map(|(v, c)| json!({ "word": v.to_string(), "coefficient": c.to_string() })).collect();
    Ok(Output::new(json!({ "coefficients": items }), text))
}

fn cmd_conditions(
    scheme: &str,
    kind: Kind,
    order: u32,
    extra: &[String],
    out: Option<&Path>,
) -> Result<Output, CliError> {
    let s = load_scheme(scheme)?;
    let mut sys = generate_conditions(&s, kind.into(), order)?;
    for w in extra {
        sys.add_condition(&s, &Word::parse(w, s.alphabet.kind)?)?;
    }
    let file = sys.to_json();
    if let Some(path) = out {
        std::fs::write(path, &file).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    let mut text = String::new();
    writeln!(text, "{} conditions in {} parameters", sys.len(), sys.parameters.len()).unwrap();
    for c in &sys.conditions {
        writeln!(text, "{}: {} = 0", c.word, c.polynomial).unwrap();
    }
    let json: Value = serde_json::from_str(&file).expect("system JSON is valid");
    Ok(Output::new(json, text))
}

fn cmd_solve(system: &Path, seed: u64, restarts: usize, tol: f64) -> Result<Output, CliError> {
    let sys = OrderConditionSystem::from_json(&read(system)?)?;
    let cfg = NewtonConfig { max_restarts: restarts, seed, tol, ..Default::default() };
    let sols = newton_solve(&sys.to_poly_system(), &cfg);
    let mut text = format!("{} distinct real solutions\n", sols.len());
    for (i, s) in sols.iter().enumerate() {
        writeln!(text, "solution {} (residual {:e}, restart {})", i + 1, s.residual_norm, s.restarts_used).unwrap();
        for (k, v) in &s.point {
            writeln!(text, "  {k} = {}", fmt_f64(*v)).unwrap();
        }
    }
    let json = json!({ "seed": seed, "restarts": restarts, "solutions": sols });
    Ok(Output::new(json, text))
}

fn cmd_error(scheme: &str, kind: Kind, order: u32, basis: Basis) -> Result<Output, CliError> {
    let s = load_scheme(scheme)?;
    let choice = match basis {
        Basis::Lyndon => BasisChoice::Lyndon,
        Basis::Rightnormed5 => BasisChoice::RightNormed5,
    };
    let t = leading_error(&s, kind.into(), order, &choice)?;
    let value = lem(&t);
    let words: Vec<String> = t.lyndon_words.iter().map(Word::to_string).collect();
    let basis: Vec<String> = t.basis.iter().map(|b| b.to_string_in(t.kind)).collect();
    let mut text = format!("grade {} word coefficients\n", t.grade);
    for (w, c) in words.iter().zip(&t.lyndon_coeffs) {
        writeln!(text, "  {w}  {}", format_rational(c)).unwrap();
    }
    writeln!(text, "basis coefficients").unwrap();
    for (b, c) in basis.iter().zip(&t.basis_coeffs) {
        writeln!(text, "  {b}  {}", format_rational(c)).unwrap();
    }
    writeln!(text, "LEM {}", fmt_f64(value)).unwrap();
    let json = json!({
        "grade": t.grade,
        "words": words,
        "word_coefficients": rationals(&t.lyndon_coeffs),
        "basis": basis,
        "basis_coefficients": rationals(&t.basis_coeffs),
        "lem": value,
    });
    Ok(Output::new(json, text))
}

fn cmd_lem_bound(order: u32, max_generator: Option<u32>) -> Result<Output, CliError> {
    let d_max = max_generator.unwrap_or(order / 2);
    let value = lem_lower_bound(order, d_max)?;
    let text = format!("LEM >= {}\n", fmt_f64(value));
    Ok(Output::new(json!({ "order": order, "max_generator": d_max, "bound": value }), text))
}

fn cmd_substitute(scheme: &str, gauss: u32) -> Result<Output, CliError> {
    let s = load_scheme(scheme)?;
    let rule = gauss_rule(gauss)?;
    let sub = gauss_substitute(&s, &rule)?;
    let nodes = rule.nodes_f64();
    let mut text = String::new();
    writeln!(text, "nodes   {}", nodes.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ")).unwrap();
    writeln!(text, "weights {}", rule.weights_f64().iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ")).unwrap();
    let mut rows = Vec::new();
    for (j, r) in sub.rows.iter().enumerate() {
        let a = r.linear_f64();
        let pairs: Vec<Vec<f64>> = r.pairs.iter().map(|row| row.iter().map(rational_to_f64).collect()).collect();
        writeln!(text, "exp {}: a = {}", j + 1, a.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ")).unwrap();
        if r.has_commutators() {
            for (k, row) in pairs.iter().enumerate() {
                for (m, d) in row.iter().enumerate().skip(k + 1) {
                    writeln!(text, "  [X{}, X{}] {}", k + 1, m + 1, fmt_f64(*d)).unwrap();
                }
            }
            if let Some((b1, b2)) = r.three_node_b() {
                writeln!(text, "  b1 = {}  b2 = {}", fmt_f64(b1), fmt_f64(b2)).unwrap();
            }
        }
        rows.push(json!({ "a": a, "commutators": pairs }));
    }
    let json = json!({ "order": gauss, "nodes": nodes, "weights": rule.weights_f64(), "rows": rows });
    Ok(Output::new(json, text))
}

fn cmd_verify(scheme: &str, order: u32) -> Result<Output, CliError> {
    let s = load_scheme(scheme)?;
    let residuals = condition_residuals(&s, ExactKind::of(s.alphabet.kind), order)?;
    let mut text = String::new();
    let mut worst = 0.0f64;
    let mut items = Vec::new();
    for (w, r) in &residuals {
        let x = rational_to_f64(r).abs();
        worst = worst.max(x);
        writeln!(text, "{w}  {x:e}").unwrap();
        items.push(json!({ "word": w.to_string(), "residual": x }));
    }
    let ok = worst <= CONDITION_TOL;
    writeln!(text, "max residual {worst:e}: {}", if ok { "ok" } else { "FAILED" }).unwrap();
    let json =
        json!({ "order": order, "tolerance": CONDITION_TOL, "max_residual": worst, "ok": ok, "residuals": items });
    Ok(Output { json, text, ok })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Lyndon { alphabet, grade, basis, matrix } => cmd_lyndon(alphabet, *grade, *basis, *matrix),
        Command::Coeff { scheme, word, right_factors } => cmd_coeff(scheme, word, *right_factors),
        Command::Conditions { scheme, kind, order, add_word, out } => {
            cmd_conditions(scheme, *kind, *order, add_word, out.as_deref())
        }
        Command::Solve { system, seed, restarts, tol } => cmd_solve(system, *seed, *restarts, *tol),
        Command::Error { scheme, kind, order, basis } => cmd_error(scheme, *kind, *order, *basis),
        Command::LemBound { order, max_generator } => cmd_lem_bound(*order, *max_generator),
        Command::Substitute { scheme, gauss } => cmd_substitute(scheme, *gauss),
        Command::Verify { scheme, order } => cmd_verify(scheme, *order),
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("EXPOCON_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": { "kind": e.kind(), "message": e.message() } }));
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(if matches!(e, CliError::Usage(_)) { 2 } else { 1 })
        }
    }
}
