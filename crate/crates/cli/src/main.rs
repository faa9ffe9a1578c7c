use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclic_potts::characters::{decompose_big_f, decompose_z, decompose_z2j, DecompositionResult};
use cyclic_potts::oracle::{spin_z, FkCounts};
use cyclic_potts::verify::{first_failure, run_suite, Status, Suite};
use cyclic_potts::{
    dual_decomposition, verify_block_structure, z_ff, BerahaParam, CharacterSet, CyclicStrip, Error,
};
use num_rational::BigRational;

mod output;

use output::{render, Format, Value};

#[derive(Parser, Debug)]
#[command(
    name = "cyclic-potts",
    version,
    about = "Exact characters and partition functions of the Potts model on cyclic strips"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Reserved; enumeration order is always fixed.
    #[arg(long, global = true)]
    seed_order: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct LatticeArg {
    /// Square strip, e.g. `square:3x4` (width 3, length 4).
    #[arg(long, value_parser = parse_lattice)]
    lattice: CyclicStrip,
}

fn parse_lattice(s: &str) -> Result<CyclicStrip, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characters K_{1,2l+1} from the transfer matrix.
    Characters {
        #[command(flatten)]
        lattice: LatticeArg,
        /// A single `l`, or `all`.
        #[arg(long, default_value = "all")]
        l: String,
    },
    /// A quantity written as a sum over characters.
    Decompose {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, value_enum)]
        target: TargetArg,
        /// NTC number for `z2j`.
        #[arg(long)]
        j: Option<usize>,
        /// Index for `bigf`.
        #[arg(long)]
        l: Option<usize>,
        /// Rewrite in minimal characters at this integer `p`.
        #[arg(long)]
        p: Option<u32>,
    },
    /// Brute-force enumeration.
    Oracle {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Split the cluster sum by number of non-trivial clusters.
        #[arg(long)]
        count_ntc: bool,
        /// Cluster sum with boundary weight Q0 on non-trivial clusters.
        #[arg(long)]
        dual: bool,
        /// Spin sum at integer Q and rational v, given as `Q,v`.
        #[arg(long)]
        spin: Option<String>,
    },
    /// Check every identity on a grid of strips.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long = "Lmax", default_value_t = 2)]
        lmax: usize,
        #[arg(long = "Nmax", default_value_t = 3)]
        nmax: usize,
    },
    /// Check the block structure of the full transfer matrix.
    Blockcheck {
        #[command(flatten)]
        lattice: LatticeArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Z,
    Z2j,
    Bigf,
    Dual,
    Zff,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Cyclic,
    Dual,
    Minimal,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Cyclic => Suite::Cyclic,
            SuiteArg::Dual => Suite::Dual,
            SuiteArg::Minimal => Suite::Minimal,
        }
    }
}

enum Failure {
    Usage(String),
    Compute(String),
    Identity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLattice(_)
            | Error::Parse(_)
            | Error::Precondition(_)
            | Error::UnsupportedBeraha(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn character_name(l: usize) -> String {
    format!("K_1,{}", 2 * l + 1)
}

fn characters(strip: &CyclicStrip, l: &str) -> Result<Value, Failure> {
    let chars = CharacterSet::compute(strip)?;
    let wanted: Vec<usize> = if l == "all" {
        (0..=strip.width()).collect()
    } else {
        let l: usize = l
            .parse()
            .map_err(|_| Failure::Usage(format!("--l expects an integer or `all`, got {l:?}")))?;
        vec![l]
    };
    let ks = wanted
        .into_iter()
        .map(|l| (character_name(l), Value::Poly(chars.k(l))))
        .collect();
    Ok(Value::Group(vec![
        ("lattice".into(), Value::Text(strip.to_string())),
        ("characters".into(), Value::Group(ks)),
    ]))
}

fn decomposition_value(
    lattice: &str,
    d: &DecompositionResult,
    chars: &CharacterSet,
    p: Option<u32>,
) -> Result<Value, Failure> {
    let terms = d
        .terms
        .iter()
        .map(|t| {
            (
                character_name(t.l),
                Value::Group(vec![
                    ("amplitude".into(), Value::Poly(t.amplitude.clone())),
                    ("character".into(), Value::Poly(t.character.clone())),
                ]),
            )
        })
        .collect();
    let mut items = vec![
        ("lattice".into(), Value::Text(lattice.to_string())),
        ("target".into(), Value::Text(d.target.to_string())),
        ("terms".into(), Value::Group(terms)),
        ("dual_temperature".into(), Value::Flag(d.dual_temperature)),
        ("prefactor".into(), Value::Rational(d.prefactor.clone())),
        ("value".into(), Value::Rational(d.value.clone())),
    ];
    if let Some(p) = p {
        let p = BerahaParam::new(p)?;
        let minimal = d
            .minimal_terms(chars, p)?
            .into_iter()
            .map(|(l, a)| (format!("chi_1,{}", 2 * l + 1), Value::Poly(a)))
            .collect();
        items.push(("p".into(), Value::Count(p.p().into())));
        items.push(("minimal".into(), Value::Group(minimal)));
    }
    Ok(Value::Group(items))
}

fn decompose(
    strip: &CyclicStrip,
    target: TargetArg,
    j: Option<usize>,
    l: Option<usize>,
    p: Option<u32>,
) -> Result<Value, Failure> {
    if !strip.is_square() {
        return Err(Failure::Usage("decompose needs a square strip".into()));
    }
    if let TargetArg::Zff = target {
        // the fixed-boundary lattice has width L; its characters live on width L-1
        let d = z_ff(strip.width(), strip.length())?;
        let inner = CyclicStrip::square(strip.width() - 1, strip.length())?;
        let chars = CharacterSet::compute(&inner)?;
        return decomposition_value(&strip.to_string(), &d, &chars, p);
    }
    let chars = CharacterSet::compute(strip)?;
    let d = match target {
        TargetArg::Z => decompose_z(&chars),
        TargetArg::Z2j => {
            let j = j.ok_or_else(|| Failure::Usage("--target z2j needs --j".into()))?;
            decompose_z2j(&chars, j)
        }
        TargetArg::Bigf => {
            let l = l.ok_or_else(|| Failure::Usage("--target bigf needs --l".into()))?;
            decompose_big_f(&chars, l)
        }
        TargetArg::Dual => dual_decomposition(&chars),
        TargetArg::Zff => unreachable!("handled above"),
    };
    decomposition_value(&strip.to_string(), &d, &chars, p)
}

fn parse_spin(s: &str) -> Result<(u32, BigRational), Failure> {
    let bad = || Failure::Usage(format!("--spin expects `Q,v` such as `3,1/2`, got {s:?}"));
    let (q, v) = s.split_once(',').ok_or_else(bad)?;
    let q: u32 = q.trim().parse().map_err(|_| bad())?;
    let v: BigRational = v.trim().parse().map_err(|_| bad())?;
    Ok((q, v))
}

fn oracle(
    strip: &CyclicStrip,
    count_ntc: bool,
    dual: bool,
    spin: Option<&str>,
) -> Result<Value, Failure> {
    let spin = spin.map(parse_spin).transpose()?;
    let mut items = vec![("lattice".into(), Value::Text(strip.to_string()))];
    if count_ntc || dual || spin.is_none() {
        let counts = FkCounts::enumerate(strip)?;
        let spectrum = counts.spectrum();
        items.push(("Z".into(), Value::Poly(spectrum.z())));
        if count_ntc {
            let parts = spectrum
                .parts()
                .iter()
                .enumerate()
                .map(|(j, p)| (format!("Z_{}", 2 * j + 1), Value::Poly(p.clone())))
                .collect();
            items.push(("ntc".into(), Value::Group(parts)));
        }
        if dual {
            items.push(("dual".into(), Value::Poly(counts.dual_weighted())));
        }
    }
    if let Some((q, v)) = spin {
        items.push(("spin".into(), Value::Number(spin_z(strip, q, &v)?)));
    }
    Ok(Value::Group(items))
}

fn blockcheck(strip: &CyclicStrip) -> Result<Value, Failure> {
    let report = verify_block_structure(strip)?;
    let counts = report
        .sub_block_counts
        .iter()
        .enumerate()
        .map(|(l, &n)| (format!("l={l}"), Value::Count(n as u128)))
        .collect();
    let mut items = vec![
        ("lattice".into(), Value::Text(strip.to_string())),
        ("basis_size".into(), Value::Count(report.basis_size as u128)),
        (
            "lower_triangular".into(),
            Value::Flag(report.lower_triangular),
        ),
        ("sub_block_counts".into(), Value::Group(counts)),
        (
            "sub_blocks_equal".into(),
            Value::Flag(report.sub_blocks_equal.iter().all(|&b| b)),
        ),
        ("passed".into(), Value::Flag(report.passed())),
    ];
    if let Some(f) = &report.failure {
        items.push(("failure".into(), Value::Text(f.clone())));
    }
    let passed = report.passed();
    let value = Value::Group(items);
    if passed {
        Ok(value)
    } else {
        let mut buf = Vec::new();
        render(&value, Format::Text, &mut buf)?;
        Err(Failure::Identity(
            String::from_utf8_lossy(&buf).into_owned(),
        ))
    }
}

fn verify(suite: SuiteArg, lmax: usize, nmax: usize, format: Format) -> Result<(), Failure> {
    let outcomes = run_suite(suite.into(), lmax, nmax)?;
    let items = outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let (status, detail) = match &o.status {
                Status::Passed => ("pass", None),
                Status::Failed(d) => ("fail", Some(d.clone())),
                Status::Skipped(r) => ("skip", Some(r.clone())),
            };
            let mut fields = vec![
                ("strip".to_string(), Value::Text(o.strip.clone())),
                ("identity".to_string(), Value::Text(o.id.clone())),
                ("status".to_string(), Value::Text(status.into())),
            ];
            if let Some(d) = detail {
                fields.push(("detail".into(), Value::Text(d)));
            }
            (i.to_string(), Value::Group(fields))
        })
        .collect();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if format == Format::Text {
        for o in &outcomes {
            writeln!(out, "{o}")?;
        }
    } else {
        render(
            &Value::Group(vec![("checks".into(), Value::Group(items))]),
            format,
            &mut out,
        )?;
    }
    match first_failure(&outcomes) {
        Some(o) => Err(Failure::Identity(o.to_string())),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let value = match cli.command {
        Command::Characters { lattice, l } => characters(&lattice.lattice, &l)?,
        Command::Decompose {
            lattice,
            target,
            j,
            l,
            p,
        } => decompose(&lattice.lattice, target, j, l, p)?,
        Command::Oracle {
            lattice,
            count_ntc,
            dual,
            spin,
        } => oracle(&lattice.lattice, count_ntc, dual, spin.as_deref())?,
        Command::Verify { suite, lmax, nmax } => return verify(suite, lmax, nmax, cli.format),
        Command::Blockcheck { lattice } => blockcheck(&lattice.lattice)?,
    };
    let stdout = io::stdout();
    render(&value, cli.format, &mut stdout.lock())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(msg)) => {
            eprintln!("identity failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
