//! Command-line interface: closures, Betti tables, classification, and the
//! verification harness.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use monoreg::betti::{multigraded_betti, BettiTable};
use monoreg::classify::{self, Family, FamilySpec};
use monoreg::homology::Field;
use monoreg::ideal::MonomialIdeal;
use monoreg::newton;
use monoreg::verify::{
    self, BatchJob, BatchSummary, VerifyOptions, FORMAT_VERSION,
};

#[derive(Parser)]
#[command(
    name = "monoreg",
    version = concat!(env!("CARGO_PKG_VERSION"), " (record format v1)"),
    about = "Exact computations on monomial ideals: integral closures, Betti tables, regularity, and a conjecture-fuzzing harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Ideals are accepted as text (`x^2, x*y^2, y^3`), as canonical JSON
/// (`{"n":2,"gens":[[2,0],[1,2],[0,3]]}`), or as `@path` / `-` to read the
/// same formats from a file or stdin.
#[derive(Args)]
struct IdealArg {
    /// The ideal, `@file`, or `-` for stdin
    ideal: String,
    /// Ambient number of variables (inferred from the input when omitted)
    #[arg(long)]
    n: Option<usize>,
}

impl IdealArg {
    fn parse(&self) -> monoreg::Result<MonomialIdeal> {
        let text = if self.ideal == "-" {
            let mut buffer = String::new();
            io::stdin().read_to_string(&mut buffer)?;
            buffer
        } else if let Some(path) = self.ideal.strip_prefix('@') {
            fs::read_to_string(path)?
        } else {
            self.ideal.clone()
        };
        match self.n {
            Some(n) => MonomialIdeal::parse_with_dim(&text, n),
            None => MonomialIdeal::parse(&text),
        }
    }
}

#[derive(Args)]
struct FieldArg {
    /// Coefficient field: q (exact rationals) or f2
    #[arg(long, default_value = "q")]
    field: String,
}

impl FieldArg {
    fn parse(&self) -> monoreg::Result<Field> {
        match self.field.as_str() {
            "q" => Ok(Field::Q),
            "f2" => Field::fp(2),
            other => Err(monoreg::Error::Parse(format!(
                "unknown field '{other}' (expected q or f2)"
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integral closure as canonical JSON
    Closure {
        #[command(flatten)]
        ideal: IdealArg,
        /// Also print a rational certificate for each closure generator
        #[arg(long)]
        certificate: bool,
    },
    /// Maximum corner-point degree delta(I)
    Delta {
        #[command(flatten)]
        ideal: IdealArg,
    },
    /// Corner points of the Newton polyhedron
    Corners {
        #[command(flatten)]
        ideal: IdealArg,
    },
    /// Newton-polyhedron membership of a monomial
    Member {
        #[command(flatten)]
        ideal: IdealArg,
        /// The monomial to test, e.g. `x*y` or `[1,1]`
        monomial: String,
        /// Print the rational certificate when the monomial is a member
        #[arg(long)]
        certificate: bool,
    },
    /// Power-test membership oracle for the integral closure
    Oracle {
        #[command(flatten)]
        ideal: IdealArg,
        /// The monomial to test
        monomial: String,
        /// Largest power to try
        #[arg(long, default_value_t = 8)]
        rmax: u64,
    },
    /// Multigraded Betti table of S/I
    Betti {
        #[command(flatten)]
        ideal: IdealArg,
        #[command(flatten)]
        field: FieldArg,
        /// Use the closed form (Eliahou-Kervaire or Koszul); errors when
        /// neither applies
        #[arg(long)]
        fast: bool,
    },
    /// Castelnuovo-Mumford regularity of I and S/I
    Reg {
        #[command(flatten)]
        ideal: IdealArg,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Structural classification flags
    Classify {
        #[command(flatten)]
        ideal: IdealArg,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Stream sampled ideals as JSON lines
    Sample {
        /// ci | stable | strongly-stable | gorenstein3 | random2 | random3 | m-primary
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_deg: u64,
    },
    /// Verify one ideal and print its record
    Verify {
        #[command(flatten)]
        ideal: IdealArg,
        #[command(flatten)]
        field: FieldArg,
        /// Check the power bounds for m = 1..=M
        #[arg(long, default_value_t = 1)]
        hoa: u64,
    },
    /// Sample a family and verify every ideal, streaming JSONL records
    Fuzz {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_deg: u64,
        /// Output JSONL path (appends); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: MONOREG_JOBS or all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        field: FieldArg,
        /// Per-record wall-clock budget in seconds
        #[arg(long, default_value_t = 30)]
        timeout: u64,
    },
    /// Summarize a JSONL results file
    Report {
        file: PathBuf,
        /// Emit the summary as CSV instead of a table
        #[arg(long)]
        csv: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_monomial(input: &str, n: usize) -> monoreg::Result<monoreg::ExponentVector> {
    let trimmed = input.trim();
    if trimmed.starts_with('[') {
        let entries: Vec<u64> = serde_json::from_str(trimmed)
            .map_err(|e| monoreg::Error::Parse(format!("invalid exponent vector: {e}")))?;
        return Ok(monoreg::ExponentVector::new(entries));
    }
    let parsed = MonomialIdeal::parse_with_dim(trimmed, n)?;
    match parsed.gens() {
        [single] => Ok(single.clone()),
        _ => Err(monoreg::Error::Parse(
            "expected a single monomial".to_string(),
        )),
    }
}

fn print_betti_table(table: &BettiTable) {
    println!("i, C, degree, rank");
    for (i, c, rank) in table.entries() {
        let entries: Vec<String> = c.entries().iter().map(|e| e.to_string()).collect();
        println!("{i}, [{}], {}, {rank}", entries.join(","), c.degree());
    }
    println!();
    let graded = table.graded();
    let pdim = graded.pdim();
    let degrees: Vec<u64> = {
        let mut d: Vec<u64> = graded.entries().map(|(_, j, _)| j).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    print!("{:>4}", "i\\j");
    for j in &degrees {
        print!("{j:>6}");
    }
    println!();
    for i in 0..=pdim {
        print!("{i:>4}");
        for j in &degrees {
            let r = graded.rank(i, *j);
            if r == 0 {
                print!("{:>6}", ".");
            } else {
                print!("{r:>6}");
            }
        }
        println!();
    }
    println!();
    println!("totals: {:?}", table.totals());
    println!("pdim(S/I) = {}", table.quotient_pdim());
    println!("reg(S/I) = {}, reg(I) = {}", table.regularity(), table.ideal_regularity());
}

fn run(cli: Cli) -> monoreg::Result<ExitCode> {
    match cli.command {
        Command::Closure { ideal, certificate } => {
            let i = ideal.parse()?;
            if certificate {
                let pairs = newton::integral_closure_with_certificates(&i)?;
                let gens: Vec<monoreg::ExponentVector> =
                    pairs.iter().map(|(g, _)| g.clone()).collect();
                let closure = MonomialIdeal::new(i.dimension(), gens)?;
                println!("{}", closure.to_canonical_json());
                for (g, cert) in &pairs {
                    println!(
                        "{} <- lambda = ({})",
                        g.monomial_text(i.dimension()),
                        cert.to_fraction_strings().join(", ")
                    );
                }
            } else {
                println!("{}", newton::integral_closure(&i)?.to_canonical_json());
            }
        }
        Command::Delta { ideal } => {
            let i = ideal.parse()?;
            println!("{}", newton::delta(&i)?);
        }
        Command::Corners { ideal } => {
            let i = ideal.parse()?;
            let corners = newton::corner_points(&i)?;
            println!(
                "{}",
                serde_json::to_string(&corners).expect("serialization cannot fail")
            );
        }
        Command::Member {
            ideal,
            monomial,
            certificate,
        } => {
            let i = ideal.parse()?;
            let b = parse_monomial(&monomial, i.dimension())?;
            match newton::np_membership(&b, &i)? {
                Some(cert) => {
                    println!("member");
                    if certificate {
                        println!("lambda = ({})", cert.to_fraction_strings().join(", "));
                    }
                }
                None => println!("not a member"),
            }
        }
        Command::Oracle {
            ideal,
            monomial,
            rmax,
        } => {
            let i = ideal.parse()?;
            let b = parse_monomial(&monomial, i.dimension())?;
            if newton::closure_membership_oracle(&b, &i, rmax)? {
                println!("member (witnessed within r <= {rmax})");
            } else {
                println!("no witness up to r = {rmax}");
            }
        }
        Command::Betti { ideal, field, fast } => {
            let i = ideal.parse()?;
            let f = field.parse()?;
            if fast {
                if classify::is_complete_intersection(&i) {
                    print_betti_table(&monoreg::betti::koszul_betti(&i)?);
                } else if classify::is_stable(&i)? {
                    let table = monoreg::betti::ek_betti(&i)?;
                    println!("graded Betti numbers of I (Eliahou-Kervaire):");
                    println!("i, j, rank");
                    for (idx, j, rank) in table.entries() {
                        println!("{idx}, {j}, {rank}");
                    }
                    println!("reg(I) = {}", table.ideal_regularity());
                    println!("pdim(S/I) = {}", table.quotient_pdim());
                } else {
                    return Err(monoreg::Error::Parse(
                        "--fast needs a stable or complete-intersection ideal".to_string(),
                    ));
                }
            } else {
                print_betti_table(&multigraded_betti(&i, f)?);
            }
        }
        Command::Reg { ideal, field } => {
            let i = ideal.parse()?;
            let table = multigraded_betti(&i, field.parse()?)?;
            println!("reg(I) = {}", table.ideal_regularity());
            println!("reg(S/I) = {}", table.regularity());
            println!("pdim(S/I) = {}", table.quotient_pdim());
        }
        Command::Classify { ideal, field } => {
            let i = ideal.parse()?;
            let flags = verify::classify_flags(&i, field.parse()?)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&flags).expect("serialization cannot fail")
            );
        }
        Command::Sample {
            family,
            seed,
            count,
            n,
            max_deg,
        } => {
            let spec = FamilySpec::new(family, n, max_deg, seed);
            for index in 0..count {
                let ideal = classify::sample(&spec, index)?;
                println!("{}", ideal.to_canonical_json());
            }
        }
        Command::Verify { ideal, field, hoa } => {
            let i = ideal.parse()?;
            let opts = VerifyOptions {
                field: field.parse()?,
                hoa_max: hoa,
                ..VerifyOptions::default()
            };
            let record = verify::verify_conjecture(&i, &opts)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("serialization cannot fail")
            );
            let result = record.result.as_ref().expect("single runs never time out");
            let violations = result.proved_violations();
            if !violations.is_empty() {
                eprintln!("PROVED-INEQUALITY VIOLATION: {}", violations.join(", "));
                return Ok(ExitCode::from(1));
            }
            if !result.conjecture_holds() {
                eprintln!("*** CONJECTURE VIOLATION: reg(closure) > reg on {} ***", record.ideal);
                return Ok(ExitCode::from(4));
            }
        }
        Command::Fuzz {
            family,
            count,
            seed,
            n,
            max_deg,
            out,
            jobs,
            field,
            timeout,
        } => {
            let spec = FamilySpec::new(family, n, max_deg, seed);
            let opts = VerifyOptions {
                field: field.parse()?,
                hoa_max: 2,
                timeout: Duration::from_secs(timeout),
                ..VerifyOptions::default()
            };
            let jobs_count = jobs.or_else(|| {
                std::env::var("MONOREG_JOBS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let batch = vec![BatchJob { spec, count }];
            let summary = match out {
                Some(path) => {
                    let mut file = fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(&path)?;
                    verify::run_batch(&batch, &opts, jobs_count, &mut file)?
                }
                None => {
                    let stdout = io::stdout();
                    let mut lock = stdout.lock();
                    let summary = verify::run_batch(&batch, &opts, jobs_count, &mut lock)?;
                    lock.flush()?;
                    summary
                }
            };
            eprint!("{}", summary.render());
            return Ok(exit_from_summary(&summary));
        }
        Command::Report { file, csv } => {
            let data = fs::read_to_string(&file)?;
            let records = verify::read_records(&data)?;
            let summary = verify::summarize(&records);
            if csv {
                print!("{}", summary.to_csv());
            } else {
                print!("{}", summary.render());
            }
            return Ok(exit_from_summary(&summary));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_from_summary(summary: &BatchSummary) -> ExitCode {
    ExitCode::from(u8::try_from(summary.exit_code()).unwrap_or(1))
}

// keep the format version referenced so the embedded constant and the CLI
// version string cannot drift apart silently
const _: () = assert!(FORMAT_VERSION == 1);
