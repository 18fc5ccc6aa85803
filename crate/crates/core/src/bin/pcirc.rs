use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use power_circuits::arithmetic::{add, subtract};
use power_circuits::circuit::{
    canonical_hash, eval_bignum, from_json, one, to_dot, to_json, Certified, OracleError, PowerCircuit,
    DEFAULT_ORACLE_BITS,
};
use power_circuits::demos::{blowup, div3, tower};
use power_circuits::generate::{random_circuit, CircuitShape};
use power_circuits::reduction::{compare_circuits, normalize, reduce_with_stats};
use power_circuits::termlang::{
    eval_formula, parse, parse_term, realize, Assignment, EvalOutcome, ParseOptions, Parsed, RealizeOptions,
    Realized, Term,
};
use power_circuits::Error;

#[derive(Parser)]
#[command(name = "pcirc", version, about = "Compute with power circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Budget {
    /// Bindings `name=integer`, also usable as `tower(name)`.
    #[arg(long = "let", value_name = "NAME=INT")]
    lets: Vec<String>,
    #[arg(long, default_value_t = 1_000_000)]
    max_vertices: usize,
    /// Largest integer printed in full, in bits.
    #[arg(long, default_value_t = DEFAULT_ORACLE_BITS)]
    oracle_bits: u64,
}

#[derive(clap::Args)]
struct Input {
    /// Circuit JSON file; standard input if omitted.
    file: Option<PathBuf>,
    /// Build the circuit from an expression instead.
    #[arg(long, conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// `tower(n) + 1 − tower(n)`
    Tower,
    /// Random circuits with only positive edges.
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term or decide a formula.
    Eval {
        expr: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compare two terms; prints <, = or >.
    Cmp {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Read circuit JSON and print its normal form with certificate.
    Normalize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
    },
    /// Sizes of a circuit and of its normal form.
    Stats {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        budget: Budget,
    },
    /// Print a circuit as JSON or Graphviz DOT.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        budget: Budget,
    },
    /// CSV of reduction cost over a family of circuits.
    Bench {
        #[arg(long, value_enum, default_value = "tower")]
        family: Family,
        #[arg(long, default_value_t = 10)]
        from: usize,
        #[arg(long, default_value_t = 60)]
        to: usize,
        #[arg(long, default_value_t = 10)]
        step: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Growth demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Marks of the normal form of 𝒫_4 ⋯ 𝒫_n against 2^(n−3).
    Blowup {
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_vertices: usize,
    },
    /// Compact-form length of (4^(i+1) − 1)/3 for i = tower₂(j).
    Div3 {
        #[arg(long, default_value_t = 3)]
        j: usize,
    },
}

enum Failure {
    Undefined(String),
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VertexBudget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run = Result<(), Failure>;

struct Context {
    parse: ParseOptions,
    env: Assignment,
    realize: RealizeOptions,
    oracle_bits: u64,
}

impl Context {
    fn new(b: &Budget) -> Result<Self, Failure> {
        let mut lets = BTreeMap::new();
        for binding in &b.lets {
            let (name, value) =
                binding.split_once('=').ok_or_else(|| Failure::Usage(format!("expected NAME=INT, got `{binding}`")))?;
            let value = match parse_term(value.trim()) {
                Ok(Term::Const(n)) => n,
                _ => return Err(Failure::Usage(format!("`{value}` is not an integer literal"))),
            };
            lets.insert(name.trim().to_string(), value);
        }
        let mut env = Assignment::new();
        for (x, n) in &lets {
            env.bind_int(x.as_str(), n);
        }
        Ok(Context {
            parse: ParseOptions { lets },
            env,
            realize: RealizeOptions { max_vertices: b.max_vertices },
            oracle_bits: b.oracle_bits,
        })
    }

    fn parse(&self, src: &str) -> Result<Parsed, Failure> {
        parse(src, &self.parse).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn term(&self, src: &str) -> Result<Term, Failure> {
        match self.parse(src)? {
            Parsed::Term(t) => Ok(t),
            Parsed::Formula(_) => Err(Failure::Usage(format!("`{src}` is a formula, expected a term"))),
        }
    }

    fn realize(&self, t: &Term) -> Result<Certified, Failure> {
        match realize(t, &self.env, &self.realize)? {
            Realized::Defined(c) => Ok(c),
            Realized::Undefined(w) => Err(Failure::Undefined(w.to_string())),
        }
    }

    fn load(&self, input: &Input) -> Result<PowerCircuit, Failure> {
        if let Some(src) = &input.expr {
            return Ok(self.realize(&self.term(src)?)?.into_circuit());
        }
        let text = match &input.file {
            Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
                s
            }
        };
        Ok(from_json(&text)?.0)
    }

    fn normal(&self, c: &PowerCircuit) -> Result<Certified, Failure> {
        if c.vertex_count() > self.realize.max_vertices {
            return Err(Error::VertexBudget { vertices: c.vertex_count(), limit: self.realize.max_vertices }.into());
        }
        normalize(c)?.proper().ok_or_else(|| Failure::Undefined("the circuit is improper".into()))
    }
}

fn print_value(c: &Certified, oracle_bits: u64) -> Run {
    match eval_bignum(c.circuit(), oracle_bits) {
        Ok(n) => println!("{n}"),
        Err(OracleError::BudgetExceeded(_)) => {
            let k = c.circuit();
            println!("vertices {} edges {} marks {}", k.vertex_count(), k.edge_count(), k.mark_count());
            println!("sign {}", c.sign());
            println!("sha256 {}", canonical_hash(c)?);
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    }
    Ok(())
}

fn eval(expr: &str, budget: &Budget) -> Run {
    let cx = Context::new(budget)?;
    match cx.parse(expr)? {
        Parsed::Term(t) => print_value(&cx.realize(&t)?, cx.oracle_bits),
        Parsed::Formula(f) => {
            let outcome = eval_formula(&f, &cx.env, &cx.realize)?;
            match outcome {
                EvalOutcome::Undefined(w) => Err(Failure::Undefined(w.to_string())),
                _ => {
                    println!("{outcome}");
                    Ok(())
                }
            }
        }
    }
}

fn cmp(lhs: &str, rhs: &str, budget: &Budget) -> Run {
    let cx = Context::new(budget)?;
    let a = cx.realize(&cx.term(lhs)?)?;
    let b = cx.realize(&cx.term(rhs)?)?;
    let ord = compare_circuits(a.circuit(), b.circuit())?.expect_proper("normal circuits are proper");
    println!(
        "{}",
        match ord {
            Ordering::Less => "<",
            Ordering::Equal => "=",
            Ordering::Greater => ">",
        }
    );
    Ok(())
}

fn stats(input: &Input, budget: &Budget) -> Run {
    let cx = Context::new(budget)?;
    let c = cx.load(input)?;
    println!("vertices {}", c.vertex_count());
    println!("edges {}", c.edge_count());
    println!("marks {}", c.mark_count());
    if !c.is_constant() {
        let vars: Vec<_> = c.variables().into_iter().collect();
        println!("variables {}", vars.join(" "));
        return Ok(());
    }
    let nf = cx.normal(&c)?;
    let k = nf.circuit();
    println!("normal vertices {} edges {} marks {}", k.vertex_count(), k.edge_count(), k.mark_count());
    println!("sign {}", nf.sign());
    println!("sha256 {}", canonical_hash(&nf)?);
    Ok(())
}

fn bench(family: Family, from: usize, to: usize, step: usize, seed: u64) -> Run {
    if step == 0 {
        return Err(Failure::Usage("--step must be positive".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    println!("n,vertices,ops,wall_us");
    for n in (from..=to).step_by(step) {
        let c = match family {
            Family::Tower => {
                let t = tower(n);
                subtract(&add(&t, &one()), &t)
            }
            Family::Random => random_circuit(&mut rng, &CircuitShape::all_plus(n)),
        };
        let start = Instant::now();
        let (_, stats) = reduce_with_stats(&c)?.expect_proper("both families are proper");
        let wall = start.elapsed().as_micros();
        println!("{n},{},{},{wall}", c.vertex_count(), stats.ops);
    }
    Ok(())
}

fn demo(d: &Demo) -> Run {
    match *d {
        Demo::Blowup { n, max_vertices } => {
            println!("n,marks,lower_bound,vertices,edges");
            for k in 4..=n {
                let row = blowup(k, max_vertices)?;
                println!("{},{},{},{},{}", row.n, row.marks, row.lower_bound, row.vertices, row.edges);
            }
        }
        Demo::Div3 { j } => {
            println!("j,i,compact_terms,numerator_vertices");
            for j in 0..=j {
                let row = div3(j)?;
                println!("{},{},{},{}", row.j, row.i, row.compact_terms, row.numerator_vertices);
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Eval { expr, budget } => eval(expr, budget),
        Command::Cmp { lhs, rhs, budget } => cmp(lhs, rhs, budget),
        Command::Normalize { input, budget } => {
            let cx = Context::new(budget)?;
            let nf = cx.normal(&cx.load(input)?)?;
            println!("{}", to_json(nf.circuit(), Some(nf.certificate())));
            Ok(())
        }
        Command::Stats { input, budget } => stats(input, budget),
        Command::Export { input, format, budget } => {
            let cx = Context::new(budget)?;
            let c = cx.load(input)?;
            match format {
                Format::Json => println!("{}", to_json(&c, None)),
                Format::Dot => print!("{}", to_dot(&c)),
            }
            Ok(())
        }
        Command::Bench { family, from, to, step, seed } => bench(*family, *from, *to, *step, *seed),
        Command::Demo { demo: d } => demo(d),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Undefined(why)) => {
            println!("Undefined");
            eprintln!("{why}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
