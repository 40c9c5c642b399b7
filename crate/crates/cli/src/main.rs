use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use amt_core::hpt::{perturb, split_differential, trivial_morse_contraction, Perturbation, SeriesBound};
use amt_core::io::{
    export_dot, from_simplicial, gen_random, parse_complex, parse_matching, write_complex, write_maps, write_matching,
    RandomParams,
};
use amt_core::reduce::{compare_reductions, reduce, Engine, ReduceError};
use amt_core::verify::{compare_homology, homology, verify_contraction};
use amt_core::{
    critical_cells, greedy_matching, reduce_direct, validate_matching, BasedComplex, Error, Matching, ReductionResult,
    RingSpec,
};

#[derive(Parser)]
#[command(name = "amt", version, about = "Algebraic Morse theory reductions of based chain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a complex and check d² = 0.
    Validate { complex: PathBuf },
    /// Compute a greedy Morse matching.
    Match {
        complex: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a complex to its critical cells.
    Reduce {
        complex: PathBuf,
        /// Matching file; a greedy matching with `--seed` is used otherwise.
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "both")]
        engine: Engine,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Reduced complex destination; standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Destination for the f, g and h maps.
        #[arg(long)]
        maps: Option<PathBuf>,
    },
    /// Run both engines, all contraction identities and a homology comparison.
    Verify {
        complex: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Print Betti numbers, and torsion over Z.
    Homology { complex: PathBuf },
    /// Build the simplicial chain complex of a facet list.
    FromSimplicial {
        facets: PathBuf,
        #[arg(long, default_value = "Z")]
        ring: RingSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the (Morse) digraph in DOT format.
    ExportDot {
        complex: PathBuf,
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Generate a seeded random complex.
    GenRandom {
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        max_degree: u32,
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        ring: RingSpec,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: exit code 1 for mathematical failures, 2 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn math(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 2, message: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_mathematical() { 1 } else { 2 }, message: e.to_string() }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Failed(e) => e.into(),
            ReduceError::Disagreement(d) => Failure::math(d.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn load_complex(path: &Path) -> Result<BasedComplex, Failure> {
    parse_complex(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_matching(path: &Path) -> Result<Matching, Failure> {
    parse_matching(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(path: &Path) -> CmdResult {
    match parse_complex(&read(path)?) {
        Ok(c) => {
            println!("ok: {} cells, {} components", c.cells().len(), c.edge_count());
            Ok(())
        }
        Err(Error::DSquaredNonzero(violations)) => {
            for v in &violations {
                println!("{v}");
            }
            Err(Failure::math(format!("d^2 != 0 at {} entries", violations.len())))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_match(path: &Path, seed: u64, out: Option<&Path>) -> CmdResult {
    let c = load_complex(path)?;
    let m = greedy_matching(&c, seed);
    let critical = critical_cells(&c, &m);
    println!("matched edges: {}", m.len());
    println!("critical cells: {}", critical.len());
    if let Some(p) = out {
        fs::write(p, write_matching(&m)).map_err(|e| Failure::io(p, e))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_reduce(
    path: &Path,
    matching: Option<&Path>,
    seed: u64,
    engine: Engine,
    max_iterations: Option<usize>,
    out: Option<&Path>,
    maps: Option<&Path>,
) -> CmdResult {
    let c = load_complex(path)?;
    let m = match matching {
        Some(p) => load_matching(p)?,
        None => greedy_matching(&c, seed),
    };
    let r = reduce(&c, &m, engine, max_iterations)?;
    let stats = &r.result.stats;
    let summary = format!(
        "cells {} -> {}, components {} -> {}",
        stats.cells_before, stats.cells_after, stats.edges_before, stats.edges_after
    );
    // keep standard output clean when it carries the reduced complex
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    emit(out, &write_complex(&r.result.reduced))?;
    if let Some(p) = maps {
        fs::write(p, write_maps(&r.result)).map_err(|e| Failure::io(p, e))?;
    }
    Ok(())
}

fn run_verify(path: &Path, matching: &Path, max_iterations: Option<usize>) -> CmdResult {
    let c = load_complex(path)?;
    let m = load_matching(matching)?;
    let inv = validate_matching(&c, &m).map_err(Error::InvalidMatching)?;
    println!("matching: {} edges, {} critical cells", m.len(), critical_cells(&c, &m).len());
    let mut ok = true;

    let trivial = trivial_morse_contraction(&c, &m, &inv)?;
    let (_, rest) = split_differential(&c, &m)?;
    let t = Perturbation::new(&trivial.big, rest)?;
    let bound = match max_iterations {
        Some(k) => SeriesBound::new(k)?,
        None => SeriesBound::from_matching(&c, &m)?,
    };
    let perturbed = perturb(&trivial, &t, bound)?;
    println!("series terms: {} (bound {})", perturbed.terms, bound.max_iterations());

    let direct = reduce_direct(&c, &m)?;
    let direct_contraction = direct.to_contraction(&c);

    for (name, contraction) in [
        ("trivial Morse contraction", &trivial),
        ("perturbed contraction", &perturbed.contraction),
        ("direct reduction", &direct_contraction),
    ] {
        let report = verify_contraction(contraction);
        ok &= report.passed();
        println!("{name}:");
        print!("{report}");
    }

    let p = &perturbed.contraction;
    let hpt_result = ReductionResult::new(&c, p.small.clone(), p.f.clone(), p.g.clone(), p.h.clone(), m.clone());
    match compare_reductions(&direct, &hpt_result) {
        None => println!("engines: agree"),
        Some(d) => {
            ok = false;
            print!("{d}");
        }
    }

    let preserved = compare_homology(&c, &direct.reduced)?;
    ok &= preserved;
    println!("homology: {}", if preserved { "preserved" } else { "CHANGED" });
    for line in homology(&c)?.render(c.degrees()) {
        println!("  {line}");
    }

    if ok {
        println!("result: ok");
        Ok(())
    } else {
        Err(Failure::math("verification failed"))
    }
}

fn run_homology(path: &Path) -> CmdResult {
    let c = load_complex(path)?;
    for line in homology(&c)?.render(c.degrees()) {
        println!("{line}");
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { complex } => validate(&complex),
        Command::Match { complex, seed, out } => run_match(&complex, seed, out.as_deref()),
        Command::Reduce { complex, matching, seed, engine, max_iterations, out, maps } => {
            run_reduce(&complex, matching.as_deref(), seed, engine, max_iterations, out.as_deref(), maps.as_deref())
        }
        Command::Verify { complex, matching, max_iterations } => run_verify(&complex, &matching, max_iterations),
        Command::Homology { complex } => run_homology(&complex),
        Command::FromSimplicial { facets, ring, out } => {
            let c = from_simplicial(&read(&facets)?, ring)?;
            emit(out.as_deref(), &write_complex(&c))
        }
        Command::ExportDot { complex, matching } => {
            let c = load_complex(&complex)?;
            let m = matching.as_deref().map(load_matching).transpose()?;
            print!("{}", export_dot(&c, m.as_ref())?);
            Ok(())
        }
        Command::GenRandom { cells, max_degree, max_rank, density, ring, seed, out } => {
            let c = gen_random(&RandomParams { cells, max_degree, max_rank, density, ring, seed })?;
            emit(out.as_deref(), &write_complex(&c))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
