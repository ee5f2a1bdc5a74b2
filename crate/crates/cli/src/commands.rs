//! Implementations of the subcommands, with the exit-code contract in one
//! place: usage and format problems exit 2, mathematically meaningful
//! failures (witnesses, varied orbits, aborted searches) exit 1.

use std::fs;

use serde::Serialize;

use quiver_lab::error::Error;
use quiver_lab::flip_graph::FlipGraph;
use quiver_lab::invariant::{
    check_invariant_symbolic, det_invariant, markov_invariant, CarriageWisePolynomial, Witness,
};
use quiver_lab::orbit::random_mutation_walk;
use quiver_lab::quiver::Quiver;
use quiver_lab::rat::Rat;
use quiver_lab::search::{search_invariants, verify_spanned_by_det, Mode, SearchOptions};

use crate::report;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn math(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InternalVerification(_)
            | Error::NotSpannedByDet { .. }
            | Error::AmbiguousBoundary => 1,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<(), CliError>;

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))
}

fn write_file(path: &str, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization")
    );
}

/// Resolves "det", "markov" or a file path to a named invariant.
fn load_invariant(spec: &str) -> Result<(String, CarriageWisePolynomial), CliError> {
    match spec {
        "det" => Ok(("det".to_string(), det_invariant(4)?)),
        "markov" => Ok(("markov".to_string(), markov_invariant(3)?)),
        path => {
            let text = read_file(path)?;
            Ok((
                path.to_string(),
                CarriageWisePolynomial::from_json_str(&text)?,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// mutate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MutateStep {
    vertex: Option<usize>,
    upper: Vec<Rat>,
    pattern: String,
    pfaffian: Option<Rat>,
}

#[derive(Serialize)]
struct MutateReport {
    command: &'static str,
    n: usize,
    steps: Vec<MutateStep>,
    result: Vec<Rat>,
}

pub fn mutate(input: &str, seq: &str, out: Option<&str>, json: bool) -> CmdResult {
    let quiver = Quiver::from_json_str(&read_file(input)?)?;
    let vertices: Vec<usize> = seq
        .split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("bad vertex {part:?} in --seq")))
        })
        .collect::<Result<_, _>>()?;

    let step_of = |q: &Quiver, vertex: Option<usize>| MutateStep {
        vertex,
        upper: q.upper().to_vec(),
        pattern: report::pattern_marks(q),
        pfaffian: q.pfaffian().ok(),
    };
    let mut steps = vec![step_of(&quiver, None)];
    let mut current = quiver;
    for &k in &vertices {
        current = current.mutate(k)?;
        steps.push(step_of(&current, Some(k)));
    }

    if let Some(path) = out {
        write_file(path, &current.to_json_string())?;
    }
    if json {
        print_json(&MutateReport {
            command: "mutate",
            n: current.n(),
            result: current.upper().to_vec(),
            steps,
        });
    } else {
        for step in &steps {
            let state = Quiver::new(current.n(), step.upper.clone()).expect("valid state");
            match step.vertex {
                None => println!("start:  {}", report::quiver_line(&state)),
                Some(k) => println!("mu_{k} -> {}", report::quiver_line(&state)),
            }
        }
        if let Some(path) = out {
            println!("wrote {path}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// carriage-graph
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ComponentReport {
    size: usize,
    least: String,
}

#[derive(Serialize)]
struct CarriageGraphReport {
    command: &'static str,
    n: usize,
    component_count: usize,
    components: Vec<ComponentReport>,
}

pub fn carriage_graph(n: usize, components: bool, cap: usize, json: bool) -> CmdResult {
    let graph = FlipGraph::build_with_cap(n, cap)?;
    if json {
        print_json(&CarriageGraphReport {
            command: "carriage-graph",
            n,
            component_count: graph.component_count(),
            components: graph
                .components()
                .iter()
                .map(|c| ComponentReport {
                    size: c.len(),
                    least: c[0].to_string(),
                })
                .collect(),
        });
    } else if components {
        print!("{}", graph.detailed_report());
    } else {
        println!("{}", graph.headline());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WitnessReport {
    source: String,
    vertex: usize,
    target: String,
    difference: String,
    counterexample: Option<CounterexampleReport>,
}

#[derive(Serialize)]
struct CounterexampleReport {
    quiver: Vec<Rat>,
    mutated: Vec<Rat>,
    value_before: Rat,
    value_after: Rat,
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    invariant: String,
    n: usize,
    degree: u32,
    verified: bool,
    witness: Option<WitnessReport>,
}

fn witness_report(w: &Witness) -> WitnessReport {
    WitnessReport {
        source: w.source.to_string(),
        vertex: w.vertex,
        target: w.target.to_string(),
        difference: w.difference.to_string(),
        counterexample: w.counterexample.as_ref().map(|p| CounterexampleReport {
            quiver: p.quiver.upper().to_vec(),
            mutated: p.mutated.upper().to_vec(),
            value_before: p.value_before.clone(),
            value_after: p.value_after.clone(),
        }),
    }
}

pub fn check(invariant: &str, json: bool) -> CmdResult {
    let (name, f) = load_invariant(invariant)?;
    let witness = check_invariant_symbolic(&f);
    let verified = witness.is_none();
    if json {
        print_json(&CheckReport {
            command: "check",
            invariant: name.clone(),
            n: f.n(),
            degree: f.degree_bound(),
            verified,
            witness: witness.as_ref().map(witness_report),
        });
    } else {
        match &witness {
            None => {
                println!(
                    "verified: {name} is invariant under all mutations (n = {}, degree {})",
                    f.n(),
                    f.degree_bound()
                );
                if let Some(piece) = f.common_piece() {
                    println!("common piece: {piece}");
                    if let Some(letters) = report::poly_letters(piece) {
                        println!("in letters:   {letters}");
                    }
                }
            }
            Some(w) => {
                println!("NOT invariant: {w}");
                if let Some(letters) = report::poly_letters(&w.difference) {
                    println!("difference in letters: {letters}");
                }
            }
        }
    }
    if verified {
        Ok(())
    } else {
        Err(CliError::math(format!(
            "{name} failed symbolic verification"
        )))
    }
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SearchReport {
    command: &'static str,
    n: usize,
    degree: u32,
    mode: Mode,
    dimension: usize,
    det_span: Option<Vec<String>>,
}

pub fn search(
    n: usize,
    degree: u32,
    mode: &str,
    out: Option<&str>,
    sample_prepass: bool,
    force: bool,
    json: bool,
) -> CmdResult {
    let mode: Mode = mode.parse()?;
    let options = SearchOptions {
        mode,
        sample_prepass,
        force,
    };
    let basis = search_invariants(n, degree, options)?;
    let det_span = if n == 4 {
        Some(
            verify_spanned_by_det(basis.elements(), degree)?
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<String>>(),
        )
    } else {
        None
    };
    if let Some(path) = out {
        write_file(path, &basis.to_json_string())?;
    }
    if json {
        print_json(&SearchReport {
            command: "search",
            n,
            degree,
            mode,
            dimension: basis.dimension(),
            det_span,
        });
    } else {
        println!("search n={n} degree={degree} mode={mode}");
        println!("dimension {}", basis.dimension());
        match &det_span {
            Some(span) => {
                for (i, f) in span.iter().enumerate() {
                    println!("element {i}: f(Det) = {f}");
                }
                println!("spanned by {{{}}}", span.join(", "));
            }
            None => {
                for (i, element) in basis.elements().iter().enumerate() {
                    match element.common_piece() {
                        Some(piece) => println!("element {i}: {piece} on every carriage"),
                        None => {
                            let (pattern, piece) =
                                element.pieces().iter().next().expect("nonempty pieces");
                            println!("element {i}: piecewise, e.g. {pattern}: {piece}");
                        }
                    }
                }
            }
        }
        if let Some(path) = out {
            println!("wrote {path}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// orbit
// ---------------------------------------------------------------------------

pub fn orbit(input: &str, steps: usize, seed: u64, watch: &[String], json: bool) -> CmdResult {
    let quiver = Quiver::from_json_str(&read_file(input)?)?;
    let mut watched = Vec::new();
    for spec in watch {
        let (name, f) = load_invariant(spec)?;
        if f.n() != quiver.n() {
            return Err(CliError::usage(format!(
                "watch {name} is for n = {}, quiver has n = {}",
                f.n(),
                quiver.n()
            )));
        }
        if let Some(w) = check_invariant_symbolic(&f) {
            return Err(CliError::math(format!(
                "watch {name} is not invariant: {w}"
            )));
        }
        watched.push((name, f));
    }
    let report = random_mutation_walk(&quiver, steps, seed, &watched);
    if json {
        print!("{}", report.to_json_string());
    } else {
        println!("walk of {steps} steps from {} with seed {seed}", quiver);
        let inner_count = report.steps.iter().filter(|s| s.inner).count();
        println!("{} rows recorded, {inner_count} inner", report.steps.len());
        for (w, (name, _)) in watched.iter().enumerate() {
            let mut values = report
                .steps
                .iter()
                .filter(|s| s.inner)
                .filter_map(|s| s.watched[w].as_ref());
            match values.next() {
                Some(first) if values.all(|v| v == first) => {
                    println!("watched {name}: constant {first} over all inner steps");
                }
                Some(_) => println!("watched {name}: VARIED"),
                None => println!("watched {name}: no inner steps recorded"),
            }
        }
    }
    if report.watched_constant_over_inner_steps() {
        Ok(())
    } else {
        Err(CliError::math(
            "a verified watched invariant varied along the walk".to_string(),
        ))
    }
}
