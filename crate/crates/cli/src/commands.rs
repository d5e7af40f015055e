use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use antparse_core::{
    parse_grammar, parse_input, run_colony_with, shortest_reduction, Derivation, Execution,
    Grammar, OracleError, OracleRecord, OracleResult, TraceRecord,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BenchArgs, GrammarArgs, OracleArgs, RecognizeArgs};

pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_BUDGET: u8 = 3;

fn load_grammar(path: &Path) -> Result<Grammar> {
    let text = fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    parse_grammar(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load(args: &GrammarArgs, input: &str) -> Result<(Grammar, antparse_core::SententialForm)> {
    let grammar = load_grammar(&args.grammar)?;
    let omega = parse_input(input, &grammar, args.chars).context("input")?;
    Ok((grammar, omega))
}

fn print_derivation(out: &mut impl Write, grammar: &Grammar, d: &Derivation) -> io::Result<()> {
    for (i, s) in d.steps.iter().enumerate() {
        let rule = &grammar.productions()[s.rule_index];
        writeln!(
            out,
            "  {:>2}. [{}] {} at {}: {} => {}",
            i + 1,
            s.rule_index,
            grammar.render_production(rule),
            s.position,
            grammar.render(&s.before),
            grammar.render(&s.after)
        )?;
    }
    Ok(())
}

fn exit(accepted: bool) -> ExitCode {
    if accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REJECTED)
    }
}

pub fn recognize(args: &RecognizeArgs) -> Result<ExitCode> {
    let (grammar, omega) = load(&args.grammar, &args.input)?;
    let config = args.colony.config();
    let execution = if args.colony.parallel {
        Execution::Parallel
    } else {
        Execution::Serial
    };
    let result = run_colony_with(&grammar, &omega, &config, execution)?;

    let mut out = io::stdout().lock();
    if args.json {
        let trace = TraceRecord::new(&grammar, &omega, &config, &result, args.trace);
        writeln!(out, "{}", trace.to_json())?;
        return Ok(exit(result.accepted));
    }

    if args.trace {
        for s in &result.stats {
            writeln!(
                out,
                "iter {:>4}: {:>3} ok {:>4} inactive {:>3} exhausted  best {:>4}  tau min {:.3e} max {:.3e} mean {:.3e}",
                s.iteration,
                s.successes,
                s.inactive,
                s.exhausted,
                s.best_steps.map_or("-".to_string(), |b| b.to_string()),
                s.pheromone.min,
                s.pheromone.max,
                s.pheromone.mean,
            )?;
        }
    }
    match &result.best_derivation {
        Some(d) => {
            writeln!(
                out,
                "accepted: {} steps, {} hops ({} iterations, {} successful ants, seed {})",
                d.len(),
                result.best_hops.unwrap_or(0),
                result.iterations_run,
                result.successes,
                config.seed
            )?;
            print_derivation(&mut out, &grammar, d)?;
        }
        None => writeln!(
            out,
            "not accepted within budget ({} iterations x {} ants, seed {})",
            result.iterations_run, config.n_ants, config.seed
        )?,
    }
    Ok(exit(result.accepted))
}

pub fn oracle(args: &OracleArgs) -> Result<ExitCode> {
    let (grammar, omega) = load(&args.grammar, &args.input)?;
    let result = match shortest_reduction(&grammar, &omega, args.max_states) {
        Ok(r) => r,
        Err(e @ OracleError::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_BUDGET));
        }
        Err(e) => return Err(e.into()),
    };
    let mut out = io::stdout().lock();
    if args.json {
        let record = OracleRecord::new(&grammar, &omega, &result);
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    } else if let Some(w) = &result.witness {
        writeln!(
            out,
            "member: {} steps ({} forms expanded)",
            w.len(),
            result.states_explored
        )?;
        print_derivation(&mut out, &grammar, w)?;
    } else {
        writeln!(out, "not a member ({} forms expanded)", result.states_explored)?;
    }
    Ok(exit(result.member))
}

#[derive(Serialize)]
struct BenchLine<'a> {
    input: &'a str,
    seed: u64,
    accepted: bool,
    steps: Option<usize>,
    oracle_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<f64>,
}

#[derive(Serialize)]
struct SkippedLine<'a> {
    input: &'a str,
    error: String,
}

#[derive(Serialize)]
struct Summary {
    summary: bool,
    inputs: usize,
    skipped: usize,
    runs: usize,
    accepted: usize,
    success_rate: f64,
    /// Runs on oracle-proven members.
    member_runs: usize,
    member_success_rate: Option<f64>,
    /// Among accepted runs with a known oracle length, fraction matching it.
    optimal_rate: Option<f64>,
    soundness_violations: usize,
    steps_histogram: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_millis: Option<f64>,
}

struct Prepared {
    text: String,
    omega: antparse_core::SententialForm,
    oracle: Option<OracleResult>,
}

struct Run {
    accepted: bool,
    steps: Option<usize>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn bench(args: &BenchArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let grammar = load_grammar(&args.grammar.grammar)?;
    let text = fs::read_to_string(&args.inputs)
        .with_context(|| format!("{}", args.inputs.display()))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        bail!("{}: no inputs", args.inputs.display());
    }
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let base = args.colony.config();
    base.validate()?;

    let out = Mutex::new(io::stdout());
    let emit = |json: String| -> io::Result<()> {
        let mut out = out.lock().expect("stdout lock");
        writeln!(out, "{json}")
    };

    let mut inputs = Vec::new();
    let mut skipped = 0;
    for line in lines {
        match parse_input(line, &grammar, args.grammar.chars) {
            Ok(omega) => {
                // Budget overflow leaves the oracle length unknown rather than failing the sweep.
                let oracle = shortest_reduction(&grammar, &omega, args.max_states).ok();
                inputs.push(Prepared {
                    text: line.to_string(),
                    omega,
                    oracle,
                });
            }
            Err(e) => {
                skipped += 1;
                emit(serde_json::to_string(&SkippedLine {
                    input: line,
                    error: e.to_string(),
                })?)?;
            }
        }
    }

    let pairs: Vec<(usize, u64)> = (0..inputs.len())
        .flat_map(|i| (0..args.seeds).map(move |s| (i, args.colony.seed + s)))
        .collect();
    let run_pair = |&(i, seed): &(usize, u64)| -> Result<Run> {
        let input = &inputs[i];
        let config = antparse_core::ColonyConfig { seed, ..base.clone() };
        let t = Instant::now();
        let result = run_colony_with(&grammar, &input.omega, &config, Execution::Serial)?;
        let millis = (!args.no_timing).then(|| t.elapsed().as_secs_f64() * 1e3);
        emit(serde_json::to_string(&BenchLine {
            input: &input.text,
            seed,
            accepted: result.accepted,
            steps: result.best_steps,
            oracle_steps: input.oracle.as_ref().and_then(|o| o.shortest_steps),
            millis,
        })?)?;
        Ok(Run {
            accepted: result.accepted,
            steps: result.best_steps,
        })
    };
    let runs: Vec<Run> = if args.colony.parallel {
        pairs.par_iter().map(run_pair).collect::<Result<_>>()?
    } else {
        pairs.iter().map(run_pair).collect::<Result<_>>()?
    };

    let mut accepted = 0;
    let mut member_runs = 0;
    let mut member_accepted = 0;
    let mut optimal = 0;
    let mut with_oracle = 0;
    let mut violations = 0;
    let mut histogram = BTreeMap::new();
    for (&(i, _), run) in pairs.iter().zip(&runs) {
        let oracle = inputs[i].oracle.as_ref();
        let member = oracle.map(|o| o.member);
        if member == Some(true) {
            member_runs += 1;
        }
        if !run.accepted {
            continue;
        }
        accepted += 1;
        if let Some(steps) = run.steps {
            *histogram.entry(steps).or_insert(0) += 1;
        }
        match (member, oracle.and_then(|o| o.shortest_steps)) {
            (Some(false), _) => violations += 1,
            (Some(true), Some(shortest)) => {
                member_accepted += 1;
                with_oracle += 1;
                match run.steps {
                    Some(s) if s == shortest => optimal += 1,
                    Some(s) if s < shortest => violations += 1,
                    _ => {}
                }
            }
            _ => {}
        }
    }

    let summary = Summary {
        summary: true,
        inputs: inputs.len(),
        skipped,
        runs: runs.len(),
        accepted,
        success_rate: ratio(accepted, runs.len()).unwrap_or(0.0),
        member_runs,
        member_success_rate: ratio(member_accepted, member_runs),
        optimal_rate: ratio(optimal, with_oracle),
        soundness_violations: violations,
        steps_histogram: histogram,
        total_millis: (!args.no_timing).then(|| started.elapsed().as_secs_f64() * 1e3),
    };
    emit(serde_json::to_string(&summary)?)?;
    Ok(ExitCode::SUCCESS)
}
