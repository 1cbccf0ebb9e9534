use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgtor::corpus::CORPUS;
use dgtor::session::{run_parsed, Command, SessionFile, SessionReport};
use dgtor::verify::TheoremId;
use dgtor::{Error, Field, Result};

#[derive(Parser)]
#[command(
    name = "dgtor",
    version,
    about = "Exact Tor, Poincaré series and trivial-extension checks over finite DG algebras"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Flags {
    /// `fp:<p>` or `q`; overrides the session field.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 10)]
    max_degree: i32,
    /// Degree window `a..b` for Tor; its top also bounds series and checks.
    #[arg(long, global = true, value_parser = parse_window)]
    window: Option<(i32, i32)>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Treat SKIPPED and UNDETERMINED outcomes as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for detector restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Execute a JSON session file.
    Run { session: PathBuf },
    /// Print the identity a verification checks.
    Explain { id: String },
    /// Run one verification on the built-in instances or on a session's commands.
    Verify {
        id: String,
        #[arg(long)]
        session: Option<PathBuf>,
    },
    /// Koszul complex of k[vars]/(relations) and its homology.
    Koszul(RingArgs),
    /// A ⋉ W for A = k[vars]/(relations) and W in the given degrees.
    Trivext {
        #[command(flatten)]
        ring: RingArgs,
        /// Degrees of a basis of W, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w: Vec<i32>,
    },
    /// Trivial-extension detection on the Koszul complex and on the ring.
    Detect(RingArgs),
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    relations: Vec<String>,
}

fn parse_window(s: &str) -> std::result::Result<(i32, i32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: i32 = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn config(flags: &Flags) -> Result<dgtor::session::RunConfig> {
    Ok(dgtor::session::RunConfig {
        field: flags.field.as_deref().map(Field::parse_spec).transpose()?,
        max_degree: flags.max_degree,
        window: flags.window,
        strict: flags.strict,
        seed: flags.seed,
        threads: flags.threads.max(1),
    })
}

fn ring_session(ring: &RingArgs, field: &Option<String>) -> serde_json::Value {
    serde_json::json!({
        "schema": "dgtor/1",
        "field": field.clone().unwrap_or_else(|| "fp:101".into()),
        "definitions": [
            {"name": "R", "kind": "ring", "vars": ring.vars, "relations": ring.relations},
            {"name": "k", "kind": "residue", "over": "R"},
        ],
        "commands": [],
    })
}

fn push(v: &mut serde_json::Value, key: &str, item: serde_json::Value) {
    v[key].as_array_mut().expect("array").push(item);
}

fn parse_value(v: serde_json::Value) -> Result<SessionFile> {
    SessionFile::parse(&v.to_string())
}

fn merge(reports: Vec<SessionReport>, field: String, max_degree: i32) -> SessionReport {
    let mut results = Vec::new();
    for r in reports {
        for mut c in r.results {
            c.index = results.len();
            results.push(c);
        }
    }
    SessionReport {
        schema: dgtor::session::SCHEMA,
        field,
        max_degree,
        results,
    }
}

fn execute(cli: &Cli) -> Result<Option<SessionReport>> {
    let cfg = config(&cli.flags)?;
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())));
    match &cli.verb {
        Verb::Run { session } => Ok(Some(run_parsed(&SessionFile::parse(&read(session)?)?, &cfg)?)),
        Verb::Explain { id } => {
            let id = TheoremId::parse(id)?;
            println!("{id}\n{}", id.explain());
            Ok(None)
        }
        Verb::Verify { id, session } => {
            let id = TheoremId::parse(id)?;
            let texts: Vec<String> = match session {
                Some(p) => vec![read(p)?],
                None => CORPUS.iter().map(|(_, s)| s.to_string()).collect(),
            };
            let mut reports = Vec::new();
            let mut field = None;
            for t in texts {
                let mut s = SessionFile::parse(&t)?;
                s.commands
                    .retain(|c| matches!(c, Command::Verify(v) if v.id == id.as_str()));
                if s.commands.is_empty() {
                    continue;
                }
                let r = run_parsed(&s, &cfg)?;
                field.get_or_insert(r.field.clone());
                reports.push(r);
            }
            let field = field.unwrap_or_else(|| "fp:101".into());
            Ok(Some(merge(reports, field, cfg.max_degree)))
        }
        Verb::Koszul(ring) => {
            let mut v = ring_session(ring, &cli.flags.field);
            push(&mut v, "commands", serde_json::json!({"op": "koszul", "ring": "R"}));
            Ok(Some(run_parsed(&parse_value(v)?, &cfg)?))
        }
        Verb::Trivext { ring, w } => {
            let mut v = ring_session(ring, &cli.flags.field);
            let cells: Vec<(String, i32)> = w.iter().enumerate().map(|(i, d)| (format!("w{}", i + 1), *d)).collect();
            push(
                &mut v,
                "definitions",
                serde_json::json!({"name": "W", "kind": "complex", "cells": cells}),
            );
            push(
                &mut v,
                "definitions",
                serde_json::json!({"name": "B", "kind": "trivial-extension", "base": "R", "w": "W"}),
            );
            push(
                &mut v,
                "definitions",
                serde_json::json!({"name": "kB", "kind": "residue", "over": "B"}),
            );
            push(&mut v, "commands", serde_json::json!({"op": "homology", "of": "B"}));
            push(
                &mut v,
                "commands",
                serde_json::json!({"op": "poincare", "module": "kB"}),
            );
            push(
                &mut v,
                "commands",
                serde_json::json!({"op": "verify", "id": "thm-tor", "base": "R", "w": "W", "m": "k", "n": "k"}),
            );
            Ok(Some(run_parsed(&parse_value(v)?, &cfg)?))
        }
        Verb::Detect(ring) => {
            let mut v = ring_session(ring, &cli.flags.field);
            push(
                &mut v,
                "definitions",
                serde_json::json!({"name": "K", "kind": "koszul", "ring": "R"}),
            );
            push(&mut v, "commands", serde_json::json!({"op": "detect", "algebra": "K"}));
            push(&mut v, "commands", serde_json::json!({"op": "detect", "algebra": "R"}));
            Ok(Some(run_parsed(&parse_value(v)?, &cfg)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            if !report.results.is_empty() {
                match cli.flags.output {
                    Output::Json => println!("{}", report.to_json()),
                    Output::Text => print!("{}", report.to_text()),
                }
            }
            ExitCode::from(report.exit_code(cli.flags.strict) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
