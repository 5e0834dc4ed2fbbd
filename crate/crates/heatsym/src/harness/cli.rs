//! Command-line driver for the whole pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 config error, 3 numerical
//! failure.

use super::{
    load_config, parse_config_for_problem, run_compare, write_figures, write_numeric,
    write_profiles, HarnessError, RunConfig,
};
use crate::analytic::ThermalConfig;
use crate::bvpfilter::{describe_operator, filter_problem, flux_invariance_expression};
use crate::fdsolver::{solve_fd, validate_truncation, DEFAULT_TRUNCATION_TOLERANCE};
use crate::liealg::{
    commutator, expand_in_span, heat_polynomials, inf_generator, is_symmetry, named_generator,
    GeneratorId, VectorField,
};
use crate::reduction::reduce_problem;
use crate::Problem;
use std::fs;
use std::path::{Path, PathBuf};

const SYNOPSIS: &str = "usage: heatsym <command> [options]
commands:
  verify-algebra                          check the symmetry algebra exactly
  filter --problem <ibvp1|ibvp2>          constraint rows and admitted basis
  reduce --problem <ibvp1|ibvp2> [--config <file>]
                                          similarity chart, reduced ODE, fitted closed form
  solve-analytic --config <file>          emit analytic profile CSVs
  solve-fd --config <file>                run the finite-difference solver, emit CSVs
  compare --config <file>                 analytic-vs-numeric error report and CSVs
  reproduce-figures --config <file>       emit the four figure datasets";

enum Failure {
    Usage(String),
    Config(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Config(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => Failure::Config(c.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

/// Run the CLI; returns the process exit code.
pub fn cli(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            if matches!(failure, Failure::Usage(_)) {
                eprintln!("{SYNOPSIS}");
            }
            failure.code()
        }
    }
}

fn flag_value(args: &[String], flag: &str) -> Result<Option<String>, Failure> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == flag {
            let value = args
                .get(i + 1)
                .ok_or_else(|| Failure::Usage(format!("{flag} requires a value")))?;
            if found.is_some() {
                return Err(Failure::Usage(format!("duplicate {flag}")));
            }
            found = Some(value.clone());
            i += 2;
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn require_problem(args: &[String]) -> Result<Problem, Failure> {
    let value = flag_value(args, "--problem")?
        .ok_or_else(|| Failure::Usage("missing --problem".to_string()))?;
    value.parse::<Problem>().map_err(Failure::Usage)
}

fn require_config(args: &[String]) -> Result<RunConfig, Failure> {
    let path = flag_value(args, "--config")?
        .ok_or_else(|| Failure::Usage("missing --config".to_string()))?;
    let rc = load_config(Path::new(&path)).map_err(|e| Failure::Config(e.to_string()))?;
    for w in rc.grid.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(rc)
}

fn dispatch(args: &[String]) -> Result<(), Failure> {
    let Some(command) = args.first() else {
        return Err(Failure::Usage("missing command".to_string()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "verify-algebra" => verify_algebra(),
        "filter" => filter(require_problem(rest)?),
        "reduce" => reduce(rest),
        "solve-analytic" => {
            let rc = require_config(rest)?;
            let files = write_profiles(&rc).map_err(Failure::from)?;
            print_files(&files);
            Ok(())
        }
        "solve-fd" => {
            let rc = require_config(rest)?;
            let fields =
                solve_fd(rc.problem, &rc.thermal, &rc.grid).map_err(HarnessError::from)?;
            let report = validate_truncation(
                fields.last().expect("snapshots"),
                &rc.thermal,
                rc.problem,
                DEFAULT_TRUNCATION_TOLERANCE,
            );
            let files = write_numeric(&rc, &fields).map_err(Failure::from)?;
            print_files(&files);
            println!("truncation: {report}");
            Ok(())
        }
        "compare" => {
            let rc = require_config(rest)?;
            let (report, files) = run_compare(&rc).map_err(Failure::from)?;
            print_files(&files);
            println!("{report}");
            Ok(())
        }
        "reproduce-figures" => {
            let path = flag_value(rest, "--config")?
                .ok_or_else(|| Failure::Usage("missing --config".to_string()))?;
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Config(format!("cannot read {path}: {e}")))?;
            let files = write_figures(&text).map_err(Failure::from)?;
            print_files(&files);
            Ok(())
        }
        other => Err(Failure::Usage(format!("unknown command `{other}`"))),
    }
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn verify_algebra() -> Result<(), Failure> {
    let mut failures = 0usize;
    let mut check = |name: String, ok: bool| {
        println!("{name:<26} {}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    for id in GeneratorId::ALL {
        let ok = is_symmetry(&named_generator(id)).unwrap_or(false);
        check(format!("symmetry {}", id.name()), ok);
    }
    for f in heat_polynomials() {
        let ok = inf_generator(&f)
            .and_then(|field| is_symmetry(&field))
            .unwrap_or(false);
        check(format!("symmetry X_inf[{f}]"), ok);
    }

    let gens: Vec<VectorField> = GeneratorId::ALL.iter().map(|&g| named_generator(g)).collect();
    for i in 0..6 {
        for j in (i + 1)..6 {
            let bracket = commutator(&gens[i], &gens[j]);
            let ok = match expand_in_span(&bracket) {
                Ok(expansion) => {
                    let mut rebuilt = VectorField::zero();
                    for (gi, c) in expansion.coefficients.iter().enumerate() {
                        rebuilt = rebuilt.add(&gens[gi].scaled(c));
                    }
                    expansion.inf_part.is_zero() && bracket.sub(&rebuilt).is_zero()
                }
                Err(_) => false,
            };
            check(format!("closure [X{}, X{}]", i + 1, j + 1), ok);
        }
    }

    if failures == 0 {
        println!("algebra verification passed (27 checks)");
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{failures} algebra check(s) failed")))
    }
}

fn filter(problem: Problem) -> Result<(), Failure> {
    let report = filter_problem(problem).map_err(|e| Failure::Numerical(e.to_string()))?;
    println!("invariance of the boundaries x = 0, t = 0:");
    println!("{}", report.boundary);
    println!("invariance of the boundary conditions:");
    println!("{}", report.bc);
    if problem == Problem::Ibvp2 {
        let intermediate = flux_invariance_expression(&report.boundary)
            .map_err(|e| Failure::Numerical(e.to_string()))?;
        println!("flux condition action at x = 0 (per unit kcond): {intermediate}");
    }
    println!("admitted operator basis:");
    println!("{}", report.subspace);
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}

fn reduce(args: &[String]) -> Result<(), Failure> {
    let problem = require_problem(args)?;
    let thermal = match flag_value(args, "--config")? {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Config(format!("cannot read {path}: {e}")))?;
            parse_config_for_problem(&text, problem)
                .map_err(|e| Failure::Config(e.to_string()))?
                .thermal
        }
        None => ThermalConfig::aisi304(problem),
    };
    let report = filter_problem(problem).map_err(|e| Failure::Numerical(e.to_string()))?;
    let basis = report.subspace.basis();
    let Some(vector) = basis.first() else {
        return Err(Failure::Numerical(
            "only the trivial operator survives the filter".to_string(),
        ));
    };
    let (chart, ode, fitted) = reduce_problem(problem, vector, &thermal)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    println!("admitted operator:  {}", describe_operator(vector));
    println!("similarity chart:   {chart}");
    println!("reduced ODE:        {ode}");
    println!("closed form:        {fitted}");
    Ok(())
}
