use renyi::constructions::{
    analytic_entropy_vector, dilution_classical_gt1, spike_classical, spike_quantum_gt1, spike_quantum_lt1,
    target_vector_state, two_atom_distribution, two_atom_on, upset_classical_gt1, upset_classical_lt1, Construction,
    TargetResolution,
};
use renyi::inequalities::{
    audenaert_report, check_monotonicity, check_vn_inequalities, convergence_sweep, find_subadditivity_violation,
    SweepTemplate,
};
use renyi::{entropy_vector, DensityMatrix, EntropyVector, RenyiOrder, State, SubsetMask, WeightedSpectrum};
use serde_json::{json, Value};

use crate::args::{
    AudenaertArgs, ConstructArgs, ConstructKind, EntropyArgs, Property, SweepArgs, SweepKind, VerifyArgs, WitnessArgs,
};
use crate::error::{CliError, CliResult};
use crate::input::{
    load_input, load_vector, parse_alpha, parse_generators, parse_list, parse_subset, require, single_entry, Input,
};
use crate::output::{comment_line, csv_text, emit, params, to_json};

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

pub fn construct(args: &ConstructArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let (c, resolved) = build_construction(args, alpha)?;
    let analytic = c.analytic(alpha)?;
    let doc = json!({
        "params": params("construct", args, resolved)?,
        "descriptor": c.descriptor,
        "state": c.state,
        "analytic": analytic,
    });
    emit(args.out.as_deref(), &(to_json(&doc)? + "\n"))?;
    Ok(Outcome::Ok)
}

fn build_construction(args: &ConstructArgs, alpha: RenyiOrder) -> CliResult<(Construction, Value)> {
    let kind = match args.kind {
        ConstructKind::Spike => "spike",
        ConstructKind::Dilution => "dilution",
        ConstructKind::Upset => "upset",
        ConstructKind::Target => "target",
    };
    if args.kind == ConstructKind::Target {
        let path = require(args.target_vector.as_deref(), "target-vector", kind)?;
        let v = load_vector(path)?;
        let resolution = match (args.tolerance, args.m) {
            (Some(eps), _) => TargetResolution::Tolerance(eps),
            (None, Some(m)) => TargetResolution::Alphabet(m),
            (None, None) if alpha.is_above_one() => TargetResolution::Alphabet(1),
            (None, None) => return Err(CliError::usage("--M or --tolerance is required for target with alpha < 1")),
        };
        let c = target_vector_state(&v, alpha, resolution)?;
        return Ok((c, json!({ "alpha": alpha, "n": v.n() })));
    }
    let n = require(args.n, "n", kind)?;
    match args.kind {
        ConstructKind::Spike => {
            let s = require(args.target, "target", kind)?;
            let subset = match &args.subset {
                Some(label) => parse_subset(label, n)?,
                None => SubsetMask::full(n)?,
            };
            let resolved = json!({ "alpha": alpha, "n": n, "subset": subset, "target": s, "M": args.m });
            let c = if alpha.is_above_one() {
                let r = distribution(args.m, s, alpha)?;
                spike_quantum_gt1(n, subset, s, alpha, &r)?
            } else {
                let m = require(args.m, "M", "spike with alpha < 1")?;
                if subset.is_full() {
                    spike_classical(n, s, alpha, &vec![m; n])?
                } else {
                    spike_quantum_lt1(n, subset, s, alpha, m)?
                }
            };
            Ok((c, resolved))
        }
        ConstructKind::Dilution => {
            let r = match (args.target, args.m) {
                (Some(s), m) => distribution(m, s, alpha)?,
                (None, Some(m)) => WeightedSpectrum::uniform(m as u128)?,
                (None, None) => return Err(CliError::usage("--target or --M is required for dilution")),
            };
            let c = dilution_classical_gt1(n, alpha, &r)?;
            Ok((c, json!({ "alpha": alpha, "n": n, "target": args.target, "M": args.m })))
        }
        ConstructKind::Upset => {
            let s = require(args.target, "target", kind)?;
            let gens = parse_generators(require(args.generators.as_deref(), "generators", kind)?, n)?;
            let c = if alpha.is_above_one() {
                upset_classical_gt1(n, &gens, s, alpha, args.m)?
            } else {
                let m = require(args.m, "M", "upset with alpha < 1")?;
                upset_classical_lt1(n, &gens, s, alpha, &vec![m; n])?
            };
            let m = match &c.descriptor {
                renyi::constructions::ConstructionDescriptor::UpsetGt1 { m, .. } => Some(*m),
                _ => args.m,
            };
            Ok((c, json!({ "alpha": alpha, "n": n, "generators": gens, "target": s, "M": m })))
        }
        ConstructKind::Target => unreachable!("handled above"),
    }
}

/// `H_α = s` on `m` points when given, otherwise on the fewest points.
fn distribution(m: Option<u64>, s: f64, alpha: RenyiOrder) -> CliResult<WeightedSpectrum> {
    Ok(match m {
        Some(m) => two_atom_on(m as u128, s, alpha)?,
        None => two_atom_distribution(s, alpha)?,
    })
}

fn vector_of(input: &Input, alpha: RenyiOrder, analytic: bool) -> CliResult<(EntropyVector, &'static str)> {
    match (input.state(), input.descriptor()) {
        (Some(state), d) if !(analytic && d.is_some()) => Ok((entropy_vector(state, alpha)?, "state")),
        (_, Some(d)) => Ok((analytic_entropy_vector(d, alpha)?, "analytic")),
        _ => Err(CliError::usage("input has neither a state nor a descriptor")),
    }
}

pub fn entropy(args: &EntropyArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let input = load_input(&args.state)?;
    let (v, source) = vector_of(&input, alpha, args.analytic)?;
    let p = params("entropy", args, json!({ "alpha": alpha, "source": source }))?;
    let text = if args.json {
        to_json(&json!({ "params": p, "vector": v }))? + "\n"
    } else if args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["subset", "entropy_bits"])?;
        for (mask, x) in v.iter() {
            w.write_record([mask.to_string(), renyi::json::format_g17(x)])?;
        }
        comment_line(&p)? + &csv_text(w)?
    } else {
        let (scale, unit) = if args.nats { (std::f64::consts::LN_2, "nats") } else { (1.0, "bits") };
        let mut out = comment_line(&p)?;
        for (mask, x) in v.iter() {
            out += &format!("{mask}\t{} {unit}\n", renyi::json::format_g17(x * scale));
        }
        out
    };
    emit(None, &text)?;
    Ok(Outcome::Ok)
}

pub fn verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let input = load_input(&args.state)?;
    let mut report = serde_json::Map::new();
    let mut passed = true;
    for check in args.checks.split(',').map(str::trim) {
        match check {
            "monotonicity" => {
                let (v, _) = vector_of(&input, alpha, false)?;
                let r = check_monotonicity(&v);
                passed &= r.passed();
                report.insert("monotonicity".into(), json!({ "passed": r.passed(), "report": r }));
            }
            "ssa" => {
                let (v, _) = vector_of(&input, RenyiOrder::One, false)?;
                let r = check_vn_inequalities(&v)?;
                passed &= r.passed;
                report.insert("ssa".into(), serde_json::to_value(&r)?);
            }
            other => return Err(CliError::usage(format!("unknown check `{other}` (expected monotonicity, ssa)"))),
        }
    }
    let p = params("verify", args, json!({ "alpha": alpha }))?;
    emit(None, &(to_json(&json!({ "params": p, "passed": passed, "checks": report }))? + "\n"))?;
    Ok(if passed { Outcome::Ok } else { Outcome::VerificationFailed })
}

pub fn audenaert(args: &AudenaertArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let input = load_input(&args.state)?;
    let rho = match input.state() {
        Some(State::Density(rho)) => rho.clone(),
        Some(State::Pure(psi)) => DensityMatrix::from_pure(psi)?,
        Some(State::Classical(p)) => DensityMatrix::from_classical(p)?,
        None => return Err(CliError::usage("audenaert needs an explicit state")),
    };
    let r = audenaert_report(&rho, alpha)?;
    let holds = r.chain_holds(renyi::inequalities::EQUALITY_TOL);
    let p = params("audenaert", args, json!({ "alpha": alpha }))?;
    emit(None, &(to_json(&json!({ "params": p, "chain_holds": holds, "report": r }))? + "\n"))?;
    Ok(if holds { Outcome::Ok } else { Outcome::VerificationFailed })
}

fn sweep_template(args: &SweepArgs, target: Option<&EntropyVector>) -> CliResult<SweepTemplate> {
    // spike and dilution parameters may come from a one-entry target vector
    let from_vector = target.and_then(single_entry);
    let n = || -> CliResult<usize> {
        target.map(|v| v.n()).or(args.n).ok_or_else(|| CliError::usage("--n or --target-vector is required"))
    };
    let height = || -> CliResult<f64> {
        args.target.or(from_vector.map(|(_, s)| s)).ok_or_else(|| CliError::usage("--target or a one-entry --target-vector is required"))
    };
    Ok(match args.kind {
        SweepKind::Spike => {
            let n = n()?;
            let subset = match (&args.subset, from_vector) {
                (Some(label), _) => parse_subset(label, n)?,
                (None, Some((mask, _))) => mask,
                (None, None) => SubsetMask::full(n)?,
            };
            SweepTemplate::Spike { n, subset, s: height()? }
        }
        SweepKind::Dilution => SweepTemplate::Dilution { n: n()?, s: height()? },
        SweepKind::Upset => {
            let n = n()?;
            let gens = parse_generators(require(args.generators.as_deref(), "generators", "upset")?, n)?;
            let s = require(args.target, "target", "upset")?;
            SweepTemplate::UpsetLt1 { n, generators: gens, s }
        }
        SweepKind::Target => {
            let v = require(target, "target-vector", "target")?;
            SweepTemplate::Target { vector: v.clone() }
        }
    })
}

pub fn sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let schedule: Vec<u64> = parse_list(&args.schedule, "schedule")?;
    let given = args.target_vector.as_deref().map(load_vector).transpose()?;
    let template = sweep_template(args, given.as_ref())?;
    let target = match given {
        Some(v) => v,
        None => template.natural_target(alpha)?,
    };
    let table = convergence_sweep(&template, &schedule, alpha, &target)?;
    let p = params("sweep", args, json!({ "alpha": alpha, "schedule": schedule, "target_vector": target }))?;

    let mut w = csv::Writer::from_writer(Vec::new());
    for record in table.records() {
        w.serialize(record)?;
    }
    let body = csv_text(w)?;
    match &args.csv {
        Some(path) => {
            emit(Some(path), &body)?;
            let rows: Vec<Value> = table.rows.iter().map(|r| json!({ "M": r.m, "sup_error": r.error })).collect();
            let summary = json!({ "params": p, "csv": path.display().to_string(), "rows": rows });
            emit(None, &(to_json(&summary)? + "\n"))?;
        }
        None => emit(None, &(comment_line(&p)? + &body))?,
    }
    Ok(Outcome::Ok)
}

pub fn witness(args: &WitnessArgs) -> CliResult<Outcome> {
    let alpha = parse_alpha(&args.alpha)?;
    let dims: Vec<usize> = parse_list(&args.dims, "dims")?;
    let [da, db] = dims[..] else {
        return Err(CliError::usage(format!("--dims needs two entries, got {}", dims.len())));
    };
    let search = match args.property {
        Property::Subadditivity => find_subadditivity_violation(alpha, args.trials, args.seed, [da, db])?,
    };
    let status = if search.found() { "found" } else { "not_found" };
    let p = params("witness", args, json!({ "alpha": alpha, "dims": [da, db] }))?;
    emit(None, &(to_json(&json!({ "params": p, "status": status, "result": search }))? + "\n"))?;
    // subadditivity holds at α = 0 and α = 1, so a witness there is a failure
    let expected_none = matches!(alpha, RenyiOrder::Zero | RenyiOrder::One);
    Ok(if search.found() && expected_none { Outcome::VerificationFailed } else { Outcome::Ok })
}
