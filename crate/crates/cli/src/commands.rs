use std::fs;

use serde_json::{json, Value};
use uli_core::check::{Checker, Limits};
use uli_core::decompose::{decompose_px, decompose_y, Decomposition};
use uli_core::descriptor::{parse_function, parse_upsilon, FunctionDescriptor};
use uli_core::invariance::{bernstein, extendable_with, parse_measure, AltNotation};
use uli_core::logic::formula::parse_formula;
use uli_core::lp::Method;
use uli_core::nabla::{Nabla, Sampling};
use uli_core::prob::restrict;
use uli_core::rational::{self, Rational};
use uli_core::{Error, ProbabilityFunction, SimplexPoint, StateDescription, Valuation};

use crate::args::{
    BernsteinArgs, CheckArgs, Command, DecomposeArgs, EvalArgs, ExtendArgs, MarginalizeArgs, MethodArg, NablaArgs,
    PrincipleArg, Target,
};
use crate::{Failure, UsageError};

type Outcome = std::result::Result<Value, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Eval(a) => eval(a),
        Command::Check(a) => check(a),
        Command::Extend(a) => extend(a),
        Command::Bernstein(a) => bernstein_point(a),
        Command::Nabla(a) => nabla(a),
        Command::Decompose(a) => decompose(a),
        Command::Marginalize(a) => marginalize(a),
    }
}

/// Inline JSON when it starts with `{` or `[`, otherwise a file path.
fn document(flag: &str, value: &str) -> std::result::Result<String, UsageError> {
    let trimmed = value.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(value.to_string());
    }
    fs::read_to_string(value).map_err(|e| UsageError::new(flag, &format!("cannot read {value}: {e}")))
}

fn function(flag: &str, value: &str) -> std::result::Result<ProbabilityFunction, Failure> {
    Ok(parse_function(&document(flag, value)?)?)
}

fn indices<T: std::str::FromStr>(flag: &str, text: &str) -> std::result::Result<Vec<T>, UsageError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| UsageError::new(flag, &format!("expected comma separated integers, got {text:?}"))))
        .collect()
}

fn rationals(text: &str) -> uli_core::Result<Vec<Rational>> {
    rational::parse_list(text)
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

fn sentence_value(w: &ProbabilityFunction, phi: &str, constants: Option<&str>) -> Outcome {
    let formula = parse_formula(phi)?;
    let window: Vec<u32> = match constants {
        Some(text) => indices("--constants", text)?,
        None => formula.constants().into_iter().collect(),
    };
    Ok(json!(rational::format(&w.eval_sentence(&formula, &window)?)))
}

fn sd_value(w: &ProbabilityFunction, atoms: &str) -> Outcome {
    let h: Vec<usize> = indices("--sd", atoms)?;
    let sd = StateDescription::new(w.level(), &h)?;
    Ok(json!(rational::format(&w.eval_sd(&sd)?)))
}

fn target_value(w: &ProbabilityFunction, target: &Target) -> Option<Outcome> {
    match (&target.phi, &target.sd) {
        (Some(phi), _) => Some(sentence_value(w, phi, target.constants.as_deref())),
        (None, Some(sd)) => Some(sd_value(w, sd)),
        (None, None) => None,
    }
}

fn eval(a: EvalArgs) -> Outcome {
    let w = function("--f", &a.f)?;
    let value = target_value(&w, &a.target).expect("clap requires --phi or --sd")?;
    Ok(json!({ "value": value }))
}

fn check(a: CheckArgs) -> Outcome {
    let w = function("--f", &a.f)?;
    let limits = a.max_cases.map_or_else(Limits::default, |max_cases| Limits { max_cases });
    let checker = Checker::new(limits);
    let report = match a.principle {
        PrincipleArg::Ex => checker.ex(&w, a.n)?,
        PrincipleArg::Px => checker.px(&w, a.n)?,
        PrincipleArg::Ip => checker.ip(&w, a.n)?,
        PrincipleArg::Wip => {
            let (p, r) = (a.p.expect("clap requires --p"), a.r.expect("clap requires --r"));
            checker.wip(&w, p, r, a.n)?
        }
        PrincipleArg::Additivity => checker.additivity(&w, a.n)?,
    };
    Ok(serde_json::to_value(report).expect("reports serialize"))
}

fn extend(a: ExtendArgs) -> Outcome {
    let c = rationals(&a.c)?;
    if c.len() != a.q as usize + 1 {
        return Err(Error::InvalidAltNotation(format!("--q {} needs {} entries, got {}", a.q, a.q + 1, c.len())).into());
    }
    let c = AltNotation::new(c)?;
    let method = match a.method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Fm => Method::FourierMotzkin,
        MethodArg::Simplex => Method::Simplex,
    };
    let certificate = extendable_with(&c, a.r, method)?;
    Ok(serde_json::to_value(certificate).expect("certificates serialize"))
}

fn bernstein_point(a: BernsteinArgs) -> Outcome {
    let rho = parse_measure(&document("--measure", &a.measure)?)?;
    let c = bernstein(&rho, a.q)?;
    Ok(json!({ "q": a.q, "C": strings(c.entries()) }))
}

fn nabla(a: NablaArgs) -> Outcome {
    let upsilon = parse_upsilon(&document("--upsilon", &a.upsilon)?)?;
    let sampling = if a.no_replacement { Sampling::WithoutReplacement } else { Sampling::WithReplacement };
    let built = Nabla::new(&upsilon, a.q, sampling)?;
    let components: Vec<Value> = built
        .components()
        .iter()
        .map(|k| json!({ "counts": k.counts, "weight": rational::format(&k.weight), "c": strings(k.function.point().entries()) }))
        .collect();
    let mut out = json!({
        "q": a.q,
        "nu": upsilon.nu(),
        "replacement": !a.no_replacement,
        "components": components,
    });
    let w = ProbabilityFunction::Nabla(built);
    let value = match (&a.eval, &a.sd) {
        (Some(phi), _) => Some(sentence_value(&w, phi, a.constants.as_deref())?),
        (None, Some(sd)) => Some(sd_value(&w, sd)?),
        (None, None) => None,
    };
    if let Some(value) = value {
        out["value"] = value;
    }
    Ok(out)
}

fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "q": d.q,
        "lambda": rational::format(&d.lambda),
        "g": d.g,
        "nu": d.nu,
        "p_vectors": d.p_vectors.iter().map(|p| strings(p.entries())).collect::<Vec<_>>(),
        "w1": FunctionDescriptor::describe(&d.w1),
        "w2": FunctionDescriptor::describe(&d.w2),
        "verification": {
            "status": "pass",
            "up_to": d.verified_up_to,
            "state_descriptions": d.verified_descriptions,
        },
    })
}

fn decompose(a: DecomposeArgs) -> Outcome {
    let d = match (&a.c, &a.f) {
        (Some(c), _) => {
            let entries = rationals(c)?;
            let point = match a.q {
                Some(q) => SimplexPoint::new(q, entries)?,
                None => SimplexPoint::from_entries(entries)?,
            };
            decompose_y(&point, a.verify_n)?
        }
        (None, Some(f)) => decompose_px(&function("--f", f)?, a.verify_n)?,
        (None, None) => unreachable!("clap requires --c or --f"),
    };
    Ok(decomposition_json(&d))
}

fn marginalize(a: MarginalizeArgs) -> Outcome {
    let w = function("--f", &a.f)?;
    let restricted = restrict(&w, a.q)?;
    if let Some(value) = target_value(&restricted, &a.target) {
        return Ok(json!({ "q": a.q, "value": value? }));
    }
    let mut table = Vec::new();
    for n in 0..=a.n {
        for sd in StateDescription::all(a.q, n)? {
            table.push(json!({ "sd": sd.one_based(), "value": rational::format(&restricted.eval_sd(&sd)?) }));
        }
    }
    Ok(json!({ "q": a.q, "values": table }))
}
