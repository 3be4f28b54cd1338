use std::fmt::Write as _;

use compound_tin::channel::TinCheck;
use compound_tin::graph::{build_full, build_reduced, shortest_paths, ShortestPathResult};
use compound_tin::power::{self, Algorithm, Solution, SolveTrace, UserPower};
use compound_tin::rational::render;
use compound_tin::region::{self, BoundOrigin, Constraint, Membership};
use compound_tin::snr;
use compound_tin::{CompoundChannel, GdofTuple};
use serde_json::{json, Value};

use crate::channel_file::{check_target, parse_list, ChannelFile, Loaded};
use crate::error::CliError;
use crate::format::significant;
use crate::report::{self, paren, Report};

fn users_label(users: &[usize]) -> Value {
    Value::Array(users.iter().map(|u| json!(u + 1)).collect())
}

fn origin_label(c: &Constraint) -> String {
    match c.origin() {
        BoundOrigin::User(k) => format!("user {}", k + 1),
        BoundOrigin::Cycle(cycle) => format!("cycle {cycle}"),
    }
}

fn constraint_json(c: &Constraint, users: usize) -> Value {
    json!({
        "users": users_label(c.users()),
        "coefficients": report::qs(&c.coefficients(users)),
        "rhs": report::q(c.rhs()),
        "origin": origin_label(c),
        "inequality": c.export(users),
    })
}

pub fn targets(loaded: &Loaded, arg: Option<&str>) -> Result<Vec<GdofTuple>, CliError> {
    match arg {
        Some(text) => Ok(vec![check_target(&loaded.channel, parse_list(text, "--target")?)?]),
        None if !loaded.targets.is_empty() => Ok(loaded.targets.clone()),
        None => Err(CliError::Invalid("no target: pass --target or list \"targets\" in the file".into())),
    }
}

fn debug_graph(channel: &CompoundChannel, d: &GdofTuple) {
    if let Ok(graph) = build_full(channel, d) {
        eprintln!("# potential graph for target {d}");
        eprint!("{}", graph.dump());
    }
}

/// Validation failures are a negative verdict; unparsable levels stay errors.
pub fn validate(file: &ChannelFile) -> Result<Report, CliError> {
    let loaded = match file.load() {
        Ok(loaded) => loaded,
        Err(CliError::Invalid(message)) => {
            return Ok(Report {
                text: format!("invalid: {message}\n"),
                json: json!({ "valid": false, "error": message }),
                negative: true,
            })
        }
        Err(other) => return Err(other),
    };
    let states: Vec<usize> = (0..loaded.channel.user_count())
        .map(|k| loaded.channel.state_count(k))
        .collect();
    let text = format!(
        "valid: {} users, states per receiver {}, {} targets{}\n",
        loaded.channel.user_count(),
        paren(&states),
        loaded.targets.len(),
        if loaded.channel.is_regular() { ", regular" } else { "" }
    );
    Ok(Report {
        json: json!({
            "valid": true,
            "name": loaded.name,
            "K": loaded.channel.user_count(),
            "states": states,
            "regular": loaded.channel.is_regular(),
            "targets": loaded.targets.iter().map(report::tuple).collect::<Vec<_>>(),
        }),
        text,
        negative: false,
    })
}

pub fn tin_check(loaded: &Loaded) -> Report {
    let channel = &loaded.channel;
    match channel.tin_optimal() {
        TinCheck::Optimal => Report {
            json: json!({ "tin_optimal": true }),
            text: "TIN-optimal: yes\n".into(),
            negative: false,
        },
        TinCheck::Violated(v) => {
            let direct = channel.level(v.user, v.state, v.user);
            let caused = channel.level(v.victim, v.victim_state, v.user);
            let suffered = channel.level(v.user, v.state, v.interferer);
            let text = format!(
                "TIN-optimal: no\nuser {} state {}: direct {} < caused {} (receiver {} state {}) + suffered {} (from transmitter {})\n",
                v.user + 1,
                v.state + 1,
                render(direct),
                render(caused),
                v.victim + 1,
                v.victim_state + 1,
                render(suffered),
                v.interferer + 1,
            );
            Report {
                json: json!({
                    "tin_optimal": false,
                    "witness": {
                        "user": v.user + 1,
                        "state": v.state + 1,
                        "victim": v.victim + 1,
                        "victim_state": v.victim_state + 1,
                        "interferer": v.interferer + 1,
                        "direct": report::q(direct),
                        "caused": report::q(caused),
                        "suffered": report::q(suffered),
                    }
                }),
                text,
                negative: true,
            }
        }
    }
}

pub fn counterpart(loaded: &Loaded) -> Result<Report, CliError> {
    let bar = loaded.channel.regular_counterpart();
    let name = loaded.name.as_ref().map(|n| format!("{n} (regular counterpart)"));
    let file = ChannelFile::from_channel(name, bar.as_compound());
    let json = serde_json::to_value(&file).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut text = String::from("regular counterpart:\n");
    for row in bar.matrix() {
        let _ = writeln!(text, "  {}", row.iter().map(render).collect::<Vec<_>>().join("  "));
    }
    Ok(Report {
        json,
        text,
        negative: false,
    })
}

struct Feasibility {
    json: Value,
    text: String,
    feasible: bool,
}

/// Runs the inequality route and both shortest-path routes and insists they agree.
fn feasibility(channel: &CompoundChannel, d: &GdofTuple) -> Result<Feasibility, CliError> {
    let membership = region::member(channel, d).map_err(|e| CliError::Domain(e.to_string()))?;
    let full_graph = build_full(channel, d).map_err(|e| CliError::Invalid(e.to_string()))?;
    let full = shortest_paths(&full_graph);
    let reduced = shortest_paths(&build_reduced(channel, d).map_err(|e| CliError::Invalid(e.to_string()))?);
    let inside = membership.is_inside();
    if inside != full.is_feasible() || inside != reduced.is_feasible() {
        return Err(CliError::CrossCheck(format!(
            "target {d}: inequalities say {inside}, full graph {}, reduced graph {}",
            full.is_feasible(),
            reduced.is_feasible()
        )));
    }
    let users = channel.user_count();
    Ok(match (membership, full) {
        (Membership::Inside, ShortestPathResult::Feasible { l_dst }) => Feasibility {
            text: format!("target {d}: feasible\n  shortest-path allocation {}\n", paren(l_dst.iter().map(render))),
            json: json!({ "target": report::tuple(d), "feasible": true, "l_dst": report::qs(&l_dst) }),
            feasible: true,
        },
        (Membership::Outside(c), ShortestPathResult::Infeasible { cycle, length }) => {
            let labels: Vec<String> = cycle.iter().map(|&v| full_graph.label(v)).collect();
            Feasibility {
                text: format!(
                    "target {d}: infeasible\n  violated {c} (left side {})\n  negative circuit {} of length {}\n",
                    render(&c.lhs(d)),
                    labels.join(" -> "),
                    render(&length)
                ),
                json: json!({
                    "target": report::tuple(d),
                    "feasible": false,
                    "violated": constraint_json(&c, users),
                    "lhs": report::q(&c.lhs(d)),
                    "circuit": report::circuit(&labels, &length),
                }),
                feasible: false,
            }
        }
        _ => unreachable!("routes agree"),
    })
}

pub fn feasible(loaded: &Loaded, targets: &[GdofTuple], debug: bool) -> Result<Report, CliError> {
    let mut json = Vec::new();
    let mut text = String::new();
    let mut negative = false;
    for d in targets {
        if debug {
            debug_graph(&loaded.channel, d);
        }
        let f = feasibility(&loaded.channel, d)?;
        negative |= !f.feasible;
        json.push(f.json);
        text.push_str(&f.text);
    }
    Ok(Report {
        json: json!({ "results": json }),
        text,
        negative,
    })
}

pub fn region(loaded: &Loaded) -> Result<Report, CliError> {
    let rc = region::region_constraints(&loaded.channel).map_err(|e| CliError::Domain(e.to_string()))?;
    let users = rc.user_count();
    let mut text: String = rc.constraints().iter().map(|c| c.export(users) + "\n").collect();
    let (sum, symmetric) = match (rc.sum_gdof(), rc.symmetric_gdof()) {
        (Ok((total, argmax)), Ok(sym)) => {
            let _ = writeln!(text, "# sum GDoF {} at {argmax}", render(&total));
            let _ = writeln!(text, "# symmetric GDoF {}", render(&sym));
            (
                json!({ "value": report::q(&total), "argmax": report::tuple(&argmax) }),
                report::q(&sym),
            )
        }
        _ => {
            text.push_str("# region is empty\n");
            (Value::Null, Value::Null)
        }
    };
    Ok(Report {
        json: json!({
            "constraints": rc.constraints().iter().map(|c| constraint_json(c, users)).collect::<Vec<_>>(),
            "raw_count": rc.raw_count(),
            "empty": rc.is_empty_region(),
            "sum_gdof": sum,
            "symmetric_gdof": symmetric,
        }),
        text,
        negative: false,
    })
}

pub fn pareto(loaded: &Loaded, targets: &[GdofTuple], debug: bool) -> Result<Report, CliError> {
    let rc = region::region_constraints(&loaded.channel).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut json = Vec::new();
    let mut text = String::new();
    let mut negative = false;
    for d in targets {
        if debug {
            debug_graph(&loaded.channel, d);
        }
        let f = feasibility(&loaded.channel, d)?;
        if !f.feasible {
            negative = true;
            json.push(json!({ "target": report::tuple(d), "member": false, "pareto": false, "feasibility": f.json }));
            text.push_str(&f.text);
            continue;
        }
        let is_pareto = rc.pareto(d).map_err(|e| CliError::Domain(e.to_string()))?;
        let slack: Vec<_> = (0..d.len()).map(|k| rc.slack(d, k)).collect();
        negative |= !is_pareto;
        let _ = writeln!(
            text,
            "target {d}: {}\n  slack per user {}",
            if is_pareto { "pareto optimal" } else { "not pareto optimal" },
            paren(slack.iter().map(render))
        );
        json.push(json!({
            "target": report::tuple(d),
            "member": true,
            "pareto": is_pareto,
            "slack": report::qs(&slack),
        }));
    }
    Ok(Report {
        json: json!({ "results": json }),
        text,
        negative,
    })
}

/// Expands an allocation over active users to all users.
fn expand(solution: &Solution, values: &[compound_tin::Q], users: usize) -> Vec<UserPower> {
    let mut out = vec![UserPower::Silent; users];
    for (i, &k) in solution.active.iter().enumerate() {
        out[k] = UserPower::Exponent(values[i].clone());
    }
    out
}

fn trace_report(solution: &Solution, users: usize, text: &mut String) -> Value {
    let original = |i: usize| solution.active[i] + 1;
    match &solution.trace {
        SolveTrace::None => Value::Null,
        SolveTrace::Gsfpc(t) => {
            let iterates: Vec<Value> = t
                .iterates
                .iter()
                .map(|r| report::powers(&expand(solution, r.values(), users)))
                .collect();
            let _ = writeln!(text, "  {} iterations, converged: {}", t.iterations, t.converged);
            for (n, r) in t.iterates.iter().enumerate() {
                let _ = writeln!(text, "  r({n}) = {}", paren(expand(solution, r.values(), users)));
            }
            json!({ "iterations": t.iterations, "converged": t.converged, "iterates": iterates })
        }
        SolveTrace::Ggpc(t) => {
            let initial = expand(solution, t.initial.values(), users);
            let _ = writeln!(text, "  r(0) = {}", paren(&initial));
            let updates: Vec<Value> = t
                .updates
                .iter()
                .enumerate()
                .map(|(n, u)| {
                    let allocation = expand(solution, u.allocation.values(), users);
                    let mut achieved = vec![compound_tin::Q::default(); users];
                    for (i, &k) in solution.active.iter().enumerate() {
                        achieved[k] = u.achieved[i].clone();
                    }
                    let fixed: Vec<usize> = u.fixed.iter().map(|&i| original(i)).collect();
                    let _ = writeln!(
                        text,
                        "  update {n}: step {}, fixed users {}, r({}) = {}, achieved {}",
                        render(&u.step),
                        paren(&fixed),
                        n + 1,
                        paren(&allocation),
                        paren(achieved.iter().map(render))
                    );
                    json!({
                        "step": report::q(&u.step),
                        "fixed": fixed,
                        "allocation": report::powers(&allocation),
                        "achieved": report::qs(&achieved),
                    })
                })
                .collect();
            json!({ "initial": report::powers(&initial), "updates": updates })
        }
    }
}

fn infeasible_report(d: &GdofTuple, err: &power::PowerError, text: &mut String) -> Value {
    let _ = writeln!(text, "target {d}: {err}");
    let mut out = json!({ "target": report::tuple(d), "error": err.to_string() });
    if let power::PowerError::Infeasible { cycle, length } = err {
        out["circuit"] = report::circuit(cycle, length);
    }
    out
}

pub fn power(loaded: &Loaded, targets: &[GdofTuple], algorithm: Algorithm, debug: bool) -> Result<Report, CliError> {
    let users = loaded.channel.user_count();
    let mut json = Vec::new();
    let mut text = String::new();
    let mut negative = false;
    for d in targets {
        if debug {
            debug_graph(&loaded.channel, d);
        }
        let solution = match power::solve(&loaded.channel, d, algorithm) {
            Ok(s) => s,
            Err(err @ (power::PowerError::Infeasible { .. } | power::PowerError::NotConverged { .. })) => {
                negative = true;
                json.push(infeasible_report(d, &err, &mut text));
                continue;
            }
            Err(other) => return Err(CliError::Invalid(other.to_string())),
        };
        let _ = writeln!(
            text,
            "target {d}, algorithm {algorithm}{}: allocation {} achieving {}",
            if solution.via_counterpart { " (on the regular counterpart)" } else { "" },
            paren(&solution.allocation),
            solution.achieved
        );
        let trace = trace_report(&solution, users, &mut text);
        json.push(json!({
            "target": report::tuple(d),
            "algorithm": algorithm.name(),
            "via_counterpart": solution.via_counterpart,
            "allocation": report::powers(&solution.allocation),
            "achieved": report::tuple(&solution.achieved),
            "trace": trace,
        }));
    }
    Ok(Report {
        json: json!({ "results": json }),
        text,
        negative,
    })
}

pub enum AllocSource {
    Explicit(Vec<UserPower>),
    Algorithms(Vec<Algorithm>),
}

pub fn parse_alloc(text: &str, users: usize) -> Result<Vec<UserPower>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != users {
        return Err(CliError::Invalid(format!(
            "allocation has {} entries, channel has {users} users",
            parts.len()
        )));
    }
    parts
        .into_iter()
        .map(|p| {
            if p == "silent" {
                return Ok(UserPower::Silent);
            }
            let v = parse_list(p, "--alloc")?.remove(0);
            if v > compound_tin::Q::default() {
                return Err(CliError::Invalid(format!("exponent {p} is positive")));
            }
            Ok(UserPower::Exponent(v))
        })
        .collect()
}

pub fn parse_powers(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("--P value {p:?}: {e}")))
        })
        .collect()
}

pub fn rates(
    loaded: &Loaded,
    source: AllocSource,
    targets: Option<&[GdofTuple]>,
    powers: &[f64],
    json_out: bool,
) -> Result<Report, CliError> {
    let mut named: Vec<(String, Vec<UserPower>)> = Vec::new();
    match source {
        AllocSource::Explicit(r) => named.push(("explicit".into(), r)),
        AllocSource::Algorithms(algs) => {
            let targets = targets.ok_or_else(|| CliError::Invalid("algorithms need a target".into()))?;
            for (n, d) in targets.iter().enumerate() {
                for &alg in &algs {
                    let solution = power::solve(&loaded.channel, d, alg).map_err(|e| CliError::Domain(e.to_string()))?;
                    let name = if targets.len() == 1 {
                        alg.name().to_string()
                    } else {
                        format!("{}:t{}", alg.name(), n + 1)
                    };
                    named.push((name, solution.allocation));
                }
            }
        }
    }
    let rows = snr::sweep(&loaded.channel, &named, powers).map_err(|e| CliError::Invalid(e.to_string()))?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Domain(e.to_string());
    writer
        .write_record(["alloc", "P", "user", "rate", "sum_rate", "min_rate", "total_power", "efficiency"])
        .map_err(io)?;
    let mut json_rows = Vec::new();
    for row in &rows {
        let r = &row.report;
        for (k, rate) in r.rates.iter().enumerate() {
            writer
                .write_record([
                    row.alloc.clone(),
                    significant(r.p),
                    (k + 1).to_string(),
                    significant(*rate),
                    significant(r.sum_rate),
                    significant(r.min_rate),
                    significant(r.total_power),
                    significant(r.efficiency),
                ])
                .map_err(io)?;
        }
        if json_out {
            json_rows.push(json!({
                "alloc": row.alloc,
                "P": significant(r.p),
                "rates": r.rates.iter().map(|v| significant(*v)).collect::<Vec<_>>(),
                "sum_rate": significant(r.sum_rate),
                "min_rate": significant(r.min_rate),
                "total_power": significant(r.total_power),
                "efficiency": significant(r.efficiency),
            }));
        }
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Domain(e.to_string()))?;
    let allocations: Vec<Value> = named
        .iter()
        .map(|(name, r)| json!({ "name": name, "allocation": report::powers(r) }))
        .collect();
    Ok(Report {
        json: json!({ "allocations": allocations, "rows": json_rows }),
        text: String::from_utf8(bytes).expect("csv output is utf-8"),
        negative: false,
    })
}
