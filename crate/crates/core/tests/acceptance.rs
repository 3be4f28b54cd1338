mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::*;
use compound_tin::graph::{build_full, build_reduced, shortest_paths};
use compound_tin::oracle::{grid_minimum, oracle_globally_optimal};
use compound_tin::power::{
    achieved_gdof, achieved_gdof_polyhedral, ggpc, ggpc_compound, gsfpc, locally_optimal, shortest_path_allocation,
    PowerExponents,
};
use compound_tin::rational::q;
use compound_tin::region::{member, pareto, region_constraints, sum_gdof, symmetric_gdof};
use compound_tin::{fixtures, snr, CompoundChannel, GdofTuple, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn tuple(values: &[&str]) -> GdofTuple {
    GdofTuple::new(values.iter().map(|v| q(v)).collect()).unwrap()
}

fn exps(values: &[&str]) -> PowerExponents {
    PowerExponents::new(values.iter().map(|v| q(v)).collect()).unwrap()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn walkthrough_trace() -> Outcome {
    let c = fixtures::three_user_walkthrough();
    let (r, trace) = ggpc(&c, &tuple(&["0.5", "0.6", "0.7"])).map_err(|e| e.to_string())?;
    ensure(trace.initial == exps(&["-0.1", "0", "-0.1"]), || format!("r(0) = {}", trace.initial))?;
    let steps: Vec<Q> = trace.updates.iter().map(|u| u.step.clone()).collect();
    ensure(steps == [q("0.4"), q("0.2"), q("0.5")], || format!("steps {steps:?}"))?;
    let fixed: Vec<Vec<usize>> = trace.updates.iter().map(|u| u.fixed.clone()).collect();
    ensure(fixed == [vec![1], vec![2], vec![0]], || format!("fixed sets {fixed:?}"))?;
    let expected = [
        (exps(&["-0.5", "-0.4", "-0.5"]), tuple(&["1", "0.6", "0.9"])),
        (exps(&["-0.7", "-0.4", "-0.7"]), tuple(&["1", "0.6", "0.7"])),
        (exps(&["-1.2", "-0.4", "-0.7"]), tuple(&["0.5", "0.6", "0.7"])),
    ];
    for (n, (u, (alloc, achieved))) in trace.updates.iter().zip(&expected).enumerate() {
        ensure(&u.allocation == alloc && &u.achieved == achieved, || {
            format!("update {n}: {} achieving {}", u.allocation, u.achieved)
        })?;
    }
    ensure(r == expected[2].0, || format!("final {r}"))?;
    Ok(format!("r(0) = {}, steps 0.4, 0.2, 0.5, final {r}", trace.initial))
}

fn region_reproduction() -> Outcome {
    let a = fixtures::asymmetric_three_user();
    let rc = region_constraints(a.as_compound()).map_err(|e| e.to_string())?;
    let lines: Vec<String> = rc.constraints().iter().map(ToString::to_string).collect();
    let expected = [
        "d1 <= 2",
        "d2 <= 2",
        "d3 <= 1",
        "d1 + d2 <= 2",
        "d1 + d3 <= 2.2",
        "d2 + d3 <= 2.2",
        "d1 + d2 + d3 <= 3.2",
    ];
    ensure(lines == expected, || format!("constraints {lines:?}"))?;
    let (total, _) = sum_gdof(a.as_compound()).map_err(|e| e.to_string())?;
    ensure(total == q("3"), || format!("sum GDoF {total}"))?;
    let sym_a = symmetric_gdof(a.as_compound()).map_err(|e| e.to_string())?;
    ensure(sym_a == q("1"), || format!("symmetric GDoF {sym_a}"))?;
    let sym4 = symmetric_gdof(&fixtures::symmetric_four_user()).map_err(|e| e.to_string())?;
    ensure(sym4 == q("1"), || format!("symmetric GDoF of the 4-user channel {sym4}"))?;
    Ok("seven inequalities, sum 3, symmetric 1 and 1".into())
}

fn finite_snr_loss() -> Outcome {
    let sym = fixtures::symmetric_four_user();
    let d = tuple(&["1", "1", "1", "1"]);
    let (fixed_point, _) = gsfpc(&sym, &d).map_err(|e| e.to_string())?;
    ensure(fixed_point == PowerExponents::zeros(4), || format!("fixed point {fixed_point}"))?;
    let (global, _) = ggpc_compound(&sym, &d).map_err(|e| e.to_string())?;
    let full = snr::rates(&sym, &fixed_point, 1000.0).map_err(|e| e.to_string())?;
    let reduced = snr::rates(&sym, &global, 1000.0).map_err(|e| e.to_string())?;
    let loss = 1.0 - reduced.min_rate / full.min_rate;
    ensure((0.044..=0.054).contains(&loss), || format!("loss {loss}"))?;
    Ok(format!("relative symmetric-rate loss {loss:.4}"))
}

fn equivalence_properties(rng: &mut ChaCha8Rng) -> Outcome {
    let mut feasible = 0;
    let mut solved = 0;
    for instance in 0..500 {
        let ch = random_channel(rng, &DEFAULT_SHAPE);
        let d = random_target(rng, &ch, false);
        let inside = member(&ch, &d).unwrap().is_inside();
        let full = shortest_paths(&build_full(&ch, &d).unwrap()).is_feasible();
        let reduced = shortest_paths(&build_reduced(&ch, &d).unwrap()).is_feasible();
        ensure(inside == full && inside == reduced, || {
            format!("instance {instance}: inequalities {inside}, full graph {full}, reduced graph {reduced}")
        })?;
        feasible += usize::from(inside);

        let bar = ch.regular_counterpart();
        for _ in 0..10 {
            let r = random_exponents(rng, ch.user_count());
            let a = achieved_gdof(&ch, &r).unwrap();
            let b = achieved_gdof(bar.as_compound(), &r).unwrap();
            ensure(a == b, || format!("instance {instance}, r = {r}: {a} vs {b}"))?;
        }

        if let Some(d) = random_feasible_target(rng, &ch, true) {
            let (direct, _) = ggpc_compound(&ch, &d).map_err(|e| e.to_string())?;
            let (via, _) = ggpc(&bar, &d).map_err(|e| e.to_string())?;
            ensure(direct == via, || format!("instance {instance}: {direct} vs {via}"))?;
            solved += 1;
        }
    }
    Ok(format!("500 instances, {feasible} feasible random targets, {solved} power-control comparisons"))
}

fn global_optimality(rng: &mut ChaCha8Rng) -> Outcome {
    let shape = Shape {
        max_users: 3,
        max_states: 3,
        direct: (5, 30),
        cross: (0, 20),
    };
    let (step, floor) = (q("0.1"), q("-5"));
    let mut checked = 0;
    while checked < 100 {
        let ch = random_channel(rng, &shape);
        let Some(d) = random_feasible_target(rng, &ch, true) else {
            continue;
        };
        let (r, _) = if ch.is_regular() {
            ggpc(&compound_tin::RegularChannel::from_compound(ch.clone()).unwrap(), &d)
        } else {
            ggpc_compound(&ch, &d)
        }
        .map_err(|e| e.to_string())?;
        let optimal = oracle_globally_optimal(&ch, &r, &d, &step, &floor).map_err(|e| e.to_string())?;
        ensure(optimal, || format!("oracle rejects {r} for target {d}"))?;
        let minimum = grid_minimum(&ch, &d, &step, &floor).map_err(|e| e.to_string())?;
        ensure(minimum.as_deref() == Some(r.values()), || {
            format!("grid minimum {minimum:?} differs from {r}")
        })?;
        checked += 1;
    }
    Ok("100 targets confirmed by exhaustive grid search".into())
}

fn shortest_path_dominance(rng: &mut ChaCha8Rng) -> Outcome {
    let mut tested = 0;
    for _ in 0..500 {
        let ch = random_channel(rng, &DEFAULT_SHAPE);
        let Some(d) = random_feasible_target(rng, &ch, false) else {
            continue;
        };
        let r = shortest_path_allocation(&ch, &d).map_err(|e| e.to_string())?;
        let achieved = achieved_gdof(&ch, &r).unwrap();
        ensure(achieved.dominates(&d), || format!("l_dst = {r} achieves {achieved} < {d}"))?;
        let polyhedral = achieved_gdof_polyhedral(&ch, &r).map_err(|e| e.to_string())?;
        ensure(polyhedral.dominates(&d), || format!("l_dst = {r} is not polyhedral-valid for {d}"))?;
        tested += 1;
    }
    Ok(format!("{tested} feasible targets"))
}

fn pareto_full_power(rng: &mut ChaCha8Rng) -> Outcome {
    let mut tested = 0;
    let mut fixture_targets = vec![
        (fixtures::asymmetric_three_user().into_compound(), tuple(&["1", "1", "1"])),
        (fixtures::asymmetric_three_user().into_compound(), tuple(&["1.2", "0.8", "1"])),
        (fixtures::symmetric_four_user(), tuple(&["1", "1", "1", "1"])),
        (fixtures::two_user_compound(), tuple(&["0.5", "0.5"])),
    ];
    for _ in 0..300 {
        let ch = random_channel(rng, &DEFAULT_SHAPE);
        let rc = region_constraints(&ch).unwrap();
        if rc.is_empty_region() {
            continue;
        }
        let (_, argmax) = rc.sum_gdof().unwrap();
        fixture_targets.push((ch, argmax));
    }
    for (ch, d) in fixture_targets {
        if !pareto(&ch, &d).map_err(|e| e.to_string())? {
            continue;
        }
        let r = shortest_path_allocation(&ch, &d).map_err(|e| e.to_string())?;
        let top = r.values().iter().max().unwrap();
        ensure(*top == Q::from_integer(0.into()), || format!("pareto target {d} has l_dst = {r}"))?;
        tested += 1;
    }
    ensure(tested > 100, || format!("only {tested} pareto targets"))?;
    Ok(format!("{tested} pareto-optimal targets"))
}

fn gsfpc_behavior(rng: &mut ChaCha8Rng) -> Outcome {
    let c = fixtures::three_user_walkthrough();
    let d = tuple(&["0.5", "0.6", "0.7"]);
    let (r, trace) = gsfpc(c.as_compound(), &d).map_err(|e| e.to_string())?;
    ensure(r == exps(&["-1.2", "-0.4", "-0.7"]), || format!("walkthrough fixed point {r}"))?;
    ensure(trace.iterations <= 8, || format!("{} iterations", trace.iterations))?;
    let walkthrough_iterations = trace.iterations;

    let mut instances: Vec<(CompoundChannel, GdofTuple)> = vec![(c.into_compound(), d)];
    while instances.len() < 200 {
        let ch = random_channel(rng, &DEFAULT_SHAPE);
        if let Some(d) = random_feasible_target(rng, &ch, true) {
            instances.push((ch, d));
        }
    }
    for (ch, d) in &instances {
        let (fixed_point, trace) = gsfpc(ch, d).map_err(|e| e.to_string())?;
        for w in trace.iterates.windows(2) {
            ensure(w[1].below(&w[0]), || format!("iterate {} rises above {}", w[1], w[0]))?;
        }
        ensure(locally_optimal(ch, &fixed_point, d).map_err(|e| e.to_string())?, || {
            format!("fixed point {fixed_point} is not locally optimal")
        })?;
        let (global, _) = ggpc_compound(ch, d).map_err(|e| e.to_string())?;
        ensure(global.below(&fixed_point), || format!("fixed point {fixed_point} below {global}"))?;
    }
    Ok(format!(
        "{} instances; walkthrough converged in {walkthrough_iterations} iterations",
        instances.len()
    ))
}

fn tin_implication(rng: &mut ChaCha8Rng) -> Outcome {
    // weak cross links make the condition hold often enough to be informative
    let shape = Shape {
        max_users: 4,
        max_states: 3,
        direct: (10, 30),
        cross: (0, 10),
    };
    let mut optimal = 0;
    for n in 0..200 {
        let ch = random_channel(rng, &shape);
        if ch.tin_optimal().is_optimal() {
            optimal += 1;
            ensure(ch.regular_counterpart().as_compound().tin_optimal().is_optimal(), || {
                format!("channel {n} is TIN-optimal but its counterpart is not")
            })?;
        }
    }
    ensure(optimal > 0, || "no TIN-optimal channel sampled".into())?;
    let witness = fixtures::counterpart_only_tin_optimal();
    ensure(!witness.tin_optimal().is_optimal(), || "fixture satisfies the condition".into())?;
    ensure(witness.regular_counterpart().as_compound().tin_optimal().is_optimal(), || {
        "fixture counterpart violates the condition".into()
    })?;
    Ok(format!("{optimal} of 200 channels TIN-optimal; converse fails on the fixture"))
}

fn gdof_limit() -> Outcome {
    let c = fixtures::three_user_walkthrough();
    let (r, _) = ggpc(&c, &tuple(&["0.5", "0.6", "0.7"])).map_err(|e| e.to_string())?;
    let check = snr::gdof_limit_check(c.as_compound(), &r, &[1e6]).map_err(|e| e.to_string())?;
    let gap = check.final_gap();
    ensure(gap <= 0.02, || format!("gap {gap}"))?;
    Ok(format!("largest gap {gap:.4} at P = 1e6"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7123);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>)> = vec![
        ("walkthrough trace reproduced exactly", Box::new(|_| walkthrough_trace())),
        ("asymmetric region and GDoF values", Box::new(|_| region_reproduction())),
        ("finite-SNR rate loss at P = 1000", Box::new(|_| finite_snr_loss())),
        ("membership, counterpart and power-control equivalences", Box::new(equivalence_properties)),
        ("global optimality against grid oracle", Box::new(global_optimality)),
        ("shortest-path allocation dominates target", Box::new(shortest_path_dominance)),
        ("pareto targets keep a full-power user", Box::new(pareto_full_power)),
        ("fixed-point iteration behavior", Box::new(gsfpc_behavior)),
        ("TIN-optimality carries to the counterpart", Box::new(tin_implication)),
        ("normalized rates near the GDoF at P = 1e6", Box::new(|_| gdof_limit())),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut rng)))
            .unwrap_or_else(|panic| Err(panic.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
