//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use commsup::automata::{check_inclusion, languages_equal, prefix_closure, sync_product, Mode};
use commsup::control::{
    is_controllable, is_coobservable, is_normal, supcn, supcon, ControlContext, CoobservabilityViolation,
};
use commsup::decomposition::{find_extension, is_separable, rcd, ExtensionStrategy};
use commsup::hardness::{build_separability_instance, intersection_nonempty_oracle};
use commsup::observation::project;
use commsup::synthesis::{
    prepare, resolve_conflicts, synthesize, AgentProfile, DecentralizedProblem, LocalMode, OptimalCoordination,
};
use commsup::{Alphabet, Generator, Verdict, Word, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn example_one() -> DecentralizedProblem {
    DecentralizedProblem::new(
        lang("abcd", &["aac", "abc", "bac", "bbd"], true),
        lang("abcd", &["aa", "ba", "bbd", "abc"], true),
        vec![AgentProfile::new(ab("ac"), ab("ac")), AgentProfile::new(ab("bd"), ab("bd"))],
    )
    .unwrap()
}

fn example_one_end_to_end() -> Outcome {
    let start = Instant::now();
    let p = example_one();
    let np = prepare(&p, ExtensionStrategy::Minimal, true).map_err(|e| e.to_string())?;
    let sigmas: Vec<_> = np.agents.iter().map(|a| a.sigma.clone()).collect();
    ensure(sigmas == [ab("b"), ab("b")], || format!("extensions {sigmas:?}"))?;
    let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let eq = |g: &Generator, h: &Generator| languages_equal(g, h, Mode::Marked).unwrap();
    ensure(eq(&r.locals[0], &lang("abc", &["aa", "abc", "ba", "bb"], true)), || "R_1 differs".into())?;
    ensure(eq(&r.locals[1], &lang("bd", &["bbd"], true)), || "R_2 differs".into())?;

    let ctx = ControlContext::fully_observed(&p.plant, &p.uncontrollable()).unwrap();
    let central = supcon(&p.spec, &ctx).unwrap();
    ensure(eq(&r.composed, &central) && eq(&central, &p.spec), || "composition is not supC(K,L,∅)=K".into())?;
    let ctx = ControlContext::new(&p.plant, &p.uncontrollable(), &p.observable()).unwrap();
    let extended = is_coobservable(&r.composed, &ctx, &np.views(), DEFAULT_BUDGET).unwrap();
    ensure(extended.holds(), || "composition not coobservable for {a,b,c},{b,d}".into())?;

    let views: Vec<_> = p
        .agents
        .iter()
        .map(|a| commsup::control::LocalView::new(a.observable.clone(), a.controllable.clone()))
        .collect();
    let Verdict::Fails(CoobservabilityViolation { word, event, confusions }) =
        is_coobservable(&p.spec, &ctx, &views, DEFAULT_BUDGET).unwrap()
    else {
        return Err("original alphabets reported coobservable".into());
    };
    ensure(word == Word::from_symbols("ba") && event.as_str() == "c", || format!("witness s={word} a={event}"))?;
    let [(0, other)] = confusions.as_slice() else { return Err(format!("confusions {confusions:?}")) };
    // The confusion is a word of K that agent 1 cannot tell apart from `ba`
    // and that K continues with `c`.
    let obs = &p.agents[0].observable;
    ensure(
        other.project(obs) == word.project(obs)
            && p.spec.contains(&other.with(event.clone()), Mode::Marked).unwrap()
            && !p.spec.contains(&word.with(event.clone()), Mode::Generated).unwrap()
            && p.plant.contains(&word.with(event.clone()), Mode::Generated).unwrap(),
        || format!("confusion {other} does not validate"),
    )?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("R_1, R_2 exact; witness s={word}; a={event}; agent1={other}"))
}

fn two_level_decomposition() -> Outcome {
    let start = Instant::now();
    let k = load("ex20_spec.gen");
    let inputs = [ab("ae"), ab("be"), ab("cf"), ab("df")];
    let plan = rcd(&k, &inputs, ExtensionStrategy::Minimal).map_err(|e| e.to_string())?;
    ensure(plan.sigma_all == ab("f"), || format!("sigma_all = {}", plan.sigma_all))?;
    let want_sigmas = [ab("aef"), ab("aef"), ab("cf"), ab("cf")];
    ensure(plan.sigmas == want_sigmas, || format!("sigmas {:?}", plan.sigmas))?;
    let want_b = [ab("aef"), ab("abef"), ab("cf"), ab("cdf")];
    ensure(plan.alphabets == want_b, || format!("alphabets {:?}", plan.alphabets))?;

    let abef = project(&k, &ab("abef")).unwrap();
    let cdf = project(&k, &ab("cdf")).unwrap();
    ensure(languages_equal(&abef, &lang("abef", &["abef", "afb", "fab"], true), Mode::Marked).unwrap(), || {
        "P_abef(K) differs".into()
    })?;
    ensure(languages_equal(&cdf, &lang("cdf", &["cdf"], true), Mode::Marked).unwrap(), || "P_cdf(K) differs".into())?;

    let single = find_extension(&k, &inputs, ExtensionStrategy::Minimal).map_err(|e| e.to_string())?;
    ensure(single == ab("acef"), || format!("minimal extension {single}"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("sigma_all={}; minimal single extension {}", plan.sigma_all, single))
}

fn example_four_modes() -> Outcome {
    let p = DecentralizedProblem::new(
        lang("abdu", &["ab", "ba", "bdau", "dbau"], true),
        lang("abdu", &["ab", "ba", "bd", "db"], true),
        vec![AgentProfile::new(ab("au"), ab("ad")), AgentProfile::new(ab("bu"), ab("b"))],
    )
    .unwrap();
    let np = prepare(&p, ExtensionStrategy::Minimal, true).map_err(|e| e.to_string())?;
    let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let want = lang("abdu", &["", "a", "b", "d", "ab", "ba"], false);
    ensure(languages_equal(&r.composed, &want, Mode::Marked).unwrap(), || "all-supcon composition differs".into())?;
    ensure(!languages_equal(&r.composed, &np.spec, Mode::Marked).unwrap(), || "not a proper subset".into())?;
    let r = synthesize(&np, &[LocalMode::Supcon, LocalMode::Infimal], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(languages_equal(&r.composed, &np.spec, Mode::Marked).unwrap(), || "mixed composition differs from K".into())?;
    Ok("supcon gives {ε,a,b,d,ab,ba}; supcon+infimal gives K".into())
}

fn reduction_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonempty = 0;
    for round in 0..50 {
        let sigma = ab(&"abc"[..rng.gen_range(1..=3)]);
        let n = rng.gen_range(1..=3);
        let dfas: Vec<Generator> = (0..n)
            .map(|_| {
                let states = rng.gen_range(1..=4);
                random_generator(&mut rng, &sigma, states, 0.6, 0.4)
            })
            .collect();
        let oracle = intersection_nonempty_oracle(&dfas).unwrap();
        let inst = build_separability_instance(&dfas).unwrap();
        let separable = is_separable(&inst.generator, &inst.alphabets).unwrap().holds();
        ensure(oracle.is_some() != separable, || format!("instance {round}: oracle {oracle:?}, separable {separable}"))?;
        nonempty += usize::from(oracle.is_some());
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("50 instances, {nonempty} with nonempty intersection, 0 mismatches"))
}

/// Random local plants and specifications whose compositions give a
/// separable problem by construction.
fn separable_problem(rng: &mut ChaCha8Rng, overlap: f64, marking: f64) -> Option<DecentralizedProblem> {
    let global = ab("abcde");
    let agents = rng.gen_range(2..=3);
    let alphabets = random_cover(rng, &global, agents, overlap);
    if alphabets.iter().any(Alphabet::is_empty) {
        return None;
    }
    let mut plants = Vec::new();
    let mut specs = Vec::new();
    for a in &alphabets {
        let n = rng.gen_range(1..=4);
        let plant = prefix_closure(&random_generator(rng, a, n, 0.6, 1.0).trim());
        let n = rng.gen_range(1..=2);
        let filter = random_generator(rng, a, n, 0.9, marking);
        specs.push(sync_product(&[plant.clone(), filter]).trim());
        plants.push(plant);
    }
    let plant = prefix_closure(&sync_product(&plants).trim()).with_alphabet_order(&global).ok()?;
    let spec = sync_product(&specs).trim().with_alphabet_order(&global).ok()?;
    if spec.is_empty_language() {
        return None;
    }
    let profiles = alphabets
        .iter()
        .map(|a| AgentProfile::new(a.clone(), random_subset(rng, a, 0.6)))
        .collect();
    DecentralizedProblem::new(plant, spec, profiles).ok()
}

fn pipeline_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        ensure(attempts < 10_000, || "could not generate enough instances".into())?;
        let Some(p) = separable_problem(&mut rng, 0.5, 0.6) else { continue };
        ensure(is_separable(&p.spec, &p.observable_alphabets()).unwrap().holds(), || "not separable".into())?;
        let np = prepare(&p, ExtensionStrategy::Greedy, true).map_err(|e| e.to_string())?;
        let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let ctx = np.context().unwrap();
        let fail = |what: &str| format!("instance {done}: {what}\n{}", r.certificates.report());
        ensure(check_inclusion(&r.composed, &np.spec, Mode::Marked).unwrap().holds(), || fail("not within K"))?;
        ensure(is_controllable(&r.composed, &ctx).unwrap().holds(), || fail("not controllable"))?;
        let coobs = is_coobservable(&r.composed, &ctx, &np.views(), DEFAULT_BUDGET).unwrap();
        ensure(coobs.holds(), || fail("not coobservable"))?;
        done += 1;
    }
    Ok(format!("100 instances ({attempts} drawn), 0 failures"))
}

fn over_approximation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let global = ab("abcd");
    for round in 0..100 {
        let states = rng.gen_range(1..=5);
        let l = random_generator(&mut rng, &global, states, 0.5, 0.5).trim().with_alphabet_order(&global).unwrap();
        let parts = rng.gen_range(2..=3);
        let alphabets = random_cover(&mut rng, &global, parts, 0.5);
        let sigma = random_subset(&mut rng, &global, 0.3);
        let compose = |alphas: &[Alphabet]| {
            let ps: Vec<_> = alphas.iter().map(|a| project(&l, a).unwrap()).collect();
            sync_product(&ps).trim().with_alphabet_order(&global).unwrap()
        };
        let coarse = compose(&alphabets);
        let extended: Vec<Alphabet> = alphabets.iter().map(|a| global.intersection(&a.union(&sigma))).collect();
        let finer = compose(&extended);
        let inside = |x: &Generator, y: &Generator| check_inclusion(x, y, Mode::Marked).unwrap().holds();
        ensure(inside(&l, &finer), || format!("round {round}: L not inside the extended composition"))?;
        ensure(inside(&finer, &coarse), || format!("round {round}: extended composition not inside the coarse one"))?;
    }
    Ok("100 instances, 0 failures".into())
}

fn supremal_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 30 {
        let alphabet = ab(&"abc"[..rng.gen_range(1..=3)]);
        let plant_words: Vec<Word> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let len = rng.gen_range(0..=4);
                Word((0..len).map(|_| alphabet.get(rng.gen_range(0..alphabet.len())).clone()).collect())
            })
            .collect();
        let plant = Generator::from_words(&alphabet, &plant_words, true).unwrap();
        let plant_set = words(&plant, 4, Mode::Generated);
        let short: Vec<Word> = plant_set.iter().filter(|w| w.len() <= 3).cloned().collect();
        let candidates: Vec<Word> = short.into_iter().filter(|_| rng.gen_bool(0.5)).take(8).collect();
        if candidates.is_empty() {
            continue;
        }
        let spec = Generator::from_words(&alphabet, &candidates, false).unwrap();
        let uncontrollable = random_subset(&mut rng, &alphabet, 0.4);
        let observable = random_subset(&mut rng, &alphabet, 0.6);
        let ctx = ControlContext::new(&plant, &uncontrollable, &observable).unwrap();

        let got = words(&supcon(&spec, &ctx).unwrap(), 3, Mode::Marked);
        let want = brute_supremal(&candidates, &plant_set, &uncontrollable, None);
        ensure(got == want, || format!("instance {done}: supcon {got:?} vs brute force {want:?}"))?;

        let result = supcn(&spec, &ctx).unwrap();
        let got = words(&result, 3, Mode::Marked);
        let want = brute_supremal(&candidates, &plant_set, &uncontrollable, Some(&observable));
        ensure(got == want, || format!("instance {done}: supcn {got:?} vs brute force {want:?}"))?;
        ensure(is_normal(&result, &ctx).unwrap().holds(), || format!("instance {done}: supcn not normal"))?;
        done += 1;
    }
    Ok("30 instances, supcon and supcn match exhaustive search".into())
}

/// Locals that conflict: agents share `a` and `b`, and the locals disagree
/// on how a shared word continues.
fn conflicting_problem(rng: &mut ChaCha8Rng) -> Option<(commsup::synthesis::NormalizedProblem, commsup::synthesis::SynthesisResult)> {
    let p = separable_problem(rng, 0.8, 0.3)?;
    let np = prepare(&p, ExtensionStrategy::Greedy, true).ok()?;
    let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).ok()?;
    (!r.certificates.nonconflicting.passed()).then_some((np, r))
}

fn conflict_resolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    let mut attempts = 0;
    let mut shared_sizes = BTreeSet::new();
    while done < 20 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {done} conflicting instances found"))?;
        let Some((np, r)) = conflicting_problem(&mut rng) else { continue };
        let res = resolve_conflicts(&np, &r, None, false).map_err(|e| e.to_string())?;
        let c = &res.result.certificates;
        let fail = |what: &str| format!("instance {done}: {what}\n{}", c.report());
        ensure(c.nonconflicting.passed(), || fail("still conflicting"))?;
        ensure(c.controllable.passed(), || fail("not controllable"))?;
        ensure(c.coobservable.passed(), || fail("not coobservable"))?;
        shared_sizes.insert(res.shared.len());
        done += 1;
    }

    let p = example_one();
    let np = prepare(&p, ExtensionStrategy::Minimal, true).unwrap();
    let r = synthesize(&np, &[LocalMode::Supcon], DEFAULT_BUDGET).unwrap();
    let res = resolve_conflicts(&np, &r, None, true).map_err(|e| e.to_string())?;
    ensure(res.optimal == OptimalCoordination::Applied { equals_central: true }, || format!("{:?}", res.optimal))?;
    let central = supcon(&np.spec, &np.context().unwrap()).unwrap();
    ensure(languages_equal(&res.result.composed, &central, Mode::Marked).unwrap(), || "optimal differs".into())?;
    Ok(format!("20 conflicting instances ({attempts} drawn, coordinator sizes {shared_sizes:?}); optimal flag matches supC"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Example 1 end-to-end", example_one_end_to_end),
        ("two-level decomposition", two_level_decomposition),
        ("Example 4 local modes", example_four_modes),
        ("reduction equivalence", reduction_equivalence),
        ("pipeline soundness", pipeline_soundness),
        ("over-approximation", over_approximation),
        ("supcon and supcn oracles", supremal_oracles),
        ("conflict resolution", conflict_resolution),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{spent:.2?}] {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name} [{spent:.2?}] {why}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
