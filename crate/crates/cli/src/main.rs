use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use commsup::automata::{emit_generator, is_nonconflicting, parse_generator, sync_product};
use commsup::control::{
    is_controllable, is_coobservable, is_mutually_controllable, is_normal, is_observable, supcn, supcon,
    ControlContext, LocalView,
};
use commsup::decomposition::{is_conditionally_decomposable, is_separable, rcd, Decomposability, ExtensionStrategy};
use commsup::hardness::build_separability_instance;
use commsup::observation::{is_lcc, is_observer, project};
use commsup::synthesis::{
    check_optimality, parse_agents, prepare, resolve_conflicts, synthesize, DecentralizedProblem, LocalMode,
    NormalizedProblem, OptimalityMethod, OptimalityVerdict, Status, SynthesisResult,
};
use commsup::{Alphabet, Error, Generator, Verdict, Word, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "commsup", version, about = "Decentralized supervisory control with communicating supervisors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a language property and print a witness when it fails.
    Check {
        property: Property,
        #[command(flatten)]
        io: Inputs,
    },
    /// Natural projection of a generator onto an alphabet.
    Project {
        #[command(flatten)]
        io: Inputs,
    },
    /// Synchronous product of generators.
    Product {
        #[command(flatten)]
        io: Inputs,
    },
    /// Supremal controllable sublanguage of the specification.
    Supcon {
        #[command(flatten)]
        io: Inputs,
    },
    /// Supremal controllable and normal sublanguage of the specification.
    Supcn {
        #[command(flatten)]
        io: Inputs,
    },
    /// Communication extensions making the specification conditionally decomposable.
    Rcd {
        #[command(flatten)]
        io: Inputs,
    },
    /// Local supervisors for every agent, with certificates.
    Synthesize {
        #[command(flatten)]
        io: Inputs,
    },
    /// Synthesis followed by a coordinator over shared events.
    ResolveConflicts {
        #[command(flatten)]
        io: Inputs,
        /// Use the optimal coordinator construction.
        #[arg(long)]
        optimal: bool,
    },
    /// Certify that decentralized synthesis matches the centralized solution.
    CheckOptimality {
        #[command(flatten)]
        io: Inputs,
        #[arg(long, value_enum, default_value = "mutual")]
        method: MethodArg,
    },
    /// Build the separability instance for a list of automata.
    ReduceIntersection {
        #[command(flatten)]
        io: Inputs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Controllability,
    Observability,
    Normality,
    Coobservability,
    Separability,
    Cd,
    Observer,
    Lcc,
    MutualControllability,
    Nonconflicting,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mutual,
    ObserverLcc,
}

#[derive(Args, Default)]
struct Inputs {
    /// Plant generator file.
    #[arg(long)]
    plant: Option<PathBuf>,
    /// Specification generator file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Agents file.
    #[arg(long)]
    agents: Option<PathBuf>,
    /// Generator file (repeatable).
    #[arg(long = "gen")]
    generators: Vec<PathBuf>,
    /// Event list such as "a b c" (repeatable).
    #[arg(long = "alphabet")]
    alphabets: Vec<String>,
    /// Uncontrollable events.
    #[arg(long)]
    uncontrollable: Option<String>,
    /// Observable events.
    #[arg(long)]
    observable: Option<String>,
    /// Extension or coordinator events.
    #[arg(long)]
    sigma: Option<String>,
    /// Local synthesis mode, one for all agents or one per agent.
    #[arg(long, value_delimiter = ',')]
    mode: Vec<String>,
    /// Use the minimal-cardinality extension search instead of the greedy one.
    #[arg(long)]
    minimize: bool,
    /// Keep communicated unobservable events unobserved by the receiver.
    #[arg(long)]
    no_communicate_observability: bool,
    /// Product-state budget for the exponential checkers.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a command reports besides its artifacts.
enum Outcome {
    Holds,
    Fails,
    Unverified,
}

impl Outcome {
    fn code(&self) -> u8 {
        match self {
            Outcome::Holds => 0,
            Outcome::Fails => 1,
            Outcome::Unverified => 3,
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Generator> {
    parse_generator(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn events(list: &str) -> Alphabet {
    Alphabet::parse(&list.replace(',', " "))
}

impl Inputs {
    fn required(&self, path: &Option<PathBuf>, flag: &str) -> anyhow::Result<Generator> {
        load(path.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))?)
    }

    fn plant(&self) -> anyhow::Result<Generator> {
        self.required(&self.plant, "plant")
    }

    fn spec(&self) -> anyhow::Result<Generator> {
        self.required(&self.spec, "spec")
    }

    /// The generator under test: `--gen`, or `--spec` when no `--gen` is given.
    fn subject(&self) -> anyhow::Result<Generator> {
        match self.generators.as_slice() {
            [] => self.spec(),
            [one] => load(one),
            _ => bail!("exactly one --gen is expected"),
        }
    }

    fn many(&self) -> anyhow::Result<Vec<Generator>> {
        if self.generators.is_empty() {
            bail!("at least one --gen is required");
        }
        self.generators.iter().map(|p| load(p)).collect()
    }

    fn alphabet_list(&self) -> anyhow::Result<Vec<Alphabet>> {
        if self.alphabets.is_empty() {
            bail!("at least one --alphabet is required");
        }
        Ok(self.alphabets.iter().map(|a| events(a)).collect())
    }

    fn single_alphabet(&self) -> anyhow::Result<Alphabet> {
        match self.alphabets.as_slice() {
            [one] => Ok(events(one)),
            _ => bail!("exactly one --alphabet is expected"),
        }
    }

    fn problem(&self) -> anyhow::Result<DecentralizedProblem> {
        let path = self.agents.as_deref().ok_or_else(|| anyhow!("--agents is required"))?;
        let agents = parse_agents(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        Ok(DecentralizedProblem::new(self.plant()?, self.spec()?, agents)?)
    }

    /// Control context from `--agents`, or from `--uncontrollable` and
    /// `--observable` (defaults: none uncontrollable, all observable).
    fn context(&self, plant: &Generator) -> anyhow::Result<ControlContext> {
        if self.agents.is_some() {
            let p = self.problem()?;
            return Ok(ControlContext::new(&p.plant, &p.uncontrollable(), &p.observable())?);
        }
        let uncontrollable = self.uncontrollable.as_deref().map(events).unwrap_or_default();
        let observable = self.observable.as_deref().map_or_else(|| plant.alphabet().clone(), events);
        Ok(ControlContext::new(plant, &uncontrollable, &observable)?)
    }

    fn strategy(&self) -> ExtensionStrategy {
        if self.minimize {
            ExtensionStrategy::Minimal
        } else {
            ExtensionStrategy::Greedy
        }
    }

    fn modes(&self) -> anyhow::Result<Vec<LocalMode>> {
        if self.mode.is_empty() {
            return Ok(vec![LocalMode::Supcon]);
        }
        Ok(self.mode.iter().map(|m| m.parse()).collect::<Result<_, _>>()?)
    }

    fn normalized(&self) -> anyhow::Result<NormalizedProblem> {
        Ok(prepare(&self.problem()?, self.strategy(), !self.no_communicate_observability)?)
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        print!("{text}");
        if let Some(path) = &self.out {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }

    fn out_dir(&self) -> anyhow::Result<&Path> {
        let dir = self.out.as_deref().ok_or_else(|| anyhow!("--out DIR is required"))?;
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(dir)
    }
}

/// A failed check: named fields, one per line.
struct Witness(Vec<(String, String)>);

impl Witness {
    fn field(mut self, name: impl Into<String>, value: impl ToString) -> Self {
        self.0.push((name.into(), value.to_string()));
        self
    }
}

fn witness() -> Witness {
    Witness(Vec::new())
}

fn word_field(w: &Word) -> String {
    w.to_string()
}

fn report_check(io: &Inputs, name: &str, verdict: Verdict<Witness>) -> anyhow::Result<Outcome> {
    let mut text = String::new();
    let outcome = match verdict {
        Verdict::Holds => {
            writeln!(text, "{name}: holds")?;
            Outcome::Holds
        }
        Verdict::Fails(w) => {
            writeln!(text, "{name}: fails")?;
            for (k, v) in w.0 {
                writeln!(text, "{k}: {v}")?;
            }
            Outcome::Fails
        }
    };
    io.write(&text)?;
    Ok(outcome)
}

fn map<W>(v: Verdict<W>, f: impl FnOnce(W) -> Witness) -> Verdict<Witness> {
    match v {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(w) => Verdict::Fails(f(w)),
    }
}

fn check(property: Property, io: &Inputs) -> anyhow::Result<Outcome> {
    let (name, verdict) = match property {
        Property::Controllability => {
            let plant = io.plant()?;
            let v = is_controllable(&io.spec()?, &io.context(&plant)?)?;
            ("controllability", map(v, |v| witness().field("s", v.word).field("a", v.event)))
        }
        Property::Observability => {
            let plant = io.plant()?;
            let v = is_observable(&io.spec()?, &io.context(&plant)?)?;
            let f = |v: commsup::control::ObservabilityViolation| {
                witness().field("s", v.word).field("s'", v.confusion).field("a", v.event)
            };
            ("observability", map(v, f))
        }
        Property::Normality => {
            let plant = io.plant()?;
            let v = is_normal(&io.spec()?, &io.context(&plant)?)?;
            ("normality", map(v, |w| witness().field("s", word_field(&w))))
        }
        Property::Coobservability => {
            let p = io.problem()?;
            let ctx = ControlContext::new(&p.plant, &p.uncontrollable(), &p.observable())?;
            let views: Vec<LocalView> =
                p.agents.iter().map(|a| LocalView::new(a.observable.clone(), a.controllable.clone())).collect();
            let v = is_coobservable(&p.spec, &ctx, &views, io.budget)?;
            let f = |v: commsup::control::CoobservabilityViolation| {
                let mut w = witness().field("s", v.word).field("a", v.event);
                for (agent, t) in v.confusions {
                    w = w.field(format!("agent {}", agent + 1), t);
                }
                w
            };
            ("coobservability", map(v, f))
        }
        Property::Separability => {
            let v = is_separable(&io.subject()?, &io.alphabet_list()?)?;
            ("separability", map(v, |w| witness().field("s", word_field(&w))))
        }
        Property::Cd => {
            let sigma = io.sigma.as_deref().map(events).unwrap_or_default();
            let v = match is_conditionally_decomposable(&io.subject()?, &io.alphabet_list()?, &sigma)? {
                Decomposability::Holds => Verdict::Holds,
                Decomposability::MissingShared(missing) => Verdict::Fails(witness().field("missing shared", missing)),
                Decomposability::NotSeparable(w) => Verdict::Fails(witness().field("s", w)),
            };
            ("cd", v)
        }
        Property::Observer => {
            let v = is_observer(&io.subject()?, &io.single_alphabet()?)?;
            ("observer", map(v, |v| witness().field("s", v.prefix).field("t", v.continuation)))
        }
        Property::Lcc => {
            let uncontrollable = io.uncontrollable.as_deref().map(events).unwrap_or_default();
            let v = is_lcc(&io.subject()?, &io.single_alphabet()?, &uncontrollable)?;
            ("lcc", map(v, |v| witness().field("s", v.word).field("a", v.event)))
        }
        Property::MutualControllability => {
            let uncontrollable = io.uncontrollable.as_deref().map(events).unwrap_or_default();
            let v = is_mutually_controllable(&io.many()?, &uncontrollable)?;
            let f = |v: commsup::control::MutualViolation| {
                witness()
                    .field("agent", v.agent + 1)
                    .field("other", v.other + 1)
                    .field("s", v.word)
                    .field("a", v.event)
            };
            ("mutual-controllability", map(v, f))
        }
        Property::Nonconflicting => {
            let v = is_nonconflicting(&io.many()?);
            ("nonconflicting", map(v, |w| witness().field("s", word_field(&w))))
        }
    };
    report_check(io, name, verdict)
}

fn certificates_outcome(r: &SynthesisResult) -> Outcome {
    let c = &r.certificates;
    let all = [&c.subset_of_spec, &c.controllable, &c.coobservable, &c.nonconflicting];
    if all.iter().any(|s| matches!(s, Status::Fail(_))) {
        Outcome::Fails
    } else if all.iter().any(|s| matches!(s, Status::Unverified(_))) {
        Outcome::Unverified
    } else {
        Outcome::Holds
    }
}

fn write_bundle(dir: &Path, np: &NormalizedProblem, r: &SynthesisResult) -> anyhow::Result<()> {
    for (i, local) in r.locals.iter().enumerate() {
        fs::write(dir.join(format!("R_{}.gen", i + 1)), emit_generator(local))?;
    }
    fs::write(dir.join("composed.gen"), emit_generator(&r.composed))?;
    if let Some(c) = &r.coordinator {
        fs::write(dir.join("coordinator.gen"), emit_generator(c))?;
    }
    let modes: Vec<&str> = r.modes.iter().map(|m| m.name()).collect();
    let plan = format!("{}modes = {}\n", np.report(), modes.join(" "));
    fs::write(dir.join("plan.txt"), plan)?;
    fs::write(dir.join("certificates.txt"), r.certificates.report())?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Check { property, io } => check(property, &io),
        Command::Project { io } => {
            let g = project(&io.subject()?, &io.single_alphabet()?)?;
            io.write(&emit_generator(&g.canonical()))?;
            Ok(Outcome::Holds)
        }
        Command::Product { io } => {
            let g = sync_product(&io.many()?).trim().canonical();
            io.write(&emit_generator(&g))?;
            Ok(Outcome::Holds)
        }
        Command::Supcon { io } => {
            let plant = io.plant()?;
            let g = supcon(&io.spec()?, &io.context(&plant)?)?;
            io.write(&emit_generator(&g))?;
            Ok(Outcome::Holds)
        }
        Command::Supcn { io } => {
            let plant = io.plant()?;
            let g = supcn(&io.spec()?, &io.context(&plant)?)?;
            io.write(&emit_generator(&g))?;
            Ok(Outcome::Holds)
        }
        Command::Rcd { io } => {
            let (spec, alphabets) = if io.agents.is_some() {
                let p = io.problem()?;
                let alphabets = p.observable_alphabets();
                (p.spec, alphabets)
            } else {
                (io.subject()?, io.alphabet_list()?)
            };
            io.write(&rcd(&spec, &alphabets, io.strategy())?.report())?;
            Ok(Outcome::Holds)
        }
        Command::Synthesize { io } => {
            let np = io.normalized()?;
            let r = synthesize(&np, &io.modes()?, io.budget)?;
            write_bundle(io.out_dir()?, &np, &r)?;
            print!("{}", r.certificates.report());
            Ok(certificates_outcome(&r))
        }
        Command::ResolveConflicts { io, optimal } => {
            let np = io.normalized()?;
            let r = synthesize(&np, &io.modes()?, io.budget)?;
            let extra = io.sigma.as_deref().map(events);
            let res = resolve_conflicts(&np, &r, extra.as_ref(), optimal)?;
            for w in &res.warnings {
                eprintln!("warning: {w}");
            }
            write_bundle(io.out_dir()?, &np, &res.result)?;
            let names: Vec<&str> = res.shared.iter().map(|e| e.as_str()).collect();
            println!("# coordinator events = {}", names.join(" "));
            println!("# optimal coordinator = {:?}", res.optimal);
            print!("{}", res.result.certificates.report());
            Ok(certificates_outcome(&res.result))
        }
        Command::CheckOptimality { io, method } => {
            let np = io.normalized()?;
            let mut r = synthesize(&np, &io.modes()?, io.budget)?;
            let method = match method {
                MethodArg::Mutual => OptimalityMethod::Mutual,
                MethodArg::ObserverLcc => OptimalityMethod::ObserverLcc,
            };
            let verdict = check_optimality(&np, &r, method)?;
            r.record_optimality(&verdict);
            io.write(&format!("{verdict}\n"))?;
            Ok(match verdict {
                OptimalityVerdict::Certified(_) => Outcome::Holds,
                _ => Outcome::Fails,
            })
        }
        Command::ReduceIntersection { io } => {
            let inst = build_separability_instance(&io.many()?)?;
            let dir = io.out_dir()?;
            fs::write(dir.join("H.gen"), emit_generator(&inst.generator))?;
            fs::write(dir.join("alphabets.txt"), inst.alphabets_report())?;
            print!("{}", inst.alphabets_report());
            Ok(Outcome::Holds)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Budget { .. })));
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}
