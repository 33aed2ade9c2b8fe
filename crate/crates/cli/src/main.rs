//! `fusionkit`: command-line front end.
//!
//! Exit codes: 0 equivalent (or the command completed), 1 not equivalent,
//! 2 error.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fusionkit::burnside::{burnside_basis, check_stable_inclusion};
use fusionkit::catalog::Source;
use fusionkit::repmod::{linearize, rep_set, DEFAULT_SEED};
use fusionkit::subgroup::p_part;
use fusionkit::{Caps, Catalog, Classifier, ClassifyOptions, FiniteGroup, FusionSystem};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "fusionkit",
    version,
    about = "Fusion systems, Burnside modules and stable classification of finite groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Extra catalog file (name/degree/gen records) added to the builtin groups.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = Caps::default().max_order)]
    max_order: usize,
    #[arg(long, global = true, default_value_t = Caps::default().max_subgroup_ambient)]
    max_subgroup_ambient: usize,
    #[arg(long, global = true, default_value_t = Caps::default().max_hom_source)]
    max_hom_source: usize,
    #[arg(long, global = true, default_value_t = Caps::default().max_biset)]
    max_biset: usize,
    /// Seed for the randomized intertwiner search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect catalog groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Fusion systems of Sylow subgroups.
    #[command(subcommand)]
    Fusion(FusionCmd),
    /// Burnside modules of bisets.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// Conjugacy classes of homomorphisms Q → G and the Out(Q) action on them.
    Rep {
        q: String,
        g: String,
        /// Only injective homomorphisms.
        #[arg(long)]
        injective: bool,
        #[arg(short, long = "prime")]
        prime: u64,
    },
    /// Decide whether two groups are equivalent at a prime.
    #[command(subcommand)]
    Classify(ClassifyCmd),
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    List,
    Show { name: String },
}

#[derive(Subcommand, Debug)]
enum FusionCmd {
    /// Objects and morphism tables of the fusion system on a Sylow subgroup.
    Table {
        g: String,
        #[arg(short, long = "prime")]
        prime: u64,
    },
    /// Search for an isomorphism of fusion systems.
    Compare {
        g: String,
        h: String,
        #[arg(short, long = "prime")]
        prime: u64,
    },
}

#[derive(Subcommand, Debug)]
enum BurnsideCmd {
    /// Basis of A(G, H): classes of pairs (K ≤ G, φ: K → H).
    Basis { g: String, h: String },
    /// Compare the stable inclusion criterion with the fusion system on every
    /// homomorphism between subgroups of a Sylow subgroup.
    CheckProp {
        g: String,
        #[arg(short, long = "prime")]
        prime: u64,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    g: String,
    h: String,
    #[arg(short, long = "prime")]
    prime: u64,
    /// Skip the identity and Sylow-order shortcuts.
    #[arg(long)]
    no_prefilters: bool,
}

#[derive(Subcommand, Debug)]
enum ClassifyCmd {
    /// Injective Rep modules for every subgroup type of the Sylow subgroups (exact).
    Stable(PairArgs),
    /// Isomorphism of fusion systems.
    Fusion(PairArgs),
    /// Rep modules for catalog p-groups up to a bound.
    Condition2 {
        #[command(flatten)]
        pair: PairArgs,
        /// Largest Q order to check; defaults to the larger Sylow order.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Pairs that are stably equivalent but have non-isomorphic fusion systems.
    Search {
        #[arg(short, long = "prime")]
        prime: u64,
    },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    inputs: Value,
    result: Value,
    caps: Caps,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

/// What a command produced: a headline, the payload, and the exit status.
struct Outcome {
    headline: String,
    inputs: Value,
    result: Value,
    ok: bool,
}

type Failure = Box<dyn std::error::Error>;

struct Session {
    catalog: Catalog,
    file_groups: Vec<Arc<FiniteGroup>>,
    caps: Caps,
    seed: u64,
}

impl Session {
    fn open(global: &Global) -> Result<Self, Failure> {
        let caps = Caps {
            max_order: global.max_order,
            max_subgroup_ambient: global.max_subgroup_ambient,
            max_hom_source: global.max_hom_source,
            max_biset: global.max_biset,
        };
        let mut catalog = Catalog::builtin(caps)?;
        if let Some(path) = &global.catalog {
            catalog.load_file(path, caps)?;
        }
        let file_groups = catalog
            .entries()
            .iter()
            .filter(|e| matches!(e.source, Source::File(_)))
            .map(|e| e.group.clone())
            .collect();
        Ok(Session {
            catalog,
            file_groups,
            caps,
            seed: global.seed,
        })
    }

    fn group(&self, name: &str) -> Result<Arc<FiniteGroup>, Failure> {
        Ok(self.catalog.lookup(name)?)
    }

    fn classifier(&self, prefilters: bool) -> Classifier {
        Classifier::new(
            self.catalog.clone(),
            ClassifyOptions {
                use_prefilters: prefilters,
                seed: self.seed,
            },
        )
    }
}

fn verdict_headline(equivalent: bool) -> String {
    if equivalent { "EQUIVALENT" } else { "NOT EQUIVALENT" }.to_string()
}

fn run(cmd: &Command, s: &Session) -> Result<Outcome, Failure> {
    Ok(match cmd {
        Command::Group(GroupCmd::List) => {
            let groups: Vec<Value> = s
                .catalog
                .entries()
                .iter()
                .map(|e| {
                    let source = match &e.source {
                        Source::Builtin => "builtin".to_string(),
                        Source::File(p) => p.display().to_string(),
                    };
                    json!({"name": e.name, "order": e.group.order(), "degree": e.group.degree(), "source": source})
                })
                .collect();
            Outcome {
                headline: format!("{} groups", groups.len()),
                inputs: json!({}),
                result: json!({ "groups": groups }),
                ok: true,
            }
        }
        Command::Group(GroupCmd::Show { name }) => {
            let g = s.group(name)?;
            let classes = g.subgroup_conjugacy_classes()?;
            let class_list: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "order": c.representative.order(),
                        "size": c.members.len(),
                        "generators": g.subgroup_generators(&c.representative)
                            .iter()
                            .map(|&x| g.element(x).to_string())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            Outcome {
                headline: format!("{}: order {}, {} subgroup classes", g.name(), g.order(), classes.len()),
                inputs: json!({ "group": name }),
                result: json!({
                    "name": g.name(),
                    "order": g.order(),
                    "degree": g.degree(),
                    "abelian": g.is_abelian(),
                    "generators": g.generators().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "subgroups": classes.iter().map(|c| c.members.len()).sum::<usize>(),
                    "subgroup_classes": class_list,
                }),
                ok: true,
            }
        }
        Command::Fusion(FusionCmd::Table { g, prime }) => {
            let group = s.group(g)?;
            let f = FusionSystem::build(&group, *prime)?;
            Outcome {
                headline: format!(
                    "fusion system of {} at p = {}: {} objects, {} morphisms",
                    group.name(),
                    prime,
                    f.objects().len(),
                    f.total_morphisms()
                ),
                inputs: json!({ "group": g, "prime": prime }),
                result: serde_json::to_value(f.dump())?,
                ok: true,
            }
        }
        Command::Fusion(FusionCmd::Compare { g, h, prime }) => {
            let v = s
                .classifier(true)
                .alternative_classification(&s.group(g)?, &s.group(h)?, *prime)?;
            Outcome {
                headline: verdict_headline(v.equivalent),
                inputs: json!({ "groups": [g, h], "prime": prime }),
                ok: v.equivalent,
                result: serde_json::to_value(&v)?,
            }
        }
        Command::Burnside(BurnsideCmd::Basis { g, h }) => {
            let basis = burnside_basis(&s.group(g)?, &s.group(h)?)?;
            Outcome {
                headline: format!(
                    "A({g}, {h}): {} classes, reduced rank {}",
                    basis.len(),
                    basis.reduced_rank()
                ),
                inputs: json!({ "groups": [g, h] }),
                result: serde_json::to_value(basis.dump())?,
                ok: true,
            }
        }
        Command::Burnside(BurnsideCmd::CheckProp { g, prime }) => {
            let f = FusionSystem::build(&s.group(g)?, *prime)?;
            let check = check_stable_inclusion(&f)?;
            let ok = check.disagreements.is_empty();
            Outcome {
                headline: format!(
                    "{}: {} triples checked, {} disagreements",
                    if ok { "PASS" } else { "FAIL" },
                    check.triples,
                    check.disagreements.len()
                ),
                inputs: json!({ "group": g, "prime": prime }),
                result: serde_json::to_value(check)?,
                ok,
            }
        }
        Command::Rep { q, g, injective, prime } => {
            let (qg, gg) = (s.group(q)?, s.group(g)?);
            let reps = Arc::new(rep_set(&qg, &gg, *injective)?);
            let module = linearize(&reps, *prime)?;
            let mut result = serde_json::to_value(reps.dump(1024))?;
            result["prime"] = json!(prime);
            result["module_dim"] = json!(module.dim());
            Outcome {
                headline: format!(
                    "{}Rep({q}, {g}): {} classes, |Out({q})| = {}",
                    if *injective { "Inj" } else { "" },
                    reps.len(),
                    reps.out().order()
                ),
                inputs: json!({ "q": q, "g": g, "injective": injective, "prime": prime }),
                result,
                ok: true,
            }
        }
        Command::Classify(c) => {
            let (v, inputs) = match c {
                ClassifyCmd::Stable(a) => (
                    s.classifier(!a.no_prefilters)
                        .stable_equivalent_mp(&s.group(&a.g)?, &s.group(&a.h)?, a.prime)?,
                    json!({ "groups": [a.g, a.h], "prime": a.prime, "prefilters": !a.no_prefilters }),
                ),
                ClassifyCmd::Fusion(a) => (
                    s.classifier(!a.no_prefilters).alternative_classification(
                        &s.group(&a.g)?,
                        &s.group(&a.h)?,
                        a.prime,
                    )?,
                    json!({ "groups": [a.g, a.h], "prime": a.prime }),
                ),
                ClassifyCmd::Condition2 { pair: a, bound } => {
                    let (g, h) = (s.group(&a.g)?, s.group(&a.h)?);
                    let bound = bound.unwrap_or_else(|| {
                        p_part(g.order(), a.prime)
                            .max(p_part(h.order(), a.prime))
                            .max(a.prime as usize)
                    });
                    (
                        s.classifier(!a.no_prefilters)
                            .condition2_bounded(&g, &h, a.prime, bound)?,
                        json!({ "groups": [a.g, a.h], "prime": a.prime, "bound": bound, "prefilters": !a.no_prefilters }),
                    )
                }
                ClassifyCmd::Search { prime } => {
                    let groups = if s.file_groups.is_empty() {
                        s.catalog.groups()
                    } else {
                        s.file_groups.clone()
                    };
                    let pairs = s.classifier(true).distinguishing_search(&groups, *prime)?;
                    let names: Vec<[&str; 2]> = pairs
                        .iter()
                        .map(|&(i, j)| [groups[i].name(), groups[j].name()])
                        .collect();
                    return Ok(Outcome {
                        headline: format!(
                            "search complete: {} groups, {} distinguishing pairs",
                            groups.len(),
                            names.len()
                        ),
                        inputs: json!({
                            "prime": prime,
                            "groups": groups.iter().map(|g| g.name()).collect::<Vec<_>>(),
                        }),
                        result: json!({ "pairs": names }),
                        ok: true,
                    });
                }
            };
            Outcome {
                headline: verdict_headline(v.equivalent),
                inputs,
                ok: v.equivalent,
                result: serde_json::to_value(&v)?,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let outcome = Session::open(&cli.global).and_then(|s| Ok((run(&cli.command, &s)?, s)));
    let (outcome, session) = match outcome {
        Ok(x) => x,
        Err(e) => {
            if cli.global.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = Report {
        command: std::env::args().skip(1).collect(),
        inputs: outcome.inputs,
        result: outcome.result,
        caps: session.caps,
        seed: session.seed,
        timing_ms: cli.global.timing.then(|| start.elapsed().as_millis()),
    };
    let mut text = if cli.global.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        format!("{}\n{}", outcome.headline, render::text(&report.result))
    };
    if let (false, Some(ms)) = (cli.global.json, report.timing_ms) {
        text.push_str(&format!("time: {ms} ms\n"));
    }
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
