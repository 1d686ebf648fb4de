use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use s5kit::action::{
    decompose_faithful, faithful_part, orbits, validate_action_capped, SymmetricAction,
};
use s5kit::algebra::{algebra_to_frame, check_s5_axioms, frame_to_algebra, S5Algebra};
use s5kit::family::{from_cluster_family, ClusterFamily};
use s5kit::frame::{cluster_signature, frame_coequalizer, frame_coproduct, Frame, PMorphism};
use s5kit::lifting::{canonical_lifting, enumerate_nat_transformations, verify_lifting_conditions};
use s5kit::presheaf::NatTransformation;
use s5kit::suite::{run_criterion, run_suite, SuiteReport, TITLES};
use s5kit::surjection::{coequalizer_surj, enumerate_surjections, pushout_surj, Surjection};
use s5kit::theory::{
    check_lex_preservation, check_t1, check_t2, classify_model, model_of_frame, FixScope, Structure,
    TheoryReport,
};
use s5kit::Error;

#[derive(Parser)]
#[command(name = "s5kit", version, about = "Surjections, S5 frames, symmetric actions and their liftings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file, or `-` for standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Output file, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    /// Truncation level N.
    #[arg(long, global = true, default_value_t = 5)]
    level: usize,
    /// Largest symmetric group degree to enumerate.
    #[arg(long, global = true, default_value_t = 6)]
    cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    Surj {
        #[command(subcommand)]
        op: SurjOp,
    },
    Frame {
        #[command(subcommand)]
        op: FrameOp,
    },
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    Action {
        #[command(subcommand)]
        op: ActionOp,
    },
    Lift {
        #[command(subcommand)]
        op: LiftOp,
    },
    Theory {
        #[command(subcommand)]
        op: TheoryOp,
    },
    /// Runs the full acceptance corpus.
    Suite {
        /// Comma-separated criterion numbers; all nine when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum SurjOp {
    /// Every surjection n ↠ m, in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Coequalizer of {"f", "g"}.
    Coeq,
    /// Pushout of {"f", "g"}.
    Pushout,
}

#[derive(Subcommand)]
enum FrameOp {
    /// Coequalizer of {"f", "g"}.
    Coeq,
    /// Coproduct of a list of frames.
    Coprod,
    /// The S5 algebra of a frame.
    Dual,
    /// Sorted cluster sizes.
    Signature,
}

#[derive(Subcommand)]
enum AlgebraOp {
    Check,
    /// The frame of atoms of an S5 algebra.
    Dual,
}

#[derive(Subcommand)]
enum ActionOp {
    Validate,
    Orbits,
    /// Splits off the fix-trivial part and identifies each of its orbits with
    /// the canonical action.
    Decompose,
}

#[derive(Subcommand)]
enum LiftOp {
    /// The canonical lifting of an action, truncated at --level.
    Build,
    /// Builds the canonical lifting and checks it.
    Verify,
    /// Natural transformations between the liftings of {"source", "target"}.
    Homs,
}

#[derive(Subcommand)]
enum TheoryOp {
    CheckT1,
    CheckT2 {
        #[arg(long, value_enum, default_value_t = Scope::FixTrivial)]
        scope: Scope,
    },
    CheckLex,
    Classify,
    /// A model from a frame, a cluster family or a list of cluster sizes.
    FromFrame,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    FixTrivial,
    AllElements,
}

enum Failure {
    Usage(String),
    Parse(String),
    Invalid(Error),
    Io(String),
}

impl Failure {
    fn body(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage".to_string(), m.clone()),
            Failure::Parse(m) => ("parse".to_string(), m.clone()),
            Failure::Io(m) => ("io".to_string(), m.clone()),
            Failure::Invalid(e) => (variant_name(e), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

fn variant_name(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Errors that mean the input is well-formed but fails the check asked of it.
fn is_check_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::NotS5(_) | Error::NotEquivalence | Error::NotAModel | Error::NonIntegralOrbit { .. }
    )
}

struct Outcome {
    value: Value,
    passed: bool,
}

fn ok(value: Value) -> Outcome {
    Outcome {
        value,
        passed: true,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn read<T: DeserializeOwned>(&self) -> Result<T, Failure> {
        let text = if self.cli.input == "-" {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(e.to_string()))?;
            s
        } else {
            fs::read_to_string(&self.cli.input).map_err(|e| Failure::Io(format!("{}: {e}", self.cli.input)))?
        };
        serde_json::from_str(&text).map_err(|e| Failure::Parse(e.to_string()))
    }

    fn capped(&self, a: &SymmetricAction) -> Result<(), Failure> {
        if a.degree() > self.cli.cap {
            return Err(Failure::Invalid(Error::CapExceeded {
                what: "permutation degree",
                requested: a.degree(),
                cap: self.cli.cap,
            }));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct Pair<T> {
    f: T,
    g: T,
}

#[derive(Deserialize)]
struct ActionPair {
    source: SymmetricAction,
    target: SymmetricAction,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FrameInput {
    Frame(Frame),
    Family(ClusterFamily),
    Sizes(Vec<usize>),
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn transformation_json(t: &NatTransformation) -> Value {
    to_value(&t.components.iter().map(|c| one_based(c)).collect::<Vec<_>>())
}

fn theory_outcome(r: TheoryReport) -> Outcome {
    Outcome {
        passed: r.passes(),
        value: to_value(&r),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cx = Ctx { cli };
    match &cli.command {
        Command::Surj { op } => match op {
            SurjOp::Enumerate { n, m } => {
                if *n == 0 || *m == 0 || *n > 8 {
                    return Err(Failure::Usage("--n and --m must lie in 1..=8".into()));
                }
                Ok(ok(to_value(&enumerate_surjections(*n, *m))))
            }
            SurjOp::Coeq => {
                let p: Pair<Surjection> = cx.read()?;
                Ok(ok(to_value(&coequalizer_surj(&p.f, &p.g)?)))
            }
            SurjOp::Pushout => {
                let p: Pair<Surjection> = cx.read()?;
                let (left, right) = pushout_surj(&p.f, &p.g)?;
                Ok(ok(json!({ "left": left, "right": right })))
            }
        },
        Command::Frame { op } => match op {
            FrameOp::Coeq => {
                let p: Pair<PMorphism> = cx.read()?;
                let (quotient, projection) = frame_coequalizer(&p.f, &p.g)?;
                Ok(ok(json!({ "quotient": quotient, "projection": projection })))
            }
            FrameOp::Coprod => {
                let frames: Vec<Frame> = cx.read()?;
                let (frame, injections) = frame_coproduct(&frames);
                Ok(ok(json!({ "frame": frame, "injections": injections })))
            }
            FrameOp::Dual => {
                let frame: Frame = cx.read()?;
                Ok(ok(to_value(&frame_to_algebra(&frame)?)))
            }
            FrameOp::Signature => {
                let frame: Frame = cx.read()?;
                Ok(ok(to_value(&cluster_signature(&frame))))
            }
        },
        Command::Algebra { op } => {
            let a: S5Algebra = cx.read()?;
            match op {
                AlgebraOp::Check => {
                    let r = check_s5_axioms(&a);
                    Ok(Outcome {
                        passed: r.passes(),
                        value: to_value(&r),
                    })
                }
                AlgebraOp::Dual => Ok(ok(to_value(&algebra_to_frame(&a)?))),
            }
        }
        Command::Action { op } => {
            let a: SymmetricAction = cx.read()?;
            cx.capped(&a)?;
            match op {
                ActionOp::Validate => {
                    let r = validate_action_capped(&a, cli.cap)?;
                    Ok(Outcome {
                        passed: r.passes(),
                        value: to_value(&r),
                    })
                }
                ActionOp::Orbits => {
                    let o = orbits(&a);
                    let members: Vec<Vec<usize>> = o.members().iter().map(|m| one_based(m)).collect();
                    Ok(ok(json!({ "orbit_count": o.orbit_count, "orbits": members })))
                }
                ActionOp::Decompose => {
                    let split = faithful_part(&a)?;
                    let isos = decompose_faithful(&split.faithful)?;
                    let orbits: Vec<Value> = isos
                        .iter()
                        .map(|iso| {
                            let elements: Vec<usize> =
                                iso.elements.iter().map(|&x| split.faithful_elements[x] + 1).collect();
                            json!({
                                "base": split.faithful_elements[iso.base] + 1,
                                "elements": elements,
                                "ranks": iso.ranks,
                            })
                        })
                        .collect();
                    Ok(ok(json!({
                        "faithful_elements": one_based(&split.faithful_elements),
                        "rest_elements": one_based(&split.rest_elements),
                        "orbits": orbits,
                    })))
                }
            }
        }
        Command::Lift { op } => match op {
            LiftOp::Build => {
                let a: SymmetricAction = cx.read()?;
                cx.capped(&a)?;
                Ok(ok(to_value(&canonical_lifting(&a, cli.level)?.presheaf)))
            }
            LiftOp::Verify => {
                let a: SymmetricAction = cx.read()?;
                cx.capped(&a)?;
                let l = canonical_lifting(&a, cli.level)?;
                let r = verify_lifting_conditions(&l.presheaf, &a, &l.eta)?;
                Ok(Outcome {
                    passed: r.passes(),
                    value: to_value(&r),
                })
            }
            LiftOp::Homs => {
                let p: ActionPair = cx.read()?;
                cx.capped(&p.source)?;
                cx.capped(&p.target)?;
                let source = canonical_lifting(&p.source, cli.level)?.presheaf;
                let target = canonical_lifting(&p.target, cli.level)?.presheaf;
                let all = enumerate_nat_transformations(&source, &target)?;
                let list: Vec<Value> = all.iter().map(transformation_json).collect();
                Ok(ok(json!({ "N": cli.level, "count": all.len(), "transformations": list })))
            }
        },
        Command::Theory { op } => match op {
            TheoryOp::FromFrame => {
                let input: FrameInput = cx.read()?;
                let frame = match input {
                    FrameInput::Frame(f) => f,
                    FrameInput::Family(f) => from_cluster_family(&f),
                    FrameInput::Sizes(s) => from_cluster_family(&ClusterFamily::new(s)?),
                };
                Ok(ok(to_value(&model_of_frame(&frame, cli.level)?)))
            }
            _ => {
                let Structure(m): Structure = cx.read()?;
                match op {
                    TheoryOp::CheckT1 => Ok(theory_outcome(check_t1(&m))),
                    TheoryOp::CheckT2 { scope } => {
                        let scope = match scope {
                            Scope::FixTrivial => FixScope::FixTrivial,
                            Scope::AllElements => FixScope::AllElements,
                        };
                        Ok(theory_outcome(check_t2(&m, scope)))
                    }
                    TheoryOp::CheckLex => Ok(theory_outcome(check_lex_preservation(&m))),
                    TheoryOp::Classify => Ok(ok(to_value(&classify_model(&m)?.counts))),
                    TheoryOp::FromFrame => unreachable!(),
                }
            }
        },
        Command::Suite { only } => {
            if let Some(bad) = only.iter().find(|&&id| id == 0 || id > TITLES.len()) {
                return Err(Failure::Usage(format!("no criterion {bad}")));
            }
            let r = if only.is_empty() {
                run_suite(cli.seed)
            } else {
                let criteria: Vec<_> = only.iter().map(|&id| run_criterion(id, cli.seed)).collect();
                SuiteReport {
                    seed: cli.seed,
                    passed: criteria.iter().all(|c| c.passed),
                    criteria,
                }
            };
            Ok(Outcome {
                passed: r.passed,
                value: to_value(&r),
            })
        }
    }
}

fn emit(output: &str, value: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    if output == "-" {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(output, text)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let _ = emit("-", &Failure::Usage(e.to_string()).body());
            return ExitCode::from(2);
        }
    };
    let (value, code) = match run(&cli) {
        Ok(o) => (o.value, if o.passed { 0 } else { 1 }),
        Err(Failure::Invalid(e)) if is_check_failure(&e) => (Failure::Invalid(e).body(), 1),
        Err(f) => (f.body(), 2),
    };
    match emit(&cli.output, &value) {
        Ok(()) => ExitCode::from(code),
        Err(e) => {
            let _ = emit("-", &Failure::Io(e.to_string()).body());
            ExitCode::from(2)
        }
    }
}
