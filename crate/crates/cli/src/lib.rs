//! Text front end for the `guk-core` engine: the `.guk` document language
//! and the `guk` command-line driver.
//!
//! [`execute`] runs one invocation and returns what the binary would print
//! together with its exit code, so tests can drive the CLI in-process.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;
pub mod syntax;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use guk_core::budget;

pub use document::{parse, Document};
pub use error::DslError;
pub use report::{Format, Node, Outcome, Report};

/// Search-node cap used when `GUK_MAX_WORK` is unset.
pub const DEFAULT_MAX_WORK: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Plain,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "guk",
    version,
    about = "Checks finite categorical structures described in .guk files"
)]
struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, global = true, default_value = "plain")]
    format: FormatArg,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate one item (or every item) of the document.
    Check {
        file: PathBuf,
        #[arg(long)]
        item: Option<String>,
    },
    /// Limit of a diagram (a functor or a set-valued functor).
    Limit {
        file: PathBuf,
        #[arg(long)]
        diagram: String,
    },
    /// Colimit of a diagram (a functor or a set-valued functor).
    Colimit {
        file: PathBuf,
        #[arg(long)]
        diagram: String,
    },
    /// Is the category filtered (or, with --directed, a directed poset)?
    Filtered {
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long)]
        directed: bool,
    },
    /// Does hom(object, -) preserve the given filtered colimits?
    Fp {
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long)]
        object: String,
        /// Colimit cocones to test; all small filtered diagrams when omitted.
        #[arg(long)]
        cocone: Vec<String>,
    },
    /// Enumerate finite lex models up to isomorphism.
    Models {
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long, default_value_t = guk_core::models::DEFAULT_MAX_SIZE)]
        max_size: usize,
        /// Also print the models as setfunctor items.
        #[arg(long)]
        export: bool,
    },
    /// Evaluation and hom shadows of the duality on a model fragment.
    Duality {
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long, default_value_t = guk_core::models::DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
    /// Does the category have all finite limits?
    Lex {
        file: PathBuf,
        #[arg(long)]
        category: String,
    },
    /// Check the Grothendieck topology axioms of a site.
    Topology {
        file: PathBuf,
        #[arg(long)]
        site: String,
    },
    /// Classify a presheaf as sheaf, separated-only or neither.
    Sheaf {
        file: PathBuf,
        #[arg(long)]
        site: String,
        #[arg(long)]
        presheaf: String,
    },
    /// Check that a presheaf is separated.
    Separated {
        file: PathBuf,
        #[arg(long)]
        site: String,
        #[arg(long)]
        presheaf: String,
    },
    /// Associated sheaf of a presheaf with its unit.
    Sheafify {
        file: PathBuf,
        #[arg(long)]
        site: String,
        #[arg(long)]
        presheaf: String,
        /// Check the universal property against all sheaves with carriers
        /// of at most this size.
        #[arg(long)]
        universal_max: Option<usize>,
    },
    /// Is a functor between site bases continuous?
    Continuous {
        file: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Global sections of a sheaf of models.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        bundle: String,
    },
    /// Stalk of a sheaf of models at a site object.
    Stalk {
        file: PathBuf,
        #[arg(long)]
        bundle: String,
        #[arg(long)]
        at: String,
    },
    /// Compare global sections with the limit of the stalks.
    GammaLimitCheck {
        file: PathBuf,
        #[arg(long)]
        bundle: String,
    },
    /// Check the clan axioms.
    Clan {
        file: PathBuf,
        #[arg(long)]
        clan: String,
    },
    /// Least display class containing the generators.
    ClanClosure {
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long, num_args = 0.., value_delimiter = ',')]
        generators: Vec<String>,
    },
    /// Print the document in canonical form.
    Render { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Limit { .. } => "limit",
            Command::Colimit { .. } => "colimit",
            Command::Filtered { .. } => "filtered",
            Command::Fp { .. } => "fp",
            Command::Models { .. } => "models",
            Command::Duality { .. } => "duality",
            Command::Lex { .. } => "lex",
            Command::Topology { .. } => "topology",
            Command::Sheaf { .. } => "sheaf",
            Command::Separated { .. } => "separated",
            Command::Sheafify { .. } => "sheafify",
            Command::Continuous { .. } => "continuous",
            Command::Gamma { .. } => "gamma",
            Command::Stalk { .. } => "stalk",
            Command::GammaLimitCheck { .. } => "gamma-limit-check",
            Command::Clan { .. } => "clan",
            Command::ClanClosure { .. } => "clan-closure",
            Command::Render { .. } => "render",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::Check { file, .. }
            | Command::Limit { file, .. }
            | Command::Colimit { file, .. }
            | Command::Filtered { file, .. }
            | Command::Fp { file, .. }
            | Command::Models { file, .. }
            | Command::Duality { file, .. }
            | Command::Lex { file, .. }
            | Command::Topology { file, .. }
            | Command::Sheaf { file, .. }
            | Command::Separated { file, .. }
            | Command::Sheafify { file, .. }
            | Command::Continuous { file, .. }
            | Command::Gamma { file, .. }
            | Command::Stalk { file, .. }
            | Command::GammaLimitCheck { file, .. }
            | Command::Clan { file, .. }
            | Command::ClanClosure { file, .. }
            | Command::Render { file } => file,
        }
    }

    /// Flags echoed into the report, in declaration order.
    fn args(&self) -> Vec<(String, String)> {
        let s = |k: &str, v: &str| (k.to_string(), v.to_string());
        match self {
            Command::Check { item, .. } => item.iter().map(|i| s("item", i)).collect(),
            Command::Limit { diagram, .. } | Command::Colimit { diagram, .. } => vec![s("diagram", diagram)],
            Command::Filtered {
                category, directed, ..
            } => {
                vec![s("category", category), s("directed", &directed.to_string())]
            }
            Command::Fp {
                category,
                object,
                cocone,
                ..
            } => {
                vec![
                    s("category", category),
                    s("object", object),
                    s("cocone", &cocone.join(",")),
                ]
            }
            Command::Models {
                category,
                max_size,
                export,
                ..
            } => vec![
                s("category", category),
                s("max-size", &max_size.to_string()),
                s("export", &export.to_string()),
            ],
            Command::Duality {
                category, max_size, ..
            } => {
                vec![s("category", category), s("max-size", &max_size.to_string())]
            }
            Command::Lex { category, .. } => vec![s("category", category)],
            Command::Topology { site, .. } => vec![s("site", site)],
            Command::Sheaf { site, presheaf, .. } | Command::Separated { site, presheaf, .. } => {
                vec![s("site", site), s("presheaf", presheaf)]
            }
            Command::Sheafify {
                site,
                presheaf,
                universal_max,
                ..
            } => {
                let mut v = vec![s("site", site), s("presheaf", presheaf)];
                if let Some(m) = universal_max {
                    v.push(s("universal-max", &m.to_string()));
                }
                v
            }
            Command::Continuous {
                functor, from, to, ..
            } => {
                vec![s("functor", functor), s("from", from), s("to", to)]
            }
            Command::Gamma { bundle, .. } | Command::GammaLimitCheck { bundle, .. } => {
                vec![s("bundle", bundle)]
            }
            Command::Stalk { bundle, at, .. } => vec![s("bundle", bundle), s("at", at)],
            Command::Clan { clan, .. } => vec![s("clan", clan)],
            Command::ClanClosure {
                category, generators, ..
            } => {
                vec![s("category", category), s("generators", &generators.join(","))]
            }
            Command::Render { .. } => vec![],
        }
    }

    fn run(&self, doc: &Document) -> commands::CommandResult {
        use commands as c;
        match self {
            Command::Check { item, .. } => c::check(doc, item.as_deref()),
            Command::Limit { diagram, .. } => c::limit(doc, diagram, false),
            Command::Colimit { diagram, .. } => c::limit(doc, diagram, true),
            Command::Filtered {
                category, directed, ..
            } => c::filtered(doc, category, *directed),
            Command::Fp {
                category,
                object,
                cocone,
                ..
            } => c::fp(doc, category, object, cocone),
            Command::Models {
                category,
                max_size,
                export,
                ..
            } => c::models(doc, category, *max_size, *export),
            Command::Duality {
                category, max_size, ..
            } => c::duality(doc, category, *max_size),
            Command::Lex { category, .. } => c::lex(doc, category),
            Command::Topology { site, .. } => c::topology(doc, site),
            Command::Sheaf { site, presheaf, .. } => c::sheaf(doc, site, presheaf, false),
            Command::Separated { site, presheaf, .. } => c::sheaf(doc, site, presheaf, true),
            Command::Sheafify {
                site,
                presheaf,
                universal_max,
                ..
            } => c::sheafify_cmd(doc, site, presheaf, *universal_max),
            Command::Continuous {
                functor, from, to, ..
            } => c::continuous(doc, functor, from, to),
            Command::Gamma { bundle, .. } => c::gamma(doc, bundle),
            Command::Stalk { bundle, at, .. } => c::stalk(doc, bundle, at),
            Command::GammaLimitCheck { bundle, .. } => c::gamma_limit(doc, bundle),
            Command::Clan { clan, .. } => c::clan(doc, clan),
            Command::ClanClosure {
                category, generators, ..
            } => c::clan_closure(doc, category, generators),
            Command::Render { .. } => unreachable!("render does not produce a report"),
        }
    }
}

/// What one invocation prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the CLI on `args` (including the program name), reading
/// `GUK_MAX_WORK` from the environment.
pub fn execute<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    execute_with_limit(args, std::env::var("GUK_MAX_WORK").ok())
}

/// As [`execute`], with the work cap given explicitly.
pub fn execute_with_limit<I, S>(args: I, max_work: Option<String>) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Output {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    let format = match cli.format {
        FormatArg::Plain => Format::Plain,
        FormatArg::Machine => Format::Machine,
    };
    let started = Instant::now();
    let input = cli
        .command
        .file()
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut report = Report {
        command: cli.command.name().to_string(),
        input,
        args: cli.command.args(),
        outcome: Outcome::Error,
        body: Node::map(),
        caveats: Vec::new(),
        timing_ms: None,
    };
    let result = read_and_run(&cli.command, max_work);
    match result {
        Ok(Run::Rendered(text)) => {
            return Output {
                stdout: text,
                stderr: String::new(),
                code: 0,
            }
        }
        Ok(Run::Report(outcome, body, caveats)) => {
            report.outcome = outcome;
            report.body = body;
            report.caveats = caveats;
        }
        Err(e) => report.body = error_node(&e),
    }
    if cli.timing {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    Output {
        stdout: report.render(format),
        stderr: String::new(),
        code: report.outcome.exit_code(),
    }
}

enum Run {
    Rendered(String),
    Report(Outcome, Node, Vec<String>),
}

fn read_and_run(command: &Command, max_work: Option<String>) -> Result<Run, DslError> {
    let limit = match max_work {
        None => DEFAULT_MAX_WORK,
        Some(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| DslError::BadWorkLimit(v.clone()))?,
    };
    let path = command.file();
    let text = std::fs::read_to_string(path).map_err(|e| DslError::Io {
        path: path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        ),
        message: e.to_string(),
    })?;
    budget::with_limit(limit, || {
        let doc = match parse(&text) {
            Ok(doc) => doc,
            Err(DslError::ValidationFailed { item: bad, witness }) => {
                if let Command::Check { item, .. } = command {
                    if item.as_deref().is_none_or(|i| i == bad) {
                        let (o, b, c) = commands::check_failed_validation(&bad, &witness)?;
                        return Ok(Run::Report(o, b, c));
                    }
                }
                return Err(DslError::ValidationFailed { item: bad, witness });
            }
            Err(e) => return Err(e),
        };
        if let Command::Render { .. } = command {
            return Ok(Run::Rendered(syntax::render(&doc.syntax)));
        }
        let (o, b, c) = command.run(&doc)?;
        Ok(Run::Report(o, b, c))
    })
}

/// Report body for an error: its kind, message and located details.
pub fn error_node(e: &DslError) -> Node {
    let mut n = Node::map().with("error", e.kind()).with("message", e.to_string());
    match e {
        DslError::Parse {
            line,
            col,
            expected,
            found,
        } => {
            n = n
                .with("line", *line)
                .with("column", *col)
                .with("expected", Node::list(expected.iter().map(String::as_str)))
                .with("found", found.as_str());
        }
        DslError::NameClash { name, at, first } => {
            n = n
                .with("name", name.as_str())
                .with("line", at.line)
                .with("column", at.col)
                .with("first-line", first.line);
        }
        DslError::UnresolvedReference { kind, name, at } => {
            n = n.with("reference", kind.as_str()).with("name", name.as_str());
            if at.line > 0 {
                n = n.with("line", at.line).with("column", at.col);
            }
        }
        DslError::ValidationFailed { item, witness } => {
            n = n.with("item", item.as_str()).with("counterexample", witness);
        }
        DslError::Engine { item, .. } => n = n.with("item", item.as_str()),
        DslError::Command(_) | DslError::Io { .. } | DslError::BadWorkLimit(_) => {}
    }
    n
}
