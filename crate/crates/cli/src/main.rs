use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncgroup::catalog::{self, Atlas, AtlasConfig, AtlasFormat};
use ncgroup::centralizers;
use ncgroup::group::DEFAULT_MAX_ORDER;
use ncgroup::isoclinism::{self, Isoclinism};
use ncgroup::noncommuting::{self, NoncommutingGraph, OmegaConfig, OmegaError};
use ncgroup::verify::{self, Claim};
use ncgroup::{Group, GroupSpec};

/// Exit code when a computation ran out of its budget.
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "ncgroup", version, about = "Non-commuting graphs, centralizers and isoclinism of finite groups")]
struct Cli {
    /// Output format; for `atlas`, text means CSV.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Wall-clock budget in seconds for each clique search; 0 disables it.
    #[arg(long, global = true, default_value_t = 60.0)]
    time_budget: f64,
    /// Largest group order in the generated catalog.
    #[arg(long, global = true, default_value_t = 64)]
    max_order: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Clique number of the non-commuting graph, with a witness.
    Omega { spec: String },
    /// Number of distinct element centralizers.
    Cent { spec: String },
    /// Decide whether two groups are isoclinic.
    Isoclinic {
        a: String,
        b: String,
        /// Include the isoclinism witness as JSON.
        #[arg(long)]
        witness: bool,
    },
    /// Name of the catalog group isomorphic to the input.
    Identify { spec: String },
    /// Invariants of every catalog group up to --max-order.
    Atlas,
    /// Check the claims over the catalog up to --max-order.
    Verify {
        /// Comma-separated claim ids; all claims when omitted.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
    },
    /// Non-commuting graph as a DIMACS edge list.
    ExportGraph { spec: String },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn realize(text: &str) -> Result<Group> {
    let spec = GroupSpec::parse(text).with_context(|| format!("cannot parse group '{text}'"))?;
    spec.realize().with_context(|| format!("cannot realize group '{text}'"))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn omega_config(cli: &Cli) -> Result<OmegaConfig> {
    if !cli.time_budget.is_finite() || cli.time_budget < 0.0 {
        bail!("--time-budget must be a non-negative number of seconds");
    }
    Ok(OmegaConfig {
        time_budget: (cli.time_budget > 0.0).then(|| Duration::from_secs_f64(cli.time_budget)),
    })
}

fn check_max_order(cli: &Cli) -> Result<()> {
    if cli.max_order > DEFAULT_MAX_ORDER {
        bail!("--max-order {} exceeds the cap of {DEFAULT_MAX_ORDER}", cli.max_order);
    }
    Ok(())
}

fn cmd_omega(cli: &Cli, text: &str) -> Result<Output> {
    let g = realize(text)?;
    let name = g.display_name();
    let (value, exact, witness) = match noncommuting::omega_with(&g, &omega_config(cli)?) {
        Ok(o) => (json!(o.size), true, o.witness),
        Err(OmegaError::TimeBudgetExceeded { lower, upper, witness }) => (json!([lower, upper]), false, witness),
        Err(e) => return Err(e.into()),
    };
    let labels: Vec<String> = witness.elements().iter().map(|&x| g.label(x)).collect();
    let text = match cli.format {
        Format::Json => json_text(&json!({
            "group": name,
            "order": g.order(),
            "omega": value,
            "exact": exact,
            "witness": labels,
        })),
        Format::Text => {
            let head = if exact {
                format!("{value}\n")
            } else {
                format!("{}..{} (time budget exhausted)\n", value[0], value[1])
            };
            format!("{head}witness ({} elements): {}\n", labels.len(), labels.join(", "))
        }
    };
    Ok(Output {
        text,
        code: if exact { 0 } else { EXIT_UNDECIDED },
    })
}

fn cmd_cent(cli: &Cli, text: &str) -> Result<Output> {
    let g = realize(text)?;
    let set = centralizers::centralizer_set(&g);
    let class = centralizers::classify_by_count(&g);
    let text = match cli.format {
        Format::Json => json_text(&json!({
            "group": g.display_name(),
            "order": g.order(),
            "count": set.count(),
            "centralizer_orders": set.orders(),
            "classification": class,
        })),
        Format::Text => {
            let orders: Vec<String> = set.orders().iter().map(usize::to_string).collect();
            format!("{}\ncentralizer orders: {}\n{class}\n", set.count(), orders.join(" "))
        }
    };
    Ok(Output::ok(text))
}

fn cmd_isoclinic(cli: &Cli, a: &str, b: &str, with_witness: bool) -> Result<Output> {
    let (g, h) = (realize(a)?, realize(b)?);
    let result = isoclinism::are_isoclinic(&g, &h);
    let verdict = match &result {
        Isoclinism::Isoclinic(_) => "YES",
        Isoclinism::NotIsoclinic => "NO",
        Isoclinism::Indeterminate { .. } => "UNKNOWN",
    };
    let witness = result.witness().filter(|_| with_witness).map(|w| w.to_json());
    let text = match cli.format {
        Format::Json => {
            let mut v = json!({
                "a": g.display_name(),
                "b": h.display_name(),
                "verdict": verdict,
            });
            if let Some(w) = witness {
                v["witness"] = w;
            }
            json_text(&v)
        }
        Format::Text => {
            let mut s = format!("{verdict}\n");
            if let Some(w) = witness {
                s.push_str(&json_text(&w));
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if matches!(result, Isoclinism::Indeterminate { .. }) {
            EXIT_UNDECIDED
        } else {
            0
        },
    })
}

fn cmd_identify(cli: &Cli, text: &str) -> Result<Output> {
    let g = realize(text)?;
    let catalog = catalog::build_catalog(g.order())?;
    let name = catalog.identify(&g);
    let text = match cli.format {
        Format::Json => json_text(&json!({ "group": g.display_name(), "order": g.order(), "identified": name })),
        Format::Text => format!("{}\n", name.unwrap_or("unidentified")),
    };
    Ok(Output::ok(text))
}

fn atlas_config(cli: &Cli) -> Result<AtlasConfig> {
    Ok(AtlasConfig {
        omega: omega_config(cli)?,
        ..AtlasConfig::default()
    })
}

fn cmd_atlas(cli: &Cli) -> Result<Output> {
    check_max_order(cli)?;
    let catalog = catalog::build_catalog(cli.max_order)?;
    let atlas = Atlas::compute(&catalog, &atlas_config(cli)?);
    let format = match cli.format {
        Format::Text => AtlasFormat::Csv,
        Format::Json => AtlasFormat::Json,
    };
    let mut buf = Vec::new();
    catalog::emit_atlas(&atlas.records, format, &mut buf)?;
    Ok(Output::ok(String::from_utf8(buf)?))
}

fn cmd_verify(cli: &Cli, ids: &[String]) -> Result<Output> {
    check_max_order(cli)?;
    let claims: Vec<Claim> = if ids.is_empty() {
        Claim::ALL.to_vec()
    } else {
        ids.iter()
            .map(|s| s.parse::<Claim>().map_err(anyhow::Error::msg))
            .collect::<Result<_>>()?
    };
    let catalog = catalog::build_catalog(cli.max_order)?;
    let atlas = Atlas::compute(&catalog, &atlas_config(cli)?);
    let report = verify::verify(&catalog, &atlas, &claims, isoclinism::DEFAULT_NODE_BUDGET);
    let text = match cli.format {
        Format::Json => json_text(&report.to_json()),
        Format::Text => report.to_text(),
    };
    Ok(Output {
        text,
        code: if report.all_pass() { 0 } else { 1 },
    })
}

fn cmd_export_graph(text: &str) -> Result<Output> {
    let g = realize(text)?;
    Ok(Output::ok(NoncommutingGraph::build(&g).to_dimacs()))
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Omega { spec } => cmd_omega(cli, spec),
        Command::Cent { spec } => cmd_cent(cli, spec),
        Command::Isoclinic { a, b, witness } => cmd_isoclinic(cli, a, b, *witness),
        Command::Identify { spec } => cmd_identify(cli, spec),
        Command::Atlas => cmd_atlas(cli),
        Command::Verify { claims } => cmd_verify(cli, claims),
        Command::ExportGraph { spec } => cmd_export_graph(spec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.text).with_context(|| format!("cannot write {}", path.display())),
        None => io::stdout().write_all(output.text.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(output.code)
}
