mod io;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bdspectra::battery::{run_criterion, CriterionResult, CRITERIA};
use bdspectra::bdcomplex::{assemble_cohomology_with, compute_e1, Model, Sheaf};
use bdspectra::classify::{assemble_bg_with, extension_from, ExtensionKind, DEFAULT_TRUNCATION};
use bdspectra::invariants::{
    basis_labels, cubic_invariant_basis, quadratic_invariant_basis, Restrict,
};
use bdspectra::rootdata::{count_nbdg_spec, GroupSpec};
use bdspectra::weyl::tuple_label;
use bdspectra::zchain::{CohomologyGroup, FieldModel};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "bdspectra",
    version,
    about = "K-cohomology of split reductive groups and their classifying spaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the output to this file (atomically) instead of stdout. For
    /// `export-complex` this is the target directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    #[value(name = "G")]
    G,
    #[value(name = "BG")]
    Bg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Level {
    Derived,
    Full,
}

impl From<Level> for Restrict {
    fn from(l: Level) -> Self {
        match l {
            Level::Derived => Restrict::Derived,
            Level::Full => Restrict::Full,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of G or BG with coefficients in K2 or K3.
    Cohomology {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long, default_value = "K3")]
        sheaf: Sheaf,
        #[arg(long, value_enum, default_value_t = Space::G)]
        space: Space,
        /// `symbolic` or `Fq:<q>` for the finite field with q elements.
        #[arg(long, default_value = "symbolic", value_parser = parse_model)]
        field: Model,
    },
    /// Central extensions and gerbal extensions of G.
    #[command(
        after_help = "Only the classifying group and its lattice generators are reported. \
Constructing the extensions or gerbes as geometric objects, and transgression to the loop \
group, are out of scope."
    )]
    Extensions {
        #[arg(long)]
        group: GroupSpec,
        /// Coefficient sheaf of the extension.
        #[arg(long, default_value = "K2")]
        by: Sheaf,
        #[arg(long, default_value = "central")]
        kind: ExtensionKind,
        #[arg(long, default_value = "symbolic", value_parser = parse_model)]
        field: Model,
    },
    /// Bases of the W-invariant quadratic or cubic forms.
    Forms {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        degree: u8,
        /// Forms on the coroot lattice only, or on all of Y.
        #[arg(long, value_enum, default_value_t = Level::Full)]
        on: Level,
    },
    /// The 2-torsion of the third Chow group, counted two ways.
    Chow3 {
        #[arg(long)]
        group: GroupSpec,
    },
    /// Canonical W-set tuples, levels 0 to 3.
    Wsets {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        level: Option<u8>,
    },
    /// Write one E0 column as a manifest plus one matrix file per differential.
    ExportComplex {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long, default_value = "K3")]
        sheaf: Sheaf,
        /// Column index p, between -n and 0.
        #[arg(long, allow_hyphen_values = true)]
        column: i32,
    },
    /// Run the verification battery.
    Verify {
        #[arg(long, default_value = "standard", value_parser = ["standard"])]
        battery: String,
        /// Run only these criteria (1 to 9).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        criterion: Vec<u8>,
    },
}

fn parse_model(s: &str) -> Result<Model, String> {
    if s == "symbolic" {
        return Ok(Model::Symbolic);
    }
    let q = s
        .strip_prefix("Fq:")
        .ok_or_else(|| format!("expected `symbolic` or `Fq:<q>`, got `{s}`"))?;
    let q: u64 = q.parse().map_err(|_| format!("`{q}` is not a number"))?;
    FieldModel::finite(q)
        .map(Model::Field)
        .map_err(|e| e.to_string())
}

struct Output {
    json: Value,
    table: String,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Output> {
    let out = match &cli.command {
        Command::Cohomology {
            group,
            sheaf,
            space,
            field,
        } => {
            let ctx = io::derived_context(group)?;
            match space {
                Space::G => {
                    let r = assemble_cohomology_with(group, *sheaf, field, &ctx);
                    Output {
                        table: render::degrees(
                            &format!("H^n({group}, {sheaf}) over {}", r.model),
                            &r.degrees,
                        ),
                        json: serde_json::to_value(&r)?,
                        ok: true,
                    }
                }
                Space::Bg => {
                    let r = assemble_bg_with(group, *sheaf, field, &ctx, DEFAULT_TRUNCATION);
                    Output {
                        table: render::bg(group, &r),
                        json: serde_json::to_value(&r)?,
                        ok: r.consistent(),
                    }
                }
            }
        }
        Command::Extensions {
            group,
            by,
            kind,
            field,
        } => {
            let ctx = io::derived_context(group)?;
            let bg = assemble_bg_with(group, *by, field, &ctx, DEFAULT_TRUNCATION);
            let r = extension_from(&bg, group, *kind);
            Output {
                table: render::extensions(&r),
                json: serde_json::to_value(&r)?,
                ok: bg.consistent(),
            }
        }
        Command::Forms { group, degree, on } => {
            let restrict = Restrict::from(*on);
            let rank = match on {
                Level::Derived => group.derived_rank(),
                Level::Full => group.total_rank(),
            };
            let labels = basis_labels(group.derived_rank(), rank);
            let forms: Vec<Value> = if *degree == 2 {
                let b = quadratic_invariant_basis(group, restrict);
                b.iter()
                    .map(|f| json!({"polynomial": f.polynomial(), "form": f}))
                    .collect()
            } else {
                let b = cubic_invariant_basis(group, restrict);
                b.iter()
                    .map(|f| json!({"polynomial": f.polynomial(), "form": f}))
                    .collect()
            };
            let polys: Vec<String> = forms
                .iter()
                .map(|f| f["polynomial"].as_str().unwrap_or("").to_string())
                .collect();
            Output {
                table: render::forms(group, *degree, &labels, &polys),
                json: json!({"spec": group.to_string(), "degree": degree, "lattice": format!("{on:?}").to_lowercase(), "basis": labels, "forms": forms}),
                ok: true,
            }
        }
        Command::Chow3 { group } => {
            let n = count_nbdg_spec(group);
            let cell = compute_e1(&group.derived(), Sheaf::K3).cell(-3, 6);
            let expected = CohomologyGroup::new(0, &vec![2; n]);
            let ok = cell == expected;
            Output {
                table: format!(
                    "CH³({group}) torsion: {expected}\n  Dynkin sub-diagrams of type G2, B3 or D4: {n}\n  E1(-3,6) of the K3 column: {cell}{}\n",
                    if ok { "" } else { "  (MISMATCH)" }
                ),
                json: json!({"spec": group.to_string(), "count": n, "group": expected, "e1_cell": cell, "agree": ok}),
                ok,
            }
        }
        Command::Wsets { group, level } => {
            let ctx = io::derived_context(group)?;
            let levels: Vec<usize> = match level {
                Some(l) => vec![*l as usize],
                None => (0..=3).collect(),
            };
            let rows: Vec<(usize, Vec<String>)> = levels
                .iter()
                .map(|&p| {
                    (
                        p,
                        ctx.wsets()
                            .level(p)
                            .iter()
                            .map(|t| tuple_label(t))
                            .collect(),
                    )
                })
                .collect();
            Output {
                table: render::wsets(group, &rows),
                json: json!({
                    "spec": group.to_string(),
                    "levels": rows.iter().map(|(p, t)| json!({"level": p, "count": t.len(), "tuples": t})).collect::<Vec<_>>(),
                }),
                ok: true,
            }
        }
        Command::ExportComplex {
            group,
            sheaf,
            column,
        } => {
            let Some(dir) = &cli.out else {
                bail!("export-complex needs --out <DIR>");
            };
            let ctx = io::derived_context(group)?;
            let col = ctx.column(*sheaf, *column)?;
            let manifest = io::export_atomically(&col, group, dir)?;
            let summary = format!(
                "wrote {} differential(s) of column {column} ({sheaf}, {group}) to {}\n",
                manifest.files.len(),
                dir.display()
            );
            return Ok(Output {
                table: summary,
                json: serde_json::to_value(&manifest)?,
                ok: true,
            });
        }
        Command::Verify { battery, criterion } => {
            let ids: Vec<usize> = if criterion.is_empty() {
                (1..=CRITERIA.len()).collect()
            } else {
                criterion.iter().map(|&c| c as usize).collect()
            };
            let results: Vec<CriterionResult> = ids.into_iter().map(run_criterion).collect();
            let ok = results.iter().all(|r| r.pass);
            Output {
                table: render::verify(&results),
                json: json!({"battery": battery, "pass": ok, "results": results}),
                ok,
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|o| emit(&cli, o)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<bool> {
    let text = match cli.format {
        Format::Json => {
            let mut v = out.json;
            if let Value::Object(m) = &mut v {
                m.insert("schema".into(), json!(1));
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Table => out.table,
    };
    match (&cli.out, &cli.command) {
        (Some(path), c) if !matches!(c, Command::ExportComplex { .. }) => {
            io::write_atomically(path, text.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?
        }
        _ => print!("{text}"),
    }
    Ok(out.ok)
}
