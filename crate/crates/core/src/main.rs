use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cluster_slices::algebra::build_algebra;
use cluster_slices::cluster::{ClusterCategory, TiltingObject};
use cluster_slices::derived::{build_model, DerivedModel};
use cluster_slices::dot;
use cluster_slices::error::{Error, Result};
use cluster_slices::io::{self, Artifact, ArtifactKind, Workspace};
use cluster_slices::mesh::{MeshCategory, DEFAULT_CAP};
use cluster_slices::modules::{annihilator, mod_b_quiver, realizing_tilted_algebras, tilted_quotient};
use cluster_slices::quiver::Quiver;
use cluster_slices::repair::section_through_avoiding;
use cluster_slices::slices::{check, enumerate_local_slices, Predicate, SliceCandidate};
use cluster_slices::translation::{build_zq, TranslationQuiver};
use cluster_slices::verify::{run_suite, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "cts", version, about = "Translation quivers, mesh categories and cluster-tilted algebras of Dynkin type")]
struct Cli {
    /// Seed for randomized property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Level range LO:HI for plain ZQ windows.
    #[arg(long, global = true, value_parser = parse_window)]
    window: Option<(i64, i64)>,
    /// Cap on the dimension of intermediate path spaces.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap_paths: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredicateArg {
    Presection,
    LocalSection,
    Section,
    LocalSlice,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Quiver,
    TranslationQuiver,
    Model,
    Tilting,
    Algebra,
    Slice,
    Presentation,
}

impl From<KindArg> for ArtifactKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Quiver => ArtifactKind::Quiver,
            KindArg::TranslationQuiver => ArtifactKind::TranslationQuiver,
            KindArg::Model => ArtifactKind::Model,
            KindArg::Tilting => ArtifactKind::Tilting,
            KindArg::Algebra => ArtifactKind::Algebra,
            KindArg::Slice => ArtifactKind::Slice,
            KindArg::Presentation => ArtifactKind::Presentation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Slice predicates on translation quivers.
    #[command(subcommand)]
    Slices(SlicesCmd),
    /// Derived-category models of Dynkin quivers.
    #[command(subcommand)]
    Derived(DerivedCmd),
    /// Hom spaces of the mesh category.
    #[command(subcommand)]
    Mesh(MeshCmd),
    /// Cluster category: tilting objects and Ext^1.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// Cluster-tilted algebras, annihilators and section repair.
    #[command(subcommand)]
    Ct(CtCmd),
    /// Run a property suite: axioms, mesh, cluster, tilted, repair or all.
    Verify {
        suite: String,
        /// Extra translation quivers for the axioms suite.
        #[arg(long = "quiver")]
        quivers: Vec<PathBuf>,
        /// Random subsets drawn by the section-equivalence property.
        #[arg(long, default_value_t = 1200)]
        samples: usize,
    },
    /// Render an artifact as DOT.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::TranslationQuiver)]
        kind: KindArg,
        /// Slice to highlight.
        #[arg(long)]
        slice: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SlicesCmd {
    Check {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_enum)]
        predicate: PredicateArg,
    },
    Enumerate {
        #[arg(long)]
        quiver: PathBuf,
    },
}

#[derive(Subcommand)]
enum DerivedCmd {
    Build {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The plain ZQ window over `--window`.
    Zq {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MeshCmd {
    Homdim {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// CSV of `dim Hom(x, y)` over all interior pairs with a nonzero value.
    Table {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Subcommand)]
enum ClusterCmd {
    TiltingEnumerate {
        #[arg(long)]
        model: PathBuf,
    },
    Ext1 {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Subcommand)]
enum CtCmd {
    Build {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        tilting: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local slices of the module category.
    Slices { algebra: PathBuf },
    /// The module category as a translation quiver.
    Modules { algebra: PathBuf },
    Annihilator {
        algebra: PathBuf,
        #[arg(long)]
        slice: PathBuf,
    },
    Tilted {
        algebra: PathBuf,
        #[arg(long)]
        slice: PathBuf,
    },
    Realize { algebra: PathBuf },
    RepairSection {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        forbidden: PathBuf,
    },
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn emit<T: Serialize>(v: &T) -> Result<String> {
    io::to_canonical(v)
}

fn write_or_print(out: Option<&Path>, text: String) -> Result<String> {
    match out {
        Some(p) => {
            std::fs::write(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

struct Loader(Workspace);

impl Loader {
    fn get(&mut self, p: &Path, k: ArtifactKind) -> Result<Artifact> {
        self.0.load(p, k).cloned()
    }

    fn quiver(&mut self, p: &Path) -> Result<Quiver> {
        match self.get(p, ArtifactKind::Quiver)? {
            Artifact::Quiver(q) => Ok(q),
            _ => unreachable!(),
        }
    }

    fn translation(&mut self, p: &Path) -> Result<TranslationQuiver> {
        match self.get(p, ArtifactKind::TranslationQuiver)? {
            Artifact::TranslationQuiver(g) => Ok(g),
            _ => unreachable!(),
        }
    }

    fn model(&mut self, p: &Path) -> Result<DerivedModel> {
        match self.get(p, ArtifactKind::Model)? {
            Artifact::Model(m) => Ok(*m),
            _ => unreachable!(),
        }
    }

    fn slice(&mut self, p: &Path) -> Result<SliceCandidate> {
        match self.get(p, ArtifactKind::Slice)? {
            Artifact::Slice(s) => Ok(s),
            _ => unreachable!(),
        }
    }

    fn tilting(&mut self, p: &Path) -> Result<TiltingObject> {
        match self.get(p, ArtifactKind::Tilting)? {
            Artifact::Tilting(t) => Ok(t),
            _ => unreachable!(),
        }
    }

    fn algebra(&mut self, p: &Path) -> Result<cluster_slices::algebra::AlgebraRecord> {
        match self.get(p, ArtifactKind::Algebra)? {
            Artifact::Algebra(a) => Ok(*a),
            _ => unreachable!(),
        }
    }
}

/// A window id, or `P:v` / `I:v` for the projective or injective at vertex `v`.
fn resolve_point(m: &DerivedModel, s: &str) -> Result<usize> {
    let id = match s.split_once(':') {
        Some(("P", v)) => m.proj_pos.get(v).cloned(),
        Some(("I", v)) => m.inj_pos.get(v).cloned(),
        _ => None,
    };
    m.point(id.as_deref().unwrap_or(s))
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let mut ld = Loader(Workspace::new());
    let dot_out = cli.format == Format::Dot;
    let text = match cli.command {
        Command::Slices(SlicesCmd::Check { quiver, set, predicate }) => {
            let g = ld.translation(&quiver)?;
            let s = ld.slice(&set)?;
            let p = match predicate {
                PredicateArg::Presection => Predicate::Presection,
                PredicateArg::LocalSection => Predicate::LocalSection,
                PredicateArg::Section => Predicate::Section,
                PredicateArg::LocalSlice => Predicate::LocalSlice,
            };
            emit(&serde_json::json!({ "verdict": check(&g, &s, p)?.to_string() }))?
        }
        Command::Slices(SlicesCmd::Enumerate { quiver }) => {
            let g = ld.translation(&quiver)?;
            emit(&enumerate_local_slices(&g)?)?
        }
        Command::Derived(DerivedCmd::Build { quiver, out }) => {
            let m = build_model(&ld.quiver(&quiver)?)?;
            let text = if dot_out { dot::render_translation_quiver(&m.window, None) } else { Artifact::Model(Box::new(m)).to_text()? };
            write_or_print(out.as_deref(), text)?
        }
        Command::Derived(DerivedCmd::Zq { quiver, out }) => {
            let (lo, hi) = cli.window.ok_or_else(|| Error::Validation("--window LO:HI is required".into()))?;
            let g = build_zq(&ld.quiver(&quiver)?, lo, hi)?;
            let text = if dot_out { dot::render_translation_quiver(&g, None) } else { Artifact::TranslationQuiver(g).to_text()? };
            write_or_print(out.as_deref(), text)?
        }
        Command::Mesh(MeshCmd::Homdim { model, from, to }) => {
            let m = ld.model(&model)?;
            let cat = MeshCategory::with_cap(&m, cli.cap_paths);
            let (x, y) = (resolve_point(&m, &from)?, resolve_point(&m, &to)?);
            let h = cat.hom_basis(x, y)?;
            emit(&h)?
        }
        Command::Mesh(MeshCmd::Table { model }) => {
            let m = ld.model(&model)?;
            let cat = MeshCategory::with_cap(&m, cli.cap_paths);
            let g = &m.window;
            let mut csv = String::from("source,target,dim\n");
            for x in (0..g.len()).filter(|&i| g.is_interior(i)) {
                for y in (0..g.len()).filter(|&i| g.is_interior(i)) {
                    match cat.hom_dim(x, y) {
                        Ok(0) => {}
                        Ok(d) => csv.push_str(&format!("{},{},{d}\n", g.id(x), g.id(y))),
                        // sources whose cone leaves the window are skipped
                        Err(Error::Boundary(_)) => break,
                        Err(e) => return Err(e),
                    }
                }
            }
            csv
        }
        Command::Cluster(ClusterCmd::TiltingEnumerate { model }) => {
            let m = ld.model(&model)?;
            emit(&ClusterCategory::new(&m).enumerate_tilting()?)?
        }
        Command::Cluster(ClusterCmd::Ext1 { model, x, y }) => {
            let m = ld.model(&model)?;
            let c = ClusterCategory::new(&m);
            let (a, b) = (resolve_point(&m, &x)?, resolve_point(&m, &y)?);
            emit(&serde_json::json!({ "x": x, "y": y, "dim": c.ext1_dim(a, b)? }))?
        }
        Command::Ct(CtCmd::Build { model, tilting, out }) => {
            let m = ld.model(&model)?;
            let t = ld.tilting(&tilting)?;
            let c = ClusterCategory::new(&m);
            let alg = build_algebra(&c, &t)?;
            let text = if dot_out { dot::render_quiver(&alg.quiver) } else { Artifact::Algebra(Box::new(alg.record())).to_text()? };
            write_or_print(out.as_deref(), text)?
        }
        Command::Ct(CtCmd::Slices { algebra }) => {
            let rec = ld.algebra(&algebra)?;
            io::with_algebra(&rec, |alg| emit(&enumerate_local_slices(&mod_b_quiver(alg)?)?))?
        }
        Command::Ct(CtCmd::Modules { algebra }) => {
            let rec = ld.algebra(&algebra)?;
            io::with_algebra(&rec, |alg| {
                let g = mod_b_quiver(alg)?;
                if dot_out {
                    Ok(dot::render_translation_quiver(&g, None))
                } else {
                    Artifact::TranslationQuiver(g).to_text()
                }
            })?
        }
        Command::Ct(CtCmd::Annihilator { algebra, slice }) => {
            let rec = ld.algebra(&algebra)?;
            let s = ld.slice(&slice)?;
            io::with_algebra(&rec, |alg| emit(&annihilator(alg, &mod_b_quiver(alg)?, &s)?))?
        }
        Command::Ct(CtCmd::Tilted { algebra, slice }) => {
            let rec = ld.algebra(&algebra)?;
            let s = ld.slice(&slice)?;
            io::with_algebra(&rec, |alg| {
                let ann = annihilator(alg, &mod_b_quiver(alg)?, &s)?;
                let tq = tilted_quotient(alg, &ann)?;
                if dot_out {
                    Ok(dot::render_quiver(&tq.presentation.quiver))
                } else {
                    emit(&serde_json::json!({
                        "presentation": tq.presentation,
                        "relations": tq.presentation.relation_strings(),
                        "routes_agree": tq.routes_agree,
                    }))
                }
            })?
        }
        Command::Ct(CtCmd::Realize { algebra }) => {
            let rec = ld.algebra(&algebra)?;
            io::with_algebra(&rec, |alg| emit(&realizing_tilted_algebras(alg)?))?
        }
        Command::Ct(CtCmd::RepairSection { model, point, forbidden }) => {
            let m = ld.model(&model)?;
            let f = ld.slice(&forbidden)?;
            let bad = f.points.iter().map(|p| m.point(p)).collect::<Result<_>>()?;
            let run = section_through_avoiding(&m, resolve_point(&m, &point)?, &bad)?;
            if dot_out {
                dot::render_translation_quiver(&m.window, Some(&run.section))
            } else {
                emit(&run)?
            }
        }
        Command::Verify { suite, quivers, samples } => {
            let suite: Suite = suite.parse()?;
            let mut extra = Vec::new();
            for q in quivers {
                extra.push((q.display().to_string(), std::fs::read_to_string(&q)?));
            }
            let report = run_suite(suite, &VerifyOptions { seed: cli.seed, samples, extra_windows: extra });
            return Ok((emit(&report)?, report.passed));
        }
        Command::Render { file, kind, slice } => {
            let a = ld.get(&file, kind.into())?;
            let s = slice.map(|p| ld.slice(&p)).transpose()?;
            dot::render(&a, s.as_ref())?
        }
    };
    Ok((text, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
