use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use koszul_core::cycles::{
    families_to_json, gen2_families, symmetrized_cycle, z1_generators, CycleFamily, FamilyLabel, FamilyParams,
};
use koszul_core::homology::KoszulComplex;
use koszul_core::ring::{component_basis, power_ideal, IdealSpec};
use koszul_core::veronese::{green_lazarsfeld_index, veronese_betti, SegreVeroneseSpec, DEFAULT_CEILING};
use koszul_core::{field_context, Field, FieldContext, FieldKind, MultiDegree, RingConfig};
use koszul_lab::corpus::Hypothesis;
use koszul_lab::suites::{module_regularity, thread_limit};
use koszul_lab::{run_suite, LabError, RunConfig, Suite, SuiteReport};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "koszul-lab",
    version,
    about = "Koszul cycles, homology and regularity of monomial ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Z1,
    Sym,
    Gen2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeClass {
    /// Ideals with dim S/I >= 1.
    Random,
    /// Borel closures of random ideals.
    StronglyStable,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of cases, or `all`.
    #[arg(long)]
    size: Option<String>,
    /// Slack added to bounds in capped scans.
    #[arg(long, default_value_t = 2)]
    cap: i64,
    #[arg(long, default_value = "rat")]
    field: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Regularity and Betti table of Z_t and H_t for an ideal read from JSON.
    Homology {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        t: usize,
        /// Report dim Z_t, B_t, H_t in this total degree.
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long, default_value = "rat")]
        field: String,
        #[arg(long, default_value_t = 20)]
        cap: i64,
    },
    /// Print a cycle family of m^c.
    Cycles {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: i64,
        /// Degree t of the symmetrized cycles.
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value = "rat")]
        field: String,
    },
    /// Search for ideals with reg Z_t(I,S) > t(reg I + 1).
    ProbeQ1 {
        #[arg(long, value_enum, default_value_t = ProbeClass::Random)]
        class: ProbeClass,
        /// Skip the reg(I^2) > 2 reg(I) replay.
        #[arg(long)]
        no_square: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Betti table of a Segre-Veronese ring over its presentation.
    Betti {
        #[command(flatten)]
        args: SegreArgs,
    },
    /// Green-Lazarsfeld index of a Segre-Veronese ring, scanning rows up to `--imax`.
    Index {
        #[command(flatten)]
        args: SegreArgs,
    },
}

fn parse_field(s: &str) -> Result<FieldKind, LabError> {
    s.parse::<FieldKind>().map_err(|e| LabError::Usage(e.to_string()))
}

fn config(common: &Common) -> Result<RunConfig, LabError> {
    let size = match common.size.as_deref() {
        None | Some("all") => None,
        Some(s) => Some(
            s.parse::<usize>()
                .map_err(|_| LabError::Usage(format!("bad size {s:?}")))?,
        ),
    };
    if common.cap < 0 {
        return Err(LabError::Usage("cap must be non-negative".into()));
    }
    Ok(RunConfig {
        seed: common.seed,
        size,
        cap: common.cap,
        field: parse_field(&common.field)?,
        timing: common.timing,
        ..RunConfig::default()
    })
}

#[derive(clap::Args)]
struct SegreArgs {
    #[arg(long, value_delimiter = ',')]
    blocks: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    c: Vec<i64>,
    #[arg(long, alias = "rows", default_value_t = 3)]
    imax: usize,
    #[arg(long, default_value = "rat")]
    field: String,
    /// Largest component dimension attempted.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    timing: bool,
}

impl SegreArgs {
    fn spec(&self) -> Result<SegreVeroneseSpec, LabError> {
        segre(self.blocks.clone(), self.c.clone(), self.ceiling)
    }

    /// JSON echoing the ring and degree, with wall time on request.
    fn json(&self, spec: &SegreVeroneseSpec, body: serde_json::Value, start: Instant) -> String {
        let mut out = json!({ "spec": spec, "i_max": self.imax });
        if let (Some(out), Some(body)) = (out.as_object_mut(), body.as_object()) {
            out.extend(body.clone());
        }
        if self.timing {
            out["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
        }
        serde_json::to_string_pretty(&out).expect("JSON values serialize")
    }
}

fn emit(report: &SuiteReport, format: Format) -> i32 {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Table => print!("{}", report.render_table()),
    }
    report.verdict.exit_code()
}

macro_rules! with_field {
    ($ctx:expr, $f:ident => $body:expr) => {
        match $ctx {
            FieldContext::Rationals($f) => $body,
            FieldContext::Prime($f) => $body,
        }
    };
}

fn homology<F: Field>(field: F, spec: IdealSpec, t: usize, degree: Option<i64>, cap: i64) -> Result<i32, LabError> {
    let ideal = Arc::new(spec.build()?);
    let cx = KoszulComplex::new(ideal.clone(), t + 1)?;
    let z = cx.cycles(field.clone(), t)?;
    let h = cx.homology(field.clone(), t)?;
    let zr = module_regularity(&z, cap)?;
    let hr = module_regularity(&h, cap)?;
    let mut out = json!({
        "ideal": ideal.render(),
        "t": t,
        "Z": { "reg": zr.scan.reg, "certified": zr.window.certified, "betti": zr.scan.table.entries },
        "H": { "reg": hr.scan.reg, "certified": hr.window.certified, "betti": hr.scan.table.entries },
    });
    if let Some(j) = degree {
        let alpha = MultiDegree::single(j);
        let b = cx.boundaries(field.clone(), t)?;
        out["degree"] = json!({
            "j": j,
            "K_t": cx.chain_dim(t, &alpha)?,
            "Z_t": z.dim(&alpha),
            "B_t": b.dim(&alpha),
            "H_t": h.dim(&alpha),
        });
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(0)
}

fn cycles<F: Field>(field: F, family: Family, n: usize, c: i64, t: usize) -> Result<i32, LabError> {
    let ring = RingConfig::standard(n)?;
    let ideal = Arc::new(power_ideal(&ring, &MultiDegree::single(c))?);
    let fams: Vec<CycleFamily<F>> = match family {
        Family::Z1 => z1_generators(&field, &ideal)?,
        Family::Gen2 => gen2_families(&field, n, c as u32)?,
        Family::Sym => {
            // alpha = 1: a's are variables, b's run over monomials of degree c - 1
            let vars = component_basis(&ring, &MultiDegree::single(1));
            let bs = component_basis(&ring, &MultiDegree::single(c - 1));
            let mut out = Vec::new();
            if t < vars.len() {
                for aset in koszul_core::IndexSet::subsets(vars.len(), t + 1) {
                    let a: Vec<_> = aset.iter().map(|k| vars[k].clone()).collect();
                    for b in &bs {
                        let b = vec![b.clone(); t];
                        let chain = symmetrized_cycle(&field, &ideal, &a, &b)?;
                        if !chain.is_zero() {
                            out.push(CycleFamily {
                                label: FamilyLabel::Symmetrized,
                                params: FamilyParams {
                                    a: a.clone(),
                                    b,
                                    vars: Vec::new(),
                                },
                                chain,
                            });
                        }
                    }
                }
            }
            out
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&families_to_json(&fams)).expect("json")
    );
    Ok(0)
}

fn segre(blocks: Vec<usize>, c: Vec<i64>, ceiling: u64) -> Result<SegreVeroneseSpec, LabError> {
    Ok(SegreVeroneseSpec::new(blocks, c)?.with_ceiling(ceiling))
}

fn run(cli: Cli) -> Result<i32, LabError> {
    match cli.command {
        Command::Verify { suite, common } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, &config(&common)?)?;
            Ok(emit(&report, common.format))
        }
        Command::ProbeQ1 {
            class,
            no_square,
            common,
        } => {
            let mut cfg = config(&common)?;
            cfg.probe_class = match class {
                ProbeClass::Random => Hypothesis::NotPrimary,
                ProbeClass::StronglyStable => Hypothesis::StronglyStable,
            };
            cfg.probe_square = !no_square;
            let report = run_suite(Suite::ProbeQ1, &cfg)?;
            let gap = report.cases.iter().filter_map(|c| c.observed["gap"].as_i64()).max();
            eprintln!(
                "largest reg Z_t - t(reg I + 1) observed: {}",
                gap.map_or("none".into(), |g| g.to_string())
            );
            Ok(emit(&report, common.format))
        }
        Command::Homology {
            ideal,
            t,
            degree,
            field,
            cap,
        } => {
            let text =
                std::fs::read_to_string(&ideal).map_err(|e| LabError::Usage(format!("{}: {e}", ideal.display())))?;
            let spec = IdealSpec::from_json(&text)?;
            let ctx = field_context(parse_field(&field)?, 0)?;
            with_field!(ctx, f => homology(f, spec.clone(), t, degree, cap))
        }
        Command::Cycles { family, n, c, t, field } => {
            let ctx = field_context(parse_field(&field)?, 0)?;
            with_field!(ctx, f => cycles(f, family, n, c, t))
        }
        Command::Betti { args } => {
            let start = Instant::now();
            let spec = args.spec()?;
            let ctx = field_context(parse_field(&args.field)?, 0)?;
            let table = with_field!(ctx, f => veronese_betti(&f, &spec, args.imax))?;
            match args.format {
                Format::Json => println!("{}", args.json(&spec, json!({ "table": table }), start)),
                Format::Table => {
                    println!("{spec}");
                    print!("{}", table.render());
                }
            }
            Ok(0)
        }
        Command::Index { args } => {
            let start = Instant::now();
            let spec = args.spec()?;
            let ctx = field_context(parse_field(&args.field)?, 0)?;
            let report = with_field!(ctx, f => green_lazarsfeld_index(&f, &spec, args.imax))?;
            match args.format {
                Format::Json => {
                    let body = json!({ "index": report.to_string(), "report": report });
                    println!("{}", args.json(&spec, body, start));
                }
                Format::Table => println!("{spec}: index {report}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = thread_limit() {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("koszul-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
