//! Command-line front end: run scenarios and property suites, emit JSON
//! verdicts on standard output.
//!
//! Exit codes: 0 = success, 2 = a computed verdict did not match its
//! expectation, 1 = usage/format error. All randomized runs are seeded
//! (`--seed`, default 0) and output is byte-identical for any `--jobs`.

use clap::{Args, Parser, Subcommand};
use hscoh::catalog::{self, Scenario};
use hscoh::cohomology::{cohomology_dims, hs_property_verdict, Settings};
use hscoh::gamma::{
    gain_certificate, invert_gamma_minus_one, level_generators, nonzero_labels,
    procyclic_vanishing, GammaElem, VanishingVerdict,
};
use hscoh::gmodule::{GModule, Ring};
use hscoh::groups::{Perm, PermGroup};
use hscoh::homotopy::{
    homotopy_identity_check, GridCochain, GridGroup, GridModule, HomotopyConstants,
};
use hscoh::linalg::ZpkMatrix;
use hscoh::tate::{TateParams, Val};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use std::sync::Arc;

const DEFAULT_MAX_ROWS: u64 = 100_000_000;

#[derive(Parser)]
#[command(name = "hscoh", version, about = "Exact cohomology verdicts as JSON")]
struct Cli {
    /// Seed for every randomized property run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker count; results are byte-identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Row budget for the streaming rank engine.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ROWS)]
    max_rows: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology dimensions of a finite scenario file.
    Finite {
        #[arg(long)]
        file: String,
    },
    /// Vanishing-transfer verdict for the subgroup in a scenario file.
    HsCheck {
        #[arg(long)]
        file: String,
    },
    /// E₂ page and inflation-restriction exactness for a normal subgroup.
    E2 {
        #[arg(long)]
        file: String,
        #[arg(long, default_value_t = 2)]
        pmax: u32,
        #[arg(long, default_value_t = 1)]
        qmax: u32,
    },
    /// Build and verify a named scenario.
    Scenario { id: String },
    /// Procyclic action measurements on series rings.
    Padic {
        #[command(subcommand)]
        sub: PadicCommand,
    },
    /// Grid homotopy identity checks and exponent-level selection.
    Homotopy {
        #[command(subcommand)]
        sub: HomotopyCommand,
    },
    /// Run the full verification suite (or one criterion).
    Suite {
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Args)]
struct PadicParams {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0)]
    d: usize,
    /// absolute π-adic precision N
    #[arg(long, default_value_t = 24)]
    prec: i64,
    /// total t-degree cap D
    #[arg(long, default_value_t = 4)]
    cap: usize,
}

impl PadicParams {
    fn to_params(&self) -> TateParams {
        TateParams {
            p: self.p,
            d: self.d,
            prec: self.prec,
            deg_cap: self.cap,
        }
    }
}

#[derive(Subcommand)]
enum PadicCommand {
    /// Valuation-gain certificate for the generators of Γ_level.
    Gain {
        #[command(flatten)]
        params: PadicParams,
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Solve (γ−1)x = w on a labeled summand for a random seeded target.
    Invert {
        #[command(flatten)]
        params: PadicParams,
        /// comma-separated label, e.g. "1,0"
        #[arg(long)]
        label: String,
        /// residual target; defaults to the working precision
        #[arg(long)]
        target: Option<i64>,
    },
    /// Vanishing verdicts per label summand.
    Vanish {
        #[command(flatten)]
        params: PadicParams,
        /// restrict to one comma-separated label
        #[arg(long)]
        label: Option<String>,
    },
}

#[derive(Subcommand)]
enum HomotopyCommand {
    /// Evaluate both sides of the homotopy identity on random tuples.
    Check {
        #[arg(long)]
        p: u64,
        /// comma-separated label; its length fixes d+1
        #[arg(long, default_value = "1")]
        label: String,
        #[arg(long, default_value_t = 24)]
        prec: i64,
        /// grid depth L
        #[arg(long, default_value_t = 6)]
        level: u32,
        /// exponent level m
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 50)]
        tuples: usize,
    },
    /// Least exponent level m satisfying the contraction inequalities.
    Bound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        gc: i64,
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        eps: i64,
    },
}

/// Scenario file schema: a finite group with a module (and optionally a
/// subgroup), or a p-adic parameter block.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    group: Option<GroupSpec>,
    module: Option<ModuleSpec>,
    /// subgroup generators, one-line image notation
    subgroup: Option<Vec<Vec<usize>>>,
    #[serde(rename = "maxDegree")]
    max_degree: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    degree: usize,
    /// one permutation per generator, one-line image notation
    generators: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleSpec {
    /// a prime p, or [p, k] for Z/p^k
    p: serde_json::Value,
    /// one square row-major matrix per group generator
    matrices: Vec<Vec<Vec<u64>>>,
}

struct Failure {
    code: &'static str,
    message: String,
    exit: i32,
}

fn fail(code: &'static str, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
        exit: 1,
    }
}

impl From<hscoh::Error> for Failure {
    fn from(e: hscoh::Error) -> Failure {
        let code = match &e {
            hscoh::Error::Budget(_) => "budget",
            hscoh::Error::Format(m) if m.contains("unknown scenario") => "unknown-scenario",
            hscoh::Error::Format(_) => "schema",
            hscoh::Error::Dimension(_) | hscoh::Error::Precondition(_) => "schema",
            hscoh::Error::Precision(_) => "precision",
            hscoh::Error::NoContraction { .. } => "no-contraction",
            hscoh::Error::IdentityViolation(_) => "identity-violation",
            hscoh::Error::Construction(_) => "construction",
            _ => "internal",
        };
        let exit = if matches!(e, hscoh::Error::IdentityViolation(_)) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
            exit,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    hscoh::configure_jobs(cli.jobs);
    let settings = Settings {
        max_rows: cli.max_rows,
    };
    match run(&cli, &settings) {
        Ok((value, exit)) => {
            println!("{}", serde_json::to_string(&value).expect("serializable"));
            std::process::exit(exit);
        }
        Err(f) => {
            let value = json!({"error": {"code": f.code, "message": f.message}});
            println!("{}", serde_json::to_string(&value).expect("serializable"));
            std::process::exit(f.exit);
        }
    }
}

fn run(cli: &Cli, settings: &Settings) -> Result<(serde_json::Value, i32), Failure> {
    match &cli.command {
        Command::Finite { file } => {
            let sf = read_file(file)?;
            let m = finite_module(&sf)?;
            let max_degree = sf.max_degree.unwrap_or(2);
            let report = cohomology_dims(&m, max_degree, settings)?;
            let dims: Vec<usize> = report.degrees.iter().map(|d| d.dim()).collect();
            Ok((json!({"dims": dims, "degrees": report.degrees}), 0))
        }
        Command::HsCheck { file } => {
            let sf = read_file(file)?;
            let m = finite_module(&sf)?;
            let h = subgroup_of(&sf, m.group())?;
            let max_degree = sf.max_degree.unwrap_or(2);
            let verdict = hs_property_verdict(&m, &h, max_degree, settings)?;
            Ok((json!({"verdict": verdict}), 0))
        }
        Command::E2 { file, pmax, qmax } => {
            let sf = read_file(file)?;
            let m = finite_module(&sf)?;
            let h = subgroup_of(&sf, m.group())?;
            let page = hscoh::spectral::e2_page(m.group(), &h, &m, *pmax, *qmax, settings)?;
            let exact = hscoh::spectral::inf_res_check(m.group(), &h, &m)?;
            let exit = if exact { 0 } else { 2 };
            Ok((json!({"dims": page.dims, "inf_res_exact": exact}), exit))
        }
        Command::Scenario { id } => run_scenario(id, cli.seed, settings),
        Command::Padic { sub } => run_padic(sub, cli.seed),
        Command::Homotopy { sub } => run_homotopy(sub, cli.seed),
        Command::Suite { criterion } => {
            let outcomes = match criterion {
                Some(i) => {
                    if !(1..=11).contains(i) {
                        return Err(fail("usage", "criterion index must be 1..=11"));
                    }
                    vec![hscoh::suite::run_criterion(*i, cli.seed, settings)?]
                }
                None => hscoh::suite::run_all(cli.seed, settings)?,
            };
            let pass = outcomes.iter().all(|o| o.pass);
            let exit = if pass { 0 } else { 2 };
            Ok((json!({"criteria": outcomes, "pass": pass}), exit))
        }
    }
}

fn read_file(path: &str) -> Result<ScenarioFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail("io", format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| fail("schema", format!("invalid scenario file: {e}")))
}

fn finite_group(spec: &GroupSpec) -> Result<Arc<PermGroup>, Failure> {
    let gens = spec
        .generators
        .iter()
        .map(|imgs| Perm::new(imgs.clone()))
        .collect::<hscoh::Result<Vec<_>>>()?;
    for g in &gens {
        if g.degree() != spec.degree {
            return Err(fail("schema", "generator degree mismatch"));
        }
    }
    Ok(Arc::new(PermGroup::closure(spec.degree, gens, 10_000)?))
}

fn finite_module(sf: &ScenarioFile) -> Result<GModule, Failure> {
    let gspec = sf
        .group
        .as_ref()
        .ok_or_else(|| fail("schema", "missing \"group\" block"))?;
    let mspec = sf
        .module
        .as_ref()
        .ok_or_else(|| fail("schema", "missing \"module\" block"))?;
    let group = finite_group(gspec)?;
    let ring = match &mspec.p {
        serde_json::Value::Number(n) => Ring::fp(
            n.as_u64()
                .ok_or_else(|| fail("schema", "module p must be a positive integer"))?,
        ),
        serde_json::Value::Array(a) if a.len() == 2 => {
            let p = a[0]
                .as_u64()
                .ok_or_else(|| fail("schema", "module [p, k]: p must be an integer"))?;
            let k = a[1]
                .as_u64()
                .ok_or_else(|| fail("schema", "module [p, k]: k must be an integer"))?;
            Ring::zpk(p, k as u32)
        }
        _ => return Err(fail("schema", "module p must be an integer or [p, k]")),
    };
    let dim = mspec.matrices.first().map_or(0, |m| m.len());
    let gen_actions = mspec
        .matrices
        .iter()
        .map(|rows| {
            if rows.iter().any(|r| r.len() != dim) || rows.len() != dim {
                return Err(hscoh::Error::Dimension(
                    "module matrices must be square and equally sized".into(),
                ));
            }
            ZpkMatrix::new(
                ring.p,
                ring.k,
                dim,
                dim,
                rows.iter().flatten().copied().collect(),
            )
        })
        .collect::<hscoh::Result<Vec<_>>>()?;
    Ok(GModule::new(group, ring, gen_actions)?)
}

fn subgroup_of(sf: &ScenarioFile, g: &Arc<PermGroup>) -> Result<Arc<PermGroup>, Failure> {
    let gens = sf
        .subgroup
        .as_ref()
        .ok_or_else(|| fail("schema", "missing \"subgroup\" block"))?;
    let spec = GroupSpec {
        degree: g.degree(),
        generators: gens.clone(),
    };
    let h = finite_group(&spec)?;
    if !g.contains_group(&h) {
        return Err(fail("schema", "subgroup generators are not in the group"));
    }
    Ok(h)
}

fn parse_label(s: &str) -> Result<Vec<u8>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| fail("usage", format!("bad label component {t:?}")))
        })
        .collect()
}

fn run_scenario(
    id: &str,
    seed: u64,
    settings: &Settings,
) -> Result<(serde_json::Value, i32), Failure> {
    let scenario = catalog::build_scenario(id)?;
    let (mut value, pass) = match scenario {
        Scenario::S3Sign(sc) => {
            let r = sc.verify(settings)?;
            (serde_json::to_value(&r).expect("report"), r.pass)
        }
        Scenario::Steinberg(sc) => {
            let r = sc.verify(settings)?;
            (serde_json::to_value(&r).expect("report"), r.pass)
        }
        Scenario::Sp4(sc) => {
            let r = sc.verify(settings)?;
            (serde_json::to_value(&r).expect("report"), r.pass)
        }
        Scenario::Remark22(sc) => {
            let r = sc.verify(settings)?;
            (serde_json::to_value(&r).expect("report"), r.pass)
        }
        Scenario::Padic(sc) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = sc.verify(&mut rng)?;
            (serde_json::to_value(&r).expect("report"), r.pass)
        }
    };
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("id".into(), json!(id));
    }
    Ok((value, if pass { 0 } else { 2 }))
}

fn witness_generator(params: &TateParams, label: &[u8]) -> Result<GammaElem, Failure> {
    let gens = level_generators(params.p, params.exponent_levels(), params.d, 0);
    if label.iter().all(|&e| e == 0) {
        return Err(fail("usage", "label must be nonzero"));
    }
    if label[0] != 0 {
        Ok(gens[0].clone())
    } else {
        let j = label.iter().position(|&e| e != 0).expect("nonzero label");
        Ok(gens[j].clone())
    }
}

fn run_padic(cmd: &PadicCommand, seed: u64) -> Result<(serde_json::Value, i32), Failure> {
    match cmd {
        PadicCommand::Gain { params, level } => {
            let params = params.to_params();
            let cert = gain_certificate(&params, *level)?;
            Ok((serde_json::to_value(&cert).expect("certificate"), 0))
        }
        PadicCommand::Invert {
            params,
            label,
            target,
        } => {
            let params = params.to_params();
            let label = parse_label(label)?;
            if label.len() != params.d + 1 {
                return Err(fail("usage", "label length must be d + 1"));
            }
            let gamma = witness_generator(&params, &label)?;
            let target = target.unwrap_or(params.prec);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = hscoh::tate::random_elem(&mut rng, &params, 0);
            let x = invert_gamma_minus_one(&gamma, &label, &w, target)?;
            let x_val = match x.val() {
                Val::Exact(v) => json!(v),
                Val::AtLeast(v) => json!({"at_least": v}),
            };
            Ok((json!({"ok": true, "target": target, "x_val": x_val}), 0))
        }
        PadicCommand::Vanish { params, label } => {
            let params = params.to_params();
            let labels = match label {
                Some(s) => vec![parse_label(s)?],
                None => nonzero_labels(&params),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut verdicts = Vec::new();
            let mut all_vanish = true;
            for l in &labels {
                if l.len() != params.d + 1 {
                    return Err(fail("usage", "label length must be d + 1"));
                }
                let gamma = witness_generator(&params, l)?;
                let verdict = procyclic_vanishing(&gamma, l, &params, params.prec, &mut rng)?;
                all_vanish &= matches!(verdict, VanishingVerdict::Vanishes { .. });
                verdicts.push(json!({"label": l, "verdict": verdict}));
            }
            let exit = if all_vanish { 0 } else { 2 };
            Ok((
                json!({"verdicts": verdicts, "all_vanish": all_vanish}),
                exit,
            ))
        }
    }
}

fn run_homotopy(cmd: &HomotopyCommand, seed: u64) -> Result<(serde_json::Value, i32), Failure> {
    match cmd {
        HomotopyCommand::Bound { p, gc, tau, eps } => {
            let constants = HomotopyConstants::select(*p, *tau, *gc, *eps)?;
            Ok((json!({"m": constants.m}), 0))
        }
        HomotopyCommand::Check {
            p,
            label,
            prec,
            level,
            m,
            degree,
            tuples,
        } => {
            let label = parse_label(label)?;
            let d = label.len() - 1;
            let params = TateParams {
                p: *p,
                d,
                prec: *prec,
                deg_cap: 4,
            };
            let gm = GridModule::new(GridGroup::new(*p, d + 1, *level), params, label)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = GridCochain::random(&gm, *degree, &mut rng)?;
            let eta = {
                let mut c = gm.grid.identity();
                c[0] = 1;
                c
            };
            let sample: Vec<Vec<usize>> = (0..*tuples)
                .map(|_| {
                    (0..*degree)
                        .map(|_| rng.gen_range(0..gm.grid.size()))
                        .collect()
                })
                .collect();
            let report = homotopy_identity_check(&gm, &f, *m, &eta, &sample)?;
            let ok = report.min_agreement >= report.floor;
            let exit = if ok { 0 } else { 2 };
            Ok((json!({"report": report, "ok": ok}), exit))
        }
    }
}
