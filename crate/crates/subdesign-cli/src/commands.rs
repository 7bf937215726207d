//! Verb definitions and dispatch. Every verb prints JSON (or CSV/DOT when asked) and
//! writes its artifact to `-o` when it produces one.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use subdesign::design::{
    self, classify, construct_basis_partition, construct_field_partition, construct_glued, construct_pseudoregulus,
    construct_twisted, design_profile, direct_sum, dual_design, enlarge, hyperplane_weight_distribution, is_cutting,
    SubspaceDesign,
};
use subdesign::expander::{build_expander, default_beta, expansion_check, CheckMode, ExpansionTarget};
use subdesign::gf::{format_expr, is_prime, parse_expr, Code, FieldTower};
use subdesign::hamming::{cayley_edges, ext_system, srg_from_two_intersection, verify_srg_graph, weight_enumerator};
use subdesign::skewpoly::element_of_norm;
use subdesign::strongbridge::{
    cameron_liebler, evasive_intersect, intermediate_field_design, places_embed, verify_cameron_liebler, verify_strong,
    ClKind, Converted, Ratio,
};
use subdesign::subspace::{AmbientSpace, FqmSubspace};
use subdesign::sumrank::{
    code_from_system, delsarte_check, is_minimal_code, singleton_for_code, verify_dual_msrd, BRUTE_FORCE_LIMIT,
};

use crate::formats::{self, read_json, to_pretty, write_text};
use crate::{repro, CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "subdesign", version, about = "Subspace designs over F_{q^m}/F_q: constructions, certification and derived codes")]
pub struct Cli {
    /// Largest number of subspaces any sweep may enumerate.
    #[arg(long, global = true, default_value_t = subdesign::subspace::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampling modes.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Artifact output path.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a design and write its JSON.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Smallest A making the design an (s, A) design, with a witness.
    Profile {
        design: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Profiles for s = 1..=max-s with design/maximum flags and optimality.
    Classify {
        design: PathBuf,
        #[arg(long)]
        max_s: Option<usize>,
    },
    /// Hyperplane histogram and Hamming weight enumerator of Ext(D).
    Weights {
        design: PathBuf,
        #[arg(long)]
        histogram_csv: Option<PathBuf>,
        #[arg(long)]
        enumerator_csv: Option<PathBuf>,
    },
    /// Minimum distance, Singleton check and dual MSRD check of the associated code.
    Msrd { design: PathBuf },
    /// Ordinary (trace) or Delsarte dual.
    Dual {
        kind: DualKind,
        design: PathBuf,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
    },
    /// Write the sum-rank code associated with a design.
    Code { design: PathBuf },
    /// Cutting test over all hyperplanes.
    Cutting { design: PathBuf },
    /// Minimality of a sum-rank code (geometric test plus pair scan at small size).
    Minimal { code: PathBuf },
    /// Strongly regular graph parameters of Ext(D).
    Srg {
        design: PathBuf,
        /// Build the Cayley graph and check every vertex pair.
        #[arg(long)]
        verify_graph: bool,
        /// Write the graph in DOT form.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Dimension-expander check of the σ-polynomial evaluation family.
    Expander {
        design: PathBuf,
        /// `default` (1, y, …, y^{m−1}) or a comma-separated list of elements.
        #[arg(long, default_value = "default")]
        beta: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Sample this many subspaces per dimension instead of sweeping.
        #[arg(long)]
        samples: Option<u64>,
        /// Target ratio `num/den`; defaults to (m − t + 1)/A with A the 1-profile.
        #[arg(long)]
        zeta: Option<String>,
    },
    /// Strong subspace designs and their conversions.
    Strong {
        #[command(subcommand)]
        verb: StrongVerb,
    },
    /// Reproduce the reference checks.
    Repro { target: ReproTarget },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DualKind {
    Ordinary,
    Delsarte,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReproTarget {
    PaperExamples,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// U_i spanned over F_q by the basis vectors in block i of the partition.
    BasisPartition {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        /// Blocks of 0-based basis indices, e.g. `0;1`.
        #[arg(long)]
        partition: String,
        /// Basis vectors `a,b;c,d`; default the standard basis.
        #[arg(long)]
        basis: Option<String>,
    },
    /// Twisted (k−1)-design with σ = x^q.
    Twisted {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        /// Twisting elements; default: one element of each norm 1, 2, … up to --t.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value = "0")]
        eta: String,
        /// F_q-spanning sets of the blocks S_i, `a,b;c`; default the whole field.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// k/(s+1) glued copies of the twisted s-design.
    Glued {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Pseudoregulus-type design in F_{q^m}^{2r}.
    Pseudoregulus {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        mus: String,
        #[arg(long, default_value_t = 1)]
        s_exp: usize,
    },
    /// Partition of PG(k−1, q^m) into subgeometries, gcd(k, m) = 1.
    FieldPartition {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// Direct sum of designs with equal tower and member count.
    DirectSum { designs: Vec<PathBuf> },
    /// Enlarge members by the given increments and re-certify.
    Enlarge {
        design: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        increments: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClKindArg {
    PointPencil,
    InHyperplane,
    Mixed,
    ComplementPointPencil,
    ComplementInHyperplane,
    ComplementMixed,
    Union,
}

#[derive(Debug, Subcommand)]
pub enum StrongVerb {
    /// Exact strong profile at level s.
    Verify {
        design: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Cameron–Liebler set of n-spaces in PG(k, q) as a strong design.
    CameronLiebler {
        #[arg(long)]
        kind: ClKindArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Point for pencils, `1,0,0,0`.
        #[arg(long)]
        point: Option<String>,
        /// Hyperplane normal, `1,0,0,0`.
        #[arg(long)]
        normal: Option<String>,
        /// Union kind: pencil points `a;b`.
        #[arg(long)]
        points: Option<String>,
        /// Union kind: hyperplane normals `a;b`.
        #[arg(long)]
        normals: Option<String>,
    },
    /// Intersect with an evasive subspace.
    Evasive {
        design: PathBuf,
        /// Subspace JSON of E.
        #[arg(long)]
        e: PathBuf,
        /// c as `num/den` or an integer.
        #[arg(long)]
        c: String,
        #[arg(long)]
        s: usize,
    },
    /// Regard members as F_q-subspaces of F_{q^c}^k, m | c.
    Lift {
        design: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        s: usize,
    },
    /// Embed spaces of polynomials through k places τ^j p.
    Places {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: usize,
        /// Coefficients of p over F_q, little-endian, e.g. `1,1,0,1`.
        #[arg(long)]
        p: String,
        /// Primitive element of F_q as a code.
        #[arg(long)]
        zeta: u32,
        /// Spanning polynomials, members separated by `;`, polynomials by `|`,
        /// coefficients by `,` (little-endian), e.g. `1|0,1;1`.
        #[arg(long)]
        spaces: String,
    },
}

/// Output of one verb: text for stdout and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn json(v: Value) -> Outcome {
        Outcome { stdout: to_pretty(&v), exit_code: 0 }
    }
}

pub fn config_of(cli: &Cli) -> RunConfig {
    RunConfig { enumeration_cap: cli.cap, threads: cli.threads, seed: cli.seed, output: cli.output.clone() }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = config_of(&cli);
    if cfg.enumeration_cap == 0 {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(cli.command, &cfg)),
        None => dispatch(cli.command, &cfg),
    }
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cap = cfg.enumeration_cap;
    match command {
        Command::Construct { kind } => {
            let d = construct(kind, cfg)?;
            emit_design(&d, cfg)
        }
        Command::Profile { design, s } => {
            let d = load_design(&design)?;
            let p = design_profile(&d, s, cap)?;
            Ok(Outcome::json(profile_json(&p)))
        }
        Command::Classify { design, max_s } => {
            let d = load_design(&design)?;
            let k = d.ambient().k();
            let r = classify(&d, max_s.unwrap_or(k), cap)?;
            let levels: Vec<Value> = r
                .levels
                .iter()
                .map(|l| json!({ "profile": profile_json(&l.profile), "is_design": l.is_design, "is_maximum": l.is_maximum }))
                .collect();
            Ok(Outcome::json(json!({
                "dims": r.dims, "levels": levels, "monotone": r.monotone,
                "optimal": r.optimal, "t_bound_ok": r.t_bound_ok,
            })))
        }
        Command::Weights { design, histogram_csv, enumerator_csv } => {
            let d = load_design(&design)?;
            let hist = hyperplane_weight_distribution(&d, cap)?;
            let ext = ext_system(&d, cap)?;
            let en = weight_enumerator(&ext, cap)?;
            if let Some(path) = histogram_csv {
                csv_file(&path, ["intersection", "hyperplanes"], hist.counts.iter().map(|(a, b)| (*a, *b)))?;
            }
            if let Some(path) = enumerator_csv {
                csv_file(&path, ["weight", "count"], en.iter().map(|(a, b)| (*a, *b)))?;
            }
            Ok(Outcome::json(json!({
                "hyperplane_histogram": map_json(hist.counts.iter()),
                "closed_form_checked": hist.max1_checked,
                "ext_length": ext.length(),
                "ext_is_set": ext.is_set(),
                "enumerator": map_json(en.iter()),
            })))
        }
        Command::Msrd { design } => {
            let d = load_design(&design)?;
            let code = code_from_system(&d)?;
            let (dist, s) = singleton_for_code(&code, cap)?;
            let dual = verify_dual_msrd(&code, cap)?;
            Ok(Outcome::json(json!({
                "lengths": code.n(), "k": code.k(), "m": d.ambient().m(), "d": dist,
                "singleton": { "j": s.j, "delta": s.delta, "bound_exponent": s.bound_exponent, "is_msrd": s.is_msrd, "optimal_inequality": s.optimal_inequality },
                "dual": { "d": dual.d, "d_dual": dual.d_dual, "msrd": dual.msrd, "dual_msrd": dual.dual_msrd },
            })))
        }
        Command::Dual { kind: DualKind::Ordinary, design, s, a } => {
            let d = load_design(&design)?;
            let s = s.unwrap_or(1);
            let a = match a {
                Some(a) => a,
                None => design_profile(&d, s, cap)?.a_min,
            };
            let dual = dual_design(&d, s, a, cap)?;
            write_artifact(cfg, &to_pretty(&formats::design_to_json(&dual.design)))?;
            Ok(Outcome::json(json!({ "s": dual.s, "a": dual.a, "dims": dual.design.dims(), "written": cfg.output })))
        }
        Command::Dual { kind: DualKind::Delsarte, design, .. } => {
            let d = load_design(&design)?;
            let r = delsarte_check(&d, cap)?;
            write_artifact(cfg, &to_pretty(&formats::design_to_json(&r.dual)))?;
            Ok(Outcome::json(json!({
                "dims": r.dual.dims(), "m": r.m, "m_dual": r.m_dual, "lower_bound": r.lower_bound,
                "optimal": r.optimal, "dual_optimal": r.dual_optimal, "written": cfg.output,
            })))
        }
        Command::Code { design } => {
            let d = load_design(&design)?;
            let code = code_from_system(&d)?;
            let text = to_pretty(&formats::code_to_json(&code));
            match &cfg.output {
                Some(p) => {
                    write_text(p, &text)?;
                    Ok(Outcome::json(json!({ "lengths": code.n(), "k": code.k(), "written": p })))
                }
                None => Ok(Outcome { stdout: text, exit_code: 0 }),
            }
        }
        Command::Cutting { design } => {
            let d = load_design(&design)?;
            let r = is_cutting(&d, cap)?;
            Ok(Outcome::json(json!({
                "cutting": r.cutting, "constant_sum": r.constant_sum,
                "witness": r.witness.as_ref().map(fqm_rows),
            })))
        }
        Command::Minimal { code } => {
            let c = formats::code_from_json(&read_json(&code)?)?;
            let r = is_minimal_code(&c, cap, BRUTE_FORCE_LIMIT)?;
            let t = c.tower().clone();
            Ok(Outcome::json(json!({
                "minimal": r.minimal, "brute_force_checked": r.brute_force_checked,
                "witness": r.witness.as_ref().map(|(x, y)| json!({ "x": exprs(&t, x), "y": exprs(&t, y) })),
            })))
        }
        Command::Srg { design, verify_graph, dot } => {
            let d = load_design(&design)?;
            let ext = ext_system(&d, cap)?;
            let p = srg_from_two_intersection(&ext, cap)?;
            if verify_graph {
                verify_srg_graph(&ext, &p)?;
            }
            if let Some(path) = dot {
                let (v, edges) = cayley_edges(&ext)?;
                write_text(&path, &formats::dot_graph("srg", v, &edges))?;
            }
            Ok(Outcome::json(json!({
                "v": p.v.to_string(), "k": p.k.to_string(), "lambda": p.lambda.to_string(), "mu": p.mu.to_string(),
                "feasible": p.feasible(), "graph_verified": verify_graph,
            })))
        }
        Command::Expander { design, beta, max_dim, samples, zeta } => {
            let d = load_design(&design)?;
            let t = d.tower().clone();
            let beta = if beta == "default" { default_beta(&t) } else { parse_elements(&t, &beta)? };
            let fam = build_expander(&d, &beta)?;
            let target = match zeta {
                Some(z) => {
                    let r = parse_ratio(&z)?;
                    ExpansionTarget { zeta_num: r.num, zeta_den: r.den }
                }
                None => ExpansionTarget::from_design(d.ambient().m(), d.t(), design_profile(&d, 1, cap)?.a_min),
            };
            let mode = match samples {
                Some(n) => CheckMode::Sample { samples: n, seed: cfg.seed },
                None => CheckMode::Exhaustive { cap },
            };
            let r = expansion_check(&fam, max_dim, mode, Some(target))?;
            let dims: Vec<Value> = r
                .dims
                .iter()
                .map(|x| json!({
                    "dim": x.dim, "tested": x.tested.to_string(), "exhaustive": x.exhaustive,
                    "min_image_dim": x.min_image_dim, "min_ratio": x.min_ratio(), "witness": x.witness,
                }))
                .collect();
            Ok(Outcome::json(json!({
                "ell": fam.ell(), "maps": fam.maps().len(), "dims": dims,
                "target": format!("{}/{}", target.zeta_num, target.zeta_den), "verdict": r.verdict,
            })))
        }
        Command::Strong { verb } => strong(verb, cfg),
        Command::Repro { target: ReproTarget::PaperExamples } => {
            let outcomes = repro::run_all(cfg);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&o.line());
                text.push('\n');
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!("{} of {} criteria passed\n", outcomes.len() - failed, outcomes.len()));
            Ok(Outcome { stdout: text, exit_code: if failed == 0 { 0 } else { 1 } })
        }
    }
}

fn construct(kind: ConstructKind, cfg: &RunConfig) -> Result<SubspaceDesign, CliError> {
    Ok(match kind {
        ConstructKind::BasisPartition { field, k, partition, basis } => {
            let t = tower(&field)?;
            let a = AmbientSpace::new(&t, k)?;
            let basis = match basis {
                Some(b) => parse_vectors(&t, &b)?,
                None => (0..k).map(|i| (0..k).map(|j| Code::from(i == j)).collect()).collect(),
            };
            construct_basis_partition(&a, &basis, &parse_index_blocks(&partition)?)?
        }
        ConstructKind::Twisted { field, k, alphas, t: count, eta, blocks } => {
            let t = tower(&field)?;
            let a = AmbientSpace::new(&t, k)?;
            let alphas = pick_alphas(&t, alphas.as_deref(), count)?;
            let blocks = match blocks {
                Some(b) => parse_vectors(&t, &b)?,
                None => vec![default_beta(&t); alphas.len()],
            };
            construct_twisted(&a, &alphas, parse_expr(&t, &eta)?, &blocks)?
        }
        ConstructKind::Glued { field, k, s, alphas, t: count } => {
            let t = tower(&field)?;
            let alphas = pick_alphas(&t, alphas.as_deref(), count)?;
            construct_glued(&t, k, s, &alphas)?
        }
        ConstructKind::Pseudoregulus { field, r, mus, s_exp } => {
            let t = tower(&field)?;
            let a = AmbientSpace::new(&t, 2 * r)?;
            construct_pseudoregulus(&a, s_exp, &parse_elements(&t, &mus)?)?
        }
        ConstructKind::FieldPartition { field, k } => construct_field_partition(&tower(&field)?, k)?,
        ConstructKind::DirectSum { designs } => {
            let ds = designs.iter().map(|p| load_design(p)).collect::<Result<Vec<_>, _>>()?;
            direct_sum(&ds)?
        }
        ConstructKind::Enlarge { design, s, increments } => {
            let d = load_design(&design)?;
            let inc = parse_usizes(&increments)?;
            enlarge(&d, s, &inc, cfg.enumeration_cap)?.0
        }
    })
}

fn strong(verb: StrongVerb, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cap = cfg.enumeration_cap;
    match verb {
        StrongVerb::Verify { design, s } => {
            let d = formats::strong_from_json(&read_json(&design)?)?;
            let p = verify_strong(&d, s, cap)?;
            Ok(Outcome::json(json!({ "s": p.s, "a_min": p.a_min, "witness": fqm_rows(&p.witness) })))
        }
        StrongVerb::CameronLiebler { kind, q, n, k, point, normal, points, normals } => {
            let (p, h) = prime_power(q)?;
            let t = FieldTower::with_defaults(p, h, 1)?;
            let a = AmbientSpace::new(&t, k + 1)?;
            let unit = || {
                let mut v = vec![0; k + 1];
                v[0] = 1;
                v
            };
            let one = |s: &Option<String>| -> Result<Vec<Code>, CliError> {
                s.as_deref().map(|s| parse_elements(&t, s)).transpose().map(|v| v.unwrap_or_else(unit))
            };
            let pencil = ClKind::PointPencil { point: one(&point)? };
            let plane = ClKind::InHyperplane { normal: one(&normal)? };
            let mixed = ClKind::Mixed { point: one(&point)?, normal: one(&normal)? };
            let cl = match kind {
                ClKindArg::PointPencil => pencil,
                ClKindArg::InHyperplane => plane,
                ClKindArg::Mixed => mixed,
                ClKindArg::ComplementPointPencil => ClKind::Complement(Box::new(pencil)),
                ClKindArg::ComplementInHyperplane => ClKind::Complement(Box::new(plane)),
                ClKindArg::ComplementMixed => ClKind::Complement(Box::new(mixed)),
                ClKindArg::Union => {
                    let mut parts = Vec::new();
                    for v in parse_vectors_opt(&t, points.as_deref())? {
                        parts.push(ClKind::PointPencil { point: v });
                    }
                    for v in parse_vectors_opt(&t, normals.as_deref())? {
                        parts.push(ClKind::InHyperplane { normal: v });
                    }
                    ClKind::Union(parts)
                }
            };
            let (d, pred) = cameron_liebler(&a, n, &cl, cap)?;
            let prof = verify_cameron_liebler(&d, n, &pred, cap)?;
            write_artifact(cfg, &to_pretty(&formats::strong_to_json(&d)))?;
            Ok(Outcome::json(json!({
                "t": d.t(), "x": pred.x.to_string(),
                "w": pred.w.iter().map(u128::to_string).collect::<Vec<_>>(),
                "w_prime": pred.w_prime.iter().map(u128::to_string).collect::<Vec<_>>(),
                "a_closed_form": pred.a.to_string(), "a_swept": prof.a_min, "written": cfg.output,
            })))
        }
        StrongVerb::Evasive { design, e, c, s } => {
            let d = formats::strong_from_json(&read_json(&design)?)?;
            let e = formats::subspace_from_json(&read_json(&e)?)?;
            emit_converted(evasive_intersect(&d, &e, parse_ratio(&c)?, s, cap)?, cfg)
        }
        StrongVerb::Lift { design, c, s } => {
            let d = formats::strong_from_json(&read_json(&design)?)?;
            let small = d.ambient().tower();
            if c == 0 || !c.is_multiple_of(small.m()) {
                return Err(subdesign::strongbridge::StrongError::NotAMultiple { c, m: small.m() }.into());
            }
            let big = lift_tower(small, c)?;
            emit_converted(intermediate_field_design(&d, &big, s, cap)?, cfg)
        }
        StrongVerb::Places { field, k, h, p, zeta, spaces } => {
            let t = tower(&field)?;
            let a = AmbientSpace::new(&t, k)?;
            let p = parse_usizes(&p)?.into_iter().map(|c| c as Code).collect::<Vec<_>>();
            let spaces = spaces
                .split(';')
                .map(|member| member.split('|').map(|f| parse_usizes(f).map(|v| v.into_iter().map(|c| c as Code).collect())).collect())
                .collect::<Result<Vec<Vec<Vec<Code>>>, _>>()?;
            let d = places_embed(&a, &spaces, &p, zeta, h)?;
            emit_design(&d, cfg)
        }
    }
}

/// Tower F_{q^c} over the same F_q as `small`.
fn lift_tower(small: &FieldTower, c: usize) -> Result<Arc<FieldTower>, CliError> {
    let (p, h) = (small.p(), small.h());
    match FieldTower::with_defaults(p, h, c) {
        Ok(b) if b.fq_modulus() == small.fq_modulus() => Ok(b),
        _ => {
            let g = FieldTower::search_modulus(p, h, c, small.fq_modulus())?;
            Ok(FieldTower::new(p, h, c, small.fq_modulus(), &g)?)
        }
    }
}

fn emit_converted(c: Converted, cfg: &RunConfig) -> Result<Outcome, CliError> {
    write_artifact(cfg, &to_pretty(&formats::design_to_json(&c.design)))?;
    Ok(Outcome::json(json!({
        "dims": c.design.dims(), "bound": c.bound, "profile": profile_json(&c.profile), "written": cfg.output,
    })))
}

fn emit_design(d: &SubspaceDesign, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = to_pretty(&formats::design_to_json(d));
    match &cfg.output {
        Some(p) => {
            write_text(p, &text)?;
            Ok(Outcome::json(json!({ "t": d.t(), "dims": d.dims(), "k": d.ambient().k(), "written": p })))
        }
        None => Ok(Outcome { stdout: text, exit_code: 0 }),
    }
}

fn write_artifact(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(p) => write_text(p, text),
        None => Ok(()),
    }
}

fn csv_file<A: ToString>(path: &Path, header: [&str; 2], rows: impl IntoIterator<Item = (A, u128)>) -> Result<(), CliError> {
    let f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    formats::write_csv(f, header, rows)
}

fn map_json<'a, K: ToString + 'a, V: ToString + 'a>(it: impl Iterator<Item = (&'a K, &'a V)>) -> Value {
    Value::Object(it.map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect())
}

fn load_design(path: &Path) -> Result<SubspaceDesign, CliError> {
    formats::design_from_json(&read_json(path)?)
}

fn profile_json(p: &design::DesignProfile) -> Value {
    json!({
        "s": p.s, "a_min": p.a_min, "span_dim": p.span_dim, "non_degenerate": p.non_degenerate,
        "witness": fqm_rows(&p.witness),
    })
}

fn fqm_rows(w: &FqmSubspace) -> Value {
    let t = w.ambient().tower();
    json!(w.rows().iter().map(|r| r.iter().map(|&c| t.digits(c)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn exprs(t: &FieldTower, v: &[Code]) -> Vec<String> {
    v.iter().map(|&c| format_expr(t, c)).collect()
}

/// (p, h) with q = p^h.
pub fn prime_power(q: u32) -> Result<(u32, usize), CliError> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| CliError::Usage(format!("q = {q} is not a prime power")))?;
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(CliError::Usage(format!("q = {q} is not a prime power")));
    }
    Ok((p, h))
}

fn tower(f: &FieldArgs) -> Result<Arc<FieldTower>, CliError> {
    let (p, h) = prime_power(f.q)?;
    Ok(FieldTower::with_defaults(p, h, f.m)?)
}

/// Explicit elements, or one element of each norm 1, 2, … (smallest code) for `count` members.
fn pick_alphas(t: &FieldTower, alphas: Option<&str>, count: Option<usize>) -> Result<Vec<Code>, CliError> {
    match (alphas, count) {
        (Some(s), _) => parse_elements(t, s),
        (None, Some(n)) => (1..=n as Code)
            .map(|lambda| {
                if lambda >= t.q() {
                    Err(CliError::Usage(format!("at most q − 1 = {} members", t.q() - 1)))
                } else {
                    Ok(element_of_norm(t, lambda)?)
                }
            })
            .collect(),
        (None, None) => Err(CliError::Usage("give --alphas or --t".into())),
    }
}

fn parse_elements(t: &FieldTower, s: &str) -> Result<Vec<Code>, CliError> {
    s.split(',').map(|e| Ok(parse_expr(t, e)?)).collect()
}

fn parse_vectors(t: &FieldTower, s: &str) -> Result<Vec<Vec<Code>>, CliError> {
    s.split(';').map(|v| parse_elements(t, v)).collect()
}

fn parse_vectors_opt(t: &FieldTower, s: Option<&str>) -> Result<Vec<Vec<Code>>, CliError> {
    s.map(|s| parse_vectors(t, s)).transpose().map(Option::unwrap_or_default)
}

fn parse_usizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("`{x}` is not a non-negative integer"))))
        .collect()
}

fn parse_index_blocks(s: &str) -> Result<Vec<Vec<usize>>, CliError> {
    s.split(';').map(parse_usizes).collect()
}

fn parse_ratio(s: &str) -> Result<Ratio, CliError> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad ratio `{s}`")));
    Ok(Ratio::new(parse(num)?, parse(den)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(2).unwrap(), (2, 1));
        assert!(prime_power(6).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn ratios_and_lists() {
        assert_eq!(parse_ratio("3/2").unwrap(), Ratio { num: 3, den: 2 });
        assert_eq!(parse_ratio("2").unwrap(), Ratio { num: 2, den: 1 });
        assert!(parse_ratio("0").is_err());
        assert_eq!(parse_index_blocks("0,1;2").unwrap(), vec![vec![0, 1], vec![2]]);
    }
}
