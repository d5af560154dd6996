use std::path::Path;

use clap::ValueEnum;

use gromov_lab::generators::{generate, gen_kary_tree, gen_square, GeneratorSpec, Generated, MeasuredSpace};
use gromov_lab::hyperbolize::{
    hyperbolized_doubling_check, k_estimate_check, mu_alpha, quasiconvexity_constant, quasihyperbolic, roundtrip_bilipschitz, UniformDomain,
};
use gromov_lab::io::{GraphDocument, Meta, Tail};
use gromov_lab::measure::{doubling_constant, local_to_global_check, poincare_constant, BallSpec, DoublingMode, PoincareOptions, UpgradeOptions};
use gromov_lab::metric::{delta_hyperbolicity, roughly_starlike_m, DeltaOptions, HyperbolicityReport};
use gromov_lab::potential::{
    annulus_dirichlet, liouville_experiment, solve_p_harmonic, sobolev_capacity, transfer_check_pharmonic, variational_capacity,
    CriterionKind, LiouvilleThresholds, SolveOptions,
};
use gromov_lab::products::{
    canonical_map_distortion, indirect_product, product_domain, product_uniform, product_uniformity_check, projection_lipschitz_check,
    CanonicalOptions,
};
use gromov_lab::uniformize::{
    comparability_report, default_eps0, global_doubling_check, mu_beta, uniformize, uniformize_checked, whitney_inclusion_check,
    boundary_distance_check, GlobalDoublingOptions, UniformizedSpace,
};
use gromov_lab::{MeasureField, PointedSpace, Status, VerificationReport};

use crate::args::{
    CapacityArgs, Command, DirichletArgs, GenKind, GenerateArgs, IndirectArgs, Kind, LiouvilleArgs, PairInput, PharmonicArgs, ProductArgs,
    Recipe, SingleInput, SolveCommand, TransformArgs, VerifyCommand,
};
use crate::config::Config;
use crate::error::CliError;
use crate::output::{emit_report, function_csv, write_atomic, Inputs};

/// What a command produced: files only, or a report with a status.
pub enum Outcome {
    Done,
    Checked(Status),
}

pub struct Ctx<'a> {
    pub cfg: &'a Config,
    pub csv_dir: Option<&'a Path>,
    pub inputs: Inputs,
}

impl Ctx<'_> {
    fn emit(&self, report: VerificationReport, out: Option<&Path>) -> Result<Outcome, CliError> {
        emit_report(report, out, self.csv_dir, self.inputs.provenance(self.cfg)).map(Outcome::Checked)
    }

    fn delta_options(&self) -> DeltaOptions {
        DeltaOptions {
            samples: self.cfg.sample_budget,
            seed: self.cfg.seed,
            ..DeltaOptions::default()
        }
    }
}

pub fn run(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match cmd {
        Command::Generate(a) => generate_cmd(a),
        Command::Uniformize(a) => uniformize_cmd(a, ctx),
        Command::Hyperbolize(a) => hyperbolize_cmd(a, ctx),
        Command::Product(a) => product_cmd(a, ctx),
        Command::IndirectProduct(a) => indirect_cmd(a, ctx),
        Command::Solve {
            problem: SolveCommand::Pharmonic(a),
        } => pharmonic_cmd(a, ctx),
        Command::Capacity(a) => capacity_cmd(a, ctx),
        Command::Liouville(a) => liouville_cmd(a, ctx),
        Command::Verify { check } => verify_cmd(check, ctx),
        Command::Pipeline { recipe } => pipeline_cmd(recipe, ctx),
    }
}

fn need<T>(v: Option<T>, flag: &str, kind: GenKind) -> Result<T, CliError> {
    let name = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --kind {name}")))
}

fn generator_spec(a: &GenerateArgs) -> Result<GeneratorSpec, CliError> {
    let k = a.kind;
    let weight = a.weight.clone().unwrap_or_default();
    Ok(match k {
        GenKind::Line => GeneratorSpec::Line {
            t: need(a.t, "T", k)?,
            h: need(a.h, "h", k)?,
            weight,
        },
        GenKind::Strip => GeneratorSpec::Strip {
            t: need(a.t, "T", k)?,
            h: need(a.h, "h", k)?,
            weight,
        },
        GenKind::Interval => GeneratorSpec::Interval { h: need(a.h, "h", k)? },
        GenKind::Square => GeneratorSpec::Square { h: need(a.h, "h", k)? },
        GenKind::SlitSquare => GeneratorSpec::SlitSquare { h: need(a.h, "h", k)? },
        GenKind::KaryTree => GeneratorSpec::KaryTree {
            k: need(a.k, "K", k)?,
            d: need(a.d, "D", k)?,
            h: a.h.unwrap_or(1.0),
        },
        GenKind::Prong => GeneratorSpec::Prong {
            variant: need(a.variant, "variant", k)?.into(),
            t: need(a.t, "T", k)?,
            h: need(a.h, "h", k)?,
        },
        GenKind::DiskPolar => GeneratorSpec::DiskPolar {
            rings: need(a.rings, "rings", k)?,
            sectors: need(a.sectors, "sectors", k)?,
        },
    })
}

fn generate_cmd(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let spec = generator_spec(a)?;
    let doc = match generate(&spec)? {
        Generated::Space(ms) => GraphDocument::from_space(&ms, Some(&spec)),
        Generated::Domain(md) => GraphDocument::from_domain(&md, Some(&spec)),
    };
    write_atomic(&a.out, &doc.to_json()?)?;
    Ok(Outcome::Done)
}

fn load_space(ctx: &mut Ctx, path: &Path) -> Result<(GraphDocument, PointedSpace, MeasureField), CliError> {
    let doc = ctx.inputs.graph(path)?;
    let attach = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let ps = doc.pointed_space().map_err(attach)?;
    let mu = doc.measure().map_err(attach)?;
    Ok((doc, ps, mu))
}

fn load_domain(ctx: &mut Ctx, path: &Path) -> Result<(GraphDocument, UniformDomain, MeasureField), CliError> {
    let doc = ctx.inputs.graph(path)?;
    let attach = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let dom = doc.domain().map_err(attach)?;
    let mu = doc.measure().map_err(attach)?;
    Ok((doc, dom, mu))
}

/// Prints a warning when β is not above `17 log C_d / (3R₀)`.
fn warn_small_beta(ps: &PointedSpace, mu: &MeasureField, cfg: &Config) -> Result<f64, CliError> {
    let mode = DoublingMode::Sampled {
        centers: cfg.sample_budget,
        seed: cfg.seed,
    };
    let cd = doubling_constant(&ps.graph, mu, cfg.r0, mode)?.cd;
    let beta0 = 17.0 * cd.ln() / (3.0 * cfg.r0);
    if cfg.beta <= beta0 {
        eprintln!(
            "warning: beta = {} is not above 17 log C_d / 3R0 = {beta0:.4} (C_d = {cd:.4} at R0 = {})",
            cfg.beta, cfg.r0
        );
    }
    Ok(cd)
}

fn uniformize_cmd(a: &TransformArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let (doc, ps, mu) = load_space(ctx, &a.input)?;
    let eps0 = match cfg.eps0 {
        Some(e) => e,
        None => default_eps0(delta_hyperbolicity(&ps.graph, ctx.delta_options())?.delta_estimate),
    };
    let us = uniformize_checked(&ps, cfg.eps, eps0, cfg.force)?;
    warn_small_beta(&ps, &mu, cfg)?;
    let mb = mu_beta(&ps, &mu, cfg.beta)?;
    let mut tails = vec![None; us.graph.len()];
    for (&f, &t) in us.frontier.iter().zip(&us.tails) {
        tails[f] = Some(Tail::Length(t));
    }
    let out = GraphDocument {
        graph: us.graph.clone(),
        masses: Some(mb.masses().to_vec()),
        boundary: Vec::new(),
        ray_tips: us.frontier.clone(),
        tails,
        meta: Meta {
            base_point: Some(ps.base),
            epsilon: Some(cfg.eps),
            uniformity_a: None,
            generator_provenance: doc.meta.generator_provenance,
        },
    };
    write_atomic(&a.output, &out.to_json()?)?;
    Ok(Outcome::Done)
}

fn hyperbolize_cmd(a: &TransformArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let (doc, dom, mu) = load_domain(ctx, &a.input)?;
    let qh = quasihyperbolic(&dom)?;
    let ma = mu_alpha(&dom, &qh, &mu, ctx.cfg.alpha)?;
    let n = qh.graph.len();
    let out = GraphDocument {
        graph: qh.graph.clone(),
        masses: Some(ma.masses().to_vec()),
        boundary: Vec::new(),
        ray_tips: Vec::new(),
        tails: vec![None; n],
        meta: Meta {
            base_point: qh.from_source[dom.max_d_omega().0],
            generator_provenance: doc.meta.generator_provenance,
            ..Meta::default()
        },
    };
    write_atomic(&a.output, &out.to_json()?)?;
    Ok(Outcome::Done)
}

fn product_cmd(a: &ProductArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let (_, d1, m1) = load_domain(ctx, &a.first)?;
    let (_, d2, m2) = load_domain(ctx, &a.second)?;
    let pd = product_domain(&d1, &d2)?;
    let masses = (0..pd.domain.len())
        .map(|v| {
            let (i, j) = pd.coords(v);
            m1.mass(i) * m2.mass(j)
        })
        .collect();
    let out = GraphDocument {
        graph: pd.domain.graph().clone(),
        masses: Some(masses),
        boundary: pd.domain.boundary(),
        ray_tips: Vec::new(),
        tails: vec![None; pd.domain.len()],
        meta: Meta::default(),
    };
    write_atomic(&a.out, &out.to_json()?)?;
    Ok(Outcome::Done)
}

fn delta_report(r: &HyperbolicityReport) -> VerificationReport {
    let mut out = VerificationReport::new("delta", "gromov-delta/thin-triangles", Status::Pass)
        .measure("delta", r.delta_estimate)
        .measure("triples", r.triples_sampled as f64)
        .measure("exhaustive", f64::from(u8::from(r.exhaustive)));
    if let Some(m) = r.m {
        out = out.measure("M", m);
    }
    if let Some(t) = r.worst_triangle {
        out = out.witness("worstTriangle", t.to_vec(), vec![r.delta_estimate]);
    }
    if r.lower_bound {
        out = out.note("canonical geodesics only: the value is a lower bound for δ");
    }
    out
}

fn indirect_cmd(a: &IndirectArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let (_, xs, _) = load_space(ctx, &a.first)?;
    let (_, ys, _) = load_space(ctx, &a.second)?;
    let ip = indirect_product(&xs, &ys, ctx.cfg.eps, Some(ctx.delta_options()))?;
    let out = GraphDocument {
        graph: ip.space.graph.clone(),
        masses: None,
        boundary: Vec::new(),
        ray_tips: Vec::new(),
        tails: vec![None; ip.space.graph.len()],
        meta: Meta {
            base_point: Some(ip.space.base),
            epsilon: Some(ctx.cfg.eps),
            ..Meta::default()
        },
    };
    write_atomic(&a.out, &out.to_json()?)?;
    let lip = projection_lipschitz_check(&ip, ctx.cfg.sample_budget.min(32), ctx.cfg.seed)?;
    let mut sections = vec![lip.report()];
    if let Some(d) = &ip.delta {
        sections.push(delta_report(d));
    }
    ctx.emit(VerificationReport::composite("indirect-product", "indirect-product/hyperbolicity", sections), a.report.as_deref())
}

fn dirichlet_data(ps: &PointedSpace, d: &DirichletArgs) -> Result<Vec<(usize, f64)>, CliError> {
    let (a, b) = (d.values[0], d.values[1]);
    if let Some(r) = &d.annulus {
        return Ok(annulus_dirichlet(ps, r[0], r[1], a, b)?);
    }
    if d.ends {
        return match (ps.ray_tips.first(), ps.ray_tips.last()) {
            (Some(&lo), Some(&hi)) if lo != hi => Ok(vec![(lo, a), (hi, b)]),
            _ => Err(CliError::Usage("--ends needs at least two ray tips".into())),
        };
    }
    Err(CliError::Usage("give --annulus R1 R2 or --ends".into()))
}

fn pharmonic_cmd(a: &PharmonicArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let (_, ps, mu) = load_space(ctx, &a.input)?;
    let dir = dirichlet_data(&ps, &a.dirichlet)?;
    let sol = solve_p_harmonic(&ps.graph, &mu, &dir, &SolveOptions::new(cfg.p, cfg.tol_solve))?;
    write_atomic(&a.out, &function_csv(sol.u.values())?)?;
    let status = if sol.converged { Status::Pass } else { Status::Inconclusive };
    let report = VerificationReport::new("solve-pharmonic", "p-harmonic/energy-minimizer", status)
        .measure("energy", sol.energy)
        .measure("kktResidual", sol.kkt_residual)
        .measure("iterations", sol.iterations as f64)
        .predict("p", cfg.p)
        .predict("tolSolve", cfg.tol_solve);
    ctx.emit(report, a.report.as_deref())
}

fn capacity_cmd(a: &CapacityArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let doc = ctx.inputs.graph(&a.input)?;
    let mu = doc.measure().map_err(|source| CliError::Input {
        path: a.input.clone(),
        source,
    })?;
    let g = &doc.graph;
    let (check, res) = match &a.omega {
        Some(omega) => ("variational-capacity", variational_capacity(g, &mu, &a.set, omega, cfg.p, cfg.tol_solve)?),
        None => ("sobolev-capacity", sobolev_capacity(g, &mu, &a.set, cfg.p, cfg.tol_solve)?),
    };
    if let Some(path) = &a.minimizer {
        write_atomic(path, &function_csv(res.minimizer.values())?)?;
    }
    let status = if res.converged { Status::Pass } else { Status::Inconclusive };
    let report = VerificationReport::new(check, "capacity/energy-minimizer", status)
        .measure("capacity", res.value)
        .predict("p", cfg.p)
        .witness("set", a.set.clone(), Vec::new());
    ctx.emit(report, a.out.as_deref())
}

fn liouville_cmd(a: &LiouvilleArgs, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    let kind = match a.kind {
        Kind::Strip => CriterionKind::Strip,
        Kind::Line => CriterionKind::Line,
    };
    let x = liouville_experiment(
        kind,
        &a.weight,
        a.h,
        cfg.p,
        cfg.eps,
        &cfg.truncation_grid,
        cfg.tol_solve,
        LiouvilleThresholds::default(),
    )?;
    ctx.emit(x.report(), a.out.as_deref())
}

fn uniformization_sections(ps: &PointedSpace, mu: &MeasureField, us: &UniformizedSpace, cfg: &Config) -> Result<Vec<VerificationReport>, CliError> {
    let m = roughly_starlike_m(ps)?;
    let mb = mu_beta(ps, mu, cfg.beta)?;
    let cd = warn_small_beta(ps, mu, cfg)?;
    let opts = GlobalDoublingOptions {
        seed: cfg.seed,
        ..GlobalDoublingOptions::default()
    };
    Ok(vec![
        boundary_distance_check(us, m)?,
        whitney_inclusion_check(us, m, cfg.sample_budget, cfg.seed)?.report(),
        comparability_report(us, m, cfg.beta, cfg.sample_budget, cfg.seed)?,
        global_doubling_check(us, &mb, cfg.beta, cfg.r0, cd, opts)?.report(),
    ])
}

fn hyperbolization_sections(dom: &UniformDomain, mu: &MeasureField, cfg: &Config) -> Result<Vec<VerificationReport>, CliError> {
    let qh = quasihyperbolic(dom)?;
    let l = quasiconvexity_constant(dom, cfg.sample_budget, cfg.seed)?;
    Ok(vec![
        k_estimate_check(dom, &qh, l, cfg.sample_budget, cfg.seed)?,
        hyperbolized_doubling_check(dom, &qh, mu, cfg.alpha, cfg.r0, cfg.seed)?.report(),
    ])
}

fn verify_cmd(check: &VerifyCommand, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    match check {
        VerifyCommand::Doubling(SingleInput { input, report }) => {
            let doc = ctx.inputs.graph(input)?;
            let mu = doc.measure().map_err(|source| CliError::Input {
                path: input.clone(),
                source,
            })?;
            let r = doubling_constant(&doc.graph, &mu, cfg.r0, DoublingMode::Exhaustive)?;
            ctx.emit(r.report("doubling/local"), report.out.as_deref())
        }
        VerifyCommand::Poincare { io, center, radius, lambda } => {
            let doc = ctx.inputs.graph(&io.input)?;
            let mu = doc.measure().map_err(|source| CliError::Input {
                path: io.input.clone(),
                source,
            })?;
            let opts = PoincareOptions {
                p: cfg.p,
                lambda: *lambda,
                test_budget: cfg.sample_budget,
                seed: cfg.seed,
            };
            let r = poincare_constant(
                &doc.graph,
                &mu,
                BallSpec {
                    center: *center,
                    radius: *radius,
                },
                opts,
            )?;
            ctx.emit(r.report(), io.report.out.as_deref())
        }
        VerifyCommand::Upgrade(SingleInput { input, report }) => {
            let doc = ctx.inputs.graph(input)?;
            let mu = doc.measure().map_err(|source| CliError::Input {
                path: input.clone(),
                source,
            })?;
            let opts = UpgradeOptions {
                seed: cfg.seed,
                ..UpgradeOptions::default()
            };
            let r = local_to_global_check(&doc.graph, &mu, cfg.r0, cfg.r1, opts)?;
            ctx.emit(r.report(), report.out.as_deref())
        }
        VerifyCommand::Uniformization(SingleInput { input, report }) => {
            let (_, ps, mu) = load_space(ctx, input)?;
            let us = uniformize(&ps, cfg.eps)?;
            let sections = uniformization_sections(&ps, &mu, &us, cfg)?;
            ctx.emit(VerificationReport::composite("uniformization", "uniformization/all", sections), report.out.as_deref())
        }
        VerifyCommand::Roundtrip(SingleInput { input, report }) => {
            let (_, ps, _) = load_space(ctx, input)?;
            let r = roundtrip_bilipschitz(&ps, cfg.eps, cfg.sample_budget, cfg.seed)?;
            ctx.emit(r.report(), report.out.as_deref())
        }
        VerifyCommand::Hyperbolization(SingleInput { input, report }) => {
            let (_, dom, mu) = load_domain(ctx, input)?;
            let sections = hyperbolization_sections(&dom, &mu, cfg)?;
            ctx.emit(VerificationReport::composite("hyperbolization", "hyperbolization/all", sections), report.out.as_deref())
        }
        VerifyCommand::Product(PairInput { first, second, report }) => {
            let (_, d1, _) = load_domain(ctx, first)?;
            let (_, d2, _) = load_domain(ctx, second)?;
            let pd = product_uniform(&d1, &d2, cfg.sample_budget, cfg.seed)?;
            let r = product_uniformity_check(&pd, &d1, &d2, cfg.sample_budget, cfg.seed)?;
            ctx.emit(r.report(), report.out.as_deref())
        }
        VerifyCommand::Canonical { io, eps2 } => {
            let (_, xs, _) = load_space(ctx, &io.first)?;
            let (_, ys, _) = load_space(ctx, &io.second)?;
            let opts = CanonicalOptions {
                seed: cfg.seed,
                ..CanonicalOptions::default()
            };
            let r = canonical_map_distortion(&xs, &ys, cfg.eps, *eps2, &opts)?;
            ctx.emit(r.report(), io.report.out.as_deref())
        }
        VerifyCommand::Transfer { io, dirichlet } => {
            let (_, ps, mu) = load_space(ctx, &io.input)?;
            let dir = dirichlet_data(&ps, dirichlet)?;
            let r = transfer_check_pharmonic(&ps, &mu, cfg.eps, cfg.p, &dir, cfg.tol_solve)?;
            ctx.emit(r.report(), io.report.out.as_deref())
        }
        VerifyCommand::Delta(SingleInput { input, report }) => {
            let doc = ctx.inputs.graph(input)?;
            let r = delta_hyperbolicity(&doc.graph, ctx.delta_options())?;
            ctx.emit(delta_report(&r), report.out.as_deref())
        }
    }
}

fn pipeline_cmd(recipe: &Recipe, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    let cfg = ctx.cfg;
    match recipe {
        Recipe::TreeUniformizeVerify { k, d, h, report } => {
            let MeasuredSpace { space, measure } = gen_kary_tree(*k, *d, *h)?;
            let us = uniformize(&space, cfg.eps)?;
            let mb = mu_beta(&space, &measure, cfg.beta)?;
            let cd = warn_small_beta(&space, &measure, cfg)?;
            let opts = GlobalDoublingOptions {
                seed: cfg.seed,
                ..GlobalDoublingOptions::default()
            };
            let m = roughly_starlike_m(&space)?;
            let sections = vec![
                global_doubling_check(&us, &mb, cfg.beta, cfg.r0, cd, opts)?.report(),
                whitney_inclusion_check(&us, m, cfg.sample_budget, cfg.seed)?.report(),
            ];
            let r = VerificationReport::composite("tree-uniformize-verify", "uniformization/tree", sections)
                .note(format!("tree K = {k}, D = {d}, h = {h}"));
            ctx.emit(r, report.out.as_deref())
        }
        Recipe::SquareHyperbolizeVerify { h, report } => {
            let md = gen_square(*h)?;
            let sections = hyperbolization_sections(&md.domain, &md.measure, cfg)?;
            let r = VerificationReport::composite("square-hyperbolize-verify", "hyperbolization/square", sections)
                .note(format!("square h = {h}"));
            ctx.emit(r, report.out.as_deref())
        }
    }
}

