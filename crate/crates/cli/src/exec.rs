//! Script execution: binds declarations, dispatches commands to the core
//! library, and collects one result record per command.

use std::collections::HashMap;
use std::time::Instant;

use mfcat_core::blowup::{duality_witness, lift_potential_data};
use mfcat_core::functors::{dual, hom_mf, koszul_factorization, tensor};
use mfcat_core::homology::KDim;
use mfcat_core::homotopy::{ext_module, is_closed, is_contractible, is_homotopy_iso};
use mfcat_core::mf::{base_change, g_plus, MFMorphism, MatFac, Potential};
use mfcat_core::projective::{
    exceptional_collection_table, koszul_ke_check, pn_line_cohomology,
};
use mfcat_core::singularity::{cokernel_module, periodic_resolution_check, PeriodicVerdict};
use mfcat_core::{FieldSpec, FreeMatrix, MonomialOrder, Poly, RingContext};

use crate::script::{CommandAst, FieldAst, MatrixAst, MfExpr, Script, Stmt};

/// Field/order overrides and the projective-rank seed from the CLI flags.
#[derive(Debug, Clone, Copy)]
pub struct ExecOptions {
    pub field_override: Option<FieldSpec>,
    pub order_override: Option<MonomialOrder>,
    pub seed: u64,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            field_override: None,
            order_override: None,
            seed: 0,
        }
    }
}

/// One executed command: the echoed command text, a status, the payload on
/// success, and the wall time (reported only when timings are requested).
#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub command: String,
    pub status: &'static str,
    pub payload: Option<serde_json::Value>,
    pub error: Option<String>,
    pub wall_ms: u128,
}

struct DeferredMf {
    pot_name: String,
    pot: Potential,
    e1: FreeMatrix,
    e0: FreeMatrix,
}

struct DeferredMorphism {
    source: String,
    target: String,
    f1: FreeMatrix,
    f0: FreeMatrix,
}

struct Env {
    rings: HashMap<String, RingContext>,
    pots: HashMap<String, (String, Potential)>,
    mfs: HashMap<String, DeferredMf>,
    morphs: HashMap<String, DeferredMorphism>,
}

impl Env {
    fn ring(&self, name: &str) -> &RingContext {
        &self.rings[name]
    }

    fn pot(&self, name: &str) -> &Potential {
        &self.pots[name].1
    }

    /// Validates (possibly deferred) objects on demand.
    fn mf(&self, name: &str) -> Result<MatFac, String> {
        let d = &self.mfs[name];
        MatFac::new(d.pot.clone(), d.e1.clone(), d.e0.clone()).map_err(|e| e.to_string())
    }
}

fn parse_matrix(ctx: &RingContext, m: &MatrixAst) -> Result<FreeMatrix, String> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut entries = Vec::with_capacity(rows * cols);
    for row in m {
        for cell in row {
            entries.push(ctx.parse_poly(cell).map_err(|e| e.to_string())?);
        }
    }
    Ok(FreeMatrix::new(rows, cols, entries))
}

fn parse_polys(ctx: &RingContext, items: &[String]) -> Result<Vec<Poly>, String> {
    items
        .iter()
        .map(|s| ctx.parse_poly(s).map_err(|e| e.to_string()))
        .collect()
}

fn mat_json(ctx: &RingContext, m: &FreeMatrix) -> serde_json::Value {
    let rows: Vec<Vec<String>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| ctx.render(m.entry(i, j))).collect())
        .collect();
    serde_json::json!(rows)
}

fn kdim_json(k: KDim) -> serde_json::Value {
    match k {
        KDim::Finite(d) => serde_json::json!(d),
        KDim::Infinite => serde_json::json!("infinite"),
    }
}

/// Runs every statement; each command yields a record and recoverable
/// failures do not stop execution.
pub fn execute(script: &Script, opts: &ExecOptions) -> Result<Vec<ResultRecord>, String> {
    let mut env = Env {
        rings: HashMap::new(),
        pots: HashMap::new(),
        mfs: HashMap::new(),
        morphs: HashMap::new(),
    };
    let mut results = Vec::new();

    for stmt in &script.stmts {
        match stmt {
            Stmt::Version(_) => {}
            Stmt::RingDecl {
                name,
                field,
                vars,
                ideal,
            } => {
                let field = opts.field_override.unwrap_or(match field {
                    FieldAst::Rationals => FieldSpec::Rationals,
                    FieldAst::Prime(p) => {
                        FieldSpec::prime_field(*p).map_err(|e| e.to_string())?
                    }
                });
                let order = opts.order_override.unwrap_or(MonomialOrder::Grevlex);
                let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                let mut ctx =
                    RingContext::new(field, &var_refs, order).map_err(|e| e.to_string())?;
                if !ideal.is_empty() {
                    let gens = parse_polys(&ctx, ideal)?;
                    ctx = ctx.with_ideal(gens).map_err(|e| e.to_string())?;
                }
                env.rings.insert(name.clone(), ctx);
            }
            Stmt::PotDecl { name, expr, ring } => {
                let ctx = env.ring(ring).clone();
                let w = ctx.parse_poly(expr).map_err(|e| e.to_string())?;
                env.pots
                    .insert(name.clone(), (ring.clone(), Potential::new(ctx, w)));
            }
            Stmt::MfDecl { name, expr } => {
                let deferred = build_mf(&env, expr)?;
                env.mfs.insert(name.clone(), deferred);
            }
            Stmt::MorphDecl {
                name,
                source,
                target,
                f1,
                f0,
            } => {
                let ctx = env.mfs[source].pot.ctx.clone();
                let f1 = parse_matrix(&ctx, f1)?;
                let f0 = parse_matrix(&ctx, f0)?;
                env.morphs.insert(
                    name.clone(),
                    DeferredMorphism {
                        source: source.clone(),
                        target: target.clone(),
                        f1,
                        f0,
                    },
                );
            }
            Stmt::Command(cmd) => {
                let started = Instant::now();
                let echo = echo_command(cmd);
                let outcome = run_command(&env, cmd, opts);
                let wall_ms = started.elapsed().as_millis();
                results.push(match outcome {
                    Ok(payload) => ResultRecord {
                        command: echo,
                        status: "ok",
                        payload: Some(payload),
                        error: None,
                        wall_ms,
                    },
                    Err(message) => ResultRecord {
                        command: echo,
                        status: "error",
                        payload: None,
                        error: Some(message),
                        wall_ms,
                    },
                });
            }
        }
    }
    Ok(results)
}

fn build_mf(env: &Env, expr: &MfExpr) -> Result<DeferredMf, String> {
    let from_matfac = |pot_name: &str, m: MatFac| DeferredMf {
        pot_name: pot_name.to_string(),
        pot: m.pot.clone(),
        e1: m.e1.clone(),
        e0: m.e0.clone(),
    };
    match expr {
        MfExpr::Literal { e1, e0, pot } => {
            let p = env.pot(pot).clone();
            let e1 = parse_matrix(&p.ctx, e1)?;
            let e0 = parse_matrix(&p.ctx, e0)?;
            // deferred: `check` reports NotAFactorization later
            Ok(DeferredMf {
                pot_name: pot.clone(),
                pot: p,
                e1,
                e0,
            })
        }
        MfExpr::Koszul { pot, a, b } => {
            let p = env.pot(pot);
            let m = run_koszul(env, pot, a, b)?;
            let _ = p;
            Ok(from_matfac(pot, m))
        }
        MfExpr::Tensor(x, y) => {
            let m = tensor(&env.mf(x)?, &env.mf(y)?).map_err(|e| e.to_string())?;
            Ok(from_matfac(&env.mfs[x].pot_name, m))
        }
        MfExpr::Hom(x, y) => {
            let m = hom_mf(&env.mf(x)?, &env.mf(y)?).map_err(|e| e.to_string())?;
            Ok(from_matfac(&env.mfs[x].pot_name, m))
        }
        MfExpr::Dual(x) => {
            let m = dual(&env.mf(x)?);
            Ok(from_matfac(&env.mfs[x].pot_name, m))
        }
        MfExpr::Shift(x) => {
            let m = env.mf(x)?.shift();
            Ok(from_matfac(&env.mfs[x].pot_name, m))
        }
        MfExpr::Sum(x, y) => {
            let m = env
                .mf(x)?
                .direct_sum(&env.mf(y)?)
                .map_err(|e| e.to_string())?;
            Ok(from_matfac(&env.mfs[x].pot_name, m))
        }
        MfExpr::GPlus(n0, n1, pot) => {
            let m = g_plus(*n0, *n1, env.pot(pot));
            Ok(from_matfac(pot, m))
        }
        MfExpr::BaseChange { obj, ring, substs } => {
            let source = env.mf(obj)?;
            let target = env.ring(ring);
            let sctx = source.ctx().clone();
            let mut images = vec![None; sctx.nvars()];
            for (v, expr) in substs {
                let idx = sctx.var_index(v).map_err(|e| e.to_string())?;
                images[idx] = Some(target.parse_poly(expr).map_err(|e| e.to_string())?);
            }
            let images: Result<Vec<Poly>, String> = images
                .into_iter()
                .enumerate()
                .map(|(i, im)| {
                    im.ok_or_else(|| {
                        format!("no image for variable `{}`", sctx.vars()[i])
                    })
                })
                .collect();
            let m = base_change(&sctx, target, &images?, &source).map_err(|e| e.to_string())?;
            Ok(from_matfac(&env.mfs[obj].pot_name, m))
        }
    }
}

fn run_koszul(env: &Env, pot: &str, a: &[String], b: &[String]) -> Result<MatFac, String> {
    let p = env.pot(pot);
    let ctx = &p.ctx;
    let av = parse_polys(ctx, a)?;
    let bv = parse_polys(ctx, b)?;
    let m = koszul_factorization(&av, &bv, ctx).map_err(|e| e.to_string())?;
    if m.pot.w != p.w {
        return Err(format!(
            "potential mismatch: koszul data factors `{}`, declared potential is `{}`",
            ctx.render(&m.pot.w),
            ctx.render(&p.w)
        ));
    }
    Ok(m)
}

fn echo_command(cmd: &CommandAst) -> String {
    match cmd {
        CommandAst::Check(x) => format!("check {x}"),
        CommandAst::Ext(p, q, d) => format!("ext {p} {q} {d}"),
        CommandAst::Contractible(x) => format!("contractible {x}"),
        CommandAst::HomotopyIso(m) => format!("homotopy_iso {m}"),
        CommandAst::Dual(x) => format!("dual {x}"),
        CommandAst::Tensor(p, q) => format!("tensor {p} {q}"),
        CommandAst::Hom(p, q) => format!("hom {p} {q}"),
        CommandAst::Koszul { pot, a, b } => {
            format!("koszul({pot}; [{}],[{}])", a.join(","), b.join(","))
        }
        CommandAst::Cok(x) => format!("cok {x}"),
        CommandAst::PeriodicCheck(x, n) => format!("periodic_check {x} {n}"),
        CommandAst::Pncoh(n, d) => format!("pncoh {n} {d}"),
        CommandAst::ExcTable(n) => format!("exc_table {n}"),
        CommandAst::KoszulKe(r) => format!("koszul_ke {r}"),
        CommandAst::BlowupVerify { ring, f, w, .. } => {
            format!("blowup_verify({ring}; {f}; {w}; ...)")
        }
    }
}

fn run_command(
    env: &Env,
    cmd: &CommandAst,
    opts: &ExecOptions,
) -> Result<serde_json::Value, String> {
    match cmd {
        CommandAst::Check(x) => {
            let m = env.mf(x)?;
            let ctx = m.ctx();
            Ok(serde_json::json!({
                "valid": true,
                "ring": ctx.to_string(),
                "W": ctx.render(&m.pot.w),
                "rank1": m.rank1,
                "rank0": m.rank0,
            }))
        }
        CommandAst::Ext(p, q, d) => {
            let ext = ext_module(&env.mf(p)?, &env.mf(q)?, *d).map_err(|e| e.to_string())?;
            let ctx = &env.mfs[p].pot.ctx;
            Ok(serde_json::json!({
                "degree": d,
                "k_dim": kdim_json(ext.k_dim()),
                "relations": mat_json(ctx, &ext.presentation.relations),
            }))
        }
        CommandAst::Contractible(x) => {
            let v = is_contractible(&env.mf(x)?).map_err(|e| e.to_string())?;
            Ok(serde_json::json!({ "contractible": v }))
        }
        CommandAst::HomotopyIso(m) => {
            let d = &env.morphs[m];
            let src = env.mf(&d.source)?;
            let tgt = env.mf(&d.target)?;
            let phi = MFMorphism::degree_zero(src, tgt, d.f1.clone(), d.f0.clone())
                .map_err(|e| e.to_string())?;
            if !is_closed(&phi).map_err(|e| e.to_string())? {
                return Err("morphism is not closed".to_string());
            }
            let v = is_homotopy_iso(&phi).map_err(|e| e.to_string())?;
            Ok(serde_json::json!({ "homotopy_iso": v }))
        }
        CommandAst::Dual(x) => Ok(dual(&env.mf(x)?).to_json()),
        CommandAst::Tensor(p, q) => Ok(tensor(&env.mf(p)?, &env.mf(q)?)
            .map_err(|e| e.to_string())?
            .to_json()),
        CommandAst::Hom(p, q) => Ok(hom_mf(&env.mf(p)?, &env.mf(q)?)
            .map_err(|e| e.to_string())?
            .to_json()),
        CommandAst::Koszul { pot, a, b } => Ok(run_koszul(env, pot, a, b)?.to_json()),
        CommandAst::Cok(x) => {
            let m = cokernel_module(&env.mf(x)?).map_err(|e| e.to_string())?;
            Ok(m.to_json())
        }
        CommandAst::PeriodicCheck(x, n) => {
            let v = periodic_resolution_check(&env.mf(x)?, *n).map_err(|e| e.to_string())?;
            Ok(match v {
                PeriodicVerdict::Pass => serde_json::json!({ "pass": true }),
                PeriodicVerdict::Fail(spot) => {
                    serde_json::json!({ "pass": false, "first_failing_spot": spot })
                }
            })
        }
        CommandAst::Pncoh(n, d) => {
            let t = pn_line_cohomology(*n, *d);
            Ok(serde_json::json!({ "n": t.n, "d": t.d, "dims": t.dims }))
        }
        CommandAst::ExcTable(n) => {
            let t = exceptional_collection_table(*n);
            let entries: Vec<Vec<Vec<u64>>> = t
                .entries
                .iter()
                .map(|row| row.iter().map(|c| c.dims.clone()).collect())
                .collect();
            Ok(serde_json::json!({
                "n": t.n,
                "base": t.base,
                "strong_exceptional": t.strong_exceptional,
                "entries": entries,
            }))
        }
        CommandAst::KoszulKe(r) => {
            let rep = koszul_ke_check(*r, opts.seed).map_err(|e| e.to_string())?;
            let hdims: Vec<serde_json::Value> = rep
                .homology_dims
                .iter()
                .map(|d| match d {
                    None => serde_json::json!("zero"),
                    Some(k) => serde_json::json!(k),
                })
                .collect();
            Ok(serde_json::json!({
                "r": rep.r,
                "pass": rep.pass,
                "homology_krull_dims": hdims,
                "kernel_ranks": rep.kernel_ranks,
                "expected_ranks": rep.expected_ranks,
            }))
        }
        CommandAst::BlowupVerify { ring, f, w, m1, m0 } => {
            let ctx = env.ring(ring);
            let f = ctx.parse_poly(f).map_err(|e| e.to_string())?;
            let w = ctx.parse_poly(w).map_err(|e| e.to_string())?;
            let m1 = parse_matrix(ctx, m1)?;
            let m0 = parse_matrix(ctx, m0)?;
            let model =
                lift_potential_data(ctx, &f, &w, &m1, &m0).map_err(|e| e.to_string())?;
            let rep = duality_witness(&model).map_err(|e| e.to_string())?;
            Ok(rep.to_json())
        }
    }
}
