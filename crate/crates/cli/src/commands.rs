use crate::args::{Command, Example, Flags, Group, IsoCheck};
use crate::source::{load, load_tambara, load_unchecked};
use mackey::abgroup::AbGroup;
use mackey::boxprod::MultiBox;
use mackey::diagram::{diagram, inline_matrix};
use mackey::gset::GSet;
use mackey::iso::{find_isomorphism, DEFAULT_SEARCH_CAP};
use mackey::json::mackey_doc;
use mackey::mackey::{is_isomorphism, verify_mackey, verify_morphism, MackeyFunctor, MackeyMorphism, Report};
use mackey::matrix::{vec_scale, Int};
use mackey::norm::checks::{check_composability, check_monoidality, oracle_check};
use mackey::norm::{norm, NormOptions, Strategy};
use mackey::reciprocity::{derive_sum_reciprocity, derive_transfer_reciprocity, FormalMonomial};
use mackey::tambara::{tensor_gset, verify_tambara, VerifyOptions};
use mackey::{Error, GroupCtx, Level, Result};
use serde_json::{json, Value};

/// What a command produced. `ok == false` means a check on our own output failed.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Outcome {
    fn good(text: String, json: Value) -> Self {
        Outcome { text, json, ok: true }
    }
}

struct Env {
    opts: NormOptions,
    cap: usize,
    oracle: bool,
}

impl Env {
    fn new(flags: &Flags) -> Result<Self> {
        let strategy: Strategy = flags.strategy.parse()?;
        let mut opts = NormOptions::with_strategy(strategy);
        if let Some(c) = flags.cap {
            opts.element_cap = c;
        }
        Ok(Env { opts, cap: flags.cap.unwrap_or(DEFAULT_SEARCH_CAP), oracle: flags.oracle })
    }
}

fn ctx_of(g: &Group) -> Result<GroupCtx> {
    GroupCtx::new(g.p, g.n)
}

fn optional_ctx(p: Option<u64>, n: Option<u32>) -> Result<Option<GroupCtx>> {
    match (p, n) {
        (Some(p), Some(n)) => Ok(Some(GroupCtx::new(p, n)?)),
        (None, None) => Ok(None),
        _ => Err(Error::Invalid("--p and --n go together".into())),
    }
}

/// Our own outputs must be Mackey functors; anything else is a bug.
fn post_check(m: &MackeyFunctor) -> Result<()> {
    let rep = verify_mackey(m);
    if rep.passed() {
        Ok(())
    } else {
        Err(Error::Consistency(format!("output fails the Mackey axioms: {}", rep.failures.join("; "))))
    }
}

fn check_witness(src: &MackeyFunctor, tgt: &MackeyFunctor, phi: &MackeyMorphism) -> Result<()> {
    let rep = verify_morphism(src, tgt, phi);
    if !rep.passed() || !is_isomorphism(src, tgt, phi) {
        return Err(Error::Consistency(format!("witness is not an isomorphism: {rep}")));
    }
    Ok(())
}

fn functor_outcome(m: &MackeyFunctor, header: String) -> Result<Outcome> {
    post_check(m)?;
    let doc = serde_json::to_value(mackey_doc(m)?).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Outcome::good(format!("{header}{}", diagram(m)), doc))
}

fn monomials(ms: &[FormalMonomial]) -> Vec<String> {
    ms.iter().map(|m| m.to_string()).collect()
}

fn witness_text(phi: &MackeyMorphism) -> String {
    phi.maps.iter().enumerate().map(|(h, m)| format!("  level {h}: {}\n", inline_matrix(m))).collect()
}

fn witness_json(phi: &MackeyMorphism) -> Value {
    let maps: Vec<Vec<Vec<String>>> = phi
        .maps
        .iter()
        .map(|m| (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect())
        .collect();
    json!(maps)
}

fn report_outcome(rep: Report) -> Outcome {
    let text = if rep.passed() { "pass\n".to_string() } else { format!("fail\n{}\n", rep.failures.join("\n")) };
    Outcome { text, json: json!({ "passed": rep.passed(), "failures": rep.failures }), ok: rep.passed() }
}

fn element_order(g: &AbGroup, x: &[Int]) -> Option<u64> {
    let bound = g.order()?;
    let bound: u64 = bound.try_into().ok()?;
    (1..=bound).find(|&k| g.is_zero_elem(&vec_scale(&Int::from(k), x)))
}

fn run_norm(env: &Env, ctx: &GroupCtx, h: usize, m: &MackeyFunctor) -> Result<MackeyFunctor> {
    let nm = norm(ctx, h, m, &env.opts)?;
    if env.oracle {
        let phi = oracle_check(ctx, h, m, &env.opts)?;
        let brute = norm(ctx, h, m, &NormOptions { strategy: Strategy::BruteForce, ..env.opts })?;
        check_witness(&nm.functor, &brute.functor, &phi)?;
    }
    Ok(nm.functor)
}

fn norm_of_z2(env: &Env) -> Result<Outcome> {
    let ctx = GroupCtx::new(2, 1)?;
    let input = load("z/2", Some(ctx.subgroup_ctx(Level(0))?))?;
    let nm = norm(&ctx, 0, &input, &env.opts)?;
    let out = &nm.functor;
    post_check(out)?;
    let top = out.level(1);
    let n1 = nm.generator_norm(&[Int::from(1)])?;
    let n0 = nm.generator_norm(&[Int::from(0)])?;
    let tr1 = out.tr(0, 1, &out.level(0).gen(0));
    let checks = [
        ("N(0) = 0", top.is_zero_elem(&n0)),
        ("res N(1) = 1", out.level(0).elem_eq(&out.res(1, 0, &n1), &out.level(0).gen(0))),
        ("tr(1) = 2·N(1)", top.elem_eq(&tr1, &vec_scale(&Int::from(2), &n1))),
        ("tr(1) = -2·N(1)", top.elem_eq(&tr1, &vec_scale(&Int::from(-2), &n1))),
        ("4·N(1) = 0", top.is_zero_elem(&vec_scale(&Int::from(4), &n1))),
        ("N(1) has order 4", element_order(top, &n1) == Some(4)),
    ];
    let mut text = format!("N_e^C_2(Z/2)\n{}", diagram(out));
    let mut ok = true;
    for (name, holds) in checks {
        text.push_str(&format!("{name}: {}\n", if holds { "holds" } else { "FAILS" }));
        ok &= holds;
    }
    let doc = serde_json::to_value(mackey_doc(out)?).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Outcome { text, json: doc, ok })
}

pub fn run(cmd: &Command, flags: &Flags) -> Result<Outcome> {
    let env = Env::new(flags)?;
    match cmd {
        Command::DeriveReciprocity { group, k, h, h_prime } => {
            let ctx = ctx_of(group)?;
            if let Some(hp) = h_prime {
                let t = derive_transfer_reciprocity(&ctx, *k, *h, *hp)?;
                let doc = json!({ "k": k, "h": h, "h_prime": hp, "f": monomials(&t.f), "r": t.r() });
                Ok(Outcome::good(format!("{t}\n"), doc))
            } else {
                let s = derive_sum_reciprocity(&ctx, *k, *h)?;
                let inter: Vec<Value> =
                    s.intermediate.iter().map(|(l, ms)| json!({ "level": l, "monomials": monomials(ms) })).collect();
                let doc = json!({ "k": k, "h": h, "intermediate": inter, "g": monomials(&s.g) });
                Ok(Outcome::good(format!("{s}\n"), doc))
            }
        }
        Command::Norm { group, h, input } => {
            let ctx = ctx_of(group)?;
            ctx.check(Level(*h))?;
            let m = load(input, Some(ctx.subgroup_ctx(Level(*h))?))?;
            let out = run_norm(&env, &ctx, *h, &m)?;
            functor_outcome(&out, String::new())
        }
        Command::Box { input, p, n } => {
            let ctx = optional_ctx(*p, *n)?;
            let factors = input.iter().map(|name| load(name, ctx)).collect::<Result<Vec<_>>>()?;
            let b = MultiBox::new(factors)?;
            functor_outcome(&b.functor, String::new())
        }
        Command::TensorGset { group, orbits, input } => {
            let ctx = ctx_of(group)?;
            let x = GSet::new(ctx, orbits.clone())?;
            let m = load(input, Some(ctx))?;
            let out = tensor_gset(&x, &m, &env.opts)?;
            functor_outcome(&out, String::new())
        }
        Command::Verify { mackey, tambara, p, n } => {
            let ctx = optional_ctx(*p, *n)?;
            if let Some(name) = mackey {
                Ok(report_outcome(verify_mackey(&load_unchecked(name, ctx)?)))
            } else {
                let name = tambara.as_deref().expect("clap requires one of --mackey, --tambara");
                let t = load_tambara(name, ctx)?;
                if let Some(c) = ctx {
                    if t.mackey.ctx != c {
                        return Err(Error::Invalid(format!("{name} lives over {}, expected {c}", t.mackey.ctx)));
                    }
                }
                Ok(report_outcome(verify_tambara(&t, &VerifyOptions::default())))
            }
        }
        Command::IsoCheck { which } => iso_check(&env, which),
        Command::Examples { which } => match which {
            Example::Burnside { group } => {
                let ctx = ctx_of(group)?;
                functor_outcome(&mackey::mackey::burnside(ctx), format!("A for {ctx}\n"))
            }
            Example::NormOfZ2 => norm_of_z2(&env),
        },
    }
}

fn iso_check(env: &Env, which: &IsoCheck) -> Result<Outcome> {
    let found = |phi: &MackeyMorphism, title: &str| {
        let text = format!("{title}: isomorphic\n{}", witness_text(phi));
        Outcome::good(text, json!({ "isomorphic": true, "witness": witness_json(phi) }))
    };
    match which {
        IsoCheck::Composability { group, k, h, input } => {
            let ctx = ctx_of(group)?;
            ctx.check(Level(*k))?;
            let m = load(input, Some(ctx.subgroup_ctx(Level(*h))?))?;
            let c = check_composability(&ctx, *k, *h, &m, &env.opts, env.cap)?;
            post_check(&c.direct.functor)?;
            post_check(&c.outer.functor)?;
            check_witness(&c.direct.functor, &c.outer.functor, &c.witness)?;
            Ok(found(&c.witness, "N_H^G M ≅ N_K^G N_H^K M"))
        }
        IsoCheck::Monoidality { group, h, input } => {
            let ctx = ctx_of(group)?;
            ctx.check(Level(*h))?;
            let sub = ctx.subgroup_ctx(Level(*h))?;
            let m = load(&input[0], Some(sub))?;
            let l = load(&input[1], Some(sub))?;
            let r = check_monoidality(&ctx, *h, &m, &l, &env.opts, env.cap)?;
            post_check(&r.lhs.functor)?;
            post_check(&r.rhs.functor)?;
            check_witness(&r.rhs.functor, &r.lhs.functor, &r.witness)?;
            let how = if r.explicit { "explicit" } else { "search" };
            Ok(found(&r.witness, &format!("N(M) □ N(L) ≅ N(M □ L) ({how})")))
        }
        IsoCheck::Custom { left, right, p, n } => {
            let ctx = optional_ctx(*p, *n)?;
            let a = load(left, ctx)?;
            let b = load(right, ctx)?;
            if a.ctx != b.ctx {
                return Err(Error::Invalid("the two functors live over different groups".into()));
            }
            match find_isomorphism(&a, &b, env.cap)? {
                Some(phi) => {
                    check_witness(&a, &b, &phi)?;
                    Ok(found(&phi, "custom"))
                }
                None => Ok(Outcome::good(
                    "custom: not isomorphic\n".into(),
                    json!({ "isomorphic": false, "witness": Value::Null }),
                )),
            }
        }
    }
}
