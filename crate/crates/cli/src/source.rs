//! Functors named on the command line: JSON files or a few built-ins.

use mackey::abgroup::AbGroup;
use mackey::json::{from_json, tambara_from_json};
use mackey::mackey::{burnside, fixed_point_functor, verify_mackey, MackeyFunctor};
use mackey::tambara::{burnside_tambara, TambaraFunctor};
use mackey::{Error, GroupCtx, Result};

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

fn builtin(name: &str, ctx: Option<GroupCtx>) -> Option<Result<MackeyFunctor>> {
    let group = match name {
        "burnside" => None,
        "z" | "Z" => Some(AbGroup::free(1)),
        _ => {
            let m = name.strip_prefix("z/").or_else(|| name.strip_prefix("Z/"))?;
            match m.parse::<u64>() {
                Ok(m) if m > 0 => Some(AbGroup::cyclic(m)),
                _ => return Some(Err(Error::Invalid(format!("bad modulus in {name:?}")))),
            }
        }
    };
    let Some(ctx) = ctx else {
        return Some(Err(Error::Invalid(format!("built-in {name:?} needs a group"))));
    };
    Some(Ok(match group {
        None => burnside(ctx),
        Some(a) => fixed_point_functor(ctx, &a),
    }))
}

/// Load a functor and check it before use; built-ins live over `ctx`.
pub fn load(name: &str, ctx: Option<GroupCtx>) -> Result<MackeyFunctor> {
    let m = match builtin(name, ctx) {
        Some(m) => m?,
        None => from_json(&read(name)?)?,
    };
    if let Some(c) = ctx {
        if m.ctx != c {
            return Err(Error::Invalid(format!("{name} lives over {}, expected {c}", m.ctx)));
        }
    }
    let rep = verify_mackey(&m);
    if !rep.passed() {
        return Err(Error::Invalid(format!("{name} is not a Mackey functor: {}", rep.failures.join("; "))));
    }
    Ok(m)
}

/// Like `load` but without the axiom check, for the verifier itself.
pub fn load_unchecked(name: &str, ctx: Option<GroupCtx>) -> Result<MackeyFunctor> {
    match builtin(name, ctx) {
        Some(m) => m,
        None => from_json(&read(name)?),
    }
}

pub fn load_tambara(name: &str, ctx: Option<GroupCtx>) -> Result<TambaraFunctor> {
    if name == "burnside" {
        let ctx = ctx.ok_or_else(|| Error::Invalid("built-in burnside needs a group".into()))?;
        return Ok(burnside_tambara(ctx));
    }
    tambara_from_json(&read(name)?)
}
