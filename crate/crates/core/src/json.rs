//! JSON documents for Mackey and Tambara functors. Matrices are lists of
//! rows acting on column vectors of generator coordinates; entries must fit
//! in 64 bits.

use crate::abgroup::{AbGroup, Elem};
use crate::error::{Error, Result};
use crate::group::GroupCtx;
use crate::mackey::MackeyFunctor;
use crate::matrix::{Int, IntMatrix};
use crate::tambara::{sample_elements, NormMap, TambaraFunctor};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub gens: usize,
    #[serde(default)]
    pub rels: Vec<Vec<i64>>,
    pub weyl: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TambaraDoc {
    /// `mult[h][i][j]` = e_i · e_j at level h
    pub mult: Vec<Vec<Vec<Vec<i64>>>>,
    pub unit: Vec<Vec<i64>>,
    /// Per step, the norm as a list of (x, N(x)) pairs covering the source level.
    pub norms: Vec<Vec<(Vec<i64>, Vec<i64>)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MackeyDoc {
    pub p: u64,
    pub n: u32,
    pub levels: Vec<LevelDoc>,
    pub res: Vec<Vec<Vec<i64>>>,
    pub tr: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tambara: Option<TambaraDoc>,
}

fn small(x: &Int) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Invalid(format!("entry {x} does not fit in 64 bits")))
}

fn vec_out(v: &[Int]) -> Result<Vec<i64>> {
    v.iter().map(small).collect()
}

fn vec_in(v: &[i64], len: usize, what: &str) -> Result<Elem> {
    if v.len() != len {
        return Err(Error::Invalid(format!("{what}: expected {len} entries, found {}", v.len())));
    }
    Ok(v.iter().map(|&x| Int::from(x)).collect())
}

fn mat_out(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows()).map(|i| vec_out(&m.row(i))).collect()
}

fn mat_in(rows: &[Vec<i64>], r: usize, c: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != r {
        return Err(Error::Invalid(format!("{what}: expected {r} rows, found {}", rows.len())));
    }
    let mut m = IntMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in vec_in(row, c, what)?.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m)
}

pub fn mackey_doc(m: &MackeyFunctor) -> Result<MackeyDoc> {
    let levels = m
        .levels
        .iter()
        .zip(&m.weyl)
        .map(|(g, w)| {
            Ok(LevelDoc { gens: g.gens(), rels: g.relations().iter().map(|r| vec_out(r)).collect::<Result<_>>()?, weyl: mat_out(w)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MackeyDoc {
        p: m.ctx.p(),
        n: m.ctx.n(),
        levels,
        res: m.res.iter().map(mat_out).collect::<Result<_>>()?,
        tr: m.tr.iter().map(mat_out).collect::<Result<_>>()?,
        tambara: None,
    })
}

pub fn mackey_from_doc(d: &MackeyDoc) -> Result<MackeyFunctor> {
    let ctx = GroupCtx::new(d.p, d.n)?;
    let n = d.n as usize;
    if d.levels.len() != n + 1 || d.res.len() != n || d.tr.len() != n {
        return Err(Error::Invalid(format!("a functor over C_{}^{} needs {} levels", d.p, d.n, n + 1)));
    }
    let levels = d
        .levels
        .iter()
        .enumerate()
        .map(|(h, l)| {
            let rels = l.rels.iter().map(|r| vec_in(r, l.gens, &format!("relation at level {h}"))).collect::<Result<_>>()?;
            AbGroup::new(l.gens, rels)
        })
        .collect::<Result<Vec<_>>>()?;
    let g: Vec<usize> = d.levels.iter().map(|l| l.gens).collect();
    let weyl = (0..=n).map(|h| mat_in(&d.levels[h].weyl, g[h], g[h], &format!("weyl at level {h}"))).collect::<Result<_>>()?;
    let res = (0..n).map(|h| mat_in(&d.res[h], g[h], g[h + 1], &format!("res from level {}", h + 1))).collect::<Result<_>>()?;
    let tr = (0..n).map(|h| mat_in(&d.tr[h], g[h + 1], g[h], &format!("tr from level {h}"))).collect::<Result<_>>()?;
    MackeyFunctor::new(ctx, levels, res, tr, weyl)
}

pub fn to_json(m: &MackeyFunctor) -> Result<String> {
    Ok(serde_json::to_string_pretty(&mackey_doc(m)?).expect("documents serialize"))
}

pub fn from_json(s: &str) -> Result<MackeyFunctor> {
    let d: MackeyDoc = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
    mackey_from_doc(&d)
}

/// Norms are written as full tables, so every level with a norm out of it
/// must be finite with at most `cap` elements.
pub fn tambara_to_json(t: &TambaraFunctor, cap: usize) -> Result<String> {
    let mut d = mackey_doc(&t.mackey)?;
    let mut norms = Vec::new();
    for h in 0..t.n() {
        let elems = t.level(h).elements_capped(cap)?;
        norms.push(elems.iter().map(|x| Ok((vec_out(x)?, vec_out(&t.nm(h, x)?)?))).collect::<Result<Vec<_>>>()?);
    }
    d.tambara = Some(TambaraDoc {
        mult: t.mult.iter().map(|lv| lv.iter().map(|row| row.iter().map(|x| vec_out(x)).collect()).collect()).collect::<Result<_>>()?,
        unit: t.unit.iter().map(|u| vec_out(u)).collect::<Result<_>>()?,
        norms,
    });
    Ok(serde_json::to_string_pretty(&d).expect("documents serialize"))
}

pub fn tambara_from_json(s: &str) -> Result<TambaraFunctor> {
    let d: MackeyDoc = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
    let m = mackey_from_doc(&d)?;
    let td = d.tambara.as_ref().ok_or_else(|| Error::Invalid("document has no tambara section".into()))?;
    let n = m.n();
    if td.mult.len() != n + 1 || td.unit.len() != n + 1 || td.norms.len() != n {
        return Err(Error::Invalid("tambara section has the wrong number of levels".into()));
    }
    let mut mult = Vec::with_capacity(n + 1);
    for h in 0..=n {
        let g = m.levels[h].gens();
        if td.mult[h].len() != g || td.mult[h].iter().any(|r| r.len() != g) {
            return Err(Error::Invalid(format!("multiplication table at level {h} has the wrong shape")));
        }
        mult.push(
            td.mult[h]
                .iter()
                .map(|row| row.iter().map(|x| vec_in(x, g, "product")).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let unit = (0..=n).map(|h| vec_in(&td.unit[h], m.levels[h].gens(), "unit")).collect::<Result<_>>()?;
    let mut norms = Vec::with_capacity(n);
    for h in 0..n {
        let mut table = HashMap::new();
        for (x, y) in &td.norms[h] {
            let x = m.levels[h].reduce(&vec_in(x, m.levels[h].gens(), "norm argument")?);
            let y = m.levels[h + 1].reduce(&vec_in(y, m.levels[h + 1].gens(), "norm value")?);
            table.insert(x, y);
        }
        if sample_elements(&m.levels[h], 0, usize::MAX).iter().any(|x| !table.contains_key(x)) {
            return Err(Error::Invalid(format!("norm table from level {h} does not cover the level")));
        }
        norms.push(NormMap::Table(table));
    }
    TambaraFunctor::new(m, mult, unit, norms).map_err(|e| Error::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::burnside;
    use crate::tambara::{burnside_tambara, norm_tambara, ring_mod, verify_tambara, VerifyOptions};
    use crate::norm::NormOptions;

    #[test]
    fn round_trip() {
        let m = burnside(GroupCtx::new(3, 2).unwrap());
        assert_eq!(from_json(&to_json(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn malformed() {
        assert!(matches!(from_json("{\"p\": 4, \"n\": 1}"), Err(Error::Invalid(_))));
        let mut d = mackey_doc(&burnside(GroupCtx::new(2, 1).unwrap())).unwrap();
        d.res[0].pop();
        assert!(mackey_from_doc(&d).is_err());
    }

    #[test]
    fn tambara_round_trip() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let t = norm_tambara(&ctx, 0, &ring_mod(2, 2).unwrap(), &NormOptions::default()).unwrap().tambara;
        let back = tambara_from_json(&tambara_to_json(&t, 64).unwrap()).unwrap();
        assert_eq!(back.mackey, t.mackey);
        assert!(verify_tambara(&back, &VerifyOptions::default()).passed());
        // the Burnside norm leaves from an infinite level
        assert!(tambara_to_json(&burnside_tambara(ctx), 64).is_err());
    }
}
