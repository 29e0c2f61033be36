//! Tambara functors: Mackey functors whose levels are commutative rings,
//! with multiplicative norms between adjacent levels.

mod burnside;
mod counit;
mod gsm;
mod normed;

pub use burnside::{burnside_tambara, marks, ring_mod, ring_z};
pub use counit::{counit, reconstruct_norms, twist_weyl, Counit, TwistedNorm};
pub use gsm::tensor_gset;
pub use normed::{norm_tambara, NormTambara};

use crate::abgroup::{AbGroup, Elem};
use crate::error::{Error, Result};
use crate::group::Level;
use crate::mackey::{verify_mackey, MackeyFunctor, MackeyMorphism, Report};
use crate::matrix::{add_scaled, int, vec_add, zero_vec, Int};
use crate::reciprocity::{derive_sum_reciprocity, derive_transfer_reciprocity, FormalMonomial, Var};
use num_traits::Zero;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub type NormFn = Arc<dyn Fn(&[Int]) -> Result<Elem> + Send + Sync>;

/// A norm between adjacent levels, tabulated or computed on demand.
#[derive(Clone)]
pub enum NormMap {
    /// Keys and values in canonical coordinates.
    Table(HashMap<Elem, Elem>),
    Eval(NormFn),
}

impl NormMap {
    pub fn apply(&self, source: &AbGroup, x: &[Int]) -> Result<Elem> {
        match self {
            NormMap::Table(t) => {
                let key = source.reduce(x);
                t.get(&key).cloned().ok_or_else(|| Error::Invalid(format!("norm table has no entry for {key:?}")))
            }
            NormMap::Eval(f) => f(x),
        }
    }
}

impl fmt::Debug for NormMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormMap::Table(t) => write!(f, "Table({} entries)", t.len()),
            NormMap::Eval(_) => write!(f, "Eval"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TambaraFunctor {
    pub mackey: MackeyFunctor,
    /// `mult[h][i][j]` = e_i · e_j at level h
    pub mult: Vec<Vec<Vec<Elem>>>,
    pub unit: Vec<Elem>,
    /// `norms[h]`: level h → level h+1
    pub norms: Vec<NormMap>,
}

/// Sample sizes for the axiom checks.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Coefficient bound on generators when a level is too large to list.
    pub radius: i64,
    pub sample_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { radius: 1, sample_cap: 27 }
    }
}

/// Every element if there are at most `cap`, otherwise small combinations of generators.
pub fn sample_elements(g: &AbGroup, radius: i64, cap: usize) -> Vec<Elem> {
    if let Ok(all) = g.elements_capped(cap) {
        return all;
    }
    let n = g.gens();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut idx = vec![-radius; n];
    loop {
        let x = g.reduce(&idx.iter().map(|&c| int(c)).collect::<Vec<_>>());
        if seen.insert(x.clone()) {
            out.push(x);
            if out.len() >= cap {
                return out;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] <= radius {
                break;
            }
            idx[k] = -radius;
            k += 1;
        }
    }
}

impl TambaraFunctor {
    pub fn new(mackey: MackeyFunctor, mult: Vec<Vec<Vec<Elem>>>, unit: Vec<Elem>, norms: Vec<NormMap>) -> Result<Self> {
        let n = mackey.n();
        if mult.len() != n + 1 || unit.len() != n + 1 || norms.len() != n {
            return Err(Error::Shape("Tambara data needs one ring per level and one norm per step".into()));
        }
        for h in 0..=n {
            let g = mackey.levels[h].gens();
            if mult[h].len() != g || mult[h].iter().any(|r| r.len() != g || r.iter().any(|x| x.len() != g)) {
                return Err(Error::Shape(format!("multiplication table at level {h} has the wrong shape")));
            }
            if unit[h].len() != g {
                return Err(Error::Shape(format!("unit at level {h} has the wrong shape")));
            }
        }
        Ok(TambaraFunctor { mackey, mult, unit, norms })
    }

    pub fn n(&self) -> usize {
        self.mackey.n()
    }

    pub fn level(&self, h: usize) -> &AbGroup {
        &self.mackey.levels[h]
    }

    pub fn one(&self, h: usize) -> Elem {
        self.level(h).reduce(&self.unit[h])
    }

    pub fn mul(&self, h: usize, x: &[Int], y: &[Int]) -> Elem {
        let g = self.level(h).gens();
        let mut acc = zero_vec(g);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    add_scaled(&mut acc, &(a * b), &self.mult[h][i][j]);
                }
            }
        }
        self.level(h).reduce(&acc)
    }

    pub fn product(&self, h: usize, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.one(h), |acc, x| self.mul(h, &acc, x))
    }

    /// γ^e acting on level `h`.
    pub fn act(&self, h: usize, e: usize, x: &[Int]) -> Elem {
        self.mackey.act(h, e, x)
    }

    /// Adjacent norm from level `h` to `h+1`.
    pub fn nm(&self, h: usize, x: &[Int]) -> Result<Elem> {
        let n = self.norms.get(h).ok_or(Error::BadLevel(h + 1))?;
        let y = n.apply(self.level(h), x)?;
        if y.len() != self.level(h + 1).gens() {
            return Err(Error::Shape(format!("norm from level {h} returned a vector of the wrong length")));
        }
        Ok(self.level(h + 1).reduce(&y))
    }

    /// Composite norm from level `h` up to level `k`.
    pub fn nm_up(&self, h: usize, k: usize, x: &[Int]) -> Result<Elem> {
        if h > k || k > self.n() {
            return Err(Error::NotSubgroup { lower: h, upper: k });
        }
        let mut v = self.level(h).reduce(x);
        for j in h..k {
            v = self.nm(j, &v)?;
        }
        Ok(v)
    }

    /// Forget to the subgroup at level `k`.
    pub fn restrict(&self, k: usize) -> Result<TambaraFunctor> {
        Ok(TambaraFunctor {
            mackey: self.mackey.restrict(k, false)?,
            mult: self.mult[..=k].to_vec(),
            unit: self.unit[..=k].to_vec(),
            norms: self.norms[..k].to_vec(),
        })
    }

    /// The same structure moved along levelwise isomorphisms `to: self → target`
    /// with inverse `from`.
    pub fn transport(&self, target: &MackeyFunctor, to: &MackeyMorphism, from: &MackeyMorphism) -> TambaraFunctor {
        let n = self.n();
        let mult = (0..=n)
            .map(|h| {
                let g = target.levels[h].gens();
                let back: Vec<Elem> = (0..g).map(|i| from.maps[h].col(i)).collect();
                (0..g)
                    .map(|i| (0..g).map(|j| to.apply(target, h, &self.mul(h, &back[i], &back[j]))).collect())
                    .collect()
            })
            .collect();
        let unit = (0..=n).map(|h| to.apply(target, h, &self.unit[h])).collect();
        let norms = (0..n)
            .map(|h| {
                let src = self.clone();
                let to_next = to.maps[h + 1].clone();
                let from_h = from.maps[h].clone();
                let f: NormFn = Arc::new(move |x: &[Int]| Ok(to_next.mul_vec(&src.nm(h, &from_h.mul_vec(x))?)));
                NormMap::Eval(f)
            })
            .collect();
        TambaraFunctor { mackey: target.clone(), mult, unit, norms }
    }

    /// Levelwise diagonal presentations, with the comparison isomorphisms.
    pub fn simplified(&self) -> (TambaraFunctor, MackeyMorphism, MackeyMorphism) {
        let (m, to, from) = self.mackey.simplified();
        (self.transport(&m, &to, &from), to, from)
    }

    /// A monomial in Weyl conjugates of `a` and `b` (or `x`) at `level`,
    /// where γ^t acts as the t-th power of the generator of the subgroup at level `k`.
    pub fn eval_monomial(&self, mono: &FormalMonomial, level: usize, k: usize, a: &[Int], b: &[Int]) -> Elem {
        let step = self.mackey.ctx.index(Level(k));
        let factors: Vec<Elem> = mono
            .entries
            .iter()
            .map(|(t, v)| {
                let src = if *v == Var::B { b } else { a };
                self.act(level, t * step, src)
            })
            .collect();
        self.product(level, &factors)
    }

    /// Right-hand side of the sum reciprocity formula for N_H^K(a+b).
    pub fn sum_formula(&self, k: usize, h: usize, a: &[Int], b: &[Int]) -> Result<Elem> {
        let r = derive_sum_reciprocity(&self.mackey.ctx, k, h)?;
        let mut acc = vec_add(&self.nm_up(h, k, a)?, &self.nm_up(h, k, b)?);
        for (kp, monos) in &r.intermediate {
            for m in monos {
                let inner = self.nm_up(h, *kp, &self.eval_monomial(m, h, k, a, b))?;
                acc = vec_add(&acc, &self.mackey.tr(*kp, k, &inner));
            }
        }
        let mut g = zero_vec(self.level(h).gens());
        for m in &r.g {
            g = vec_add(&g, &self.eval_monomial(m, h, k, a, b));
        }
        acc = vec_add(&acc, &self.mackey.tr(h, k, &g));
        Ok(self.level(k).reduce(&acc))
    }

    /// Right-hand side of the transfer reciprocity formula for N_H^K(tr_{H'}^H x).
    pub fn transfer_formula(&self, k: usize, h: usize, hp: usize, x: &[Int]) -> Result<Elem> {
        let r = derive_transfer_reciprocity(&self.mackey.ctx, k, h, hp)?;
        let mut f = zero_vec(self.level(hp).gens());
        for m in &r.f {
            f = vec_add(&f, &self.eval_monomial(m, hp, k, x, x));
        }
        Ok(self.mackey.tr(hp, k, &f))
    }
}

/// Check the ring, Frobenius and norm axioms: on generators where the
/// axiom is linear, on sampled elements where it is not.
pub fn verify_tambara(t: &TambaraFunctor, opts: &VerifyOptions) -> Report {
    let mut rep = verify_mackey(&t.mackey);
    if !rep.passed() {
        return rep;
    }
    let m = &t.mackey;
    let n = t.n();
    for h in 0..=n {
        check_ring(t, h, &mut rep);
    }
    for h in 0..n {
        for i in 0..t.level(h + 1).gens() {
            let y = t.level(h + 1).gen(i);
            for j in 0..t.level(h).gens() {
                let x = t.level(h).gen(j);
                let lhs = t.mul(h + 1, &y, &m.tr(h, h + 1, &x));
                let rhs = m.tr(h, h + 1, &t.mul(h, &m.res(h + 1, h, &y), &x));
                if !t.level(h + 1).elem_eq(&lhs, &rhs) {
                    rep.fail(format!("Frobenius reciprocity fails at level {} for generators {i}, {j}", h + 1));
                }
            }
            for j in 0..t.level(h + 1).gens() {
                let z = t.level(h + 1).gen(j);
                let lhs = m.res(h + 1, h, &t.mul(h + 1, &y, &z));
                let rhs = t.mul(h, &m.res(h + 1, h, &y), &m.res(h + 1, h, &z));
                if !t.level(h).elem_eq(&lhs, &rhs) {
                    rep.fail(format!("restriction to level {h} is not multiplicative on generators {i}, {j}"));
                }
            }
        }
        if !t.level(h).elem_eq(&m.res(h + 1, h, &t.unit[h + 1]), &t.unit[h]) {
            rep.fail(format!("restriction to level {h} does not preserve the unit"));
        }
    }
    if rep.passed() {
        check_norms(t, opts, &mut rep);
    }
    rep
}

fn check_ring(t: &TambaraFunctor, h: usize, rep: &mut Report) {
    let g = t.level(h);
    let k = g.gens();
    for r in g.relations() {
        for j in 0..k {
            if !g.is_zero_elem(&t.mul(h, r, &g.gen(j))) {
                rep.fail(format!("multiplication at level {h} is not well defined"));
                return;
            }
        }
    }
    let w = &t.mackey;
    for i in 0..k {
        let x = g.gen(i);
        if !g.elem_eq(&t.mul(h, &t.unit[h], &x), &x) {
            rep.fail(format!("unit at level {h} fails on generator {i}"));
        }
        for j in 0..k {
            let y = g.gen(j);
            let xy = t.mul(h, &x, &y);
            if !g.elem_eq(&xy, &t.mul(h, &y, &x)) {
                rep.fail(format!("multiplication at level {h} is not commutative on {i}, {j}"));
            }
            if !g.elem_eq(&w.act(h, 1, &xy), &t.mul(h, &w.act(h, 1, &x), &w.act(h, 1, &y))) {
                rep.fail(format!("weyl action at level {h} is not multiplicative on {i}, {j}"));
            }
            for l in 0..k {
                let z = g.gen(l);
                if !g.elem_eq(&t.mul(h, &xy, &z), &t.mul(h, &x, &t.mul(h, &y, &z))) {
                    rep.fail(format!("multiplication at level {h} is not associative on {i}, {j}, {l}"));
                }
            }
        }
    }
    if !g.elem_eq(&w.act(h, 1, &t.unit[h]), &t.unit[h]) {
        rep.fail(format!("weyl action at level {h} moves the unit"));
    }
}

fn check_norms(t: &TambaraFunctor, opts: &VerifyOptions, rep: &mut Report) {
    let n = t.n();
    let m = &t.mackey;
    let ctx = m.ctx;
    let samples: Vec<Vec<Elem>> = (0..=n).map(|h| sample_elements(t.level(h), opts.radius, opts.sample_cap)).collect();
    let guard = |rep: &mut Report, what: String, r: Result<bool>| match r {
        Ok(true) => {}
        Ok(false) => rep.fail(what),
        Err(e) => rep.fail(format!("{what}: {e}")),
    };
    for h in 0..n {
        let src = t.level(h);
        let tgt = t.level(h + 1);
        let gk = ctx.index(Level(h + 1));
        guard(rep, format!("norm from level {h} does not preserve the unit"), t.nm(h, &t.unit[h]).map(|v| tgt.elem_eq(&v, &t.unit[h + 1])));
        for x in &samples[h] {
            let fx = |rep: &mut Report, what: &str, r: Result<bool>| {
                let msg = format!("norm from level {h} {what} at {}", crate::abgroup::fmt_vec(x));
                match r {
                    Ok(true) => {}
                    Ok(false) => rep.fail(msg),
                    Err(e) => rep.fail(format!("{msg}: {e}")),
                }
            };
            let nx = match t.nm(h, x) {
                Ok(v) => v,
                Err(e) => {
                    rep.fail(format!("norm from level {h} failed: {e}"));
                    return;
                }
            };
            fx(rep, "is not Weyl equivariant", t.nm(h, &m.act(h, 1, x)).map(|v| tgt.elem_eq(&v, &m.act(h + 1, 1, &nx))));
            fx(rep, "is not invariant under the larger subgroup", t.nm(h, &m.act(h, gk, x)).map(|v| tgt.elem_eq(&v, &nx)));
            let conj: Vec<Elem> = (0..ctx.p() as usize).map(|s| m.act(h, s * gk, x)).collect();
            fx(rep, "does not restrict to the product of conjugates", Ok(src.elem_eq(&m.res(h + 1, h, &nx), &t.product(h, &conj))));
            for y in &samples[h] {
                fx(rep, "is not multiplicative", t.nm(h, &t.mul(h, x, y)).and_then(|v| Ok(tgt.elem_eq(&v, &t.mul(h + 1, &nx, &t.nm(h, y)?)))));
            }
        }
    }
    for k in 1..=n {
        for h in 0..k {
            for a in &samples[h] {
                for b in &samples[h] {
                    let ok = t.nm_up(h, k, &vec_add(a, b)).and_then(|l| Ok(t.level(k).elem_eq(&l, &t.sum_formula(k, h, a, b)?)));
                    guard(rep, format!("sum reciprocity fails for the norm from level {h} to {k}"), ok);
                }
            }
            for hp in 0..h {
                for x in &samples[hp] {
                    let ok = t
                        .nm_up(h, k, &m.tr(hp, h, x))
                        .and_then(|l| Ok(t.level(k).elem_eq(&l, &t.transfer_formula(k, h, hp, x)?)));
                    guard(rep, format!("transfer reciprocity fails for the norm from level {h} to {k} of a transfer from {hp}"), ok);
                }
            }
        }
    }
}

/// Multiplication table of a single ring given by a bilinear rule on generators.
pub(crate) fn table(g: usize, rule: impl Fn(usize, usize) -> Elem) -> Vec<Vec<Elem>> {
    (0..g).map(|i| (0..g).map(|j| rule(i, j)).collect()).collect()
}
