//! Presentations of the norm above H, by brute force on all tuples or by
//! rewriting norm symbols into symbols on generator tuples.

use super::{repeat_tuple, Norm, NormOptions, Strategy};
use crate::abgroup::{AbGroup, Elem};
use crate::error::{Error, Result};
use crate::group::Level;
use crate::matrix::{add_scaled, is_zero_vec, unit_vec, vec_add, vec_neg, vec_sub, zero_vec, Int, IntMatrix};
use crate::reciprocity::{evaluate_monomial, transfer_slots, Var};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

const DEPTH_GUARD: usize = 4096;

/// One level above H: norm symbols on `tuples` followed by the level below.
#[derive(Debug)]
pub struct UpperLevel {
    level: usize,
    strategy: Strategy,
    tuples: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, usize>,
    lower_gens: usize,
    proj: IntMatrix,
    lift: IntMatrix,
    memo: Mutex<HashMap<Vec<Elem>, Elem>>,
}

pub(super) struct BuiltLevel {
    pub level: UpperLevel,
    pub group: AbGroup,
    pub res: IntMatrix,
    pub tr: IntMatrix,
    pub weyl: IntMatrix,
}

fn is_unit(x: &[Int]) -> bool {
    let mut seen = false;
    for c in x {
        if c.is_zero() {
            continue;
        }
        if seen || !c.is_one() {
            return false;
        }
        seen = true;
    }
    seen
}

fn with_slot(m: &[Elem], j: usize, x: Elem) -> Vec<Elem> {
    let mut t = m.to_vec();
    t[j] = x;
    t
}

/// All tuples of length `q` over `items`.
fn all_tuples(items: &[Elem], q: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..q {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for t in &out {
            for x in items {
                let mut u = t.clone();
                u.push(x.clone());
                next.push(u);
            }
        }
        out = next;
    }
    out
}

impl UpperLevel {
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Raw generators: the tuples carrying norm symbols, then the level below.
    pub fn tuples(&self) -> &[Vec<Elem>] {
        &self.tuples
    }

    pub fn proj(&self) -> &IntMatrix {
        &self.proj
    }

    pub fn lift(&self) -> &IntMatrix {
        &self.lift
    }

    pub fn raw_width(&self) -> usize {
        self.tuples.len() + self.lower_gens
    }

    fn lower_part(&self, y: &[Int]) -> Elem {
        let mut v = zero_vec(self.tuples.len());
        v.extend(y.iter().cloned());
        v
    }

    /// N(tuple) in raw coordinates.
    pub(super) fn raw_norm(&self, norm: &Norm, tuple: &[Elem]) -> Result<Elem> {
        self.expand(norm, tuple, 0)
    }

    fn expand(&self, norm: &Norm, tuple: &[Elem], depth: usize) -> Result<Elem> {
        if depth > DEPTH_GUARD {
            return Err(Error::DepthGuard);
        }
        let top = norm.top_input();
        let t: Vec<Elem> = tuple.iter().map(|x| top.reduce(x)).collect();
        let width = self.raw_width();
        if t.iter().any(|x| is_zero_vec(x)) {
            return Ok(zero_vec(width));
        }
        if let Some(&i) = self.index.get(&t) {
            return Ok(unit_vec(width, i));
        }
        if self.strategy == Strategy::BruteForce {
            return Err(Error::Consistency(format!("tuple missing from brute-force level {}", self.level)));
        }
        if let Some(v) = self.memo.lock().unwrap().get(&t) {
            return Ok(v.clone());
        }
        let j = (0..t.len()).find(|&s| !is_unit(&t[s])).expect("non-generator tuple has a non-unit slot");
        let x = t[j].clone();
        let nz: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
        let first = nz[0];
        let result = if nz.len() >= 2 || x[first] > Int::one() {
            let mut a = zero_vec(x.len());
            a[first] = if nz.len() >= 2 { x[first].clone() } else { Int::one() };
            let b = vec_sub(&x, &a);
            let ea = self.expand(norm, &with_slot(&t, j, a.clone()), depth + 1)?;
            let eb = self.expand(norm, &with_slot(&t, j, b.clone()), depth + 1)?;
            let c = sum_correction(norm, self.level, &t, j, &a, &b)?;
            vec_add(&vec_add(&ea, &eb), &self.lower_part(&c))
        } else {
            // N(x) = −N(−x) − correction(x, −x), from N(x + (−x)) = 0
            let neg = top.reduce(&vec_neg(&x));
            let en = self.expand(norm, &with_slot(&t, j, neg.clone()), depth + 1)?;
            let c = sum_correction(norm, self.level, &t, j, &x, &neg)?;
            vec_neg(&vec_add(&en, &self.lower_part(&c)))
        };
        self.memo.lock().unwrap().insert(t, result.clone());
        Ok(result)
    }
}

/// The transfer terms of N(m(a+b)_j) − N(m a_j) − N(m b_j), at level l−1.
pub(super) fn sum_correction(norm: &Norm, l: usize, m: &[Elem], j: usize, a: &[Int], b: &[Int]) -> Result<Elem> {
    let ctx = norm.ctx;
    let h = norm.h;
    let q = ctx.index(Level(l));
    let recip = norm.sum_reciprocity(l);
    let subst = |v: Var| if v == Var::A { a.to_vec() } else { b.to_vec() };
    let mut total = zero_vec(norm.functor.levels[l - 1].gens());
    for (kp, monos) in &recip.intermediate {
        let len = ctx.weyl_order(Level(l), Level(*kp))?;
        let mut acc = zero_vec(norm.functor.levels[*kp].gens());
        for mono in monos {
            let placed = evaluate_monomial(mono, q, len, j, m, &subst)?;
            acc = vec_add(&acc, &norm.norm_element(*kp, &placed)?);
        }
        total = vec_add(&total, &norm.tr_up(*kp, l - 1, &acc));
    }
    let len = ctx.weyl_order(Level(l), Level(h))?;
    let mut acc = zero_vec(norm.functor.levels[h].gens());
    for mono in &recip.g {
        let placed = evaluate_monomial(mono, q, len, j, m, &subst)?;
        acc = vec_add(&acc, &norm.tensor_element(h, &placed));
    }
    total = vec_add(&total, &norm.tr_up(h, l - 1, &acc));
    Ok(norm.functor.levels[l - 1].reduce(&total))
}

/// The right side of N(m (tr x)_j) = tr(f(x)), at level l−1, for x at level h'.
pub(super) fn transfer_term(norm: &Norm, l: usize, m: &[Elem], j: usize, hp: usize, x: &[Int]) -> Result<Elem> {
    let ctx = norm.ctx;
    let h = norm.h;
    let q = ctx.index(Level(l));
    let input = &norm.input;
    let recip = norm.transfer_reciprocity(l, hp);
    let res = input.res_matrix(h, hp);
    let restricted: Vec<Elem> = m.iter().map(|e| res.mul_vec(e)).collect();
    let copies = norm.copies();
    let mut acc = zero_vec(norm.functor.levels[hp].gens());
    for mono in &recip.f {
        let mut placed: Vec<Elem> = (0..copies).map(|t| restricted[t % q].clone()).collect();
        for (i, e) in transfer_slots(&ctx, recip, mono) {
            placed[j + q * i] = input.weyl[hp].pow(e).mul_vec(x);
        }
        acc = vec_add(&acc, &norm.tensor_element(hp, &placed));
    }
    Ok(norm.tr_up(hp, l - 1, &acc))
}

fn choose_strategy(norm: &Norm, q: usize, opts: &NormOptions) -> Result<Strategy> {
    let top = norm.top_input();
    let fits = || -> bool {
        let Ok(els) = top.elements_capped(opts.element_cap) else { return false };
        let tuples = (els.len() as u128).checked_pow(q as u32);
        if !tuples.is_some_and(|t| t <= opts.tuple_cap as u128) {
            return false;
        }
        (0..norm.h).all(|hp| norm.input.levels[hp].elements_capped(opts.element_cap).is_ok())
    };
    match opts.strategy {
        Strategy::Rewrite => Ok(Strategy::Rewrite),
        Strategy::BruteForce if fits() => Ok(Strategy::BruteForce),
        Strategy::BruteForce => Err(Error::CapExceeded(opts.element_cap)),
        Strategy::Auto => Ok(if fits() { Strategy::BruteForce } else { Strategy::Rewrite }),
    }
}

/// Sample inputs for relations on an infinite or large group: zero,
/// generators, their negatives and pairwise sums.
fn samples(g: &AbGroup) -> Vec<Elem> {
    let n = g.gens();
    let mut out = vec![zero_vec(n)];
    for i in 0..n {
        out.push(g.reduce(&unit_vec(n, i)));
        out.push(g.reduce(&vec_neg(&unit_vec(n, i))));
        for k in i..n {
            out.push(g.reduce(&vec_add(&unit_vec(n, i), &unit_vec(n, k))));
        }
    }
    out.sort();
    out.dedup();
    out
}

pub(super) fn build_level(norm: &Norm, l: usize, opts: &NormOptions) -> Result<BuiltLevel> {
    let ctx = norm.ctx;
    let h = norm.h;
    let q = ctx.index(Level(l));
    let p = ctx.p() as usize;
    let top = norm.top_input().clone();
    let lower = norm.functor.levels[l - 1].clone();
    let ln = lower.gens();
    let strategy = choose_strategy(norm, q, opts)?;
    let items: Vec<Elem> = match strategy {
        Strategy::BruteForce => top.elements_capped(opts.element_cap)?,
        _ => (0..top.gens()).map(|i| unit_vec(top.gens(), i)).collect(),
    };
    let tuples = all_tuples(&items, q);
    let tn = tuples.len();
    let index: HashMap<Vec<Elem>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut lvl = UpperLevel {
        level: l,
        strategy,
        tuples: tuples.clone(),
        index,
        lower_gens: ln,
        proj: IntMatrix::zeros(0, 0),
        lift: IntMatrix::zeros(0, 0),
        memo: Mutex::new(HashMap::new()),
    };
    let width = tn + ln;
    let mut rels: Vec<Elem> = Vec::new();
    for r in lower.relations() {
        rels.push(lvl.lower_part(r));
    }
    let w_sub = norm.functor.weyl[l - 1].pow(q);
    for x in 0..ln {
        let mut c = w_sub.col(x);
        c[x] -= 1;
        rels.push(lvl.lower_part(&c));
    }
    let tr_in = |hp: usize, x: &[Int]| top.reduce(&norm.input.tr_matrix(hp, h).mul_vec(x));
    match strategy {
        Strategy::BruteForce => {
            for m in &tuples {
                for j in 0..q {
                    if !is_zero_vec(&m[j]) {
                        continue;
                    }
                    for a in &items {
                        for b in &items {
                            let s = top.reduce(&vec_add(a, b));
                            let mut rel = unit_vec(width, lvl.index[&with_slot(m, j, s)]);
                            rel[lvl.index[&with_slot(m, j, a.clone())]] -= 1;
                            rel[lvl.index[&with_slot(m, j, b.clone())]] -= 1;
                            let c = sum_correction(norm, l, m, j, a, b)?;
                            rels.push(vec_sub(&rel, &lvl.lower_part(&c)));
                        }
                    }
                    for hp in 0..h {
                        for x in norm.input.levels[hp].elements_capped(opts.element_cap)? {
                            let mut rel = unit_vec(width, lvl.index[&with_slot(m, j, tr_in(hp, &x))]);
                            let t = transfer_term(norm, l, m, j, hp, &x)?;
                            add_scaled(&mut rel, &Int::from(-1), &lvl.lower_part(&t));
                            rels.push(rel);
                        }
                    }
                }
            }
        }
        _ => {
            let diag = top.diagonal().expect("input is in diagonal form");
            let sample = samples(&top);
            for m in &tuples {
                for j in 0..q {
                    let i = (0..top.gens()).find(|&i| !m[j][i].is_zero()).unwrap();
                    let d = &diag[i];
                    if !d.is_zero() {
                        let e = unit_vec(top.gens(), i);
                        let rest = top.reduce(&vec_neg(&e));
                        let mut rel = unit_vec(width, lvl.index[m]);
                        rel = vec_add(&rel, &lvl.expand(norm, &with_slot(m, j, rest.clone()), 0)?);
                        let c = sum_correction(norm, l, m, j, &e, &rest)?;
                        rels.push(vec_add(&rel, &lvl.lower_part(&c)));
                    }
                    for a in &sample {
                        for b in &sample {
                            let s = top.reduce(&vec_add(a, b));
                            let mut rel = lvl.expand(norm, &with_slot(m, j, s), 0)?;
                            rel = vec_sub(&rel, &lvl.expand(norm, &with_slot(m, j, a.clone()), 0)?);
                            rel = vec_sub(&rel, &lvl.expand(norm, &with_slot(m, j, b.clone()), 0)?);
                            let c = sum_correction(norm, l, m, j, a, b)?;
                            rels.push(vec_sub(&rel, &lvl.lower_part(&c)));
                        }
                    }
                    for hp in 0..h {
                        let g = &norm.input.levels[hp];
                        let xs = g.elements_capped(opts.element_cap).unwrap_or_else(|_| samples(g));
                        for x in xs {
                            let mut rel = lvl.expand(norm, &with_slot(m, j, tr_in(hp, &x)), 0)?;
                            let t = transfer_term(norm, l, m, j, hp, &x)?;
                            rel = vec_sub(&rel, &lvl.lower_part(&t));
                            rels.push(rel);
                        }
                    }
                }
            }
        }
    }
    let raw = AbGroup::new(width, rels)?;
    let s = raw.simplify();
    let trm = s.proj.select_cols(&(tn..width).collect::<Vec<_>>());
    let gens = s.group.gens();
    // γ shifts the tuple cyclically
    let mut w_raw = IntMatrix::zeros(gens, width);
    for (g, t) in tuples.iter().enumerate() {
        let mut shifted = Vec::with_capacity(q);
        shifted.push(t[q - 1].clone());
        shifted.extend(t[..q - 1].iter().cloned());
        w_raw.set_col(g, &s.proj.col(lvl.index[&shifted]));
    }
    let w_low = trm.mul(&norm.functor.weyl[l - 1]);
    for x in 0..ln {
        w_raw.set_col(tn + x, &w_low.col(x));
    }
    // restriction: repeat the tuple, or the Weyl trace on transfers
    let mut r_raw = IntMatrix::zeros(ln, width);
    for (g, t) in tuples.iter().enumerate() {
        let rep = repeat_tuple(t, p);
        let v = if l - 1 > h { norm.norm_element(l - 1, &rep)? } else { norm.tensor_element(h, &rep) };
        r_raw.set_col(g, &v);
    }
    let trace = {
        let mut acc = IntMatrix::zeros(ln, ln);
        let mut cur = IntMatrix::identity(ln);
        for _ in 0..p {
            acc = acc.add(&cur);
            cur = w_sub.mul(&cur);
        }
        acc
    };
    for x in 0..ln {
        r_raw.set_col(tn + x, &trace.col(x));
    }
    let res = r_raw.mul(&s.lift);
    let weyl = w_raw.mul(&s.lift);
    lvl.proj = s.proj;
    lvl.lift = s.lift;
    Ok(BuiltLevel { level: lvl, group: s.group, res, tr: trm, weyl })
}
