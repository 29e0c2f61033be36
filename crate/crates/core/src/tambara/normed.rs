//! The Tambara structure on N_H^G S for an H-Tambara functor S: products
//! slotwise, norms of tuples by multiplying slots together, and the
//! reciprocity formulas for sums and transfers.

use super::{NormFn, NormMap, TambaraFunctor};
use crate::abgroup::Elem;
use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use crate::matrix::{is_zero_vec, unit_vec, vec_add, vec_neg, vec_scale, zero_vec, Int};
use crate::norm::checks::Pairing;
use crate::norm::{norm, Norm, NormOptions};
use crate::reciprocity::{derive_sum_reciprocity, derive_transfer_reciprocity, FormalMonomial};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub struct NormTambara {
    pub norm: Arc<Norm>,
    pub tambara: TambaraFunctor,
}

struct Evaluator {
    norm: Arc<Norm>,
    /// The input in the norm's coordinates.
    s: TambaraFunctor,
    /// Ring structure of the output; its norm list is empty.
    ring: TambaraFunctor,
    g: Vec<Vec<FormalMonomial>>,
    f: Vec<Vec<FormalMonomial>>,
    memo: Mutex<HashMap<(usize, Elem), Elem>>,
}

impl Evaluator {
    fn ctx(&self) -> &GroupCtx {
        &self.norm.ctx
    }

    fn out(&self) -> &crate::mackey::MackeyFunctor {
        &self.norm.functor
    }

    /// The class of the raw tuple generator at level `j`.
    fn tuple_class(&self, j: usize, tuple: &[Elem]) -> Result<Elem> {
        if j > self.norm.h {
            self.norm.norm_element(j, tuple)
        } else {
            Ok(self.norm.tensor_element(j, tuple))
        }
    }

    /// N(a+b) − N(a) − N(b) for the adjacent norm from level `j`.
    fn cross(&self, j: usize, a: &[Int], b: &[Int]) -> Elem {
        let mut acc = zero_vec(self.out().levels[j].gens());
        for m in &self.g[j] {
            acc = vec_add(&acc, &self.ring.eval_monomial(m, j, j + 1, a, b));
        }
        self.out().tr(j, j + 1, &acc)
    }

    fn fold(&self, j: usize, acc: Option<(Elem, Elem)>, x: Elem, nx: Elem) -> (Elem, Elem) {
        match acc {
            None => (x, nx),
            Some((a, na)) => {
                let c = self.cross(j, &a, &x);
                let v = self.out().levels[j + 1].reduce(&vec_add(&vec_add(&na, &nx), &c));
                (self.out().levels[j].reduce(&vec_add(&a, &x)), v)
            }
        }
    }

    /// N(c·x) from N(x).
    fn multiple(&self, j: usize, c: &Int, x: &Elem, nx: &Elem) -> Result<Elem> {
        let times = c.abs().to_usize().ok_or_else(|| Error::Invalid("coefficient too large to expand".into()))?;
        let mut acc = None;
        for _ in 0..times {
            acc = Some(self.fold(j, acc, x.clone(), nx.clone()));
        }
        let (pos, npos) = acc.expect("nonzero multiple");
        if c.is_positive() {
            return Ok(npos);
        }
        // 0 = N(y + (−y)) = N(y) + N(−y) + cross(y, −y)
        let c = self.cross(j, &pos, &vec_neg(&pos));
        Ok(self.out().levels[j + 1].reduce(&vec_neg(&vec_add(&npos, &c))))
    }

    /// Norm of a raw tuple generator: slots are multiplied together in
    /// groups of p at and above H, and normed one by one below.
    fn basic_tuple(&self, j: usize, tuple: &[Elem]) -> Result<Elem> {
        let h = self.norm.h;
        if j < h {
            let normed = tuple.iter().map(|s| self.s.nm(j, s)).collect::<Result<Vec<_>>>()?;
            return Ok(self.norm.tensor_element(j + 1, &normed));
        }
        let q = self.ctx().index(Level(j + 1));
        let p = self.ctx().p() as usize;
        let folded: Vec<Elem> =
            (0..q).map(|i| self.s.product(h, &(0..p).map(|e| tuple[i + q * e].clone()).collect::<Vec<_>>())).collect();
        self.norm.norm_element(j + 1, &folded)
    }

    fn basic_transfer(&self, j: usize, y: &[Int]) -> Elem {
        let mut acc = zero_vec(self.out().levels[j - 1].gens());
        for m in &self.f[j] {
            acc = vec_add(&acc, &self.ring.eval_monomial(m, j - 1, j + 1, y, y));
        }
        self.out().tr(j - 1, j + 1, &acc)
    }

    fn nm(&self, j: usize, x: &[Int]) -> Result<Elem> {
        let out = self.out();
        let x = out.levels[j].reduce(x);
        if is_zero_vec(&x) {
            return Ok(out.levels[j + 1].zero_elem());
        }
        if let Some(v) = self.memo.lock().unwrap().get(&(j, x.clone())) {
            return Ok(v.clone());
        }
        let raw = self.norm.raw_lift(j).mul_vec(&x);
        let tuples = self.norm.raw_tuples(j);
        let mut acc = None;
        for (t, c) in tuples.iter().zip(&raw) {
            if c.is_zero() {
                continue;
            }
            let b = self.tuple_class(j, t)?;
            let nb = self.basic_tuple(j, t)?;
            let v = if c.is_one() { nb } else { self.multiple(j, c, &b, &nb)? };
            acc = Some(self.fold(j, acc, out.levels[j].reduce(&vec_scale(c, &b)), v));
        }
        let lower = &raw[tuples.len()..];
        if !is_zero_vec(lower) {
            let b = out.tr(j - 1, j, lower);
            acc = Some(self.fold(j, acc, b, self.basic_transfer(j, lower)));
        }
        let v = acc.map_or_else(|| out.levels[j + 1].zero_elem(), |(_, v)| v);
        self.memo.lock().unwrap().insert((j, x), v.clone());
        Ok(v)
    }
}

/// N_H^G S with its Tambara structure; `s` is an H-Tambara functor.
pub fn norm_tambara(ctx: &GroupCtx, h: usize, s: &TambaraFunctor, opts: &NormOptions) -> Result<NormTambara> {
    let nm = Arc::new(norm(ctx, h, &s.mackey, opts)?);
    let s = s.transport(&nm.input, &nm.to_input, &nm.from_input);
    let out = &nm.functor;
    let n = ctx.n() as usize;
    let base = |j: usize, t: &[Elem], u: &[Elem]| -> Result<Elem> {
        let level = j.min(h);
        let word: Vec<Elem> = t.iter().zip(u).map(|(a, b)| s.mul(level, a, b)).collect();
        if j > h {
            nm.norm_element(j, &word)
        } else {
            Ok(nm.tensor_element(j, &word))
        }
    };
    let pairing = Pairing { left: &nm, right: &nm, out, base: &base };
    let mut mult = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let g = out.levels[j].gens();
        let mut rows = Vec::with_capacity(g);
        for a in 0..g {
            rows.push((0..g).map(|b| pairing.pair(j, &unit_vec(g, a), &unit_vec(g, b))).collect::<Result<Vec<_>>>()?);
        }
        mult.push(rows);
    }
    let unit = (0..=n)
        .map(|j| {
            let ones = vec![s.one(j.min(h)); ctx.index(Level(j.max(h)))];
            if j > h {
                nm.norm_element(j, &ones)
            } else {
                Ok(nm.tensor_element(j, &ones))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let ring = TambaraFunctor { mackey: out.clone(), mult: mult.clone(), unit: unit.clone(), norms: vec![] };
    let mut g = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for j in 0..n {
        g.push(derive_sum_reciprocity(ctx, j + 1, j)?.g);
        f.push(if j > 0 { derive_transfer_reciprocity(ctx, j + 1, j, j - 1)?.f } else { vec![] });
    }
    let ev = Arc::new(Evaluator { norm: nm.clone(), s, ring, g, f, memo: Mutex::new(HashMap::new()) });
    let norms = (0..n)
        .map(|j| {
            let ev = ev.clone();
            let f: NormFn = Arc::new(move |x: &[Int]| ev.nm(j, x));
            NormMap::Eval(f)
        })
        .collect();
    let tambara = TambaraFunctor::new(out.clone(), mult, unit, norms)?;
    Ok(NormTambara { norm: nm, tambara })
}
