//! The norm N^G_H M of an H-Mackey functor: box powers below H, and above H
//! free abelian groups on norm symbols N(m_0, …, m_{q−1}) plus transfers,
//! modulo the reciprocity relations.

mod level;
pub mod checks;

use crate::abgroup::{AbGroup, Elem};
use crate::boxprod::MultiBox;
use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use crate::mackey::{MackeyFunctor, MackeyMorphism};
use crate::matrix::Int;
use crate::reciprocity::{derive_sum_reciprocity, derive_transfer_reciprocity, SumReciprocity, TransferReciprocity};
pub use level::UpperLevel;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    BruteForce,
    Rewrite,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::BruteForce => "brute",
            Strategy::Rewrite => "rewrite",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "brute" | "brute-force" | "bruteforce" => Ok(Strategy::BruteForce),
            "rewrite" => Ok(Strategy::Rewrite),
            _ => Err(Error::Invalid(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NormOptions {
    pub strategy: Strategy,
    /// Largest M(H/H) for which the brute-force strategy is used.
    pub element_cap: usize,
    /// Largest number of tuple generators at one level in brute-force mode.
    pub tuple_cap: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { strategy: Strategy::Auto, element_cap: 64, tuple_cap: 4096 }
    }
}

impl NormOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        NormOptions { strategy, ..Self::default() }
    }
}

/// A computed norm with the data needed to evaluate norm symbols.
#[derive(Debug)]
pub struct Norm {
    pub ctx: GroupCtx,
    pub h: usize,
    /// The input in diagonal form; norm symbols use its coordinates.
    pub input: MackeyFunctor,
    /// From the caller's input to `input`, and back.
    pub to_input: MackeyMorphism,
    pub from_input: MackeyMorphism,
    pub lower: MultiBox,
    pub upper: Vec<UpperLevel>,
    pub functor: MackeyFunctor,
    sum_recip: Vec<SumReciprocity>,
    transfer_recip: Vec<Vec<TransferReciprocity>>,
}

impl Norm {
    /// |G/H|
    pub fn copies(&self) -> usize {
        self.ctx.index(Level(self.h))
    }

    pub fn top_input(&self) -> &AbGroup {
        &self.input.levels[self.h]
    }

    /// The strategy actually used at each level above H.
    pub fn strategies(&self) -> Vec<Strategy> {
        self.upper.iter().map(|u| u.strategy()).collect()
    }

    fn upper_level(&self, l: usize) -> &UpperLevel {
        &self.upper[l - self.h - 1]
    }

    /// The class of N(m_0, …, m_{q−1}) at level `l > h`, with `m_i` in the
    /// coordinates of `input`'s top level.
    pub fn norm_element(&self, l: usize, tuple: &[Elem]) -> Result<Elem> {
        if l <= self.h || l > self.ctx.n() as usize {
            return Err(Error::BadLevel(l));
        }
        if tuple.len() != self.ctx.index(Level(l)) {
            return Err(Error::Shape(format!("norm symbol at level {l} needs {} entries", self.ctx.index(Level(l)))));
        }
        let u = self.upper_level(l);
        let raw = u.raw_norm(self, tuple)?;
        Ok(self.functor.levels[l].reduce(&u.proj().mul_vec(&raw)))
    }

    /// m ↦ N(m) at the top level, for `m` in the caller's coordinates of level H.
    pub fn generator_norm(&self, m: &[Int]) -> Result<Elem> {
        let n = self.ctx.n() as usize;
        let x = self.to_input.apply(&self.input, self.h, m);
        if self.h == n {
            Ok(self.tensor_element(n, &[x]))
        } else {
            self.norm_element(n, &[x])
        }
    }

    /// Pure tensor m_0 ⊗ … ⊗ m_{k−1} at a level `j ≤ h`.
    pub fn tensor_element(&self, j: usize, tuple: &[Elem]) -> Elem {
        let refs: Vec<&[Int]> = tuple.iter().map(|e| e.as_slice()).collect();
        self.lower.pure_tensor(j, &refs)
    }

    /// Composite transfer from level `from` to level `to`.
    pub(crate) fn tr_up(&self, from: usize, to: usize, x: &[Int]) -> Elem {
        let mut v = x.to_vec();
        for j in from..to {
            v = self.functor.tr[j].mul_vec(&v);
        }
        self.functor.levels[to].reduce(&v)
    }

    pub fn sum_reciprocity(&self, l: usize) -> &SumReciprocity {
        &self.sum_recip[l - self.h - 1]
    }

    pub fn transfer_reciprocity(&self, l: usize, h_prime: usize) -> &TransferReciprocity {
        &self.transfer_recip[l - self.h - 1][h_prime]
    }

    /// Tuples carried by the raw generators of level `j`: tensor words of
    /// input generators for `j ≤ h`, norm symbols above.
    pub fn raw_tuples(&self, j: usize) -> Vec<Vec<Elem>> {
        if j > self.h {
            return self.upper_level(j).tuples().to_vec();
        }
        let dims = self.lower.tensor_dims(j);
        let count: usize = dims.iter().product();
        (0..count)
            .map(|g| {
                let idx = crate::abgroup::tensor_multi_index(dims, g);
                idx.iter().zip(dims).map(|(&i, &d)| crate::matrix::unit_vec(d, i)).collect()
            })
            .collect()
    }

    /// Level coordinates → raw coordinates (tuples, then the level below).
    pub fn raw_lift(&self, j: usize) -> &crate::matrix::IntMatrix {
        if j > self.h {
            self.upper_level(j).lift()
        } else {
            self.lower.raw_lift(j)
        }
    }

    /// Lower levels' G-action: cyclic shift of tensor slots, with the
    /// generator of H applied to the factor that wraps around.
    fn lower_weyl(lower: &MultiBox, input: &MackeyFunctor) -> MackeyMorphism {
        let k = lower.arity();
        let perm: Vec<usize> = (0..k).map(|i| (i + k - 1) % k).collect();
        let mut maps = vec![MackeyMorphism::identity(input); k];
        maps[0] = MackeyMorphism { maps: input.weyl.clone() };
        lower.induced_map(lower, &perm, &maps)
    }
}

/// Build N^G_H M for M a Mackey functor over the subgroup at level `h`.
pub fn norm(ctx: &GroupCtx, h: usize, m: &MackeyFunctor, opts: &NormOptions) -> Result<Norm> {
    ctx.check(Level(h))?;
    let hctx = ctx.subgroup_ctx(Level(h))?;
    if m.ctx != hctx {
        return Err(Error::ContextMismatch);
    }
    let (input, to_input, from_input) = m.simplified();
    let n = ctx.n() as usize;
    let k = ctx.index(Level(h));
    let lower = MultiBox::new(vec![input.clone(); k])?;
    let lw = Norm::lower_weyl(&lower, &input);
    let b = &lower.functor;
    let mut functor = MackeyFunctor {
        ctx: *ctx,
        levels: b.levels.clone(),
        res: b.res.clone(),
        tr: b.tr.clone(),
        weyl: lw.maps,
        ambient: None,
    };
    let mut sum_recip = Vec::new();
    let mut transfer_recip = Vec::new();
    for l in h + 1..=n {
        sum_recip.push(derive_sum_reciprocity(ctx, l, h)?);
        transfer_recip.push((0..h).map(|hp| derive_transfer_reciprocity(ctx, l, h, hp)).collect::<Result<Vec<_>>>()?);
    }
    let mut out = Norm { ctx: *ctx, h, input, to_input, from_input, lower, upper: Vec::new(), functor: functor.clone(), sum_recip, transfer_recip };
    for l in h + 1..=n {
        let built = level::build_level(&out, l, opts)?;
        functor.levels.push(built.group.clone());
        functor.tr.push(built.tr.clone());
        functor.res.push(built.res.clone());
        functor.weyl.push(built.weyl.clone());
        out.functor = functor.clone();
        out.upper.push(built.level);
    }
    out.functor = MackeyFunctor::new(*ctx, functor.levels, functor.res, functor.tr, functor.weyl)?;
    Ok(out)
}

/// Convenience wrapper returning only the functor.
pub fn norm_functor(ctx: &GroupCtx, h: usize, m: &MackeyFunctor, opts: &NormOptions) -> Result<MackeyFunctor> {
    Ok(norm(ctx, h, m, opts)?.functor)
}

/// `tuple` repeated `times` times.
pub(crate) fn repeat_tuple(tuple: &[Elem], times: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(tuple.len() * times);
    for _ in 0..times {
        out.extend(tuple.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::{from_abelian_group, verify_mackey};
    use crate::matrix::int;

    fn e_functor(a: AbGroup) -> MackeyFunctor {
        from_abelian_group(2, &a).unwrap()
    }

    #[test]
    fn c2_norm_of_z2() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        for s in [Strategy::BruteForce, Strategy::Rewrite] {
            let n = norm(&ctx, 0, &e_functor(AbGroup::cyclic(2)), &NormOptions::with_strategy(s)).unwrap();
            assert!(verify_mackey(&n.functor).passed(), "{s}");
            assert!(n.functor.levels[1].is_isomorphic(&AbGroup::cyclic(4)), "{s}: {}", n.functor.levels[1]);
            let n1 = n.norm_element(1, &[vec![int(1)]]).unwrap();
            assert_eq!(n.functor.res(1, 0, &n1), vec![int(1)]);
        }
    }

    #[test]
    fn c2_norm_of_z3_and_z() {
        let ctx = GroupCtx::new(2, 1).unwrap();
        let n = norm(&ctx, 0, &e_functor(AbGroup::cyclic(3)), &NormOptions::default()).unwrap();
        assert!(n.functor.levels[1].is_isomorphic(&AbGroup::from_divisors(&[int(3), int(3)])));
        let z = norm(&ctx, 0, &e_functor(AbGroup::free(1)), &NormOptions::default()).unwrap();
        assert_eq!(z.strategies(), vec![Strategy::Rewrite]);
        assert!(z.functor.levels[1].is_isomorphic(&AbGroup::free(2)));
        assert!(verify_mackey(&z.functor).passed());
    }
}
