//! Universal reciprocity formulas for norms of sums and of transfers, read
//! off from orbit decompositions of equivariant map spaces.

use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use crate::gset::{map_space, Target, DEFAULT_ENUM_CAP};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A,
    B,
    X,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::A => "a",
            Var::B => "b",
            Var::X => "x",
        })
    }
}

/// A product of Weyl conjugates `γ^t v`, listed by increasing exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalMonomial {
    pub entries: Vec<(usize, Var)>,
    /// Level at which the monomial lives (K' for sum terms, H or H' otherwise).
    pub level: usize,
    pub home: usize,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for FormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(t, v)| match t {
                0 => format!("{v}"),
                1 => format!("γ{v}"),
                _ => format!("γ{}{v}", superscript(*t)),
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

fn fmt_sum(monos: &[FormalMonomial]) -> String {
    if monos.is_empty() {
        "0".into()
    } else {
        monos.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" + ")
    }
}

/// Data for N(a+b) = N(a) + N(b) + Σ tr(N(…)) + tr(g(a,b)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumReciprocity {
    pub ctx: GroupCtx,
    pub k: usize,
    pub h: usize,
    /// For each intermediate level K' (ascending), its monomials; `i_{K'}` is the count.
    pub intermediate: Vec<(usize, Vec<FormalMonomial>)>,
    pub g: Vec<FormalMonomial>,
}

impl SumReciprocity {
    pub fn multiplicity(&self, level: usize) -> usize {
        self.intermediate.iter().find(|(l, _)| *l == level).map_or(0, |(_, m)| m.len())
    }
}

/// Data for N(tr(x)) = tr(f(x)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReciprocity {
    pub ctx: GroupCtx,
    pub k: usize,
    pub h: usize,
    pub h_prime: usize,
    pub f: Vec<FormalMonomial>,
}

impl TransferReciprocity {
    pub fn r(&self) -> usize {
        self.f.len()
    }
}

fn order_name(ctx: &GroupCtx, l: usize) -> String {
    let o = ctx.pow(l);
    if o == 1 {
        "e".into()
    } else {
        format!("C_{o}")
    }
}

impl fmt::Display for SumReciprocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = order_name(&self.ctx, self.k);
        let h = order_name(&self.ctx, self.h);
        write!(f, "N_{h}^{k}(a+b) = N(a) + N(b)")?;
        for (l, monos) in &self.intermediate {
            let kp = order_name(&self.ctx, *l);
            for m in monos {
                write!(f, " + tr_{kp}^{k}(N_{h}^{kp}({m}))")?;
            }
        }
        write!(f, " + tr_{h}^{k}(g)\n  i: ")?;
        let counts: Vec<String> = self
            .intermediate
            .iter()
            .map(|(l, m)| format!("i_{} = {}", order_name(&self.ctx, *l), m.len()))
            .collect();
        write!(f, "{}", if counts.is_empty() { "none".into() } else { counts.join(", ") })?;
        write!(f, "\n  g_{h}(a,b) = {}", fmt_sum(&self.g))?;
        write!(f, "\n  |g| = {}", self.g.len())
    }
}

impl fmt::Display for TransferReciprocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = order_name(&self.ctx, self.k);
        let h = order_name(&self.ctx, self.h);
        let hp = order_name(&self.ctx, self.h_prime);
        write!(f, "N_{h}^{k}(tr_{hp}^{h}(x)) = tr_{hp}^{k}(f(x))")?;
        write!(f, "\n  f(x) = {}", fmt_sum(&self.f))?;
        write!(f, "\n  r = {}", self.r())
    }
}

fn check_chain(ctx: &GroupCtx, lower: usize, upper: usize) -> Result<()> {
    ctx.check(Level(upper))?;
    if lower >= upper {
        return Err(Error::NotSubgroup { lower, upper });
    }
    Ok(())
}

/// Read off the sum formula for the norm from level `h` to level `k`.
pub fn derive_sum_reciprocity(ctx: &GroupCtx, k: usize, h: usize) -> Result<SumReciprocity> {
    check_chain(ctx, h, k)?;
    let kctx = ctx.subgroup_ctx(Level(k))?;
    let d = map_space(&kctx, Level(h), Target::Points(2), DEFAULT_ENUM_CAP)?;
    let var = |v: usize| if v == 0 { Var::A } else { Var::B };
    let mut intermediate: Vec<(usize, Vec<FormalMonomial>)> = (h + 1..k).map(|l| (l, vec![])).collect();
    let mut g = Vec::new();
    for o in &d.orbits {
        if o.stabilizer == k {
            continue;
        }
        let len = kctx.index(Level(o.stabilizer));
        let entries = (0..len).map(|t| (t, var(o.representative[t]))).collect();
        let mono = FormalMonomial { entries, level: o.stabilizer, home: h };
        if o.stabilizer == h {
            g.push(mono);
        } else {
            intermediate[o.stabilizer - h - 1].1.push(mono);
        }
    }
    Ok(SumReciprocity { ctx: *ctx, k, h, intermediate, g })
}

/// Read off the formula for the norm from level `h` to level `k` of a
/// transfer from level `h'`.
pub fn derive_transfer_reciprocity(ctx: &GroupCtx, k: usize, h: usize, h_prime: usize) -> Result<TransferReciprocity> {
    check_chain(ctx, h, k)?;
    if h_prime >= h {
        return Err(Error::NotSubgroup { lower: h_prime, upper: h });
    }
    let kctx = ctx.subgroup_ctx(Level(k))?;
    let d = map_space(&kctx, Level(h), Target::Coset(h_prime), DEFAULT_ENUM_CAP)?;
    let slots = kctx.index(Level(h));
    let period = kctx.index(Level(h_prime));
    let mut f = Vec::new();
    for o in &d.orbits {
        let mut entries: Vec<(usize, Var)> = o
            .representative
            .iter()
            .enumerate()
            .map(|(i, &u)| ((i + period - (slots * u) % period) % period, Var::X))
            .collect();
        entries.sort();
        f.push(FormalMonomial { entries, level: h_prime, home: h });
    }
    Ok(TransferReciprocity { ctx: *ctx, k, h, h_prime, f })
}

/// For a transfer monomial, pairs `(i, e)`: slot `i < |K/H|` receives
/// `x` acted on by the e-th power of the generator of H.
pub fn transfer_slots(ctx: &GroupCtx, t: &TransferReciprocity, mono: &FormalMonomial) -> Vec<(usize, usize)> {
    let slots = ctx.weyl_order(Level(t.k), Level(t.h)).unwrap();
    let sub = ctx.weyl_order(Level(t.h), Level(t.h_prime)).unwrap();
    let mut out: Vec<(usize, usize)> = mono
        .entries
        .iter()
        .map(|(e, _)| {
            let i = e % slots;
            // e ≡ i − slots·u (mod slots·sub)
            let u = ((i + slots * sub - e) / slots) % sub;
            (i, (sub - u) % sub)
        })
        .collect();
    out.sort();
    out
}

/// Place a monomial into a tuple indexed by `q·len` slots: the entry `γ^e v`
/// lands in slot `j + q·e`, all other slots copy `base[t mod q]`.
pub fn evaluate_monomial<T: Clone>(
    mono: &FormalMonomial,
    q: usize,
    len: usize,
    j: usize,
    base: &[T],
    subst: &dyn Fn(Var) -> T,
) -> Result<Vec<T>> {
    assert_eq!(base.len(), q);
    let mut out: Vec<Option<T>> = vec![None; q * len];
    for (e, v) in &mono.entries {
        let slot = j + q * e;
        if slot >= out.len() || out[slot].is_some() {
            return Err(Error::SlotCollision(format!("{mono} at slot {slot}")));
        }
        out[slot] = Some(subst(*v));
    }
    Ok(out.into_iter().enumerate().map(|(t, x)| x.unwrap_or_else(|| base[t % q].clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: u32) -> GroupCtx {
        GroupCtx::new(p, n).unwrap()
    }

    #[test]
    fn c2_sum() {
        let s = derive_sum_reciprocity(&ctx(2, 1), 1, 0).unwrap();
        assert!(s.intermediate.is_empty());
        assert_eq!(s.g.len(), 1);
        assert_eq!(s.g[0].to_string(), "a·γb");
    }

    #[test]
    fn c4_sum() {
        let s = derive_sum_reciprocity(&ctx(2, 2), 2, 0).unwrap();
        assert_eq!(s.multiplicity(1), 1);
        assert_eq!(s.intermediate[0].1[0].to_string(), "a·γb");
        let g: Vec<String> = s.g.iter().map(|m| m.to_string()).collect();
        assert_eq!(g, vec!["a·γa·γ²a·γ³b", "a·γa·γ²b·γ³b", "a·γb·γ²b·γ³b"]);
    }

    #[test]
    fn c8_sum_counts() {
        let s = derive_sum_reciprocity(&ctx(2, 3), 3, 0).unwrap();
        assert_eq!((s.multiplicity(2), s.multiplicity(1), s.g.len()), (1, 3, 30));
        for (l, monos) in &s.intermediate {
            for m in monos {
                assert_eq!(m.entries.len(), 1 << (3 - l));
            }
        }
    }

    #[test]
    fn transfer_formulas() {
        let t = derive_transfer_reciprocity(&ctx(2, 2), 2, 1, 0).unwrap();
        assert_eq!(t.r(), 1);
        assert_eq!(t.f[0].to_string(), "x·γx");
        let t = derive_transfer_reciprocity(&ctx(2, 3), 3, 1, 0).unwrap();
        assert_eq!(t.r(), 2);
        assert!(t.f.iter().all(|m| m.entries.len() == 4));
        assert_eq!(derive_transfer_reciprocity(&ctx(2, 3), 3, 2, 0).unwrap().r(), 2);
    }

    #[test]
    fn transfer_slots_round_trip() {
        let c = ctx(2, 3);
        let t = derive_transfer_reciprocity(&c, 3, 1, 0).unwrap();
        for m in &t.f {
            let slots = transfer_slots(&c, &t, m);
            assert_eq!(slots.iter().map(|s| s.0).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn placement() {
        let s = derive_sum_reciprocity(&ctx(2, 1), 1, 0).unwrap();
        let placed = evaluate_monomial(&s.g[0], 1, 2, 0, &["m"], &|v| if v == Var::A { "α" } else { "β" }).unwrap();
        assert_eq!(placed, vec!["α", "β"]);
        let one = FormalMonomial { entries: vec![(0, Var::A)], level: 1, home: 0 };
        assert_eq!(evaluate_monomial(&one, 2, 1, 1, &["m0", "m1"], &|_| "a").unwrap(), vec!["m0", "a"]);
        let bad = FormalMonomial { entries: vec![(0, Var::A), (0, Var::B)], level: 0, home: 0 };
        assert!(evaluate_monomial(&bad, 1, 2, 0, &["m"], &|_| "x").is_err());
    }
}
