use super::{table, NormFn, NormMap, TambaraFunctor};
use crate::abgroup::{AbGroup, Elem};
use crate::error::{Error, Result};
use crate::group::GroupCtx;
use crate::mackey::{burnside, from_abelian_group};
use crate::matrix::{unit_vec, Int, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use std::sync::Arc;

/// Table of marks at level `k`: row j is the number of C_{p^j}-fixed points,
/// column i the orbit C_{p^k}/C_{p^i}.
pub fn marks(p: u64, k: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(k + 1, k + 1);
    for i in 0..=k {
        for j in 0..=i {
            m[(j, i)] = Int::from(p).pow(k - i);
        }
    }
    m
}

/// Invert the (upper triangular) table of marks.
fn from_marks(p: u64, k: usize, phi: &[Int]) -> Result<Elem> {
    let m = marks(p, k);
    let mut y = vec![Int::zero(); k + 1];
    for j in (0..=k).rev() {
        let mut r = phi[j].clone();
        for i in j + 1..=k {
            r -= &m[(j, i)] * &y[i];
        }
        let (q, rem) = r.div_rem(&m[(j, j)]);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!("mark vector {phi:?} is not realised at level {k}")));
        }
        y[j] = q;
    }
    Ok(y)
}

/// Norm from level `h` to `h+1`: a C_{p^h}-set X goes to maps from
/// C_{p^{h+1}}/C_{p^h} into X, whose C_{p^j}-fixed points number
/// |X^{C_{p^j}}|^p for j ≤ h and |X^{C_{p^h}}| for j = h+1.
fn burnside_norm(p: u64, h: usize, x: &[Int]) -> Result<Elem> {
    let phi = marks(p, h).mul_vec(x);
    let mut out: Vec<Int> = phi.iter().map(|v| v.pow(p as u32)).collect();
    out.push(phi[h].clone());
    from_marks(p, h + 1, &out)
}

/// The Burnside ring functor with products of orbits and norms as
/// dependent products.
pub fn burnside_tambara(ctx: GroupCtx) -> TambaraFunctor {
    let n = ctx.n() as usize;
    let p = ctx.p();
    let mackey = burnside(ctx);
    let mult = (0..=n)
        .map(|h| {
            table(h + 1, |i, j| {
                let mut v = unit_vec(h + 1, i.min(j));
                v[i.min(j)] = Int::from(p).pow(h - i.max(j));
                v
            })
        })
        .collect();
    let unit = (0..=n).map(|h| unit_vec(h + 1, h)).collect();
    let norms = (0..n)
        .map(|h| {
            let f: NormFn = Arc::new(move |x: &[Int]| burnside_norm(p, h, x));
            NormMap::Eval(f)
        })
        .collect();
    TambaraFunctor::new(mackey, mult, unit, norms).unwrap()
}

/// The ring Z/m (m = 0 for Z) over the trivial group.
pub fn ring_mod(p: u64, m: u64) -> Result<TambaraFunctor> {
    let g = if m == 0 { AbGroup::free(1) } else { AbGroup::cyclic(m) };
    let mackey = from_abelian_group(p, &g)?;
    let one = g.reduce(&[Int::one()]);
    TambaraFunctor::new(mackey, vec![vec![vec![one.clone()]]], vec![one], vec![])
}

pub fn ring_z(p: u64) -> Result<TambaraFunctor> {
    ring_mod(p, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::{decompose, dependent_product, GSet, GSetMap, DEFAULT_ENUM_CAP};
    use crate::matrix::int;
    use crate::tambara::{verify_tambara, VerifyOptions};
    use std::collections::BTreeMap;

    #[test]
    fn c2_norm_of_integers() {
        let t = burnside_tambara(GroupCtx::new(2, 1).unwrap());
        // level 1 basis (t, 1): nm(n) = n·1 + ((n² − n)/2)·t
        for n in -4i64..=4 {
            assert_eq!(t.nm(0, &[int(n)]).unwrap(), vec![int((n * n - n) / 2), int(n)]);
        }
    }

    #[test]
    fn verifies() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
            let t = burnside_tambara(GroupCtx::new(p, n).unwrap());
            let rep = verify_tambara(&t, &VerifyOptions::default());
            assert!(rep.passed(), "C_{p}^{n}: {rep}");
        }
    }

    /// Π along C_{p^{h+1}}/C_{p^h} → * of the set with `counts[i]` copies of each orbit C_{p^{h+1}}/C_{p^i}.
    fn pi_oracle(p: u64, h: usize, counts: &[usize]) -> Vec<usize> {
        let ctx = GroupCtx::new(p, h as u32 + 1).unwrap();
        let x = GSet::orbit(ctx, h).unwrap();
        let y = GSet::new(ctx, vec![h + 1]).unwrap();
        let f = GSetMap::new(&x, &y, x.points().into_iter().map(|pt| (pt, (0, 0))).collect()).unwrap();
        let mut orbits = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            orbits.extend(std::iter::repeat(i).take(c));
        }
        let a = GSet::new(ctx, orbits).unwrap();
        // A over X: the induced set G ×_H (H/C_{p^i}) projects onto G/H
        let mut images = BTreeMap::new();
        for pt in a.points() {
            images.insert(pt, (0, pt.1 % x.orbit_size(0)));
        }
        let proj = GSetMap::new(&a, &x, images).unwrap();
        let mut out = vec![0; h + 2];
        for l in decompose(&dependent_product(&f, &proj, DEFAULT_ENUM_CAP).unwrap().gset) {
            out[l] += 1;
        }
        out
    }

    #[test]
    fn norms_match_dependent_products() {
        for (p, h, counts) in [(2, 0, vec![2]), (2, 0, vec![3]), (2, 1, vec![1, 1]), (2, 1, vec![0, 2]), (3, 0, vec![2]), (2, 2, vec![1, 0, 1])] {
            let t = burnside_tambara(GroupCtx::new(p, h as u32 + 1).unwrap());
            let x: Vec<Int> = counts.iter().map(|&c| int(c as i64)).collect();
            let got = t.nm(h, &x).unwrap();
            let want: Vec<Int> = pi_oracle(p, h, &counts).into_iter().map(|c| int(c as i64)).collect();
            assert_eq!(got, want, "p={p} h={h} {counts:?}");
        }
    }
}
