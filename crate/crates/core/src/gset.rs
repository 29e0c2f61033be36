//! Finite G-sets for G = C_{p^n}, equivariant map spaces and dependent
//! products.
//!
//! An orbit of type G/C_{p^h} has elements labelled by coset exponents
//! `0..p^{n-h}`, and γ acts by adding one.

use crate::error::{Error, Result};
use crate::group::{GroupCtx, Level};
use std::collections::BTreeMap;

pub const DEFAULT_ENUM_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    pub ctx: GroupCtx,
    /// Stabilizer level of each orbit.
    pub orbits: Vec<usize>,
}

/// Element of a G-set: (orbit index, coset exponent).
pub type Point = (usize, usize);

impl GSet {
    pub fn new(ctx: GroupCtx, orbits: Vec<usize>) -> Result<Self> {
        for &h in &orbits {
            ctx.check(Level(h))?;
        }
        Ok(GSet { ctx, orbits })
    }

    pub fn empty(ctx: GroupCtx) -> Self {
        GSet { ctx, orbits: vec![] }
    }

    /// The orbit G/C_{p^h}.
    pub fn orbit(ctx: GroupCtx, h: usize) -> Result<Self> {
        Self::new(ctx, vec![h])
    }

    pub fn orbit_size(&self, i: usize) -> usize {
        self.ctx.index(Level(self.orbits[i]))
    }

    pub fn len(&self) -> usize {
        (0..self.orbits.len()).map(|i| self.orbit_size(i)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.orbits.len()).flat_map(|i| (0..self.orbit_size(i)).map(move |c| (i, c))).collect()
    }

    /// γ^e · x
    pub fn act(&self, x: Point, e: usize) -> Point {
        (x.0, (x.1 + e) % self.orbit_size(x.0))
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        let mut orbits = self.orbits.clone();
        orbits.extend(&other.orbits);
        GSet { ctx: self.ctx, orbits }
    }
}

/// Orbit-type multiset in canonical (ascending) order.
pub fn decompose(x: &GSet) -> Vec<usize> {
    let mut v = x.orbits.clone();
    v.sort_unstable();
    v
}

/// Orbits of the cyclic action generated by a permutation `perm` of `0..len`,
/// as (minimal element, orbit size) pairs in order of minimal element.
pub fn permutation_orbits(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut x = start;
        let mut size = 0;
        while !seen[x] {
            seen[x] = true;
            size += 1;
            x = perm[x];
        }
        out.push((start, size));
    }
    out
}

fn stabilizer_from_size(ctx: &GroupCtx, size: usize) -> Result<usize> {
    let order = ctx.order();
    if size == 0 || !order.is_multiple_of(size) {
        return Err(Error::Consistency(format!("orbit of size {size} in a group of order {order}")));
    }
    let mut h = 0;
    let mut s = order / size;
    while s > 1 {
        s /= ctx.p() as usize;
        h += 1;
    }
    Ok(h)
}

/// G-set given explicitly by the permutation γ on a finite set.
pub fn gset_of_permutation(ctx: GroupCtx, perm: &[usize]) -> Result<GSet> {
    let orbits = permutation_orbits(perm)
        .into_iter()
        .map(|(_, size)| stabilizer_from_size(&ctx, size))
        .collect::<Result<Vec<_>>>()?;
    Ok(GSet { ctx, orbits })
}

/// Product with the diagonal action, orbit-decomposed.
pub fn gset_product(x: &GSet, y: &GSet) -> Result<GSet> {
    if x.ctx != y.ctx {
        return Err(Error::ContextMismatch);
    }
    let px = x.points();
    let py = y.points();
    let index: BTreeMap<(Point, Point), usize> = px
        .iter()
        .flat_map(|a| py.iter().map(move |b| (*a, *b)))
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut perm = vec![0; index.len()];
    for (&(a, b), &i) in &index {
        perm[i] = index[&(x.act(a, 1), y.act(b, 1))];
    }
    gset_of_permutation(x.ctx, &perm)
}

/// Target of an H-equivariant map space, carrying an action of H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// `k` points with trivial action.
    Points(usize),
    /// The H-set H/H' at level `h'`, on which the generator of H acts by +1.
    Coset(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRep {
    pub stabilizer: usize,
    /// Values on the transversal γ^0, …, γ^{|G/H|−1}.
    pub representative: Vec<usize>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub ctx: GroupCtx,
    pub h: usize,
    pub target: Target,
    pub orbits: Vec<OrbitRep>,
}

impl OrbitDecomposition {
    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn count_with_stabilizer(&self, level: usize) -> usize {
        self.orbits.iter().filter(|o| o.stabilizer == level).count()
    }
}

/// Size of the target as a set, and the modulus of the H-generator action
/// (`None` when H acts trivially).
fn target_shape(ctx: &GroupCtx, h: usize, t: Target) -> Result<(usize, Option<usize>)> {
    match t {
        Target::Points(k) => Ok((k, None)),
        Target::Coset(hp) => {
            if hp > h {
                return Err(Error::NotSubgroup { lower: hp, upper: h });
            }
            Ok((ctx.pow(h - hp), Some(ctx.pow(h - hp))))
        }
    }
}

/// The generator γ acting on a transversal table: `(γ·f)(x) = f(γ⁻¹x)`.
pub fn act_on_table(table: &[usize], modulus: Option<usize>) -> Vec<usize> {
    let q = table.len();
    let mut out = Vec::with_capacity(q);
    let last = table[q - 1];
    out.push(match modulus {
        Some(m) => (last + m - 1) % m,
        None => last,
    });
    out.extend_from_slice(&table[..q - 1]);
    out
}

/// Map_H(G, target) with its G-orbit decomposition.
pub fn map_space(ctx: &GroupCtx, h: Level, target: Target, cap: usize) -> Result<OrbitDecomposition> {
    ctx.check(h)?;
    let q = ctx.index(h);
    let (size, modulus) = target_shape(ctx, h.0, target)?;
    let total = (size as u128).checked_pow(q as u32).filter(|&t| t <= cap as u128).ok_or(Error::CapExceeded(cap))?
        as usize;
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &v| acc * size + v);
    let decode = |mut k: usize| {
        let mut t = vec![0; q];
        for slot in (0..q).rev() {
            t[slot] = k % size;
            k /= size;
        }
        t
    };
    let mut seen = vec![false; total];
    let mut orbits = Vec::new();
    // encoding is lexicographic, so the first unseen code is the orbit's minimum
    for start in 0..total {
        if seen[start] {
            continue;
        }
        let rep = decode(start);
        let mut cur = rep.clone();
        let mut orbit_size = 0;
        loop {
            let k = encode(&cur);
            if seen[k] {
                break;
            }
            seen[k] = true;
            orbit_size += 1;
            cur = act_on_table(&cur, modulus);
        }
        orbits.push(OrbitRep { stabilizer: stabilizer_from_size(ctx, orbit_size)?, representative: rep, size: orbit_size });
    }
    Ok(OrbitDecomposition { ctx: *ctx, h: h.0, target, orbits })
}

/// Equivariant map of G-sets given by the images of all points.
#[derive(Clone, Debug)]
pub struct GSetMap {
    pub source: GSet,
    pub target: GSet,
    pub images: BTreeMap<Point, Point>,
}

impl GSetMap {
    pub fn new(source: &GSet, target: &GSet, images: BTreeMap<Point, Point>) -> Result<Self> {
        for x in source.points() {
            let fx = *images.get(&x).ok_or_else(|| Error::Invalid(format!("no image for {x:?}")))?;
            if images[&source.act(x, 1)] != target.act(fx, 1) {
                return Err(Error::Invalid(format!("map is not equivariant at {x:?}")));
            }
        }
        Ok(GSetMap { source: source.clone(), target: target.clone(), images })
    }

    /// The canonical projection G/C_{p^a} → G/C_{p^b} for a ≤ b, orbit-wise.
    pub fn orbit_projection(ctx: GroupCtx, a: usize, b: usize) -> Result<Self> {
        let s = GSet::orbit(ctx, a)?;
        let t = GSet::orbit(ctx, b)?;
        let m = t.orbit_size(0);
        let images = s.points().into_iter().map(|(o, c)| ((o, c), (0, c % m))).collect();
        Self::new(&s, &t, images)
    }

    pub fn apply(&self, x: Point) -> Point {
        self.images[&x]
    }
}

/// A point of Π_f A: a point `y` of Y with a section over its fibre.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Section {
    pub y: Point,
    pub sigma: Vec<(Point, Point)>,
}

/// The exponential diagram `X ← A`, `X → Y` completed by Π_f A.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub elements: Vec<Section>,
    /// γ as a permutation of `elements`.
    pub action: Vec<usize>,
    pub gset: GSet,
    /// Π_f A → Y
    pub h: Vec<Point>,
    /// Pullback X ×_Y Π_f A as pairs (x, index into `elements`), with e and f'.
    pub pullback: Vec<(Point, usize)>,
    pub e: Vec<Point>,
    pub f_prime: Vec<usize>,
}

pub fn dependent_product(f: &GSetMap, p: &GSetMap, cap: usize) -> Result<DependentProduct> {
    if p.target != f.source {
        return Err(Error::Invalid("p must land in the source of f".into()));
    }
    let ctx = f.source.ctx;
    let mut elements = Vec::new();
    for y in f.target.points() {
        let fibre: Vec<Point> = f.source.points().into_iter().filter(|x| f.apply(*x) == y).collect();
        let choices: Vec<Vec<Point>> =
            fibre.iter().map(|x| p.source.points().into_iter().filter(|a| p.apply(*a) == *x).collect()).collect();
        let mut count: usize = 1;
        for c in &choices {
            count = count.checked_mul(c.len()).filter(|&n| n <= cap).ok_or(Error::CapExceeded(cap))?;
        }
        if elements.len() + count > cap {
            return Err(Error::CapExceeded(cap));
        }
        for k in 0..count {
            let mut rem = k;
            let mut sigma = Vec::with_capacity(fibre.len());
            for (x, c) in fibre.iter().zip(&choices).rev() {
                sigma.push((*x, c[rem % c.len()]));
                rem /= c.len();
            }
            sigma.reverse();
            elements.push(Section { y, sigma });
        }
    }
    let index: BTreeMap<Section, usize> = elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut action = Vec::with_capacity(elements.len());
    for s in &elements {
        let mut sigma: Vec<(Point, Point)> =
            s.sigma.iter().map(|(x, a)| (f.source.act(*x, 1), p.source.act(*a, 1))).collect();
        sigma.sort();
        let moved = Section { y: f.target.act(s.y, 1), sigma };
        action.push(index[&moved]);
    }
    let gset = gset_of_permutation(ctx, &action)?;
    let h = elements.iter().map(|s| s.y).collect();
    let mut pullback = Vec::new();
    let mut e = Vec::new();
    let mut f_prime = Vec::new();
    for (i, s) in elements.iter().enumerate() {
        for (x, a) in &s.sigma {
            pullback.push((*x, i));
            e.push(*a);
            f_prime.push(i);
        }
    }
    Ok(DependentProduct { elements, action, gset, h, pullback, e, f_prime })
}
