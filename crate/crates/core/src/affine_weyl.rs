//! The affine Weyl group `W_p = W ⋉ pZR` under the dot action.
//!
//! Elements are stored as exact affine maps `v ↦ F v + p ν` on ρ-shifted
//! coordinates `v = λ + ρ`, with `F` in the finite Weyl group and `ν ∈ ZR`.
//! The Coxeter generators are the reflections in the walls of the
//! antidominant alcove `C⁻ = {−p < ⟨v, α^∨⟩ < 0 for all α > 0}`:
//! generator `0` is the reflection in `⟨v, α_0^∨⟩ = −p` and generator `i ≥ 1`
//! is the linear reflection in `⟨v, α_i^∨⟩ = 0`.
//!
//! The group and its lengths do not depend on `p`: `ν` is stored unscaled and
//! `p` only enters when an element acts on a weight. Internally the geometry
//! is evaluated at scale `h` on the point `−ρ`, which lies inside `C⁻` there.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::root_system::{RootSystem, Weight};

/// A word in the generators; `0` is the affine generator.
pub type Word = Vec<u8>;

/// Side on which a generator multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An element of `W_p`.
#[derive(Clone, Debug)]
pub struct AffineElement {
    finite: IntMatrix,
    finite_inv: IntMatrix,
    translation: Weight,
}

impl PartialEq for AffineElement {
    fn eq(&self, other: &Self) -> bool {
        self.finite == other.finite && self.translation == other.translation
    }
}

impl Eq for AffineElement {}

impl Hash for AffineElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.finite.hash(state);
        self.translation.hash(state);
    }
}

impl AffineElement {
    /// Finite part `F`, acting on weight coordinates.
    pub fn finite_part(&self) -> &IntMatrix {
        &self.finite
    }

    /// `ν ∈ ZR`; the element translates by `pν`.
    pub fn translation(&self) -> &Weight {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.finite.is_identity()
    }

    /// `v ↦ F v + scale·ν`.
    fn act(&self, v: &[i64], scale: i64) -> Vec<i64> {
        let mut out = self.finite.apply(v);
        for (o, t) in out.iter_mut().zip(self.translation.coords()) {
            *o += scale * t;
        }
        out
    }

    fn act_inverse(&self, v: &[i64], scale: i64) -> Vec<i64> {
        let shifted: Vec<i64> = v
            .iter()
            .zip(self.translation.coords())
            .map(|(a, t)| a - scale * t)
            .collect();
        self.finite_inv.apply(&shifted)
    }
}

/// Result of locating a p-regular weight: `λ = x · λ⁻` with `λ⁻ ∈ C⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcoveLocation {
    pub element: AffineElement,
    pub antidominant_rep: Weight,
    pub length: usize,
    /// Canonical reduced word of `element`.
    pub word: Word,
}

/// The affine Weyl group of a root system.
#[derive(Clone)]
pub struct AffineWeyl {
    rs: Arc<RootSystem>,
    generators: Vec<AffineElement>,
    identity: AffineElement,
}

impl fmt::Debug for AffineWeyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineWeyl({})", self.rs.name())
    }
}

impl AffineWeyl {
    pub fn new(rs: Arc<RootSystem>) -> Self {
        let n = rs.rank();
        let identity = AffineElement {
            finite: IntMatrix::identity(n),
            finite_inv: IntMatrix::identity(n),
            translation: rs.zero(),
        };
        let theta = rs.highest_short_root();
        let s_theta = rs.root_reflection_matrix(theta);
        let mut generators = vec![AffineElement {
            finite: s_theta.clone(),
            finite_inv: s_theta,
            translation: -&theta.weight,
        }];
        for i in 0..n {
            let m = rs.reflection_matrix(i);
            generators.push(AffineElement {
                finite: m.clone(),
                finite_inv: m,
                translation: rs.zero(),
            });
        }
        AffineWeyl {
            rs,
            generators,
            identity,
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// `rank + 1`.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn identity(&self) -> AffineElement {
        self.identity.clone()
    }

    pub fn generator(&self, i: usize) -> Result<&AffineElement> {
        self.generators.get(i).ok_or(Error::BadGenerator {
            index: i,
            rank: self.rank(),
        })
    }

    /// Reflection in the affine hyperplane `⟨v, α^∨⟩ = m p` for the positive
    /// root with index `root` in [`RootSystem::positive_roots`].
    pub fn affine_reflection(&self, root: usize, m: i64) -> AffineElement {
        let r = &self.rs.positive_roots()[root];
        let s = self.rs.root_reflection_matrix(r);
        AffineElement {
            finite: s.clone(),
            finite_inv: s,
            translation: r.weight.scale(m),
        }
    }

    /// Pure translation by `pν`; `ν` must lie in the root lattice.
    pub fn translation(&self, nu: &Weight) -> Result<AffineElement> {
        self.rs.check_rank(nu)?;
        if !self.rs.in_root_lattice(nu) {
            return Err(Error::Invariant(format!("{nu} is not in the root lattice")));
        }
        Ok(AffineElement {
            translation: nu.clone(),
            ..self.identity()
        })
    }

    pub fn multiply(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let mut translation = x.finite.apply(y.translation.coords());
        for (t, s) in translation.iter_mut().zip(x.translation.coords()) {
            *t += s;
        }
        AffineElement {
            finite: x.finite.mul(&y.finite),
            finite_inv: y.finite_inv.mul(&x.finite_inv),
            translation: Weight::new(translation),
        }
    }

    pub fn invert(&self, x: &AffineElement) -> AffineElement {
        let t = x.finite_inv.apply(x.translation.coords());
        AffineElement {
            finite: x.finite_inv.clone(),
            finite_inv: x.finite.clone(),
            translation: Weight::new(t.into_iter().map(|c| -c).collect()),
        }
    }

    pub fn apply_generator(&self, x: &AffineElement, i: usize, side: Side) -> Result<AffineElement> {
        let s = self.generator(i)?;
        Ok(match side {
            Side::Left => self.multiply(s, x),
            Side::Right => self.multiply(x, s),
        })
    }

    /// Evaluates a word as a product of generators, left to right.
    pub fn from_word(&self, word: &[u8]) -> Result<AffineElement> {
        let mut x = self.identity();
        for &i in word {
            x = self.multiply(&x, self.generator(i as usize)?);
        }
        Ok(x)
    }

    /// `x·λ = F(λ + ρ) + pν − ρ`.
    pub fn dot_action(&self, x: &AffineElement, lambda: &Weight, p: i64) -> Result<Weight> {
        self.rs.check_rank(lambda)?;
        let v = lambda + self.rs.rho();
        Ok(Weight::new(x.act(v.coords(), p)) - self.rs.rho())
    }

    fn scale(&self) -> i64 {
        self.rs.coxeter_number()
    }

    fn base_point(&self) -> Vec<i64> {
        vec![-1; self.rank()]
    }

    /// Lowest-indexed wall of `C⁻` (at `scale`) with `v` strictly on the far side.
    fn violated_wall(&self, v: &[i64], scale: i64) -> Option<usize> {
        if self.rs.highest_short_root().pair(v) < -scale {
            return Some(0);
        }
        v.iter().position(|&c| c > 0).map(|i| i + 1)
    }

    fn reflect_at(&self, i: usize, v: &[i64], scale: i64) -> Vec<i64> {
        self.generators[i].act(v, scale)
    }

    /// Number of hyperplanes `⟨v, α^∨⟩ ∈ scale·Z` separating `v` from `C⁻`.
    fn separating_hyperplanes(&self, v: &[i64], scale: i64) -> usize {
        self.rs
            .positive_roots()
            .iter()
            .map(|r| {
                let a = r.pair(v);
                debug_assert!(a % scale != 0, "point on a wall");
                if a > 0 {
                    (a / scale + 1) as usize
                } else {
                    (-a / scale) as usize
                }
            })
            .sum()
    }

    pub fn length(&self, x: &AffineElement) -> usize {
        let v = x.act(&self.base_point(), self.scale());
        self.separating_hyperplanes(&v, self.scale())
    }

    /// Bit `i` set iff `l(x s_i) < l(x)`.
    pub fn right_descent_mask(&self, x: &AffineElement) -> u16 {
        // right descents of x are the walls of C⁻ separating it from x⁻¹C⁻
        let h = self.scale();
        let u = x.act_inverse(&self.base_point(), h);
        let mut mask = 0u16;
        if self.rs.highest_short_root().pair(&u) < -h {
            mask |= 1;
        }
        for (i, &c) in u.iter().enumerate() {
            if c > 0 {
                mask |= 1 << (i + 1);
            }
        }
        mask
    }

    /// Bit `i` set iff `l(s_i x) < l(x)`.
    pub fn left_descent_mask(&self, x: &AffineElement) -> u16 {
        self.right_descent_mask(&self.invert(x))
    }

    pub fn right_descents(&self, x: &AffineElement) -> Vec<usize> {
        mask_indices(self.right_descent_mask(x))
    }

    /// Canonical reduced word: repeatedly cross the lowest-indexed wall of
    /// the current alcove `xC⁻` that separates it from `C⁻`.
    pub fn reduced_word(&self, x: &AffineElement) -> Word {
        let h = self.scale();
        let mut u = x.act_inverse(&self.base_point(), h);
        let mut peeled = Vec::new();
        while let Some(i) = self.violated_wall(&u, h) {
            u = self.reflect_at(i, &u, h);
            peeled.push(i as u8);
        }
        peeled.reverse();
        peeled
    }

    /// Parses a word and checks that it is reduced.
    pub fn element_from_reduced_word(&self, word: &[u8]) -> Result<AffineElement> {
        let x = self.from_word(word)?;
        if self.length(&x) != word.len() {
            return Err(Error::NotReduced {
                word: word.to_vec(),
            });
        }
        Ok(x)
    }

    /// Bruhat order by the descent recursion: for `ys < y`,
    /// `x ≤ y` iff `xs ≤ ys` when `xs < x`, and iff `x ≤ ys` otherwise.
    pub fn bruhat_leq(&self, x: &AffineElement, y: &AffineElement) -> bool {
        let mut x = x.clone();
        let mut y = y.clone();
        let mut lx = self.length(&x);
        let mut ly = self.length(&y);
        loop {
            if lx > ly {
                return false;
            }
            if ly == 0 {
                return lx == 0;
            }
            if lx == 0 {
                return true;
            }
            let dy = self.right_descent_mask(&y);
            let s = dy.trailing_zeros() as usize;
            if self.right_descent_mask(&x) & (1 << s) != 0 {
                x = self.multiply(&x, &self.generators[s]);
                lx -= 1;
            }
            y = self.multiply(&y, &self.generators[s]);
            ly -= 1;
        }
    }

    /// `⟨λ + ρ, α^∨⟩ ≢ 0 (mod p)` for every positive coroot.
    pub fn is_p_regular(&self, lambda: &Weight, p: i64) -> bool {
        self.singular_coroot(lambda, p).is_none()
    }

    fn singular_coroot(&self, lambda: &Weight, p: i64) -> Option<(Vec<i64>, i64)> {
        let v = lambda + self.rs.rho();
        self.rs.positive_roots().iter().find_map(|r| {
            let a = r.pair(v.coords());
            (a % p == 0).then(|| (r.coroot.clone(), a))
        })
    }

    pub fn check_regular(&self, lambda: &Weight, p: i64) -> Result<()> {
        self.rs.check_rank(lambda)?;
        match self.singular_coroot(lambda, p) {
            None => Ok(()),
            Some((coroot, pairing)) => Err(Error::Singular {
                weight: lambda.clone(),
                p,
                coroot,
                pairing,
            }),
        }
    }

    /// Writes `λ = x · λ⁻` with `λ⁻` inside `C⁻`.
    pub fn locate(&self, lambda: &Weight, p: i64) -> Result<AlcoveLocation> {
        self.check_regular(lambda, p)?;
        let mut v = (lambda + self.rs.rho()).into_inner();
        let mut x = self.identity();
        let mut length = 0;
        while let Some(i) = self.violated_wall(&v, p) {
            v = self.reflect_at(i, &v, p);
            x = self.multiply(&x, &self.generators[i]);
            length += 1;
        }
        let antidominant_rep = Weight::new(v) - self.rs.rho();
        let word = self.reduced_word(&x);
        debug_assert_eq!(word.len(), length);
        Ok(AlcoveLocation {
            element: x,
            antidominant_rep,
            length,
            word,
        })
    }

    /// `λ = λ_0 + pλ_1` with `λ_0` restricted.
    pub fn restricted_decompose(&self, lambda: &Weight, p: i64) -> Result<(Weight, Weight)> {
        self.rs.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let low = lambda.coords().iter().map(|c| c % p).collect();
        let high = lambda.coords().iter().map(|c| c / p).collect();
        Ok((Weight::new(low), Weight::new(high)))
    }

    /// All elements of length `≤ max_len`, grouped by length.
    pub fn elements_up_to_length(&self, max_len: usize) -> Vec<Vec<AffineElement>> {
        let mut layers = vec![vec![self.identity()]];
        let mut seen: HashSet<AffineElement> = HashSet::new();
        seen.insert(self.identity());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in layers.last().unwrap() {
                let desc = self.right_descent_mask(x);
                for (i, s) in self.generators.iter().enumerate() {
                    if desc & (1 << i) == 0 {
                        let y = self.multiply(x, s);
                        if seen.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
            }
            layers.push(next);
        }
        layers
    }
}

pub(crate) fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask & (1 << i) != 0).collect()
}
