//! Cartan data for the simple types A-G and weight-lattice arithmetic.
//!
//! All weights are integer vectors in the basis of fundamental weights, so
//! `⟨λ, α_i^∨⟩` is just the `i`-th coordinate. Simple roots use Bourbaki
//! numbering; in code they are indexed from 0, so Bourbaki's `α_1` is index 0.
//!
//! | type | long roots | short roots |
//! |------|------------|-------------|
//! | B_n  | α_1..α_{n-1} | α_n |
//! | C_n  | α_n | α_1..α_{n-1} |
//! | F_4  | α_1, α_2 | α_3, α_4 |
//! | G_2  | α_2 | α_1 |
//!
//! In `D_n` the branch node is `α_{n-2}`, joined to `α_{n-1}` and `α_n`; in
//! `E_n` the node `α_2` hangs off `α_4`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rational_inverse, IntMatrix, Rational};

/// Integer weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    /// Every coordinate `≥ 0`.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Member of `X_1(T)`: every coordinate in `[0, p-1]`.
    pub fn is_restricted(&self, p: i64) -> bool {
        self.0.iter().all(|&c| (0..p).contains(&c))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Parses `"1,0"`, `"[1, 0]"` or `"-4"`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        if body.trim().is_empty() {
            return Err(Error::Parse(format!("empty weight {s:?}")));
        }
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {t:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

macro_rules! weight_binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&Weight> for &Weight {
            type Output = Weight;
            fn $f(self, rhs: &Weight) -> Weight {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a $op b).collect())
            }
        }
        impl $tr<Weight> for Weight {
            type Output = Weight;
            fn $f(self, rhs: Weight) -> Weight {
                &self $op &rhs
            }
        }
        impl $tr<&Weight> for Weight {
            type Output = Weight;
            fn $f(self, rhs: &Weight) -> Weight {
                &self $op rhs
            }
        }
    };
}
weight_binop!(Add, add, +);
weight_binop!(Sub, sub, -);

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        rhs.scale(self)
    }
}

/// Simple type letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(Error::Parse(format!("unknown series {s:?}"))),
        }
    }
}

/// A positive root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in the basis of simple roots.
    pub simple: Vec<i64>,
    /// The root as a weight (fundamental-weight coordinates).
    pub weight: Weight,
    /// Coordinates of the coroot in the basis of simple coroots.
    pub coroot: Vec<i64>,
    /// Squared length, normalised so short roots have length 2.
    pub norm: i64,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple.iter().sum()
    }

    /// `⟨λ, α^∨⟩` without a rank check.
    #[inline]
    pub fn pair(&self, coords: &[i64]) -> i64 {
        self.coroot.iter().zip(coords).map(|(c, l)| c * l).sum()
    }
}

/// Advisory flags for the prime `p` relative to the Coxeter number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub p: i64,
    pub p_odd: bool,
    pub p_ge_2h_minus_2: bool,
    /// `2h - 2`.
    pub bound: i64,
}

impl PrimeReport {
    pub fn is_ok(&self) -> bool {
        self.p_odd && self.p_ge_2h_minus_2
    }
}

/// Immutable Cartan datum of a simple root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    series: Series,
    rank: usize,
    /// `cartan[i][j] = ⟨α_i^∨, α_j⟩`.
    cartan: IntMatrix,
    cartan_inv: Vec<Vec<Rational>>,
    positive_roots: Vec<Root>,
    rho: Weight,
    coxeter_number: i64,
    highest_root: usize,
    highest_short_root: usize,
    w0: IntMatrix,
    /// Integer Gram matrix of the fundamental weights, scaled by `gram_scale`.
    gram: IntMatrix,
    gram_scale: i64,
    fundamental_heights: Vec<Rational>,
}

fn dynkin(series: Series, rank: usize) -> Option<(Vec<(usize, usize)>, Vec<i64>)> {
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    let n = rank;
    Some(match (series, n) {
        (Series::A, n) if n >= 1 => (chain(n), vec![2; n]),
        (Series::B, n) if n >= 2 => {
            let mut len = vec![4; n];
            len[n - 1] = 2;
            (chain(n), len)
        }
        (Series::C, n) if n >= 2 => {
            let mut len = vec![2; n];
            len[n - 1] = 4;
            (chain(n), len)
        }
        (Series::D, n) if n >= 4 => {
            let mut edges = chain(n - 1);
            edges.push((n - 3, n - 1));
            (edges, vec![2; n])
        }
        (Series::E, 6..=8) => {
            let mut edges = vec![(0, 2), (2, 3), (1, 3)];
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
            (edges, vec![2; n])
        }
        (Series::F, 4) => (chain(4), vec![4, 4, 2, 2]),
        (Series::G, 2) => (chain(2), vec![2, 6]),
        _ => return None,
    })
}

fn classical_root_count(series: Series, n: usize) -> usize {
    match series {
        Series::A => n * (n + 1) / 2,
        Series::B | Series::C => n * n,
        Series::D => n * (n - 1),
        Series::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Series::F => 24,
        Series::G => 6,
    }
}

impl RootSystem {
    /// Builds the root system of type `series_rank`, e.g. `(A, 2)`.
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let invalid = || Error::InvalidType {
            series: series.to_string(),
            rank,
        };
        if rank > 8 {
            return Err(invalid());
        }
        let (edges, lengths) = dynkin(series, rank).ok_or_else(invalid)?;
        let n = rank;

        // symmetric form on simple roots
        let mut sym = vec![vec![0i64; n]; n];
        for i in 0..n {
            sym[i][i] = lengths[i];
        }
        for &(i, j) in &edges {
            let b = -lengths[i].max(lengths[j]) / 2;
            sym[i][j] = b;
            sym[j][i] = b;
        }
        let cartan_rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * sym[i][j] / sym[i][i]).collect())
            .collect();
        let cartan = IntMatrix::from_rows(&cartan_rows);
        let cartan_inv = rational_inverse(&cartan);

        let positive_roots = Self::close_roots(&cartan, &sym);
        debug_assert_eq!(positive_roots.len(), classical_root_count(series, n));

        let rho = Weight(vec![1; n]);
        let coxeter_number = (2 * positive_roots.len() / n) as i64;

        let highest_root = (0..positive_roots.len())
            .max_by_key(|&k| positive_roots[k].height())
            .unwrap();
        let short = positive_roots.iter().map(|r| r.norm).min().unwrap();
        let highest_short_root = (0..positive_roots.len())
            .filter(|&k| positive_roots[k].norm == short)
            .max_by_key(|&k| positive_roots[k].height())
            .unwrap();

        // Gram matrix of fundamental weights: G = D A^{-1}, D = diag(|α_i|²/2).
        let g: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| cartan_inv[i][j] * Rational::from_integer(lengths[i] / 2))
                    .collect()
            })
            .collect();
        let gram_scale = g
            .iter()
            .flatten()
            .fold(1i64, |acc, r| acc.lcm(r.denom()));
        let gram = IntMatrix::from_rows(
            &g.iter()
                .map(|row| {
                    row.iter()
                        .map(|r| (r * Rational::from_integer(gram_scale)).to_integer())
                        .collect()
                })
                .collect::<Vec<_>>(),
        );
        let fundamental_heights = (0..n)
            .map(|i| (0..n).map(|k| cartan_inv[k][i]).sum())
            .collect();

        let mut rs = RootSystem {
            series,
            rank: n,
            cartan,
            cartan_inv,
            positive_roots,
            rho,
            coxeter_number,
            highest_root,
            highest_short_root,
            w0: IntMatrix::identity(n),
            gram,
            gram_scale,
            fundamental_heights,
        };
        rs.w0 = rs.longest_element_matrix();
        Ok(rs)
    }

    /// Positive roots by root-string closure, sorted by height.
    fn close_roots(cartan: &IntMatrix, sym: &[Vec<i64>]) -> Vec<Root> {
        let n = cartan.dim();
        let unit = |i: usize| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v
        };
        let mut found: Vec<Vec<i64>> = (0..n).map(unit).collect();
        let mut known: HashSet<Vec<i64>> = found.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = found.iter().cloned().collect();
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                // ⟨β, α_i^∨⟩ = Σ_j β_j a_ij
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan.get(i, j)).sum();
                let mut r = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                if r - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        found.push(up.clone());
                        queue.push_back(up);
                    }
                }
            }
        }
        found.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        found
            .into_iter()
            .map(|simple| {
                let norm: i64 = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| simple[i] * simple[j] * sym[i][j])
                    .sum();
                let weight = Weight(
                    (0..n)
                        .map(|i| (0..n).map(|j| simple[j] * cartan.get(i, j)).sum())
                        .collect(),
                );
                let coroot = (0..n).map(|j| simple[j] * sym[j][j] / norm).collect();
                Root {
                    simple,
                    weight,
                    coroot,
                    norm,
                }
            })
            .collect()
    }

    /// Longest element as a matrix on weight coordinates: fold ρ to −ρ.
    fn longest_element_matrix(&self) -> IntMatrix {
        let mut v = self.rho.clone();
        let mut m = IntMatrix::identity(self.rank);
        while let Some(i) = (0..self.rank).find(|&i| v.0[i] > 0) {
            v = self.reflect(i, &v);
            m = self.reflection_matrix(i).mul(&m);
        }
        debug_assert_eq!(v, -&self.rho);
        m
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `"A2"`, `"E8"`, ...
    pub fn name(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn simple_root(&self, i: usize) -> &Root {
        // roots are sorted by height, simple roots first in index order
        debug_assert_eq!(self.positive_roots[i].simple[i], 1);
        &self.positive_roots[i]
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive_roots[self.highest_root]
    }

    /// `α_0`, whose coroot is the highest coroot.
    pub fn highest_short_root(&self) -> &Root {
        &self.positive_roots[self.highest_short_root]
    }

    /// Action of `w_0` on weight coordinates.
    pub fn longest_element_action(&self) -> &IntMatrix {
        &self.w0
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank,
                found: w.rank(),
            })
        }
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.rank)
    }

    /// `⟨λ, α^∨⟩`.
    pub fn pair(&self, lambda: &Weight, root: &Root) -> Result<i64> {
        self.check_rank(lambda)?;
        Ok(root.pair(&lambda.0))
    }

    /// `λ⋆ = −w_0 λ`.
    pub fn star(&self, lambda: &Weight) -> Weight {
        Weight(self.w0.apply(&lambda.0).into_iter().map(|c| -c).collect())
    }

    /// Simple reflection `s_i` (0-indexed) acting linearly: `λ − ⟨λ, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let k = lambda.0[i];
        if k == 0 {
            return lambda.clone();
        }
        let alpha = &self.simple_root(i).weight;
        Weight(lambda.0.iter().zip(&alpha.0).map(|(l, a)| l - k * a).collect())
    }

    pub fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        let alpha = &self.simple_root(i).weight;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| i64::from(r == c) - if c == i { alpha.0[r] } else { 0 })
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(&rows)
    }

    /// Reflection `s_α` for a positive root, as a matrix on weight coordinates.
    pub fn root_reflection_matrix(&self, root: &Root) -> IntMatrix {
        let n = self.rank;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| i64::from(r == c) - root.weight.0[r] * root.coroot[c])
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(&rows)
    }

    /// Dominant conjugate of `λ` and the parity of the number of reflections used.
    pub fn dominant_conjugate(&self, lambda: &Weight) -> (Weight, bool) {
        let mut v = lambda.clone();
        let mut odd = false;
        while let Some(i) = (0..self.rank).find(|&i| v.0[i] < 0) {
            v = self.reflect(i, &v);
            odd = !odd;
        }
        (v, odd)
    }

    /// The finite Weyl group orbit of `λ`, sorted.
    pub fn orbit(&self, lambda: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                let w = self.reflect(i, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// The weights `w·0 = wρ − ρ` for `w` in the finite Weyl group, sorted.
    pub fn finite_dot_orbit_of_zero(&self) -> Vec<Weight> {
        self.orbit(&self.rho)
            .into_iter()
            .map(|v| v - &self.rho)
            .collect()
    }

    /// Coordinates of `λ` in the simple-root basis, if `λ ∈ ZR`.
    pub fn to_simple_coords(&self, lambda: &Weight) -> Option<Vec<i64>> {
        let n = self.rank;
        (0..n)
            .map(|i| {
                let r: Rational = (0..n)
                    .map(|j| self.cartan_inv[i][j] * Rational::from_integer(lambda.0[j]))
                    .sum();
                r.is_integer().then(|| r.to_integer())
            })
            .collect()
    }

    pub fn in_root_lattice(&self, lambda: &Weight) -> bool {
        self.to_simple_coords(lambda).is_some()
    }

    /// Dominance order: `μ ≤ λ` iff `λ − μ ∈ NR⁺`.
    pub fn dominance_leq(&self, mu: &Weight, lambda: &Weight) -> bool {
        self.to_simple_coords(&(lambda - mu))
            .is_some_and(|k| k.iter().all(|&c| c >= 0))
    }

    /// Height `Σ k_i` for `λ = Σ k_i α_i` (rational off the root lattice).
    pub fn height(&self, lambda: &Weight) -> Rational {
        lambda
            .0
            .iter()
            .zip(&self.fundamental_heights)
            .map(|(&c, h)| h * Rational::from_integer(c))
            .sum()
    }

    pub fn fundamental_heights(&self) -> &[Rational] {
        &self.fundamental_heights
    }

    /// `(λ, μ) · gram_scale()` for the W-invariant form with short roots of length 2.
    pub fn scaled_inner(&self, lambda: &Weight, mu: &Weight) -> i64 {
        let g = self.gram.apply(&mu.0);
        lambda.0.iter().zip(&g).map(|(a, b)| a * b).sum()
    }

    pub fn gram_scale(&self) -> i64 {
        self.gram_scale
    }

    /// Upper bound `p(p − h + 2)` of the Jantzen region.
    pub fn jantzen_bound(&self, p: i64) -> i64 {
        p * (p - self.coxeter_number + 2)
    }

    /// `⟨λ + ρ, α_0^∨⟩ ≤ p(p − h + 2)` for dominant `λ`.
    pub fn in_jantzen_region(&self, lambda: &Weight, p: i64) -> Result<bool> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let v = lambda + &self.rho;
        Ok(self.highest_short_root().pair(&v.0) <= self.jantzen_bound(p))
    }

    /// Checks `p` odd and `p ≥ 2h − 2`. Never blocks computation.
    pub fn validate_p(&self, p: i64) -> PrimeReport {
        let bound = 2 * self.coxeter_number - 2;
        PrimeReport {
            p,
            p_odd: p % 2 != 0,
            p_ge_2h_minus_2: p >= bound,
            bound,
        }
    }

    /// Dominant weights `μ ≤ λ` for dominant `λ`, each with the height of `λ − μ`.
    ///
    /// Every dominant `μ < λ` has a positive root `β` with `μ + β ≤ λ` dominant,
    /// so subtracting positive roots while staying dominant reaches all of them.
    pub fn dominant_weights_below(&self, lambda: &Weight) -> Vec<(Weight, i64)> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut out = vec![(lambda.clone(), 0)];
        seen.insert(lambda.clone());
        let mut head = 0;
        while head < out.len() {
            let (mu, depth) = out[head].clone();
            head += 1;
            for root in &self.positive_roots {
                let nu = &mu - &root.weight;
                if nu.is_dominant() && seen.insert(nu.clone()) {
                    out.push((nu, depth + root.height()));
                }
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));
        out
    }

    /// Dominant weights of height at most `bound`.
    pub fn dominant_weights_of_height_at_most(&self, bound: Rational) -> Vec<Weight> {
        fn rec(
            heights: &[Rational],
            i: usize,
            left: Rational,
            cur: &mut Vec<i64>,
            out: &mut Vec<Weight>,
        ) {
            if i == heights.len() {
                out.push(Weight(cur.clone()));
                return;
            }
            let mut k = 0;
            let mut used = Rational::zero();
            while used <= left {
                cur.push(k);
                rec(heights, i + 1, left - used, cur, out);
                cur.pop();
                k += 1;
                used += heights[i];
            }
        }
        let mut out = Vec::new();
        if !bound.is_negative() {
            rec(&self.fundamental_heights, 0, bound, &mut Vec::new(), &mut out);
        }
        out.sort();
        out
    }

    /// Dominant weights in the box `0 ≤ coord ≤ bound`, sorted.
    pub fn dominant_box(&self, bound: i64) -> Vec<Weight> {
        let mut out = vec![Vec::with_capacity(self.rank)];
        for _ in 0..self.rank {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=bound).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(Weight).collect()
    }
}

/// Trial-division primality test.
pub fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: Series, n: usize) -> RootSystem {
        RootSystem::new(s, n).unwrap()
    }

    const TABLE: &[(Series, usize)] = &[
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::A, 5),
        (Series::B, 2),
        (Series::B, 3),
        (Series::B, 4),
        (Series::C, 3),
        (Series::C, 4),
        (Series::D, 4),
        (Series::D, 5),
        (Series::E, 6),
        (Series::E, 7),
        (Series::E, 8),
        (Series::F, 4),
        (Series::G, 2),
    ];

    #[test]
    fn small_types() {
        let a1 = rs(Series::A, 1);
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.coxeter_number(), 2);
        assert_eq!(a1.rho(), &Weight::from([1]));

        let a2 = rs(Series::A, 2);
        assert_eq!(a2.positive_roots().len(), 3);
        assert_eq!(a2.coxeter_number(), 3);

        let g2 = rs(Series::G, 2);
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.coxeter_number(), 6);
    }

    #[test]
    fn invalid_types_are_rejected() {
        for (s, n) in [
            (Series::A, 0),
            (Series::B, 1),
            (Series::C, 1),
            (Series::D, 3),
            (Series::E, 5),
            (Series::E, 9),
            (Series::F, 3),
            (Series::G, 3),
        ] {
            let err = RootSystem::new(s, n).unwrap_err();
            assert!(err.to_string().contains(&format!("({s}, {n})")), "{err}");
        }
    }

    #[test]
    fn classical_counts_rho_and_coxeter_number() {
        for &(s, n) in TABLE {
            let r = rs(s, n);
            assert_eq!(r.positive_roots().len(), classical_root_count(s, n), "{s}{n}");
            // half-sum of positive roots is ρ = (1, ..., 1)
            let sum = r
                .positive_roots()
                .iter()
                .fold(r.zero(), |acc, a| acc + &a.weight);
            assert_eq!(sum, r.rho().scale(2), "{s}{n}");
            for i in 0..n {
                assert_eq!(r.pair(r.rho(), r.simple_root(i)).unwrap(), 1);
            }
            let theta = r.highest_short_root();
            assert_eq!(theta.pair(&r.rho().0) + 1, r.coxeter_number(), "{s}{n}");
            assert!(r.positive_roots().iter().all(|a| a.simple.iter().all(|&c| c >= 0)));
        }
    }

    #[test]
    fn highest_short_root_pairing_in_a2() {
        let a2 = rs(Series::A, 2);
        let theta = a2.highest_short_root();
        assert_eq!(a2.pair(a2.rho(), theta).unwrap(), 2);
        assert_eq!(a2.pair(&Weight::from([1, 0]), theta).unwrap(), 1);
    }

    #[test]
    fn rank_mismatch() {
        let a2 = rs(Series::A, 2);
        assert!(matches!(
            a2.pair(&Weight::from([1]), a2.highest_root()),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn star_examples() {
        let a1 = rs(Series::A, 1);
        assert_eq!(a1.star(&Weight::from([7])), Weight::from([7]));
        let a2 = rs(Series::A, 2);
        assert_eq!(a2.star(&Weight::from([1, 2])), Weight::from([2, 1]));
        let b2 = rs(Series::B, 2);
        assert_eq!(b2.star(&Weight::from([3, 5])), Weight::from([3, 5]));
        let d5 = rs(Series::D, 5);
        assert_eq!(
            d5.star(&Weight::from([1, 2, 3, 4, 5])),
            Weight::from([1, 2, 3, 5, 4])
        );
        let e6 = rs(Series::E, 6);
        assert_eq!(
            e6.star(&Weight::from([1, 2, 3, 4, 5, 6])),
            Weight::from([6, 2, 5, 4, 3, 1])
        );
    }

    #[test]
    fn w0_is_an_involution() {
        for &(s, n) in TABLE {
            let r = rs(s, n);
            assert!(r.longest_element_action().mul(r.longest_element_action()).is_identity());
        }
    }

    #[test]
    fn dominant_restricted_and_jantzen() {
        let a1 = rs(Series::A, 1);
        assert!(Weight::from([4]).is_restricted(5));
        assert!(!Weight::from([5]).is_restricted(5));
        assert!(Weight::from([0, 3]).is_dominant());
        assert!(a1.in_jantzen_region(&Weight::from([0]), 5).unwrap());
        assert!(a1.in_jantzen_region(&Weight::from([24]), 5).unwrap());
        assert!(!a1.in_jantzen_region(&Weight::from([25]), 5).unwrap());
        assert!(matches!(
            a1.in_jantzen_region(&Weight::from([-1]), 5),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn prime_report() {
        let a1 = rs(Series::A, 1);
        assert!(a1.validate_p(3).is_ok());
        let a2 = rs(Series::A, 2);
        let r = a2.validate_p(3);
        assert!(r.p_odd && !r.p_ge_2h_minus_2);
        let g2 = rs(Series::G, 2);
        assert!(g2.validate_p(11).is_ok());
        assert!(!a1.validate_p(2).p_odd);
    }

    #[test]
    fn dominance_and_heights() {
        let a2 = rs(Series::A, 2);
        assert!(a2.dominance_leq(&Weight::from([0, 0]), &Weight::from([1, 1])));
        assert!(!a2.dominance_leq(&Weight::from([1, 0]), &Weight::from([1, 1])));
        assert_eq!(a2.height(&Weight::from([1, 1])), Rational::from_integer(2));
        let below: Vec<Weight> = a2
            .dominant_weights_below(&Weight::from([2, 2]))
            .into_iter()
            .map(|x| x.0)
            .collect();
        let mut sorted = below.clone();
        sorted.sort();
        assert_eq!(
            sorted,
            vec![
                Weight::from([0, 0]),
                Weight::from([0, 3]),
                Weight::from([1, 1]),
                Weight::from([2, 2]),
                Weight::from([3, 0]),
            ]
        );
    }

    #[test]
    fn weight_parse_and_display() {
        let w: Weight = "1, -2,3".parse().unwrap();
        assert_eq!(w, Weight::from([1, -2, 3]));
        assert_eq!(w.to_string(), "1,-2,3");
        assert_eq!("[4]".parse::<Weight>().unwrap(), Weight::from([4]));
        assert!("1,x".parse::<Weight>().is_err());
        assert!("".parse::<Weight>().is_err());
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(5) && is_prime(7) && is_prime(11));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(-5));
    }
}
