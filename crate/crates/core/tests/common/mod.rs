//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::HashMap;

use klmult::{CharacterMap, Characters, IntPolynomial, RootSystem, Weight};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

/// Permutations of `0..n` as images, with `(x s_i)[j] = x[s_i(j)]`.
pub type Perm = Vec<usize>;

pub fn inversions(x: &Perm) -> usize {
    let n = x.len();
    (0..n).map(|i| (i + 1..n).filter(|&j| x[i] > x[j]).count()).sum()
}

pub fn times_s(x: &Perm, i: usize) -> Perm {
    let mut y = x.clone();
    y.swap(i, i + 1);
    y
}

/// Bruhat order on the symmetric group by the tableau criterion.
pub fn tableau_leq(x: &Perm, y: &Perm) -> bool {
    (1..x.len()).all(|k| {
        let mut a = x[..k].to_vec();
        let mut b = y[..k].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a.iter().zip(&b).all(|(u, v)| u <= v)
    })
}

/// A reduced word for `x`, by bubble sort (letters are `i` for `s_i`, 0-based).
pub fn bubble_word(x: &Perm) -> Vec<usize> {
    let mut v = x.clone();
    let mut word = Vec::new();
    loop {
        let Some(i) = (0..v.len() - 1).find(|&i| v[i] > v[i + 1]) else { break };
        v.swap(i, i + 1);
        word.push(i);
    }
    word.reverse();
    word
}

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(cur: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Laurent-free polynomial helper over `BigInt`, dense in `q`.
fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// KL polynomials of `S_n` from the R-polynomials:
/// `q^{l(y)−l(x)} P̄_{x,y} − P_{x,y} = Σ_{x<z≤y} R_{x,z} P_{z,y}`, solved for
/// the part of degree `< (l(y)−l(x))/2`.
pub fn symmetric_group_kl(n: usize) -> HashMap<(Perm, Perm), IntPolynomial> {
    let perms = all_perms(n);
    let len: HashMap<Perm, usize> = perms.iter().map(|x| (x.clone(), inversions(x))).collect();

    // R_{x,y}: for ys < y, R = R_{xs,ys} if xs < x, else (q−1)R_{x,ys} + qR_{xs,ys}.
    let mut by_len = perms.clone();
    by_len.sort_by_key(|x| len[x]);
    let mut r: HashMap<(Perm, Perm), Vec<BigInt>> = HashMap::new();
    for y in &by_len {
        for x in &perms {
            let val = if !tableau_leq(x, y) {
                Vec::new()
            } else if len[y] == 0 {
                vec![BigInt::one()]
            } else {
                let s = (0..n - 1).find(|&i| y[i] > y[i + 1]).unwrap();
                let ys = times_s(y, s);
                let xs = times_s(x, s);
                if len[&xs] < len[x] {
                    r[&(xs, ys)].clone()
                } else {
                    let a = poly_mul(&[BigInt::from(-1), BigInt::one()], &r[&(x.clone(), ys.clone())]);
                    let b = poly_mul(&[BigInt::zero(), BigInt::one()], &r[&(xs, ys)]);
                    let m = a.len().max(b.len());
                    (0..m)
                        .map(|k| {
                            a.get(k).cloned().unwrap_or_default() + b.get(k).cloned().unwrap_or_default()
                        })
                        .collect()
                }
            };
            r.insert((x.clone(), y.clone()), val);
        }
    }

    let mut p: HashMap<(Perm, Perm), IntPolynomial> = HashMap::new();
    for y in &perms {
        let mut below: Vec<&Perm> = perms.iter().filter(|x| tableau_leq(x, y)).collect();
        below.sort_by_key(|x| std::cmp::Reverse(len[*x]));
        for x in &perms {
            if !tableau_leq(x, y) {
                p.insert((x.clone(), y.clone()), IntPolynomial::zero());
            }
        }
        for x in below {
            if x == y {
                p.insert((x.clone(), y.clone()), IntPolynomial::one());
                continue;
            }
            let d = len[y] - len[x];
            let mut sum = vec![BigInt::zero(); d + 1];
            for z in perms.iter().filter(|z| *z != x && tableau_leq(x, z) && tableau_leq(z, y)) {
                let pz = p[&(z.clone(), y.clone())].coeffs().to_vec();
                for (k, c) in poly_mul(&r[&(x.clone(), z.clone())], &pz).into_iter().enumerate() {
                    sum[k] += c;
                }
            }
            let low: Vec<BigInt> = (0..d).filter(|&k| 2 * k < d).map(|k| -sum[k].clone()).collect();
            p.insert((x.clone(), y.clone()), IntPolynomial::from_coeffs(low));
        }
    }
    p
}

/// Character of `∇(λ)⊗∇(μ)` by multiplying full characters, then
/// decomposed by repeatedly removing the character of a highest weight.
pub fn greedy_decomposition(ch: &Characters, lambda: &Weight, mu: &Weight) -> CharacterMap {
    let rs: &RootSystem = ch.root_system();
    let a = ch.weight_multiplicities(lambda).unwrap();
    let b = ch.dominant_multiplicities(mu).unwrap();
    // dominant part of the product: Σ_a m_λ(a) m_μ(ν − a)
    let mut product: HashMap<Weight, i64> = HashMap::new();
    let tops: Vec<Weight> = rs.dominant_weights_below(&(lambda + mu)).into_iter().map(|x| x.0).collect();
    for nu in &tops {
        let mut total = 0i64;
        for (x, m) in a.iter() {
            let (d, _) = rs.dominant_conjugate(&(nu - x));
            total += m as i64 * b.get(&d) as i64;
        }
        if total != 0 {
            product.insert(nu.clone(), total);
        }
    }
    let mut out = CharacterMap::new();
    loop {
        let top = product
            .iter()
            .filter(|(_, &m)| m != 0)
            .map(|(w, _)| w.clone())
            .max_by(|x, y| rs.height(x).cmp(&rs.height(y)).then_with(|| x.cmp(y)));
        let Some(top) = top else { break };
        let m = product[&top];
        assert!(m > 0, "stripping met a negative multiplicity at {top}");
        out.add(top.clone(), m as u64).unwrap();
        for (x, k) in ch.dominant_multiplicities(&top).unwrap().iter() {
            *product.entry(x.clone()).or_insert(0) -= m * k as i64;
        }
    }
    out
}

/// Number of hyperplanes `⟨v, α^∨⟩ = mp` strictly between `a` and `b`.
pub fn walls_between(a: i64, b: i64, p: i64) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo + 1)..hi).filter(|v| v.rem_euclid(p) == 0).count()
}
