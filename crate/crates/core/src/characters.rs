//! Weyl characters: weight multiplicities, dimensions and ∇-multiplicities
//! of tensor products.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::root_system::{RootSystem, Weight};

/// Finite map from weights to positive multiplicities, ordered by coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterMap {
    entries: BTreeMap<Weight, u64>,
}

impl CharacterMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    /// Adds `m` to the entry at `w`; zero additions leave no entry.
    pub fn add(&mut self, w: Weight, m: u64) -> Result<()> {
        if m == 0 {
            return Ok(());
        }
        let e = self.entries.entry(w).or_insert(0);
        *e = e.checked_add(m).ok_or(Error::Overflow("character multiplicity"))?;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> u128 {
        self.entries.values().map(|&m| m as u128).sum()
    }

    pub fn as_map(&self) -> &BTreeMap<Weight, u64> {
        &self.entries
    }
}

impl FromIterator<(Weight, u64)> for CharacterMap {
    fn from_iter<I: IntoIterator<Item = (Weight, u64)>>(iter: I) -> Self {
        let mut c = CharacterMap::new();
        for (w, m) in iter {
            c.add(w, m).expect("multiplicity overflow");
        }
        c
    }
}

impl IntoIterator for CharacterMap {
    type Item = (Weight, u64);
    type IntoIter = std::collections::btree_map::IntoIter<Weight, u64>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}

/// Character computations for one root system, with a memo of dominant
/// weight multiplicities.
pub struct Characters {
    rs: Arc<RootSystem>,
    memo: RwLock<HashMap<Weight, Arc<CharacterMap>>>,
}

impl Characters {
    pub fn new(rs: Arc<RootSystem>) -> Self {
        Characters {
            rs,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    fn check_dominant(&self, lambda: &Weight) -> Result<()> {
        self.rs.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        Ok(())
    }

    /// Multiplicities of the dominant weights of `∇(λ)`, by Freudenthal's formula.
    pub fn dominant_multiplicities(&self, lambda: &Weight) -> Result<Arc<CharacterMap>> {
        self.check_dominant(lambda)?;
        if let Some(c) = self.memo.read().expect("character memo poisoned").get(lambda) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.freudenthal(lambda)?);
        self.memo
            .write()
            .expect("character memo poisoned")
            .entry(lambda.clone())
            .or_insert(c.clone());
        Ok(c)
    }

    fn freudenthal(&self, lambda: &Weight) -> Result<CharacterMap> {
        let rs = &*self.rs;
        let rho = rs.rho();
        let below = rs.dominant_weights_below(lambda);
        let lr = lambda + rho;
        let top = rs.scaled_inner(&lr, &lr) as i128;
        let mut mult: HashMap<Weight, u64> = HashMap::with_capacity(below.len());
        mult.insert(lambda.clone(), 1);
        for (mu, _) in below.iter().skip(1) {
            let mut sum: i128 = 0;
            for root in rs.positive_roots() {
                let mut nu = mu + &root.weight;
                loop {
                    let (dom, _) = rs.dominant_conjugate(&nu);
                    let Some(&m) = mult.get(&dom) else { break };
                    sum += m as i128 * rs.scaled_inner(&nu, &root.weight) as i128;
                    nu = &nu + &root.weight;
                }
            }
            let mr = mu + rho;
            let denom = top - rs.scaled_inner(&mr, &mr) as i128;
            let num = 2 * sum;
            if denom <= 0 || num % denom != 0 {
                return Err(Error::Invariant(format!(
                    "Freudenthal recursion at {mu} in ∇({lambda}) is not integral"
                )));
            }
            let m = u64::try_from(num / denom).map_err(|_| Error::Overflow("weight multiplicity"))?;
            if m > 0 {
                mult.insert(mu.clone(), m);
            }
        }
        Ok(mult.into_iter().collect())
    }

    /// The full character of `∇(λ)` (equal to that of `Δ(λ)`).
    pub fn weight_multiplicities(&self, lambda: &Weight) -> Result<CharacterMap> {
        let dom = self.dominant_multiplicities(lambda)?;
        let mut out = CharacterMap::new();
        for (w, m) in dom.iter() {
            for v in self.rs.orbit(w) {
                out.add(v, m)?;
            }
        }
        Ok(out)
    }

    /// `dim Δ(τ)_ξ`.
    pub fn dim_weight_space(&self, tau: &Weight, xi: &Weight) -> Result<u64> {
        self.rs.check_rank(xi)?;
        let (dom, _) = self.rs.dominant_conjugate(xi);
        Ok(self.dominant_multiplicities(tau)?.get(&dom))
    }

    /// Weyl's dimension formula `∏ ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
    pub fn dim_nabla(&self, lambda: &Weight) -> Result<u128> {
        self.check_dominant(lambda)?;
        let v = lambda + self.rs.rho();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for root in self.rs.positive_roots() {
            num *= root.pair(v.coords());
            den *= root.pair(self.rs.rho().coords());
        }
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::Invariant(format!("dimension of ∇({lambda}) is not integral")));
        }
        q.to_u128().ok_or(Error::Overflow("dimension"))
    }

    /// `ω ↦ [∇(λ) ⊗ ∇(μ) : ∇(ω)]`, by the Brauer–Klimyk rule.
    pub fn tensor_nabla_multiplicities(&self, lambda: &Weight, mu: &Weight) -> Result<CharacterMap> {
        self.check_dominant(lambda)?;
        self.check_dominant(mu)?;
        let (small, big) = if self.dim_nabla(lambda)? <= self.dim_nabla(mu)? {
            (lambda, mu)
        } else {
            (mu, lambda)
        };
        let rho = self.rs.rho();
        let shifted = big + rho;
        let mut acc: BTreeMap<Weight, i128> = BTreeMap::new();
        for (nu, m) in self.weight_multiplicities(small)? {
            let (dom, odd) = self.rs.dominant_conjugate(&(&shifted + &nu));
            if dom.coords().contains(&0) {
                continue;
            }
            let e = acc.entry(&dom - rho).or_insert(0);
            if odd {
                *e -= m as i128;
            } else {
                *e += m as i128;
            }
        }
        let mut out = CharacterMap::new();
        for (w, m) in acc {
            if m < 0 {
                return Err(Error::Invariant(format!(
                    "negative multiplicity {m} of ∇({w}) in ∇({lambda}) ⊗ ∇({mu})"
                )));
            }
            out.add(w, u64::try_from(m).map_err(|_| Error::Overflow("tensor multiplicity"))?)?;
        }
        let top = lambda + mu;
        if let Some(w) = out.weights().find(|w| !self.rs.dominance_leq(w, &top)) {
            return Err(Error::Invariant(format!("∇({w}) in ∇({lambda}) ⊗ ∇({mu}) exceeds {top}")));
        }
        Ok(out)
    }

    /// `ω ↦ [∇(a) ⊗ ∇(b) ⊗ ∇(c) : ∇(ω)]`.
    pub fn triple_tensor_nabla_multiplicities(
        &self,
        a: &Weight,
        b: &Weight,
        c: &Weight,
    ) -> Result<CharacterMap> {
        let ab = self.tensor_nabla_multiplicities(a, b)?;
        self.check_dominant(c)?;
        let mut out = CharacterMap::new();
        for (w, m) in ab {
            for (v, k) in self.tensor_nabla_multiplicities(&w, c)? {
                out.add(v, m.checked_mul(k).ok_or(Error::Overflow("tensor multiplicity"))?)?;
            }
        }
        Ok(out)
    }

    /// `ω ↦ [M ⊗ ∇(c) : ∇(ω)]` for `M` given by its ∇-multiplicities.
    pub fn tensor_with(&self, m: &CharacterMap, c: &Weight) -> Result<CharacterMap> {
        let mut out = CharacterMap::new();
        for (w, k) in m.iter() {
            for (v, j) in self.tensor_nabla_multiplicities(w, c)? {
                out.add(v, k.checked_mul(j).ok_or(Error::Overflow("tensor multiplicity"))?)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::Series;

    fn chars(s: Series, n: usize) -> Characters {
        Characters::new(Arc::new(RootSystem::new(s, n).unwrap()))
    }

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn rank_one_strings() {
        let ch = chars(Series::A, 1);
        let c = ch.weight_multiplicities(&w(&[3])).unwrap();
        let got: Vec<_> = c.iter().map(|(w, m)| (w.coords()[0], m)).collect();
        assert_eq!(got, vec![(-3, 1), (-1, 1), (1, 1), (3, 1)]);
        assert_eq!(ch.dim_nabla(&w(&[7])).unwrap(), 8);
    }

    #[test]
    fn adjoint_of_a2() {
        let ch = chars(Series::A, 2);
        let c = ch.weight_multiplicities(&w(&[1, 1])).unwrap();
        assert_eq!(c.get(&w(&[0, 0])), 2);
        assert_eq!(c.total(), 8);
        assert_eq!(ch.dim_nabla(&w(&[1, 1])).unwrap(), 8);
        assert_eq!(ch.dim_weight_space(&w(&[1, 1]), &w(&[0, 0])).unwrap(), 2);
        assert_eq!(ch.dim_weight_space(&w(&[1, 1]), &w(&[-1, 2])).unwrap(), 1);
    }

    #[test]
    fn known_dimensions() {
        assert_eq!(chars(Series::A, 3).dim_nabla(&w(&[1, 0, 0])).unwrap(), 4);
        assert_eq!(chars(Series::G, 2).dim_nabla(&w(&[1, 0])).unwrap(), 7);
        assert_eq!(chars(Series::G, 2).dim_nabla(&w(&[0, 1])).unwrap(), 14);
        assert_eq!(chars(Series::E, 8).dim_nabla(&w(&[0, 0, 0, 0, 0, 0, 0, 1])).unwrap(), 248);
        assert_eq!(chars(Series::F, 4).dim_nabla(&w(&[0, 0, 0, 1])).unwrap(), 26);
    }

    #[test]
    fn clebsch_gordan() {
        let ch = chars(Series::A, 1);
        let t = ch.tensor_nabla_multiplicities(&w(&[2]), &w(&[3])).unwrap();
        let got: Vec<_> = t.iter().map(|(w, m)| (w.coords()[0], m)).collect();
        assert_eq!(got, vec![(1, 1), (3, 1), (5, 1)]);
        let t = ch.triple_tensor_nabla_multiplicities(&w(&[1]), &w(&[1]), &w(&[1])).unwrap();
        assert_eq!(t.get(&w(&[3])), 1);
        assert_eq!(t.get(&w(&[1])), 2);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn a2_dual_pair() {
        let ch = chars(Series::A, 2);
        let t = ch.tensor_nabla_multiplicities(&w(&[1, 0]), &w(&[0, 1])).unwrap();
        assert_eq!(t.get(&w(&[1, 1])), 1);
        assert_eq!(t.get(&w(&[0, 0])), 1);
        assert_eq!(t.len(), 2);
        let unit = ch.tensor_nabla_multiplicities(&w(&[2, 3]), &w(&[0, 0])).unwrap();
        assert_eq!(unit.iter().collect::<Vec<_>>(), vec![(&w(&[2, 3]), 1)]);
    }

    #[test]
    fn non_dominant_is_rejected() {
        let ch = chars(Series::A, 2);
        assert!(matches!(ch.weight_multiplicities(&w(&[-1, 0])), Err(Error::NotDominant(_))));
        assert!(ch.tensor_nabla_multiplicities(&w(&[0, 0]), &w(&[0, -1])).is_err());
    }
}
