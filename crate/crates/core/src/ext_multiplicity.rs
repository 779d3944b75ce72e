//! ∇-filtration multiplicities of `Ext^n_{G_1}` between reduced, standard and
//! costandard modules, computed from Kazhdan–Lusztig coefficients and Weyl
//! character multiplicities.
//!
//! Throughout, `l(λ)` is the length of the element `x_λ` with
//! `λ = x_λ · λ⁻`, and `c(u, v, s)` is the coefficient of `t^s` in `P_{u,v}`
//! with `q = t²`. For `λ` in the orbit of `λ⁻`,
//!
//! ```text
//! dim Ext^n_G(Δ(z·λ⁻), ∇_red(x·λ⁻)) = c(z, x, l(x) − l(z) − n).
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::affine_weyl::{AffineElement, AffineWeyl, AlcoveLocation};
use crate::characters::{CharacterMap, Characters};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::kl::KlTable;
use crate::linalg::Rational;
use crate::polynomial::IntPolynomial;
use crate::root_system::{is_prime, PrimeReport, RootSystem, Series, Weight};

/// Which pair of modules the Ext group is taken between.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `Ext^n_{G_1}(Δ^red(λ), ∇_red(μ))`
    RedRed,
    /// `Ext^n_{G_1}(Δ(λ), ∇_red(μ))`
    DeltaRed,
    /// `Ext^n_{G_1}(Δ^red(λ), ∇(μ))`
    RedNabla,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::RedRed, Variant::DeltaRed, Variant::RedNabla];

    pub fn name(self) -> &'static str {
        match self {
            Variant::RedRed => "red_red",
            Variant::DeltaRed => "delta_red",
            Variant::RedNabla => "red_nabla",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "red_red" => Ok(Variant::RedRed),
            "delta_red" => Ok(Variant::DeltaRed),
            "red_nabla" => Ok(Variant::RedNabla),
            _ => Err(Error::Parse(format!(
                "unknown variant {s:?} (expected red_red, delta_red or red_nabla)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityQuery {
    pub variant: Variant,
    pub lambda: Weight,
    pub mu: Weight,
    pub n: u32,
    pub p: i64,
    /// Restrict the table to a single `ω`.
    pub omega: Option<Weight>,
}

/// Conditions under which the formulas are theorems, reported alongside results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Advisory {
    /// `p` is even or below `2h − 2`.
    PrimeRange(PrimeReport),
    /// The results assume the Lusztig character formula for `p`.
    LcfAssumed,
    /// A weight lies outside the Jantzen region.
    OutsideJantzen { weight: Weight, pairing: i64, bound: i64 },
}

impl Advisory {
    /// Whether the advisory signals that a hypothesis fails (as opposed to a standing note).
    pub fn is_warning(&self) -> bool {
        !matches!(self, Advisory::LcfAssumed)
    }
}

impl fmt::Display for Advisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Advisory::PrimeRange(r) => {
                let mut why = Vec::new();
                if !r.p_odd {
                    why.push("p is even".to_string());
                }
                if !r.p_ge_2h_minus_2 {
                    why.push(format!("p < 2h-2 = {}", r.bound));
                }
                write!(f, "p = {}: {}", r.p, why.join(", "))
            }
            Advisory::LcfAssumed => f.write_str("results assume the Lusztig character formula holds for p"),
            Advisory::OutsideJantzen { weight, pairing, bound } => write!(
                f,
                "weight {weight} lies outside the Jantzen region (<λ+ρ,α0^v> = {pairing} > {bound})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub query: MultiplicityQuery,
    /// Nonzero multiplicities `ω ↦ [Ext : ∇(ω)]`.
    pub entries: BTreeMap<Weight, BigInt>,
    pub advisories: Vec<Advisory>,
}

impl MultiplicityTable {
    pub fn get(&self, omega: &Weight) -> BigInt {
        self.entries.get(omega).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of comparing both sides of the weight-space identity
/// `Σ_n [Ext^n_{G_1}(k, ∇(μ))^{[-1]} : ∇(τ)] = dim Δ(τ)_ξ` for `μ = w·0 + pξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpaceCheck {
    pub mu: Weight,
    pub tau: Weight,
    pub xi: Weight,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl WeightSpaceCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Shared state for all multiplicity computations in one root system:
/// the affine Weyl group, its KL table and a character memo.
pub struct ExtEngine {
    rs: Arc<RootSystem>,
    group: AffineWeyl,
    kl: KlTable,
    chars: Characters,
    exec: Execution,
}

impl ExtEngine {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        Ok(Self::from_root_system(Arc::new(RootSystem::new(series, rank)?)))
    }

    pub fn from_root_system(rs: Arc<RootSystem>) -> Self {
        let group = AffineWeyl::new(rs.clone());
        ExtEngine {
            kl: KlTable::new(group.clone()),
            chars: Characters::new(rs.clone()),
            group,
            rs,
            exec: Execution::default(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn group(&self) -> &AffineWeyl {
        &self.group
    }

    pub fn kl_table(&self) -> &KlTable {
        &self.kl
    }

    pub fn characters(&self) -> &Characters {
        &self.chars
    }

    fn check_p(&self, p: i64) -> Result<()> {
        if is_prime(p) {
            Ok(())
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Locates a dominant `p`-regular weight.
    pub fn locate_dominant(&self, lambda: &Weight, p: i64) -> Result<AlcoveLocation> {
        self.check_p(p)?;
        self.rs.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.clone()));
        }
        self.group.locate(lambda, p)
    }

    /// `l(λ)`.
    pub fn length(&self, lambda: &Weight, p: i64) -> Result<usize> {
        self.check_p(p)?;
        Ok(self.group.locate(lambda, p)?.length)
    }

    fn coeff(&self, u: &AffineElement, v: &AffineElement, s: i64) -> BigInt {
        self.kl.c_coeff(u, v, s)
    }

    /// `dim Ext^n_G(Δ^red(λ'), ∇(ν)) = c(x_ν, x_λ', l(λ') − l(ν) − n)`.
    pub fn ext_dim_pair(&self, lambda_red: &Weight, nu: &Weight, n: u32, p: i64) -> Result<BigInt> {
        let x = self.locate_dominant(lambda_red, p)?;
        let z = self.locate_dominant(nu, p)?;
        Ok(self.pair_located(&x, &z, n))
    }

    fn pair_located(&self, x: &AlcoveLocation, z: &AlcoveLocation, n: u32) -> BigInt {
        if x.antidominant_rep != z.antidominant_rep {
            return BigInt::zero();
        }
        let s = x.length as i64 - z.length as i64 - n as i64;
        self.coeff(&z.element, &x.element, s)
    }

    /// `c(λ, μ, n)`: `dim Ext^n_G(Δ(λ), ∇_red(μ))`, the coefficient of
    /// `t^{l(μ) − l(λ) − n}` in `P_{x_λ, x_μ}`, or zero when `λ⁻ ≠ μ⁻`.
    pub fn small_c(&self, lambda: &Weight, mu: &Weight, n: u32, p: i64) -> Result<BigInt> {
        let a = self.locate_dominant(lambda, p)?;
        let b = self.locate_dominant(mu, p)?;
        Ok(self.small_c_located(&a, &b, n))
    }

    fn small_c_located(&self, a: &AlcoveLocation, b: &AlcoveLocation, n: u32) -> BigInt {
        let v = self.pair_located(b, a, n);
        assert!(
            v.is_zero() || (b.length as i64 - a.length as i64 - n as i64) % 2 == 0,
            "parity violated: c = {v} at n = {n}, lengths {} and {}",
            a.length,
            b.length
        );
        v
    }

    /// `C(λ, μ, n) = Σ_z Σ_{m=0}^{n} c(z,x,l(x)−l(z)−m) · c(z,y,l(y)−l(z)−n+m)`,
    /// summed over `z ≤ x, y` with `z·λ⁻` dominant.
    pub fn big_c(&self, lambda: &Weight, mu: &Weight, n: u32, p: i64) -> Result<BigInt> {
        let x = self.locate_dominant(lambda, p)?;
        let y = self.locate_dominant(mu, p)?;
        self.big_c_located(&x, &y, n, p)
    }

    fn big_c_located(&self, x: &AlcoveLocation, y: &AlcoveLocation, n: u32, p: i64) -> Result<BigInt> {
        let mut total = BigInt::zero();
        if x.antidominant_rep != y.antidominant_rep {
            return Ok(total);
        }
        let rep = &x.antidominant_rep;
        let col_y: HashMap<AffineElement, IntPolynomial> = self
            .kl
            .column(&y.element)
            .into_iter()
            .map(|e| (e.element, e.poly))
            .collect();
        let (lx, ly, n) = (x.length as i64, y.length as i64, n as i64);
        for e in self.kl.column(&x.element) {
            let Some(py) = col_y.get(&e.element) else { continue };
            if !self.group.dot_action(&e.element, rep, p)?.is_dominant() {
                continue;
            }
            let lz = e.length as i64;
            for m in 0..=n {
                let a = e.poly.t_coeff(lx - lz - m);
                if a.is_zero() {
                    continue;
                }
                total += a * py.t_coeff(ly - lz - n + m);
            }
        }
        assert!(
            total.is_zero() || (lx - ly - n) % 2 == 0,
            "parity violated: C = {total} at n = {n}, lengths {lx} and {ly}"
        );
        Ok(total)
    }

    /// `Σ_{m=0}^{n} Σ_ν dim Ext^m_G(Δ^red(λ'), ∇(ν)) · dim Ext^{n−m}_G(Δ(ν), ∇_red(μ₀))`,
    /// with `ν` running over the dominant weights of the common orbit of length
    /// at most `max(l(λ'), l(μ₀))`, found by enumerating the group.
    pub fn ext_dim_g_red_red(&self, lambda_red: &Weight, mu0: &Weight, n: u32, p: i64) -> Result<BigInt> {
        let x = self.locate_dominant(lambda_red, p)?;
        let y = self.locate_dominant(mu0, p)?;
        let mut total = BigInt::zero();
        if x.antidominant_rep != y.antidominant_rep {
            return Ok(total);
        }
        let rep = &x.antidominant_rep;
        let max_len = x.length.max(y.length);
        for z in self.group.elements_up_to_length(max_len).into_iter().flatten() {
            let nu = self.group.dot_action(&z, rep, p)?;
            if !nu.is_dominant() {
                continue;
            }
            let zl = self.group.locate(&nu, p)?;
            for m in 0..=n {
                let a = self.pair_located(&x, &zl, m);
                if a.is_zero() {
                    continue;
                }
                total += a * self.small_c_located(&zl, &y, n - m);
            }
        }
        Ok(total)
    }

    /// Validity notes for a query on `weights` at `p`.
    pub fn advisories(&self, weights: &[&Weight], p: i64) -> Result<Vec<Advisory>> {
        let mut out = Vec::new();
        let report = self.rs.validate_p(p);
        if !report.is_ok() {
            out.push(Advisory::PrimeRange(report));
        }
        out.push(Advisory::LcfAssumed);
        let bound = self.rs.jantzen_bound(p);
        for w in weights {
            if !self.rs.in_jantzen_region(w, p)? {
                let v = *w + self.rs.rho();
                out.push(Advisory::OutsideJantzen {
                    weight: (*w).clone(),
                    pairing: self.rs.highest_short_root().pair(v.coords()),
                    bound,
                });
            }
        }
        out.dedup();
        Ok(out)
    }

    /// Dominant `τ` with `ht(pτ) ≤ ht(M) + b(n)(h−1)`, `b(n) = p⌊n/2⌋ + (n mod 2)`.
    ///
    /// `M` is the highest weight of the `G_1`-module whose cohomology is taken;
    /// the weights of `H^n(G_1, M)` are bounded by those of
    /// `⊕_{2i+j=n} S^i(u*)^{[1]} ⊗ Λ^j(u*) ⊗ M`.
    fn tau_candidates(&self, m: &Weight, n: u32, p: i64) -> Vec<Weight> {
        let h = self.rs.coxeter_number();
        let b = p * (n / 2) as i64 + (n % 2) as i64;
        let bound = self.rs.height(m) + Rational::from_integer(b * (h - 1));
        self.rs.dominant_weights_of_height_at_most(bound / Rational::from_integer(p))
    }

    /// The ∇-multiplicities of the Ext group described by `query`.
    ///
    /// With `omega` set, `τ` runs over the exact support of the tensor factor;
    /// otherwise over the height box of `tau_candidates`.
    pub fn multiplicity_table(&self, query: &MultiplicityQuery) -> Result<MultiplicityTable> {
        let p = query.p;
        let (lambda, mu, n) = (&query.lambda, &query.mu, query.n);
        let lam = self.locate_dominant(lambda, p)?;
        let mloc = self.locate_dominant(mu, p)?;
        if let Some(w) = &query.omega {
            self.rs.check_rank(w)?;
            if !w.is_dominant() {
                return Err(Error::NotDominant(w.clone()));
            }
        }
        let advisories = self.advisories(&[lambda, mu], p)?;
        let (l0, l1) = self.group.restricted_decompose(lambda, p)?;
        let (m0, m1) = self.group.restricted_decompose(mu, p)?;
        let star = |w: &Weight| self.rs.star(w);

        let mut entries: BTreeMap<Weight, BigInt> = BTreeMap::new();
        // No linkage gate on (λ, μ) here: shifting by pτ moves between W_p-orbits,
        // so each coefficient applies its own linkage test.
        let (tensor_args, candidates): (Vec<Weight>, Vec<Weight>) = match query.variant {
            Variant::RedRed => (
                vec![star(&l1), m1.clone()],
                match &query.omega {
                    Some(w) => self.tau_support(w, &[l1.clone(), star(&m1)])?,
                    None => self.tau_candidates(&(&star(&l0) + &m0), n, p),
                },
            ),
            Variant::DeltaRed => (
                vec![m1.clone()],
                match &query.omega {
                    Some(w) => self.tau_support(w, &[star(&m1)])?,
                    None => self.tau_candidates(&(&star(lambda) + &m0), n, p),
                },
            ),
            Variant::RedNabla => (
                vec![star(&l1)],
                match &query.omega {
                    Some(w) => self.tau_support(w, std::slice::from_ref(&l1))?,
                    None => self.tau_candidates(&(&star(&l0) + mu), n, p),
                },
            ),
        };
        let m0loc = self.group.locate(&m0, p)?;
        let coefficient = |tau: &Weight| -> Result<BigInt> {
            Ok(match query.variant {
                Variant::RedRed => {
                    let x = self.group.locate(&(&l0 + &tau.scale(p)), p)?;
                    self.big_c_located(&x, &m0loc, n, p)?
                }
                Variant::DeltaRed => {
                    let y = self.group.locate(&(&m0 + &star(tau).scale(p)), p)?;
                    self.small_c_located(&lam, &y, n)
                }
                Variant::RedNabla => {
                    let y = self.group.locate(&(&l0 + &tau.scale(p)), p)?;
                    self.small_c_located(&mloc, &y, n)
                }
            })
        };
        let contributions = self.exec.try_map(&candidates, |tau| -> Result<Option<CharacterMap>> {
            let c = coefficient(tau)?;
            if c.is_zero() {
                return Ok(None);
            }
            let k = c.to_u64().ok_or(Error::Overflow("KL coefficient"))?;
            let mut factor = CharacterMap::from_iter([(tau.clone(), 1)]);
            for a in &tensor_args {
                factor = self.chars.tensor_with(&factor, a)?;
            }
            Ok(Some(
                factor
                    .into_iter()
                    .filter(|(w, _)| query.omega.as_ref().is_none_or(|o| o == w))
                    .map(|(w, m)| (w, m * k))
                    .collect(),
            ))
        })?;
        for c in contributions.into_iter().flatten() {
            for (w, m) in c {
                *entries.entry(w).or_default() += m;
            }
        }
        Ok(MultiplicityTable {
            query: query.clone(),
            entries,
            advisories,
        })
    }

    /// Dominant `τ` with `[∇(ω) ⊗ ∇(a_1) ⊗ … : ∇(τ)] ≠ 0`; outside this set the
    /// tensor factor of every variant vanishes.
    fn tau_support(&self, omega: &Weight, dual_args: &[Weight]) -> Result<Vec<Weight>> {
        let mut m = CharacterMap::from_iter([(omega.clone(), 1)]);
        for a in dual_args {
            m = self.chars.tensor_with(&m, a)?;
        }
        Ok(m.weights().cloned().collect())
    }

    /// Evaluates several queries, in parallel under the engine's execution policy.
    pub fn multiplicity_tables(&self, queries: &[MultiplicityQuery]) -> Result<Vec<MultiplicityTable>> {
        self.exec.try_map(queries, |q| self.multiplicity_table(q))
    }

    /// `μ = w·0 + pξ` with `w` finite and `ξ` dominant, if such a pair exists.
    pub fn finite_decomposition(&self, mu: &Weight, p: i64) -> Result<Weight> {
        self.rs.check_rank(mu)?;
        for u in self.rs.finite_dot_orbit_of_zero() {
            let d = mu - &u;
            if d.coords().iter().all(|c| c % p == 0) {
                let xi = Weight::new(d.coords().iter().map(|c| c / p).collect());
                if xi.is_dominant() {
                    return Ok(xi);
                }
            }
        }
        Err(Error::NoFiniteDecomposition { weight: mu.clone() })
    }

    /// Both sides of `Σ_n [Ext^n_{G_1}(k, ∇(μ))^{[-1]} : ∇(τ)] = dim Δ(τ)_ξ`.
    ///
    /// The left side is `Σ_n red_nabla(0, μ, n)[τ] = Σ_n c(μ, pτ, n)`, whose
    /// terms vanish for `n > l(pτ) − l(μ)`.
    pub fn weight_space_identity(&self, mu: &Weight, tau: &Weight, p: i64) -> Result<WeightSpaceCheck> {
        self.check_p(p)?;
        let xi = self.finite_decomposition(mu, p)?;
        self.locate_dominant(mu, p)?;
        if !tau.is_dominant() {
            return Err(Error::NotDominant(tau.clone()));
        }
        let zero = self.rs.zero();
        let top = self.locate_dominant(&tau.scale(p), p)?.length as i64
            - self.group.locate(mu, p)?.length as i64;
        let mut lhs = BigInt::zero();
        for n in 0..=top.max(-1) {
            let q = MultiplicityQuery {
                variant: Variant::RedNabla,
                lambda: zero.clone(),
                mu: mu.clone(),
                n: n as u32,
                p,
                omega: Some(tau.clone()),
            };
            lhs += self.multiplicity_table(&q)?.get(tau);
        }
        let rhs = BigInt::from(self.chars.dim_weight_space(tau, &xi)?);
        Ok(WeightSpaceCheck {
            mu: mu.clone(),
            tau: tau.clone(),
            xi,
            lhs,
            rhs,
        })
    }

    /// Dominant `τ` with `ht(τ) ≤ ht(ξ) + 2(h − 1)`: the box swept for the
    /// weight-space identity at `μ`.
    pub fn weight_space_taus(&self, xi: &Weight) -> Vec<Weight> {
        let h = self.rs.coxeter_number();
        self.rs
            .dominant_weights_of_height_at_most(self.rs.height(xi) + Rational::from_integer(2 * (h - 1)))
    }

    /// Runs the weight-space identity for every `p`-regular, finitely
    /// decomposable dominant `μ` in `mus` and every `τ` in its box.
    pub fn weight_space_sweep(&self, mus: &[Weight], p: i64) -> Result<Vec<WeightSpaceCheck>> {
        let cases: Vec<(Weight, Weight)> = mus
            .iter()
            .filter(|mu| self.group.is_p_regular(mu, p))
            .filter_map(|mu| self.finite_decomposition(mu, p).ok().map(|xi| (mu, xi)))
            .flat_map(|(mu, xi)| self.weight_space_taus(&xi).into_iter().map(|t| (mu.clone(), t)))
            .collect();
        self.exec
            .try_map(&cases, |(mu, tau)| self.weight_space_identity(mu, tau, p))
    }

    /// Compares `red_nabla(λ, μ, n)` with `delta_red(μ⋆, λ⋆, n)`; returns both tables.
    pub fn duality_pair(
        &self,
        lambda: &Weight,
        mu: &Weight,
        n: u32,
        p: i64,
    ) -> Result<(MultiplicityTable, MultiplicityTable)> {
        let a = self.multiplicity_table(&MultiplicityQuery {
            variant: Variant::RedNabla,
            lambda: lambda.clone(),
            mu: mu.clone(),
            n,
            p,
            omega: None,
        })?;
        let b = self.multiplicity_table(&MultiplicityQuery {
            variant: Variant::DeltaRed,
            lambda: self.rs.star(mu),
            mu: self.rs.star(lambda),
            n,
            p,
            omega: None,
        })?;
        Ok((a, b))
    }
}
