//! Kazhdan–Lusztig polynomials of the affine Weyl group.
//!
//! Polynomials are computed a column at a time: `column(y)` holds `P_{x,y}`
//! for every `x ≤ y`, so its key set is the lower Bruhat interval of `y`.
//! With `s` the lowest right descent of `y` and `v = ys`,
//!
//! ```text
//! P_{x,y} = q^{1-c} P_{xs,v} + q^c P_{x,v} − Σ_{z<v, zs<z} μ(z,v) q^{(l(y)-l(z))/2} P_{x,z}
//! ```
//!
//! where `c = 1` if `xs < x` and `0` otherwise.
//!
//! The table is keyed internally by interned elements and externally by
//! canonical reduced words, which do not depend on `p`.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::affine_weyl::{AffineElement, AffineWeyl, Word};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

const FORMAT: &str = "kltable";
const VERSION: u64 = 1;

type Column = HashMap<u32, IntPolynomial>;

struct Node {
    elem: AffineElement,
    len: usize,
    desc: u16,
    word: Word,
    right: Vec<Option<u32>>,
}

#[derive(Default)]
struct State {
    nodes: Vec<Node>,
    index: HashMap<AffineElement, u32>,
    lower: HashMap<u32, Arc<Vec<u32>>>,
    columns: HashMap<u32, Arc<Column>>,
    /// Entries loaded from a cache file, by `y` then `x`.
    seeds: HashMap<u32, HashMap<u32, IntPolynomial>>,
}

impl State {
    fn intern(&mut self, g: &AffineWeyl, x: &AffineElement) -> u32 {
        if let Some(&id) = self.index.get(x) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            elem: x.clone(),
            len: g.length(x),
            desc: g.right_descent_mask(x),
            word: g.reduced_word(x),
            right: vec![None; g.generator_count()],
        });
        self.index.insert(x.clone(), id);
        id
    }

    fn right(&mut self, g: &AffineWeyl, id: u32, s: usize) -> u32 {
        if let Some(r) = self.nodes[id as usize].right[s] {
            return r;
        }
        let prod = g
            .apply_generator(&self.nodes[id as usize].elem, s, crate::affine_weyl::Side::Right)
            .expect("generator index in range");
        let r = self.intern(g, &prod);
        self.nodes[id as usize].right[s] = Some(r);
        self.nodes[r as usize].right[s] = Some(id);
        r
    }

    fn len(&self, id: u32) -> usize {
        self.nodes[id as usize].len
    }

    fn has_descent(&self, id: u32, s: usize) -> bool {
        self.nodes[id as usize].desc & (1 << s) != 0
    }

    fn lowest_descent(&self, id: u32) -> usize {
        self.nodes[id as usize].desc.trailing_zeros() as usize
    }

    /// `{x ≤ y}` = `L(ys) ∪ L(ys)·s` for a right descent `s` of `y`.
    fn lower(&mut self, g: &AffineWeyl, y: u32) -> Arc<Vec<u32>> {
        if let Some(l) = self.lower.get(&y) {
            return l.clone();
        }
        let set = if self.len(y) == 0 {
            vec![y]
        } else {
            let s = self.lowest_descent(y);
            let v = self.right(g, y, s);
            let lv = self.lower(g, v);
            let mut set = Vec::with_capacity(2 * lv.len());
            for &x in lv.iter() {
                set.push(x);
                set.push(self.right(g, x, s));
            }
            set.sort_unstable();
            set.dedup();
            set
        };
        let set = Arc::new(set);
        self.lower.insert(y, set.clone());
        set
    }

    fn column(&mut self, g: &AffineWeyl, y: u32) -> Arc<Column> {
        if let Some(c) = self.columns.get(&y) {
            return c.clone();
        }
        let lower = self.lower(g, y);
        if let Some(seed) = self.seeds.get(&y) {
            if lower.iter().all(|x| seed.contains_key(x)) {
                let col: Column = lower.iter().map(|x| (*x, seed[x].clone())).collect();
                let col = Arc::new(col);
                self.columns.insert(y, col.clone());
                return col;
            }
        }
        let ly = self.len(y);
        let mut col = Column::with_capacity(lower.len());
        if ly == 0 {
            col.insert(y, IntPolynomial::one());
        } else {
            let s = self.lowest_descent(y);
            let v = self.right(g, y, s);
            let colv = self.column(g, v);
            let lv = self.len(v);

            let mut mus: Vec<(u32, BigInt)> = colv
                .iter()
                .filter(|(&z, _)| z != v && self.has_descent(z, s))
                .filter_map(|(&z, pz)| {
                    let d = lv - self.len(z);
                    if d.is_multiple_of(2) {
                        return None;
                    }
                    let m = pz.coeff((d - 1) / 2);
                    (!m.is_zero()).then_some((z, m))
                })
                .collect();
            mus.sort_unstable_by_key(|(z, _)| *z);
            let corrections: Vec<(Arc<Column>, usize, BigInt)> = mus
                .into_iter()
                .map(|(z, m)| {
                    let shift = (ly - self.len(z)) / 2;
                    (self.column(g, z), shift, -m)
                })
                .collect();

            let one = BigInt::one();
            for &x in lower.iter() {
                let c = self.has_descent(x, s);
                let xs = self.right(g, x, s);
                let mut p = IntPolynomial::zero();
                if let Some(a) = colv.get(&xs) {
                    p.add_scaled_shifted(a, usize::from(!c), &one);
                }
                if let Some(b) = colv.get(&x) {
                    p.add_scaled_shifted(b, usize::from(c), &one);
                }
                for (colz, shift, neg_mu) in &corrections {
                    if let Some(pxz) = colz.get(&x) {
                        p.add_scaled_shifted(pxz, *shift, neg_mu);
                    }
                }
                self.assert_invariants(x, y, &p);
                col.insert(x, p);
            }
        }
        let col = Arc::new(col);
        self.columns.insert(y, col.clone());
        col
    }

    fn assert_invariants(&self, x: u32, y: u32, p: &IntPolynomial) {
        if x == y {
            assert!(p.is_one(), "P_{{y,y}} = {p} for y = {:?}", self.nodes[y as usize].word);
            return;
        }
        let d = self.len(y) - self.len(x);
        let ok = p.coeff(0).is_one()
            && p.has_nonnegative_coeffs()
            && p.degree().is_some_and(|k| 2 * k < d);
        assert!(
            ok,
            "KL invariant violated: P_{{{:?},{:?}}} = {p}",
            self.nodes[x as usize].word,
            self.nodes[y as usize].word
        );
    }
}

/// One entry `P_{x,y}` of a column.
#[derive(Clone, Debug)]
pub struct ColumnEntry {
    pub element: AffineElement,
    pub length: usize,
    pub poly: IntPolynomial,
}

/// Memo table of Kazhdan–Lusztig polynomials for one affine Weyl group.
///
/// Lookups take a shared lock; computing a missing column takes the
/// exclusive lock and publishes the whole column at once.
pub struct KlTable {
    group: AffineWeyl,
    state: RwLock<State>,
}

impl KlTable {
    pub fn new(group: AffineWeyl) -> Self {
        KlTable {
            group,
            state: RwLock::new(State::default()),
        }
    }

    pub fn group(&self) -> &AffineWeyl {
        &self.group
    }

    fn with_column<R>(&self, y: &AffineElement, f: impl FnOnce(&State, &Column) -> R) -> R {
        {
            let st = self.state.read().expect("kl table lock poisoned");
            if let Some(col) = st.index.get(y).and_then(|id| st.columns.get(id)) {
                return f(&st, col);
            }
        }
        let mut st = self.state.write().expect("kl table lock poisoned");
        let id = st.intern(&self.group, y);
        let col = st.column(&self.group, id);
        f(&st, &col)
    }

    /// `P_{x,y}`; zero unless `x ≤ y`.
    pub fn kl_polynomial(&self, x: &AffineElement, y: &AffineElement) -> IntPolynomial {
        self.with_column(y, |st, col| {
            st.index
                .get(x)
                .and_then(|id| col.get(id))
                .cloned()
                .unwrap_or_default()
        })
    }

    /// Coefficient of `q^{(l(y)−l(x)−1)/2}` in `P_{x,y}`; zero for even length difference.
    pub fn mu_coefficient(&self, x: &AffineElement, y: &AffineElement) -> BigInt {
        let lx = self.group.length(x);
        let ly = self.group.length(y);
        if ly <= lx || (ly - lx).is_multiple_of(2) {
            return BigInt::zero();
        }
        self.kl_polynomial(x, y).coeff((ly - lx - 1) / 2)
    }

    /// Coefficient of `t^s` in `P_{u,v}`, with `q = t²`.
    pub fn c_coeff(&self, u: &AffineElement, v: &AffineElement, s: i64) -> BigInt {
        if s < 0 || s % 2 != 0 {
            return BigInt::zero();
        }
        self.kl_polynomial(u, v).t_coeff(s)
    }

    /// All `P_{x,y}` with `x ≤ y`, sorted by length then reduced word.
    pub fn column(&self, y: &AffineElement) -> Vec<ColumnEntry> {
        let mut out = self.with_column(y, |st, col| {
            col.iter()
                .map(|(&x, p)| {
                    let n = &st.nodes[x as usize];
                    (
                        n.word.clone(),
                        ColumnEntry {
                            element: n.elem.clone(),
                            length: n.len,
                            poly: p.clone(),
                        },
                    )
                })
                .collect::<Vec<_>>()
        });
        out.sort_by(|a, b| a.1.length.cmp(&b.1.length).then_with(|| a.0.cmp(&b.0)));
        out.into_iter().map(|(_, e)| e).collect()
    }

    /// The lower Bruhat interval `{x ≤ y}`.
    pub fn lower_interval(&self, y: &AffineElement) -> Vec<AffineElement> {
        self.column(y).into_iter().map(|e| e.element).collect()
    }

    /// Bruhat order read off the memoised lower intervals.
    pub fn bruhat_leq(&self, x: &AffineElement, y: &AffineElement) -> bool {
        self.with_column(y, |st, col| st.index.get(x).is_some_and(|id| col.contains_key(id)))
    }

    pub fn kl_polynomial_by_words(&self, x: &[u8], y: &[u8]) -> Result<IntPolynomial> {
        let x = self.group.element_from_reduced_word(x)?;
        let y = self.group.element_from_reduced_word(y)?;
        Ok(self.kl_polynomial(&x, &y))
    }

    /// Number of memoised polynomials.
    pub fn entry_count(&self) -> usize {
        let st = self.state.read().expect("kl table lock poisoned");
        st.columns.values().map(|c| c.len()).sum()
    }

    fn header(&self) -> String {
        let rs = self.group.root_system();
        format!(
            "{{\"format\":\"{FORMAT}\",\"version\":{VERSION},\"series\":\"{}\",\"rank\":{}}}",
            rs.series(),
            rs.rank()
        )
    }

    /// Writes the table as JSON lines: a header, then one record per entry,
    /// sorted by `(l(y), y, l(x), x)`.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let st = self.state.read().expect("kl table lock poisoned");
        let mut entries: HashMap<(u32, u32), &IntPolynomial> = HashMap::new();
        for (&y, seed) in &st.seeds {
            for (&x, p) in seed {
                entries.insert((x, y), p);
            }
        }
        for (&y, col) in &st.columns {
            for (&x, p) in col.iter() {
                entries.insert((x, y), p);
            }
        }
        let mut records: Vec<(&Node, &Node, &IntPolynomial)> = entries
            .into_iter()
            .map(|((x, y), p)| (&st.nodes[x as usize], &st.nodes[y as usize], p))
            .collect();
        records.sort_by(|a, b| {
            (a.1.len, &a.1.word, a.0.len, &a.0.word).cmp(&(b.1.len, &b.1.word, b.0.len, &b.0.word))
        });
        writeln!(out, "{}", self.header())?;
        let join = |w: &[u8]| w.iter().map(u8::to_string).collect::<Vec<_>>().join(",");
        for (x, y, p) in records {
            let coeffs = p.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>().join(",");
            writeln!(
                out,
                "{{\"x\":[{}],\"y\":[{}],\"p_of_q\":[{}]}}",
                join(&x.word),
                join(&y.word),
                coeffs
            )?;
        }
        Ok(())
    }

    /// Loads records written by [`KlTable::save`]. Every record is checked
    /// against the degree bound; the first violation rejects the file and
    /// nothing is merged. Returns the number of records read.
    pub fn load<R: BufRead>(&self, input: R) -> Result<usize> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines
            .find(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
            .ok_or_else(|| Error::Cache("empty file".into()))?;
        self.check_header(&header?)?;

        let g = &self.group;
        let mut parsed: Vec<(AffineElement, AffineElement, IntPolynomial)> = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Cache(format!("line {}: {msg}", lineno + 1));
            let v: serde_json::Value = serde_json::from_str(&line)?;
            let word = |key: &str| -> Result<Word> {
                v.get(key)
                    .and_then(|a| a.as_array())
                    .ok_or_else(|| bad(format!("missing {key:?}")))?
                    .iter()
                    .map(|n| {
                        n.as_u64()
                            .filter(|&i| (i as usize) < g.generator_count())
                            .map(|i| i as u8)
                            .ok_or_else(|| bad(format!("bad generator {n} in {key:?}")))
                    })
                    .collect()
            };
            let xw = word("x")?;
            let yw = word("y")?;
            let coeffs = v
                .get("p_of_q")
                .and_then(|a| a.as_array())
                .ok_or_else(|| bad("missing \"p_of_q\"".into()))?
                .iter()
                .map(|n| {
                    n.as_number()
                        .and_then(|n| n.to_string().parse::<BigInt>().ok())
                        .ok_or_else(|| bad(format!("bad coefficient {n}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let p = IntPolynomial::from_coeffs(coeffs);
            let x = g.element_from_reduced_word(&xw).map_err(|e| bad(e.to_string()))?;
            let y = g.element_from_reduced_word(&yw).map_err(|e| bad(e.to_string()))?;
            if g.reduced_word(&x) != xw || g.reduced_word(&y) != yw {
                return Err(bad("word is not in canonical form".into()));
            }
            let (lx, ly) = (xw.len(), yw.len());
            let valid = if x == y {
                p.is_one()
            } else {
                lx < ly && p.degree().is_some_and(|k| 2 * k < ly - lx)
            };
            if !valid {
                return Err(bad(format!(
                    "P_{{{xw:?},{yw:?}}} = {p} violates the degree bound"
                )));
            }
            parsed.push((x, y, p));
        }

        let count = parsed.len();
        let mut st = self.state.write().expect("kl table lock poisoned");
        for (x, y, p) in parsed {
            let xi = st.intern(g, &x);
            let yi = st.intern(g, &y);
            st.seeds.entry(yi).or_default().insert(xi, p);
        }
        Ok(count)
    }

    fn check_header(&self, line: &str) -> Result<()> {
        let v: serde_json::Value = serde_json::from_str(line)?;
        let rs = self.group.root_system();
        let ok = v.get("format").and_then(|f| f.as_str()) == Some(FORMAT)
            && v.get("version").and_then(|f| f.as_u64()) == Some(VERSION);
        if !ok {
            return Err(Error::Cache(format!("unrecognised header {line}")));
        }
        let series = v.get("series").and_then(|f| f.as_str());
        let rank = v.get("rank").and_then(|f| f.as_u64());
        if series != Some(rs.series().to_string().as_str()) || rank != Some(rs.rank() as u64) {
            return Err(Error::Cache(format!(
                "cache is for {}{}, table is {}",
                series.unwrap_or("?"),
                rank.map_or("?".into(), |r| r.to_string()),
                rs.name()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{RootSystem, Series};

    fn table(s: Series, n: usize) -> KlTable {
        KlTable::new(AffineWeyl::new(Arc::new(RootSystem::new(s, n).unwrap())))
    }

    #[test]
    fn diagonal_and_incomparable() {
        let t = table(Series::A, 2);
        let g = t.group().clone();
        let x = g.from_word(&[1, 2, 1]).unwrap();
        assert!(t.kl_polynomial(&x, &x).is_one());
        let y = g.from_word(&[0]).unwrap();
        assert!(t.kl_polynomial(&x, &y).is_zero());
        assert!(t.kl_polynomial(&y, &x).is_zero());
    }

    #[test]
    fn mu_and_c_coefficients() {
        let t = table(Series::A, 1);
        let g = t.group().clone();
        let x = g.from_word(&[0]).unwrap();
        let y = g.from_word(&[1, 0]).unwrap();
        assert_eq!(t.mu_coefficient(&x, &y), BigInt::one());
        let y4 = g.from_word(&[1, 0, 1, 0]).unwrap();
        assert_eq!(t.mu_coefficient(&x, &y4), BigInt::zero());
        let z = g.from_word(&[1]).unwrap();
        let w = g.from_word(&[0, 1]).unwrap();
        // [1] ≤ [0,1] but [0] ≰ [1]
        assert_eq!(t.mu_coefficient(&z, &w), BigInt::one());
        assert_eq!(t.mu_coefficient(&x, &z), BigInt::zero());
        assert_eq!(t.c_coeff(&x, &x, 0), BigInt::one());
        assert_eq!(t.c_coeff(&x, &y4, 0), BigInt::one());
        assert_eq!(t.c_coeff(&x, &y4, 1), BigInt::zero());
        assert_eq!(t.c_coeff(&x, &y4, 2), BigInt::zero());
        assert_eq!(t.c_coeff(&x, &y4, -2), BigInt::zero());
    }

    #[test]
    fn dihedral_polynomials_are_one() {
        let t = table(Series::A, 1);
        let g = t.group().clone();
        let elems: Vec<_> = g.elements_up_to_length(10).into_iter().flatten().collect();
        for y in &elems {
            for x in &elems {
                let p = t.kl_polynomial(x, y);
                if g.bruhat_leq(x, y) {
                    assert!(p.is_one());
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn lower_intervals_agree_with_descent_recursion() {
        let t = table(Series::B, 2);
        let g = t.group().clone();
        let elems: Vec<_> = g.elements_up_to_length(5).into_iter().flatten().collect();
        for y in &elems {
            for x in &elems {
                assert_eq!(t.bruhat_leq(x, y), g.bruhat_leq(x, y));
            }
        }
    }

    #[test]
    fn nontrivial_polynomial_in_affine_a2() {
        // some pair in affine A2 of length ≤ 7 has P ≠ 1
        let t = table(Series::A, 2);
        let g = t.group().clone();
        let layers = g.elements_up_to_length(7);
        let found = layers[7].iter().any(|y| t.column(y).iter().any(|e| !e.poly.is_one()));
        assert!(found);
    }

    #[test]
    fn save_load_round_trip() {
        let t = table(Series::A, 2);
        let g = t.group().clone();
        let y = g.from_word(&[0, 1, 2, 1, 0, 2, 1]).unwrap();
        let col = t.column(&y);
        let mut buf = Vec::new();
        t.save(&mut buf).unwrap();
        let fresh = table(Series::A, 2);
        let n = fresh.load(buf.as_slice()).unwrap();
        assert_eq!(n, t.entry_count());
        let again = fresh.column(&y);
        assert_eq!(col.len(), again.len());
        for (a, b) in col.iter().zip(&again) {
            assert_eq!(a.element, b.element);
            assert_eq!(a.poly, b.poly);
        }
        let mut buf2 = Vec::new();
        fresh.save(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn load_rejects_degree_violation() {
        let t = table(Series::A, 1);
        let text = "{\"format\":\"kltable\",\"version\":1,\"series\":\"A\",\"rank\":1}\n\
                    {\"x\":[],\"y\":[0],\"p_of_q\":[1]}\n\
                    {\"x\":[],\"y\":[1,0],\"p_of_q\":[1,1]}\n";
        let err = t.load(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(t.entry_count(), 0);
    }

    #[test]
    fn load_rejects_wrong_system() {
        let t = table(Series::A, 2);
        let text = "{\"format\":\"kltable\",\"version\":1,\"series\":\"A\",\"rank\":1}\n";
        assert!(matches!(t.load(text.as_bytes()), Err(Error::Cache(_))));
    }
}
