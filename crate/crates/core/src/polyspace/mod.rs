//! Codimensions and multihomogeneous dimensions of `A(m,w)` and `A(m,w)♯`.
//!
//! A row of the evaluation matrix is a multilinear monomial, a column is a
//! substitution class together with the basis atom it produces. Every
//! nonzero evaluation in these algebras is a left-normed product
//! `z · l_1 ⋯ l_r` once unit leaves are deleted, and the letters `l_s` are
//! forced by the starting atom. The fast path below enumerates exactly
//! these supports instead of scanning all substitutions; the brute-force
//! path evaluates every certified substitution and serves as a reference.

pub mod monomial;
pub mod rank;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{evaluate_atoms, AlgebraSpec, BasisElement, StructureAlgebra};
use crate::error::{Error, Result};
use monomial::{check_cap, estimate_rows, factorial, MonomialMode, MonomialSpace, Tree};
use rank::{certified_rank, random_primes, ExactPolicy, RankCertificate, SparseMatrix};

pub use monomial::{enumerate_multilinear, Monomial};

pub const CAP_UNITAL: usize = 7;
pub const CAP_NON_UNITAL: usize = 9;
/// Largest degree the brute-force reference path accepts.
pub const BRUTE_FORCE_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub seed: u64,
    pub cap_override: bool,
    /// Keep every substitution window at length `n + 1 + window_extra`
    /// instead of the shortest window that determines the value.
    pub truncate_windows: bool,
    pub window_extra: usize,
    pub exact: ExactPolicy,
    /// Row set for non-unital algebras; unital algebras always use all bracketings.
    pub non_unital_rows: MonomialMode,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            seed: 0x5eed_0001,
            cap_override: false,
            truncate_windows: true,
            window_extra: 0,
            exact: ExactPolicy::OnDisagreement,
            non_unital_rows: MonomialMode::LeftNormed,
        }
    }
}

impl EngineOptions {
    pub fn primes(&self) -> Vec<u64> {
        random_primes(self.seed, 2)
    }
}

/// One substitution `x_t ↦ values[t]`; `window` is the word factor read from
/// the level of the Z atom, if there is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubstitutionColumn {
    pub values: Vec<BasisElement>,
    pub window: Option<Vec<u8>>,
}

/// Every substitution class relevant in degree `n`: values in `{a,b}`
/// (and `1` for the unital algebra) with at most one Z atom, whose level
/// ranges over first occurrences of the certified factors of length `n+1`.
pub fn certified_substitutions(n: usize, spec: &AlgebraSpec) -> Result<Vec<SubstitutionColumn>> {
    if n == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    let factors = spec.word().certified_factors(n + 1)?;
    let mut letters = vec![BasisElement::A, BasisElement::B];
    if spec.unital() {
        letters.insert(0, BasisElement::One);
    }
    let mut out = Vec::new();
    for values in tuples(&letters, n) {
        out.push(SubstitutionColumn { values, window: None });
    }
    for (factor, &level) in &factors.factors {
        let k = spec.m() + factor[0] as usize;
        for p in 0..n {
            for j in 1..=k {
                for rest in tuples(&letters, n - 1) {
                    let mut values = rest;
                    values.insert(p, BasisElement::z(level, j));
                    out.push(SubstitutionColumn {
                        values,
                        window: Some(factor.clone()),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn tuples<T: Copy>(alphabet: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                alphabet.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct RankKey {
    n: usize,
    blocks: Vec<usize>,
}

/// A starting Z atom up to the word window that governs its products.
#[derive(Clone, Debug)]
struct Start {
    /// Letter code (1 = a, 2 = b) of each forced step.
    steps: Vec<u8>,
    /// Output code after `t` steps, for `t = 0..=steps.len()`.
    outputs: Vec<u16>,
}

const CODE_ONE: u64 = 0;
const CODE_A: u64 = 1;
const CODE_B: u64 = 2;
const CODE_Z: u64 = 3;

fn output_code(offset: usize, index: usize) -> u16 {
    (3 + offset * 64 + (index - 1)) as u16
}

/// Evaluation engine for one algebra; caches ranks across calls.
pub struct Engine {
    spec: AlgebraSpec,
    opts: EngineOptions,
    primes: Vec<u64>,
    /// `window length → (first start id, starts)`.
    starts: BTreeMap<usize, (u32, Vec<Start>)>,
    next_start: u32,
    cache: Mutex<HashMap<RankKey, RankCertificate>>,
    rows_audited: Mutex<usize>,
}

impl Engine {
    pub fn new(spec: AlgebraSpec, opts: EngineOptions) -> Result<Self> {
        if spec.m() + 1 >= 64 {
            return Err(Error::InvalidSpec("the rank engine supports m ≤ 62".into()));
        }
        let primes = opts.primes();
        Ok(Engine {
            spec,
            opts,
            primes,
            starts: BTreeMap::new(),
            next_start: 1,
            cache: Mutex::new(HashMap::new()),
            rows_audited: Mutex::new(0),
        })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn options(&self) -> &EngineOptions {
        &self.opts
    }

    fn row_mode(&self) -> MonomialMode {
        if self.spec.unital() {
            MonomialMode::All
        } else {
            self.opts.non_unital_rows
        }
    }

    fn check_caps(&self, n: usize) -> Result<()> {
        let mode = self.row_mode();
        let (cap, what) = if self.spec.unital() {
            (CAP_UNITAL, "unital runs over all bracketings")
        } else if mode == MonomialMode::LeftNormed {
            (CAP_NON_UNITAL, "non-unital left-normed runs")
        } else {
            (monomial::DEFAULT_CAP_ALL, "runs over all bracketings")
        };
        check_cap(n, cap, what, estimate_rows(n, mode), self.opts.cap_override)
    }

    fn window_for(&self, n: usize, k: usize) -> usize {
        if self.opts.truncate_windows {
            k.saturating_sub(1).max(1)
        } else {
            n + 1 + self.opts.window_extra
        }
    }

    fn ensure_starts(&mut self, len: usize) -> Result<()> {
        if self.starts.contains_key(&len) {
            return Ok(());
        }
        let factors = self.spec.word().certified_factors(len)?;
        let m = self.spec.m();
        let first = self.next_start;
        let mut list = Vec::new();
        for factor in factors.factors.keys() {
            let k0 = m + factor[0] as usize;
            for j in 1..=k0 {
                let (mut r, mut idx) = (0usize, j);
                let mut steps = Vec::with_capacity(len);
                let mut outputs = vec![output_code(0, j)];
                for _ in 0..len {
                    if r >= factor.len() {
                        break;
                    }
                    let k = m + factor[r] as usize;
                    if idx < k {
                        idx += 1;
                        steps.push(CODE_A as u8);
                    } else {
                        r += 1;
                        idx = 1;
                        steps.push(CODE_B as u8);
                    }
                    outputs.push(output_code(r, idx));
                }
                list.push(Start { steps, outputs });
            }
        }
        let total = first as usize + list.len();
        if total >= 1 << 16 {
            return Err(Error::Invariant("too many substitution classes for the column encoding".into()));
        }
        self.next_start = total as u32;
        self.starts.insert(len, (first, list));
        Ok(())
    }

    fn prepare(&mut self, n: usize) -> Result<()> {
        for k in 1..=n {
            let len = self.window_for(n, k);
            self.ensure_starts(len)?;
        }
        Ok(())
    }

    /// Column keys of the row of `perm` placed on `tree` (whose contraction
    /// table is `combs`).
    fn row_keys(&self, n: usize, perm: &[u8], combs: &[bool], out: &mut Vec<u64>) {
        let full = (1u32 << n) - 1;
        let masks: Box<dyn Iterator<Item = u32>> = if self.spec.unital() {
            Box::new(0..=full)
        } else {
            Box::new(std::iter::once(full))
        };
        let mut vars = Vec::with_capacity(n);
        for v in masks {
            let k = v.count_ones() as usize;
            if k >= 2 && !combs[v as usize] {
                continue;
            }
            vars.clear();
            vars.extend((0..n).filter(|s| v >> s & 1 == 1).map(|s| perm[s] as u64));
            let (first, starts) = &self.starts[&self.window_for(n, k)];
            match k {
                0 => out.push(CODE_ONE),
                1 => {
                    let x = vars[0];
                    out.push(CODE_A << (2 * x) | 1 << 40);
                    out.push(CODE_B << (2 * x) | 2 << 40);
                    for (sid, s) in starts.iter().enumerate() {
                        let id = *first as u64 + sid as u64;
                        out.push(CODE_Z << (2 * x) | id << 24 | (s.outputs[0] as u64) << 40);
                    }
                }
                _ => {
                    for (sid, s) in starts.iter().enumerate() {
                        let id = *first as u64 + sid as u64;
                        let mut key = CODE_Z << (2 * vars[0]) | id << 24;
                        for t in 1..k {
                            key |= (s.steps[t - 1] as u64) << (2 * vars[t]);
                        }
                        key |= (s.outputs[k - 1] as u64) << 40;
                        out.push(key);
                    }
                }
            }
        }
    }

    /// Evaluation matrix in degree `n`; with `blocks`, columns are summed over
    /// the orbits of the Young subgroup permuting variables inside each block.
    pub fn matrix(&mut self, n: usize, blocks: Option<&[usize]>) -> Result<SparseMatrix> {
        if n == 0 || n > 12 {
            return Err(Error::Domain(format!("degree {n} outside 1..=12")));
        }
        self.check_caps(n)?;
        self.prepare(n)?;
        let mode = self.row_mode();
        let space = MonomialSpace::new(n, mode)?;
        let combs: Vec<Vec<bool>> = space
            .trees()
            .iter()
            .map(|t| (0..1u32 << n).map(|mask| t.contracts_to_comb(mask)).collect())
            .collect();
        let ranges = blocks.map(block_ranges);
        if let Some(b) = blocks {
            if b.iter().sum::<usize>() != n {
                return Err(Error::Domain(format!("blocks {b:?} do not sum to {n}")));
            }
        }
        let this = &*self;
        let chunk = 1u64 << 15;
        let mut interned: HashMap<u64, u32> = HashMap::new();
        let mut seen: HashSet<Vec<(u64, u64)>> = HashSet::new();
        let mut rows: Vec<Vec<(u32, u64)>> = Vec::new();
        let mut lo = 0;
        while lo < space.len() {
            let hi = (lo + chunk).min(space.len());
            let batch: Vec<Vec<(u64, u64)>> = (lo..hi)
                .into_par_iter()
                .map_init(Vec::new, |buf, idx| {
                    let (t, perm) = space.parts(idx);
                    buf.clear();
                    this.row_keys(n, &perm, &combs[t], buf);
                    if let Some(r) = &ranges {
                        for key in buf.iter_mut() {
                            *key = canonical_key(*key, r);
                        }
                    }
                    buf.sort_unstable();
                    let mut row: Vec<(u64, u64)> = Vec::new();
                    for &key in buf.iter() {
                        match row.last_mut() {
                            Some((k, c)) if *k == key => *c += 1,
                            _ => row.push((key, 1)),
                        }
                    }
                    row
                })
                .collect();
            for row in batch {
                if row.is_empty() || !seen.insert(row.clone()) {
                    continue;
                }
                rows.push(
                    row.into_iter()
                        .map(|(key, c)| {
                            let next = interned.len() as u32;
                            (*interned.entry(key).or_insert(next), c)
                        })
                        .collect(),
                );
            }
            lo = hi;
        }
        Ok(SparseMatrix::new(interned.len(), rows))
    }

    fn rank_of(&mut self, n: usize, blocks: Vec<usize>) -> Result<RankCertificate> {
        let key = RankKey { n, blocks };
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        if !self.spec.unital() && self.opts.non_unital_rows == MonomialMode::LeftNormed {
            self.audit_left_normed(n.min(5))?;
        }
        let blocks_arg = if key.blocks.len() == n { None } else { Some(key.blocks.as_slice()) };
        let m = self.matrix(n, blocks_arg)?;
        let cert = certified_rank(&m, &self.primes, self.opts.exact);
        self.cache.lock().unwrap().insert(key, cert.clone());
        Ok(cert)
    }

    /// Compare left-normed rows against all bracketings in every degree up to
    /// `upto` (non-unital only). Fails loudly if they ever disagree.
    pub fn audit_left_normed(&mut self, upto: usize) -> Result<()> {
        if self.spec.unital() || *self.rows_audited.lock().unwrap() >= upto {
            return Ok(());
        }
        let mut all_opts = self.opts.clone();
        all_opts.non_unital_rows = MonomialMode::All;
        let mut all = Engine::new(self.spec.clone(), all_opts)?;
        let mut left_opts = self.opts.clone();
        left_opts.non_unital_rows = MonomialMode::LeftNormed;
        let mut left = Engine::new(self.spec.clone(), left_opts)?;
        for d in 1..=upto {
            let a = certified_rank(&all.matrix(d, None)?, &self.primes, self.opts.exact).rank;
            let l = certified_rank(&left.matrix(d, None)?, &self.primes, self.opts.exact).rank;
            if a != l {
                return Err(Error::Invariant(format!(
                    "left-normed rows give rank {l} but all bracketings give {a} in degree {d}"
                )));
            }
        }
        *self.rows_audited.lock().unwrap() = upto;
        Ok(())
    }

    /// `c_n` with its rank certificate.
    pub fn codimension(&mut self, n: usize) -> Result<(usize, RankCertificate)> {
        let cert = self.rank_of(n, vec![1; n])?;
        Ok((cert.rank, cert))
    }

    /// Dimension of the multihomogeneous component of multidegree `mu`
    /// modulo the identities; zero parts are ignored.
    pub fn homogeneous_dim(&mut self, mu: &[usize]) -> Result<(usize, RankCertificate)> {
        let mut blocks: Vec<usize> = mu.iter().copied().filter(|&p| p > 0).collect();
        let n: usize = blocks.iter().sum();
        if n == 0 {
            return Err(Error::Domain("multidegree must have positive total degree".into()));
        }
        // the dimension only depends on the multiset of block sizes
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let cert = self.rank_of(n, blocks)?;
        Ok((cert.rank, cert))
    }

    /// `dim W_n^{(d)}` modulo the identities, with the bound
    /// `d(m+1)n·Comp_w(n)` reported alongside.
    pub fn w_nd_dim(&mut self, n: usize, d: usize) -> Result<WndReport> {
        if d == 0 {
            return Err(Error::Domain("d must be positive".into()));
        }
        let mut parts = Vec::new();
        let mut dim: u128 = 0;
        for lambda in partitions_at_most(n, d) {
            let arrangements = arrangements(&lambda, d);
            let (h, _) = self.homogeneous_dim(&lambda)?;
            dim += arrangements * h as u128;
            parts.push(WndTerm {
                partition: lambda,
                arrangements,
                dim: h,
            });
        }
        let (comp, _) = self.spec.word().complexity(n)?;
        let bound = (d * (self.spec.m() + 1) * n) as u128 * comp as u128;
        Ok(WndReport {
            n,
            d,
            dim,
            dim_bound: bound,
            dim_bound_ok: self.spec.unital() || dim <= bound,
            terms: parts,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WndTerm {
    pub partition: Vec<usize>,
    /// Number of compositions with `d` slots that sort to `partition`.
    pub arrangements: u128,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WndReport {
    pub n: usize,
    pub d: usize,
    pub dim: u128,
    pub dim_bound: u128,
    /// Always true for unital algebras, where the bound is not claimed.
    pub dim_bound_ok: bool,
    pub terms: Vec<WndTerm>,
}

fn block_ranges(blocks: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut at = 0;
    for &b in blocks {
        out.push((at, at + b));
        at += b;
    }
    out
}

/// Sort the per-variable codes within each block so that substitutions in
/// one Young-subgroup orbit share a key.
fn canonical_key(key: u64, ranges: &[(usize, usize)]) -> u64 {
    let mut codes = key & 0xff_ffff;
    let mut buf = [0u8; 12];
    for &(lo, hi) in ranges {
        if hi - lo < 2 {
            continue;
        }
        for (i, v) in (lo..hi).enumerate() {
            buf[i] = (codes >> (2 * v) & 3) as u8;
        }
        buf[..hi - lo].sort_unstable();
        for (i, v) in (lo..hi).enumerate() {
            codes = codes & !(3 << (2 * v)) | (buf[i] as u64) << (2 * v);
        }
    }
    key & !0xff_ffff | codes
}

/// Partitions of `n` with at most `d` parts, in reverse lexicographic order.
pub fn partitions_at_most(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == d {
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, d, &mut Vec::new(), &mut out);
    out
}

/// `d! / ((d−h)! ∏ mult!)`: the number of weak compositions with `d` parts
/// that sort to `lambda`.
pub fn arrangements(lambda: &[usize], d: usize) -> u128 {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in lambda {
        *mult.entry(p).or_default() += 1;
    }
    *mult.entry(0).or_default() += d - lambda.len();
    mult.values().fold(factorial(d), |acc, &k| acc / factorial(k))
}

/// `c_n` with default options.
pub fn codimension(n: usize, spec: &AlgebraSpec) -> Result<(usize, RankCertificate)> {
    Engine::new(spec.clone(), EngineOptions::default())?.codimension(n)
}

pub fn homogeneous_dim(mu: &[usize], spec: &AlgebraSpec) -> Result<usize> {
    Ok(Engine::new(spec.clone(), EngineOptions::default())?.homogeneous_dim(mu)?.0)
}

pub fn w_nd_dim(n: usize, d: usize, spec: &AlgebraSpec) -> Result<WndReport> {
    Engine::new(spec.clone(), EngineOptions::default())?.w_nd_dim(n, d)
}

/// Reference matrix: every monomial of `mode` evaluated on every certified
/// substitution, columns `(substitution, output atom)`.
pub fn brute_force_matrix(n: usize, spec: &AlgebraSpec, mode: MonomialMode) -> Result<SparseMatrix> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
            what: "brute-force evaluation",
            estimate: format!("{} rows", estimate_rows(n, mode)),
        });
    }
    let subs = certified_substitutions(n, spec)?;
    let monos = enumerate_multilinear(n, mode, None)?;
    let evaluated: Vec<Vec<(u32, BasisElement)>> = monos
        .par_iter()
        .map(|mono| {
            subs.iter()
                .enumerate()
                .filter_map(|(c, s)| {
                    evaluate_atoms(mono, &s.values, spec)
                        .expect("certified substitutions are valid")
                        .map(|out| (c as u32, out))
                })
                .collect()
        })
        .collect();
    Ok(intern_rows(evaluated))
}

fn intern_rows<K: std::hash::Hash + Eq>(rows: Vec<Vec<K>>) -> SparseMatrix {
    let mut ids: HashMap<K, u32> = HashMap::new();
    let rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|k| {
                    let next = ids.len() as u32;
                    (*ids.entry(k).or_insert(next), 1u64)
                })
                .collect()
        })
        .collect();
    SparseMatrix::new(ids.len(), rows)
}

pub fn codimension_brute(n: usize, spec: &AlgebraSpec, mode: MonomialMode, opts: &EngineOptions) -> Result<(usize, RankCertificate)> {
    let m = brute_force_matrix(n, spec, mode)?;
    let cert = certified_rank(&m, &opts.primes(), opts.exact);
    Ok((cert.rank, cert))
}

/// `c_n` of a finite structure-constant algebra: all bracketings, every
/// substitution of basis atoms.
pub fn codimension_structure(n: usize, alg: &StructureAlgebra, opts: &EngineOptions) -> Result<(usize, RankCertificate)> {
    let cols = (alg.dim() as u128).pow(n as u32);
    if n > BRUTE_FORCE_CAP || cols > 1 << 22 {
        return Err(Error::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
            what: "structure-constant evaluation",
            estimate: format!("{cols} substitutions"),
        });
    }
    let monos = enumerate_multilinear(n, MonomialMode::All, None)?;
    let subs = tuples(&(0..alg.dim()).collect::<Vec<_>>(), n);
    let evaluated: Vec<Vec<(u32, usize)>> = monos
        .par_iter()
        .map(|mono| {
            subs.iter()
                .enumerate()
                .filter_map(|(c, s)| alg.evaluate(mono, s).map(|out| (c as u32, out)))
                .collect()
        })
        .collect();
    let cert = certified_rank(&intern_rows(evaluated), &opts.primes(), opts.exact);
    Ok((cert.rank, cert))
}

/// Whether a bracketing is a left comb after deleting the leaves outside `keep`.
pub fn contracts_to_comb(tree: &Tree, keep: u32) -> bool {
    tree.contracts_to_comb(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(word: &str, unital: bool) -> AlgebraSpec {
        AlgebraSpec::new(2, word.parse().unwrap(), unital).unwrap()
    }

    #[test]
    fn substitution_counts() {
        let s = spec("periodic:01", false);
        let subs = certified_substitutions(2, &s).unwrap();
        // factors of length 3 in 0101…: 010, 101
        let z_classes = 2 + 3;
        assert_eq!(subs.len(), 4 + 2 * 2 * z_classes);
        assert!(subs.iter().all(|c| c.values.iter().filter(|v| v.is_z()).count() <= 1));
        let su = spec("periodic:01", true);
        let subs = certified_substitutions(1, &su).unwrap();
        assert_eq!(subs.len(), 3 + z_classes);
    }

    #[test]
    fn small_codimensions() {
        for word in ["periodic:01", "periodic:1", "mechanical:alpha=(3-sqrt(5))/2,rho=0"] {
            assert_eq!(codimension(1, &spec(word, false)).unwrap().0, 1);
            assert_eq!(codimension(2, &spec(word, false)).unwrap().0, 2);
            assert_eq!(codimension(2, &spec(word, true)).unwrap().0, 2);
        }
    }

    #[test]
    fn fast_path_matches_brute_force() {
        let opts = EngineOptions::default();
        for word in ["periodic:01", "periodic:011", "mechanical:alpha=(3-sqrt(5))/2,rho=0"] {
            for unital in [false, true] {
                let s = spec(word, unital);
                let mut engine = Engine::new(s.clone(), opts.clone()).unwrap();
                for n in 1..=4 {
                    let fast = engine.codimension(n).unwrap().0;
                    let brute = codimension_brute(n, &s, MonomialMode::All, &opts).unwrap().0;
                    assert_eq!(fast, brute, "{s} n={n}");
                }
            }
        }
    }

    #[test]
    fn homogeneous_examples() {
        let s = spec("periodic:01", false);
        let mut e = Engine::new(s, EngineOptions::default()).unwrap();
        assert_eq!(e.homogeneous_dim(&[1]).unwrap().0, 1);
        let c3 = e.codimension(3).unwrap().0;
        assert_eq!(e.homogeneous_dim(&[1, 1, 1]).unwrap().0, c3);
        assert_eq!(e.homogeneous_dim(&[2, 1]).unwrap().0, e.homogeneous_dim(&[1, 2]).unwrap().0);
    }

    #[test]
    fn composition_helpers() {
        assert_eq!(partitions_at_most(4, 2), vec![vec![4], vec![3, 1], vec![2, 2]]);
        assert_eq!(arrangements(&[2, 1], 3), 6);
        assert_eq!(arrangements(&[1, 1], 3), 3);
        assert_eq!(arrangements(&[3], 1), 1);
        // Σ arrangements over partitions with ≤ d parts = number of weak compositions
        let total: u128 = partitions_at_most(5, 3).iter().map(|l| arrangements(l, 3)).sum();
        assert_eq!(total, 21);
    }

    #[test]
    fn canonical_keys_sort_codes_within_blocks() {
        // x1 = b, x2 = a in one block
        let key = CODE_B | CODE_A << 2 | 7 << 24;
        let c = canonical_key(key, &[(0, 2)]);
        assert_eq!(c, CODE_A | CODE_B << 2 | 7 << 24);
        assert_eq!(canonical_key(key, &[(0, 1), (1, 2)]), key);
    }
}
