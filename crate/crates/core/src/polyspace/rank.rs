//! Sparse rank over `Z/p` for large primes, with an exact fraction-free
//! fallback over the integers.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Rows are sorted `(column, value)` pairs with nonzero non-negative values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize, mut rows: Vec<Vec<(u32, u64)>>) -> Self {
        for r in &mut rows {
            r.retain(|&(_, v)| v != 0);
            r.sort_unstable_by_key(|&(c, _)| c);
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|&(c, _)| (c as usize) < ncols));
        }
        SparseMatrix { ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<(u32, u64)>] {
        &self.rows
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Coordinate text: one `row col value` triple per line, 0-based.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("% {} {} {}\n", self.nrows(), self.ncols, self.nonzeros());
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, v) in r {
                out.push_str(&format!("{i} {c} {v}\n"));
            }
        }
        out
    }

    /// Drop zero and duplicate rows, then merge identical columns.
    pub fn deduplicated(&self) -> SparseMatrix {
        let mut seen = std::collections::HashSet::new();
        let rows: Vec<_> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty() && seen.insert((*r).clone()))
            .cloned()
            .collect();
        let mut cols: Vec<Vec<(u32, u64)>> = vec![Vec::new(); self.ncols];
        for (i, r) in rows.iter().enumerate() {
            for &(c, v) in r {
                cols[c as usize].push((i as u32, v));
            }
        }
        let mut rep: HashMap<&[(u32, u64)], u32> = HashMap::new();
        let mut remap = vec![u32::MAX; self.ncols];
        for (c, col) in cols.iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let next = rep.len() as u32;
            let id = *rep.entry(col.as_slice()).or_insert(next);
            if id == next {
                remap[c] = id;
            }
        }
        let ncols = rep.len();
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .filter(|&(c, _)| remap[c as usize] != u32::MAX)
                    .map(|(c, v)| (remap[c as usize], v))
                    .collect()
            })
            .collect();
        SparseMatrix::new(ncols, rows)
    }

    /// Split into blocks with disjoint row and column supports.
    pub fn components(&self) -> Vec<SparseMatrix> {
        let mut parent: Vec<usize> = (0..self.rows.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut owner = vec![usize::MAX; self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, _) in r {
                let o = owner[c as usize];
                if o == usize::MAX {
                    owner[c as usize] = i;
                } else {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, i));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.rows.len() {
            if !self.rows[i].is_empty() {
                let root = find(&mut parent, i);
                groups.entry(root).or_default().push(i);
            }
        }
        groups
            .into_values()
            .map(|members| {
                let mut local: HashMap<u32, u32> = HashMap::new();
                let rows: Vec<Vec<(u32, u64)>> = members
                    .iter()
                    .map(|&i| {
                        self.rows[i]
                            .iter()
                            .map(|&(c, v)| {
                                let next = local.len() as u32;
                                (*local.entry(c).or_insert(next), v)
                            })
                            .collect()
                    })
                    .collect();
                SparseMatrix::new(local.len(), rows)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    ExactRational,
    Modular(Vec<u64>),
}

impl std::fmt::Display for RankMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankMethod::ExactRational => write!(f, "exact"),
            RankMethod::Modular(ps) => {
                write!(f, "modular(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    pub rows: usize,
    pub cols: usize,
    pub nonzeros: usize,
    /// Size after row/column deduplication.
    pub reduced_rows: usize,
    pub reduced_cols: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExactPolicy {
    /// Exact elimination only when the primes disagree.
    #[default]
    OnDisagreement,
    Always,
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct primes in `(2^61, 2^62)` drawn from a seeded stream.
pub fn random_primes(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let cand = rng.gen_range((1u64 << 61) + 1..(1u64 << 62)) | 1;
        if is_prime(cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Rank over `Z/p` by sparse row reduction.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut order: Vec<&Vec<(u32, u64)>> = m.rows.iter().filter(|r| !r.is_empty()).collect();
    order.sort_by_key(|r| r.len());
    let mut pivot_of: Vec<u32> = vec![u32::MAX; m.ncols];
    let mut pivots: Vec<Vec<(u32, u64)>> = Vec::new();
    let mut dense = vec![0u64; m.ncols];
    let mut live = vec![false; m.ncols];
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
    for row in order {
        for &(c, v) in row.iter() {
            dense[c as usize] = v % p;
            live[c as usize] = true;
            heap.push(Reverse(c));
        }
        let mut new_pivot: Option<u32> = None;
        while let Some(Reverse(c)) = heap.pop() {
            let ci = c as usize;
            if !live[ci] {
                continue;
            }
            live[ci] = false;
            let v = std::mem::take(&mut dense[ci]);
            if v == 0 {
                continue;
            }
            let pi = pivot_of[ci];
            if pi == u32::MAX {
                // leading entry of a new pivot row; collect the rest
                let inv = pow_mod(v, p - 2, p);
                let mut out = vec![(c, 1u64)];
                while let Some(Reverse(c2)) = heap.pop() {
                    let c2i = c2 as usize;
                    if !live[c2i] {
                        continue;
                    }
                    live[c2i] = false;
                    let v2 = std::mem::take(&mut dense[c2i]);
                    if v2 != 0 {
                        out.push((c2, mul_mod(v2, inv, p)));
                    }
                }
                pivot_of[ci] = pivots.len() as u32;
                pivots.push(out);
                new_pivot = Some(c);
                break;
            }
            // pivot rows are normalized to leading coefficient 1
            let prow = &pivots[pi as usize];
            for &(c2, pv) in &prow[1..] {
                let c2i = c2 as usize;
                let sub = mul_mod(v, pv, p);
                dense[c2i] = (dense[c2i] + p - sub) % p;
                if !live[c2i] {
                    live[c2i] = true;
                    heap.push(Reverse(c2));
                }
            }
        }
        debug_assert!(new_pivot.is_some() || heap.is_empty());
    }
    pivots.len()
}

/// Exact rank over the rationals by fraction-free elimination on integer rows,
/// removing the content of every new pivot row.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let mut order: Vec<&Vec<(u32, u64)>> = m.rows.iter().filter(|r| !r.is_empty()).collect();
    order.sort_by_key(|r| r.len());
    let mut pivots: HashMap<u32, BTreeMap<u32, BigInt>> = HashMap::new();
    for row in order {
        let mut cur: BTreeMap<u32, BigInt> = row.iter().map(|&(c, v)| (c, BigInt::from(v))).collect();
        let mut from = 0u32;
        loop {
            let Some((&c, _)) = cur.range(from..).next() else { break };
            let Some(prow) = pivots.get(&c) else {
                let mut g = BigInt::zero();
                for v in cur.values() {
                    g = g.gcd(v);
                }
                if cur[&c].is_negative() {
                    g = -g;
                }
                for v in cur.values_mut() {
                    *v /= &g;
                }
                pivots.insert(c, cur);
                break;
            };
            let lead = &prow[&c];
            let here = &cur[&c];
            let g = lead.gcd(here);
            let (fa, fb) = (lead / &g, here / &g);
            let mut next: BTreeMap<u32, BigInt> = BTreeMap::new();
            for (&k, v) in cur.range(c..) {
                next.insert(k, v * &fa);
            }
            for (&k, v) in prow.iter() {
                let e = next.entry(k).or_insert_with(BigInt::zero);
                *e -= v * &fb;
            }
            next.retain(|_, v| !v.is_zero());
            cur = next;
            from = c + 1;
        }
    }
    pivots.len()
}

/// Rank from two (or more) independent primes, escalating to exact
/// elimination when they disagree.
pub fn certified_rank(m: &SparseMatrix, primes: &[u64], policy: ExactPolicy) -> RankCertificate {
    assert!(primes.len() >= 2, "modular certificates need at least two primes");
    let reduced = m.deduplicated();
    let blocks = reduced.components();
    let per_prime: Vec<usize> = primes
        .par_iter()
        .map(|&p| blocks.par_iter().map(|b| rank_mod_p(b, p)).sum())
        .collect();
    let agree = per_prime.windows(2).all(|w| w[0] == w[1]);
    let (rank, method) = if agree && policy == ExactPolicy::OnDisagreement {
        (per_prime[0], RankMethod::Modular(primes.to_vec()))
    } else {
        (blocks.par_iter().map(rank_exact).sum(), RankMethod::ExactRational)
    };
    RankCertificate {
        rank,
        method,
        rows: m.nrows(),
        cols: m.ncols(),
        nonzeros: m.nonzeros(),
        reduced_rows: reduced.nrows(),
        reduced_cols: reduced.ncols(),
    }
}
