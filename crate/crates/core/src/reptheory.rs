//! Partitions, hook-length degrees, Kostka numbers and cocharacters.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phi::phi_partition;
use crate::polyspace::{partitions_at_most, Engine, WndReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("empty".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn height(&self) -> usize {
        self.0.len()
    }

    /// `λ_i` (1-based), 0 past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.0[0];
        Partition((1..=cols).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }

    /// `λ ⊵ μ`: every partial sum of `λ` is at least that of `μ`.
    pub fn dominates(&self, other: &Partition) -> bool {
        let len = self.height().max(other.height());
        let (mut a, mut b) = (0, 0);
        for i in 1..=len {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        a == b
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(['+', ','])
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("partition {s:?}: {e}")))?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    partitions_with_height(n, n)
}

/// Partitions of `n` with at most `d` rows, in reverse lexicographic order.
pub fn partitions_with_height(n: usize, d: usize) -> Vec<Partition> {
    partitions_at_most(n, d).into_iter().map(Partition).collect()
}

/// `deg χ_λ = n! / ∏ hook lengths`.
pub fn hook_degree(lambda: &Partition) -> BigUint {
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    for k in 2..=lambda.n() {
        num *= k;
    }
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            den *= (row - j - 1) + (conj.0[j] - i - 1) + 1;
        }
    }
    num / den
}

/// Number of semistandard tableaux of shape `λ` and content `μ` (any order
/// of the parts of `μ`; zeros allowed).
pub fn kostka(lambda: &Partition, mu: &[usize]) -> u128 {
    if lambda.n() != mu.iter().sum::<usize>() {
        return 0;
    }
    let mut memo = HashMap::new();
    let content: Vec<usize> = mu.iter().copied().filter(|&c| c > 0).collect();
    kostka_rec(lambda.parts(), &content, &mut memo)
}

/// Remove the cells holding the largest letter: they form a horizontal strip
/// of size `mu.last()`.
fn kostka_rec(shape: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, usize), u128>) -> u128 {
    let Some((&last, rest)) = mu.split_last() else {
        return u128::from(shape.is_empty());
    };
    if shape.len() > mu.len() {
        return 0;
    }
    let key = (shape.to_vec(), mu.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let mut inner = vec![0usize; shape.len()];
    strips(shape, 0, last, &mut inner, &mut |inner| {
        let trimmed: Vec<usize> = inner.iter().copied().filter(|&p| p > 0).collect();
        total += kostka_rec(&trimmed, rest, memo);
    });
    memo.insert(key, total);
    total
}

/// Enumerate `inner ⊆ shape` with `shape/inner` a horizontal strip of size `size`.
fn strips(shape: &[usize], row: usize, size: usize, inner: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if row == shape.len() {
        if size == 0 {
            f(inner);
        }
        return;
    }
    // a horizontal strip keeps inner_i ≥ shape_{i+1}
    let floor = shape.get(row + 1).copied().unwrap_or(0);
    let max_remove = (shape[row] - floor).min(size);
    for r in 0..=max_remove {
        inner[row] = shape[row] - r;
        strips(shape, row + 1, size - r, inner, f);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocharacterEntry {
    pub partition: Partition,
    pub multiplicity: u64,
    pub degree: BigUint,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocharacterTable {
    pub n: usize,
    pub d: usize,
    /// Every partition of `n` with at most `d` rows, zero multiplicities included.
    pub entries: Vec<CocharacterEntry>,
    pub colength: u64,
    /// `Σ m_λ · deg χ_λ`
    pub c_n_check: BigUint,
    /// `c_n` from the rank engine.
    pub c_n: usize,
    pub consistent: bool,
}

impl CocharacterTable {
    pub fn nonzero(&self) -> impl Iterator<Item = &CocharacterEntry> {
        self.entries.iter().filter(|e| e.multiplicity > 0)
    }

    pub fn multiplicity(&self, lambda: &Partition) -> Option<u64> {
        self.entries.iter().find(|e| &e.partition == lambda).map(|e| e.multiplicity)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,m_lambda,deg,phi\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{},{:.12}\n", e.partition, e.multiplicity, e.degree, e.phi));
        }
        out
    }
}

/// Strip width of the cocharacter: 4 for the unital algebra, 3 otherwise.
pub fn strip_width(unital: bool) -> usize {
    if unital {
        4
    } else {
        3
    }
}

/// Default `d`: the strip width plus one row for the vanishing audit.
pub fn default_height(unital: bool) -> usize {
    strip_width(unital) + 1
}

/// Solve `dim W_μ = Σ_λ m_λ K_{λμ}` over partitions with at most `d` rows.
pub fn cocharacter(engine: &mut Engine, n: usize, d: usize) -> Result<CocharacterTable> {
    if n == 0 || d == 0 {
        return Err(Error::Domain("n and d must be positive".into()));
    }
    let shapes = partitions_with_height(n, d);
    let mut dims = Vec::with_capacity(shapes.len());
    for mu in &shapes {
        dims.push(engine.homogeneous_dim(mu.parts())?.0 as i128);
    }
    // reverse lexicographic order extends dominance, so every λ ⊳ μ comes first
    let kostkas: Vec<Vec<u128>> = shapes
        .par_iter()
        .enumerate()
        .map(|(j, mu)| (0..j).map(|i| kostka(&shapes[i], mu.parts())).collect())
        .collect();
    let mut mult: Vec<i128> = Vec::with_capacity(shapes.len());
    for (j, mu) in shapes.iter().enumerate() {
        debug_assert_eq!(kostka(mu, mu.parts()), 1);
        let mut v = dims[j];
        for i in 0..j {
            v -= mult[i] * kostkas[j][i] as i128;
        }
        if v < 0 {
            return Err(Error::NegativeMultiplicity {
                partition: mu.to_string(),
                value: v as i64,
            });
        }
        mult.push(v);
    }
    let (c_n, _) = engine.codimension(n)?;
    let mut entries = Vec::new();
    let mut check = BigUint::zero();
    let mut colength = 0u64;
    for (lambda, &m) in shapes.iter().zip(&mult) {
        let degree = hook_degree(lambda);
        let m = m as u64;
        check += &degree * m;
        colength += m;
        entries.push(CocharacterEntry {
            phi: phi_partition(lambda, None)?.to_f64(),
            partition: lambda.clone(),
            multiplicity: m,
            degree,
        });
    }
    Ok(CocharacterTable {
        n,
        d,
        consistent: check == BigUint::from(c_n),
        c_n_check: check,
        c_n,
        colength,
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditStatus {
    Pass,
    Fail,
    /// Reported value with no finite-n claim attached.
    Info,
}

impl fmt::Display for AuditStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditStatus::Pass => "PASS",
            AuditStatus::Fail => "FAIL",
            AuditStatus::Info => "INFO",
        })
    }
}

impl AuditStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            AuditStatus::Pass
        } else {
            AuditStatus::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditLine {
    pub name: String,
    pub n: usize,
    pub status: AuditStatus,
    pub detail: String,
}

impl AuditLine {
    pub fn new(name: &str, n: usize, status: AuditStatus, detail: String) -> Self {
        AuditLine {
            name: name.to_string(),
            n,
            status,
            detail,
        }
    }
}

/// Audits on one cocharacter table: multiplicity bounds, colength bounds,
/// the strip and shape constraints, and the `λ₃/λ₁` ratio.
pub fn audits(engine: &mut Engine, table: &CocharacterTable) -> Result<Vec<AuditLine>> {
    let n = table.n;
    let spec = engine.spec().clone();
    let m = spec.m();
    let unital = spec.unital();
    let mut out = Vec::new();

    out.push(AuditLine::new(
        "character-sum",
        n,
        AuditStatus::from_bool(table.consistent),
        format!("sum m*deg = {}, c_n = {}", table.c_n_check, table.c_n),
    ));

    let wnd: WndReport = engine.w_nd_dim(n, table.d)?;
    let max_m = table.entries.iter().map(|e| e.multiplicity).max().unwrap_or(0);
    out.push(AuditLine::new(
        "multiplicity-bound",
        n,
        AuditStatus::from_bool(max_m as u128 <= wnd.dim),
        format!("max m_lambda = {max_m} <= dim W_n^({}) = {}", table.d, wnd.dim),
    ));

    let width = strip_width(unital);
    let outside: Vec<String> = table
        .nonzero()
        .filter(|e| e.partition.height() > width)
        .map(|e| e.partition.to_string())
        .collect();
    let strip_checked = table.d > width;
    out.push(AuditLine::new(
        "strip",
        n,
        if strip_checked {
            AuditStatus::from_bool(outside.is_empty())
        } else {
            AuditStatus::Info
        },
        if strip_checked {
            format!("nonzero m_lambda with height > {width}: [{}]", outside.join(" "))
        } else {
            format!("d = {} does not exceed the strip width {width}", table.d)
        },
    ));

    if unital {
        let bound = 4u128 * (m as u128 + 1) * (n as u128 + 1).pow(12);
        out.push(AuditLine::new(
            "colength-bound",
            n,
            AuditStatus::from_bool((table.colength as u128) <= bound),
            format!("l_n = {} <= 4(m+1)(n+1)^12 = {bound}", table.colength),
        ));
    } else {
        out.push(AuditLine::new(
            "wnd-bound",
            n,
            AuditStatus::from_bool(wnd.dim_bound_ok),
            format!("dim W_n^({}) = {} <= {}", table.d, wnd.dim, wnd.dim_bound),
        ));
        let w3 = engine.w_nd_dim(n, 3)?;
        let bound = (n as u128).pow(3) * w3.dim;
        out.push(AuditLine::new(
            "colength-bound",
            n,
            AuditStatus::from_bool(table.colength as u128 <= bound),
            format!("l_n = {} <= n^3 dim W_n^(3) = {bound}", table.colength),
        ));
        let odd: Vec<String> = table
            .nonzero()
            .filter(|e| e.partition.height() == 3 && e.partition.part(3) != 1)
            .map(|e| e.partition.to_string())
            .collect();
        out.push(AuditLine::new(
            "shape-list",
            n,
            AuditStatus::from_bool(odd.is_empty()),
            format!("nonzero three-row shapes with lambda_3 > 1: [{}]", odd.join(" ")),
        ));
    }

    let alpha = spec.word().slope().to_f64();
    let beta = 1.0 / (m as f64 + alpha);
    let threshold = beta / (1.0 - beta);
    let worst = table
        .nonzero()
        .map(|e| (e.partition.part(3) as f64 / e.partition.part(1) as f64, e.partition.clone()))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let (ratio, who) = worst.map_or((0.0, String::from("-")), |(r, p)| (r, p.to_string()));
    out.push(AuditLine::new(
        "row-ratio",
        n,
        AuditStatus::Info,
        format!("max lambda3/lambda1 = {ratio:.6} at {who}; beta/(1-beta) = {threshold:.6}; finite-n value only"),
    ));
    Ok(out)
}

/// Fit `dim W_n^{(d)}(A) ≤ α n^T` over the computed degrees and check
/// `dim W_n^{(d)}(A♯) ≤ α (n+1)^{T+d+1}`.
pub fn unital_growth_audit(non_unital: &mut Engine, unital: &mut Engine, ns: &[usize], d: usize) -> Result<Vec<AuditLine>> {
    // the non-unital dims grow at most like n·Comp_w(n) ≤ 2n², so T = 2
    let t = 2u32;
    let mut alpha = 0f64;
    for &n in ns {
        let w = non_unital.w_nd_dim(n, d)?;
        alpha = alpha.max(w.dim.to_f64().unwrap_or(f64::INFINITY) / (n as f64).powi(t as i32));
    }
    let mut out = Vec::new();
    for &n in ns {
        let w = unital.w_nd_dim(n, d)?;
        let bound = alpha * ((n + 1) as f64).powi((t as usize + d + 1) as i32);
        out.push(AuditLine::new(
            "unital-growth",
            n,
            AuditStatus::from_bool((w.dim as f64) <= bound),
            format!("dim W_n^({d})(A#) = {} <= {alpha:.4}*(n+1)^{} = {bound:.1}", w.dim, t as usize + d + 1),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Direct enumeration of semistandard fillings.
    fn ssyt_count(shape: &[usize], content: &[usize]) -> u128 {
        let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j))).collect();
        let mut grid = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; shape.len()];
        let mut left = content.to_vec();
        fn go(k: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<usize>>, left: &mut Vec<usize>) -> u128 {
            if k == cells.len() {
                return 1;
            }
            let (i, j) = cells[k];
            let mut total = 0;
            for v in 1..=left.len() {
                if left[v - 1] == 0 || (j > 0 && grid[i][j - 1] > v) || (i > 0 && grid[i - 1][j] >= v) {
                    continue;
                }
                left[v - 1] -= 1;
                grid[i][j] = v;
                total += go(k + 1, cells, grid, left);
                left[v - 1] += 1;
            }
            grid[i][j] = 0;
            total
        }
        go(0, &cells, &mut grid, &mut left)
    }

    #[test]
    fn partition_basics() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(10).len(), 42);
        assert_eq!(p("3+2+1").to_string(), "3+2+1");
        assert_eq!(p("(4,1)").parts(), &[4, 1]);
        assert!("1+2".parse::<Partition>().is_err());
        assert_eq!(p("3+1").conjugate(), p("2+1+1"));
        assert!(p("3+1").dominates(&p("2+2")));
        assert!(!p("2+2").dominates(&p("3+1")));
        assert!(!p("3+3").dominates(&p("4+1+1")));
    }

    #[test]
    fn hook_examples() {
        assert_eq!(hook_degree(&p("5")), BigUint::one());
        assert_eq!(hook_degree(&p("1+1+1+1")), BigUint::one());
        assert_eq!(hook_degree(&p("2+1")), BigUint::from(2u32));
        assert_eq!(hook_degree(&p("3+2")), BigUint::from(5u32));
        for n in 1..=10 {
            let total: BigUint = partitions(n).iter().map(|l| hook_degree(l).pow(2)).sum();
            let fact: BigUint = (1..=n as u32).map(BigUint::from).product();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka(&p("2+1"), &[1, 1, 1]), 2);
        assert_eq!(kostka(&p("1+1"), &[2]), 0);
        assert_eq!(kostka(&p("3+2+1"), &[3, 2, 1]), 1);
        for n in 1..=6 {
            for l in partitions(n) {
                for m in partitions(n) {
                    assert_eq!(kostka(&l, m.parts()), ssyt_count(l.parts(), m.parts()), "{l} {m}");
                }
            }
        }
        // content order does not matter
        assert_eq!(kostka(&p("3+2"), &[1, 2, 2]), kostka(&p("3+2"), &[2, 2, 1]));
    }
}
