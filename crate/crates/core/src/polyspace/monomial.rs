//! Multilinear monomials: a bracketing tree plus a placement of variables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_CAP_ALL: usize = 8;
pub const DEFAULT_CAP_LEFT_NORMED: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// `((…(x x)x)…)x` with `n` leaves.
    pub fn left_comb(n: usize) -> Tree {
        assert!(n >= 1);
        let mut t = Tree::Leaf;
        for _ in 1..n {
            t = Tree::Node(Box::new(t), Box::new(Tree::Leaf));
        }
        t
    }

    pub fn is_left_comb(&self) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(l, r) => **r == Tree::Leaf && l.is_left_comb(),
        }
    }

    /// All bracketings with `n` leaves; the left comb comes last.
    pub fn all(n: usize) -> Vec<Tree> {
        assert!(n >= 1);
        let mut table: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::Leaf]];
        for size in 2..=n {
            let mut out = Vec::new();
            for left in 1..size {
                for l in &table[left] {
                    for r in &table[size - left] {
                        out.push(Tree::Node(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
            table.push(out);
        }
        table.swap_remove(n)
    }

    /// Whether the tree obtained by deleting the leaves outside `keep` (a slot
    /// bitmask) and collapsing empty subtrees is a left comb.
    pub fn contracts_to_comb(&self, keep: u32) -> bool {
        fn walk(t: &Tree, keep: u32, slot: &mut u32) -> (u32, bool) {
            match t {
                Tree::Leaf => {
                    let present = keep >> *slot & 1;
                    *slot += 1;
                    (present, true)
                }
                Tree::Node(l, r) => {
                    let (lc, lcomb) = walk(l, keep, slot);
                    let (rc, rcomb) = walk(r, keep, slot);
                    match (lc, rc) {
                        (0, _) => (rc, rcomb),
                        (_, 0) => (lc, lcomb),
                        _ => (lc + rc, lcomb && rc == 1),
                    }
                }
            }
        }
        let mut slot = 0;
        walk(self, keep, &mut slot).1
    }
}

pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Variable `x_{perm[s]+1}` sits at leaf slot `s` of `tree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    perm: Vec<u8>,
    tree: Arc<Tree>,
}

impl Monomial {
    pub fn new(perm: Vec<u8>, tree: Arc<Tree>) -> Result<Self> {
        if perm.len() != tree.leaves() {
            return Err(Error::Domain(format!(
                "permutation of length {} for a tree with {} leaves",
                perm.len(),
                tree.leaves()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p as usize >= perm.len() || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Monomial { perm, tree })
    }

    pub fn left_normed(perm: Vec<u8>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, Arc::new(Tree::left_comb(n)))
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// 0-based variable at leaf slot `s`.
    pub fn var_at(&self, s: usize) -> usize {
        self.perm[s] as usize
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Tree, perm: &[u8], slot: &mut usize, top: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Tree::Leaf => {
                    write!(f, "x{}", perm[*slot] + 1)?;
                    *slot += 1;
                    Ok(())
                }
                Tree::Node(l, r) => {
                    if !top {
                        write!(f, "(")?;
                    }
                    go(l, perm, slot, false, f)?;
                    go(r, perm, slot, false, f)?;
                    if !top {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        let mut slot = 0;
        go(&self.tree, &self.perm, &mut slot, true, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MonomialMode {
    All,
    LeftNormed,
}

impl MonomialMode {
    pub fn default_cap(self) -> usize {
        match self {
            MonomialMode::All => DEFAULT_CAP_ALL,
            MonomialMode::LeftNormed => DEFAULT_CAP_LEFT_NORMED,
        }
    }
}

/// Indexable view of all monomials of degree `n` in a mode, so callers can
/// iterate in parallel without materializing the list.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    n: usize,
    trees: Vec<Arc<Tree>>,
    perms: u64,
}

impl MonomialSpace {
    pub fn new(n: usize, mode: MonomialMode) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(Error::Domain(format!("degree {n} outside 1..=12")));
        }
        let trees = match mode {
            MonomialMode::All => Tree::all(n).into_iter().map(Arc::new).collect(),
            MonomialMode::LeftNormed => vec![Arc::new(Tree::left_comb(n))],
        };
        Ok(MonomialSpace {
            n,
            trees,
            perms: factorial(n) as u64,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.perms * self.trees.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn trees(&self) -> &[Arc<Tree>] {
        &self.trees
    }

    /// Tree index and permutation for position `idx`.
    pub fn parts(&self, idx: u64) -> (usize, Vec<u8>) {
        ((idx / self.perms) as usize, unrank_permutation(self.n, idx % self.perms))
    }

    pub fn get(&self, idx: u64) -> Monomial {
        let (t, perm) = self.parts(idx);
        Monomial {
            perm,
            tree: self.trees[t].clone(),
        }
    }
}

/// Lexicographic unranking through the factorial number system.
pub fn unrank_permutation(n: usize, mut rank: u64) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i) as u64;
        let k = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(k));
    }
    out
}

pub fn estimate_rows(n: usize, mode: MonomialMode) -> u128 {
    match mode {
        MonomialMode::All => factorial(n) * catalan(n - 1),
        MonomialMode::LeftNormed => factorial(n),
    }
}

pub fn check_cap(n: usize, cap: usize, what: &'static str, rows: u128, cap_override: bool) -> Result<()> {
    if n > cap && !cap_override {
        return Err(Error::CapExceeded {
            n,
            cap,
            what,
            estimate: format!("{rows} rows, roughly {} MiB of row data", rows.saturating_mul(64) >> 20),
        });
    }
    Ok(())
}

/// `n!·Catalan(n−1)` monomials for `All`, `n!` for `LeftNormed`.
pub fn enumerate_multilinear(n: usize, mode: MonomialMode, cap_override: Option<usize>) -> Result<Vec<Monomial>> {
    if n == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    let cap = cap_override.unwrap_or(mode.default_cap());
    let what = match mode {
        MonomialMode::All => "enumeration of all bracketings",
        MonomialMode::LeftNormed => "left-normed enumeration",
    };
    check_cap(n, cap, what, estimate_rows(n, mode), false)?;
    let space = MonomialSpace::new(n, mode)?;
    Ok((0..space.len()).map(|i| space.get(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_multilinear(2, MonomialMode::All, None).unwrap().len(), 2);
        assert_eq!(enumerate_multilinear(3, MonomialMode::All, None).unwrap().len(), 12);
        assert_eq!(enumerate_multilinear(4, MonomialMode::LeftNormed, None).unwrap().len(), 24);
        for n in 1..=6 {
            let all = enumerate_multilinear(n, MonomialMode::All, None).unwrap();
            assert_eq!(all.len() as u128, factorial(n) * catalan(n - 1));
            let distinct: HashSet<_> = all.iter().map(|m| m.to_string()).collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn caps() {
        assert!(enumerate_multilinear(9, MonomialMode::All, None).is_err());
        assert!(enumerate_multilinear(10, MonomialMode::LeftNormed, None).is_err());
        assert!(enumerate_multilinear(0, MonomialMode::All, None).is_err());
    }

    #[test]
    fn display_and_combs() {
        let m = Monomial::left_normed(vec![2, 0, 1]).unwrap();
        assert_eq!(m.to_string(), "(x3x1)x2");
        assert!(m.tree().is_left_comb());
        let trees = Tree::all(4);
        assert_eq!(trees.iter().filter(|t| t.is_left_comb()).count(), 1);
        assert!(Monomial::new(vec![0, 0], Arc::new(Tree::left_comb(2))).is_err());
    }

    #[test]
    fn contraction() {
        // x1(x2x3): dropping slot 0 leaves x2x3, a comb
        let t = Tree::Node(Box::new(Tree::Leaf), Box::new(Tree::left_comb(2)));
        assert!(!t.contracts_to_comb(0b111));
        assert!(t.contracts_to_comb(0b110));
        assert!(t.contracts_to_comb(0b101));
        assert!(t.contracts_to_comb(0b001));
        assert!(t.contracts_to_comb(0));
    }

    #[test]
    fn unranking_is_lexicographic() {
        let perms: Vec<_> = (0..6).map(|r| unrank_permutation(3, r)).collect();
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert_eq!(perms[1], vec![0, 2, 1]);
        assert_eq!(perms[5], vec![2, 1, 0]);
    }
}
