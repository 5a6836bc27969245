//! The word algebra `A(m,w)`, its unital extension, and small
//! structure-constant algebras.
//!
//! Basis: `a`, `b` and `z^{(i)}_j` for `i ≥ 1`, `1 ≤ j ≤ k_i` where
//! `k_i = m + w_i`. The only nonzero products of basis atoms are
//!
//! ```text
//! z^{(i)}_j · a = z^{(i)}_{j+1}   (j < k_i)
//! z^{(i)}_{k_i} · b = z^{(i+1)}_1
//! ```
//!
//! plus the unit laws when the unit is adjoined.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyspace::monomial::{Monomial, Tree};
use crate::words::WordSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisElement {
    One,
    A,
    B,
    Z { level: usize, index: usize },
}

impl BasisElement {
    pub fn z(level: usize, index: usize) -> Self {
        BasisElement::Z { level, index }
    }

    pub fn is_z(&self) -> bool {
        matches!(self, BasisElement::Z { .. })
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::One => write!(f, "1"),
            BasisElement::A => write!(f, "a"),
            BasisElement::B => write!(f, "b"),
            BasisElement::Z { level, index } => write!(f, "z_{level}_{index}"),
        }
    }
}

impl FromStr for BasisElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(BasisElement::One),
            "a" => Ok(BasisElement::A),
            "b" => Ok(BasisElement::B),
            _ => {
                let bad = || Error::Parse(format!("unknown basis atom {s:?}"));
                let rest = s.strip_prefix("z_").ok_or_else(bad)?;
                let (i, j) = rest.split_once('_').ok_or_else(bad)?;
                Ok(BasisElement::z(i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl From<Letter> for BasisElement {
    fn from(l: Letter) -> Self {
        match l {
            Letter::A => BasisElement::A,
            Letter::B => BasisElement::B,
        }
    }
}

/// `A(m,w)`, or `A(m,w)♯` when `unital`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    m: usize,
    word: WordSpec,
    unital: bool,
}

impl AlgebraSpec {
    pub fn new(m: usize, word: WordSpec, unital: bool) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSpec(format!("m must be at least 2, got {m}")));
        }
        Ok(AlgebraSpec { m, word, unital })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn word(&self) -> &WordSpec {
        &self.word
    }

    pub fn unital(&self) -> bool {
        self.unital
    }

    pub fn with_unit(&self, unital: bool) -> Self {
        AlgebraSpec { unital, ..self.clone() }
    }

    /// `k_i = m + w_i`.
    pub fn level_size(&self, level: usize) -> usize {
        self.m + self.word.letter(level) as usize
    }

    pub fn check_atom(&self, x: BasisElement) -> Result<()> {
        match x {
            BasisElement::One if !self.unital => Err(Error::InvalidAtom {
                atom: x.to_string(),
                reason: "the unit exists only in the unital extension".into(),
            }),
            BasisElement::Z { level, index } => {
                if level == 0 {
                    return Err(Error::InvalidAtom {
                        atom: x.to_string(),
                        reason: "levels start at 1".into(),
                    });
                }
                let k = self.level_size(level);
                if index == 0 || index > k {
                    return Err(Error::InvalidAtom {
                        atom: x.to_string(),
                        reason: format!("index must lie in 1..={k} at level {level}"),
                    });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Product of two basis atoms; `None` means zero. Operands are not validated.
    pub fn product(&self, x: BasisElement, y: BasisElement) -> Option<BasisElement> {
        use BasisElement::*;
        match (x, y) {
            (One, y) => Some(y),
            (x, One) => Some(x),
            (Z { level, index }, A) if index < self.level_size(level) => Some(Z { level, index: index + 1 }),
            (Z { level, index }, B) if index == self.level_size(level) => Some(Z {
                level: level + 1,
                index: 1,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({}, {}){}", self.m, self.word, if self.unital { "#" } else { "" })
    }
}

/// Finite exact-rational combination of basis atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisElement, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(x: BasisElement) -> Self {
        Self::term(x, BigRational::one())
    }

    pub fn term(x: BasisElement, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(x, c);
        e
    }

    pub fn from_option(x: Option<BasisElement>) -> Self {
        x.map(Self::atom).unwrap_or_default()
    }

    pub fn add_term(&mut self, x: BasisElement, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        for (&x, c) in &other.terms {
            self.add_term(x, c.clone());
        }
    }

    pub fn scaled(&self, c: &BigRational) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (&x, v) in &self.terms {
            out.add_term(x, v * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: BasisElement) -> BigRational {
        self.terms.get(&x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn single_term(&self) -> Option<(BasisElement, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&x, c)| (x, c))
        } else {
            None
        }
    }

    /// Bilinear extension of [`multiply_basis`].
    pub fn mul(&self, other: &AlgebraElement, spec: &AlgebraSpec) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (&x, cx) in &self.terms {
            for (&y, cy) in &other.terms {
                spec.check_atom(x)?;
                spec.check_atom(y)?;
                if let Some(z) = spec.product(x, y) {
                    out.add_term(z, cx * cy);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (x, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{x}")?;
            } else {
                write!(f, "{c}*{x}")?;
            }
        }
        Ok(())
    }
}

pub fn multiply_basis(x: BasisElement, y: BasisElement, spec: &AlgebraSpec) -> Result<AlgebraElement> {
    spec.check_atom(x)?;
    spec.check_atom(y)?;
    Ok(AlgebraElement::from_option(spec.product(x, y)))
}

/// `((start · l_1) · l_2) ⋯ l_r`.
pub fn left_normed_product(start: BasisElement, letters: &[Letter], spec: &AlgebraSpec) -> Result<AlgebraElement> {
    spec.check_atom(start)?;
    let mut acc = Some(start);
    for &l in letters {
        acc = match acc {
            Some(x) => spec.product(x, l.into()),
            None => break,
        };
    }
    Ok(AlgebraElement::from_option(acc))
}

/// Evaluate a multilinear monomial with variable `x_t` replaced by `values[t]`.
pub fn evaluate_monomial(mono: &Monomial, values: &[BasisElement], spec: &AlgebraSpec) -> Result<AlgebraElement> {
    Ok(AlgebraElement::from_option(evaluate_atoms(mono, values, spec)?))
}

/// Same as [`evaluate_monomial`] but returns the single atom (or zero) directly.
pub fn evaluate_atoms(mono: &Monomial, values: &[BasisElement], spec: &AlgebraSpec) -> Result<Option<BasisElement>> {
    if values.len() != mono.arity() {
        return Err(Error::Domain(format!(
            "monomial of arity {} given {} values",
            mono.arity(),
            values.len()
        )));
    }
    for &v in values {
        spec.check_atom(v)?;
    }
    let mut slot = 0;
    Ok(eval_tree(mono.tree(), &mut slot, &|s| values[mono.var_at(s)], &|x, y| {
        spec.product(x, y)
    }))
}

pub(crate) fn eval_tree<T: Copy>(
    tree: &Tree,
    slot: &mut usize,
    leaf: &dyn Fn(usize) -> T,
    mul: &dyn Fn(T, T) -> Option<T>,
) -> Option<T> {
    match tree {
        Tree::Leaf => {
            let v = leaf(*slot);
            *slot += 1;
            Some(v)
        }
        Tree::Node(l, r) => {
            let x = eval_tree(l, slot, leaf, mul);
            // the right subtree must still consume its leaves
            let y = eval_tree(r, slot, leaf, mul);
            mul(x?, y?)
        }
    }
}

/// Finite algebra given by a table of basis products, each zero or a basis atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    names: Vec<String>,
    unit: Option<usize>,
    table: Vec<Option<usize>>,
}

impl StructureAlgebra {
    pub fn new(names: Vec<String>, unit: Option<usize>) -> Self {
        let dim = names.len();
        let mut alg = StructureAlgebra {
            names,
            unit,
            table: vec![None; dim * dim],
        };
        if let Some(u) = unit {
            for x in 0..dim {
                alg.set(u, x, Some(x));
                alg.set(x, u, Some(x));
            }
        }
        alg
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set(&mut self, x: usize, y: usize, z: Option<usize>) {
        let d = self.dim();
        self.table[x * d + y] = z;
    }

    pub fn multiply(&self, x: usize, y: usize) -> Option<usize> {
        self.table[x * self.dim() + y]
    }

    pub fn evaluate(&self, mono: &Monomial, values: &[usize]) -> Option<usize> {
        let mut slot = 0;
        eval_tree(mono.tree(), &mut slot, &|s| values[mono.var_at(s)], &|x, y| {
            self.multiply(x, y)
        })
    }

    /// `{"x*y": "z", ...}` over the nonzero products; absent keys are zero.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                if let Some(z) = self.multiply(x, y) {
                    map.insert(
                        format!("{}*{}", self.names[x], self.names[y]),
                        serde_json::Value::String(self.names[z].clone()),
                    );
                }
            }
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value, unital: bool) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::Parse("structure table must be a JSON object".into()))?;
        let mut names: Vec<String> = Vec::new();
        let push = |n: &str, names: &mut Vec<String>| {
            if !names.iter().any(|m| m == n) {
                names.push(n.to_string());
            }
        };
        let mut entries = Vec::new();
        for (k, v) in map {
            let (x, y) = k
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("bad product key {k:?}")))?;
            let z = v
                .as_str()
                .ok_or_else(|| Error::Parse(format!("product {k:?} must name an atom")))?;
            for n in [x, y, z] {
                push(n, &mut names);
            }
            entries.push((x.to_string(), y.to_string(), z.to_string()));
        }
        names.sort_by_key(|n| atom_sort_key(n));
        let unit = if unital { names.iter().position(|n| n == "1") } else { None };
        let mut alg = StructureAlgebra::new(names, unit);
        for (x, y, z) in entries {
            let (x, y, z) = (alg.index_of(&x).unwrap(), alg.index_of(&y).unwrap(), alg.index_of(&z).unwrap());
            alg.set(x, y, Some(z));
        }
        Ok(alg)
    }
}

fn atom_sort_key(name: &str) -> (u8, usize, usize, String) {
    match name.parse::<BasisElement>() {
        Ok(BasisElement::One) => (0, 0, 0, String::new()),
        Ok(BasisElement::A) => (1, 0, 0, String::new()),
        Ok(BasisElement::B) => (2, 0, 0, String::new()),
        Ok(BasisElement::Z { level, index }) => (3, level, index, String::new()),
        Err(_) => (4, 0, 0, name.to_string()),
    }
}

/// Experimental finite quotient of `A(m,w)` for a periodic `w` of period `T`:
/// levels are identified modulo `T`, so `z^{(T)}_{k_T} · b = z^{(1)}_1`.
///
/// Nothing guarantees this algebra satisfies the same identities as
/// `A(m,w)`; agreement of codimensions is only ever checked up to a finite
/// degree.
pub fn cyclic_quotient(spec: &AlgebraSpec) -> Result<StructureAlgebra> {
    let period = spec
        .word()
        .period()
        .ok_or_else(|| Error::InvalidSpec("cyclic quotient needs a periodic word".into()))?;
    let mut names = Vec::new();
    if spec.unital() {
        names.push("1".to_string());
    }
    names.push("a".into());
    names.push("b".into());
    for i in 1..=period {
        for j in 1..=spec.level_size(i) {
            names.push(BasisElement::z(i, j).to_string());
        }
    }
    let unit = spec.unital().then_some(0);
    let mut alg = StructureAlgebra::new(names, unit);
    let a = alg.index_of("a").unwrap();
    let b = alg.index_of("b").unwrap();
    for i in 1..=period {
        let k = spec.level_size(i);
        for j in 1..k {
            let x = alg.index_of(&BasisElement::z(i, j).to_string()).unwrap();
            let y = alg.index_of(&BasisElement::z(i, j + 1).to_string()).unwrap();
            alg.set(x, a, Some(y));
        }
        let last = alg.index_of(&BasisElement::z(i, k).to_string()).unwrap();
        let next = alg.index_of(&BasisElement::z(i % period + 1, 1).to_string()).unwrap();
        alg.set(last, b, Some(next));
    }
    Ok(alg)
}
