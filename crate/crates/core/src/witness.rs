//! Explicit highest-weight witnesses for the unital algebra: the tableaux
//! whose symmetrizers survive on a chosen substitution, and the sequence of
//! partitions whose `Φ` approaches `Φ₀(β) + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{eval_tree, AlgebraElement, AlgebraSpec, BasisElement};
use crate::error::{Error, Result};
use crate::phi::{self, insert_row, ln_phi_partition};
use crate::polyspace::monomial::{factorial, Tree};
use crate::real;
use crate::reptheory::{CocharacterTable, Partition};
use crate::words::WordSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableauForm {
    /// `λ = (j, λ₂, r, 1)` with `j ≥ λ₂ = (m−1)r + w_1 + ⋯ + w_r`.
    FirstRowLong,
    /// `λ = (λ₁, j, r, 1)` with `λ₁ = (m−1)r + w_1 + ⋯ + w_r > j ≥ r`.
    SecondRowLong,
}

impl fmt::Display for TableauForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableauForm::FirstRowLong => "first-row-long",
            TableauForm::SecondRowLong => "second-row-long",
        })
    }
}

/// Bijective filling of a Young diagram by `1..=n`, stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())
            .map_err(|e| Error::Tableau(format!("row lengths do not form a partition: {e}")))?;
        let n = shape.n();
        let mut seen = vec![false; n + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Tableau(format!("filling is not a bijection onto 1..={n}")));
            }
        }
        Ok(Tableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.rows[0].len())
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " / ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

/// Tableau with its substitution; `substitution[x−1]` is the value of `x_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tableau: Tableau,
    pub substitution: Vec<BasisElement>,
    pub n0: usize,
    pub r: usize,
    pub j: usize,
    pub form: TableauForm,
}

impl Witness {
    /// `j!·r!·(n₀−r−1)!`
    pub fn expected_coefficient(&self) -> BigInt {
        let f = |k: usize| -> BigInt { (1..=k).fold(BigInt::one(), |acc, i| acc * i) };
        f(self.j) * f(self.r) * f(self.n0 - self.r - 1)
    }

    pub fn expected_value(&self) -> AlgebraElement {
        AlgebraElement::term(BasisElement::z(self.r + 1, 1), BigRational::from_integer(self.expected_coefficient()))
    }
}

/// Sum `w_1 + ⋯ + w_r`.
fn ones(word: &WordSpec, r: usize) -> usize {
    word.ones_count(r) as usize
}

/// The tableau and substitution built from the b-positions of
/// `z a^{i_1} b ⋯ a^{i_r} b = z^{(r+1)}_1`, `i_s = m − 1 + w_s`.
pub fn build_tableau(m: usize, word: &WordSpec, r: usize, j: usize, form: TableauForm) -> Result<Witness> {
    if m < 2 {
        return Err(Error::Tableau(format!("m must be at least 2, got {m}")));
    }
    if r == 0 {
        return Err(Error::Tableau("r must be at least 1".into()));
    }
    let wr = ones(word, r);
    let long = (m - 1) * r + wr;
    match form {
        TableauForm::FirstRowLong if j < long => {
            return Err(Error::Tableau(format!("first-row-long needs j ≥ {long}, got {j}")));
        }
        TableauForm::SecondRowLong if !(long > j && j >= r) => {
            return Err(Error::Tableau(format!("second-row-long needs {long} > j ≥ {r}, got {j}")));
        }
        _ => {}
    }
    let n0 = m * r + wr + 1;
    let mut b_pos = Vec::with_capacity(r);
    let mut acc = 0;
    for s in 1..=r {
        acc += m - 1 + word.letter(s) as usize;
        b_pos.push(acc + s + 1);
    }
    let mut a_row: Vec<usize> = b_pos.iter().map(|&p| p - 1).collect();
    a_row.extend((2..=n0).filter(|x| !b_pos.contains(x) && !b_pos.contains(&(x + 1))));
    let units: Vec<usize> = (n0 + 1..=n0 + j).collect();
    let rows = match form {
        TableauForm::FirstRowLong => vec![units, a_row, b_pos.clone(), vec![1]],
        TableauForm::SecondRowLong => vec![a_row, units, b_pos.clone(), vec![1]],
    };
    let tableau = Tableau::new(rows)?;
    let mut substitution = vec![BasisElement::A; n0 + j];
    substitution[0] = BasisElement::z(1, 1);
    for &p in &b_pos {
        substitution[p - 1] = BasisElement::B;
    }
    for u in n0 + 1..=n0 + j {
        substitution[u - 1] = BasisElement::One;
    }
    Ok(Witness {
        tableau,
        substitution,
        n0,
        r,
        j,
        form,
    })
}

pub const DOUBLE_SUM_LIMIT: u128 = 1_000_000;

/// All permutations of `items` with their signs, as `(image list, sign)`.
fn signed_permutations(items: &[usize]) -> Vec<(Vec<usize>, i8)> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, sign: i8, out: &mut Vec<(Vec<usize>, i8)>) {
        if rest.is_empty() {
            out.push((cur.clone(), sign));
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            // taking the i-th remaining element costs i transpositions
            go(rest, cur, if i % 2 == 0 { sign } else { -sign }, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut items.to_vec(), &mut Vec::new(), 1, &mut out);
    out
}

/// Permutations of `1..=n` preserving each block, as maps `p[x] = image`.
fn block_group(blocks: &[Vec<usize>], n: usize, signed: bool) -> Vec<(Vec<usize>, i8)> {
    let mut group: Vec<(Vec<usize>, i8)> = vec![((0..=n).collect(), 1)];
    for block in blocks {
        if block.len() < 2 {
            continue;
        }
        let perms = signed_permutations(block);
        group = group
            .into_iter()
            .flat_map(|(g, s)| {
                perms.iter().map(move |(img, ps)| {
                    let mut h = g.clone();
                    for (x, y) in block.iter().zip(img) {
                        h[*x] = *y;
                    }
                    (h, if signed { s * ps } else { s })
                })
            })
            .collect();
    }
    group
}

fn group_order(blocks: &[Vec<usize>]) -> u128 {
    blocks.iter().map(|b| factorial(b.len())).product()
}

/// Value of the monomial on `tree` whose `k`-th leaf carries `x_{π(k)}`.
fn evaluate_word(tree: &Tree, spec: &AlgebraSpec, values: &[BasisElement], pi: &dyn Fn(usize) -> usize) -> Option<BasisElement> {
    let mut slot = 0;
    eval_tree(tree, &mut slot, &|k| values[pi(k + 1) - 1], &|x, y| spec.product(x, y))
}

fn accumulate(terms: Vec<(Option<BasisElement>, i64)>) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (atom, c) in terms {
        if let Some(x) = atom {
            out.add_term(x, BigRational::from_integer(BigInt::from(c)));
        }
    }
    out
}

fn check_substitution(t: &Tableau, subst: &[BasisElement], spec: &AlgebraSpec) -> Result<()> {
    if subst.len() != t.n() {
        return Err(Error::Tableau(format!("substitution has {} values for n = {}", subst.len(), t.n())));
    }
    for &v in subst {
        spec.check_atom(v)?;
    }
    Ok(())
}

/// `Σ_{σ∈R} Σ_{τ∈C} sgn τ · x_{στ(1)} ⋯ x_{στ(n)}` on `tree`, evaluated at `subst`.
pub fn symmetrizer_double_sum(t: &Tableau, subst: &[BasisElement], spec: &AlgebraSpec, tree: &Tree) -> Result<AlgebraElement> {
    check_substitution(t, subst, spec)?;
    let (rows, cols) = (t.rows().to_vec(), t.columns());
    let size = group_order(&rows) * group_order(&cols);
    if size > DOUBLE_SUM_LIMIT {
        return Err(Error::Tableau(format!("double sum over {size} pairs exceeds {DOUBLE_SUM_LIMIT}")));
    }
    let n = t.n();
    let r_group = block_group(&rows, n, false);
    let c_group = block_group(&cols, n, true);
    let terms: Vec<(Option<BasisElement>, i64)> = r_group
        .par_iter()
        .flat_map_iter(|(sigma, _)| {
            c_group
                .iter()
                .map(move |(tau, s)| (evaluate_word(tree, spec, subst, &|k| sigma[tau[k]]), *s as i64))
        })
        .collect();
    Ok(accumulate(terms))
}

/// Signed column-group sum times `∏ (row length)!`; valid when `subst`
/// is constant along every row.
fn symmetrizer_columns(t: &Tableau, subst: &[BasisElement], spec: &AlgebraSpec, tree: &Tree) -> AlgebraElement {
    let c_group = block_group(&t.columns(), t.n(), true);
    let terms: Vec<(Option<BasisElement>, i64)> = c_group
        .par_iter()
        .map(|(tau, s)| (evaluate_word(tree, spec, subst, &|k| tau[k]), *s as i64))
        .collect();
    let rows: u128 = t.rows().iter().map(|r| factorial(r.len())).product();
    let scale = BigRational::from_integer(BigInt::from(rows));
    accumulate(terms).scaled(&scale)
}

fn row_constant(t: &Tableau, subst: &[BasisElement]) -> bool {
    t.rows().iter().all(|r| r.iter().all(|&x| subst[x - 1] == subst[r[0] - 1]))
}

/// `e_{T}` applied to the left-normed monomial `x_1 ⋯ x_n`, evaluated at `subst`.
pub fn evaluate_symmetrizer(t: &Tableau, subst: &[BasisElement], spec: &AlgebraSpec) -> Result<AlgebraElement> {
    evaluate_symmetrizer_on(t, subst, spec, &Tree::left_comb(t.n()))
}

pub fn evaluate_symmetrizer_on(t: &Tableau, subst: &[BasisElement], spec: &AlgebraSpec, tree: &Tree) -> Result<AlgebraElement> {
    check_substitution(t, subst, spec)?;
    if tree.leaves() != t.n() {
        return Err(Error::Tableau("bracketing and tableau sizes differ".into()));
    }
    if row_constant(t, subst) {
        Ok(symmetrizer_columns(t, subst, spec, tree))
    } else {
        symmetrizer_double_sum(t, subst, spec, tree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schedule {
    /// `r, 2r, 4r, …`
    Doubling,
    /// `r, r+1, r+2, …`
    Dense,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub i: usize,
    pub r: usize,
    pub n: usize,
    pub lambda: Partition,
    pub phi_gap: f64,
    pub shape_ok: bool,
    /// Which tableau family the point belongs to, when it belongs to one.
    pub form: Option<TableauForm>,
    /// Position of the inserted row (1, 2 or 3).
    pub inserted_row: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub m: usize,
    pub word: String,
    pub eps: f64,
    pub target: f64,
    pub k: u64,
    pub q: u64,
    pub points: Vec<WitnessPoint>,
    /// First index from which every point is admissible with `phi_gap < ε`.
    pub i0: Option<usize>,
    pub max_gap_after_i0: Option<f64>,
    /// `max |w_1 + ⋯ + w_t − α t|` over the prefixes used.
    pub c1: f64,
    pub c2: f64,
    /// `2 C₂ + k(m+1)`
    pub c: f64,
    /// Largest `n_{i+1} − n_i` over consecutive admissible points after `i0`.
    pub max_step: Option<usize>,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn gaps_below_eps(&self) -> bool {
        self.i0.is_some()
    }

    pub fn steps_bounded(&self) -> bool {
        self.max_step.is_some_and(|s| (s as f64) < self.c)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,n_i,lambda,phi_gap,shape_ok\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{:.12},{}\n", p.i, p.n, p.lambda, p.phi_gap, p.shape_ok));
        }
        out
    }
}

/// Tableau hypotheses for `λ` read as `(λ₁, λ₂, λ₃, 1)` with `r = λ₃`.
pub fn admissible(m: usize, word: &WordSpec, lambda: &Partition) -> Option<TableauForm> {
    if lambda.height() != 4 || lambda.part(4) != 1 {
        return None;
    }
    let r = lambda.part(3);
    let long = (m - 1) * r + ones(word, r);
    let n_expected = |j: usize| j + m * r + ones(word, r) + 1;
    let (l1, l2) = (lambda.part(1), lambda.part(2));
    if l2 == long && l1 >= long && n_expected(l1) == lambda.n() {
        Some(TableauForm::FirstRowLong)
    } else if l1 == long && long > l2 && l2 >= r && n_expected(l2) == lambda.n() {
        Some(TableauForm::SecondRowLong)
    } else {
        None
    }
}

/// Witness partitions `λ^{(r)}` whose `Φ` approaches `Φ₀(β) + 1`.
pub fn lemma12_sequence(m: usize, word: &WordSpec, eps: f64, count: usize, schedule: Schedule, r_start: usize) -> Result<WitnessReport> {
    if !(eps > 0.0) || count == 0 || r_start == 0 || m < 2 {
        return Err(Error::Domain("need ε > 0, count ≥ 1, r_start ≥ 1 and m ≥ 2".into()));
    }
    let alpha = word.slope().to_real();
    let target = phi::exp_formula(m, &alpha)?.unital;
    let gamma = 1.0 / (2.0 * (m as f64 + 1.0));
    let rs: Vec<usize> = (0..count)
        .map(|i| match schedule {
            Schedule::Doubling => r_start << i,
            Schedule::Dense => r_start + i,
        })
        .collect();
    let mut points = Vec::with_capacity(count);
    let (mut k_seen, mut q_seen) = (None, None);
    let mut max_t = 1;
    for (i, &r) in rs.iter().enumerate() {
        let wr = ones(word, r);
        let n = m * r + wr;
        let base = Partition::new(vec![(m - 1) * r + wr, r])?;
        let ins = insert_row(&base, eps / 4.0, gamma)?;
        k_seen.get_or_insert(ins.k);
        q_seen.get_or_insert(ins.q);
        if k_seen != Some(ins.k) {
            return Err(Error::Invariant("row insertion modulus changed along the sequence".into()));
        }
        let q = ins.q as usize;
        let rq = q * r;
        max_t = max_t.max(rq);
        let corrected = (m - 1) * rq + ones(word, rq);
        let new_row = n * (ins.k as usize - q);
        let (parts, form, note) = match ins.i {
            1 => (vec![new_row, corrected, rq, 1], TableauForm::FirstRowLong, None),
            2 => (vec![corrected, new_row, rq, 1], TableauForm::SecondRowLong, None),
            other => (vec![], TableauForm::FirstRowLong, Some(format!("new row landed in position {other}"))),
        };
        let ordered = !parts.is_empty() && parts.windows(2).all(|w| w[0] >= w[1]);
        let point = if ordered {
            let lambda = Partition::new(parts)?;
            let shape_ok = admissible(m, word, &lambda) == Some(form);
            WitnessPoint {
                i: i + 1,
                r,
                n: lambda.n(),
                phi_gap: gap(&lambda, &target),
                form: shape_ok.then_some(form),
                shape_ok,
                inserted_row: ins.i,
                note: (!shape_ok).then(|| "fails the tableau hypotheses".to_string()),
                lambda,
            }
        } else {
            WitnessPoint {
                i: i + 1,
                r,
                n: base.n(),
                phi_gap: gap(&base, &target),
                shape_ok: false,
                form: None,
                inserted_row: ins.i,
                note: Some(note.unwrap_or_else(|| "rows out of order at this r; base partition used".into())),
                lambda: base,
            }
        };
        points.push(point);
    }
    let i0 = (0..points.len())
        .find(|&s| points[s..].iter().all(|p| p.shape_ok && p.phi_gap < eps))
        .map(|s| s + 1);
    let max_gap_after_i0 = i0.map(|s| points[s - 1..].iter().map(|p| p.phi_gap).fold(0.0, f64::max));
    let alpha_f = real::to_f64(&alpha);
    let c1 = (1..=max_t)
        .map(|t| (word.ones_count(t) as f64 - alpha_f * t as f64).abs())
        .fold(0.0, f64::max);
    let (k, q) = (k_seen.unwrap_or(0), q_seen.unwrap_or(0));
    let c2 = c1 * (q as f64 + 1.0) + 1.0;
    let c = 2.0 * c2 + (k as f64) * (m as f64 + 1.0);
    let max_step = i0.and_then(|s| points[s - 1..].windows(2).map(|w| w[1].n.saturating_sub(w[0].n)).max());
    let mut notes = vec![
        "nonvanishing multiplicities at these degrees rest on the tableau construction; they are not computed directly"
            .to_string(),
    ];
    if schedule == Schedule::Doubling {
        notes.push("doubling schedule: consecutive steps grow with r and are not expected to stay below C".into());
    }
    Ok(WitnessReport {
        m,
        word: word.to_string(),
        eps,
        target: real::to_f64(&target),
        k,
        q,
        points,
        i0,
        max_gap_after_i0,
        c1,
        c2,
        c,
        max_step,
        notes,
    })
}

fn gap(lambda: &Partition, target: &real::Real) -> f64 {
    real::to_f64(&(ln_phi_partition(lambda).exp() - target.clone())).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundAudit {
    pub n: usize,
    pub delta: f64,
    pub bound: f64,
    pub max_phi: f64,
    pub argmax: Option<Partition>,
    pub slack: f64,
    pub pass: bool,
}

/// `Φ(λ) < Φ₀(β) + 1 + δ` for every `λ` with `m_λ ≠ 0`.
pub fn upper_bound_audit(table: &CocharacterTable, spec: &AlgebraSpec, delta: f64) -> Result<UpperBoundAudit> {
    let f = phi::exp_formula_slope(spec.m(), &spec.word().slope())?;
    let bound = real::to_f64(&f.unital) + delta;
    let best = table.nonzero().max_by(|a, b| a.phi.total_cmp(&b.phi));
    let max_phi = best.map_or(0.0, |e| e.phi);
    Ok(UpperBoundAudit {
        n: table.n,
        delta,
        bound,
        max_phi,
        argmax: best.map(|e| e.partition.clone()),
        slack: bound - max_phi,
        pass: max_phi < bound,
    })
}

/// Coefficient of `z^{(r+1)}_1` as an integer, when the value is a single
/// integral multiple of that atom.
pub fn single_z_multiple(value: &AlgebraElement, r: usize) -> Option<BigInt> {
    let (atom, c) = value.single_term()?;
    (atom == BasisElement::z(r + 1, 1) && c.is_integer() && !c.is_negative()).then(|| c.to_integer())
}

pub fn coefficient_to_u128(c: &BigInt) -> Option<u128> {
    c.to_u128()
}
