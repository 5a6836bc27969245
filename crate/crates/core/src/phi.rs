//! The entropy function `Φ(x_1,…,x_d) = ∏ x_i^{−x_i}` (with `0⁰ = 1`) and the
//! constructions built on it.
//!
//! Everything is evaluated in log-space on [`Real`], so `Φ(λ)^n` is never
//! formed.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{self, Real};
use crate::reptheory::{hook_degree, Partition};
use crate::words::{Slope, WordSpec};

/// `Φ` of a probability vector together with its logarithm.
#[derive(Clone, Debug)]
pub struct PhiValue {
    pub value: Real,
    pub ln_value: Real,
    pub inputs: Vec<f64>,
}

impl PhiValue {
    pub fn to_f64(&self) -> f64 {
        real::to_f64(&self.value)
    }

    fn from_ln(ln_value: Real, inputs: Vec<f64>) -> Self {
        PhiValue {
            value: ln_value.exp(),
            ln_value,
            inputs,
        }
    }
}

pub const SUM_TOLERANCE: f64 = 1e-12;

fn validate(x: &[Real]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Domain("Φ needs at least one argument".into()));
    }
    let mut sum = real::zero();
    for v in x {
        if *v < real::zero() {
            return Err(Error::Domain(format!("negative argument {}", real::to_f64(v))));
        }
        sum += v.clone();
    }
    let dev = real::to_f64(&(sum - real::one())).abs();
    if dev > SUM_TOLERANCE {
        return Err(Error::Domain(format!("arguments sum to 1 + {dev:e}")));
    }
    Ok(())
}

/// `Φ(x) = exp(−Σ x_i ln x_i)`.
pub fn phi_real(x: &[Real]) -> Result<PhiValue> {
    validate(x)?;
    let mut h = real::zero();
    for v in x {
        h -= real::xlnx(v);
    }
    Ok(PhiValue::from_ln(h, x.iter().map(real::to_f64).collect()))
}

pub fn phi(x: &[f64]) -> Result<PhiValue> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let xs: Vec<Real> = x.iter().map(|&v| real::from_f64(v)).collect();
    phi_real(&xs)
}

/// `ln Φ(λ) = ln n − (1/n)·Σ λ_i ln λ_i`, exact input.
pub fn ln_phi_partition(lambda: &Partition) -> Real {
    let n = real::from_u64(lambda.n() as u64);
    let mut acc = real::zero();
    for &p in lambda.parts() {
        acc += real::xlnx(&real::from_u64(p as u64));
    }
    n.ln() - acc / n
}

/// `Φ(λ_1/n, …, λ_h/n, 0, …, 0)` padded to `d` entries; padding does not
/// change the value but `d` must be at least the height.
pub fn phi_partition(lambda: &Partition, d: Option<usize>) -> Result<PhiValue> {
    if let Some(d) = d {
        if d < lambda.height() {
            return Err(Error::Domain(format!("{lambda} has more than {d} rows")));
        }
    }
    let n = lambda.n() as f64;
    let mut inputs: Vec<f64> = lambda.parts().iter().map(|&p| p as f64 / n).collect();
    inputs.resize(d.unwrap_or(inputs.len()).max(inputs.len()), 0.0);
    Ok(PhiValue::from_ln(ln_phi_partition(lambda), inputs))
}

/// Binary form `Φ₀(x) = x^{−x}(1−x)^{−(1−x)}`.
pub fn phi0(x: &Real) -> Result<Real> {
    let one = real::one();
    if *x < real::zero() || *x > one {
        return Err(Error::Domain(format!("Φ₀ needs 0 ≤ x ≤ 1, got {}", real::to_f64(x))));
    }
    let rest = one - x.clone();
    Ok((-(real::xlnx(x) + real::xlnx(&rest))).exp())
}

pub fn phi0_f64(x: f64) -> Result<f64> {
    Ok(real::to_f64(&phi0(&real::from_f64(x))?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeBounds {
    pub n: usize,
    pub d: usize,
    /// `n ln Φ(λ) − (d²+d) ln n`
    pub ln_lower: f64,
    /// `ln n + n ln Φ(λ)`
    pub ln_upper: f64,
    pub ln_degree: f64,
    pub pass: bool,
    /// Set when `n < 100`, where the bounds are not claimed.
    pub warning: Option<String>,
}

pub fn ln_biguint(x: &BigUint) -> Real {
    real::from_bigint(&BigInt::from(x.clone())).ln()
}

/// `Φ(λ)^n / n^{d²+d} ≤ deg χ_λ ≤ n Φ(λ)^n`, compared through logarithms.
pub fn lemma1_check(lambda: &Partition, d: usize) -> Result<DegreeBounds> {
    if lambda.height() > d {
        return Err(Error::Domain(format!("{lambda} has more than {d} rows")));
    }
    let n = lambda.n();
    let nr = real::from_u64(n as u64);
    let ln_n = nr.ln();
    let n_ln_phi = nr * ln_phi_partition(lambda);
    let lower = n_ln_phi.clone() - real::from_u64((d * d + d) as u64) * ln_n.clone();
    let upper = ln_n + n_ln_phi;
    let ln_deg = ln_biguint(&hook_degree(lambda));
    let pass = lower <= ln_deg && ln_deg <= upper;
    Ok(DegreeBounds {
        n,
        d,
        ln_lower: real::to_f64(&lower),
        ln_upper: real::to_f64(&upper),
        ln_degree: real::to_f64(&ln_deg),
        pass,
        warning: (n < 100).then(|| format!("n = {n} is below 100; the bounds are only claimed from n = 100 on")),
    })
}

/// Maximum of `t ↦ Φ(t z_1, …, t z_d, 1 − t)`.
#[derive(Clone, Debug)]
pub struct Extension {
    /// `a = Φ(z)`
    pub a: Real,
    /// `a / (a + 1)`
    pub t_star: Real,
    /// `a + 1`
    pub max_value: Real,
}

pub fn maximize_extension_real(z: &[Real]) -> Result<Extension> {
    let a = phi_real(z)?.value;
    let a1 = a.clone() + real::one();
    Ok(Extension {
        t_star: a.clone() / a1.clone(),
        a,
        max_value: a1,
    })
}

/// `(t*, a+1)` for `a = Φ(z)`.
pub fn maximize_extension(z: &[f64]) -> Result<(f64, f64)> {
    let zs: Vec<Real> = z.iter().map(|&v| real::from_f64(v)).collect();
    let e = maximize_extension_real(&zs)?;
    Ok((real::to_f64(&e.t_star), real::to_f64(&e.max_value)))
}

/// `Φ(t z, 1 − t)` evaluated directly.
pub fn extension_value(z: &[f64], t: f64) -> Result<f64> {
    let t = real::from_f64(t);
    let mut xs: Vec<Real> = z.iter().map(|&v| real::from_f64(v) * t.clone()).collect();
    xs.push(real::one() - t);
    Ok(phi_real(&xs)?.to_f64())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowInsertion {
    pub k: u64,
    pub q: u64,
    /// 1-based position of the inserted row in `mu`.
    pub i: usize,
    pub mu: Partition,
    pub phi_lambda: f64,
    pub phi_mu: f64,
    /// `|Φ(μ) − Φ(λ) − 1|`
    pub gap: f64,
}

/// Bound on `|d/dt Φ(t z, 1−t)|` for `t` within `1/(4(d+1))` of the maximizer.
fn derivative_bound(d: usize, gamma_floor: f64) -> f64 {
    let d1 = (d + 1) as f64;
    d1 * (4.0 * d1).ln().max((3.0 / gamma_floor).ln())
}

/// Smallest power of two `k ≥ max(4, 2(d+1))` with `bound/k < ε`; depends
/// only on `(d, γ, ε)`.
pub fn insertion_modulus(d: usize, eps: f64, gamma_floor: f64) -> Result<u64> {
    if !(eps > 0.0) || !(gamma_floor > 0.0 && gamma_floor <= 1.0) {
        return Err(Error::Domain(format!("need ε > 0 and 0 < γ ≤ 1, got ε={eps}, γ={gamma_floor}")));
    }
    let g = derivative_bound(d, gamma_floor);
    let mut k: u64 = 4u64.max(2 * (d as u64 + 1)).next_power_of_two();
    while g / k as f64 >= eps {
        k = k.checked_mul(2).ok_or_else(|| Error::Domain("ε too small for a 64-bit modulus".into()))?;
    }
    Ok(k)
}

/// Scale `λ` by `q` and insert a row `n(k−q)` so that `Φ(μ)` is within `ε`
/// of `Φ(λ) + 1`.
pub fn insert_row(lambda: &Partition, eps: f64, gamma_floor: f64) -> Result<RowInsertion> {
    let n = lambda.n() as u64;
    if lambda.parts().iter().any(|&p| (p as f64) < gamma_floor * n as f64) {
        return Err(Error::Domain(format!("{lambda} has a row below γ·n with γ = {gamma_floor}")));
    }
    let d = lambda.height();
    let k = insertion_modulus(d, eps, gamma_floor)?;
    let z: Vec<Real> = lambda
        .parts()
        .iter()
        .map(|&p| real::from_ratio(&BigRational::new(BigInt::from(p), BigInt::from(n))))
        .collect();
    let ext = maximize_extension_real(&z)?;
    let q = (real::to_f64(&ext.t_star) * k as f64).round().clamp(1.0, (k - 1) as f64) as u64;
    let new_row = (n * (k - q)) as usize;
    let mut parts: Vec<usize> = lambda.parts().iter().map(|&p| p * q as usize).collect();
    let i = parts.iter().position(|&p| p < new_row).unwrap_or(parts.len());
    parts.insert(i, new_row);
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Invariant(format!("inserted row breaks the ordering of {parts:?}")));
    }
    let mu = Partition::new(parts)?;
    let phi_lambda = ext.a.clone();
    let phi_mu = ln_phi_partition(&mu).exp();
    let gap = real::to_f64(&(phi_mu.clone() - phi_lambda.clone() - real::one())).abs();
    if gap >= eps {
        return Err(Error::Invariant(format!(
            "row insertion missed the target: gap {gap} ≥ ε = {eps} (k = {k}, q = {q})"
        )));
    }
    Ok(RowInsertion {
        k,
        q,
        i: i + 1,
        mu,
        phi_lambda: real::to_f64(&phi_lambda),
        phi_mu: real::to_f64(&phi_mu),
        gap,
    })
}

#[derive(Clone, Debug)]
pub struct ExpFormula {
    pub beta: Real,
    /// `Φ₀(β)`, the exponent of `A(m,w)`.
    pub phi0: Real,
    /// `Φ₀(β) + 1`, the exponent of the unital extension.
    pub unital: Real,
}

/// `β = 1/(m+α)` and `Φ₀(β)`.
pub fn exp_formula(m: usize, alpha: &Real) -> Result<ExpFormula> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be at least 2, got {m}")));
    }
    if *alpha <= real::zero() || *alpha > real::one() {
        return Err(Error::Domain(format!("α must lie in (0,1], got {}", real::to_f64(alpha))));
    }
    let beta = real::one() / (real::from_u64(m as u64) + alpha.clone());
    let p = phi0(&beta)?;
    Ok(ExpFormula {
        unital: p.clone() + real::one(),
        phi0: p,
        beta,
    })
}

pub fn exp_formula_slope(m: usize, alpha: &Slope) -> Result<ExpFormula> {
    exp_formula(m, &alpha.to_real())
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub m: usize,
    pub alpha: Slope,
    pub word: WordSpec,
    pub beta: f64,
    /// `|Φ₀(1/(m+α)) + 1 − γ|`
    pub residual: f64,
}

pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
const SNAP_DENOMINATOR: i64 = 64;
const SNAP_TOLERANCE: f64 = 1e-9;

/// Find `(m, α)` with `Φ₀(1/(m+α)) + 1 = γ` for `2 < γ < 3`.
pub fn realize_exponent(gamma: f64) -> Result<Realization> {
    if !(gamma > 2.0 && gamma < 3.0) {
        return Err(Error::Domain(format!(
            "γ = {gamma} is outside the open interval (2,3) reachable with m ≥ 2, α ∈ (0,1]"
        )));
    }
    let target = real::from_f64(gamma) - real::one();
    // Φ₀ increases on (0, 1/2)
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if phi0(&real::from_f64(mid))? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let x = 1.0 / beta;
    let residual_of = |alpha: &BigRational, m: usize| -> Result<f64> {
        let f = exp_formula(m, &real::from_ratio(alpha))?;
        Ok(real::to_f64(&(f.unital - real::from_f64(gamma))).abs())
    };
    let split = |xq: &BigRational| -> (usize, BigRational) {
        let ceil = xq.ceil().to_integer().to_usize().expect("small");
        let m = ceil - 1;
        (m, xq - BigRational::from_integer(BigInt::from(m)))
    };
    if let Some(xq) = snap_rational(x) {
        let (m, alpha) = split(&xq);
        if m >= 2 && alpha > BigRational::zero() && alpha <= BigRational::one() {
            let residual = residual_of(&alpha, m)?;
            if residual < RESIDUAL_TOLERANCE {
                return Ok(Realization {
                    m,
                    word: WordSpec::from_rational_slope(&alpha)?,
                    alpha: Slope::Rational(alpha),
                    beta,
                    residual,
                });
            }
        }
    }
    let xq = real::to_ratio(&real::from_f64(x));
    let (m, alpha) = split(&xq);
    if m < 2 {
        return Err(Error::Domain(format!("γ = {gamma} needs m = {m} < 2")));
    }
    // 60-bit dyadic approximation of the slope
    let scale = BigInt::one() << 60u32;
    let alpha = BigRational::new((alpha * BigRational::from_integer(scale.clone())).round().to_integer(), scale);
    let residual = residual_of(&alpha, m)?;
    if residual >= RESIDUAL_TOLERANCE {
        return Err(Error::Invariant(format!("realization residual {residual:e} is too large")));
    }
    let slope = Slope::Rational(alpha);
    Ok(Realization {
        m,
        word: WordSpec::mechanical(slope.clone(), BigRational::zero())?,
        alpha: slope,
        beta,
        residual,
    })
}

fn snap_rational(x: f64) -> Option<BigRational> {
    (1..=SNAP_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < SNAP_TOLERANCE).then(|| BigRational::new(BigInt::from(p as i64), BigInt::from(q)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert!(close(phi(&[0.5, 0.5]).unwrap().to_f64(), 2.0, 1e-15));
        assert!(close(phi(&[1.0, 0.0, 0.0]).unwrap().to_f64(), 1.0, 1e-15));
        let third = real::one() / real::from_u64(3);
        assert!(close(phi_real(&[third.clone(), third.clone(), third]).unwrap().to_f64(), 3.0, 1e-15));
        // 0.75^{-0.75}·0.25^{-0.25} computed independently in f64
        let expect = 0.75f64.powf(-0.75) * 0.25f64.powf(-0.25);
        assert!(close(phi(&[0.75, 0.25]).unwrap().to_f64(), expect, 1e-12));
        assert!(close(expect, 1.754765, 1e-6));
        assert!(phi(&[0.5, 0.6]).is_err());
        assert!(phi(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn phi_partition_examples() {
        assert!(close(phi_partition(&part(&[7]), None).unwrap().to_f64(), 1.0, 1e-15));
        assert!(close(phi_partition(&part(&[6, 6]), Some(4)).unwrap().to_f64(), 2.0, 1e-15));
        assert!(close(phi_partition(&part(&[75, 25]), None).unwrap().to_f64(), 1.754765, 1e-6));
        assert!(phi_partition(&part(&[2, 1, 1]), Some(2)).is_err());
    }

    #[test]
    fn degree_bound_examples() {
        let c = lemma1_check(&part(&[60, 40]), 2).unwrap();
        assert!(c.pass && c.warning.is_none());
        let c = lemma1_check(&part(&[100]), 1).unwrap();
        assert!(c.pass);
        assert!(close(c.ln_degree, 0.0, 1e-20));
        assert!(lemma1_check(&part(&[3, 2]), 2).unwrap().warning.is_some());
    }

    #[test]
    fn extension_examples() {
        let (t, v) = maximize_extension(&[0.5, 0.5]).unwrap();
        assert!(close(t, 2.0 / 3.0, 1e-15) && close(v, 3.0, 1e-15));
        let (t, v) = maximize_extension(&[1.0]).unwrap();
        assert!(close(t, 0.5, 1e-15) && close(v, 2.0, 1e-15));
        let (t, v) = maximize_extension(&[0.75, 0.25]).unwrap();
        let a = 0.75f64.powf(-0.75) * 0.25f64.powf(-0.25);
        assert!(close(t, a / (a + 1.0), 1e-14) && close(t, 0.63699, 1e-5));
        assert!(close(v, 2.754765, 1e-6));
        assert!(close(extension_value(&[0.75, 0.25], t).unwrap(), v, 1e-12));
    }

    #[test]
    fn insertion_examples() {
        let a = insert_row(&part(&[50, 50]), 0.05, 0.25).unwrap();
        assert!((a.phi_mu - 3.0).abs() < 0.05);
        let b = insert_row(&part(&[500, 500]), 0.05, 0.25).unwrap();
        assert_eq!(a.k, b.k);
        assert_eq!(a.q, b.q);
        let c = insert_row(&part(&[9]), 0.1, 0.25).unwrap();
        assert!((c.phi_mu - 2.0).abs() < 0.1);
        assert!(insert_row(&part(&[99, 1]), 0.1, 0.25).is_err());
    }

    #[test]
    fn exp_formula_examples() {
        let f = exp_formula(2, &real::one()).unwrap();
        assert!(close(real::to_f64(&f.phi0), 1.889881, 1e-6));
        assert!(close(real::to_f64(&f.phi0), 3.0 / 2f64.powf(2.0 / 3.0), 1e-14));
        let f = exp_formula(2, &real::from_f64(0.5)).unwrap();
        assert!(close(real::to_f64(&f.phi0), 1.960131, 1e-6));
        assert!(close(real::to_f64(&f.unital), 2.960131, 1e-6));
        let alpha = real::from_f64(0.3);
        let mut last = f64::INFINITY;
        for m in 2..10 {
            let v = real::to_f64(&exp_formula(m, &alpha).unwrap().phi0);
            assert!(v < last);
            last = v;
        }
        assert!(exp_formula(1, &alpha).is_err());
        assert!(exp_formula(2, &real::zero()).is_err());
    }

    #[test]
    fn realization_examples() {
        let g = 3.0 / 2f64.powf(2.0 / 3.0) + 1.0;
        let r = realize_exponent(g).unwrap();
        assert_eq!(r.m, 2);
        assert_eq!(r.alpha, Slope::rational(1, 1));
        let r = realize_exponent(phi0_f64(0.4).unwrap() + 1.0).unwrap();
        assert_eq!((r.m, r.alpha.clone()), (2, Slope::rational(1, 2)));
        assert_eq!(r.word.to_string(), "periodic:10");
        let r = realize_exponent(2.5).unwrap();
        assert!(r.residual < 1e-9);
        assert!(!r.word.is_periodic());
        assert!(realize_exponent(2.0).is_err());
        assert!(realize_exponent(3.0).is_err());
    }
}
