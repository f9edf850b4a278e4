//! Multimode photon-number moments and coincidence counts, the `2^μ`
//! class-pattern matrices and the moment-ratio criteria.

use std::fmt;

use num_complex::Complex64;

use crate::detectors::compositions;
use crate::error::{Error, Result};
use crate::numerics::{factorial, HalfInt, SymMatrix};
use crate::states::{expect_detailed, Expectation, NoExpr, Parity, Response, StateSpec};
use crate::witnesses::{
    format_element, Element, IndexClass, IndexSet, ReportSource, Verdict, WitnessReport,
    MatrixKind,
};

pub const MAX_MODES: usize = 8;
pub const MAX_SET_SIZE: usize = 64;
/// Relative size below which an expectation counts as an exact zero.
pub const ZERO_REL_TOL: f64 = 1e-12;

fn check_modes(state: &StateSpec, len: usize) -> Result<()> {
    let modes = state.modes();
    if len != modes {
        return Err(Error::domain(format!(
            "multi-index has {len} components for a {modes}-mode state"
        )));
    }
    if modes > MAX_MODES {
        return Err(Error::domain(format!("{modes} modes exceeds the limit of {MAX_MODES}")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::domain(format!("efficiency {eta} outside (0, 1]")));
    }
    Ok(())
}

fn product_expectation(state: &StateSpec, m: &[u32], eta: f64, decay: f64) -> Result<Expectation> {
    check_modes(state, m.len())?;
    check_eta(eta)?;
    let response = Response::lossy(eta);
    let exprs: Vec<NoExpr> = m
        .iter()
        .map(|&k| NoExpr::monomial(1.0, k, decay, response))
        .collect();
    let refs: Vec<&NoExpr> = exprs.iter().collect();
    expect_detailed(state, &refs)
}

/// `⟨:Π_j (ηn̂_j)^{m_j}:⟩`.
pub fn joint_moment(state: &StateSpec, m: &[u32], eta: f64) -> Result<f64> {
    Ok(product_expectation(state, m, eta, 0.0)?.value)
}

/// Coincidence probability `p_m = ⟨:Π_j (ηn̂_j)^{m_j} e^{−ηn̂_j}:⟩ / m!`.
pub fn joint_counts(state: &StateSpec, m: &[u32], eta: f64) -> Result<f64> {
    let v = product_expectation(state, m, eta, 1.0)?.value;
    let mfact: f64 = m.iter().map(|&k| factorial(k)).product();
    Ok(v / mfact)
}

/// `Σ_j ⟨ηn̂_j⟩`.
pub fn total_photon_number(state: &StateSpec, eta: f64) -> Result<f64> {
    let modes = state.modes();
    (0..modes)
        .map(|j| {
            let mut m = vec![0; modes];
            m[j] = 1;
            joint_moment(state, &m, eta)
        })
        .sum()
}

fn alpha_power(alpha: &[Complex64], m: &[u32]) -> f64 {
    alpha
        .iter()
        .zip(m)
        .map(|(a, &k)| a.norm_sqr().powi(k as i32))
        .product()
}

fn intensity(alpha: &[Complex64]) -> f64 {
    alpha.iter().map(|a| a.norm_sqr()).sum()
}

/// Closed-form `⟨:n̂^m:⟩` of a multimode cat with efficiency `η`:
/// `η^{|m|} |α^m|² [1 ± (−1)^{|m|} e^{−2‖α‖²}] / [1 ± e^{−2‖α‖²}]`.
pub fn cat_moment_closed_form(alpha: &[Complex64], parity: Parity, m: &[u32], eta: f64) -> f64 {
    let x = intensity(alpha);
    let order: u32 = m.iter().sum();
    let factor = if order.is_multiple_of(2) {
        1.0
    } else {
        match parity {
            Parity::Even => x.tanh(),
            Parity::Odd => 1.0 / x.tanh(),
        }
    };
    eta.powi(order as i32) * alpha_power(alpha, m) * factor
}

/// Closed-form `p_m` of a multimode cat for ideal detection:
/// `m! p_m = |α^m|² [1 ± (−1)^{|m|}] / [e^{‖α‖²} ± e^{−‖α‖²}]`.
pub fn cat_counts_closed_form(alpha: &[Complex64], parity: Parity, m: &[u32]) -> f64 {
    let x = intensity(alpha);
    let order: u32 = m.iter().sum();
    let mfact: f64 = m.iter().map(|&k| factorial(k)).product();
    let value = match (parity, order % 2) {
        (Parity::Even, 0) => alpha_power(alpha, m) / x.cosh(),
        (Parity::Odd, 1) => alpha_power(alpha, m) / x.sinh(),
        _ => 0.0,
    };
    value / mfact
}

/// `‖α‖² tanh(‖α‖²)` for even cats, `‖α‖² coth(‖α‖²)` for odd ones.
pub fn cat_total_photons_closed_form(intensity: f64, parity: Parity) -> f64 {
    match parity {
        Parity::Even => intensity * intensity.tanh(),
        Parity::Odd => intensity / intensity.tanh(),
    }
}

/// The four ratio-criterion cases, by the class and parity of `|n|` and `|m|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RatioCase {
    /// Integer orders, even sum.
    I,
    /// Integer orders, odd sum.
    Ii,
    /// Half-integer orders, even sum.
    Iii,
    /// Half-integer orders, odd sum.
    Iv,
}

impl RatioCase {
    pub fn classify(n: &[HalfInt], m: &[HalfInt]) -> Result<RatioCase> {
        let nn: HalfInt = n.iter().copied().sum();
        let mm: HalfInt = m.iter().copied().sum();
        let total = (nn + mm)
            .to_integer()
            .ok_or_else(|| Error::domain("|n| + |m| is not an integer"))?;
        let even = total % 2 == 0;
        Ok(match (nn.is_integer(), even) {
            (true, true) => RatioCase::I,
            (true, false) => RatioCase::Ii,
            (false, true) => RatioCase::Iii,
            (false, false) => RatioCase::Iv,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            RatioCase::I => "i",
            RatioCase::Ii => "ii",
            RatioCase::Iii => "iii",
            RatioCase::Iv => "iv",
        }
    }

    /// Closed-form ratio for a multimode cat of intensity `‖α‖²`.
    pub fn cat_ratio(self, intensity: f64, parity: Parity) -> f64 {
        let t = intensity.tanh();
        match (self, parity) {
            (RatioCase::I | RatioCase::Iv, _) => 1.0,
            (RatioCase::Ii, Parity::Even) | (RatioCase::Iii, Parity::Odd) => t * t,
            (RatioCase::Ii, Parity::Odd) | (RatioCase::Iii, Parity::Even) => 1.0 / (t * t),
        }
    }
}

impl fmt::Display for RatioCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioResult {
    /// `None` when a denominator vanishes.
    pub ratio: Option<f64>,
    pub case: RatioCase,
}

impl RatioResult {
    pub fn verdict(&self) -> Verdict {
        match self.ratio {
            None => Verdict::Indeterminate,
            Some(r) if r > 1.0 + ZERO_REL_TOL => Verdict::Nonclassical,
            Some(_) => Verdict::NoViolation,
        }
    }
}

/// Integer exponent vectors `n + m`, `2m`, `2n`.
fn ratio_exponents(n: &[HalfInt], m: &[HalfInt]) -> Result<[Vec<u32>; 3]> {
    if n.len() != m.len() {
        return Err(Error::domain("multi-indices have different lengths"));
    }
    let to_u32 = |h: HalfInt, what: &str| -> Result<u32> {
        h.to_integer()
            .and_then(|k| u32::try_from(k).ok())
            .ok_or_else(|| Error::domain(format!("{what} component {h} is not a non-negative integer")))
    };
    let mut sum = Vec::with_capacity(n.len());
    let mut dm = Vec::with_capacity(n.len());
    let mut dn = Vec::with_capacity(n.len());
    for (j, (&a, &b)) in n.iter().zip(m).enumerate() {
        if !a.is_nonnegative() || !b.is_nonnegative() {
            return Err(Error::domain(format!("negative component in mode {j}")));
        }
        if !(a + b).is_integer() {
            return Err(Error::Inadmissible {
                first: format_element(n),
                second: format_element(m),
                reason: format!("mode {j} sums to a half-odd number"),
            });
        }
        sum.push(to_u32(a + b, "n + m")?);
        dm.push(to_u32(b * 2, "2m")?);
        dn.push(to_u32(a * 2, "2n")?);
    }
    Ok([sum, dm, dn])
}

fn is_zero(e: &Expectation) -> bool {
    e.value.abs() <= ZERO_REL_TOL * e.scale
}

/// `⟨:n̂^{m+n}:⟩² / (⟨:n̂^{2m}:⟩⟨:n̂^{2n}:⟩)`; values above one certify
/// nonclassicality.
pub fn ratio_criterion(state: &StateSpec, n: &[HalfInt], m: &[HalfInt], eta: f64) -> Result<RatioResult> {
    let case = RatioCase::classify(n, m)?;
    let [sum, dm, dn] = ratio_exponents(n, m)?;
    let num = product_expectation(state, &sum, eta, 0.0)?;
    let den_m = product_expectation(state, &dm, eta, 0.0)?;
    let den_n = product_expectation(state, &dn, eta, 0.0)?;
    let ratio = if is_zero(&den_m) || is_zero(&den_n) {
        None
    } else {
        Some(num.value * num.value / (den_m.value * den_n.value))
    };
    Ok(RatioResult { ratio, case })
}

/// Outcome of the count-based ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountRatio {
    Finite(f64),
    /// Nonzero numerator over a vanishing denominator.
    Divergent,
    /// Numerator and denominator both vanish.
    Indeterminate,
}

impl CountRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            CountRatio::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            CountRatio::Finite(r) if r > 1.0 + ZERO_REL_TOL => Verdict::Nonclassical,
            CountRatio::Finite(_) => Verdict::NoViolation,
            _ => Verdict::Indeterminate,
        }
    }
}

impl fmt::Display for CountRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountRatio::Finite(r) => write!(f, "{r:.16e}"),
            CountRatio::Divergent => f.write_str("divergent"),
            CountRatio::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// `[(m+n)! p_{m+n}]² / ([(2m)! p_{2m}] [(2n)! p_{2n}])`.
pub fn count_ratio_criterion(state: &StateSpec, n: &[HalfInt], m: &[HalfInt], eta: f64) -> Result<CountRatio> {
    let [sum, dm, dn] = ratio_exponents(n, m)?;
    let num = product_expectation(state, &sum, eta, 1.0)?;
    let den_m = product_expectation(state, &dm, eta, 1.0)?;
    let den_n = product_expectation(state, &dn, eta, 1.0)?;
    let den_zero = is_zero(&den_m) || is_zero(&den_n);
    Ok(match (is_zero(&num), den_zero) {
        (_, false) => CountRatio::Finite(num.value * num.value / (den_m.value * den_n.value)),
        (false, true) => CountRatio::Divergent,
        (true, true) => CountRatio::Indeterminate,
    })
}

/// Count (`[(k+l)! p_{k+l}]`) or moment (`[⟨:n̂^{k+l}:⟩]`) matrix over a set of
/// multi-indices, one component per mode.
pub fn multimode_matrices(
    state: &StateSpec,
    set: &IndexSet,
    eta: f64,
    kind: MatrixKind,
) -> Result<WitnessReport> {
    if set.is_empty() {
        return Err(Error::domain(format!("index set {} has no elements", set.label())));
    }
    if set.len() > MAX_SET_SIZE {
        return Err(Error::domain(format!(
            "set of {} elements exceeds the limit of {MAX_SET_SIZE}",
            set.len()
        )));
    }
    check_modes(state, set.pattern().len())?;
    let decay = match kind {
        MatrixKind::Counts => 1.0,
        MatrixKind::Moments => 0.0,
    };
    let matrix = SymMatrix::try_from_fn(set.len(), |i, j| {
        Ok::<_, Error>(product_expectation(state, &set.pair_sum(i, j), eta, decay)?.value)
    })?;
    let source = match kind {
        MatrixKind::Counts => ReportSource::CountsMultimode,
        MatrixKind::Moments => ReportSource::MomentsMultimode,
    };
    WitnessReport::from_matrix(
        matrix,
        set.elements().to_vec(),
        source,
        format!("multimode eta={eta} set={} {}", set.label(), set),
    )
}

/// The `2^μ` class-pattern sets. Each contains the pattern's smallest
/// element plus every element reached by adding at most `extra` whole
/// quanta, distributed over the modes.
pub fn multimode_index_sets(modes: usize, extra: u32) -> Result<Vec<IndexSet>> {
    if modes == 0 || modes > MAX_MODES {
        return Err(Error::domain(format!("mode count {modes} outside 1..={MAX_MODES}")));
    }
    let mut increments: Vec<Vec<u32>> = Vec::new();
    for total in 0..=extra {
        increments.extend(compositions(total, modes));
        if increments.len() > MAX_SET_SIZE {
            return Err(Error::domain(format!(
                "{modes} modes with {extra} extra quanta exceed {MAX_SET_SIZE} elements"
            )));
        }
    }
    (0..1u32 << modes)
        .map(|bits| {
            let base: Vec<HalfInt> = (0..modes)
                .map(|j| if bits >> j & 1 == 1 { HalfInt::HALF } else { HalfInt::ZERO })
                .collect();
            let elements: Vec<Element> = increments
                .iter()
                .map(|inc| {
                    base.iter()
                        .zip(inc)
                        .map(|(&b, &k)| b + HalfInt::from_int(k as i64))
                        .collect()
                })
                .collect();
            IndexSet::new(elements)
        })
        .collect()
}

/// Class letters of a multimode set, e.g. `"ZH"`.
pub fn pattern_name(set: &IndexSet) -> String {
    set.pattern().iter().map(|c: &IndexClass| c.letter()).collect()
}
