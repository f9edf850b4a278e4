//! Counting distributions and normally ordered moments for the
//! photoelectric, multiplexed on-off and multiplexed partially resolving
//! detector models.
//!
//! Multiplexed models split the light evenly over `N` bins, so each bin sees
//! `Γ = (η/N) n̂ + ν` with the dark-count term `ν` applied per bin. The
//! photoelectric model uses `Γ = η n̂ + ν`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{binom, factorial, falling_factorial, multinom, MAX_COMBINATORIAL_N};
use crate::states::{expect, Factored, NoExpr, PovmFactor, Response, StateSpec};

/// Upper bound on enumerated outcomes or moment kernels per configuration.
pub const MAX_OUTCOMES: u128 = 100_000;

const NEGATIVE_PROB_TOL: f64 = 1e-14;
const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorModel {
    Photoelectric,
    /// `bins` multiplexed on-off detectors.
    OnOff { bins: u32 },
    /// `bins` multiplexed detectors resolving 0, 1, …, `levels`−1 and
    /// "`levels` or more" photons.
    Pnr { bins: u32, levels: u32 },
}

impl DetectorModel {
    pub fn bins(&self) -> Option<u32> {
        match *self {
            DetectorModel::Photoelectric => None,
            DetectorModel::OnOff { bins } | DetectorModel::Pnr { bins, .. } => Some(bins),
        }
    }

    /// Intrinsic resolution `K`; on-off detectors have `K = 1`.
    pub fn levels(&self) -> Option<u32> {
        match *self {
            DetectorModel::Photoelectric => None,
            DetectorModel::OnOff { .. } => Some(1),
            DetectorModel::Pnr { levels, .. } => Some(levels),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DetectorModel::Photoelectric => "photoelectric",
            DetectorModel::OnOff { .. } => "onoff",
            DetectorModel::Pnr { .. } => "pnr",
        }
    }
}

impl fmt::Display for DetectorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorModel::Photoelectric => write!(f, "photoelectric"),
            DetectorModel::OnOff { bins } => write!(f, "onoff(N={bins})"),
            DetectorModel::Pnr { bins, levels } => write!(f, "pnr(N={bins},K={levels})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub model: DetectorModel,
    /// Quantum efficiency η ∈ (0, 1].
    pub efficiency: f64,
    /// Dark-count contribution ν ≥ 0, per bin.
    pub dark: f64,
}

impl DetectorConfig {
    pub fn photoelectric(efficiency: f64) -> Self {
        DetectorConfig {
            model: DetectorModel::Photoelectric,
            efficiency,
            dark: 0.0,
        }
    }

    pub fn on_off(bins: u32, efficiency: f64) -> Self {
        DetectorConfig {
            model: DetectorModel::OnOff { bins },
            efficiency,
            dark: 0.0,
        }
    }

    pub fn pnr(bins: u32, levels: u32, efficiency: f64) -> Self {
        DetectorConfig {
            model: DetectorModel::Pnr { bins, levels },
            efficiency,
            dark: 0.0,
        }
    }

    pub fn with_dark(mut self, dark: f64) -> Self {
        self.dark = dark;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::domain(format!(
                "efficiency {} outside (0, 1]",
                self.efficiency
            )));
        }
        if !(self.dark >= 0.0 && self.dark.is_finite()) {
            return Err(Error::domain(format!("dark count {} must be >= 0", self.dark)));
        }
        if let Some(bins) = self.model.bins() {
            if bins == 0 || bins > MAX_COMBINATORIAL_N {
                return Err(Error::domain(format!(
                    "bin count {bins} outside 1..={MAX_COMBINATORIAL_N}"
                )));
            }
        }
        if let DetectorModel::Pnr { levels, .. } = self.model {
            if levels == 0 {
                return Err(Error::domain("intrinsic resolution K must be >= 1"));
            }
        }
        Ok(())
    }

    /// Per-bin response `Γ`.
    pub fn response(&self) -> Response {
        let rate = match self.model.bins() {
            None => self.efficiency,
            Some(n) => self.efficiency / n as f64,
        };
        Response::new(rate, self.dark)
    }
}

/// Outcome space of a [`CountDistribution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeSpace {
    /// Photon numbers `0..=n_max`; outcomes are `[n]`.
    Photon { n_max: u32 },
    /// Total clicks `0..=bins`; outcomes are `[k]`.
    Clicks { bins: u32 },
    /// Bin tallies `[N_0, …, N_K]` with `Σ N_j = bins`.
    Multinomial { bins: u32, levels: u32 },
    /// Joint photon numbers `[n_1, …, n_μ]`.
    Multimode { modes: u32 },
}

impl OutcomeSpace {
    pub fn for_model(model: DetectorModel) -> Option<OutcomeSpace> {
        match model {
            DetectorModel::Photoelectric => None,
            DetectorModel::OnOff { bins } => Some(OutcomeSpace::Clicks { bins }),
            DetectorModel::Pnr { bins, levels } => Some(OutcomeSpace::Multinomial { bins, levels }),
        }
    }

    fn accepts(&self, outcome: &[u32]) -> bool {
        match *self {
            OutcomeSpace::Photon { n_max } => outcome.len() == 1 && outcome[0] <= n_max,
            OutcomeSpace::Clicks { bins } => outcome.len() == 1 && outcome[0] <= bins,
            OutcomeSpace::Multinomial { bins, levels } => {
                outcome.len() == levels as usize + 1 && outcome.iter().sum::<u32>() == bins
            }
            OutcomeSpace::Multimode { modes } => outcome.len() == modes as usize,
        }
    }
}

/// Outcome → probability map, sorted lexicographically by outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    space: OutcomeSpace,
    outcomes: Vec<Vec<u32>>,
    probs: Vec<f64>,
}

impl CountDistribution {
    /// Validates normalization (within 1e-10) and non-negativity (within
    /// −1e-14, clipped to zero).
    pub fn new(space: OutcomeSpace, entries: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        let dist = Self::build(space, entries)?;
        let total = dist.total();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!("distribution sums to {total}")));
        }
        Ok(dist)
    }

    fn build(space: OutcomeSpace, mut entries: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::domain(format!("duplicate outcome {:?}", w[0].0)));
            }
        }
        let mut outcomes = Vec::with_capacity(entries.len());
        let mut probs = Vec::with_capacity(entries.len());
        for (o, p) in entries {
            if !space.accepts(&o) {
                return Err(Error::domain(format!("outcome {o:?} not in {space:?}")));
            }
            if !p.is_finite() || p < -NEGATIVE_PROB_TOL {
                return Err(Error::domain(format!("probability {p} for outcome {o:?}")));
            }
            outcomes.push(o);
            probs.push(p.max(0.0));
        }
        Ok(CountDistribution {
            space,
            outcomes,
            probs,
        })
    }

    pub fn space(&self) -> OutcomeSpace {
        self.space
    }

    pub fn outcomes(&self) -> &[Vec<u32>] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.outcomes.iter().map(Vec::as_slice).zip(self.probs.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Probability of an outcome; zero when absent.
    pub fn prob(&self, outcome: &[u32]) -> f64 {
        self.outcomes
            .binary_search_by(|o| o.as_slice().cmp(outcome))
            .map(|i| self.probs[i])
            .unwrap_or(0.0)
    }

    /// Probability of `k` for single-index spaces.
    pub fn single(&self, k: u32) -> f64 {
        self.prob(&[k])
    }
}

/// Detector with its normally ordered kernels expanded once. Counts are
/// `multiplier(outcome) · ⟨:kernel:⟩`; the kernels are the matrix entries
/// of the count matrix directly.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    response: Response,
    povm: Vec<NoExpr>,
    count_kernels: BTreeMap<Vec<u32>, NoExpr>,
    moment_kernels: BTreeMap<Vec<u32>, NoExpr>,
}

/// Compositions of `total` into `parts` non-negative integers, lexicographic.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            rec(remaining - v, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// POVM elements `π_j = :Γ^j/j! e^{-Γ}:` for `j < K` and
/// `π_K = 1 − Σ_{j<K} π_j`.
pub fn pnr_povm(levels: u32, response: Response) -> Vec<NoExpr> {
    let mut povm: Vec<NoExpr> = (0..levels)
        .map(|j| NoExpr::monomial(1.0 / factorial(j), j, 1.0, response))
        .collect();
    let rest = povm
        .iter()
        .fold(NoExpr::one(response), |acc, p| &acc - p);
    povm.push(rest);
    povm.into_iter()
        .enumerate()
        .map(|(j, p)| {
            let f = povm_factor(j as u32, levels);
            p.with_factored(Factored {
                coeff: 1.0,
                factors: vec![(f, 1)],
            })
        })
        .collect()
}

fn povm_factor(j: u32, levels: u32) -> PovmFactor {
    if j < levels {
        PovmFactor::Level(j)
    } else {
        PovmFactor::Tail(levels)
    }
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Result<Self> {
        config.validate()?;
        let response = config.response();
        let mut det = Detector {
            config,
            response,
            povm: Vec::new(),
            count_kernels: BTreeMap::new(),
            moment_kernels: BTreeMap::new(),
        };
        let (Some(bins), Some(levels)) = (config.model.bins(), config.model.levels()) else {
            return Ok(det);
        };
        let slots = levels as usize + 1;
        let n_counts = binom(bins + levels, levels).unwrap_or(u128::MAX);
        let n_moments = binom(bins + levels + 1, levels + 1).unwrap_or(u128::MAX);
        if n_counts > MAX_OUTCOMES || n_moments > MAX_OUTCOMES {
            return Err(Error::domain(format!(
                "{} has too many outcomes to enumerate",
                config.model
            )));
        }
        det.povm = pnr_povm(levels, response);
        let powers: Vec<Vec<NoExpr>> = det
            .povm
            .iter()
            .map(|p| {
                let mut v = vec![NoExpr::one(response)];
                for e in 1..=bins as usize {
                    let next = &v[e - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        let product = |exps: &[u32]| {
            let expanded = exps
                .iter()
                .enumerate()
                .fold(NoExpr::one(response), |acc, (j, &e)| &acc * &powers[j][e as usize]);
            let factors = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| (povm_factor(j as u32, levels), e))
                .collect();
            expanded.with_factored(Factored { coeff: 1.0, factors })
        };
        let on_off = matches!(config.model, DetectorModel::OnOff { .. });
        let key = |tally: &[u32]| if on_off { vec![tally[1]] } else { tally.to_vec() };
        for tally in compositions(bins, slots) {
            det.count_kernels.insert(key(&tally), product(&tally));
        }
        for total in 0..=bins {
            for exps in compositions(total, slots) {
                // on-off moments only involve π = π_1
                if on_off && exps[0] != 0 {
                    continue;
                }
                det.moment_kernels.insert(key(&exps), product(&exps));
            }
        }
        Ok(det)
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn model(&self) -> DetectorModel {
        self.config.model
    }

    pub fn response(&self) -> Response {
        self.response
    }

    /// POVM elements of a single bin; empty for the photoelectric model.
    pub fn povm(&self) -> &[NoExpr] {
        &self.povm
    }

    /// Outcomes of a multiplexed detector in lexicographic order.
    pub fn outcomes(&self) -> Vec<Vec<u32>> {
        self.count_kernels.keys().cloned().collect()
    }

    /// Kernel whose expectation is the count-matrix entry for `outcome`:
    /// `s! p_s`, `c_k / C(N,k)` or `c_{N_0..N_K} / multinom(N; N_0..N_K)`.
    pub fn count_kernel(&self, outcome: &[u32]) -> Result<NoExpr> {
        match self.config.model {
            DetectorModel::Photoelectric => match outcome {
                [s] => Ok(NoExpr::monomial(1.0, *s, 1.0, self.response)),
                _ => Err(Error::domain("photoelectric outcomes have one index")),
            },
            _ => self
                .count_kernels
                .get(outcome)
                .cloned()
                .ok_or_else(|| Error::domain(format!("outcome {outcome:?} not in {}", self.model()))),
        }
    }

    /// Kernel of a normally ordered moment: `Γ^s`, `π^s` or `Π_j π_j^{e_j}`.
    pub fn moment_kernel(&self, exps: &[u32]) -> Result<NoExpr> {
        match self.config.model {
            DetectorModel::Photoelectric => match exps {
                [s] => Ok(NoExpr::monomial(1.0, *s, 0.0, self.response)),
                _ => Err(Error::domain("photoelectric moments have one index")),
            },
            _ => self.moment_kernels.get(exps).cloned().ok_or_else(|| {
                Error::domain(format!("moment exponents {exps:?} exceed {}", self.model()))
            }),
        }
    }

    /// Factor turning a count kernel into a probability.
    pub fn count_multiplier(&self, outcome: &[u32]) -> Result<f64> {
        match (self.config.model, outcome) {
            (DetectorModel::Photoelectric, [s]) => Ok(1.0 / factorial(*s)),
            (DetectorModel::OnOff { bins }, [k]) => Ok(binom(bins, *k)? as f64),
            (DetectorModel::Pnr { bins, .. }, tally) => Ok(multinom(bins, tally)? as f64),
            _ => Err(Error::domain(format!("outcome {outcome:?} not in {}", self.model()))),
        }
    }
}

fn multiplexed_distribution(state: &StateSpec, det: &Detector) -> Result<CountDistribution> {
    let space = OutcomeSpace::for_model(det.model())
        .ok_or_else(|| Error::domain("photoelectric detectors use photo_distribution"))?;
    let entries = det
        .count_kernels
        .iter()
        .map(|(o, k)| Ok((o.clone(), det.count_multiplier(o)? * expect(state, k)?)))
        .collect::<Result<Vec<_>>>()?;
    CountDistribution::new(space, entries)
}

/// `p_n = ⟨:Γ^n/n! e^{-Γ}:⟩` for `n = 0..=n_max`.
pub fn photo_distribution(state: &StateSpec, det: &Detector, n_max: u32) -> Result<CountDistribution> {
    if det.model() != DetectorModel::Photoelectric {
        return Err(Error::domain("photo_distribution needs a photoelectric detector"));
    }
    let entries = (0..=n_max)
        .map(|n| {
            let k = det.count_kernel(&[n])?;
            Ok((vec![n], expect(state, &k)? / factorial(n)))
        })
        .collect::<Result<Vec<_>>>()?;
    let dist = CountDistribution::build(OutcomeSpace::Photon { n_max }, entries)?;
    let tail = 1.0 - dist.total();
    if tail.abs() > NORMALIZATION_TOL {
        return Err(Error::Truncation {
            n_max: n_max as usize,
            tail,
        });
    }
    Ok(dist)
}

/// Normally ordered moment `⟨:(η n̂ + ν)^m:⟩`, the `m`-th factorial moment
/// of the attenuated photocount distribution.
pub fn factorial_moment(state: &StateSpec, config: &DetectorConfig, m: u32) -> Result<f64> {
    config.validate()?;
    let response = Response::new(config.efficiency, config.dark);
    expect(state, &NoExpr::monomial(1.0, m, 0.0, response))
}

fn require_on_off(det: &Detector) -> Result<u32> {
    match det.model() {
        DetectorModel::OnOff { bins } => Ok(bins),
        m => Err(Error::domain(format!("{m} is not an on-off detector"))),
    }
}

fn require_pnr(det: &Detector) -> Result<(u32, u32)> {
    match det.model() {
        DetectorModel::Pnr { bins, levels } => Ok((bins, levels)),
        m => Err(Error::domain(format!("{m} is not a resolving detector"))),
    }
}

/// `c_k = ⟨:C(N,k) (e^{-Γ})^{N-k} (1 - e^{-Γ})^k:⟩`, `k = 0..=N`.
pub fn click_distribution(state: &StateSpec, det: &Detector) -> Result<CountDistribution> {
    require_on_off(det)?;
    multiplexed_distribution(state, det)
}

/// `⟨:π^m:⟩` with `π = 1 − e^{-Γ}`.
pub fn click_moment(state: &StateSpec, det: &Detector, m: u32) -> Result<f64> {
    let bins = require_on_off(det)?;
    if m > bins {
        return Err(Error::domain(format!("click moment order {m} exceeds N = {bins}")));
    }
    expect(state, &det.moment_kernel(&[m])?)
}

/// `⟨:π^m:⟩ = Σ_{k≥m} C(k,m)/C(N,m) c_k`.
pub fn click_moment_from_counts(counts: &CountDistribution, m: u32) -> Result<f64> {
    let OutcomeSpace::Clicks { bins } = counts.space() else {
        return Err(Error::domain("click moments need a click distribution"));
    };
    if m > bins {
        return Err(Error::domain(format!("click moment order {m} exceeds N = {bins}")));
    }
    let norm = binom(bins, m)? as f64;
    counts
        .iter()
        .filter(|(o, _)| o[0] >= m)
        .map(|(o, c)| Ok(binom(o[0], m)? as f64 / norm * c))
        .sum()
}

/// Multinomial counting distribution over all `(N_0, …, N_K)`, lexicographic.
pub fn pnr_distribution(state: &StateSpec, det: &Detector) -> Result<CountDistribution> {
    require_pnr(det)?;
    multiplexed_distribution(state, det)
}

/// `⟨:π_0^{e_0} ⋯ π_K^{e_K}:⟩`.
pub fn pnr_moment(state: &StateSpec, det: &Detector, exps: &[u32]) -> Result<f64> {
    let (_, levels) = require_pnr(det)?;
    if exps.len() != levels as usize + 1 {
        return Err(Error::domain(format!("expected {} exponents", levels + 1)));
    }
    expect(state, &det.moment_kernel(exps)?)
}

/// Normally ordered moment reconstructed from a counting distribution:
/// factorial moments for photocounts, `Σ C(k,s)/C(N,s) c_k` for clicks and
/// `Σ c · Π_j (N_j)_{e_j} / (N)_{|e|}` for multinomial tallies.
pub fn moment_from_counts(counts: &CountDistribution, exps: &[u32]) -> Result<f64> {
    match counts.space() {
        OutcomeSpace::Photon { .. } => match exps {
            [s] => Ok(counts
                .iter()
                .map(|(o, p)| falling_factorial(o[0], *s) * p)
                .sum()),
            _ => Err(Error::domain("photon moments have one index")),
        },
        OutcomeSpace::Clicks { .. } => match exps {
            [s] => click_moment_from_counts(counts, *s),
            _ => Err(Error::domain("click moments have one index")),
        },
        OutcomeSpace::Multinomial { bins, levels } => {
            if exps.len() != levels as usize + 1 {
                return Err(Error::domain(format!("expected {} exponents", levels + 1)));
            }
            let order: u32 = exps.iter().sum();
            if order > bins {
                return Err(Error::domain(format!("moment order {order} exceeds N = {bins}")));
            }
            let norm = falling_factorial(bins, order);
            Ok(counts
                .iter()
                .map(|(o, c)| {
                    let w: f64 = o.iter().zip(exps).map(|(&n, &e)| falling_factorial(n, e)).product();
                    w / norm * c
                })
                .sum())
        }
        OutcomeSpace::Multimode { .. } => Err(Error::domain(
            "multimode moments are computed in the multimode module",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_are_lexicographic() {
        let c = compositions(2, 3);
        assert_eq!(
            c,
            vec![
                vec![0, 0, 2],
                vec![0, 1, 1],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![2, 0, 0]
            ]
        );
    }

    #[test]
    fn povm_sums_to_identity() {
        for k in 1..5 {
            let r = Response::new(0.25, 0.01);
            let povm = pnr_povm(k, r);
            let sum = povm.iter().fold(NoExpr::zero(r), |a, p| &a + p);
            assert_eq!(sum, NoExpr::one(r));
        }
    }

    #[test]
    fn k1_povm_is_on_off() {
        let r = Response::new(0.5, 0.0);
        let povm = pnr_povm(1, r);
        assert_eq!(povm[0].terms(), NoExpr::monomial(1.0, 0, 1.0, r).terms());
        assert_eq!(
            povm[1].terms(),
            (&NoExpr::one(r) - &NoExpr::monomial(1.0, 0, 1.0, r)).terms()
        );
    }

    #[test]
    fn k2_last_element() {
        // π_2 = :(e^Γ - 1 - Γ) e^{-Γ}: = 1 - e^{-Γ} - Γ e^{-Γ}
        let r = Response::new(0.5, 0.0);
        let povm = pnr_povm(2, r);
        let expected = NoExpr::from_terms(
            vec![
                crate::states::Term { coeff: 1.0, power: 0, decay: 0.0 },
                crate::states::Term { coeff: -1.0, power: 0, decay: 1.0 },
                crate::states::Term { coeff: -1.0, power: 1, decay: 1.0 },
            ],
            r,
        );
        assert_eq!(povm[2].terms(), expected.terms());
    }

    #[test]
    fn config_validation() {
        assert!(DetectorConfig::on_off(4, 0.0).validate().is_err());
        assert!(DetectorConfig::on_off(4, 1.2).validate().is_err());
        assert!(DetectorConfig::on_off(0, 0.5).validate().is_err());
        assert!(DetectorConfig::pnr(4, 0, 0.5).validate().is_err());
        assert!(DetectorConfig::on_off(4, 0.5).with_dark(-1.0).validate().is_err());
        assert!(DetectorConfig::pnr(4, 2, 1.0).validate().is_ok());
    }

    #[test]
    fn outcome_guard() {
        assert!(Detector::new(DetectorConfig::pnr(64, 6, 0.5)).is_err());
    }

    #[test]
    fn distribution_rejects_bad_input() {
        let space = OutcomeSpace::Clicks { bins: 2 };
        assert!(CountDistribution::new(space, vec![(vec![0], 0.5)]).is_err());
        assert!(CountDistribution::new(space, vec![(vec![3], 1.0)]).is_err());
        assert!(CountDistribution::new(space, vec![(vec![0], 1.1), (vec![1], -0.1)]).is_err());
        let d = CountDistribution::new(space, vec![(vec![1], 1.0 + 1e-15), (vec![0], -1e-15)]).unwrap();
        assert_eq!(d.single(0), 0.0);
        assert_eq!(d.outcomes(), &[vec![0], vec![1]]);
    }
}
