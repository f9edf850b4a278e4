use super::matrices::{ReportSource, Verdict, WitnessReport};
use crate::detectors::{click_moment, click_moment_from_counts, CountDistribution, Detector, OutcomeSpace};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::states::StateSpec;

/// Probabilities at or below this are treated as zero denominators.
pub const ZERO_PROB: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KlyshkoVariant {
    /// `c_0 c_2 / c_1² ≥ ½(1 − 1/N)`.
    Integer,
    /// `c_1 c_3 / c_2² ≥ ⅔(1 − 1/(N−1))`.
    Half,
}

impl KlyshkoVariant {
    pub fn name(self) -> &'static str {
        match self {
            KlyshkoVariant::Integer => "klyshko-integer",
            KlyshkoVariant::Half => "klyshko-half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlyshkoResult {
    /// `None` when the denominator vanishes.
    pub ratio: Option<f64>,
    pub bound: f64,
}

impl KlyshkoResult {
    pub fn verdict(&self) -> Verdict {
        match self.ratio {
            None => Verdict::Indeterminate,
            Some(r) if r < self.bound => Verdict::Nonclassical,
            Some(_) => Verdict::NoViolation,
        }
    }
}

fn click_bins(c: &CountDistribution) -> Result<u32> {
    match c.space() {
        OutcomeSpace::Clicks { bins } => Ok(bins),
        other => Err(Error::domain(format!("expected a click distribution, got {other:?}"))),
    }
}

/// Klyshko-type ratio of neighbouring click probabilities with its classical bound.
pub fn klyshko_ratio(c: &CountDistribution, variant: KlyshkoVariant) -> Result<KlyshkoResult> {
    let n = click_bins(c)? as f64;
    let (lo, mid, hi, bound) = match variant {
        KlyshkoVariant::Integer => {
            if n < 2.0 {
                return Err(Error::domain("integer Klyshko ratio needs N >= 2"));
            }
            (0, 1, 2, 0.5 * (1.0 - 1.0 / n))
        }
        KlyshkoVariant::Half => {
            if n < 3.0 {
                return Err(Error::domain("half Klyshko ratio needs N >= 3"));
            }
            (1, 2, 3, 2.0 / 3.0 * (1.0 - 1.0 / (n - 1.0)))
        }
    };
    let denom = c.single(mid).powi(2);
    let ratio = (denom > ZERO_PROB * ZERO_PROB).then(|| c.single(lo) * c.single(hi) / denom);
    Ok(KlyshkoResult { ratio, bound })
}

/// `g^(m) = ⟨:π^m:⟩ / ⟨:π:⟩^m` for `m = 0..=max_m`.
pub fn g_functions(state: &StateSpec, det: &Detector, max_m: u32) -> Result<Vec<f64>> {
    let mean = click_moment(state, det, 1)?;
    if mean <= ZERO_PROB {
        return Err(Error::domain("⟨:π:⟩ vanishes, g^(m) undefined"));
    }
    (0..=max_m)
        .map(|m| {
            if m == 1 {
                Ok(1.0)
            } else {
                Ok(click_moment(state, det, m)? / mean.powi(m as i32))
            }
        })
        .collect()
}

/// Rescales an on-off moment matrix into `[g^(k+l)]` via `D·M·D` with
/// `D = diag(⟨:π:⟩^{-k})`.
pub fn g_matrix(report: &WitnessReport) -> Result<WitnessReport> {
    if report.source != ReportSource::MomentsClick {
        return Err(Error::domain("g_matrix needs an on-off moment matrix"));
    }
    let mean = report
        .click_mean
        .ok_or_else(|| Error::domain("report carries no ⟨:π:⟩"))?;
    if mean <= ZERO_PROB {
        return Err(Error::domain("⟨:π:⟩ vanishes, g^(m) undefined"));
    }
    let d: Vec<f64> = report
        .elements
        .iter()
        .map(|e| mean.powf(-e[0].as_f64()))
        .collect();
    let matrix: SymMatrix = report.matrix.congruence_diag(&d);
    let mut out = WitnessReport::from_matrix(
        matrix,
        report.elements.clone(),
        report.source,
        format!("{} normalized", report.metadata),
    )?;
    out.click_mean = Some(1.0);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickStats {
    pub bins: u32,
    pub mean: f64,
    pub variance: f64,
    /// Third central moment `σ³γ₃`.
    pub third_central: f64,
    /// NaN when `σ = 0`.
    pub skewness: f64,
    /// `⟨:π^m:⟩` for `m = 1, 2, 3` mapped from `(μ, σ², γ₃)`; `None` when `m > N`.
    pub moments: [Option<f64>; 3],
}

/// Mean, variance and skewness of the click number, with the first three
/// click moments expressed through them.
pub fn click_stats(c: &CountDistribution) -> Result<ClickStats> {
    let bins = click_bins(c)?;
    let n = bins as f64;
    let mean: f64 = c.iter().map(|(o, p)| o[0] as f64 * p).sum();
    let central = |k: i32| -> f64 { c.iter().map(|(o, p)| (o[0] as f64 - mean).powi(k) * p).sum() };
    let variance = central(2);
    let third_central = central(3);
    let skewness = if variance > 0.0 {
        third_central / variance.powf(1.5)
    } else {
        f64::NAN
    };
    let (mu, s2, m3) = (mean, variance, third_central);
    let moments = [
        Some(mu / n),
        (bins >= 2).then(|| (s2 + mu * mu - mu) / (n * (n - 1.0))),
        (bins >= 3).then(|| {
            (m3 + 3.0 * mu * s2 + mu.powi(3) - 3.0 * (s2 + mu * mu) + 2.0 * mu)
                / (n * (n - 1.0) * (n - 2.0))
        }),
    ];
    Ok(ClickStats {
        bins,
        mean,
        variance,
        third_central,
        skewness,
        moments,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QbResult {
    pub q_b: f64,
    /// `⟨:π²:⟩ − ⟨:π:⟩²` from the click moments.
    pub determinant: f64,
    /// `μ(N−μ)/(N²(N−1)) · Q_B`.
    pub scaled_q_b: f64,
}

impl QbResult {
    pub fn verdict(&self) -> Verdict {
        if self.q_b < -1e-12 {
            Verdict::Nonclassical
        } else {
            Verdict::NoViolation
        }
    }
}

/// Binomial parameter `Q_B = Nσ²/(μ(N−μ)) − 1`.
pub fn qb_parameter(c: &CountDistribution) -> Result<QbResult> {
    let stats = click_stats(c)?;
    if stats.bins < 2 {
        return Err(Error::domain("Q_B needs N >= 2"));
    }
    let n = stats.bins as f64;
    let mu = stats.mean;
    let tol = 1e-14 * n;
    if mu <= tol || mu >= n - tol {
        return Err(Error::domain(format!("saturated click mean μ = {mu} for N = {n}")));
    }
    let q_b = n * stats.variance / (mu * (n - mu)) - 1.0;
    let p1 = click_moment_from_counts(c, 1)?;
    let p2 = click_moment_from_counts(c, 2)?;
    Ok(QbResult {
        q_b,
        determinant: p2 - p1 * p1,
        scaled_q_b: mu * (n - mu) / (n * n * (n - 1.0)) * q_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewnessWitness {
    /// `⟨:π:⟩⟨:π³:⟩ − ⟨:π²:⟩²` from weighted sums over the counts.
    pub from_moments: f64,
    /// The same quantity through the click mean, variance and third central moment.
    pub from_central: f64,
    /// `⟨:(Δπ)²:⟩`.
    pub delta2: f64,
    /// `⟨:(Δπ)³:⟩`.
    pub delta3: f64,
}

impl SkewnessWitness {
    pub fn value(&self) -> f64 {
        self.from_moments
    }

    pub fn verdict(&self) -> Verdict {
        let scale = self.from_moments.abs().max(1.0);
        if self.from_moments < -1e-12 * scale {
            Verdict::Nonclassical
        } else {
            Verdict::NoViolation
        }
    }
}

/// Third-order click criterion `⟨:π:⟩⟨:π³:⟩ − ⟨:π²:⟩² ≥ 0`.
pub fn skewness_witness(c: &CountDistribution) -> Result<SkewnessWitness> {
    let stats = click_stats(c)?;
    if stats.bins < 3 {
        return Err(Error::domain("skewness witness needs N >= 3"));
    }
    let n = stats.bins as f64;
    let p1 = click_moment_from_counts(c, 1)?;
    let p2 = click_moment_from_counts(c, 2)?;
    let p3 = click_moment_from_counts(c, 3)?;
    let from_moments = p1 * p3 - p2 * p2;

    let mu = stats.mean;
    let mu_bar = n - mu;
    let s2 = stats.variance;
    let delta2 = (n * s2 - mu * mu_bar) / (n * n * (n - 1.0));
    let delta3 = (n * n * stats.third_central + 2.0 * mu * mu_bar * (mu_bar - mu)
        - 3.0 * n * s2 * (mu_bar - mu))
        / (n.powi(3) * (n - 1.0) * (n - 2.0));
    let a = mu / n;
    let from_central = a * delta3 + a * a * delta2 - delta2 * delta2;
    Ok(SkewnessWitness {
        from_moments,
        from_central,
        delta2,
        delta3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{click_distribution, DetectorConfig};
    use crate::numerics::binom;
    use crate::states::Parity;

    fn binomial_clicks(n: u32, p: f64) -> CountDistribution {
        let entries = (0..=n)
            .map(|k| {
                let c = binom(n, k).unwrap() as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
                (vec![k], c)
            })
            .collect();
        CountDistribution::new(OutcomeSpace::Clicks { bins: n }, entries).unwrap()
    }

    fn clicks(n: u32, c: &[f64]) -> CountDistribution {
        let entries = c.iter().enumerate().map(|(k, &p)| (vec![k as u32], p)).collect();
        CountDistribution::new(OutcomeSpace::Clicks { bins: n }, entries).unwrap()
    }

    #[test]
    fn klyshko_saturates_for_binomial() {
        for n in 3..=10 {
            let c = binomial_clicks(n, 0.3);
            let r = klyshko_ratio(&c, KlyshkoVariant::Integer).unwrap();
            assert!((r.ratio.unwrap() - r.bound).abs() < 1e-12);
            let r = klyshko_ratio(&c, KlyshkoVariant::Half).unwrap();
            assert!((r.ratio.unwrap() - r.bound).abs() < 1e-12);
        }
    }

    #[test]
    fn single_photon_two_bins() {
        let c = clicks(2, &[0.0, 1.0, 0.0]);
        let r = klyshko_ratio(&c, KlyshkoVariant::Integer).unwrap();
        assert_eq!(r.ratio, Some(0.0));
        assert_eq!(r.bound, 0.25);
        assert_eq!(r.verdict(), Verdict::Nonclassical);
        let s = click_stats(&c).unwrap();
        assert_eq!((s.mean, s.variance), (1.0, 0.0));
        assert!(s.skewness.is_nan());
        let q = qb_parameter(&c).unwrap();
        assert!((q.q_b + 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_denominator_is_indeterminate() {
        let c = clicks(3, &[1.0, 0.0, 0.0, 0.0]);
        let r = klyshko_ratio(&c, KlyshkoVariant::Integer).unwrap();
        assert_eq!(r.verdict(), Verdict::Indeterminate);
        assert!(qb_parameter(&c).is_err());
        let w = skewness_witness(&c).unwrap();
        assert_eq!(w.from_moments, 0.0);
        assert!(w.from_central.abs() < 1e-15);
    }

    #[test]
    fn binomial_mapped_moments_are_powers() {
        let c = binomial_clicks(6, 0.4);
        let s = click_stats(&c).unwrap();
        for (m, v) in s.moments.iter().enumerate() {
            assert!((v.unwrap() - 0.4f64.powi(m as i32 + 1)).abs() < 1e-13);
        }
        let w = skewness_witness(&c).unwrap();
        assert!(w.from_moments.abs() < 1e-12 && w.from_central.abs() < 1e-12);
        assert!(qb_parameter(&c).unwrap().q_b.abs() < 1e-12);
    }

    #[test]
    fn routes_agree_on_cat() {
        let det = Detector::new(DetectorConfig::on_off(5, 0.5)).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let c = click_distribution(&StateSpec::cat_real(1.3, parity).unwrap(), &det).unwrap();
            let w = skewness_witness(&c).unwrap();
            assert!((w.from_moments - w.from_central).abs() < 1e-12);
            let q = qb_parameter(&c).unwrap();
            assert!((q.determinant - q.scaled_q_b).abs() < 1e-12);
        }
    }

    #[test]
    fn g_of_coherent_is_one() {
        let det = Detector::new(DetectorConfig::on_off(4, 0.7)).unwrap();
        let g = g_functions(&StateSpec::coherent_real(0.8), &det, 4).unwrap();
        for v in g {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(g_functions(&StateSpec::vacuum(1), &det, 2).is_err());
    }
}
