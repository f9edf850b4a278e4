//! Monte-Carlo sampling of counting distributions and bootstrap estimates
//! of empirical witnesses.
//!
//! Shots are drawn by inverse-CDF lookup over the distribution's outcomes in
//! lexicographic order. The uniform variates come from ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64(seed)`), one `f64` per shot in
//! `[0, 1)`, so `(dist, shots, seed)` fixes the histogram on every platform.
//! Bootstrap resamples use a second ChaCha8 stream seeded with
//! `seed ^ BOOTSTRAP_STREAM` and draw multinomial histograms through
//! successive conditional binomials.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::detectors::{CountDistribution, OutcomeSpace};
use crate::error::{Error, Result};
use crate::witnesses::{matrix_from_counts, IndexSet, MatrixKind, Verdict, WitnessReport};

pub const DEFAULT_RESAMPLES: usize = 200;
/// Significance multiple of the standard error required for a verdict.
pub const SIGMA_THRESHOLD: f64 = 3.0;
pub const BOOTSTRAP_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// A histogram of sampled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    /// `None` for imported histograms.
    pub seed: Option<u64>,
    pub shots: u64,
    pub space: OutcomeSpace,
    /// Lexicographically sorted outcomes.
    pub outcomes: Vec<Vec<u32>>,
    pub counts: Vec<u64>,
}

impl SampleRun {
    /// Relative frequencies as a distribution over the same outcomes.
    pub fn empirical(&self) -> Result<CountDistribution> {
        frequencies(self.space, &self.outcomes, &self.counts, self.shots)
    }

    pub fn count(&self, outcome: &[u32]) -> u64 {
        self.outcomes
            .binary_search_by(|o| o.as_slice().cmp(outcome))
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    /// Writes `outcome,count` rows; multi-index outcomes are joined with `;`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["outcome", "count"])?;
        for (o, c) in self.outcomes.iter().zip(&self.counts) {
            w.write_record([outcome_label(o), c.to_string()])?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads a histogram written by [`SampleRun::write_csv`] or recorded in
    /// the lab. Outcomes missing from the file count as zero.
    pub fn read_csv<R: io::Read>(reader: R, space: OutcomeSpace) -> Result<SampleRun> {
        let mut r = csv::Reader::from_reader(reader);
        let mut rows: Vec<(Vec<u32>, u64)> = Vec::new();
        for record in r.records() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::Csv(format!("expected 2 fields, got {}", record.len())));
            }
            let outcome = parse_outcome(&record[0])?;
            let count: u64 = record[1]
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("bad count {:?}", &record[1])))?;
            rows.push((outcome, count));
        }
        rows.sort();
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Csv("duplicate outcome".into()));
        }
        let shots: u64 = rows.iter().map(|r| r.1).sum();
        if shots == 0 {
            return Err(Error::domain("histogram has no shots"));
        }
        let (outcomes, counts): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        // validates the outcomes against the space
        frequencies(space, &outcomes, &counts, shots)?;
        Ok(SampleRun {
            seed: None,
            shots,
            space,
            outcomes,
            counts,
        })
    }
}

pub fn outcome_label(o: &[u32]) -> String {
    o.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn parse_outcome(s: &str) -> Result<Vec<u32>> {
    s.trim()
        .split(';')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Csv(format!("bad outcome label {s:?}")))
        })
        .collect()
}

fn frequencies(
    space: OutcomeSpace,
    outcomes: &[Vec<u32>],
    counts: &[u64],
    shots: u64,
) -> Result<CountDistribution> {
    let entries = outcomes
        .iter()
        .zip(counts)
        .map(|(o, &c)| (o.clone(), c as f64 / shots as f64))
        .collect();
    CountDistribution::new(space, entries)
}

/// Draws `shots` outcomes from `dist`.
pub fn sample(dist: &CountDistribution, shots: u64, seed: u64) -> Result<SampleRun> {
    if shots == 0 {
        return Err(Error::domain("shots must be positive"));
    }
    if dist.is_empty() {
        return Err(Error::domain("cannot sample an empty distribution"));
    }
    let mut cdf = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let last = cdf.len() - 1;
    let mut counts = vec![0u64; dist.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let i = cdf.partition_point(|&c| c <= u).min(last);
        counts[i] += 1;
    }
    Ok(SampleRun {
        seed: Some(seed),
        shots,
        space: dist.space(),
        outcomes: dist.outcomes().to_vec(),
        counts,
    })
}

/// Multinomial histogram with the given cell probabilities.
fn multinomial<R: Rng>(rng: &mut R, shots: u64, probs: &[f64]) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut left = shots;
    let mut mass = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == probs.len() || mass <= 0.0 {
            out[i] = left;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(left, q).expect("valid binomial").sample(rng);
        out[i] = k;
        left -= k;
        mass -= p;
    }
    out
}

/// Bootstrap standard error of a statistic of the empirical distribution.
/// Resamples where the statistic is undefined are skipped; `None` when fewer
/// than two remain.
pub fn bootstrap_stderr<F>(run: &SampleRun, resamples: usize, mut stat: F) -> Result<Option<f64>>
where
    F: FnMut(&CountDistribution) -> Result<Option<f64>>,
{
    let probs: Vec<f64> = run
        .counts
        .iter()
        .map(|&c| c as f64 / run.shots as f64)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed.unwrap_or(0) ^ BOOTSTRAP_STREAM);
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let counts = multinomial(&mut rng, run.shots, &probs);
        let dist = frequencies(run.space, &run.outcomes, &counts, run.shots)?;
        if let Some(v) = stat(&dist)? {
            if v.is_finite() {
                values.push(v);
            }
        }
    }
    if values.len() < 2 {
        return Ok(None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Some(var.sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalWitness {
    pub report: WitnessReport,
    /// Bootstrap standard error of the minimal eigenvalue.
    pub stderr: f64,
    /// Rows whose entries were never observed.
    pub empty_rows: Vec<usize>,
}

impl EmpiricalWitness {
    /// Nonclassical only when `min_eig < −3·stderr`; a smaller negative value
    /// is inconclusive. Sets whose outcomes were never observed give no verdict.
    pub fn verdict(&self) -> Verdict {
        if !self.empty_rows.is_empty() {
            return Verdict::Indeterminate;
        }
        let m = self.report.min_eig;
        if !self.report.is_negative() {
            Verdict::NoViolation
        } else if m < -SIGMA_THRESHOLD * self.stderr {
            Verdict::Nonclassical
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Count or moment matrix from sampled frequencies, with a bootstrap error.
pub fn empirical_witness(
    run: &SampleRun,
    set: &IndexSet,
    kind: MatrixKind,
    resamples: usize,
) -> Result<EmpiricalWitness> {
    let report = matrix_from_counts(&run.empirical()?, set, kind)?;
    let dim = report.matrix.dim();
    let empty_rows = (0..dim)
        .filter(|&i| (0..dim).all(|j| report.matrix.get(i, j) == 0.0))
        .collect();
    let stderr = bootstrap_stderr(run, resamples, |d| {
        Ok(Some(matrix_from_counts(d, set, kind)?.min_eig))
    })?
    .unwrap_or(0.0);
    Ok(EmpiricalWitness {
        report,
        stderr,
        empty_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform4() -> CountDistribution {
        CountDistribution::new(
            OutcomeSpace::Clicks { bins: 3 },
            (0..4).map(|k| (vec![k], 0.25)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn point_mass() {
        let d = CountDistribution::new(
            OutcomeSpace::Clicks { bins: 2 },
            vec![(vec![0], 0.0), (vec![1], 1.0), (vec![2], 0.0)],
        )
        .unwrap();
        let r = sample(&d, 1000, 7).unwrap();
        assert_eq!(r.counts, vec![0, 1000, 0]);
    }

    #[test]
    fn deterministic_and_balanced() {
        let d = uniform4();
        let a = sample(&d, 1_000_000, 42).unwrap();
        let b = sample(&d, 1_000_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>(), 1_000_000);
        let sigma = (1e6f64 * 0.25 * 0.75).sqrt();
        for &c in &a.counts {
            assert!((c as f64 - 250_000.0).abs() < 4.0 * sigma);
        }
        assert_ne!(a.counts, sample(&d, 1_000_000, 43).unwrap().counts);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(sample(&uniform4(), 0, 1).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let r = sample(&uniform4(), 500, 3).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("outcome,count\n0,"));
        let back = SampleRun::read_csv(buf.as_slice(), r.space).unwrap();
        assert_eq!(back.counts, r.counts);
        assert_eq!(back.outcomes, r.outcomes);
        assert_eq!(back.seed, None);
        assert!(SampleRun::read_csv("outcome,count\n9,3\n".as_bytes(), r.space).is_err());
    }

    #[test]
    fn multinomial_label_parsing() {
        let space = OutcomeSpace::Multinomial { bins: 4, levels: 2 };
        let text = "outcome,count\n2;1;1,5\n4;0;0,5\n";
        let run = SampleRun::read_csv(text.as_bytes(), space).unwrap();
        assert_eq!(run.count(&[2, 1, 1]), 5);
        assert_eq!(run.shots, 10);
    }
}
