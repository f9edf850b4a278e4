use std::fmt;

use super::index_sets::{format_element, Element, IndexSet, MatrixKind};
use crate::detectors::{moment_from_counts, CountDistribution, Detector, DetectorModel, OutcomeSpace};
use crate::error::{Error, Result};
use crate::numerics::{binom, factorial, leading_minors, min_eigenvalue, multinom, SymMatrix};
use crate::states::{expect, StateSpec};

/// Relative threshold: a report is negative when `min_eig < -NEGATIVITY_REL_TOL · max|entry|`.
pub const NEGATIVITY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportSource {
    CountsPhoto,
    MomentsPhoto,
    CountsClick,
    MomentsClick,
    CountsPnr,
    MomentsPnr,
    CountsMultimode,
    MomentsMultimode,
}

impl ReportSource {
    pub(crate) fn for_model(model: DetectorModel, kind: MatrixKind) -> ReportSource {
        use ReportSource::*;
        match (model, kind) {
            (DetectorModel::Photoelectric, MatrixKind::Counts) => CountsPhoto,
            (DetectorModel::Photoelectric, MatrixKind::Moments) => MomentsPhoto,
            (DetectorModel::OnOff { .. }, MatrixKind::Counts) => CountsClick,
            (DetectorModel::OnOff { .. }, MatrixKind::Moments) => MomentsClick,
            (DetectorModel::Pnr { .. }, MatrixKind::Counts) => CountsPnr,
            (DetectorModel::Pnr { .. }, MatrixKind::Moments) => MomentsPnr,
        }
    }

    pub fn kind(self) -> MatrixKind {
        use ReportSource::*;
        match self {
            CountsPhoto | CountsClick | CountsPnr | CountsMultimode => MatrixKind::Counts,
            _ => MatrixKind::Moments,
        }
    }
}

impl fmt::Display for ReportSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ReportSource::*;
        let s = match self {
            CountsPhoto => "counts-photo",
            MomentsPhoto => "moments-photo",
            CountsClick => "counts-click",
            MomentsClick => "moments-click",
            CountsPnr => "counts-pnr",
            MomentsPnr => "moments-pnr",
            CountsMultimode => "counts-multimode",
            MomentsMultimode => "moments-multimode",
        };
        f.write_str(s)
    }
}

/// Verdict of a single criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Nonclassical,
    /// The classical bound holds.
    NoViolation,
    /// The criterion cannot be evaluated, e.g. a zero denominator.
    Indeterminate,
    /// A violation smaller than the statistical uncertainty.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nonclassical => "nonclassical",
            Verdict::NoViolation => "no-violation",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A count or moment matrix with its spectral and minor diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub matrix: SymMatrix,
    /// Row/column index elements.
    pub elements: Vec<Element>,
    pub min_eig: f64,
    pub minors: Vec<f64>,
    pub source: ReportSource,
    /// `⟨:π:⟩` for on-off moment matrices, used to normalize into `g^(m)`.
    pub click_mean: Option<f64>,
    pub metadata: String,
}

impl WitnessReport {
    pub fn from_matrix(
        matrix: SymMatrix,
        elements: Vec<Element>,
        source: ReportSource,
        metadata: String,
    ) -> Result<Self> {
        let min_eig = min_eigenvalue(&matrix)?;
        let minors = leading_minors(&matrix)?;
        Ok(WitnessReport {
            matrix,
            elements,
            min_eig,
            minors,
            source,
            click_mean: None,
            metadata,
        })
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|e| format_element(e)).collect()
    }

    pub fn tolerance(&self) -> f64 {
        NEGATIVITY_REL_TOL * self.matrix.max_abs()
    }

    /// `min_eig < −1e-10 · max|entry|`.
    pub fn is_negative(&self) -> bool {
        self.min_eig < -self.tolerance()
    }

    pub fn verdict(&self) -> Verdict {
        if self.is_negative() {
            Verdict::Nonclassical
        } else {
            Verdict::NoViolation
        }
    }

    /// −1, 0 or +1, with `|min_eig| ≤ tolerance` counted as zero.
    pub fn sign(&self) -> i8 {
        let tol = self.tolerance();
        if self.min_eig < -tol {
            -1
        } else if self.min_eig > tol {
            1
        } else {
            0
        }
    }

    pub fn determinant(&self) -> f64 {
        *self.minors.last().expect("non-empty matrix")
    }
}

/// Supplies matrix entries: either exact expectations or estimates from a
/// measured distribution.
trait EntrySource {
    fn model(&self) -> DetectorModel;
    /// Count-matrix entry for the pair sum `s`.
    fn count_entry(&self, s: &[u32]) -> Result<f64>;
    /// Moment-matrix entry for the pair sum `s`.
    fn moment_entry(&self, s: &[u32]) -> Result<f64>;
    fn describe(&self) -> String;
}

struct Exact<'a> {
    state: &'a StateSpec,
    detector: &'a Detector,
}

impl EntrySource for Exact<'_> {
    fn model(&self) -> DetectorModel {
        self.detector.model()
    }

    fn count_entry(&self, s: &[u32]) -> Result<f64> {
        expect(self.state, &self.detector.count_kernel(s)?)
    }

    fn moment_entry(&self, s: &[u32]) -> Result<f64> {
        expect(self.state, &self.detector.moment_kernel(s)?)
    }

    fn describe(&self) -> String {
        let c = self.detector.config();
        format!("{} eta={} dark={}", c.model, c.efficiency, c.dark)
    }
}

struct Empirical<'a> {
    counts: &'a CountDistribution,
    model: DetectorModel,
}

impl EntrySource for Empirical<'_> {
    fn model(&self) -> DetectorModel {
        self.model
    }

    fn count_entry(&self, s: &[u32]) -> Result<f64> {
        let p = self.counts.prob(s);
        match (self.model, s) {
            (DetectorModel::Photoelectric, [n]) => Ok(factorial(*n) * p),
            (DetectorModel::OnOff { bins }, [k]) => Ok(p / binom(bins, *k)? as f64),
            (DetectorModel::Pnr { bins, .. }, tally) => Ok(p / multinom(bins, tally)? as f64),
            _ => Err(Error::domain(format!("outcome {s:?} not in {}", self.model))),
        }
    }

    fn moment_entry(&self, s: &[u32]) -> Result<f64> {
        moment_from_counts(self.counts, s)
    }

    fn describe(&self) -> String {
        format!("{} empirical", self.model)
    }
}

fn build_report(source: &dyn EntrySource, set: &IndexSet, kind: MatrixKind) -> Result<WitnessReport> {
    if set.is_empty() {
        return Err(Error::domain(format!("index set {} has no elements", set.label())));
    }
    let model = source.model();
    set.check_admissible(model, kind)?;
    let matrix = SymMatrix::try_from_fn(set.len(), |i, j| {
        let s = set.pair_sum(i, j);
        match kind {
            MatrixKind::Counts => source.count_entry(&s),
            MatrixKind::Moments => source.moment_entry(&s),
        }
    })?;
    let mut report = WitnessReport::from_matrix(
        matrix,
        set.elements().to_vec(),
        ReportSource::for_model(model, kind),
        format!("{} set={} {}", source.describe(), set.label(), set),
    )?;
    if matches!(model, DetectorModel::OnOff { .. }) && kind == MatrixKind::Moments {
        report.click_mean = Some(source.moment_entry(&[1])?);
    }
    Ok(report)
}

/// Matrix of counts: `[(k+l)! p_{k+l}]`, `[c_{k+l}/C(N,k+l)]` or the
/// multinomial analogue, depending on the detector.
pub fn count_matrix(state: &StateSpec, detector: &Detector, set: &IndexSet) -> Result<WitnessReport> {
    build_report(&Exact { state, detector }, set, MatrixKind::Counts)
}

/// Matrix of normally ordered moments: `[⟨:n̂^{k+l}:⟩]`, `[⟨:π^{k+l}:⟩]` or
/// `[⟨:π_0^{N_0+N'_0} ⋯ π_K^{N_K+N'_K}:⟩]`.
pub fn moment_matrix(state: &StateSpec, detector: &Detector, set: &IndexSet) -> Result<WitnessReport> {
    build_report(&Exact { state, detector }, set, MatrixKind::Moments)
}

/// Either matrix, selected by `kind`.
pub fn witness_matrix(
    state: &StateSpec,
    detector: &Detector,
    set: &IndexSet,
    kind: MatrixKind,
) -> Result<WitnessReport> {
    build_report(&Exact { state, detector }, set, kind)
}

/// Count or moment matrix estimated from a measured distribution.
pub fn matrix_from_counts(
    counts: &CountDistribution,
    set: &IndexSet,
    kind: MatrixKind,
) -> Result<WitnessReport> {
    let model = match counts.space() {
        OutcomeSpace::Photon { .. } => DetectorModel::Photoelectric,
        OutcomeSpace::Clicks { bins } => DetectorModel::OnOff { bins },
        OutcomeSpace::Multinomial { bins, levels } => DetectorModel::Pnr { bins, levels },
        OutcomeSpace::Multimode { .. } => {
            return Err(Error::domain("multimode distributions are handled by the multimode module"))
        }
    };
    build_report(&Empirical { counts, model }, set, kind)
}
