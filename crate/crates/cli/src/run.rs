//! Evaluation of scenarios into result rows.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;

use clickstat::detectors::{
    click_distribution, photo_distribution, pnr_distribution, CountDistribution, Detector,
    DetectorModel, OutcomeSpace,
};
use clickstat::multimode::{
    count_ratio_criterion, multimode_index_sets, multimode_matrices, ratio_criterion,
    total_photon_number, CountRatio,
};
use clickstat::sampler::{bootstrap_stderr, empirical_witness, sample, SampleRun, SIGMA_THRESHOLD};
use clickstat::states::StateSpec;
use clickstat::witnesses::{
    enumerate_index_sets, g_matrix, klyshko_ratio, matrix_from_counts, qb_parameter,
    skewness_witness, witness_matrix, IndexClass, IndexSet, KlyshkoVariant, MatrixKind, Verdict,
    WitnessReport,
};
use clickstat::HalfInt;
use num_complex::Complex64;

use crate::scenario::{CaseName, Criterion, Scenario, SetPreset, SetSelection, StateChoice, StateKind};
use crate::CliError;

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub grid_value: f64,
    pub set_id: String,
    pub criterion: Criterion,
    /// NaN when the criterion is undefined, infinite when it diverges.
    pub value: f64,
    /// Empty for exact evaluations.
    pub stderr: Option<f64>,
    pub verdict: Verdict,
    pub state: String,
    pub model: String,
    pub eta: f64,
    pub dark: f64,
    pub bins: Option<u32>,
    pub levels: Option<u32>,
    pub modes: usize,
    pub total_photons: Option<f64>,
}

fn is_all_integer(set: &IndexSet) -> bool {
    set.pattern().iter().all(|c| *c == IndexClass::Integer)
}

fn parse_element(s: &str) -> Result<Vec<HalfInt>, CliError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|p| {
            HalfInt::from_str(p.trim())
                .map_err(|_| CliError::Validation(format!("bad index {p:?} in element {s:?}")))
        })
        .collect()
}

/// Index sets, with ids, for one state width, detector and matrix kind.
pub fn resolve_sets(
    selection: &SetSelection,
    model: DetectorModel,
    kind: MatrixKind,
    modes: usize,
) -> Result<Vec<(String, IndexSet)>, CliError> {
    let sets: Vec<IndexSet> = match selection {
        SetSelection::Preset(p) => {
            let all = if modes > 1 {
                multimode_index_sets(modes, 1)?
            } else {
                enumerate_index_sets(model, kind)?
            };
            all.into_iter()
                .filter(|s| !s.is_empty())
                .filter(|s| match p {
                    SetPreset::All => true,
                    SetPreset::Integer => is_all_integer(s),
                    SetPreset::Half => !is_all_integer(s),
                })
                .collect()
        }
        SetSelection::Explicit(list) => list
            .iter()
            .map(|elements| {
                let parsed = elements
                    .iter()
                    .map(|e| parse_element(e))
                    .collect::<Result<Vec<_>, _>>()?;
                let set = IndexSet::new(parsed)?;
                if set.pattern().len() != modes && modes > 1 {
                    return Err(CliError::Validation(format!(
                        "set {set} does not match {modes} modes"
                    )));
                }
                if modes == 1 {
                    set.check_admissible(model, kind)?;
                }
                Ok(match set.label() {
                    "Z" => set.with_label("integer"),
                    "H" => set.with_label("half"),
                    _ => set,
                })
            })
            .collect::<Result<_, CliError>>()?,
    };
    if sets.is_empty() {
        return Err(CliError::Validation("index-set selection is empty".into()));
    }
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    Ok(sets
        .into_iter()
        .map(|s| {
            let n = seen.entry(s.label().to_string()).or_insert(0);
            *n += 1;
            let id = if *n == 1 {
                s.label().to_string()
            } else {
                format!("{}-{}", s.label(), n)
            };
            (id, s)
        })
        .collect())
}

pub fn build_state(choice: &StateChoice, intensity: f64) -> Result<StateSpec, CliError> {
    Ok(match choice.kind {
        StateKind::Coherent => {
            let a = Complex64::new((intensity / choice.modes as f64).sqrt(), 0.0);
            StateSpec::coherent(&vec![a; choice.modes])
        }
        StateKind::Cat => {
            StateSpec::cat_uniform(intensity, choice.modes, choice.parity.expect("validated").into())?
        }
        StateKind::Fock => StateSpec::fock_number(choice.n.expect("validated")),
    })
}

fn mean_photons(choice: &StateChoice, state: &StateSpec) -> Result<f64, CliError> {
    Ok(match choice.kind {
        StateKind::Fock => choice.n.unwrap_or(0) as f64,
        _ => total_photon_number(state, 1.0)?,
    })
}

/// `(n, m)` on the first mode for each ratio case.
pub fn case_indices(case: CaseName, modes: usize) -> (Vec<HalfInt>, Vec<HalfInt>) {
    let (n, m) = match case {
        CaseName::I => (0, 4),
        CaseName::Ii => (0, 2),
        CaseName::Iii => (1, 3),
        CaseName::Iv => (1, 5),
    };
    let mut nv = vec![HalfInt::ZERO; modes];
    let mut mv = vec![HalfInt::ZERO; modes];
    nv[0] = HalfInt::from_twice(n);
    mv[0] = HalfInt::from_twice(m);
    (nv, mv)
}

fn case_id(case: CaseName) -> String {
    let s = match case {
        CaseName::I => "i",
        CaseName::Ii => "ii",
        CaseName::Iii => "iii",
        CaseName::Iv => "iv",
    };
    format!("case-{s}")
}

fn det_verdict(report: &WitnessReport) -> Verdict {
    let scale = report.matrix.max_abs().powi(report.matrix.dim() as i32);
    if report.determinant() < -1e-10 * scale {
        Verdict::Nonclassical
    } else {
        Verdict::NoViolation
    }
}

struct Context<'a> {
    scenario: &'a Scenario,
    detector: Detector,
    sets: BTreeMap<(usize, MatrixKind), Vec<(String, IndexSet)>>,
}

impl<'a> Context<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self, CliError> {
        scenario.validate()?;
        let cfg = scenario.detector.config()?;
        let detector = Detector::new(cfg)?;
        let mut sets = BTreeMap::new();
        for s in &scenario.states {
            for c in &scenario.criteria {
                if let Some(kind) = c.matrix_kind() {
                    if let std::collections::btree_map::Entry::Vacant(e) = sets.entry((s.modes, kind)) {
                        e.insert(resolve_sets(&scenario.sets, cfg.model, kind, s.modes)?);
                    }
                }
            }
        }
        Ok(Context {
            scenario,
            detector,
            sets,
        })
    }

    fn row(&self, x: f64, choice: &StateChoice, set_id: &str, criterion: Criterion) -> Row {
        let cfg = self.detector.config();
        Row {
            grid_value: x,
            set_id: set_id.to_string(),
            criterion,
            value: f64::NAN,
            stderr: None,
            verdict: Verdict::Indeterminate,
            state: choice.id(),
            model: cfg.model.name().to_string(),
            eta: cfg.efficiency,
            dark: cfg.dark,
            bins: cfg.model.bins(),
            levels: match cfg.model {
                DetectorModel::Pnr { levels, .. } => Some(levels),
                _ => None,
            },
            modes: choice.modes,
            total_photons: None,
        }
    }

    fn matrix(&self, state: &StateSpec, modes: usize, set: &IndexSet, kind: MatrixKind) -> Result<WitnessReport, CliError> {
        if modes > 1 {
            Ok(multimode_matrices(state, set, self.detector.config().efficiency, kind)?)
        } else {
            Ok(witness_matrix(state, &self.detector, set, kind)?)
        }
    }

    fn evaluate(&self, x: f64, choice: &StateChoice) -> Result<Vec<Row>, CliError> {
        let state = build_state(choice, x)?;
        let photons = mean_photons(choice, &state)?;
        let eta = self.detector.config().efficiency;
        let mut rows = Vec::new();
        let mut clicks: Option<CountDistribution> = None;
        for &c in &self.scenario.criteria {
            if let Some(kind) = c.matrix_kind() {
                for (id, set) in &self.sets[&(choice.modes, kind)] {
                    let report = self.matrix(&state, choice.modes, set, kind)?;
                    let mut row = self.row(x, choice, id, c);
                    match c {
                        Criterion::CountsDet | Criterion::MomentsDet => {
                            row.value = report.determinant();
                            row.verdict = det_verdict(&report);
                        }
                        Criterion::GMatrix => match g_matrix(&report) {
                            Ok(g) => {
                                row.value = g.min_eig;
                                row.verdict = g.verdict();
                            }
                            Err(_) => row.verdict = Verdict::Indeterminate,
                        },
                        _ => {
                            row.value = report.min_eig;
                            row.verdict = report.verdict();
                        }
                    }
                    rows.push(row);
                }
                continue;
            }
            match c {
                Criterion::Ratio | Criterion::CountRatio => {
                    for &case in &self.scenario.ratio_cases {
                        let (n, m) = case_indices(case, choice.modes);
                        let mut row = self.row(x, choice, &case_id(case), c);
                        if c == Criterion::Ratio {
                            let r = ratio_criterion(&state, &n, &m, eta)?;
                            row.value = r.ratio.unwrap_or(f64::NAN);
                            row.verdict = r.verdict();
                        } else {
                            let r = count_ratio_criterion(&state, &n, &m, eta)?;
                            row.value = match r {
                                CountRatio::Finite(v) => v,
                                CountRatio::Divergent => f64::INFINITY,
                                CountRatio::Indeterminate => f64::NAN,
                            };
                            row.verdict = r.verdict();
                        }
                        rows.push(row);
                    }
                }
                _ => {
                    if clicks.is_none() {
                        clicks = Some(click_distribution(&state, &self.detector)?);
                    }
                    let dist = clicks.as_ref().expect("just set");
                    let (value, verdict) = scalar_criterion(dist, c)?;
                    let mut row = self.row(x, choice, "-", c);
                    row.value = value;
                    row.verdict = verdict;
                    rows.push(row);
                }
            }
        }
        for r in &mut rows {
            r.total_photons = Some(photons);
        }
        Ok(rows)
    }
}

/// Value and exact verdict of a scalar click criterion.
fn scalar_criterion(dist: &CountDistribution, c: Criterion) -> Result<(f64, Verdict), CliError> {
    Ok(match c {
        Criterion::KlyshkoInteger | Criterion::KlyshkoHalf => {
            let variant = if c == Criterion::KlyshkoInteger {
                KlyshkoVariant::Integer
            } else {
                KlyshkoVariant::Half
            };
            let r = klyshko_ratio(dist, variant)?;
            (r.ratio.unwrap_or(f64::NAN), r.verdict())
        }
        Criterion::QB => match qb_parameter(dist) {
            Ok(q) => (q.q_b, q.verdict()),
            Err(_) => (f64::NAN, Verdict::Indeterminate),
        },
        Criterion::Skewness => {
            let w = skewness_witness(dist)?;
            (w.value(), w.verdict())
        }
        _ => unreachable!("matrix and ratio criteria are handled separately"),
    })
}

/// Signed violation of a scalar criterion: negative values point towards
/// nonclassicality.
fn scalar_margin(dist: &CountDistribution, c: Criterion) -> Result<Option<f64>, CliError> {
    Ok(match c {
        Criterion::KlyshkoInteger | Criterion::KlyshkoHalf => {
            let variant = if c == Criterion::KlyshkoInteger {
                KlyshkoVariant::Integer
            } else {
                KlyshkoVariant::Half
            };
            let r = klyshko_ratio(dist, variant)?;
            r.ratio.map(|v| v - r.bound)
        }
        Criterion::QB => qb_parameter(dist).ok().map(|q| q.q_b),
        Criterion::Skewness => Some(skewness_witness(dist)?.value()),
        _ => None,
    })
}

/// Evaluates every state, grid point and criterion. Grid points run in
/// parallel; the result order is fixed: grid value, then state, then
/// criterion and set as listed.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<Row>, CliError> {
    let ctx = Context::new(scenario)?;
    let grid = scenario.sweep.values();
    let chunks: Vec<Vec<Row>> = grid
        .par_iter()
        .map(|&x| {
            let mut out = Vec::new();
            for choice in &scenario.states {
                out.extend(ctx.evaluate(x, choice)?);
            }
            Ok(out)
        })
        .collect::<Result<_, CliError>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Sampling settings for [`run_sample`].
#[derive(Debug, Clone)]
pub struct SampleSettings {
    pub at: f64,
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
}

/// Exact counting distribution of a single-mode state.
pub fn counting_distribution(state: &StateSpec, det: &Detector) -> Result<CountDistribution, CliError> {
    match det.model() {
        DetectorModel::OnOff { .. } => Ok(click_distribution(state, det)?),
        DetectorModel::Pnr { .. } => Ok(pnr_distribution(state, det)?),
        DetectorModel::Photoelectric => {
            let mut n_max = 40;
            loop {
                match photo_distribution(state, det, n_max) {
                    Err(clickstat::Error::Truncation { .. }) if n_max < 400 => n_max += 20,
                    other => return Ok(other?),
                }
            }
        }
    }
}

/// Empirical rows for one histogram.
pub fn empirical_rows(
    scenario: &Scenario,
    run: &SampleRun,
    state_id: &str,
    grid_value: f64,
    resamples: usize,
) -> Result<Vec<Row>, CliError> {
    let ctx = Context::new(scenario)?;
    let choice = StateChoice {
        kind: StateKind::Coherent,
        parity: None,
        modes: 1,
        n: None,
    };
    let dist = run.empirical()?;
    let mut rows = Vec::new();
    for &c in &scenario.criteria {
        if let Some(kind) = c.matrix_kind() {
            for (id, set) in &ctx.sets[&(1, kind)] {
                let mut row = ctx.row(grid_value, &choice, id, c);
                match c {
                    Criterion::Counts | Criterion::Moments => {
                        let w = empirical_witness(run, set, kind, resamples)?;
                        row.value = w.report.min_eig;
                        row.stderr = Some(w.stderr);
                        row.verdict = w.verdict();
                    }
                    _ => {
                        let stat = |d: &CountDistribution| -> clickstat::Result<Option<f64>> {
                            let r = matrix_from_counts(d, set, kind)?;
                            Ok(match c {
                                Criterion::GMatrix => g_matrix(&r).ok().map(|g| g.min_eig),
                                _ => Some(r.determinant()),
                            })
                        };
                        let value = stat(&dist)?;
                        let se = bootstrap_stderr(run, resamples, stat)?;
                        row.value = value.unwrap_or(f64::NAN);
                        row.stderr = se;
                        row.verdict = significance(value, se);
                    }
                }
                rows.push(row);
            }
            continue;
        }
        let value = scalar_criterion(&dist, c)?.0;
        let margin = scalar_margin(&dist, c)?;
        let se = bootstrap_stderr(run, resamples, |d| {
            scalar_margin(d, c).map_err(|e| clickstat::Error::Domain(e.to_string()))
        })?;
        let mut row = ctx.row(grid_value, &choice, "-", c);
        row.value = value;
        row.stderr = se;
        row.verdict = significance(margin, se);
        rows.push(row);
    }
    for r in &mut rows {
        r.state = state_id.to_string();
    }
    Ok(rows)
}

fn significance(margin: Option<f64>, stderr: Option<f64>) -> Verdict {
    match margin {
        None => Verdict::Indeterminate,
        Some(m) if m >= 0.0 => Verdict::NoViolation,
        Some(m) if m < -SIGMA_THRESHOLD * stderr.unwrap_or(0.0) => Verdict::Nonclassical,
        Some(_) => Verdict::Inconclusive,
    }
}

/// Samples every state of a single-mode scenario at one intensity.
pub fn run_sample(scenario: &Scenario, settings: &SampleSettings) -> Result<Vec<(String, SampleRun, Vec<Row>)>, CliError> {
    let ctx = Context::new(scenario)?;
    let mut out = Vec::new();
    for choice in &scenario.states {
        if choice.modes != 1 {
            return Err(CliError::Validation("sampling is single-mode only".into()));
        }
        if scenario.criteria.iter().any(|c| matches!(c, Criterion::Ratio | Criterion::CountRatio)) {
            return Err(CliError::Validation("ratio criteria cannot be sampled".into()));
        }
        let state = build_state(choice, settings.at)?;
        let dist = counting_distribution(&state, &ctx.detector)?;
        let run = sample(&dist, settings.shots, settings.seed)?;
        let rows = empirical_rows(scenario, &run, &choice.id(), settings.at, settings.resamples)?;
        out.push((choice.id(), run, rows));
    }
    Ok(out)
}

/// Outcome space used when importing a histogram for the scenario's detector.
pub fn import_space(scenario: &Scenario, max_photon: u32) -> Result<OutcomeSpace, CliError> {
    let model = scenario.detector.config()?.model;
    Ok(OutcomeSpace::for_model(model).unwrap_or(OutcomeSpace::Photon { n_max: max_photon }))
}
