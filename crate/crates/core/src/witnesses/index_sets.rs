//! Integer and half-integer index sets.
//!
//! Matrix entries are indexed by pairwise sums `k + l`, which must be whole
//! numbers. Hence every position of a (multi-)index is either integer for
//! all elements of the set or half-odd for all of them.

use std::fmt;

use crate::detectors::{compositions, DetectorModel};
use crate::error::{Error, Result};
use crate::numerics::{HalfInt, MAX_COMBINATORIAL_N};

/// Highest total order `k + l` used for the default photoelectric sets.
pub const DEFAULT_PHOTO_ORDER: u32 = 4;
/// Largest `K` for which all `2^K` resolving-detector sets are enumerated.
pub const MAX_PNR_LEVELS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexClass {
    Integer,
    HalfOdd,
}

impl IndexClass {
    pub fn of(k: HalfInt) -> IndexClass {
        if k.is_integer() {
            IndexClass::Integer
        } else {
            IndexClass::HalfOdd
        }
    }

    pub fn letter(self) -> char {
        match self {
            IndexClass::Integer => 'Z',
            IndexClass::HalfOdd => 'H',
        }
    }
}

/// Which matrix the set is meant for; counts and moments obey different caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatrixKind {
    Counts,
    Moments,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Counts => "counts",
            MatrixKind::Moments => "moments",
        }
    }
}

/// A (multi-)index element, one entry per position.
pub type Element = Vec<HalfInt>;

pub fn format_element(e: &[HalfInt]) -> String {
    if e.len() == 1 {
        e[0].to_string()
    } else {
        let parts: Vec<String> = e.iter().map(|k| k.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    elements: Vec<Element>,
    pattern: Vec<IndexClass>,
    label: String,
}

impl IndexSet {
    /// Builds a set from explicit elements: sorted, deduplicated and checked
    /// for pairwise integrality and non-negativity. The set's label is its
    /// class pattern unless one is supplied later via [`IndexSet::with_label`].
    pub fn new(elements: Vec<Element>) -> Result<IndexSet> {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        let first = elements
            .first()
            .ok_or_else(|| Error::domain("index set is empty"))?;
        let width = first.len();
        if width == 0 {
            return Err(Error::domain("index elements need at least one position"));
        }
        for e in &elements {
            if e.len() != width {
                return Err(Error::domain("index elements have different lengths"));
            }
            if let Some(k) = e.iter().find(|k| !k.is_nonnegative()) {
                return Err(Error::domain(format!(
                    "negative index {k} in {}",
                    format_element(e)
                )));
            }
        }
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i..] {
                if let Some(pos) = a.iter().zip(b).position(|(x, y)| !(*x + *y).is_integer()) {
                    return Err(Error::Inadmissible {
                        first: format_element(a),
                        second: format_element(b),
                        reason: format!("position {pos} sums to a half-odd number"),
                    });
                }
            }
        }
        let pattern: Vec<IndexClass> = first.iter().map(|&k| IndexClass::of(k)).collect();
        Ok(IndexSet {
            label: pattern_label(&pattern),
            elements,
            pattern,
        })
    }

    /// Empty set for a class pattern that admits no element.
    fn empty(pattern: Vec<IndexClass>) -> IndexSet {
        IndexSet {
            label: pattern_label(&pattern),
            elements: Vec::new(),
            pattern,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> IndexSet {
        self.label = label.into();
        self
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn pattern(&self) -> &[IndexClass] {
        &self.pattern
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// True when the class pattern admits no element for the requested cap.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Integer exponent vector `k + l` for a pair of elements.
    pub fn pair_sum(&self, i: usize, j: usize) -> Vec<u32> {
        self.elements[i]
            .iter()
            .zip(&self.elements[j])
            .map(|(a, b)| (*a + *b).to_integer().expect("admissible set") as u32)
            .collect()
    }

    /// Checks the model-specific cap on pair sums.
    pub fn check_admissible(&self, model: DetectorModel, kind: MatrixKind) -> Result<()> {
        let width = match model {
            DetectorModel::Photoelectric | DetectorModel::OnOff { .. } => 1,
            DetectorModel::Pnr { levels, .. } => levels as usize + 1,
        };
        if self.pattern.len() != width {
            return Err(Error::domain(format!(
                "{model} needs index elements with {width} positions, got {}",
                self.pattern.len()
            )));
        }
        let Some(bins) = model.bins() else {
            return Ok(());
        };
        let pnr_counts = matches!(model, DetectorModel::Pnr { .. }) && kind == MatrixKind::Counts;
        for i in 0..self.len() {
            for j in i..self.len() {
                let total: u32 = self.pair_sum(i, j).iter().sum();
                let violated = if pnr_counts { total != bins } else { total > bins };
                if violated {
                    let rule = if pnr_counts { "equal" } else { "not exceed" };
                    return Err(Error::Inadmissible {
                        first: format_element(&self.elements[i]),
                        second: format_element(&self.elements[j]),
                        reason: format!("total {total} must {rule} N = {bins}"),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| format_element(e)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn pattern_label(pattern: &[IndexClass]) -> String {
    pattern.iter().map(|c| c.letter()).collect()
}

/// Maximal single-index sets with pair sums up to `cap`:
/// `{0, …, ⌊cap/2⌋}` and `{1/2, …, ⌈cap/2⌉ − 1/2}`.
pub fn single_index_sets(cap: u32) -> Result<Vec<IndexSet>> {
    let integer: Vec<Element> = (0..=cap / 2)
        .map(|k| vec![HalfInt::from_int(k as i64)])
        .collect();
    let half: Vec<Element> = (0..cap.div_ceil(2))
        .map(|k| vec![HalfInt::from_twice(2 * k as i64 + 1)])
        .collect();
    let mut sets = vec![IndexSet::new(integer)?.with_label("integer")];
    sets.push(if half.is_empty() {
        IndexSet::empty(vec![IndexClass::HalfOdd]).with_label("half")
    } else {
        IndexSet::new(half)?.with_label("half")
    });
    Ok(sets)
}

/// All non-negative multi-indices of a class pattern whose components sum
/// to `total` (or to at most `total` when `exact` is false).
fn pattern_elements(pattern: &[IndexClass], total: HalfInt, exact: bool) -> Vec<Element> {
    let mut out = Vec::new();
    // shift half-odd positions down by 1/2 so every position is integer
    let offset: HalfInt = pattern
        .iter()
        .map(|c| match c {
            IndexClass::Integer => HalfInt::ZERO,
            IndexClass::HalfOdd => HalfInt::HALF,
        })
        .sum();
    let Some(budget) = (total - offset).to_integer() else {
        return out;
    };
    if budget < 0 {
        return out;
    }
    let budgets: Vec<u32> = if exact {
        vec![budget as u32]
    } else {
        (0..=budget as u32).collect()
    };
    for b in budgets {
        for comp in compositions(b, pattern.len()) {
            out.push(
                comp.iter()
                    .zip(pattern)
                    .map(|(&v, c)| {
                        let base = HalfInt::from_int(v as i64);
                        match c {
                            IndexClass::Integer => base,
                            IndexClass::HalfOdd => base + HalfInt::HALF,
                        }
                    })
                    .collect(),
            );
        }
    }
    out
}

fn pattern_set(pattern: Vec<IndexClass>, total: HalfInt, exact: bool) -> Result<IndexSet> {
    let elements = pattern_elements(&pattern, total, exact);
    if elements.is_empty() {
        Ok(IndexSet::empty(pattern))
    } else {
        IndexSet::new(elements)
    }
}

fn class_from_bit(bits: u32, j: u32) -> IndexClass {
    if bits >> j & 1 == 1 {
        IndexClass::HalfOdd
    } else {
        IndexClass::Integer
    }
}

/// Maximal admissible index sets for a detector model.
///
/// * photoelectric and on-off: the integer and the half-odd set, capped by
///   [`DEFAULT_PHOTO_ORDER`] or `N` respectively;
/// * resolving detectors, counts: `2^K` sets with `Σ N_j = N/2`, the class
///   of position `j < K` taken from bit `j` of the set number and the class
///   of `N_K` forced by the sum;
/// * resolving detectors, moments: `2^{K+1}` sets with `Σ N_j ≤ N/2`.
///
/// Patterns without any admissible element come back as empty sets.
pub fn enumerate_index_sets(model: DetectorModel, kind: MatrixKind) -> Result<Vec<IndexSet>> {
    match model {
        DetectorModel::Photoelectric => single_index_sets(DEFAULT_PHOTO_ORDER),
        DetectorModel::OnOff { bins } => {
            if bins > MAX_COMBINATORIAL_N {
                return Err(Error::domain(format!("N = {bins} exceeds {MAX_COMBINATORIAL_N}")));
            }
            single_index_sets(bins)
        }
        DetectorModel::Pnr { bins, levels } => {
            if bins > MAX_COMBINATORIAL_N || levels > MAX_PNR_LEVELS {
                return Err(Error::domain(format!(
                    "enumeration limited to N <= {MAX_COMBINATORIAL_N}, K <= {MAX_PNR_LEVELS}"
                )));
            }
            let half_n = HalfInt::from_twice(bins as i64);
            match kind {
                MatrixKind::Counts => (0..1u32 << levels)
                    .map(|bits| {
                        let mut pattern: Vec<IndexClass> =
                            (0..levels).map(|j| class_from_bit(bits, j)).collect();
                        // N_K = N/2 - Σ_{j<K} N_j fixes the last class
                        let half_count = pattern.iter().filter(|c| **c == IndexClass::HalfOdd).count();
                        let rest = half_n - HalfInt::from_twice(half_count as i64);
                        pattern.push(IndexClass::of(rest));
                        pattern_set(pattern, half_n, true)
                    })
                    .collect(),
                MatrixKind::Moments => (0..1u32 << (levels + 1))
                    .map(|bits| {
                        let pattern = (0..=levels).map(|j| class_from_bit(bits, j)).collect();
                        pattern_set(pattern, half_n, false)
                    })
                    .collect(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn el(parts: &[&str]) -> Element {
        parts.iter().map(|s| h(s)).collect()
    }

    #[test]
    fn on_off_four_bins() {
        let sets = enumerate_index_sets(DetectorModel::OnOff { bins: 4 }, MatrixKind::Counts).unwrap();
        assert_eq!(sets[0].to_string(), "{0, 1, 2}");
        assert_eq!(sets[1].to_string(), "{1/2, 3/2}");
    }

    #[test]
    fn on_off_five_bins() {
        let sets = enumerate_index_sets(DetectorModel::OnOff { bins: 5 }, MatrixKind::Counts).unwrap();
        assert_eq!(sets[0].to_string(), "{0, 1, 2}");
        assert_eq!(sets[1].to_string(), "{1/2, 3/2, 5/2}");
    }

    #[test]
    fn pnr_four_sets() {
        let sets =
            enumerate_index_sets(DetectorModel::Pnr { bins: 4, levels: 2 }, MatrixKind::Counts).unwrap();
        assert_eq!(sets.len(), 4);
        let expected = [
            vec![
                el(&["0", "0", "2"]),
                el(&["1", "0", "1"]),
                el(&["0", "1", "1"]),
                el(&["1", "1", "0"]),
                el(&["2", "0", "0"]),
                el(&["0", "2", "0"]),
            ],
            vec![el(&["1/2", "0", "3/2"]), el(&["3/2", "0", "1/2"]), el(&["1/2", "1", "1/2"])],
            vec![el(&["0", "1/2", "3/2"]), el(&["0", "3/2", "1/2"]), el(&["1", "1/2", "1/2"])],
            vec![el(&["1/2", "1/2", "1"]), el(&["3/2", "1/2", "0"]), el(&["1/2", "3/2", "0"])],
        ];
        for (set, exp) in sets.iter().zip(expected) {
            let mut exp = exp;
            exp.sort();
            assert_eq!(set.elements(), exp.as_slice());
        }
        let labels: Vec<&str> = sets.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["ZZZ", "HZH", "ZHH", "HHZ"]);
    }

    #[test]
    fn pnr_moment_sets_have_eight_patterns() {
        let sets =
            enumerate_index_sets(DetectorModel::Pnr { bins: 4, levels: 2 }, MatrixKind::Moments).unwrap();
        assert_eq!(sets.len(), 8);
        for s in &sets {
            s.check_admissible(DetectorModel::Pnr { bins: 4, levels: 2 }, MatrixKind::Moments)
                .unwrap();
        }
    }

    #[test]
    fn impossible_pattern_is_empty() {
        let sets =
            enumerate_index_sets(DetectorModel::Pnr { bins: 2, levels: 3 }, MatrixKind::Counts).unwrap();
        let hhh = sets.iter().find(|s| s.label().starts_with("HHH")).unwrap();
        assert!(hhh.is_empty());
    }

    #[test]
    fn mixed_classes_rejected() {
        let err = IndexSet::new(vec![el(&["0"]), el(&["1/2"])]).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { .. }));
    }

    #[test]
    fn cap_violation_names_pair() {
        let set = IndexSet::new(vec![el(&["1"]), el(&["3"])]).unwrap();
        let err = set
            .check_admissible(DetectorModel::OnOff { bins: 4 }, MatrixKind::Counts)
            .unwrap_err();
        match err {
            Error::Inadmissible { first, second, .. } => {
                assert_eq!((first.as_str(), second.as_str()), ("3", "3"));
            }
            e => panic!("unexpected {e}"),
        }
    }
}
