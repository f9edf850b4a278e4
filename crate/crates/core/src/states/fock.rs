//! Truncated photon-number basis. Serves as an independent oracle for the
//! analytic coherent-state evaluation.

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::expr::NoExpr;
use super::state::StateSpec;
use crate::error::{Error, Result};

pub const DEFAULT_N_MAX: usize = 60;
/// Tail mass above which a fixed-size expansion is rejected.
pub const TRUNCATION_TOL: f64 = 1e-12;
/// Tail mass targeted by [`to_fock_auto`].
pub const AUTO_TAIL_TARGET: f64 = 1e-14;
const AUTO_N_LIMIT: usize = 2000;
const SUPPORT_THRESHOLD: f64 = 1e-14;

fn coherent_to_fock(state: &StateSpec, n_max: usize) -> Result<(Vec<Complex64>, f64)> {
    let StateSpec::Coherent(comps) = state else {
        unreachable!()
    };
    if comps[0].amplitudes.len() != 1 {
        return Err(Error::domain("Fock expansion is single-mode only"));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for c in comps {
        let alpha = c.amplitudes[0];
        let mut t = c.weight * (-0.5 * alpha.norm_sqr()).exp();
        coeffs[0] += t;
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            t = t * alpha / (n as f64).sqrt();
            *slot += t;
        }
    }
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok((coeffs, (1.0 - kept).max(0.0)))
}

/// Expands a single-mode state in the basis `|0⟩ … |n_max⟩`. Mixtures are
/// converted part by part.
pub fn to_fock(state: &StateSpec, n_max: usize) -> Result<StateSpec> {
    match state {
        StateSpec::Coherent(_) => {
            let (coeffs, tail) = coherent_to_fock(state, n_max)?;
            if tail > TRUNCATION_TOL {
                return Err(Error::Truncation { n_max, tail });
            }
            Ok(StateSpec::Fock(coeffs))
        }
        StateSpec::Fock(_) => Ok(state.clone()),
        StateSpec::Mixture(parts) => Ok(StateSpec::Mixture(
            parts
                .iter()
                .map(|(p, s)| Ok((*p, to_fock(s, n_max)?)))
                .collect::<Result<_>>()?,
        )),
    }
}

/// Like [`to_fock`], starting at [`DEFAULT_N_MAX`] and growing the cutoff
/// until the discarded tail is below [`AUTO_TAIL_TARGET`].
pub fn to_fock_auto(state: &StateSpec) -> Result<StateSpec> {
    let mut n_max = DEFAULT_N_MAX;
    loop {
        match fock_tail(state, n_max)? {
            tail if tail < AUTO_TAIL_TARGET => return to_fock(state, n_max),
            tail if n_max >= AUTO_N_LIMIT => return Err(Error::Truncation { n_max, tail }),
            _ => n_max += 20,
        }
    }
}

fn fock_tail(state: &StateSpec, n_max: usize) -> Result<f64> {
    match state {
        StateSpec::Coherent(_) => Ok(coherent_to_fock(state, n_max)?.1),
        StateSpec::Fock(_) => Ok(0.0),
        StateSpec::Mixture(parts) => parts
            .iter()
            .map(|(p, s)| Ok(p * fock_tail(s, n_max)?))
            .sum(),
    }
}

/// Photon-number distribution `p_n`, `n = 0..=n_max`.
pub fn photon_number_distribution(state: &StateSpec, n_max: usize) -> Result<Vec<f64>> {
    let mut p = vec![0.0; n_max + 1];
    accumulate_distribution(&to_fock(state, n_max)?, 1.0, &mut p);
    Ok(p)
}

fn accumulate_distribution(state: &StateSpec, weight: f64, out: &mut [f64]) {
    match state {
        StateSpec::Fock(c) => {
            for (slot, x) in out.iter_mut().zip(c) {
                *slot += weight * x.norm_sqr();
            }
        }
        StateSpec::Mixture(parts) => {
            for (p, s) in parts {
                accumulate_distribution(s, weight * p, out);
            }
        }
        StateSpec::Coherent(_) => unreachable!("converted by to_fock"),
    }
}

/// `⟨:h(n̂):⟩ = Σ_n p_n ⟨n|:h(n̂):|n⟩` for Fock vectors and mixtures of them.
pub fn expect_fock(state: &StateSpec, expr: &NoExpr) -> Result<f64> {
    match state {
        StateSpec::Fock(c) => Ok(c
            .iter()
            .enumerate()
            .filter(|(_, x)| x.norm_sqr() > 0.0)
            .map(|(n, x)| x.norm_sqr() * expr.fock_diagonal(n as u32))
            .sum()),
        StateSpec::Mixture(parts) => parts.iter().map(|(p, s)| Ok(p * expect_fock(s, expr)?)).sum(),
        StateSpec::Coherent(_) => Err(Error::domain(
            "expect_fock needs a Fock vector; expand coherent states with to_fock first",
        )),
    }
}

/// Product-state oracle: `Π_k ⟨:h_k(n̂):⟩_{ρ_k}` for independent modes.
pub fn expect_fock_product(modes: &[StateSpec], exprs: &[&NoExpr]) -> Result<f64> {
    if modes.len() != exprs.len() {
        return Err(Error::domain("one expression per mode required"));
    }
    modes
        .iter()
        .zip(exprs)
        .map(|(s, e)| expect_fock(s, e))
        .product()
}

/// Photon numbers carrying probability above 1e-14 in a truncated expansion.
pub fn cat_parity_check(state: &StateSpec, n_max: usize) -> Result<BTreeSet<usize>> {
    if state.modes() != 1 {
        return Err(Error::domain("parity check is single-mode only"));
    }
    Ok(photon_number_distribution(state, n_max)?
        .into_iter()
        .enumerate()
        .filter(|(_, p)| *p > SUPPORT_THRESHOLD)
        .map(|(n, _)| n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::expr::Response;
    use crate::states::state::Parity;

    #[test]
    fn vacuum_sees_only_constant_terms() {
        let e = NoExpr::from_terms(
            vec![
                super::super::expr::Term { coeff: 0.7, power: 0, decay: 2.0 },
                super::super::expr::Term { coeff: 5.0, power: 3, decay: 0.0 },
            ],
            Response::IDEAL,
        );
        let v = expect_fock(&StateSpec::fock_number(0), &e).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
    }

    #[test]
    fn parity_supports() {
        let even = cat_parity_check(&StateSpec::cat_real(1.0, Parity::Even).unwrap(), 40).unwrap();
        assert!(even.iter().all(|n| n % 2 == 0));
        let odd = cat_parity_check(&StateSpec::cat_real(1.0, Parity::Odd).unwrap(), 40).unwrap();
        assert!(odd.iter().all(|n| n % 2 == 1));
        let coh = cat_parity_check(&StateSpec::coherent_real(1.0), 16).unwrap();
        assert_eq!(coh, (0..=16).collect());
    }

    #[test]
    fn truncation_is_flagged() {
        let s = StateSpec::coherent_real(30.0);
        assert!(matches!(to_fock(&s, 20), Err(Error::Truncation { .. })));
        assert!(to_fock_auto(&s).is_ok());
    }
}
