use num_complex::Complex64;

use super::expr::NoExpr;
use super::state::{ln_overlap, StateSpec};
use crate::error::{Error, Result};

/// Largest tolerated imaginary residual, relative to the magnitude scale.
const IMAG_TOL: f64 = 1e-10;

/// An expectation value together with the sum of absolute contributions
/// that produced it; the latter sets the scale for deciding whether a
/// cancelling result is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub scale: f64,
}

/// `⟨:h(n̂):⟩` for a single-mode state.
pub fn expect(state: &StateSpec, expr: &NoExpr) -> Result<f64> {
    Ok(expect_detailed(state, &[expr])?.value)
}

/// `⟨:h(n̂_k):⟩` acting on one mode of a multimode state.
pub fn expect_on_mode(state: &StateSpec, mode: usize, expr: &NoExpr) -> Result<f64> {
    let modes = state.modes();
    if mode >= modes {
        return Err(Error::domain(format!("mode {mode} out of range for {modes}-mode state")));
    }
    let one = NoExpr::one(expr.response());
    let exprs: Vec<&NoExpr> = (0..modes).map(|k| if k == mode { expr } else { &one }).collect();
    Ok(expect_detailed(state, &exprs)?.value)
}

/// `⟨:h_1(n̂_1) ⋯ h_μ(n̂_μ):⟩` with one expression per mode.
pub fn expect_product(state: &StateSpec, exprs: &[&NoExpr]) -> Result<f64> {
    Ok(expect_detailed(state, exprs)?.value)
}

/// Analytic evaluation for coherent superpositions and their mixtures, via
/// `⟨α|:h(n̂):|β⟩ = ⟨α|β⟩ h(α*β)` per mode. Single-mode Fock vectors use the
/// photon-number diagonal of `:h(n̂):`.
pub fn expect_detailed(state: &StateSpec, exprs: &[&NoExpr]) -> Result<Expectation> {
    if exprs.len() != state.modes() {
        return Err(Error::domain(format!(
            "{} expressions supplied for a {}-mode state",
            exprs.len(),
            state.modes()
        )));
    }
    match state {
        StateSpec::Coherent(comps) => {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for a in comps {
                for b in comps {
                    let mut exponent = ln_overlap(&a.amplitudes, &b.amplitudes);
                    let mut product = Complex64::new(1.0, 0.0);
                    let mut magnitude = 1.0;
                    for ((x, y), e) in a.amplitudes.iter().zip(&b.amplitudes).zip(exprs) {
                        let (shift, rest, mag) = e.eval_scaled(x.conj() * y);
                        exponent += shift;
                        product *= rest;
                        magnitude *= mag;
                    }
                    let weight = a.weight.conj() * b.weight;
                    let factor = exponent.exp();
                    acc += weight * factor * product;
                    scale += weight.norm() * factor.norm() * magnitude;
                }
            }
            if !(acc.re.is_finite() && acc.im.is_finite()) {
                return Err(Error::NonFinite("expect"));
            }
            if acc.im.abs() > IMAG_TOL * scale.max(1.0) {
                return Err(Error::domain(format!(
                    "expectation has imaginary residual {:e}",
                    acc.im
                )));
            }
            Ok(Expectation {
                value: acc.re,
                scale,
            })
        }
        StateSpec::Mixture(parts) => {
            let mut value = 0.0;
            let mut scale = 0.0;
            for (p, s) in parts {
                let e = expect_detailed(s, exprs)?;
                value += p * e.value;
                scale += p * e.scale;
            }
            Ok(Expectation { value, scale })
        }
        StateSpec::Fock(c) => {
            let mut value = 0.0;
            let mut scale = 0.0;
            for (n, x) in c.iter().enumerate().filter(|(_, x)| x.norm_sqr() > 0.0) {
                let d = exprs[0].fock_diagonal(n as u32);
                value += x.norm_sqr() * d;
                scale += x.norm_sqr() * d.abs();
            }
            if !value.is_finite() {
                return Err(Error::NonFinite("expect"));
            }
            Ok(Expectation { value, scale })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::expr::Response;
    use crate::states::state::Parity;

    #[test]
    fn coherent_state_moment_is_power_of_intensity() {
        let beta = Complex64::new(0.8, -0.6);
        let s = StateSpec::coherent(&[beta]);
        for m in 0..5 {
            let e = NoExpr::monomial(1.0, m, 0.0, Response::IDEAL);
            let v = expect(&s, &e).unwrap();
            assert!((v - beta.norm_sqr().powi(m as i32)).abs() < 1e-14);
        }
    }

    #[test]
    fn even_cat_reproduces_helper_identity() {
        // h(x) = x^2 at |α|^2 = 1
        let s = StateSpec::cat_real(1.0, Parity::Even).unwrap();
        let e = NoExpr::monomial(1.0, 2, 0.0, Response::IDEAL);
        let v = expect(&s, &e).unwrap();
        let q = (-2.0f64).exp();
        let expected = (1.0 + 1.0 * q) / (1.0 + q);
        assert!((v - expected).abs() < 1e-14);
    }

    #[test]
    fn fock_input_uses_diagonal() {
        let e = NoExpr::monomial(1.0, 1, 1.0, Response::IDEAL);
        assert!(expect(&StateSpec::fock_number(0), &e).unwrap().abs() < 1e-15);
        assert!((expect(&StateSpec::fock_number(1), &e).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mode_count_mismatch() {
        let e = NoExpr::one(Response::IDEAL);
        let s = StateSpec::vacuum(2);
        assert!(expect(&s, &e).is_err());
        assert_eq!(expect_on_mode(&s, 1, &e).unwrap(), 1.0);
        assert!(expect_on_mode(&s, 2, &e).is_err());
    }
}
