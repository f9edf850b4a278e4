use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// One branch `weight · |α_1⟩ ⊗ … ⊗ |α_μ⟩` of a coherent superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentComponent {
    pub weight: Complex64,
    pub amplitudes: Vec<Complex64>,
}

/// Physical state under test.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Normalized superposition of multimode coherent product states.
    Coherent(Vec<CoherentComponent>),
    /// Single-mode pure state in the photon-number basis.
    Fock(Vec<Complex64>),
    /// Classical mixture `Σ p_i ρ_i`.
    Mixture(Vec<(f64, StateSpec)>),
}

/// `ln⟨α|β⟩` for multimode coherent product states.
pub(crate) fn ln_overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| -0.5 * x.norm_sqr() - 0.5 * y.norm_sqr() + x.conj() * y)
        .sum()
}

impl StateSpec {
    pub fn vacuum(modes: usize) -> StateSpec {
        StateSpec::coherent(&vec![Complex64::new(0.0, 0.0); modes])
    }

    /// Coherent product state `|β_1⟩ ⊗ … ⊗ |β_μ⟩`.
    pub fn coherent(amplitudes: &[Complex64]) -> StateSpec {
        assert!(!amplitudes.is_empty(), "coherent state needs at least one mode");
        StateSpec::Coherent(vec![CoherentComponent {
            weight: Complex64::new(1.0, 0.0),
            amplitudes: amplitudes.to_vec(),
        }])
    }

    /// Single-mode coherent state with real amplitude `√intensity`.
    pub fn coherent_real(intensity: f64) -> StateSpec {
        StateSpec::coherent(&[Complex64::new(intensity.sqrt(), 0.0)])
    }

    /// Validated coherent superposition.
    pub fn superposition(components: Vec<CoherentComponent>) -> Result<StateSpec> {
        let modes = components
            .first()
            .map(|c| c.amplitudes.len())
            .ok_or_else(|| Error::domain("superposition needs at least one component"))?;
        if modes == 0 || components.iter().any(|c| c.amplitudes.len() != modes) {
            return Err(Error::domain("all components need the same positive mode count"));
        }
        let s = StateSpec::Coherent(components);
        let norm = s.coherent_norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("superposition norm {norm} != 1")));
        }
        Ok(s)
    }

    /// Even or odd cat state `(|α⟩ ± |−α⟩)/√(2(1 ± e^{−2‖α‖²}))`, one
    /// amplitude per mode.
    pub fn cat(alpha: &[Complex64], parity: Parity) -> Result<StateSpec> {
        if alpha.is_empty() {
            return Err(Error::domain("cat state needs at least one mode"));
        }
        let intensity: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        if intensity == 0.0 {
            return match parity {
                Parity::Even => Ok(StateSpec::vacuum(alpha.len())),
                Parity::Odd => Err(Error::domain("odd cat state is undefined at zero amplitude")),
            };
        }
        // 1 ± e^{-2x}, with expm1 to keep the odd case accurate at small x
        let overlap_term = match parity {
            Parity::Even => 1.0 + (-2.0 * intensity).exp(),
            Parity::Odd => -(-2.0 * intensity).exp_m1(),
        };
        let w = 1.0 / (2.0 * overlap_term).sqrt();
        let minus: Vec<Complex64> = alpha.iter().map(|a| -a).collect();
        Ok(StateSpec::Coherent(vec![
            CoherentComponent {
                weight: Complex64::new(w, 0.0),
                amplitudes: alpha.to_vec(),
            },
            CoherentComponent {
                weight: Complex64::new(parity.sign() * w, 0.0),
                amplitudes: minus,
            },
        ]))
    }

    /// Single-mode cat with real amplitude `√intensity`.
    pub fn cat_real(intensity: f64, parity: Parity) -> Result<StateSpec> {
        StateSpec::cat(&[Complex64::new(intensity.sqrt(), 0.0)], parity)
    }

    /// Multimode cat with `‖α‖² = intensity` spread evenly over `modes`.
    pub fn cat_uniform(intensity: f64, modes: usize, parity: Parity) -> Result<StateSpec> {
        let a = Complex64::new((intensity / modes as f64).sqrt(), 0.0);
        StateSpec::cat(&vec![a; modes], parity)
    }

    pub fn fock(coeffs: Vec<Complex64>) -> Result<StateSpec> {
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("Fock vector norm {norm} != 1")));
        }
        Ok(StateSpec::Fock(coeffs))
    }

    /// Photon-number eigenstate `|n⟩`.
    pub fn fock_number(n: usize) -> StateSpec {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        StateSpec::Fock(c)
    }

    pub fn mixture(parts: Vec<(f64, StateSpec)>) -> Result<StateSpec> {
        if parts.is_empty() {
            return Err(Error::domain("mixture needs at least one part"));
        }
        if parts.iter().any(|(p, _)| p.is_nan() || *p < 0.0) {
            return Err(Error::domain("mixture probabilities must be non-negative"));
        }
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("mixture probabilities sum to {total}")));
        }
        let modes = parts[0].1.modes();
        if parts.iter().any(|(_, s)| s.modes() != modes) {
            return Err(Error::domain("mixture parts have different mode counts"));
        }
        Ok(StateSpec::Mixture(parts))
    }

    pub fn modes(&self) -> usize {
        match self {
            StateSpec::Coherent(c) => c[0].amplitudes.len(),
            StateSpec::Fock(_) => 1,
            StateSpec::Mixture(parts) => parts[0].1.modes(),
        }
    }

    /// `Σ w_i* w_j ⟨α_i|α_j⟩` for coherent superpositions; 1 otherwise.
    pub fn coherent_norm(&self) -> f64 {
        match self {
            StateSpec::Coherent(comps) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in comps {
                    for b in comps {
                        acc += a.weight.conj() * b.weight * ln_overlap(&a.amplitudes, &b.amplitudes).exp();
                    }
                }
                acc.re
            }
            StateSpec::Fock(c) => c.iter().map(|x| x.norm_sqr()).sum(),
            StateSpec::Mixture(parts) => parts.iter().map(|(p, s)| p * s.coherent_norm()).sum(),
        }
    }

    /// Permutes the modes of every coherent component.
    pub fn permute_modes(&self, perm: &[usize]) -> StateSpec {
        match self {
            StateSpec::Coherent(comps) => StateSpec::Coherent(
                comps
                    .iter()
                    .map(|c| CoherentComponent {
                        weight: c.weight,
                        amplitudes: perm.iter().map(|&i| c.amplitudes[i]).collect(),
                    })
                    .collect(),
            ),
            StateSpec::Fock(_) => self.clone(),
            StateSpec::Mixture(parts) => StateSpec::Mixture(
                parts.iter().map(|(p, s)| (*p, s.permute_modes(perm))).collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_cat_at_zero_is_vacuum() {
        let s = StateSpec::cat_real(0.0, Parity::Even).unwrap();
        assert_eq!(s, StateSpec::vacuum(1));
    }

    #[test]
    fn odd_cat_at_zero_is_rejected() {
        assert!(matches!(StateSpec::cat_real(0.0, Parity::Odd), Err(Error::Domain(_))));
    }

    #[test]
    fn odd_cat_weights() {
        let s = StateSpec::cat_real(1.0, Parity::Odd).unwrap();
        let expected = 1.0 / (2.0 * (1.0 - (-2.0f64).exp())).sqrt();
        match s {
            StateSpec::Coherent(c) => {
                assert_eq!(c.len(), 2);
                assert!((c[0].weight.re - expected).abs() < 1e-15);
                assert!((c[1].weight.re + expected).abs() < 1e-15);
            }
            _ => panic!("expected coherent superposition"),
        }
    }

    #[test]
    fn two_mode_even_cat_is_normalized() {
        let one = Complex64::new(1.0, 0.0);
        let s = StateSpec::cat(&[one, one], Parity::Even).unwrap();
        assert!((s.coherent_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_odd_cats_are_normalized() {
        for x in [1e-6, 1e-3, 0.1, 5.0] {
            let s = StateSpec::cat_real(x, Parity::Odd).unwrap();
            assert!((s.coherent_norm() - 1.0).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn unnormalized_inputs_are_rejected() {
        assert!(StateSpec::fock(vec![Complex64::new(0.5, 0.0)]).is_err());
        assert!(StateSpec::mixture(vec![(0.3, StateSpec::vacuum(1))]).is_err());
        let bad = CoherentComponent {
            weight: Complex64::new(2.0, 0.0),
            amplitudes: vec![Complex64::new(0.0, 0.0)],
        };
        assert!(StateSpec::superposition(vec![bad]).is_err());
    }
}
