//! Normally ordered functions of the photon number.
//!
//! A [`NoExpr`] is a finite sum `Σ c · :Γ^p e^{-d Γ}:` with the affine
//! response `Γ = rate · n + offset`. Under normal ordering these behave like
//! ordinary functions of a scalar, so sums and products are computed on the
//! scalar level and only evaluated against a state at the very end.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Affine detector response `Γ = rate · n + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    pub rate: f64,
    /// Dark-count contribution per bin.
    pub offset: f64,
}

impl Response {
    pub const IDEAL: Response = Response {
        rate: 1.0,
        offset: 0.0,
    };

    pub fn new(rate: f64, offset: f64) -> Self {
        assert!(
            rate >= 0.0 && offset >= 0.0 && rate.is_finite() && offset.is_finite(),
            "response needs finite rate >= 0 and offset >= 0"
        );
        Response { rate, offset }
    }

    pub fn lossy(eta: f64) -> Self {
        Response::new(eta, 0.0)
    }

    pub fn at(&self, x: Complex64) -> Complex64 {
        x * self.rate + self.offset
    }
}

/// One summand `coeff · :Γ^power · e^{-decay·Γ}:`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: u32,
    pub decay: f64,
}

impl Term {
    fn key_cmp(&self, other: &Term) -> Ordering {
        self.power
            .cmp(&other.power)
            .then(self.decay.total_cmp(&other.decay))
    }
}

/// Single-bin POVM factor of a detector kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PovmFactor {
    /// `Γ^j/j! e^{-Γ}`.
    Level(u32),
    /// `1 − Σ_{j<K} Γ^j/j! e^{-Γ}`; `Tail(1)` is the click element `1 − e^{-Γ}`.
    Tail(u32),
}

impl PovmFactor {
    /// `ln f(z)`, or `None` where `f(z) = 0`.
    fn ln_at(self, z: Complex64) -> Option<Complex64> {
        match self {
            PovmFactor::Level(0) => Some(-z),
            PovmFactor::Level(j) => {
                if z == Complex64::new(0.0, 0.0) {
                    None
                } else {
                    Some(z.ln() * j as f64 - ln_factorial(j) - z)
                }
            }
            PovmFactor::Tail(k) => {
                let t = tail(k, z);
                (t != Complex64::new(0.0, 0.0)).then(|| t.ln())
            }
        }
    }
}

fn ln_factorial(j: u32) -> f64 {
    (2..=j).map(|i| (i as f64).ln()).sum()
}

/// `e^z − 1` without cancellation for small `|z|`.
fn expm1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// `1 − e^{-z} Σ_{j<k} z^j/j!`, summed as `e^{-z} Σ_{j≥k} z^j/j!` for small `|z|`.
fn tail(k: u32, z: Complex64) -> Complex64 {
    if k == 1 {
        return -expm1(-z);
    }
    let r = z.norm();
    if r <= 2.0 * (k as f64 + 1.0) {
        let mut term = Complex64::new(1.0, 0.0);
        for j in 1..=k {
            term = term * z / j as f64;
        }
        let mut sum = term;
        let mut j = k;
        loop {
            j += 1;
            term = term * z / j as f64;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() && j as f64 > r {
                break;
            }
        }
        sum * (-z).exp()
    } else {
        let mut term = Complex64::new(1.0, 0.0);
        let mut head = term;
        for j in 1..k {
            term = term * z / j as f64;
            head += term;
        }
        Complex64::new(1.0, 0.0) - (-z).exp() * head
    }
}

/// A kernel known as `coeff · Π f_i(Γ)^{e_i}`, evaluated directly at
/// coherent arguments to avoid the cancellation of the expanded sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Factored {
    pub coeff: f64,
    pub factors: Vec<(PovmFactor, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoExpr {
    terms: Vec<Term>,
    response: Response,
    factored: Option<Factored>,
}

impl NoExpr {
    pub fn zero(response: Response) -> Self {
        NoExpr {
            terms: Vec::new(),
            response,
            factored: None,
        }
    }

    pub fn one(response: Response) -> Self {
        NoExpr::constant(1.0, response)
    }

    pub fn constant(c: f64, response: Response) -> Self {
        NoExpr::from_terms(
            vec![Term {
                coeff: c,
                power: 0,
                decay: 0.0,
            }],
            response,
        )
    }

    /// `coeff · :Γ^power e^{-decay Γ}:`
    pub fn monomial(coeff: f64, power: u32, decay: f64, response: Response) -> Self {
        NoExpr::from_terms(
            vec![Term {
                coeff,
                power,
                decay,
            }],
            response,
        )
    }

    pub fn from_terms(terms: Vec<Term>, response: Response) -> Self {
        assert!(
            terms.iter().all(|t| t.coeff.is_finite() && t.decay.is_finite()),
            "NoExpr terms must be finite"
        );
        let mut e = NoExpr {
            terms,
            response,
            factored: None,
        };
        e.canonicalize();
        e
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn response(&self) -> Response {
        self.response
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same function with a different response.
    pub fn with_response(&self, response: Response) -> NoExpr {
        NoExpr {
            terms: self.terms.clone(),
            response,
            factored: self.factored.clone(),
        }
    }

    /// Attaches the product form `factored`, which must describe the same
    /// function as the expanded terms.
    pub fn with_factored(mut self, factored: Factored) -> NoExpr {
        self.factored = Some(factored);
        self
    }

    pub fn factored(&self) -> Option<&Factored> {
        self.factored.as_ref()
    }

    /// Sorts by (power, decay), merges equal keys and drops exact zeros.
    fn canonicalize(&mut self) {
        self.terms.sort_by(Term::key_cmp);
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.key_cmp(&t) == Ordering::Equal => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    pub fn scale(&self, s: f64) -> NoExpr {
        let mut out = NoExpr::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * s,
                    ..*t
                })
                .collect(),
            self.response,
        );
        if s != 0.0 {
            out.factored = self.factored.as_ref().map(|f| Factored {
                coeff: f.coeff * s,
                factors: f.factors.clone(),
            });
        }
        out
    }

    pub fn pow(&self, n: u32) -> NoExpr {
        let mut acc = NoExpr::one(self.response);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Pointwise value `h(x)` at a complex photon-number argument.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let g = self.response.at(x);
        self.terms
            .iter()
            .map(|t| t.coeff * g.powu(t.power) * (-t.decay * g).exp())
            .sum()
    }

    /// Evaluates `h(x)` split as `e^{shift} · rest` so that large
    /// exponentials can be recombined with other factors before exponentiation.
    /// Returns `(shift, rest, magnitude)` where `magnitude` bounds `|rest|` by
    /// the sum of absolute term values.
    pub(crate) fn eval_scaled(&self, x: Complex64) -> (f64, Complex64, f64) {
        let g = self.response.at(x);
        if let Some(f) = &self.factored {
            return eval_factored(f, g);
        }
        if self.terms.is_empty() {
            return (0.0, Complex64::new(0.0, 0.0), 0.0);
        }
        let shift = self
            .terms
            .iter()
            .map(|t| -t.decay * g.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut rest = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for t in &self.terms {
            let v = t.coeff * g.powu(t.power) * (-t.decay * g - shift).exp();
            magnitude += v.norm();
            rest += v;
        }
        (shift, rest, magnitude)
    }

    /// Diagonal Fock element `⟨n| :h(n̂): |n⟩`, from
    /// `⟨n|:n̂^j e^{-s n̂}:|n⟩ = n!/(n-j)! (1-s)^{n-j}` after expanding the
    /// offset binomially.
    pub fn fock_diagonal(&self, n: u32) -> f64 {
        let Response { rate, offset } = self.response;
        self.terms
            .iter()
            .map(|t| {
                let s = t.decay * rate;
                let mut inner = 0.0;
                let mut choose = 1.0;
                let mut falling = 1.0;
                for j in 0..=t.power.min(n) {
                    if j > 0 {
                        choose = choose * (t.power - j + 1) as f64 / j as f64;
                        falling *= (n - j + 1) as f64;
                    }
                    inner += choose
                        * offset.powi((t.power - j) as i32)
                        * rate.powi(j as i32)
                        * falling
                        * (1.0 - s).powi((n - j) as i32);
                }
                t.coeff * (-t.decay * offset).exp() * inner
            })
            .sum()
    }
}

fn eval_factored(f: &Factored, g: Complex64) -> (f64, Complex64, f64) {
    let zero = (0.0, Complex64::new(0.0, 0.0), 0.0);
    if f.coeff == 0.0 {
        return zero;
    }
    let mut log = Complex64::new(f.coeff.abs().ln(), 0.0);
    for &(factor, e) in &f.factors {
        if e == 0 {
            continue;
        }
        match factor.ln_at(g) {
            Some(l) => log += l * e as f64,
            None => return zero,
        }
    }
    let rest = Complex64::from_polar(f.coeff.signum(), log.im);
    (log.re, rest, 1.0)
}

fn assert_same_response(a: &NoExpr, b: &NoExpr) {
    assert!(
        a.response == b.response,
        "NoExpr operands use different responses: {:?} vs {:?}",
        a.response,
        b.response
    );
}

impl Add for &NoExpr {
    type Output = NoExpr;
    fn add(self, rhs: &NoExpr) -> NoExpr {
        assert_same_response(self, rhs);
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        NoExpr::from_terms(terms, self.response)
    }
}

impl Sub for &NoExpr {
    type Output = NoExpr;
    fn sub(self, rhs: &NoExpr) -> NoExpr {
        self + &(-rhs)
    }
}

impl Neg for &NoExpr {
    type Output = NoExpr;
    fn neg(self) -> NoExpr {
        self.scale(-1.0)
    }
}

impl Mul for &NoExpr {
    type Output = NoExpr;
    fn mul(self, rhs: &NoExpr) -> NoExpr {
        assert_same_response(self, rhs);
        let terms = self
            .terms
            .iter()
            .flat_map(|a| {
                rhs.terms.iter().map(move |b| Term {
                    coeff: a.coeff * b.coeff,
                    power: a.power + b.power,
                    decay: a.decay + b.decay,
                })
            })
            .collect();
        NoExpr::from_terms(terms, self.response)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NoExpr {
            type Output = NoExpr;
            fn $m(self, rhs: NoExpr) -> NoExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Response {
        Response::new(0.5, 0.0)
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let e = NoExpr::from_terms(
            vec![
                Term { coeff: 2.0, power: 1, decay: 1.0 },
                Term { coeff: -1.0, power: 3, decay: 0.0 },
            ],
            r(),
        );
        assert_eq!(&e * &NoExpr::one(r()), e);
        assert_eq!(&NoExpr::one(r()) * &e, e);
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let a = NoExpr::monomial(1.5, 2, 1.0, r());
        let b = NoExpr::monomial(-1.5, 2, 1.0, r());
        assert!((&a + &b).is_zero());
        assert_eq!((&a + &a).terms().len(), 1);
    }

    #[test]
    fn product_adds_powers_and_decays() {
        let a = NoExpr::monomial(2.0, 1, 0.5, r());
        let b = NoExpr::monomial(3.0, 2, 1.0, r());
        let p = &a * &b;
        assert_eq!(p.terms(), &[Term { coeff: 6.0, power: 3, decay: 1.5 }]);
    }

    #[test]
    fn fock_diagonal_closed_form() {
        let ideal = Response::IDEAL;
        // :e^{-n}: on |1> gives (1-1)^1 = 0
        assert_eq!(NoExpr::monomial(1.0, 0, 1.0, ideal).fock_diagonal(1), 0.0);
        // :n e^{-n}: on |1> gives 1!/0! (1-1)^0 = 1
        assert_eq!(NoExpr::monomial(1.0, 1, 1.0, ideal).fock_diagonal(1), 1.0);
        // :n^2: on |3> gives 3*2
        assert_eq!(NoExpr::monomial(1.0, 2, 0.0, ideal).fock_diagonal(3), 6.0);
    }

    #[test]
    fn factored_form_matches_expansion() {
        let resp = Response::new(0.3, 0.02);
        let click = &NoExpr::one(resp) - &NoExpr::monomial(1.0, 0, 1.0, resp);
        let level1 = NoExpr::monomial(1.0, 1, 1.0, resp);
        let tail2 = &(&NoExpr::one(resp) - &NoExpr::monomial(1.0, 0, 1.0, resp)) - &level1;
        let expanded = &(&click.pow(2) * &level1) * &tail2.pow(3);
        let factored = expanded.clone().with_factored(Factored {
            coeff: 1.0,
            factors: vec![
                (PovmFactor::Tail(1), 2),
                (PovmFactor::Level(1), 1),
                (PovmFactor::Tail(2), 3),
            ],
        });
        for x in [
            Complex64::new(4.0, 0.5),
            Complex64::new(-3.0, 1.0),
            Complex64::new(25.0, -4.0),
        ] {
            let (s1, r1, _) = expanded.eval_scaled(x);
            let (s2, r2, _) = factored.eval_scaled(x);
            let (a, b) = (r1 * s1.exp(), r2 * s2.exp());
            assert!((a - b).norm() < 1e-11 * a.norm().max(1e-300), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_is_accurate_for_small_arguments() {
        let z = Complex64::new(1e-6, 0.0);
        let t = tail(2, z);
        let exact = 4.999_996_666_667_917e-13;
        assert!((t.re - exact).abs() < 1e-14 * exact);
        assert!((tail(1, z).re - (-(-1e-6f64).exp_m1())).abs() < 1e-22);
    }

    #[test]
    fn eval_scaled_matches_eval() {
        let e = NoExpr::from_terms(
            vec![
                Term { coeff: 1.0, power: 2, decay: 3.0 },
                Term { coeff: -0.5, power: 0, decay: 1.0 },
            ],
            Response::new(0.7, 0.1),
        );
        let x = Complex64::new(-2.0, 0.3);
        let (shift, rest, _) = e.eval_scaled(x);
        let direct = e.eval(x);
        assert!((rest * shift.exp() - direct).norm() < 1e-12 * direct.norm());
    }
}
