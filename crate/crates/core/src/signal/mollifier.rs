use super::{Band, SpectralProfile};
use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// `ĥ(s) = c·exp(−1/(1−s²))` on `(−1, 1)`, normalized to unit integral.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    c: f64,
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(160).expect("nonzero")))
}

fn raw(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

impl Bump {
    pub fn new() -> Self {
        let mass = rule().integrate(-1.0, 0.0, raw) + rule().integrate(0.0, 1.0, raw);
        Bump { c: 1.0 / mass }
    }

    pub fn normalization(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.c * raw(s)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - s * s;
        self.eval(s) * (-2.0 * s / (d * d))
    }

    /// `H(s) = ∫_{−1}^{s} ĥ`, exactly 0 below −1 and 1 above 1.
    pub fn cdf(&self, s: f64) -> f64 {
        if s <= -1.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else if s > 0.0 {
            1.0 - self.cdf(-s)
        } else {
            self.c * rule().integrate(-1.0, s, raw)
        }
    }

    /// `sup |ĥ′|`, located by a dense scan refined with golden-section search.
    pub fn sup_derivative(&self) -> f64 {
        let f = |s: f64| self.derivative(s).abs();
        let n = 4000;
        let (mut best, mut arg) = (0.0, 0.0);
        for k in 1..n {
            let s = k as f64 / n as f64;
            if f(s) > best {
                best = f(s);
                arg = s;
            }
        }
        let (mut lo, mut hi) = (arg - 1.0 / n as f64, arg + 1.0 / n as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if f(m1) < f(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        f(0.5 * (lo + hi)).max(best)
    }
}

impl Default for Bump {
    fn default() -> Self {
        Bump::new()
    }
}

/// `ĝ_ε = ĥ_ε ∗ χ_{[−ω,ω]}` with `ĥ_ε(ξ) = ε⁻¹ĥ(ξ/ε)`.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    eps: f64,
    omega: f64,
    bump: Bump,
}

impl Mollifier {
    pub fn new(eps: f64, omega: f64) -> Result<Self> {
        if !(eps > 0.0 && omega > 0.0) {
            return Err(Error::domain(format!("mollifier needs ε = {eps} > 0 and ω = {omega} > 0")));
        }
        if eps >= omega {
            return Err(Error::domain(format!("mollifier needs ε = {eps} < ω = {omega}")));
        }
        Ok(Mollifier { eps, omega, bump: Bump::new() })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn bump(&self) -> &Bump {
        &self.bump
    }

    /// `ĝ_ε(ξ) = H((ξ+ω)/ε) − H((ξ−ω)/ε)`.
    pub fn eval(&self, xi: f64) -> f64 {
        self.bump.cdf((xi + self.omega) / self.eps) - self.bump.cdf((xi - self.omega) / self.eps)
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        (self.bump.eval((xi + self.omega) / self.eps) - self.bump.eval((xi - self.omega) / self.eps)) / self.eps
    }

    /// Samples on `ξ_j = xi0 + j·dxi`.
    pub fn profile(&self, xi0: f64, dxi: f64, n: usize) -> Result<SpectralProfile> {
        SpectralProfile::from_fn(xi0, dxi, n, |xi| Complex64::new(self.eval(xi), 0.0))
    }

    /// `‖ĝ_ε − χ_Ω‖₁` on the sample grid of `profile`.
    pub fn l1_error(&self, xi0: f64, dxi: f64, n: usize) -> f64 {
        let band = Band { lo: -self.omega, hi: self.omega };
        (0..n)
            .map(|j| {
                let xi = xi0 + j as f64 * dxi;
                (self.eval(xi) - band.indicator(xi)).abs()
            })
            .sum::<f64>()
            * dxi
    }

    /// The derivative bound `2 sup|ĥ′| / ε`.
    pub fn derivative_bound(&self) -> f64 {
        2.0 * self.bump.sup_derivative() / self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_a_probability_density() {
        let b = Bump::new();
        assert!((b.cdf(0.0) - 0.5).abs() < 1e-14);
        assert!((b.cdf(0.999999) - 1.0).abs() < 1e-12);
        // The derivative integrates the density back.
        let h = 1e-5;
        let fd = (b.cdf(0.3 + h) - b.cdf(0.3 - h)) / (2.0 * h);
        assert!((fd - b.eval(0.3)).abs() < 1e-8);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let b = Bump::new();
        for s in [-0.7, -0.2, 0.1, 0.55, 0.9] {
            let h = 1e-6;
            let fd = (b.eval(s + h) - b.eval(s - h)) / (2.0 * h);
            assert!((fd - b.derivative(s)).abs() < 1e-6, "s = {s}");
        }
    }

    #[test]
    fn epsilon_must_be_smaller_than_omega() {
        assert!(matches!(Mollifier::new(0.5, 0.5), Err(Error::Domain(_))));
        assert!(Mollifier::new(0.1, 0.5).is_ok());
    }

    #[test]
    fn mollifier_is_even_with_values_in_unit_interval() {
        let m = Mollifier::new(0.1, 0.5).unwrap();
        for k in 0..200 {
            let xi = -1.0 + k as f64 * 0.01;
            let v = m.eval(xi);
            assert!((0.0..=1.0).contains(&v));
            assert!((v - m.eval(-xi)).abs() < 1e-14);
        }
        assert!((m.eval(0.5) - 0.5).abs() < 1e-14);
    }
}
