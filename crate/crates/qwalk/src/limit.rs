//! Weak-limit density of X_n / n, its moments and CDF, and the Jacobi
//! polynomial identities behind the closed-form moments.

use crate::coin::{QubitState, UnitaryCoin, WalkType};
use crate::error::{Error, Result};
use crate::pathsum::theta;
use crate::scalar::Scalar;

/// The limiting density of X_n / n: an arcsine-like law on (-|a|, |a|) times
/// the linear factor (1 - skew * x).
#[derive(Clone, Copy, Debug)]
pub struct LimitDensity<F: Scalar> {
    mod_a: F,
    skew: F,
    walk_type: WalkType,
}

impl<F: Scalar> LimitDensity<F> {
    /// skew = |alpha|^2 - |beta|^2 + Theta_j / |a|^2.
    pub fn new(coin: &UnitaryCoin<F>, wt: WalkType, state: &QubitState<F>) -> Result<Self> {
        if !coin.abcd_nonzero() {
            return Err(Error::CoinHasZeroEntry);
        }
        let a2 = coin.a().norm_sqr();
        let skew = state.alpha().norm_sqr() - state.beta().norm_sqr()
            + theta(coin, wt, state) / a2;
        Ok(LimitDensity {
            mod_a: a2.sqrt(),
            skew,
            walk_type: wt,
        })
    }

    pub fn mod_a(&self) -> F {
        self.mod_a
    }

    pub fn skew(&self) -> F {
        self.skew
    }

    pub fn walk_type(&self) -> WalkType {
        self.walk_type
    }

    /// Density value; 0 on and outside the support boundary.
    pub fn density(&self, x: F) -> F {
        let a = self.mod_a;
        if x.abs() >= a {
            return F::zero();
        }
        let root = (F::one() - a * a).sqrt();
        root / (F::PI() * (F::one() - x * x) * (a * a - x * x).sqrt())
            * (F::one() - self.skew * x)
    }

    /// E(Z) = -skew * (1 - sqrt(1 - |a|^2)).
    pub fn mean(&self) -> F {
        -self.skew * self.second_moment()
    }

    /// E(Z^2) = 1 - sqrt(1 - |a|^2).
    pub fn second_moment(&self) -> F {
        F::one() - (F::one() - self.mod_a * self.mod_a).sqrt()
    }

    pub fn sd(&self) -> F {
        let m = self.mean();
        (self.second_moment() - m * m).sqrt()
    }

    /// Integral of the density over [lo, hi] intersected with the support.
    ///
    /// Substituting x = |a| sin t removes the endpoint singularities; the
    /// transformed integrand is smooth, so composite Simpson converges fast.
    pub fn cdf_interval(&self, lo: F, hi: F) -> F {
        let a = self.mod_a;
        let lo = lo.max(-a);
        let hi = hi.min(a);
        if hi <= lo {
            return F::zero();
        }
        let t0 = (lo / a).asin();
        let t1 = (hi / a).asin();
        let root = (F::one() - a * a).sqrt();
        let g = |t: F| {
            let s = a * t.sin();
            root * (F::one() - self.skew * s) / (F::PI() * (F::one() - s * s))
        };
        simpson(g, t0, t1, 4096)
    }
}

/// Composite Simpson rule with `panels` panels (panels must be even).
pub(crate) fn simpson<F: Scalar>(f: impl Fn(F) -> F, lo: F, hi: F, panels: usize) -> F {
    debug_assert!(panels % 2 == 0);
    let h = (hi - lo) / F::of_usize(panels);
    let mut acc = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { F::lit(4.0) } else { F::lit(2.0) };
        acc = acc + w * f(lo + h * F::of_usize(i));
    }
    acc * h / F::lit(3.0)
}

/// Arguments of a Jacobi polynomial evaluation P_degree^{nu,mu}(x).
#[derive(Clone, Copy, Debug)]
pub struct JacobiParams<F: Scalar> {
    pub nu: F,
    pub mu: F,
    pub degree: usize,
    pub x: F,
}

/// P_n^{nu,mu}(x) by the terminating hypergeometric series. The gamma-ratio
/// prefactor and the term coefficients are built by incremental updates, so
/// no free-standing gamma evaluation is needed.
pub fn jacobi<F: Scalar>(p: &JacobiParams<F>) -> F {
    let n = p.degree;
    let mut pref = F::one();
    for i in 1..=n {
        pref = pref * (p.nu + F::of_usize(i)) / F::of_usize(i);
    }
    let z = (F::one() - p.x) / F::lit(2.0);
    let nf = F::of_usize(n);
    let mut term = F::one();
    let mut sum = F::one();
    for j in 0..n {
        let jf = F::of_usize(j);
        term = term * (-nf + jf) * (nf + p.nu + p.mu + F::one() + jf)
            / ((p.nu + F::one() + jf) * (jf + F::one()))
            * z;
        sum = sum + term;
    }
    pref * sum
}

/// Residual of the pair of binomial-sum identities
///
///   sum_g r^(g-1) / g * C(k-1,g-1) C(n-k-1,g-1) = 1/k |a|^(-2(k-1)) P_{k-1}^{1,n-2k}(2|a|^2-1)
///   sum_g r^(g-1)     * C(k-1,g-1) C(n-k-1,g-1) =     |a|^(-2(k-1)) P_{k-1}^{0,n-2k}(2|a|^2-1)
///
/// with r = -|b|^2/|a|^2. Both sides grow combinatorially (past 1e8 for
/// k = 8, n = 40 with small |a|), so the returned residual is relative:
/// |lhs - rhs| / (1 + |lhs|), the larger of the two.
pub fn jacobi_identity_residual<F: Scalar>(k: usize, n: usize, coin: &UnitaryCoin<F>) -> Result<F> {
    if !coin.abcd_nonzero() {
        return Err(Error::CoinHasZeroEntry);
    }
    if k == 0 || n < 2 * k {
        return Err(Error::OutOfRange("identity needs 1 <= k and n >= 2k"));
    }
    let a2 = coin.a().norm_sqr();
    let ratio = -coin.b().norm_sqr() / a2;
    let mut lhs_weighted = F::zero();
    let mut lhs_plain = F::zero();
    let mut pow = F::one();
    let mut binom_k = F::one(); // C(k-1, g-1)
    let mut binom_nk = F::one(); // C(n-k-1, g-1)
    for g in 1..=k {
        if g > 1 {
            let j = F::of_usize(g - 1);
            binom_k = binom_k * F::of_usize(k - g + 1) / j;
            binom_nk = binom_nk * F::of_usize(n - k - g + 1) / j;
            pow = pow * ratio;
        }
        let term = pow * binom_k * binom_nk;
        lhs_plain = lhs_plain + term;
        lhs_weighted = lhs_weighted + term / F::of_usize(g);
    }
    let x = F::lit(2.0) * a2 - F::one();
    let mu = F::of_usize(n) - F::lit(2.0) * F::of_usize(k);
    let scale = a2.powi(-(k as i32 - 1));
    let rhs_weighted = scale / F::of_usize(k)
        * jacobi(&JacobiParams { nu: F::one(), mu, degree: k - 1, x });
    let rhs_plain = scale * jacobi(&JacobiParams { nu: F::zero(), mu, degree: k - 1, x });
    let rel_w = (lhs_weighted - rhs_weighted).abs() / (F::one() + lhs_weighted.abs());
    let rel_p = (lhs_plain - rhs_plain).abs() / (F::one() + lhs_plain.abs());
    Ok(rel_w.max(rel_p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard_density(state: QubitState<f64>) -> LimitDensity<f64> {
        LimitDensity::new(&UnitaryCoin::hadamard(), WalkType::A, &state).unwrap()
    }

    #[test]
    fn skew_examples() {
        assert!(hadamard_density(QubitState::symmetric()).skew().abs() < 1e-14);
        assert!((hadamard_density(QubitState::right()).skew() + 1.0).abs() < 1e-14);
        assert!((hadamard_density(QubitState::left()).skew() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_values() {
        let sym = hadamard_density(QubitState::symmetric());
        assert!((sym.density(0.0) - std::f64::consts::FRAC_1_PI).abs() < 1e-14);
        assert_eq!(sym.density(0.8), 0.0);
        assert_eq!(sym.density(-std::f64::consts::FRAC_1_SQRT_2), 0.0);
        let r = hadamard_density(QubitState::right());
        assert!((r.density(0.5) - 1.5 * sym.density(0.5)).abs() < 1e-13);
        // mirror pair: left state density at -x equals right state density at x
        let l = hadamard_density(QubitState::left());
        for x in [-0.6, -0.2, 0.1, 0.45] {
            assert!((l.density(-x) - r.density(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn moment_constants() {
        let sym = hadamard_density(QubitState::symmetric());
        assert!(sym.mean().abs() < 1e-14);
        assert!((sym.second_moment() - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-15);
        assert!((sym.sd() - 0.5411961).abs() < 1e-7);
        let r = hadamard_density(QubitState::right());
        assert!((r.mean() - 0.2928932).abs() < 1e-7);
        assert!((r.sd() - 0.4550899).abs() < 1e-7);
    }

    #[test]
    fn cdf_normalization_and_halves() {
        let sym = hadamard_density(QubitState::symmetric());
        assert!((sym.cdf_interval(-1.0, 1.0) - 1.0).abs() < 1e-8);
        assert!((sym.cdf_interval(0.0, 1.0) - 0.5).abs() < 1e-8);
        let r = hadamard_density(QubitState::right());
        let neg = r.cdf_interval(-1.0, 0.0);
        let pos = r.cdf_interval(0.0, 1.0);
        assert!((neg + pos - 1.0).abs() < 2e-8);
        assert_eq!(r.cdf_interval(0.9, 1.0), 0.0);
    }

    #[test]
    fn cdf_matches_numeric_moments() {
        let d = LimitDensity::new(
            &UnitaryCoin::gudder(0.8).unwrap(),
            WalkType::G,
            &QubitState::right(),
        )
        .unwrap();
        let a = d.mod_a();
        let m1 = simpson(|t: f64| {
            let s = a * t.sin();
            s * (1.0 - a * a).sqrt() * (1.0 - d.skew() * s)
                / (std::f64::consts::PI * (1.0 - s * s))
        }, -std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 4096);
        assert!((m1 - d.mean()).abs() < 1e-8);
        let m2 = simpson(|t: f64| {
            let s = a * t.sin();
            s * s * (1.0 - a * a).sqrt() * (1.0 - d.skew() * s)
                / (std::f64::consts::PI * (1.0 - s * s))
        }, -std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 4096);
        assert!((m2 - d.second_moment()).abs() < 1e-8);
    }

    #[test]
    fn jacobi_small_degrees() {
        for (nu, mu, x) in [(0.0, 0.0, 0.3), (1.0, 3.0, -0.7), (2.5, 0.5, 0.9)] {
            let p = JacobiParams { nu, mu, degree: 0, x };
            assert_eq!(jacobi(&p), 1.0);
        }
        for x in [-0.9, -0.3, 0.0, 0.5, 1.0] {
            let p: JacobiParams<f64> = JacobiParams { nu: 0.0, mu: 0.0, degree: 1, x };
            assert!((jacobi(&p) - x).abs() < 1e-15);
        }
    }

    // three-term recurrence, independent of the series form
    fn jacobi_recurrence(n: usize, nu: f64, mu: f64, x: f64) -> f64 {
        let mut prev = 1.0;
        if n == 0 {
            return prev;
        }
        let mut cur = (nu + 1.0) + (nu + mu + 2.0) * (x - 1.0) / 2.0;
        for m in 2..=n {
            let mf = m as f64;
            let c = 2.0 * mf + nu + mu;
            let next = ((c - 1.0) * ((c * (c - 2.0)) * x + nu * nu - mu * mu) * cur
                - 2.0 * (mf + nu - 1.0) * (mf + mu - 1.0) * c * prev)
                / (2.0 * mf * (mf + nu + mu) * (c - 2.0));
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn jacobi_matches_recurrence() {
        for degree in 0..=10usize {
            for (nu, mu) in [(0.0, 0.0), (1.0, 3.0), (0.0, 7.0), (2.5, 0.5)] {
                for x in [-0.8, -0.1, 0.0, 0.5, 0.95] {
                    let series = jacobi(&JacobiParams { nu, mu, degree, x });
                    let rec = jacobi_recurrence(degree, nu, mu, x);
                    assert!(
                        (series - rec).abs() < 1e-8 * (1.0 + rec.abs()),
                        "degree={degree} nu={nu} mu={mu} x={x}: {series} vs {rec}"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_residuals() {
        let hadamard = UnitaryCoin::hadamard();
        for n in 2..=12usize {
            assert_eq!(jacobi_identity_residual(1, n, &hadamard).unwrap(), 0.0);
        }
        assert!(jacobi_identity_residual(2, 5, &hadamard).unwrap() < 1e-12);
        let rho = UnitaryCoin::h_rho(0.3).unwrap();
        assert!(jacobi_identity_residual(4, 11, &rho).unwrap() < 1e-10);
        for coin in [hadamard, rho, UnitaryCoin::gudder(0.9).unwrap()] {
            for k in 1..=8usize {
                for n in (2 * k)..=40 {
                    assert!(jacobi_identity_residual(k, n, &coin).unwrap() < 1e-9);
                }
            }
        }
    }
}
