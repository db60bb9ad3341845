//! Combinatorial path sums, their closed forms, closed-form moments and the
//! symmetry classification.

use num_complex::Complex;

use crate::coin::{expand, BasisCombo, PqrsBasis, QubitState, UnitaryCoin, WalkType};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::scalar::Scalar;

/// Number of P-steps (l) and Q-steps (m) of a path family; after n = l + m
/// steps the walker sits at site k = m - l.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathSplit {
    pub l: usize,
    pub m: usize,
}

impl PathSplit {
    pub fn n(&self) -> usize {
        self.l + self.m
    }

    pub fn site(&self) -> i64 {
        self.m as i64 - self.l as i64
    }

    /// The split reaching site k after n steps, if the parity admits one.
    pub fn for_site(n: usize, site: i64) -> Option<PathSplit> {
        let n_i = n as i64;
        if site < -n_i || site > n_i || (n_i + site) % 2 != 0 {
            return None;
        }
        Some(PathSplit {
            l: ((n_i - site) / 2) as usize,
            m: ((n_i + site) / 2) as usize,
        })
    }
}

/// Enumeration cap for the brute-force path sum.
pub const N_BRUTE: usize = 14;

/// Sum of all orderings of l P-factors and m Q-factors, expanded in the
/// basis. The factor for the first step sits rightmost in each product; the
/// sum itself is invariant under that choice since reversal permutes the
/// orderings.
pub fn xi_bruteforce<F: Scalar>(split: PathSplit, basis: &PqrsBasis<F>) -> Result<BasisCombo<F>> {
    let n = split.n();
    if n > N_BRUTE {
        return Err(Error::TooLarge { n, cap: N_BRUTE });
    }
    if n == 0 {
        return Ok(expand(&Mat2::identity(), basis));
    }
    let mut sum = Mat2::zero();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != split.m {
            continue;
        }
        // bit i set => step i+1 is a Q-step; earliest step is rightmost
        let mut prod = Mat2::identity();
        for i in 0..n {
            let factor = if mask >> i & 1 == 1 { basis.q() } else { basis.p() };
            prod = factor.mul(&prod);
        }
        sum = sum.add(&prod);
    }
    Ok(expand(&sum, basis))
}

/// Closed form of the path sum: the binomial sum for min(l, m) >= 1 (needs
/// abcd != 0), a^(l-1) P for m = 0, d^(m-1) Q for l = 0.
pub fn xi_closed_form<F: Scalar>(split: PathSplit, basis: &PqrsBasis<F>) -> Result<BasisCombo<F>> {
    let coin = basis.coin();
    let zero = Complex::new(F::zero(), F::zero());
    let (l, m) = (split.l, split.m);
    if l == 0 && m == 0 {
        return Ok(expand(&Mat2::identity(), basis));
    }
    if m == 0 {
        return Ok(BasisCombo {
            p: crate::coin::entry_pow(coin.a(), l - 1),
            q: zero,
            r: zero,
            s: zero,
            basis_type: basis.walk_type(),
        });
    }
    if l == 0 {
        return Ok(BasisCombo {
            p: zero,
            q: crate::coin::entry_pow(coin.d(), m - 1),
            r: zero,
            s: zero,
            basis_type: basis.walk_type(),
        });
    }
    if !coin.abcd_nonzero() {
        return Err(Error::CoinHasZeroEntry);
    }
    let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
    let base = -b.norm_sqr() / a.norm_sqr();
    let mut p = zero;
    let mut q = zero;
    let mut r = zero;
    let mut s = zero;
    let mut weight = F::one();
    let mut binom_l = F::one(); // C(l-1, gamma-1)
    let mut binom_m = F::one(); // C(m-1, gamma-1)
    for gamma in 1..=l.min(m) {
        weight = weight * base;
        if gamma > 1 {
            let g = F::of_usize(gamma - 1);
            binom_l = binom_l * F::of_usize(l - gamma + 1) / g;
            binom_m = binom_m * F::of_usize(m - gamma + 1) / g;
        }
        let w = weight * binom_l * binom_m;
        let g = F::of_usize(gamma);
        p = p + a.inv().scale(F::of_usize(l - gamma) / g).scale(w);
        q = q + d.inv().scale(F::of_usize(m - gamma) / g).scale(w);
        r = r + c.inv().scale(w);
        s = s + b.inv().scale(w);
    }
    let pref = crate::coin::entry_pow(a, l) * crate::coin::entry_pow(d, m);
    Ok(BasisCombo {
        p: p * pref,
        q: q * pref,
        r: r * pref,
        s: s * pref,
        basis_type: basis.walk_type(),
    })
}

/// P(X_n = k) as the squared norm of Xi(l, m) applied to the state; uses the
/// closed form when available and falls back to brute force otherwise.
pub fn prob_at<F: Scalar>(
    split: PathSplit,
    state: &QubitState<F>,
    basis: &PqrsBasis<F>,
) -> Result<F> {
    let combo = if basis.coin().abcd_nonzero() {
        xi_closed_form(split, basis)?
    } else {
        xi_bruteforce(split, basis)?
    };
    let v = combo.recombine(basis).apply(state.vector());
    Ok(v[0].norm_sqr() + v[1].norm_sqr())
}

/// Theta_A = 2 Re(a alpha conj(b beta)); Theta_G = 2 Re(a beta conj(c alpha)).
pub fn theta<F: Scalar>(coin: &UnitaryCoin<F>, wt: WalkType, state: &QubitState<F>) -> F {
    let (alpha, beta) = (state.alpha(), state.beta());
    let two = F::lit(2.0);
    match wt {
        WalkType::A => two * (coin.a() * alpha * (coin.b() * beta).conj()).re,
        WalkType::G => two * (coin.a() * beta * (coin.c() * alpha).conj()).re,
    }
}

/// Gamma_A = (|a|^2 - |b|^2)(|alpha|^2 - |beta|^2) + 2 Theta_A;
/// Gamma_G = |alpha|^2 - |beta|^2.
pub fn gamma<F: Scalar>(coin: &UnitaryCoin<F>, wt: WalkType, state: &QubitState<F>) -> F {
    let pop = state.alpha().norm_sqr() - state.beta().norm_sqr();
    match wt {
        WalkType::A => {
            (coin.a().norm_sqr() - coin.b().norm_sqr()) * pop
                + F::lit(2.0) * theta(coin, wt, state)
        }
        WalkType::G => pop,
    }
}

/// Precomputed constants feeding the closed-form moments.
#[derive(Clone, Copy, Debug)]
pub struct MomentContext<F: Scalar> {
    pub gamma_j: F,
    pub theta_j: F,
    pub walk_type: WalkType,
    pub coin: UnitaryCoin<F>,
    pub state: QubitState<F>,
}

impl<F: Scalar> MomentContext<F> {
    pub fn new(coin: &UnitaryCoin<F>, wt: WalkType, state: &QubitState<F>) -> Result<Self> {
        if !coin.abcd_nonzero() {
            return Err(Error::CoinHasZeroEntry);
        }
        Ok(MomentContext {
            gamma_j: gamma(coin, wt, state),
            theta_j: theta(coin, wt, state),
            walk_type: wt,
            coin: *coin,
            state: *state,
        })
    }
}

// Row of log-binomials ln C(mm, j) for j = 0..=mm.
fn ln_binom_row<F: Scalar>(mm: usize) -> Vec<F> {
    let mut row = Vec::with_capacity(mm + 1);
    let mut acc = F::zero();
    row.push(acc);
    for j in 1..=mm {
        acc = acc + (F::of_usize(mm - j + 1) / F::of_usize(j)).ln();
        row.push(acc);
    }
    row
}

/// The m-th moment of X_n from the closed-form double/triple sums. Binomial
/// products are combined with the |a|^(2(n-1)) prefactor in log magnitude so
/// intermediate factors stay representable.
pub fn moment_closed_form<F: Scalar>(ctx: &MomentContext<F>, n: usize, m: u32) -> Result<F> {
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange("moment needs n >= 1 and m >= 1"));
    }
    let coin = &ctx.coin;
    let a2 = coin.a().norm_sqr();
    let b2 = coin.b().norm_sqr();
    let pop = ctx.state.alpha().norm_sqr() - ctx.state.beta().norm_sqr();
    let ln_pref = F::of_usize(n - 1) * a2.ln();
    let ln_ratio = (b2 / a2).ln();
    let odd = m % 2 == 1;
    let nf = F::of_usize(n);
    let two = F::lit(2.0);

    let mut acc = F::zero();
    let half = (n - 1) / 2;
    for k in 1..=half {
        let row_k = ln_binom_row::<F>(k - 1);
        let row_nk = ln_binom_row::<F>(n - k - 1);
        let gap = F::of_usize(n - 2 * k);
        let ln_gap_pow = F::lit(if odd { (m + 1) as f64 } else { m as f64 }) * gap.ln();
        for g in 1..=k {
            for dl in 1..=k {
                let sign = if (g + dl) % 2 == 0 { F::one() } else { -F::one() };
                let ln_mag = ln_pref
                    + F::of_usize(g + dl) * ln_ratio
                    + row_k[g - 1]
                    + row_k[dl - 1]
                    + row_nk[g - 1]
                    + row_nk[dl - 1]
                    + ln_gap_pow
                    - (F::of_usize(g) * F::of_usize(dl)).ln();
                let gd = F::of_usize(g + dl);
                let factor = if odd {
                    match ctx.walk_type {
                        WalkType::A => {
                            -(nf * (a2 - b2) + gd) * pop
                                + (gd / b2 - two * nf) * ctx.theta_j
                        }
                        WalkType::G => (gd - nf) * pop - gd / b2 * ctx.theta_j,
                    }
                } else {
                    let nk = F::of_usize(n - k);
                    let kf = F::of_usize(k);
                    nk * nk + kf * kf - nf * gd
                        + two * F::of_usize(g) * F::of_usize(dl) / b2
                };
                acc = acc + sign * ln_mag.exp() * factor;
            }
        }
    }

    let lead = (ln_pref + F::lit(m as f64) * nf.ln()).exp();
    if odd {
        acc = acc - lead * ctx.gamma_j;
    } else {
        acc = acc + lead;
    }
    Ok(acc)
}

/// Membership in Phi_perp: |alpha| = |beta| and Theta_j = 0, both within
/// EPS_UNIT. Equivalent to mirror-symmetric distributions and to zero means.
pub fn classify_symmetry<F: Scalar>(
    coin: &UnitaryCoin<F>,
    wt: WalkType,
    state: &QubitState<F>,
) -> Result<bool> {
    if !coin.abcd_nonzero() {
        return Err(Error::CoinHasZeroEntry);
    }
    let balanced = (state.alpha().norm() - state.beta().norm()).abs() <= F::EPS_UNIT;
    Ok(balanced && theta(coin, wt, state).abs() <= F::EPS_UNIT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{distribution, empirical_moment, evolve};

    fn hadamard_basis(wt: WalkType) -> PqrsBasis<f64> {
        PqrsBasis::new(&UnitaryCoin::hadamard(), wt)
    }

    fn abs_c(z: Complex<f64>, w: Complex<f64>) -> f64 {
        (z - w).norm()
    }

    #[test]
    fn brute_force_matches_paper_n4_examples() {
        // coefficients are coin polynomials; check on a generic complex coin
        let coin = UnitaryCoin::u_eta_phi_psi(0.3, -0.8, 0.55).unwrap();
        let basis = PqrsBasis::new(&coin, WalkType::A);
        let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());

        let x40 = xi_bruteforce(PathSplit { l: 4, m: 0 }, &basis).unwrap();
        assert!(abs_c(x40.p, a * a * a) < 1e-12);
        assert!(x40.q.norm() + x40.r.norm() + x40.s.norm() < 1e-12);

        let x31 = xi_bruteforce(PathSplit { l: 3, m: 1 }, &basis).unwrap();
        assert!(abs_c(x31.p, a * b * c * Complex::new(2.0, 0.0)) < 1e-12);
        assert!(x31.q.norm() < 1e-12);
        assert!(abs_c(x31.r, a * a * b) < 1e-12);
        assert!(abs_c(x31.s, a * a * c) < 1e-12);

        // the R and S coefficients carry two word contributions each
        let x22 = xi_bruteforce(PathSplit { l: 2, m: 2 }, &basis).unwrap();
        assert!(abs_c(x22.p, b * c * d) < 1e-12);
        assert!(abs_c(x22.q, a * b * c) < 1e-12);
        assert!(abs_c(x22.r, a * b * d + b * b * c) < 1e-12);
        assert!(abs_c(x22.s, b * c * c + a * c * d) < 1e-12);

        let x04 = xi_bruteforce(PathSplit { l: 0, m: 4 }, &basis).unwrap();
        assert!(abs_c(x04.q, d * d * d) < 1e-12);
        assert!(x04.p.norm() + x04.r.norm() + x04.s.norm() < 1e-12);
    }

    #[test]
    fn brute_force_cap() {
        let basis = hadamard_basis(WalkType::A);
        assert!(matches!(
            xi_bruteforce(PathSplit { l: 8, m: 7 }, &basis),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn closed_form_edge_rows() {
        let basis = hadamard_basis(WalkType::A);
        let a = basis.coin().a();
        for l in 1..6usize {
            let x = xi_closed_form(PathSplit { l, m: 0 }, &basis).unwrap();
            assert!(abs_c(x.p, crate::coin::entry_pow(a, l - 1)) < 1e-14);
            assert!(x.q.norm() + x.r.norm() + x.s.norm() < 1e-14);
        }
        let x = xi_closed_form(PathSplit { l: 0, m: 3 }, &basis).unwrap();
        let d = basis.coin().d();
        assert!(abs_c(x.q, d * d) < 1e-14);
    }

    #[test]
    fn closed_form_1_1_hadamard() {
        let basis = hadamard_basis(WalkType::A);
        let x = xi_closed_form(PathSplit { l: 1, m: 1 }, &basis).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(x.p.norm() < 1e-14);
        assert!(x.q.norm() < 1e-14);
        assert!(abs_c(x.r, Complex::new(h, 0.0)) < 1e-14);
        assert!(abs_c(x.s, Complex::new(h, 0.0)) < 1e-14);
    }

    #[test]
    fn closed_form_matches_brute_force_3_1() {
        let coin = UnitaryCoin::gudder(0.71).unwrap();
        for wt in [WalkType::A, WalkType::G] {
            let basis = PqrsBasis::new(&coin, wt);
            let split = PathSplit { l: 3, m: 1 };
            let brute = xi_bruteforce(split, &basis).unwrap();
            let closed = xi_closed_form(split, &basis).unwrap();
            assert!(closed.max_abs_diff(&brute) < 1e-13);
        }
    }

    #[test]
    fn closed_form_refuses_zero_entry_coin() {
        let id = UnitaryCoin::new(
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        )
        .unwrap();
        let basis = PqrsBasis::new(&id, WalkType::A);
        assert!(matches!(
            xi_closed_form(PathSplit { l: 2, m: 2 }, &basis),
            Err(Error::CoinHasZeroEntry)
        ));
    }

    #[test]
    fn prob_at_basic() {
        let basis = hadamard_basis(WalkType::A);
        let p = prob_at(PathSplit { l: 1, m: 0 }, &QubitState::right(), &basis).unwrap();
        assert!((p - 0.5).abs() < 1e-14);
        let p0 = prob_at(PathSplit { l: 0, m: 0 }, &QubitState::right(), &basis).unwrap();
        assert!((p0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn prob_at_matches_evolution_n2() {
        let coin: UnitaryCoin<f64> = UnitaryCoin::hadamard();
        let basis = PqrsBasis::new(&coin, WalkType::A);
        let state = QubitState::left();
        let dist = distribution(&evolve(&state, &coin, WalkType::A, 2)).unwrap();
        for site in [-2i64, 0, 2] {
            let split = PathSplit::for_site(2, site).unwrap();
            let p = prob_at(split, &state, &basis).unwrap();
            assert!((p - dist.prob(site)).abs() < 1e-13);
        }
    }

    #[test]
    fn moment_closed_form_small_cases() {
        let coin: UnitaryCoin<f64> = UnitaryCoin::hadamard();
        let ctx_g = MomentContext::new(&coin, WalkType::G, &QubitState::right()).unwrap();
        assert!((moment_closed_form(&ctx_g, 1, 1).unwrap() - 1.0).abs() < 1e-13);
        let ctx_a = MomentContext::new(&coin, WalkType::A, &QubitState::symmetric()).unwrap();
        assert!((moment_closed_form(&ctx_a, 2, 2).unwrap() - 2.0).abs() < 1e-13);
        for n in 1..=30 {
            assert!(moment_closed_form(&ctx_a, n, 1).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn moment_closed_form_vs_empirical_hadamard() {
        let coin: UnitaryCoin<f64> = UnitaryCoin::hadamard();
        for wt in [WalkType::A, WalkType::G] {
            for state in [QubitState::left(), QubitState::right(), QubitState::symmetric()] {
                let ctx = MomentContext::new(&coin, wt, &state).unwrap();
                for n in 1..=12usize {
                    let dist = distribution(&evolve(&state, &coin, wt, n)).unwrap();
                    for m in 1..=4u32 {
                        let closed = moment_closed_form(&ctx, n, m).unwrap();
                        let emp = empirical_moment(&dist, m);
                        assert!(
                            (closed - emp).abs() < 1e-9,
                            "wt={wt:?} n={n} m={m}: {closed} vs {emp}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn classify_symmetry_examples() {
        let coin = UnitaryCoin::hadamard();
        assert!(classify_symmetry(&coin, WalkType::A, &QubitState::symmetric()).unwrap());
        assert!(!classify_symmetry(&coin, WalkType::A, &QubitState::right()).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = QubitState::new(Complex::new(h, 0.0), Complex::new(h, 0.0)).unwrap();
        assert!(!classify_symmetry(&coin, WalkType::A, &plus).unwrap());
        let ctx = MomentContext::new(&coin, WalkType::A, &plus).unwrap();
        assert!((moment_closed_form(&ctx, 1, 1).unwrap() + 1.0).abs() < 1e-13);
    }
}
