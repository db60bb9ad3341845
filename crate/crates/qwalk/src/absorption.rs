//! First hits at the origin with an absorbing boundary: the hitting-time
//! recurrence on {0,...,N} and {0,1,...}, generating functions, Hadamard
//! closed forms, conditional hitting moments, unit-circle integrals and the
//! ruin-problem comparison sequence.

use num_complex::Complex;

use crate::coin::{QubitState, UnitaryCoin, WalkType};
use crate::error::{Error, Result};
use crate::mat2::cpow;
use crate::scalar::Scalar;

/// Where the lattice ends on the right; the absorbing site 0 is always there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    SemiInfinite,
    /// Second absorbing site at N; N >= 2.
    Finite(usize),
}

/// A hitting-time problem: coin, walk type, boundary, starting site.
#[derive(Clone, Copy, Debug)]
pub struct AbsorptionSpec<F: Scalar> {
    coin: UnitaryCoin<F>,
    walk_type: WalkType,
    boundary: Boundary,
    start: usize,
}

impl<F: Scalar> AbsorptionSpec<F> {
    pub fn new(
        coin: UnitaryCoin<F>,
        walk_type: WalkType,
        boundary: Boundary,
        start: usize,
    ) -> Result<Self> {
        if start < 1 {
            return Err(Error::OutOfRange("start site must be >= 1"));
        }
        if let Boundary::Finite(n) = boundary {
            if n < 2 {
                return Err(Error::OutOfRange("finite boundary needs N >= 2"));
            }
            if start > n - 1 {
                return Err(Error::OutOfRange("start site must be <= N - 1"));
            }
        }
        Ok(AbsorptionSpec {
            coin,
            walk_type,
            boundary,
            start,
        })
    }

    pub fn coin(&self) -> &UnitaryCoin<F> {
        &self.coin
    }

    pub fn walk_type(&self) -> WalkType {
        self.walk_type
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn start(&self) -> usize {
        self.start
    }
}

// Runs the two-term recurrence over starting sites: the value at site k and
// step n comes from sites k-1 and k+1 at step n-1, with the absorbed datum
// (conj a, conj c) injected at site 0, step 0, and zeros at the boundaries
// afterwards. For the semi-infinite lattice the site range [0, start + cap]
// is exact, not approximate: influence travels one site per step.
struct Stepper<F: Scalar> {
    a: Complex<F>,
    b: Complex<F>,
    c: Complex<F>,
    d: Complex<F>,
    finite_n: Option<usize>,
    width: usize,
    start: usize,
    n: usize,
    cur: Vec<[Complex<F>; 2]>,
    next: Vec<[Complex<F>; 2]>,
}

impl<F: Scalar> Stepper<F> {
    fn new(spec: &AbsorptionSpec<F>, semi_cap: usize) -> Self {
        let (finite_n, width) = match spec.boundary {
            Boundary::Finite(n) => (Some(n), n),
            Boundary::SemiInfinite => (None, spec.start + semi_cap),
        };
        let z = Complex::new(F::zero(), F::zero());
        let mut cur = vec![[z, z]; width + 2];
        cur[0] = [spec.coin.a().conj(), spec.coin.c().conj()];
        Stepper {
            a: spec.coin.a(),
            b: spec.coin.b(),
            c: spec.coin.c(),
            d: spec.coin.d(),
            finite_n,
            width,
            start: spec.start,
            n: 0,
            cur,
            next: vec![[z, z]; width + 2],
        }
    }

    /// Advance one step and return (p, r) at the starting site.
    fn advance(&mut self) -> [Complex<F>; 2] {
        self.n += 1;
        let hi = match self.finite_n {
            Some(n) => n - 1,
            // sites beyond n are still untouched by the site-0 datum
            None => self.width.min(self.n),
        };
        let z = Complex::new(F::zero(), F::zero());
        self.next[0] = [z, z];
        for k in 1..=hi {
            let below = self.cur[k - 1];
            let above = self.cur[k + 1];
            self.next[k] = [
                self.a * below[0] + self.c * below[1],
                self.b * above[0] + self.d * above[1],
            ];
        }
        if let Some(n) = self.finite_n {
            self.next[n] = [z, z];
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        self.cur[self.start]
    }
}

/// The (p, r) coefficient pair of the absorbed component, per step.
///
/// The q and s components vanish identically and are not stored.
#[derive(Clone, Debug)]
pub struct HittingSeries<F: Scalar> {
    spec: AbsorptionSpec<F>,
    p: Vec<Complex<F>>,
    r: Vec<Complex<F>>,
}

impl<F: Scalar> HittingSeries<F> {
    pub fn spec(&self) -> &AbsorptionSpec<F> {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p(&self, n: usize) -> Complex<F> {
        self.p[n]
    }

    pub fn r(&self, n: usize) -> Complex<F> {
        self.r[n]
    }
}

/// Run the recurrence through n_max steps.
pub fn hitting_series<F: Scalar>(
    spec: &AbsorptionSpec<F>,
    n_max: usize,
) -> Result<HittingSeries<F>> {
    if n_max < 1 {
        return Err(Error::OutOfRange("n_max must be >= 1"));
    }
    let mut stepper = Stepper::new(spec, n_max);
    let z = Complex::new(F::zero(), F::zero());
    let mut p = Vec::with_capacity(n_max + 1);
    let mut r = Vec::with_capacity(n_max + 1);
    p.push(z);
    r.push(z);
    for _ in 1..=n_max {
        let v = stepper.advance();
        p.push(v[0]);
        r.push(v[1]);
    }
    Ok(HittingSeries { spec: *spec, p, r })
}

// Quadratic form C1 |alpha|^2 + C2 |beta|^2 + 2 Re(C3 conj(alpha) beta)
// with C1 = |u|^2, C2 = |v|^2, C3 = conj(u) v.
fn quad_form<F: Scalar>(u: Complex<F>, v: Complex<F>, state: &QubitState<F>) -> F {
    let cross = (u.conj() * v * state.alpha().conj() * state.beta()).re;
    u.norm_sqr() * state.alpha().norm_sqr()
        + v.norm_sqr() * state.beta().norm_sqr()
        + F::lit(2.0) * cross
}

// The (u, v) pair entering the quadratic form, from a (p, r) coefficient
// pair. A-type mixes through the coin rows; G-type uses (p, r) directly.
fn hit_components<F: Scalar>(
    coin: &UnitaryCoin<F>,
    wt: WalkType,
    p: Complex<F>,
    r: Complex<F>,
) -> (Complex<F>, Complex<F>) {
    match wt {
        WalkType::A => (coin.a() * p + coin.c() * r, coin.b() * p + coin.d() * r),
        WalkType::G => (p, r),
    }
}

/// Probability that the walker is first absorbed exactly at step n.
pub fn first_hit_prob<F: Scalar>(
    series: &HittingSeries<F>,
    state: &QubitState<F>,
    n: usize,
) -> Result<F> {
    if n < 1 || n > series.n_max() {
        return Err(Error::OutOfRange("step index outside the computed series"));
    }
    let (u, v) = hit_components(
        &series.spec.coin,
        series.spec.walk_type,
        series.p[n],
        series.r[n],
    );
    Ok(quad_form(u, v, state))
}

/// Truncation control for the absorption sum.
#[derive(Clone, Copy, Debug)]
pub struct TruncationPolicy<F: Scalar> {
    /// Convergence is declared when a full window adds less than window_tol.
    pub window: usize,
    pub window_tol: F,
    /// Hard cap on the number of steps.
    pub cap: usize,
}

impl<F: Scalar> TruncationPolicy<F> {
    /// Finite-boundary survival decays exponentially, so a large cap is
    /// cheap there; semi-infinite tails decay polynomially and the cap is
    /// what actually stops the sum.
    pub fn default_for(boundary: Boundary) -> Self {
        TruncationPolicy {
            window: 500,
            window_tol: F::lit(1e-14),
            cap: match boundary {
                Boundary::Finite(_) => 200_000,
                Boundary::SemiInfinite => 100_000,
            },
        }
    }

    pub fn with_cap(boundary: Boundary, cap: usize) -> Self {
        TruncationPolicy {
            cap,
            ..Self::default_for(boundary)
        }
    }
}

/// Outcome of summing the first-hit series.
#[derive(Clone, Copy, Debug)]
pub struct AbsorptionResult<F: Scalar> {
    /// Total absorption probability accumulated.
    pub prob: F,
    /// Number of steps actually summed.
    pub n_used: usize,
    /// Crude bound on the neglected tail; 0 when the window test converged.
    pub tail_bound: F,
    /// Series estimate of E(T0 | T0 < infinity), from the partial sums.
    pub cond_mean_t0: F,
    /// False only when the cap was hit with a tail bound above 1e-6.
    pub converged: bool,
}

/// Sum the first-hit probabilities with the default truncation policy.
pub fn absorption_prob<F: Scalar>(
    spec: &AbsorptionSpec<F>,
    state: &QubitState<F>,
) -> AbsorptionResult<F> {
    absorption_prob_with(spec, state, &TruncationPolicy::default_for(spec.boundary))
}

/// Same with an explicit policy.
pub fn absorption_prob_with<F: Scalar>(
    spec: &AbsorptionSpec<F>,
    state: &QubitState<F>,
    policy: &TruncationPolicy<F>,
) -> AbsorptionResult<F> {
    let mut stepper = Stepper::new(spec, policy.cap);
    let mut total = F::zero();
    let mut weighted = F::zero();
    let mut block = F::zero();
    let mut n_used = policy.cap;
    let mut window_hit = false;
    for n in 1..=policy.cap {
        let v = stepper.advance();
        let (u, w) = hit_components(&spec.coin, spec.walk_type, v[0], v[1]);
        let ph = quad_form(u, w, state);
        total = total + ph;
        weighted = weighted + F::of_usize(n) * ph;
        block = block + ph;
        if n % policy.window == 0 {
            if block < policy.window_tol {
                n_used = n;
                window_hit = true;
                break;
            }
            if n < policy.cap {
                block = F::zero();
            }
        }
    }
    let tail_bound = if window_hit { F::zero() } else { block * F::lit(10.0) };
    let cond_mean_t0 = if total > F::zero() { weighted / total } else { F::zero() };
    AbsorptionResult {
        prob: total,
        n_used,
        tail_bound,
        cond_mean_t0,
        converged: window_hit || tail_bound <= F::lit(1e-6),
    }
}

/// Closed-form semi-infinite absorption probability from site 1, Hadamard
/// coin only.
pub fn semi_infinite_closed<F: Scalar>(
    coin: &UnitaryCoin<F>,
    state: &QubitState<F>,
    wt: WalkType,
) -> Result<F> {
    if !coin.is_hadamard() {
        return Err(Error::UnsupportedCoin);
    }
    let two_over_pi = F::lit(2.0) / F::PI();
    Ok(match wt {
        WalkType::A => {
            two_over_pi
                + F::lit(2.0) * (F::one() - two_over_pi)
                    * (state.alpha().conj() * state.beta()).re
        }
        WalkType::G => {
            state.alpha().norm_sqr()
                + (F::lit(4.0) / F::PI() - F::one()) * state.beta().norm_sqr()
        }
    })
}

/// Conditional moment of the first hitting time given absorption.
#[derive(Clone, Copy, Debug)]
pub enum ConditionalMoment<F: Scalar> {
    /// First moment: the closed form 1 / P next to the series estimate.
    Finite { closed_form: F, series_estimate: F },
    /// Higher moments diverge; the two partial sums are the witness.
    Divergent { partial: F, partial_doubled: F },
}

const MOMENT_SERIES_N: usize = 10_000;

/// E(T0^m | T0 < infinity) for the semi-infinite Hadamard walk from site 1.
pub fn conditional_hitting_moment<F: Scalar>(
    spec: &AbsorptionSpec<F>,
    state: &QubitState<F>,
    m: u32,
) -> Result<ConditionalMoment<F>> {
    if m < 1 {
        return Err(Error::OutOfRange("moment order must be >= 1"));
    }
    if spec.boundary != Boundary::SemiInfinite || spec.start != 1 {
        return Err(Error::OutOfRange(
            "conditional moments need the semi-infinite walk from site 1",
        ));
    }
    if !spec.coin.is_hadamard() {
        return Err(Error::UnsupportedCoin);
    }
    let steps = if m == 1 { MOMENT_SERIES_N } else { 2 * MOMENT_SERIES_N };
    let mut stepper = Stepper::new(spec, steps);
    let mut total = F::zero();
    let mut weighted = F::zero();
    let mut at_half = F::zero();
    for n in 1..=steps {
        let v = stepper.advance();
        let (u, w) = hit_components(&spec.coin, spec.walk_type, v[0], v[1]);
        let ph = quad_form(u, w, state);
        total = total + ph;
        weighted = weighted + F::of_usize(n).powi(m as i32) * ph;
        if n == MOMENT_SERIES_N {
            at_half = weighted / total;
        }
    }
    if m == 1 {
        Ok(ConditionalMoment::Finite {
            closed_form: semi_infinite_closed(&spec.coin, state, spec.walk_type)?.recip(),
            series_estimate: at_half,
        })
    } else {
        Ok(ConditionalMoment::Divergent {
            partial: at_half,
            partial_doubled: weighted / total,
        })
    }
}

fn singular_tol<F: Scalar>() -> F {
    F::lit(1e-12).max(F::epsilon() * F::lit(16.0))
}

/// Roots of the characteristic quadratic shared by the p and r recurrences.
///
/// lambda(+/-) = (det z^2 + 1 -/+ sqrt(det^2 z^4 + 2 det (1 - 2|a|^2) z^2 + 1))
///               / (2 det conj(a) z), principal square root.
pub fn lambda_roots<F: Scalar>(
    coin: &UnitaryCoin<F>,
    z: Complex<F>,
) -> Result<(Complex<F>, Complex<F>)> {
    let det = coin.det();
    let denom = det * coin.a().conj() * z.scale(F::lit(2.0));
    if denom.norm() < singular_tol::<F>() {
        return Err(Error::ZeroDenominator);
    }
    let one = Complex::new(F::one(), F::zero());
    let z2 = z * z;
    let head = det * z2 + one;
    let disc = det * det * z2 * z2
        + det * z2.scale(F::lit(2.0) * (F::one() - F::lit(2.0) * coin.a().norm_sqr()))
        + one;
    let s = disc.sqrt();
    Ok(((head - s) / denom, (head + s) / denom))
}

/// Generating-function data at one point z for the finite Hadamard lattice.
#[derive(Clone, Copy, Debug)]
pub struct GenFunEval<F: Scalar> {
    pub z: Complex<F>,
    pub lambda_plus: Complex<F>,
    pub lambda_minus: Complex<F>,
    pub p_tilde: Complex<F>,
    pub r_tilde: Complex<F>,
    pub c_z: Complex<F>,
    pub e_z: Complex<F>,
}

/// Evaluate the closed-form generating functions p~(z), r~(z) for the
/// Hadamard walk on {0,...,N} starting from site k.
///
/// With D_n = lambda_+^n - lambda_-^n, the prefactor of r~ reduces to
/// C_z = (-1)^N z^2 / (sqrt(2) D_{N-1} - z D_{N-2}); the coefficient of
/// lambda_+^{k-1} in p~ is A = (z/sqrt(2)) C_z lambda_+^{2-N} / (lambda_+
/// - z/sqrt(2)) and the lambda_- coefficient is z - A, which pins the
/// boundary value p~(k=1) = z exactly.
pub fn genfun_finite_hadamard<F: Scalar>(
    n_sites: usize,
    k: usize,
    z: Complex<F>,
) -> Result<GenFunEval<F>> {
    if n_sites < 2 || k < 1 || k > n_sites - 1 {
        return Err(Error::OutOfRange("need N >= 2 and 1 <= k <= N - 1"));
    }
    let tol = singular_tol::<F>();
    let coin = UnitaryCoin::hadamard();
    let (lp, lm) = lambda_roots(&coin, z).map_err(|_| Error::SingularPoint)?;
    let d = |m: i32| cpow(lp, m) - cpow(lm, m);
    let sqrt2 = Complex::new(F::lit(2.0).sqrt(), F::zero());
    let nn = n_sites as i32;
    let denom_c = sqrt2 * d(nn - 1) - z * d(nn - 2);
    if denom_c.norm() < tol {
        return Err(Error::SingularPoint);
    }
    let sign = if n_sites % 2 == 0 { F::one() } else { -F::one() };
    let c_z = (z * z).scale(sign) / denom_c;
    let half_z = z / sqrt2;
    let denom_a = lp - half_z;
    if denom_a.norm() < tol {
        return Err(Error::SingularPoint);
    }
    let a = half_z * c_z * cpow(lp, 2 - nn) / denom_a;
    let b = z - a;
    let kk = k as i32;
    let p_tilde = a * cpow(lp, kk - 1) + b * cpow(lm, kk - 1);
    let r_tilde = c_z * (cpow(lp, kk - nn + 1) - cpow(lm, kk - nn + 1));
    let e_z = a - z.scale(F::lit(0.5));
    Ok(GenFunEval {
        z,
        lambda_plus: lp,
        lambda_minus: lm,
        p_tilde,
        r_tilde,
        c_z,
        e_z,
    })
}

/// The independent closed form for r~ at k = 1: 0 for N = 2, z^3/(2 - z^2)
/// for N = 3, and for N >= 4 the J-polynomial expression with
/// J_n = sqrt(2)(z - 1/z) J_{n-1} + J_{n-2}, J_0 = 1.
pub fn genfun_r1_corollary<F: Scalar>(n_sites: usize, z: Complex<F>) -> Result<Complex<F>> {
    if n_sites < 2 {
        return Err(Error::OutOfRange("need N >= 2"));
    }
    let tol = singular_tol::<F>();
    let zero = Complex::new(F::zero(), F::zero());
    let one = Complex::new(F::one(), F::zero());
    if n_sites == 2 {
        return Ok(zero);
    }
    if z.norm() < tol {
        return Err(Error::SingularPoint);
    }
    if n_sites == 3 {
        let denom = one.scale(F::lit(2.0)) - z * z;
        if denom.norm() < tol {
            return Err(Error::SingularPoint);
        }
        return Ok(z * z * z / denom);
    }
    let sqrt2 = Complex::new(F::lit(2.0).sqrt(), F::zero());
    let s = sqrt2 * (z - z.inv());
    let mut j_prev = one; // J_0
    let mut j_cur = s; // J_1
    for _ in 2..=(n_sites - 3) {
        let next = s * j_cur + j_prev;
        j_prev = j_cur;
        j_cur = next;
    }
    // j_cur = J_{N-3}, j_prev = J_{N-4}
    let parity = if (n_sites - 3) % 2 == 0 { F::one() } else { -F::one() };
    let denom = sqrt2 * j_cur * j_cur - z * j_cur * j_prev - sqrt2.scale(parity);
    if denom.norm() < tol {
        return Err(Error::SingularPoint);
    }
    Ok(-(z * z) * j_cur * j_prev / denom)
}

/// Total absorption probability by Parseval: the unit-circle averages of the
/// squared generating functions, combined through the same quadratic form as
/// the series. Hadamard, finite N.
///
/// Equispaced trapezoid nodes; a node landing on a singular point shifts the
/// whole grid by half a step, once.
pub fn theorem8_prob<F: Scalar>(
    n_sites: usize,
    k: usize,
    state: &QubitState<F>,
    wt: WalkType,
    panels: usize,
) -> Result<F> {
    if panels < 2 {
        return Err(Error::OutOfRange("need at least 2 quadrature panels"));
    }
    let coin = UnitaryCoin::hadamard();
    'offsets: for offset in [F::zero(), F::lit(0.5)] {
        let mut acc = F::zero();
        for i in 0..panels {
            let theta = (F::of_usize(i) + offset) * F::lit(2.0) * F::PI() / F::of_usize(panels);
            let z = Complex::new(theta.cos(), theta.sin());
            let eval = match genfun_finite_hadamard(n_sites, k, z) {
                Ok(e) => e,
                Err(Error::SingularPoint) if offset == F::zero() => continue 'offsets,
                Err(e) => return Err(e),
            };
            let (u, v) = hit_components(&coin, wt, eval.p_tilde, eval.r_tilde);
            acc = acc + quad_form(u, v, state);
        }
        return Ok(acc / F::of_usize(panels));
    }
    Err(Error::SingularPoint)
}

/// The classical-comparison sequence (1/sqrt(2)) ((3+2 sqrt 2)^{N-1} - 1) /
/// ((3+2 sqrt 2)^{N-1} + 1); strictly increasing, limit 1/sqrt(2).
pub fn conjecture_rhs<F: Scalar>(n_sites: usize) -> F {
    let t = (F::lit(3.0) + F::lit(2.0) * F::lit(2.0).sqrt()).powi(n_sites as i32 - 1);
    (t - F::one()) / (t + F::one()) / F::lit(2.0).sqrt()
}
