//! Coin matrices, walk types, qubit states and the PQRS orthonormal basis.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mat2::{cpow, Mat2};
use crate::scalar::Scalar;

/// The two decompositions of the coin into left/right movers: row-split (A)
/// or column-split (G).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkType {
    A,
    G,
}

impl WalkType {
    pub fn tag(&self) -> &'static str {
        match self {
            WalkType::A => "a",
            WalkType::G => "g",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(WalkType::A),
            "g" | "G" => Ok(WalkType::G),
            _ => Err(Error::Parse(format!("unknown walk type `{s}`"))),
        }
    }
}

/// A validated 2x2 unitary coin with cached determinant.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryCoin<F: Scalar> {
    a: Complex<F>,
    b: Complex<F>,
    c: Complex<F>,
    d: Complex<F>,
    det: Complex<F>,
    abcd_nonzero: bool,
}

impl<F: Scalar> UnitaryCoin<F> {
    /// Validate the entries against every unitarity relation and cache the
    /// determinant. Entries are taken as given, never re-normalized.
    pub fn new(
        a: Complex<F>,
        b: Complex<F>,
        c: Complex<F>,
        d: Complex<F>,
    ) -> Result<Self> {
        for z in [a, b, c, d] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NotUnitary {
                    residual: f64::INFINITY,
                });
            }
        }
        let det = a * d - b * c;
        let one = F::one();
        let residuals = [
            (a.norm_sqr() + b.norm_sqr() - one).abs(),
            (c.norm_sqr() + d.norm_sqr() - one).abs(),
            (a * c.conj() + b * d.conj()).norm(),
            (det.norm() - one).abs(),
            (c + det * b.conj()).norm(),
            (d - det * a.conj()).norm(),
        ];
        let worst = residuals.iter().cloned().fold(F::zero(), F::max);
        if !(worst <= F::EPS_UNIT) {
            return Err(Error::NotUnitary {
                residual: worst.to_f64().unwrap_or(f64::NAN),
            });
        }
        let min_entry = [a, b, c, d]
            .iter()
            .map(|z| z.norm())
            .fold(F::infinity(), F::min);
        Ok(UnitaryCoin {
            a,
            b,
            c,
            d,
            det,
            abcd_nonzero: min_entry > F::EPS_UNIT,
        })
    }

    /// The Hadamard coin, all entries +-1/sqrt(2).
    pub fn hadamard() -> Self {
        let h = F::lit(std::f64::consts::FRAC_1_SQRT_2);
        let re = |x: F| Complex::new(x, F::zero());
        UnitaryCoin::new(re(h), re(h), re(h), re(-h)).expect("Hadamard is unitary")
    }

    /// H(rho) with entries (sqrt(rho), sqrt(1-rho), sqrt(1-rho), -sqrt(rho));
    /// rho must lie in [0, 1].
    pub fn h_rho(rho: F) -> Result<Self> {
        if !(rho >= F::zero() && rho <= F::one()) {
            return Err(Error::ParamOutOfRange {
                name: "rho",
                value: rho.to_f64().unwrap_or(f64::NAN),
                range: "[0, 1]",
            });
        }
        let s = rho.sqrt();
        let t = (F::one() - rho).sqrt();
        let re = |x: F| Complex::new(x, F::zero());
        UnitaryCoin::new(re(s), re(t), re(t), re(-s))
    }

    /// The three-parameter symmetric family; eta = phi = psi = 0 is Hadamard.
    pub fn u_eta_phi_psi(eta: F, phi: F, psi: F) -> Result<Self> {
        let h = F::lit(std::f64::consts::FRAC_1_SQRT_2);
        let phase = |t: F| Complex::from_polar(F::one(), t);
        let pref = phase(eta).scale(h);
        UnitaryCoin::new(
            pref * phase(phi + psi),
            pref * phase(-(phi - psi)),
            pref * phase(phi - psi),
            -pref * phase(-(phi + psi)),
        )
    }

    /// Gudder's model coin (a, ib, ib, a) with b = sqrt(1-a^2); a in (0, 1).
    pub fn gudder(a: F) -> Result<Self> {
        if !(a > F::zero() && a < F::one()) {
            return Err(Error::ParamOutOfRange {
                name: "a",
                value: a.to_f64().unwrap_or(f64::NAN),
                range: "(0, 1)",
            });
        }
        let b = (F::one() - a * a).sqrt();
        let ar = Complex::new(a, F::zero());
        let ib = Complex::new(F::zero(), b);
        UnitaryCoin::new(ar, ib, ib, ar)
    }

    pub fn a(&self) -> Complex<F> {
        self.a
    }
    pub fn b(&self) -> Complex<F> {
        self.b
    }
    pub fn c(&self) -> Complex<F> {
        self.c
    }
    pub fn d(&self) -> Complex<F> {
        self.d
    }

    /// Cached determinant ad - bc; unit modulus by validation.
    pub fn det(&self) -> Complex<F> {
        self.det
    }

    /// True iff min(|a|,|b|,|c|,|d|) exceeds the unitarity tolerance. Gates
    /// every closed form that divides by coin entries.
    pub fn abcd_nonzero(&self) -> bool {
        self.abcd_nonzero
    }

    pub fn matrix(&self) -> Mat2<F> {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// Entrywise comparison with the Hadamard coin within EPS_UNIT.
    pub fn is_hadamard(&self) -> bool {
        self.matrix().max_abs_diff(&Self::hadamard().matrix()) <= F::EPS_UNIT
    }
}

/// An initial qubit state t[alpha, beta] with unit norm.
#[derive(Clone, Copy, Debug)]
pub struct QubitState<F: Scalar> {
    alpha: Complex<F>,
    beta: Complex<F>,
}

impl<F: Scalar> QubitState<F> {
    pub fn new(alpha: Complex<F>, beta: Complex<F>) -> Result<Self> {
        for z in [alpha, beta] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NotNormalized {
                    residual: f64::INFINITY,
                });
            }
        }
        let residual = (alpha.norm_sqr() + beta.norm_sqr() - F::one()).abs();
        if !(residual <= F::EPS_UNIT) {
            return Err(Error::NotNormalized {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(QubitState { alpha, beta })
    }

    /// t[1, 0]: the left-chirality basis state.
    pub fn left() -> Self {
        QubitState {
            alpha: Complex::new(F::one(), F::zero()),
            beta: Complex::new(F::zero(), F::zero()),
        }
    }

    /// t[0, 1]: the right-chirality basis state.
    pub fn right() -> Self {
        QubitState {
            alpha: Complex::new(F::zero(), F::zero()),
            beta: Complex::new(F::one(), F::zero()),
        }
    }

    /// t[1/sqrt(2), i/sqrt(2)]: symmetric for the Hadamard walk.
    pub fn symmetric() -> Self {
        let h = F::lit(std::f64::consts::FRAC_1_SQRT_2);
        QubitState {
            alpha: Complex::new(h, F::zero()),
            beta: Complex::new(F::zero(), h),
        }
    }

    pub fn alpha(&self) -> Complex<F> {
        self.alpha
    }
    pub fn beta(&self) -> Complex<F> {
        self.beta
    }

    pub fn vector(&self) -> [Complex<F>; 2] {
        [self.alpha, self.beta]
    }
}

/// Labels for the four basis matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    P,
    Q,
    R,
    S,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 4] = [BasisLabel::P, BasisLabel::Q, BasisLabel::R, BasisLabel::S];
}

/// The orthonormal basis {P, Q, R, S} of M2(C) for a coin and walk type.
///
/// A-type splits the coin by rows, G-type by columns; in both cases
/// P + Q = U and tr(Ei* Ej) = delta_ij.
#[derive(Clone, Copy, Debug)]
pub struct PqrsBasis<F: Scalar> {
    p: Mat2<F>,
    q: Mat2<F>,
    r: Mat2<F>,
    s: Mat2<F>,
    walk_type: WalkType,
    coin: UnitaryCoin<F>,
}

impl<F: Scalar> PqrsBasis<F> {
    pub fn new(coin: &UnitaryCoin<F>, walk_type: WalkType) -> Self {
        let z = Complex::new(F::zero(), F::zero());
        let (a, b, c, d) = (coin.a, coin.b, coin.c, coin.d);
        let (p, q, r, s) = match walk_type {
            WalkType::A => (
                Mat2::new(a, b, z, z),
                Mat2::new(z, z, c, d),
                Mat2::new(c, d, z, z),
                Mat2::new(z, z, a, b),
            ),
            WalkType::G => (
                Mat2::new(a, z, c, z),
                Mat2::new(z, b, z, d),
                Mat2::new(z, a, z, c),
                Mat2::new(b, z, d, z),
            ),
        };
        PqrsBasis {
            p,
            q,
            r,
            s,
            walk_type,
            coin: *coin,
        }
    }

    pub fn p(&self) -> &Mat2<F> {
        &self.p
    }
    pub fn q(&self) -> &Mat2<F> {
        &self.q
    }
    pub fn r(&self) -> &Mat2<F> {
        &self.r
    }
    pub fn s(&self) -> &Mat2<F> {
        &self.s
    }

    pub fn get(&self, label: BasisLabel) -> &Mat2<F> {
        match label {
            BasisLabel::P => &self.p,
            BasisLabel::Q => &self.q,
            BasisLabel::R => &self.r,
            BasisLabel::S => &self.s,
        }
    }

    pub fn walk_type(&self) -> WalkType {
        self.walk_type
    }

    pub fn coin(&self) -> &UnitaryCoin<F> {
        &self.coin
    }

    /// Worst deviation of tr(Ei* Ej) from delta_ij over all 16 pairs.
    pub fn orthonormality_residual(&self) -> F {
        let mut worst = F::zero();
        for (i, li) in BasisLabel::ALL.iter().enumerate() {
            for (j, lj) in BasisLabel::ALL.iter().enumerate() {
                let inner = self.get(*li).trace_inner(self.get(*lj));
                let target = if i == j { F::one() } else { F::zero() };
                worst = worst.max((inner - Complex::new(target, F::zero())).norm());
            }
        }
        worst
    }
}

/// Coefficients of a 2x2 matrix expanded in a PQRS basis.
#[derive(Clone, Copy, Debug)]
pub struct BasisCombo<F: Scalar> {
    pub p: Complex<F>,
    pub q: Complex<F>,
    pub r: Complex<F>,
    pub s: Complex<F>,
    pub basis_type: WalkType,
}

impl<F: Scalar> BasisCombo<F> {
    /// p P + q Q + r R + s S in the given basis.
    pub fn recombine(&self, basis: &PqrsBasis<F>) -> Mat2<F> {
        debug_assert_eq!(self.basis_type, basis.walk_type());
        basis
            .p
            .scale(self.p)
            .add(&basis.q.scale(self.q))
            .add(&basis.r.scale(self.r))
            .add(&basis.s.scale(self.s))
    }

    /// Largest coefficient difference against another combo.
    pub fn max_abs_diff(&self, rhs: &BasisCombo<F>) -> F {
        [
            (self.p - rhs.p).norm(),
            (self.q - rhs.q).norm(),
            (self.r - rhs.r).norm(),
            (self.s - rhs.s).norm(),
        ]
        .into_iter()
        .fold(F::zero(), F::max)
    }
}

/// Expand X in the basis via trace inner products.
pub fn expand<F: Scalar>(x: &Mat2<F>, basis: &PqrsBasis<F>) -> BasisCombo<F> {
    BasisCombo {
        p: basis.p.trace_inner(x),
        q: basis.q.trace_inner(x),
        r: basis.r.trace_inner(x),
        s: basis.s.trace_inner(x),
        basis_type: basis.walk_type(),
    }
}

/// The 4x4 multiplication table of the basis: lhs * rhs = scalar * label.
/// The table depends only on the coin entries, not on the walk type.
pub fn basis_product<F: Scalar>(
    lhs: BasisLabel,
    rhs: BasisLabel,
    coin: &UnitaryCoin<F>,
) -> (Complex<F>, BasisLabel) {
    use BasisLabel::*;
    let (a, b, c, d) = (coin.a, coin.b, coin.c, coin.d);
    match (lhs, rhs) {
        (P, P) => (a, P),
        (P, Q) => (b, R),
        (P, R) => (a, R),
        (P, S) => (b, P),
        (Q, P) => (c, S),
        (Q, Q) => (d, Q),
        (Q, R) => (c, Q),
        (Q, S) => (d, S),
        (R, P) => (c, P),
        (R, Q) => (d, R),
        (R, R) => (c, R),
        (R, S) => (d, P),
        (S, P) => (a, S),
        (S, Q) => (b, Q),
        (S, R) => (a, Q),
        (S, S) => (b, S),
    }
}

fn parse_floats<F: Scalar>(s: &str, n: usize, what: &str) -> Result<Vec<F>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(Error::Parse(format!(
            "{what}: expected {n} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map(F::lit)
                .map_err(|_| Error::Parse(format!("{what}: bad number `{p}`")))
        })
        .collect()
}

/// Parse the coin specification grammar:
/// `hadamard`, `h_rho:<rho>`, `gudder:<a>`, `u:<eta>,<phi>,<psi>`, or
/// `raw:<a_re>,<a_im>,<b_re>,<b_im>,<c_re>,<c_im>,<d_re>,<d_im>`.
pub fn parse_coin_spec<F: Scalar>(spec: &str) -> Result<UnitaryCoin<F>> {
    if spec == "hadamard" {
        return Ok(UnitaryCoin::hadamard());
    }
    if let Some(arg) = spec.strip_prefix("h_rho:") {
        let v = parse_floats::<F>(arg, 1, "h_rho")?;
        return UnitaryCoin::h_rho(v[0]);
    }
    if let Some(arg) = spec.strip_prefix("gudder:") {
        let v = parse_floats::<F>(arg, 1, "gudder")?;
        return UnitaryCoin::gudder(v[0]);
    }
    if let Some(arg) = spec.strip_prefix("u:") {
        let v = parse_floats::<F>(arg, 3, "u")?;
        return UnitaryCoin::u_eta_phi_psi(v[0], v[1], v[2]);
    }
    if let Some(arg) = spec.strip_prefix("raw:") {
        let v = parse_floats::<F>(arg, 8, "raw coin")?;
        return UnitaryCoin::new(
            Complex::new(v[0], v[1]),
            Complex::new(v[2], v[3]),
            Complex::new(v[4], v[5]),
            Complex::new(v[6], v[7]),
        );
    }
    Err(Error::Parse(format!("unknown coin spec `{spec}`")))
}

/// Parse the qubit-state grammar: `L`, `R`, `sym`, or
/// `raw:<alpha_re>,<alpha_im>,<beta_re>,<beta_im>`.
pub fn parse_state_spec<F: Scalar>(spec: &str) -> Result<QubitState<F>> {
    match spec {
        "L" => return Ok(QubitState::left()),
        "R" => return Ok(QubitState::right()),
        "sym" => return Ok(QubitState::symmetric()),
        _ => {}
    }
    if let Some(arg) = spec.strip_prefix("raw:") {
        let v = parse_floats::<F>(arg, 4, "raw state")?;
        return QubitState::new(Complex::new(v[0], v[1]), Complex::new(v[2], v[3]));
    }
    Err(Error::Parse(format!("unknown state spec `{spec}`")))
}

/// Unnormalized power of a coin entry, used by the path-sum closed forms.
pub(crate) fn entry_pow<F: Scalar>(z: Complex<F>, k: usize) -> Complex<F> {
    cpow(z, k as i32)
}
