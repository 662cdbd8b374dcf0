//! Displacement operators `D_{jk} = φ(j,k) Σ_m ω^{jm} |k⊕m⟩⟨m|` on `C^d`
//! and the covariant POVM built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::{DensityOperator, HermitianOperator, DENSITY_TOL};
use crate::povm::dual::{DualFamily, PovmConstants};
use crate::povm::family::Povm;
use crate::scalar::{c, cis, max_abs, Mat, Real, C};

/// Tolerance for the displacement identities.
pub const WEYL_TOL: f64 = 1e-10;

/// Choice of the phase `φ(j,k)` that stands in for `ω^{(j⊙k)/2}`.
///
/// `PairSymmetric` evaluates `exp(iπ a b / d)` where `(a,b)` is the
/// lexicographically smaller of `(j,k)` and `(-j,-k) mod d`, so `α` and
/// `−α` share a phase and `D_α† = D_{−α}` holds exactly. `HalfInteger`
/// uses `exp(iπ j k / d)` and `NegatedRoot` uses `(−e^{iπ/d})^{jk}`; both
/// fail the `Λ` orthogonality identities for some dimensions and are kept
/// so that failure can be demonstrated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    #[default]
    PairSymmetric,
    HalfInteger,
    NegatedRoot,
}

/// Phase-space point `(j, k) ∈ Z_d × Z_d`, stored as canonical representatives.
pub type Point = (usize, usize);

/// `c((j,k),(l,m)) = jm − kl`.
pub fn symplectic(a: Point, b: Point) -> i64 {
    a.0 as i64 * b.1 as i64 - a.1 as i64 * b.0 as i64
}

/// The `d²` displacement operators, indexed by `j d + k`.
#[derive(Clone, Debug)]
pub struct DisplacementSet<R: Real> {
    d: usize,
    convention: PhaseConvention,
    ops: Vec<Mat<R>>,
}

impl<R: Real> DisplacementSet<R> {
    /// Builds the set and runs [`Self::self_test`].
    pub fn new(d: usize, convention: PhaseConvention) -> Result<Self> {
        let set = Self::unchecked(d, convention)?;
        set.self_test()?;
        Ok(set)
    }

    /// Builds the set without checking any identity.
    pub fn unchecked(d: usize, convention: PhaseConvention) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension { what: "displacement operators", dim: d });
        }
        let mut ops = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                let phase = phase::<R>(d, convention, (j, k));
                let m = Mat::from_fn(d, d, |row, col| {
                    if row == (k + col) % d {
                        phase * omega::<R>(d, (j * col) as i64)
                    } else {
                        C::new(R::zero(), R::zero())
                    }
                });
                ops.push(m);
            }
        }
        Ok(Self { d, convention, ops })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn convention(&self) -> PhaseConvention {
        self.convention
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.d).flat_map(move |j| (0..self.d).map(move |k| (j, k)))
    }

    pub fn label(&self, p: Point) -> String {
        format!("{}-{}", p.0, p.1)
    }

    pub fn op(&self, p: Point) -> &Mat<R> {
        &self.ops[p.0 * self.d + p.1]
    }

    pub fn negate(&self, p: Point) -> Point {
        ((self.d - p.0) % self.d, (self.d - p.1) % self.d)
    }

    /// `ω^e` with `ω = e^{2πi/d}`.
    pub fn omega(&self, e: i64) -> C<R> {
        omega(self.d, e)
    }

    /// `φ` with `D_α† = φ D_{−α}`.
    pub fn conjugation_phase(&self, p: Point) -> C<R> {
        let adj = self.op(p).adjoint();
        let neg = self.op(self.negate(p));
        // both are monomial with identical support
        let (idx, _) = neg.iter().enumerate().find(|(_, z)| z.norm_sqr() > R::lit(0.25)).expect("monomial");
        adj[idx] / neg[idx]
    }

    /// `Λ_α = (1/2d) Σ_β (ω^{c(α,β)} D_β + ω^{−c(α,β)} D_β†)`.
    pub fn lambda(&self, a: Point) -> HermitianOperator<R> {
        let d = self.d;
        let mut acc = Mat::zeros(d, d);
        for b in self.points() {
            let w = self.omega(symplectic(a, b));
            let op = self.op(b);
            acc += op * w + op.adjoint() * w.conj();
        }
        HermitianOperator::from_hermitian_part(acc * c(R::one() / R::count(2 * d)))
    }

    pub fn lambdas(&self) -> Vec<HermitianOperator<R>> {
        self.points().map(|a| self.lambda(a)).collect()
    }

    /// Checks `tr Λ_α = 1` and `tr(Λ_α Λ_β) = d δ_{αβ}`.
    pub fn self_test(&self) -> Result<()> {
        let lambdas = self.lambdas();
        let d = R::count(self.d);
        let mut trace_dev = R::zero();
        let mut orth_dev = R::zero();
        for (i, la) in lambdas.iter().enumerate() {
            trace_dev = trace_dev.max((la.trace() - R::one()).abs());
            for (j, lb) in lambdas.iter().enumerate() {
                let target = if i == j { d } else { R::zero() };
                orth_dev = orth_dev.max((la.inner(lb) - target).abs());
            }
        }
        let tol = R::tol(WEYL_TOL);
        if trace_dev > tol {
            return Err(Error::Construction { identity: "tr Λ_α = 1", deviation: trace_dev.as_f64() });
        }
        if orth_dev > tol {
            return Err(Error::Construction { identity: "tr(Λ_α Λ_β) = d δ_αβ", deviation: orth_dev.as_f64() });
        }
        Ok(())
    }

    /// `max_α |D_α D_α† − id|`.
    pub fn unitarity_deviation(&self) -> R {
        let id = Mat::identity(self.d, self.d);
        self.ops.iter().map(|u| max_abs(&(u * u.adjoint() - &id))).fold(R::zero(), |a, b| a.max(b))
    }

    /// `|Σ_α D_α ρ D_α† − d tr(ρ) id|`.
    pub fn twirl_deviation(&self, rho: &HermitianOperator<R>) -> R {
        let mut acc = Mat::zeros(self.d, self.d);
        for u in &self.ops {
            acc += u * rho.matrix() * u.adjoint();
        }
        let target = Mat::identity(self.d, self.d) * c(R::count(self.d) * rho.trace());
        max_abs(&(acc - target))
    }

    /// `max_{α,β} |D_α D_β D_α† − ω^{c(α,β)} D_β|`.
    pub fn commutation_deviation(&self) -> R {
        let mut dev = R::zero();
        for a in self.points() {
            for b in self.points() {
                let lhs = self.op(a) * self.op(b) * self.op(a).adjoint();
                let rhs = self.op(b) * self.omega(symplectic(a, b));
                dev = dev.max(max_abs(&(lhs - rhs)));
            }
        }
        dev
    }

    /// `max_{α,β} |tr(D_α† D_β) − d δ_{αβ}|`.
    pub fn orthogonality_deviation(&self) -> R {
        let mut dev = R::zero();
        for (i, a) in self.ops.iter().enumerate() {
            for (j, b) in self.ops.iter().enumerate() {
                let t = (a.adjoint() * b).trace();
                let target = if i == j { R::count(self.d) } else { R::zero() };
                dev = dev.max((t - c(target)).norm_sqr().sqrt());
            }
        }
        dev
    }

    /// `max_α |D_α† − D_{−α}|`, ignoring any global phase when `up_to_phase`.
    pub fn conjugation_deviation(&self, up_to_phase: bool) -> R {
        self.points()
            .map(|p| {
                let phi = if up_to_phase { self.conjugation_phase(p) } else { c(R::one()) };
                max_abs(&(self.op(p).adjoint() - self.op(self.negate(p)) * phi))
            })
            .fold(R::zero(), |a, b| a.max(b))
    }
}

fn omega<R: Real>(d: usize, e: i64) -> C<R> {
    let e = e.rem_euclid(d as i64);
    cis(R::two_pi() * R::lit(e as f64) / R::count(d))
}

fn phase<R: Real>(d: usize, convention: PhaseConvention, (j, k): Point) -> C<R> {
    let half = |prod: usize| cis(R::pi() * R::lit((prod % (2 * d)) as f64) / R::count(d));
    match convention {
        PhaseConvention::PairSymmetric => {
            let neg = ((d - j) % d, (d - k) % d);
            let (a, b) = (j, k).min(neg);
            half(a * b)
        }
        PhaseConvention::HalfInteger => half(j * k),
        PhaseConvention::NegatedRoot => {
            let sign = if (j * k) % 2 == 0 { R::one() } else { -R::one() };
            half(j * k) * sign
        }
    }
}

/// `ρ = d/(d²+1) id + 1/(2d(d²+1)) Σ_β (D_β + D_β†)`.
pub fn wh_fiducial_state<R: Real>(set: &DisplacementSet<R>) -> Result<DensityOperator<R>> {
    let d = set.dim();
    let df = R::count(d);
    let norm = df * df + R::one();
    let mut acc = Mat::zeros(d, d);
    for b in set.points() {
        acc += set.op(b) + set.op(b).adjoint();
    }
    let m = Mat::identity(d, d) * c(df / norm) + acc * c(R::one() / (R::lit(2.0) * df * norm));
    let h = HermitianOperator::from_hermitian_part(m);
    match DensityOperator::new(h) {
        Ok(rho) => Ok(rho),
        Err(Error::NotDensity { trace, min_eigenvalue }) => {
            let deviation = if (trace - 1.0).abs() > DENSITY_TOL { (trace - 1.0).abs() } else { -min_eigenvalue };
            Err(Error::Construction { identity: "fiducial state is a density operator", deviation })
        }
        Err(e) => Err(e),
    }
}

/// The covariant POVM `{Δ_α}` with its operators `Λ_α`, dual `{Θ_α}` and constants.
#[derive(Clone, Debug)]
pub struct WhPovm<R: Real> {
    pub displacements: DisplacementSet<R>,
    pub fiducial: DensityOperator<R>,
    pub lambdas: Vec<HermitianOperator<R>>,
    pub povm: Povm<R>,
    pub dual: DualFamily<R>,
    pub constants: PovmConstants,
}

/// Builds `Δ_α = (id + Λ_α/d)/(d²+1)`, checks it against `D_α ρ D_α† / d`,
/// and `Θ_α = −d(id − ((d²+1)/d) Λ_α)`, checked as a dual.
pub fn wh_povm<R: Real>(d: usize, convention: PhaseConvention) -> Result<WhPovm<R>> {
    let set = DisplacementSet::new(d, convention)?;
    let fiducial = wh_fiducial_state(&set)?;
    let df = R::count(d);
    let norm = df * df + R::one();
    let id = HermitianOperator::<R>::identity(d);
    let lambdas = set.lambdas();
    let mut deltas = Vec::with_capacity(d * d);
    let mut thetas = Vec::with_capacity(d * d);
    let mut dev = R::zero();
    for (a, la) in set.points().zip(&lambdas) {
        let delta = (&id + &la.scale(R::one() / df)).scale(R::one() / norm);
        let covariant = fiducial.operator().conjugate(set.op(a)).scale(R::one() / df);
        dev = dev.max(delta.max_abs_diff(&covariant));
        deltas.push(delta);
        thetas.push((&id - &la.scale(norm / df)).scale(-df));
    }
    if dev > R::tol(WEYL_TOL) {
        return Err(Error::Construction { identity: "Δ_α = D_α ρ D_α† / d", deviation: dev.as_f64() });
    }
    let labels: Vec<String> = set.points().map(|p| set.label(p)).collect();
    let povm = Povm::new(labels, deltas)?;
    let dual = DualFamily::new(&povm, thetas)?;
    let constants = PovmConstants::from_dual(&dual)?;
    Ok(WhPovm { displacements: set, fiducial, lambdas, povm, dual, constants })
}

/// `d √(d⁴ + d² − 1)`, the ceiling on each `tr|Θ_α|`.
pub fn theta_trace_norm_ceiling(d: usize) -> f64 {
    let d = d as f64;
    d * (d.powi(4) + d * d - 1.0).sqrt()
}
