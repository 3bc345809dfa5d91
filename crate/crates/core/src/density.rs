//! Gate-level 4×4 density-matrix simulation of the engine cycle.
//!
//! Product basis `|00⟩, |01⟩, |10⟩, |11⟩` with qubit 1 on the left, so basis
//! index is `2·n1 + n2`. Rotations follow `R_a(θ) = exp(-iθσ_a/2)`.

use core::ops::{Add, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::engine::{self, CycleReport, EngineParams, QubitSpec};
use crate::error::{Error, Result};
use crate::units::{flip_angle_to_beta_h, FlipAngle, Frequency};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
fn modulus(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn from_index(i: u8) -> Option<Qubit> {
        match i {
            1 => Some(Qubit::One),
            2 => Some(Qubit::Two),
            _ => None,
        }
    }

    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }
}

/// Dense 2×2 complex matrix.
pub type Matrix2 = [[C64; 2]; 2];

/// Dense 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[C64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[ZERO; 4]; 4]);

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(v, 0.0);
        }
        m
    }

    /// Matrix unit `|i⟩⟨j|`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::ZERO;
        m.0[i][j] = ONE;
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| modulus(*z))
            .fold(0.0, f64::max)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Matrix4) -> Self {
        *u * *self * u.adjoint()
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
            }
        }
        m
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// Uses the real 8×8 embedding `[[A, -B], [B, A]]` of `A + iB`, whose
    /// spectrum is that of the original with every eigenvalue doubled,
    /// diagonalized by cyclic Jacobi rotations.
    pub fn hermitian_eigenvalues(&self) -> [f64; 4] {
        let mut a = [[0.0f64; 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let z = self.0[i][j];
                a[i][j] = z.re;
                a[i + 4][j + 4] = z.re;
                a[i][j + 4] = -z.im;
                a[i + 4][j] = z.im;
            }
        }
        for _sweep in 0..100 {
            let off: f64 = (0..8)
                .flat_map(|i| (0..8).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..8 {
                for q in (p + 1)..8 {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = c * akp - s * akq;
                        row[q] = s * akp + c * akq;
                    }
                    let (rp, rq) = (a[p], a[q]);
                    for k in 0..8 {
                        a[p][k] = c * rp[k] - s * rq[k];
                        a[q][k] = s * rp[k] + c * rq[k];
                    }
                }
            }
        }
        let mut ev = [0.0; 8];
        for (i, e) in ev.iter_mut().enumerate() {
            *e = a[i][i];
        }
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[2], ev[4], ev[6]]
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let mut m = Matrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(mut self, rhs: Matrix4) -> Matrix4 {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(mut self, rhs: Matrix4) -> Matrix4 {
        self.0
            .iter_mut()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .for_each(|(a, b)| *a -= b);
        self
    }
}

/// A two-qubit state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix4);

impl DensityMatrix {
    /// Validates the state invariants within [`HERMITIAN_TOL`], [`TRACE_TOL`]
    /// and [`PSD_TOL`].
    pub fn new(m: Matrix4) -> Result<Self> {
        let herm = (m - m.adjoint()).max_abs();
        if herm > HERMITIAN_TOL {
            return Err(Error::domain("hermiticity defect", herm));
        }
        let tr = m.trace();
        if modulus(tr - ONE) > TRACE_TOL {
            return Err(Error::domain("trace", tr.re));
        }
        let min_ev = m.hermitian_eigenvalues()[0];
        if min_ev < -PSD_TOL {
            return Err(Error::domain("minimum eigenvalue", min_ev));
        }
        Ok(DensityMatrix(m))
    }

    /// `|k⟩⟨k|` for basis index `k = 2·n1 + n2`.
    pub fn basis(k: usize) -> Self {
        DensityMatrix(Matrix4::unit(k, k))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Matrix4::diagonal([0.25; 4]))
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn diagonal(&self) -> [f64; 4] {
        core::array::from_fn(|i| self.0 .0[i][i].re)
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        self.0.hermitian_eigenvalues()
    }

    /// Reduced state of `keep`.
    pub fn partial_trace(&self, keep: Qubit) -> Matrix2 {
        let m = &self.0 .0;
        let mut r = [[ZERO; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                r[a][b] = (0..2)
                    .map(|t| match keep {
                        Qubit::One => m[2 * a + t][2 * b + t],
                        Qubit::Two => m[2 * t + a][2 * t + b],
                    })
                    .sum();
            }
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    RotX(Qubit, f64),
    RotY(Qubit, f64),
    RotZ(Qubit, f64),
    CNot {
        control: Qubit,
        target: Qubit,
    },
    Swap,
    /// `exp(-i(φ/4) σz⊗σz)`; free evolution under `(J/4)σzσz` for a time
    /// `t` gives `φ = 2πJt`, so `τ = 1/(2J)` is `φ = π`.
    ZZEvolution(f64),
    /// Zero every off-diagonal element (gradient crusher).
    DephaseAll,
}

fn single_qubit(q: Qubit, u: Matrix2) -> Matrix4 {
    let id = [[ONE, ZERO], [ZERO, ONE]];
    match q {
        Qubit::One => Matrix4::kron(&u, &id),
        Qubit::Two => Matrix4::kron(&id, &u),
    }
}

fn permutation(perm: [usize; 4]) -> Matrix4 {
    let mut m = Matrix4::ZERO;
    for (src, &dst) in perm.iter().enumerate() {
        m.0[dst][src] = ONE;
    }
    m
}

impl Gate {
    /// The gate's unitary, or `None` for the non-unitary [`Gate::DephaseAll`].
    pub fn unitary(&self) -> Option<Matrix4> {
        let rot = |theta: f64| (libm::cos(theta / 2.0), libm::sin(theta / 2.0));
        Some(match *self {
            Gate::RotX(q, t) => {
                let (c, s) = rot(t);
                single_qubit(
                    q,
                    [
                        [C64::new(c, 0.0), C64::new(0.0, -s)],
                        [C64::new(0.0, -s), C64::new(c, 0.0)],
                    ],
                )
            }
            Gate::RotY(q, t) => {
                let (c, s) = rot(t);
                single_qubit(
                    q,
                    [
                        [C64::new(c, 0.0), C64::new(-s, 0.0)],
                        [C64::new(s, 0.0), C64::new(c, 0.0)],
                    ],
                )
            }
            Gate::RotZ(q, t) => {
                let (c, s) = rot(t);
                single_qubit(q, [[C64::new(c, -s), ZERO], [ZERO, C64::new(c, s)]])
            }
            Gate::CNot { control, target } => {
                if control == target {
                    return Some(Matrix4::identity());
                }
                match control {
                    // |10⟩ ↔ |11⟩
                    Qubit::One => permutation([0, 1, 3, 2]),
                    // |01⟩ ↔ |11⟩
                    Qubit::Two => permutation([0, 3, 2, 1]),
                }
            }
            Gate::Swap => permutation([0, 2, 1, 3]),
            Gate::ZZEvolution(phi) => {
                let (c, s) = (libm::cos(phi / 4.0), libm::sin(phi / 4.0));
                let minus = C64::new(c, -s);
                let plus = C64::new(c, s);
                let mut m = Matrix4::ZERO;
                for (i, z) in [minus, plus, plus, minus].into_iter().enumerate() {
                    m.0[i][i] = z;
                }
                m
            }
            Gate::DephaseAll => return None,
        })
    }

    /// Applies the gate to an arbitrary operator (not only states).
    pub fn act(&self, m: &Matrix4) -> Matrix4 {
        match self.unitary() {
            Some(u) => m.conjugate_by(&u),
            None => {
                let mut d = Matrix4::ZERO;
                for i in 0..4 {
                    d.0[i][i] = m.0[i][i];
                }
                d
            }
        }
    }
}

pub fn apply_gate(rho: &DensityMatrix, g: &Gate) -> DensityMatrix {
    DensityMatrix(g.act(&rho.0))
}

pub fn apply_circuit<'a>(
    rho: &DensityMatrix,
    gates: impl IntoIterator<Item = &'a Gate>,
) -> DensityMatrix {
    gates.into_iter().fold(*rho, |r, g| apply_gate(&r, g))
}

/// Largest entry difference between the three-CNOT sequence and SWAP over
/// all 16 matrix units `|i⟩⟨j|`.
pub fn swap_cnot_distance() -> f64 {
    let seq = [
        Gate::CNot {
            control: Qubit::One,
            target: Qubit::Two,
        },
        Gate::CNot {
            control: Qubit::Two,
            target: Qubit::One,
        },
        Gate::CNot {
            control: Qubit::One,
            target: Qubit::Two,
        },
    ];
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let e = Matrix4::unit(i, j);
            let via_cnots = seq.iter().fold(e, |m, g| g.act(&m));
            worst = worst.max((via_cnots - Gate::Swap.act(&e)).max_abs());
        }
    }
    worst
}

/// Product of single-qubit Gibbs states.
pub fn gibbs_product(p: &EngineParams) -> DensityMatrix {
    let m = |q: &QubitSpec| [q.ground_population(), q.excited_population()];
    let (a, b) = (m(&p.qubit1), m(&p.qubit2));
    DensityMatrix(Matrix4::diagonal([
        a[0] * b[0],
        a[0] * b[1],
        a[1] * b[0],
        a[1] * b[1],
    ]))
}

/// `(1-η)/4 · I + η |00⟩⟨00|`.
pub fn pps_state(eta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain("pseudopure polarization", eta));
    }
    let bg = (1.0 - eta) / 4.0;
    Ok(DensityMatrix(Matrix4::diagonal([bg + eta, bg, bg, bg])))
}

/// Result of the flip-angle preparation: the circuit output and the engine
/// parameters it is meant to realize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPrep {
    pub state: DensityMatrix,
    pub params: EngineParams,
}

/// `|00⟩⟨00|` → `R_y(θ₁)` on qubit 1, `R_y(θ₂)` on qubit 2 → crusher.
pub fn thermal_prep(
    theta1: FlipAngle,
    theta2: FlipAngle,
    nu1: Frequency,
    nu2: Frequency,
) -> ThermalPrep {
    let gates = [
        Gate::RotY(Qubit::One, theta1.radians()),
        Gate::RotY(Qubit::Two, theta2.radians()),
        Gate::DephaseAll,
    ];
    let state = apply_circuit(&DensityMatrix::basis(0), &gates);
    let params = EngineParams::new(
        QubitSpec::new(nu1, flip_angle_to_beta_h(theta1, nu1)),
        QubitSpec::new(nu2, flip_angle_to_beta_h(theta2, nu2)),
    );
    ThermalPrep { state, params }
}

/// Diagonal Hamiltonian in the product basis, h·kHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian(pub [f64; 4]);

impl Hamiltonian {
    /// `-(ν/2) σz` acting on `q`.
    pub fn zeeman(q: Qubit, nu: Frequency) -> Self {
        let half = nu.khz() / 2.0;
        Hamiltonian(core::array::from_fn(|k| {
            let excited = match q {
                Qubit::One => k >> 1,
                Qubit::Two => k & 1,
            };
            if excited == 1 {
                half
            } else {
                -half
            }
        }))
    }

    pub fn shifted(&self, c: f64) -> Self {
        Hamiltonian(self.0.map(|e| e + c))
    }
}

/// `Tr[H(ρ_b - ρ_a)]`.
pub fn energy_change(rho_a: &DensityMatrix, rho_b: &DensityMatrix, h: &Hamiltonian) -> f64 {
    let (a, b) = (rho_a.diagonal(), rho_b.diagonal());
    (0..4).map(|k| h.0[k] * (b[k] - a[k])).sum()
}

/// One engine cycle on density matrices: Gibbs preparation, SWAP, energy
/// bookkeeping. Variances come from projective measurements of the prepared
/// state in the energy basis, propagated through the SWAP permutation.
pub fn run_cycle(p: &EngineParams) -> CycleReport {
    let rho_a = gibbs_product(p);
    let swap = Gate::Swap;
    let rho_b = apply_gate(&rho_a, &swap);
    let h1 = Hamiltonian::zeeman(Qubit::One, p.qubit1.epsilon);
    let h2 = Hamiltonian::zeeman(Qubit::Two, p.qubit2.epsilon);
    let de1 = energy_change(&rho_a, &rho_b, &h1);
    let de2 = energy_change(&rho_a, &rho_b, &h2);
    let (q1, q2) = (-de1, -de2);
    let entropy_term = |beta: f64, de: f64| if de == 0.0 { 0.0 } else { beta * de };
    let sigma =
        entropy_term(p.qubit1.beta_h.value(), de1) + entropy_term(p.qubit2.beta_h.value(), de2);

    // Two-point measurement: outcome k, then the SWAP sends |k⟩ to |k'⟩.
    let u = swap.unitary().unwrap_or_else(Matrix4::identity);
    let probs = rho_a.diagonal();
    let post_energy =
        |h: &Hamiltonian, k: usize| -> f64 { (0..4).map(|j| u.0[j][k].norm_sqr() * h.0[j]).sum() };
    let heat2 = |k: usize| h2.0[k] - post_energy(&h2, k);
    let heat1 = |k: usize| h1.0[k] - post_energy(&h1, k);
    let moments = |f: &dyn Fn(usize) -> f64| {
        let mean: f64 = (0..4).map(|k| probs[k] * f(k)).sum();
        (0..4)
            .map(|k| probs[k] * (f(k) - mean) * (f(k) - mean))
            .sum::<f64>()
    };
    let var_q2 = moments(&heat2);
    let var_w = moments(&|k| heat1(k) + heat2(k));

    CycleReport {
        q1_avg: q1,
        q2_avg: q2,
        w_ext_avg: q1 + q2,
        sigma_avg: sigma,
        var_q2,
        var_w,
        efficiency: engine::efficiency(p),
        regime: engine::classify_regime(p),
    }
}

/// `|Tr(ρ_e ρ_t†)| / √(Tr(ρ_e ρ_e†) Tr(ρ_t ρ_t†))`.
pub fn fidelity(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    let (e, t) = (rho_e.matrix(), rho_t.matrix());
    let ee = (*e * e.adjoint()).trace().re;
    let tt = (*t * t.adjoint()).trace().re;
    if ee <= 0.0 || tt <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let f = modulus((*e * t.adjoint()).trace()) / libm::sqrt(ee * tt);
    Ok(f.min(1.0))
}
