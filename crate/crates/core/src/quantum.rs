//! Density-matrix toolkit: von Neumann entropy, mutual information,
//! measurement-conditioned entropy and quantum discord for one- and
//! two-qubit states.
//!
//! Discord is computed against projective measurements of subsystem B (the
//! second tensor factor) only. The measurement basis is parameterized by
//! Bloch angles (θ, φ); equivalently, a local unitary is applied to B
//! before measuring in the computational basis. All entropies are in bits.

use nalgebra::{Complex, DMatrix, Matrix2, Matrix4, Vector2};

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const EIGEN_FLOOR: f64 = 1e-14;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = -1e-10;

/// Dense Hermitian, unit-trace, positive matrix of dimension 2 or 4.
/// For dimension 4 the first tensor factor is subsystem A and the second
/// is subsystem B; B is the measured side.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if dim != mat.ncols() || (dim != 2 && dim != 4) {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a square 2x2 or 4x4 matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_defect = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm_defect:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let min_eig = mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// Diagonal state from a probability vector (length 2 or 4).
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let mat = DMatrix::from_fn(probs.len(), probs.len(), |i, j| {
            if i == j {
                C64::new(probs[i], 0.0)
            } else {
                C64::default()
            }
        });
        Self::new(mat)
    }

    /// Rank-one projector onto a normalized state vector.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        let n = amplitudes.len();
        let mat = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(mat)
    }

    /// ρ_A ⊗ ρ_B from two single-qubit states.
    pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                got: a.dim().max(b.dim()),
            });
        }
        Self::new(a.mat.kronecker(&b.mat))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    fn require_dim4(&self) -> Result<Matrix4<C64>> {
        if self.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                got: self.dim(),
            });
        }
        Ok(Matrix4::from_fn(|i, j| self.mat[(i, j)]))
    }

    /// Reduce a two-qubit state to subsystem A (trace out B).
    pub fn partial_trace_a(&self) -> Result<DensityMatrix> {
        let m = self.require_dim4()?;
        let mut out = Matrix2::default();
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
            }
        }
        DensityMatrix::new(DMatrix::from_fn(2, 2, |i, j| out[(i, j)]))
    }

    /// Reduce a two-qubit state to subsystem B (trace out A).
    pub fn partial_trace_b(&self) -> Result<DensityMatrix> {
        let m = self.require_dim4()?;
        let mut out = Matrix2::default();
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = m[(i, j)] + m[(2 + i, 2 + j)];
            }
        }
        DensityMatrix::new(DMatrix::from_fn(2, 2, |i, j| out[(i, j)]))
    }
}

/// Bloch angles of a single-qubit projective measurement basis.
/// θ = 0 is the computational basis; θ ∈ [0, π], φ ∈ [0, 2π) cover all
/// bases (any real angles are accepted and wrap around).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    /// The orthonormal basis pair as projectors. The first column of the
    /// rotation is (cos θ/2, e^{iφ} sin θ/2); the second is its orthogonal
    /// complement, so Π₀ + Π₁ = 1 for every (θ, φ).
    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let phase = C64::new(0.0, self.phi).exp();
        let v0 = Vector2::new(C64::new(c, 0.0), phase * s);
        let v1 = Vector2::new(-phase.conj() * s, C64::new(c, 0.0));
        [v0 * v0.adjoint(), v1 * v1.adjoint()]
    }
}

fn entropy_from_eigenvalues(eigs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for lambda in eigs {
        if lambda > EIGEN_FLOOR {
            s -= lambda * lambda.log2();
        }
    }
    s
}

/// S(ρ) = −tr(ρ log₂ ρ) in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eigs = rho.mat.clone().symmetric_eigen().eigenvalues;
    entropy_from_eigenvalues(eigs.iter().copied())
}

fn entropy4(m: &Matrix4<C64>) -> f64 {
    entropy_from_eigenvalues(m.symmetric_eigen().eigenvalues.iter().copied())
}

/// I(A:B) = S(A) + S(B) − S(AB) in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rho.require_dim4()?;
    let sa = von_neumann_entropy(&rho.partial_trace_a()?);
    let sb = von_neumann_entropy(&rho.partial_trace_b()?);
    Ok(sa + sb - von_neumann_entropy(rho))
}

/// Outcome probabilities of measuring subsystem B in the given basis.
pub fn measurement_probabilities(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<[f64; 2]> {
    let m = rho.require_dim4()?;
    let mut probs = [0.0; 2];
    for (k, proj) in basis.projectors().iter().enumerate() {
        let full = Matrix2::identity().kronecker(proj);
        probs[k] = (full * m).trace().re;
    }
    Ok(probs)
}

/// Σ_i p_i S(ρ_i) with ρ_i = Π_i ρ Π_i / p_i and Π_i acting on B.
pub fn conditional_entropy_after_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let m = rho.require_dim4()?;
    Ok(conditional_entropy4(&m, basis))
}

fn conditional_entropy4(m: &Matrix4<C64>, basis: &MeasurementBasis) -> f64 {
    let mut s = 0.0;
    for proj in basis.projectors() {
        let full = Matrix2::identity().kronecker(&proj);
        let collapsed = full * m * full;
        let p = collapsed.trace().re;
        if p > EIGEN_FLOOR {
            // the collapsed state is pure on B, so its 4×4 entropy equals
            // the entropy of the conditioned A state
            s += p * entropy4(&(collapsed / C64::new(p, 0.0)));
        }
    }
    s
}

/// J(A|{Π_B}) = S(ρ_A) − Σ_i p_i S(ρ_i): information about A extractable
/// by the given projective measurement of B.
pub fn classical_correlation(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    let sa = von_neumann_entropy(&rho.partial_trace_a()?);
    Ok(sa - conditional_entropy_after_measurement(rho, basis)?)
}

/// Result of the discord minimization.
#[derive(Debug, Clone, Copy)]
pub struct DiscordReport {
    pub discord: f64,
    pub mutual_information: f64,
    /// max over bases of J(A|{Π_B}).
    pub classical_correlation: f64,
    pub optimal_basis: MeasurementBasis,
}

const GRID_SIZE: usize = 64;
const SIMPLEX_TOL: f64 = 1e-10;
const SIMPLEX_MAX_ITER: usize = 400;

/// D(ρ) = I(A:B) − max_{θ,φ} J(A|{Π_B}), minimized over projective
/// measurements of B by a 64×64 (θ, φ) grid followed by Nelder-Mead
/// refinement seeded from the best three grid points. Deterministic.
pub fn quantum_discord(rho: &DensityMatrix) -> Result<f64> {
    Ok(quantum_discord_detailed(rho)?.discord)
}

pub fn quantum_discord_detailed(rho: &DensityMatrix) -> Result<DiscordReport> {
    let m = rho.require_dim4()?;
    let mi = mutual_information(rho)?;
    let sa = von_neumann_entropy(&rho.partial_trace_a()?);

    let objective = |angles: [f64; 2]| {
        conditional_entropy4(&m, &MeasurementBasis::new(angles[0], angles[1]))
    };

    // coarse grid over the full basis manifold
    let mut samples: Vec<([f64; 2], f64)> = Vec::with_capacity(GRID_SIZE * GRID_SIZE);
    for i in 0..GRID_SIZE {
        let theta = std::f64::consts::PI * i as f64 / (GRID_SIZE - 1) as f64;
        for j in 0..GRID_SIZE {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / GRID_SIZE as f64;
            samples.push(([theta, phi], objective([theta, phi])));
        }
    }
    samples.sort_by(|a, b| a.1.total_cmp(&b.1));
    let simplex = [samples[0].0, samples[1].0, samples[2].0];
    let (best_angles, refined) = nelder_mead(&objective, simplex);

    // the refined minimum can never exceed the best grid value
    let (min_cond, angles) = if refined <= samples[0].1 {
        (refined, best_angles)
    } else {
        (samples[0].1, samples[0].0)
    };

    let classical = sa - min_cond;
    let discord = mi - classical;
    debug_assert!(discord > -1e-9, "discord {discord} below clip tolerance");
    Ok(DiscordReport {
        discord: discord.max(0.0),
        mutual_information: mi,
        classical_correlation: classical,
        optimal_basis: MeasurementBasis::new(angles[0], angles[1]),
    })
}

/// Plain Nelder-Mead in two dimensions; returns the best point seen.
fn nelder_mead(f: &dyn Fn([f64; 2]) -> f64, init: [[f64; 2]; 3]) -> ([f64; 2], f64) {
    let mut simplex: Vec<([f64; 2], f64)> = init.iter().map(|&x| (x, f(x))).collect();
    let mut best = simplex[0];
    for _ in 0..SIMPLEX_MAX_ITER {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best.1 {
            best = simplex[0];
        }
        if (simplex[2].1 - simplex[0].1).abs() < SIMPLEX_TOL {
            break;
        }
        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let reflect = |t: f64| {
            [
                centroid[0] + t * (centroid[0] - worst.0[0]),
                centroid[1] + t * (centroid[1] - worst.0[1]),
            ]
        };
        let xr = reflect(1.0);
        let fr = f(xr);
        if fr < simplex[0].1 {
            let xe = reflect(2.0);
            let fe = f(xe);
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (xr, fr);
        } else {
            let xc = reflect(-0.5);
            let fc = f(xc);
            if fc < worst.1 {
                simplex[2] = (xc, fc);
            } else {
                // shrink towards the best vertex
                for k in 1..3 {
                    let x = [
                        0.5 * (simplex[0].0[0] + simplex[k].0[0]),
                        0.5 * (simplex[0].0[1] + simplex[k].0[1]),
                    ];
                    simplex[k] = (x, f(x));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    if simplex[0].1 < best.1 {
        best = simplex[0];
    }
    best
}

/// −p log₂ p − (1−p) log₂(1−p), with 0·log 0 = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(entropy_from_eigenvalues([p, 1.0 - p]))
}
