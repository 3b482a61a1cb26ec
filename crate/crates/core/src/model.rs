//! Exact ground state of the deformed toric code on small tori.
//!
//! The Hamiltonian is the toric code with the star term deformed by a
//! diagonal exponential,
//!
//! H = −λ₀ Σ_p B_p − λ₁ Σ_s A_s + λ₁ Σ_s exp(−β Σ_{i∈s} σ^z_i),
//!
//! whose ground state in the sector of the fully magnetized state |0…0⟩ is
//! an explicit superposition over the orbit of |0⟩ under the star group,
//! with weights exp(β Σ_i σ^z_i / 2). Squared amplitudes reproduce the 2D
//! classical Ising Boltzmann distribution, which is what every observable
//! here reduces to. At β = 0 the state is the uniform toric-code ground
//! state; for β → ∞ it collapses onto |0⟩; the transition sits at
//! β_c = ½ ln(1+√2).
//!
//! Amplitudes are kept as log-weights until the final normalization, so
//! β up to the sweep cap never overflows.

use std::collections::HashMap;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::ising::{brute_force_moment, transfer_matrix_moment, IsingModel, MomentMethod};
use crate::lattice::{SpinPairKind, TorusLattice};
use crate::quantum::DensityMatrix;

type C64 = Complex<f64>;

/// Largest linear size for exact state-vector work: the orbit has
/// 2^(L²−1) elements, i.e. 32768 amplitudes over 32 spins at L = 4.
pub const MAX_STATE_VECTOR_L: usize = 4;

/// Sparse ground-state vector over the star-group orbit of |0⟩.
///
/// Bitstrings index edge-spins (bit = 1 means the spin was flipped from
/// the reference state); amplitudes are strictly positive and normalized.
#[derive(Debug, Clone)]
pub struct GroundState {
    lattice: TorusLattice,
    beta: f64,
    bits: Vec<u64>,
    amps: Vec<f64>,
    index: HashMap<u64, usize>,
    /// ln Σ_{g∈G} exp(β Σ_i σ_i(g)) over the gauge-fixed group.
    log_normalizer: f64,
}

impl GroundState {
    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn support_size(&self) -> usize {
        self.bits.len()
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn amplitude(&self, bits: u64) -> Option<f64> {
        self.index.get(&bits).map(|&i| self.amps[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.bits.iter().copied().zip(self.amps.iter().copied())
    }
}

/// Build the exact ground state at coupling β.
///
/// Group elements are enumerated by pinning vertex 0 (the product of all
/// stars is the identity, so dropping one generator removes the double
/// count); the orbit then has exactly 2^(L²−1) distinct bitstrings.
pub fn build_ground_state(lattice: &TorusLattice, beta: f64) -> Result<GroundState> {
    let l = lattice.linear_size();
    if l > MAX_STATE_VECTOR_L {
        return Err(Error::SizeLimit {
            method: "state vector",
            limit: "L = 4",
            got: l,
        });
    }
    if beta < 0.0 {
        return Err(Error::NegativeBeta(beta));
    }

    let masks: Vec<u64> = (1..lattice.n_vertices())
        .map(|v| lattice.star_mask(v))
        .collect::<Result<_>>()?;
    let n_free = masks.len();
    let n_edges = lattice.n_edges() as i64;

    let mut entries: Vec<(u64, f64)> = Vec::with_capacity(1 << n_free);
    for subset in 0u64..(1u64 << n_free) {
        let mut bits = 0u64;
        for (k, &m) in masks.iter().enumerate() {
            if (subset >> k) & 1 == 1 {
                bits ^= m;
            }
        }
        // Σ_i σ_i(x) = n_edges − 2·(flipped spins); half of it is the
        // log-weight of the amplitude
        let magnetization = n_edges - 2 * bits.count_ones() as i64;
        entries.push((bits, beta * magnetization as f64 / 2.0));
    }
    entries.sort_unstable_by_key(|&(b, _)| b);

    let max_lw = entries.iter().map(|&(_, lw)| lw).fold(f64::NEG_INFINITY, f64::max);
    let mut amps: Vec<f64> = entries.iter().map(|&(_, lw)| (lw - max_lw).exp()).collect();
    let norm_sq: f64 = amps.iter().map(|a| a * a).sum();
    let inv_norm = 1.0 / norm_sq.sqrt();
    for a in &mut amps {
        *a *= inv_norm;
    }

    let bits: Vec<u64> = entries.iter().map(|&(b, _)| b).collect();
    let mut index = HashMap::with_capacity(bits.len());
    for (i, &b) in bits.iter().enumerate() {
        let clash = index.insert(b, i);
        debug_assert!(clash.is_none(), "star masks are not independent");
    }

    Ok(GroundState {
        lattice: lattice.clone(),
        beta,
        bits,
        amps,
        index,
        log_normalizer: 2.0 * max_lw + norm_sq.ln(),
    })
}

/// Single-edge Pauli operators; identity is simply absence from the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Sparse Hermitian product of single-edge Paulis.
#[derive(Debug, Clone, Default)]
pub struct PauliString {
    ops: std::collections::BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn with(mut self, edge: usize, op: Pauli) -> Self {
        self.ops.insert(edge, op);
        self
    }

    pub fn z_string(edges: &[usize]) -> Self {
        let mut s = Self::identity();
        for &e in edges {
            s.ops.insert(e, Pauli::Z);
        }
        s
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.ops.iter().map(|(&e, &p)| (e, p))
    }
}

/// ⟨GS| op |GS⟩. Z-strings evaluate diagonally over the sparse support;
/// X/Y support pairs amplitudes across the matching bit-flip.
pub fn expectation(state: &GroundState, op: &PauliString) -> f64 {
    let mut flip_mask = 0u64;
    let mut phase_mask = 0u64;
    let mut y_count = 0u32;
    for (edge, p) in op.support() {
        match p {
            Pauli::X => flip_mask |= 1 << edge,
            Pauli::Z => phase_mask |= 1 << edge,
            Pauli::Y => {
                flip_mask |= 1 << edge;
                phase_mask |= 1 << edge;
                y_count += 1;
            }
        }
    }
    // i^{#Y} is real for Hermitian use; expectation of any Pauli string on
    // a real state vector has vanishing imaginary part anyway
    let y_phase = C64::new(0.0, 1.0).powu(y_count);
    let mut total = C64::default();
    for (bits, amp) in state.iter() {
        let Some(partner) = state.amplitude(bits ^ flip_mask) else {
            continue;
        };
        let sign = if (bits & phase_mask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        total += y_phase * (sign * amp * partner);
    }
    debug_assert!(total.im.abs() < 1e-12);
    total.re
}

/// H|GS⟩ at the state's own β, as a sparse map from bitstring to amplitude.
pub fn apply_hamiltonian(state: &GroundState, lambda0: f64, lambda1: f64) -> HashMap<u64, f64> {
    apply_hamiltonian_at(state, lambda0, lambda1, state.beta)
}

/// H|GS⟩ with the exponential star term evaluated at an explicit β; a
/// mismatched β breaks the per-star cancellation and shows up as a residual.
pub fn apply_hamiltonian_at(
    state: &GroundState,
    lambda0: f64,
    lambda1: f64,
    hamiltonian_beta: f64,
) -> HashMap<u64, f64> {
    let lattice = state.lattice();
    let plaquettes: Vec<u64> = (0..lattice.n_plaquettes())
        .map(|p| lattice.plaquette_mask(p).expect("plaquette index in range"))
        .collect();
    let stars: Vec<u64> = (0..lattice.n_vertices())
        .map(|s| lattice.star_mask(s).expect("vertex index in range"))
        .collect();

    let mut out: HashMap<u64, f64> = HashMap::with_capacity(state.support_size());
    for (bits, amp) in state.iter() {
        let plaquette_sum: f64 = plaquettes
            .iter()
            .map(|&m| if (bits & m).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .sum();
        *out.entry(bits).or_default() -= lambda0 * plaquette_sum * amp;
        for &m in &stars {
            // −λ₁ A_s |x⟩ flips the star's edges
            *out.entry(bits ^ m).or_default() -= lambda1 * amp;
            // +λ₁ exp(−β Σ_{i∈s} σ_i(x)) is diagonal
            let star_mag = 4.0 - 2.0 * (bits & m).count_ones() as f64;
            *out.entry(bits).or_default() += lambda1 * (-hamiltonian_beta * star_mag).exp() * amp;
        }
    }
    out
}

/// ‖H|GS⟩ + λ₀L²|GS⟩‖: zero (to rounding) exactly when the state is the
/// eigenstate with all plaquettes satisfied and every star pair cancelled.
pub fn eigenstate_residual(state: &GroundState, lambda0: f64, lambda1: f64) -> f64 {
    eigenstate_residual_at(state, lambda0, lambda1, state.beta)
}

pub fn eigenstate_residual_at(
    state: &GroundState,
    lambda0: f64,
    lambda1: f64,
    hamiltonian_beta: f64,
) -> f64 {
    let h = apply_hamiltonian_at(state, lambda0, lambda1, hamiltonian_beta);
    let target = lambda0 * state.lattice().n_vertices() as f64;
    let mut sq = 0.0;
    for (&bits, &value) in &h {
        let amp = state.amplitude(bits).unwrap_or(0.0);
        let r = value + target * amp;
        sq += r * r;
    }
    sq.sqrt()
}

/// Partial trace of |GS⟩⟨GS| onto the spins of edges (i, j); the first
/// tensor factor is edge i. Loop symmetry forces the result diagonal.
pub fn reduced_two_spin(state: &GroundState, i: usize, j: usize) -> Result<DensityMatrix> {
    let n_edges = state.lattice().n_edges();
    for e in [i, j] {
        if e >= n_edges {
            return Err(Error::IndexOutOfRange {
                what: "edge",
                index: e,
                size: n_edges,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidDensityMatrix(
            "two-spin reduction needs distinct edges".into(),
        ));
    }
    let (bi, bj) = (1u64 << i, 1u64 << j);
    let mut buckets: HashMap<u64, [f64; 4]> = HashMap::new();
    for (bits, amp) in state.iter() {
        let slot = (((bits & bi != 0) as usize) << 1) | (bits & bj != 0) as usize;
        buckets.entry(bits & !(bi | bj)).or_default()[slot] += amp;
    }
    let mut rho = [[0.0f64; 4]; 4];
    for v in buckets.values() {
        for a in 0..4 {
            for b in 0..4 {
                rho[a][b] += v[a] * v[b];
            }
        }
    }
    DensityMatrix::new(DMatrix::from_fn(4, 4, |a, b| C64::new(rho[a][b], 0.0)))
}

/// Single-spin reduction of edge k.
pub fn reduced_single_spin(state: &GroundState, k: usize) -> Result<DensityMatrix> {
    let n_edges = state.lattice().n_edges();
    if k >= n_edges {
        return Err(Error::IndexOutOfRange {
            what: "edge",
            index: k,
            size: n_edges,
        });
    }
    let bk = 1u64 << k;
    let mut buckets: HashMap<u64, [f64; 2]> = HashMap::new();
    for (bits, amp) in state.iter() {
        buckets.entry(bits & !bk).or_default()[(bits & bk != 0) as usize] += amp;
    }
    let mut rho = [[0.0f64; 2]; 2];
    for v in buckets.values() {
        for a in 0..2 {
            for b in 0..2 {
                rho[a][b] += v[a] * v[b];
            }
        }
    }
    DensityMatrix::new(DMatrix::from_fn(2, 2, |a, b| C64::new(rho[a][b], 0.0)))
}

/// Diagonal two-spin probabilities from the magnetizations and the
/// two-spin correlator: p(a, b) = (1 ± m_i ± m_j + (±)c)/4.
pub fn two_spin_probabilities(m_i: f64, m_j: f64, c: f64) -> [f64; 4] {
    [
        0.25 * (1.0 + m_i + m_j + c),
        0.25 * (1.0 + m_i - m_j - c),
        0.25 * (1.0 - m_i + m_j - c),
        0.25 * (1.0 - m_i - m_j + c),
    ]
}

fn ising_moment_by(model: &IsingModel, set: &[usize], method: MomentMethod) -> Result<f64> {
    match method {
        MomentMethod::BruteForce => Ok(brute_force_moment(model, set)?.value),
        MomentMethod::TransferMatrix => Ok(transfer_matrix_moment(model, set)?.value),
        MomentMethod::Onsager => Err(Error::InvalidConfig(
            "the thermodynamic closed form only provides the nearest-neighbour moment".into(),
        )),
    }
}

/// The canonical-pair two-spin state built from Ising moments alone,
/// usable far beyond state-vector sizes. The spin pair geometry comes from
/// the pair kind's vertex-support offsets embedded into the Ising torus.
pub fn reduced_two_spin_via_ising(
    ising: &IsingModel,
    kind: SpinPairKind,
    method: MomentMethod,
) -> Result<DensityMatrix> {
    let nn: Vec<usize> = [(0i64, 0i64), (0, 1)]
        .iter()
        .map(|&(r, c)| ising.site(r, c))
        .collect();
    // offsets landing on the same site cancel pairwise (θ² = 1), which is
    // how the doubled-bond torus degenerates the vertex-sharing support
    let mut parity: HashMap<usize, bool> = HashMap::new();
    for &(r, c) in kind.support_offsets() {
        let site = ising.site(r, c);
        *parity.entry(site).or_default() ^= true;
    }
    let mut pair: Vec<usize> = parity
        .into_iter()
        .filter_map(|(site, odd)| odd.then_some(site))
        .collect();
    pair.sort_unstable();
    // doubled-bond geometry can collapse the support entirely; the spin
    // product is then deterministically 1
    let m = ising_moment_by(ising, &nn, method)?;
    let c = if pair.is_empty() {
        1.0
    } else {
        ising_moment_by(ising, &pair, method)?
    };
    DensityMatrix::from_diagonal(&two_spin_probabilities(m, m, c))
}

/// Schmidt weights (a², b²) of the bipartition of the ground state into
/// one spin and the rest of the lattice, from the state vector.
///
/// The two branches live on disjoint supports (distinct orbit states
/// differ in at least four spins), which this asserts before summing.
pub fn spin_vs_rest(state: &GroundState, k: usize) -> Result<(f64, f64)> {
    let n_edges = state.lattice().n_edges();
    if k >= n_edges {
        return Err(Error::IndexOutOfRange {
            what: "edge",
            index: k,
            size: n_edges,
        });
    }
    let bk = 1u64 << k;
    let mut a_sq = 0.0;
    let mut b_sq = 0.0;
    for (bits, amp) in state.iter() {
        assert!(
            state.amplitude(bits ^ bk).is_none(),
            "spin-up and spin-down branches must not overlap"
        );
        if bits & bk == 0 {
            a_sq += amp * amp;
        } else {
            b_sq += amp * amp;
        }
    }
    Ok((a_sq, b_sq))
}

/// Schmidt weights from the nearest-neighbour Ising moment of the spin's
/// endpoint pair: a² − b² = ⟨θθ'⟩ and a² + b² = 1.
pub fn spin_vs_rest_from_moment(nn_moment: f64) -> (f64, f64) {
    (0.5 * (1.0 + nn_moment), 0.5 * (1.0 - nn_moment))
}

/// Discord and mutual information of the spin-vs-rest bipartition. For a
/// pure bipartite state the discord equals the entanglement entropy and
/// half the mutual information.
pub fn global_discord(a_sq: f64, b_sq: f64) -> Result<(f64, f64)> {
    if a_sq < 0.0 {
        return Err(Error::InvalidProbability(a_sq));
    }
    if b_sq < 0.0 {
        return Err(Error::InvalidProbability(b_sq));
    }
    if (a_sq + b_sq - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbability(a_sq + b_sq));
    }
    let discord = crate::quantum::binary_entropy(a_sq.clamp(0.0, 1.0))?;
    Ok((discord, 2.0 * discord))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::critical_beta;
    use crate::lattice::build_lattice;
    use approx::assert_abs_diff_eq;

    fn state(l: usize, beta: f64) -> GroundState {
        build_ground_state(&build_lattice(l).unwrap(), beta).unwrap()
    }

    #[test]
    fn toric_code_point_is_uniform() {
        let gs = state(2, 0.0);
        assert_eq!(gs.support_size(), 8);
        let expected = 1.0 / 8f64.sqrt();
        for (_, amp) in gs.iter() {
            assert_abs_diff_eq!(amp, expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn large_beta_concentrates_on_the_reference_state() {
        let gs = state(2, 5.0);
        assert!(gs.amplitude(0).unwrap() > 0.999);
    }

    #[test]
    fn orbit_is_closed_under_star_flips() {
        let gs = state(3, 0.7);
        assert_eq!(gs.support_size(), 256);
        let lat = gs.lattice().clone();
        for s in 0..lat.n_vertices() {
            let mask = lat.star_mask(s).unwrap();
            for (bits, _) in gs.iter() {
                assert!(gs.amplitude(bits ^ mask).is_some());
            }
        }
        // normalization and positivity
        let norm: f64 = gs.iter().map(|(_, a)| a * a).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        assert!(gs.iter().all(|(_, a)| a > 0.0));
    }

    #[test]
    fn distinct_orbit_states_differ_in_at_least_four_spins() {
        // also holds at L = 2 despite the doubled bonds
        for l in [2usize, 3] {
            let gs = state(l, 0.3);
            let all: Vec<u64> = gs.iter().map(|(b, _)| b).collect();
            for (n, &x) in all.iter().enumerate() {
                for &y in &all[n + 1..] {
                    assert!((x ^ y).count_ones() >= 4, "L={l}: {x:b} vs {y:b}");
                }
            }
        }
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let lat = build_lattice(3).unwrap();
        assert!(build_ground_state(&lat, -0.1).is_err());
        let big = build_lattice(5).unwrap();
        assert!(build_ground_state(&big, 0.3).is_err());
    }

    #[test]
    fn normalizer_matches_the_ising_partition_function() {
        // the θ-configuration sum double-counts the gauge-fixed group sum
        for (l, beta) in [(2usize, 0.4), (3, 0.7)] {
            let gs = state(l, beta);
            let ising = IsingModel::new(l, l, beta).unwrap();
            let log_z = crate::ising::brute_force_log_partition(&ising).unwrap();
            assert_abs_diff_eq!(
                gs.log_normalizer() + std::f64::consts::LN_2,
                log_z,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn ground_state_is_an_exact_eigenstate() {
        for l in [2usize, 3] {
            for beta in [0.0, 0.25, critical_beta(), 0.8] {
                let gs = state(l, beta);
                let r = eigenstate_residual(&gs, 1.0, 1.0);
                assert!(r < 1e-10, "L={l} beta={beta}: residual {r}");
            }
        }
        // eigenvalue is −λ₀L²: different λ still cancels the star terms
        let gs = state(2, 0.6);
        assert!(eigenstate_residual(&gs, 2.5, 0.7) < 1e-10);
    }

    #[test]
    fn mismatched_hamiltonian_beta_is_detected() {
        let gs = state(2, 0.2);
        assert!(eigenstate_residual_at(&gs, 1.0, 1.0, 0.4) > 1e-3);
    }

    #[test]
    fn sigma_z_matches_the_exact_2x2_moment() {
        let gs = state(2, critical_beta());
        let v = expectation(&gs, &PauliString::identity().with(0, Pauli::Z));
        // 3√2/5, the hand-enumerated 2×2 nearest moment at β_c
        assert_abs_diff_eq!(v, 3.0 * std::f64::consts::SQRT_2 / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn single_x_vanishes_and_z_loops_are_satisfied() {
        let gs = state(3, 0.5);
        for edge in [0usize, 7, 13] {
            let v = expectation(&gs, &PauliString::identity().with(edge, Pauli::X));
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
            let v = expectation(&gs, &PauliString::identity().with(edge, Pauli::Y));
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        }
        for loop_edges in gs.lattice().z_loops().to_vec() {
            let v = expectation(&gs, &PauliString::z_string(&loop_edges));
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn z_strings_reduce_to_ising_moments() {
        let beta = 0.45;
        for l in [2usize, 3] {
            let gs = state(l, beta);
            let lat = gs.lattice().clone();
            let ising = IsingModel::new(l, l, beta).unwrap();
            for edges in [vec![0usize], vec![0, 3], vec![1, 2, 5]] {
                let support = lat.edges_to_vertex_support(&edges).unwrap();
                let expected = brute_force_moment(&ising, &support).unwrap().value;
                let got = expectation(&gs, &PauliString::z_string(&edges));
                assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_spin_reduction_reference_points() {
        // β = 0: completely uncorrelated, ρ = 1/4
        let gs = state(3, 0.0);
        let rho = reduced_two_spin(&gs, 0, 2).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expected = if a == b { 0.25 } else { 0.0 };
                assert_abs_diff_eq!(rho.entry(a, b).re, expected, epsilon = 1e-12);
            }
        }
        // large β: fully magnetized
        let gs = state(3, 3.0);
        let rho = reduced_two_spin(&gs, 0, 2).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 1.0, epsilon = 1e-4);

        assert!(reduced_two_spin(&gs, 1, 1).is_err());
    }

    #[test]
    fn reduction_is_diagonal_and_matches_the_moment_formula() {
        let beta = 0.4;
        let gs = state(3, beta);
        let lat = gs.lattice().clone();
        let ising = IsingModel::new(3, 3, beta).unwrap();
        for kind in [SpinPairKind::VertexSharing, SpinPairKind::PlaquetteParallel] {
            let (i, j) = lat.resolve_pair(kind);
            let rho = reduced_two_spin(&gs, i, j).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    if a != b {
                        assert!(rho.entry(a, b).norm() < 1e-12);
                    }
                }
            }
            let m_i = brute_force_moment(&ising, &lat.edges_to_vertex_support(&[i]).unwrap())
                .unwrap()
                .value;
            let m_j = brute_force_moment(&ising, &lat.edges_to_vertex_support(&[j]).unwrap())
                .unwrap()
                .value;
            let c = brute_force_moment(&ising, &lat.edges_to_vertex_support(&[i, j]).unwrap())
                .unwrap()
                .value;
            let probs = two_spin_probabilities(m_i, m_j, c);
            for (slot, &p) in probs.iter().enumerate() {
                assert_abs_diff_eq!(rho.entry(slot, slot).re, p, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ising_route_agrees_with_the_state_vector() {
        let beta = 0.3;
        let gs = state(3, beta);
        let lat = gs.lattice().clone();
        let ising = IsingModel::new(3, 3, beta).unwrap();
        for kind in [SpinPairKind::VertexSharing, SpinPairKind::PlaquetteParallel] {
            let (i, j) = lat.resolve_pair(kind);
            let direct = reduced_two_spin(&gs, i, j).unwrap();
            let via = reduced_two_spin_via_ising(&ising, kind, MomentMethod::BruteForce).unwrap();
            for d in 0..4 {
                assert_abs_diff_eq!(
                    via.entry(d, d).re,
                    direct.entry(d, d).re,
                    epsilon = 1e-12
                );
            }
        }
        // β = 0 gives the maximally mixed pair through the Ising route too
        let cold = IsingModel::new(3, 3, 0.0).unwrap();
        let rho = reduced_two_spin_via_ising(&cold, SpinPairKind::VertexSharing, MomentMethod::BruteForce)
            .unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn ising_route_stays_a_valid_state_on_a_large_torus() {
        let ising = IsingModel::new(12, 12, critical_beta()).unwrap();
        let rho =
            reduced_two_spin_via_ising(&ising, SpinPairKind::VertexSharing, MomentMethod::TransferMatrix)
                .unwrap();
        let mut sum = 0.0;
        for d in 0..4 {
            let p = rho.entry(d, d).re;
            assert!(p >= -1e-12);
            sum += p;
        }
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn onsager_route_is_rejected_for_pair_correlators() {
        let ising = IsingModel::new(4, 4, 0.3).unwrap();
        assert!(
            reduced_two_spin_via_ising(&ising, SpinPairKind::VertexSharing, MomentMethod::Onsager)
                .is_err()
        );
    }

    #[test]
    fn schmidt_weights_from_state_and_moment_agree() {
        assert_eq!(spin_vs_rest(&state(2, 0.0), 0).unwrap(), (0.5, 0.5));

        let beta = critical_beta();
        let gs = state(2, beta);
        let (a_sq, b_sq) = spin_vs_rest(&gs, 0).unwrap();
        assert_abs_diff_eq!(a_sq + b_sq, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a_sq, 0.924264068712, epsilon = 1e-10);

        let ising = IsingModel::new(2, 2, beta).unwrap();
        let support = gs.lattice().edges_to_vertex_support(&[0]).unwrap();
        let moment = brute_force_moment(&ising, &support).unwrap().value;
        let (a2m, b2m) = spin_vs_rest_from_moment(moment);
        assert_abs_diff_eq!(a_sq, a2m, epsilon = 1e-12);
        assert_abs_diff_eq!(b_sq, b2m, epsilon = 1e-12);

        // single-spin entropy from the direct partial trace matches
        let rho_k = reduced_single_spin(&gs, 0).unwrap();
        let s = crate::quantum::von_neumann_entropy(&rho_k);
        let expected = -a_sq * a_sq.log2() - b_sq * b_sq.log2();
        assert_abs_diff_eq!(s, expected, epsilon = 1e-10);
    }

    #[test]
    fn global_discord_reference_points() {
        let (d, mi) = global_discord(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(mi, 2.0, epsilon = 1e-14);

        let (d, mi) = global_discord(1.0, 0.0).unwrap();
        assert_eq!((d, mi), (0.0, 0.0));

        let (d, _) = global_discord(0.8536, 0.1464).unwrap();
        assert_abs_diff_eq!(d, 0.600757491465, epsilon = 1e-9);

        assert!(global_discord(-0.1, 1.1).is_err());
        assert!(global_discord(0.7, 0.7).is_err());
    }
}
