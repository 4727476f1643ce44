#pragma once

#include "xcube/bitvec.hpp"
#include "xcube/lattice.hpp"
#include "xcube/plaquette_mc.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace xcube::exact {

struct BuildOptions {
    int rank_cap = 26;     // refuse to enumerate more than 2^rank_cap structures
    int chunks = 1;        // independent Gray-walk chunks (merged deterministically)
    bool edge_tables = true;
};

// The ground state as a weighted ensemble of cubic structures: the XOR-span
// of the cube-operator supports. A structure with Q occupied edges carries
// weight e^{beta (N - 2Q)}, i.e. the Boltzmann weight of the dual plaquette
// configuration with energy E = 2Q - N. One Gray-code sweep over the 2^r
// group elements collects exact integer occupation counts, from which every
// observable follows at any beta without re-enumeration.
struct CubicStructureEnsemble {
    int n_edges = 0;                        // N = qubits = dual plaquettes
    int rank = 0;                           // r
    std::vector<BitVec> basis;              // r independent cube supports
    std::vector<std::uint64_t> count_by_q;  // [N+1]: structures with popcount Q
    std::vector<std::uint64_t> edge_count;  // [N x (N+1)] flattened; empty if not built

    std::uint64_t n_structures() const { return std::uint64_t{1} << rank; }
    const std::uint64_t* edge_row(int edge) const { return edge_count.data() + static_cast<std::size_t>(edge) * (n_edges + 1); }
};

// throws std::runtime_error naming the cap when the rank exceeds it
CubicStructureEnsemble build_ensemble(const lattice::Geometry& g, const BuildOptions& opts = {});

struct WeightedEnsembleStats {
    double beta = 0.0;
    double logZ = 0.0;
    double mean_E = 0.0;
    double var_E = 0.0;
};

WeightedEnsembleStats ensemble_stats(const CubicStructureEnsemble& ens, double beta);

// C_v = beta^2 Var(E)  (k_B = 1)
double heat_capacity(const WeightedEnsembleStats& stats);

// F = <G(beta)|G(beta+dbeta)> = exp[logZ(b+d/2) - logZ(b)/2 - logZ(b+d)/2]
double fidelity_exact(const CubicStructureEnsemble& ens, double beta, double dbeta);

struct OneQubitDiagonal {
    double w_plus = 0.0;   // structures avoiding the edge
    double w_minus = 0.0;  // structures crossing the edge
};

OneQubitDiagonal one_qubit_diagonal(const CubicStructureEnsemble& ens, double beta, int edge);

// all edges at once (one pass over the tables)
std::vector<double> w_minus_all_edges(const CubicStructureEnsemble& ens, double beta);

struct GlobalEntanglement {
    double from_qubits = 0.0;           // 2[1 - (1/N) sum_p tr rho_p^2]
    double from_internal_energy = 0.0;  // 1 - (mean_E/N)^2
};

GlobalEntanglement global_entanglement(const CubicStructureEnsemble& ens, double beta);

// <prod_{i in A} sigma^z_i> = <(-1)^{|A & structure|}>; empty A gives 1
double membrane_expectation_exact(const CubicStructureEnsemble& ens, double beta,
                                  const BitVec& edge_mask, int chunks = 1);

// Non-uniform couplings J per edge: one streaming sweep per beta (the
// Q-histogram shortcut only applies to uniform couplings).
struct CoupledObservables {
    double beta = 0.0;
    double logZ = 0.0;
    double mean_E = 0.0;
    double var_E = 0.0;
    std::vector<double> w_minus;               // per edge when requested
    std::vector<double> membrane_expectation;  // aligned with the input masks
};

CoupledObservables exact_with_couplings(const CubicStructureEnsemble& ens, double beta,
                                        std::span<const double> couplings,
                                        std::span<const BitVec> membranes = {},
                                        bool per_edge = false, int chunks = 1);

// ---------------------------------------------------------------------------
// Brute-force classical oracle: exhaustive enumeration of spin configurations
// of a (small) plaquette-Ising lattice. Ground truth for every duality claim.

struct OracleOptions {
    bool per_plaquette = false;    // <s s s s> for every plaquette (<= 12 mutable spins)
    bool per_config_probs = false; // Boltzmann probability per configuration (<= 12)
    std::vector<std::vector<int>> spin_products;  // site-id sets, tracked exactly
    bool allow_large = false;      // opt in to 2^27-configuration sweeps
};

struct OracleResult {
    double logZ = 0.0;
    double mean_E = 0.0;
    double var_E = 0.0;
    double magnetization = 0.0;                   // weighted mean mutable spin
    std::vector<double> plaquette_expectations;   // per plaquette
    // probs[mask]: bit m of mask set iff mutable spin m is -1
    std::vector<double> config_probs;
    std::vector<double> spin_product_means;
};

// throws std::invalid_argument when the mutable-spin count exceeds the guard
// (12 free, 27 behind allow_large)
OracleResult classical_oracle(const mc::SpinLattice& lat, double beta, const OracleOptions& opts = {});

}  // namespace xcube::exact
