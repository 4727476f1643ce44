#pragma once

#include "xcube/bitvec.hpp"
#include "xcube/lattice.hpp"

#include <string>
#include <utility>
#include <vector>

namespace xcube::stabilizer {

// Product of Pauli operators as a pair of GF(2) supports; phases are not
// tracked (mod-2 symplectic arithmetic only).
struct PauliOperator {
    BitVec x;  // bit set = sigma-x acts on that edge
    BitVec z;  // bit set = sigma-z acts on that edge

    static PauliOperator identity(int n_edges) {
        return {BitVec(static_cast<std::size_t>(n_edges)), BitVec(static_cast<std::size_t>(n_edges))};
    }
    PauliOperator& operator*=(const PauliOperator& o) {
        x ^= o.x;
        z ^= o.z;
        return *this;
    }
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) { return a *= b; }
};

// 0 if the operators commute, 1 if they anticommute.
// Throws std::invalid_argument on length mismatch.
int symplectic_product(const PauliOperator& p, const PauliOperator& q);

struct StabilizerSet {
    // cube_ops[c]: X-type, weight 12, support = edges_of_cube(c)
    std::vector<PauliOperator> cube_ops;
    // vertex_ops[3*v + normal]: Z-type, weight 4, support = vertex_plane_edges(v, normal)
    std::vector<PauliOperator> vertex_ops;
};

StabilizerSet build_stabilizers(const lattice::Geometry& g);

struct Syndrome {
    std::vector<int> violated_cubes;                            // cube indices
    std::vector<std::pair<int, lattice::Axis>> violated_vertex_ops;  // (vertex, normal)

    std::size_t size() const { return violated_cubes.size() + violated_vertex_ops.size(); }
};

// every generator anticommuting with p
Syndrome syndrome(const PauliOperator& p, const StabilizerSet& stabs);

struct RankReport {
    int cube_rank = 0;       // rank of the X-type supports
    int vertex_rank = 0;     // rank of the Z-type supports
    int total_rank = 0;      // rank of the full symplectic generator matrix
    int k = 0;               // N_edges - total_rank; equals 6L-3 on the periodic lattice
};

RankReport stabilizer_ranks(const lattice::Geometry& g, const StabilizerSet& stabs);

// log2 of the ground-state degeneracy
int degeneracy_exponent(const lattice::Geometry& g, const StabilizerSet& stabs);

// Excitation-mobility experiments: string operators are built
// programmatically and their syndromes summarized.
struct MobilityExperiment {
    std::string name;
    char pauli = 'X';                // which Pauli the string is made of
    std::vector<int> edges;          // support of the string
    int n_violated_vertex_ops = 0;
    int n_violated_cubes = 0;
    std::vector<int> vertex_locations;     // distinct vertices carrying violations
    std::vector<int> violations_per_vertex;  // aligned with vertex_locations
    std::vector<int> cube_locations;
};

struct MobilityReport {
    int L = 0;
    std::vector<MobilityExperiment> experiments;
};

// requires L >= 3; string lengths adapt so nothing wraps around the torus
MobilityReport mobility_experiments(const lattice::Geometry& g);

}  // namespace xcube::stabilizer
