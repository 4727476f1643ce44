#include "xcube/stabilizer.hpp"

#include <algorithm>
#include <map>

namespace xcube::stabilizer {

using lattice::Axis;
using lattice::Geometry;
using lattice::Vec3;

int symplectic_product(const PauliOperator& p, const PauliOperator& q) {
    if (p.x.size() != q.x.size())
        throw std::invalid_argument("symplectic_product: operator length mismatch");
    return (BitVec::and_popcount(p.x, q.z) + BitVec::and_popcount(p.z, q.x)) & 1u;
}

StabilizerSet build_stabilizers(const Geometry& g) {
    StabilizerSet s;
    const int n = g.n_edges();
    s.cube_ops.reserve(g.n_cubes());
    for (int c = 0; c < g.n_cubes(); ++c) {
        PauliOperator op = PauliOperator::identity(n);
        for (int e : g.edges_of_cube(c)) op.x.set(e);
        s.cube_ops.push_back(std::move(op));
    }
    s.vertex_ops.reserve(3 * g.n_vertices());
    for (int v = 0; v < g.n_vertices(); ++v)
        for (Axis normal : lattice::kAxes) {
            PauliOperator op = PauliOperator::identity(n);
            for (int e : g.vertex_plane_edges(v, normal)) op.z.set(e);
            s.vertex_ops.push_back(std::move(op));
        }
    return s;
}

Syndrome syndrome(const PauliOperator& p, const StabilizerSet& stabs) {
    Syndrome out;
    for (std::size_t c = 0; c < stabs.cube_ops.size(); ++c)
        if (symplectic_product(p, stabs.cube_ops[c])) out.violated_cubes.push_back(static_cast<int>(c));
    for (std::size_t i = 0; i < stabs.vertex_ops.size(); ++i)
        if (symplectic_product(p, stabs.vertex_ops[i]))
            out.violated_vertex_ops.emplace_back(static_cast<int>(i / 3), static_cast<Axis>(i % 3));
    return out;
}

RankReport stabilizer_ranks(const Geometry& g, const StabilizerSet& stabs) {
    const int n = g.n_edges();
    // full (x|z) symplectic representation
    std::vector<BitVec> sym;
    sym.reserve(stabs.cube_ops.size() + stabs.vertex_ops.size());
    auto symplectic_row = [n](const PauliOperator& p) {
        BitVec row(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            if (p.x.test(i)) row.set(i);
            if (p.z.test(i)) row.set(n + i);
        }
        return row;
    };
    std::vector<BitVec> xs, zs;
    for (const auto& op : stabs.cube_ops) {
        sym.push_back(symplectic_row(op));
        xs.push_back(op.x);
    }
    for (const auto& op : stabs.vertex_ops) {
        sym.push_back(symplectic_row(op));
        zs.push_back(op.z);
    }
    RankReport r;
    r.cube_rank = static_cast<int>(gf2_rank(std::move(xs)));
    r.vertex_rank = static_cast<int>(gf2_rank(std::move(zs)));
    r.total_rank = static_cast<int>(gf2_rank(std::move(sym)));
    r.k = n - r.total_rank;
    return r;
}

int degeneracy_exponent(const Geometry& g, const StabilizerSet& stabs) {
    return stabilizer_ranks(g, stabs).k;
}

namespace {

MobilityExperiment summarize(const Geometry& g, std::string name, char pauli,
                             const std::vector<int>& edges, const StabilizerSet& stabs) {
    PauliOperator op = PauliOperator::identity(g.n_edges());
    for (int e : edges) (pauli == 'X' ? op.x : op.z).flip(e);
    const Syndrome s = syndrome(op, stabs);

    MobilityExperiment exp;
    exp.name = std::move(name);
    exp.pauli = pauli;
    exp.edges = edges;
    exp.n_violated_cubes = static_cast<int>(s.violated_cubes.size());
    exp.n_violated_vertex_ops = static_cast<int>(s.violated_vertex_ops.size());
    exp.cube_locations = s.violated_cubes;

    std::map<int, int> per_vertex;
    for (const auto& [v, normal] : s.violated_vertex_ops) per_vertex[v]++;
    for (const auto& [v, count] : per_vertex) {
        exp.vertex_locations.push_back(v);
        exp.violations_per_vertex.push_back(count);
    }
    return exp;
}

}  // namespace

MobilityReport mobility_experiments(const Geometry& g) {
    if (g.L() < 3) throw std::invalid_argument("mobility_experiments: requires L >= 3");

    const StabilizerSet stabs = build_stabilizers(g);
    const int L = g.L();
    // keep strings shorter than L so they do not close around the torus
    const int len = std::min(3, L - 1);

    MobilityReport report;
    report.L = L;

    // (a) straight sigma-x string along +x: a lineon pair at the endpoints
    std::vector<int> straight;
    for (int i = 0; i < 2; ++i) straight.push_back(g.edge_index({i, 0, 0}, Axis::X));
    report.experiments.push_back(summarize(g, "straight_x_string", 'X', straight, stabs));

    // (b) the same string turning into +y: extra excitations at the corner
    std::vector<int> bent = straight;
    bent.push_back(g.edge_index({2, 0, 0}, Axis::Y));
    report.experiments.push_back(summarize(g, "l_shaped_x_string", 'X', bent, stabs));

    // (c) one sigma-z: four fractons on the surrounding cubes
    report.experiments.push_back(
        summarize(g, "single_z", 'Z', {g.edge_index({1, 1, 1}, Axis::Z)}, stabs));

    // (d) parallel z-edges marching along +x: the planon pair moves, interior cancels
    std::vector<int> planar;
    for (int i = 0; i < len; ++i) planar.push_back(g.edge_index({1 + i, 1, 1}, Axis::Z));
    report.experiments.push_back(summarize(g, "collinear_z_chain", 'Z', planar, stabs));

    return report;
}

}  // namespace xcube::stabilizer
