#pragma once

#include <array>
#include <stdexcept>

namespace xcube::lattice {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

constexpr std::array<Axis, 3> kAxes = {Axis::X, Axis::Y, Axis::Z};

struct Vec3 {
    int x = 0, y = 0, z = 0;
    bool operator==(const Vec3&) const = default;
    int operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }
    int& operator[](int a) { return a == 0 ? x : (a == 1 ? y : z); }
};

// Edge identified by its base vertex and direction; it runs from `base` to
// base + e_axis (mod L). Cubes are identified by their minimal corner.
struct Edge {
    Vec3 base;
    Axis axis = Axis::X;
    bool operator==(const Edge&) const = default;
};

// Periodic L x L x L cubic lattice with flat index maps:
//   vertex_index(x,y,z) = x + L*(y + L*z)
//   edge_index(base,a)  = 3*vertex_index(base) + a
//   cube_index(corner)  = vertex_index(corner)
// Qubits live on edges; dual classical spins live at cube centers, so a cube
// index doubles as a dual-spin index. Immutable after construction.
class Geometry {
public:
    explicit Geometry(int L);

    int L() const { return L_; }
    int n_vertices() const { return L_ * L_ * L_; }
    int n_cubes() const { return L_ * L_ * L_; }
    int n_edges() const { return 3 * L_ * L_ * L_; }

    Vec3 wrap(Vec3 v) const {
        auto m = [this](int a) { return ((a % L_) + L_) % L_; };
        return {m(v.x), m(v.y), m(v.z)};
    }

    int vertex_index(Vec3 v) const {
        v = wrap(v);
        return v.x + L_ * (v.y + L_ * v.z);
    }
    Vec3 vertex_at(int i) const { return {i % L_, (i / L_) % L_, i / (L_ * L_)}; }

    int cube_index(Vec3 corner) const { return vertex_index(corner); }
    Vec3 cube_at(int i) const { return vertex_at(i); }

    int edge_index(Vec3 base, Axis a) const { return 3 * vertex_index(base) + static_cast<int>(a); }
    int edge_index(const Edge& e) const { return edge_index(e.base, e.axis); }
    Edge edge_at(int i) const { return {vertex_at(i / 3), static_cast<Axis>(i % 3)}; }

    // the 12 edges forming the 1-skeleton of a cube
    std::array<int, 12> edges_of_cube(int cube) const;

    // the 4 edges incident to a vertex lying in the plane with the given normal
    std::array<int, 4> vertex_plane_edges(int vertex, Axis normal) const;

    // the 4 cubes containing an edge = the 4 dual spins of its dual plaquette
    std::array<int, 4> spins_of_edge(int edge) const;

private:
    int L_;
};

// throws std::invalid_argument for L < 2
Geometry build_geometry(int L);

}  // namespace xcube::lattice
