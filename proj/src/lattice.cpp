#include "xcube/lattice.hpp"

namespace xcube::lattice {

Geometry::Geometry(int L) : L_(L) {
    if (L < 2) throw std::invalid_argument("Geometry: lattice size must be at least 2");
}

Geometry build_geometry(int L) { return Geometry(L); }

std::array<int, 12> Geometry::edges_of_cube(int cube) const {
    const Vec3 c = cube_at(cube);
    std::array<int, 12> out{};
    int k = 0;
    // four edges parallel to each axis, offset along the two transverse axes
    for (Axis a : kAxes) {
        const int u = (static_cast<int>(a) + 1) % 3;
        const int v = (static_cast<int>(a) + 2) % 3;
        for (int du = 0; du <= 1; ++du)
            for (int dv = 0; dv <= 1; ++dv) {
                Vec3 base = c;
                base[u] += du;
                base[v] += dv;
                out[k++] = edge_index(base, a);
            }
    }
    return out;
}

std::array<int, 4> Geometry::vertex_plane_edges(int vertex, Axis normal) const {
    const Vec3 v = vertex_at(vertex);
    std::array<int, 4> out{};
    int k = 0;
    for (Axis a : kAxes) {
        if (a == normal) continue;
        Vec3 behind = v;
        behind[static_cast<int>(a)] -= 1;
        out[k++] = edge_index(v, a);
        out[k++] = edge_index(behind, a);
    }
    return out;
}

std::array<int, 4> Geometry::spins_of_edge(int edge) const {
    const Edge e = edge_at(edge);
    const int u = (static_cast<int>(e.axis) + 1) % 3;
    const int v = (static_cast<int>(e.axis) + 2) % 3;
    std::array<int, 4> out{};
    int k = 0;
    for (int du = -1; du <= 0; ++du)
        for (int dv = -1; dv <= 0; ++dv) {
            Vec3 corner = e.base;
            corner[u] += du;
            corner[v] += dv;
            out[k++] = cube_index(corner);
        }
    return out;
}

}  // namespace xcube::lattice
