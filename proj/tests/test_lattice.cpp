#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xcube/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

using namespace xcube::lattice;

TEST_CASE("geometry counts and size guard") {
    const Geometry g2(2);
    CHECK(g2.n_edges() == 24);
    CHECK(g2.n_cubes() == 8);
    CHECK(g2.n_vertices() == 8);
    CHECK(Geometry(3).n_edges() == 81);
    CHECK_THROWS_AS(build_geometry(1), std::invalid_argument);
    CHECK_THROWS_AS(build_geometry(0), std::invalid_argument);
}

TEST_CASE("index maps are bijective for L = 2..16") {
    for (int L = 2; L <= 16; ++L) {
        const Geometry g(L);
        for (int v = 0; v < g.n_vertices(); ++v) CHECK(g.vertex_index(g.vertex_at(v)) == v);
        for (int c = 0; c < g.n_cubes(); ++c) CHECK(g.cube_index(g.cube_at(c)) == c);
        for (int e = 0; e < g.n_edges(); ++e) CHECK(g.edge_index(g.edge_at(e)) == e);
    }
}

TEST_CASE("wrapping is periodic") {
    const Geometry g(4);
    CHECK(g.vertex_index({-1, 0, 0}) == g.vertex_index({3, 0, 0}));
    CHECK(g.vertex_index({4, 5, -4}) == g.vertex_index({0, 1, 0}));
}

TEST_CASE("every cube has 12 distinct edges; every edge lies in 4 cubes") {
    for (int L : {2, 3}) {
        const Geometry g(L);
        std::vector<int> incidence(g.n_edges(), 0);
        for (int c = 0; c < g.n_cubes(); ++c) {
            const auto edges = g.edges_of_cube(c);
            CHECK(std::set<int>(edges.begin(), edges.end()).size() == 12);
            for (int e : edges) ++incidence[e];
        }
        CHECK(std::all_of(incidence.begin(), incidence.end(), [](int n) { return n == 4; }));
    }
}

TEST_CASE("cube at the origin touches only coordinates 0 and 1") {
    const Geometry g(3);
    for (int e : g.edges_of_cube(g.cube_index({0, 0, 0}))) {
        const Edge edge = g.edge_at(e);
        CHECK(edge.base.x <= 1);
        CHECK(edge.base.y <= 1);
        CHECK(edge.base.z <= 1);
    }
}

TEST_CASE("vertex quadruples: 4 coplanar edges, each edge in exactly 2 of the 3 planes") {
    const Geometry g(3);
    const int v = g.vertex_index({0, 0, 0});
    const auto z_quad = g.vertex_plane_edges(v, Axis::Z);
    // the +-x and +-y edges at the vertex
    std::set<int> expect = {
        g.edge_index({0, 0, 0}, Axis::X),
        g.edge_index({-1, 0, 0}, Axis::X),
        g.edge_index({0, 0, 0}, Axis::Y),
        g.edge_index({0, -1, 0}, Axis::Y),
    };
    CHECK(std::set<int>(z_quad.begin(), z_quad.end()) == expect);

    for (int w = 0; w < g.n_vertices(); ++w) {
        std::map<int, int> multiplicity;
        for (Axis normal : kAxes) {
            const auto quad = g.vertex_plane_edges(w, normal);
            CHECK(std::set<int>(quad.begin(), quad.end()).size() == 4);
            for (int e : quad) ++multiplicity[e];
        }
        // 3 quadruples x 4 slots = 12 incidences over the 6 edges at the vertex
        CHECK(multiplicity.size() == 6);
        for (const auto& [e, n] : multiplicity) CHECK(n == 2);
    }
}

TEST_CASE("spins_of_edge follows the stated convention") {
    const Geometry g(3);
    const int e = g.edge_index({1, 1, 1}, Axis::Z);
    const auto cubes = g.spins_of_edge(e);
    const std::set<int> got(cubes.begin(), cubes.end());
    const std::set<int> expect = {
        g.cube_index({0, 0, 1}),
        g.cube_index({1, 0, 1}),
        g.cube_index({0, 1, 1}),
        g.cube_index({1, 1, 1}),
    };
    CHECK(got == expect);
}

TEST_CASE("edge-cube incidence is symmetric and 12-regular on cubes") {
    for (int L : {2, 3}) {
        const Geometry g(L);
        std::vector<int> appearances(g.n_cubes(), 0);
        for (int e = 0; e < g.n_edges(); ++e) {
            const auto cubes = g.spins_of_edge(e);
            CHECK(std::set<int>(cubes.begin(), cubes.end()).size() == 4);
            for (int c : cubes) {
                const auto edges = g.edges_of_cube(c);
                CHECK(std::count(edges.begin(), edges.end(), e) == 1);
                ++appearances[c];
            }
        }
        for (int c = 0; c < g.n_cubes(); ++c) {
            CHECK(appearances[c] == 12);
            for (int e : g.edges_of_cube(c)) {
                const auto cubes = g.spins_of_edge(e);
                CHECK(std::count(cubes.begin(), cubes.end(), c) == 1);
            }
        }
    }
}

TEST_CASE("translation permutes indices and preserves incidence") {
    for (int L : {3, 4}) {
        const Geometry g(L);
        for (const Vec3 shift : {Vec3{1, 0, 0}, Vec3{0, 2, 1}, Vec3{L - 1, L - 1, L - 1}}) {
            auto move_edge = [&](int e) {
                Edge edge = g.edge_at(e);
                edge.base.x += shift.x;
                edge.base.y += shift.y;
                edge.base.z += shift.z;
                return g.edge_index(edge);
            };
            for (int c = 0; c < g.n_cubes(); ++c) {
                Vec3 corner = g.cube_at(c);
                corner.x += shift.x;
                corner.y += shift.y;
                corner.z += shift.z;
                const auto moved = g.edges_of_cube(g.cube_index(corner));
                std::set<int> expect;
                for (int e : g.edges_of_cube(c)) expect.insert(move_edge(e));
                CHECK(std::set<int>(moved.begin(), moved.end()) == expect);
            }
            for (int e = 0; e < g.n_edges(); ++e) {
                const auto moved = g.spins_of_edge(move_edge(e));
                std::set<int> expect;
                for (int c : g.spins_of_edge(e)) {
                    Vec3 at = g.cube_at(c);
                    at.x += shift.x;
                    at.y += shift.y;
                    at.z += shift.z;
                    expect.insert(g.cube_index(at));
                }
                CHECK(std::set<int>(moved.begin(), moved.end()) == expect);
            }
            for (int v = 0; v < g.n_vertices(); ++v) {
                Vec3 at = g.vertex_at(v);
                at.x += shift.x;
                at.y += shift.y;
                at.z += shift.z;
                for (Axis normal : kAxes) {
                    const auto moved = g.vertex_plane_edges(g.vertex_index(at), normal);
                    std::set<int> expect;
                    for (int e : g.vertex_plane_edges(v, normal)) expect.insert(move_edge(e));
                    CHECK(std::set<int>(moved.begin(), moved.end()) == expect);
                }
            }
        }
    }
}
