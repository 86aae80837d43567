#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "splinekit/mesh.hpp"

using namespace splinekit;

TEST_CASE("builtin generators have the documented shapes") {
    CHECK(single_triangle().triangle_count() == 1);
    CHECK(two_triangle_square().triangle_count() == 2);
    CHECK(square_grid(1).triangle_count() == 2);
    Triangulation g4 = square_grid(4);
    CHECK(g4.vertex_count() == 25);
    CHECK(g4.triangle_count() == 32);
    CHECK(total_area(g4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("triangles are CCW after validation") {
    Triangulation tri;
    tri.vertices = {{0, 0}, {1, 0}, {0, 1}};
    tri.triangles = {{0, 2, 1}};  // clockwise on purpose
    validate(tri, true);
    CHECK(signed_area(tri.vertices[tri.triangles[0][0]], tri.vertices[tri.triangles[0][1]],
                      tri.vertices[tri.triangles[0][2]]) > 0);
}

TEST_CASE("degenerate triangles rejected") {
    Triangulation tri;
    tri.vertices = {{0, 0}, {1, 0}, {2, 0}};
    tri.triangles = {{0, 1, 2}};
    CHECK_THROWS(validate(tri, true));
}

TEST_CASE("non-conforming mesh rejected") {
    // Hanging node on the shared edge.
    Triangulation tri;
    tri.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    tri.triangles = {{0, 1, 2}, {0, 2, 4}, {0, 4, 3}, {4, 2, 3}};
    // Edge (0,2) appears in triangle 0 and 1 consistently; break conformity
    // instead with a duplicated directed edge.
    tri.triangles = {{0, 1, 2}, {0, 1, 4}};
    CHECK_THROWS(validate(tri, true));
}

TEST_CASE("mesh file round trip") {
    Triangulation g = square_grid(2);
    std::string path = "roundtrip.msh";
    save_mesh(g, path);
    Triangulation back = load_mesh(path);
    REQUIRE(back.vertex_count() == g.vertex_count());
    REQUIRE(back.triangle_count() == g.triangle_count());
    for (int i = 0; i < g.vertex_count(); ++i) {
        CHECK(back.vertices[i].x == doctest::Approx(g.vertices[i].x).epsilon(1e-15));
        CHECK(back.vertices[i].y == doctest::Approx(g.vertices[i].y).epsilon(1e-15));
    }
    CHECK(back.triangles == g.triangles);
    std::remove(path.c_str());
}

TEST_CASE("comments and counts in the text format") {
    std::string path = "commented.msh";
    {
        std::ofstream out(path);
        out << "# tiny mesh\n3 1\n0 0\n1 0\n0 1\n0 1 2\n";
    }
    Triangulation tri = load_mesh(path);
    CHECK(tri.vertex_count() == 3);
    CHECK(tri.triangle_count() == 1);
    std::remove(path.c_str());
}

TEST_CASE("edge table counts for the 32-triangle square") {
    Triangulation g = square_grid(4);
    EdgeTable et = build_edge_table(g);
    // V - E + T = 1 for a simply connected mesh: E = 25 + 32 - 1 = 56.
    CHECK(static_cast<int>(et.edges.size()) == 56);
    CHECK(et.interior_vertex_count() == 9);
    // Boundary edges: 16 around the square.
    CHECK(et.interior_edge_count() == 40);
}

TEST_CASE("locate finds interior, edge, and outside points") {
    Triangulation g = two_triangle_square();
    auto inside = locate(g, {0.25, 0.1});
    REQUIRE(inside.has_value());
    CHECK(inside->bary[0] >= 0);
    auto on_diag = locate(g, {0.5, 0.5});
    REQUIRE(on_diag.has_value());
    CHECK(!locate(g, {1.5, 0.5}).has_value());
    CHECK(!locate(g, {0.5, -0.2}).has_value());
}

TEST_CASE("uniform refinement quadruples triangles and preserves area") {
    Triangulation g = square_grid(2);
    Triangulation f = refine_uniform(g);
    CHECK(f.triangle_count() == 4 * g.triangle_count());
    CHECK(total_area(f) == doctest::Approx(total_area(g)).epsilon(1e-13));
    CHECK(mesh_size(f) == doctest::Approx(0.5 * mesh_size(g)).epsilon(1e-13));
}

TEST_CASE("refined square_grid(4) matches square_grid(8) geometrically") {
    Triangulation a = refine_uniform(square_grid(4));
    Triangulation b = square_grid(8);
    REQUIRE(a.vertex_count() == b.vertex_count());
    REQUIRE(a.triangle_count() == b.triangle_count());
    // Same vertex set and same set of triangles as coordinate triples,
    // independent of indexing.
    auto key = [](const Point2& p) {
        return std::make_pair(std::lround(p.x * 1e9), std::lround(p.y * 1e9));
    };
    std::set<std::pair<long, long>> va, vb;
    for (const auto& p : a.vertices) va.insert(key(p));
    for (const auto& p : b.vertices) vb.insert(key(p));
    CHECK(va == vb);
    using TriKey = std::set<std::pair<long, long>>;
    std::set<TriKey> ta, tb;
    for (int t = 0; t < a.triangle_count(); ++t) {
        TriKey k;
        for (auto p : a.corners(t)) k.insert(key(p));
        ta.insert(k);
    }
    for (int t = 0; t < b.triangle_count(); ++t) {
        TriKey k;
        for (auto p : b.corners(t)) k.insert(key(p));
        tb.insert(k);
    }
    CHECK(ta == tb);
}

TEST_CASE("boundary loop covers the square outline") {
    Triangulation g = square_grid(3);
    REQUIRE(g.boundary_loops.size() == 1);
    CHECK(static_cast<int>(g.boundary_loops[0].size()) == 12);
}

TEST_CASE("min_angle of the diagonal split is 45 degrees") {
    CHECK(min_angle(two_triangle_square()) == doctest::Approx(3.14159265358979 / 4).epsilon(1e-12));
}
