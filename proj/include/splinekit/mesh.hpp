#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace splinekit {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Conforming triangulation: CCW triangles, shared edges match exactly.
struct Triangulation {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    // Outer loop first, then hole loops (start vertex arbitrary).
    std::vector<std::vector<int>> boundary_loops;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    std::array<Point2, 3> corners(int t) const {
        return {vertices[triangles[t][0]], vertices[triangles[t][1]], vertices[triangles[t][2]]};
    }
};

struct Edge {
    int a = -1, b = -1;           // endpoint vertex ids, a < b
    int left = -1, right = -1;    // adjacent triangles, right = -1 on the boundary
    bool interior() const { return right >= 0; }
};

struct EdgeTable {
    std::vector<Edge> edges;
    std::vector<std::vector<int>> vertex_edges;  // incident edge ids per vertex
    std::vector<bool> vertex_on_boundary;

    int interior_edge_count() const;
    int interior_vertex_count() const;
    int edge_index(int a, int b) const;  // -1 if absent
};

struct Location {
    int triangle = -1;
    std::array<double, 3> bary{};
};

double signed_area(const Point2& p, const Point2& q, const Point2& r);

Triangulation load_mesh(const std::string& path);
void save_mesh(const Triangulation& tri, const std::string& path);

// Structural validation (orientation, conformity, Euler count). Invoked by
// load_mesh with the O(T^2) overlap scan enabled.
void validate(Triangulation& tri, bool check_overlap);

EdgeTable build_edge_table(const Triangulation& tri);

/// Brute-force point location; ties on shared edges go to the lowest triangle index.
std::optional<Location> locate(const Triangulation& tri, const Point2& p, double tol = 1e-12);

Triangulation refine_uniform(const Triangulation& tri);

double min_angle(const Triangulation& tri);
double total_area(const Triangulation& tri);
double mesh_size(const Triangulation& tri);  // longest edge

// Built-in generators.
Triangulation single_triangle();
Triangulation two_triangle_square();
/// k x k grid of unit-square cells scaled to [0,1]^2, each split by the
/// cell diagonal from lower-left to upper-right. square_grid(4) is the
/// 25-vertex, 32-triangle layout.
Triangulation square_grid(int k);

}  // namespace splinekit
