#include "splinekit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace splinekit {

double signed_area(const Point2& p, const Point2& q, const Point2& r) {
    return 0.5 * ((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
}

int EdgeTable::interior_edge_count() const {
    int n = 0;
    for (const auto& e : edges) n += e.interior() ? 1 : 0;
    return n;
}

int EdgeTable::interior_vertex_count() const {
    int n = 0;
    for (bool b : vertex_on_boundary) n += b ? 0 : 1;
    return n;
}

int EdgeTable::edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].a == a && edges[i].b == b) return static_cast<int>(i);
    return -1;
}

namespace {

// Separating-axis test for open-interior overlap of two triangles.
bool interiors_overlap(const std::array<Point2, 3>& A, const std::array<Point2, 3>& B) {
    const double eps = 1e-12;
    auto axis_separates = [&](const std::array<Point2, 3>& P, const std::array<Point2, 3>& Q) {
        for (int i = 0; i < 3; ++i) {
            Point2 e{P[(i + 1) % 3].x - P[i].x, P[(i + 1) % 3].y - P[i].y};
            Point2 n{-e.y, e.x};
            double pmin = 1e300, pmax = -1e300, qmin = 1e300, qmax = -1e300;
            for (int j = 0; j < 3; ++j) {
                double pp = n.x * P[j].x + n.y * P[j].y;
                double qq = n.x * Q[j].x + n.y * Q[j].y;
                pmin = std::min(pmin, pp); pmax = std::max(pmax, pp);
                qmin = std::min(qmin, qq); qmax = std::max(qmax, qq);
            }
            double scale = std::max({std::abs(pmin), std::abs(pmax), std::abs(qmin), std::abs(qmax), 1.0});
            if (pmax <= qmin + eps * scale || qmax <= pmin + eps * scale) return true;
        }
        return false;
    };
    return !axis_separates(A, B) && !axis_separates(B, A);
}

void derive_boundary_loops(Triangulation& tri, const EdgeTable& et) {
    tri.boundary_loops.clear();
    // Directed boundary edges, oriented as they appear in their (CCW) triangle.
    std::map<int, int> next;  // from vertex -> to vertex
    for (const auto& e : et.edges) {
        if (e.interior()) continue;
        const auto& t = tri.triangles[e.left];
        for (int i = 0; i < 3; ++i) {
            int u = t[i], v = t[(i + 1) % 3];
            if ((u == e.a && v == e.b) || (u == e.b && v == e.a)) {
                next[u] = v;
                break;
            }
        }
    }
    std::map<int, bool> used;
    for (const auto& [start, unused] : next) {
        if (used[start]) continue;
        std::vector<int> loop;
        int v = start;
        do {
            loop.push_back(v);
            used[v] = true;
            auto it = next.find(v);
            if (it == next.end()) throw std::runtime_error("mesh: open boundary chain");
            v = it->second;
        } while (v != start);
        tri.boundary_loops.push_back(std::move(loop));
    }
    // Outer loop = the one enclosing the largest area, placed first.
    auto loop_area = [&](const std::vector<int>& loop) {
        double a = 0;
        for (size_t i = 0; i < loop.size(); ++i) {
            const Point2& p = tri.vertices[loop[i]];
            const Point2& q = tri.vertices[loop[(i + 1) % loop.size()]];
            a += p.x * q.y - q.x * p.y;
        }
        return std::abs(a) * 0.5;
    };
    std::stable_sort(tri.boundary_loops.begin(), tri.boundary_loops.end(),
                     [&](const auto& u, const auto& v) { return loop_area(u) > loop_area(v); });
}

}  // namespace

void validate(Triangulation& tri, bool check_overlap) {
    const int V = tri.vertex_count();
    for (const auto& p : tri.vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::runtime_error("mesh: non-finite vertex coordinate");
    double scale2 = 0;
    for (const auto& p : tri.vertices) scale2 = std::max(scale2, p.x * p.x + p.y * p.y);
    scale2 = std::max(scale2, 1e-300);
    for (auto& t : tri.triangles) {
        for (int v : t)
            if (v < 0 || v >= V) throw std::runtime_error("mesh: triangle vertex index out of range");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw std::runtime_error("mesh: repeated vertex in triangle");
        double a = signed_area(tri.vertices[t[0]], tri.vertices[t[1]], tri.vertices[t[2]]);
        if (std::abs(a) < 1e-14 * scale2)
            throw std::runtime_error("mesh: degenerate (zero-area) triangle");
        if (a < 0) std::swap(t[1], t[2]);
    }
    // Each undirected edge may appear in at most 2 triangles, with opposite
    // orientations when shared.
    std::map<std::pair<int, int>, int> directed;
    for (size_t t = 0; t < tri.triangles.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            int u = tri.triangles[t][i], v = tri.triangles[t][(i + 1) % 3];
            if (directed.count({u, v}))
                throw std::runtime_error("mesh: non-conforming (edge used twice with same orientation)");
            directed[{u, v}] = static_cast<int>(t);
        }
    }
    int E = 0, boundary_edges = 0;
    for (const auto& [uv, t] : directed) {
        if (uv.first < uv.second) ++E;
        if (!directed.count({uv.second, uv.first})) {
            ++boundary_edges;
            if (uv.first > uv.second) ++E;
        }
    }
    if (check_overlap && tri.triangle_count() <= 2000) {
        for (int s = 0; s < tri.triangle_count(); ++s) {
            for (int t = s + 1; t < tri.triangle_count(); ++t) {
                // Triangles sharing an edge are already consistent; sharing a
                // vertex or nothing must not overlap in their interiors.
                if (interiors_overlap(tri.corners(s), tri.corners(t)))
                    throw std::runtime_error("mesh: non-conforming (triangle interiors overlap)");
            }
        }
    }
    EdgeTable et = build_edge_table(tri);
    derive_boundary_loops(tri, et);
    // Euler check, only meaningful for simply connected meshes.
    if (tri.boundary_loops.size() == 1) {
        if (V - E + tri.triangle_count() != 1)
            throw std::runtime_error("mesh: Euler relation violated (V - E + T != 1)");
    }
}

Triangulation load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mesh: cannot open " + path);
    auto next_line = [&](std::string& line) {
        while (std::getline(in, line)) {
            size_t p = line.find_first_not_of(" \t\r");
            if (p == std::string::npos || line[p] == '#') continue;
            return true;
        }
        return false;
    };
    std::string line;
    if (!next_line(line)) throw std::runtime_error("mesh: empty file " + path);
    std::istringstream head(line);
    int V = 0, T = 0;
    if (!(head >> V >> T) || V < 3 || T < 1) throw std::runtime_error("mesh: bad header in " + path);
    Triangulation tri;
    tri.vertices.resize(V);
    for (int i = 0; i < V; ++i) {
        if (!next_line(line)) throw std::runtime_error("mesh: truncated vertex list");
        std::istringstream ls(line);
        if (!(ls >> tri.vertices[i].x >> tri.vertices[i].y))
            throw std::runtime_error("mesh: bad vertex line: " + line);
    }
    tri.triangles.resize(T);
    for (int i = 0; i < T; ++i) {
        if (!next_line(line)) throw std::runtime_error("mesh: truncated triangle list");
        std::istringstream ls(line);
        if (!(ls >> tri.triangles[i][0] >> tri.triangles[i][1] >> tri.triangles[i][2]))
            throw std::runtime_error("mesh: bad triangle line: " + line);
    }
    validate(tri, true);
    return tri;
}

void save_mesh(const Triangulation& tri, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh: cannot write " + path);
    out.precision(17);
    out << tri.vertex_count() << " " << tri.triangle_count() << "\n";
    for (const auto& p : tri.vertices) out << p.x << " " << p.y << "\n";
    for (const auto& t : tri.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

EdgeTable build_edge_table(const Triangulation& tri) {
    EdgeTable et;
    et.vertex_edges.resize(tri.vertices.size());
    et.vertex_on_boundary.assign(tri.vertices.size(), false);
    std::map<std::pair<int, int>, int> index;
    for (int t = 0; t < tri.triangle_count(); ++t) {
        for (int i = 0; i < 3; ++i) {
            int u = tri.triangles[t][i], v = tri.triangles[t][(i + 1) % 3];
            int a = std::min(u, v), b = std::max(u, v);
            auto it = index.find({a, b});
            if (it == index.end()) {
                Edge e;
                e.a = a;
                e.b = b;
                e.left = t;
                index[{a, b}] = static_cast<int>(et.edges.size());
                et.edges.push_back(e);
            } else {
                Edge& e = et.edges[it->second];
                if (e.right >= 0) throw std::runtime_error("mesh: edge shared by more than 2 triangles");
                e.right = t;
            }
        }
    }
    for (size_t i = 0; i < et.edges.size(); ++i) {
        const Edge& e = et.edges[i];
        et.vertex_edges[e.a].push_back(static_cast<int>(i));
        et.vertex_edges[e.b].push_back(static_cast<int>(i));
        if (!e.interior()) {
            et.vertex_on_boundary[e.a] = true;
            et.vertex_on_boundary[e.b] = true;
        }
    }
    return et;
}

std::optional<Location> locate(const Triangulation& tri, const Point2& p, double tol) {
    for (int t = 0; t < tri.triangle_count(); ++t) {
        auto c = tri.corners(t);
        double area = signed_area(c[0], c[1], c[2]);
        double b0 = signed_area(p, c[1], c[2]) / area;
        double b1 = signed_area(c[0], p, c[2]) / area;
        double b2 = signed_area(c[0], c[1], p) / area;
        if (b0 >= -tol && b1 >= -tol && b2 >= -tol) return Location{t, {b0, b1, b2}};
    }
    return std::nullopt;
}

Triangulation refine_uniform(const Triangulation& tri) {
    Triangulation out;
    out.vertices = tri.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int u, int v) {
        int a = std::min(u, v), b = std::max(u, v);
        auto it = midpoint.find({a, b});
        if (it != midpoint.end()) return it->second;
        Point2 m{0.5 * (tri.vertices[a].x + tri.vertices[b].x),
                 0.5 * (tri.vertices[a].y + tri.vertices[b].y)};
        int id = out.vertex_count();
        out.vertices.push_back(m);
        midpoint[{a, b}] = id;
        return id;
    };
    for (const auto& t : tri.triangles) {
        int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
        out.triangles.push_back({t[0], m01, m20});
        out.triangles.push_back({m01, t[1], m12});
        out.triangles.push_back({m20, m12, t[2]});
        out.triangles.push_back({m01, m12, m20});
    }
    validate(out, false);
    return out;
}

double min_angle(const Triangulation& tri) {
    double best = 1e300;
    for (const auto& t : tri.triangles) {
        for (int i = 0; i < 3; ++i) {
            const Point2& a = tri.vertices[t[i]];
            const Point2& b = tri.vertices[t[(i + 1) % 3]];
            const Point2& c = tri.vertices[t[(i + 2) % 3]];
            double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - a.x, vy = c.y - a.y;
            double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
            best = std::min(best, ang);
        }
    }
    return best;
}

double total_area(const Triangulation& tri) {
    double a = 0;
    for (int t = 0; t < tri.triangle_count(); ++t) {
        auto c = tri.corners(t);
        a += signed_area(c[0], c[1], c[2]);
    }
    return a;
}

double mesh_size(const Triangulation& tri) {
    double h = 0;
    for (const auto& t : tri.triangles) {
        for (int i = 0; i < 3; ++i) {
            const Point2& p = tri.vertices[t[i]];
            const Point2& q = tri.vertices[t[(i + 1) % 3]];
            h = std::max(h, std::hypot(q.x - p.x, q.y - p.y));
        }
    }
    return h;
}

Triangulation single_triangle() {
    Triangulation tri;
    tri.vertices = {{0, 0}, {1, 0}, {0, 1}};
    tri.triangles = {{0, 1, 2}};
    validate(tri, false);
    return tri;
}

Triangulation two_triangle_square() {
    Triangulation tri;
    tri.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    tri.triangles = {{0, 1, 2}, {0, 2, 3}};
    validate(tri, false);
    return tri;
}

Triangulation square_grid(int k) {
    if (k < 1) throw std::invalid_argument("square_grid: k must be >= 1");
    Triangulation tri;
    auto vid = [k](int i, int j) { return j * (k + 1) + i; };
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i)
            tri.vertices.push_back({double(i) / k, double(j) / k});
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            // Diagonal from the lower-left corner, stable under uniform refinement.
            tri.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            tri.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }
    validate(tri, false);
    return tri;
}

}  // namespace splinekit
