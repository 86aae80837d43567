#include "splinekit/constraints.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace splinekit {

using bform::Bary;
using bform::mi_index;
using bform::multi_indices;

SplineSpace::SplineSpace(Triangulation t, int degree, int smoothness)
    : tri(std::move(t)), d(degree), r(smoothness) {
    if (d < 1 || d > bform::kMaxDegree) throw std::invalid_argument("SplineSpace: degree out of range");
    if (r < -1 || r > d) throw std::invalid_argument("SplineSpace: smoothness must satisfy -1 <= r <= d");
    if (tri.boundary_loops.empty()) validate(tri, false);
    edge_table = build_edge_table(tri);
}

Eigen::SparseMatrix<double> ConstraintBlock::to_sparse() const {
    Eigen::SparseMatrix<double> M(rows, cols);
    M.setFromTriplets(triplets.begin(), triplets.end());
    return M;
}

namespace {

// Local coefficient index of triangle t for a multi-index expressed in an
// arbitrary ordering (w0,w1,w2) of t's vertices.
int permuted_local(const Triangulation& tri, int t, const std::array<int, 3>& w, int d,
                   int a0, int a1, int a2) {
    const auto& g = tri.triangles[t];
    std::array<int, 3> exp{};  // exponent on stored vertex position i
    std::array<int, 3> a{a0, a1, a2};
    for (int i = 0; i < 3; ++i) {
        int pos = -1;
        for (int j = 0; j < 3; ++j)
            if (g[j] == w[i]) pos = j;
        if (pos < 0) throw std::logic_error("constraints: vertex not in triangle");
        exp[pos] = a[i];
    }
    return mi_index(d, exp[0], exp[1]);
}

int third_vertex(const Triangulation& tri, int t, int u, int w) {
    for (int v : tri.triangles[t])
        if (v != u && v != w) return v;
    throw std::logic_error("constraints: shared edge not in triangle");
}

}  // namespace

ConstraintBlock smoothness_matrix(const SplineSpace& space) {
    const int d = space.d, r = space.r;
    if (r > d) throw std::invalid_argument("smoothness_matrix: r > d");
    ConstraintBlock block;
    block.cols = space.n_coeffs();
    block.label = BlockLabel::SMOOTHNESS;
    if (r < 0) {
        block.rhs.resize(0);
        return block;
    }
    const Triangulation& tri = space.tri;
    int row = 0;
    for (const auto& e : space.edge_table.edges) {
        if (!e.interior()) continue;
        // Normalize: T = (x1, u, w) and Ttil = (x2, w, u) so the shared edge
        // is the (second, third) pair of each.
        int u = e.a, w = e.b;
        int tL = e.left, tR = e.right;
        int x1 = third_vertex(tri, tL, u, w);
        int x2 = third_vertex(tri, tR, u, w);
        std::array<int, 3> TL{x1, u, w};
        std::array<int, 3> TR{x2, w, u};
        std::array<Point2, 3> vl{tri.vertices[x1], tri.vertices[u], tri.vertices[w]};
        Bary b4 = bform::barycentric(vl, tri.vertices[x2]);
        for (int n = 0; n <= r; ++n) {
            const auto& gammas = multi_indices(n);
            Eigen::RowVectorXd Bn = bform::eval_basis_row(n, b4);
            for (int j = d - n; j >= 0; --j) {
                int k = d - n - j;
                // ctil_{n,j,k} = sum_gamma B^n_gamma(b4) c_{g1, k+g2, j+g3}
                int ctil = space.global_index(tR, permuted_local(tri, tR, TR, d, n, j, k));
                block.triplets.emplace_back(row, ctil, 1.0);
                for (size_t gi = 0; gi < gammas.size(); ++gi) {
                    const auto& g = gammas[gi];
                    int c = space.global_index(
                        tL, permuted_local(tri, tL, TL, d, g.a1, k + g.a2, j + g.a3));
                    block.triplets.emplace_back(row, c, -Bn[gi]);
                }
                ++row;
            }
        }
    }
    block.rows = row;
    block.rhs = Eigen::VectorXd::Zero(row);
    return block;
}

ConstraintBlock interpolation_matrix(const SplineSpace& space, const std::vector<Point2>& points,
                                     const Eigen::VectorXd& values) {
    if (static_cast<int>(points.size()) != values.size())
        throw std::invalid_argument("interpolation_matrix: points/values length mismatch");
    ConstraintBlock block;
    block.cols = space.n_coeffs();
    block.label = BlockLabel::INTERP;
    block.rows = static_cast<int>(points.size());
    block.rhs = values;
    for (size_t i = 0; i < points.size(); ++i) {
        auto loc = locate(space.tri, points[i]);
        if (!loc) throw std::runtime_error("interpolation_matrix: point outside the domain");
        Bary b{loc->bary[0], loc->bary[1], loc->bary[2]};
        Eigen::RowVectorXd rowv = bform::eval_basis_row(space.d, b);
        for (int j = 0; j < rowv.size(); ++j)
            if (rowv[j] != 0.0)
                block.triplets.emplace_back(static_cast<int>(i), space.global_index(loc->triangle, j),
                                            rowv[j]);
    }
    return block;
}

ConstraintBlock boundary_matrix(const SplineSpace& space, const ScalarField& g,
                                int samples_per_edge) {
    const int d = space.d;
    int m = samples_per_edge < 0 ? d + 1 : samples_per_edge;
    if (m < d + 1) throw std::invalid_argument("boundary_matrix: samples_per_edge must be >= d+1");
    ConstraintBlock block;
    block.cols = space.n_coeffs();
    block.label = BlockLabel::BOUNDARY;
    std::vector<double> rhs;
    std::set<int> corner_done;
    int row = 0;
    const Triangulation& tri = space.tri;
    for (const auto& e : space.edge_table.edges) {
        if (e.interior()) continue;
        int t = e.left;
        auto verts = tri.corners(t);
        for (int j = 0; j < m; ++j) {
            // Endpoints are boundary vertices shared with the adjacent edge.
            if (j == 0) {
                if (!corner_done.insert(e.a).second) continue;
            } else if (j == m - 1) {
                if (!corner_done.insert(e.b).second) continue;
            }
            double s = double(j) / (m - 1);
            Point2 p{tri.vertices[e.a].x + s * (tri.vertices[e.b].x - tri.vertices[e.a].x),
                     tri.vertices[e.a].y + s * (tri.vertices[e.b].y - tri.vertices[e.a].y)};
            Bary b = bform::barycentric(verts, p);
            Eigen::RowVectorXd rowv = bform::eval_basis_row(d, b);
            for (int c = 0; c < rowv.size(); ++c)
                if (rowv[c] != 0.0)
                    block.triplets.emplace_back(row, space.global_index(t, c), rowv[c]);
            rhs.push_back(g(p.x, p.y));
            ++row;
        }
    }
    block.rows = row;
    block.rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), rhs.size());
    return block;
}

void write_matrix_market(const ConstraintBlock& block, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    Eigen::SparseMatrix<double> M = block.to_sparse();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    for (int k = 0; k < M.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it)
            out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

}  // namespace splinekit
