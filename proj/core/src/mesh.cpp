#include "dg0/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "dg0/errors.hpp"

namespace dg0 {

namespace {

double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Strictly interior point-on-segment test with a relative tolerance.
bool on_segment_interior(const Point& p, const Point& a, const Point& b, double tol) {
    const double len = dist(a, b);
    if (len <= 0.0) return false;
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (std::abs(cross) > tol * len) return false;
    const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    const double s = dot / (len * len);
    return s > tol && s < 1.0 - tol;
}

} // namespace

Mesh::Mesh(int dim, std::vector<Point> vertices, std::vector<int> cell_vertices)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cell_vertices)) {
    if (dim_ != 1 && dim_ != 2) {
        throw InvalidArgument("Mesh: only dimensions 1 and 2 are supported");
    }
    if (cells_.empty() || cells_.size() % static_cast<size_t>(verts_per_cell()) != 0) {
        throw InvalidMesh("Mesh: cell list empty or not a multiple of dim+1");
    }
    validate_and_finalize();
}

Mesh Mesh::interval(double a, double b, int cells) {
    if (!(a < b)) {
        throw InvalidArgument("Mesh::interval: need a < b");
    }
    if (cells < 2) {
        throw InvalidArgument("Mesh::interval: need at least 2 cells");
    }
    std::vector<double> nodes(static_cast<size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        nodes[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / cells;
    }
    nodes.back() = b;
    return interval_from_nodes(std::move(nodes));
}

Mesh Mesh::interval_from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 3) {
        throw InvalidArgument("Mesh::interval_from_nodes: need at least 2 cells");
    }
    std::vector<Point> vertices(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0 && !(nodes[i] > nodes[i - 1])) {
            throw InvalidArgument("Mesh::interval_from_nodes: nodes must increase");
        }
        vertices[i] = Point{nodes[i], 0.0};
    }
    std::vector<int> cells;
    cells.reserve(2 * (nodes.size() - 1));
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        cells.push_back(static_cast<int>(i));
        cells.push_back(static_cast<int>(i + 1));
    }
    return Mesh(1, std::move(vertices), std::move(cells));
}

Mesh Mesh::unit_square_tri(int n) {
    if (n < 1) {
        throw InvalidArgument("Mesh::unit_square_tri: need n >= 1");
    }
    const int nv = n + 1;
    std::vector<Point> vertices(static_cast<size_t>(nv) * nv);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices[static_cast<size_t>(j) * nv + i] =
                Point{static_cast<double>(i) / n, static_cast<double>(j) / n};
        }
    }
    std::vector<int> cells;
    cells.reserve(static_cast<size_t>(6) * n * n);
    auto vid = [nv](int i, int j) { return j * nv + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            // lower-right and upper-left triangle of each square
            cells.push_back(vid(i, j));
            cells.push_back(vid(i + 1, j));
            cells.push_back(vid(i + 1, j + 1));
            cells.push_back(vid(i, j));
            cells.push_back(vid(i + 1, j + 1));
            cells.push_back(vid(i, j + 1));
        }
    }
    Mesh mesh(2, std::move(vertices), std::move(cells));
    mesh.structured_n_ = n;
    return mesh;
}

void Mesh::validate_and_finalize() {
    const int vpc = verts_per_cell();
    const int nc = num_cells();
    for (int c = 0; c < nc; ++c) {
        for (int j = 0; j < vpc; ++j) {
            const int v = cells_[static_cast<size_t>(c) * vpc + j];
            if (v < 0 || v >= num_vertices()) {
                throw InvalidMesh("Mesh: cell vertex index out of range");
            }
        }
        if (!(cell_measure(c) > 0.0)) {
            throw InvalidMesh("Mesh: cell with non-positive measure");
        }
    }

    // Topological boundary: in 1D a vertex used by exactly one cell, in 2D
    // a vertex on an edge used by exactly one cell.
    std::set<int> boundary;
    if (dim_ == 1) {
        std::map<int, int> use_count;
        for (int c = 0; c < nc; ++c) {
            for (int v : cell(c)) ++use_count[v];
        }
        for (const auto& [v, count] : use_count) {
            if (count == 1) boundary.insert(v);
        }
    } else {
        std::map<std::pair<int, int>, int> edge_count;
        for (int c = 0; c < nc; ++c) {
            const auto cv = cell(c);
            for (int e = 0; e < 3; ++e) {
                int a = cv[static_cast<size_t>(e)];
                int b = cv[static_cast<size_t>((e + 1) % 3)];
                if (a > b) std::swap(a, b);
                ++edge_count[{a, b}];
            }
        }
        for (const auto& [edge, count] : edge_count) {
            if (count == 1) {
                boundary.insert(edge.first);
                boundary.insert(edge.second);
            }
        }
    }
    boundary_vertices_.assign(boundary.begin(), boundary.end());
}

double Mesh::cell_measure(int c) const {
    const auto cv = cell(c);
    if (dim_ == 1) {
        return std::abs(vertex(cv[1]).x - vertex(cv[0]).x);
    }
    const Point& a = vertex(cv[0]);
    const Point& b = vertex(cv[1]);
    const Point& d = vertex(cv[2]);
    return 0.5 * std::abs((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

double Mesh::cell_diameter(int c) const {
    const auto cv = cell(c);
    if (dim_ == 1) {
        return std::abs(vertex(cv[1]).x - vertex(cv[0]).x);
    }
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            d = std::max(d, dist(vertex(cv[static_cast<size_t>(i)]),
                                 vertex(cv[static_cast<size_t>(j)])));
        }
    }
    return d;
}

double Mesh::max_diameter() const {
    double h = 0.0;
    for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
    return h;
}

double Mesh::domain_measure() const {
    double total = 0.0;
    for (int c = 0; c < num_cells(); ++c) total += cell_measure(c);
    return total;
}

bool Mesh::is_conformal(std::string* why) const {
    auto fail = [why](const std::string& message) {
        if (why) *why = message;
        return false;
    };

    const int nc = num_cells();
    if (dim_ == 1) {
        // Cells sorted by left coordinate must tile the interval through
        // shared vertex indices.
        std::vector<int> order(static_cast<size_t>(nc));
        for (int c = 0; c < nc; ++c) order[static_cast<size_t>(c)] = c;
        auto left_vertex = [this](int c) {
            const auto cv = cell(c);
            return vertex(cv[0]).x <= vertex(cv[1]).x ? cv[0] : cv[1];
        };
        auto right_vertex = [this](int c) {
            const auto cv = cell(c);
            return vertex(cv[0]).x <= vertex(cv[1]).x ? cv[1] : cv[0];
        };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return vertex(left_vertex(a)).x < vertex(left_vertex(b)).x;
        });
        for (int i = 0; i + 1 < nc; ++i) {
            if (right_vertex(order[static_cast<size_t>(i)]) !=
                left_vertex(order[static_cast<size_t>(i) + 1])) {
                return fail("1D cells do not tile through shared vertices");
            }
        }
        return true;
    }

    // Edge multiplicity: a shared edge joins at most two triangles.
    std::map<std::pair<int, int>, int> edge_count;
    std::set<int> used_vertices;
    for (int c = 0; c < nc; ++c) {
        const auto cv = cell(c);
        for (int e = 0; e < 3; ++e) {
            used_vertices.insert(cv[static_cast<size_t>(e)]);
            int a = cv[static_cast<size_t>(e)];
            int b = cv[static_cast<size_t>((e + 1) % 3)];
            if (a > b) std::swap(a, b);
            if (++edge_count[{a, b}] > 2) {
                return fail("edge shared by more than two cells");
            }
        }
    }

    // Hanging nodes: a used vertex lying strictly inside another cell's edge.
    const double tol = 1e-10;
    for (const auto& [edge, count] : edge_count) {
        (void)count;
        const Point& a = vertex(edge.first);
        const Point& b = vertex(edge.second);
        for (int v : used_vertices) {
            if (v == edge.first || v == edge.second) continue;
            if (on_segment_interior(vertex(v), a, b, tol)) {
                return fail("hanging node on edge");
            }
        }
    }
    return true;
}

int Mesh::locate(const Point& p) const {
    const double tol = 1e-12;
    auto bary_inside = [&](int c, const Point& q) {
        const auto cv = cell(c);
        const Point& a = vertex(cv[0]);
        const Point& b = vertex(cv[1]);
        const Point& d = vertex(cv[2]);
        const double det = (b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y);
        const double l1 = ((q.x - a.x) * (d.y - a.y) - (d.x - a.x) * (q.y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (q.y - a.y) - (q.x - a.x) * (b.y - a.y)) / det;
        return l1 >= -tol && l2 >= -tol && l1 + l2 <= 1.0 + tol;
    };

    if (dim_ == 1) {
        for (int c = 0; c < num_cells(); ++c) {
            const auto cv = cell(c);
            const double x0 = std::min(vertex(cv[0]).x, vertex(cv[1]).x);
            const double x1 = std::max(vertex(cv[0]).x, vertex(cv[1]).x);
            if (p.x >= x0 - tol && p.x <= x1 + tol) return c;
        }
        throw InvalidArgument("Mesh::locate: point outside mesh");
    }

    if (structured_n_) {
        const int n = *structured_n_;
        const int i = std::clamp(static_cast<int>(p.x * n), 0, n - 1);
        const int j = std::clamp(static_cast<int>(p.y * n), 0, n - 1);
        const int base = 2 * (j * n + i);
        if (bary_inside(base, p)) return base;
        if (bary_inside(base + 1, p)) return base + 1;
        // fall through on round-off near square edges
    }
    for (int c = 0; c < num_cells(); ++c) {
        if (bary_inside(c, p)) return c;
    }
    throw InvalidArgument("Mesh::locate: point outside mesh");
}

QuasiUniformReport check_quasi_uniform(const Mesh& mesh) {
    QuasiUniformReport report;
    report.max_diameter = mesh.max_diameter();
    const double inv_d = 1.0 / static_cast<double>(mesh.dim());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const double measure = mesh.cell_measure(c);
        if (!(measure > 0.0)) {
            throw InvalidMesh("check_quasi_uniform: degenerate cell");
        }
        report.c_measured =
            std::max(report.c_measured, report.max_diameter / std::pow(measure, inv_d));
    }
    return report;
}

} // namespace dg0
