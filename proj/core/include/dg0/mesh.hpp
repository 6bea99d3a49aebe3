#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dg0 {

/// Spatial point; y is ignored for 1D meshes.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Conformal simplicial mesh: interval partitions (d=1) or triangulations
/// of a polygon (d=2). Vertices, cells and the boundary vertex set are
/// fixed at construction; cells carry dim+1 vertex indices each.
class Mesh {
public:
    /// n equal cells on [a, b].
    static Mesh interval(double a, double b, int cells);

    /// 1D mesh from explicit, strictly increasing nodes (graded meshes).
    static Mesh interval_from_nodes(std::vector<double> nodes);

    /// Structured triangulation of the unit square: n x n squares, each
    /// split into two triangles (2n^2 cells).
    static Mesh unit_square_tri(int n);

    /// Raw construction for hand-built meshes (tests, negative cases).
    /// cell_vertices is flattened, dim+1 indices per cell. Throws
    /// InvalidMesh on empty/degenerate cells or bad indices.
    Mesh(int dim, std::vector<Point> vertices, std::vector<int> cell_vertices);

    int dim() const { return dim_; }
    int verts_per_cell() const { return dim_ + 1; }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_cells() const { return static_cast<int>(cells_.size()) / verts_per_cell(); }

    const Point& vertex(int v) const { return vertices_[static_cast<size_t>(v)]; }
    std::span<const int> cell(int c) const {
        return {cells_.data() + static_cast<size_t>(c) * verts_per_cell(),
                static_cast<size_t>(verts_per_cell())};
    }

    /// Vertex indices on the topological boundary, sorted ascending.
    const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }

    double cell_measure(int c) const;
    double cell_diameter(int c) const;
    /// h = max cell diameter.
    double max_diameter() const;
    /// Total measure of the domain (sum of cell measures).
    double domain_measure() const;

    /// Checks pairwise cell intersections are empty, a shared vertex, or a
    /// shared full edge. Detects hanging nodes geometrically. On failure,
    /// fills `why` (when given) with a description.
    bool is_conformal(std::string* why = nullptr) const;

    /// Set when this mesh came from unit_square_tri(n); enables O(1) point
    /// location.
    std::optional<int> structured_square_n() const { return structured_n_; }

    /// Cell containing the point (ties resolved arbitrarily); throws
    /// InvalidArgument when outside the mesh.
    int locate(const Point& p) const;

private:
    int dim_ = 1;
    std::vector<Point> vertices_;
    std::vector<int> cells_;
    std::vector<int> boundary_vertices_;
    std::optional<int> structured_n_;

    void validate_and_finalize();
};

/// Measured quasi-uniformity data: C = max over cells of h / |tau|^{1/d}
/// and the maximal diameter itself.
struct QuasiUniformReport {
    double c_measured = 0.0;
    double max_diameter = 0.0;
};

/// Throws InvalidMesh on degenerate cells.
QuasiUniformReport check_quasi_uniform(const Mesh& mesh);

} // namespace dg0
