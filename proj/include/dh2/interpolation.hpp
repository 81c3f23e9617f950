#pragma once
//
// Directional Chebyshev interpolation: tensor grids, modified Lagrange
// polynomials, and assembly of the initial DH^2 matrix (leaf bases, transfer
// matrices, coupling matrices and nearfield blocks).
//

#include <array>
#include <span>
#include <memory>
#include <vector>

#include <dh2/basis.hpp>
#include <dh2/blocktree.hpp>
#include <dh2/clustering.hpp>
#include <dh2/directions.hpp>
#include <dh2/geometry.hpp>
#include <dh2/quadrature.hpp>

namespace dh2 {

// Tensor Chebyshev grid of m points per axis on a box; k = m^3 points, index
// nu = (a * m + b) * m + c for per-axis node indices (a, b, c).
class InterpolationGrid {
public:
    InterpolationGrid() = default;
    InterpolationGrid(const BoundingBox& box, int order);

    int order() const { return order_; }
    int size() const { return order_ * order_ * order_; }

    const std::vector<real>& nodes(int axis) const { return nodes_[axis]; }
    Vec3 point(int nu) const;

    // L_nu(x) for all nu
    void lagrange(const Vec3& x, std::span<real> values) const;

    // grad L_nu(x) . direction for all nu
    void lagrange_derivative(const Vec3& x, const Vec3& direction, std::span<real> values) const;

private:
    // per-axis 1d basis values at x[axis]
    void axis_values(int axis, real x, std::span<real> values) const;
    void axis_derivatives(int axis, real x, std::span<real> values) const;

    int                              order_ = 0;
    std::array<std::vector<real>, 3> nodes_;
};

// Chebyshev points of the first kind mapped to the box; a zero-extent axis
// collapses its points onto the midpoint.
InterpolationGrid chebyshev_grid(const BoundingBox& box, int order);

// Box used for interpolation: degenerate axes are widened to a small fraction
// of the box diameter so the 1d Lagrange bases stay defined.
BoundingBox interpolation_box(const BoundingBox& box);

// exp(i kappa (|x-y| - <x-y, c>)) / (4 pi |x-y|)
complex kernel_gc(const Vec3& x, const Vec3& y, const Vec3& c, real kappa);

Matrix assemble_coupling(const InterpolationGrid& grid_t, const InterpolationGrid& grid_s, const Vec3& c,
                         real kappa);

// v_{i,nu} = int_{T_i} exp(i kappa <x,c>) L_nu(x) dx for the triangles of a leaf cluster.
Matrix assemble_leaf_basis(const TriangleMesh& mesh, std::span<const int> triangles, const InterpolationGrid& grid,
                           const Vec3& c, real kappa, int quad_order);

// Conjugated normal derivative variant used by the double layer column basis:
// w_{j,mu} = int_{T_j} d/dn [exp(i kappa <y,c>) L_mu(y)] dy.
Matrix assemble_leaf_basis_normal(const TriangleMesh& mesh, std::span<const int> triangles,
                                  const InterpolationGrid& grid, const Vec3& c, real kappa, int quad_order);

// e_{nu',nu} = exp(i kappa <xi_{t',nu'}, c - c'>) L_{t,nu}(xi_{t',nu'})
Matrix assemble_transfer(const InterpolationGrid& parent, const InterpolationGrid& child, const Vec3& c,
                         const Vec3& child_c, real kappa);

// Default triangle rule order for the basis integrals (fixed by a refinement study).
inline constexpr int default_basis_quad_order = 8;

struct AssemblyOptions {
    int                order            = 4;
    real               kappa            = 0.0;
    Operator           op               = Operator::single_layer;
    int                basis_quad_order = default_basis_quad_order;
    GalerkinQuadrature nearfield;
    std::size_t        dense_cap = 4096;
};

// Immutable geometry and partition shared by a DH^2 matrix and its recompressions.
struct Structure {
    TriangleMesh    mesh;
    ClusterTree     tree;
    DirectionFamily directions;
    BlockTree       blocks;
    real            kappa = 0.0;
    real            eta1  = 10.0;
    real            eta2  = 1.0;

    int size() const { return static_cast<int>(mesh.size()); }
};

std::shared_ptr<const Structure> make_structure(TriangleMesh mesh, int leaf_size, real kappa, real eta1, real eta2);

class DH2Matrix {
public:
    DH2Matrix() = default;
    DH2Matrix(std::shared_ptr<const Structure> structure, std::shared_ptr<const ClusterBasis> row,
              std::shared_ptr<const ClusterBasis> col, std::vector<Matrix> coupling,
              std::shared_ptr<const std::vector<Matrix>> nearfield);

    int size() const { return structure_->size(); }

    const Structure&       structure() const { return *structure_; }
    std::shared_ptr<const Structure> structure_ptr() const { return structure_; }
    const ClusterTree&     tree() const { return structure_->tree; }
    const DirectionFamily& directions() const { return structure_->directions; }
    const BlockTree&       blocks() const { return structure_->blocks; }
    real                   kappa() const { return structure_->kappa; }

    const ClusterBasis& row_basis() const { return *row_; }
    const ClusterBasis& col_basis() const { return *col_; }
    bool                shares_bases() const { return row_ == col_; }

    std::shared_ptr<const ClusterBasis> row_basis_ptr() const { return row_; }
    std::shared_ptr<const ClusterBasis> col_basis_ptr() const { return col_; }

    // coupling matrix of an admissible block id
    const Matrix& coupling(int block) const { return coupling_.at(structure_->blocks[block].leaf_index); }
    const std::vector<Matrix>& couplings() const { return coupling_; }
    std::vector<Matrix>&       couplings() { return coupling_; }

    // nearfield matrix of an inadmissible block id
    const Matrix& nearfield(int block) const { return nearfield_->at(structure_->blocks[block].leaf_index); }
    std::shared_ptr<const std::vector<Matrix>> nearfield_ptr() const { return nearfield_; }

private:
    std::shared_ptr<const Structure>           structure_;
    std::shared_ptr<const ClusterBasis>        row_;
    std::shared_ptr<const ClusterBasis>        col_;
    std::vector<Matrix>                        coupling_;
    std::shared_ptr<const std::vector<Matrix>> nearfield_;
};

// Galerkin matrix restricted to an inadmissible leaf (rows/cols in cluster order).
Matrix assemble_nearfield(const Structure& structure, int block, const GalerkinIntegrator& integrator);

DH2Matrix assemble_dh2(std::shared_ptr<const Structure> structure, const AssemblyOptions& options);

// Full Galerkin matrix in original triangle order; refuses n > options.dense_cap.
Matrix assemble_dense(const TriangleMesh& mesh, real kappa, const AssemblyOptions& options);

} // namespace dh2
