#include <dh2/interpolation.hpp>

#include <dh2/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace dh2 {

// ---------------------------------------------------------------------------
// grids and Lagrange polynomials
// ---------------------------------------------------------------------------

InterpolationGrid::InterpolationGrid(const BoundingBox& box, int order) : order_(order)
{
    if (order < 1)
        throw InvalidParameter("interpolation order must be >= 1");
    for (int d = 0; d < 3; ++d) {
        const real mid  = 0.5 * (box.min[d] + box.max[d]);
        const real half = 0.5 * (box.max[d] - box.min[d]);
        nodes_[d].resize(order);
        for (int j = 0; j < order; ++j)
            nodes_[d][j] = mid + half * std::cos(pi * (2.0 * j + 1.0) / (2.0 * order));
    }
}

Vec3 InterpolationGrid::point(int nu) const
{
    const int c = nu % order_;
    const int b = (nu / order_) % order_;
    const int a = nu / (order_ * order_);
    return {nodes_[0][a], nodes_[1][b], nodes_[2][c]};
}

void InterpolationGrid::axis_values(int axis, real x, std::span<real> values) const
{
    const auto& xs = nodes_[axis];
    for (int a = 0; a < order_; ++a) {
        real v = 1.0;
        for (int j = 0; j < order_; ++j)
            if (j != a)
                v *= (x - xs[j]) / (xs[a] - xs[j]);
        values[a] = v;
    }
}

void InterpolationGrid::axis_derivatives(int axis, real x, std::span<real> values) const
{
    const auto& xs = nodes_[axis];
    for (int a = 0; a < order_; ++a) {
        real sum = 0.0;
        for (int j = 0; j < order_; ++j) {
            if (j == a)
                continue;
            real v = 1.0 / (xs[a] - xs[j]);
            for (int k = 0; k < order_; ++k)
                if (k != a && k != j)
                    v *= (x - xs[k]) / (xs[a] - xs[k]);
            sum += v;
        }
        values[a] = sum;
    }
}

void InterpolationGrid::lagrange(const Vec3& x, std::span<real> values) const
{
    std::vector<real> lx(order_), ly(order_), lz(order_);
    axis_values(0, x[0], lx);
    axis_values(1, x[1], ly);
    axis_values(2, x[2], lz);
    int nu = 0;
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            for (int c = 0; c < order_; ++c)
                values[nu++] = lx[a] * ly[b] * lz[c];
}

void InterpolationGrid::lagrange_derivative(const Vec3& x, const Vec3& direction, std::span<real> values) const
{
    std::vector<real> lx(order_), ly(order_), lz(order_), dx(order_), dy(order_), dz(order_);
    axis_values(0, x[0], lx);
    axis_values(1, x[1], ly);
    axis_values(2, x[2], lz);
    axis_derivatives(0, x[0], dx);
    axis_derivatives(1, x[1], dy);
    axis_derivatives(2, x[2], dz);
    int nu = 0;
    for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
            for (int c = 0; c < order_; ++c)
                values[nu++] = direction[0] * dx[a] * ly[b] * lz[c] + direction[1] * lx[a] * dy[b] * lz[c] +
                               direction[2] * lx[a] * ly[b] * dz[c];
}

InterpolationGrid chebyshev_grid(const BoundingBox& box, int order) { return InterpolationGrid(box, order); }

BoundingBox interpolation_box(const BoundingBox& box)
{
    const real  floor = 1e-3 * box.diameter();
    BoundingBox result = box;
    for (int d = 0; d < 3; ++d)
        if (box.max[d] - box.min[d] < floor) {
            const real mid = 0.5 * (box.min[d] + box.max[d]);
            result.min[d]  = mid - 0.5 * floor;
            result.max[d]  = mid + 0.5 * floor;
        }
    return result;
}

// ---------------------------------------------------------------------------
// matrix entries
// ---------------------------------------------------------------------------

complex kernel_gc(const Vec3& x, const Vec3& y, const Vec3& c, real kappa)
{
    const Vec3 d = x - y;
    const real r = d.norm();
    if (r == 0.0)
        throw SingularityError("kernel evaluated at coinciding points");
    return std::exp(complex(0.0, kappa * (r - d.dot(c)))) / (4.0 * pi * r);
}

Matrix assemble_coupling(const InterpolationGrid& grid_t, const InterpolationGrid& grid_s, const Vec3& c, real kappa)
{
    Matrix s(grid_t.size(), grid_s.size());
    for (int mu = 0; mu < grid_s.size(); ++mu) {
        const Vec3 y = grid_s.point(mu);
        for (int nu = 0; nu < grid_t.size(); ++nu)
            s(nu, mu) = kernel_gc(grid_t.point(nu), y, c, kappa);
    }
    return s;
}

namespace {

template <typename Integrand>
Matrix integrate_basis(const TriangleMesh& mesh, std::span<const int> triangles, const InterpolationGrid& grid,
                       int quad_order, Integrand&& integrand)
{
    const auto        rule = triangle_rule(quad_order);
    const int         k    = grid.size();
    Matrix            v    = Matrix::Zero(static_cast<Eigen::Index>(triangles.size()), k);
    std::vector<real> lag(k);

    for (std::size_t row = 0; row < triangles.size(); ++row) {
        const FlatTriangle tri = flat_triangle(mesh, triangles[row]);
        for (const auto& p : rule) {
            const Vec3 x = tri.map(p.x1, p.x2);
            integrand(x, tri.normal, p.weight * tri.jacobian, v.row(static_cast<Eigen::Index>(row)), lag);
        }
    }
    return v;
}

} // namespace

Matrix assemble_leaf_basis(const TriangleMesh& mesh, std::span<const int> triangles, const InterpolationGrid& grid,
                           const Vec3& c, real kappa, int quad_order)
{
    return integrate_basis(mesh, triangles, grid, quad_order,
                           [&](const Vec3& x, const Vec3&, real w, auto row, std::vector<real>& lag) {
                               grid.lagrange(x, lag);
                               const complex wave = w * std::exp(complex(0.0, kappa * x.dot(c)));
                               for (int nu = 0; nu < grid.size(); ++nu)
                                   row(nu) += wave * lag[nu];
                           });
}

Matrix assemble_leaf_basis_normal(const TriangleMesh& mesh, std::span<const int> triangles,
                                  const InterpolationGrid& grid, const Vec3& c, real kappa, int quad_order)
{
    std::vector<real> dlag(grid.size());
    return integrate_basis(mesh, triangles, grid, quad_order,
                           [&](const Vec3& x, const Vec3& n, real w, auto row, std::vector<real>& lag) {
                               grid.lagrange(x, lag);
                               grid.lagrange_derivative(x, n, dlag);
                               const complex wave  = w * std::exp(complex(0.0, kappa * x.dot(c)));
                               const complex slope = complex(0.0, kappa * n.dot(c));
                               for (int nu = 0; nu < grid.size(); ++nu)
                                   row(nu) += wave * (slope * lag[nu] + dlag[nu]);
                           });
}

Matrix assemble_transfer(const InterpolationGrid& parent, const InterpolationGrid& child, const Vec3& c,
                         const Vec3& child_c, real kappa)
{
    if (parent.order() != child.order())
        throw InvalidParameter("transfer between grids of different order");

    Matrix            e(child.size(), parent.size());
    std::vector<real> lag(parent.size());
    const Vec3        shift = c - child_c;
    for (int row = 0; row < child.size(); ++row) {
        const Vec3 xi = child.point(row);
        parent.lagrange(xi, lag);
        const complex wave = std::exp(complex(0.0, kappa * xi.dot(shift)));
        for (int col = 0; col < parent.size(); ++col)
            e(row, col) = wave * lag[col];
    }
    return e;
}

// ---------------------------------------------------------------------------
// DH^2 assembly
// ---------------------------------------------------------------------------

std::shared_ptr<const Structure> make_structure(TriangleMesh mesh, int leaf_size, real kappa, real eta1, real eta2)
{
    if (!(kappa >= 0.0))
        throw InvalidParameter("kappa must be non-negative");
    auto s        = std::make_shared<Structure>();
    s->mesh       = std::move(mesh);
    s->tree       = build_cluster_tree(s->mesh, leaf_size);
    s->directions = build_direction_family(level_max_diameters(s->tree), kappa, eta1);
    s->blocks     = build_block_tree(s->tree, s->directions, kappa, eta1, eta2);
    s->kappa      = kappa;
    s->eta1       = eta1;
    s->eta2       = eta2;
    return s;
}

DH2Matrix::DH2Matrix(std::shared_ptr<const Structure> structure, std::shared_ptr<const ClusterBasis> row,
                     std::shared_ptr<const ClusterBasis> col, std::vector<Matrix> coupling,
                     std::shared_ptr<const std::vector<Matrix>> nearfield)
    : structure_(std::move(structure)), row_(std::move(row)), col_(std::move(col)), coupling_(std::move(coupling)),
      nearfield_(std::move(nearfield))
{
    if (coupling_.size() != structure_->blocks.admissible().size())
        throw DimensionMismatch("coupling count does not match the admissible leaves");
    if (nearfield_->size() != structure_->blocks.inadmissible().size())
        throw DimensionMismatch("nearfield count does not match the inadmissible leaves");
}

namespace {

enum class Side { row, col };

// (t, c) is needed iff it serves an admissible block directly or some parent
// node maps its direction onto c.
std::vector<std::vector<char>> active_pairs(const Structure& st, bool rows, bool cols)
{
    const auto& tree = st.tree;
    const auto& dirs = st.directions;

    std::vector<std::vector<char>> active(tree.num_clusters());
    for (int t = 0; t < tree.num_clusters(); ++t) {
        const auto& cl = tree[t];
        active[t].assign(dirs.size(cl.level), 0);
        if (rows)
            for (const auto& [c, blocks] : st.blocks.row(t))
                active[t][c] = 1;
        if (cols)
            for (const auto& [c, blocks] : st.blocks.col(t))
                active[t][c] = 1;
        if (cl.parent >= 0) {
            const auto& parent = active[cl.parent];
            for (int cp = 0; cp < static_cast<int>(parent.size()); ++cp)
                if (parent[cp])
                    active[t][dirs.child_direction(cl.level - 1, cp)] = 1;
        }
    }
    return active;
}

std::shared_ptr<ClusterBasis> build_basis(const Structure& st, const std::vector<InterpolationGrid>& grids,
                                          const std::vector<std::vector<char>>& active, const AssemblyOptions& opt,
                                          bool normal_derivative)
{
    auto        basis = std::make_shared<ClusterBasis>(st.tree, st.directions, active);
    const auto& tree  = st.tree;
    const auto& dirs  = st.directions;

    parallel_for(static_cast<std::size_t>(basis->num_nodes()), [&](std::size_t id) {
        BasisNode&     n  = basis->node(id);
        const Cluster& cl = tree[n.cluster];
        const Vec3&    c  = dirs.direction(cl.level, n.direction);
        n.rank            = grids[n.cluster].size();

        if (cl.is_leaf()) {
            n.leaf = normal_derivative
                         ? assemble_leaf_basis_normal(st.mesh, tree.indices(n.cluster), grids[n.cluster], c,
                                                      st.kappa, opt.basis_quad_order)
                         : assemble_leaf_basis(st.mesh, tree.indices(n.cluster), grids[n.cluster], c, st.kappa,
                                               opt.basis_quad_order);
            return;
        }
        const int   cc      = dirs.child_direction(cl.level, n.direction);
        const Vec3& child_c = dirs.direction(cl.level + 1, cc);
        for (int child : cl.children)
            n.transfer.push_back(assemble_transfer(grids[n.cluster], grids[child], c, child_c, st.kappa));
    });
    return basis;
}

} // namespace

Matrix assemble_nearfield(const Structure& st, int block, const GalerkinIntegrator& integrator)
{
    const Block& b = st.blocks[block];
    if (b.kind != BlockKind::inadmissible)
        throw InvalidParameter("block " + std::to_string(block) + " is not an inadmissible leaf");

    const auto rows = st.tree.indices(b.row);
    const auto cols = st.tree.indices(b.col);
    Matrix     g(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i)
            g(i, j) = integrator.entry(rows[i], cols[j]);
    return g;
}

DH2Matrix assemble_dh2(std::shared_ptr<const Structure> structure, const AssemblyOptions& opt)
{
    const Structure& st = *structure;
    if (opt.order < 1)
        throw InvalidParameter("interpolation order must be >= 1");

    std::vector<InterpolationGrid> grids(st.tree.num_clusters());
    for (int t = 0; t < st.tree.num_clusters(); ++t)
        grids[t] = InterpolationGrid(interpolation_box(st.tree[t].box), opt.order);

    std::shared_ptr<const ClusterBasis> row, col;
    if (opt.op == Operator::single_layer) {
        // the column basis of the single layer operator coincides with the row basis
        row = build_basis(st, grids, active_pairs(st, true, true), opt, false);
        col = row;
    }
    else {
        row = build_basis(st, grids, active_pairs(st, true, false), opt, false);
        col = build_basis(st, grids, active_pairs(st, false, true), opt, true);
    }

    const auto&         adm = st.blocks.admissible();
    std::vector<Matrix> coupling(adm.size());
    parallel_for(adm.size(), [&](std::size_t i) {
        const Block& b = st.blocks[adm[i]];
        coupling[i]    = assemble_coupling(grids[b.row], grids[b.col],
                                           st.directions.direction(st.tree[b.row].level, b.direction), st.kappa);
    });

    const GalerkinIntegrator integrator(st.mesh, opt.op, st.kappa, opt.nearfield);
    const auto&              inadm = st.blocks.inadmissible();
    auto                     near  = std::make_shared<std::vector<Matrix>>(inadm.size());
    parallel_for(inadm.size(), [&](std::size_t i) { (*near)[i] = assemble_nearfield(st, inadm[i], integrator); });

    return DH2Matrix(std::move(structure), std::move(row), std::move(col), std::move(coupling), std::move(near));
}

Matrix assemble_dense(const TriangleMesh& mesh, real kappa, const AssemblyOptions& opt)
{
    const std::size_t n = mesh.size();
    if (n > opt.dense_cap)
        throw CapExceeded("dense assembly of " + std::to_string(n) + " unknowns exceeds the cap of " +
                          std::to_string(opt.dense_cap));

    const GalerkinIntegrator integrator(mesh, opt.op, kappa, opt.nearfield);
    Matrix                   g(n, n);
    parallel_for(n, [&](std::size_t j) {
        for (std::size_t i = 0; i < n; ++i)
            g(i, j) = integrator.entry(i, j);
    });
    return g;
}

} // namespace dh2
