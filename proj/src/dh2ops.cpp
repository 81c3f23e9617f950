#include <dh2/dh2ops.hpp>

#include <dh2/parallel.hpp>

#include <cmath>
#include <random>

namespace dh2 {

namespace {

Vector gather(const Vector& x, std::span<const int> idx)
{
    Vector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        out[i] = x[idx[i]];
    return out;
}

void scatter_add(Vector& y, std::span<const int> idx, const Vector& v)
{
    for (std::size_t i = 0; i < idx.size(); ++i)
        y[idx[i]] += v[i];
}

// coefficients x-hat = basis^* x, leaves first
std::vector<Vector> forward(const ClusterBasis& basis, const ClusterTree& tree, const Vector& x)
{
    std::vector<Vector> xh(basis.num_nodes());
    for (int l = basis.num_levels() - 1; l >= 0; --l)
        for (int id : basis.level_nodes(l)) {
            const BasisNode& n = basis.node(id);
            if (tree[n.cluster].is_leaf()) {
                xh[id] = n.leaf.adjoint() * gather(x, tree.indices(n.cluster));
                continue;
            }
            xh[id] = Vector::Zero(n.rank);
            for (std::size_t j = 0; j < n.children.size(); ++j)
                xh[id].noalias() += n.transfer[j].adjoint() * xh[n.children[j]];
        }
    return xh;
}

// y += basis * y-hat, root first
void backward(const ClusterBasis& basis, const ClusterTree& tree, std::vector<Vector>& yh, Vector& y)
{
    for (int l = 0; l < basis.num_levels(); ++l)
        for (int id : basis.level_nodes(l)) {
            const BasisNode& n = basis.node(id);
            if (tree[n.cluster].is_leaf()) {
                scatter_add(y, tree.indices(n.cluster), n.leaf * yh[id]);
                continue;
            }
            for (std::size_t j = 0; j < n.children.size(); ++j)
                yh[n.children[j]].noalias() += n.transfer[j] * yh[id];
        }
}

Vector apply(const DH2Matrix& a, const Vector& x, bool adjoint)
{
    if (x.size() != a.size())
        throw DimensionMismatch("vector length " + std::to_string(x.size()) + " does not match matrix size " +
                                std::to_string(a.size()));
    const ClusterTree&  tree = a.tree();
    const BlockTree&    bt   = a.blocks();
    const ClusterBasis& in   = adjoint ? a.row_basis() : a.col_basis();
    const ClusterBasis& out  = adjoint ? a.col_basis() : a.row_basis();

    std::vector<Vector> xh = forward(in, tree, x);
    std::vector<Vector> yh(out.num_nodes());
    for (int id = 0; id < out.num_nodes(); ++id)
        yh[id] = Vector::Zero(out.node(id).rank);

    const auto& adm = bt.admissible();
    for (std::size_t i = 0; i < adm.size(); ++i) {
        const Block&  b = bt[adm[i]];
        const Matrix& s = a.couplings()[i];
        const int     r = a.row_basis().at(b.row, b.direction);
        const int     c = a.col_basis().at(b.col, b.direction);
        if (adjoint)
            yh[c].noalias() += s.adjoint() * xh[r];
        else
            yh[r].noalias() += s * xh[c];
    }

    Vector y = Vector::Zero(a.size());
    backward(out, tree, yh, y);

    for (int id : bt.inadmissible()) {
        const Block&  b = bt[id];
        const Matrix& g = a.nearfield(id);
        if (adjoint)
            scatter_add(y, tree.indices(b.col), g.adjoint() * gather(x, tree.indices(b.row)));
        else
            scatter_add(y, tree.indices(b.row), g * gather(x, tree.indices(b.col)));
    }
    return y;
}

} // namespace

Vector matvec(const DH2Matrix& a, const Vector& x) { return apply(a, x, false); }
Vector matvec_adjoint(const DH2Matrix& a, const Vector& x) { return apply(a, x, true); }

std::vector<Matrix> expand_all(const ClusterBasis& basis, const ClusterTree& tree)
{
    std::vector<Matrix> e(basis.num_nodes());
    for (int l = basis.num_levels() - 1; l >= 0; --l) {
        const auto& ids = basis.level_nodes(l);
        parallel_for(ids.size(), [&](std::size_t i) {
            const BasisNode& n  = basis.node(ids[i]);
            const Cluster&   cl = tree[n.cluster];
            if (cl.is_leaf()) {
                e[ids[i]] = n.leaf;
                return;
            }
            Matrix m(cl.size(), n.rank);
            for (std::size_t j = 0; j < n.children.size(); ++j) {
                const Cluster& ch = tree[cl.children[j]];
                m.middleRows(ch.begin - cl.begin, ch.size()) = e[n.children[j]] * n.transfer[j];
            }
            e[ids[i]] = std::move(m);
        });
    }
    return e;
}

Matrix dense_block(const DH2Matrix& a, int block, const std::vector<Matrix>& row_expanded,
                   const std::vector<Matrix>& col_expanded)
{
    const Block& b = a.blocks()[block];
    switch (b.kind) {
    case BlockKind::inadmissible:
        return a.nearfield(block);
    case BlockKind::admissible:
        return row_expanded[a.row_basis().at(b.row, b.direction)] * a.coupling(block) *
               col_expanded[a.col_basis().at(b.col, b.direction)].adjoint();
    default:
        throw InvalidParameter("block " + std::to_string(block) + " is not a leaf");
    }
}

ErrorPair error_frobenius(const DH2Matrix& a, const DH2Matrix& b)
{
    if (a.blocks().num_blocks() != b.blocks().num_blocks() || a.size() != b.size())
        throw DimensionMismatch("matrices do not share a block tree");

    const auto ra = expand_all(a.row_basis(), a.tree());
    const auto ca = a.shares_bases() ? std::vector<Matrix>{} : expand_all(a.col_basis(), a.tree());
    const auto rb = expand_all(b.row_basis(), b.tree());
    const auto cb = b.shares_bases() ? std::vector<Matrix>{} : expand_all(b.col_basis(), b.tree());
    const auto& ca_ = a.shares_bases() ? ra : ca;
    const auto& cb_ = b.shares_bases() ? rb : cb;

    const auto& adm  = a.blocks().admissible();
    // per-block sums first, so the total does not depend on the thread count
    std::vector<real> dsq(adm.size()), nsq(adm.size());
    parallel_for(adm.size(), [&](std::size_t i) {
        const Matrix ga = dense_block(a, adm[i], ra, ca_);
        const Matrix gb = dense_block(b, adm[i], rb, cb_);
        dsq[i]          = (ga - gb).squaredNorm();
        nsq[i]          = ga.squaredNorm();
    });
    real diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < adm.size(); ++i) {
        diff += dsq[i];
        norm += nsq[i];
    }
    for (int id : a.blocks().inadmissible()) {
        const real na = a.nearfield(id).squaredNorm();
        norm += na;
        if (a.nearfield_ptr() != b.nearfield_ptr())
            diff += (a.nearfield(id) - b.nearfield(id)).squaredNorm();
    }
    ErrorPair e;
    e.absolute = std::sqrt(diff);
    e.relative = norm > 0.0 ? e.absolute / std::sqrt(norm) : 0.0;
    return e;
}

real spectral_norm_estimate(const LinearOperator& apply_op, const LinearOperator& apply_adjoint, int n, int iters,
                            std::uint64_t seed)
{
    if (n <= 0)
        return 0.0;
    std::mt19937_64                  rng(seed);
    std::normal_distribution<real>   normal;
    Vector                           x(n);
    for (int i = 0; i < n; ++i)
        x[i] = complex(normal(rng), normal(rng));
    x.normalize();

    real lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector z = apply_adjoint(apply_op(x));
        lambda   = z.norm();
        if (lambda == 0.0)
            return 0.0;
        x = z / lambda;
    }
    return std::sqrt(lambda);
}

real error_spectral_estimate(const LinearOperator& apply_diff, const LinearOperator& apply_diff_adjoint, int n,
                             int iters, std::uint64_t seed)
{
    return spectral_norm_estimate(apply_diff, apply_diff_adjoint, n, iters, seed);
}

ErrorPair error_spectral(const DH2Matrix& a, const DH2Matrix& b, int iters, std::uint64_t seed)
{
    if (a.size() != b.size())
        throw DimensionMismatch("matrices differ in size");
    const int n    = a.size();
    auto      diff = [&](const Vector& x) { return Vector(matvec(a, x) - matvec(b, x)); };
    auto      diff_adj = [&](const Vector& x) { return Vector(matvec_adjoint(a, x) - matvec_adjoint(b, x)); };
    ErrorPair e;
    e.absolute = error_spectral_estimate(diff, diff_adj, n, iters, seed);
    const real na = spectral_norm_estimate([&](const Vector& x) { return matvec(a, x); },
                                           [&](const Vector& x) { return matvec_adjoint(a, x); }, n, iters, seed);
    e.relative = na > 0.0 ? e.absolute / na : 0.0;
    return e;
}

StorageReport storage_report(const DH2Matrix& a)
{
    StorageReport r;
    r.n               = a.size();
    r.row_basis_bytes = a.row_basis().coefficient_count() * bytes_per_scalar;
    r.col_basis_bytes = a.shares_bases() ? 0 : a.col_basis().coefficient_count() * bytes_per_scalar;
    for (const auto& s : a.couplings())
        r.coupling_bytes += static_cast<std::size_t>(s.size()) * bytes_per_scalar;
    for (int id : a.blocks().inadmissible())
        r.nearfield_bytes += static_cast<std::size_t>(a.nearfield(id).size()) * bytes_per_scalar;
    return r;
}

int max_rank(const DH2Matrix& a) { return std::max(a.row_basis().max_rank(), a.col_basis().max_rank()); }

} // namespace dh2
