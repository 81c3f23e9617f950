#include <dh2/audit.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dh2 {

AuditCheck make_check(std::string name, real residual, real tol)
{
    return {std::move(name), residual <= tol, residual, tol};
}

real partition_residual(const Structure& st)
{
    long double covered = 0;
    for (int id : st.blocks.admissible())
        covered += static_cast<long double>(st.tree[st.blocks[id].row].size()) * st.tree[st.blocks[id].col].size();
    for (int id : st.blocks.inadmissible())
        covered += static_cast<long double>(st.tree[st.blocks[id].row].size()) * st.tree[st.blocks[id].col].size();
    const long double n = st.size();
    return static_cast<real>(std::abs(covered - n * n));
}

// worst ratio of the coverage distance to its bound over sampled unit vectors
real coverage_ratio(const Structure& st, std::uint64_t seed, int samples)
{
    std::mt19937_64                rng(seed);
    std::normal_distribution<real> normal;
    const auto                     diams = level_max_diameters(st.tree);
    real                           worst = 0.0;
    for (int l = 0; l < st.directions.num_levels(); ++l) {
        if (st.kappa * diams[l] <= st.eta1)
            continue;
        const real bound = st.eta1 / (st.kappa * diams[l]);
        for (int i = 0; i < samples; ++i) {
            Vec3 y(normal(rng), normal(rng), normal(rng));
            y.normalize();
            const int c = nearest_direction(st.directions, l, y);
            worst       = std::max(worst, (y - st.directions.direction(l, c)).norm() / bound);
        }
    }
    return worst;
}

int admissibility_violations(const Structure& st)
{
    int bad = 0;
    for (int id : st.blocks.admissible()) {
        const Block& b  = st.blocks[id];
        const auto&  bt = st.tree[b.row].box;
        const auto&  bs = st.tree[b.col].box;
        const Vec3&  c  = st.directions.direction(st.tree[b.row].level, b.direction);
        if (!is_admissible(bt, bs, st.kappa, st.eta2) || !satisfies_direction_condition(bt, bs, c, st.kappa, st.eta1))
            ++bad;
    }
    return bad;
}

// largest relative deviation between sigma(V Z^*) and sigma(G_tc)
real weight_oracle_residual(const DH2Matrix& a, Side side, const Oracle& oracle)
{
    const ClusterBasis& basis = side_basis(a, side);
    const auto&         exp   = side == Side::row ? oracle.row_expanded() : oracle.col_expanded();
    const auto          rw    = compute_basis_weights(side == Side::row ? a.col_basis() : a.row_basis(), a.tree());
    const auto          z     = compute_total_weights(a, side, rw);

    real worst = 0.0;
    for (int id = 0; id < basis.num_nodes(); ++id) {
        const GtcOracle g = oracle.g_tc(side, id);
        if (!g.disjoint)
            return std::numeric_limits<real>::infinity();
        const RealVector s1 = z[id].rows() > 0 ? svd_left(Matrix(exp[id] * z[id].adjoint())).sigma : RealVector();
        const RealVector s2 = g.g.cols() > 0 ? svd_left(g.g).sigma : RealVector();
        const real       top = std::max(s1.size() ? s1[0] : 0.0, s2.size() ? s2[0] : 0.0);
        if (top == 0.0)
            continue;
        const Eigen::Index len = std::max(s1.size(), s2.size());
        for (Eigen::Index i = 0; i < len; ++i) {
            const real a1 = i < s1.size() ? s1[i] : 0.0;
            const real a2 = i < s2.size() ? s2[i] : 0.0;
            if (std::max(a1, a2) < 1e-14 * top)
                continue;
            worst = std::max(worst, std::abs(a1 - a2) / top);
        }
    }
    return worst;
}

real orthogonality_residual(const ClusterBasis& basis, const std::vector<Matrix>& expanded)
{
    real worst = 0.0;
    for (int id = 0; id < basis.num_nodes(); ++id) {
        const Matrix& q = expanded[id];
        if (q.cols() == 0)
            continue;
        worst = std::max(worst, (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).norm());
    }
    return worst;
}

real nestedness_residual(const ClusterBasis& basis, const ClusterTree& tree, const std::vector<Matrix>& expanded)
{
    real worst = 0.0;
    for (int id = 0; id < basis.num_nodes(); ++id) {
        const BasisNode& n  = basis.node(id);
        const Cluster&   cl = tree[n.cluster];
        const Matrix     direct = expand(basis, tree, id);
        worst                   = std::max(worst, (direct - expanded[id]).norm());
        for (std::size_t j = 0; j < n.children.size(); ++j) {
            const Cluster& ch  = tree[cl.children[j]];
            const Matrix   sub = expanded[id].middleRows(ch.begin - cl.begin, ch.size());
            worst              = std::max(worst, (sub - expanded[n.children[j]] * n.transfer[j]).norm());
        }
    }
    return worst;
}

// C_tc = Q_tc^* V_tc with both sides expanded
real basis_change_residual(const ClusterBasis& old_basis, const Truncation& t, const ClusterTree& tree)
{
    const auto v     = expand_all(old_basis, tree);
    const auto q     = expand_all(*t.basis, tree);
    real       worst = 0.0;
    for (int id = 0; id < old_basis.num_nodes(); ++id) {
        const real scale = std::max<real>(v[id].norm(), 1e-300);
        worst            = std::max(worst, (q[id].adjoint() * v[id] - t.change[id]).norm() / scale);
    }
    return worst;
}

} // namespace dh2
