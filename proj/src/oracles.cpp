#include <dh2/oracles.hpp>

#include <algorithm>
#include <set>
#include <string>

namespace dh2 {

Oracle::Oracle(const DH2Matrix& a, OracleContext ctx) : a_(&a), ctx_(ctx)
{
    if (static_cast<std::size_t>(a.size()) > ctx_.dense_cap)
        throw CapExceeded("oracle on " + std::to_string(a.size()) + " unknowns exceeds the cap of " +
                          std::to_string(ctx_.dense_cap));
    row_ = expand_all(a.row_basis(), a.tree());
    if (!a.shares_bases())
        col_ = expand_all(a.col_basis(), a.tree());
}

Matrix Oracle::dense_block(int block) const { return dh2::dense_block(*a_, block, row_, col_expanded()); }

std::vector<int> basis_ancestors(const ClusterBasis& basis, int node)
{
    std::set<int>    seen{node};
    std::vector<int> stack{node};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        for (int p : basis.parents(id))
            if (seen.insert(p).second)
                stack.push_back(p);
    }
    return {seen.begin(), seen.end()};
}

GtcOracle Oracle::g_tc(Side side, int node) const
{
    const DH2Matrix&    a     = *a_;
    const ClusterTree&  tree  = a.tree();
    const BlockTree&    bt    = a.blocks();
    const ClusterBasis& basis = side_basis(a, side);
    const auto&         mine  = side == Side::row ? row_ : col_expanded();
    const auto&         other = side == Side::row ? col_expanded() : row_;
    const ClusterBasis& obas  = side == Side::row ? a.col_basis() : a.row_basis();

    const BasisNode& n  = basis.node(node);
    const Cluster&   cl = tree[n.cluster];

    std::vector<Matrix> parts;
    GtcOracle           out;
    std::vector<char>   used(a.size(), 0);

    for (int anc : basis_ancestors(basis, node)) {
        const BasisNode& an  = basis.node(anc);
        const Cluster&   acl = tree[an.cluster];
        const Matrix     rows = mine[anc].middleRows(cl.begin - acl.begin, cl.size());

        std::vector<int> blocks = side == Side::row ? bt.row(an.cluster, an.direction) : bt.col(an.cluster, an.direction);
        auto             partner = [&](int b) { return side == Side::row ? bt[b].col : bt[b].row; };
        std::sort(blocks.begin(), blocks.end(), [&](int x, int y) { return partner(x) < partner(y); });

        for (int b : blocks) {
            const int     s  = partner(b);
            const Matrix& sb = a.coupling(b);
            const Matrix& oe = other[obas.at(s, an.direction)];
            parts.push_back(side == Side::row ? Matrix(rows * sb * oe.adjoint())
                                              : Matrix(rows * sb.adjoint() * oe.adjoint()));
            out.column_clusters.push_back(s);
            for (int i : tree.indices(s)) {
                if (used[i])
                    out.disjoint = false;
                used[i] = 1;
            }
        }
    }

    Eigen::Index width = 0;
    for (const auto& p : parts)
        width += p.cols();
    out.g.resize(cl.size(), width);
    Eigen::Index c0 = 0;
    for (const auto& p : parts) {
        out.g.middleCols(c0, p.cols()) = p;
        c0 += p.cols();
    }
    return out;
}

Matrix Oracle::dense() const
{
    const DH2Matrix&   a    = *a_;
    const ClusterTree& tree = a.tree();
    Matrix             g    = Matrix::Zero(a.size(), a.size());
    auto               fill = [&](int id) {
        const Block& b    = a.blocks()[id];
        const Matrix blk  = dense_block(id);
        const auto   rows = tree.indices(b.row);
        const auto   cols = tree.indices(b.col);
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows.size(); ++i)
                g(rows[i], cols[j]) = blk(i, j);
    };
    for (int id : a.blocks().admissible())
        fill(id);
    for (int id : a.blocks().inadmissible())
        fill(id);
    return g;
}

GtcOracle oracle_Gtc(const DH2Matrix& a, Side side, int cluster, int direction, const OracleContext& ctx)
{
    const Oracle o(a, ctx);
    return o.g_tc(side, side_basis(a, side).at(cluster, direction));
}

Matrix oracle_dense_block(const DH2Matrix& a, int block, const OracleContext& ctx)
{
    return Oracle(a, ctx).dense_block(block);
}

} // namespace dh2
