#include <dh2/recompression.hpp>

#include <dh2/parallel.hpp>

#include <string>

namespace dh2 {

const ClusterBasis& side_basis(const DH2Matrix& a, Side side)
{
    return side == Side::row ? a.row_basis() : a.col_basis();
}

namespace {

// position of `child` in the children list of basis node `parent`
int child_slot(const BasisNode& parent, int child)
{
    for (std::size_t i = 0; i < parent.children.size(); ++i)
        if (parent.children[i] == child)
            return static_cast<int>(i);
    throw TraversalError("node is not a child of its recorded parent");
}

Matrix stack(const std::vector<Matrix>& parts, Eigen::Index cols)
{
    Eigen::Index rows = 0;
    for (const auto& p : parts)
        rows += p.rows();
    Matrix       out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        out.middleRows(r, p.rows()) = p;
        r += p.rows();
    }
    return out;
}

} // namespace

std::vector<Matrix> compute_basis_weights(const ClusterBasis& basis, const ClusterTree& tree)
{
    std::vector<Matrix> r(basis.num_nodes());
    for (int l = basis.num_levels() - 1; l >= 0; --l) {
        const auto& ids = basis.level_nodes(l);
        parallel_for(ids.size(), [&](std::size_t i) {
            const BasisNode& n = basis.node(ids[i]);
            if (tree[n.cluster].is_leaf()) {
                r[ids[i]] = qr_r_factor(n.leaf);
                return;
            }
            std::vector<Matrix> parts;
            for (std::size_t j = 0; j < n.children.size(); ++j) {
                const Matrix& rc = r[n.children[j]];
                if (rc.cols() != n.transfer[j].rows())
                    throw TraversalError("child weight missing or of wrong size");
                parts.push_back(rc * n.transfer[j]);
            }
            r[ids[i]] = qr_r_factor(stack(parts, n.rank));
        });
    }
    return r;
}

std::vector<Matrix> compute_total_weights(const DH2Matrix& a, Side side, const std::vector<Matrix>& opposite)
{
    const ClusterBasis& basis = side_basis(a, side);
    const ClusterBasis& other = side_basis(a, side == Side::row ? Side::col : Side::row);
    const BlockTree&    bt    = a.blocks();

    std::vector<Matrix> z(basis.num_nodes());
    for (int l = 0; l < basis.num_levels(); ++l) {
        const auto& ids = basis.level_nodes(l);
        parallel_for(ids.size(), [&](std::size_t i) {
            const int        id = ids[i];
            const BasisNode& n  = basis.node(id);

            const auto& blocks = side == Side::row ? bt.row(n.cluster, n.direction) : bt.col(n.cluster, n.direction);

            std::vector<Matrix> cols;
            for (int b : blocks) {
                const Block& blk = bt[b];
                const int    o   = side == Side::row ? other.at(blk.col, blk.direction)
                                                     : other.at(blk.row, blk.direction);
                const Matrix& s  = a.coupling(b);
                const Matrix& ro = opposite.at(o);
                if (side == Side::row)
                    cols.push_back(s * ro.adjoint());
                else
                    cols.push_back(s.adjoint() * ro.adjoint());
            }
            for (int p : basis.parents(id)) {
                const BasisNode& pn = basis.node(p);
                if (z[p].cols() != pn.rank)
                    throw TraversalError("parent total weight missing");
                cols.push_back(pn.transfer[child_slot(pn, id)] * z[p].adjoint());
            }

            Eigen::Index width = 0;
            for (const auto& c : cols)
                width += c.cols();
            if (width == 0) {
                z[id] = Matrix(0, n.rank);
                return;
            }
            Matrix       zt(n.rank, width);
            Eigen::Index c0 = 0;
            for (const auto& c : cols) {
                zt.middleCols(c0, c.cols()) = c;
                c0 += c.cols();
            }
            z[id] = qr_r_factor(zt.adjoint());
        });
    }
    return z;
}

Truncation truncate_basis(const DH2Matrix& a, Side side, const std::vector<Matrix>& total,
                          const TruncationOptions& opt)
{
    const ClusterBasis& old  = side_basis(a, side);
    const ClusterTree&  tree = a.tree();

    Truncation out;
    out.basis = std::make_shared<ClusterBasis>(old);
    out.change.resize(old.num_nodes());
    out.sigma.resize(old.num_nodes());
    ClusterBasis& nb = *out.basis;

    for (int l = old.num_levels() - 1; l >= 0; --l) {
        const auto& ids = old.level_nodes(l);
        parallel_for(ids.size(), [&](std::size_t i) {
            const int        id = ids[i];
            const BasisNode& n  = old.node(id);
            const Matrix&    z  = total.at(id);
            const bool       leaf = tree[n.cluster].is_leaf();

            // V (leaf) or V-hat (stacked child basis changes times transfers)
            Matrix vh;
            if (leaf)
                vh = n.leaf;
            else {
                std::vector<Matrix> parts;
                for (std::size_t j = 0; j < n.children.size(); ++j) {
                    const Matrix& c = out.change[n.children[j]];
                    if (c.cols() != n.transfer[j].rows())
                        throw TraversalError("child basis change missing");
                    parts.push_back(c * n.transfer[j]);
                }
                vh = stack(parts, n.rank);
            }

            int        k = 0;
            Matrix     u;
            RealVector sigma;
            if (z.rows() > 0 && vh.rows() > 0) {
                SvdResult s = svd_left(vh * z.adjoint());
                k           = opt.absolute ? rank_for_absolute_tolerance(std::span<const real>(s.sigma.data(), s.sigma.size()), opt.eps, opt.mode)
                                           : rank_for_tolerance(std::span<const real>(s.sigma.data(), s.sigma.size()), opt.eps, opt.mode);
                u           = s.U.leftCols(k);
                sigma       = std::move(s.sigma);
            }
            else
                u = Matrix(vh.rows(), 0);

            BasisNode& m = nb.node(id);
            m.rank       = k;
            m.transfer.clear();
            if (leaf)
                m.leaf = u;
            else {
                Eigen::Index r0 = 0;
                for (std::size_t j = 0; j < n.children.size(); ++j) {
                    const Eigen::Index rows = out.change[n.children[j]].rows();
                    m.transfer.push_back(u.middleRows(r0, rows));
                    r0 += rows;
                }
            }
            out.change[id] = u.adjoint() * vh;
            out.sigma[id]  = std::move(sigma);
        });
    }
    nb.set_orthogonal(true);
    return out;
}

std::vector<Matrix> project_couplings(const DH2Matrix& a, const std::vector<Matrix>& row_change,
                                      const std::vector<Matrix>& col_change)
{
    const auto&         adm = a.blocks().admissible();
    std::vector<Matrix> s(adm.size());
    parallel_for(adm.size(), [&](std::size_t i) {
        const Block&  b  = a.blocks()[adm[i]];
        const Matrix& cr = row_change.at(a.row_basis().at(b.row, b.direction));
        const Matrix& cc = col_change.at(a.col_basis().at(b.col, b.direction));
        const Matrix& sb = a.couplings()[i];
        if (cr.cols() != sb.rows() || cc.cols() != sb.cols())
            throw DimensionMismatch("basis change does not fit coupling of block " + std::to_string(adm[i]));
        s[i] = cr * sb * cc.adjoint();
    });
    return s;
}

RecompressionResult recompress_detailed(const DH2Matrix& a, const TruncationOptions& opt)
{
    if (!(opt.eps >= 0.0))
        throw InvalidParameter("eps must be non-negative");

    const ClusterTree&  tree = a.tree();
    std::vector<Matrix> rw   = compute_basis_weights(a.col_basis(), tree);
    std::vector<Matrix> rv   = a.shares_bases() ? rw : compute_basis_weights(a.row_basis(), tree);

    Truncation row = truncate_basis(a, Side::row, compute_total_weights(a, Side::row, rw), opt);
    Truncation col = truncate_basis(a, Side::col, compute_total_weights(a, Side::col, rv), opt);

    std::vector<Matrix> s = project_couplings(a, row.change, col.change);
    DH2Matrix m(a.structure_ptr(), row.basis, col.basis, std::move(s), a.nearfield_ptr());
    return {std::move(m), std::move(row), std::move(col)};
}

DH2Matrix recompress(const DH2Matrix& a, const TruncationOptions& opt) { return recompress_detailed(a, opt).matrix; }

} // namespace dh2
