#include <doctest.h>

#include "helpers.hpp"

#include <dh2/oracles.hpp>
#include <dh2/recompression.hpp>

#include <algorithm>

using namespace dh2;
using namespace dh2::test;

namespace {

// directional test matrix, assembled once
const DH2Matrix& fixture(Operator op)
{
    static const auto st = make_structure(build_cube_mesh(6), 4, 10.0, 2.0, 1.0);
    auto make = [&](Operator o) {
        AssemblyOptions opt;
        opt.order = 3;
        opt.kappa = 10.0;
        opt.op    = o;
        return assemble_dh2(st, opt);
    };
    static const DH2Matrix slp = make(Operator::single_layer);
    static const DH2Matrix dlp = make(Operator::double_layer);
    return op == Operator::single_layer ? slp : dlp;
}

RealVector singular_values(const Matrix& m)
{
    if (m.size() == 0)
        return RealVector(0);
    return Eigen::BDCSVD<Matrix>(m).singularValues();
}

// compares nonnegligible singular values
real sigma_mismatch(const RealVector& a, const RealVector& b)
{
    const real top = std::max(a.size() ? a[0] : 0.0, b.size() ? b[0] : 0.0);
    real       d   = 0.0;
    for (Eigen::Index i = 0; i < std::max(a.size(), b.size()); ++i) {
        const real x = i < a.size() ? a[i] : 0.0;
        const real y = i < b.size() ? b[i] : 0.0;
        d            = std::max(d, std::abs(x - y));
    }
    return top > 0 ? d / top : d;
}

real orthogonality_defect(const ClusterBasis& basis, const ClusterTree& tree)
{
    real d = 0.0;
    for (int id = 0; id < basis.num_nodes(); ++id) {
        const Matrix q = expand(basis, tree, id);
        d = std::max(d, (q.adjoint() * q - Matrix::Identity(q.cols(), q.cols())).norm());
    }
    return d;
}

} // namespace

TEST_SUITE("recompression")
{
    TEST_CASE("basis weights reproduce the Gram matrices")
    {
        const DH2Matrix& a = fixture(Operator::double_layer);
        for (Side side : {Side::row, Side::col}) {
            const ClusterBasis& b = side_basis(a, side);
            const auto          r = compute_basis_weights(b, a.tree());
            REQUIRE(r.size() == static_cast<std::size_t>(b.num_nodes()));
            for (int id = 0; id < b.num_nodes(); ++id) {
                const Matrix v = expand(b, a.tree(), id);
                CHECK(r[id].cols() == v.cols());
                CHECK(r[id].rows() == std::min(v.rows(), v.cols()));
                CHECK(rel(r[id].adjoint() * r[id], v.adjoint() * v) <= 1e-12);
            }
        }
    }

    TEST_CASE("total weights match the dense total matrix")
    {
        for (Operator op : {Operator::single_layer, Operator::double_layer}) {
            const DH2Matrix& a = fixture(op);
            for (Side side : {Side::row, Side::col}) {
                const ClusterBasis& b   = side_basis(a, side);
                const ClusterBasis& o   = side_basis(a, side == Side::row ? Side::col : Side::row);
                const auto          z   = compute_total_weights(a, side, compute_basis_weights(o, a.tree()));
                int                 checked = 0;
                for (int id = 0; id < b.num_nodes(); id += 7) {
                    const BasisNode& n = b.node(id);
                    const GtcOracle  g = oracle_Gtc(a, side, n.cluster, n.direction);
                    CHECK(g.disjoint);
                    const Matrix v = expand(b, a.tree(), id);
                    const Matrix vz = z[id].rows() ? Matrix(v * z[id].adjoint()) : Matrix(v.rows(), 0);
                    CHECK(sigma_mismatch(singular_values(vz), singular_values(g.g)) <= 1e-12);
                    ++checked;
                }
                CHECK(checked > 10);
            }
        }
    }

    TEST_CASE("zero tolerance keeps the matrix")
    {
        const DH2Matrix& a = fixture(Operator::single_layer);
        TruncationOptions opt;
        opt.eps        = 0.0;
        const auto b   = recompress(a, opt);
        CHECK(error_frobenius(a, b).relative <= 1e-12);
    }

    TEST_CASE("recompressed bases are orthogonal and nested")
    {
        for (Operator op : {Operator::single_layer, Operator::double_layer}) {
            const DH2Matrix& a = fixture(op);
            TruncationOptions opt;
            opt.eps      = 1e-4;
            const auto r = recompress_detailed(a, opt);
            CHECK(r.row.basis->orthogonal());
            CHECK(orthogonality_defect(*r.row.basis, a.tree()) <= 1e-12);
            CHECK(orthogonality_defect(*r.col.basis, a.tree()) <= 1e-12);
            // transfers connect to the children that exist in the new basis
            const ClusterBasis& nb = *r.row.basis;
            for (int id = 0; id < nb.num_nodes(); ++id) {
                const BasisNode& n = nb.node(id);
                for (std::size_t j = 0; j < n.children.size(); ++j) {
                    CHECK(n.transfer[j].rows() == nb.node(n.children[j]).rank);
                    CHECK(n.transfer[j].cols() == n.rank);
                }
            }
        }
    }

    TEST_CASE("basis change matrices project the old basis")
    {
        const DH2Matrix&  a = fixture(Operator::double_layer);
        TruncationOptions opt;
        opt.eps      = 1e-3;
        const auto r = recompress_detailed(a, opt);
        for (Side side : {Side::row, Side::col}) {
            const Truncation&   t   = side == Side::row ? r.row : r.col;
            const ClusterBasis& old = side_basis(a, side);
            for (int id = 0; id < old.num_nodes(); id += 5) {
                const Matrix q = expand(*t.basis, a.tree(), id);
                const Matrix v = expand(old, a.tree(), id);
                CHECK(rel(t.change[id], q.adjoint() * v) <= 1e-11);
            }
        }
    }

    TEST_CASE("error stays within the tolerance and decreases with it")
    {
        for (Operator op : {Operator::single_layer, Operator::double_layer}) {
            const DH2Matrix& a       = fixture(op);
            real             prev_e  = 1e300;
            std::size_t      prev_sz = 0;
            int              prev_k  = 0;
            for (real eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
                TruncationOptions opt;
                opt.eps      = eps;
                const auto b = recompress(a, opt);
                const real e = error_frobenius(a, b).relative;
                const auto s = storage_report(b);
                MESSAGE("eps " << eps << " err " << e << " rank " << max_rank(b));
                CHECK(e <= eps);
                CHECK(e <= prev_e);
                CHECK(s.total_bytes() >= prev_sz);
                CHECK(max_rank(b) >= prev_k);
                CHECK(s.total_bytes() <= storage_report(a).total_bytes());
                prev_e  = e;
                prev_sz = s.total_bytes();
                prev_k  = max_rank(b);
            }
        }
    }

    TEST_CASE("spectral mode keeps no more than Frobenius mode")
    {
        const DH2Matrix&  a = fixture(Operator::single_layer);
        TruncationOptions f, s;
        f.eps = s.eps = 1e-3;
        s.mode        = NormMode::spectral;
        CHECK(max_rank(recompress(a, s)) <= max_rank(recompress(a, f)));
    }

    TEST_CASE("recompression is nearly idempotent")
    {
        const DH2Matrix&  a = fixture(Operator::single_layer);
        TruncationOptions opt;
        opt.eps      = 1e-4;
        const auto b = recompress(a, opt);
        const auto c = recompress(b, opt);
        CHECK(max_rank(c) <= max_rank(b));
        CHECK(error_frobenius(b, c).relative <= 1e-4);
        CHECK(c.nearfield_ptr() == a.nearfield_ptr());
        CHECK(c.structure_ptr() == a.structure_ptr());
    }

    TEST_CASE("vanishing couplings give rank zero")
    {
        const DH2Matrix&    a = fixture(Operator::single_layer);
        std::vector<Matrix> zero;
        for (const auto& s : a.couplings())
            zero.push_back(Matrix::Zero(s.rows(), s.cols()));
        const DH2Matrix z(a.structure_ptr(), a.row_basis_ptr(), a.col_basis_ptr(), zero, a.nearfield_ptr());
        const auto      b = recompress(z, TruncationOptions{});
        CHECK(max_rank(b) == 0);
        CHECK(error_frobenius(z, b).absolute == 0.0);
        Vector x = random_vector(b.size(), 4);
        CHECK((matvec(b, x) - matvec(z, x)).norm() <= 1e-13 * matvec(z, x).norm());
    }

    TEST_CASE("absolute tolerance mode")
    {
        const DH2Matrix&  a = fixture(Operator::single_layer);
        TruncationOptions opt;
        opt.absolute = true;
        opt.eps      = 1e-8;
        const auto b = recompress(a, opt);
        CHECK(error_frobenius(a, b).absolute <= 1e-8 * std::sqrt(static_cast<real>(b.row_basis().num_nodes())) * 10);
        opt.eps = -1.0;
        CHECK_THROWS_AS(recompress(a, opt), InvalidParameter);
    }

    TEST_CASE("larger leaves: total weights and error bound")
    {
        auto            st = make_structure(build_cube_mesh(8), 8, 6.0, 2.0, 1.0);
        AssemblyOptions opt;
        opt.order          = 3;
        opt.kappa          = 6.0;
        const auto a       = assemble_dh2(st, opt);
        REQUIRE(st->blocks.admissible().size() > 1000);

        const auto z = compute_total_weights(a, Side::row, compute_basis_weights(a.col_basis(), a.tree()));
        for (int id = 0; id < a.row_basis().num_nodes(); id += 97) {
            const BasisNode& n = a.row_basis().node(id);
            const GtcOracle  g = oracle_Gtc(a, Side::row, n.cluster, n.direction);
            const Matrix     v = expand(a.row_basis(), a.tree(), id);
            const Matrix vz    = z[id].rows() ? Matrix(v * z[id].adjoint()) : Matrix(v.rows(), 0);
            CHECK(sigma_mismatch(singular_values(vz), singular_values(g.g)) <= 1e-12);
        }

        int prev = 0, first = -1;
        for (real eps : {1e-2, 1e-3, 1e-4}) {
            TruncationOptions t;
            t.eps        = eps;
            const auto b = recompress(a, t);
            const real e = error_frobenius(a, b).relative;
            MESSAGE("eps " << eps << " err " << e << " rank " << max_rank(b));
            CHECK(e <= eps);
            CHECK(max_rank(b) >= prev);
            CHECK(max_rank(b) < 27);
            prev = max_rank(b);
            if (first < 0)
                first = prev;
        }
        CHECK(prev > first);
    }
}
