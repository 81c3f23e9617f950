#include <doctest.h>

#include "helpers.hpp"

#include <dh2/dh2ops.hpp>
#include <dh2/oracles.hpp>
#include <dh2/recompression.hpp>

using namespace dh2;
using namespace dh2::test;

namespace {

DH2Matrix small(Operator op, real kappa = 10.0)
{
    auto            st = make_structure(build_cube_mesh(6), 4, kappa, 2.0, 1.0);
    AssemblyOptions opt;
    opt.order = 3;
    opt.kappa = kappa;
    opt.op    = op;
    return assemble_dh2(st, opt);
}

DH2Matrix scaled(const DH2Matrix& a, complex f)
{
    std::vector<Matrix> s = a.couplings();
    for (auto& m : s)
        m *= f;
    auto near = std::make_shared<std::vector<Matrix>>(*a.nearfield_ptr());
    for (auto& m : *near)
        m *= f;
    return DH2Matrix(a.structure_ptr(), a.row_basis_ptr(), a.col_basis_ptr(), std::move(s), near);
}

} // namespace

TEST_SUITE("dh2ops")
{
    TEST_CASE("matvec agrees with the dense representation")
    {
        for (Operator op : {Operator::single_layer, Operator::double_layer}) {
            const auto   a = small(op);
            const Matrix g = Oracle(a).dense();
            for (std::uint64_t seed : {1, 2, 3}) {
                const Vector x = random_vector(a.size(), seed);
                CHECK(rel(matvec(a, x), g * x) <= 1e-13);
                CHECK(rel(matvec_adjoint(a, x), g.adjoint() * x) <= 1e-13);
            }
        }
    }

    TEST_CASE("adjoint identity and linearity")
    {
        const auto    a = small(Operator::double_layer);
        const Vector  x = random_vector(a.size(), 11);
        const Vector  y = random_vector(a.size(), 12);
        const complex l = y.dot(matvec(a, x));
        const complex r = matvec_adjoint(a, y).dot(x);
        CHECK(std::abs(l - r) <= 1e-13 * std::abs(l));
        const complex alpha(0.3, -2.0);
        CHECK(rel(matvec(a, alpha * x + y), alpha * matvec(a, x) + matvec(a, y)) <= 1e-13);
        CHECK_THROWS_AS(matvec(a, Vector::Zero(3)), DimensionMismatch);
    }

    TEST_CASE("Frobenius error of a scaled copy")
    {
        const auto a = small(Operator::single_layer);
        const auto b = scaled(a, 1.0 + 1e-6);
        const auto e = error_frobenius(a, b);
        CHECK(e.relative == doctest::Approx(1e-6).epsilon(1e-6));
        CHECK(error_frobenius(a, a).absolute == 0.0);

        // against a dense oracle
        const Matrix ga = Oracle(a).dense();
        CHECK(e.absolute == doctest::Approx(1e-6 * ga.norm()).epsilon(1e-6));
    }

    TEST_CASE("power iteration on a rank one operator")
    {
        const int    n = 50;
        const Vector u = random_vector(n, 21).normalized();
        const Vector v = random_vector(n, 22).normalized();
        const real   s = 3.7;
        auto apply     = [&](const Vector& x) { return Vector(s * u * v.dot(x)); };
        auto adjoint   = [&](const Vector& x) { return Vector(s * v * u.dot(x)); };
        CHECK(spectral_norm_estimate(apply, adjoint, n, 5, 1) == doctest::Approx(s).epsilon(1e-6));
        auto zero = [&](const Vector& x) { return Vector(Vector::Zero(x.size())); };
        CHECK(spectral_norm_estimate(zero, zero, n, 5, 1) == 0.0);
    }

    TEST_CASE("power iteration matches the largest singular value")
    {
        const auto   a = small(Operator::single_layer);
        const Matrix g = Oracle(a).dense();
        const real   s = Eigen::BDCSVD<Matrix>(g).singularValues()[0];
        const real   e = spectral_norm_estimate([&](const Vector& x) { return matvec(a, x); },
                                                [&](const Vector& x) { return matvec_adjoint(a, x); }, a.size(), 200, 5);
        CHECK(e <= s * (1 + 1e-12));
        CHECK(e >= s * (1 - 1e-3));
    }

    TEST_CASE("spectral error is bounded by the Frobenius error")
    {
        const auto        a = small(Operator::single_layer);
        TruncationOptions opt;
        opt.eps      = 1e-2;
        const auto b = recompress(a, opt);
        const auto f = error_frobenius(a, b);
        const auto s = error_spectral(a, b, 50, 7);
        CHECK(s.absolute > 0.0);
        CHECK(s.absolute <= f.absolute * (1 + 1e-12));
        // same seed, same estimate
        CHECK(error_spectral(a, b, 50, 7).absolute == s.absolute);
    }

    TEST_CASE("storage accounting")
    {
        const auto a = small(Operator::single_layer);
        const auto r = storage_report(a);
        CHECK(r.col_basis_bytes == 0);
        CHECK(r.n == a.size());

        std::size_t coeff = 0;
        for (int id = 0; id < a.row_basis().num_nodes(); ++id) {
            const BasisNode& n = a.row_basis().node(id);
            coeff += n.leaf.size();
            for (const auto& e : n.transfer)
                coeff += e.size();
        }
        CHECK(r.row_basis_bytes == coeff * 16);
        std::size_t near = 0;
        for (int id : a.blocks().inadmissible())
            near += a.nearfield(id).size();
        CHECK(r.nearfield_bytes == near * 16);
        CHECK(r.coupling_bytes == a.couplings().size() * 27 * 27 * 16);
        CHECK(r.total_kb_per_dof() ==
              doctest::Approx(static_cast<real>(r.total_bytes()) / (1024.0 * a.size())));

        const auto d = storage_report(small(Operator::double_layer));
        CHECK(d.col_basis_bytes > 0);
        CHECK(max_rank(a) == 27);
    }

    TEST_CASE("expansion matches the per-node expansion")
    {
        const auto a = small(Operator::double_layer);
        const auto e = expand_all(a.col_basis(), a.tree());
        for (int id = 0; id < a.col_basis().num_nodes(); id += 3)
            CHECK(rel(e[id], expand(a.col_basis(), a.tree(), id)) <= 1e-14);
    }
}
