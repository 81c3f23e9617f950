#include <doctest.h>

#include <random>

#include "helpers.hpp"

#include <dh2/directions.hpp>

using namespace dh2;

TEST_SUITE("directions")
{
    TEST_CASE("low frequency levels hold the zero direction")
    {
        const auto f = build_direction_family({1.0, 0.5}, 10.0, 10.0);
        CHECK(f.size(0) == 1);
        CHECK(f.is_low_frequency(0));
        CHECK(f.direction(0, 0).isZero());
        CHECK(f.is_low_frequency(1));
    }

    TEST_CASE("direction count from the subdivision rule")
    {
        // m = ceil(2 sqrt 2) = 3
        CHECK(direction_subdivisions(2.0, 10.0, 10.0) == 3);
        const auto f = build_direction_family({2.0}, 10.0, 10.0);
        CHECK(f.size(0) == 54);
        for (const auto& c : f.level(0))
            CHECK(std::abs(c.norm() - 1.0) <= 1e-12);
    }

    TEST_CASE("directions are antipodally symmetric")
    {
        const auto f = build_direction_family({3.0}, 10.0, 10.0);
        for (const auto& c : f.level(0)) {
            real best = 1e9;
            for (const auto& d : f.level(0))
                best = std::min(best, (c + d).norm());
            CHECK(best <= 1e-12);
        }
    }

    TEST_CASE("coverage of sampled unit vectors")
    {
        const std::vector<real> diams{4.0, 2.5, 1.3, 0.7};
        const real              kappa = 20.0, eta1 = 10.0;
        const auto              f     = build_direction_family(diams, kappa, eta1);
        std::mt19937_64         rng(7);
        for (std::size_t l = 0; l < diams.size(); ++l) {
            if (kappa * diams[l] <= eta1)
                continue;
            const real bound = eta1 / (kappa * diams[l]);
            for (int i = 0; i < 1000; ++i) {
                const Vec3 y = test::random_unit(rng);
                const int  c = nearest_direction(f, static_cast<int>(l), y);
                CHECK((y - f.direction(static_cast<int>(l), c)).norm() <= bound);
            }
        }
    }

    TEST_CASE("count bound per level")
    {
        const std::vector<real> diams{5.0, 3.0, 1.5, 0.2};
        const real              kappa = 15.0, eta1 = 10.0;
        const auto              f     = build_direction_family(diams, kappa, eta1);
        for (std::size_t l = 0; l < diams.size(); ++l) {
            const int m = static_cast<int>(std::ceil(std::sqrt(2.0) * kappa * diams[l] / eta1));
            if (kappa * diams[l] <= eta1)
                CHECK(f.size(static_cast<int>(l)) == 1);
            else
                CHECK(f.size(static_cast<int>(l)) <= 6 * m * m);
        }
    }

    TEST_CASE("child map picks a nearest direction and covers every parent")
    {
        const auto f = build_direction_family({6.0, 3.0, 1.5, 0.75}, 12.0, 10.0);
        for (int l = 0; l + 1 < f.num_levels(); ++l) {
            std::vector<char> mapped(f.size(l), 0);
            for (int c = 0; c < f.size(l); ++c) {
                const int cc   = f.child_direction(l, c);
                const real d   = (f.direction(l, c) - f.direction(l + 1, cc)).norm();
                real       best = 1e9;
                for (const auto& x : f.level(l + 1))
                    best = std::min(best, (f.direction(l, c) - x).norm());
                CHECK(d <= best + 1e-15);
                for (int p : f.parent_directions(l, cc))
                    if (p == c)
                        mapped[c] = 1;
            }
            for (char m : mapped)
                CHECK(m);
        }
    }

    TEST_CASE("nearest direction")
    {
        const auto f = build_direction_family({2.0, 1.0}, 10.0, 10.0);
        for (int c = 0; c < f.size(0); ++c)
            CHECK(nearest_direction(f, 0, f.direction(0, c)) == c);
        CHECK(nearest_direction(f, 1, Vec3(0, 0, 1)) == 0);

        std::mt19937_64 rng(11);
        for (int i = 0; i < 100; ++i) {
            const Vec3 y    = test::random_unit(rng);
            int        best = 0;
            for (int c = 1; c < f.size(0); ++c)
                if ((y - f.direction(0, c)).norm() < (y - f.direction(0, best)).norm())
                    best = c;
            CHECK(nearest_direction(f, 0, y) == best);
        }
        CHECK_THROWS(nearest_direction(f, 2, Vec3(1, 0, 0)));
    }

    TEST_CASE("ties go to the lowest index")
    {
        const std::vector<Vec3> cands{{1, 0, 0}, {0, 1, 0}};
        CHECK(nearest_in(cands, Vec3(1, 1, 0).normalized()) == 0);
    }

    TEST_CASE("invalid parameters")
    {
        CHECK_THROWS_AS(build_direction_family({1.0, 0.0}, 1.0, 10.0), InvalidParameter);
        CHECK_THROWS_AS(build_direction_family({1.0}, 1.0, 0.0), InvalidParameter);
        CHECK_THROWS_AS(build_direction_family({1.0}, 1.0, -1.0), InvalidParameter);
    }
}
