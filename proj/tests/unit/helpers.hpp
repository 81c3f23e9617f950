#pragma once

#include <random>

#include <dh2/common.hpp>

namespace dh2::test {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64                rng(seed);
    std::normal_distribution<real> normal;
    Matrix                         a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            a(i, j) = complex(normal(rng), normal(rng));
    return a;
}

inline Vector random_vector(Eigen::Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<real> normal;
    Vec3                           y(normal(rng), normal(rng), normal(rng));
    return y.normalized();
}

inline real rel(const Matrix& a, const Matrix& b)
{
    const real nb = b.norm();
    return nb > 0 ? (a - b).norm() / nb : (a - b).norm();
}

} // namespace dh2::test
