#pragma once
//
// Dense factorizations used by the recompression: reduced QR, SVD with
// non-increasing singular values and tolerance driven rank selection.
//

#include <span>

#include <dh2/common.hpp>

namespace dh2 {

struct QrResult {
    Matrix Q; // m x min(m,n), isometric
    Matrix R; // min(m,n) x n, upper triangular
};

struct SvdResult {
    Matrix     U;     // m x r, orthonormal columns
    RealVector sigma; // r values, non-increasing
    Matrix     V;     // n x r, orthonormal columns; A = U diag(sigma) V^*
};

enum class NormMode { frobenius, spectral };

QrResult qr_reduced(const Matrix& a);

// Triangular factor only; avoids forming Q.
Matrix qr_r_factor(const Matrix& a);

SvdResult svd(const Matrix& a);

// Left singular vectors and singular values only.
SvdResult svd_left(const Matrix& a);

// Smallest k such that the discarded part meets eps relative to the whole:
//   frobenius: sqrt(sum_{i>k} s_i^2) <= eps * sqrt(sum_i s_i^2)
//   spectral:  s_{k+1} <= eps * s_1
// Zero singular values never count towards the rank.
int rank_for_tolerance(std::span<const real> sigma, real eps, NormMode mode);

// Same rule with an absolute threshold instead of one relative to sigma.
int rank_for_absolute_tolerance(std::span<const real> sigma, real tol, NormMode mode);

NormMode parse_norm_mode(const std::string& name);
const char* to_string(NormMode mode);

} // namespace dh2
