#pragma once
//
// Operations on DH^2 matrices: matrix-vector products, error measurement and
// storage accounting. Vectors are indexed by the original triangle order.
//

#include <cstdint>
#include <functional>

#include <dh2/interpolation.hpp>

namespace dh2 {

// y = G x
Vector matvec(const DH2Matrix& a, const Vector& x);
// y = G^* x
Vector matvec_adjoint(const DH2Matrix& a, const Vector& x);

// Dense expansion of every node of a basis, #t x rank per node id.
std::vector<Matrix> expand_all(const ClusterBasis& basis, const ClusterTree& tree);

// Dense leaf block in cluster order. The expansions are those of expand_all.
Matrix dense_block(const DH2Matrix& a, int block, const std::vector<Matrix>& row_expanded,
                   const std::vector<Matrix>& col_expanded);

struct ErrorPair {
    real absolute = 0.0;
    real relative = 0.0;
};

// Blockwise dense Frobenius comparison of two matrices on the same block tree.
// The relative denominator is the norm of `a` including its nearfield.
ErrorPair error_frobenius(const DH2Matrix& a, const DH2Matrix& b);

using LinearOperator = std::function<Vector(const Vector&)>;

// sqrt of the largest eigenvalue of A^* A by power iteration from a seeded
// random start vector.
real spectral_norm_estimate(const LinearOperator& apply, const LinearOperator& apply_adjoint, int n, int iters,
                            std::uint64_t seed);

// Estimate of ||A - B||_2 from the difference operator and its adjoint.
real error_spectral_estimate(const LinearOperator& apply_diff, const LinearOperator& apply_diff_adjoint, int n,
                             int iters, std::uint64_t seed);

// Absolute and relative (to ||a||_2) spectral error estimates.
ErrorPair error_spectral(const DH2Matrix& a, const DH2Matrix& b, int iters, std::uint64_t seed);

struct StorageReport {
    std::size_t row_basis_bytes = 0;
    std::size_t col_basis_bytes = 0; // zero when the bases are shared
    std::size_t coupling_bytes  = 0;
    std::size_t nearfield_bytes = 0;
    int         n               = 0;

    std::size_t basis_bytes() const { return row_basis_bytes + col_basis_bytes; }
    std::size_t matrix_bytes() const { return coupling_bytes + nearfield_bytes; }
    std::size_t total_bytes() const { return basis_bytes() + matrix_bytes(); }

    real basis_kb_per_dof() const { return per_dof(basis_bytes()); }
    real matrix_kb_per_dof() const { return per_dof(matrix_bytes()); }
    real total_kb_per_dof() const { return per_dof(total_bytes()); }

private:
    real per_dof(std::size_t bytes) const { return static_cast<real>(bytes) / (static_cast<real>(n) * 1024.0); }
};

inline constexpr std::size_t bytes_per_scalar = 16;

StorageReport storage_report(const DH2Matrix& a);

// Largest rank over the nodes of both bases.
int max_rank(const DH2Matrix& a);

} // namespace dh2
