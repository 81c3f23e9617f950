#pragma once
//
// Algebraic recompression of a DH^2 matrix: basis weights, total weights,
// truncation to orthogonal nested bases and projection of the couplings.
// All weight and basis-change matrices are indexed by basis node id.
//

#include <vector>

#include <dh2/interpolation.hpp>
#include <dh2/kernels.hpp>

namespace dh2 {

// Row side works on V and the blocks row(t,c); column side on W and the
// adjoint blocks (s, t, c) with couplings S_b^*.
enum class Side { row, col };

// R with basis = P R for an isometric P, per node; R has min(#rows, rank) rows.
std::vector<Matrix> compute_basis_weights(const ClusterBasis& basis, const ClusterTree& tree);

// Z-hat per node of the basis on `side`. `opposite` are the basis weights of
// the other side's basis. Nodes without contributions get a 0 x rank matrix.
std::vector<Matrix> compute_total_weights(const DH2Matrix& a, Side side, const std::vector<Matrix>& opposite);

struct TruncationOptions {
    real     eps      = 1e-4;
    NormMode mode     = NormMode::frobenius;
    bool     absolute = false; // threshold eps instead of eps relative to each truncated matrix
};

struct Truncation {
    std::shared_ptr<ClusterBasis> basis;  // orthogonal, nested
    std::vector<Matrix>           change; // C = Q^* V per node, new rank x old rank
    std::vector<RealVector>       sigma;  // singular values of the truncated matrix per node
};

Truncation truncate_basis(const DH2Matrix& a, Side side, const std::vector<Matrix>& total,
                          const TruncationOptions& options);

// S~_b = C_row S_b C_col^* for every admissible leaf, in admissible() order.
std::vector<Matrix> project_couplings(const DH2Matrix& a, const std::vector<Matrix>& row_change,
                                      const std::vector<Matrix>& col_change);

struct RecompressionResult {
    DH2Matrix  matrix;
    Truncation row;
    Truncation col;
};

RecompressionResult recompress_detailed(const DH2Matrix& a, const TruncationOptions& options);
DH2Matrix           recompress(const DH2Matrix& a, const TruncationOptions& options);

const ClusterBasis& side_basis(const DH2Matrix& a, Side side);

} // namespace dh2
