#pragma once
//
// Dense reference computations for tests and audits. Everything here is
// quadratic in n and guarded by a size cap.
//

#include <cstdint>

#include <dh2/dh2ops.hpp>
#include <dh2/recompression.hpp>

namespace dh2 {

struct OracleContext {
    std::size_t   dense_cap       = 4096; // largest n for dense work
    int           reference_order = 16;   // separated-pair rule used for quadrature references
    std::uint64_t seed            = 20240611;
};

struct GtcOracle {
    Matrix           g;               // #t x (sum of #s over row+(t,c))
    std::vector<int> column_clusters; // canonical order: ancestor node id, then cluster id
    bool             disjoint = true; // column index sets pairwise disjoint
};

class Oracle {
public:
    explicit Oracle(const DH2Matrix& a, OracleContext ctx = {});

    // V_tc S_b W_sc^* for admissible, stored nearfield otherwise; cluster order
    Matrix dense_block(int block) const;

    // G restricted to t x row+(t,c) for a node of the basis on `side`
    // (the column side uses the adjoint blocks).
    GtcOracle g_tc(Side side, int node) const;

    // full represented matrix in original index order
    Matrix dense() const;

    const std::vector<Matrix>& row_expanded() const { return row_; }
    const std::vector<Matrix>& col_expanded() const { return a_->shares_bases() ? row_ : col_; }

private:
    const DH2Matrix*    a_;
    OracleContext       ctx_;
    std::vector<Matrix> row_, col_;
};

// Ancestor nodes (t~, c~) of a basis node, including the node itself, sorted by id.
std::vector<int> basis_ancestors(const ClusterBasis& basis, int node);

GtcOracle oracle_Gtc(const DH2Matrix& a, Side side, int cluster, int direction, const OracleContext& ctx = {});
Matrix    oracle_dense_block(const DH2Matrix& a, int block, const OracleContext& ctx = {});

} // namespace dh2
