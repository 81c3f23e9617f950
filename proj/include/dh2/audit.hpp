#pragma once
//
// Invariant checks on DH^2 matrices and their recompressions. Each returns a
// residual; the caller compares it with a tolerance.
//

#include <cstdint>
#include <string>
#include <vector>

#include <dh2/oracles.hpp>

namespace dh2 {

struct AuditCheck {
    std::string name;
    bool        pass      = false;
    real        residual  = 0.0;
    real        tolerance = 0.0;
};

AuditCheck make_check(std::string name, real residual, real tol);

// |covered entries - n^2| over the leaves of the block tree
real partition_residual(const Structure& st);

// worst ratio of the distance to the nearest direction and its bound, over
// sampled unit vectors on every directional level (<= 1 means covered)
real coverage_ratio(const Structure& st, std::uint64_t seed, int samples);

int admissibility_violations(const Structure& st);

// largest deviation between sigma(V Z^*) and sigma(G_tc) relative to the top
// value; values below 1e-14 of the top are ignored
real weight_oracle_residual(const DH2Matrix& a, Side side, const Oracle& oracle);

// worst ||Q^* Q - I||_F over the nodes
real orthogonality_residual(const ClusterBasis& basis, const std::vector<Matrix>& expanded);

// worst deviation between expanded nodes and their children times transfers
real nestedness_residual(const ClusterBasis& basis, const ClusterTree& tree, const std::vector<Matrix>& expanded);

// worst || Q^* V - C || / ||V|| over the nodes
real basis_change_residual(const ClusterBasis& old_basis, const Truncation& t, const ClusterTree& tree);

} // namespace dh2
