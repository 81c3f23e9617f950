#pragma once
//
// Quadrature on the reference triangle {0 <= x2 <= x1 <= 1} and Galerkin
// double integrals for piecewise constant basis functions on flat triangles.
//

#include <string>
#include <vector>

#include <dh2/common.hpp>
#include <dh2/geometry.hpp>

namespace dh2 {

struct GaussRule {
    std::vector<real> points;  // in [0,1]
    std::vector<real> weights; // sum to 1
};

// Gauss-Legendre rule with n points on [0,1].
const GaussRule& gauss_legendre(int n);

struct TrianglePoint {
    real x1, x2, weight; // weights sum to the reference area 1/2
};

// Collapsed (Duffy) tensor Gauss rule with order^2 points on the reference triangle.
std::vector<TrianglePoint> triangle_rule(int order);

// Affine map (0,0) -> a, (1,0) -> b, (1,1) -> c.
struct FlatTriangle {
    Vec3 a, b, c;
    Vec3 normal;  // unit normal of the physical triangle (orientation of the mesh)
    real jacobian; // 2 * area

    Vec3 map(real x1, real x2) const { return a + x1 * (b - a) + x2 * (c - b); }
};

FlatTriangle flat_triangle(const TriangleMesh& mesh, std::size_t i);

enum class Operator { single_layer, double_layer };

Operator parse_operator(const std::string& name);
const char* to_string(Operator op);

// exp(i kappa |x-y|) / (4 pi |x-y|)
complex helmholtz_slp(const Vec3& x, const Vec3& y, real kappa);

// normal derivative of the single layer kernel with respect to y
complex helmholtz_dlp(const Vec3& x, const Vec3& y, const Vec3& normal_y, real kappa);

struct GalerkinQuadrature {
    int singular_order = 5; // identical, edge- and vertex-adjacent pairs
    int regular_order  = 3; // separated pairs
};

enum class Adjacency { separated, vertex, edge, identical };

Adjacency classify(const TriangleMesh& mesh, std::size_t i, std::size_t j);

// int_{T_i} int_{T_j} k(x, y) dy dx for the indicator basis functions.
class GalerkinIntegrator {
public:
    GalerkinIntegrator(const TriangleMesh& mesh, Operator op, real kappa, GalerkinQuadrature orders = {});

    complex entry(std::size_t i, std::size_t j) const;

    // Separated-pair rule applied regardless of adjacency (test reference).
    complex regular_entry(std::size_t i, std::size_t j, int order) const;

    const TriangleMesh& mesh() const { return *mesh_; }

private:
    complex kernel(const Vec3& x, const Vec3& y, const Vec3& ny) const;

    complex identical(const FlatTriangle& t) const;
    complex edge_adjacent(const FlatTriangle& s, const FlatTriangle& t) const;
    complex vertex_adjacent(const FlatTriangle& s, const FlatTriangle& t) const;

    const TriangleMesh*        mesh_;
    Operator                   op_;
    real                       kappa_;
    GalerkinQuadrature         orders_;
    std::vector<TrianglePoint> regular_rule_;
};

} // namespace dh2
