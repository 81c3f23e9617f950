#include <dh2/quadrature.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace dh2 {

namespace {

GaussRule compute_gauss_legendre(int n)
{
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        real x = std::cos(pi * (i + 0.75) / (n + 0.5));
        real dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            real p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0            = p1;
                p1            = p2;
            }
            dp           = n * (x * p1 - p0) / (x * x - 1.0);
            const real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const real w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]
        rule.points[i]         = 0.5 * (1.0 - x);
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i]         = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    constexpr int max_order = 128;
    if (n < 1 || n > max_order)
        throw InvalidParameter("Gauss order must lie in [1," + std::to_string(max_order) + "]");

    static const std::vector<GaussRule> rules = [] {
        std::vector<GaussRule> r(max_order + 1);
        for (int k = 1; k <= max_order; ++k)
            r[k] = compute_gauss_legendre(k);
        return r;
    }();
    return rules[n];
}

std::vector<TrianglePoint> triangle_rule(int order)
{
    const auto&                g = gauss_legendre(order);
    std::vector<TrianglePoint> rule;
    rule.reserve(order * order);
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
            const real u = g.points[a];
            const real v = g.points[b];
            rule.push_back({u, u * v, g.weights[a] * g.weights[b] * u});
        }
    return rule;
}

FlatTriangle flat_triangle(const TriangleMesh& mesh, std::size_t i)
{
    const auto& tri = mesh.triangle(i);
    return {mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]), mesh.normal(i), 2.0 * mesh.area(i)};
}

Operator parse_operator(const std::string& name)
{
    if (name == "slp")
        return Operator::single_layer;
    if (name == "dlp")
        return Operator::double_layer;
    throw InvalidParameter("unknown operator '" + name + "'");
}

const char* to_string(Operator op) { return op == Operator::single_layer ? "slp" : "dlp"; }

complex helmholtz_slp(const Vec3& x, const Vec3& y, real kappa)
{
    const real r = (x - y).norm();
    return std::exp(complex(0.0, kappa * r)) / (4.0 * pi * r);
}

complex helmholtz_dlp(const Vec3& x, const Vec3& y, const Vec3& normal_y, real kappa)
{
    const Vec3 d = y - x;
    const real r = d.norm();
    return std::exp(complex(0.0, kappa * r)) * complex(-1.0, kappa * r) * d.dot(normal_y) /
           (4.0 * pi * r * r * r);
}

Adjacency classify(const TriangleMesh& mesh, std::size_t i, std::size_t j)
{
    if (i == j)
        return Adjacency::identical;
    int shared = 0;
    for (int a : mesh.triangle(i))
        for (int b : mesh.triangle(j))
            shared += a == b;
    switch (shared) {
    case 0: return Adjacency::separated;
    case 1: return Adjacency::vertex;
    case 2: return Adjacency::edge;
    default: return Adjacency::identical;
    }
}

GalerkinIntegrator::GalerkinIntegrator(const TriangleMesh& mesh, Operator op, real kappa, GalerkinQuadrature orders)
    : mesh_(&mesh), op_(op), kappa_(kappa), orders_(orders), regular_rule_(triangle_rule(orders.regular_order))
{
    if (orders.singular_order < 1 || orders.regular_order < 1)
        throw InvalidParameter("quadrature orders must be >= 1");
}

complex GalerkinIntegrator::kernel(const Vec3& x, const Vec3& y, const Vec3& ny) const
{
    return op_ == Operator::single_layer ? helmholtz_slp(x, y, kappa_) : helmholtz_dlp(x, y, ny, kappa_);
}

complex GalerkinIntegrator::regular_entry(std::size_t i, std::size_t j, int order) const
{
    const FlatTriangle s = flat_triangle(*mesh_, i);
    const FlatTriangle t = flat_triangle(*mesh_, j);
    const auto& rule = order == orders_.regular_order ? regular_rule_ : triangle_rule(order);

    complex sum = 0.0;
    for (const auto& p : rule) {
        const Vec3 x     = s.map(p.x1, p.x2);
        complex    inner = 0.0;
        for (const auto& q : rule)
            inner += q.weight * kernel(x, t.map(q.x1, q.x2), t.normal);
        sum += p.weight * inner;
    }
    return sum * s.jacobian * t.jacobian;
}

namespace {

// Reorders the vertices of triangle j of `mesh` so that the shared ones come
// first, in the order given by `shared`.
FlatTriangle reordered(const TriangleMesh& mesh, std::size_t j, const std::vector<int>& shared)
{
    const auto&      tri = mesh.triangle(j);
    std::vector<int> order = shared;
    for (int v : tri)
        if (std::find(shared.begin(), shared.end(), v) == shared.end())
            order.push_back(v);
    return {mesh.vertex(order[0]), mesh.vertex(order[1]), mesh.vertex(order[2]), mesh.normal(j),
            2.0 * mesh.area(j)};
}

} // namespace

complex GalerkinIntegrator::entry(std::size_t i, std::size_t j) const
{
    // symmetric kernel: evaluate one ordering only so that G = G^T holds exactly
    if (op_ == Operator::single_layer && i > j)
        std::swap(i, j);
    const auto kind = classify(*mesh_, i, j);
    if (kind == Adjacency::separated)
        return regular_entry(i, j, orders_.regular_order);
    if (kind == Adjacency::identical)
        return identical(flat_triangle(*mesh_, i));

    std::vector<int> shared;
    for (int a : mesh_->triangle(i))
        for (int b : mesh_->triangle(j))
            if (a == b)
                shared.push_back(a);

    const FlatTriangle s = reordered(*mesh_, i, shared);
    const FlatTriangle t = reordered(*mesh_, j, shared);
    return kind == Adjacency::edge ? edge_adjacent(s, t) : vertex_adjacent(s, t);
}

// The singular rules below integrate over (xi, eta1, eta2, eta3) in [0,1]^4;
// each region maps onto part of T x T such that |x - y| vanishes like xi (or
// xi * eta1 * eta2) and the Jacobian cancels the singularity.

complex GalerkinIntegrator::identical(const FlatTriangle& t) const
{
    const auto& g = gauss_legendre(orders_.singular_order);
    const int   n = static_cast<int>(g.points.size());

    complex sum = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const real xi = g.points[a], e1 = g.points[b], e2 = g.points[c], e3 = g.points[d];
                    const real w  = g.weights[a] * g.weights[b] * g.weights[c] * g.weights[d] * xi * xi * xi *
                                   e1 * e1 * e2;

                    const std::array<std::array<real, 4>, 6> pts = {{
                        {xi, xi * (1 - e1 + e1 * e2), xi * (1 - e1 * e2 * e3), xi * (1 - e1)},
                        {xi * (1 - e1 * e2 * e3), xi * (1 - e1), xi, xi * (1 - e1 + e1 * e2)},
                        {xi, xi * e1 * (1 - e2 + e2 * e3), xi * (1 - e1 * e2), xi * e1 * (1 - e2)},
                        {xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * (1 - e2 + e2 * e3)},
                        {xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * (1 - e2)},
                        {xi, xi * e1 * (1 - e2), xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3)},
                    }};
                    complex local = 0.0;
                    for (const auto& p : pts)
                        local += kernel(t.map(p[0], p[1]), t.map(p[2], p[3]), t.normal);
                    sum += w * local;
                }
    return sum * t.jacobian * t.jacobian;
}

complex GalerkinIntegrator::edge_adjacent(const FlatTriangle& s, const FlatTriangle& t) const
{
    const auto& g = gauss_legendre(orders_.singular_order);
    const int   n = static_cast<int>(g.points.size());

    complex sum = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const real xi = g.points[a], e1 = g.points[b], e2 = g.points[c], e3 = g.points[d];
                    const real w  = g.weights[a] * g.weights[b] * g.weights[c] * g.weights[d] * xi * xi * xi *
                                   e1 * e1;

                    complex local =
                        kernel(s.map(xi, xi * e1 * e3), t.map(xi * (1 - e1 * e2), xi * e1 * (1 - e2)), t.normal);

                    const std::array<std::array<real, 4>, 4> pts = {{
                        {xi, xi * e1, xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3)},
                        {xi * (1 - e1 * e2), xi * e1 * (1 - e2), xi, xi * e1 * e2 * e3},
                        {xi * (1 - e1 * e2 * e3), xi * e1 * e2 * (1 - e3), xi, xi * e1},
                        {xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3), xi, xi * e1 * e2},
                    }};
                    complex rest = 0.0;
                    for (const auto& p : pts)
                        rest += kernel(s.map(p[0], p[1]), t.map(p[2], p[3]), t.normal);
                    sum += w * (local + e2 * rest);
                }
    return sum * s.jacobian * t.jacobian;
}

complex GalerkinIntegrator::vertex_adjacent(const FlatTriangle& s, const FlatTriangle& t) const
{
    const auto& g = gauss_legendre(orders_.singular_order);
    const int   n = static_cast<int>(g.points.size());

    complex sum = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const real xi = g.points[a], e1 = g.points[b], e2 = g.points[c], e3 = g.points[d];
                    const real w  = g.weights[a] * g.weights[b] * g.weights[c] * g.weights[d] * xi * xi * xi * e2;

                    sum += w * (kernel(s.map(xi, xi * e1), t.map(xi * e2, xi * e2 * e3), t.normal) +
                                kernel(s.map(xi * e2, xi * e2 * e3), t.map(xi, xi * e1), t.normal));
                }
    return sum * s.jacobian * t.jacobian;
}

} // namespace dh2
