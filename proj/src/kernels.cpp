#include <dh2/kernels.hpp>

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace dh2 {

namespace {

void require_finite(const Matrix& a, const char* what)
{
    if (!a.allFinite())
        throw InvalidParameter(std::string(what) + ": matrix has non-finite entries");
}

void require_sorted(std::span<const real> sigma)
{
    for (std::size_t i = 1; i < sigma.size(); ++i)
        if (sigma[i] > sigma[i - 1])
            throw InvalidParameter("singular values are not sorted non-increasingly");
}

} // namespace

QrResult qr_reduced(const Matrix& a)
{
    require_finite(a, "qr_reduced");
    const Eigen::Index r = std::min(a.rows(), a.cols());

    QrResult result;
    if (r == 0) {
        result.Q = Matrix::Zero(a.rows(), 0);
        result.R = Matrix::Zero(0, a.cols());
        return result;
    }

    Eigen::HouseholderQR<Matrix> qr(a);
    result.Q = qr.householderQ() * Matrix::Identity(a.rows(), r);
    result.R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    return result;
}

Matrix qr_r_factor(const Matrix& a)
{
    require_finite(a, "qr_r_factor");
    const Eigen::Index r = std::min(a.rows(), a.cols());
    if (r == 0)
        return Matrix::Zero(0, a.cols());

    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
}

namespace {

SvdResult svd_impl(const Matrix& a, unsigned options)
{
    require_finite(a, "svd");
    const Eigen::Index r = std::min(a.rows(), a.cols());

    SvdResult result;
    if (r == 0) {
        result.U     = Matrix::Zero(a.rows(), 0);
        result.sigma = RealVector::Zero(0);
        result.V     = Matrix::Zero(a.cols(), 0);
        return result;
    }

    Eigen::BDCSVD<Matrix> dec(a, options);
    result.U     = dec.matrixU();
    result.sigma = dec.singularValues();
    if (options & Eigen::ComputeThinV)
        result.V = dec.matrixV();
    return result;
}

} // namespace

SvdResult svd(const Matrix& a) { return svd_impl(a, Eigen::ComputeThinU | Eigen::ComputeThinV); }

SvdResult svd_left(const Matrix& a) { return svd_impl(a, Eigen::ComputeThinU); }

int rank_for_absolute_tolerance(std::span<const real> sigma, real tol, NormMode mode)
{
    require_sorted(sigma);
    if (tol < 0.0)
        throw InvalidParameter("tolerance must be non-negative");

    const int tau = static_cast<int>(sigma.size());

    if (mode == NormMode::spectral) {
        for (int k = 0; k < tau; ++k)
            if (sigma[k] <= tol)
                return k;
        return tau;
    }

    // tail[k] = sum_{i >= k} sigma_i^2, accumulated from the small end
    real tail = 0.0;
    int  k    = tau;
    while (k > 0) {
        const real next = tail + sigma[k - 1] * sigma[k - 1];
        if (std::sqrt(next) > tol)
            break;
        tail = next;
        --k;
    }
    return k;
}

int rank_for_tolerance(std::span<const real> sigma, real eps, NormMode mode)
{
    require_sorted(sigma);
    if (eps < 0.0)
        throw InvalidParameter("tolerance must be non-negative");
    if (sigma.empty())
        return 0;

    real scale = sigma[0];
    if (mode == NormMode::frobenius) {
        real sum = 0.0;
        for (real s : sigma)
            sum += s * s;
        scale = std::sqrt(sum);
    }
    return rank_for_absolute_tolerance(sigma, eps * scale, mode);
}

NormMode parse_norm_mode(const std::string& name)
{
    if (name == "frobenius")
        return NormMode::frobenius;
    if (name == "spectral")
        return NormMode::spectral;
    throw InvalidParameter("unknown norm mode '" + name + "'");
}

const char* to_string(NormMode mode) { return mode == NormMode::frobenius ? "frobenius" : "spectral"; }

} // namespace dh2
