#include "hoinfo/linalg.hpp"

#include <cmath>
#include <vector>

namespace hoinfo::linalg {

std::optional<double> cholesky_logdet(double* a, std::size_t k) noexcept {
    double logdet = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double* rj = a + j * k;
        double d = rj[j];
        for (std::size_t p = 0; p < j; ++p) d -= rj[p] * rj[p];
        if (!(d > 0.0)) return std::nullopt;
        const double ljj = std::sqrt(d);
        rj[j] = ljj;
        logdet += std::log(d);
        for (std::size_t i = j + 1; i < k; ++i) {
            double* ri = a + i * k;
            double s = ri[j];
            for (std::size_t p = 0; p < j; ++p) s -= ri[p] * rj[p];
            ri[j] = s / ljj;
        }
    }
    return logdet;
}

std::optional<double> omega_kernel(double* a, std::size_t k) noexcept {
    const auto logdet = cholesky_logdet(a, k);
    if (!logdet) return std::nullopt;

    // Column j of L^-1 by forward substitution; (S^-1)_jj is its squared norm.
    constexpr std::size_t kStack = 16;
    double stack_buf[kStack];
    std::vector<double> heap_buf;
    double* w = stack_buf;
    if (k > kStack) {
        heap_buf.resize(k);
        w = heap_buf.data();
    }
    double sum_log_prec = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        w[j] = 1.0 / a[j * k + j];
        double sq = w[j] * w[j];
        for (std::size_t i = j + 1; i < k; ++i) {
            const double* ri = a + i * k;
            double s = 0.0;
            for (std::size_t p = j; p < i; ++p) s -= ri[p] * w[p];
            w[i] = s / ri[i];
            sq += w[i] * w[i];
        }
        sum_log_prec += std::log(sq);
    }
    return -*logdet - 0.5 * sum_log_prec;
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    for (; i < n; ++i) s0 += x[i] * y[i];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace hoinfo::linalg
