#ifndef LATTICE_SPECTRA_FREECASE_HPP
#define LATTICE_SPECTRA_FREECASE_HPP

// Zero-potential chain: closed-form spectrum and the trigonometric product
// identities that pin the constant in prod (mu - nu) = 2^M (-1)^{M(M+1)/2}.
// Long products are accumulated as log|.| plus a sign count.

#include "common.hpp"
#include "constraints.hpp"

#include <cmath>
#include <vector>

namespace lattice_spectra {

/// omega(p) = 2 - 2 cos p = 4 sin^2(p/2), the free dispersion.
inline double omega(double p)
{
    const double s = std::sin(0.5 * p);
    return 4.0 * s * s;
}

struct FreeSpectrum {
    std::size_t n = 0;
    std::vector<double> k;      // k_l = pi l / (N+1)
    std::vector<double> lambda; // lambda_l = omega(k_l)

    /// psi_l(j) = sin(k_l j), l = 1..N, j = 0..N+1.
    double eigenvector(std::size_t l, std::size_t j) const
    {
        return std::sin(k.at(l - 1) * static_cast<double>(j));
    }

    /// max_j |(H psi_l)(j) - lambda_l psi_l(j)| for the free chain.
    double eigen_residual(std::size_t l) const
    {
        double worst = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double lhs = 2.0 * eigenvector(l, j) - eigenvector(l, j - 1) - eigenvector(l, j + 1);
            worst = std::max(worst, std::abs(lhs - lambda[l - 1] * eigenvector(l, j)));
        }
        return worst;
    }
};

inline FreeSpectrum free_spectrum(std::size_t n)
{
    if (n == 0)
        throw InputError("free_spectrum: N must be at least 1");
    FreeSpectrum s;
    s.n = n;
    s.k.resize(n);
    s.lambda.resize(n);
    for (std::size_t l = 1; l <= n; ++l) {
        s.k[l - 1] = pi<double>() * static_cast<double>(l) / static_cast<double>(n + 1);
        s.lambda[l - 1] = omega(s.k[l - 1]);
    }
    return s;
}

/// Even/odd split of the free 2M-site spectrum.
inline SpectrumPair<double> free_spectrum_pair(std::size_t m)
{
    const auto full = free_spectrum(2 * m);
    SpectrumPair<double> s;
    for (std::size_t i = 0; i < m; ++i) {
        s.mu.push_back(full.lambda[2 * i]);
        s.nu.push_back(full.lambda[2 * i + 1]);
    }
    return s;
}

struct IdentityCheck {
    double value = 0;
    double expected = 0;
    double residual = 0;
};

namespace detail {

struct LogAccumulator {
    std::vector<double> logs;
    std::size_t negatives = 0;
    bool zero = false;

    void push(double factor)
    {
        if (factor == 0.0) {
            zero = true;
            return;
        }
        logs.push_back(std::log(std::abs(factor)));
        if (factor < 0)
            ++negatives;
    }
    double log_abs() const { return pairwise_sum(logs); }
    double sign() const { return negatives % 2 == 0 ? 1.0 : -1.0; }
    double value() const { return zero ? 0.0 : sign() * std::exp(log_abs()); }
};

// 4 sin^2(a) - 4 sin^2(b) = 4 sin(a - b) sin(a + b), without the cancellation.
inline double sin2_gap(double a, double b)
{
    return 4.0 * std::sin(a - b) * std::sin(a + b);
}

} // namespace detail

/// g(alpha) = prod_{m=1}^{2M+1} {4 sin^2[(2m-1)pi/(2(2M+1)) - alpha] - 4 sin^2[2n pi/(2(2M+1))]},
/// checked against 4 cos^2[alpha (2M+1)].
inline IdentityCheck appendix_g(std::size_t m, long n, double alpha)
{
    if (m == 0)
        throw InputError("appendix_g: M must be at least 1");
    const double l = static_cast<double>(2 * m + 1);
    const double b = 2.0 * static_cast<double>(n) * pi<double>() / (2.0 * l);
    detail::LogAccumulator acc;
    for (std::size_t j = 1; j <= 2 * m + 1; ++j) {
        const double a = static_cast<double>(2 * j - 1) * pi<double>() / (2.0 * l) - alpha;
        acc.push(detail::sin2_gap(a, b));
    }
    IdentityCheck c;
    c.value = acc.value();
    const double cs = std::cos(alpha * l);
    c.expected = 4.0 * cs * cs;
    c.residual = std::abs(c.value - c.expected);
    return c;
}

/// prod_{m=1}^{M} {4 sin^2[(2m-1)pi/(2(2M+1))] - 4 sin^2[2n pi/(2(2M+1))]}
/// against (-1)^n / cos(pi n/(2M+1)). Exactly the first n factors are negative.
struct ProCheck : IdentityCheck {
    std::size_t negative_factors = 0;
};

inline ProCheck appendix_pro(std::size_t m, std::size_t n)
{
    if (m == 0 || n == 0 || n > m)
        throw InputError("appendix_pro: need 1 <= n <= M");
    const double l = static_cast<double>(2 * m + 1);
    const double b = 2.0 * static_cast<double>(n) * pi<double>() / (2.0 * l);
    detail::LogAccumulator acc;
    for (std::size_t j = 1; j <= m; ++j)
        acc.push(detail::sin2_gap(static_cast<double>(2 * j - 1) * pi<double>() / (2.0 * l), b));
    ProCheck c;
    c.value = acc.value();
    c.expected = (n % 2 == 0 ? 1.0 : -1.0) / std::cos(pi<double>() * static_cast<double>(n) / l);
    c.residual = std::abs(c.value - c.expected);
    c.negative_factors = acc.negatives;
    return c;
}

/// prod_{k=1}^{M} cos(pi k/(2M+1)) = 2^{-M}; residual is the relative error,
/// taken in the log domain.
inline IdentityCheck cos_product(std::size_t m)
{
    if (m == 0)
        throw InputError("cos_product: M must be at least 1");
    const double l = static_cast<double>(2 * m + 1);
    detail::LogAccumulator acc;
    for (std::size_t k = 1; k <= m; ++k)
        acc.push(std::cos(pi<double>() * static_cast<double>(k) / l));
    IdentityCheck c;
    c.value = acc.value();
    c.expected = std::ldexp(1.0, -static_cast<int>(m));
    c.residual = std::abs(std::expm1(acc.log_abs() + static_cast<double>(m) * ln2<double>())) +
                 (acc.sign() > 0 ? 0.0 : 1.0);
    return c;
}

/// sin(n x) = 2^{n-1} prod_{k=0}^{n-1} sin(x + pi k/n); absolute residual.
inline IdentityCheck sine_multiple_angle(std::size_t n, double x)
{
    if (n == 0)
        throw InputError("sine_multiple_angle: n must be at least 1");
    detail::LogAccumulator acc;
    for (std::size_t k = 0; k < n; ++k)
        acc.push(std::sin(x + pi<double>() * static_cast<double>(k) / static_cast<double>(n)));
    IdentityCheck c;
    c.value = acc.zero ? 0.0 : acc.sign() * std::exp(acc.log_abs() + static_cast<double>(n - 1) * ln2<double>());
    c.expected = std::sin(static_cast<double>(n) * x);
    c.residual = std::abs(c.value - c.expected);
    return c;
}

/// Log-domain residual of the free-chain product identity over the closed-form
/// spectra: |log|prod| - M ln 2| plus 1 for a wrong sign.
inline IdentityCheck free_product_identity(std::size_t m)
{
    if (m == 0)
        throw InputError("free_product_identity: M must be at least 1");
    const double l = static_cast<double>(2 * m + 1);
    detail::LogAccumulator acc;
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            acc.push(detail::sin2_gap(static_cast<double>(2 * i - 1) * pi<double>() / (2.0 * l),
                                      static_cast<double>(2 * j) * pi<double>() / (2.0 * l)));
    IdentityCheck c;
    const double sign = product_identity_sign(m);
    c.value = acc.sign() * std::exp(acc.log_abs());
    c.expected = sign * std::ldexp(1.0, static_cast<int>(m));
    c.residual = std::abs(acc.log_abs() - static_cast<double>(m) * ln2<double>()) + (acc.sign() == sign ? 0.0 : 1.0);
    return c;
}

} // namespace lattice_spectra

#endif
