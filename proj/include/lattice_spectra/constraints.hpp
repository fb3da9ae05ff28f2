#ifndef LATTICE_SPECTRA_CONSTRAINTS_HPP
#define LATTICE_SPECTRA_CONSTRAINTS_HPP

// Identities tying the even-sector spectrum mu to the odd-sector spectrum nu:
//
//   prod_{m,n} (mu_m - nu_n) = 2^M (-1)^{M(M+1)/2}
//
// for any (even complex) diagonal b, the power-sum identities that follow from
// H_od - H_ev = 2P, recovery of b from (mu, nu), and the log-gas reading of
// the product identity.

#include "common.hpp"
#include "hamiltonian.hpp"
#include "polynomial.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <optional>
#include <vector>

namespace lattice_spectra {

/// Product stored as sign * exp(log_abs). For complex spectra `sign` is a unit phase.
template <class T>
struct SignedLogProduct {
    real_type_t<T> log_abs{};
    T sign = T(1);

    T value() const
    {
        using std::exp;
        return sign * T(exp(log_abs));
    }
};

/// (-1)^{M(M+1)/2}
inline int product_identity_sign(std::size_t m)
{
    const std::size_t e = (m * (m + 1) / 2) % 2;
    return e == 0 ? 1 : -1;
}

namespace detail {

template <class T>
real_type_t<T> value_spread(const SpectrumPair<T>& s)
{
    using R = real_type_t<T>;
    using std::abs;
    R spread = R(0);
    const T ref = s.mu.front();
    for (const auto& x : s.mu)
        spread = std::max<R>(spread, abs(x - ref));
    for (const auto& x : s.nu)
        spread = std::max<R>(spread, abs(x - ref));
    return spread;
}

} // namespace detail

/// log|prod (mu_m - nu_n)| by pairwise summation, with the sign (or phase)
/// tracked separately.
template <class T>
SignedLogProduct<T> log_product(const SpectrumPair<T>& s)
{
    using R = real_type_t<T>;
    using std::abs;
    using std::log;
    if (s.mu.size() != s.nu.size() || s.mu.empty())
        throw InputError("log_product: mu and nu must be non-empty and of equal length");
    const std::size_t m = s.size();
    // 1e-14 in double, tightened with the working precision for wider types
    const R tie = std::min<R>(R(1e-14), R(64) * machine_epsilon<R>()) * std::max<R>(detail::value_spread(s), R(1));

    std::vector<R> logs;
    logs.reserve(m * m);
    std::vector<R> phases;
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const T gap = s.mu[i] - s.nu[j];
            const R mag = abs(gap);
            if (mag < tie)
                throw DegenerateInputError("log_product: mu[" + std::to_string(i) + "] and nu[" +
                                           std::to_string(j) + "] coincide");
            logs.push_back(log(mag));
            if constexpr (is_complex_v<T>)
                phases.push_back(std::arg(gap));
            else if (gap < T(0))
                ++negatives;
        }
    }
    SignedLogProduct<T> out;
    out.log_abs = pairwise_sum(logs);
    if constexpr (is_complex_v<T>)
        out.sign = std::polar(R(1), pairwise_sum(phases));
    else
        out.sign = (negatives % 2 == 0) ? T(1) : T(-1);
    return out;
}

/// |log|prod| - M ln 2| plus a sign penalty (1 for a wrong real sign, the
/// distance on the unit circle for a complex phase). Zero certifies the identity.
template <class T>
real_type_t<T> product_identity_residual(const SpectrumPair<T>& s)
{
    using R = real_type_t<T>;
    using std::abs;
    const auto p = log_product(s);
    const R log_part = abs(p.log_abs - R(static_cast<double>(s.size())) * ln2<R>());
    const T target = T(product_identity_sign(s.size()));
    if constexpr (is_complex_v<T>)
        return log_part + abs(p.sign - target);
    else
        return log_part + (p.sign == target ? R(0) : R(1));
}

/// -sum_{m,n} ln|mu_m - nu_n|: the pair energy of two interlaced families of
/// unit 2d charges. Equals -M ln 2 whenever the product identity holds.
template <class T>
real_type_t<T> coulomb_energy_discrete(const SpectrumPair<T>& s)
{
    return -log_product(s).log_abs;
}

template <class T>
struct TraceIdentityResiduals {
    /// Residual of the k-th power-sum identity (index k-1); empty when the
    /// chain is too short for the identity to apply.
    std::array<std::optional<T>, 5> residual;
    /// Largest |sum mu^k| or |sum nu^k| over the evaluated k.
    real_type_t<T> scale{};

    std::optional<real_type_t<T>> relative(std::size_t k) const
    {
        using std::abs;
        if (!residual[k - 1])
            return std::nullopt;
        return abs(*residual[k - 1]) / std::max<real_type_t<T>>(scale, real_type_t<T>(1));
    }
};

/// Power sums sum mu^k against sum nu^k for k = 1..5. The k-th identity uses
/// matrix entries up to ceil(k/2) sites from the corner, so it is evaluated
/// only when M >= ceil(k/2).
template <class T>
TraceIdentityResiduals<T> trace_identity_residuals(const HalfChainDiagonal<T>& b, const SpectrumPair<T>& s)
{
    using R = real_type_t<T>;
    using std::abs;
    const std::size_t m = b.size();
    if (s.mu.size() != m || s.nu.size() != m)
        throw InputError("trace_identity_residuals: spectrum size does not match diagonal");

    auto power_sum = [](const std::vector<T>& x, int k) {
        std::vector<T> terms(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            T p = T(1);
            for (int e = 0; e < k; ++e)
                p *= x[i];
            terms[i] = p;
        }
        return pairwise_sum(terms);
    };

    const T bm = b[m - 1];
    const T bp = m >= 2 ? b[m - 2] : T(0);
    // sum nu^k - sum mu^k
    const std::array<T, 5> shift = {
        T(2),
        T(4) * bm,
        T(8) + T(6) * bm * bm,
        T(8) * bp + T(24) * bm + T(8) * bm * bm * bm,
        T(32) + T(10) * bp * bp + T(20) * bp * bm + T(50) * bm * bm + T(10) * bm * bm * bm * bm,
    };

    TraceIdentityResiduals<T> out;
    out.scale = R(0);
    for (int k = 1; k <= 5; ++k) {
        if (m < static_cast<std::size_t>((k + 1) / 2))
            continue;
        const T smu = power_sum(s.mu, k);
        const T snu = power_sum(s.nu, k);
        out.residual[k - 1] = smu - (snu - shift[k - 1]);
        out.scale = std::max<R>(out.scale, std::max<R>(abs(smu), abs(snu)));
    }
    return out;
}

struct RecoveryOptions {
    /// Largest M accepted; 0 picks 16 for double and 4096 for wider types.
    std::size_t max_size = 0;
    /// Allowed deviation of the leading coefficient of (chi_ev - chi_od)/2
    /// from 1, relative to the spectral scale.
    double lead_tol = 1e-8;
};

namespace detail {

/// The division recursion itself, carried out in the working type W.
template <class W>
std::vector<W> divide_down(const std::vector<W>& mu_in, const std::vector<W>& nu_in, double lead_tol)
{
    using std::abs;
    const std::size_t m = mu_in.size();
    W centre = W(0);
    for (std::size_t i = 0; i < m; ++i)
        centre += mu_in[i] + nu_in[i];
    centre /= W(static_cast<double>(2 * m));
    W scale = W(1);
    std::vector<W> mu(m), nu(m);
    for (std::size_t i = 0; i < m; ++i) {
        mu[i] = mu_in[i] - centre;
        nu[i] = nu_in[i] - centre;
        scale = std::max<W>(scale, std::max<W>(abs(mu[i]), abs(nu[i])));
    }

    const auto chi_ev = poly::from_roots(mu);
    const auto chi_od = poly::from_roots(nu);
    std::vector<W> minor(m);
    for (std::size_t i = 1; i <= m; ++i)
        minor[i - 1] = (chi_ev[i] - chi_od[i]) / W(2);
    if (abs(minor.front() - W(1)) > W(lead_tol) * scale)
        throw InconsistentSpectraError("recover_potential: sum(nu) - sum(mu) must equal 2");
    minor = poly::monic(minor);

    std::vector<W> b(m);
    std::vector<W> upper = chi_ev;
    std::vector<W> lower = minor;
    for (std::size_t j = m; j >= 1; --j) {
        auto [quot, rem] = poly::divide(upper, lower);
        // quot = x - c
        const W c = -quot[1] / quot[0];
        b[j - 1] = c + centre + (j == m ? W(1) : W(0));
        if (j == 1)
            break;
        // rem = -D_{j-2}, degree j-2
        for (auto& r : rem)
            r = -r;
        if (abs(rem.front()) < W(lead_tol))
            throw InconsistentSpectraError("recover_potential: degenerate minor at site " + std::to_string(j - 1));
        upper = std::move(lower);
        lower = poly::monic(std::move(rem));
    }
    return b;
}

} // namespace detail

/// The unique real diagonal b whose half-chain spectra are (mu, nu).
///
/// With chi_ev, chi_od the characteristic polynomials and D_j the leading
/// j x j minors of lambda - H, the corner structure gives
///   chi_ev - chi_od = 2 D_{M-1},
///   chi_ev  = (lambda - b_M + 1) D_{M-1} - D_{M-2},
///   D_j     = (lambda - b_j) D_{j-1} - D_{j-2},
/// so every b_j falls out of one polynomial division, from b_M down to b_1.
/// Polynomials are expanded about the spectral centre to keep coefficients small.
/// The monomial coefficients cancel heavily, so double input is processed in
/// 113-bit arithmetic and rounded once at the end.
template <class T>
HalfChainDiagonal<T> recover_potential(const SpectrumPair<T>& s, const RecoveryOptions& opt = {})
{
    static_assert(!is_complex_v<T>, "recover_potential needs real spectra");
    const std::size_t m = s.size();
    const std::size_t cap = opt.max_size != 0 ? opt.max_size : (std::is_same_v<T, double> ? 16 : 4096);
    if (m == 0 || s.nu.size() != m)
        throw InputError("recover_potential: mu and nu must be non-empty and of equal length");
    if (m > cap)
        throw InputError("recover_potential: M = " + std::to_string(m) + " exceeds the cap of " +
                         std::to_string(cap) + " for this precision; use extended precision");
    require_finite(std::span<const T>(s.mu), "recover_potential mu");
    require_finite(std::span<const T>(s.nu), "recover_potential nu");
    if (!is_interlacing(s))
        throw InputError("recover_potential: spectra must interlace, mu_1 < nu_1 < mu_2 < ... < nu_M");

    if constexpr (std::is_same_v<T, double>) {
        using W = boost::multiprecision::cpp_bin_float_quad;
        const auto b = detail::divide_down(std::vector<W>(s.mu.begin(), s.mu.end()),
                                           std::vector<W>(s.nu.begin(), s.nu.end()), opt.lead_tol);
        std::vector<double> out(m);
        for (std::size_t i = 0; i < m; ++i)
            out[i] = static_cast<double>(b[i]);
        return HalfChainDiagonal<double>(std::move(out));
    } else {
        return HalfChainDiagonal<T>(detail::divide_down(s.mu, s.nu, opt.lead_tol));
    }
}

} // namespace lattice_spectra

#endif
