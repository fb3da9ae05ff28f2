#ifndef LATTICE_SPECTRA_COMMON_HPP
#define LATTICE_SPECTRA_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace lattice_spectra {

// Error hierarchy. The CLI maps these onto its exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (exit code 2).
class InputError : public Error {
  public:
    using Error::Error;
};

/// Two spectral values coincide where the theory forbids it.
class DegenerateInputError : public InputError {
  public:
    using InputError::InputError;
};

/// Even/odd spectra that cannot come from a single diagonal.
class InconsistentSpectraError : public InputError {
  public:
    using InputError::InputError;
};

/// A mathematical hypothesis (no bound or semi-bound states) is violated (exit code 1).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Iteration failed to converge, grid too coarse, and similar (exit code 3).
class NumericalError : public Error {
  public:
    using Error::Error;
};

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <class T>
struct real_type {
    using type = T;
};
template <class T>
struct real_type<std::complex<T>> {
    using type = T;
};
template <class T>
using real_type_t = typename real_type<T>::type;

template <class R>
R pi()
{
    if constexpr (std::is_floating_point_v<R>) {
        return std::numbers::pi_v<R>;
    } else {
        using std::acos;
        return acos(R(-1));
    }
}

template <class R>
R ln2()
{
    if constexpr (std::is_floating_point_v<R>) {
        return std::numbers::ln2_v<R>;
    } else {
        using std::log;
        return log(R(2));
    }
}

template <class R>
R machine_epsilon()
{
    return std::numeric_limits<R>::epsilon();
}

template <class T>
bool is_finite(const T& x)
{
    if constexpr (is_complex_v<T>) {
        return is_finite(x.real()) && is_finite(x.imag());
    } else if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(x);
    } else {
        using std::isfinite;
        return isfinite(x);
    }
}

template <class T>
void require_finite(std::span<const T> values, const char* what)
{
    for (const auto& x : values)
        if (!is_finite(x))
            throw InputError(std::string(what) + ": non-finite entry");
}

/// Pairwise (tree) summation with a fixed split order, so results do not
/// depend on how the terms were produced.
template <class T>
T pairwise_sum(std::span<const T> terms)
{
    constexpr std::size_t leaf = 8;
    if (terms.size() <= leaf) {
        T s = T(0);
        for (const auto& t : terms)
            s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& terms)
{
    return pairwise_sum(std::span<const T>(terms));
}

/// Worker count: LATTICE_SPECTRA_THREADS caps it, otherwise hardware concurrency.
inline unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LATTICE_SPECTRA_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs body(i) for i in [0, n). Each index is handled exactly once and the
/// caller writes results by index, so output is independent of the worker count.
/// An exception from body is rethrown on the calling thread; when several
/// indices throw, the one with the smallest index wins.
template <class Body>
void parallel_for(std::size_t n, Body&& body)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::exception_ptr> failures(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi)
                break;
            pool.emplace_back([lo, hi, w, &body, &failures] {
                try {
                    for (std::size_t i = lo; i < hi; ++i)
                        body(i);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
}

/// Least-squares slope of log|y| against log x; the decay exponent is its negative.
/// Entries with y == 0 carry no scale information and are skipped.
inline double fitted_decay_exponent(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (y[i] == 0.0 || !std::isfinite(y[i]))
            continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    if (lx.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

} // namespace lattice_spectra

#endif
