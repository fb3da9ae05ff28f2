#ifndef LATTICE_SPECTRA_HAMILTONIAN_HPP
#define LATTICE_SPECTRA_HAMILTONIAN_HPP

// Even/odd half-chain Hamiltonians of the discrete Schroedinger operator on a
// 2M-site chain with a reflection-symmetric potential, and their spectra.
//
// All matrices here are symmetric tridiagonal with the constant -1 on both
// off-diagonals, so only the diagonal is stored.

#include "common.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace lattice_spectra {

enum class Parity { even, odd, plain };

inline const char* to_string(Parity p)
{
    switch (p) {
    case Parity::even:
        return "even";
    case Parity::odd:
        return "odd";
    case Parity::plain:
        return "plain";
    }
    return "?";
}

/// Diagonal b_j = v_j + 2 of the half chain, j = 1..M.
template <class T>
class HalfChainDiagonal {
  public:
    HalfChainDiagonal() = default;

    explicit HalfChainDiagonal(std::vector<T> entries)
        : entries_(std::move(entries))
    {
        if (entries_.empty())
            throw InputError("half-chain diagonal: length must be at least 1");
        require_finite(std::span<const T>(entries_), "half-chain diagonal");
    }

    /// b_j = v_j + 2.
    static HalfChainDiagonal from_potential(const std::vector<T>& v)
    {
        std::vector<T> b(v.size());
        for (std::size_t j = 0; j < v.size(); ++j)
            b[j] = v[j] + T(2);
        return HalfChainDiagonal(std::move(b));
    }

    std::size_t size() const { return entries_.size(); }
    const T& operator[](std::size_t j) const { return entries_[j]; }
    const std::vector<T>& entries() const { return entries_; }

    std::vector<T> potential() const
    {
        std::vector<T> v(entries_.size());
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] = entries_[j] - T(2);
        return v;
    }

  private:
    std::vector<T> entries_;
};

template <class T>
struct TridiagonalSymmetric {
    std::vector<T> diagonal;
    Parity parity = Parity::plain;

    std::size_t size() const { return diagonal.size(); }

    /// Row-major dense copy, mostly for cross-checks.
    std::vector<T> dense() const
    {
        const std::size_t n = size();
        std::vector<T> a(n * n, T(0));
        for (std::size_t i = 0; i < n; ++i) {
            a[i * n + i] = diagonal[i];
            if (i + 1 < n) {
                a[i * n + i + 1] = T(-1);
                a[(i + 1) * n + i] = T(-1);
            }
        }
        return a;
    }
};

/// Potential v_1..v_M on the left half of a 2M-site chain; the right half is
/// its mirror image, v_{2M+1-j} = v_j.
template <class T>
struct EvenChainPotential {
    std::vector<T> half;

    std::size_t half_size() const { return half.size(); }
    std::size_t sites() const { return 2 * half.size(); }

    std::vector<T> full() const
    {
        const std::size_t m = half.size();
        std::vector<T> v(2 * m);
        for (std::size_t j = 0; j < m; ++j) {
            v[j] = half[j];
            v[2 * m - 1 - j] = half[j];
        }
        return v;
    }
};

template <class T>
struct HalfHamiltonians {
    TridiagonalSymmetric<T> even;
    TridiagonalSymmetric<T> odd;
};

/// H_ev has b_M - 1 in the corner, H_od has b_M + 1; H_od - H_ev = 2P.
template <class T>
HalfHamiltonians<T> build_half_hamiltonians(const HalfChainDiagonal<T>& b)
{
    HalfHamiltonians<T> h{{b.entries(), Parity::even}, {b.entries(), Parity::odd}};
    h.even.diagonal.back() -= T(1);
    h.odd.diagonal.back() += T(1);
    return h;
}

/// Full 2M x 2M chain with Dirichlet ends: diagonal v_j + 2.
template <class T>
TridiagonalSymmetric<T> build_full_hamiltonian(const EvenChainPotential<T>& potential)
{
    if (potential.half.empty())
        throw InputError("even chain potential: empty half chain");
    auto v = potential.full();
    require_finite(std::span<const T>(v), "even chain potential");
    for (auto& x : v)
        x += T(2);
    return {std::move(v), Parity::plain};
}

/// det(lambda I - T) by the three-term recursion
/// D_j = (lambda - d_j) D_{j-1} - D_{j-2}.
template <class T, class U>
auto char_poly_eval(const TridiagonalSymmetric<T>& t, const U& lambda)
{
    using V = decltype(lambda - t.diagonal[0]);
    V prev = V(1);
    V cur = lambda - t.diagonal[0];
    for (std::size_t j = 1; j < t.size(); ++j) {
        V next = (lambda - t.diagonal[j]) * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Newton ratio D(lambda)/D'(lambda). The recursion is rescaled as it runs so
/// that long chains do not overflow.
template <class T, class U>
auto char_poly_newton_ratio(const TridiagonalSymmetric<T>& t, const U& lambda)
{
    using V = decltype(lambda - t.diagonal[0]);
    using R = real_type_t<V>;
    using std::abs;
    V p0 = V(1), p1 = lambda - t.diagonal[0];
    V d0 = V(0), d1 = V(1);
    const R big = R(1e100);
    for (std::size_t j = 1; j < t.size(); ++j) {
        const V a = lambda - t.diagonal[j];
        V p2 = a * p1 - p0;
        V d2 = p1 + a * d1 - d0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        const R scale = abs(p1) + abs(d1);
        if (scale > big) {
            const R s = R(1) / scale;
            p0 *= s;
            p1 *= s;
            d0 *= s;
            d1 *= s;
        }
    }
    return p1 / d1;
}

/// Number of eigenvalues strictly below x (Sturm count from the LDL^T pivots
/// of T - xI).
template <class T>
std::size_t sturm_count(const TridiagonalSymmetric<T>& t, const T& x)
{
    using std::abs;
    T dmax = T(0);
    for (const auto& d : t.diagonal)
        dmax = std::max<T>(dmax, abs(d));
    const T eps = machine_epsilon<T>();
    const T pivmin = eps * eps * (T(1) + dmax + abs(x));
    std::size_t count = 0;
    T q = t.diagonal[0] - x;
    for (std::size_t j = 0;; ++j) {
        if (abs(q) < pivmin)
            q = -pivmin;
        if (q < T(0))
            ++count;
        if (j + 1 == t.size())
            break;
        q = (t.diagonal[j + 1] - x) - T(1) / q;
    }
    return count;
}

template <class T>
std::pair<T, T> gershgorin_bounds(const TridiagonalSymmetric<T>& t)
{
    T lo = t.diagonal[0], hi = t.diagonal[0];
    for (const auto& d : t.diagonal) {
        lo = std::min<T>(lo, d);
        hi = std::max<T>(hi, d);
    }
    return {lo - T(2), hi + T(2)};
}

/// All eigenvalues of a real symmetric tridiagonal matrix, ascending.
///
/// Each eigenvalue is isolated by Sturm-count bisection inside the Gershgorin
/// interval until its bracket is narrower than min(tol, 4 eps) times the
/// interval diameter, then polished by one Newton step on the characteristic
/// polynomial (kept only if it stays inside the bracket).
template <class T>
std::vector<T> eigenvalues_real(const TridiagonalSymmetric<T>& t, const T& tol = T(1e-13))
{
    static_assert(!is_complex_v<T>, "eigenvalues_real needs a real diagonal");
    if (t.size() == 0)
        throw InputError("eigenvalues_real: empty matrix");
    require_finite(std::span<const T>(t.diagonal), "eigenvalues_real");
    using std::abs;
    const std::size_t n = t.size();
    if (n == 1)
        return {t.diagonal[0]};

    const auto [glo, ghi] = gershgorin_bounds(t);
    const T diameter = ghi - glo;
    const T width = std::min<T>(tol, T(4) * machine_epsilon<T>()) * diameter;

    std::vector<T> out(n);
    auto solve_one = [&](std::size_t k) {
        T lo = glo, hi = ghi;
        while (hi - lo > width) {
            const T mid = (lo + hi) / T(2);
            if (mid <= lo || mid >= hi)
                break;
            if (sturm_count(t, mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        T x = (lo + hi) / T(2);
        const T polished = x - char_poly_newton_ratio(t, x);
        if (is_finite(polished) && polished >= lo && polished <= hi)
            x = polished;
        out[k] = x;
    };
    // MPFR precision is thread-local, so only built-in types fan out.
    if constexpr (std::is_floating_point_v<T>)
        parallel_for(n, solve_one);
    else
        for (std::size_t k = 0; k < n; ++k)
            solve_one(k);

    // Unit off-diagonals force a simple spectrum.
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (!(out[k] < out[k + 1]))
            throw NumericalError("eigenvalues_real: eigenvalues not strictly ascending at index " +
                                 std::to_string(k) + "; tolerance too loose for this matrix");
    return out;
}

struct AberthOptions {
    std::size_t max_size = 24;
    int max_iterations = 500;
    double tol = 1e-14;
};

/// Roots of det(lambda I - T) for a complex diagonal, by Aberth-Ehrlich
/// simultaneous iteration on the recursion (never on expanded coefficients).
/// Roots whose correction fell below tol are frozen.
inline std::vector<std::complex<double>>
eigenvalues_complex(const TridiagonalSymmetric<std::complex<double>>& t, const AberthOptions& opt = {})
{
    using C = std::complex<double>;
    const std::size_t n = t.size();
    if (n == 0)
        throw InputError("eigenvalues_complex: empty matrix");
    if (n > opt.max_size)
        throw InputError("eigenvalues_complex: size " + std::to_string(n) + " exceeds cap " +
                         std::to_string(opt.max_size));
    require_finite(std::span<const C>(t.diagonal), "eigenvalues_complex");
    if (n == 1)
        return {t.diagonal[0]};

    C center = 0;
    for (const auto& d : t.diagonal)
        center += d;
    center /= static_cast<double>(n);
    double radius = 0;
    for (const auto& d : t.diagonal)
        radius = std::max(radius, std::abs(d - center));
    radius += 2.0;

    std::vector<C> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * pi<double>() * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = center + std::polar(radius, angle);
    }

    std::vector<bool> done(n, false);
    double worst = 0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        worst = 0;
        bool all_done = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k])
                continue;
            const C ratio = char_poly_newton_ratio(t, z[k]);
            C repulsion = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k)
                    continue;
                C gap = z[k] - z[j];
                if (gap == C(0))
                    gap = C(1e-12 * (1.0 + std::abs(z[k])), 0.0);
                repulsion += 1.0 / gap;
            }
            C step = ratio / (1.0 - ratio * repulsion);
            if (!is_finite(step))
                step = ratio;
            if (!is_finite(step))
                step = C(1e-8 * (1.0 + std::abs(z[k])), 1e-8);
            z[k] -= step;
            const double rel = std::abs(step) / (1.0 + std::abs(z[k]));
            worst = std::max(worst, rel);
            if (rel <= opt.tol)
                done[k] = true;
            else
                all_done = false;
        }
        if (all_done)
            return z;
    }
    throw NumericalError("eigenvalues_complex: Aberth iteration did not converge after " +
                         std::to_string(opt.max_iterations) +
                         " iterations (largest relative correction " + std::to_string(worst) + ")");
}

/// mu (even sector) and nu (odd sector) eigenvalues; ascending for real data.
template <class T>
struct SpectrumPair {
    std::vector<T> mu;
    std::vector<T> nu;

    std::size_t size() const { return mu.size(); }
};

template <class T>
bool is_interlacing(const SpectrumPair<T>& s)
{
    if (s.mu.size() != s.nu.size() || s.mu.empty())
        return false;
    for (std::size_t m = 0; m < s.mu.size(); ++m) {
        if (!(s.mu[m] < s.nu[m]))
            return false;
        if (m + 1 < s.mu.size() && !(s.nu[m] < s.mu[m + 1]))
            return false;
    }
    return true;
}

/// Both spectra merged in ascending order (the full-chain spectrum).
template <class T>
std::vector<T> merged(const SpectrumPair<T>& s)
{
    std::vector<T> all;
    all.reserve(2 * s.size());
    for (std::size_t m = 0; m < s.size(); ++m) {
        all.push_back(s.mu[m]);
        all.push_back(s.nu[m]);
    }
    std::sort(all.begin(), all.end());
    return all;
}

template <class T>
SpectrumPair<T> spectrum_pair(const HalfChainDiagonal<T>& b, const T& tol = T(1e-13))
{
    const auto h = build_half_hamiltonians(b);
    SpectrumPair<T> s{eigenvalues_real(h.even, tol), eigenvalues_real(h.odd, tol)};
    if (!is_interlacing(s))
        throw NumericalError("spectrum_pair: computed spectra do not interlace");
    return s;
}

inline SpectrumPair<std::complex<double>>
spectrum_pair_complex(const HalfChainDiagonal<std::complex<double>>& b, const AberthOptions& opt = {})
{
    const auto h = build_half_hamiltonians(b);
    return {eigenvalues_complex(h.even, opt), eigenvalues_complex(h.odd, opt)};
}

} // namespace lattice_spectra

#endif
