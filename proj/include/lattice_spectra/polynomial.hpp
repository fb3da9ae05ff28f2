#ifndef LATTICE_SPECTRA_POLYNOMIAL_HPP
#define LATTICE_SPECTRA_POLYNOMIAL_HPP

// Dense polynomials with coefficients stored in descending degree:
// p(x) = c[0] x^n + c[1] x^{n-1} + ... + c[n].

#include "common.hpp"

#include <utility>
#include <vector>

namespace lattice_spectra::poly {

template <class T>
std::vector<T> from_roots(const std::vector<T>& roots)
{
    std::vector<T> c{T(1)};
    for (const auto& r : roots) {
        c.push_back(T(0));
        for (std::size_t i = c.size() - 1; i > 0; --i)
            c[i] -= r * c[i - 1];
    }
    return c;
}

template <class T, class U>
auto evaluate(const std::vector<T>& c, const U& x)
{
    using V = decltype(c[0] * x);
    V acc = V(0);
    for (const auto& a : c)
        acc = acc * x + a;
    return acc;
}

/// Drops leading coefficients that are exactly zero.
template <class T>
std::vector<T> trimmed(std::vector<T> c)
{
    std::size_t lead = 0;
    while (lead + 1 < c.size() && c[lead] == T(0))
        ++lead;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead));
    return c;
}

template <class T>
std::vector<T> monic(std::vector<T> c)
{
    const T lead = c.front();
    for (auto& a : c)
        a /= lead;
    c.front() = T(1);
    return c;
}

/// Long division num = quotient * den + remainder, deg(remainder) < deg(den).
template <class T>
std::pair<std::vector<T>, std::vector<T>> divide(const std::vector<T>& num, const std::vector<T>& den)
{
    if (den.empty() || den.front() == T(0))
        throw NumericalError("polynomial division by a polynomial with zero leading coefficient");
    if (num.size() < den.size())
        return {{T(0)}, num};
    std::vector<T> rem = num;
    std::vector<T> quot(num.size() - den.size() + 1, T(0));
    for (std::size_t i = 0; i < quot.size(); ++i) {
        const T q = rem[i] / den.front();
        quot[i] = q;
        for (std::size_t j = 0; j < den.size(); ++j)
            rem[i + j] -= q * den[j];
    }
    std::vector<T> r(rem.begin() + static_cast<std::ptrdiff_t>(quot.size()), rem.end());
    if (r.empty())
        r.push_back(T(0));
    return {quot, r};
}

} // namespace lattice_spectra::poly

#endif
