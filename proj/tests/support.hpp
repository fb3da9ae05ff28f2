#ifndef LATTICE_SPECTRA_TESTS_SUPPORT_HPP
#define LATTICE_SPECTRA_TESTS_SUPPORT_HPP

// Shared generators and independent oracles for the test programs.

#include <lattice_spectra/lattice_spectra.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace lattice_spectra::testing {

class Rng {
  public:
    explicit Rng(std::uint64_t seed)
        : gen_(seed)
    {
    }

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::size_t integer(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1)); }

    std::vector<double> reals(std::size_t n, double lo, double hi)
    {
        std::vector<double> x(n);
        for (auto& v : x)
            v = uniform(lo, hi);
        return x;
    }

  private:
    std::mt19937_64 gen_;
};

/// b = v + 2 with v_j uniform in [-3, 3].
inline HalfChainDiagonal<double> random_diagonal(Rng& rng, std::size_t m, double amplitude = 3.0)
{
    return HalfChainDiagonal<double>::from_potential(rng.reals(m, -amplitude, amplitude));
}

using quad = boost::multiprecision::cpp_bin_float_quad;

inline HalfChainDiagonal<quad> to_quad(const HalfChainDiagonal<double>& b)
{
    return HalfChainDiagonal<quad>(std::vector<quad>(b.entries().begin(), b.entries().end()));
}

/// Real and imaginary parts uniform in [-3, 3].
inline HalfChainDiagonal<std::complex<double>> random_complex_diagonal(Rng& rng, std::size_t m)
{
    std::vector<std::complex<double>> b(m);
    for (auto& z : b)
        z = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    return HalfChainDiagonal<std::complex<double>>(std::move(b));
}

/// v_j uniform in [-0.4, 0.4], 1 <= J <= max_support, redrawn until F has no
/// zero in the disk |z| <= 1.02 and F(+-1) stays away from 0. The extra root
/// margin keeps the phase analytic in a strip wide enough for a 2048-point
/// periodic trapezoid sum to reach its accuracy floor.
inline CompactPotential random_passing_potential(Rng& rng, std::size_t max_support = 6)
{
    const ConditionMargins margins{0.02, 1e-3};
    for (;;) {
        auto v = rng.reals(rng.integer(1, max_support), -0.4, 0.4);
        if (v.back() == 0.0)
            continue;
        CompactPotential pot(std::move(v));
        if (jost_polynomial(pot, margins).report.passes())
            return pot;
    }
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense(const TridiagonalSymmetric<T>& t)
{
    const auto n = static_cast<Eigen::Index>(t.diagonal.size());
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> a = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = t.diagonal[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            a(i, i + 1) = T(-1);
            a(i + 1, i) = T(-1);
        }
    }
    return a;
}

/// Dense symmetric eigensolver oracle, ascending.
inline std::vector<double> dense_eigenvalues(const TridiagonalSymmetric<double>& t)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense(t), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// Dense complex (non-Hermitian) eigensolver oracle, sorted by (re, im).
inline std::vector<std::complex<double>> dense_eigenvalues(const TridiagonalSymmetric<std::complex<double>>& t)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense(t), false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        out.push_back(solver.eigenvalues()(i));
    return out;
}

/// Max over a of min over b of |a - b|: multiset distance for matched spectra.
inline double matched_distance(const std::vector<std::complex<double>>& a, std::vector<std::complex<double>> b)
{
    double worst = 0;
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](const auto& p, const auto& q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double worst = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? worst : std::numeric_limits<double>::infinity();
}

/// Dense spectrum of the 2M-site even extension of a half-line potential.
inline std::vector<double> even_extension_spectrum(const CompactPotential& v, std::size_t m)
{
    std::vector<double> half(m, 0.0);
    for (std::size_t j = 1; j <= v.support(); ++j)
        half[j - 1] = v.at(j);
    const auto full = build_full_hamiltonian(EvenChainPotential<double>{half});
    return dense_eigenvalues(full);
}

} // namespace lattice_spectra::testing

#endif
