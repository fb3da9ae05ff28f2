#ifndef LATTICE_SPECTRA_SCATTERING_HPP
#define LATTICE_SPECTRA_SCATTERING_HPP

// Half-line scattering for the discrete Schroedinger operator with a
// compactly supported potential: regular and Jost solutions, the Jost
// polynomial F(z) in z = e^{ip}, bound/semi-bound state detection and the
// scattering phase.
//
// Sign convention: F(p) = exp(sigma(p) - i eta(p)), i.e. eta = -arg F.
// This is the opposite of the common "F = |F| e^{i delta}" convention.

#include "common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

namespace lattice_spectra {

using cplx = std::complex<double>;

/// Real potential v_1..v_J with v_J != 0 (J = 0 is the zero potential).
class CompactPotential {
  public:
    CompactPotential() = default;

    explicit CompactPotential(std::vector<double> v)
        : v_(std::move(v))
    {
        require_finite(std::span<const double>(v_), "compact potential");
        if (!v_.empty() && v_.back() == 0.0)
            throw InputError("compact potential: last entry must be nonzero (it defines the support J)");
    }

    /// Drops trailing zeros so that J is the true support.
    static CompactPotential trimmed(std::vector<double> v)
    {
        while (!v.empty() && v.back() == 0.0)
            v.pop_back();
        return CompactPotential(std::move(v));
    }

    static CompactPotential zero() { return {}; }

    std::size_t support() const { return v_.size(); }
    bool is_zero() const { return v_.empty(); }
    const std::vector<double>& values() const { return v_; }

    /// v_j for j >= 1; zero outside the support.
    double at(std::size_t j) const { return (j >= 1 && j <= v_.size()) ? v_[j - 1] : 0.0; }

  private:
    std::vector<double> v_;
};

inline double dispersion(double p)
{
    return 2.0 - 2.0 * std::cos(p);
}

/// phi(0) = 0, phi(1) = 1, phi(j+1) = (v_j + 2 - lambda) phi(j) - phi(j-1).
template <class S>
std::vector<S> regular_solution(const CompactPotential& v, const S& lambda, std::size_t jmax)
{
    if (jmax < 1)
        throw InputError("regular_solution: jmax must be at least 1");
    std::vector<S> phi(jmax + 1);
    phi[0] = S(0);
    phi[1] = S(1);
    for (std::size_t j = 1; j < jmax; ++j)
        phi[j + 1] = (S(v.at(j) + 2.0) - lambda) * phi[j] - phi[j - 1];
    return phi;
}

/// Jost solution f(j, p) = e^{ipj} for j >= J, continued down to j = 0 by the
/// backward recursion f(j-1) = (v_j + 2 - lambda) f(j) - f(j+1).
/// p may be negative (the in-wave); p = 0 and |p| >= pi are excluded.
inline std::vector<cplx> jost_solution(const CompactPotential& v, double p, std::size_t jmax)
{
    if (p == 0.0 || std::abs(p) >= pi<double>())
        throw InputError("jost_solution: momentum must satisfy 0 < |p| < pi");
    const std::size_t support = v.support();
    if (jmax < support + 1)
        throw InputError("jost_solution: jmax must be at least J + 1");
    const double lambda = dispersion(p);
    std::vector<cplx> f(jmax + 1);
    for (std::size_t j = support; j <= jmax; ++j)
        f[j] = std::polar(1.0, p * static_cast<double>(j));
    for (std::size_t j = support; j >= 1; --j)
        f[j - 1] = (v.at(j) + 2.0 - lambda) * f[j] - f[j + 1];
    return f;
}

/// W[psi1, psi2]_j = psi1(j) psi2(j+1) - psi1(j+1) psi2(j).
template <class S1, class S2>
auto wronskian(const std::vector<S1>& psi1, const std::vector<S2>& psi2, std::size_t j)
{
    if (j + 1 >= psi1.size() || j + 1 >= psi2.size())
        throw InputError("wronskian: index out of range");
    return psi1[j] * psi2[j + 1] - psi1[j + 1] * psi2[j];
}

/// F(p) = 1 + sum_j e^{ipj} v_j phi(j, p), summed directly.
inline cplx jost_function(const CompactPotential& v, double p)
{
    const auto phi = regular_solution<cplx>(v, cplx(dispersion(p)), std::max<std::size_t>(v.support(), 1));
    cplx f = 1.0;
    for (std::size_t j = 1; j <= v.support(); ++j)
        f += std::polar(1.0, p * static_cast<double>(j)) * v.at(j) * phi[j];
    return f;
}

struct ConditionReport {
    bool no_bound_states = true;   // all roots outside the closed unit disk
    bool no_semibound_states = true; // F(+1), F(-1) nonzero
    double min_root_modulus = std::numeric_limits<double>::infinity();
    double abs_f_plus = 1.0;  // |F(1)|
    double abs_f_minus = 1.0; // |F(-1)|

    bool passes() const { return no_bound_states && no_semibound_states; }
};

struct ConditionMargins {
    double root = 1e-8; // require min |a_n| > 1 + root
    double edge = 1e-8; // require |F(+-1)| > edge
};

/// F(z) = 1 + c_1 z + ... + c_{2J-1} z^{2J-1} = prod (1 - z/a_n).
struct JostPolynomial {
    std::vector<double> coeffs{1.0}; // ascending powers, coeffs[0] = 1
    std::vector<cplx> roots;
    ConditionReport report;

    std::size_t degree() const { return coeffs.size() - 1; }

    template <class Z>
    Z operator()(const Z& z) const
    {
        Z acc = Z(0);
        for (std::size_t i = coeffs.size(); i-- > 0;)
            acc = acc * z + Z(coeffs[i]);
        return acc;
    }

    cplx derivative(cplx z) const
    {
        cplx acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 1;)
            acc = acc * z + static_cast<double>(i) * coeffs[i];
        return acc;
    }

    cplx second_derivative(cplx z) const
    {
        cplx acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 2;)
            acc = acc * z + static_cast<double>(i * (i - 1)) * coeffs[i];
        return acc;
    }

    /// prod (1 - z/a_n) from the stored roots.
    cplx from_roots(cplx z) const
    {
        cplx acc = 1.0;
        for (const auto& a : roots)
            acc *= 1.0 - z / a;
        return acc;
    }
};

/// Roots of sum c_i z^i (ascending coefficients, nonzero leading term):
/// companion-matrix eigenvalues, then Aberth-Ehrlich refinement on the
/// polynomial itself.
inline std::vector<cplx> polynomial_roots(const std::vector<double>& c)
{
    const std::size_t d = c.size() - 1;
    if (d == 0)
        return {};
    if (c.back() == 0.0)
        throw InputError("polynomial_roots: leading coefficient is zero");
    std::vector<cplx> z(d);
    if (d == 1) {
        z[0] = -c[0] / c[1];
        return z;
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < d; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("polynomial_roots: companion eigenvalue solver failed");
    for (std::size_t i = 0; i < d; ++i)
        z[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));

    auto eval = [&](cplx x, cplx& deriv) {
        cplx p = 0;
        deriv = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            deriv = deriv * x + p;
            p = p * x + c[i];
        }
        return p;
    };
    for (int it = 0; it < 50; ++it) {
        double worst = 0;
        for (std::size_t k = 0; k < d; ++k) {
            cplx dp;
            const cplx p = eval(z[k], dp);
            if (p == cplx(0))
                continue;
            const cplx ratio = p / dp;
            cplx repulsion = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k && z[j] != z[k])
                    repulsion += 1.0 / (z[k] - z[j]);
            cplx step = ratio / (1.0 - ratio * repulsion);
            if (!is_finite(step))
                continue;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        if (worst < 1e-16)
            break;
    }
    return z;
}

/// Pass iff min |a_n| > 1 + root margin and |F(+-1)| > edge margin.
inline ConditionReport check_conditions(const JostPolynomial& f, const ConditionMargins& margins = {})
{
    ConditionReport r;
    for (const auto& a : f.roots)
        r.min_root_modulus = std::min(r.min_root_modulus, std::abs(a));
    r.abs_f_plus = std::abs(f(1.0));
    r.abs_f_minus = std::abs(f(-1.0));
    r.no_bound_states = r.min_root_modulus > 1.0 + margins.root;
    r.no_semibound_states = r.abs_f_plus > margins.edge && r.abs_f_minus > margins.edge;
    return r;
}

/// Exact coefficients of F(z) = 1 + sum_j v_j z^j phi(j, lambda = 2 - z - 1/z).
/// phi(j) is carried as a Laurent polynomial in z spanning powers
/// -(j-1)..(j-1), so z^j phi(j) spans 1..2j-1.
inline JostPolynomial jost_polynomial(const CompactPotential& v, const ConditionMargins& margins = {})
{
    JostPolynomial f;
    const std::size_t support = v.support();
    if (support == 0) {
        f.report = check_conditions(f, margins);
        return f;
    }
    f.coeffs.assign(2 * support, 0.0);
    f.coeffs[0] = 1.0;
    std::vector<double> prev;      // phi(j-1)
    std::vector<double> cur{1.0};  // phi(j), index i <-> power i - (j-1)
    for (std::size_t j = 1; j <= support; ++j) {
        const double vj = v.at(j);
        for (std::size_t i = 0; i < cur.size(); ++i)
            f.coeffs[1 + i] += vj * cur[i];
        if (j == support)
            break;
        // phi(j+1) = (v_j + z + 1/z) phi(j) - phi(j-1)
        std::vector<double> next(cur.size() + 2, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] += cur[i];
            next[i + 1] += vj * cur[i];
            next[i + 2] += cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[i + 2] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    f.roots = polynomial_roots(f.coeffs);
    f.report = check_conditions(f, margins);
    return f;
}

namespace detail {

inline double wrap_angle(double x)
{
    return std::remainder(x, 2.0 * pi<double>());
}

} // namespace detail

/// Scattering phase sampled on p_k = pi k / G, k = 0..G, unwrapped from
/// eta(0) = 0. Also evaluates eta, sigma and their derivatives at arbitrary
/// momenta from the underlying Jost polynomial.
class PhaseTable {
  public:
    std::vector<double> grid;
    std::vector<double> eta;
    std::vector<double> sigma;
    std::vector<double> amplitude;
    JostPolynomial jost;

    std::size_t intervals() const { return grid.size() - 1; }

    /// eta(p) for any real p, continued as an odd 2pi-periodic function.
    double eta_at(double p) const
    {
        const double r = detail::wrap_angle(p);
        const double a = std::abs(r);
        const auto g = static_cast<double>(intervals());
        const auto idx = static_cast<std::size_t>(std::lround(a / pi<double>() * g));
        const double base = eta[std::min(idx, intervals())];
        const double raw = -std::arg(jost(std::polar(1.0, a)));
        const double value = base + detail::wrap_angle(raw - base);
        return r < 0 ? -value : value;
    }

    double sigma_at(double p) const { return std::log(std::abs(jost(std::polar(1.0, p)))); }

    /// z F'(z) / F(z) at z = e^{ip}.
    cplx log_derivative_z(double p) const
    {
        const cplx z = std::polar(1.0, p);
        return z * jost.derivative(z) / jost(z);
    }

    double eta_prime(double p) const { return -log_derivative_z(p).real(); }
    double sigma_prime(double p) const { return -log_derivative_z(p).imag(); }

    /// L(p) = ln F(e^{ip}) = sigma - i eta; L'' = -z (F'/F + z F''/F - z (F'/F)^2).
    cplx log_second_derivative(double p) const
    {
        const cplx z = std::polar(1.0, p);
        const cplx f = jost(z);
        const cplx r1 = jost.derivative(z) / f;
        const cplx r2 = jost.second_derivative(z) / f;
        return -z * (r1 + z * r2 - z * r1 * r1);
    }

    double eta_second(double p) const { return -log_second_derivative(p).imag(); }

    /// delta(lambda) = eta(p) with lambda = 2 - 2 cos p, 0 <= lambda <= 4.
    double delta(double lambda) const
    {
        if (lambda < 0.0 || lambda > 4.0)
            throw InputError("delta: lambda outside [0, 4]");
        return eta_at(momentum_of(lambda));
    }

    /// d delta / d lambda = eta'(p) / (2 sin p); singular at the band edges.
    double delta_prime(double lambda) const
    {
        const double p = momentum_of(lambda);
        return eta_prime(p) / (2.0 * std::sin(p));
    }

    static double momentum_of(double lambda) { return 2.0 * std::asin(std::sqrt(std::clamp(lambda, 0.0, 4.0)) / 2.0); }

    double max_abs_eta() const
    {
        double m = 0;
        for (double e : eta)
            m = std::max(m, std::abs(e));
        return m;
    }

    /// eta' on the table grid by trigonometric (sine-series) differentiation of
    /// the samples alone. O(G^2); meant as a cross-check of eta_prime.
    std::vector<double> spectral_eta_prime() const
    {
        const std::size_t g = intervals();
        const double gd = static_cast<double>(g);
        std::vector<double> b(g, 0.0);
        for (std::size_t m = 1; m < g; ++m) {
            double s = 0;
            for (std::size_t k = 1; k < g; ++k)
                s += eta[k] * std::sin(pi<double>() * static_cast<double>(m * k % (2 * g)) / gd);
            b[m] = 2.0 * s / gd;
        }
        std::vector<double> d(g + 1, 0.0);
        for (std::size_t k = 0; k <= g; ++k) {
            double s = 0;
            for (std::size_t m = 1; m < g; ++m)
                s += static_cast<double>(m) * b[m] * std::cos(pi<double>() * static_cast<double>(m * k % (2 * g)) / gd);
            d[k] = s;
        }
        return d;
    }
};

/// Builds the phase table; F must satisfy the no-bound/no-semibound conditions.
/// Raises NumericalError when adjacent raw phases jump by more than pi/2
/// (grid too coarse to follow the branch).
inline PhaseTable scattering_phase(const JostPolynomial& f, std::size_t intervals = 4096)
{
    if (!f.report.passes())
        throw PreconditionError("scattering_phase: Jost function has bound or semi-bound states");
    if (intervals < 2)
        throw InputError("scattering_phase: grid needs at least 2 intervals");
    PhaseTable t;
    t.jost = f;
    const std::size_t n = intervals + 1;
    t.grid.resize(n);
    t.eta.resize(n);
    t.sigma.resize(n);
    t.amplitude.resize(n);
    std::vector<double> raw(n);
    parallel_for(n, [&](std::size_t k) {
        const double p = pi<double>() * static_cast<double>(k) / static_cast<double>(intervals);
        const cplx value = f(std::polar(1.0, p));
        t.grid[k] = p;
        raw[k] = -std::arg(value);
        t.sigma[k] = std::log(std::abs(value));
        t.amplitude[k] = std::abs(value);
    });
    t.eta[0] = raw[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double jump = detail::wrap_angle(raw[k] - raw[k - 1]);
        if (std::abs(jump) > 0.5 * pi<double>())
            throw NumericalError("scattering_phase: phase jump " + std::to_string(jump) + " at p = " +
                                 std::to_string(t.grid[k]) + "; grid too coarse");
        t.eta[k] = t.eta[k - 1] + jump;
    }
    if (std::abs(t.eta.back()) > 1e-6)
        throw NumericalError("scattering_phase: eta(pi) = " + std::to_string(t.eta.back()) +
                             " does not vanish; winding failure");
    return t;
}

} // namespace lattice_spectra

#endif
