#ifndef LATTICE_SPECTRA_CONTINUUM_HPP
#define LATTICE_SPECTRA_CONTINUUM_HPP

// Large-M limit of the product identity for the even extension of a compact
// half-line potential, and the resulting integral constraint on the
// scattering phase.
//
// Every lambda-integral over (0, 4) is done in the momentum variable
// lambda = omega(p) = 2 - 2 cos p. The integrands then extend to even,
// smooth, 2pi-periodic functions, where the trapezoid rule converges
// geometrically. Principal values are removed by subtracting the pole value:
// the resolvent 1/(omega(q) - omega(k)) has zero principal value over a full
// period, leaving a removable singularity at q = +-k.

#include "common.hpp"
#include "constraints.hpp"
#include "scattering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace lattice_spectra {

/// n uniform nodes on [0, 2pi).
class QuadratureGrid {
  public:
    explicit QuadratureGrid(std::size_t n = 4096)
        : n_(n)
    {
        if (n < 64 || n % 2 != 0)
            throw InputError("quadrature grid: n must be even and at least 64");
    }

    std::size_t size() const { return n_; }
    double step() const { return 2.0 * pi<double>() / static_cast<double>(n_); }

  private:
    std::size_t n_;
};

namespace detail {

// omega(q) - omega(k) = 4 sin((q+k)/2) sin((q-k)/2), free of cancellation.
inline double omega_gap(double q, double k)
{
    return 4.0 * std::sin(0.5 * (q + k)) * std::sin(0.5 * (q - k));
}

} // namespace detail

/// eta, eta', eta'' sampled on two node sets of a quadrature grid: midpoints
/// (i + 1/2) h and integer points i h. Both sets are symmetric under q -> -q.
class PhaseSampler {
  public:
    struct Samples {
        double offset = 0;
        std::vector<double> q, eta, eta1, eta2;
    };

    PhaseSampler(const PhaseTable& phase, QuadratureGrid grid)
        : phase_(&phase)
        , grid_(grid)
    {
        midpoint_ = sample(0.5 * grid_.step());
        aligned_ = sample(0.0);
    }

    const PhaseTable& phase() const { return *phase_; }
    const QuadratureGrid& grid() const { return grid_; }
    const Samples& midpoint() const { return midpoint_; }
    const Samples& aligned() const { return aligned_; }

    /// Node set whose points stay at least h/4 away from +-k.
    const Samples& avoiding(double k) const
    {
        const double h = grid_.step();
        const double r = k - h * std::floor(k / h);
        const double to_aligned = std::min(r, h - r);
        const double to_midpoint = std::abs(r - 0.5 * h);
        return to_aligned >= to_midpoint ? aligned_ : midpoint_;
    }

  private:
    Samples sample(double offset) const
    {
        Samples s;
        s.offset = offset;
        const std::size_t n = grid_.size();
        s.q.resize(n);
        s.eta.resize(n);
        s.eta1.resize(n);
        s.eta2.resize(n);
        parallel_for(n, [&](std::size_t i) {
            const double q = offset + grid_.step() * static_cast<double>(i);
            s.q[i] = q;
            s.eta[i] = phase_->eta_at(q);
            s.eta1[i] = phase_->eta_prime(q);
            s.eta2[i] = phase_->eta_second(q);
        });
        return s;
    }

    const PhaseTable* phase_;
    QuadratureGrid grid_;
    Samples midpoint_;
    Samples aligned_;
};

struct FiniteMSpectrum {
    std::size_t m = 0;
    std::vector<double> p;      // p_l, l = 1..2M
    std::vector<double> lambda; // omega(p_l)
    std::vector<double> k;      // pi l / (2M+1)
};

/// Support J of the potential behind a phase table.
inline std::size_t support_of(const PhaseTable& phase)
{
    return (phase.jost.degree() + 1) / 2;
}

/// Solves (2M+1) p_l + 2 eta(p_l) = (2M+1) k_l for l = 1..2M by Newton's
/// method safeguarded with bisection on the bracket
/// |p_l - k_l| <= 2 max|eta| / (2M+1), clipped to (0, pi).
inline FiniteMSpectrum solve_quantization(std::size_t m, const PhaseTable& phase)
{
    if (m <= support_of(phase))
        throw InputError("solve_quantization: M = " + std::to_string(m) + " must exceed the support J = " +
                         std::to_string(support_of(phase)));
    const double len = static_cast<double>(2 * m + 1);
    // table maximum can undershoot the true one between nodes
    const double reach = 2.0 * phase.max_abs_eta() / len * 1.05 + 1e-12;
    FiniteMSpectrum out;
    out.m = m;
    out.p.resize(2 * m);
    out.lambda.resize(2 * m);
    out.k.resize(2 * m);
    const double eps = std::numeric_limits<double>::epsilon();
    parallel_for(2 * m, [&](std::size_t i) {
        const double k = pi<double>() * static_cast<double>(i + 1) / len;
        auto g = [&](double p) { return len * p + 2.0 * phase.eta_at(p) - len * k; };
        double lo = std::max(0.0, k - reach);
        double hi = std::min(pi<double>(), k + reach);
        double glo = g(lo), ghi = g(hi);
        if (glo > 0 || ghi < 0)
            throw NumericalError("solve_quantization: root of the quantization condition not bracketed for l = " +
                                 std::to_string(i + 1));
        double p = std::clamp(k - 2.0 * phase.eta_at(k) / len, lo, hi);
        for (int it = 0; it < 200; ++it) {
            const double gp = g(p);
            if (gp == 0.0)
                break;
            if (gp < 0)
                lo = p;
            else
                hi = p;
            const double slope = len + 2.0 * phase.eta_prime(p);
            if (slope <= 0.0)
                throw NumericalError("solve_quantization: (2M+1)p + 2 eta(p) is not monotonic near p = " +
                                     std::to_string(p) + "; increase M");
            double next = p - gp / slope;
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            const bool settled = std::abs(next - p) <= 4.0 * eps * std::max(1.0, std::abs(p));
            p = next;
            if (settled || hi - lo <= 4.0 * eps * std::max(1.0, std::abs(p)))
                break;
        }
        if (std::abs(g(p)) > std::max(1e-12, 16.0 * eps * len * pi<double>()))
            throw NumericalError("solve_quantization: residual too large for l = " + std::to_string(i + 1));
        out.k[i] = k;
        out.p[i] = p;
    });
    for (std::size_t i = 0; i < 2 * m; ++i) {
        out.lambda[i] = dispersion(out.p[i]);
        if (i > 0 && !(out.p[i] > out.p[i - 1]))
            throw NumericalError("solve_quantization: momenta not strictly increasing");
    }
    return out;
}

/// Large-M expansion of p_l: k - 2 eta(k)/(2M+1) + 4 eta(k) eta'(k)/(2M+1)^2.
/// order = 1 drops the last term.
inline double quantization_asymptotic(std::size_t m, const PhaseTable& phase, std::size_t l, int order = 2)
{
    const double len = static_cast<double>(2 * m + 1);
    const double k = pi<double>() * static_cast<double>(l) / len;
    const double e = phase.eta_at(k);
    double p = k - 2.0 * e / len;
    if (order >= 2)
        p += 4.0 * e * phase.eta_prime(k) / (len * len);
    return p;
}

/// Even-extension spectrum as (mu, nu) = (lambda_{2m-1}, lambda_{2m}).
inline SpectrumPair<double> as_spectrum_pair(const FiniteMSpectrum& s)
{
    SpectrumPair<double> out;
    for (std::size_t i = 0; i < s.m; ++i) {
        out.mu.push_back(s.lambda[2 * i]);
        out.nu.push_back(s.lambda[2 * i + 1]);
    }
    return out;
}

struct SmSums {
    std::vector<double> terms; // S_m, m = 1..M
    double total = 0;
};

/// S_m = sum_n [ln|omega(p_{2n-1}) - omega(p_{2m})| - ln|omega(k_{2n-1}) - omega(k_{2m})|].
/// The total vanishes whenever the 2M-site product identity holds.
inline SmSums s_m_exact(const FiniteMSpectrum& s)
{
    SmSums out;
    out.terms.resize(s.m);
    std::vector<double> row(s.m);
    for (std::size_t mi = 0; mi < s.m; ++mi) {
        const std::size_t even = 2 * mi + 1; // index of p_{2m}
        for (std::size_t ni = 0; ni < s.m; ++ni) {
            const std::size_t odd = 2 * ni; // index of p_{2n-1}
            const double gap = detail::omega_gap(s.p[odd], s.p[even]);
            const double free_gap = detail::omega_gap(s.k[odd], s.k[even]);
            if (gap == 0.0 || free_gap == 0.0)
                throw DegenerateInputError("s_m_exact: coincident frequencies");
            row[ni] = std::log(std::abs(gap)) - std::log(std::abs(free_gap));
        }
        out.terms[mi] = pairwise_sum(row);
    }
    out.total = pairwise_sum(out.terms);
    return out;
}

namespace detail {

// B(q) = omega'(q) eta(q)
inline double flux(double q, double eta)
{
    return 2.0 * std::sin(q) * eta;
}

// A(q) = [omega'(q) eta(q)^2]'
inline double flux2_prime(double q, double eta, double eta1)
{
    return 2.0 * std::cos(q) * eta * eta + 4.0 * std::sin(q) * eta * eta1;
}

} // namespace detail

/// R_m(q) = [omega'(k) eta(k) - omega'(q) eta(q)] / [omega(q) - omega(k)], k = k_{2m}.
inline double leading_kernel(std::size_t m_total, const PhaseTable& phase, std::size_t m, double q)
{
    const double len = static_cast<double>(2 * m_total + 1);
    const double k = pi<double>() * static_cast<double>(2 * m) / len;
    return (detail::flux(k, phase.eta_at(k)) - detail::flux(q, phase.eta_at(q))) / detail::omega_gap(q, k);
}

/// S_m^(0) = 2/(2M+1) sum_{n=1}^M R_m(k_{2n-1}).
inline double s_m_leading(std::size_t m_total, const PhaseTable& phase, std::size_t m)
{
    const double len = static_cast<double>(2 * m_total + 1);
    std::vector<double> terms(m_total);
    for (std::size_t n = 1; n <= m_total; ++n)
        terms[n - 1] = leading_kernel(m_total, phase, m, pi<double>() * static_cast<double>(2 * n - 1) / len);
    return 2.0 / len * pairwise_sum(terms);
}

/// S_m^(1) as the q-integral
///   1/(pi(2M+1)) int_0^pi { [A(q) - A(k)]/[omega(q) - omega(k)] - R_m(q)^2 } dq,
/// A = [omega' eta^2]', k = k_{2m}; the removable point q = k takes its limit.
inline double s_m_subleading(const PhaseSampler& sampler, std::size_t m_total, std::size_t m)
{
    const auto& phase = sampler.phase();
    const double len = static_cast<double>(2 * m_total + 1);
    const double k = pi<double>() * static_cast<double>(2 * m) / len;
    const double ek = phase.eta_at(k), e1k = phase.eta_prime(k), e2k = phase.eta_second(k);
    const double ak = detail::flux2_prime(k, ek, e1k);
    const double bk = detail::flux(k, ek);
    const double sk = std::sin(k), ck = std::cos(k);
    const double w1 = 2.0 * sk;
    const double a_lim = (-2.0 * sk * ek * ek + 8.0 * ck * ek * e1k + 4.0 * sk * (e1k * e1k + ek * e2k)) / w1;
    const double r_lim = -(2.0 * ck * ek + 2.0 * sk * e1k) / w1;

    const auto& s = sampler.avoiding(k);
    std::vector<double> terms(s.q.size());
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        const double gap = detail::omega_gap(s.q[i], k);
        if (gap == 0.0) {
            terms[i] = a_lim - r_lim * r_lim;
            continue;
        }
        const double r = (bk - detail::flux(s.q[i], s.eta[i])) / gap;
        terms[i] = (detail::flux2_prime(s.q[i], s.eta[i], s.eta1[i]) - ak) / gap - r * r;
    }
    // int_0^pi = (1/2) int_0^{2pi} for the even integrand
    const double integral = 0.5 * sampler.grid().step() * pairwise_sum(terms);
    return integral / (pi<double>() * len);
}

/// PV int_0^pi dq / [omega(q) - omega(k)]^nu through its definition as the
/// average of the contours q +- i eps, with eps = 40/n so that the trapezoid
/// sum resolves the nearby poles. The exact value is zero for every eps > 0.
inline double resolvent_pv(double k, int nu, const QuadratureGrid& grid)
{
    if (!(k > 0.0 && k < pi<double>()))
        throw InputError("resolvent_pv: k must lie in (0, pi)");
    if (nu < 1)
        throw InputError("resolvent_pv: nu must be positive");
    const std::size_t n = grid.size();
    const double h = grid.step();
    const double eps = 40.0 / static_cast<double>(n);
    const double wk = dispersion(k);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx q(h * (static_cast<double>(i) + 0.5), eps);
        const cplx w = 2.0 - 2.0 * std::cos(q) - wk;
        terms[i] = std::real(std::pow(w, -nu));
    }
    return 0.5 * h * pairwise_sum(terms);
}

/// I(Lambda) = PV int_0^4 delta(lambda) / (lambda - Lambda) d lambda, 0 <= Lambda <= 4.
/// In momenta: I = (1/2) int_0^{2pi} [B(q) - B(k)] / [omega(q) - omega(k)] dq with
/// B = omega' eta and omega(k) = Lambda. At the band edges the integral is ordinary.
inline double pv_integral_I(const PhaseSampler& sampler, double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 4.0))
        throw InputError("pv_integral_I: Lambda must lie in [0, 4]");
    const double h = sampler.grid().step();
    if (lambda == 0.0 || lambda == 4.0) {
        const auto& s = sampler.midpoint();
        std::vector<double> terms(s.q.size());
        for (std::size_t i = 0; i < s.q.size(); ++i) {
            const double half = 0.5 * s.q[i];
            // omega'/omega = cot(q/2), omega'/(omega - 4) = -tan(q/2)
            terms[i] = lambda == 0.0 ? s.eta[i] / std::tan(half) : -s.eta[i] * std::tan(half);
        }
        return 0.5 * h * pairwise_sum(terms);
    }
    const auto& phase = sampler.phase();
    const double k = PhaseTable::momentum_of(lambda);
    const double bk = detail::flux(k, phase.eta_at(k));
    const double lim = (2.0 * std::cos(k) * phase.eta_at(k) + 2.0 * std::sin(k) * phase.eta_prime(k)) / (2.0 * std::sin(k));
    const auto& s = sampler.avoiding(k);
    std::vector<double> terms(s.q.size());
    for (std::size_t i = 0; i < s.q.size(); ++i) {
        const double gap = detail::omega_gap(s.q[i], k);
        terms[i] = gap == 0.0 ? lim : (detail::flux(s.q[i], s.eta[i]) - bk) / gap;
    }
    return 0.5 * h * pairwise_sum(terms);
}

/// (1/pi) int_0^4 delta(l1) PV int_0^4 delta'(l2)/(l2 - l1) dl2 dl1
/// = (1/pi) int_0^pi omega'(p) eta(p) J(p) dp,
/// J(p) = (1/2) int_0^{2pi} [eta'(q) - eta'(p)] / [omega(q) - omega(p)] dq,
/// on the midpoint grid; the removable points q = +-p take eta''(p)/omega'(p).
inline double pv_double_integral(const PhaseSampler& sampler)
{
    const auto& s = sampler.midpoint();
    const std::size_t n = s.q.size();
    const double h = sampler.grid().step();
    std::vector<double> outer(n);
    parallel_for(n, [&](std::size_t i) {
        const double lim = s.eta2[i] / (2.0 * std::sin(s.q[i]));
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || j == n - 1 - i)
                row[j] = lim;
            else
                row[j] = (s.eta1[j] - s.eta1[i]) / detail::omega_gap(s.q[j], s.q[i]);
        }
        const double jp = 0.5 * h * pairwise_sum(row);
        outer[i] = detail::flux(s.q[i], s.eta[i]) * jp;
    });
    return 0.5 * h * pairwise_sum(outer) / pi<double>();
}

struct PhaseConstraint {
    double single_term = 0;   // int_0^4 delta (lambda-2)/(lambda(lambda-4)) = int_0^pi eta cot p
    double double_term = 0;   // (1/pi) int delta PV int delta'/(l2 - l1)
    double residual = 0;      // single_term + double_term, zero in theory
    double endpoint_form = 0; // [I(0) + I(4)]/2, equal to single_term
};

inline PhaseConstraint constraint_residual_phase(const PhaseSampler& sampler)
{
    if (!sampler.phase().jost.report.passes())
        throw PreconditionError("constraint_residual_phase: bound or semi-bound states present");
    const auto& s = sampler.midpoint();
    std::vector<double> terms(s.q.size());
    for (std::size_t i = 0; i < s.q.size(); ++i)
        terms[i] = s.eta[i] / std::tan(s.q[i]);
    PhaseConstraint c;
    c.single_term = 0.5 * sampler.grid().step() * pairwise_sum(terms);
    c.double_term = pv_double_integral(sampler);
    c.residual = c.single_term + c.double_term;
    c.endpoint_form = 0.5 * (pv_integral_I(sampler, 0.0) + pv_integral_I(sampler, 4.0));
    return c;
}

inline PhaseConstraint constraint_residual_phase(const PhaseTable& phase, const QuadratureGrid& grid = QuadratureGrid())
{
    return constraint_residual_phase(PhaseSampler(phase, grid));
}

struct JostConstraint {
    double boundary = 0; // ln F(1) + ln F(-1)
    cplx contour = 0;    // (1/2 pi i) closed integral of ln F(1/z) d ln F(z)
    double residual = 0; // boundary + Re contour
};

/// ln F(1) + ln F(-1) + (1/2 pi i) oint_{|z|=1} ln[F(1/z)] (d ln F(z)/dz) dz by the
/// trapezoid rule in z = e^{i theta}. The branch of ln F(1/z) is followed
/// continuously from its real value at z = 1 (ln F is analytic on the closed disk).
/// For any admissible F the phase-form residual is -pi/2 times this one.
inline JostConstraint constraint_residual_jost(const JostPolynomial& f, const QuadratureGrid& grid = QuadratureGrid())
{
    if (!f.report.passes())
        throw PreconditionError("constraint_residual_jost: bound or semi-bound states present");
    if (f.report.min_root_modulus - 1.0 <= 1e-6)
        throw NumericalError("constraint_residual_jost: a zero of F lies within 1e-6 of the contour");
    const double f_plus = f(1.0), f_minus = f(-1.0);
    if (!(f_plus > 0.0 && f_minus > 0.0))
        throw NumericalError("constraint_residual_jost: F(+-1) not positive");
    const std::size_t n = grid.size();
    const double h = grid.step();
    std::vector<cplx> log_inv(n), dlog(n);
    parallel_for(n, [&](std::size_t i) {
        const cplx z = std::polar(1.0, h * (static_cast<double>(i) + 0.5));
        log_inv[i] = std::log(f(1.0 / z));
        dlog[i] = z * f.derivative(z) / f(z);
    });
    // continue the branch of ln F(1/z) from arg F(1) = 0
    double branch = 0.0;
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        branch += detail::wrap_angle(log_inv[i].imag() - branch);
        const cplx term = cplx(log_inv[i].real(), branch) * dlog[i];
        re[i] = term.real();
        im[i] = term.imag();
    }
    JostConstraint c;
    c.boundary = std::log(f_plus) + std::log(f_minus);
    c.contour = cplx(pairwise_sum(re), pairwise_sum(im)) * (h / (2.0 * pi<double>()));
    c.residual = c.boundary + c.contour.real();
    return c;
}

/// lim sum_m S_m^(0) = [I(0) + I(4)] / (2 pi)
inline double limit_s0(const PhaseSampler& sampler)
{
    return (pv_integral_I(sampler, 0.0) + pv_integral_I(sampler, 4.0)) / (2.0 * pi<double>());
}

/// lim sum_m S_m^(1) = (1/pi^2) int delta PV int delta'/(l2 - l1)
inline double limit_s1(const PhaseSampler& sampler)
{
    return pv_double_integral(sampler) / pi<double>();
}

struct CoulombContinuum {
    double total_charge = 0;  // int rho, rho = 2 delta'/pi
    double pair_energy = 0;   // -1/2 int int rho rho ln|l1 - l2|
    double point_energy = 0;  // -int rho [q1 ln l + q2 ln(4 - l)]
    double charge_energy = 0; // -q1 q2 ln 4
    double lhs = 0;
    double residual = 0; // lhs - (-ln 2 / 2)
};

/// Electrostatic form of the phase constraint with q1 = q2 = -1/2.
/// The log kernels use ln|2(cos q - cos p)| = -sum_m (2/m) cos mp cos mq and
/// ln|2 sin(p/2)| = -sum_m cos(mp)/m, so both energies reduce to cosine
/// coefficients a_m = int_0^pi eta'(p) cos(mp) dp.
inline CoulombContinuum coulomb_energy_continuum(const PhaseSampler& sampler)
{
    constexpr double q1 = -0.5, q2 = -0.5;
    const auto& phase = sampler.phase();
    CoulombContinuum c;
    c.total_charge = 2.0 / pi<double>() * (phase.eta.back() - phase.eta.front());
    if (std::abs(c.total_charge) > 1e-8)
        throw NumericalError("coulomb_energy_continuum: total charge " + std::to_string(c.total_charge) +
                             " does not vanish; inconsistent phase");
    const auto& s = sampler.midpoint();
    const std::size_t n = s.q.size();
    const std::size_t modes = n / 2;
    const double h = sampler.grid().step();
    std::vector<double> a(modes + 1, 0.0);
    parallel_for(modes, [&](std::size_t idx) {
        const std::size_t m = idx + 1;
        std::vector<double> terms(n);
        for (std::size_t i = 0; i < n; ++i)
            terms[i] = s.eta1[i] * std::cos(static_cast<double>(m) * s.q[i]);
        a[m] = 0.5 * h * pairwise_sum(terms);
    });
    std::vector<double> pair(modes), point(modes);
    for (std::size_t m = 1; m <= modes; ++m) {
        const double md = static_cast<double>(m);
        pair[m - 1] = a[m] * a[m] / md;
        point[m - 1] = a[m] * (q1 + (m % 2 == 0 ? q2 : -q2)) / md;
    }
    c.pair_energy = 4.0 / (pi<double>() * pi<double>()) * pairwise_sum(pair);
    c.point_energy = 4.0 / pi<double>() * pairwise_sum(point);
    c.charge_energy = -q1 * q2 * std::log(4.0);
    c.lhs = c.pair_energy + c.point_energy + c.charge_energy;
    c.residual = c.lhs + 0.5 * ln2<double>();
    return c;
}

struct ConvergenceRow {
    std::size_t m = 0;
    double sum_s = 0;
    double sum_s0 = 0;
    double sum_s1 = 0;
    double limit_s0 = 0;
    double limit_s1 = 0;
    double residual_eq = 0;
    double max_remainder = 0; // max_m |S_m - S_m^(0) - S_m^(1)|
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double exponent_s0 = 0; // decay exponent of |sum S^(0) - limit_s0|
    double exponent_s1 = 0; // decay exponent of |sum S^(1) - limit_s1|
    double exponent_remainder = 0;
};

/// Finite-M sums against their M -> infinity limits for each M in m_list.
inline ConvergenceTable convergence_study(const CompactPotential& v, const std::vector<std::size_t>& m_list,
                                          const QuadratureGrid& grid = QuadratureGrid(), std::size_t phase_intervals = 4096)
{
    if (m_list.empty())
        throw InputError("convergence_study: empty M list");
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (m_list[i] <= v.support())
            throw InputError("convergence_study: every M must exceed the support J = " + std::to_string(v.support()));
        if (i > 0 && m_list[i] <= m_list[i - 1])
            throw InputError("convergence_study: M list must be strictly ascending");
    }
    const auto jost = jost_polynomial(v);
    const auto phase = scattering_phase(jost, phase_intervals);
    const PhaseSampler sampler(phase, grid);
    const double l0 = limit_s0(sampler);
    const double l1 = limit_s1(sampler);
    const double eq = constraint_residual_phase(sampler).residual;

    ConvergenceTable table;
    for (std::size_t m : m_list) {
        const auto spec = solve_quantization(m, phase);
        const auto exact = s_m_exact(spec);
        std::vector<double> s0(m), s1(m), rem(m);
        parallel_for(m, [&](std::size_t i) {
            s0[i] = s_m_leading(m, phase, i + 1);
            s1[i] = s_m_subleading(sampler, m, i + 1);
            rem[i] = std::abs(exact.terms[i] - s0[i] - s1[i]);
        });
        ConvergenceRow row;
        row.m = m;
        row.sum_s = exact.total;
        row.sum_s0 = pairwise_sum(s0);
        row.sum_s1 = pairwise_sum(s1);
        row.limit_s0 = l0;
        row.limit_s1 = l1;
        row.residual_eq = eq;
        row.max_remainder = *std::max_element(rem.begin(), rem.end());
        table.rows.push_back(row);
    }
    std::vector<double> ms, d0, d1, dr;
    for (const auto& r : table.rows) {
        ms.push_back(static_cast<double>(r.m));
        d0.push_back(std::abs(r.sum_s0 - r.limit_s0));
        d1.push_back(std::abs(r.sum_s1 - r.limit_s1));
        dr.push_back(r.max_remainder);
    }
    table.exponent_s0 = fitted_decay_exponent(ms, d0);
    table.exponent_s1 = fitted_decay_exponent(ms, d1);
    table.exponent_remainder = fitted_decay_exponent(ms, dr);
    return table;
}

} // namespace lattice_spectra

#endif
