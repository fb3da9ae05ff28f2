// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>

using namespace lattice_spectra;
using lattice_spectra::testing::quad;
using lattice_spectra::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

PhaseTable phase_of(const CompactPotential& v) { return scattering_phase(jost_polynomial(v)); }

std::vector<CompactPotential> passing_potentials(std::uint64_t seed, int count, std::size_t max_support)
{
    Rng rng(seed);
    std::vector<CompactPotential> out;
    for (int i = 0; i < count; ++i)
        out.push_back(lattice_spectra::testing::random_passing_potential(rng, max_support));
    return out;
}

// 1. Product identity on random real potentials. The spectra are computed in
// 113-bit arithmetic: at strong disorder some |mu - nu| fall below 1e-11, and
// rounding them to doubles alone moves the log product by more than 1e-8.
Verdict product_identity()
{
    Rng rng(1001);
    double worst_quad = 0, worst_double = 0;
    int sign_errors = 0, double_misses = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = rng.integer(1, 16);
        const auto b = lattice_spectra::testing::random_diagonal(rng, m);
        const auto sq = spectrum_pair(lattice_spectra::testing::to_quad(b));
        worst_quad = std::max(worst_quad, static_cast<double>(product_identity_residual(sq)));
        sign_errors += static_cast<int>(log_product(sq).sign) != product_identity_sign(m);
        double rd = std::numeric_limits<double>::infinity();
        try {
            rd = product_identity_residual(spectrum_pair(b));
        } catch (const Error&) {
            // coincident or non-interlacing doubles: gaps below one ulp
        }
        worst_double = std::max(worst_double, rd);
        double_misses += !(rd <= 1e-8);
    }
    return {worst_quad <= 1e-8 && sign_errors == 0,
            fmt("113-bit max residual %.2e, sign errors %d; binary64 path: max %.2e, %d/200 above 1e-8", worst_quad,
                sign_errors, worst_double, double_misses)};
}

// 2. Complex diagonals: product residual and separation of the two spectra.
Verdict complex_theorem()
{
    Rng rng(1002);
    double worst = 0, min_gap = std::numeric_limits<double>::infinity(), oracle_min_gap = min_gap;
    int close = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto b = lattice_spectra::testing::random_complex_diagonal(rng, rng.integer(2, 8));
        const auto s = spectrum_pair_complex(b);
        worst = std::max(worst, product_identity_residual(s));
        const auto h = build_half_hamiltonians(b);
        const auto de = lattice_spectra::testing::dense_eigenvalues(h.even);
        const auto dod = lattice_spectra::testing::dense_eigenvalues(h.odd);
        double gap = std::numeric_limits<double>::infinity(), oracle_gap = gap;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) {
                gap = std::min(gap, std::abs(s.mu[i] - s.nu[j]));
                oracle_gap = std::min(oracle_gap, std::abs(de[i] - dod[j]));
            }
        close += gap <= 1e-6;
        min_gap = std::min(min_gap, gap);
        oracle_min_gap = std::min(oracle_min_gap, oracle_gap);
    }
    return {worst <= 1e-6 && min_gap > 1e-6,
            fmt("max residual %.2e; min |mu-nu| %.2e (dense oracle %.2e), %d/50 draws at or below 1e-6", worst, min_gap,
                oracle_min_gap, close)};
}

// 3. The log product does not depend on b.
Verdict constancy()
{
    Rng rng(1003);
    double worst = 0;
    std::string per_m;
    for (std::size_t m : {4u, 8u, 12u}) {
        std::vector<double> logs;
        for (int trial = 0; trial < 100; ++trial) {
            const auto b = lattice_spectra::testing::to_quad(lattice_spectra::testing::random_diagonal(rng, m));
            logs.push_back(static_cast<double>(log_product(spectrum_pair(b)).log_abs));
        }
        double mean = 0;
        for (double x : logs)
            mean += x;
        mean /= static_cast<double>(logs.size());
        double var = 0;
        for (double x : logs)
            var += (x - mean) * (x - mean);
        const double sd = std::sqrt(var / static_cast<double>(logs.size() - 1));
        worst = std::max(worst, sd);
        per_m += fmt(" M=%zu:%.1e", m, sd);
    }
    return {worst <= 1e-8, "std-dev (113-bit spectra)" + per_m};
}

// 4. Five power-sum identities at M = 10.
Verdict traces()
{
    Rng rng(1004);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto b = lattice_spectra::testing::random_diagonal(rng, 10);
        const auto r = trace_identity_residuals(b, spectrum_pair(b));
        for (std::size_t k = 1; k <= 5; ++k)
            worst = std::max(worst, *r.relative(k));
    }
    return {worst <= 1e-9, fmt("max relative residual %.2e", worst)};
}

// 5. Round trip b -> (mu, nu) -> b.
Verdict recovery()
{
    using clock = std::chrono::steady_clock;
    Rng rng(1005);
    double worst_double = 0, worst_moderate = 0, slowest = 0;
    int misses = 0;
    for (std::size_t m = 1; m <= 12; ++m) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto b = lattice_spectra::testing::random_diagonal(rng, m);
            const auto t0 = clock::now();
            double e = std::numeric_limits<double>::infinity();
            try {
                e = lattice_spectra::testing::max_abs_diff(recover_potential(spectrum_pair(b)).entries(), b.entries());
            } catch (const Error&) {
                // doubles too coarse to keep the two spectra strictly interlaced
            }
            slowest = std::max(slowest, std::chrono::duration<double>(clock::now() - t0).count());
            worst_double = std::max(worst_double, e);
            misses += e > 1e-8;
            const auto bm = lattice_spectra::testing::random_diagonal(rng, m, 1.0);
            worst_moderate = std::max(
                worst_moderate,
                lattice_spectra::testing::max_abs_diff(recover_potential(spectrum_pair(bm)).entries(), bm.entries()));
        }
    }

    const PrecisionScope scope(256);
    double worst_mp = 0;
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<mp_real> b;
        for (double x : rng.reals(24, -3.0, 3.0))
            b.push_back(mp_real(x) + 2);
        const auto t0 = clock::now();
        const auto rec = recover_potential(spectrum_pair(HalfChainDiagonal<mp_real>(b)));
        slowest = std::max(slowest, std::chrono::duration<double>(clock::now() - t0).count());
        for (std::size_t i = 0; i < b.size(); ++i)
            worst_mp = std::max(worst_mp, static_cast<double>(abs(rec[i] - b[i])));
    }
    return {worst_double <= 1e-8 && worst_mp <= 1e-20 && slowest <= 5.0,
            fmt("binary64, v in [-3,3]: max %.2e (%d/120 above 1e-8); v in [-1,1]: max %.2e; 256-bit M=24: max %.2e; "
                "slowest %.3f s",
                worst_double, misses, worst_moderate, worst_mp, slowest)};
}

// 6. Free-chain closed forms for all M <= 30.
Verdict freecase()
{
    Rng rng(1006);
    double worst = 0;
    bool signs = true;
    for (std::size_t m = 1; m <= 30; ++m) {
        worst = std::max({worst, cos_product(m).residual, free_product_identity(m).residual});
        for (std::size_t n = 1; n <= m; ++n) {
            worst = std::max(worst, appendix_g(m, static_cast<long>(n), 0.0).residual);
            const auto pro = appendix_pro(m, n);
            worst = std::max(worst, pro.residual);
            signs = signs && pro.negative_factors == n;
        }
        for (std::size_t l = 1; l <= m; ++l)
            worst = std::max(worst, free_spectrum(m).eigen_residual(l));
    }
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = rng.integer(1, 30);
        worst = std::max(
            worst, appendix_g(m, static_cast<long>(rng.integer(1, m)), rng.uniform(-3.0, 3.0)).residual);
        worst = std::max(worst, sine_multiple_angle(rng.integer(1, 20), rng.uniform(-3.0, 3.0)).residual);
    }
    return {worst <= 1e-9 && signs, fmt("max residual %.2e, negative-factor counts %s", worst, signs ? "ok" : "wrong")};
}

// 7. Jost function, regular solution and phase on random passing potentials.
Verdict scattering()
{
    Rng rng(1007);
    double fj = 0, wr = 0, cj = 0, edge = 0;
    for (const auto& v : passing_potentials(2007, 20, 6)) {
        const auto f = jost_polynomial(v);
        for (int k = 0; k < 8; ++k) {
            const double p = rng.uniform(0.05, kPi - 0.05);
            const std::size_t jmax = v.support() + 20;
            const auto phi = regular_solution<std::complex<double>>(v, dispersion(p), jmax);
            const auto fp = jost_solution(v, p, jmax);
            const auto fm = jost_solution(v, -p, jmax);
            const auto F = jost_function(v, p);
            const auto Fm = jost_function(v, -p);
            const std::complex<double> pre(0, 1.0 / (2.0 * std::sin(p)));
            const auto w0 = wronskian(phi, fp, 0);
            for (std::size_t j = 0; j <= jmax; ++j)
                fj = std::max(fj, std::abs(phi[j] - pre * (F * fm[j] - Fm * fp[j])));
            for (std::size_t j = 0; j < jmax; ++j) {
                wr = std::max(wr, std::abs(wronskian(phi, fp, j) - w0) / std::max(1.0, std::abs(w0)));
                wr = std::max(wr, std::abs(wronskian(fp, fm, j) - std::complex<double>(0, -2.0 * std::sin(p))));
            }
            cj = std::max(cj, std::abs(Fm - std::conj(F)));
            cj = std::max(cj, std::abs(f(std::polar(1.0, -p)) - std::conj(f(std::polar(1.0, p)))));
        }
        const auto t = scattering_phase(f);
        edge = std::max({edge, std::abs(t.delta(0.0)), std::abs(t.delta(4.0))});
    }
    return {fj <= 1e-10 && wr <= 1e-12 && cj <= 1e-12 && edge <= 1e-10,
            fmt("FJ %.2e, Wronskian %.2e, conjugation %.2e, |delta| at 0/4 %.2e", fj, wr, cj, edge)};
}

// 8. Quantization against dense diagonalization, and the asymptotic orders.
Verdict quantization()
{
    double worst = 0;
    std::vector<CompactPotential> pots{CompactPotential({0.5})};
    for (const auto& v : passing_potentials(2008, 4, 4))
        pots.push_back(v);
    for (const auto& v : pots) {
        const auto phase = phase_of(v);
        for (std::size_t m : {20u, 60u})
            worst = std::max(worst, lattice_spectra::testing::max_abs_diff(
                                        solve_quantization(m, phase).lambda,
                                        lattice_spectra::testing::even_extension_spectrum(v, m)));
    }
    const auto phase = phase_of(CompactPotential({0.5}));
    std::vector<double> ms, e1, e2;
    for (std::size_t m : {50u, 100u, 200u, 400u}) {
        const auto s = solve_quantization(m, phase);
        double w1 = 0, w2 = 0;
        for (std::size_t l = 1; l <= 2 * m; ++l) {
            w1 = std::max(w1, std::abs(quantization_asymptotic(m, phase, l, 1) - s.p[l - 1]));
            w2 = std::max(w2, std::abs(quantization_asymptotic(m, phase, l, 2) - s.p[l - 1]));
        }
        ms.push_back(static_cast<double>(m));
        e1.push_back(w1);
        e2.push_back(w2);
    }
    const double x1 = fitted_decay_exponent(ms, e1), x2 = fitted_decay_exponent(ms, e2);
    return {worst <= 1e-10 && x1 >= 1.9 && x2 >= 2.9,
            fmt("max |lambda - dense| %.2e; truncation exponents %.3f / %.3f", worst, x1, x2)};
}

// 9. Finite-M sum vanishes.
Verdict finite_sum()
{
    const auto phase = phase_of(CompactPotential({0.5}));
    double worst = 0;
    std::string per_m;
    for (std::size_t m : {50u, 100u, 200u, 400u}) {
        const double s = s_m_exact(solve_quantization(m, phase)).total;
        worst = std::max(worst, std::abs(s));
        per_m += fmt(" M=%zu:%.1e", m, s);
    }
    return {worst <= 1e-8, "sum S_m" + per_m};
}

// 10. Continuum constraint in both forms; grid refinement.
Verdict continuum_constraint()
{
    double worst = 0, forms = 0, doubling = 0;
    for (const auto& v : passing_potentials(2010, 20, 4)) {
        const auto phase = phase_of(v);
        const auto c4 = constraint_residual_phase(phase, QuadratureGrid(4096));
        const auto c2 = constraint_residual_phase(phase, QuadratureGrid(2048));
        const auto j4 = constraint_residual_jost(phase.jost, QuadratureGrid(4096));
        const auto j2 = constraint_residual_jost(phase.jost, QuadratureGrid(2048));
        worst = std::max(worst, std::abs(c4.residual));
        // the phase form is -pi/2 times the Jost form
        forms = std::max(forms, std::abs(c4.residual + kPi / 2 * j4.residual));
        doubling = std::max({doubling, std::abs(c4.residual - c2.residual), std::abs(j4.residual - j2.residual)});
    }
    return {worst <= 1e-7 && forms <= 1e-9 && doubling <= 1e-9,
            fmt("max |phase form| %.2e, |phase + (pi/2) Jost| %.2e, grid doubling %.2e", worst, forms, doubling)};
}

// 11. Limits of the split sums and the rate at which the partial sums reach them.
Verdict limits()
{
    const auto table = convergence_study(CompactPotential({0.5}), {50, 100, 200, 400});
    double lsum = 0, gap0 = 0, gap1 = 0;
    for (const auto& r : table.rows) {
        lsum = std::max(lsum, std::abs(r.limit_s0 + r.limit_s1));
        gap0 = std::max(gap0, std::abs(r.sum_s0 - r.limit_s0));
        gap1 = std::max(gap1, std::abs(r.sum_s1 - r.limit_s1));
    }
    const auto in_band = [](double x) { return x >= 0.8 && x <= 1.2; };
    return {lsum <= 1e-9 && in_band(table.exponent_s0) && in_band(table.exponent_s1),
            fmt("|limit_s0 + limit_s1| %.2e; partial sums already within %.1e / %.1e of the limits at M=50, "
                "fitted exponents %.2f / %.2f",
                lsum, gap0, gap1, table.exponent_s0, table.exponent_s1)};
}

// 12. Electrostatic forms, discrete and continuum.
Verdict electrostatics()
{
    Rng rng(1012);
    double discrete = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto b = lattice_spectra::testing::to_quad(lattice_spectra::testing::random_diagonal(rng, 8));
        discrete = std::max(discrete, static_cast<double>(abs(coulomb_energy_discrete(spectrum_pair(b)) + 8 * log(quad(2)))));
    }
    double continuum = 0;
    std::vector<CompactPotential> pots{CompactPotential({0.5})};
    for (const auto& v : passing_potentials(2012, 10, 4))
        pots.push_back(v);
    for (const auto& v : pots) {
        const auto phase = phase_of(v);
        continuum = std::max(continuum, std::abs(coulomb_energy_continuum(PhaseSampler(phase, QuadratureGrid())).residual));
    }
    return {discrete <= 1e-9 && continuum <= 1e-7,
            fmt("discrete |E + M ln2| %.2e (113-bit spectra), continuum residual %.2e", discrete, continuum)};
}

// 13. Principal values of 1/(omega(q) - omega(k))^nu vanish.
Verdict principal_values()
{
    Rng rng(1013);
    const QuadratureGrid grid;
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const double k = rng.uniform(0.05, kPi - 0.05);
        worst = std::max({worst, std::abs(resolvent_pv(k, 1, grid)), std::abs(resolvent_pv(k, 2, grid))});
    }
    return {worst <= 1e-10, fmt("max |PV| %.2e", worst)};
}

} // namespace

int main()
{
    struct Criterion {
        const char* title;
        std::function<Verdict()> run;
        double budget_s;
    };
    const Criterion criteria[] = {
        {"product identity, 200 real potentials", product_identity, 10},
        {"complex diagonals: product and separation", complex_theorem, 30},
        {"log product independent of b", constancy, 0},
        {"trace identities, M = 10", traces, 0},
        {"inverse recovery round trip", recovery, 0},
        {"free-chain closed forms, M <= 30", freecase, 5},
        {"scattering consistency", scattering, 0},
        {"finite-M quantization", quantization, 0},
        {"finite-M sum of S_m", finite_sum, 60},
        {"continuum constraint", continuum_constraint, 0},
        {"asymptotic limits and decay rate", limits, 0},
        {"electrostatic forms", electrostatics, 0},
        {"principal-value identities", principal_values, 0},
    };
    int failed = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        failed += !v.pass;
        std::printf("%s %2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", index, c.title, v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
