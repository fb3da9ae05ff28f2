#ifndef LATTICE_SPECTRA_TOOLS_CLI_HPP
#define LATTICE_SPECTRA_TOOLS_CLI_HPP

// lattice-spectra command-line front end.
//
//   verify-product  product identity, interlacing and log-gas energy for one diagonal
//   recover         diagonal b from the two half-chain spectra
//   scatter         Jost polynomial, bound/semi-bound conditions, phase table
//   constraint      continuum phase constraint in its phase and Jost forms
//   converge        finite-M sums against their large-M limits
//   freecase        zero-potential closed forms and trigonometric identities
//
// The JSON report goes to stdout; with --out DIR it is also written to
// DIR/<command>.json next to any CSV tables.
//
// Exit codes: 0 success, 1 hypothesis violated (bound or semi-bound state),
// 2 input error, 3 numerical failure or residual above tolerance.

#include <lattice_spectra/lattice_spectra.hpp>

#include "CLI11.hpp"
#include "json.hpp"
#include "potential_file.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_spectra::tools {

using json = nlohmann::ordered_json;

enum ExitCode : int { exit_ok = 0, exit_condition = 1, exit_input = 2, exit_numerical = 3 };

struct CliOptions {
    std::string input;
    std::optional<std::size_t> m;
    std::vector<std::size_t> m_list;
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    std::optional<unsigned> precision_bits;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

namespace detail {

// Reports mark failed checks; the driver maps them to exit codes.
struct Outcome {
    json report;
    int code = exit_ok;
    std::vector<std::pair<std::string, std::string>> files; // name, contents
};

inline double uniform(std::mt19937_64& gen, double lo, double hi)
{
    // 53 random bits; fixed mapping so the sequence is portable
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline json number(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

inline json numbers(const std::vector<double>& x)
{
    json a = json::array();
    for (double v : x)
        a.push_back(number(v));
    return a;
}

inline json complex_numbers(const std::vector<std::complex<double>>& x)
{
    json a = json::array();
    for (const auto& z : x)
        a.push_back(json::array({number(z.real()), number(z.imag())}));
    return a;
}

struct Context {
    const CliOptions& opt;
    PotentialFile file;

    std::size_t grid(std::size_t fallback = 4096) const { return opt.grid ? *opt.grid : file.grid.value_or(fallback); }
    double tol(double fallback) const { return opt.tol ? *opt.tol : file.tol.value_or(fallback); }
    unsigned precision_bits() const { return opt.precision_bits ? *opt.precision_bits : file.precision_bits.value_or(53); }
    std::optional<std::uint64_t> seed() const { return opt.seed ? opt.seed : file.seed; }
    std::optional<std::size_t> m() const { return opt.m ? opt.m : file.m; }

    /// Half-line potential from "v", or from "b" as v = b - 2.
    CompactPotential potential() const
    {
        std::vector<double> v;
        if (file.v) {
            v = *file.v;
        } else if (file.b) {
            for (double b : *file.b)
                v.push_back(b - 2.0);
        } else {
            throw InputError("input: a real \"v\" or \"b\" is required");
        }
        if (v.empty())
            throw InputError("input: empty potential; give at least one site (use [0] for the free case)");
        return CompactPotential::trimmed(std::move(v));
    }
};

inline Context make_context(const CliOptions& opt, bool input_required)
{
    Context c{opt, {}};
    if (!opt.input.empty())
        c.file = load_potential_file(opt.input);
    else if (input_required)
        throw InputError("--input is required for this command");
    return c;
}

template <class T>
json identity_block(const HalfChainDiagonal<T>& b, const SpectrumPair<T>& s)
{
    json r;
    const std::size_t m = b.size();
    const auto p = log_product(s);
    const int expected = product_identity_sign(m);
    r["log_abs_product"] = number(static_cast<double>(p.log_abs));
    r["expected_log_abs_product"] = number(static_cast<double>(m) * ln2<double>());
    r["sign"] = static_cast<double>(p.sign) > 0 ? 1 : -1;
    r["expected_sign"] = expected;
    r["residual"] = number(static_cast<double>(product_identity_residual(s)));
    r["interlacing"] = is_interlacing(s);
    r["coulomb_energy"] = number(static_cast<double>(coulomb_energy_discrete(s)));
    r["expected_coulomb_energy"] = number(-static_cast<double>(m) * ln2<double>());
    const auto traces = trace_identity_residuals(b, s);
    json tr = json::array();
    for (std::size_t k = 1; k <= 5; ++k) {
        const auto rel = traces.relative(k);
        tr.push_back(rel ? number(static_cast<double>(*rel)) : json(nullptr));
    }
    r["trace_identity_relative_residuals"] = tr;
    return r;
}

inline Outcome verify_product(const Context& ctx)
{
    const auto& f = ctx.file;
    const unsigned bits = ctx.precision_bits();
    const double tol = ctx.tol(1e-8);
    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.verify_product.v1";

    if (f.b_complex) {
        if (ctx.m() && *ctx.m() != f.b_complex->size())
            throw InputError("M does not match the length of \"b\"");
        const HalfChainDiagonal<std::complex<double>> b(*f.b_complex);
        const auto s = spectrum_pair_complex(b);
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& x : s.mu)
            for (const auto& y : s.nu)
                gap = std::min(gap, std::abs(x - y));
        const auto p = log_product(s);
        const double residual = product_identity_residual(s);
        r["M"] = b.size();
        r["precision_bits"] = 53;
        r["b"] = complex_numbers(b.entries());
        r["mu"] = complex_numbers(s.mu);
        r["nu"] = complex_numbers(s.nu);
        r["min_gap"] = number(gap);
        r["log_abs_product"] = number(p.log_abs);
        r["expected_log_abs_product"] = number(static_cast<double>(b.size()) * ln2<double>());
        r["phase"] = complex_numbers({p.sign});
        r["expected_sign"] = product_identity_sign(b.size());
        r["residual"] = number(residual);
        r["tol"] = tol;
        r["pass"] = residual <= tol;
        out.code = residual <= tol ? exit_ok : exit_numerical;
        return out;
    }

    std::vector<double> diag;
    if (f.b) {
        diag = *f.b;
        if (ctx.m() && *ctx.m() != diag.size())
            throw InputError("M does not match the length of \"b\"");
    } else {
        std::vector<double> v;
        std::size_t m = 0;
        if (f.v) {
            v = *f.v;
            m = ctx.m().value_or(v.size());
            if (v.size() > m)
                throw InputError("potential has more sites than M");
        } else if (ctx.seed() && ctx.m()) {
            m = *ctx.m();
            std::mt19937_64 gen(*ctx.seed());
            for (std::size_t j = 0; j < m; ++j)
                v.push_back(uniform(gen, -3.0, 3.0));
        } else {
            throw InputError("input: need \"v\", \"b\", or \"seed\" with M");
        }
        v.resize(m, 0.0);
        diag = HalfChainDiagonal<double>::from_potential(v).entries();
    }
    if (diag.empty())
        throw InputError("M must be at least 1");

    r["M"] = diag.size();
    r["precision_bits"] = bits;
    r["b"] = numbers(diag);
    json block;
    if (bits > 53) {
        const PrecisionScope scope(bits);
        const HalfChainDiagonal<mp_real> b(to_mp(diag));
        const auto s = spectrum_pair(b);
        r["mu"] = numbers(to_double(s.mu));
        r["nu"] = numbers(to_double(s.nu));
        block = identity_block(b, s);
    } else {
        const HalfChainDiagonal<double> b(diag);
        const auto s = spectrum_pair(b);
        r["mu"] = numbers(s.mu);
        r["nu"] = numbers(s.nu);
        block = identity_block(b, s);
    }
    for (auto& [k, v] : block.items())
        r[k] = v;
    const double residual = r["residual"].is_null() ? std::numeric_limits<double>::infinity() : r["residual"].get<double>();
    r["tol"] = tol;
    r["pass"] = residual <= tol;
    out.code = residual <= tol ? exit_ok : exit_numerical;
    return out;
}

inline Outcome recover(const Context& ctx)
{
    const auto& f = ctx.file;
    if (!f.mu)
        throw InputError("input: \"mu\" and \"nu\" are required");
    const unsigned bits = ctx.precision_bits();
    const double tol = ctx.tol(1e-8);
    const SpectrumPair<double> given{*f.mu, *f.nu};

    std::vector<double> b;
    double round_trip = 0;
    if (bits > 53) {
        const PrecisionScope scope(bits);
        const SpectrumPair<mp_real> s{to_mp(given.mu), to_mp(given.nu)};
        const auto rec = recover_potential(s);
        const auto back = spectrum_pair(rec);
        mp_real worst = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            worst = std::max({worst, mp_real(abs(back.mu[i] - s.mu[i])), mp_real(abs(back.nu[i] - s.nu[i]))});
        b = to_double(rec.entries());
        round_trip = static_cast<double>(worst);
    } else {
        const auto rec = recover_potential(given);
        const auto back = spectrum_pair(rec);
        for (std::size_t i = 0; i < given.size(); ++i)
            round_trip = std::max({round_trip, std::abs(back.mu[i] - given.mu[i]), std::abs(back.nu[i] - given.nu[i])});
        b = rec.entries();
    }
    std::vector<double> v;
    for (double x : b)
        v.push_back(x - 2.0);

    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.recover.v1";
    r["M"] = b.size();
    r["precision_bits"] = bits;
    r["b"] = numbers(b);
    r["v"] = numbers(v);
    r["round_trip_error"] = number(round_trip);
    r["tol"] = tol;
    r["pass"] = round_trip <= tol;
    out.code = round_trip <= tol ? exit_ok : exit_numerical;
    return out;
}

inline json condition_block(const JostPolynomial& f)
{
    json c;
    c["no_bound_states"] = f.report.no_bound_states;
    c["no_semibound_states"] = f.report.no_semibound_states;
    c["min_root_modulus"] = number(f.report.min_root_modulus);
    c["abs_F_plus"] = number(f.report.abs_f_plus);
    c["abs_F_minus"] = number(f.report.abs_f_minus);
    c["pass"] = f.report.passes();
    return c;
}

inline Outcome scatter(const Context& ctx)
{
    const auto v = ctx.potential();
    const auto f = jost_polynomial(v);
    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.scatter.v1";
    r["v"] = numbers(v.values());
    r["jost_coefficients"] = numbers(f.coeffs);
    r["jost_roots"] = complex_numbers(f.roots);
    r["conditions"] = condition_block(f);
    if (!f.report.passes()) {
        out.code = exit_condition;
        return out;
    }
    const auto phase = scattering_phase(f, ctx.grid());
    r["grid_intervals"] = phase.intervals();
    r["max_abs_eta"] = number(phase.max_abs_eta());
    r["eta_at_pi"] = number(phase.eta.back());
    std::ostringstream csv;
    io::write_phase_table_csv(csv, phase);
    out.files.emplace_back("phase_table.csv", csv.str());
    return out;
}

inline Outcome constraint(const Context& ctx)
{
    const auto v = ctx.potential();
    const double tol = ctx.tol(1e-8);
    const auto f = jost_polynomial(v);
    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.constraint.v1";
    r["v"] = numbers(v.values());
    r["conditions"] = condition_block(f);
    if (!f.report.passes()) {
        out.code = exit_condition;
        return out;
    }
    const QuadratureGrid grid(ctx.grid());
    const auto phase = scattering_phase(f, grid.size());
    const PhaseSampler sampler(phase, grid);
    const auto pc = constraint_residual_phase(sampler);
    const auto jc = constraint_residual_jost(f, grid);
    const auto coul = coulomb_energy_continuum(sampler);
    r["grid"] = grid.size();
    r["phase_form"] = {{"single_term", number(pc.single_term)},
                       {"double_term", number(pc.double_term)},
                       {"endpoint_form", number(pc.endpoint_form)},
                       {"residual", number(pc.residual)}};
    r["jost_form"] = {{"boundary", number(jc.boundary)},
                      {"contour_re", number(jc.contour.real())},
                      {"contour_im", number(jc.contour.imag())},
                      {"residual", number(jc.residual)}};
    // the phase form equals -pi/2 times the Jost form
    r["phase_plus_scaled_jost"] = number(pc.residual + 0.5 * pi<double>() * jc.residual);
    r["limit_s0"] = number(limit_s0(sampler));
    r["limit_s1"] = number(limit_s1(sampler));
    r["coulomb"] = {{"total_charge", number(coul.total_charge)},
                    {"pair_energy", number(coul.pair_energy)},
                    {"point_energy", number(coul.point_energy)},
                    {"charge_energy", number(coul.charge_energy)},
                    {"lhs", number(coul.lhs)},
                    {"residual", number(coul.residual)}};
    const bool pass = std::abs(pc.residual) <= tol && std::abs(jc.residual) <= tol;
    r["tol"] = tol;
    r["pass"] = pass;
    out.code = pass ? exit_ok : exit_numerical;
    return out;
}

inline Outcome converge(const Context& ctx)
{
    const auto v = ctx.potential();
    const double tol = ctx.tol(1e-8);
    std::vector<std::size_t> m_list = ctx.opt.m_list;
    if (m_list.empty())
        m_list = {50, 100, 200, 400};
    const auto f = jost_polynomial(v);
    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.converge.v1";
    r["v"] = numbers(v.values());
    r["conditions"] = condition_block(f);
    if (!f.report.passes()) {
        out.code = exit_condition;
        return out;
    }
    const QuadratureGrid grid(ctx.grid());
    const auto table = convergence_study(v, m_list, grid, grid.size());
    json rows = json::array();
    bool pass = true;
    for (const auto& row : table.rows) {
        rows.push_back({{"M", row.m},
                        {"sum_S", number(row.sum_s)},
                        {"sum_S0", number(row.sum_s0)},
                        {"sum_S1", number(row.sum_s1)},
                        {"limit_s0", number(row.limit_s0)},
                        {"limit_s1", number(row.limit_s1)},
                        {"residual_EQ", number(row.residual_eq)},
                        {"max_remainder", number(row.max_remainder)}});
        pass = pass && std::abs(row.sum_s) <= tol;
    }
    r["grid"] = grid.size();
    r["rows"] = rows;
    r["exponent_s0"] = number(table.exponent_s0);
    r["exponent_s1"] = number(table.exponent_s1);
    r["exponent_remainder"] = number(table.exponent_remainder);
    r["tol"] = tol;
    r["pass"] = pass;
    std::ostringstream csv;
    io::write_convergence_csv(csv, table);
    out.files.emplace_back("convergence.csv", csv.str());
    out.code = pass ? exit_ok : exit_numerical;
    return out;
}

inline Outcome freecase(const Context& ctx)
{
    const auto m_max = ctx.m();
    if (!m_max || *m_max == 0)
        throw InputError("freecase: --m (the largest M) must be at least 1");
    const double tol = ctx.tol(1e-9);
    std::mt19937_64 gen(ctx.seed().value_or(0));

    double worst_g = 0, worst_pro = 0, worst_cos = 0, worst_sine = 0, worst_free = 0, worst_eig = 0, worst_chain = 0;
    bool signs_ok = true;
    json rows = json::array();
    for (std::size_t m = 1; m <= *m_max; ++m) {
        double g = 0, pro = 0;
        for (std::size_t n = 1; n <= m; ++n) {
            const auto c = appendix_pro(m, n);
            pro = std::max(pro, c.residual);
            signs_ok = signs_ok && c.negative_factors == n;
            const auto g0 = appendix_g(m, static_cast<long>(n), 0.0);
            g = std::max(g, g0.residual);
            // (l20): g(0) = (boundary factor) * product^2, boundary factor = 4 cos^2(n pi/(2M+1))
            const double boundary = 4.0 * std::pow(std::cos(pi<double>() * static_cast<double>(n) / (2.0 * m + 1.0)), 2);
            worst_chain = std::max(worst_chain, std::abs(boundary * c.value * c.value - g0.value));
        }
        for (int i = 0; i < 3; ++i) {
            const auto n = static_cast<long>(1 + gen() % m);
            g = std::max(g, appendix_g(m, n, uniform(gen, -pi<double>(), pi<double>())).residual);
        }
        const double cs = cos_product(m).residual;
        const double fr = free_product_identity(m).residual;
        const auto spectrum = free_spectrum(2 * m);
        double eig = 0;
        for (std::size_t l = 1; l <= 2 * m; ++l)
            eig = std::max(eig, spectrum.eigen_residual(l));
        worst_g = std::max(worst_g, g);
        worst_pro = std::max(worst_pro, pro);
        worst_cos = std::max(worst_cos, cs);
        worst_free = std::max(worst_free, fr);
        worst_eig = std::max(worst_eig, eig);
        rows.push_back({{"M", m},
                        {"g_residual", number(g)},
                        {"pro_residual", number(pro)},
                        {"cos_product_residual", number(cs)},
                        {"free_product_residual", number(fr)},
                        {"eigenvector_residual", number(eig)}});
    }
    for (int i = 0; i < 10; ++i) {
        const std::size_t n = 1 + gen() % 20;
        worst_sine = std::max(worst_sine, sine_multiple_angle(n, uniform(gen, -pi<double>(), pi<double>())).residual);
    }

    Outcome out;
    json& r = out.report;
    r["schema"] = "lattice_spectra.freecase.v1";
    r["M_max"] = *m_max;
    r["rows"] = rows;
    r["max_residuals"] = {{"g", number(worst_g)},
                          {"pro", number(worst_pro)},
                          {"pro_squared_chain", number(worst_chain)},
                          {"cos_product", number(worst_cos)},
                          {"sine_multiple_angle", number(worst_sine)},
                          {"free_product", number(worst_free)},
                          {"eigenvector", number(worst_eig)}};
    r["pro_negative_factor_count_ok"] = signs_ok;
    const bool pass = signs_ok && std::max({worst_g, worst_pro, worst_chain, worst_cos, worst_sine, worst_free, worst_eig}) <= tol;
    r["tol"] = tol;
    r["pass"] = pass;
    out.code = pass ? exit_ok : exit_numerical;
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw InputError("cannot write " + path.string());
    os << contents;
}

} // namespace detail

/// Runs one command; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral identities for even potentials on a finite chain", "lattice-spectra"};
    app.require_subcommand(1);
    CliOptions opt;

    struct Command {
        const char* name;
        const char* help;
        detail::Outcome (*run)(const detail::Context&);
        bool input_required;
    };
    const Command commands[] = {
        {"verify-product", "product identity, interlacing and log-gas energy", detail::verify_product, false},
        {"recover", "diagonal from the even and odd spectra", detail::recover, true},
        {"scatter", "Jost polynomial, conditions and phase table", detail::scatter, true},
        {"constraint", "continuum phase constraint", detail::constraint, true},
        {"converge", "finite-M sums against their limits", detail::converge, true},
        {"freecase", "zero-potential closed forms", detail::freecase, false},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--input", opt.input, "input document (JSON)");
        sub->add_option("--m", opt.m, "chain half-length M");
        sub->add_option("--m-list", opt.m_list, "ascending list of M, comma separated")->delimiter(',');
        sub->add_option("--grid", opt.grid, "quadrature / phase-table points");
        sub->add_option("--tol", opt.tol, "pass tolerance");
        sub->add_option("--precision-bits", opt.precision_bits, "binary precision; above 53 selects MPFR");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--out", opt.out_dir, "directory for report and tables");
        subs.push_back(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }

    std::size_t which = 0;
    while (which < subs.size() && !subs[which]->parsed())
        ++which;
    const auto& cmd = commands[which];

    try {
        const auto ctx = detail::make_context(opt, cmd.input_required);
        auto outcome = cmd.run(ctx);
        const std::string report = outcome.report.dump(2) + "\n";
        out << report;
        if (!opt.out_dir.empty()) {
            const std::filesystem::path dir(opt.out_dir);
            std::filesystem::create_directories(dir);
            detail::write_file(dir / (std::string(cmd.name) + ".json"), report);
            for (const auto& [name, contents] : outcome.files)
                detail::write_file(dir / name, contents);
        }
        return outcome.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const PreconditionError& e) {
        err << "condition failure: " << e.what() << '\n';
        return exit_condition;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace lattice_spectra::tools

#endif
