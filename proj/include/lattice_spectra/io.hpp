#ifndef LATTICE_SPECTRA_IO_HPP
#define LATTICE_SPECTRA_IO_HPP

// Plain-text exports. Numbers use the shortest representation that reads
// back to the same double, with '.' as decimal point regardless of locale.
// CSV files open with a "# schema: ..." line, then the column header.

#include "continuum.hpp"
#include "scattering.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <string>

namespace lattice_spectra::io {

inline constexpr const char* phase_table_schema = "lattice_spectra.phase_table.v1";
inline constexpr const char* convergence_schema = "lattice_spectra.convergence.v1";

inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

/// Columns p, eta, sigma, lambda, delta; delta(lambda) = eta(p) at lambda = omega(p).
inline void write_phase_table_csv(std::ostream& os, const PhaseTable& t)
{
    os << "# schema: " << phase_table_schema << '\n';
    os << "p,eta,sigma,lambda,delta\n";
    for (std::size_t k = 0; k < t.grid.size(); ++k) {
        const double lambda = dispersion(t.grid[k]);
        os << format_double(t.grid[k]) << ',' << format_double(t.eta[k]) << ',' << format_double(t.sigma[k]) << ','
           << format_double(lambda) << ',' << format_double(t.eta[k]) << '\n';
    }
}

inline void write_convergence_csv(std::ostream& os, const ConvergenceTable& table)
{
    os << "# schema: " << convergence_schema << '\n';
    os << "M,sum_S,sum_S0,sum_S1,limit_s0,limit_s1,residual_EQ\n";
    for (const auto& r : table.rows) {
        os << r.m << ',' << format_double(r.sum_s) << ',' << format_double(r.sum_s0) << ','
           << format_double(r.sum_s1) << ',' << format_double(r.limit_s0) << ',' << format_double(r.limit_s1) << ','
           << format_double(r.residual_eq) << '\n';
    }
}

} // namespace lattice_spectra::io

#endif
