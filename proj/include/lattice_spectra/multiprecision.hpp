#ifndef LATTICE_SPECTRA_MULTIPRECISION_HPP
#define LATTICE_SPECTRA_MULTIPRECISION_HPP

// MPFR-backed real type with run-time precision. Precision is per-thread
// state in MPFR, so the library evaluates this type serially.

#include "common.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <vector>

namespace lattice_spectra {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

/// Decimal digits carried by a binary precision of `bits`.
inline unsigned digits10_for_bits(unsigned bits)
{
    return static_cast<unsigned>(std::floor(static_cast<double>(bits) * 0.30102999566398120));
}

/// Sets the default precision of new mp_real values for its lifetime.
class PrecisionScope {
  public:
    explicit PrecisionScope(unsigned bits)
        : saved_(mp_real::default_precision())
    {
        if (bits < 64)
            throw InputError("precision_bits must be at least 64");
        mp_real::default_precision(digits10_for_bits(bits));
    }
    ~PrecisionScope() { mp_real::default_precision(saved_); }

    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    unsigned saved_;
};

inline std::vector<mp_real> to_mp(const std::vector<double>& x)
{
    return {x.begin(), x.end()};
}

inline std::vector<double> to_double(const std::vector<mp_real>& x)
{
    std::vector<double> out;
    out.reserve(x.size());
    for (const auto& v : x)
        out.push_back(static_cast<double>(v));
    return out;
}

} // namespace lattice_spectra

#endif
