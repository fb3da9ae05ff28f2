#ifndef LATTICE_SPECTRA_TOOLS_POTENTIAL_FILE_HPP
#define LATTICE_SPECTRA_TOOLS_POTENTIAL_FILE_HPP

// Input document for the command-line tool, e.g.
//   {"v": [0.5, -0.2], "M": 12, "grid": 4096, "tol": 1e-9}
//   {"b": [[2.0, 0.1], [1.5, -0.3]]}        complex diagonal
//   {"mu": [1.0], "nu": [3.0]}               spectra for recover

#include <lattice_spectra/common.hpp>

#include "json.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_spectra::tools {

struct PotentialFile {
    std::optional<std::vector<double>> v;
    std::optional<std::vector<double>> b;
    std::optional<std::vector<std::complex<double>>> b_complex;
    std::optional<std::vector<double>> mu;
    std::optional<std::vector<double>> nu;
    std::optional<std::size_t> m;
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    std::optional<unsigned> precision_bits;
    std::optional<std::uint64_t> seed;

    bool has_diagonal() const { return v || b || b_complex; }
};

namespace detail {

inline double finite_number(const nlohmann::json& j, const std::string& key)
{
    if (!j.is_number())
        throw InputError("input: \"" + key + "\" must contain numbers");
    const double x = j.get<double>();
    if (!std::isfinite(x))
        throw InputError("input: \"" + key + "\" contains a non-finite number");
    return x;
}

inline std::vector<double> real_array(const nlohmann::json& j, const std::string& key)
{
    if (!j.is_array())
        throw InputError("input: \"" + key + "\" must be an array");
    std::vector<double> out;
    for (const auto& x : j)
        out.push_back(finite_number(x, key));
    return out;
}

template <class T>
T non_negative_integer(const nlohmann::json& j, const std::string& key)
{
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw InputError("input: \"" + key + "\" must be a non-negative integer");
    return static_cast<T>(j.get<unsigned long long>());
}

} // namespace detail

inline PotentialFile parse_potential_file(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("input: malformed document: ") + e.what());
    }
    if (!doc.is_object())
        throw InputError("input: top level must be an object");

    static const char* known[] = {"v", "b", "mu", "nu", "M", "grid", "tol", "precision_bits", "seed"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known))
            throw InputError("input: unknown key \"" + key + "\"");
    }

    PotentialFile f;
    if (doc.contains("v") && doc.contains("b"))
        throw InputError("input: give either \"v\" or \"b\", not both");
    if (doc.contains("v"))
        f.v = detail::real_array(doc["v"], "v");
    if (doc.contains("b")) {
        const auto& b = doc["b"];
        if (!b.is_array())
            throw InputError("input: \"b\" must be an array");
        const bool complex = !b.empty() && b.front().is_array();
        if (complex) {
            std::vector<std::complex<double>> z;
            for (const auto& e : b) {
                if (!e.is_array() || e.size() != 2)
                    throw InputError("input: complex \"b\" entries must be [re, im] pairs");
                z.emplace_back(detail::finite_number(e[0], "b"), detail::finite_number(e[1], "b"));
            }
            f.b_complex = std::move(z);
        } else {
            f.b = detail::real_array(b, "b");
        }
    }
    if (doc.contains("mu") != doc.contains("nu"))
        throw InputError("input: \"mu\" and \"nu\" must be given together");
    if (doc.contains("mu")) {
        f.mu = detail::real_array(doc["mu"], "mu");
        f.nu = detail::real_array(doc["nu"], "nu");
    }
    if (doc.contains("M"))
        f.m = detail::non_negative_integer<std::size_t>(doc["M"], "M");
    if (doc.contains("grid"))
        f.grid = detail::non_negative_integer<std::size_t>(doc["grid"], "grid");
    if (doc.contains("tol")) {
        f.tol = detail::finite_number(doc["tol"], "tol");
        if (*f.tol <= 0)
            throw InputError("input: \"tol\" must be positive");
    }
    if (doc.contains("precision_bits"))
        f.precision_bits = detail::non_negative_integer<unsigned>(doc["precision_bits"], "precision_bits");
    if (doc.contains("seed"))
        f.seed = detail::non_negative_integer<std::uint64_t>(doc["seed"], "seed");
    return f;
}

inline PotentialFile load_potential_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("input: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential_file(ss.str());
}

} // namespace lattice_spectra::tools

#endif
