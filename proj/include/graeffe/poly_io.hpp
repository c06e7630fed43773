#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "graeffe/poly.hpp"
#include "graeffe/randpoly.hpp"

namespace graeffe {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ParsedPoly = std::variant<Poly, RenPoly>;

namespace detail {

inline std::complex<double> coeff_from_json(const nlohmann::json& e,
                                            const std::string& where) {
  double re = 0.0, im = 0.0;
  if (e.is_number()) {
    re = e.get<double>();
  } else if (e.is_array() && (e.size() == 1 || e.size() == 2) &&
             e[0].is_number() && (e.size() == 1 || e[1].is_number())) {
    re = e[0].get<double>();
    if (e.size() == 2) im = e[1].get<double>();
  } else {
    throw ParseError(where + ": coefficient must be a number or [re, im]");
  }
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw ParseError(where + ": non-finite coefficient");
  }
  return {re, im};
}

inline RenValue logcoeff_from_json(const nlohmann::json& e, int k,
                                   const std::string& where) {
  if (!e.is_array() || e.size() != 2) {
    throw ParseError(where + ": log coefficient must be [mag, arg]");
  }
  if (!e[1].is_number()) throw ParseError(where + ": arg must be a number");
  const double arg = e[1].get<double>();
  if (!std::isfinite(arg)) throw ParseError(where + ": non-finite arg");
  if (e[0].is_null()) return ren_zero(k);  // JSON cannot encode -inf directly
  if (!e[0].is_number()) {
    throw ParseError(where + ": mag must be a number or null");
  }
  const double mag = e[0].get<double>();
  if (!std::isfinite(mag)) throw ParseError(where + ": non-finite mag");
  return {mag, wrap_angle(arg), k};
}

}  // namespace detail

/// Parse a polynomial JSON object:
///   {"degree": d, "coeffs": [c_0, ..., c_d]}          c_i = re or [re, im]
///   {"degree": d, "logcoeffs": [[mag, arg], ...]}     mag = null for a zero
/// with optional "renorm_index" (depth k of the logcoeffs, default 0).
/// Metadata fields such as "seed", "kind", "generator" are ignored here.
inline ParsedPoly parse_poly_json(const nlohmann::json& j,
                                  const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  if (!j.contains("degree") || !j["degree"].is_number_integer()) {
    throw ParseError(where + ": missing integer \"degree\"");
  }
  const long long d = j["degree"].get<long long>();
  if (d < 1 || d > 10'000'000) {
    throw ParseError(where + ": degree out of range");
  }

  const bool has_c = j.contains("coeffs");
  const bool has_l = j.contains("logcoeffs");
  if (has_c == has_l) {
    throw ParseError(where +
                     ": expected exactly one of \"coeffs\" or \"logcoeffs\"");
  }

  if (has_c) {
    const auto& arr = j["coeffs"];
    if (!arr.is_array() || static_cast<long long>(arr.size()) != d + 1) {
      throw ParseError(where + ": \"coeffs\" must hold degree + 1 entries");
    }
    Poly f;
    f.coeffs.reserve(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
      f.coeffs.push_back(detail::coeff_from_json(
          arr[i], where + ", coeff " + std::to_string(i)));
    }
    if (f.coeffs.back() == std::complex<double>(0.0)) {
      throw ParseError(where + ": degenerate leading coefficient");
    }
    return f;
  }

  int k = 0;
  if (j.contains("renorm_index")) {
    if (!j["renorm_index"].is_number_integer() ||
        j["renorm_index"].get<long long>() < 0 ||
        j["renorm_index"].get<long long>() > 1024) {
      throw ParseError(where + ": invalid \"renorm_index\"");
    }
    k = j["renorm_index"].get<int>();
  }
  const auto& arr = j["logcoeffs"];
  if (!arr.is_array() || static_cast<long long>(arr.size()) != d + 1) {
    throw ParseError(where + ": \"logcoeffs\" must hold degree + 1 entries");
  }
  RenPoly f;
  f.k = k;
  f.coeffs.reserve(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    f.coeffs.push_back(detail::logcoeff_from_json(
        arr[i], k, where + ", logcoeff " + std::to_string(i)));
  }
  if (is_ren_zero(f.coeffs.back())) {
    throw ParseError(where + ": degenerate leading coefficient");
  }
  return f;
}

inline ParsedPoly parse_poly_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // The library message carries byte/line position context.
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_poly_json(j, path.string());
}

inline nlohmann::json poly_to_json(const Poly& f, Kind kind) {
  nlohmann::json j;
  j["degree"] = f.degree();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : f.coeffs) {
    if (kind == Kind::real) {
      arr.push_back(c.real());
    } else {
      arr.push_back({c.real(), c.imag()});
    }
  }
  j["coeffs"] = std::move(arr);
  return j;
}

inline nlohmann::json renpoly_to_json(const RenPoly& f) {
  nlohmann::json j;
  j["degree"] = f.degree();
  j["renorm_index"] = f.k;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : f.coeffs) {
    if (is_ren_zero(c)) {
      arr.push_back({nullptr, 0.0});
    } else {
      arr.push_back({c.mag, c.arg});
    }
  }
  j["logcoeffs"] = std::move(arr);
  return j;
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace graeffe
