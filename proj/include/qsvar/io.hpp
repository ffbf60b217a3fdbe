#ifndef QSVAR_IO_HPP
#define QSVAR_IO_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "qsvar/exact_dist.hpp"
#include "qsvar/moments.hpp"
#include "qsvar/rational.hpp"
#include "qsvar/simulator.hpp"

namespace qsvar {

/// Four decimals, then trailing zeros dropped down to one: 2.6667, 0.0247, 1.0.
inline std::string format_float(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string s(buf);
  while (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return s;
}

// Rationals travel as "num/den" strings (bare "k" for integers).
inline void to_json(nlohmann::json& j, const Rational& r) { j = r.to_string(); }
inline void from_json(const nlohmann::json& j, Rational& r) { r = Rational::parse(j.get<std::string>()); }

/// {"n": int, "probabilities": [{"k": int, "p": "num/den"}, ...]}, nonzero
/// entries only, ascending k.
inline void to_json(nlohmann::json& j, const ComparisonDistribution& dist) {
  auto entries = nlohmann::json::array();
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    if (dist.probs[k].sign() == 0) continue;
    entries.push_back({{"k", k}, {"p", dist.probs[k]}});
  }
  j = nlohmann::json{{"n", dist.n}, {"probabilities", std::move(entries)}};
}

inline void from_json(const nlohmann::json& j, ComparisonDistribution& dist) {
  dist.n = j.at("n").get<std::size_t>();
  dist.probs.assign(ComparisonDistribution::max_comparisons(dist.n) + 1, Rational());
  for (const auto& entry : j.at("probabilities")) {
    const auto k = entry.at("k").get<std::size_t>();
    if (k >= dist.probs.size()) throw std::out_of_range("distribution entry k out of range");
    dist.probs[k] = entry.at("p").get<Rational>();
  }
}

inline void write_csv(std::ostream& os, const ComparisonDistribution& dist) {
  os << "k,p_num,p_den\n";
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    const auto& p = dist.probs[k];
    if (p.sign() == 0) continue;
    os << k << ',' << p.num().get_str() << ',' << p.den().get_str() << '\n';
  }
}

inline void to_json(nlohmann::json& j, const MomentReport& r) {
  j = nlohmann::json{{"n", r.n},
                     {"mean", r.mean},
                     {"second_factorial", r.second_factorial},
                     {"variance", r.variance}};
}

inline void from_json(const nlohmann::json& j, MomentReport& r) {
  r.n = j.at("n").get<std::size_t>();
  r.mean = j.at("mean").get<Rational>();
  r.second_factorial = j.at("second_factorial").get<Rational>();
  r.variance = j.at("variance").get<Rational>();
}

inline void to_json(nlohmann::json& j, const SimConfig& c) {
  j = nlohmann::json{{"n", c.n}, {"samples", c.samples}, {"seed", c.seed}, {"input_mode", to_string(c.input_mode)}};
}

inline void from_json(const nlohmann::json& j, SimConfig& c) {
  c.n = j.at("n").get<std::size_t>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.input_mode = parse_input_mode(j.at("input_mode").get<std::string>());
}

inline void to_json(nlohmann::json& j, const SampleStats& s) {
  auto hist = nlohmann::json::array();
  for (const auto& [k, c] : s.histogram) hist.push_back({{"k", k}, {"count", c}});
  j = nlohmann::json{{"config", s.config},         {"sample_mean", s.sample_mean},
                     {"sample_variance", s.sample_variance}, {"min_k", s.min_k},
                     {"max_k", s.max_k},           {"histogram", std::move(hist)}};
}

inline void from_json(const nlohmann::json& j, SampleStats& s) {
  s.config = j.at("config").get<SimConfig>();
  s.sample_mean = j.at("sample_mean").get<double>();
  s.sample_variance = j.at("sample_variance").get<double>();
  s.min_k = j.at("min_k").get<std::uint64_t>();
  s.max_k = j.at("max_k").get<std::uint64_t>();
  s.histogram.clear();
  for (const auto& e : j.at("histogram")) {
    s.histogram[e.at("k").get<std::uint64_t>()] = e.at("count").get<std::uint64_t>();
  }
}

inline void to_json(nlohmann::json& j, const ZReport& z) {
  j = nlohmann::json{{"n", z.n},           {"exact_mean", z.exact_mean}, {"exact_variance", z.exact_variance},
                     {"mean_z", z.mean_z}, {"variance_z", z.variance_z}, {"pass", z.pass}};
}

inline void from_json(const nlohmann::json& j, ZReport& z) {
  z.n = j.at("n").get<std::size_t>();
  z.exact_mean = j.at("exact_mean").get<double>();
  z.exact_variance = j.at("exact_variance").get<double>();
  z.mean_z = j.at("mean_z").get<double>();
  z.variance_z = j.at("variance_z").get<double>();
  z.pass = j.at("pass").get<bool>();
}

/// Ascending-k "k,count" table.
inline void write_histogram_csv(std::ostream& os, const SampleStats& s) {
  os << "k,count\n";
  for (const auto& [k, c] : s.histogram) os << k << ',' << c << '\n';
}

}  // namespace qsvar

#endif  // QSVAR_IO_HPP
