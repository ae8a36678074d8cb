#pragma once

// JSON forms of moment sequences and generator specs.
//
// Moment sequences are arrays of decimal strings ("p/q" for exact values) so
// extended-precision values round-trip exactly.

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/generators/beta_mixture.hpp"
#include "hmt/generators/decay.hpp"
#include "hmt/moment_core.hpp"

namespace hmt {

using json = nlohmann::json;

template <class T>
json moments_to_json(const BasicMomentSequence<T>& m) {
  json out = json::array();
  for (const auto& v : m.values()) {
    if constexpr (std::is_same_v<T, Rational>) {
      out.push_back(to_string(v));
    } else {
      out.push_back(v.to_string());
    }
  }
  return out;
}

/// Accepts strings (decimal or p/q) and plain JSON numbers.
inline MomentSequence moments_from_json(const json& j) {
  if (!j.is_array()) throw SchemaMismatch("moment sequence must be a JSON array");
  std::vector<XReal> values;
  values.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_string()) {
      values.push_back(XReal::parse(v.get<std::string>()));
    } else if (v.is_number()) {
      values.push_back(XReal(v.get<double>()));
    } else {
      throw SchemaMismatch("moment entries must be strings or numbers");
    }
  }
  return MomentSequence(std::move(values));
}

/// Uniformly random point of the moment space of the given order,
/// optionally with a fixed prefix m_0..m_k.
struct CanonicalSpec {
  int order = 10;
  std::vector<std::string> prefix;
};

using GeneratorSpec = std::variant<CanonicalSpec, DecaySpec, BetaMixtureSpec>;

inline json spec_to_json(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CanonicalSpec>) {
          json out{{"type", "canonical"}, {"order", s.order}};
          if (!s.prefix.empty()) out["prefix"] = s.prefix;
          return out;
        } else if constexpr (std::is_same_v<S, DecaySpec>) {
          json comps = json::array();
          for (const auto& k : s.components) comps.push_back({{"s", k.s}, {"a", k.a}, {"b", k.b}, {"c", k.c}});
          return {{"type", "cm"}, {"class", std::string(decay_class_name(s.cls))}, {"s", s.s}, {"components", comps}};
        } else {
          return {{"type", "beta_mixture"}, {"a", s.a}, {"b", s.b}, {"c", s.c}};
        }
      },
      spec);
}

inline GeneratorSpec spec_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "canonical") {
      CanonicalSpec s;
      s.order = j.at("order").get<int>();
      if (j.contains("prefix")) s.prefix = j.at("prefix").get<std::vector<std::string>>();
      return s;
    }
    if (type == "cm") {
      DecaySpec s;
      s.cls = parse_decay_class(j.at("class").get<std::string>());
      s.s = j.at("s").get<double>();
      for (const auto& c : j.at("components")) {
        s.components.push_back({c.at("s").get<double>(), c.value("a", 1.0), c.value("b", 1.0), c.at("c").get<double>()});
      }
      s.validate();
      return s;
    }
    if (type == "beta_mixture") {
      BetaMixtureSpec s{j.at("a").get<std::vector<double>>(), j.at("b").get<std::vector<double>>(),
                        j.at("c").get<std::vector<double>>()};
      s.validate();
      return s;
    }
    throw SchemaMismatch("unknown generator type: " + type);
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("generator spec: ") + e.what());
  }
}

}  // namespace hmt
