#pragma once

// Experiment configuration and its JSON form.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hmt/io.hpp"
#include "hmt/transforms.hpp"

namespace hmt {

enum class Experiment { DecaySweep, GpSensitivity, Timing, CmHistogram, SingleRun };
enum class ReferencePolicy { ExactWhenAvailable, GpDynamic };

inline std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::DecaySweep:
      return "decay-sweep";
    case Experiment::GpSensitivity:
      return "gp-sensitivity";
    case Experiment::Timing:
      return "timing";
    case Experiment::CmHistogram:
      return "cm-histogram";
    case Experiment::SingleRun:
      return "single-run";
  }
  return "?";
}

inline Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::DecaySweep, Experiment::GpSensitivity, Experiment::Timing, Experiment::CmHistogram,
                 Experiment::SingleRun}) {
    if (experiment_name(e) == name) return e;
  }
  throw SchemaMismatch("unknown experiment: " + name);
}

inline std::string reference_policy_name(ReferencePolicy p) {
  return p == ReferencePolicy::GpDynamic ? "gp-dynamic" : "exact-when-available";
}

inline ReferencePolicy parse_reference_policy(const std::string& name) {
  if (name == "gp-dynamic") return ReferencePolicy::GpDynamic;
  if (name == "exact-when-available") return ReferencePolicy::ExactWhenAvailable;
  throw SchemaMismatch("unknown reference policy: " + name);
}

struct ExperimentConfig {
  Experiment experiment = Experiment::SingleRun;
  // Fixed generator specs, used round-robin over trials. When empty,
  // decay-sweep draws random specs of each class in `classes` and the other
  // experiments draw random beta mixtures.
  std::vector<GeneratorSpec> generators;
  std::vector<DecayClass> classes{std::begin(kAllDecayClasses), std::end(kAllDecayClasses)};
  std::vector<Method> methods{Method::BM, Method::FL, Method::FC, Method::CM};
  std::vector<int> orders{10, 20};
  int trials = 1;
  std::uint64_t seed = 1;
  ReferencePolicy reference = ReferencePolicy::ExactWhenAvailable;
  std::string output_dir;
  int threads = 0;  // 0: hardware concurrency

  double lp_tol = 1e-6;  // CM bands
  GpDynamicOptions gp;   // GP as a method and as the reference

  // cm-histogram
  int outer_trials = 10;
  int inner_trials = 20;
  bool fixed_prefix = false;  // prefix (1, 1/2, 1/3, 1/4) instead of random prefixes
  int prefix_order = 3;
  int extended_order = 8;
  double histogram_point = 0.5;

  void validate() const {
    if (trials < 1) throw DomainError("config: trials must be >= 1");
    if (methods.empty() && experiment != Experiment::GpSensitivity && experiment != Experiment::CmHistogram) {
      throw DomainError("config: no methods");
    }
    for (int n : orders) {
      if (n < 1) throw DomainError("config: orders must be >= 1");
    }
    if (experiment == Experiment::DecaySweep && generators.empty() && classes.empty()) {
      throw DomainError("config: decay sweep needs classes or generators");
    }
    if (experiment == Experiment::CmHistogram) {
      if (outer_trials < 1 || inner_trials < 1) throw DomainError("config: histogram trial counts must be >= 1");
      if (prefix_order < 1 || extended_order <= prefix_order) {
        throw DomainError("config: histogram needs 1 <= prefix_order < extended_order");
      }
    }
  }
};

inline json config_to_json(const ExperimentConfig& c) {
  json gens = json::array();
  for (const auto& g : c.generators) gens.push_back(spec_to_json(g));
  json classes = json::array();
  for (auto cls : c.classes) classes.push_back(std::string(decay_class_name(cls)));
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(method_name(m));
  return {{"experiment", experiment_name(c.experiment)},
          {"generators", gens},
          {"classes", classes},
          {"methods", methods},
          {"orders", c.orders},
          {"trials", c.trials},
          {"seed", c.seed},
          {"reference", reference_policy_name(c.reference)},
          {"output_dir", c.output_dir},
          {"threads", c.threads},
          {"lp_tol", c.lp_tol},
          {"gp", {{"ds", c.gp.ds}, {"upsilon", c.gp.upsilon}, {"eps", c.gp.eps}, {"max_points", c.gp.max_points}}},
          {"histogram",
           {{"outer_trials", c.outer_trials},
            {"inner_trials", c.inner_trials},
            {"fixed_prefix", c.fixed_prefix},
            {"prefix_order", c.prefix_order},
            {"extended_order", c.extended_order},
            {"point", c.histogram_point}}}};
}

/// Missing keys keep their defaults.
inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw SchemaMismatch("config must be a JSON object");
    c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("generators")) {
      for (const auto& g : j.at("generators")) c.generators.push_back(spec_from_json(g));
    }
    if (j.contains("classes")) {
      c.classes.clear();
      for (const auto& s : j.at("classes")) c.classes.push_back(parse_decay_class(s.get<std::string>()));
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& s : j.at("methods")) c.methods.push_back(parse_method(s.get<std::string>()));
    }
    if (j.contains("orders")) c.orders = j.at("orders").get<std::vector<int>>();
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    if (j.contains("reference")) c.reference = parse_reference_policy(j.at("reference").get<std::string>());
    c.output_dir = j.value("output_dir", c.output_dir);
    c.threads = j.value("threads", c.threads);
    c.lp_tol = j.value("lp_tol", c.lp_tol);
    if (j.contains("gp")) {
      const auto& g = j.at("gp");
      c.gp.ds = g.value("ds", c.gp.ds);
      c.gp.upsilon = g.value("upsilon", c.gp.upsilon);
      c.gp.eps = g.value("eps", c.gp.eps);
      c.gp.max_points = g.value("max_points", c.gp.max_points);
    }
    if (j.contains("histogram")) {
      const auto& h = j.at("histogram");
      c.outer_trials = h.value("outer_trials", c.outer_trials);
      c.inner_trials = h.value("inner_trials", c.inner_trials);
      c.fixed_prefix = h.value("fixed_prefix", c.fixed_prefix);
      c.prefix_order = h.value("prefix_order", c.prefix_order);
      c.extended_order = h.value("extended_order", c.extended_order);
      c.histogram_point = h.value("point", c.histogram_point);
    }
  } catch (const json::exception& e) {
    throw SchemaMismatch(std::string("config: ") + e.what());
  } catch (const SchemaMismatch&) {
    throw;
  } catch (const Error& e) {
    throw SchemaMismatch(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace hmt
