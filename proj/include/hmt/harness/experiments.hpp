#pragma once

// The experiment suites. Every trial draws its inputs from its own RNG
// stream, trials run as a parallel map, and rows are concatenated in task
// order, so a (config, seed) pair always produces the same CSV bytes.
// Method failures become a status string on the row instead of aborting.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hmt/cm_bounds.hpp"
#include "hmt/generators/beta_mixture.hpp"
#include "hmt/generators/canonical.hpp"
#include "hmt/generators/decay.hpp"
#include "hmt/harness/config.hpp"
#include "hmt/harness/csv.hpp"
#include "hmt/harness/parallel.hpp"
#include "hmt/polish.hpp"
#include "hmt/transforms.hpp"

namespace hmt {

struct TrialResult {
  int trial = 0;
  std::optional<double> total_distance;
  std::optional<double> max_distance;
  std::optional<double> wall_ms;
  std::string status = "ok";
};

/// All trials of one (experiment, class, method, n) cell.
struct MethodReport {
  std::string experiment;
  std::string cls;
  std::string method;
  int n = 0;
  std::string reference;  // "exact", "gp-dynamic" or "none"
  std::vector<TrialResult> trials;

  [[nodiscard]] std::vector<double> totals() const { return collect(&TrialResult::total_distance); }
  [[nodiscard]] std::vector<double> maxima() const { return collect(&TrialResult::max_distance); }
  [[nodiscard]] std::vector<double> times() const { return collect(&TrialResult::wall_ms); }
  [[nodiscard]] double mean_total() const { return mean(totals()); }
  [[nodiscard]] double median_total() const { return median(totals()); }
  [[nodiscard]] double mean_max() const { return mean(maxima()); }
  [[nodiscard]] double median_max() const { return median(maxima()); }
  [[nodiscard]] double mean_wall_ms() const { return mean(times()); }

  static double mean(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  }
  static double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  }

 private:
  [[nodiscard]] std::vector<double> collect(std::optional<double> TrialResult::*field) const {
    std::vector<double> out;
    for (const auto& t : trials) {
      if (t.*field) out.push_back(*(t.*field));
    }
    return out;
  }
};

struct ExperimentResult {
  std::string experiment;
  std::vector<CsvRow> rows;
  std::vector<MethodReport> reports;
  json summary = json::object();

  [[nodiscard]] std::string csv() const { return to_csv(rows); }

  [[nodiscard]] const MethodReport* find(const std::string& cls, const std::string& method, int n) const {
    for (const auto& r : reports) {
      if (r.cls == cls && r.method == method && r.n == n) return &r;
    }
    return nullptr;
  }
};

/// Error class name used as the row status.
inline std::string status_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const PrecisionInsufficient&) {
    return "PrecisionInsufficient";
  } catch (const NotConverged&) {
    return "NotConverged";
  } catch (const IllConditioned&) {
    return "IllConditioned";
  } catch (const MemoryGuardError&) {
    return "MemoryGuardError";
  } catch (const NoConvergence&) {
    return "NoConvergence";
  } catch (const InfeasibleMoments&) {
    return "InfeasibleMoments";
  } catch (const DegeneratePrefix&) {
    return "DegeneratePrefix";
  } catch (const Degenerate&) {
    return "Degenerate";
  } catch (const WeightSumError&) {
    return "WeightSumError";
  } catch (const DomainError&) {
    return "DomainError";
  } catch (const SchemaMismatch&) {
    return "SchemaMismatch";
  } catch (const Error&) {
    return "Error";
  } catch (const std::exception&) {
    return "Exception";
  }
}

// ---------------------------------------------------------------- subjects

/// One generated input: its spec, class label and moments.
struct Subject {
  GeneratorSpec spec;
  std::string cls;
  MomentSequence moments;
};

inline std::string class_label(const GeneratorSpec& spec) {
  if (std::holds_alternative<DecaySpec>(spec)) return std::string(decay_class_name(std::get<DecaySpec>(spec).cls));
  if (std::holds_alternative<BetaMixtureSpec>(spec)) return "beta-mixture";
  return "canonical";
}

/// m_{js} for specs that have closed-form imaginary moments.
inline std::optional<ImagMomentFn> imaginary_moments(const GeneratorSpec& spec) {
  if (const auto* d = std::get_if<DecaySpec>(&spec)) {
    return ImagMomentFn([d = *d](double s) { return cm_moment(d, std::complex<double>(0.0, s)); });
  }
  if (const auto* b = std::get_if<BetaMixtureSpec>(&spec)) {
    return ImagMomentFn([b = *b](double s) { return beta_mixture_moment(b, std::complex<double>(0.0, s)); });
  }
  return std::nullopt;
}

inline std::optional<AnalyticCdf> exact_cdf(const GeneratorSpec& spec) {
  if (const auto* b = std::get_if<BetaMixtureSpec>(&spec)) {
    return AnalyticCdf([b = *b](double x) { return beta_mixture_cdf(b, x); });
  }
  return std::nullopt;
}

/// Working digits that let every linear method run at order n on moments
/// of this spec.
inline int subject_digits(const GeneratorSpec& spec, int n) {
  int d = std::max({working_digits(), required_digits(MatrixKind::BM, std::max(1, n)),
                    required_digits(MatrixKind::FL, std::max(1, n - 1))});
  if (const auto* c = std::get_if<DecaySpec>(&spec)) d = std::max(d, required_moment_digits(*c, n));
  return d;
}

/// Moments m_0..m_n of spec at the current working precision; canonical
/// specs draw from rng.
inline MomentSequence subject_moments(const GeneratorSpec& spec, int n, Rng& rng) {
  if (const auto* d = std::get_if<DecaySpec>(&spec)) return cm_moments(*d, n);
  if (const auto* b = std::get_if<BetaMixtureSpec>(&spec)) return beta_mixture_moments(*b, n);
  const auto& c = std::get<CanonicalSpec>(spec);
  const int order = std::max(c.order, n);
  if (c.prefix.empty()) return generate_canonical(order, rng).prefix(n);
  std::vector<XReal> p;
  for (const auto& s : c.prefix) p.push_back(XReal::parse(s));
  return extend_canonical(MomentSequence(std::move(p)), order, rng).prefix(n);
}

namespace detail {

inline std::uint64_t stream_id(int group, int trial) {
  return (static_cast<std::uint64_t>(group) << 32) | static_cast<std::uint32_t>(trial);
}

inline int max_order(const std::vector<int>& orders) {
  return orders.empty() ? 1 : *std::max_element(orders.begin(), orders.end());
}

// A row plus the reference it was measured against, before grouping.
struct LabeledRow {
  CsvRow row;
  std::string reference;
};

inline void group_reports(const std::vector<LabeledRow>& labeled, ExperimentResult& out) {
  std::map<std::tuple<std::string, std::string, int>, std::size_t> index;
  for (const auto& lr : labeled) {
    const auto& r = lr.row;
    out.rows.push_back(r);
    const auto key = std::make_tuple(r.cls, r.method, r.n);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.reports.size()).first;
      MethodReport rep;
      rep.experiment = r.experiment;
      rep.cls = r.cls;
      rep.method = r.method;
      rep.n = r.n;
      rep.reference = lr.reference;
      out.reports.push_back(std::move(rep));
    }
    out.reports[it->second].trials.push_back({r.trial, r.total_distance, r.max_distance, r.wall_ms, r.status});
  }
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_summary(const std::vector<MethodReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    int ok = 0;
    for (const auto& t : r.trials) ok += t.status == "ok";
    out.push_back({{"class", r.cls},
                   {"method", r.method},
                   {"n", r.n},
                   {"reference", r.reference},
                   {"trials", r.trials.size()},
                   {"ok", ok},
                   {"mean_total", number_or_null(r.mean_total())},
                   {"median_total", number_or_null(r.median_total())},
                   {"mean_max", number_or_null(r.mean_max())},
                   {"median_max", number_or_null(r.median_max())}});
  }
  return out;
}

// The reference cdf of one subject under the configured policy.
struct Reference {
  std::string label = "none";
  std::optional<AnalyticCdf> exact;
  std::optional<PolishedCdf> polished;
  std::string failure;  // status of a failed reference computation
};

inline Reference make_reference(const GeneratorSpec& spec, const ExperimentConfig& cfg) {
  Reference ref;
  const auto exact = exact_cdf(spec);
  if (exact && cfg.reference == ReferencePolicy::ExactWhenAvailable) {
    ref.label = "exact";
    ref.exact = exact;
    return ref;
  }
  const auto fn = imaginary_moments(spec);
  if (!fn) return ref;
  ref.label = "gp-dynamic";
  try {
    ref.polished = polish(gp_dynamic(*fn, uniform_grid(150), cfg.gp).samples);
  } catch (...) {
    ref.failure = "reference:" + status_of(std::current_exception());
  }
  return ref;
}

inline MethodOutput run_method(Method method, const MomentSequence& m, const std::optional<ImagMomentFn>& fn,
                               const ExperimentConfig& cfg) {
  switch (method) {
    case Method::BM:
      return bm_approx(m);
    case Method::FL:
      return fl_approx(m);
    case Method::FC:
      return fc_approx(m);
    case Method::ME:
      return me_approx(m);
    case Method::FJ:
      return fj_approx(m);
    case Method::CM: {
      CmBandOptions opt;
      opt.lp_tol = cfg.lp_tol;
      return cm_approx(m, opt);
    }
    case Method::GP:
      if (!fn) throw DomainError("gp: the generator has no imaginary moments");
      return gp_approx(*fn, cfg.gp);
  }
  throw DomainError("unknown method");
}

// Fills distances and status of row from one method run.
inline void measure(CsvRow& row, const Reference& ref, const MethodOutput& out) {
  const auto p = polish(out.samples);
  if (ref.exact) {
    row.total_distance = l1_distance(p, *ref.exact);
    row.max_distance = linf_distance(p, *ref.exact);
  } else if (ref.polished) {
    row.total_distance = l1_distance(p, *ref.polished);
    row.max_distance = linf_distance(p, *ref.polished);
  } else {
    row.status = ref.failure.empty() ? "no-reference" : ref.failure;
  }
}

// Rows of one comparison trial: every method at every order it supports.
inline std::vector<LabeledRow> comparison_trial(const std::string& experiment, const GeneratorSpec& spec, int trial,
                                                Rng& rng, const ExperimentConfig& cfg) {
  const int nmax = max_order(cfg.orders);
  const ScopedDigits scope(subject_digits(spec, nmax));
  const std::string cls = class_label(spec);
  std::vector<LabeledRow> rows;
  MomentSequence m;
  std::string moment_failure;
  try {
    m = subject_moments(spec, nmax, rng);
  } catch (...) {
    moment_failure = "moments:" + status_of(std::current_exception());
  }
  const auto fn = imaginary_moments(spec);
  const Reference ref = make_reference(spec, cfg);
  for (Method method : cfg.methods) {
    std::vector<int> orders;
    if (method == Method::GP) {
      orders.push_back(150);
    } else {
      for (int n : cfg.orders) {
        if (n <= method_order_cap(method)) orders.push_back(n);
      }
    }
    for (int n : orders) {
      CsvRow row;
      row.experiment = experiment;
      row.cls = cls;
      row.method = method_name(method);
      row.n = n;
      row.trial = trial;
      if (!moment_failure.empty()) {
        row.status = moment_failure;
      } else {
        try {
          const auto out = run_method(method, method == Method::GP ? m : m.prefix(n), fn, cfg);
          measure(row, ref, out);
        } catch (...) {
          row.status = status_of(std::current_exception());
        }
      }
      rows.push_back({std::move(row), ref.label});
    }
  }
  return rows;
}

inline const GeneratorSpec& fixed_generator(const ExperimentConfig& cfg, int trial) {
  return cfg.generators[static_cast<std::size_t>(trial) % cfg.generators.size()];
}

inline std::vector<LabeledRow> flatten(std::vector<std::vector<LabeledRow>> parts) {
  std::vector<LabeledRow> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- suites

/// Each decay class (or each fixed generator) x trial: generate, truncate
/// to every order, run every method, polish and measure against the
/// reference.
inline ExperimentResult run_decay_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::DecaySweep);
  const bool fixed = !cfg.generators.empty();
  const int groups = fixed ? 1 : static_cast<int>(cfg.classes.size());
  auto parts = parallel_map(groups * cfg.trials, cfg.threads, [&](int task) {
    const int group = task / cfg.trials;
    const int trial = task % cfg.trials;
    Rng rng(cfg.seed, detail::stream_id(group, trial));
    const GeneratorSpec spec =
        fixed ? detail::fixed_generator(cfg, trial) : GeneratorSpec(random_decay_spec(cfg.classes[group], rng));
    return detail::comparison_trial(name, spec, trial, rng, cfg);
  });
  ExperimentResult out;
  out.experiment = name;
  detail::group_reports(detail::flatten(std::move(parts)), out);
  out.summary = {{"config", config_to_json(cfg)}, {"reports", detail::report_summary(out.reports)}};
  return out;
}

/// One comparison per trial on the fixed generators, or on random beta
/// mixtures when none are given.
inline ExperimentResult run_single(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::SingleRun);
  auto parts = parallel_map(cfg.trials, cfg.threads, [&](int trial) {
    Rng rng(cfg.seed, detail::stream_id(0, trial));
    const GeneratorSpec spec =
        cfg.generators.empty() ? GeneratorSpec(random_beta_mixture(rng)) : detail::fixed_generator(cfg, trial);
    return detail::comparison_trial(name, spec, trial, rng, cfg);
  });
  ExperimentResult out;
  out.experiment = name;
  detail::group_reports(detail::flatten(std::move(parts)), out);
  out.summary = {{"config", config_to_json(cfg)}, {"reports", detail::report_summary(out.reports)}};
  return out;
}

struct GpCell {
  double ds;
  double upsilon;
};

/// The parameter grid: ds in {10, 1, 0.1, 0.01} at upsilon 1000, then
/// upsilon in {10, 100, 1000} at ds 0.1.
inline std::vector<GpCell> gp_sensitivity_cells() {
  return {{10.0, 1000.0}, {1.0, 1000.0}, {0.1, 1000.0}, {0.01, 1000.0}, {0.1, 10.0}, {0.1, 100.0}, {0.1, 1000.0}};
}

inline std::string gp_cell_label(const GpCell& c) {
  return "GP ds=" + format_number(c.ds) + " upsilon=" + format_number(c.upsilon);
}

/// Fixed-parameter GP on U_150 for every cell, measured against the exact
/// beta-mixture cdf.
inline ExperimentResult run_gp_sensitivity(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::GpSensitivity);
  for (const auto& g : cfg.generators) {
    if (!std::holds_alternative<BetaMixtureSpec>(g)) throw DomainError("gp-sensitivity needs beta-mixture generators");
  }
  const auto cells = gp_sensitivity_cells();
  auto parts = parallel_map(cfg.trials, cfg.threads, [&](int trial) {
    Rng rng(cfg.seed, detail::stream_id(0, trial));
    const GeneratorSpec spec =
        cfg.generators.empty() ? GeneratorSpec(random_beta_mixture(rng)) : detail::fixed_generator(cfg, trial);
    const auto fn = *imaginary_moments(spec);
    const auto exact = *exact_cdf(spec);
    const auto grid = uniform_grid(150);
    std::vector<detail::LabeledRow> rows;
    for (const auto& cell : cells) {
      CsvRow row;
      row.experiment = name;
      row.cls = class_label(spec);
      row.method = gp_cell_label(cell);
      row.n = 150;
      row.trial = trial;
      try {
        const GpTable table(fn, cell.ds, cell.upsilon, cfg.gp.max_points);
        const auto p = polish(detail::sample_on(grid, [&](double x) { return table.cdf(x); }));
        row.total_distance = l1_distance(p, exact);
        row.max_distance = linf_distance(p, exact);
      } catch (...) {
        row.status = status_of(std::current_exception());
      }
      rows.push_back({std::move(row), "exact"});
    }
    return rows;
  });
  ExperimentResult out;
  out.experiment = name;
  detail::group_reports(detail::flatten(std::move(parts)), out);
  out.summary = {{"config", config_to_json(cfg)}, {"reports", detail::report_summary(out.reports)}};
  return out;
}

inline bool has_matrix_form(Method m) { return m == Method::BM || m == Method::FL || m == Method::FC; }

/// Transform wall time per method and order. BM, FL and FC run twice: the
/// "linear" mode through a transform matrix that is cached before timing,
/// and the "original" mode through the defining sums. Trials run one at a
/// time so timings do not compete for cores.
inline ExperimentResult run_timing(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::Timing);
  std::vector<detail::LabeledRow> rows;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng rng(cfg.seed, detail::stream_id(0, trial));
    const GeneratorSpec spec =
        cfg.generators.empty() ? GeneratorSpec(random_beta_mixture(rng)) : detail::fixed_generator(cfg, trial);
    const int nmax = detail::max_order(cfg.orders);
    const ScopedDigits scope(subject_digits(spec, nmax));
    const auto m = subject_moments(spec, nmax, rng);
    const auto fn = imaginary_moments(spec);
    for (Method method : cfg.methods) {
      for (int n : cfg.orders) {
        if (n > method_order_cap(method)) continue;
        const auto mn = m.prefix(n);
        auto add = [&](const std::string& label, auto&& run) {
          CsvRow row;
          row.experiment = name;
          row.cls = class_label(spec);
          row.method = label;
          row.n = method == Method::GP ? 150 : n;
          row.trial = trial;
          try {
            row.wall_ms = run().transform_ms;
          } catch (...) {
            row.status = status_of(std::current_exception());
          }
          rows.push_back({std::move(row), "none"});
        };
        if (has_matrix_form(method)) {
          auto linear = [&]() {
            if (method == Method::BM) return bm_approx(mn, LinearMode::Matrix);
            if (method == Method::FL) return fl_approx(mn, LinearMode::Matrix);
            return fc_approx(mn, LinearMode::Matrix);
          };
          auto original = [&]() {
            if (method == Method::BM) return bm_approx(mn, LinearMode::Direct);
            if (method == Method::FL) return fl_approx(mn, LinearMode::Direct);
            return fc_approx(mn, LinearMode::Direct);
          };
          try {
            linear();  // fills the matrix cache
          } catch (...) {
          }
          add(method_name(method) + "-linear", linear);
          add(method_name(method) + "-original", original);
        } else {
          if (method == Method::GP && n != cfg.orders.front()) continue;
          add(method_name(method), [&]() { return detail::run_method(method, mn, fn, cfg); });
        }
      }
    }
  }
  ExperimentResult out;
  out.experiment = name;
  detail::group_reports(rows, out);
  json ratios = json::object();
  for (const auto& r : out.reports) {
    const auto pos = r.method.find("-linear");
    if (pos == std::string::npos) continue;
    const auto* orig = out.find(r.cls, r.method.substr(0, pos) + "-original", r.n);
    if (!orig) continue;
    ratios[r.method.substr(0, pos)][std::to_string(r.n)] = detail::number_or_null(orig->mean_wall_ms() / r.mean_wall_ms());
  }
  json times = json::array();
  for (const auto& r : out.reports) {
    times.push_back({{"method", r.method}, {"n", r.n}, {"mean_wall_ms", detail::number_or_null(r.mean_wall_ms())}});
  }
  out.summary = {{"config", config_to_json(cfg)}, {"times", times}, {"original_over_linear", ratios}};
  return out;
}

/// Beta(alpha, beta) matched to the sample mean and variance.
struct BetaFit {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta;
};

inline BetaFit fit_beta(const std::vector<double>& v) {
  BetaFit f;
  if (v.empty()) return f;
  f.mean = MethodReport::mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - f.mean) * (x - f.mean);
  f.variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  if (f.variance > 0.0 && f.mean > 0.0 && f.mean < 1.0) {
    const double k = f.mean * (1.0 - f.mean) / f.variance - 1.0;
    if (k > 0.0) {
      f.alpha = f.mean * k;
      f.beta = (1.0 - f.mean) * k;
    }
  }
  return f;
}

/// CM bounds at one point for prefixes of order prefix_order and their
/// random extensions to extended_order. Rows carry the normalized sample
/// (F8 - inf3) / (sup3 - inf3) in total_distance and the raw value in
/// max_distance; methods are "inf", "sup" and "average".
inline ExperimentResult run_cm_histogram(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string name = experiment_name(Experiment::CmHistogram);
  const std::string cls = cfg.fixed_prefix ? "fixed-prefix" : "random-prefix";
  const int outer = cfg.fixed_prefix ? 1 : cfg.outer_trials;
  const int inner = cfg.inner_trials;
  const std::vector<double> point{cfg.histogram_point};
  CmBandOptions opt;
  opt.lp_tol = cfg.lp_tol;
  auto band_at = [&](const MomentSequence& m) {
    try {
      return cm_band(m, point, opt);
    } catch (const NoConvergence& e) {
      return e.band();
    }
  };
  auto parts = parallel_map(outer * inner, cfg.threads, [&](int task) {
    const int o = task / inner;
    const int i = task % inner;
    MomentSequence prefix;
    if (cfg.fixed_prefix) {
      std::vector<XReal> p{XReal(1)};
      for (int k = 1; k <= cfg.prefix_order; ++k) p.push_back(XReal(1) / XReal(k + 1));
      prefix = MomentSequence(std::move(p));
    } else {
      Rng prng(cfg.seed, detail::stream_id(0, o));
      prefix = generate_canonical(cfg.prefix_order, prng);
    }
    Rng rng(cfg.seed, detail::stream_id(1 + o, i));
    std::vector<detail::LabeledRow> rows;
    auto row_for = [&](const std::string& method) {
      CsvRow row;
      row.experiment = name;
      row.cls = cls;
      row.method = method;
      row.n = cfg.extended_order;
      row.trial = task;
      return row;
    };
    CsvRow r_inf = row_for("inf");
    CsvRow r_sup = row_for("sup");
    CsvRow r_avg = row_for("average");
    try {
      const auto b3 = band_at(prefix);
      const auto m = extend_canonical(prefix, cfg.extended_order, rng);
      const auto b8 = band_at(m);
      const double lo = b3.inf[0];
      const double width = b3.sup[0] - lo;
      const double inf8 = b8.inf[0];
      const double sup8 = b8.sup[0];
      const double avg8 = 0.5 * (inf8 + sup8);
      r_inf.max_distance = inf8;
      r_sup.max_distance = sup8;
      r_avg.max_distance = avg8;
      if (width > 1e-12) {
        auto norm = [&](double v) { return std::clamp((v - lo) / width, 0.0, 1.0); };
        r_inf.total_distance = norm(inf8);
        r_sup.total_distance = norm(sup8);
        r_avg.total_distance = norm(avg8);
      } else {
        r_inf.status = r_sup.status = r_avg.status = "degenerate";
      }
    } catch (...) {
      r_inf.status = r_sup.status = r_avg.status = status_of(std::current_exception());
    }
    rows.push_back({std::move(r_inf), "none"});
    rows.push_back({std::move(r_sup), "none"});
    rows.push_back({std::move(r_avg), "none"});
    return rows;
  });
  ExperimentResult out;
  out.experiment = name;
  detail::group_reports(detail::flatten(std::move(parts)), out);
  json fits = json::object();
  for (const auto& r : out.reports) {
    const auto f = fit_beta(r.totals());
    fits[r.method] = {{"mean", f.mean},
                      {"variance", f.variance},
                      {"alpha", f.alpha ? json(*f.alpha) : json(nullptr)},
                      {"beta", f.beta ? json(*f.beta) : json(nullptr)},
                      {"samples", r.totals().size()}};
  }
  out.summary = {{"config", config_to_json(cfg)}, {"beta_fit", fits}};
  return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::DecaySweep:
      return run_decay_sweep(cfg);
    case Experiment::GpSensitivity:
      return run_gp_sensitivity(cfg);
    case Experiment::Timing:
      return run_timing(cfg);
    case Experiment::CmHistogram:
      return run_cm_histogram(cfg);
    case Experiment::SingleRun:
      return run_single(cfg);
  }
  throw DomainError("unknown experiment");
}

}  // namespace hmt
