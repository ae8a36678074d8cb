#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hmt/harness.hpp"

using namespace hmt;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int precision_digits = 0;  // 0: chosen per command
  std::string cache_dir;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SchemaMismatch(path + ": " + e.what());
  }
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
}

int digits_or(const Globals& g, int automatic) { return g.precision_digits > 0 ? g.precision_digits : automatic; }

// A moment file is either a bare array or an object with "moments" and,
// optionally, the "spec" it came from.
struct MomentInput {
  json moments;
  std::optional<GeneratorSpec> spec;
};

MomentInput read_moments(const std::string& path) {
  const json j = read_json(path);
  MomentInput in;
  if (j.is_array()) {
    in.moments = j;
  } else if (j.is_object() && j.contains("moments")) {
    in.moments = j.at("moments");
    if (j.contains("spec")) in.spec = spec_from_json(j.at("spec"));
  } else {
    throw SchemaMismatch(path + ": expected a moment array or an object with \"moments\"");
  }
  if (!in.moments.is_array() || in.moments.size() < 2) throw SchemaMismatch(path + ": need at least m_0 and m_1");
  return in;
}

GeneratorSpec spec_from_options(const std::string& type, const std::string& cls, int order, Rng& rng) {
  if (type == "canonical") return CanonicalSpec{order, {}};
  if (type == "cm") return random_decay_spec(parse_decay_class(cls), rng);
  if (type == "beta_mixture") return random_beta_mixture(rng);
  throw DomainError("unknown generator type: " + type);
}

int cmd_gen(const Globals& g, const std::string& type, const std::string& cls, int order, const std::string& spec_file) {
  Rng rng(g.seed);
  const GeneratorSpec spec = spec_file.empty() ? spec_from_options(type, cls, order, rng) : spec_from_json(read_json(spec_file));
  const int digits = digits_or(g, subject_digits(spec, order));
  const ScopedDigits scope(digits);
  const auto m = subject_moments(spec, order, rng);
  const json out{{"spec", spec_to_json(spec)}, {"digits", digits}, {"moments", moments_to_json(m)}};
  emit(g, out.dump(2) + "\n");
  return 0;
}

int cmd_transform(const Globals& g, const std::string& method_name_arg, const std::string& file, int resolution,
                  bool as_json) {
  const Method method = parse_method(method_name_arg);
  const auto in = read_moments(file);
  const int n = static_cast<int>(in.moments.size()) - 1;
  int automatic = std::max({working_digits(), required_digits(MatrixKind::BM, n), required_digits(MatrixKind::FL, n)});
  const ScopedDigits scope(digits_or(g, automatic));
  const auto m = moments_from_json(in.moments);
  std::optional<ImagMomentFn> fn;
  if (in.spec) fn = imaginary_moments(*in.spec);
  ExperimentConfig cfg;
  const auto out = detail::run_method(method, m, fn, cfg);
  const auto p = polish(out.samples);
  if (as_json) {
    json j{{"method", method_name(out.method)},
           {"n", out.n},
           {"grid", out.samples.grid},
           {"raw", out.samples.values},
           {"polished", p.values()},
           {"diagnostics", out.diagnostics}};
    emit(g, j.dump(2) + "\n");
  } else {
    emit(g, p.to_csv(resolution));
  }
  return 0;
}

int cmd_band(const Globals& g, const std::string& file, int grid, double lp_tol, int support) {
  const auto in = read_moments(file);
  const ScopedDigits scope(digits_or(g, working_digits()));
  const auto m = moments_from_json(in.moments);
  CmBandOptions opt;
  opt.lp_tol = lp_tol;
  opt.support_grid_size = support;
  try {
    emit(g, band_to_csv(cm_band(m, uniform_grid(grid), opt)));
  } catch (const NoConvergence& e) {
    emit(g, band_to_csv(e.band()));
    std::cerr << "warning: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_bench(const Globals& g, const std::string& config_file, const std::string& experiment, int trials,
              const std::vector<int>& orders, const std::vector<std::string>& methods,
              const std::vector<std::string>& classes, int threads) {
  ExperimentConfig cfg;
  if (!config_file.empty()) {
    cfg = config_from_json(read_json(config_file));
  } else {
    cfg.experiment = parse_experiment(experiment);
  }
  cfg.seed = g.seed;
  if (trials > 0) cfg.trials = trials;
  if (!orders.empty()) cfg.orders = orders;
  if (!methods.empty()) {
    cfg.methods.clear();
    for (const auto& s : methods) cfg.methods.push_back(parse_method(s));
  }
  if (!classes.empty()) {
    cfg.classes.clear();
    for (const auto& s : classes) cfg.classes.push_back(parse_decay_class(s));
  }
  if (threads > 0) cfg.threads = threads;
  if (!g.out.empty()) cfg.output_dir = g.out;
  cfg.validate();
  const auto result = run_experiment(cfg);
  if (cfg.output_dir.empty()) {
    std::cout << result.csv();
  } else {
    write_outputs(result, cfg.output_dir);
  }
  return 0;
}

int cmd_digits(const Globals& g, const std::string& method, int n, const std::string& spec_file) {
  json out{{"n", n}};
  if (!method.empty()) {
    const Method m = parse_method(method);
    MatrixKind kind = MatrixKind::FL;
    if (m == Method::BM) {
      kind = MatrixKind::BM;
    } else if (m != Method::FL && m != Method::FC) {
      throw DomainError("digits: only BM, FL and FC have a precision rule");
    }
    out["method"] = method_name(m);
    out["required_digits"] = required_digits(kind, m == Method::BM ? n : std::max(1, n - 1));
  }
  if (!spec_file.empty()) {
    const auto spec = spec_from_json(read_json(spec_file));
    const auto* d = std::get_if<DecaySpec>(&spec);
    if (!d) throw DomainError("digits: moment precision applies to c.m. specs only");
    out["moment_digits"] = required_moment_digits(*d, n);
  }
  emit(g, out.dump(2) + "\n");
  return 0;
}

int cmd_plot(const Globals& g, const std::string& csv_file, const std::string& kind) {
  emit(g, emit_plot(read_file(csv_file), parse_plot_kind(kind)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hausdorff moment transforms"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--precision-digits", g.precision_digits, "Working precision in decimal digits (0: automatic)");
  app.add_option("--cache-dir", g.cache_dir, "Directory for cached transform matrices");
  app.add_option("--out", g.out, "Output file (bench: output directory)");

  std::string gen_type = "beta_mixture";
  std::string gen_class = "power";
  int gen_order = 10;
  std::string gen_spec;
  auto* gen = app.add_subcommand("gen", "Emit a moment sequence as JSON");
  gen->add_option("--type", gen_type, "canonical, cm or beta_mixture")->check(
      CLI::IsMember({"canonical", "cm", "beta_mixture"}));
  gen->add_option("--class", gen_class, "Decay class for --type cm");
  gen->add_option("--order", gen_order, "Highest moment index")->check(CLI::PositiveNumber);
  gen->add_option("--spec", gen_spec, "Generator spec JSON file");

  std::string tr_method;
  std::string tr_file;
  int tr_resolution = 100;
  bool tr_json = false;
  auto* transform = app.add_subcommand("transform", "Run one method on a moment sequence");
  transform->add_option("--method", tr_method, "BM, ME, GP, FJ, FL, FC or CM")->required();
  transform->add_option("--moments", tr_file, "Moment JSON file")->required()->check(CLI::ExistingFile);
  transform->add_option("--resolution", tr_resolution, "Intervals of the CSV output")->check(CLI::PositiveNumber);
  transform->add_flag("--json", tr_json, "Raw samples, polished values and diagnostics as JSON");

  std::string band_file;
  int band_grid = 50;
  double band_tol = 1e-6;
  int band_support = 2001;
  auto* band = app.add_subcommand("band", "Chebyshev-Markov band as CSV");
  band->add_option("--moments", band_file, "Moment JSON file")->required()->check(CLI::ExistingFile);
  band->add_option("--grid", band_grid, "Intervals of the uniform evaluation grid")->check(CLI::PositiveNumber);
  band->add_option("--lp-tol", band_tol, "Envelope tolerance");
  band->add_option("--support", band_support, "Initial support grid size");

  std::string bench_config;
  std::string bench_experiment = "single-run";
  int bench_trials = 0;
  std::vector<int> bench_orders;
  std::vector<std::string> bench_methods;
  std::vector<std::string> bench_classes;
  int bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Run an experiment suite");
  bench->add_option("--config", bench_config, "Experiment config JSON file")->check(CLI::ExistingFile);
  bench->add_option("--experiment", bench_experiment,
                    "decay-sweep, gp-sensitivity, timing, cm-histogram or single-run");
  bench->add_option("--trials", bench_trials, "Trials (overrides the config)");
  bench->add_option("--orders", bench_orders, "Orders n (overrides the config)");
  bench->add_option("--methods", bench_methods, "Methods (overrides the config)");
  bench->add_option("--classes", bench_classes, "Decay classes (overrides the config)");
  bench->add_option("--threads", bench_threads, "Worker threads");

  std::string dg_method;
  int dg_n = 10;
  std::string dg_spec;
  auto* digits = app.add_subcommand("digits", "Precision estimates");
  digits->add_option("--method", dg_method, "BM, FL or FC");
  digits->add_option("--n", dg_n, "Order")->check(CLI::PositiveNumber);
  digits->add_option("--spec", dg_spec, "C.m. generator spec JSON file")->check(CLI::ExistingFile);

  std::string plot_csv;
  std::string plot_kind = "distance";
  auto* plot = app.add_subcommand("plot", "SVG from a result CSV");
  plot->add_option("--csv", plot_csv, "Result CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plot_kind, "distance or histogram");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.cache_dir.empty()) default_matrix_cache().set_directory(g.cache_dir);
    const ScopedDigits scope(digits_or(g, working_digits()));
    if (*gen) return cmd_gen(g, gen_type, gen_class, gen_order, gen_spec);
    if (*transform) return cmd_transform(g, tr_method, tr_file, tr_resolution, tr_json);
    if (*band) return cmd_band(g, band_file, band_grid, band_tol, band_support);
    if (*bench) {
      return cmd_bench(g, bench_config, bench_experiment, bench_trials, bench_orders, bench_methods, bench_classes,
                       bench_threads);
    }
    if (*digits) return cmd_digits(g, dg_method, dg_n, dg_spec);
    if (*plot) return cmd_plot(g, plot_csv, plot_kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << status_of(std::current_exception()) << ": " << e.what() << "\n";
    return 2;
  }
  return 1;
}
