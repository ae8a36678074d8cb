#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmt/harness.hpp"

using namespace hmt;

namespace {

ExperimentConfig small_sweep() {
  ExperimentConfig c;
  c.experiment = Experiment::DecaySweep;
  c.classes = {DecayClass::Power};
  c.methods = {Method::BM, Method::FL};
  c.orders = {6, 10};
  c.trials = 2;
  c.seed = 7;
  return c;
}

BetaMixtureSpec uniform_spec() { return {{1.0}, {1.0}, {1.0}}; }

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parallel_map keeps task order", "[harness]") {
  for (int threads : {1, 2, 5}) {
    const auto out = parallel_map(37, threads, [](int i) { return i * i; });
    REQUIRE(out.size() == 37);
    for (int i = 0; i < 37; ++i) CHECK(out[i] == i * i);
  }
  CHECK(parallel_map(0, 4, [](int i) { return i; }).empty());
}

TEST_CASE("parallel_map rethrows and passes on the working precision", "[harness]") {
  CHECK_THROWS_AS(parallel_map(8, 3,
                               [](int i) {
                                 if (i == 5) throw NotConverged("task", 1.0);
                                 return i;
                               }),
                  NotConverged);
  const ScopedDigits scope(90);
  const auto digits = parallel_map(6, 3, [](int) { return working_digits(); });
  for (int d : digits) CHECK(d == 90);
}

TEST_CASE("CSV round trip and schema errors", "[harness]") {
  CsvRow r;
  r.experiment = "single-run";
  r.cls = "beta-mixture";
  r.method = "FL";
  r.n = 10;
  r.trial = 3;
  r.total_distance = 0.125;
  r.max_distance = 0.5;
  CsvRow failed = r;
  failed.total_distance.reset();
  failed.max_distance.reset();
  failed.status = "NotConverged";
  const std::string text = to_csv({r, failed});
  CHECK(text ==
        "experiment,class,method,n,trial,total_distance,max_distance,wall_ms,status\n"
        "single-run,beta-mixture,FL,10,3,0.125,0.5,,ok\n"
        "single-run,beta-mixture,FL,10,3,,,,NotConverged\n");
  const auto back = parse_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(*back[0].total_distance == 0.125);
  CHECK_FALSE(back[1].total_distance.has_value());
  CHECK(back[1].status == "NotConverged");
  CHECK(to_csv(back) == text);
  CHECK_THROWS_AS(parse_csv(""), SchemaMismatch);
  CHECK_THROWS_AS(parse_csv("a,b,c\n1,2,3\n"), SchemaMismatch);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nx,y\n"), SchemaMismatch);
}

TEST_CASE("config JSON round trip", "[harness]") {
  auto c = small_sweep();
  c.generators.push_back(uniform_spec());
  c.reference = ReferencePolicy::GpDynamic;
  c.fixed_prefix = true;
  const auto j = config_to_json(c);
  const auto back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.experiment == Experiment::DecaySweep);
  CHECK(back.reference == ReferencePolicy::GpDynamic);
  CHECK(back.orders == std::vector<int>{6, 10});

  const auto minimal = config_from_json(json{{"experiment", "timing"}});
  CHECK(minimal.trials == 1);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "nope"}}), SchemaMismatch);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "timing"}, {"trials", 0}}), DomainError);
  CHECK_THROWS_AS(config_from_json(json{{"experiment", "single-run"}, {"methods", {"XX"}}}), SchemaMismatch);
}

TEST_CASE("decay sweep is deterministic", "[harness]") {
  auto c = small_sweep();
  c.trials = 1;
  c.threads = 1;
  const auto a = run_decay_sweep(c).csv();
  const auto b = run_decay_sweep(c).csv();
  CHECK(a == b);
  c.trials = 3;
  const auto serial = run_decay_sweep(c).csv();
  c.threads = 3;
  CHECK(run_decay_sweep(c).csv() == serial);
  CHECK(count(serial, "\n") == 1 + 3 * 2 * 2);
  c.seed = 8;
  CHECK(run_decay_sweep(c).csv() != serial);
}

TEST_CASE("reference policy", "[harness]") {
  auto c = small_sweep();
  c.generators = {uniform_spec()};
  c.trials = 1;
  auto res = run_decay_sweep(c);
  for (const auto& r : res.reports) {
    CHECK(r.cls == "beta-mixture");
    CHECK(r.reference == "exact");
  }
  // the uniform cdf is reproduced by both methods
  for (const auto& row : res.rows) CHECK(*row.total_distance <= 1e-10);

  c.generators.clear();
  res = run_decay_sweep(c);
  for (const auto& r : res.reports) CHECK(r.reference == "gp-dynamic");

  c.generators = {uniform_spec()};
  c.reference = ReferencePolicy::GpDynamic;
  res = run_decay_sweep(c);
  for (const auto& r : res.reports) CHECK(r.reference == "gp-dynamic");

  c.generators = {CanonicalSpec{10, {}}};
  c.reference = ReferencePolicy::ExactWhenAvailable;
  res = run_single(c);
  for (const auto& r : res.reports) CHECK(r.reference == "none");
  for (const auto& row : res.rows) CHECK(row.status == "no-reference");
}

TEST_CASE("method failures are recorded, not thrown", "[harness]") {
  ExperimentConfig c;
  c.experiment = Experiment::SingleRun;
  DecaySpec spec;
  spec.cls = DecayClass::Power;
  spec.s = 9.0;
  spec.components = {{9.0, 0.05, 1.0, 1.0}};
  c.generators = {spec};
  c.methods = {Method::ME, Method::GP, Method::BM};
  c.orders = {40};
  c.gp.max_points = 100;
  const auto res = run_single(c);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].method == "ME");
  CHECK(res.rows[0].status != "ok");
  CHECK_FALSE(res.rows[0].total_distance.has_value());
  CHECK(res.rows[1].status == "MemoryGuardError");
  CHECK(res.rows[2].status == "reference:MemoryGuardError");
}

TEST_CASE("distances fall with n on power-law sequences", "[harness]") {
  auto c = small_sweep();
  c.methods = {Method::BM, Method::FL, Method::FC};
  c.orders = {10, 40};
  c.trials = 3;
  const auto res = run_decay_sweep(c);
  for (const std::string m : {"BM", "FL", "FC"}) {
    const auto* lo = res.find("power", m, 10);
    const auto* hi = res.find("power", m, 40);
    REQUIRE(lo);
    REQUIRE(hi);
    CHECK(hi->median_total() < lo->median_total());
  }
}

TEST_CASE("GP sensitivity grid on the uniform distribution", "[harness]") {
  ExperimentConfig c;
  c.experiment = Experiment::GpSensitivity;
  c.generators = {uniform_spec()};
  const auto res = run_gp_sensitivity(c);
  REQUIRE(res.rows.size() == 7);
  const auto cells = gp_sensitivity_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(res.rows[i].method == gp_cell_label(cells[i]));
  const double fine = *res.rows[2].total_distance;
  const double coarse = *res.rows[0].total_distance;
  CHECK(res.rows[2].method == "GP ds=0.1 upsilon=1000");
  CHECK(fine <= 1e-3);
  CHECK(coarse >= fine);
  for (const auto& r : res.reports) CHECK(r.reference == "exact");

  c.generators = {CanonicalSpec{}};
  CHECK_THROWS_AS(run_gp_sensitivity(c), DomainError);
}

TEST_CASE("timing suite", "[harness]") {
  ExperimentConfig c;
  c.experiment = Experiment::Timing;
  c.methods = {Method::FL, Method::BM, Method::CM};
  c.orders = {30, 50};
  c.trials = 2;
  const auto res = run_timing(c);
  for (const auto& row : res.rows) {
    CHECK(row.status == "ok");
    REQUIRE(row.wall_ms.has_value());
    CHECK(*row.wall_ms > 0.0);
  }
  const auto* linear = res.find("beta-mixture", "FL-linear", 50);
  const auto* original = res.find("beta-mixture", "FL-original", 50);
  REQUIRE(linear);
  REQUIRE(original);
  CHECK(linear->mean_wall_ms() < original->mean_wall_ms());
  const auto* cm = res.find("beta-mixture", "CM", 30);
  REQUIRE(cm);
  CHECK(res.find("beta-mixture", "CM", 50) == nullptr);
  for (const auto& r : res.reports) {
    if (r.n == 30 && r.method != "CM") CHECK(r.mean_wall_ms() < cm->mean_wall_ms());
  }
  CHECK(res.summary["original_over_linear"]["FL"]["50"].get<double>() > 1.0);
}

TEST_CASE("CM histogram samples", "[harness]") {
  ExperimentConfig c;
  c.experiment = Experiment::CmHistogram;
  c.outer_trials = 3;
  c.inner_trials = 4;
  auto res = run_cm_histogram(c);
  REQUIRE(res.rows.size() == 3 * 4 * 3);
  for (std::size_t i = 0; i < res.rows.size(); i += 3) {
    const auto& lo = res.rows[i];
    const auto& hi = res.rows[i + 1];
    const auto& avg = res.rows[i + 2];
    CHECK(lo.method == "inf");
    CHECK(hi.method == "sup");
    CHECK(avg.method == "average");
    if (lo.status != "ok") continue;
    for (const auto* r : {&lo, &hi, &avg}) {
      CHECK(*r->total_distance >= 0.0);
      CHECK(*r->total_distance <= 1.0);
    }
    CHECK(*avg.max_distance == Catch::Approx(0.5 * (*lo.max_distance + *hi.max_distance)).margin(1e-15));
  }

  c.fixed_prefix = true;
  c.inner_trials = 40;
  res = run_cm_histogram(c);
  const auto* avg = res.find("fixed-prefix", "average", 8);
  REQUIRE(avg);
  CHECK(avg->totals().size() >= 35);
  CHECK(avg->mean_total() > 0.4);
  CHECK(avg->mean_total() < 0.6);
  CHECK(res.summary["beta_fit"]["average"]["alpha"].is_number());
}

TEST_CASE("beta fit by moments", "[harness]") {
  const auto f = fit_beta({0.25, 0.5, 0.75});
  CHECK(f.mean == Catch::Approx(0.5));
  CHECK(f.variance == Catch::Approx(0.0625));
  // k = 0.25 / 0.0625 - 1 = 3
  CHECK(*f.alpha == Catch::Approx(1.5));
  CHECK(*f.beta == Catch::Approx(1.5));
  CHECK_FALSE(fit_beta({0.5, 0.5}).alpha.has_value());
}

TEST_CASE("emit_plot", "[harness]") {
  auto c = small_sweep();
  c.methods = {Method::BM, Method::FL, Method::FC};
  const auto csv = run_decay_sweep(c).csv();
  const auto svg = emit_plot(csv, PlotKind::Distance);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<polyline") == 3);
  CHECK(emit_plot(csv, PlotKind::Distance) == svg);
  CHECK_THROWS_AS(emit_plot("", PlotKind::Distance), SchemaMismatch);
  CHECK_THROWS_AS(emit_plot(std::string(kCsvHeader) + "\n", PlotKind::Histogram), SchemaMismatch);
  CHECK_THROWS_AS(emit_plot("x,y\n1,2\n", PlotKind::Distance), SchemaMismatch);
  CHECK_THROWS_AS(parse_plot_kind("pie"), SchemaMismatch);

  ExperimentConfig h;
  h.experiment = Experiment::CmHistogram;
  h.outer_trials = 2;
  h.inner_trials = 2;
  const auto hist = emit_plot(run_cm_histogram(h).csv(), PlotKind::Histogram);
  CHECK(count(hist, "<polyline") == 3);
}

TEST_CASE("write_outputs", "[harness]") {
  const auto dir = std::filesystem::temp_directory_path() / "hmt_harness_outputs";
  std::filesystem::remove_all(dir);
  auto c = small_sweep();
  c.trials = 1;
  const auto res = run_experiment(c);
  write_outputs(res, dir);
  CHECK(slurp(dir / "decay-sweep.csv") == res.csv());
  CHECK(json::parse(slurp(dir / "decay-sweep.json"))["config"]["experiment"] == "decay-sweep");
  CHECK(slurp(dir / "decay-sweep.svg").find("<svg") == 0);
  std::filesystem::remove_all(dir);
}
