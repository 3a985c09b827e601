// ddprice: CLI harness around the decision-dependent pricing library.
//
// Subcommands
//   gen        write a seeded synthetic instance spec
//   run        one method on one instance, with trace/NER output
//   bench      full (instances x methods) comparison -> CSV
//   check      estimator/score oracle audit (pass/fail table + JSON)
//   summarize  bench CSV -> per-method mean/SD table
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddprice/bench.hpp"
#include "ddprice/oracle.hpp"
#include "ddprice/stats.hpp"

namespace dd = ddprice;
using nlohmann::json;

namespace {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("DDPRICE_SEED");
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw dd::ConfigError(std::string("DDPRICE_SEED: expected an unsigned integer, got '") +
                          raw + "'");
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw dd::ConfigError(path + ": cannot open for writing");
  out << text;
}

std::string fmt_vec(const dd::Vec& v) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// check: oracle audit rows
// ---------------------------------------------------------------------------

struct CheckRow {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = 0.0;  ///< observed statistic
  double limit = 0.0;  ///< threshold it is compared against
};

class CheckReport {
 public:
  void add(const std::string& suite, const std::string& name, bool pass, double value,
           double limit) {
    rows_.push_back({suite, name, pass, value, limit});
  }

  bool all_pass() const {
    for (const CheckRow& r : rows_)
      if (!r.pass) return false;
    return true;
  }

  void print(std::ostream& os) const {
    for (const CheckRow& r : rows_) {
      os << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(14) << r.suite
         << std::setw(44) << r.name << std::right << "value " << std::setprecision(6)
         << r.value << "  vs  " << r.limit << "\n";
    }
    os << (all_pass() ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
  }

  json to_json() const {
    json arr = json::array();
    for (const CheckRow& r : rows_)
      arr.push_back({{"suite", r.suite},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"value", r.value},
                     {"limit", r.limit}});
    return json{{"pass", all_pass()}, {"checks", arr}};
  }

 private:
  std::vector<CheckRow> rows_;
};

dd::Vec random_feasible(const dd::FeasibleBox& box, dd::RngStream& rng) {
  dd::Vec x(box.dim());
  for (double& v : x) v = rng.next_uniform(box.lo(), box.hi());
  return x;
}

/// Max abs deviation between the analytic score and central differences of
/// log Pr(xi | x) at `points` random (x, xi) pairs.
double score_vs_fd(const dd::ProblemModel& model, const dd::StreamFamily& streams, int points,
                   double h) {
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    dd::RngStream rng = streams.stream(1, static_cast<std::uint64_t>(t));
    const dd::Vec x = random_feasible(model.box(), rng);
    const dd::Vec xi = model.sample_one(x, rng);
    const dd::Vec analytic = model.score(x, xi);
    const dd::Vec fd = dd::finite_diff_gradient(
        [&](const dd::Vec& p) { return model.log_prob(p, xi); }, x, h);
    for (std::size_t d = 0; d < analytic.size(); ++d)
      worst = std::max(worst, std::fabs(analytic[d] - fd[d]));
  }
  return worst;
}

void check_finite_model(const dd::FiniteSupportModel& model, long draws, std::uint64_t seed,
                        CheckReport& report) {
  const std::string suite = model.name();
  const dd::StreamFamily oracle(seed, 1, dd::stream_method::kOracle);
  dd::RngStream xrng = oracle.stream(2, 0);
  const dd::Vec x = random_feasible(model.box(), xrng);

  const dd::EnumerationReport enumeration = dd::enumerate_expectation(model, x);
  report.add(suite, "support probabilities sum to 1", std::fabs(enumeration.prob_mass - 1.0) <= 1e-10,
             enumeration.prob_mass, 1.0);

  const dd::Vec fd = dd::finite_diff_gradient(
      [&](const dd::Vec& p) { return dd::enumerate_expectation(model, p).expected_f; }, x, 1e-6);
  double grad_dev = 0.0;
  for (std::size_t d = 0; d < fd.size(); ++d) {
    const double tol = std::max(1e-6, 1e-5 * std::fabs(enumeration.grad[d]));
    grad_dev = std::max(grad_dev, std::fabs(fd[d] - enumeration.grad[d]) / tol);
  }
  report.add(suite, "oracle gradients agree (FD vs analytic)", grad_dev <= 1.0, grad_dev, 1.0);

  const double f_max = model.f_max_bound();
  for (const double delta : {0.0, f_max}) {
    const dd::UnbiasednessReport u =
        dd::check_unbiased(model, x, delta, draws, oracle, enumeration.grad);
    report.add(suite, "estimator unbiased (delta=" + std::to_string(delta) + ")", u.pass,
               u.max_abs_z, 3.0);
  }
  const dd::UnbiasednessReport us =
      dd::check_unbiased_specialized(model, x, 0.0, draws, oracle, enumeration.grad);
  report.add(suite, "specialized estimator unbiased", us.pass, us.max_abs_z, 3.0);

  const double m_bound = model.score_bound();
  const double general_ceiling =
      (model.lipschitz_f() + 2.0 * f_max * m_bound) * (model.lipschitz_f() + 2.0 * f_max * m_bound);
  const dd::VarianceReport v =
      dd::check_variance_bound(model, x, 0.0, draws, oracle, enumeration.grad, general_ceiling);
  report.add(suite, "variance within declared ceiling", v.pass, v.mean_sq_dev, v.bound);
  const double c_max = model.c_max_bound();
  const dd::VarianceReport vs = dd::check_variance_bound_specialized(
      model, x, 0.0, draws, oracle, enumeration.grad, 4.0 * c_max * c_max * m_bound * m_bound);
  report.add(suite, "specialized variance within ceiling", vs.pass, vs.mean_sq_dev, vs.bound);

  const double dev = score_vs_fd(model, oracle, 20, 1e-6);
  report.add(suite, "score matches FD of log-likelihood", dev <= 1e-4, dev, 1e-4);
}

void check_truncgp_model(const dd::TruncGpModel& model, long draws, std::uint64_t seed,
                         CheckReport& report) {
  const std::string suite = model.name();
  const dd::StreamFamily oracle(seed, 1, dd::stream_method::kOracle);
  dd::RngStream xrng = oracle.stream(2, 0);
  const dd::Vec x = random_feasible(model.box(), xrng);

  // Density normalization and mean consistency per item.
  double mass_dev = 0.0, mean_dev = 0.0;
  for (std::size_t i = 0; i < model.dim(); ++i) {
    const double xi_max = model.spec().item[i].xi_max;
    const double mass = dd::integrate(
        [&](double q) { return model.item_density(i, x, q); }, 0.0, xi_max, 1e-9);
    mass_dev = std::max(mass_dev, std::fabs(mass - 1.0));
    const double mean_quad = dd::integrate(
        [&](double q) { return q * model.item_density(i, x, q); }, 0.0, xi_max, 1e-9);
    mean_dev = std::max(mean_dev, std::fabs(mean_quad - model.item_mean(i, x)));
  }
  report.add(suite, "density integrates to 1", mass_dev <= 1e-6, mass_dev, 1e-6);
  report.add(suite, "closed-form mean matches quadrature", mean_dev <= 1e-6, mean_dev, 1e-6);

  // KS test of the sampler against the closed-form CDF (item 0).
  const long ks_draws = std::min<long>(4000, std::max<long>(500, draws / 50));
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(ks_draws));
  for (long t = 0; t < ks_draws; ++t) {
    dd::RngStream rng = oracle.stream(3, static_cast<std::uint64_t>(t));
    const dd::Vec xi = model.sample_one(x, rng);
    u.push_back(model.item_cdf(0, x, xi[0]));
  }
  std::sort(u.begin(), u.end());
  const double ks = dd::ks_statistic_uniform(u);
  const double p = dd::ks_pvalue(ks, static_cast<long>(u.size()));
  report.add(suite, "sampler passes KS vs closed-form CDF", p > 0.01, p, 0.01);

  const double dev = score_vs_fd(model, oracle, 20, 1e-6);
  report.add(suite, "score matches FD of log-density", dev <= 1e-4, dev, 1e-4);

  // Unbiasedness against finite differences of the quadrature expectation.
  const dd::Vec target = dd::finite_diff_gradient(
      [&](const dd::Vec& p2) { return model.expected_objective(p2, 1e-10); }, x, 1e-5);
  const dd::UnbiasednessReport ub = dd::check_unbiased(model, x, 0.0, draws, oracle, target);
  report.add(suite, "estimator unbiased vs quadrature target", ub.pass, ub.max_abs_z, 3.0);
}

dd::MultiproductSpec builtin_multiproduct() {
  dd::MultiproductSpec spec;
  spec.n = 2;
  spec.m = 3;
  spec.alpha = {1.0, 2.0};
  spec.gamma = {1.0, 0.5};
  spec.a0 = 0.5;
  spec.eta1 = {0.30, 0.20};
  spec.eta2 = {0.15, 0.10};
  spec.eta3 = {0.45, 0.30};
  spec.cost_l = {1.0, 1.0};
  spec.cost_u = {2.0, 2.0};
  spec.x_min = 0.01;
  spec.x_max = 4.0;
  return spec;
}

dd::HotLaneSpec builtin_hotlane() {
  dd::HotLaneSpec spec;
  spec.d = {3, 4};
  spec.alpha = {1.0, 0.5};
  spec.beta = {0.8, 1.2};
  spec.gamma = {-2.0, -1.0};
  spec.h = {1.5, 1.0};
  spec.theta = 2.0;
  spec.k_critical = 1.5;
  spec.x_min = 0.05;
  spec.x_max = 3.0;
  return spec;
}

dd::TruncGpSpec builtin_truncgp() {
  dd::TruncGpSpec spec;
  spec.x_min = 0.0;
  spec.x_max = 2.0;
  spec.var_floor = 1e-4;
  spec.train_x = {{0.2, 0.4}, {1.0, 1.2}, {1.8, 0.6}};
  const dd::Vec targets_a{2.0, 1.2, 0.6};
  const dd::Vec targets_b{1.5, 1.8, 0.9};
  for (int i = 0; i < 2; ++i) {
    dd::TruncGpItem item;
    item.theta1 = 1.0;
    item.theta2 = 2.0;
    item.sigma = 1.2;
    item.xi_max = 3.0;
    const dd::GpPosterior post =
        dd::gp_fit(spec.train_x, i == 0 ? targets_a : targets_b, item.theta1, item.theta2, 0.1);
    item.a = post.a;
    item.A = post.A;
    item.eta1 = 0.2;
    item.eta2 = 0.1;
    item.eta3 = 0.3;
    item.cost_l = 0.8;
    item.cost_u = 1.6;
    spec.item.push_back(std::move(item));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_gen(std::size_t n, long m, std::uint64_t seed, double x_min, double x_max,
            const std::string& price_file, const std::string& out) {
  dd::SyntheticConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.seed = seed_from_env(seed);
  cfg.x_min = x_min;
  cfg.x_max = x_max;
  if (!price_file.empty()) cfg.alpha_override = dd::read_price_list(price_file);
  write_text(out, dd::serialize_model(dd::gen_synthetic(cfg)));
  return 0;
}

int cmd_run(const std::string& model_path, const std::string& method_line, long iterations,
            double seconds, std::uint64_t seed, int threads, long ner_samples, bool show_trace) {
  const dd::LoadedModel loaded = dd::load_model(dd::ConfigFile::parse_file(model_path));
  const dd::MethodSpec method = dd::parse_method_line(method_line, "--method");

  dd::BenchConfig cfg;
  cfg.root_seed = seed_from_env(seed);
  cfg.budget_seconds = seconds;
  cfg.max_iterations = iterations;
  cfg.ner_samples = ner_samples;
  cfg.threads = threads;
  if (cfg.budget_seconds <= 0.0 && cfg.max_iterations <= 0)
    throw dd::ConfigError("run: set --iterations and/or --seconds");

  const dd::RunRecord rec =
      dd::run_bench_method(method, *loaded.model, loaded.multi_agent, cfg, 1);
  const dd::StreamFamily ner(cfg.root_seed, 1, dd::stream_method::kNerEval);
  const double score = dd::compute_ner(*loaded.model, rec.output_x, ner_samples, ner, threads);

  std::cout << std::setprecision(10);
  if (show_trace) {
    std::cout << "k,objective_mean,delta,elapsed_seconds\n";
    for (const dd::IterationRow& row : rec.trace)
      std::cout << row.k << ',' << row.batch_mean_f << ',' << row.delta << ','
                << std::fixed << std::setprecision(3) << row.elapsed_seconds
                << std::defaultfloat << std::setprecision(10) << '\n';
  }
  std::cout << "model: " << loaded.model->name() << " (dim " << loaded.model->dim() << ")\n"
            << "method: " << rec.method << "\n"
            << "iterations: " << rec.iterations << "\n"
            << "wall_seconds: " << std::fixed << std::setprecision(3) << rec.wall_seconds
            << std::defaultfloat << std::setprecision(10) << "\n"
            << "selected iterate (rule " << rec.output_rule << ", k=" << rec.output_k
            << "): " << fmt_vec(rec.output_x) << "\n"
            << "ner: " << score << "\n";
  if (rec.schedule_warning)
    std::cout << "note: some alpha_k fell outside (0, 1] (benchmark schedule warm-up)\n";
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out, bool summary) {
  const dd::ConfigFile file = dd::ConfigFile::parse_file(config_path);
  dd::BenchConfig cfg = dd::BenchConfig::parse(file);
  cfg.root_seed = seed_from_env(cfg.root_seed);

  const dd::BenchResult result = dd::run_benchmark(cfg, [](const dd::BenchRow& row) {
    std::cerr << row.instance << " / " << row.method << ": " << row.status;
    if (std::isfinite(row.ner)) std::cerr << "  ner=" << std::setprecision(8) << row.ner;
    std::cerr << "  iters=" << row.iterations << "\n";
  });

  const std::string csv = dd::bench_csv(result);
  write_text(out, csv);
  if (summary) std::cout << dd::format_summary(dd::summarize_csv(csv));
  return 0;
}

int cmd_check(const std::string& model_path, long draws, std::uint64_t seed,
              const std::string& json_out) {
  CheckReport report;
  if (model_path.empty()) {
    const dd::MultiproductModel mnl(builtin_multiproduct());
    check_finite_model(mnl, draws, seed, report);
    const dd::HotLaneModel hot(builtin_hotlane());
    check_finite_model(hot, draws, seed, report);
    const dd::TruncGpModel gp(builtin_truncgp());
    check_truncgp_model(gp, draws, seed, report);
  } else {
    const dd::LoadedModel loaded = dd::load_model(dd::ConfigFile::parse_file(model_path));
    if (const auto* finite = dynamic_cast<const dd::FiniteSupportModel*>(loaded.model.get())) {
      check_finite_model(*finite, draws, seed, report);
    } else if (const auto* gp = dynamic_cast<const dd::TruncGpModel*>(loaded.model.get())) {
      check_truncgp_model(*gp, draws, seed, report);
    } else {
      throw dd::ConfigError("check: model type '" + loaded.type + "' has no oracle suite");
    }
  }
  report.print(std::cout);
  if (!json_out.empty()) write_text(json_out, report.to_json().dump(2) + "\n");
  return report.all_pass() ? 0 : 2;
}

int cmd_summarize(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw dd::ConfigError(csv_path + ": cannot open CSV");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::cout << dd::format_summary(dd::summarize_csv(buf.str()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"price optimization under decision-dependent demand"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a seeded synthetic instance spec");
  std::size_t gen_n = 20;
  long gen_m = 200;
  std::uint64_t gen_seed = 1;
  double gen_xmin = 0.01, gen_xmax = 10.0;
  std::string gen_price, gen_out;
  gen->add_option("--n", gen_n, "number of products");
  gen->add_option("--m", gen_m, "number of buyers");
  gen->add_option("--seed", gen_seed, "generator seed (DDPRICE_SEED overrides)");
  gen->add_option("--x-min", gen_xmin, "price lower bound");
  gen->add_option("--x-max", gen_xmax, "price upper bound");
  gen->add_option("--price-file", gen_price, "base prices, one per line (sets alpha, n)");
  gen->add_option("--out,-o", gen_out, "output file ('-' or empty = stdout)");

  // run
  auto* run = app.add_subcommand("run", "run one method on one instance");
  std::string run_model, run_method = "proposed";
  long run_iters = 200;
  double run_seconds = -1.0;
  std::uint64_t run_seed = 1;
  int run_threads = 1;
  long run_ner = 1000;
  bool run_trace = false;
  run->add_option("--model", run_model, "instance spec file")->required();
  run->add_option("--method", run_method,
                  "method line: proposed | proposed-general | l2-rgd | spsa | psd-ad | "
                  "random-search, with key=value params");
  run->add_option("--iterations", run_iters, "iteration cap (<= 0 disables)");
  run->add_option("--seconds", run_seconds, "wall budget in seconds (<= 0 disables)");
  run->add_option("--seed", run_seed, "root seed (DDPRICE_SEED overrides)");
  run->add_option("--threads", run_threads, "worker threads for minibatches");
  run->add_option("--ner-samples", run_ner, "draws per NER evaluation");
  run->add_flag("--trace", run_trace, "print the per-iteration trace CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "full comparison from a config file");
  std::string bench_config, bench_out;
  bool bench_summary = false;
  bench->add_option("--config", bench_config, "benchmark config file")->required();
  bench->add_option("--out,-o", bench_out, "CSV output file ('-' or empty = stdout)");
  bench->add_flag("--summary", bench_summary, "also print the per-method mean/SD table");

  // check
  auto* check = app.add_subcommand("check", "oracle audit of estimators and scores");
  std::string check_model, check_json;
  long check_draws = 200000;
  std::uint64_t check_seed = 7;
  check->add_option("--model", check_model, "audit this instance instead of the built-ins");
  check->add_option("--draws", check_draws, "Monte Carlo draws per audit");
  check->add_option("--seed", check_seed, "audit seed (DDPRICE_SEED overrides)");
  check->add_option("--json", check_json, "write the machine-readable report here");

  // summarize
  auto* summarize = app.add_subcommand("summarize", "aggregate a bench CSV");
  std::string sum_csv;
  summarize->add_option("--csv", sum_csv, "bench CSV file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_n, gen_m, gen_seed, gen_xmin, gen_xmax, gen_price, gen_out);
    if (run->parsed())
      return cmd_run(run_model, run_method, run_iters, run_seconds, run_seed, run_threads,
                     run_ner, run_trace);
    if (bench->parsed()) return cmd_bench(bench_config, bench_out, bench_summary);
    if (check->parsed())
      return cmd_check(check_model, check_draws, seed_from_env(check_seed), check_json);
    if (summarize->parsed()) return cmd_summarize(sum_csv);
  } catch (const dd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const dd::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
