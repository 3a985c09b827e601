#include "ddprice/bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ddprice/stats.hpp"

namespace ddprice {

namespace {

[[noreturn]] void fail(const std::string& origin, long line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_num(const std::string& origin, long line, const std::string& what,
                 const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, what + ": expected a number, got '" + raw + "'");
  }
}

MethodSpec parse_method(const std::string& origin, long line, const std::string& text) {
  MethodSpec m;
  m.display = text;
  m.line = line;
  std::istringstream is(text);
  if (!(is >> m.tag)) fail(origin, line, "empty method line");

  const bool is_l2 = m.tag == "l2-rgd";
  const bool is_spsa = m.tag == "spsa";
  const bool is_psd = m.tag == "psd-ad";
  const bool is_rs = m.tag == "random-search";
  const bool is_proposed = m.tag == "proposed" || m.tag == "proposed-general";
  if (!(is_l2 || is_spsa || is_psd || is_rs || is_proposed))
    fail(origin, line, "unknown method tag '" + m.tag + "'");

  std::string tok;
  while (is >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      fail(origin, line, "method parameter '" + tok + "' must look like key=value");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (is_l2 && key == "alpha") {
      m.alpha = parse_num(origin, line, "alpha", val);
      if (!(m.alpha >= 0.0)) fail(origin, line, "alpha must be nonnegative");
    } else if (is_l2 && key == "eta") {
      m.eta = parse_num(origin, line, "eta", val);
      if (!(m.eta > 0.0)) fail(origin, line, "eta must be positive");
    } else if (is_l2 && key == "batch") {
      m.batch = static_cast<long>(parse_num(origin, line, "batch", val));
      if (m.batch < 1) fail(origin, line, "batch must be >= 1");
    } else if (is_psd && key == "shrink") {
      m.shrink = parse_num(origin, line, "shrink", val);
      if (!(m.shrink > 0.0 && m.shrink < 1.0)) fail(origin, line, "shrink must lie in (0, 1)");
    } else if (is_rs && key == "draws") {
      m.draws = static_cast<long>(parse_num(origin, line, "draws", val));
      if (m.draws < 1) fail(origin, line, "draws must be >= 1");
    } else if (is_proposed && key == "baseline") {
      if (val == "ogd")
        m.ogd_baseline = true;
      else if (val == "zero")
        m.ogd_baseline = false;
      else
        fail(origin, line, "baseline must be 'ogd' or 'zero', got '" + val + "'");
    } else {
      fail(origin, line, "method '" + m.tag + "' does not take parameter '" + key + "'");
    }
  }
  return m;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string fmt_g(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

MethodSpec parse_method_line(const std::string& text, const std::string& origin, long line) {
  return parse_method(origin, line, text);
}

BenchConfig BenchConfig::parse(const ConfigFile& cfg) {
  BenchConfig out;

  if (const ConfigSection* b = cfg.find("bench")) {
    b->expect_keys({"root_seed", "budget_seconds", "max_iterations", "ner_samples",
                    "ner_checkpoints", "threads", "record_wall_seconds"});
    out.root_seed = static_cast<std::uint64_t>(b->get_long("root_seed", 1));
    out.budget_seconds = b->get_double("budget_seconds", out.budget_seconds);
    out.max_iterations = b->get_long("max_iterations", out.max_iterations);
    out.ner_samples = b->get_long("ner_samples", out.ner_samples);
    out.ner_checkpoints = b->get_long("ner_checkpoints", out.ner_checkpoints);
    out.threads = static_cast<int>(b->get_long("threads", out.threads));
    out.record_wall = b->get_bool("record_wall_seconds", out.record_wall);
    if (out.budget_seconds <= 0.0 && out.max_iterations <= 0)
      fail(b->origin, b->line, "[bench] must set budget_seconds > 0 or max_iterations > 0");
    if (out.ner_samples < 1) fail(b->origin, b->line, "ner_samples must be >= 1");
    if (out.threads < 1) fail(b->origin, b->line, "threads must be >= 1");
  }

  const ConfigSection& inst = cfg.require("instances");
  inst.expect_keys({"count", "n", "m", "seed", "price_file", "file"});
  const std::vector<std::string> files = inst.get_all("file");
  if (!files.empty()) {
    if (inst.has("count") || inst.has("n") || inst.has("m") || inst.has("price_file"))
      fail(inst.origin, inst.line,
           "[instances] mixes generator keys with explicit 'file' entries; use one mode");
    for (const std::string& path : files) {
      InstanceEntry e;
      e.from_file = true;
      e.path = path;
      const std::size_t slash = path.find_last_of('/');
      e.id = slash == std::string::npos ? path : path.substr(slash + 1);
      out.instances.push_back(std::move(e));
    }
  } else {
    const long count = inst.get_long("count", 1);
    if (count < 1) fail(inst.origin, inst.line, "count must be >= 1");
    SyntheticConfig base;
    base.n = static_cast<std::size_t>(inst.get_long("n", 20));
    base.m = inst.get_long("m", 200);
    if (inst.has("price_file")) base.alpha_override = read_price_list(inst.get_string("price_file"));
    const std::uint64_t seed0 =
        static_cast<std::uint64_t>(inst.get_long("seed", static_cast<long>(out.root_seed)));
    for (long j = 0; j < count; ++j) {
      InstanceEntry e;
      e.synth = base;
      e.synth.seed = seed0 + static_cast<std::uint64_t>(j);
      e.id = "synthetic-" + std::to_string(j + 1);
      out.instances.push_back(std::move(e));
    }
  }

  const ConfigSection& meth = cfg.require("methods");
  meth.expect_keys({"method"});
  for (const ConfigEntry& e : meth.entries)
    out.methods.push_back(parse_method(meth.origin, e.line, e.value));
  if (out.methods.empty())
    fail(meth.origin, meth.line, "[methods] needs at least one 'method = <tag> ...' line");

  return out;
}

RunRecord run_bench_method(const MethodSpec& method, const ProblemModel& model,
                           const MultiAgentProblemModel* multi_agent, const BenchConfig& cfg,
                           std::uint64_t instance_index) {
  const StopRule stop{cfg.max_iterations > 0 ? cfg.max_iterations : -1,
                      cfg.budget_seconds > 0.0 ? cfg.budget_seconds : -1.0};
  OutputPolicy output;
  output.rule = OutputRule::kBestNer;
  output.ner_samples = cfg.ner_samples;
  output.ner_checkpoints = cfg.ner_checkpoints;
  const StreamFamily ner(cfg.root_seed, instance_index, stream_method::kNerEval);
  const Vec x0 = project_box(Vec(model.dim(), 0.5), model.box());

  const auto family = [&](std::uint64_t id) {
    return StreamFamily(cfg.root_seed, instance_index, id);
  };

  if (method.tag == "proposed" || method.tag == "proposed-general") {
    const bool specialized = method.tag == "proposed";
    if (specialized && multi_agent == nullptr)
      throw std::invalid_argument(
          "method 'proposed' needs the specialized estimator; this model does not expose the "
          "multi-agent structure (use 'proposed-general')");
    const long scale = std::max<long>(1, std::lround(model.lipschitz_f()));
    const StepSchedule schedule = experiment_schedule(scale);
    PsgOptions opts;
    opts.stop = stop;
    opts.output = output;
    opts.baseline = method.ogd_baseline ? BaselineMode::kOgd : BaselineMode::kFixed;
    opts.threads = cfg.threads;
    opts.sampling =
        family(specialized ? stream_method::kPsgSpecialized : stream_method::kPsg);
    opts.ner = ner;
    RunRecord rec = specialized
                        ? run_psg_specialized(*multi_agent, model.box(), schedule, x0, 0.0, opts)
                        : run_psg(model, model.box(), schedule, x0, 0.0, opts);
    rec.method = method.display;
    return rec;
  }

  BaselineOptions opts;
  opts.stop = stop;
  opts.output = output;
  opts.threads = cfg.threads;
  opts.ner = ner;

  RunRecord rec;
  if (method.tag == "l2-rgd") {
    opts.sampling = family(stream_method::kL2Rgd);
    rec = run_l2_rgd(model, model.box(), x0, method.alpha, method.eta, method.batch, opts);
  } else if (method.tag == "spsa") {
    opts.sampling = family(stream_method::kSpsa);
    rec = run_spsa(model, model.box(), x0, opts);
  } else if (method.tag == "psd-ad") {
    if (multi_agent == nullptr)
      throw std::invalid_argument(
          "method 'psd-ad' needs the mean-demand proxy; this model does not expose the "
          "multi-agent structure");
    opts.sampling = family(stream_method::kPsdAd);
    rec = run_psd_ad(*multi_agent, model.box(), x0, method.shrink, opts);
  } else if (method.tag == "random-search") {
    opts.sampling = family(stream_method::kRandomSearch);
    rec = run_random_search(model, model.box(), method.draws, opts);
  } else {
    throw std::invalid_argument("unknown method tag '" + method.tag + "'");
  }
  rec.method = method.display;
  return rec;
}

BenchResult run_benchmark(const BenchConfig& cfg,
                          const std::function<void(const BenchRow&)>& on_row) {
  BenchResult result;
  std::uint64_t index = 0;
  for (const InstanceEntry& entry : cfg.instances) {
    ++index;
    std::unique_ptr<ProblemModel> owned;
    const MultiAgentProblemModel* multi_agent = nullptr;
    if (entry.from_file) {
      LoadedModel lm = load_model(ConfigFile::parse_file(entry.path));
      owned = std::move(lm.model);
      multi_agent = lm.multi_agent;
    } else {
      auto model = std::make_unique<MultiproductModel>(gen_synthetic(entry.synth));
      multi_agent = model.get();
      owned = std::move(model);
    }
    const StreamFamily ner(cfg.root_seed, index, stream_method::kNerEval);

    for (const MethodSpec& method : cfg.methods) {
      BenchRow row;
      row.instance = entry.id;
      row.method = method.display;
      try {
        const RunRecord rec = run_bench_method(method, *owned, multi_agent, cfg, index);
        row.status = "ok";
        row.ner = compute_ner(*owned, rec.output_x, cfg.ner_samples, ner, cfg.threads);
        row.wall_seconds = cfg.record_wall ? rec.wall_seconds : 0.0;
        row.iterations = rec.iterations;
        row.selected_x = rec.output_x;
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      if (on_row) on_row(row);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream os;
  os << "instance,method,status,ner,wall_seconds,iterations,selected_x\n";
  for (const BenchRow& row : result.rows) {
    os << sanitize(row.instance) << ',' << sanitize(row.method) << ',' << sanitize(row.status)
       << ',';
    if (std::isfinite(row.ner)) os << fmt_g(row.ner);
    os << ',' << std::fixed << std::setprecision(3) << row.wall_seconds << ','
       << row.iterations << ',';
    os.unsetf(std::ios_base::floatfield);
    for (std::size_t i = 0; i < row.selected_x.size(); ++i) {
      if (i) os << ';';
      os << fmt_g(row.selected_x[i]);
    }
    os << '\n';
  }
  return os.str();
}

std::vector<SummaryRow> summarize_csv(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("summarize: empty CSV input");
  const std::vector<std::string> header = split(line, ',');
  long col_method = -1, col_status = -1, col_ner = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "method") col_method = static_cast<long>(c);
    if (header[c] == "status") col_status = static_cast<long>(c);
    if (header[c] == "ner") col_ner = static_cast<long>(c);
  }
  if (col_method < 0 || col_status < 0 || col_ner < 0)
    throw ConfigError("summarize: CSV header must contain method, status and ner columns");

  std::vector<std::string> order;
  struct Bucket {
    std::vector<double> ner;
    long errors = 0;
  };
  std::vector<Bucket> buckets;
  const auto bucket_of = [&](const std::string& method) -> Bucket& {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == method) return buckets[i];
    order.push_back(method);
    buckets.emplace_back();
    return buckets.back();
  };

  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    const std::size_t need = static_cast<std::size_t>(std::max({col_method, col_status, col_ner}));
    if (cells.size() <= need)
      throw ConfigError("summarize: line " + std::to_string(lineno) + " has too few columns");
    Bucket& b = bucket_of(cells[static_cast<std::size_t>(col_method)]);
    if (cells[static_cast<std::size_t>(col_status)] == "ok") {
      const std::string& raw = cells[static_cast<std::size_t>(col_ner)];
      try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        b.ner.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("summarize: line " + std::to_string(lineno) +
                          ": malformed ner value '" + raw + "'");
      }
    } else {
      ++b.errors;
    }
  }

  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < order.size(); ++i) {
    SummaryRow r;
    r.method = order[i];
    r.runs = static_cast<long>(buckets[i].ner.size());
    r.errors = buckets[i].errors;
    if (r.runs > 0) r.mean_ner = mean(buckets[i].ner);
    if (r.runs > 1) r.sd_ner = sample_stddev(buckets[i].ner);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::size_t width = 6;
  for (const SummaryRow& r : rows) width = std::max(width, r.method.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "method" << std::right
     << std::setw(6) << "runs" << std::setw(8) << "errors" << std::setw(14) << "mean NER"
     << std::setw(12) << "SD" << '\n';
  for (const SummaryRow& r : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << r.method << std::right
       << std::setw(6) << r.runs << std::setw(8) << r.errors;
    os << std::setw(14);
    if (std::isfinite(r.mean_ner))
      os << std::fixed << std::setprecision(4) << r.mean_ner;
    else
      os << "-";
    os.unsetf(std::ios_base::floatfield);
    os << std::setw(12);
    if (std::isfinite(r.sd_ner))
      os << std::fixed << std::setprecision(4) << r.sd_ner;
    else
      os << "-";
    os.unsetf(std::ios_base::floatfield);
    os << '\n';
  }
  return os.str();
}

}  // namespace ddprice
