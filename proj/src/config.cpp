#include "ddprice/config.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ddprice {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, long line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& origin, long line, const std::string& key,
                    const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected a real number, got '" + raw + "'");
  }
}

long parse_long(const std::string& origin, long line, const std::string& key,
                const std::string& raw) {
  try {
    std::size_t used = 0;
    const long v = std::stol(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "': expected an integer, got '" + raw + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_vec(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  for (const ConfigEntry& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::string ConfigSection::get_string(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) fail(origin, line, "section [" + name + "] is missing required key '" + key + "'");
  return e->value;
}

std::string ConfigSection::get_string(const std::string& key, const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

double ConfigSection::get_double(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) fail(origin, line, "section [" + name + "] is missing required key '" + key + "'");
  return parse_double(origin, e->line, key, e->value);
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  const ConfigEntry* e = find(key);
  return e ? parse_double(origin, e->line, key, e->value) : fallback;
}

long ConfigSection::get_long(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) fail(origin, line, "section [" + name + "] is missing required key '" + key + "'");
  return parse_long(origin, e->line, key, e->value);
}

long ConfigSection::get_long(const std::string& key, long fallback) const {
  const ConfigEntry* e = find(key);
  return e ? parse_long(origin, e->line, key, e->value) : fallback;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  const std::string v = e->value;
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(origin, e->line, "key '" + key + "': expected a boolean, got '" + v + "'");
}

Vec ConfigSection::get_vec(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e) fail(origin, line, "section [" + name + "] is missing required key '" + key + "'");
  Vec out;
  std::istringstream is(e->value);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(origin, e->line, key, tok));
  if (out.empty()) fail(origin, e->line, "key '" + key + "': expected at least one real number");
  return out;
}

std::vector<std::string> ConfigSection::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const ConfigEntry& e : entries)
    if (e.key == key) out.push_back(e.value);
  return out;
}

void ConfigSection::expect_keys(const std::vector<std::string>& allowed) const {
  for (const ConfigEntry& e : entries) {
    bool ok = false;
    for (const std::string& k : allowed)
      if (e.key == k) {
        ok = true;
        break;
      }
    if (!ok) fail(origin, e.line, "unknown key '" + e.key + "' in section [" + name + "]");
  }
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const ConfigSection& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigSection& ConfigFile::require(const std::string& name) const {
  const ConfigSection* s = find(name);
  if (!s) throw ConfigError(origin + ": missing required section [" + name + "]");
  return *s;
}

std::vector<const ConfigSection*> ConfigFile::find_all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const ConfigSection& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin = origin;
  std::istringstream is(text);
  std::string raw;
  long lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::size_t comment = raw.find_first_of("#;");
    std::string body = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(origin, lineno, "unterminated section header '" + body + "'");
      const std::string name = trim(body.substr(1, body.size() - 2));
      if (name.empty()) fail(origin, lineno, "empty section name");
      ConfigSection sec;
      sec.name = name;
      sec.line = lineno;
      sec.origin = origin;
      cfg.sections.push_back(std::move(sec));
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      fail(origin, lineno, "expected 'key = value' or '[section]', got '" + body + "'");
    if (cfg.sections.empty())
      fail(origin, lineno, "key-value line appears before any [section] header");
    ConfigEntry entry;
    entry.key = trim(body.substr(0, eq));
    entry.value = trim(body.substr(eq + 1));
    entry.line = lineno;
    if (entry.key.empty()) fail(origin, lineno, "empty key");
    cfg.sections.back().entries.push_back(std::move(entry));
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

// --- model loading -------------------------------------------------------------

namespace {

MultiproductSpec load_multiproduct(const ConfigSection& s) {
  s.expect_keys({"type", "n", "m", "a0", "x_min", "x_max", "alpha", "gamma", "eta1", "eta2",
                 "eta3", "cost_l", "cost_u"});
  MultiproductSpec spec;
  spec.n = static_cast<std::size_t>(s.get_long("n"));
  spec.m = s.get_long("m");
  spec.a0 = s.get_double("a0");
  spec.x_min = s.get_double("x_min");
  spec.x_max = s.get_double("x_max");
  spec.alpha = s.get_vec("alpha");
  spec.gamma = s.get_vec("gamma");
  spec.eta1 = s.get_vec("eta1");
  spec.eta2 = s.get_vec("eta2");
  spec.eta3 = s.get_vec("eta3");
  spec.cost_l = s.get_vec("cost_l");
  spec.cost_u = s.get_vec("cost_u");
  return spec;
}

HotLaneSpec load_hotlane(const ConfigSection& s) {
  s.expect_keys({"type", "d", "alpha", "beta", "gamma", "h", "theta", "k_critical", "x_min",
                 "x_max", "flow_rate", "flow_cap", "lane_length"});
  HotLaneSpec spec;
  for (double v : s.get_vec("d")) spec.d.push_back(static_cast<long>(v));
  spec.alpha = s.get_vec("alpha");
  spec.beta = s.get_vec("beta");
  spec.gamma = s.get_vec("gamma");
  spec.h = s.get_vec("h");
  spec.theta = s.get_double("theta");
  spec.k_critical = s.get_double("k_critical");
  spec.x_min = s.get_double("x_min");
  spec.x_max = s.get_double("x_max");
  spec.flow_rate = s.get_double("flow_rate", 1.0);
  spec.flow_cap = s.get_double("flow_cap", std::numeric_limits<double>::infinity());
  spec.lane_length = s.get_double("lane_length", 1.0);
  return spec;
}

TruncGpSpec load_truncgp(const ConfigFile& cfg, const ConfigSection& s) {
  s.expect_keys({"type", "var_floor", "x_min", "x_max", "train_x"});
  TruncGpSpec spec;
  spec.var_floor = s.get_double("var_floor");
  spec.x_min = s.get_double("x_min");
  spec.x_max = s.get_double("x_max");
  for (const std::string& row : s.get_all("train_x")) {
    Vec point;
    std::istringstream is(row);
    std::string tok;
    while (is >> tok) point.push_back(parse_double(s.origin, s.line, "train_x", tok));
    spec.train_x.push_back(std::move(point));
  }
  const std::size_t train = spec.train_x.size();
  for (const ConfigSection* item : cfg.find_all("item")) {
    item->expect_keys({"theta1", "theta2", "sigma", "xi_max", "a", "A", "eta1", "eta2", "eta3",
                       "cost_l", "cost_u"});
    TruncGpItem it;
    it.theta1 = item->get_double("theta1");
    it.theta2 = item->get_double("theta2");
    it.sigma = item->get_double("sigma");
    it.xi_max = item->get_double("xi_max");
    it.a = item->get_vec("a");
    const Vec flat = item->get_vec("A");
    if (flat.size() != train * train)
      fail(item->origin, item->line,
           "[item] key 'A' must hold " + std::to_string(train * train) +
               " entries (train count squared), got " + std::to_string(flat.size()));
    it.A = Matrix(train, train);
    for (std::size_t r = 0; r < train; ++r)
      for (std::size_t c = 0; c < train; ++c) it.A(r, c) = flat[r * train + c];
    it.eta1 = item->get_double("eta1");
    it.eta2 = item->get_double("eta2");
    it.eta3 = item->get_double("eta3");
    it.cost_l = item->get_double("cost_l");
    it.cost_u = item->get_double("cost_u");
    spec.item.push_back(std::move(it));
  }
  return spec;
}

}  // namespace

LoadedModel load_model(const ConfigFile& cfg) {
  const ConfigSection& s = cfg.require("model");
  LoadedModel out;
  out.type = s.get_string("type");
  try {
    if (out.type == "multiproduct") {
      auto model = std::make_unique<MultiproductModel>(load_multiproduct(s));
      out.multi_agent = model.get();
      out.model = std::move(model);
    } else if (out.type == "hotlane") {
      auto model = std::make_unique<HotLaneModel>(load_hotlane(s));
      out.multi_agent = model.get();
      out.model = std::move(model);
    } else if (out.type == "truncgp") {
      out.model = std::make_unique<TruncGpModel>(load_truncgp(cfg, s));
    } else {
      fail(s.origin, s.line, "unknown model type '" + out.type + "'");
    }
  } catch (const std::invalid_argument& e) {
    // Spec validation failures become config errors with file context.
    fail(s.origin, s.line, e.what());
  }
  return out;
}

std::string serialize_model(const MultiproductSpec& spec) {
  std::ostringstream os;
  os << "[model]\n"
     << "type = multiproduct\n"
     << "n = " << spec.n << "\n"
     << "m = " << spec.m << "\n"
     << "a0 = " << fmt(spec.a0) << "\n"
     << "x_min = " << fmt(spec.x_min) << "\n"
     << "x_max = " << fmt(spec.x_max) << "\n"
     << "alpha = " << fmt_vec(spec.alpha) << "\n"
     << "gamma = " << fmt_vec(spec.gamma) << "\n"
     << "eta1 = " << fmt_vec(spec.eta1) << "\n"
     << "eta2 = " << fmt_vec(spec.eta2) << "\n"
     << "eta3 = " << fmt_vec(spec.eta3) << "\n"
     << "cost_l = " << fmt_vec(spec.cost_l) << "\n"
     << "cost_u = " << fmt_vec(spec.cost_u) << "\n";
  return os.str();
}

std::string serialize_model(const HotLaneSpec& spec) {
  std::ostringstream os;
  os << "[model]\n"
     << "type = hotlane\n"
     << "d =";
  for (long v : spec.d) os << ' ' << v;
  os << "\n"
     << "alpha = " << fmt_vec(spec.alpha) << "\n"
     << "beta = " << fmt_vec(spec.beta) << "\n"
     << "gamma = " << fmt_vec(spec.gamma) << "\n"
     << "h = " << fmt_vec(spec.h) << "\n"
     << "theta = " << fmt(spec.theta) << "\n"
     << "k_critical = " << fmt(spec.k_critical) << "\n"
     << "x_min = " << fmt(spec.x_min) << "\n"
     << "x_max = " << fmt(spec.x_max) << "\n"
     << "flow_rate = " << fmt(spec.flow_rate) << "\n"
     << "flow_cap = " << fmt(spec.flow_cap) << "\n"
     << "lane_length = " << fmt(spec.lane_length) << "\n";
  return os.str();
}

std::string serialize_model(const TruncGpSpec& spec) {
  std::ostringstream os;
  os << "[model]\n"
     << "type = truncgp\n"
     << "var_floor = " << fmt(spec.var_floor) << "\n"
     << "x_min = " << fmt(spec.x_min) << "\n"
     << "x_max = " << fmt(spec.x_max) << "\n";
  for (const Vec& point : spec.train_x) os << "train_x = " << fmt_vec(point) << "\n";
  for (const TruncGpItem& it : spec.item) {
    os << "\n[item]\n"
       << "theta1 = " << fmt(it.theta1) << "\n"
       << "theta2 = " << fmt(it.theta2) << "\n"
       << "sigma = " << fmt(it.sigma) << "\n"
       << "xi_max = " << fmt(it.xi_max) << "\n"
       << "a = " << fmt_vec(it.a) << "\n"
       << "A = " << fmt_vec(it.A.data()) << "\n"
       << "eta1 = " << fmt(it.eta1) << "\n"
       << "eta2 = " << fmt(it.eta2) << "\n"
       << "eta3 = " << fmt(it.eta3) << "\n"
       << "cost_l = " << fmt(it.cost_l) << "\n"
       << "cost_u = " << fmt(it.cost_u) << "\n";
  }
  return os.str();
}

}  // namespace ddprice
