#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddprice/models/hotlane.hpp"
#include "ddprice/models/multiproduct.hpp"
#include "ddprice/models/truncgp.hpp"

namespace ddprice {

/// One `key = value` entry with its source line (1-based).
struct ConfigEntry {
  std::string key;
  std::string value;
  long line = 0;
};

/// One `[name]` section, entries in file order; repeated keys are kept.
struct ConfigSection {
  std::string name;
  long line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }

  /// Typed accessors; throw ConfigError naming origin:line on absence
  /// (required form) or malformed values.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace-separated list of reals.
  Vec get_vec(const std::string& key) const;
  /// All values bound to a repeated key, in order.
  std::vector<std::string> get_all(const std::string& key) const;

  /// Throws ConfigError if any entry's key is not in `allowed`.
  void expect_keys(const std::vector<std::string>& allowed) const;

  std::string origin;  ///< file name (or label) for error messages
};

/// Minimal INI-style file: sections, `key = value` lines, `#`/`;` comments.
/// Duplicate sections and keys are preserved in order.
struct ConfigFile {
  std::string origin;
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
  /// Section lookup that throws ConfigError when missing.
  const ConfigSection& require(const std::string& name) const;
  std::vector<const ConfigSection*> find_all(const std::string& name) const;

  static ConfigFile parse_string(const std::string& text, const std::string& origin);
  static ConfigFile parse_file(const std::string& path);
};

// --- model (de)serialization --------------------------------------------------

/// A model loaded from a `[model]` section (plus `[item]` sections for the
/// GP type).  `multi_agent` aliases `model` when the type supports the
/// specialized estimator, else is null.
struct LoadedModel {
  std::string type;
  std::unique_ptr<ProblemModel> model;
  const MultiAgentProblemModel* multi_agent = nullptr;
};

LoadedModel load_model(const ConfigFile& cfg);

/// Deterministic round-trippable text form (17 significant digits).
/// The HOT-lane serializer covers the default flow family only; custom
/// flow overrides are not representable and are ignored.
std::string serialize_model(const MultiproductSpec& spec);
std::string serialize_model(const HotLaneSpec& spec);
std::string serialize_model(const TruncGpSpec& spec);

}  // namespace ddprice
