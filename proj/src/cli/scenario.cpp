#include "cli/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "surfhol/conventions.hpp"
#include "surfhol/errors.hpp"

namespace surfhol::cli {

namespace {

Json scalar_to_json(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted: always a string
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  if (text.empty() || text == "~" || text == "null") return nullptr;
  const char* first = text.data();
  const char* last = first + text.size();
  if (text[0] == '-') {
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc() && p == last) return i;
  } else {
    std::uint64_t u = 0;
    if (auto [p, ec] = std::from_chars(first, last, u); ec == std::errc() && p == last) return u;
  }
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc() && p == last) return d;
  return text;
}

Json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return out;
    }
  }
  return nullptr;
}

/// Expression source from a string or a bare number.
std::string expr_source(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  throw UsageError(where + ": expected an expression string");
}

std::vector<std::string> expr_list(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(expr_source(e, where));
  } else {
    out.push_back(expr_source(j, where));
  }
  return out;
}

std::vector<expr::Expr> parse_exprs(const std::vector<std::string>& src, int dim) {
  std::vector<expr::Expr> out;
  for (const auto& s : src) out.push_back(expr::parse(s, dim));
  return out;
}

}  // namespace

Json parse_config_text(const std::string& text, bool json) {
  if (json) {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  try {
    const YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) throw UsageError("config must be a mapping at the top level");
    return yaml_to_json(root);
  } catch (const YAML::Exception& e) {
    throw UsageError(std::string("config is not valid YAML: ") + e.what());
  }
}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = path.extension() == ".json" || (first != std::string::npos && text[first] == '{');
  return parse_config_text(text, json);
}

std::string config_digest(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

Scenario::Scenario(Json config, std::filesystem::path base_dir, const Flags& flags)
    : config_(std::move(config)), base_dir_(std::move(base_dir)) {
  if (!config_.is_object()) throw UsageError("config must be a mapping at the top level");
  Json& run = config_["run"];
  if (run.is_null()) run = Json::object();
  if (!run.is_object()) throw UsageError("'run' must be a mapping");
  if (flags.seed) run["seed"] = *flags.seed;
  if (flags.samples) run["samples"] = *flags.samples;
  if (flags.resolution) run["resolution"] = *flags.resolution;
  if (flags.convention) run["convention"] = *flags.convention;
  run_ = run;
  if (!run_.contains("seed")) {
    seed_ = 1;
  } else if (run_["seed"].is_number_unsigned()) {
    seed_ = run_["seed"].get<std::uint64_t>();
  } else {
    throw UsageError("run.seed must be a non-negative integer");
  }
}

std::vector<CrossedModulePtr> Scenario::instances(const std::vector<std::string>& fallback) const {
  std::vector<std::string> names;
  if (run_.contains("instances")) {
    const Json& list = run_["instances"];
    if (!list.is_array()) throw UsageError("run.instances must be a list of names");
    for (const auto& n : list) {
      if (!n.is_string()) throw UsageError("run.instances must be a list of names");
      names.push_back(n.get<std::string>());
    }
  } else if (config_.contains("instance")) {
    return {instance()};
  } else {
    names = fallback.empty() ? builtin_instance_names() : fallback;
  }
  std::vector<CrossedModulePtr> out;
  for (const auto& n : names) out.push_back(instance_from_name(n));
  return out;
}

CrossedModulePtr Scenario::instance() const {
  if (!config_.contains("instance")) throw UsageError("config needs an 'instance'");
  const Json& inst = config_["instance"];
  if (inst.is_string()) return instance_from_name(inst.get<std::string>());
  if (inst.is_object()) {
    std::string canonical;
    for (const char* key : {"G", "H", "tau", "alpha"}) {
      if (!inst.contains(key) || !inst[key].is_string()) {
        throw UsageError(std::string("inline instance needs string field '") + key + "'");
      }
      if (!canonical.empty()) canonical += ';';
      canonical += std::string(key) + "=" + inst[key].get<std::string>();
    }
    return instance_from_name(canonical);
  }
  throw UsageError("'instance' must be a name or a mapping {G, H, tau, alpha}");
}

int Scenario::dim() const {
  if (!config_.contains("dim") || !config_["dim"].is_number_integer() || config_["dim"].get<int>() < 1) {
    throw UsageError("config needs a positive integer 'dim'");
  }
  return config_["dim"].get<int>();
}

int Scenario::samples(int fallback) const {
  const int n = run_int("samples", fallback);
  if (n < 1) throw UsageError("run.samples must be positive");
  return n;
}

int Scenario::resolution(int fallback) const {
  const int n = run_int("resolution", fallback);
  if (n < DiscretePath::kMinIntervals) {
    throw UsageError("run.resolution must be at least " + std::to_string(DiscretePath::kMinIntervals));
  }
  return n;
}

CompositionConvention Scenario::convention() const {
  return parse_convention(run_string("convention", "closure-consistent"));
}

const Json& Scenario::section_entry(const char* section, const std::string& name) const {
  if (!config_.contains(section) || !config_[section].is_object() || !config_[section].contains(name)) {
    throw UsageError(std::string("config has no ") + section + "." + name);
  }
  const Json& entry = config_[section][name];
  if (!entry.is_object()) throw UsageError(std::string(section) + "." + name + " must be a mapping");
  return entry;
}

ConnectionForm Scenario::connection(const std::string& name, GroupTag algebra) const {
  const Json& entry = section_entry("forms", name);
  const std::string where = "forms." + name;
  if (entry.contains("type") && entry["type"] != "connection") throw UsageError(where + " is not a connection");
  if (!entry.contains("components") || !entry["components"].is_array()) {
    throw UsageError(where + " needs a 'components' list (one entry per coordinate)");
  }
  std::vector<std::vector<std::string>> coeffs;
  for (const auto& row : entry["components"]) coeffs.push_back(expr_list(row, where));
  return ConnectionForm::parse(algebra, dim(), coeffs);
}

TwoFormField Scenario::two_form(const std::string& name, GroupTag algebra) const {
  const Json& entry = section_entry("forms", name);
  const std::string where = "forms." + name;
  if (entry.contains("type") && entry["type"] != "two-form") throw UsageError(where + " is not a two-form");
  std::map<std::pair<int, int>, std::vector<std::string>> upper;
  if (entry.contains("components")) {
    if (!entry["components"].is_object()) throw UsageError(where + ".components must map \"mu,nu\" to coefficients");
    for (const auto& [key, value] : entry["components"].items()) {
      int mu = 0, nu = 0;
      char comma = 0;
      std::istringstream is(key);
      if (!(is >> mu >> comma >> nu) || comma != ',' || !is.eof()) {
        throw UsageError(where + ": component key '" + key + "' is not of the form \"mu,nu\"");
      }
      if (mu < 1 || nu < 1 || mu == nu) throw UsageError(where + ": indices are 1-based and distinct");
      std::vector<std::string> coeffs = expr_list(value, where);
      if (mu > nu) {
        // B_{nu mu} = -B_{mu nu}
        for (auto& c : coeffs) c = "-(" + c + ")";
        std::swap(mu, nu);
      }
      if (!upper.emplace(std::pair{mu - 1, nu - 1}, coeffs).second) {
        throw UsageError(where + ": component " + key + " given twice");
      }
    }
  }
  return TwoFormField::parse(algebra, dim(), upper);
}

DiscretePath Scenario::path(const std::string& name, int intervals) const {
  const Json& entry = section_entry("paths", name);
  if (entry.contains("csv")) {
    DiscretePath p = DiscretePath::from_samples(read_csv_rows(resolve(entry["csv"].get<std::string>()).string()));
    if (p.dim() != dim()) throw UsageError("paths." + name + ": CSV width differs from dim");
    return p;
  }
  if (!entry.contains("expr")) throw UsageError("paths." + name + " needs 'expr' or 'csv'");
  const auto src = expr_list(entry["expr"], "paths." + name);
  if (static_cast<int>(src.size()) != dim()) throw UsageError("paths." + name + ": one expression per coordinate");
  return DiscretePath::from_expressions(parse_exprs(src, 0), intervals);
}

PathVariation Scenario::variation(const std::string& name, int intervals) const {
  const Json& entry = section_entry("variations", name);
  if (entry.contains("csv")) {
    PathVariation x(read_csv_rows(resolve(entry["csv"].get<std::string>()).string()));
    if (x.dim() != dim()) throw UsageError("variations." + name + ": CSV width differs from dim");
    return x;
  }
  if (!entry.contains("expr")) throw UsageError("variations." + name + " needs 'expr' or 'csv'");
  const auto src = expr_list(entry["expr"], "variations." + name);
  if (static_cast<int>(src.size()) != dim()) {
    throw UsageError("variations." + name + ": one expression per coordinate");
  }
  return PathVariation::from_expressions(parse_exprs(src, 0), intervals);
}

SurfaceMap Scenario::surface(const std::string& name) const {
  const Json& entry = section_entry("surfaces", name);
  if (!entry.contains("expr")) throw UsageError("surfaces." + name + " needs 'expr'");
  const auto src = expr_list(entry["expr"], "surfaces." + name);
  if (static_cast<int>(src.size()) != dim()) throw UsageError("surfaces." + name + ": one expression per coordinate");
  return SurfaceMap::parse(src);
}

std::filesystem::path Scenario::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : base_dir_ / p;
}

std::string Scenario::run_string(const std::string& key, const std::string& fallback) const {
  if (!run_.contains(key)) return fallback;
  if (!run_[key].is_string()) throw UsageError("run." + key + " must be a string");
  return run_[key].get<std::string>();
}

double Scenario::run_number(const std::string& key, double fallback) const {
  if (!run_.contains(key)) return fallback;
  if (!run_[key].is_number()) throw UsageError("run." + key + " must be a number");
  return run_[key].get<double>();
}

int Scenario::run_int(const std::string& key, int fallback) const {
  if (!run_.contains(key)) return fallback;
  if (!run_[key].is_number_integer()) throw UsageError("run." + key + " must be an integer");
  return run_[key].get<int>();
}

std::vector<double> Scenario::run_numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!run_.contains(key)) return fallback;
  const Json& list = run_[key];
  if (!list.is_array()) throw UsageError("run." + key + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& v : list) {
    if (!v.is_number()) throw UsageError("run." + key + " must be a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void Report::check(const std::string& name, double value, bool ok) {
  metrics[name] = value;
  if (!ok) {
    pass = false;
    details["failed_checks"].push_back(name);
  }
}

Json Report::to_json() const {
  Json conv = Json::array();
  for (const auto& id : conventions) conv.push_back(Json{{"id", id}, {"text", convention(id).text}});
  return Json{{"subcommand", subcommand}, {"config_digest", config_digest}, {"seed", seed}, {"pass", pass},
              {"metrics", metrics}, {"conventions", conv}, {"details", details}};
}

}  // namespace surfhol::cli
