#include "susy_graphene/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace susy {

namespace {

using nlohmann::json;

// Maps JSON paths ("chain[1].nu") to the line where the value starts. The
// text is already known to be valid JSON, so the scanner can be minimal.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : s_(text) {
    skip_ws();
    value("");
  }

  std::size_t line_of(const std::string& path) const {
    auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') ++pos_;
      if (pos_ < s_.size()) out += s_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    lines_.emplace(path, line_);
    if (pos_ >= s_.size()) return;
    const char ch = s_[pos_];
    if (ch == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] != '}') {
        const std::size_t key_line = line_;
        const std::string key = string_token();
        const std::string child = path.empty() ? key : path + "." + key;
        skip_ws();
        ++pos_;  // colon
        skip_ws();
        lines_.emplace(child + "#key", key_line);
        value(child);
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (ch == '[') {
      ++pos_;
      skip_ws();
      std::size_t idx = 0;
      while (pos_ < s_.size() && s_[pos_] != ']') {
        value(path + "[" + std::to_string(idx++) + "]");
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (ch == '"') {
      string_token();
    } else {
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : index_(text), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    std::size_t line = index_.line_of(path);
    if (line == 0) line = index_.line_of(path + "#key");
    std::ostringstream os;
    os << origin_ << ":" << line << ": " << (path.empty() ? std::string("config") : path) << ": " << msg;
    throw ConfigError(os.str(), line);
  }

  void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        fail(join(path, key), "unknown key");
      }
    }
  }

  double number(const json& obj, const std::string& path, const char* key) const {
    const std::string p = join(path, key);
    if (!obj.contains(key)) fail(path, std::string("missing \"") + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(p, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(p, "must be finite");
    return d;
  }

  double number_or(const json& obj, const std::string& path, const char* key, double fallback) const {
    return obj.contains(key) ? number(obj, path, key) : fallback;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  LineIndex index_;
  std::string origin_;
};

std::size_t parse_line_of_offset(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

ModelSpec read_model(const Reader& r, const json& m) {
  r.allow_keys(m, "model", {"kind", "omega", "alpha", "d_strength", "k_wave", "units"});
  if (!m.contains("kind") || !m.at("kind").is_string()) r.fail("model", "missing string \"kind\"");
  const std::string kind = m.at("kind").get<std::string>();
  UnitSystem units;
  if (m.contains("units")) {
    const json& u = m.at("units");
    r.allow_keys(u, "model.units", {"hbar", "c", "e_charge", "v_fermi"});
    units.hbar = r.number_or(u, "model.units", "hbar", 1.0);
    units.c = r.number_or(u, "model.units", "c", 1.0);
    units.e_charge = r.number_or(u, "model.units", "e_charge", 1.0);
    units.v_fermi = r.number_or(u, "model.units", "v_fermi", 1.0);
    for (const char* key : {"hbar", "c", "e_charge", "v_fermi"}) {
      if (u.contains(key) && !(u.at(key).get<double>() > 0.0)) r.fail(std::string("model.units.") + key, "must be positive");
    }
  }
  ModelSpec spec;
  if (kind == "oscillator") {
    if (m.contains("alpha") || m.contains("d_strength")) r.fail("model", "alpha/d_strength belong to the morse model");
    const double omega = r.number(m, "model", "omega");
    if (!(omega > 0.0)) r.fail("model.omega", "must be positive");
    spec = ModelSpec::oscillator(omega, r.number(m, "model", "k_wave"), units);
  } else if (kind == "morse") {
    if (m.contains("omega")) r.fail("model.omega", "omega belongs to the oscillator model");
    const double alpha = r.number(m, "model", "alpha");
    const double d = r.number(m, "model", "d_strength");
    const double k = r.number(m, "model", "k_wave");
    if (!(alpha > 0.0)) r.fail("model.alpha", "must be positive");
    if (!(d > 0.0)) r.fail("model.d_strength", "must be positive");
    if (!(k > 0.0)) r.fail("model.k_wave", "must be positive (no bound states otherwise)");
    spec = ModelSpec::morse(alpha, d, k, units);
  } else {
    r.fail("model.kind", "expected \"oscillator\" or \"morse\", got \"" + kind + "\"");
  }
  return spec;
}

}  // namespace

const char* output_name(OutputKind k) noexcept {
  switch (k) {
    case OutputKind::Potential: return "potential";
    case OutputKind::Field: return "field";
    case OutputKind::Density: return "density";
    case OutputKind::Current: return "current";
    case OutputKind::Spectrum: return "spectrum";
  }
  return "?";
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t line = parse_line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(origin + ":" + std::to_string(line) + ": invalid JSON: " + e.what(), line);
  }
  const Reader r(text, origin);
  r.allow_keys(doc, "", {"description", "model", "chain", "grid", "outputs", "levels", "format"});

  RunConfig cfg;
  if (doc.contains("description")) {
    if (!doc.at("description").is_string()) r.fail("description", "expected a string");
    cfg.description = doc.at("description").get<std::string>();
  }
  if (!doc.contains("model")) r.fail("", "missing \"model\"");
  cfg.model = read_model(r, doc.at("model"));

  if (!doc.contains("chain")) r.fail("", "missing \"chain\"");
  const json& chain = doc.at("chain");
  if (!chain.is_array()) r.fail("chain", "expected an array of {epsilon, nu}");
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const std::string p = "chain[" + std::to_string(i) + "]";
    r.allow_keys(chain[i], p, {"epsilon", "nu"});
    const double eps = r.number(chain[i], p, "epsilon");
    const double nu = r.number(chain[i], p, "nu");
    if (eps > 0.0) r.fail(p + ".epsilon", "factorization energies must be <= 0");
    if (!cfg.chain.empty() && !(eps < cfg.chain.back().first)) {
      r.fail(p + ".epsilon", "factorization energies must be strictly decreasing");
    }
    if (cfg.model.kind == ModelKind::Morse && nu == 0.0) r.fail(p + ".nu", "nu = 0 is not allowed for the morse seed");
    cfg.chain.emplace_back(eps, nu);
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    r.allow_keys(g, "grid", {"x_min", "x_max", "n_points"});
    const double lo = r.number(g, "grid", "x_min");
    const double hi = r.number(g, "grid", "x_max");
    if (!g.contains("n_points") || !g.at("n_points").is_number_unsigned()) {
      r.fail(g.contains("n_points") ? "grid.n_points" : "grid", "n_points must be a positive integer");
    }
    const auto n = g.at("n_points").get<std::size_t>();
    if (n < 5) r.fail("grid.n_points", "need at least 5 points");
    if (!(hi > lo)) r.fail("grid.x_max", "x_max must exceed x_min");
    cfg.grid = Grid(lo, hi, n);
  } else {
    cfg.grid = default_grid(cfg.model);
  }

  if (!doc.contains("outputs")) r.fail("", "missing \"outputs\"");
  const json& outs = doc.at("outputs");
  if (!outs.is_array()) r.fail("outputs", "expected an array");
  if (outs.empty()) r.fail("outputs", "at least one output is required");
  std::set<OutputKind> kinds;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const std::string p = "outputs[" + std::to_string(i) + "]";
    if (!outs[i].is_string()) r.fail(p, "expected a string");
    const std::string name = outs[i].get<std::string>();
    bool found = false;
    for (OutputKind k : {OutputKind::Potential, OutputKind::Field, OutputKind::Density, OutputKind::Current,
                         OutputKind::Spectrum}) {
      if (name == output_name(k)) {
        kinds.insert(k);
        found = true;
      }
    }
    if (!found) r.fail(p, "unknown output \"" + name + "\"");
  }
  cfg.outputs.assign(kinds.begin(), kinds.end());

  if (doc.contains("levels")) {
    const json& lv = doc.at("levels");
    if (!lv.is_array() || lv.empty()) r.fail("levels", "expected a non-empty array of level indices");
    std::set<std::size_t> uniq;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (!lv[i].is_number_unsigned()) r.fail("levels[" + std::to_string(i) + "]", "expected a non-negative integer");
      uniq.insert(lv[i].get<std::size_t>());
    }
    cfg.levels.assign(uniq.begin(), uniq.end());
  } else {
    cfg.levels = {0, 1, 2, 3};
  }

  if (doc.contains("format")) {
    const json& f = doc.at("format");
    const std::string s = f.is_string() ? f.get<std::string>() : "";
    if (s == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (s == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      r.fail("format", "expected \"csv\" or \"json\"");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace susy
