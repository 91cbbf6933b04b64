#include "susy_graphene/app.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "susy_graphene/observables.hpp"
#include "susy_graphene/oracle.hpp"

#ifndef SUSY_GRAPHENE_CONFIG_DIR
#define SUSY_GRAPHENE_CONFIG_DIR "configs"
#endif

namespace susy {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Below this many points the FD checks use every interior grid point.
constexpr std::size_t kCheckPoints = 801;

std::vector<ChainSample> sample_chain(const ChainState& c, const std::vector<double>& xs) {
  std::vector<ChainSample> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = c.sample(xs[i]); });
  return out;
}

std::vector<double> check_points(const Grid& g) {
  const std::size_t interior = g.n_points - 2;
  const std::size_t stride = std::max<std::size_t>(1, (interior + kCheckPoints - 1) / kCheckPoints);
  std::vector<double> xs;
  for (std::size_t i = 1; i + 1 < g.n_points; i += stride) xs.push_back(g.x(i));
  return xs;
}

double d1_5(const std::array<double, 5>& f, double h) { return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h); }

double d2_5(const std::array<double, 5>& f, double h) {
  return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

// Chain samples at x - 2h .. x + 2h for every check point.
struct Stencils {
  double h = 1e-3;
  std::vector<std::array<ChainSample, 5>> at;
};

Stencils stencils(const ChainState& c, const std::vector<double>& xs, double h) {
  std::vector<double> pts;
  pts.reserve(xs.size() * 5);
  for (double x : xs) {
    for (int o = -2; o <= 2; ++o) pts.push_back(x + o * h);
  }
  auto samples = sample_chain(c, pts);
  Stencils s;
  s.h = h;
  s.at.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t o = 0; o < 5; ++o) s.at[i][o] = std::move(samples[5 * i + o]);
  }
  return s;
}

double riccati_from(const ChainState& c, std::size_t level, const Stencils& st) {
  const double eps = c.steps()[level - 1].epsilon;
  double worst = 0.0;
  for (const auto& p : st.at) {
    std::array<double, 5> w{};
    for (std::size_t o = 0; o < 5; ++o) w[o] = p[o].superpotential[level];
    const double target = p[2].potential[level - 1] - eps;
    worst = std::max(worst, std::abs(w[2] * w[2] + d1_5(w, st.h) - target));
  }
  return worst;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

VerifyCheck make_check(std::string name, double measured, double bound, std::string detail = {}) {
  VerifyCheck c;
  c.name = std::move(name);
  c.measured = measured;
  c.bound = bound;
  c.pass = std::isfinite(measured) && measured <= bound;
  c.detail = std::move(detail);
  return c;
}

bool all_nu_zero(const RunConfig& cfg) {
  return std::all_of(cfg.chain.begin(), cfg.chain.end(), [](const auto& s) { return s.second == 0.0; });
}

// Highest energy worth comparing against the finite-difference oracle.
double oracle_cutoff(const ModelSpec& m) {
  return m.kind == ModelKind::Morse ? m.k_wave * m.k_wave : std::numeric_limits<double>::infinity();
}

struct Loaded {
  RunConfig cfg;
  std::optional<ChainState> chain;
  int code = kExitOk;
};

Loaded load_and_build(const std::string& arg, std::ostream& err) {
  Loaded l;
  try {
    l.cfg = load_config(resolve_config(arg));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    l.code = kExitConfig;
    return l;
  }
  try {
    l.chain = build_chain(l.cfg.model, l.cfg.chain, l.cfg.grid);
  } catch (const ChainError& e) {
    err << "error: chain construction failed at step " << e.step() << " (epsilon = " << format_double(e.epsilon())
        << ", nu = " << format_double(e.nu()) << "): " << e.what() << "\n";
    l.code = kExitChain;
    return l;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    l.code = kExitConfig;
    return l;
  }
  const std::size_t top = l.cfg.levels.back();
  const std::size_t available = level_states(*l.chain, l.chain->depth(), top + 1).size();
  if (top >= available) {
    err << "error: levels: level " << top << " requested but the chain has " << available << " states\n";
    l.code = kExitConfig;
  }
  return l;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string csv_single(const std::vector<double>& xs, const std::vector<double>& v) {
  std::string s = "x,value\n";
  for (std::size_t i = 0; i < xs.size(); ++i) s += format_double(xs[i]) + "," + format_double(v[i]) + "\n";
  return s;
}

std::string csv_multi(const std::vector<double>& xs, const std::vector<std::size_t>& levels,
                      const std::vector<std::vector<double>>& cols) {
  std::string s = "x";
  for (std::size_t n : levels) s += ",level" + std::to_string(n);
  s += "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += format_double(xs[i]);
    for (const auto& col : cols) s += "," + format_double(col[i]);
    s += "\n";
  }
  return s;
}

std::string json_single(const std::vector<double>& xs, const std::vector<double>& v) {
  return json{{"x", xs}, {"value", v}}.dump() + "\n";
}

std::string json_multi(const std::vector<double>& xs, const std::vector<std::size_t>& levels,
                       const std::vector<std::vector<double>>& cols) {
  json lv = json::object();
  for (std::size_t i = 0; i < levels.size(); ++i) lv["level" + std::to_string(levels[i])] = cols[i];
  return json{{"x", xs}, {"levels", lv}}.dump() + "\n";
}

}  // namespace

std::map<std::string, double> default_bounds() {
  return {
      {"spectrum_oracle", 1e-3},     {"oracle_overlap", 1e-4}, {"riccati", 1e-6},
      {"eigenfunction_residual", 1e-5}, {"normalization", 1e-6}, {"orthogonality", 1e-6},
      {"ground_current", 0.0},       {"density_symmetry", 1e-9}, {"potential_paths", 1e-8},
  };
}

double riccati_residual(const ChainState& c, std::size_t level, const std::vector<double>& xs, double h) {
  if (level == 0 || level > c.depth()) throw std::out_of_range("riccati residual needs a chain level >= 1");
  return riccati_from(c, level, stencils(c, xs, h));
}

double schrodinger_residual(const std::function<double(double)>& psi, const std::function<double(double)>& v,
                            double energy, const std::vector<double>& xs, double h) {
  double worst = 0.0;
  double peak = 0.0;
  for (double x : xs) {
    std::array<double, 5> f{};
    for (int o = -2; o <= 2; ++o) f[static_cast<std::size_t>(o + 2)] = psi(x + o * h);
    peak = std::max(peak, std::abs(f[2]));
    worst = std::max(worst, std::abs(-d2_5(f, h) + (v(x) - energy) * f[2]));
  }
  if (peak == 0.0) throw Error("residual of an identically zero function");
  return worst / peak;
}

std::vector<VerifyCheck> verify_chain(const RunConfig& cfg, const ChainState& c,
                                      const std::map<std::string, double>& bounds) {
  const auto bound = [&](const std::string& name) {
    auto it = bounds.find(name);
    return it == bounds.end() ? default_bounds().at(name) : it->second;
  };
  const std::size_t k = c.depth();
  const Grid& g = cfg.grid;
  const double h = g.spacing();
  const std::vector<double> xs = g.points();
  const std::vector<ChainSample> samples = sample_chain(c, xs);
  std::vector<VerifyCheck> out;

  // Oracle eigenpairs.
  const double cutoff = oracle_cutoff(c.model());
  const auto states = level_states(c, k, 4);
  std::size_t n_cmp = 0;
  while (n_cmp < states.size() && states[n_cmp].energy < cutoff) ++n_cmp;
  std::vector<double> vk(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vk[i] = samples[i].potential[k];
  const ScalarField vfield(xs, vk);
  std::vector<std::vector<double>> psi(n_cmp, std::vector<double>(xs.size()));
  for (std::size_t n = 0; n < n_cmp; ++n) {
    for (std::size_t i = 0; i < xs.size(); ++i) psi[n][i] = eigenfunction_at(c, k, n, samples[i]).value;
  }
  if (n_cmp > 0) {
    const DiagonalizationResult dr = diagonalize(vfield, n_cmp);
    double worst = 0.0;
    double allowed = std::numeric_limits<double>::infinity();
    double overlap_deficit = 0.0;
    std::ostringstream detail;
    for (std::size_t n = 0; n < n_cmp; ++n) {
      const double e = states[n].energy;
      worst = std::max(worst, std::abs(dr.eigenvalues[n] - e));
      allowed = std::min(allowed, std::max(bound("spectrum_oracle"), 5.0 * h * h * std::max(1.0, std::abs(e))));
      const ScalarField a(xs, psi[n]);
      const ScalarField o(xs, dr.eigenvectors[n]);
      const double ov = inner_product(a, o) / std::sqrt(inner_product(a, a) * inner_product(o, o));
      overlap_deficit = std::max(overlap_deficit, 1.0 - std::abs(ov));
      detail << (n ? ", " : "") << format_double(e) << " vs " << format_double(dr.eigenvalues[n]);
    }
    for (const auto& w : dr.warnings) detail << "; " << w;
    out.push_back(make_check("spectrum_oracle", worst, allowed, detail.str()));
    out.push_back(make_check("oracle_overlap", overlap_deficit, bound("oracle_overlap")));
  }

  // Finite-difference residuals on a subsample.
  const std::vector<double> pts = check_points(g);
  const Stencils st = stencils(c, pts, 1e-3);
  if (k > 0) {
    double worst = 0.0;
    for (std::size_t level = 1; level <= k; ++level) worst = std::max(worst, riccati_from(c, level, st));
    out.push_back(make_check("riccati", worst, bound("riccati")));
  }
  {
    const std::size_t n_res = std::min<std::size_t>(n_cmp, 5);
    double worst = 0.0;
    for (std::size_t n = 0; n < n_res; ++n) {
      double res = 0.0;
      double peak = 0.0;
      for (const auto& p : st.at) {
        std::array<double, 5> f{};
        for (std::size_t o = 0; o < 5; ++o) f[o] = eigenfunction_at(c, k, n, p[o]).value;
        peak = std::max(peak, std::abs(f[2]));
        res = std::max(res, std::abs(-d2_5(f, st.h) + (p[2].potential[k] - states[n].energy) * f[2]));
      }
      worst = std::max(worst, res / peak);
    }
    out.push_back(make_check("eigenfunction_residual", worst, bound("eigenfunction_residual")));
  }
  {
    const std::size_t n_orth = std::min<std::size_t>(n_cmp, 4);
    double worst = 0.0;
    for (std::size_t m = 0; m < n_orth; ++m) {
      for (std::size_t n = m; n < n_orth; ++n) {
        const double ip = inner_product(ScalarField(xs, psi[m]), ScalarField(xs, psi[n]));
        worst = std::max(worst, std::abs(ip - (m == n ? 1.0 : 0.0)));
      }
    }
    out.push_back(make_check("orthogonality", worst, bound("orthogonality")));
  }

  // Spinor observables for the configured levels.
  {
    double norm_err = 0.0;
    double j0 = 0.0;
    for (std::size_t n : cfg.levels) {
      std::vector<double> rho(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const SpinorValue v = spinor_at(c, n, samples[i]);
        rho[i] = probability_density(v);
        if (n == 0) j0 = std::max(j0, std::abs(probability_current(v, c.model().units)));
      }
      norm_err = std::max(norm_err, std::abs(simpson(rho, h) - 1.0));
    }
    out.push_back(make_check("normalization", norm_err, bound("normalization")));
    if (cfg.levels.front() == 0) {
      const SpinorState s0 = assemble_spinor(c, 0);
      out.push_back(make_check("ground_current", s0.upper_vanishes ? j0 : 1.0, bound("ground_current"),
                               s0.upper_vanishes ? "upper component vanishes" : "upper component present"));
    }
  }
  if (c.model().kind == ModelKind::Oscillator && all_nu_zero(cfg)) {
    const double centre = c.model().well_center();
    const double reach = std::min(centre - g.x_min, g.x_max - centre);
    std::vector<double> offs;
    for (double d = 0.0; d <= reach; d += h) offs.push_back(d);
    std::vector<double> both;
    for (double d : offs) {
      both.push_back(centre + d);
      both.push_back(centre - d);
    }
    const auto sym = sample_chain(c, both);
    double worst = 0.0;
    for (std::size_t n : cfg.levels) {
      for (std::size_t i = 0; i < offs.size(); ++i) {
        const double a = probability_density(spinor_at(c, n, sym[2 * i]));
        const double b = probability_density(spinor_at(c, n, sym[2 * i + 1]));
        worst = std::max(worst, std::abs(a - b));
      }
    }
    out.push_back(make_check("density_symmetry", worst, bound("density_symmetry")));
  }
  if (k > 0) {
    double worst = 0.0;
    for (const auto& p : st.at) {
      const double rec = p[2].potential[k];
      const double wr = potential_k_wronskian(c, p[2].x);
      worst = std::max(worst, std::abs(rec - wr) / std::max(1.0, std::abs(rec)));
    }
    out.push_back(make_check("potential_paths", worst, bound("potential_paths")));
  }
  return out;
}

fs::path config_dir() {
  if (const char* env = std::getenv("SUSY_GRAPHENE_CONFIG_DIR")) {
    if (*env) return env;
  }
  return SUSY_GRAPHENE_CONFIG_DIR;
}

fs::path resolve_config(const std::string& arg) {
  const fs::path p(arg);
  if (fs::exists(p)) return p;
  if (p.parent_path().empty()) {
    fs::path bundled = config_dir() / p;
    if (bundled.extension() != ".json") bundled += ".json";
    if (fs::exists(bundled)) return bundled;
  }
  return p;
}

int cmd_run(const std::string& config, const std::optional<fs::path>& out_dir, std::optional<OutputFormat> format,
            std::ostream& out, std::ostream& err) {
  Loaded l = load_and_build(config, err);
  if (l.code != kExitOk) return l.code;
  const RunConfig& cfg = l.cfg;
  const ChainState& c = *l.chain;
  const OutputFormat fmt = format.value_or(cfg.format);
  const fs::path dir = out_dir.value_or(fs::current_path());
  const std::string stem = resolve_config(config).stem().string();
  try {
    fs::create_directories(dir);
    const std::vector<double> xs = cfg.grid.points();
    const std::vector<ChainSample> samples = sample_chain(c, xs);
    const std::size_t k = c.depth();
    const double bf = c.model().units.field_factor();
    const char* ext = fmt == OutputFormat::Csv ? ".csv" : ".json";
    for (OutputKind kind : cfg.outputs) {
      const fs::path path = dir / (stem + "_" + output_name(kind) + (kind == OutputKind::Spectrum ? ".json" : ext));
      std::string body;
      if (kind == OutputKind::Potential || kind == OutputKind::Field) {
        std::vector<double> v(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
          v[i] = kind == OutputKind::Potential ? samples[i].potential[k] : bf * samples[i].superpotential_prime[k];
        }
        body = fmt == OutputFormat::Csv ? csv_single(xs, v) : json_single(xs, v);
      } else if (kind == OutputKind::Density || kind == OutputKind::Current) {
        std::vector<std::vector<double>> cols;
        for (std::size_t n : cfg.levels) {
          std::vector<double> col(xs.size());
          for (std::size_t i = 0; i < xs.size(); ++i) {
            const SpinorValue v = spinor_at(c, n, samples[i]);
            col[i] = kind == OutputKind::Density ? probability_density(v)
                                                 : probability_current(v, c.model().units);
          }
          cols.push_back(std::move(col));
        }
        body = fmt == OutputFormat::Csv ? csv_multi(xs, cfg.levels, cols) : json_multi(xs, cfg.levels, cols);
      } else {
        const auto states = level_states(c, k, cfg.levels.back() + 1);
        json levels = json::array();
        for (std::size_t n : cfg.levels) {
          levels.push_back({{"n", n},
                            {"schrodinger_energy", states[n].energy},
                            {"dirac_energy", dirac_energy(c.model().units, states[n].energy)}});
        }
        body = json{{"model", c.model().kind == ModelKind::Oscillator ? "oscillator" : "morse"},
                    {"depth", k},
                    {"levels", levels}}
                   .dump(2) +
               "\n";
      }
      write_file(path, body);
      out << path.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_verify(const std::string& config, const std::vector<std::string>& tolerances, std::ostream& out,
               std::ostream& err) {
  std::map<std::string, double> bounds = default_bounds();
  for (const std::string& t : tolerances) {
    const auto eq = t.find('=');
    const std::string name = eq == std::string::npos ? t : t.substr(0, eq);
    double value = 0.0;
    bool ok = eq != std::string::npos;
    if (ok) {
      char* end = nullptr;
      const std::string num = t.substr(eq + 1);
      value = std::strtod(num.c_str(), &end);
      ok = !num.empty() && end && *end == '\0' && value >= 0.0;
    }
    if (!ok || (name != "all" && !bounds.count(name))) {
      err << "error: bad tolerance override \"" << t << "\" (expected NAME=VALUE, NAME one of all";
      for (const auto& [n, _] : bounds) err << ", " << n;
      err << ")\n";
      return kExitConfig;
    }
    if (name == "all") {
      for (auto& [_, b] : bounds) b = value;
    } else {
      bounds[name] = value;
    }
  }
  Loaded l = load_and_build(config, err);
  if (l.code != kExitOk) return l.code;
  std::vector<VerifyCheck> checks;
  try {
    checks = verify_chain(l.cfg, *l.chain, bounds);
  } catch (const std::exception& e) {
    err << "error: verification aborted: " << e.what() << "\n";
    return kExitFailed;
  }
  json report = json::array();
  bool all = true;
  for (const auto& ch : checks) {
    report.push_back({{"name", ch.name}, {"measured", ch.measured}, {"bound", ch.bound}, {"pass", ch.pass},
                      {"detail", ch.detail}});
    if (!ch.pass) {
      all = false;
      err << "FAILED " << ch.name << ": " << format_double(ch.measured) << " > " << format_double(ch.bound) << "\n";
    }
  }
  out << json{{"config", resolve_config(config).string()}, {"checks", report}, {"pass", all}}.dump(2) << "\n";
  return all ? kExitOk : kExitFailed;
}

int cmd_list_examples(std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(config_dir(), ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) {
    err << "error: cannot read config directory " << config_dir().string() << "\n";
    return kExitFailed;
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string desc;
    try {
      desc = load_config(f).description;
    } catch (const Error& e) {
      desc = std::string("(invalid: ") + e.what() + ")";
    }
    out << f.stem().string() << "\t" << desc << "\n";
  }
  return kExitOk;
}

}  // namespace susy
