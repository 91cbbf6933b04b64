#pragma once

// Command implementations behind the susy-graphene executable, plus the
// verification checks they run. Exit codes: 0 success, 1 failed checks or
// runtime error, 2 invalid configuration, 3 chain construction failure.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "susy_graphene/chain.hpp"
#include "susy_graphene/config.hpp"

namespace susy {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitConfig = 2, kExitChain = 3 };

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

/// Default bounds, keyed by check name.
std::map<std::string, double> default_bounds();

/// Oracle, residual, normalization and symmetry checks for a built chain.
/// The eigenvalue bound is max(bound, 5 h^2 max(1, |E|)) per level; only
/// levels below k^2 are compared for Morse.
std::vector<VerifyCheck> verify_chain(const RunConfig& cfg, const ChainState& c,
                                      const std::map<std::string, double>& bounds);

/// max over xs of |W_level^2 + W_level' - (V_{level-1} - eps_level)|, W' by a
/// 5-point difference with step h.
double riccati_residual(const ChainState& c, std::size_t level, const std::vector<double>& xs, double h = 1e-3);

/// max over xs of |-psi'' + (V - E) psi| / max over xs of |psi|, psi'' by a
/// 5-point difference with step h.
double schrodinger_residual(const std::function<double(double)>& psi, const std::function<double(double)>& v,
                            double energy, const std::vector<double>& xs, double h = 1e-3);

/// Directory holding the bundled configs: $SUSY_GRAPHENE_CONFIG_DIR, else the
/// build-time location.
std::filesystem::path config_dir();

/// A path as given, or the bundled config of that name ("fig2" or "fig2.json").
std::filesystem::path resolve_config(const std::string& arg);

int cmd_run(const std::string& config, const std::optional<std::filesystem::path>& out_dir,
            std::optional<OutputFormat> format, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config, const std::vector<std::string>& tolerances, std::ostream& out,
               std::ostream& err);
int cmd_list_examples(std::ostream& out, std::ostream& err);

}  // namespace susy
