#pragma once

// JSON run configurations. Schema:
//
//   {
//     "description": "...",                          optional
//     "model": {"kind": "oscillator", "omega": 1, "k_wave": 1,
//               "units": {"hbar": 1, "c": 1, "e_charge": 1, "v_fermi": 1}},
//          or {"kind": "morse", "alpha": 1, "d_strength": 1, "k_wave": 6},
//     "chain": [{"epsilon": -0.2, "nu": 0}, ...],      epsilons <= 0, strictly decreasing
//     "grid": {"x_min": -22, "x_max": 18, "n_points": 4001},   optional
//     "outputs": ["potential", "field", "density", "current", "spectrum"],
//     "levels": [0, 1, 2, 3],                          optional, default 0..3
//     "format": "csv"                                  optional, csv | json
//   }
//
// Validation failures raise ConfigError carrying the line of the offending value.

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "susy_graphene/errors.hpp"
#include "susy_graphene/grid.hpp"
#include "susy_graphene/model.hpp"

namespace susy {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  /// 1-based line in the source text, 0 when unknown.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class OutputKind { Potential, Field, Density, Current, Spectrum };
enum class OutputFormat { Csv, Json };

const char* output_name(OutputKind k) noexcept;

struct RunConfig {
  std::string description;
  ModelSpec model;
  std::vector<std::pair<double, double>> chain;  // (epsilon, nu)
  Grid grid;
  std::vector<OutputKind> outputs;  // sorted, unique
  std::vector<std::size_t> levels;  // sorted, unique
  OutputFormat format = OutputFormat::Csv;
};

/// Parses and validates `text`; `origin` prefixes error messages ("file:line: ...").
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace susy
