// susy-graphene: run, verify and list the bundled chain configurations.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "susy_graphene/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Darboux-deformed magnetic fields for Dirac electrons in graphene"};
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  std::string format;
  auto* run = app.add_subcommand("run", "Write the configured fields and spectrum to files");
  run->add_option("config", run_config, "Config file or bundled example name")->required();
  run->add_option("--out", out_dir, "Output directory (default: current directory)");
  run->add_option("--format", format, "Override the config's output format")->check(CLI::IsMember({"csv", "json"}));

  std::string verify_config;
  std::vector<std::string> tolerances;
  auto* verify = app.add_subcommand("verify", "Check the configured chain against the finite-difference oracle");
  verify->add_option("config", verify_config, "Config file or bundled example name")->required();
  verify->add_option("--tol", tolerances, "Override a check bound, NAME=VALUE (NAME may be 'all')")
      ->allow_extra_args(false);

  auto* examples = app.add_subcommand("examples", "List the bundled figure configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : susy::kExitConfig;
  }

  if (run->parsed()) {
    std::optional<std::filesystem::path> dir;
    if (!out_dir.empty()) dir = out_dir;
    std::optional<susy::OutputFormat> fmt;
    if (format == "csv") fmt = susy::OutputFormat::Csv;
    if (format == "json") fmt = susy::OutputFormat::Json;
    return susy::cmd_run(run_config, dir, fmt, std::cout, std::cerr);
  }
  if (verify->parsed()) return susy::cmd_verify(verify_config, tolerances, std::cout, std::cerr);
  if (examples->parsed()) return susy::cmd_list_examples(std::cout, std::cerr);
  return susy::kExitConfig;
}
