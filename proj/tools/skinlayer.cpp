// skinlayer CLI: verification harness for the impedance-condition library.
//
//   skinlayer rates           convergence-rate studies, CSV/JSON artifacts
//   skinlayer profiles-check  boundary-layer profile displays vs recursion
//   skinlayer symbol-check    impedance-symbol coercivity / remainder scans
//   skinlayer curl-check      local-coordinate curl and tensor identities
//   skinlayer decay-check     interior exponential-decay rate
//
// Option precedence: defaults < --config file < command-line flags; the
// SKINLAYER_OUT environment variable overrides the output directory last.

#include <CLI11.hpp>

#include "skinlayer/harness.hpp"

using skinlayer::harness::RunConfig;

namespace {

struct CliOverrides {
  std::string config_path, out_dir, delta_list, orders_list, modes_list, study;
  std::uint64_t seed = 0;
  bool seed_set = false, json_out = false;
};

void attach_common(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config_path, "key = value configuration file");
  cmd->add_option("--out", ov.out_dir, "output directory for artifacts");
  cmd->add_option("--delta", ov.delta_list, "comma-separated skin-depth sweep");
  cmd->add_option("--orders", ov.orders_list, "comma-separated GIBC orders (0..3)");
  cmd->add_option("--modes", ov.modes_list, "comma-separated mode degrees");
  cmd->add_option("--seed", ov.seed, "seed for randomized property checks")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  cmd->add_flag("--json", ov.json_out, "also print the JSON summary to stdout");
}

RunConfig build_config(const CliOverrides& ov) {
  RunConfig cfg;
  if (!ov.config_path.empty()) skinlayer::harness::load_config_file(cfg, ov.config_path);
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (!ov.delta_list.empty()) skinlayer::harness::apply_key_value(cfg, "delta", ov.delta_list);
  if (!ov.orders_list.empty()) skinlayer::harness::apply_key_value(cfg, "orders", ov.orders_list);
  if (!ov.modes_list.empty()) skinlayer::harness::apply_key_value(cfg, "modes", ov.modes_list);
  if (!ov.study.empty()) cfg.study = ov.study;
  if (ov.seed_set) cfg.seed = ov.seed;
  cfg.json_stdout = cfg.json_stdout || ov.json_out;
  skinlayer::harness::apply_environment(cfg);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skin-effect impedance boundary condition verification harness"};
  app.require_subcommand(1);

  CliOverrides ov;
  auto* rates = app.add_subcommand("rates", "convergence-rate studies");
  rates->add_option("--study", ov.study, "gibc, truncation or both");
  auto* profiles = app.add_subcommand("profiles-check", "layer-profile golden comparisons");
  auto* symbols = app.add_subcommand("symbol-check", "impedance-symbol scans");
  auto* curl = app.add_subcommand("curl-check", "geometry and curl identities");
  auto* decay = app.add_subcommand("decay-check", "interior decay rate");
  for (auto* c : {rates, profiles, symbols, curl, decay}) attach_common(c, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = build_config(ov);
    if (rates->parsed()) return skinlayer::harness::cmd_rates(cfg);
    if (profiles->parsed()) return skinlayer::harness::cmd_profiles_check(cfg);
    if (symbols->parsed()) return skinlayer::harness::cmd_symbol_check(cfg);
    if (curl->parsed()) return skinlayer::harness::cmd_curl_check(cfg);
    if (decay->parsed()) return skinlayer::harness::cmd_decay_check(cfg);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 2;
}
