// spns: command-line front end.  One command per process; see --help.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spns/cli.hpp"
#include "spns/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_config(const fs::path& path) {
  std::ifstream in(path);
  spns::require(in.good(), spns::ErrorKind::config, "cannot read config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    spns::fail(spns::ErrorKind::config, "config " + path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparseness, frequency and heat-flow experiments for periodic Navier-Stokes data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Configs are JSON; unknown keys are rejected.\n"
      "Exit codes: 0 pass, 1 verdict or precondition fail, 2 config/input error, 3 resolution/domain error.\n"
      "SPNS_REGISTRY overrides the constants registry path.");

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "Seed for randomized inputs (overrides the config's \"seed\")");
  app.add_option("--out", out_dir, "Output directory for reports (bundle: archive path)");
  app.add_option("--threads", threads, "Worker threads (the current modules run single-threaded)")
      ->check(CLI::PositiveNumber);

  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"certify", "(eps, beta, ell)-sparseness certificate of a field"},
      {"freq", "frequency sparseness, block energies and the Besov norm"},
      {"heat-decay", "heat-flow decay lemma, its frequency version, or the heat drop"},
      {"ns-run", "Navier-Stokes run with snapshots and the monitor CSV"},
      {"criterion", "threshold table of the sparseness criterion"},
      {"region", "admissible (zeta_x, zeta_t) region"},
      {"calibrate", "recompute the constants registry"}};
  for (const auto& name : spns::cli::commands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    subs[name] = sub;
  }
  std::string from_bundle;
  subs["certify"]->add_option("--from-bundle", from_bundle, "Re-run a bundled certify and compare")
      ->check(CLI::ExistingFile);
  int region_d = 0;
  std::string region_p;
  subs["region"]->add_option("--d", region_d, "Dimension (overrides the config)");
  subs["region"]->add_option("--p", region_p, "Exponent, rational or \"inf\" (overrides the config)");

  std::string run_dir;
  auto* bundle = app.add_subcommand("bundle", "pack a run directory into a tar archive with a manifest");
  bundle->add_option("--run", run_dir, "Run directory written by --out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bundle->parsed()) {
      spns::require(!out_dir.empty(), spns::ErrorKind::config, "bundle needs --out ARCHIVE");
      const json manifest = spns::cli::write_bundle(run_dir, out_dir);
      std::cout << manifest.dump(2) << '\n';
      return 0;
    }

    spns::cli::RunContext ctx;
    if (app.count("--seed") > 0) ctx.seed = seed;
    ctx.out = out_dir;
    ctx.threads = threads;

    std::string command;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) command = name;
    }

    if (command == "certify" && !from_bundle.empty()) {
      const auto r = spns::cli::certify_from_bundle(from_bundle, ctx);
      std::cout << r.report.dump(2) << '\n';
      return r.exit_code;
    }

    json config = json::object();
    if (!config_path.empty()) {
      config = read_config(config_path);
      ctx.config_dir = fs::path(config_path).parent_path();
      if (ctx.config_dir.empty()) ctx.config_dir = ".";
    } else {
      spns::require(command == "region" || command == "calibrate", spns::ErrorKind::config,
                    command + " needs --config PATH");
    }
    if (command == "region") {
      if (region_d != 0) config["d"] = region_d;
      if (!region_p.empty()) config["p"] = region_p;
    }

    const auto r = spns::cli::run(command, config, ctx);
    std::cout << r.report.dump(2) << '\n';
    return r.exit_code;
  } catch (const spns::Error& e) {
    std::cerr << "error (" << spns::to_string(e.kind()) << "): " << e.what() << '\n';
    return spns::cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
