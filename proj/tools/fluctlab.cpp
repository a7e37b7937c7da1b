// Command-line driver: subcommand dispatch over the experiment runner.
// Flags mirror config keys; --config loads a file first, then flag overrides
// and --set key=value assignments are applied in order of appearance.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fluctlab/runner.hpp"

namespace {

bool is_list_key(const std::string& key) {
  return key == "n.list" || key == "g.set" || key == "sample.times" ||
         key == "env.values" || key == "env.probs" || key == "env.period" ||
         key == "env.table";
}

std::string normalize_value(const std::string& key, const std::string& value) {
  if (is_list_key(key) && (value.empty() || value.front() != '['))
    return "[" + value + "]";
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluctlab: exclusion process with conductances in random "
               "environments -- simulation, homogenization and fluctuation "
               "verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::pair<std::string, std::string>> overrides;

  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--out", out_dir, "output directory for CSVs and manifest");
  app.add_option_function<std::vector<std::string>>(
      "--set",
      [&](const std::vector<std::string>& kvs) {
        for (const auto& kv : kvs) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos)
            throw CLI::ValidationError("--set expects key=value");
          overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
      },
      "explicit config override key=value (repeatable)");

  const std::pair<const char*, const char*> mirrors[] = {
      {"--N", "N"},           {"--d", "d"},
      {"--rho", "rho"},       {"--b", "b"},
      {"--T", "T"},           {"--replicas", "replicas"},
      {"--seed", "seed"},     {"--lambda", "lambda"},
      {"--N-list", "n.list"}, {"--K", "ou.k"},
      {"--nref", "ou.nref"},  {"--threads", "threads"},
      {"--G-set", "g.set"},   {"--sample-times", "sample.times"},
      {"--empirical", "empirical"}, {"--f", "g.set"},
  };
  for (const auto& [flag, key] : mirrors) {
    app.add_option_function<std::string>(
        flag,
        [&overrides, key = std::string(key)](const std::string& v) {
          overrides.emplace_back(key, v);
        },
        std::string("sets config key ") + key);
  }

  for (const auto& name : fluctlab::subcommand_names()) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    fluctlab::ExperimentConfig cfg =
        config_path.empty() ? fluctlab::ExperimentConfig{}
                            : fluctlab::ExperimentConfig::from_file(config_path);
    for (const auto& [key, value] : overrides)
      cfg.set(key, normalize_value(key, value));
    const std::string sub = app.get_subcommands().front()->get_name();
    return fluctlab::run_subcommand(cfg, sub, out_dir);
  } catch (const fluctlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
