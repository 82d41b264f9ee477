// Copyright 2026 The cocycle-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// cocycle-lab command line driver. Talks to the library through the C API only.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cocycle/cocycle_lab.h"

namespace {

struct Invocation {
  std::string config_path;
  std::string out = "-";
  std::optional<uint64_t> seed;
  unsigned threads = 0;
  std::vector<std::string> sets;
  std::vector<std::string> positional;
  std::map<std::string, std::string> keyed;
};

bool shared_section(const std::string& section, const std::string& sub) {
  return section == sub || section == "potential" || section == "frequency" ||
         section == "uh" || section == "run";
}

int report(cl_status s) {
  std::fprintf(stderr, "cocycle-lab: %s\n", cl_last_error());
  return cl_exit_code(s);
}

int run(const std::string& sub, const Invocation& inv) {
  cl_config* cfg = nullptr;
  cl_status s = inv.config_path.empty() ? cl_config_new(&cfg)
                                        : cl_config_load_file(inv.config_path.c_str(), &cfg);
  if (s != CL_OK) return report(s);
  auto apply = [&](const std::string& key, const std::string& value) {
    return cl_config_set(cfg, key.c_str(), value.c_str());
  };
  for (const auto& [key, value] : inv.keyed) {
    if ((s = apply(key, value)) != CL_OK) break;
  }
  std::vector<std::string> all = inv.positional;
  all.insert(all.end(), inv.sets.begin(), inv.sets.end());
  for (size_t i = 0; s == CL_OK && i < all.size(); ++i) {
    const std::string& a = all[i];
    size_t eq = a.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "cocycle-lab: override '%s' is not section.key=value\n", a.c_str());
      cl_config_free(cfg);
      return 2;
    }
    s = apply(a.substr(0, eq), a.substr(eq + 1));
  }
  if (s == CL_OK) {
    const uint64_t* seed = inv.seed ? &*inv.seed : nullptr;
    s = cl_run(cfg, sub.c_str(), inv.out.c_str(), seed, inv.threads);
  }
  cl_config_free(cfg);
  return s == CL_OK ? 0 : report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-periodic Schrodinger cocycle experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cl_version());

  std::vector<std::string> keys;
  for (const char* const* k = cl_config_keys(); *k; ++k) keys.emplace_back(*k);

  std::map<std::string, Invocation> invocations;
  for (const char* const* name = cl_subcommands(); *name; ++name) {
    std::string sub = *name;
    Invocation& inv = invocations[sub];
    CLI::App* cmd = app.add_subcommand(sub);
    cmd->add_option("--config", inv.config_path, "Configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", inv.out, "Output CSV path, - for stdout");
    cmd->add_option("--seed", inv.seed, "Random seed (overrides run.seed)");
    cmd->add_option("--threads", inv.threads, "Worker threads (overrides run.threads)")
        ->check(CLI::Range(1u, 1024u));
    cmd->add_option("--set", inv.sets, "Override section.key=value")->take_all();
    cmd->add_option("overrides", inv.positional, "section.key=value overrides");
    for (const std::string& key : keys) {
      std::string section = key.substr(0, key.find('.'));
      if (!shared_section(section, sub)) continue;
      cmd->add_option_function<std::string>(
             "--" + key, [&inv, key](const std::string& v) { inv.keyed[key] = v; },
             "Set " + key)
          ->group("Config overrides");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (CLI::App* cmd : app.get_subcommands()) {
    return run(cmd->get_name(), invocations[cmd->get_name()]);
  }
  return 2;
}
