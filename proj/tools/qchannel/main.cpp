// Copyright 2026 The qchannel Authors
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

// qchannel: batch front end for the transfer-channel engines.
//
//   qchannel <command> [--config FILE] [--flag value ...] [--dry-run]
//
// Settings layer as command defaults < config file < flags.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qchannel/version.hpp"

namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"spectrum", "per-step ancilla spectra, entropies and purity"},
      {"purity", "ensemble-mean stationary purity over a depth range"},
      {"trajectory", "pairwise-fidelity purity estimate per step"},
      {"scan", "min-entropy along one long chain of cuts and its power spectrum"},
      {"kicked-ising-check", "self-dual kicked Ising identities"},
      {"xxz", "min-entropy convergence of translation-invariant circuits"},
      {"validate", "oracle, canonical-form and engine cross-checks"}};
  return d;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;  // by setting key
  std::string config_path;
  bool dry_run = false;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace qchannel;
  CLI::App app{"Transfer-channel spectra of finite-depth brickwork circuits"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::map<std::string, Subcommand> subs;
  for (const auto& name : known_commands()) {
    Subcommand& s = subs[name];
    s.app = app.add_subcommand(name, descriptions().at(name));
    s.app->add_option("--config", s.config_path, "INI or JSON config file, or an emitted manifest");
    s.app->add_flag("--dry-run", s.dry_run, "print the resolved configuration and exit");
    for (const auto& f : config_fields()) {
      s.app->add_option("--" + f.flag, s.values[f.key], f.help + " [" + f.key + "]");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kBadConfig;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      RunConfig config;
      config.command = name;
      apply_settings(config, cli::command_defaults(name));
      if (!s.config_path.empty()) {
        const ConfigFile file = read_config_file(s.config_path);
        if (file.command && *file.command != name) {
          throw ConfigError("config file was written by '" + *file.command + "', not '" + name + "'");
        }
        apply_settings(config, file.settings);
      }
      Settings flags;
      for (const auto& f : config_fields()) {
        if (s.app->count("--" + f.flag) > 0) flags[f.key] = s.values[f.key];
      }
      apply_settings(config, flags);
      validate(config);
      if (s.dry_run) {
        std::cout << config_ini(config);
        return cli::kOk;
      }
      return cli::run(config);
    } catch (const ConfigError& e) {
      std::cerr << "qchannel " << name << ": configuration error: " << e.what() << "\n";
      return cli::kBadConfig;
    } catch (const std::exception& e) {
      std::cerr << "qchannel " << name << ": " << e.what() << "\n";
      return cli::kRuntimeError;
    }
  }
  return cli::kBadConfig;
}
