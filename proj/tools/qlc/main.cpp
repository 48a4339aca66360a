#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "config.hpp"
#include "qlc/errors.hpp"

using namespace qlc;
using namespace qlc::cli;

namespace {

std::filesystem::path default_out(const KindSpec& k) {
  const char* dir = std::getenv("QLC_OUT_DIR");
  return std::filesystem::path(dir && *dir ? dir : ".") / (k.kind + k.extension);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlc: finite local complexity and spectral tools for measures on the line"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool overwrite = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  struct Slot {
    const KindSpec* spec;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
  };
  std::vector<std::unique_ptr<Slot>> slots;

  std::map<std::string, CLI::App*> groups;
  for (const char* c : {"generate", "analyze", "scan"}) {
    auto* g = app.add_subcommand(c, std::string(c) + " commands");
    g->require_subcommand(1);
    groups[c] = g;
  }
  for (const auto& k : kinds()) {
    auto slot = std::make_unique<Slot>();
    slot->spec = &k;
    slot->app = groups.at(k.command)->add_subcommand(k.kind, k.help);
    auto* sub = slot->app;
    for (const auto& p : k.params) {
      std::string flag = "--" + p.name;
      if (p.name.size() == 1) flag = "-" + p.name + "," + flag;
      std::string dashed = p.name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != p.name) flag += ",--" + dashed;
      std::string help = p.help;
      help += p.fallback.is_null() ? " (required)" : " [default: " + p.fallback.dump() + "]";
      if (p.fallback.is_boolean()) sub->add_flag(flag, slot->switches[p.name], help);
      else sub->add_option(flag, slot->values[p.name], help);
    }
    sub->add_option("--config", config_path, "JSON file with parameter values");
    sub->add_option("-o,--out", out_path, "output path [default: $QLC_OUT_DIR/<kind><ext>]");
    sub->add_flag("--overwrite", overwrite, "replace an output produced by another config");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    slots.push_back(std::move(slot));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  for (auto& slot : slots) {
    if (!slot->app->parsed()) continue;
    try {
      Json file_params;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ValidationError("cannot open config " + config_path);
        Json j = Json::parse(in);
        file_params = j.contains("params") ? j.at("params") : j;
      }
      Json flag_params = Json::object();
      for (const auto& p : slot->spec->params)
        if (slot->app->count("--" + p.name) > 0) {
          if (p.fallback.is_boolean()) flag_params[p.name] = slot->switches[p.name];
          else flag_params[p.name] = slot->values[p.name];
        }
      RunContext ctx = resolve(*slot->spec, file_params, flag_params);
      ctx.out = out_path.empty() ? default_out(*slot->spec) : std::filesystem::path(out_path);
      ctx.threads = threads;
      ctx.overwrite = overwrite;
      return slot->spec->run(ctx);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitValidation;
    }
  }
  return kExitValidation;
}
