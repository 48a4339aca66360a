#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlc/serialize.hpp"

namespace qlc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCounterexample = 3;

struct ParamSpec {
  std::string name;
  Json fallback;  // null: required
  std::string help;
};

struct RunContext;
using Runner = std::function<int(RunContext&)>;

struct KindSpec {
  std::string command;  // generate | analyze | scan
  std::string kind;
  std::string help;
  std::string extension;  // default output extension
  std::vector<ParamSpec> params;
  Runner run;
};

const std::vector<KindSpec>& kinds();
const KindSpec* find_kind(const std::string& command, const std::string& kind);

// Effective configuration: every parameter resolved, plus runtime settings
// (out, threads, overwrite) that never enter the hash.
struct RunContext {
  const KindSpec* spec = nullptr;
  Json params = Json::object();
  std::filesystem::path out;
  unsigned threads = 1;
  bool overwrite = false;
  std::string hash;

  Json hashed_config() const;  // command, kind, params
  Json effective_config() const;

  const Json& param(const std::string& key) const;
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

  // Refuses to replace an output produced under a different config hash.
  void guard_output(const std::filesystem::path& p) const;
  void write_text(const std::filesystem::path& p, const std::string& text) const;
  void write_json(const std::filesystem::path& p, Json j) const;
  void write_sidecars() const;
  std::filesystem::path sibling(const std::string& suffix) const;
};

std::string fnv1a_hex(const std::string& data);
std::string config_hash(const Json& hashed);
// Reads the config hash embedded in an existing output (JSON key, or a
// "config_hash=" token on the first line of text formats).
std::optional<std::string> embedded_hash(const std::filesystem::path& p);

// Merges config-file params, then explicit flags, over defaults; validates
// required fields and rejects unknown ones.
RunContext resolve(const KindSpec& spec, const Json& file_params, const Json& flag_params);

}  // namespace qlc::cli
