#include "config.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "qlc/errors.hpp"

namespace qlc::cli {

const KindSpec* find_kind(const std::string& command, const std::string& kind) {
  for (const auto& k : kinds())
    if (k.command == command && k.kind == kind) return &k;
  return nullptr;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const Json& hashed) {
  // nlohmann::json (unordered variant) sorts keys, which makes the text canonical
  return fnv1a_hex(nlohmann::json::parse(hashed.dump()).dump());
}

Json RunContext::hashed_config() const {
  Json j = Json::object();
  j["command"] = spec->command;
  j["kind"] = spec->kind;
  j["params"] = params;
  return j;
}

Json RunContext::effective_config() const {
  Json j = hashed_config();
  j["config_hash"] = hash;
  j["out"] = out.string();
  j["threads"] = threads;
  return j;
}

const Json& RunContext::param(const std::string& key) const {
  if (!params.contains(key)) throw ValidationError("unknown parameter '" + key + "'");
  return params.at(key);
}

std::string RunContext::str(const std::string& key) const {
  const Json& v = param(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

double RunContext::num(const std::string& key) const {
  const Json& v = param(key);
  try {
    if (v.is_number()) return v.get<double>();
    std::size_t used = 0;
    double d = std::stod(v.get<std::string>(), &used);
    if (used != v.get<std::string>().size()) throw std::invalid_argument("trailing text");
    return d;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + key + "' must be a number, got " + v.dump());
  }
}

long long RunContext::integer(const std::string& key) const {
  const Json& v = param(key);
  try {
    if (v.is_number_integer()) return v.get<long long>();
    std::size_t used = 0;
    long long n = std::stoll(v.get<std::string>(), &used);
    if (used != v.get<std::string>().size()) throw std::invalid_argument("trailing text");
    return n;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + key + "' must be an integer, got " + v.dump());
  }
}

bool RunContext::flag(const std::string& key) const {
  const Json& v = param(key);
  if (v.is_boolean()) return v.get<bool>();
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ValidationError("parameter '" + key + "' must be true or false");
}

std::vector<std::string> RunContext::list(const std::string& key) const {
  const Json& v = param(key);
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    return out;
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::optional<std::string> embedded_hash(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::string first;
  std::getline(in, first);
  auto pos = first.find("config_hash=");
  if (pos != std::string::npos) {
    std::string rest = first.substr(pos + 12);
    return rest.substr(0, rest.find_first_of(" \t\r"));
  }
  in.clear();
  in.seekg(0);
  try {
    Json j = Json::parse(in);
    if (j.is_object() && j.contains("config_hash")) return j.at("config_hash").get<std::string>();
  } catch (const std::exception&) {
  }
  return std::string();
}

void RunContext::guard_output(const std::filesystem::path& p) const {
  if (overwrite || !std::filesystem::exists(p)) return;
  auto h = embedded_hash(p);
  if (h && *h != hash)
    throw ValidationError("output " + p.string() + " was produced by config " + (h->empty() ? "<unknown>" : *h) +
                          ", current config is " + hash + "; pass --overwrite or choose another --out");
}

void RunContext::write_text(const std::filesystem::path& p, const std::string& text) const {
  guard_output(p);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + p.string());
    os << text;
  }
  std::filesystem::rename(tmp, p);
}

void RunContext::write_json(const std::filesystem::path& p, Json j) const {
  j["config_hash"] = hash;
  write_text(p, dump(j));
}

std::filesystem::path RunContext::sibling(const std::string& suffix) const {
  auto p = out;
  p += suffix;
  return p;
}

void RunContext::write_sidecars() const {
  write_text(sibling(".config.json"), dump(effective_config()));
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json meta = Json::object();
  meta["config_hash"] = hash;
  meta["created"] = stamp;
  auto p = sibling(".meta.json");
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream(p) << dump(meta);
}

namespace {

// Flag values arrive as text; give them the type of the default so that
// flags and config files hash identically.
Json coerce(const ParamSpec& p, const Json& v) {
  if (!v.is_string()) return v;
  const std::string s = v.get<std::string>();
  try {
    std::size_t used = 0;
    if (p.fallback.is_boolean()) {
      if (s == "true" || s == "1") return true;
      if (s == "false" || s == "0") return false;
    } else if (p.fallback.is_number_integer()) {
      long long n = std::stoll(s, &used);
      if (used == s.size()) return n;
    } else if (p.fallback.is_number_float()) {
      double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } else {
      return v;
    }
  } catch (const std::exception&) {
  }
  throw ValidationError("parameter '" + p.name + "' expects " + std::string(p.fallback.type_name()) + ", got '" + s + "'");
}

}  // namespace

RunContext resolve(const KindSpec& spec, const Json& file_params, const Json& flag_params) {
  RunContext ctx;
  ctx.spec = &spec;
  for (const auto* src : {&file_params, &flag_params}) {
    if (src->is_null()) continue;
    if (!src->is_object()) throw ValidationError("params must be a JSON object");
    for (const auto& [k, v] : src->items()) {
      bool known = false;
      for (const auto& p : spec.params) known = known || p.name == k;
      if (!known) throw ValidationError("unknown parameter '" + k + "' for " + spec.command + " " + spec.kind);
    }
  }
  for (const auto& p : spec.params) {
    Json v = p.fallback;
    if (file_params.is_object() && file_params.contains(p.name)) v = file_params.at(p.name);
    if (flag_params.is_object() && flag_params.contains(p.name)) v = flag_params.at(p.name);
    if (v.is_null()) throw ValidationError("missing required parameter '" + p.name + "' (--" + p.name + ")");
    v = coerce(p, v);
    ctx.params[p.name] = v;
  }
  ctx.hash = config_hash(ctx.hashed_config());
  return ctx;
}

}  // namespace qlc::cli
