#include "spns/registry.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "spns/errors.hpp"

namespace spns {

namespace {

bool same_key(const RegistryEntry& e, const std::string& kernel, int d, double p) {
  return e.kernel == kernel && e.d == d && (e.p == p || (std::isinf(e.p) && std::isinf(p)));
}

std::string describe(const std::string& kernel, int d, double p) {
  return kernel + "/d=" + std::to_string(d) + "/p=" + (std::isinf(p) ? "inf" : std::to_string(p));
}

}  // namespace

nlohmann::json exponent_to_json(double p) {
  return std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
}

double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    require(j.get<std::string>() == "inf", ErrorKind::config, "exponent must be a number or \"inf\"");
    return std::numeric_limits<double>::infinity();
  }
  require(j.is_number(), ErrorKind::config, "exponent must be a number or \"inf\"");
  return j.get<double>();
}

double RegistryEntry::f_of_gamma(double gamma) const {
  for (const auto& [g, f] : f_table) {
    if (g <= gamma) return f;
  }
  fail(ErrorKind::calibration,
       "f(gamma) is not tabulated for gamma = " + std::to_string(gamma) +
           " (below the smallest calibrated value; no extrapolation)");
}

const RegistryEntry& ConstantsRegistry::get(const std::string& kernel, int d, double p) const {
  for (const auto& e : entries) {
    if (same_key(e, kernel, d, p)) return e;
  }
  fail(ErrorKind::calibration,
       "constants registry " + version + " has no entry for " + describe(kernel, d, p) +
           "; run `spns calibrate`");
}

bool ConstantsRegistry::contains(const std::string& kernel, int d, double p) const {
  for (const auto& e : entries) {
    if (same_key(e, kernel, d, p)) return true;
  }
  return false;
}

void ConstantsRegistry::put(const RegistryEntry& e) {
  for (auto& existing : entries) {
    if (same_key(existing, e.kernel, e.d, e.p)) {
      existing = e;
      return;
    }
  }
  entries.push_back(e);
}

nlohmann::json ConstantsRegistry::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& [g, v] : e.f_table) f.push_back({g, v});
    list.push_back({{"kernel", e.kernel},   {"d", e.d},
                    {"p", exponent_to_json(e.p)},
                    {"C0", e.C0},           {"C0_ns", e.C0_ns},
                    {"f_table", f},         {"K_cal", e.K_cal},
                    {"block_C", e.block_C}, {"block_c", e.block_c},
                    {"C_B", e.C_B},         {"C_LP", e.C_LP},
                    {"C_drop", e.C_drop},   {"c_p", e.c_p},
                    {"C_duhamel", e.C_duhamel}});
  }
  return {{"version", version}, {"entries", list}};
}

ConstantsRegistry ConstantsRegistry::from_json(const nlohmann::json& j) {
  try {
    ConstantsRegistry r;
    r.version = j.at("version").get<std::string>();
    for (const auto& x : j.at("entries")) {
      RegistryEntry e;
      e.kernel = x.at("kernel").get<std::string>();
      e.d = x.at("d").get<int>();
      e.p = exponent_from_json(x.at("p"));
      e.C0 = x.at("C0").get<double>();
      e.C0_ns = x.at("C0_ns").get<double>();
      for (const auto& row : x.at("f_table")) {
        e.f_table.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
      }
      e.K_cal = x.at("K_cal").get<double>();
      e.block_C = x.at("block_C").get<double>();
      e.block_c = x.at("block_c").get<double>();
      e.C_B = x.at("C_B").get<double>();
      e.C_LP = x.at("C_LP").get<double>();
      e.C_drop = x.at("C_drop").get<double>();
      e.c_p = x.at("c_p").get<double>();
      e.C_duhamel = x.at("C_duhamel").get<double>();
      r.entries.push_back(std::move(e));
    }
    return r;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::config, std::string("malformed constants registry: ") + ex.what());
  }
}

ConstantsRegistry ConstantsRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read constants registry " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::config, "constants registry " + path.string() + " is not JSON: " + ex.what());
  }
  return from_json(j);
}

void ConstantsRegistry::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

std::filesystem::path ConstantsRegistry::default_path() {
  if (const char* env = std::getenv("SPNS_REGISTRY"); env != nullptr && *env != '\0') return env;
  return SPNS_DEFAULT_REGISTRY;
}

ConstantsRegistry ConstantsRegistry::load_default() { return load(default_path()); }

}  // namespace spns
