#include "flexfor/standard_types.hpp"

#include <map>
#include <stdexcept>

#include "json.hpp"

namespace flexfor {
namespace detail {
extern const std::string_view kStandardTypesJson;
}

namespace {

struct Catalogue {
  std::string source;
  std::map<std::string, LineType, std::less<>> lines;
  std::map<std::string, TrafoType, std::less<>> trafos;
};

const Catalogue& catalogue() {
  static const Catalogue cat = [] {
    const auto doc = nlohmann::json::parse(detail::kStandardTypesJson);
    Catalogue c;
    c.source = doc.at("source").get<std::string>();
    for (const auto& [name, v] : doc.at("line").items()) {
      c.lines.emplace(name, LineType{v.at("r_ohm_per_km").get<double>(), v.at("x_ohm_per_km").get<double>(),
                                     v.at("c_nf_per_km").get<double>(), v.at("max_i_ka").get<double>()});
    }
    for (const auto& [name, v] : doc.at("trafo").items()) {
      c.trafos.emplace(name, TrafoType{v.at("sn_mva").get<double>(), v.at("vn_hv_kv").get<double>(),
                                       v.at("vn_lv_kv").get<double>(), v.at("vk_percent").get<double>(),
                                       v.at("vkr_percent").get<double>(), v.at("pfe_kw").get<double>(),
                                       v.at("i0_percent").get<double>()});
    }
    return c;
  }();
  return cat;
}

template <class Map>
std::string known_names(const Map& m) {
  std::string out;
  for (const auto& [name, _] : m) {
    if (!out.empty()) out += ", ";
    out += '"' + name + '"';
  }
  return out;
}

}  // namespace

const LineType& standard_line_params(std::string_view name) {
  const auto& lines = catalogue().lines;
  if (auto it = lines.find(name); it != lines.end()) return it->second;
  throw std::invalid_argument("unknown line type \"" + std::string(name) + "\"; known types: " + known_names(lines));
}

const TrafoType& standard_trafo_params(std::string_view name) {
  const auto& trafos = catalogue().trafos;
  if (auto it = trafos.find(name); it != trafos.end()) return it->second;
  throw std::invalid_argument("unknown transformer type \"" + std::string(name) +
                              "\"; known types: " + known_names(trafos));
}

std::vector<std::string> standard_line_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : catalogue().lines) out.push_back(name);
  return out;
}

std::vector<std::string> standard_trafo_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : catalogue().trafos) out.push_back(name);
  return out;
}

const std::string& standard_types_source() { return catalogue().source; }

}  // namespace flexfor
