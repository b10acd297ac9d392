#include "flexfor/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace flexfor::io {

using nlohmann::json;

namespace {

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": invalid JSON: " + e.what());
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const char* what) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string(what) + ": field \"" + key + "\" has the wrong type");
  }
}

json range_json(const ParamRange& r) { return json{{"low", r.low}, {"high", r.high}, {"integer", r.integer}}; }

void read_range(const json& j, const char* key, ParamRange& r) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.is_array() && v.size() == 2) {
    r.low = v[0].get<double>();
    r.high = v[1].get<double>();
  } else if (v.is_object()) {
    read_opt(v, "low", r.low, "search space");
    read_opt(v, "high", r.high, "search space");
    read_opt(v, "integer", r.integer, "search space");
  } else {
    throw std::invalid_argument(std::string("search space: range \"") + key + "\" must be [low, high] or an object");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

FeederSpec feeder_spec_from_json(std::string_view text) {
  const json j = parse(text, "feeder spec");
  FeederSpec s;
  constexpr const char* what = "feeder spec";
  read_opt(j, "name", s.name, what);
  read_opt(j, "n_der", s.n_der, what);
  read_opt(j, "p_inst_total_kw", s.p_inst_total_kw, what);
  read_opt(j, "cos_phi_min", s.cos_phi_min, what);
  read_opt(j, "v_min_pu", s.v_min_pu, what);
  read_opt(j, "v_max_pu", s.v_max_pu, what);
  read_opt(j, "line_type", s.line_type, what);
  read_opt(j, "trafo_type", s.trafo_type, what);
  read_opt(j, "mean_trafo_node_distance_m", s.mean_trafo_node_distance_m, what);
  if (s.name.empty()) s.name = "feeder_" + std::to_string(s.n_der);
  s.validate();
  return s;
}

std::string to_json(const FeederSpec& s) {
  json j{{"name", s.name},
         {"n_der", s.n_der},
         {"p_inst_total_kw", s.p_inst_total_kw},
         {"cos_phi_min", s.cos_phi_min},
         {"v_min_pu", s.v_min_pu},
         {"v_max_pu", s.v_max_pu},
         {"line_type", s.line_type},
         {"trafo_type", s.trafo_type},
         {"mean_trafo_node_distance_m", s.mean_trafo_node_distance_m}};
  return j.dump(2) + "\n";
}

RevolConfig revol_config_from_json(std::string_view text) {
  const json j = parse(text, "revol config");
  RevolConfig c;
  constexpr const char* what = "revol config";
  read_opt(j, "population_size", c.population_size, what);
  read_opt(j, "elite_size", c.elite_size, what);
  read_opt(j, "max_epochs", c.max_epochs, what);
  read_opt(j, "max_no_success_epochs", c.max_no_success_epochs, what);
  read_opt(j, "t", c.t, what);
  read_opt(j, "start_ttl", c.start_ttl, what);
  read_opt(j, "gradient_weight", c.gradient_weight, what);
  read_opt(j, "success_weight", c.success_weight, what);
  read_opt(j, "target_success", c.target_success, what);
  read_opt(j, "max_scatter_relative", c.max_scatter_relative, what);
  read_opt(j, "seed", c.seed, what);
  c.validate();
  return c;
}

std::string to_json(const RevolConfig& c) {
  json j{{"population_size", c.population_size},
         {"elite_size", c.elite_size},
         {"max_epochs", c.max_epochs},
         {"max_no_success_epochs", c.max_no_success_epochs},
         {"t", c.t},
         {"start_ttl", c.start_ttl},
         {"gradient_weight", c.gradient_weight},
         {"success_weight", c.success_weight},
         {"target_success", c.target_success},
         {"max_scatter_relative", c.max_scatter_relative},
         {"seed", c.seed}};
  return j.dump(2) + "\n";
}

SearchSpace search_space_from_json(std::string_view text) {
  const json j = parse(text, "search space");
  SearchSpace s;
  read_range(j, "population_size", s.population_size);
  read_range(j, "elite_size", s.elite_size);
  read_range(j, "max_epochs", s.max_epochs);
  read_range(j, "max_no_success_epochs", s.max_no_success_epochs);
  read_range(j, "t", s.t);
  read_range(j, "start_ttl", s.start_ttl);
  read_range(j, "gradient_weight", s.gradient_weight);
  read_range(j, "success_weight", s.success_weight);
  read_range(j, "target_success", s.target_success);
  read_range(j, "max_scatter_relative", s.max_scatter_relative);
  s.validate();
  return s;
}

std::string to_json(const SearchSpace& s) {
  json j{{"population_size", range_json(s.population_size)},
         {"elite_size", range_json(s.elite_size)},
         {"max_epochs", range_json(s.max_epochs)},
         {"max_no_success_epochs", range_json(s.max_no_success_epochs)},
         {"t", range_json(s.t)},
         {"start_ttl", range_json(s.start_ttl)},
         {"gradient_weight", range_json(s.gradient_weight)},
         {"success_weight", range_json(s.success_weight)},
         {"target_success", range_json(s.target_success)},
         {"max_scatter_relative", range_json(s.max_scatter_relative)}};
  return j.dump(2) + "\n";
}

ForPolygon polygon_from_json(std::string_view text) {
  const json j = parse(text, "polygon");
  const json& verts = j.is_array() ? j : j.at("vertices");
  std::vector<Point2> pts;
  for (const auto& v : verts) {
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument("polygon: each vertex must be [p_kw, q_kvar]");
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return ForPolygon::from_vertices(std::move(pts));
}

std::string to_json(const ForPolygon& poly) {
  json verts = json::array();
  for (const auto& p : poly.vertices()) verts.push_back({p.x, p.y});
  json j{{"vertices", verts}, {"area_kw_kvar", area(poly)}};
  return j.dump(2) + "\n";
}

SetpointVector setpoints_from_json(std::string_view text) {
  const json j = parse(text, "setpoints");
  SetpointVector sp;
  try {
    sp.p_n = j.at("p_n").get<std::vector<double>>();
    sp.q_n = j.at("q_n").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw std::invalid_argument("setpoints: expected numeric arrays \"p_n\" and \"q_n\"");
  }
  if (sp.p_n.size() != sp.q_n.size()) throw std::invalid_argument("setpoints: p_n and q_n differ in length");
  sp.clamp();
  return sp;
}

std::string to_json(const SetpointVector& sp) {
  return json{{"p_n", sp.p_n}, {"q_n", sp.q_n}}.dump(2) + "\n";
}

std::string to_json(const InterchangeResult& r, const ConstraintReport* report) {
  json j{{"p_pcc_kw", r.p_pcc_kw},
         {"q_pcc_kvar", r.q_pcc_kvar},
         {"v_pu", r.v_pu},
         {"line_loading", r.line_loading},
         {"trafo_loading", r.trafo_loading},
         {"losses_kw", r.losses_kw},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"max_mismatch_pu", r.max_mismatch_pu}};
  if (report) {
    j["constraints"] = {{"max_v_violation", report->max_v_violation},
                        {"max_i_violation", report->max_i_violation},
                        {"trafo_violation", report->trafo_violation},
                        {"label", std::string(to_string(report->label))}};
  }
  return j.dump(2) + "\n";
}

std::string cloud_to_csv(const LabelledCloud& cloud) {
  std::string out = "p_kw,q_kvar,label\n";
  out.reserve(out.size() + cloud.points.size() * 40);
  for (const auto& p : cloud.points) {
    out += format_double(p.p_kw);
    out += ',';
    out += format_double(p.q_kvar);
    out += ',';
    out += to_string(p.label);
    out += '\n';
  }
  return out;
}

LabelledCloud cloud_from_csv(std::string_view text) {
  LabelledCloud cloud;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line_no == 1) continue;  // header
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw std::invalid_argument("cloud csv: malformed line " + std::to_string(line_no));
    }
    CloudPoint p;
    const auto f1 = line.substr(0, c1);
    const auto f2 = line.substr(c1 + 1, c2 - c1 - 1);
    if (std::from_chars(f1.data(), f1.data() + f1.size(), p.p_kw).ec != std::errc{} ||
        std::from_chars(f2.data(), f2.data() + f2.size(), p.q_kvar).ec != std::errc{}) {
      throw std::invalid_argument("cloud csv: bad number on line " + std::to_string(line_no));
    }
    const auto label = parse_point_label(line.substr(c2 + 1));
    if (!label) throw std::invalid_argument("cloud csv: unknown label on line " + std::to_string(line_no));
    p.label = *label;
    cloud.points.push_back(p);
    if (p.label == PointLabel::feasible) ++cloud.feasible_count;
  }
  cloud.pf_calls = cloud.points.size();
  return cloud;
}

std::string trials_to_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "trial,population_size,elite_size,max_epochs,max_no_success_epochs,t,start_ttl,gradient_weight,"
      "success_weight,target_success,max_scatter_relative,mean_jaccard,std_jaccard,pf_calls\n";
  for (const auto& r : records) {
    const auto& c = r.config;
    out += std::to_string(r.trial) + ',' + std::to_string(c.population_size) + ',' + std::to_string(c.elite_size) +
           ',' + std::to_string(c.max_epochs) + ',' + std::to_string(c.max_no_success_epochs) + ',' +
           std::to_string(c.t) + ',' + std::to_string(c.start_ttl) + ',' + format_double(c.gradient_weight) + ',' +
           format_double(c.success_weight) + ',' + format_double(c.target_success) + ',' +
           format_double(c.max_scatter_relative) + ',' + format_double(r.mean) + ',' + format_double(r.stddev) +
           ',' + std::to_string(r.pf_calls) + '\n';
  }
  return out;
}

std::string convergence_to_csv(const DirectionResult& result) {
  std::string out = "epoch,best_fitness,v_violation,i_violation\n";
  for (const auto& rec : result.trace) {
    out += std::to_string(rec.epoch) + ',' + format_double(rec.best[0]) + ',' + format_double(rec.best[1]) + ',' +
           format_double(rec.best[2]) + '\n';
  }
  return out;
}

}  // namespace flexfor::io
