#include "flexfor/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "flexfor/io.hpp"
#include "flexfor/parallel.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/random.hpp"
#include "json.hpp"

namespace flexfor {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::uniform: return "uniform";
    case Method::dirichlet: return "dirichlet";
    case Method::revol: return "revol";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  if (text == "uniform") return Method::uniform;
  if (text == "dirichlet") return Method::dirichlet;
  if (text == "revol") return Method::revol;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (feeders.empty()) throw std::invalid_argument("experiment: at least one feeder is required");
  if (methods.empty()) throw std::invalid_argument("experiment: at least one method is required");
  for (const auto& f : feeders) f.validate();
  for (std::size_t i = 0; i < feeders.size(); ++i)
    for (std::size_t j = i + 1; j < feeders.size(); ++j)
      if (feeders[i].name == feeders[j].name)
        throw std::invalid_argument("experiment: duplicate feeder name \"" + feeders[i].name + "\"");
  if (sample_size == 0) throw std::invalid_argument("experiment: sample_size must be positive");
  if (sampling_runs == 0 || revol_runs == 0) throw std::invalid_argument("experiment: run counts must be positive");
  if (!(dirichlet_alpha > 0.0)) throw std::invalid_argument("experiment: dirichlet_alpha must be positive");
  revol.validate();
}

ExperimentConfig experiment_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("experiment: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    for (const auto& f : j.at("feeders")) {
      if (f.is_number_integer()) cfg.feeders.push_back(reference_feeder_spec(f.get<int>()));
      else cfg.feeders.push_back(io::feeder_spec_from_json(f.dump()));
    }
    for (const auto& m : j.at("methods")) {
      const auto method = parse_method(m.get<std::string>());
      if (!method) throw std::invalid_argument("experiment: unknown method \"" + m.get<std::string>() + "\"");
      cfg.methods.push_back(*method);
    }
    if (j.contains("sample_size")) cfg.sample_size = j["sample_size"].get<std::size_t>();
    if (j.contains("sampling_runs")) cfg.sampling_runs = j["sampling_runs"].get<std::size_t>();
    if (j.contains("revol_runs")) cfg.revol_runs = j["revol_runs"].get<std::size_t>();
    if (j.contains("dirichlet_alpha")) cfg.dirichlet_alpha = j["dirichlet_alpha"].get<double>();
    if (j.contains("revol")) cfg.revol = io::revol_config_from_json(j["revol"].dump());
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<unsigned>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("experiment: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["feeders"] = ordered_json::array();
  for (const auto& f : cfg.feeders) j["feeders"].push_back(ordered_json::parse(io::to_json(f)));
  j["methods"] = ordered_json::array();
  for (auto m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
  j["sample_size"] = cfg.sample_size;
  j["sampling_runs"] = cfg.sampling_runs;
  j["revol_runs"] = cfg.revol_runs;
  j["dirichlet_alpha"] = cfg.dirichlet_alpha;
  j["revol"] = ordered_json::parse(io::to_json(cfg.revol));
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir.generic_string();
  j["jobs"] = cfg.jobs;
  return j.dump(2) + "\n";
}

std::uint64_t cell_seed(std::uint64_t master, std::string_view feeder, Method method, std::size_t run) {
  return derive_seed(master, {stream_id("experiment/cell"), stream_id(feeder), stream_id(to_string(method)),
                              static_cast<std::uint64_t>(run)});
}

namespace {

struct CellTask {
  std::size_t feeder = 0;
  Method method = Method::uniform;
  std::size_t run = 0;
};

void run_cell(const ExperimentConfig& cfg, const FeederModel& model, CellResult& cell) {
  const auto dir = cfg.out_dir / cell.dir;
  ordered_json meta;
  meta["feeder"] = cell.feeder;
  meta["method"] = std::string(to_string(cell.method));
  meta["run"] = cell.run;
  meta["seed"] = cell.seed;

  LabelledCloud cloud;
  if (cell.method == Method::revol) {
    RevolConfig rc = cfg.revol;
    rc.seed = cell.seed;
    const SweepResult sw = sweep(model, rc, compass_directions(), 1);
    ordered_json dirs = ordered_json::array();
    for (const auto& d : sw.directions) {
      CloudPoint p;
      p.p_kw = d.best.interchange.x;
      p.q_kvar = d.best.interchange.y;
      p.label = d.feasible ? PointLabel::feasible : PointLabel::both;
      cloud.points.push_back(p);
      if (d.feasible) ++cloud.feasible_count;
      const std::string name = "convergence_" + std::to_string(d.direction.alpha) + "_" +
                               std::to_string(d.direction.beta) + ".csv";
      io::write_file(dir / name, io::convergence_to_csv(d));
      dirs.push_back({{"direction", {d.direction.alpha, d.direction.beta}},
                      {"feasible", d.feasible},
                      {"epochs_used", d.epochs_used},
                      {"pf_calls", d.pf_calls},
                      {"convergence", name}});
    }
    cloud.pf_calls = sw.pf_calls;
    meta["revol"] = ordered_json::parse(io::to_json(rc));
    meta["directions"] = dirs;
  } else if (cell.method == Method::dirichlet) {
    DirichletConfig dc;
    dc.alpha = {cfg.dirichlet_alpha};
    dc.sample_size = cfg.sample_size;
    dc.seed = cell.seed;
    cloud = sample_dirichlet_two_stage(model, dc, 1);
    meta["sample_size"] = cfg.sample_size;
    meta["dirichlet_alpha"] = cfg.dirichlet_alpha;
  } else {
    cloud = sample_uniform(model, cfg.sample_size, cell.seed, 1);
    meta["sample_size"] = cfg.sample_size;
  }
  cell.points = cloud.points.size();
  cell.feasible_points = cloud.feasible_count;
  cell.pf_calls = cloud.pf_calls;
  io::write_file(dir / "cloud.csv", io::cloud_to_csv(cloud));

  meta["points"] = cell.points;
  meta["feasible_points"] = cell.feasible_points;
  meta["pf_calls"] = cell.pf_calls;
  try {
    cell.hull = feasible_hull(cloud);
    cell.area = area(cell.hull);
    io::write_file(dir / "hull.json", io::to_json(cell.hull));
    cell.ok = true;
    meta["status"] = "ok";
    meta["area_kw_kvar"] = cell.area;
  } catch (const DegenerateRegion& e) {
    cell.error = e.what();
    meta["status"] = "failed";
    meta["error"] = cell.error;
  }
  io::write_file(dir / "meta.json", meta.dump(2) + "\n");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ComparisonReport run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<FeederModel> models;
  models.reserve(cfg.feeders.size());
  for (const auto& f : cfg.feeders) models.push_back(build_feeder(f));

  std::vector<CellTask> tasks;
  for (std::size_t f = 0; f < cfg.feeders.size(); ++f)
    for (auto m : cfg.methods)
      for (std::size_t r = 0; r < cfg.runs_for(m); ++r) tasks.push_back({f, m, r});

  ComparisonReport rep;
  rep.cells.resize(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& c = rep.cells[i];
    c.feeder = cfg.feeders[tasks[i].feeder].name;
    c.method = tasks[i].method;
    c.run = tasks[i].run;
    c.seed = cell_seed(cfg.seed, c.feeder, c.method, c.run);
    c.dir = std::filesystem::path(c.feeder) / std::string(to_string(c.method)) / ("run" + std::to_string(c.run));
  }

  const auto counter_before = pf_call_count();
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    auto& c = rep.cells[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run_cell(cfg, models[tasks[i].feeder], c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.error = e.what();
      try {
        io::write_file(cfg.out_dir / c.dir / "meta.json",
                       ordered_json{{"feeder", c.feeder},
                                    {"method", std::string(to_string(c.method))},
                                    {"run", c.run},
                                    {"seed", c.seed},
                                    {"status", "failed"},
                                    {"error", c.error}}
                               .dump(2) + "\n");
      } catch (...) {
      }
    }
    c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  rep.pf_counter_delta = pf_call_count() - counter_before;

  rep.all_ok = true;
  for (const auto& c : rep.cells) {
    rep.pf_calls_total += c.pf_calls;
    rep.all_ok = rep.all_ok && c.ok;
  }

  ordered_json j;
  j["seed"] = cfg.seed;
  j["config"] = ordered_json::parse(to_json(cfg));
  j["config"].erase("jobs");
  j["all_ok"] = rep.all_ok;
  j["pf_calls_total"] = rep.pf_calls_total;

  ordered_json cells = ordered_json::array();
  for (const auto& c : rep.cells) {
    ordered_json e;
    e["feeder"] = c.feeder;
    e["method"] = std::string(to_string(c.method));
    e["run"] = c.run;
    e["seed"] = c.seed;
    e["status"] = c.ok ? "ok" : "failed";
    if (!c.ok) e["error"] = c.error;
    e["pf_calls"] = c.pf_calls;
    e["points"] = c.points;
    e["feasible_points"] = c.feasible_points;
    e["area_kw_kvar"] = c.area;
    ordered_json files{{"meta", (c.dir / "meta.json").generic_string()}};
    if (c.points > 0) files["cloud"] = (c.dir / "cloud.csv").generic_string();
    if (c.ok) files["hull"] = (c.dir / "hull.json").generic_string();
    e["files"] = files;
    cells.push_back(e);
  }
  j["cells"] = cells;

  // Per feeder: mean area and pf calls per method, and the pairwise Jaccard
  // matrix (mean over all run pairs; the diagonal compares distinct runs).
  std::string summary = "feeder      method     runs  ok  mean_area_kw_kvar  mean_pf_calls  area_vs_dirichlet\n";
  ordered_json feeders = ordered_json::array();
  for (const auto& spec : cfg.feeders) {
    std::map<Method, std::vector<const CellResult*>> by_method;
    for (const auto& c : rep.cells)
      if (c.feeder == spec.name && c.ok) by_method[c.method].push_back(&c);
    ordered_json fj;
    fj["feeder"] = spec.name;
    ordered_json methods = ordered_json::object();
    std::optional<double> dirichlet_area;
    std::map<Method, double> mean_area;
    for (auto m : cfg.methods) {
      const auto& cs = by_method[m];
      double a = 0.0, calls = 0.0;
      for (const auto* c : cs) a += c->area, calls += static_cast<double>(c->pf_calls);
      if (!cs.empty()) a /= static_cast<double>(cs.size()), calls /= static_cast<double>(cs.size());
      mean_area[m] = a;
      if (m == Method::dirichlet && !cs.empty()) dirichlet_area = a;
      methods[std::string(to_string(m))] = {{"runs_ok", cs.size()}, {"mean_area_kw_kvar", a}, {"mean_pf_calls", calls}};
    }
    ordered_json matrix = ordered_json::object();
    for (auto a : cfg.methods) {
      ordered_json row = ordered_json::object();
      for (auto b : cfg.methods) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto* ca : by_method[a])
          for (const auto* cb : by_method[b]) {
            if (ca == cb) continue;
            try {
              sum += jaccard(ca->hull, cb->hull);
              ++n;
            } catch (const DegenerateRegion&) {
            }
          }
        row[std::string(to_string(b))] = n ? ordered_json(sum / static_cast<double>(n)) : ordered_json(nullptr);
      }
      matrix[std::string(to_string(a))] = row;
    }
    fj["methods"] = methods;
    fj["jaccard"] = matrix;
    feeders.push_back(fj);

    for (auto m : cfg.methods) {
      const auto& mj = methods[std::string(to_string(m))];
      char line[256];
      const std::string ratio = dirichlet_area && *dirichlet_area > 0 ? fixed(mean_area[m] / *dirichlet_area, 3) : "-";
      std::snprintf(line, sizeof line, "%-11s %-10s %4zu %3zu  %17s  %13s  %17s\n", spec.name.c_str(),
                    std::string(to_string(m)).c_str(), cfg.runs_for(m), mj["runs_ok"].get<std::size_t>(),
                    fixed(mj["mean_area_kw_kvar"].get<double>(), 1).c_str(),
                    fixed(mj["mean_pf_calls"].get<double>(), 0).c_str(), ratio.c_str());
      summary += line;
    }
  }
  j["feeders"] = feeders;
  rep.summary = summary;
  rep.report_json = j.dump(2) + "\n";

  io::write_file(cfg.out_dir / "report.json", rep.report_json);
  io::write_file(cfg.out_dir / "summary.txt", rep.summary);

  ordered_json timing = ordered_json::array();
  for (const auto& c : rep.cells)
    timing.push_back({{"cell", c.dir.generic_string()}, {"wall_seconds", c.wall_seconds}});
  io::write_file(cfg.out_dir / "timing.json", timing.dump(2) + "\n");
  return rep;
}

}  // namespace flexfor
