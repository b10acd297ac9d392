#include <charconv>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flexfor/experiment.hpp"
#include "flexfor/feeder.hpp"
#include "flexfor/geometry.hpp"
#include "flexfor/inverter.hpp"
#include "flexfor/io.hpp"
#include "flexfor/powerflow.hpp"
#include "flexfor/revol.hpp"
#include "flexfor/sampling.hpp"
#include "flexfor/svg.hpp"
#include "flexfor/tuning.hpp"

namespace fs = std::filesystem;
using namespace flexfor;

namespace {

struct Common {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
};

void add_common(CLI::App* app, Common& c, const std::string& out_help) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_option("--out", c.out, out_help);
}

// A bare integer selects a reference feeder; anything else is a JSON file.
FeederSpec load_feeder(const std::string& arg) {
  int n = 0;
  const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (res.ec == std::errc{} && res.ptr == arg.data() + arg.size()) return reference_feeder_spec(n);
  return io::feeder_spec_from_json(io::read_file(arg));
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text;
  else io::write_file(out, text);
}

int cmd_feeder(const std::string& feeder, bool table, const Common& c) {
  if (table) {
    std::vector<FeederSummary> rows;
    for (int n : kReferenceNodeCounts) rows.push_back(summarize(build_feeder(reference_feeder_spec(n))));
    emit(c.out, format_summary_table(rows));
    return 0;
  }
  const FeederSpec spec = load_feeder(feeder);
  const FeederModel model = build_feeder(spec);
  emit(c.out, io::to_json(spec));
  if (!c.out.empty()) std::cout << format_summary_table({summarize(model)});
  return 0;
}

int cmd_pf(const std::string& feeder, const std::string& setpoints, double p_n, double q_n, const Common& c) {
  const FeederModel model = build_feeder(load_feeder(feeder));
  SetpointVector sp;
  if (!setpoints.empty()) {
    sp = io::setpoints_from_json(io::read_file(setpoints));
    if (sp.size() != model.der_count())
      throw std::invalid_argument("setpoints have " + std::to_string(sp.size()) + " entries, feeder has " +
                                  std::to_string(model.der_count()) + " DERs");
  } else {
    sp.p_n.assign(model.der_count(), p_n);
    sp.q_n.assign(model.der_count(), q_n);
    sp.clamp();
  }
  const auto applied = project(denormalize(sp, model), model);
  const InterchangeResult r = solve(model, applied.injections);
  if (!r.converged) {
    emit(c.out, io::to_json(r));
    std::cerr << "power flow did not converge\n";
    return 1;
  }
  const ConstraintReport rep = evaluate_constraints(r, model.spec);
  emit(c.out, io::to_json(r, &rep));
  return 0;
}

int cmd_sample(const std::string& method, const std::string& feeder, std::size_t n, double alpha,
               const std::string& hull_path, const std::string& svg_path, const Common& c) {
  const FeederModel model = build_feeder(load_feeder(feeder));
  LabelledCloud cloud;
  if (method == "uniform") {
    cloud = sample_uniform(model, n, c.seed, c.jobs);
  } else {
    DirichletConfig cfg;
    cfg.alpha = {alpha};
    cfg.sample_size = n;
    cfg.seed = c.seed;
    cloud = sample_dirichlet_two_stage(model, cfg, c.jobs);
  }
  emit(c.out.empty() ? "cloud.csv" : c.out, io::cloud_to_csv(cloud));
  std::cerr << cloud.feasible_count << " of " << cloud.points.size() << " points feasible, " << cloud.pf_calls
            << " power flows\n";
  std::vector<LabelledHull> hulls;
  try {
    const ForPolygon hull = feasible_hull(cloud);
    if (!hull_path.empty()) io::write_file(hull_path, io::to_json(hull));
    std::cerr << "hull area " << io::format_double(area(hull)) << " kW*kvar\n";
    hulls.push_back({method, hull});
  } catch (const DegenerateRegion& e) {
    std::cerr << "no hull: " << e.what() << "\n";
    if (!svg_path.empty()) io::write_file(svg_path, render_svg(cloud, {}, model.spec.name + " " + method));
    return 1;
  }
  if (!svg_path.empty()) io::write_file(svg_path, render_svg(cloud, hulls, model.spec.name + " " + method));
  return 0;
}

int cmd_revol(const std::string& feeder, const std::string& config, int epochs, bool printed, const Common& c) {
  const FeederModel model = build_feeder(load_feeder(feeder));
  RevolConfig cfg = config.empty() ? RevolConfig{} : io::revol_config_from_json(io::read_file(config));
  if (epochs > 0) cfg.max_epochs = epochs;
  cfg.seed = c.seed;
  cfg.validate();
  const auto dirs = printed ? printed_directions() : compass_directions();
  const SweepResult sw = sweep(model, cfg, dirs, c.jobs);

  const fs::path out = c.out.empty() ? fs::path("revol_out") : fs::path(c.out);
  std::string summary = "alpha,beta,feasible,p_kw,q_kvar,epochs_used,pf_calls\n";
  for (const auto& d : sw.directions) {
    const std::string tag = std::to_string(d.direction.alpha) + "_" + std::to_string(d.direction.beta);
    io::write_file(out / ("convergence_" + tag + ".csv"), io::convergence_to_csv(d));
    summary += std::to_string(d.direction.alpha) + "," + std::to_string(d.direction.beta) + "," + (d.feasible ? "1" : "0") + "," + io::format_double(d.best.interchange.x) +
               "," + io::format_double(d.best.interchange.y) + "," + std::to_string(d.epochs_used) + "," +
               std::to_string(d.pf_calls) + "\n";
  }
  io::write_file(out / "directions.csv", summary);
  io::write_file(out / "config.json", io::to_json(cfg));
  io::write_file(out / "pf_calls.txt", std::to_string(sw.pf_calls) + "\n");
  std::cerr << "total power flows " << sw.pf_calls << "\n";
  try {
    const ForPolygon hull = sw.hull();
    io::write_file(out / "hull.json", io::to_json(hull));
    std::cerr << "hull area " << io::format_double(area(hull)) << " kW*kvar\n";
  } catch (const DegenerateRegion& e) {
    std::cerr << "no hull: " << e.what() << "\n";
    return 1;
  }
  for (const auto& d : sw.directions)
    if (!d.feasible) return 1;
  return 0;
}

int cmd_tune(const std::string& feeder, std::size_t trials, std::size_t runs, const std::string& space_path,
             std::size_t bench_samples, const Common& c) {
  const FeederModel model = build_feeder(load_feeder(feeder));
  const SearchSpace space = space_path.empty() ? SearchSpace{} : io::search_space_from_json(io::read_file(space_path));
  std::cerr << "building benchmark from " << bench_samples << " samples\n";
  const ForPolygon bench = build_benchmark(model, c.seed, bench_samples, c.jobs);
  const auto records = random_search(space, trials, runs, model, bench, c.seed, c.jobs);
  emit(c.out.empty() ? "trials.csv" : c.out, io::trials_to_csv(records));
  if (!records.empty())
    std::cerr << "best trial " << records.front().trial << " mean jaccard " << io::format_double(records.front().mean)
              << "\n";
  return 0;
}

int cmd_jaccard(const std::string& a, const std::string& b, const Common& c) {
  const ForPolygon pa = io::polygon_from_json(io::read_file(a));
  const ForPolygon pb = io::polygon_from_json(io::read_file(b));
  emit(c.out, io::format_double(jaccard(pa, pb)) + "\n");
  return 0;
}

int cmd_compare(const std::string& config, const std::vector<std::string>& feeders,
                const std::vector<std::string>& methods, std::size_t n, std::size_t runs, int epochs, bool seed_set,
                const Common& c) {
  ExperimentConfig cfg;
  if (!config.empty()) cfg = experiment_config_from_json(io::read_file(config));
  if (!feeders.empty()) {
    cfg.feeders.clear();
    for (const auto& f : feeders) cfg.feeders.push_back(load_feeder(f));
  }
  if (!methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : methods) cfg.methods.push_back(*parse_method(m));
  }
  if (cfg.feeders.empty())
    for (int k : kReferenceNodeCounts) cfg.feeders.push_back(reference_feeder_spec(k));
  if (cfg.methods.empty()) cfg.methods = {Method::uniform, Method::dirichlet, Method::revol};
  if (n > 0) cfg.sample_size = n;
  if (runs > 0) cfg.revol_runs = runs;
  if (epochs > 0) cfg.revol.max_epochs = epochs;
  if (seed_set || config.empty()) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  cfg.jobs = c.jobs;
  const ComparisonReport rep = run_comparison(cfg);
  std::cout << rep.summary;
  for (const auto& cell : rep.cells)
    if (!cell.ok) std::cerr << "cell " << cell.dir.generic_string() << " failed: " << cell.error << "\n";
  std::cerr << "report written to " << (cfg.out_dir / "report.json").string() << "\n";
  return rep.all_ok ? 0 : 1;
}

int cmd_plot(const std::string& cloud_path, const std::vector<std::string>& hull_paths,
             const std::vector<std::string>& labels, const std::string& title, const Common& c) {
  const LabelledCloud cloud = io::cloud_from_csv(io::read_file(cloud_path));
  std::vector<LabelledHull> hulls;
  for (std::size_t i = 0; i < hull_paths.size(); ++i) {
    hulls.push_back({i < labels.size() ? labels[i] : fs::path(hull_paths[i]).stem().string(),
                     io::polygon_from_json(io::read_file(hull_paths[i]))});
  }
  emit(c.out.empty() ? "plot.svg" : c.out, render_svg(cloud, hulls, title));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible operation region identification for low-voltage feeders"};
  app.require_subcommand(1);

  Common common;
  int rc = 0;

  auto* feeder = app.add_subcommand("feeder", "Show or write a feeder specification");
  std::string feeder_arg = "1";
  bool table = false;
  feeder->add_option("spec", feeder_arg, "Reference node count (1, 3, 9, 27) or feeder JSON file");
  feeder->add_flag("--table", table, "Print the summary table of the four reference feeders");
  add_common(feeder, common, "Write the feeder JSON here");
  feeder->callback([&] { rc = cmd_feeder(feeder_arg, table, common); });

  auto* pf = app.add_subcommand("pf", "Solve one power flow");
  std::string pf_feeder, pf_setpoints;
  double p_n = 0.5, q_n = 0.5;
  pf->add_option("--feeder", pf_feeder, "Node count or feeder JSON")->required();
  pf->add_option("--setpoints", pf_setpoints, "JSON with normalized p_n and q_n arrays");
  pf->add_option("--p-n", p_n, "Normalized active setpoint applied to every DER")->capture_default_str();
  pf->add_option("--q-n", q_n, "Normalized reactive setpoint applied to every DER")->capture_default_str();
  add_common(pf, common, "Write the result JSON here");
  pf->callback([&] { rc = cmd_pf(pf_feeder, pf_setpoints, p_n, q_n, common); });

  auto* sample = app.add_subcommand("sample", "Sample a labelled PQ cloud and its feasible hull");
  std::string method = "dirichlet", s_feeder, hull_path, svg_path;
  std::size_t n = 10000;
  double alpha = kDefaultDirichletAlpha;
  sample->add_option("--method", method)->check(CLI::IsMember({"uniform", "dirichlet"}))->capture_default_str();
  sample->add_option("--feeder", s_feeder, "Node count or feeder JSON")->required();
  sample->add_option("--n", n, "Number of samples")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--alpha", alpha, "Dirichlet concentration")->capture_default_str();
  sample->add_option("--hull", hull_path, "Write the feasible hull JSON here");
  sample->add_option("--svg", svg_path, "Write a scatter plot here");
  add_common(sample, common, "Cloud CSV path (default cloud.csv)");
  sample->callback([&] { rc = cmd_sample(method, s_feeder, n, alpha, hull_path, svg_path, common); });

  auto* revol = app.add_subcommand("revol", "Trace the region boundary with the evolutionary sweep");
  std::string r_feeder, r_config;
  int r_epochs = 0;
  bool printed = false;
  revol->add_option("--feeder", r_feeder, "Node count or feeder JSON")->required();
  revol->add_option("--config", r_config, "Optimizer configuration JSON");
  revol->add_option("--epochs", r_epochs, "Override max_epochs");
  revol->add_flag("--printed-directions", printed, "Use the literal direction list instead of the compass set");
  add_common(revol, common, "Output directory (default revol_out)");
  revol->callback([&] { rc = cmd_revol(r_feeder, r_config, r_epochs, printed, common); });

  auto* tune = app.add_subcommand("tune", "Random search over optimizer hyperparameters");
  std::string t_feeder, space_path;
  std::size_t trials = 210, runs = 3, bench_samples = kBenchmarkSampleSize;
  tune->add_option("--feeder", t_feeder, "Node count or feeder JSON")->required();
  tune->add_option("--trials", trials)->capture_default_str();
  tune->add_option("--runs", runs, "Sweeps per trial")->capture_default_str();
  tune->add_option("--space", space_path, "Search space JSON overriding the default ranges");
  tune->add_option("--benchmark-samples", bench_samples)->capture_default_str();
  add_common(tune, common, "Trials CSV path (default trials.csv)");
  tune->callback([&] { rc = cmd_tune(t_feeder, trials, runs, space_path, bench_samples, common); });

  auto* jac = app.add_subcommand("jaccard", "Jaccard index of two hull files");
  std::string ja, jb;
  jac->add_option("a", ja)->required()->check(CLI::ExistingFile);
  jac->add_option("b", jb)->required()->check(CLI::ExistingFile);
  add_common(jac, common, "Write the value here");
  jac->callback([&] { rc = cmd_jaccard(ja, jb, common); });

  auto* cmp = app.add_subcommand("compare", "Run the feeder x method comparison grid");
  std::string cmp_config;
  std::vector<std::string> cmp_feeders, cmp_methods;
  std::size_t cmp_n = 0, cmp_runs = 0;
  int cmp_epochs = 0;
  cmp->add_option("--config", cmp_config, "Experiment JSON");
  cmp->add_option("--feeders", cmp_feeders, "Node counts or feeder JSON files")->delimiter(',');
  cmp->add_option("--methods", cmp_methods)->delimiter(',')->check(CLI::IsMember({"uniform", "dirichlet", "revol"}));
  cmp->add_option("--n", cmp_n, "Sample size for the sampling methods");
  cmp->add_option("--runs", cmp_runs, "Optimizer runs per feeder");
  cmp->add_option("--epochs", cmp_epochs, "Override max_epochs");
  add_common(cmp, common, "Output directory (default out)");
  cmp->callback([&] {
    rc = cmd_compare(cmp_config, cmp_feeders, cmp_methods, cmp_n, cmp_runs, cmp_epochs, cmp->count("--seed") > 0,
                     common);
  });

  auto* plot = app.add_subcommand("plot", "Render a cloud and hull outlines as SVG");
  std::string cloud_path, title;
  std::vector<std::string> hull_paths, labels;
  plot->add_option("--cloud", cloud_path)->required()->check(CLI::ExistingFile);
  plot->add_option("--hull", hull_paths, "Hull JSON files (repeatable)");
  plot->add_option("--label", labels, "Legend label per hull (repeatable)");
  plot->add_option("--title", title);
  add_common(plot, common, "SVG path (default plot.svg)");
  plot->callback([&] { rc = cmd_plot(cloud_path, hull_paths, labels, title, common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
