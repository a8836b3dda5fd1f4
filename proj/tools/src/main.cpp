#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopzeta_app/commands.hpp"
#include "loopzeta_app/thread_pool.hpp"

namespace {

using namespace loopzeta::app;

// INI reader that files section-less keys under the selected subcommand, so a
// flat "key = value" file configures whichever command is being run.
class FlatIni : public CLI::ConfigINI {
 public:
  std::string section;

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigINI::from_config(input);
    if (section.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents = {section};
    }
    return items;
  }
};

struct Global {
  std::string out_path;
  std::string json_path;
  long workers = 0;
};

nlohmann::json resolved_options(const CLI::App& sub) {
  nlohmann::json j = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      j[name] = r.size() == 1 ? nlohmann::json(r.front()) : nlohmann::json(r);
    } else if (opt->get_type_size() == 0) {
      j[name] = false;
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

std::string comma_join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop measures, zeta-regularized determinants and LQG subdivision experiments", "loopzeta"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "INI file of key = value settings; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  auto ini = std::make_shared<FlatIni>();
  app.config_formatter(ini);

  Global global;
  app.add_option("--workers", global.workers, "Worker threads (LOOPZETA_WORKERS overrides)")->check(CLI::NonNegativeNumber);
  app.add_option("--json", global.json_path, "Write the JSON summary here instead of stderr");

  std::function<int(const Sinks&)> action;
  std::string out_flag_note = "Write the CSV table here instead of stdout";

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", global.out_path, out_flag_note); };
  auto add_graph = [](CLI::App* sub, std::string& path, std::string& example) {
    auto* g = sub->add_option("--graph", path, "Edge-list file (\"u v\" per line, \"# boundary: i j\" header); - for stdin");
    auto* e = sub->add_option("--example", example, "Built-in graph instead of a file")->check(CLI::IsMember({"two-path"}));
    g->excludes(e);
  };

  GraphLoopsOptions graph_opts;
  auto* graph_cmd = app.add_subcommand("graph-loops", "Loop mass, determinant identity and spanning trees of a graph");
  add_graph(graph_cmd, graph_opts.graph_path, graph_opts.example);
  graph_cmd->add_option("--max-len", graph_opts.max_len, "Largest loop length in the truncated series")->check(CLI::PositiveNumber);
  add_out(graph_cmd);
  graph_cmd->callback([&] { action = [&](const Sinks& s) { return run_graph_loops(graph_opts, s); }; });

  SoupOptions soup_opts;
  auto* soup_cmd = app.add_subcommand("soup-sample", "Sample random-walk loop soups on a killed graph");
  add_graph(soup_cmd, soup_opts.graph_path, soup_opts.example);
  soup_cmd->add_option("--intensity", soup_opts.intensity, "Soup intensity c > 0")->check(CLI::PositiveNumber);
  soup_cmd->add_option("--max-len", soup_opts.max_len, "Loop length truncation")->check(CLI::PositiveNumber);
  soup_cmd->add_option("--samples", soup_opts.samples, "Number of soups")->check(CLI::PositiveNumber);
  soup_cmd->add_option("--seed", soup_opts.seed, "Random seed");
  add_out(soup_cmd);
  soup_cmd->callback([&] { action = [&](const Sinks& s) { return run_soup_sample(soup_opts, s); }; });

  ZetaDetOptions zeta_opts;
  auto* zeta_cmd = app.add_subcommand("zeta-det", "Zeta-regularized log determinant of a model surface");
  zeta_cmd->add_option("--surface", zeta_opts.surface, "interval:L, rect:AxB, torus:AxB, sphere:R or disk:R");
  zeta_cmd->add_option("--delta", zeta_opts.deltas, "Mellin split points (comma separated)")->delimiter(',');
  zeta_cmd->add_option("--zeta-at", zeta_opts.zeta_points, "Also evaluate zeta(s) at these s > 1")->delimiter(',');
  add_out(zeta_cmd);
  zeta_cmd->callback([&] { action = [&](const Sinks& s) { return run_zeta_det(zeta_opts, s); }; });

  LoopMassOptions mass_opts;
  auto* mass_cmd = app.add_subcommand("loop-mass", "Brownian loop mass in a quadratic-variation window");
  mass_cmd->add_option("--surface", mass_opts.surface, "Model surface");
  mass_cmd->add_option("--qv-low", mass_opts.qv_low, "Lower quadratic-variation cutoff")->check(CLI::PositiveNumber);
  mass_cmd->add_option("--qv-high", mass_opts.qv_high, "Upper cutoff; 0 means infinity");
  mass_cmd->add_option("--kappa", mass_opts.kappa, "Exponential penalty rate")->check(CLI::NonNegativeNumber);
  add_out(mass_cmd);
  mass_cmd->callback([&] { action = [&](const Sinks& s) { return run_loop_mass(mass_opts, s); }; });

  VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify-theorem", "Residuals of the loop-mass asymptotics");
  verify_cmd->add_option("--case", verify_opts.theorem_case, "boundary, closed or decay")
      ->check(CLI::IsMember({"boundary", "closed", "decay"}));
  verify_cmd->add_option("--surface", verify_opts.surface, "Model surface");
  verify_cmd->add_option("--delta", verify_opts.deltas, "delta values (default: 7 log-spaced in [1e-4, 1e-2])")->delimiter(',');
  verify_cmd->add_option("--cap", verify_opts.caps, "Upper cutoffs C for the closed case")->delimiter(',');
  verify_cmd->add_option("--kappa", verify_opts.kappas, "Penalty rates for the decay case")->delimiter(',');
  add_out(verify_cmd);
  verify_cmd->callback([&] { action = [&](const Sinks& s) { return run_verify_theorem(verify_opts, s); }; });

  LatticeOptions lattice_opts;
  auto* lattice_cmd = app.add_subcommand("lattice-torus", "Discrete torus determinants and the constant term");
  lattice_cmd->add_option("--sizes", lattice_opts.sizes, "Side lengths n, each doubling the last")->delimiter(',');
  lattice_cmd->add_option("--aspect", lattice_opts.aspect, "Integer aspect ratio")->check(CLI::PositiveNumber);
  add_out(lattice_cmd);
  lattice_cmd->callback([&] { action = [&](const Sinks& s) { return run_lattice_torus(lattice_opts, s); }; });

  GffOptions gff_opts;
  auto* gff_cmd = app.add_subcommand("gff-sample", "Sample a discrete Gaussian free field and write it to disk");
  gff_cmd->add_option("--size", gff_opts.size, "Grid size 2^k, 16 <= size <= 8192");
  gff_cmd->add_option("--seed", gff_opts.seed, "Random seed");
  gff_cmd->add_option("--out", gff_opts.out_path, "Binary field file")->required();
  gff_cmd->callback([&] { action = [&](const Sinks& s) { return run_gff_sample(gff_opts, s); }; });

  SubdivideOptions sub_opts;
  auto* sub_cmd = app.add_subcommand("subdivide", "Epsilon-square subdivision of a sampled field");
  sub_cmd->add_option("--size", sub_opts.size, "Grid size 2^k");
  sub_cmd->add_option("--seed", sub_opts.seed, "Random seed");
  sub_cmd->add_option("--charge", sub_opts.charge, "Matter central charge c < 25");
  sub_cmd->add_option("--eps-ratio", sub_opts.eps_ratio, "epsilon as a fraction of the unit square's size")
      ->check(CLI::PositiveNumber);
  sub_cmd->add_option("--epsilon", sub_opts.epsilon, "Absolute epsilon (overrides --eps-ratio)");
  sub_cmd->add_option("--depth-cap", sub_opts.depth_cap, "Deepest level; -1 means the grid level");
  sub_cmd->add_option("--size-measure", sub_opts.size_measure, "side or area")->check(CLI::IsMember({"side", "area"}));
  sub_cmd->add_option("--order", sub_opts.order, "bfs or dfs")->check(CLI::IsMember({"bfs", "dfs"}));
  sub_cmd->add_option("--svg", sub_opts.svg_path, "Render the partition to this SVG file");
  sub_cmd->add_option("--ball-radius", sub_opts.ball_radius, "Report adjacency ball growth up to this radius");
  sub_cmd->add_flag("--summary-only", sub_opts.summary_only, "Count squares without storing the partition");
  add_out(sub_cmd);
  sub_cmd->callback([&] { action = [&](const Sinks& s) { return run_subdivide(sub_opts, s); }; });

  ReweightOptions rw_opts;
  auto* rw_cmd = app.add_subcommand("reweight-test", "Central-charge reweighting against direct sampling");
  rw_cmd->add_option("--size", rw_opts.size, "Grid size 2^k");
  rw_cmd->add_option("--charge", rw_opts.charge, "Base central charge c <= 1");
  rw_cmd->add_option("--delta-charge", rw_opts.delta_charge, "Charge shift c'");
  rw_cmd->add_option("--samples", rw_opts.samples, "Samples per arm (>= 1000)");
  rw_cmd->add_option("--seed", rw_opts.seed, "Random seed");
  rw_cmd->add_option("--epsilon", rw_opts.epsilon, "Subdivision epsilon; 0 calibrates it");
  add_out(rw_cmd);
  rw_cmd->callback([&] { action = [&](const Sinks& s) { return run_reweight_test(rw_opts, s); }; });

  AcceptanceCliOptions acc_opts;
  auto* acc_cmd = app.add_subcommand("acceptance", "Run the acceptance criteria and print one line per criterion");
  acc_cmd->add_option("--only", acc_opts.only, "Criterion ids to run (default: all)")->delimiter(',');
  acc_cmd->add_option("--expect-fail", acc_opts.expect_fail, "Criterion ids whose failure does not fail the run")
      ->delimiter(',');
  add_out(acc_cmd);
  acc_cmd->callback([&] { action = [&](const Sinks& s) { return run_acceptance_command(acc_opts, s); }; });

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    sub->configurable();
  }
  for (int i = 1; i < argc; ++i) {
    if (app.get_subcommand_no_throw(argv[i]) != nullptr) {
      ini->section = argv[i];
      break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "loopzeta: error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const std::size_t workers = resolve_workers(global.workers);
    nlohmann::json log{{"command", sub->get_name()}, {"workers", workers}, {"options", resolved_options(*sub)}};
    if (auto* cfg = app.get_option("--config"); cfg->count() > 0) log["config_file"] = comma_join(cfg->results());
    std::cerr << log.dump() << std::endl;

    std::ofstream out_file, json_file;
    Sinks sinks;
    sinks.table = &std::cout;
    sinks.summary = &std::cerr;
    if (!global.out_path.empty() && sub->get_name() != "gff-sample") {
      out_file.open(global.out_path);
      if (!out_file) throw std::runtime_error("cannot write '" + global.out_path + "'");
      sinks.table = &out_file;
    }
    if (!global.json_path.empty()) {
      json_file.open(global.json_path);
      if (!json_file) throw std::runtime_error("cannot write '" + global.json_path + "'");
      sinks.summary = &json_file;
    }
    ThreadPool pool(workers);
    sinks.parallel = pool.as_parallel_for();
    return action(sinks);
  } catch (const std::exception& e) {
    std::cerr << "loopzeta: error: " << e.what() << '\n';
    return kExitError;
  }
}
