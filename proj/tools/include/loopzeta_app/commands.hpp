#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loopzeta/parallel.hpp"

namespace loopzeta::app {

/// Exit codes: 0 success, 2 success with flagged numerical warnings, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

/// Where a command writes: the primary table (CSV) and the JSON summary.
struct Sinks {
  std::ostream* table = nullptr;
  std::ostream* summary = nullptr;
  ParallelFor parallel = serial_for;
};

struct GraphLoopsOptions {
  std::string graph_path;  // edge-list file, "-" for stdin
  std::string example;     // "two-path" instead of a file
  int max_len = 40;
};
int run_graph_loops(const GraphLoopsOptions& o, const Sinks& out);

struct SoupOptions {
  std::string graph_path;
  std::string example;
  double intensity = 1.0;
  int max_len = 40;
  int samples = 1000;
  std::uint64_t seed = 1;
};
int run_soup_sample(const SoupOptions& o, const Sinks& out);

struct ZetaDetOptions {
  std::string surface = "disk:1";
  std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  std::vector<double> zeta_points;  // evaluate zeta(s) here too (s > 1)
};
int run_zeta_det(const ZetaDetOptions& o, const Sinks& out);

struct LoopMassOptions {
  std::string surface = "disk:1";
  double qv_low = 0.04;
  double qv_high = 0.0;  // <= 0 means infinity
  double kappa = 0.0;
};
int run_loop_mass(const LoopMassOptions& o, const Sinks& out);

struct VerifyOptions {
  std::string theorem_case = "boundary";  // boundary | closed | decay
  std::string surface = "disk:1";
  std::vector<double> deltas;  // default: 7 points log-spaced on [1e-4, 1e-2]
  std::vector<double> caps{50.0};
  std::vector<double> kappas{1e-2, 1e-3, 1e-4, 1e-5};
};
int run_verify_theorem(const VerifyOptions& o, const Sinks& out);

struct LatticeOptions {
  std::vector<int> sizes{64, 128, 256, 512};
  int aspect = 1;
};
int run_lattice_torus(const LatticeOptions& o, const Sinks& out);

struct GffOptions {
  int size = 256;
  std::uint64_t seed = 1;
  std::string out_path;  // binary dump; required
};
int run_gff_sample(const GffOptions& o, const Sinks& out);

struct SubdivideOptions {
  int size = 1024;
  std::uint64_t seed = 1;
  double charge = 0.0;
  double eps_ratio = 2e-4;   // epsilon = eps_ratio * A_h(unit square) unless epsilon > 0
  double epsilon = 0.0;
  int depth_cap = -1;
  std::string size_measure = "side";  // side | area
  std::string order = "bfs";          // bfs | dfs
  std::string svg_path;
  int ball_radius = 0;
  bool summary_only = false;
};
int run_subdivide(const SubdivideOptions& o, const Sinks& out);

struct ReweightOptions {
  int size = 64;
  double charge = 0.0;
  double delta_charge = -12.5;
  std::size_t samples = 10000;
  std::uint64_t seed = 11;
  double epsilon = 0.0;
};
int run_reweight_test(const ReweightOptions& o, const Sinks& out);

struct AcceptanceCliOptions {
  std::vector<int> only;
  std::vector<int> expect_fail;
};
int run_acceptance_command(const AcceptanceCliOptions& o, const Sinks& out);

}  // namespace loopzeta::app
