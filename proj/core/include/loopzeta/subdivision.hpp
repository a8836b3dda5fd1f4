#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "loopzeta/gff_field.hpp"
#include "loopzeta/graph_loops.hpp"

namespace loopzeta {

/// Central charge c < 25 with background charge Q = sqrt((25 - c)/6) and,
/// for c <= 1, the coupling gamma in (0, 2] solving gamma/2 + 2/gamma = Q.
struct ChargeParams {
  double c = 0.0;
  double Q = 0.0;
  std::optional<double> gamma;
};

/// Throws InvalidArgument("Q undefined") for c >= 25.
ChargeParams charge_to_params(double c);

/// Euclidean size |S| entering A_h(S): side length (default) or area.
enum class SizeMeasure { SideLength, Area };

/// A_h(S) = exp(h_S / Q) * |S|.
double quantum_size(const GridField& field, double Q, const DyadicSquare& square,
                    SizeMeasure measure = SizeMeasure::SideLength);

enum class ScanOrder { BreadthFirst, DepthFirst };

struct DyadicPartition {
  std::vector<DyadicSquare> squares;  // sorted by (level, i, j)
  std::vector<bool> flagged;          // square sits at the cap with A > epsilon
  bool terminated = true;
  int depth_cap = 0;
};

/// epsilon-square subdivision: maximal dyadic squares with A_h <= epsilon.
/// Squares still above epsilon at depth_cap are kept and flagged. A negative
/// depth_cap means the grid level.
DyadicPartition subdivide(const GridField& field, double Q, double epsilon, int depth_cap = -1,
                          ScanOrder order = ScanOrder::BreadthFirst,
                          SizeMeasure measure = SizeMeasure::SideLength);

struct PartitionSummary {
  std::int64_t square_count = 0;
  std::int64_t flagged_count = 0;
  std::vector<std::int64_t> level_counts;  // index = level, up to depth_cap
  bool terminated = true;
};

/// Counts only; memory stays bounded by the worklist depth.
PartitionSummary subdivide_summary(const GridField& field, double Q, double epsilon, int depth_cap = -1,
                                   SizeMeasure measure = SizeMeasure::SideLength);

PartitionSummary summarize(const DyadicPartition& partition);

/// sum 4^-level, computed exactly on integer counts; 1 for a valid partition.
double partition_area(const DyadicPartition& partition);

/// Squares sharing a boundary segment of positive length are adjacent;
/// vertex v is partition.squares[v].
Graph adjacency_graph(const DyadicPartition& partition);

/// Index of the square containing the point (x, y), ties broken toward
/// larger coordinates; -1 if none.
int square_containing(const DyadicPartition& partition, double x, double y);

/// Shell sizes |{v : d(root, v) = r}| for r = 0..max_radius (BFS).
std::vector<std::int64_t> ball_growth(const Graph& graph, int root, int max_radius);

/// "level,i,j,flagged" rows with a header line.
void write_partition_csv(std::ostream& out, const DyadicPartition& partition);

/// Squares filled by level with a fixed palette.
void write_partition_svg(std::ostream& out, const DyadicPartition& partition, int pixels = 1024);

}  // namespace loopzeta
