#pragma once

#include <cstdint>
#include <vector>

#include "loopzeta/graph_loops.hpp"
#include "loopzeta/random.hpp"

namespace loopzeta::app {

/// Connected graph on n vertices (3 <= n <= 8) whose last `boundary`
/// vertices kill the walk; edges drawn independently with probability p,
/// occasionally doubled. Redrawn until connected with every interior vertex
/// reaching the boundary.
Graph random_killed_graph(RandomStream& rng, int n, int boundary, double p = 0.5);

/// Connected closed multigraph on n vertices.
Graph random_connected_graph(RandomStream& rng, int n, double p = 0.5);

/// Fixed corpus of 50 connected graphs with 2..7 vertices (multi-edges included).
std::vector<Graph> tree_count_corpus();

/// Spanning trees counted by enumerating every (n-1)-subset of the edge list.
std::uint64_t enumerate_spanning_trees(const Graph& g);

/// Path boundary - x - y - boundary: two interior vertices, P = [[0, 1/2], [1/2, 0]].
Graph two_interior_path();

}  // namespace loopzeta::app
