#pragma once

#include <cstddef>
#include <vector>

#include "bipmap/network.h"
#include "bipmap/partition.h"
#include "bipmap/search.h"

namespace bipmap {

struct SweepRecord {
  double info = 0.0;
  double alpha = 0.5;
  double bits_two_level = 0.0;
  double bits_hierarchical = 0.0;
  double extra_two_level = 0.0;
  double extra_hierarchical = 0.0;
  double effective_size_two_level = 0.0;
  double effective_size_hierarchical = 0.0;
  std::size_t depth = 0;  // of the best hierarchical tree
  std::size_t modules_two_level = 0;
  std::size_t modules_hierarchical = 0;
  std::size_t trials = 0;
};

/// One fixed partition evaluated at one grid point.
struct FixedSweepRecord {
  double info = 0.0;
  double alpha = 0.5;
  double bits = 0.0;
  double extra_compression = 0.0;
};

/// Information grid {0, step, 2 step, ...} capped by and always including 1.
/// Throws std::invalid_argument unless 0 < step <= 1.
std::vector<double> info_grid(double step);

/// Runs the best-of-trials search in both modes at every grid point.
std::vector<SweepRecord> run_sweep(const BipartiteNetwork& net, double step,
                                   const SearchParams& params);

/// Evaluates `tree` across the grid without searching.
std::vector<FixedSweepRecord> run_fixed_sweep(const BipartiteNetwork& net,
                                              const PartitionTree& tree, double step);

}  // namespace bipmap
