#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

struct OracleResult {
  double bits = 0.0;
  /// Every flat partition within kOracleTolerance of `bits`, in restricted
  /// growth string form (normalized ids), in enumeration order.
  std::vector<Partition> optimal;
  /// Number of partitions evaluated: the Bell number of the node count.
  std::uint64_t examined = 0;
};

inline constexpr double kOracleTolerance = 1e-12;
inline constexpr std::size_t kOracleMaxNodes = 12;

/// Code length of a flat partition evaluated directly from module sums.
/// Agrees with codelength() on the corresponding two-level tree.
class FlatEvaluator {
 public:
  FlatEvaluator(const BipartiteNetwork& net, double alpha);
  /// `module_of` must use dense ids below `module_count`.
  double operator()(const std::vector<ModuleId>& module_of, std::size_t module_count);

 private:
  struct Sums {
    double words_left, words_right, words_plogp, boundary_left, boundary_right;
  };
  const BipartiteNetwork* net_;
  double alpha_;
  std::vector<double> word_left_, word_right_, word_plogp_, strength_;
  std::vector<Sums> sums_;
};

/// Exhaustive minimum over all flat partitions, each evaluated as a
/// two-level tree (one level for a single block). Throws
/// std::length_error when the network has more than `max_nodes` nodes.
OracleResult best_partition_bruteforce(const BipartiteNetwork& net, double alpha,
                                       std::size_t max_nodes = kOracleMaxNodes);

}  // namespace bipmap
