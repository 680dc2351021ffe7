#pragma once

#include <cstddef>

#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

struct PartitionMetrics {
  double codelength = 0.0;
  double one_level_codelength = 0.0;
  double extra_compression = 0.0;
  double effective_module_size = 0.0;
  /// Perplexity of the leaf-module sizes.
  double effective_leaf_count = 0.0;
  std::size_t leaf_module_count = 0;
  std::size_t hierarchy_depth = 0;
};

/// N divided by the perplexity 2^H(S) of leaf-module sizes, where sizes are
/// node counts.
double effective_module_size(const PartitionTree& tree, std::size_t node_count);

/// Perplexity 2^H(S) of the leaf-module sizes.
double effective_leaf_count(const PartitionTree& tree);

/// One-level code length minus the tree's code length at the same alpha.
/// Negative when the tree compresses worse than a single module.
double extra_compression(const BipartiteNetwork& net, const PartitionTree& tree, double alpha);

PartitionMetrics partition_metrics(const BipartiteNetwork& net, const PartitionTree& tree,
                                   double alpha);

}  // namespace bipmap
