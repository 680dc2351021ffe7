#include "bipmap/metrics.h"

#include <cmath>

#include "bipmap/codelength.h"

namespace bipmap {

double effective_leaf_count(const PartitionTree& tree) {
  double total = 0.0;
  for (std::size_t leaf : tree.leaves()) total += static_cast<double>(tree.module(leaf).members.size());
  double entropy = 0.0;
  for (std::size_t leaf : tree.leaves())
    entropy -= plogp(static_cast<double>(tree.module(leaf).members.size()) / total);
  return std::exp2(entropy);
}

double effective_module_size(const PartitionTree& tree, std::size_t node_count) {
  return static_cast<double>(node_count) / effective_leaf_count(tree);
}

double extra_compression(const BipartiteNetwork& net, const PartitionTree& tree, double alpha) {
  return one_level_codelength(net, alpha).bits - codelength(net, tree, alpha).bits;
}

PartitionMetrics partition_metrics(const BipartiteNetwork& net, const PartitionTree& tree,
                                   double alpha) {
  PartitionMetrics m;
  m.codelength = codelength(net, tree, alpha).bits;
  m.one_level_codelength = one_level_codelength(net, alpha).bits;
  m.extra_compression = m.one_level_codelength - m.codelength;
  m.effective_leaf_count = effective_leaf_count(tree);
  m.effective_module_size = static_cast<double>(net.node_count()) / m.effective_leaf_count;
  m.leaf_module_count = tree.leaf_count();
  m.hierarchy_depth = tree.depth();
  return m;
}

}  // namespace bipmap
