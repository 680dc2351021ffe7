#pragma once

#include <vector>

#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

/// Flow split into the part observed on left nodes and the part observed on
/// right nodes.
struct RatePair {
  double left = 0.0;
  double right = 0.0;

  double total() const { return left + right; }
  RatePair swapped() const { return {right, left}; }

  RatePair& operator+=(const RatePair& o) {
    left += o.left;
    right += o.right;
    return *this;
  }
  friend RatePair operator+(RatePair a, const RatePair& b) { return a += b; }
  friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// Per-side stationary visit rates; each side sums to 1.
struct VisitRates {
  std::vector<double> rate;  // indexed by NodeId, normalized within the node's side

  double left_sum(const BipartiteNetwork& net) const;
  double right_sum(const BipartiteNetwork& net) const;
};

/// p_n = strength(n) / total weight. Requires every node to have an edge.
VisitRates visit_rates(const BipartiteNetwork& net);

/// Mixed visit rate of a node with rate `p` on `side` under flipping rate
/// `alpha`: left -> ((1-a)p, ap), right -> (ap, (1-a)p).
/// Throws std::domain_error for alpha outside [0, 1].
RatePair mixed_rate(Side side, double p, double alpha);

/// Rate of flow crossing a boundary, classified by the side of the node it
/// lands on.
RatePair crossing_rate(Side destination, double flow, double alpha);

/// Codebook statistics for one module of a partition tree. All rates use the
/// doubled scale in which each direction of an edge carries weight / total.
struct Codebook {
  std::size_t module = 0;
  bool leaf = false;
  /// Node visit pairs for a leaf, child entry pairs for an internal module.
  std::vector<RatePair> entries;
  /// Zero for the root.
  RatePair exit;
  RatePair usage;
};

struct FlowSummary {
  double alpha = 0.5;
  std::vector<Codebook> codebooks;  // indexed like PartitionTree modules
  /// Entry pair of every tree module (zero for the root).
  std::vector<RatePair> module_entry;
};

/// Throws std::invalid_argument for trees that do not partition the network.
FlowSummary flow_summary(const BipartiteNetwork& net, const PartitionTree& tree, double alpha);

}  // namespace bipmap
