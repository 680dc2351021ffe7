#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bipmap/flow.h"
#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap {

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

struct CodeLength {
  double bits = 0.0;
  /// Contribution of each tree module's codebook, already halved so that the
  /// contributions sum to `bits`.
  std::vector<double> codebook_bits;
};

/// Usage-weighted entropy of a codebook whose code words carry pair-valued
/// rates: C_left * H(left components / C_left) + the same for the right
/// components. Components with zero total contribute nothing.
/// Throws std::invalid_argument for negative components.
double codebook_bits(std::span<const RatePair> entries);

/// Code length in bits of `tree` under flipping rate `alpha`, in the two-step
/// scale of the standard map equation.
CodeLength codelength(const BipartiteNetwork& net, const PartitionTree& tree, double alpha);

CodeLength one_level_codelength(const BipartiteNetwork& net, double alpha);

/// alpha = 1/2: node types carry no information.
CodeLength standard_codelength(const BipartiteNetwork& net, const PartitionTree& tree);

/// alpha = 0: node types are fully known.
CodeLength bipartite_codelength(const BipartiteNetwork& net, const PartitionTree& tree);

/// Sum of usage totals over all codebooks in the two-step scale (q plus the
/// module usage rates for a two-level tree).
double total_coding_rate(const FlowSummary& summary);

}  // namespace bipmap
