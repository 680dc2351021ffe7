#pragma once

#include "bipmap/network.h"
#include "bipmap/partition.h"

namespace bipmap::testing {

/// Standard two-level map equation for an undirected weighted graph, coded
/// from edge weights alone: node rates s/2W, module exit rates equal to the
/// cut weight over 2W.
double reference_map_equation(const BipartiteNetwork& net, const Partition& partition);

/// Binary entropy in bits.
double binary_entropy(double p);

}  // namespace bipmap::testing
