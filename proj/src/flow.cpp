#include "bipmap/flow.h"

#include <stdexcept>

namespace bipmap {

double VisitRates::left_sum(const BipartiteNetwork& net) const {
  double s = 0.0;
  for (NodeId n = 0; n < net.left_count(); ++n) s += rate[n];
  return s;
}

double VisitRates::right_sum(const BipartiteNetwork& net) const {
  double s = 0.0;
  for (auto n = static_cast<NodeId>(net.left_count()); n < net.node_count(); ++n) s += rate[n];
  return s;
}

VisitRates visit_rates(const BipartiteNetwork& net) {
  VisitRates out;
  out.rate.resize(net.node_count());
  for (NodeId n = 0; n < net.node_count(); ++n) out.rate[n] = net.strength(n) / net.total_weight();
  return out;
}

RatePair mixed_rate(Side side, double p, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("flipping rate outside [0, 1]");
  const double kept = (1.0 - alpha) * p;
  const double flipped = alpha * p;
  return side == Side::left ? RatePair{kept, flipped} : RatePair{flipped, kept};
}

RatePair crossing_rate(Side destination, double flow, double alpha) {
  return mixed_rate(destination, flow, alpha);
}

FlowSummary flow_summary(const BipartiteNetwork& net, const PartitionTree& tree, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("flipping rate outside [0, 1]");
  tree.validate(net.node_count());

  const std::size_t k = tree.size();
  std::vector<std::size_t> level(k, 0);
  // Children always have larger levels; compute top-down from the root.
  {
    std::vector<std::size_t> stack{0};
    level[0] = 0;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t c : tree.module(i).children) {
        level[c] = level[i] + 1;
        stack.push_back(c);
      }
    }
  }
  const auto leaf_of = tree.leaf_of(net.node_count());

  // Boundary flow of each module split by the side of its inside endpoint.
  std::vector<double> inside_left(k, 0.0), inside_right(k, 0.0);
  const double total = net.total_weight();
  for (const Edge& e : net.edges()) {
    const double f = e.weight / total;
    std::size_t a = leaf_of[e.left];
    std::size_t b = leaf_of[e.right];
    while (a != b) {
      if (level[a] >= level[b]) {
        inside_left[a] += f;
        a = tree.module(a).parent;
      } else {
        inside_right[b] += f;
        b = tree.module(b).parent;
      }
    }
  }

  FlowSummary out;
  out.alpha = alpha;
  out.codebooks.resize(k);
  out.module_entry.resize(k);
  std::vector<RatePair> exit(k);
  for (std::size_t i = 1; i < k; ++i) {
    // Leaving through an inside-left endpoint lands on a right node.
    exit[i] = crossing_rate(Side::right, inside_left[i], alpha) +
              crossing_rate(Side::left, inside_right[i], alpha);
    out.module_entry[i] = exit[i].swapped();
  }

  const VisitRates rates = visit_rates(net);
  for (std::size_t i = 0; i < k; ++i) {
    Codebook& cb = out.codebooks[i];
    cb.module = i;
    cb.leaf = tree.is_leaf(i);
    cb.exit = exit[i];
    if (cb.leaf) {
      for (NodeId n : tree.module(i).members)
        cb.entries.push_back(mixed_rate(net.side(n), rates.rate[n], alpha));
    } else {
      for (std::size_t c : tree.module(i).children) cb.entries.push_back(out.module_entry[c]);
    }
    cb.usage = cb.exit;
    for (const RatePair& r : cb.entries) cb.usage += r;
  }
  return out;
}

}  // namespace bipmap
