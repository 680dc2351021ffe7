#include "bipmap/oracle.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "bipmap/codelength.h"
#include "bipmap/flow.h"

namespace bipmap {

FlatEvaluator::FlatEvaluator(const BipartiteNetwork& net, double alpha)
    : net_(&net), alpha_(alpha) {
  const VisitRates rates = visit_rates(net);
  const std::size_t n = net.node_count();
  word_left_.resize(n);
  word_right_.resize(n);
  word_plogp_.resize(n);
  strength_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    const RatePair w = mixed_rate(net.side(i), rates.rate[i], alpha);
    word_left_[i] = w.left;
    word_right_[i] = w.right;
    word_plogp_[i] = plogp(w.left) + plogp(w.right);
    strength_[i] = rates.rate[i];
  }
}

double FlatEvaluator::operator()(const std::vector<ModuleId>& module_of,
                                 std::size_t module_count) {
  sums_.assign(module_count, Sums{0, 0, 0, 0, 0});
  const std::size_t n = net_->node_count();
  for (NodeId i = 0; i < n; ++i) {
    Sums& s = sums_[module_of[i]];
    s.words_left += word_left_[i];
    s.words_right += word_right_[i];
    s.words_plogp += word_plogp_[i];
    // Full strength first; internal edges are removed below.
    (net_->side(i) == Side::left ? s.boundary_left : s.boundary_right) += strength_[i];
  }
  const double total = net_->total_weight();
  for (const Edge& e : net_->edges()) {
    const ModuleId m = module_of[e.left];
    if (m != module_of[e.right]) continue;
    const double f = e.weight / total;
    sums_[m].boundary_left -= f;
    sums_[m].boundary_right -= f;
  }

  const double a = alpha_;
  double entry_left = 0.0, entry_right = 0.0, entry_plogp = 0.0, modules = 0.0;
  for (const Sums& s : sums_) {
    const double bl = std::max(s.boundary_left, 0.0);
    const double br = std::max(s.boundary_right, 0.0);
    const double exit_left = a * bl + (1.0 - a) * br;
    const double exit_right = (1.0 - a) * bl + a * br;
    const double exit_plogp = plogp(exit_left) + plogp(exit_right);
    entry_left += exit_right;
    entry_right += exit_left;
    entry_plogp += exit_plogp;
    modules += plogp(s.words_left + exit_left) + plogp(s.words_right + exit_right) -
               s.words_plogp - exit_plogp;
  }
  const double index = plogp(entry_left) + plogp(entry_right) - entry_plogp;
  return 0.5 * (index + modules);
}

OracleResult best_partition_bruteforce(const BipartiteNetwork& net, double alpha,
                                       std::size_t max_nodes) {
  const std::size_t n = net.node_count();
  if (n > max_nodes)
    throw std::length_error("oracle accepts at most " + std::to_string(max_nodes) +
                            " nodes, network has " + std::to_string(n));
  if (n == 0) throw std::invalid_argument("oracle needs a nonempty network");

  FlatEvaluator evaluate(net, alpha);
  OracleResult out;
  out.bits = std::numeric_limits<double>::infinity();
  std::vector<Partition> candidates;

  // Restricted growth strings: rgs[0] = 0, rgs[i] <= 1 + max(rgs[0..i-1]).
  std::vector<ModuleId> rgs(n, 0);
  std::vector<ModuleId> prefix_max(n, 0);
  while (true) {
    const std::size_t k = prefix_max[n - 1] + 1;
    const double bits = evaluate(rgs, k);
    ++out.examined;
    if (bits < out.bits + kOracleTolerance) {
      out.bits = std::min(out.bits, bits);
      candidates.push_back(Partition{rgs});
    }

    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }

  for (Partition& p : candidates) {
    if (evaluate(p.module_of, p.module_count()) <= out.bits + kOracleTolerance)
      out.optimal.push_back(std::move(p));
  }
  return out;
}

}  // namespace bipmap
