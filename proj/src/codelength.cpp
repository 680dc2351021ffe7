#include "bipmap/codelength.h"

#include <stdexcept>


namespace bipmap {

double codebook_bits(std::span<const RatePair> entries) {
  double sum_left = 0.0, sum_right = 0.0;
  double plogp_left = 0.0, plogp_right = 0.0;
  for (const RatePair& r : entries) {
    if (r.left < 0.0 || r.right < 0.0) throw std::invalid_argument("negative rate in codebook");
    sum_left += r.left;
    sum_right += r.right;
    plogp_left += plogp(r.left);
    plogp_right += plogp(r.right);
  }
  // C H(x / C) = C log C - sum x log x
  return (plogp(sum_left) - plogp_left) + (plogp(sum_right) - plogp_right);
}

CodeLength codelength(const BipartiteNetwork& net, const PartitionTree& tree, double alpha) {
  const FlowSummary summary = flow_summary(net, tree, alpha);
  CodeLength out;
  out.codebook_bits.reserve(summary.codebooks.size());
  std::vector<RatePair> words;
  for (const Codebook& cb : summary.codebooks) {
    words.assign(cb.entries.begin(), cb.entries.end());
    if (cb.exit.total() > 0.0) words.push_back(cb.exit);
    const double bits = 0.5 * codebook_bits(words);
    out.codebook_bits.push_back(bits);
    out.bits += bits;
  }
  return out;
}

CodeLength one_level_codelength(const BipartiteNetwork& net, double alpha) {
  return codelength(net, PartitionTree::one_level(net.node_count()), alpha);
}

CodeLength standard_codelength(const BipartiteNetwork& net, const PartitionTree& tree) {
  return codelength(net, tree, 0.5);
}

CodeLength bipartite_codelength(const BipartiteNetwork& net, const PartitionTree& tree) {
  return codelength(net, tree, 0.0);
}

double total_coding_rate(const FlowSummary& summary) {
  double rate = 0.0;
  for (const Codebook& cb : summary.codebooks) rate += cb.usage.total();
  return 0.5 * rate;
}

}  // namespace bipmap
