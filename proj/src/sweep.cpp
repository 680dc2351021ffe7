#include "bipmap/sweep.h"

#include <cmath>
#include <stdexcept>

#include "bipmap/alpha.h"
#include "bipmap/codelength.h"
#include "bipmap/metrics.h"

namespace bipmap {

std::vector<double> info_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("sweep step must lie in (0, 1]");
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    double info = static_cast<double>(k) * step;
    if (info > 1.0 - 1e-9) {
      grid.push_back(1.0);
      break;
    }
    // Snap away representation noise such as 0.15000000000000002.
    info = std::round(info * 1e12) / 1e12;
    grid.push_back(info);
  }
  return grid;
}

std::vector<SweepRecord> run_sweep(const BipartiteNetwork& net, double step,
                                   const SearchParams& params) {
  std::vector<SweepRecord> out;
  for (const double info : info_grid(step)) {
    SweepRecord r;
    r.info = info;
    r.alpha = info_to_alpha(info);
    r.trials = params.num_trials;

    SearchParams two = params;
    two.mode = SearchMode::two_level;
    const SearchResult flat = run_trials(net, r.alpha, two);
    SearchParams hier = params;
    hier.mode = SearchMode::hierarchical;
    const SearchResult deep = run_trials(net, r.alpha, hier);

    const double one_level = one_level_codelength(net, r.alpha).bits;
    r.bits_two_level = flat.bits.bits;
    r.bits_hierarchical = deep.bits.bits;
    r.extra_two_level = one_level - flat.bits.bits;
    r.extra_hierarchical = one_level - deep.bits.bits;
    r.effective_size_two_level = effective_module_size(flat.tree, net.node_count());
    r.effective_size_hierarchical = effective_module_size(deep.tree, net.node_count());
    r.depth = deep.tree.depth();
    r.modules_two_level = flat.tree.leaf_count();
    r.modules_hierarchical = deep.tree.leaf_count();
    out.push_back(r);
  }
  return out;
}

std::vector<FixedSweepRecord> run_fixed_sweep(const BipartiteNetwork& net,
                                              const PartitionTree& tree, double step) {
  std::vector<FixedSweepRecord> out;
  for (const double info : info_grid(step)) {
    FixedSweepRecord r;
    r.info = info;
    r.alpha = info_to_alpha(info);
    r.bits = codelength(net, tree, r.alpha).bits;
    r.extra_compression = one_level_codelength(net, r.alpha).bits - r.bits;
    out.push_back(r);
  }
  return out;
}

}  // namespace bipmap
