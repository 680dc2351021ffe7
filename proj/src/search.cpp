#include "bipmap/search.h"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace bipmap {

namespace {

// Moves must gain at least this much to count; absorbs round-off so sweeps
// cannot cycle between equal-cost states.
constexpr double kMoveEpsilon = 1e-14;
constexpr std::size_t kMaxSweeps = 200;
// An outer loop counts as progress only when it gains this fraction of the
// current code length; smaller gains are kept but count as a stall.
constexpr double kRelativeOuterGain = 1e-4;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<ModuleId> dense_labels(std::span<const ModuleId> assignment, std::size_t& count) {
  const Partition p = Partition::normalized(assignment);
  count = p.module_count();
  return p.module_of;
}

std::vector<ModuleId> singletons(std::size_t n) {
  std::vector<ModuleId> a(n);
  std::iota(a.begin(), a.end(), ModuleId{0});
  return a;
}

/// Sweeps units in random order, moving each to the neighboring, second
/// neighboring or an empty module with the most negative delta. Returns true if any unit moved.
bool local_moves(ModuleState& state, Rng& rng, const SearchParams& params) {
  const FlowGraph& g = state.graph();
  const std::size_t n = g.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::vector<double> flow_to(n, 0.0);
  std::vector<char> touched_flag(n, 0);
  std::vector<ModuleId> touched;
  bool moved_any = false;

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    rng.shuffle(std::span<std::uint32_t>(order));
    const double before = state.codelength();
    std::size_t moves = 0;
    for (const std::uint32_t u : order) {
      const ModuleId current = state.module_of(u);
      for (const auto& arc : g.arcs_of(u)) {
        const ModuleId m = state.module_of(arc.target);
        if (!touched_flag[m]) {
          touched_flag[m] = 1;
          touched.push_back(m);
        }
        flow_to[m] += arc.flow;
      }
      const double flow_current = flow_to[current];
      const ModuleState::Removal removal = state.removal(u, flow_current);
      double best_delta = std::numeric_limits<double>::infinity();
      ModuleId best = current;
      double best_flow = 0.0;
      const auto consider = [&](ModuleId m, double flow) {
        const double d = state.delta_move(removal, m, flow);
        if (d < best_delta || (d == best_delta && m < best)) {
          best_delta = d;
          best = m;
          best_flow = flow;
        }
      };
      const std::size_t direct = touched.size();
      // Same-side units never share an arc, so also try the module of one
      // random second neighbor per arc.
      for (const auto& arc : g.arcs_of(u)) {
        const auto second = g.arcs_of(arc.target);
        const std::uint32_t w = second[rng.below(second.size())].target;
        const ModuleId m = state.module_of(w);
        if (w != u && !touched_flag[m]) {
          touched_flag[m] = 1;
          touched.push_back(m);
        }
      }
      for (std::size_t i = 0; i < touched.size(); ++i) {
        const ModuleId m = touched[i];
        if (m != current) consider(m, i < direct ? flow_to[m] : 0.0);
      }
      if (state.members(current) > 1) {
        const ModuleId empty = state.empty_module();
        if (empty != ModuleState::no_module) consider(empty, 0.0);
      }
      for (const ModuleId m : touched) {
        flow_to[m] = 0.0;
        touched_flag[m] = 0;
      }
      touched.clear();

      if (best == current) continue;
      if (best_delta < -kMoveEpsilon) {
        state.apply_move(u, best, flow_current, best_flow);
        ++moves;
      } else if (best_delta <= kMoveEpsilon && rng.below(2) == 0) {
        state.apply_move(u, best, flow_current, best_flow);
      }
    }
    if (moves == 0) break;
    moved_any = true;
    if (before - state.codelength() < params.min_improvement) break;
  }
  return moved_any;
}

double evaluate(const FlowGraph& g, std::span<const ModuleId> assignment) {
  return ModuleState(g, assignment).codelength();
}

}  // namespace

void SearchParams::validate() const {
  if (num_trials == 0) throw std::invalid_argument("num_trials must be at least 1");
  if (!(min_improvement > 0.0)) throw std::invalid_argument("min_improvement must be positive");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(trial)));
}

__extension__ using Wide = unsigned __int128;

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's nearly divisionless method.
  std::uint64_t x = engine_();
  Wide m = static_cast<Wide>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<Wide>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

namespace {

/// Local moves from `start`, then repeated aggregation into module units
/// until a level makes no move. Returns dense module ids per base unit.
std::vector<ModuleId> multilevel(const FlowGraph& graph, std::vector<ModuleId> start, Rng& rng,
                                 const SearchParams& params) {
  const std::size_t n = graph.size();
  std::vector<ModuleId> node_module(n);
  std::vector<ModuleId> unit_of(n);  // base unit -> unit of the current level
  std::iota(unit_of.begin(), unit_of.end(), ModuleId{0});
  FlowGraph coarse;
  const FlowGraph* level = &graph;
  std::size_t count = 0;
  for (std::size_t depth = 0;; ++depth) {
    ModuleState state(*level, start);
    const bool moved = local_moves(state, rng, params);
    const std::vector<ModuleId> assignment = dense_labels(state.assignment(), count);
    for (std::size_t i = 0; i < n; ++i) node_module[i] = assignment[unit_of[i]];
    if (!moved && depth > 0) break;
    if (count == level->size() || count <= 1) break;
    for (std::size_t i = 0; i < n; ++i) unit_of[i] = assignment[unit_of[i]];
    coarse = level->aggregate(assignment, count);
    level = &coarse;
    start = singletons(count);
  }
  return node_module;
}

/// Units `members` of `graph` as a graph of their own. Boundaries stay those
/// of the full graph, so arcs leaving the subset still count as exits.
FlowGraph subgraph(const FlowGraph& graph, std::span<const std::uint32_t> members,
                   std::vector<int>& local, RatePair fixed_index_entry) {
  std::vector<FlowGraph::Unit> units;
  units.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[members[i]] = static_cast<int>(i);
    units.push_back(graph.units[members[i]]);
  }
  std::vector<FlowGraph::Link> links;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (const auto& arc : graph.arcs_of(members[i]))
      if (local[arc.target] > static_cast<int>(i))
        links.push_back({static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(local[arc.target]), arc.flow});
  for (const std::uint32_t u : members) local[u] = -1;
  return FlowGraph::build(std::move(units), std::move(links), graph.alpha, fixed_index_entry);
}

/// Splits every module into sub-modules found by searching inside it, then
/// moves the sub-modules between modules.
std::vector<ModuleId> coarse_tune(const FlowGraph& graph, std::span<const ModuleId> assignment,
                                  Rng& rng, const SearchParams& params) {
  const std::size_t n = graph.size();
  std::size_t count = 0;
  const std::vector<ModuleId> module_of = dense_labels(assignment, count);
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::uint32_t u = 0; u < n; ++u) members[module_of[u]].push_back(u);

  const ModuleState whole(graph, module_of);
  RatePair entries;
  for (ModuleId m = 0; m < count; ++m) entries += whole.entry_of(m);

  std::vector<ModuleId> sub_of(n);
  std::vector<ModuleId> sub_module;  // sub-module -> module
  std::vector<int> local(n, -1);
  for (ModuleId m = 0; m < count; ++m) {
    const auto base = static_cast<ModuleId>(sub_module.size());
    std::vector<ModuleId> split(members[m].size(), 0);
    if (members[m].size() > 1) {
      // Entries of the other modules are fixed index code words.
      const RatePair own = whole.entry_of(m);
      const RatePair others{std::max(0.0, entries.left - own.left),
                            std::max(0.0, entries.right - own.right)};
      const FlowGraph sub = subgraph(graph, members[m], local, others);
      split = multilevel(sub, singletons(sub.size()), rng, params);
    }
    std::size_t parts = 0;
    split = dense_labels(split, parts);
    for (std::size_t i = 0; i < members[m].size(); ++i) sub_of[members[m][i]] = base + split[i];
    sub_module.insert(sub_module.end(), parts, m);
  }
  if (sub_module.size() == count) return module_of;

  const FlowGraph coarse = graph.aggregate(sub_of, sub_module.size());
  const std::vector<ModuleId> moved = multilevel(coarse, sub_module, rng, params);
  std::vector<ModuleId> out(n);
  for (std::size_t u = 0; u < n; ++u) out[u] = moved[sub_of[u]];
  return dense_labels(out, count);
}

}  // namespace

std::vector<ModuleId> search_flow_graph(const FlowGraph& graph, Rng& rng,
                                        const SearchParams& params) {
  const std::size_t n = graph.size();
  if (n <= 1) return singletons(n);
  std::vector<ModuleId> best = multilevel(graph, singletons(n), rng, params);
  double best_bits = evaluate(graph, best);

  // Alternate fine-tuning (original units, starting from the current
  // modules) and coarse-tuning (sub-modules) until both stall.
  std::size_t stalled = 0;
  for (std::size_t outer = 0; outer < params.max_outer_loops && stalled < 2; ++outer) {
    const std::vector<ModuleId> candidate = outer % 2 == 0
                                                ? coarse_tune(graph, best, rng, params)
                                                : multilevel(graph, best, rng, params);
    const double bits = evaluate(graph, candidate);
    const double gain = best_bits - bits;
    if (gain >= params.min_improvement) {
      best = candidate;
      best_bits = bits;
    }
    if (gain >= std::max(params.min_improvement, kRelativeOuterGain * best_bits))
      stalled = 0;
    else
      ++stalled;
  }
  std::size_t count = 0;
  return dense_labels(best, count);
}

SearchResult optimize_two_level(const BipartiteNetwork& net, double alpha, std::uint64_t seed,
                                const SearchParams& params) {
  params.validate();
  Rng rng(seed);
  const FlowGraph graph = FlowGraph::from_network(net, alpha);
  const std::vector<ModuleId> assignment = search_flow_graph(graph, rng, params);

  SearchResult result;
  result.tree = PartitionTree::two_level(Partition{assignment});
  result.bits = codelength(net, result.tree, alpha);
  CodeLength one = one_level_codelength(net, alpha);
  if (one.bits <= result.bits.bits) {
    result.tree = PartitionTree::one_level(net.node_count());
    result.bits = std::move(one);
  }
  result.trial_bits = {result.bits.bits};
  return result;
}

namespace {

struct BoundarySplit {
  double inside_left = 0.0;
  double inside_right = 0.0;
};

/// Builds hierarchy levels on top of a two-level solution.
class HierarchyRefiner {
 public:
  HierarchyRefiner(const BipartiteNetwork& net, double alpha, Rng& rng,
                   const SearchParams& params)
      : net_(net), alpha_(alpha), rng_(rng), params_(params), mark_(net.node_count(), -1) {}

  void refine(PartitionTree& tree) {
    if (tree.is_leaf(0)) return;
    while (try_group(tree, 0)) {
    }
    std::deque<std::size_t> queue;
    for (std::size_t leaf : tree.leaves()) queue.push_back(leaf);
    while (!queue.empty()) {
      const std::size_t leaf = queue.front();
      queue.pop_front();
      if (!try_split(tree, leaf)) continue;
      try_group(tree, leaf);
      for (std::size_t l : leaves_below(tree, leaf)) queue.push_back(l);
    }
  }

 private:
  static std::vector<std::size_t> leaves_below(const PartitionTree& tree, std::size_t i) {
    std::vector<std::size_t> out, stack{i};
    while (!stack.empty()) {
      const std::size_t j = stack.back();
      stack.pop_back();
      if (tree.is_leaf(j))
        out.push_back(j);
      else
        for (std::size_t c : tree.module(j).children) stack.push_back(c);
    }
    return out;
  }

  BoundarySplit boundary_of(std::span<const NodeId> nodes) {
    for (NodeId n : nodes) mark_[n] = 1;
    BoundarySplit b;
    const double total = net_.total_weight();
    for (NodeId n : nodes)
      for (const Neighbor& nb : net_.neighbors(n))
        if (mark_[nb.node] != 1)
          (net_.side(n) == Side::left ? b.inside_left : b.inside_right) += nb.weight / total;
    for (NodeId n : nodes) mark_[n] = -1;
    return b;
  }

  RatePair exit_pair(const BoundarySplit& b) const {
    return crossing_rate(Side::right, b.inside_left, alpha_) +
           crossing_rate(Side::left, b.inside_right, alpha_);
  }

  bool try_split(PartitionTree& tree, std::size_t leaf) {
    const std::vector<NodeId> members = tree.module(leaf).members;
    if (members.size() < 2) return false;
    const RatePair exit = leaf == 0 ? RatePair{} : exit_pair(boundary_of(members));
    const FlowGraph graph = FlowGraph::induced(net_, members, alpha_, exit);
    const std::vector<ModuleId> assignment = search_flow_graph(graph, rng_, params_);
    const std::size_t k = Partition{assignment}.module_count();
    if (k < 2) return false;

    const double split_bits = ModuleState(graph, assignment).codelength();
    const std::vector<ModuleId> whole(members.size(), 0);
    const double leaf_bits = ModuleState(graph, whole).module_codebook_bits(0);
    if (!(split_bits < leaf_bits - params_.min_improvement)) return false;
    tree.split_leaf(leaf, assignment);
    return true;
  }

  bool try_group(PartitionTree& tree, std::size_t parent) {
    const std::vector<std::size_t> children = tree.module(parent).children;
    if (children.size() < 3) return false;

    std::vector<FlowGraph::Unit> units(children.size());
    std::vector<std::vector<NodeId>> nodes(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) {
      nodes[i] = tree.nodes_below(children[i]);
      const BoundarySplit b = boundary_of(nodes[i]);
      const RatePair entry = exit_pair(b).swapped();
      units[i].codewords = entry;
      units[i].codeword_plogp = plogp(entry.left) + plogp(entry.right);
      units[i].boundary_left = b.inside_left;
      units[i].boundary_right = b.inside_right;
    }
    for (std::size_t i = 0; i < children.size(); ++i)
      for (NodeId n : nodes[i]) mark_[n] = static_cast<int>(i);
    std::vector<FlowGraph::Link> links;
    const double total = net_.total_weight();
    for (NodeId u = 0; u < net_.left_count(); ++u) {
      if (mark_[u] < 0) continue;
      for (const Neighbor& nb : net_.neighbors(u))
        if (mark_[nb.node] >= 0 && mark_[nb.node] != mark_[u])
          links.push_back({static_cast<std::uint32_t>(mark_[u]),
                           static_cast<std::uint32_t>(mark_[nb.node]), nb.weight / total});
    }
    const std::vector<NodeId> all = tree.nodes_below(parent);
    for (NodeId n : all) mark_[n] = -1;
    const RatePair exit = parent == 0 ? RatePair{} : exit_pair(boundary_of(all));

    const FlowGraph graph = FlowGraph::build(std::move(units), std::move(links), alpha_, exit);
    const std::vector<ModuleId> groups = search_flow_graph(graph, rng_, params_);
    const std::size_t k = Partition{groups}.module_count();
    if (k <= 1 || k == children.size()) return false;

    // Groups of one child are spliced out of the tree, so their codebooks
    // do not count.
    const ModuleState grouped(graph, groups);
    double grouped_bits = grouped.index_codebook_bits();
    for (ModuleId m = 0; m < k; ++m)
      if (grouped.members(m) > 1) grouped_bits += grouped.module_codebook_bits(m);
    const double flat_bits = ModuleState(graph, singletons(children.size())).index_codebook_bits();
    if (!(grouped_bits < flat_bits - params_.min_improvement)) return false;
    tree.group_children(parent, groups);
    return true;
  }

  const BipartiteNetwork& net_;
  double alpha_;
  Rng& rng_;
  const SearchParams& params_;
  std::vector<int> mark_;
};

}  // namespace

SearchResult optimize_hierarchical(const BipartiteNetwork& net, double alpha,
                                   std::uint64_t seed, const SearchParams& params) {
  SearchResult two_level = optimize_two_level(net, alpha, seed, params);
  Rng rng(splitmix64(seed ^ 0x5bd1e9955bd1e995ULL));
  PartitionTree tree = two_level.tree;
  HierarchyRefiner(net, alpha, rng, params).refine(tree);
  tree.compact();
  CodeLength bits = codelength(net, tree, alpha);
  if (!(bits.bits < two_level.bits.bits)) return two_level;
  SearchResult result;
  result.tree = std::move(tree);
  result.bits = std::move(bits);
  result.trial_bits = {result.bits.bits};
  return result;
}

SearchResult run_trials(const BipartiteNetwork& net, double alpha, const SearchParams& params) {
  params.validate();
  std::vector<SearchResult> results(params.num_trials);
  const auto run_one = [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(params.seed, t);
    results[t] = params.mode == SearchMode::two_level
                     ? optimize_two_level(net, alpha, seed, params)
                     : optimize_hierarchical(net, alpha, seed, params);
  };

  std::size_t workers = params.threads == 0 ? std::thread::hardware_concurrency() : params.threads;
  workers = std::clamp<std::size_t>(workers, 1, params.num_trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < params.num_trials; ++t) run_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < params.num_trials; t = next++) run_one(t);
      });
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < results.size(); ++t)
    if (results[t].bits.bits < results[best].bits.bits) best = t;
  SearchResult out = std::move(results[best]);
  out.best_trial = best;
  out.trial_bits.clear();
  for (const SearchResult& r : results) out.trial_bits.push_back(r.bits.bits);
  // results[best] was moved from; its bits were read before the move.
  out.trial_bits[best] = out.bits.bits;
  return out;
}

}  // namespace bipmap
