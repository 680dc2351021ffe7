#include "networks.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

namespace bipmap::testing {

double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng.below(std::uint64_t{1} << 53)) / 9007199254740992.0;
  return lo + (hi - lo) * u;
}

BipartiteNetwork path_network() {
  return BipartiteNetwork::from_edges(2, 1, {{0, 2, 1.0}, {1, 2, 1.0}}, {"u1", "u2", "v1"});
}

BipartiteNetwork complete_bipartite(std::size_t left, std::size_t right, double weight) {
  std::vector<Edge> edges;
  for (NodeId l = 0; l < left; ++l)
    for (NodeId r = 0; r < right; ++r)
      edges.push_back({l, static_cast<NodeId>(left + r), weight});
  return BipartiteNetwork::from_edges(left, right, std::move(edges));
}

BipartiteNetwork two_joined_k22() {
  std::vector<Edge> edges;
  for (NodeId b = 0; b < 2; ++b)
    for (NodeId l = 0; l < 2; ++l)
      for (NodeId r = 0; r < 2; ++r) edges.push_back({2 * b + l, 4 + 2 * b + r, 1.0});
  edges.push_back({1, 6, 1.0});
  return BipartiteNetwork::from_edges(4, 4, std::move(edges));
}

namespace {

// Spanning tree over left and right ids plus `extra` random edges.
BipartiteNetwork random_bipartite(Rng& rng, std::size_t left, std::size_t right,
                                  std::size_t extra, double lo, double hi) {
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  auto add = [&](NodeId l, NodeId r, double w) {
    if (seen.emplace(l, r).second) edges.push_back({l, r, w});
  };
  // Attach nodes in random order, each to a random earlier node of the
  // other side.
  std::vector<NodeId> order(left + right);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<NodeId>(order));
  auto is_left = [&](NodeId n) { return n < left; };
  // Make sure the first two placed nodes are on opposite sides.
  auto other = std::find_if(order.begin() + 1, order.end(),
                            [&](NodeId n) { return is_left(n) != is_left(order[0]); });
  std::iter_swap(order.begin() + 1, other);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const NodeId n = order[i];
    std::vector<NodeId> candidates;
    for (std::size_t j = 0; j < i; ++j)
      if (is_left(order[j]) != is_left(n)) candidates.push_back(order[j]);
    const NodeId m = candidates[rng.below(candidates.size())];
    const double w = uniform(rng, lo, hi);
    if (is_left(n))
      add(n, m, w);
    else
      add(m, n, w);
  }
  for (std::size_t k = 0; k < extra; ++k) {
    const NodeId l = static_cast<NodeId>(rng.below(left));
    const NodeId r = static_cast<NodeId>(left + rng.below(right));
    add(l, r, uniform(rng, lo, hi));
  }
  return BipartiteNetwork::from_edges(left, right, std::move(edges));
}

}  // namespace

BipartiteNetwork random_connected(Rng& rng, std::size_t max_nodes) {
  const std::size_t n = 4 + rng.below(max_nodes - 3);
  const std::size_t left = 2 + rng.below(n - 3);
  const std::size_t right = n - left;
  const std::size_t extra = rng.below(2 * n);
  return random_bipartite(rng, left, right, extra, 0.1, 5.0);
}

Planted planted_two_block(Rng& rng, std::size_t max_nodes) {
  // Each block gets at least 2 nodes per side.
  const std::size_t n = 8 + rng.below(max_nodes - 7);
  std::size_t sizes[2][2] = {{2, 2}, {2, 2}};
  for (std::size_t k = 8; k < n; ++k) ++sizes[rng.below(2)][rng.below(2)];
  const std::size_t left = sizes[0][0] + sizes[1][0];
  const std::size_t right = sizes[0][1] + sizes[1][1];

  std::vector<NodeId> left_block, right_block;
  for (std::size_t b = 0; b < 2; ++b) {
    left_block.insert(left_block.end(), sizes[b][0], static_cast<NodeId>(b));
    right_block.insert(right_block.end(), sizes[b][1], static_cast<NodeId>(b));
  }
  std::vector<Edge> edges;
  for (NodeId l = 0; l < left; ++l)
    for (NodeId r = 0; r < right; ++r) {
      if (left_block[l] == right_block[r]) {
        if (rng.below(10) < 8) edges.push_back({l, static_cast<NodeId>(left + r), uniform(rng, 1.0, 3.0)});
      }
    }
  // Keep each block connected: every node links to the block's first node
  // of the other side.
  for (std::size_t b = 0; b < 2; ++b) {
    std::vector<NodeId> ls, rs;
    for (NodeId l = 0; l < left; ++l)
      if (left_block[l] == b) ls.push_back(l);
    for (NodeId r = 0; r < right; ++r)
      if (right_block[r] == b) rs.push_back(static_cast<NodeId>(left + r));
    for (const NodeId l : ls) edges.push_back({l, rs[0], 1.0});
    for (std::size_t j = 1; j < rs.size(); ++j) edges.push_back({ls[0], rs[j], 1.0});
  }
  // One or two light bridges.
  const std::size_t bridges = 1 + rng.below(2);
  for (std::size_t k = 0; k < bridges; ++k) {
    NodeId l, r;
    do {
      l = static_cast<NodeId>(rng.below(left));
      r = static_cast<NodeId>(rng.below(right));
    } while (left_block[l] == right_block[r]);
    edges.push_back({l, static_cast<NodeId>(left + r), uniform(rng, 0.1, 0.5)});
  }
  Planted out{BipartiteNetwork::from_edges(left, right, std::move(edges)), {}};
  out.blocks.module_of.resize(left + right);
  for (NodeId l = 0; l < left; ++l) out.blocks.module_of[l] = left_block[l];
  for (NodeId r = 0; r < right; ++r) out.blocks.module_of[left + r] = right_block[r];
  out.blocks = Partition::normalized(out.blocks.module_of);
  return out;
}

Partition random_partition(Rng& rng, std::size_t node_count, std::size_t max_modules) {
  const std::size_t k = 1 + rng.below(max_modules);
  std::vector<ModuleId> module_of(node_count);
  for (auto& m : module_of) m = static_cast<ModuleId>(rng.below(k));
  return Partition::normalized(module_of);
}

PartitionTree random_tree(Rng& rng, std::size_t node_count, std::size_t max_depth) {
  PartitionTree tree = PartitionTree::two_level(random_partition(rng, node_count, 6));
  for (std::size_t level = 2; level < max_depth; ++level) {
    for (const std::size_t leaf : tree.leaves()) {
      const std::size_t size = tree.module(leaf).members.size();
      if (size < 2 || rng.below(2) == 0) continue;
      const Partition sub = random_partition(rng, size, 3);
      if (sub.module_count() > 1) tree.split_leaf(leaf, sub.module_of);
    }
  }
  tree.validate(node_count);
  return tree;
}

BipartiteNetwork nested_blocks(std::size_t groups, std::size_t blocks, double mid, double low) {
  const std::size_t count = groups * blocks;
  const std::size_t left = 3 * count;
  std::vector<Edge> edges;
  auto l_of = [](std::size_t b, std::size_t i) { return static_cast<NodeId>(3 * b + i); };
  auto r_of = [&](std::size_t b, std::size_t i) { return static_cast<NodeId>(left + 3 * b + i); };
  for (std::size_t b = 0; b < count; ++b)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) edges.push_back({l_of(b, i), r_of(b, j), 1.0});
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t k = 0; k < blocks; ++k) {
      const std::size_t b = g * blocks + k;
      const std::size_t c = g * blocks + (k + 1) % blocks;
      if (b != c) edges.push_back({l_of(b, 0), r_of(c, 1), mid});
    }
    const std::size_t next = ((g + 1) % groups) * blocks;
    if (groups > 1) edges.push_back({l_of(g * blocks, 2), r_of(next, 2), low});
  }
  return BipartiteNetwork::from_edges(left, left, std::move(edges));
}

std::vector<BipartiteNetwork> random_corpus(std::uint64_t seed, std::size_t count,
                                            std::size_t max_nodes) {
  Rng rng(seed);
  std::vector<BipartiteNetwork> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_connected(rng, max_nodes));
  return out;
}

}  // namespace bipmap::testing
