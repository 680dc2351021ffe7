#include "bipmap/partition.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

namespace bipmap {

std::size_t Partition::module_count() const {
  if (module_of.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(module_of.begin(), module_of.end())) + 1;
}

Partition Partition::normalized(std::span<const ModuleId> assignment) {
  Partition p;
  p.module_of.reserve(assignment.size());
  std::unordered_map<ModuleId, ModuleId> relabel;
  for (ModuleId m : assignment) {
    auto [it, inserted] = relabel.try_emplace(m, static_cast<ModuleId>(relabel.size()));
    p.module_of.push_back(it->second);
  }
  return p;
}

PartitionTree PartitionTree::one_level(std::size_t node_count) {
  PartitionTree t;
  t.modules_.emplace_back();
  t.modules_[0].members.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) t.modules_[0].members[i] = static_cast<NodeId>(i);
  return t;
}

PartitionTree PartitionTree::two_level(const Partition& partition) {
  const Partition p = Partition::normalized(partition.module_of);
  const std::size_t k = p.module_count();
  if (k <= 1) return one_level(p.module_of.size());
  PartitionTree t;
  t.modules_.resize(k + 1);
  for (std::size_t m = 0; m < k; ++m) {
    t.modules_[0].children.push_back(m + 1);
    t.modules_[m + 1].parent = 0;
  }
  for (std::size_t n = 0; n < p.module_of.size(); ++n)
    t.modules_[p.module_of[n] + 1].members.push_back(static_cast<NodeId>(n));
  return t;
}

std::size_t PartitionTree::add_child(std::size_t parent) {
  const std::size_t id = modules_.size();
  modules_.emplace_back();
  modules_[id].parent = parent;
  modules_[parent].children.push_back(id);
  return id;
}

void PartitionTree::split_leaf(std::size_t leaf, std::span<const ModuleId> sub_module_of) {
  if (!is_leaf(leaf)) throw std::invalid_argument("split_leaf on an internal module");
  std::vector<NodeId> members = std::move(modules_[leaf].members);
  modules_[leaf].members.clear();
  if (sub_module_of.size() != members.size())
    throw std::invalid_argument("sub-module assignment does not match leaf size");
  const Partition p = Partition::normalized(sub_module_of);
  const std::size_t k = p.module_count();
  std::vector<std::size_t> child(k);
  for (std::size_t m = 0; m < k; ++m) child[m] = add_child(leaf);
  for (std::size_t i = 0; i < members.size(); ++i)
    modules_[child[p.module_of[i]]].members.push_back(members[i]);
}

void PartitionTree::group_children(std::size_t parent, std::span<const ModuleId> group_of) {
  std::vector<std::size_t> children = modules_[parent].children;
  if (group_of.size() != children.size())
    throw std::invalid_argument("group assignment does not match child count");
  const Partition p = Partition::normalized(group_of);
  const std::size_t k = p.module_count();
  std::vector<std::size_t> group_size(k, 0);
  for (ModuleId g : p.module_of) ++group_size[g];

  modules_[parent].children.clear();
  std::vector<std::size_t> group_module(k, 0);
  for (std::size_t i = 0; i < children.size(); ++i) {
    const ModuleId g = p.module_of[i];
    if (group_size[g] == 1) {
      modules_[parent].children.push_back(children[i]);
      continue;
    }
    if (group_module[g] == 0) group_module[g] = add_child(parent);
    modules_[group_module[g]].children.push_back(children[i]);
    modules_[children[i]].parent = group_module[g];
  }
}

std::vector<std::size_t> PartitionTree::leaves() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (is_leaf(i)) {
      out.push_back(i);
      continue;
    }
    for (auto it = modules_[i].children.rbegin(); it != modules_[i].children.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

std::size_t PartitionTree::leaf_count() const { return leaves().size(); }

std::size_t PartitionTree::level(std::size_t i) const {
  std::size_t l = 1;
  while (i != 0) {
    i = modules_[i].parent;
    ++l;
  }
  return l;
}

std::size_t PartitionTree::depth() const {
  std::size_t d = 0;
  for (std::size_t leaf : leaves()) d = std::max(d, level(leaf));
  return d;
}

std::vector<std::size_t> PartitionTree::leaf_of(std::size_t node_count) const {
  std::vector<std::size_t> out(node_count, static_cast<std::size_t>(-1));
  for (std::size_t leaf : leaves())
    for (NodeId n : modules_[leaf].members)
      if (n < node_count) out[n] = leaf;
  return out;
}

std::vector<NodeId> PartitionTree::nodes_below(std::size_t i) const {
  std::vector<NodeId> out;
  std::vector<std::size_t> stack{i};
  while (!stack.empty()) {
    const std::size_t j = stack.back();
    stack.pop_back();
    out.insert(out.end(), modules_[j].members.begin(), modules_[j].members.end());
    for (std::size_t c : modules_[j].children) stack.push_back(c);
  }
  return out;
}

void PartitionTree::validate(std::size_t node_count) const {
  if (modules_.empty()) throw std::invalid_argument("empty partition tree");
  std::vector<bool> seen_module(modules_.size(), false);
  std::vector<bool> seen_node(node_count, false);
  std::vector<std::size_t> stack{0};
  seen_module[0] = true;
  std::size_t covered = 0;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const Module& m = modules_[i];
    if (m.children.empty()) {
      if (m.members.empty() && !(i == 0 && node_count == 0))
        throw std::invalid_argument(fmt::format("leaf module {} is empty", i));
      for (NodeId n : m.members) {
        if (n >= node_count)
          throw std::invalid_argument(fmt::format("tree references unknown node {}", n));
        if (seen_node[n])
          throw std::invalid_argument(fmt::format("node {} assigned twice", n));
        seen_node[n] = true;
        ++covered;
      }
    } else {
      if (!m.members.empty())
        throw std::invalid_argument(fmt::format("internal module {} holds nodes", i));
      for (std::size_t c : m.children) {
        if (c >= modules_.size() || seen_module[c] || modules_[c].parent != i)
          throw std::invalid_argument("malformed module hierarchy");
        seen_module[c] = true;
        stack.push_back(c);
      }
    }
  }
  if (covered != node_count)
    throw std::invalid_argument(
        fmt::format("tree omits {} of {} nodes", node_count - covered, node_count));
}

void PartitionTree::compact() {
  // Splice out internal modules with a single child (never the root).
  for (std::size_t i = 1; i < modules_.size(); ++i) {
    Module& m = modules_[i];
    if (m.children.size() != 1) continue;
    const std::size_t child = m.children.front();
    auto& siblings = modules_[m.parent].children;
    std::replace(siblings.begin(), siblings.end(), i, child);
    modules_[child].parent = m.parent;
    m.children.clear();
  }
  // A root with a single child absorbs it.
  while (modules_[0].children.size() == 1) {
    const std::size_t child = modules_[0].children.front();
    modules_[0].children = modules_[child].children;
    modules_[0].members = std::move(modules_[child].members);
    for (std::size_t c : modules_[0].children) modules_[c].parent = 0;
    modules_[child] = Module{};
  }
  // Renumber reachable modules in depth-first order.
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    order.push_back(i);
    const auto& ch = modules_[i].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  std::vector<std::size_t> new_id(modules_.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) new_id[order[k]] = k;
  std::vector<Module> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    Module m = std::move(modules_[order[k]]);
    m.parent = k == 0 ? 0 : new_id[m.parent];
    for (auto& c : m.children) c = new_id[c];
    out[k] = std::move(m);
  }
  modules_ = std::move(out);
}

}  // namespace bipmap
