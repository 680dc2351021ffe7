#include "bipmap/io.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <json.hpp>
#include <stdexcept>

#include "bipmap/flow.h"

namespace bipmap {
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string path_string(std::span<const std::uint32_t> path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += ':';
    out += std::to_string(path[i]);
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& rest) {
  rest = trim(rest);
  const auto end = rest.find_first_of(" \t");
  const std::string_view token = rest.substr(0, end);
  rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  return token;
}

TreeRecord parse_record(std::string_view line, std::size_t lineno) {
  TreeRecord r;
  std::string_view rest = line;

  const std::string_view path = next_token(rest);
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto colon = path.find(':', start);
    const std::string_view part = path.substr(start, colon - start);
    std::uint32_t value = 0;
    if (!parse_number(part, value) || value == 0)
      throw ParseError(lineno, "bad path '" + std::string(path) + "'");
    r.path.push_back(value);
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (r.path.size() < 2) throw ParseError(lineno, "path needs a module and a rank");

  const std::string_view flow = next_token(rest);
  if (!parse_number(flow, r.flow) || r.flow < 0.0)
    throw ParseError(lineno, "bad flow '" + std::string(flow) + "'");

  rest = trim(rest);
  if (rest.empty() || rest.front() != '"') throw ParseError(lineno, "expected quoted name");
  std::size_t i = 1;
  bool closed = false;
  for (; i < rest.size(); ++i) {
    const char c = rest[i];
    if (c == '\\' && i + 1 < rest.size()) {
      r.name += rest[++i];
    } else if (c == '"') {
      closed = true;
      ++i;
      break;
    } else {
      r.name += c;
    }
  }
  if (!closed) throw ParseError(lineno, "unterminated name");
  rest = rest.substr(i);

  const std::string_view id = next_token(rest);
  if (!parse_number(id, r.id)) throw ParseError(lineno, "bad node id '" + std::string(id) + "'");
  const std::string_view side = next_token(rest);
  if (side == "L")
    r.side = Side::left;
  else if (side == "R")
    r.side = Side::right;
  else
    throw ParseError(lineno, "side must be L or R");
  if (!trim(rest).empty()) throw ParseError(lineno, "trailing fields");
  return r;
}

void parse_header_line(std::string_view line, TreeHeader& h) {
  std::string_view rest = line;
  const std::string_view key = next_token(rest);
  const std::string_view value = trim(rest);
  double d = 0.0;
  std::uint64_t u = 0;
  if (key == "alpha" && parse_number(value, d)) h.alpha = d;
  if (key == "info" && parse_number(value, d)) h.info = d;
  if (key == "bits" && parse_number(value, d)) h.bits = d;
  if (key == "seed" && parse_number(value, u)) h.seed = u;
  if (key == "mode" && !value.empty()) h.mode = std::string(value);
}

}  // namespace

std::vector<TreeRecord> tree_records(const BipartiteNetwork& net, const PartitionTree& tree,
                                     std::span<const NodeId> original_ids) {
  tree.validate(net.node_count());
  const VisitRates rates = visit_rates(net);
  const std::size_t m = tree.size();

  // Subtree flow and smallest node id, children before parents.
  std::vector<double> flow(m, 0.0);
  std::vector<NodeId> min_id(m, std::numeric_limits<NodeId>::max());
  std::vector<std::size_t> order{0};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (const std::size_t c : tree.module(order[k]).children) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& mod = tree.module(*it);
    for (const NodeId n : mod.members) {
      flow[*it] += 0.5 * rates.rate[n];
      min_id[*it] = std::min(min_id[*it], n);
    }
    for (const std::size_t c : mod.children) {
      flow[*it] += flow[c];
      min_id[*it] = std::min(min_id[*it], min_id[c]);
    }
  }

  std::vector<TreeRecord> out;
  out.reserve(net.node_count());
  std::vector<std::uint32_t> path;
  auto emit = [&](auto&& self, std::size_t module) -> void {
    const auto& mod = tree.module(module);
    if (mod.children.empty()) {
      std::vector<NodeId> members = mod.members;
      std::sort(members.begin(), members.end());
      for (std::size_t r = 0; r < members.size(); ++r) {
        const NodeId n = members[r];
        TreeRecord rec;
        rec.path = path;
        rec.path.push_back(static_cast<std::uint32_t>(r + 1));
        rec.flow = 0.5 * rates.rate[n];
        rec.name = std::string(net.name(n));
        rec.id = original_ids.empty() ? n : original_ids[n];
        rec.side = net.side(n);
        out.push_back(std::move(rec));
      }
      return;
    }
    std::vector<std::size_t> children = mod.children;
    std::sort(children.begin(), children.end(), [&](std::size_t a, std::size_t b) {
      if (flow[a] != flow[b]) return flow[a] > flow[b];
      return min_id[a] < min_id[b];
    });
    for (std::size_t r = 0; r < children.size(); ++r) {
      path.push_back(static_cast<std::uint32_t>(r + 1));
      self(self, children[r]);
      path.pop_back();
    }
  };
  if (tree.is_leaf(0)) path.push_back(1);
  emit(emit, 0);
  return out;
}

std::string write_tree(const BipartiteNetwork& net, const PartitionTree& tree,
                       const TreeHeader& header, std::span<const NodeId> original_ids) {
  std::string out;
  if (header.alpha) out += fmt::format("# alpha {:.17g}\n", *header.alpha);
  if (header.info) out += fmt::format("# info {:.17g}\n", *header.info);
  if (header.bits) out += fmt::format("# bits {:.17g}\n", *header.bits);
  if (header.seed) out += fmt::format("# seed {}\n", *header.seed);
  if (header.mode) out += fmt::format("# mode {}\n", *header.mode);
  out += "# path flow name id side\n";
  for (const TreeRecord& r : tree_records(net, tree, original_ids)) {
    out += fmt::format("{} {:.10g} {} {} {}\n", path_string(r.path), r.flow, quote(r.name), r.id,
                       side_marker(r.side));
  }
  return out;
}

ParsedTree parse_tree(std::string_view text) {
  ParsedTree out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      parse_header_line(line.substr(1), out.header);
      continue;
    }
    out.records.push_back(parse_record(line, lineno));
  }
  return out;
}

PartitionTree tree_from_records(const BipartiteNetwork& net, std::span<const TreeRecord> records,
                                std::span<const std::optional<NodeId>> id_to_node) {
  const std::size_t n = net.node_count();
  std::vector<char> seen(n, 0);
  PartitionTree tree = PartitionTree::one_level(0);
  std::map<std::vector<std::uint32_t>, std::size_t> module_at;
  module_at[{}] = 0;

  // Creates the module chain for `prefix` on demand.
  auto module_for = [&](const std::vector<std::uint32_t>& prefix) {
    std::vector<std::uint32_t> key;
    std::size_t current = 0;
    for (const std::uint32_t step : prefix) {
      key.push_back(step);
      auto it = module_at.find(key);
      if (it == module_at.end()) {
        if (!tree.module(current).members.empty())
          throw std::invalid_argument("tree path " + path_string(key) +
                                      " nests below a leaf holding nodes");
        it = module_at.emplace(key, tree.add_child(current)).first;
      }
      current = it->second;
    }
    if (!tree.module(current).children.empty())
      throw std::invalid_argument("nodes placed in a module with sub-modules");
    return current;
  };

  for (const TreeRecord& r : records) {
    std::optional<NodeId> node;
    if (id_to_node.empty()) {
      if (r.id < n) node = static_cast<NodeId>(r.id);
    } else if (r.id < id_to_node.size()) {
      node = id_to_node[r.id];
    }
    if (!node) throw std::invalid_argument("tree node id " + std::to_string(r.id) + " not in network");
    if (seen[*node]) throw std::invalid_argument("node id " + std::to_string(r.id) + " repeated");
    seen[*node] = 1;
    const std::vector<std::uint32_t> prefix(r.path.begin(), r.path.end() - 1);
    tree.add_member(module_for(prefix), *node);
  }
  for (NodeId i = 0; i < n; ++i)
    if (!seen[i])
      throw std::invalid_argument("tree lacks node " + std::string(net.name(i)));
  tree.compact();
  tree.validate(n);
  return tree;
}

std::string write_sweep_csv(std::span<const SweepRecord> records) {
  if (records.empty()) throw std::invalid_argument("empty sweep table");
  std::string out = "info,alpha,bits_2l,bits_h,extra_2l,extra_h,effsize_2l,effsize_h,depth,trials\n";
  for (const SweepRecord& r : records) {
    out += fmt::format("{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{:.6g},{},{}\n", r.info,
                       r.alpha, r.bits_two_level, r.bits_hierarchical, r.extra_two_level,
                       r.extra_hierarchical, r.effective_size_two_level,
                       r.effective_size_hierarchical, r.depth, r.trials);
  }
  return out;
}

std::string write_fixed_sweep_csv(std::span<const FixedSweepRecord> records) {
  if (records.empty()) throw std::invalid_argument("empty sweep table");
  std::string out = "info,alpha,bits,extra\n";
  for (const FixedSweepRecord& r : records)
    out += fmt::format("{:.6g},{:.6g},{:.6g},{:.6g}\n", r.info, r.alpha, r.bits,
                       r.extra_compression);
  return out;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["command"] = s.command;
  j["input"] = s.input;
  j["nodes"] = s.node_count;
  j["edges"] = s.edge_count;
  j["dropped_nodes"] = s.dropped_nodes;
  j["alpha"] = s.alpha;
  j["info"] = s.info;
  j["mode"] = s.mode;
  j["seed"] = s.seed;
  j["trials"] = s.trials;
  j["bits"] = s.metrics.codelength;
  j["one_level_bits"] = s.metrics.one_level_codelength;
  j["extra_compression"] = s.metrics.extra_compression;
  j["effective_module_size"] = s.metrics.effective_module_size;
  j["leaf_modules"] = s.metrics.leaf_module_count;
  j["depth"] = s.metrics.hierarchy_depth;
  j["best_trial"] = s.best_trial;
  j["trial_bits"] = s.trial_bits;
  if (s.timestamp) j["timestamp"] = *s.timestamp;
  return j.dump(2) + "\n";
}

std::string oracle_json(const BipartiteNetwork& net, const OracleResult& result, double alpha,
                        std::optional<std::string> timestamp) {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["bits"] = result.bits;
  j["examined"] = result.examined;
  auto partitions = nlohmann::ordered_json::array();
  for (const Partition& p : result.optimal) {
    std::vector<std::vector<std::string>> modules(p.module_count());
    for (NodeId i = 0; i < p.module_of.size(); ++i)
      modules[p.module_of[i]].emplace_back(net.name(i));
    partitions.push_back(modules);
  }
  j["optimal"] = std::move(partitions);
  if (timestamp) j["timestamp"] = *timestamp;
  return j.dump(2) + "\n";
}

}  // namespace bipmap
