#include "bipmap/module_state.h"

#include <algorithm>
#include <stdexcept>

#include "bipmap/codelength.h"

namespace bipmap {

FlowGraph FlowGraph::build(std::vector<Unit> units, std::vector<Link> links, double alpha,
                           RatePair fixed_index_entry) {
  FlowGraph g;
  g.alpha = alpha;
  g.fixed_index_entry = fixed_index_entry;
  g.units = std::move(units);
  for (Link& l : links)
    if (l.a > l.b) std::swap(l.a, l.b);
  std::sort(links.begin(), links.end(),
            [](const Link& x, const Link& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  std::vector<Link> merged;
  merged.reserve(links.size());
  for (const Link& l : links) {
    if (l.a == l.b) continue;
    if (!merged.empty() && merged.back().a == l.a && merged.back().b == l.b)
      merged.back().flow += l.flow;
    else
      merged.push_back(l);
  }
  const std::size_t n = g.units.size();
  g.offsets.assign(n + 1, 0);
  for (const Link& l : merged) {
    ++g.offsets[l.a + 1];
    ++g.offsets[l.b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.arcs.resize(g.offsets[n]);
  std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const Link& l : merged) {
    g.arcs[cursor[l.a]++] = {l.b, l.flow};
    g.arcs[cursor[l.b]++] = {l.a, l.flow};
  }
  return g;
}

namespace {

FlowGraph::Unit node_unit(const BipartiteNetwork& net, NodeId n, double alpha) {
  const double p = net.strength(n) / net.total_weight();
  FlowGraph::Unit u;
  u.codewords = mixed_rate(net.side(n), p, alpha);
  u.codeword_plogp = plogp(u.codewords.left) + plogp(u.codewords.right);
  (net.side(n) == Side::left ? u.boundary_left : u.boundary_right) = p;
  return u;
}

}  // namespace

FlowGraph FlowGraph::from_network(const BipartiteNetwork& net, double alpha) {
  std::vector<Unit> units;
  units.reserve(net.node_count());
  for (NodeId n = 0; n < net.node_count(); ++n) units.push_back(node_unit(net, n, alpha));

  FlowGraph g;
  g.alpha = alpha;
  g.units = std::move(units);
  // Network adjacency is already merged and symmetric.
  const std::size_t n = net.node_count();
  g.offsets.assign(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) g.offsets[i + 1] = g.offsets[i] + net.neighbors(i).size();
  g.arcs.reserve(g.offsets[n]);
  const double total = net.total_weight();
  for (NodeId i = 0; i < n; ++i)
    for (const Neighbor& nb : net.neighbors(i)) g.arcs.push_back({nb.node, nb.weight / total});
  return g;
}

FlowGraph FlowGraph::induced(const BipartiteNetwork& net, std::span<const NodeId> members,
                             double alpha, RatePair fixed_index_entry) {
  std::vector<std::uint32_t> local(net.node_count(), static_cast<std::uint32_t>(-1));
  std::vector<Unit> units;
  units.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    local[members[i]] = static_cast<std::uint32_t>(i);
    units.push_back(node_unit(net, members[i], alpha));
  }
  std::vector<Link> links;
  const double total = net.total_weight();
  for (std::size_t i = 0; i < members.size(); ++i)
    for (const Neighbor& nb : net.neighbors(members[i])) {
      const std::uint32_t j = local[nb.node];
      if (j != static_cast<std::uint32_t>(-1) && i < j)
        links.push_back({static_cast<std::uint32_t>(i), j, nb.weight / total});
    }
  return build(std::move(units), std::move(links), alpha, fixed_index_entry);
}

FlowGraph FlowGraph::aggregate(std::span<const ModuleId> module_of,
                               std::size_t module_count) const {
  std::vector<Unit> merged(module_count);
  for (std::uint32_t u = 0; u < size(); ++u) {
    Unit& m = merged[module_of[u]];
    m.codewords += units[u].codewords;
    m.codeword_plogp += units[u].codeword_plogp;
    m.boundary_left += units[u].boundary_left;
    m.boundary_right += units[u].boundary_right;
  }
  std::vector<Link> links;
  links.reserve(arcs.size() / 2);
  for (std::uint32_t u = 0; u < size(); ++u) {
    for (const Arc& a : arcs_of(u)) {
      if (a.target < u) continue;
      const ModuleId mu = module_of[u], mv = module_of[a.target];
      if (mu == mv) {
        // An internal edge leaves the module boundary through both sides.
        merged[mu].boundary_left -= a.flow;
        merged[mu].boundary_right -= a.flow;
      } else {
        links.push_back({mu, mv, a.flow});
      }
    }
  }
  for (Unit& m : merged) {
    m.boundary_left = std::max(0.0, m.boundary_left);
    m.boundary_right = std::max(0.0, m.boundary_right);
  }
  return build(std::move(merged), std::move(links), alpha, fixed_index_entry);
}

ModuleState::ModuleState(const FlowGraph& graph, std::span<const ModuleId> assignment)
    : graph_(&graph), module_of_(assignment.begin(), assignment.end()), modules_(graph.size()) {
  if (assignment.size() != graph.size())
    throw std::invalid_argument("assignment does not cover every unit");
  for (std::uint32_t u = 0; u < graph.size(); ++u) {
    const ModuleId m = module_of_[u];
    if (m >= graph.size()) throw std::out_of_range("module id out of range");
    Module& mod = modules_[m];
    const auto& unit = graph.units[u];
    mod.codewords += unit.codewords;
    mod.codeword_plogp += unit.codeword_plogp;
    mod.boundary_left += unit.boundary_left;
    mod.boundary_right += unit.boundary_right;
    ++mod.members;
    codeword_plogp_sum_ += unit.codeword_plogp;
  }
  for (std::uint32_t u = 0; u < graph.size(); ++u)
    for (const auto& a : graph.arcs_of(u))
      if (module_of_[a.target] == module_of_[u]) {
        // Each internal edge is seen from both ends; one side per visit.
        modules_[module_of_[u]].boundary_left -= 0.5 * a.flow;
        modules_[module_of_[u]].boundary_right -= 0.5 * a.flow;
      }
  for (ModuleId m = static_cast<ModuleId>(modules_.size()); m-- > 0;)
    if (modules_[m].members == 0) empty_ids_.push_back(m);
  for (Module& mod : modules_) {
    mod.boundary_left = std::max(0.0, mod.boundary_left);
    mod.boundary_right = std::max(0.0, mod.boundary_right);
    if (mod.members == 0) continue;
    ++nonempty_;
    mod.terms = terms_of(mod);
    entry_sum_ += mod.terms.entry;
    exit_plogp_sum_ += mod.terms.exit_plogp;
    usage_plogp_sum_ += mod.terms.usage_plogp;
  }
  const RatePair& f = graph.fixed_index_entry;
  fixed_plogp_ = plogp(f.left) + plogp(f.right);
  bits_ = total_from(entry_sum_, exit_plogp_sum_, usage_plogp_sum_);
}

ModuleId ModuleState::empty_module() const {
  // Ids stay on the stack after reuse; drop stale ones lazily.
  while (!empty_ids_.empty() && modules_[empty_ids_.back()].members != 0) empty_ids_.pop_back();
  return empty_ids_.empty() ? no_module : empty_ids_.back();
}

RatePair ModuleState::exit_of(ModuleId m) const {
  const Module& mod = modules_[m];
  const double a = graph_->alpha;
  return {a * mod.boundary_left + (1.0 - a) * mod.boundary_right,
          (1.0 - a) * mod.boundary_left + a * mod.boundary_right};
}

ModuleState::Terms ModuleState::terms_of(const Module& m) const {
  const double a = graph_->alpha;
  const RatePair exit{a * m.boundary_left + (1.0 - a) * m.boundary_right,
                      (1.0 - a) * m.boundary_left + a * m.boundary_right};
  return {exit.swapped(), plogp(exit.left) + plogp(exit.right),
          plogp(m.codewords.left + exit.left) + plogp(m.codewords.right + exit.right)};
}

double ModuleState::total_from(const RatePair& entry_sum, double exit_plogp,
                               double usage_plogp) const {
  const RatePair& f = graph_->fixed_index_entry;
  const double index = plogp(entry_sum.left + f.left) + plogp(entry_sum.right + f.right) -
                       exit_plogp - fixed_plogp_;
  const double modules = usage_plogp - exit_plogp - codeword_plogp_sum_;
  return 0.5 * (index + modules);
}

double ModuleState::codelength() const { return bits_; }

double ModuleState::recompute() const { return ModuleState(*graph_, module_of_).codelength(); }

ModuleState::Module ModuleState::without(const Module& m, const FlowGraph::Unit& u,
                                         double flow) const {
  Module r = m;
  if (--r.members == 0) return Module{};
  r.codewords.left -= u.codewords.left;
  r.codewords.right -= u.codewords.right;
  r.codeword_plogp -= u.codeword_plogp;
  r.boundary_left = std::max(0.0, r.boundary_left - u.boundary_left + flow);
  r.boundary_right = std::max(0.0, r.boundary_right - u.boundary_right + flow);
  return r;
}

ModuleState::Module ModuleState::with(const Module& m, const FlowGraph::Unit& u,
                                      double flow) const {
  Module r = m;
  ++r.members;
  r.codewords += u.codewords;
  r.codeword_plogp += u.codeword_plogp;
  r.boundary_left = std::max(0.0, r.boundary_left + u.boundary_left - flow);
  r.boundary_right = std::max(0.0, r.boundary_right + u.boundary_right - flow);
  return r;
}

ModuleState::Removal ModuleState::removal(std::uint32_t u, double flow_to_current) const {
  const ModuleId from = module_of_[u];
  const Module& a = modules_[from];
  return {u, from, a.terms, terms_of(without(a, graph_->units[u], flow_to_current))};
}

double ModuleState::delta_move(const Removal& r, ModuleId target, double flow_to_target) const {
  const Module& b = modules_[target];
  const Terms& ta = r.before;
  const Terms& ta2 = r.after;
  const Terms& tb = b.terms;
  const Terms tb2 = terms_of(with(b, graph_->units[r.unit], flow_to_target));

  RatePair entry = entry_sum_;
  entry.left += ta2.entry.left + tb2.entry.left - ta.entry.left - tb.entry.left;
  entry.right += ta2.entry.right + tb2.entry.right - ta.entry.right - tb.entry.right;
  const double exit_plogp =
      exit_plogp_sum_ + ta2.exit_plogp + tb2.exit_plogp - ta.exit_plogp - tb.exit_plogp;
  const double usage_plogp =
      usage_plogp_sum_ + ta2.usage_plogp + tb2.usage_plogp - ta.usage_plogp - tb.usage_plogp;
  return total_from(entry, exit_plogp, usage_plogp) - bits_;
}

double ModuleState::delta_move(std::uint32_t u, ModuleId target, double flow_to_current,
                               double flow_to_target) const {
  if (target == module_of_[u]) return 0.0;
  return delta_move(removal(u, flow_to_current), target, flow_to_target);
}

void ModuleState::apply_move(std::uint32_t u, ModuleId target, double flow_to_current,
                             double flow_to_target) {
  const ModuleId current = module_of_[u];
  if (target == current) return;
  const auto& unit = graph_->units[u];
  Module& a = modules_[current];
  Module& b = modules_[target];
  const Terms ta = a.terms, tb = b.terms;
  if (b.members == 0) ++nonempty_;
  a = without(a, unit, flow_to_current);
  b = with(b, unit, flow_to_target);
  if (a.members == 0) {
    --nonempty_;
    empty_ids_.push_back(current);
  }
  a.terms = terms_of(a);
  b.terms = terms_of(b);
  const Terms &ta2 = a.terms, &tb2 = b.terms;
  entry_sum_.left += ta2.entry.left + tb2.entry.left - ta.entry.left - tb.entry.left;
  entry_sum_.right += ta2.entry.right + tb2.entry.right - ta.entry.right - tb.entry.right;
  exit_plogp_sum_ += ta2.exit_plogp + tb2.exit_plogp - ta.exit_plogp - tb.exit_plogp;
  usage_plogp_sum_ += ta2.usage_plogp + tb2.usage_plogp - ta.usage_plogp - tb.usage_plogp;
  bits_ = total_from(entry_sum_, exit_plogp_sum_, usage_plogp_sum_);
  module_of_[u] = target;
}

double ModuleState::flow_to_module(std::uint32_t u, ModuleId m) const {
  double f = 0.0;
  for (const auto& a : graph_->arcs_of(u))
    if (module_of_[a.target] == m) f += a.flow;
  return f;
}

double ModuleState::index_codebook_bits() const {
  const RatePair& f = graph_->fixed_index_entry;
  return 0.5 * (plogp(entry_sum_.left + f.left) + plogp(entry_sum_.right + f.right) -
                exit_plogp_sum_ - fixed_plogp_);
}

double ModuleState::module_codebook_bits(ModuleId m) const {
  const Module& mod = modules_[m];
  if (mod.members == 0) return 0.0;
  return 0.5 * (mod.terms.usage_plogp - mod.terms.exit_plogp - mod.codeword_plogp);
}

double delta_codelength(const ModuleState& state, std::uint32_t u, ModuleId target) {
  if (u >= state.graph().size()) throw std::out_of_range("unknown flow unit");
  if (target >= state.graph().size()) throw std::out_of_range("unknown module");
  const ModuleId current = state.module_of(u);
  return state.delta_move(u, target, state.flow_to_module(u, current),
                          state.flow_to_module(u, target));
}

}  // namespace bipmap
