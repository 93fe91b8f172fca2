#include <algorithm>
#include <functional>
#include <map>

#include "archemist/recipe/recipe.hpp"

namespace archemist::recipe {
namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Tarjan SCC; components come out in a deterministic order for a given node order.
std::vector<std::vector<std::size_t>> strongly_connected(const Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool is_cycle(const std::vector<std::size_t>& comp, const Adjacency& adj) {
  if (comp.size() > 1) return true;
  const auto& succ = adj[comp.front()];
  return std::find(succ.begin(), succ.end(), comp.front()) != succ.end();
}

std::string describe(const std::vector<std::size_t>& comp, const FlowGraph& flow) {
  std::string s;
  for (std::size_t i : comp) {
    if (!s.empty()) s += ", ";
    s += flow.nodes[i].id;
  }
  return s;
}

}  // namespace

DiagnosticList validate_flow(const FlowGraph& flow) {
  DiagnosticList out;
  const FlowNode* start = flow.find(kStartNode);
  const FlowNode* end = flow.find(kEndNode);
  if (start == nullptr) out.push_back({DiagCode::MissingStart, {}, "stationFlow has no 'start' node", std::nullopt});
  if (end == nullptr) out.push_back({DiagCode::MissingEnd, {}, "stationFlow has no 'end' node", std::nullopt});

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < flow.nodes.size(); ++i) index.emplace(flow.nodes[i].id, i);
  const auto ids = flow.ids();

  bool dangling = false;
  for (const auto& node : flow.nodes) {
    if (node.is_end()) continue;
    auto check = [&](const std::string& target, SourcePos pos, const char* edge) {
      if (index.count(target)) return;
      dangling = true;
      out.push_back({DiagCode::DanglingTarget, pos,
                     "flow node '" + node.id + "' " + edge + " targets unknown node '" + target + "'",
                     nearest(target, ids)});
    };
    check(node.on_success, node.on_success_pos, "onSuccess");
    check(node.on_fail, node.on_fail_pos, "onFail");
  }
  if (start == nullptr || end == nullptr || dangling) return out;

  const std::size_t n = flow.nodes.size();
  const std::size_t end_idx = index.at(std::string(kEndNode));
  Adjacency success(n), fail(n), all(n), reverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = flow.nodes[i];
    if (node.is_end()) continue;
    std::size_t s = index.at(node.on_success);
    std::size_t f = index.at(node.on_fail);
    success[i].push_back(s);
    fail[i].push_back(f);
    all[i].push_back(s);
    if (f != s) all[i].push_back(f);
    reverse[s].push_back(i);
    if (f != s) reverse[f].push_back(i);
  }

  auto reach = [&](std::size_t from, const Adjacency& adj) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> todo{from};
    seen[from] = true;
    while (!todo.empty()) {
      std::size_t v = todo.back();
      todo.pop_back();
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          todo.push_back(w);
        }
    }
    return seen;
  };

  const std::size_t start_idx = index.at(std::string(kStartNode));
  if (!reach(start_idx, success)[end_idx]) {
    out.push_back({DiagCode::UnreachableEnd, start->pos, "'end' is not reachable from 'start' along onSuccess edges",
                   std::nullopt});
  }

  auto reaches_end = reach(end_idx, reverse);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reaches_end[i]) {
      out.push_back({DiagCode::DeadEnd, flow.nodes[i].pos, "flow node '" + flow.nodes[i].id + "' can never reach 'end'",
                     std::nullopt});
    }
  }

  for (const auto& comp : strongly_connected(fail)) {
    if (!is_cycle(comp, fail)) continue;
    out.push_back({DiagCode::FailCycle, flow.nodes[comp.front()].pos,
                   "onFail edges form a cycle through {" + describe(comp, flow) + "}", std::nullopt});
  }

  // A cycle must pass through at least one guarded node; look for cycles among unguarded nodes only.
  Adjacency unguarded(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (flow.nodes[i].guarded()) continue;
    for (std::size_t w : all[i])
      if (!flow.nodes[w].guarded()) unguarded[i].push_back(w);
  }
  for (const auto& comp : strongly_connected(unguarded)) {
    if (!is_cycle(comp, unguarded)) continue;
    out.push_back({DiagCode::UnguardedCycle, flow.nodes[comp.front()].pos,
                   "cycle through {" + describe(comp, flow) + "} has no threshold or stability outcome to exit it",
                   std::nullopt});
  }
  return out;
}

}  // namespace archemist::recipe
