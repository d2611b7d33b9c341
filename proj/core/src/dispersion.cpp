#include "termcoding/dispersion.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <queue>

#include <nlohmann/json.hpp>

namespace termcoding {

namespace {

void require_dispersion(const System& sys) {
  if (sys.outputs.empty()) throw Error("system declares no outputs");
  require_well_formed(sys);
}

struct FlowNet {
  struct Edge {
    std::size_t to;
    int cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj;

  explicit FlowNet(std::size_t n) : adj(n) {}
  void add(std::size_t a, std::size_t b, int cap) {
    adj[a].push_back(edges.size());
    edges.push_back({b, cap});
    adj[b].push_back(edges.size());
    edges.push_back({a, 0});
  }
  // Edmonds-Karp; capacities are small so this is plenty.
  int max_flow(std::size_t s, std::size_t t) {
    int flow = 0;
    for (;;) {
      std::vector<std::size_t> via(adj.size(), SIZE_MAX);
      std::queue<std::size_t> q;
      q.push(s);
      std::vector<char> seen(adj.size(), 0);
      seen[s] = 1;
      while (!q.empty() && !seen[t]) {
        auto u = q.front();
        q.pop();
        for (auto ei : adj[u]) {
          const auto& e = edges[ei];
          if (e.cap > 0 && !seen[e.to]) {
            seen[e.to] = 1;
            via[e.to] = ei;
            q.push(e.to);
          }
        }
      }
      if (!seen[t]) return flow;
      int push = INT_MAX;
      for (auto v = t; v != s; v = edges[via[v] ^ 1].to) push = std::min(push, edges[via[v]].cap);
      for (auto v = t; v != s; v = edges[via[v] ^ 1].to) {
        edges[via[v]].cap -= push;
        edges[via[v] ^ 1].cap += push;
      }
      flow += push;
    }
  }
  std::vector<char> reachable(std::size_t s) const {
    std::vector<char> seen(adj.size(), 0);
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto ei : adj[u])
        if (edges[ei].cap > 0 && !seen[edges[ei].to]) {
          seen[edges[ei].to] = 1;
          q.push(edges[ei].to);
        }
    }
    return seen;
  }
};

}  // namespace

TermDag build_term_dag(const System& sys) {
  TermDag dag;
  std::map<std::string, std::size_t> index;
  for (const auto& v : sys.vars) {
    index[v.name] = dag.nodes.size();
    dag.nodes.push_back({v.name, true, {}});
  }
  dag.n_inputs = dag.nodes.size();
  auto add = [&](auto&& self, const Term& t) -> std::size_t {
    if (t.is_var()) return index.at(t.name);
    std::string id = to_string(t);
    if (auto it = index.find(id); it != index.end()) return it->second;
    TermDag::Node n{id, false, {}};
    for (const auto& a : t.args) n.kids.push_back(self(self, a));
    index[id] = dag.nodes.size();
    dag.nodes.push_back(std::move(n));
    return dag.nodes.size() - 1;
  };
  for (const auto& t : sys.outputs) {
    std::size_t s = add(add, t);
    if (std::find(dag.sinks.begin(), dag.sinks.end(), s) == dag.sinks.end()) dag.sinks.push_back(s);
  }
  return dag;
}

std::string ExponentResult::cut_json() const { return nlohmann::json(cut).dump(); }

ExponentResult integer_exponent(const System& sys) {
  require_dispersion(sys);
  if (!sys.equations.empty())
    throw Error("the dispersion exponent is defined for systems without equations");
  TermDag dag = build_term_dag(sys);
  const std::size_t n = dag.nodes.size();
  const int inf = static_cast<int>(n + dag.sinks.size() + 1);
  // node v: in = 2v, out = 2v+1; source = 2n, sink = 2n+1
  FlowNet net(2 * n + 2);
  const std::size_t src = 2 * n, snk = 2 * n + 1;
  for (std::size_t v = 0; v < n; ++v) {
    net.add(2 * v, 2 * v + 1, 1);
    if (dag.nodes[v].is_input) net.add(src, 2 * v, inf);
    for (auto k : dag.nodes[v].kids) net.add(2 * k + 1, 2 * v, inf);
  }
  for (auto s : dag.sinks) net.add(2 * s + 1, snk, inf);

  ExponentResult r;
  r.D = static_cast<std::uint64_t>(net.max_flow(src, snk));
  auto seen = net.reachable(src);
  for (std::size_t v = 0; v < n; ++v)
    if (seen[2 * v] && !seen[2 * v + 1]) r.cut.push_back(dag.nodes[v].id);
  if (r.cut.size() != r.D) throw Error("internal error: cut size differs from flow value");
  return r;
}

bool decide_threshold(const System& sys, std::uint64_t d) { return integer_exponent(sys).D >= d + 1; }

std::vector<GrowthPoint> growth_oracle(const System& sys, const std::vector<std::uint64_t>& n_list,
                                       const SearchParams& params) {
  require_dispersion(sys);
  std::vector<GrowthPoint> out;
  for (auto n : n_list) {
    auto r = dispersion_max(sys, uniform_sizes(sys, n), params);
    out.push_back({n, r.best_count, r.exhausted});
  }
  return out;
}

bool oracle_consistent(std::uint64_t D, const std::vector<GrowthPoint>& points) {
  for (const auto& p : points) {
    long double cap = 1;
    for (std::uint64_t i = 0; i < D; ++i) cap *= static_cast<long double>(p.n);
    if (static_cast<long double>(p.value) > cap) return false;
  }
  return true;
}

ExponentResult integer_exponent_checked(const System& sys, const std::vector<std::uint64_t>& n_list,
                                        const SearchParams& params) {
  ExponentResult r = integer_exponent(sys);
  r.oracle_checked = oracle_consistent(r.D, growth_oracle(sys, n_list, params));
  return r;
}

Reduction reduce_to_termcoding(const System& sys) {
  require_dispersion(sys);
  Reduction red;
  System& r = red.system;
  r.sorts = sys.sorts;
  r.funcs = sys.funcs;
  r.vars = sys.vars;
  r.equations = sys.equations;

  std::vector<std::string> taken;
  std::vector<std::string> out_sorts;
  for (std::size_t i = 0; i < sys.outputs.size(); ++i) {
    std::string y = fresh_name(sys, "_y" + std::to_string(i + 1), taken);
    taken.push_back(y);
    out_sorts.push_back(term_sort(sys.outputs[i], sys));
    r.vars.push_back({y, out_sorts.back()});
    red.projection.push_back(y);
  }
  for (std::size_t i = 0; i < sys.outputs.size(); ++i)
    r.equations.push_back(Constraint::eq(Term::var(red.projection[i]), sys.outputs[i]));
  for (std::size_t i = 0; i < sys.vars.size(); ++i) {
    std::string h = fresh_name(sys, "_h" + std::to_string(i + 1), taken);
    taken.push_back(h);
    r.funcs.push_back({h, out_sorts, sys.vars[i].sort});
    Term app = Term::app(h);
    for (const auto& y : red.projection) app.args.push_back(Term::var(y));
    r.equations.push_back(Constraint::eq(Term::var(sys.vars[i].name), std::move(app)));
  }
  auto output_index = [&](const Term& t) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < sys.outputs.size(); ++i)
      if (sys.outputs[i] == t) return i;
    return std::nullopt;
  };
  for (const auto& c : sys.disequalities) {
    auto a = output_index(c.lhs), b = output_index(c.rhs);
    if (a && b && !(c.lhs.is_var() && c.rhs.is_var()))
      r.disequalities.push_back(
          Constraint::neq(Term::var(red.projection[*a]), Term::var(red.projection[*b])));
    else
      r.disequalities.push_back(c);
  }
  require_valid(r);
  return red;
}

System projection_system(const Reduction& r) {
  System s = r.system;
  s.outputs.clear();
  for (const auto& y : r.projection) s.outputs.push_back(Term::var(y));
  return s;
}

}  // namespace termcoding
