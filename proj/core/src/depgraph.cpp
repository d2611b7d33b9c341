#include "termcoding/depgraph.hpp"

#include <algorithm>
#include <sstream>

#include "termcoding/normalize.hpp"

namespace termcoding {

std::size_t DepGraph::index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].name == name) return i;
  throw Error("no vertex named '" + name + "'");
}

std::vector<std::size_t> DepGraph::in_neighbours(std::size_t v) const {
  std::vector<std::size_t> out;
  for (auto [a, b] : edges)
    if (b == v) out.push_back(a);
  return out;
}

DepGraph DepGraph::split_definitions() const {
  DepGraph g;
  g.vertices = vertices;
  g.constants_at.clear();
  g.distinctness = distinctness;
  std::vector<bool> first_used(vertices.size(), false);
  for (const auto& d : definitions) {
    std::size_t t = d.target;
    if (first_used[t]) {
      t = g.vertices.size();
      g.vertices.push_back({vertices[d.target].name + "#" + std::to_string(t), vertices[d.target].sort});
    }
    first_used[d.target] = true;
    for (auto a : d.args) g.edges.insert({a, t});
    if (d.args.empty()) g.constants_at.insert(t);
    g.definitions.push_back({d.args, t});
  }
  return g;
}

DepGraph build_graph(const System& sys) {
  if (!is_flat(sys)) throw Error("dependency graph requires a flat system");
  DepGraph g;
  for (const auto& v : sys.vars) g.vertices.push_back({v.name, v.sort});
  auto idx = [&](const std::string& n) {
    auto i = sys.var_index(n);
    if (!i) throw Error("unknown variable '" + n + "'");
    return *i;
  };
  for (const auto& c : sys.equations) {
    std::size_t t = idx(c.rhs.name);
    DepGraph::Definition d{{}, t};
    for (const auto& a : c.lhs.args) {
      std::size_t s = idx(a.name);
      g.edges.insert({s, t});
      d.args.push_back(s);
    }
    std::sort(d.args.begin(), d.args.end());
    d.args.erase(std::unique(d.args.begin(), d.args.end()), d.args.end());
    if (c.lhs.args.empty()) g.constants_at.insert(t);
    g.definitions.push_back(std::move(d));
  }
  for (const auto& c : sys.disequalities) {
    std::size_t a = idx(c.lhs.name), b = idx(c.rhs.name);
    g.distinctness.insert({std::min(a, b), std::max(a, b)});
  }
  return g;
}

namespace {
std::string quote(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + "\"";
}
}  // namespace

std::string to_dot(const DepGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    os << "  " << quote(v.name) << " [label=" << quote(v.name + " : " + v.sort);
    if (g.constants_at.count(i)) os << ", shape=box";
    os << "];\n";
  }
  for (auto [a, b] : g.edges)
    os << "  " << quote(g.vertices[a].name) << " -> " << quote(g.vertices[b].name) << ";\n";
  for (auto [a, b] : g.distinctness)
    os << "  " << quote(g.vertices[a].name) << " -> " << quote(g.vertices[b].name)
       << " [style=dashed, dir=none, constraint=false, label=\"≠\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace termcoding
