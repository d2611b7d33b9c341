#include "termcoding/normalize.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace termcoding {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  std::size_t add() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller id (declared earlier) survives.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

struct Def {
  std::string func;
  std::vector<std::size_t> args;
  std::size_t result;
  int phase;  // 0: created from an equation, 1: from a disequality
  std::size_t created;
};

using Key = std::pair<std::string, std::vector<std::size_t>>;

// Merge results of definitions whose left-hand sides coincide, until stable.
void close_congruence(std::vector<Def>& defs, UnionFind& uf) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Key, std::size_t> seen;
    for (auto& d : defs) {
      for (auto& a : d.args) a = uf.find(a);
      d.result = uf.find(d.result);
      Key k{d.func, d.args};
      auto [it, fresh] = seen.emplace(k, d.result);
      if (!fresh && uf.find(it->second) != d.result) {
        uf.unite(it->second, d.result);
        changed = true;
      }
    }
  }
  for (auto& d : defs) {
    for (auto& a : d.args) a = uf.find(a);
    d.result = uf.find(d.result);
  }
}

Term flat_app(const std::string& f, const std::vector<std::size_t>& args,
              const std::vector<std::string>& names) {
  Term t = Term::app(f);
  for (auto a : args) t.args.push_back(Term::var(names[a]));
  return t;
}

}  // namespace

Normalized normalize(const System& sys) {
  require_well_formed(sys);
  const std::size_t n_orig = sys.vars.size();

  UnionFind uf;
  std::vector<std::string> sort_of;
  std::map<std::string, std::size_t> var_id;
  for (const auto& v : sys.vars) {
    var_id[v.name] = uf.add();
    sort_of.push_back(v.sort);
  }

  std::vector<Def> defs;
  std::map<Key, std::size_t> shared;
  int phase = 0;

  auto flatten = [&](auto&& self, const Term& t) -> std::size_t {
    if (t.is_var()) return var_id.at(t.name);
    std::vector<std::size_t> args;
    for (const auto& a : t.args) args.push_back(uf.find(self(self, a)));
    Key k{t.name, args};
    if (auto it = shared.find(k); it != shared.end()) return uf.find(it->second);
    std::size_t id = uf.add();
    sort_of.push_back(sys.find_func(t.name)->result_sort);
    defs.push_back({t.name, args, id, phase, defs.size()});
    shared.emplace(std::move(k), id);
    return id;
  };

  for (const auto& c : sys.equations) {
    std::size_t a = flatten(flatten, c.lhs);
    std::size_t b = flatten(flatten, c.rhs);
    uf.unite(a, b);
  }
  phase = 1;
  std::vector<std::pair<std::size_t, std::size_t>> neqs;
  for (const auto& c : sys.disequalities) {
    std::size_t a = flatten(flatten, c.lhs);
    std::size_t b = flatten(flatten, c.rhs);
    neqs.emplace_back(a, b);
  }

  close_congruence(defs, uf);

  // Output order: aux-valued definitions before definitions of original
  // variables, equations before disequalities, then creation order.
  std::stable_sort(defs.begin(), defs.end(), [&](const Def& a, const Def& b) {
    bool ao = a.result < n_orig, bo = b.result < n_orig;
    if (a.phase != b.phase) return a.phase < b.phase;
    if (ao != bo) return !ao;
    return a.created < b.created;
  });
  {
    std::set<Key> keep;
    std::vector<Def> uniq;
    for (auto& d : defs)
      if (keep.insert({d.func, d.args}).second) uniq.push_back(std::move(d));
    defs = std::move(uniq);
  }

  // Names: originals keep theirs, surviving aux get _a1, _a2, ... in order of definition.
  std::vector<std::string> names(uf.parent.size());
  for (std::size_t i = 0; i < n_orig; ++i) names[i] = sys.vars[i].name;
  std::vector<std::size_t> aux_order;
  std::vector<std::string> taken;
  for (const auto& d : defs) {
    if (d.result >= n_orig && names[d.result].empty()) {
      std::string nm;
      for (std::size_t k = aux_order.size() + 1;; ++k) {
        nm = "_a" + std::to_string(k);
        if (!sys.find_var(nm) && !sys.find_func(nm) && !sys.has_sort(nm) &&
            std::find(taken.begin(), taken.end(), nm) == taken.end())
          break;
      }
      names[d.result] = nm;
      taken.push_back(nm);
      aux_order.push_back(d.result);
    }
  }

  Normalized out;
  System& r = out.system;
  r.sorts = sys.sorts;
  r.funcs = sys.funcs;
  for (std::size_t i = 0; i < n_orig; ++i) {
    std::size_t rep = uf.find(i);
    if (rep == i)
      r.vars.push_back(sys.vars[i]);
    else
      out.map.merged[sys.vars[i].name] = names[rep];
  }
  for (auto id : aux_order) r.vars.push_back({names[id], sort_of[id]});

  for (const auto& d : defs) {
    Term lhs = flat_app(d.func, d.args, names);
    if (d.result >= n_orig) out.map.aux.emplace(names[d.result], lhs);
    r.equations.push_back(Constraint::eq(std::move(lhs), Term::var(names[d.result])));
  }
  for (auto [a, b] : neqs)
    r.disequalities.push_back(
        Constraint::neq(Term::var(names[uf.find(a)]), Term::var(names[uf.find(b)])));

  std::map<std::string, Term> rename;
  for (const auto& [from, to] : out.map.merged) rename[from] = Term::var(to);
  for (const auto& t : sys.outputs) r.outputs.push_back(substitute(t, rename));
  return out;
}

bool is_flat(const System& sys) {
  for (const auto& c : sys.equations) {
    if (!c.lhs.is_app() || !c.rhs.is_var()) return false;
    for (const auto& a : c.lhs.args)
      if (!a.is_var()) return false;
  }
  for (const auto& c : sys.disequalities)
    if (!c.lhs.is_var() || !c.rhs.is_var()) return false;
  return true;
}

Diversified diversify(const System& sys) {
  if (!is_flat(sys)) throw Error("diversify requires a flat system; run normalize first");

  UnionFind uf;
  std::map<std::string, std::size_t> var_id;
  for (const auto& v : sys.vars) var_id[v.name] = uf.add();

  std::vector<Def> defs;
  for (const auto& c : sys.equations) {
    Def d{c.lhs.name, {}, var_id.at(c.rhs.name), 0, defs.size()};
    for (const auto& a : c.lhs.args) d.args.push_back(var_id.at(a.name));
    defs.push_back(std::move(d));
  }
  close_congruence(defs, uf);
  {
    std::set<Key> keep;
    std::vector<Def> uniq;
    for (auto& d : defs)
      if (keep.insert({d.func, d.args}).second) uniq.push_back(std::move(d));
    defs = std::move(uniq);
  }

  Diversified out;
  System& r = out.system;
  r.sorts = sys.sorts;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sys.vars.size(); ++i) {
    names.push_back(sys.vars[i].name);
    std::size_t rep = uf.find(i);
    if (rep == i)
      r.vars.push_back(sys.vars[i]);
    else
      out.merged[sys.vars[i].name] = sys.vars[rep].name;
  }
  for (auto& nm : names) nm = sys.vars[uf.find(var_id.at(nm))].name;

  std::map<std::string, Term> rename;
  for (const auto& [from, to] : out.merged) rename[from] = Term::var(to);
  for (const auto& t : sys.outputs) r.outputs.push_back(substitute(t, rename));

  // Original symbols remain only where outputs still mention them.
  std::set<std::string> used_by_outputs;
  auto collect = [&](auto&& self, const Term& t) -> void {
    if (t.is_app()) used_by_outputs.insert(t.name);
    for (const auto& a : t.args) self(self, a);
  };
  for (const auto& t : r.outputs) collect(collect, t);
  for (const auto& f : sys.funcs)
    if (used_by_outputs.count(f.name)) r.funcs.push_back(f);

  std::vector<std::string> taken;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    const Def& d = defs[i];
    const FuncSymbol* orig = sys.find_func(d.func);
    if (!orig) throw Error("unknown function symbol '" + d.func + "'");
    std::string nm = fresh_name(sys, d.func + "_" + std::to_string(i + 1), taken);
    taken.push_back(nm);
    FuncSymbol fs = *orig;
    fs.name = nm;
    r.funcs.push_back(fs);
    out.symbols[nm] = {d.func, i};
    Term lhs = Term::app(nm);
    for (auto a : d.args) lhs.args.push_back(Term::var(sys.vars[a].name));
    r.equations.push_back(Constraint::eq(std::move(lhs), Term::var(sys.vars[d.result].name)));
  }
  for (const auto& c : sys.disequalities)
    r.disequalities.push_back(Constraint::neq(Term::var(names[var_id.at(c.lhs.name)]),
                                              Term::var(names[var_id.at(c.rhs.name)])));
  return out;
}

Diversified normalize_diversify(const System& sys) { return diversify(normalize(sys).system); }

}  // namespace termcoding
