#include "termcoding/detail/compiled.hpp"

#include <algorithm>
#include <limits>

namespace termcoding::detail {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

struct Builder {
  const System& sys;
  CompiledSystem& cs;

  std::uint32_t node(const Term& t) {
    CompiledSystem::Node n;
    if (t.is_var()) {
      auto i = sys.var_index(t.name);
      if (!i) throw Error("unknown variable '" + t.name + "'");
      n.is_var = true;
      n.id = static_cast<std::uint32_t>(*i);
    } else {
      auto i = sys.func_index(t.name);
      if (!i) throw Error("unknown function '" + t.name + "'");
      n.is_var = false;
      n.id = static_cast<std::uint32_t>(*i);
      for (const auto& a : t.args) n.kids.push_back(node(a));
    }
    cs.nodes.push_back(std::move(n));
    return static_cast<std::uint32_t>(cs.nodes.size() - 1);
  }

  void vars_of(std::uint32_t n, std::vector<std::uint32_t>& out) const {
    const auto& nd = cs.nodes[n];
    if (nd.is_var) {
      out.push_back(nd.id);
      return;
    }
    for (auto k : nd.kids) vars_of(k, out);
  }
};

}  // namespace

std::uint64_t CompiledSystem::image_cap() const {
  std::uint64_t p = 1;
  for (auto d : out_dom) p = sat_mul(p, d);
  return p;
}

std::uint64_t CompiledSystem::unit_count() const {
  std::uint64_t p = 1;
  for (auto v : branch_vars) {
    p = sat_mul(p, var_dom[v]);
    if (p == std::numeric_limits<std::uint64_t>::max())
      throw Error("assignment space does not fit in 64 bits");
  }
  return p;
}

CompiledSystem compile_system(const System& sys, const DomainSizes& sizes) {
  check_sizes(sys, sizes);
  CompiledSystem cs;
  auto dom = [&](const std::string& sort) -> std::uint32_t {
    std::uint64_t n = sizes.at(sort);
    if (n > (1u << 30)) throw Error("domain size too large for sort " + sort);
    return static_cast<std::uint32_t>(n);
  };
  for (const auto& v : sys.vars) {
    cs.var_names.push_back(v.name);
    cs.var_dom.push_back(dom(v.sort));
  }
  std::uint64_t offset = 0;
  for (std::size_t fi = 0; fi < sys.funcs.size(); ++fi) {
    const auto& f = sys.funcs[fi];
    CompiledSystem::Func cf;
    cf.name = f.name;
    cf.result_dom = dom(f.result_sort);
    std::uint64_t size = 1;
    for (const auto& s : f.arg_sorts) {
      cf.arg_dom.push_back(dom(s));
      size *= dom(s);
      if (size > (1ull << 31)) throw Error("table of '" + f.name + "' is too large");
    }
    cf.strides.assign(f.arity(), 1);
    for (std::size_t k = f.arity(); k-- > 1;) cf.strides[k - 1] = cf.strides[k] * cf.arg_dom[k];
    cf.offset = static_cast<std::uint32_t>(offset);
    cf.size = static_cast<std::uint32_t>(size);
    offset += size;
    if (offset > (1ull << 31)) throw Error("interpretation tables are too large");
    for (std::uint64_t e = 0; e < size; ++e) cs.entry_func.push_back(static_cast<std::uint32_t>(fi));
    cs.funcs.push_back(std::move(cf));
  }
  cs.n_entries = static_cast<std::uint32_t>(offset);

  Builder b{sys, cs};
  struct Pending {
    bool eq;
    std::uint32_t a, b;
    std::vector<std::uint32_t> vars;
    bool done = false;
  };
  std::vector<Pending> cons;
  auto add = [&](const Constraint& c, bool eq) {
    Pending p{eq, b.node(c.lhs), b.node(c.rhs), {}};
    b.vars_of(p.a, p.vars);
    b.vars_of(p.b, p.vars);
    cons.push_back(std::move(p));
  };
  for (const auto& c : sys.equations) add(c, true);
  for (const auto& c : sys.disequalities) add(c, false);
  for (const auto& t : sys.outputs) {
    cs.outputs.push_back(b.node(t));
    cs.out_dom.push_back(dom(term_sort(t, sys)));
  }

  std::vector<char> assigned(cs.var_dom.size(), 0);
  auto ready = [&](const std::vector<std::uint32_t>& vs) {
    return std::all_of(vs.begin(), vs.end(), [&](auto v) { return assigned[v]; });
  };
  std::size_t next_branch = 0;
  for (;;) {
    for (auto& p : cons)
      if (!p.done && ready(p.vars)) {
        cs.steps.push_back({p.eq ? CompiledSystem::StepKind::CheckEq : CompiledSystem::StepKind::CheckNeq,
                            0, p.a, p.b});
        p.done = true;
      }
    bool forced = false;
    for (auto& p : cons) {
      if (p.done || !p.eq) continue;
      for (int side = 0; side < 2 && !forced; ++side) {
        std::uint32_t lhs = side == 0 ? p.a : p.b, rhs = side == 0 ? p.b : p.a;
        const auto& ln = cs.nodes[lhs];
        if (!ln.is_var || assigned[ln.id]) continue;
        std::vector<std::uint32_t> rv;
        b.vars_of(rhs, rv);
        if (!ready(rv)) continue;
        cs.steps.push_back({CompiledSystem::StepKind::Force, ln.id, rhs, 0});
        assigned[ln.id] = 1;
        p.done = true;
        forced = true;
      }
      if (forced) break;
    }
    if (forced) continue;
    while (next_branch < assigned.size() && assigned[next_branch]) ++next_branch;
    if (next_branch == assigned.size()) break;
    cs.steps.push_back({CompiledSystem::StepKind::Branch, static_cast<std::uint32_t>(next_branch), 0, 0});
    cs.branch_vars.push_back(static_cast<std::uint32_t>(next_branch));
    assigned[next_branch] = 1;
  }
  return cs;
}

// ---------------------------------------------------------------- exact

std::uint32_t ExactEvaluator::eval(std::uint32_t node) const {
  const auto& n = cs_.nodes[node];
  if (n.is_var) return assign_[n.id];
  const auto& f = cs_.funcs[n.id];
  std::uint32_t idx = f.offset;
  for (std::size_t k = 0; k < n.kids.size(); ++k) idx += eval(n.kids[k]) * f.strides[k];
  return table_[idx];
}

std::uint64_t ExactEvaluator::count() {
  std::uint64_t c = 0;
  walk(0, [&] {
    ++c;
    return true;
  });
  return c;
}

std::uint64_t ExactEvaluator::image() {
  if (cs_.image_cap() == std::numeric_limits<std::uint64_t>::max())
    throw Error("output tuple space does not fit in 64 bits");
  std::unordered_map<std::uint64_t, char> seen;
  walk(0, [&] {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < cs_.outputs.size(); ++i) code = code * cs_.out_dom[i] + eval(cs_.outputs[i]);
    seen.emplace(code, 1);
    return true;
  });
  return seen.size();
}

// -------------------------------------------------------------- partial

PartialEvaluator::PartialEvaluator(const CompiledSystem& cs, Objective obj)
    : cs_(cs), obj_(obj), assign_(cs.var_dom.size(), 0) {
  if (obj == Objective::Image && cs.image_cap() == std::numeric_limits<std::uint64_t>::max())
    throw Error("output tuple space does not fit in 64 bits");
}

std::int64_t PartialEvaluator::eval(std::uint32_t node) {
  const auto& n = cs_.nodes[node];
  if (n.is_var) return assign_[n.id];
  const auto& f = cs_.funcs[n.id];
  std::uint32_t idx = f.offset;
  bool unknown_arg = false;
  for (std::size_t k = 0; k < n.kids.size(); ++k) {
    std::int64_t v = eval(n.kids[k]);
    if (v < 0)
      unknown_arg = true;
    else
      idx += static_cast<std::uint32_t>(v) * f.strides[k];
  }
  if (unknown_arg) {
    func_all_read_[n.id] = 1;
    return kUnknown;
  }
  std::int64_t val = (*partial_)[idx];
  if (val < 0) reads_[idx] = 1;
  return val;
}

std::uint64_t PartialEvaluator::walk(std::size_t step, bool counting_only) {
  using K = CompiledSystem::StepKind;
  if (step == cs_.steps.size()) {
    if (obj_ == Objective::Image) {
      std::uint64_t code = 0;
      bool known = true;
      for (std::size_t i = 0; i < cs_.outputs.size(); ++i) {
        std::int64_t v = eval(cs_.outputs[i]);
        if (v < 0)
          known = false;
        else
          code = code * cs_.out_dom[i] + static_cast<std::uint64_t>(v);
      }
      if (!counting_only) {
        if (known)
          known_.emplace(code, 1);
        else
          ++unknown_leaves_;
      }
    }
    return 1;
  }
  const auto& s = cs_.steps[step];
  switch (s.kind) {
    case K::Branch: {
      std::uint64_t total = 0;
      for (std::uint32_t v = 0; v < cs_.var_dom[s.var]; ++v) {
        assign_[s.var] = v;
        total += walk(step + 1, counting_only);
      }
      return total;
    }
    case K::Force: {
      std::int64_t v = eval(s.a);
      if (v >= 0) {
        assign_[s.var] = static_cast<std::uint32_t>(v);
        return walk(step + 1, counting_only);
      }
      // Any completion fixes one value here; the best of them bounds the rest.
      std::uint64_t best = 0;
      for (std::uint32_t x = 0; x < cs_.var_dom[s.var]; ++x) {
        assign_[s.var] = x;
        best = std::max(best, walk(step + 1, true));
      }
      if (!counting_only && obj_ == Objective::Image) unknown_leaves_ += best;
      return best;
    }
    case K::CheckEq:
    case K::CheckNeq: {
      std::int64_t l = eval(s.a), r = eval(s.b);
      if (l >= 0 && r >= 0 && ((l == r) != (s.kind == K::CheckEq))) return 0;
      return walk(step + 1, counting_only);
    }
  }
  return 0;
}

std::uint64_t PartialEvaluator::bound(const std::vector<std::int64_t>& partial) {
  partial_ = &partial;
  reads_.assign(cs_.n_entries, 0);
  func_all_read_.assign(cs_.funcs.size(), 0);
  known_.clear();
  unknown_leaves_ = 0;
  std::uint64_t leaves = walk(0, false);
  if (obj_ == Objective::Count) return leaves;
  return std::min<std::uint64_t>(known_.size() + unknown_leaves_, cs_.image_cap());
}

// ----------------------------------------------------------------- units

UnitEvaluator::UnitEvaluator(const CompiledSystem& cs, Objective obj, std::vector<std::uint32_t> table)
    : cs_(cs), obj_(obj), table_(std::move(table)) {
  if (obj == Objective::Image && cs.image_cap() == std::numeric_limits<std::uint64_t>::max())
    throw Error("output tuple space does not fit in 64 bits");
  n_units_ = cs.unit_count();
  if (n_units_ > (1ull << 26)) throw Error("too many assignments for incremental evaluation");
  outcome_.resize(n_units_);
  unit_reads_.resize(n_units_);
  readers_.resize(cs.n_entries);
  stamp_.assign(n_units_, 0);
  for (std::uint64_t u = 0; u < n_units_; ++u) {
    outcome_[u] = eval_unit(u, unit_reads_[u]);
    add_outcome(outcome_[u]);
    for (auto e : unit_reads_[u]) readers_[e].push_back(static_cast<std::uint32_t>(u));
  }
}

std::int64_t UnitEvaluator::eval_unit(std::uint64_t u, std::vector<std::uint32_t>& reads) const {
  reads.clear();
  std::vector<std::uint32_t> assign(cs_.var_dom.size(), 0);
  for (std::size_t i = cs_.branch_vars.size(); i-- > 0;) {
    auto v = cs_.branch_vars[i];
    assign[v] = static_cast<std::uint32_t>(u % cs_.var_dom[v]);
    u /= cs_.var_dom[v];
  }
  auto eval = [&](auto&& self, std::uint32_t node) -> std::uint32_t {
    const auto& n = cs_.nodes[node];
    if (n.is_var) return assign[n.id];
    const auto& f = cs_.funcs[n.id];
    std::uint32_t idx = f.offset;
    for (std::size_t k = 0; k < n.kids.size(); ++k) idx += self(self, n.kids[k]) * f.strides[k];
    if (std::find(reads.begin(), reads.end(), idx) == reads.end()) reads.push_back(idx);
    return table_[idx];
  };
  using K = CompiledSystem::StepKind;
  for (const auto& s : cs_.steps) {
    switch (s.kind) {
      case K::Branch:
        break;
      case K::Force:
        assign[s.var] = eval(eval, s.a);
        break;
      case K::CheckEq:
        if (eval(eval, s.a) != eval(eval, s.b)) return obj_ == Objective::Count ? 0 : -1;
        break;
      case K::CheckNeq:
        if (eval(eval, s.a) == eval(eval, s.b)) return obj_ == Objective::Count ? 0 : -1;
        break;
    }
  }
  if (obj_ == Objective::Count) return 1;
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < cs_.outputs.size(); ++i) code = code * cs_.out_dom[i] + eval(eval, cs_.outputs[i]);
  return static_cast<std::int64_t>(code);
}

void UnitEvaluator::add_outcome(std::int64_t o) {
  if (obj_ == Objective::Count) {
    alive_ += static_cast<std::uint64_t>(o);
  } else if (o >= 0) {
    ++tuples_[static_cast<std::uint64_t>(o)];
  }
}

void UnitEvaluator::remove_outcome(std::int64_t o) {
  if (obj_ == Objective::Count) {
    alive_ -= static_cast<std::uint64_t>(o);
  } else if (o >= 0) {
    auto it = tuples_.find(static_cast<std::uint64_t>(o));
    if (--it->second == 0) tuples_.erase(it);
  }
}

void UnitEvaluator::set_entry(std::uint32_t e, std::uint32_t v) {
  if (table_[e] == v) return;
  table_[e] = v;
  ++epoch_;
  std::vector<std::uint32_t> affected;
  for (auto u : readers_[e]) {
    if (stamp_[u] == epoch_) continue;
    stamp_[u] = epoch_;
    const auto& r = unit_reads_[u];
    if (std::find(r.begin(), r.end(), e) != r.end()) affected.push_back(u);
  }
  std::vector<std::uint32_t> fresh;
  for (auto u : affected) {
    remove_outcome(outcome_[u]);
    outcome_[u] = eval_unit(u, fresh);
    add_outcome(outcome_[u]);
    const auto& old = unit_reads_[u];
    for (auto x : old)
      if (std::find(fresh.begin(), fresh.end(), x) == fresh.end()) {
        auto& lst = readers_[x];
        lst.erase(std::find(lst.begin(), lst.end(), u));
      }
    for (auto x : fresh)
      if (std::find(old.begin(), old.end(), x) == old.end()) readers_[x].push_back(u);
    unit_reads_[u] = fresh;
  }
}

std::uint64_t UnitEvaluator::full_recount() const {
  std::vector<std::uint32_t> reads;
  if (obj_ == Objective::Count) {
    std::uint64_t c = 0;
    for (std::uint64_t u = 0; u < n_units_; ++u) c += static_cast<std::uint64_t>(eval_unit(u, reads));
    return c;
  }
  std::unordered_map<std::uint64_t, char> seen;
  for (std::uint64_t u = 0; u < n_units_; ++u) {
    std::int64_t o = eval_unit(u, reads);
    if (o >= 0) seen.emplace(static_cast<std::uint64_t>(o), 1);
  }
  return seen.size();
}

}  // namespace termcoding::detail
