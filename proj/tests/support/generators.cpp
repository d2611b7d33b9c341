#include "generators.hpp"

#include <set>

namespace gen {

namespace t = termcoding;

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool uses(const t::Term& tm, const std::string& f) {
  if (tm.is_app() && tm.name == f) return true;
  for (const auto& a : tm.args)
    if (uses(a, f)) return true;
  return false;
}

}  // namespace

t::Term term(Rng& rng, const t::System& sys, const std::string& sort, int depth) {
  std::vector<const t::VarDecl*> vars;
  for (const auto& v : sys.vars)
    if (v.sort == sort) vars.push_back(&v);
  std::vector<const t::FuncSymbol*> funcs;
  for (const auto& f : sys.funcs)
    if (f.result_sort == sort && (depth > 0 || f.arity() == 0)) funcs.push_back(&f);
  bool app = !funcs.empty() && (vars.empty() || pick(rng, 0, 2) > 0);
  if (!app) {
    if (vars.empty()) throw std::logic_error("no term of sort " + sort);
    return t::Term::var(vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)]->name);
  }
  const auto& f = *funcs[pick(rng, 0, static_cast<int>(funcs.size()) - 1)];
  std::vector<t::Term> args;
  for (const auto& s : f.arg_sorts) args.push_back(term(rng, sys, s, depth - 1));
  return t::Term::app(f.name, std::move(args));
}

t::System system(Rng& rng, const SystemShape& shape) {
  for (;;) {
    t::System s;
    for (int i = 0; i < shape.n_sorts; ++i) s.sorts.push_back({shape.n_sorts == 1 ? "A" : "S" + std::to_string(i)});
    auto any_sort = [&] { return s.sorts[pick(rng, 0, static_cast<int>(s.sorts.size()) - 1)].name; };
    int nv = pick(rng, 1, shape.max_vars);
    const char* names[] = {"x", "y", "z", "w", "u", "v"};
    for (int i = 0; i < nv; ++i) s.vars.push_back({names[i], any_sort()});
    int nf = pick(rng, 1, shape.max_funcs);
    for (int i = 0; i < nf; ++i) {
      t::FuncSymbol f;
      f.name = i == 0 ? "f" : i == 1 ? "g" : "h" + std::to_string(i);
      int ar = shape.arities[pick(rng, 0, static_cast<int>(shape.arities.size()) - 1)];
      for (int k = 0; k < ar; ++k) f.arg_sorts.push_back(any_sort());
      f.result_sort = any_sort();
      s.funcs.push_back(f);
    }
    // Only sorts that have a variable or a constant can host terms.
    auto inhabited = [&](const std::string& sort) {
      for (const auto& v : s.vars)
        if (v.sort == sort) return true;
      for (const auto& f : s.funcs)
        if (f.result_sort == sort && f.arity() == 0) return true;
      return false;
    };
    bool ok = true;
    for (const auto& f : s.funcs)
      for (const auto& a : f.arg_sorts) ok = ok && inhabited(a);
    if (!ok) continue;
    try {
      if (shape.max_outputs > 0) {
        int no = pick(rng, 1, shape.max_outputs);
        for (int i = 0; i < no; ++i) s.outputs.push_back(term(rng, s, any_sort(), shape.max_depth));
      } else {
        int ne = pick(rng, 1, shape.max_equations);
        for (int i = 0; i < ne; ++i) {
          std::string sort = s.funcs[pick(rng, 0, nf - 1)].result_sort;
          auto l = term(rng, s, sort, shape.max_depth);
          auto r = term(rng, s, sort, shape.max_depth - 1);
          if (l.is_var() && r.is_var() && pick(rng, 0, 1)) l = term(rng, s, sort, shape.max_depth);
          s.equations.push_back(t::Constraint::eq(l, r));
        }
      }
      int nd = pick(rng, 0, shape.max_disequalities);
      for (int i = 0; i < nd; ++i) {
        std::string sort = any_sort();
        auto l = term(rng, s, sort, 1);
        auto r = term(rng, s, sort, 1);
        if (l == r) continue;
        s.disequalities.push_back(t::Constraint::neq(l, r));
      }
    } catch (const std::logic_error&) {
      continue;
    }
    // Drop symbols no constraint mentions.
    std::vector<t::FuncSymbol> used;
    for (const auto& f : s.funcs) {
      bool u = false;
      for (const auto& c : s.equations) u = u || uses(c.lhs, f.name) || uses(c.rhs, f.name);
      for (const auto& c : s.disequalities) u = u || uses(c.lhs, f.name) || uses(c.rhs, f.name);
      for (const auto& o : s.outputs) u = u || uses(o, f.name);
      if (u) used.push_back(f);
    }
    if (used.empty()) continue;
    s.funcs = used;
    if (!t::validate_system(s).ok()) continue;
    return s;
  }
}

t::Interpretation interpretation(Rng& rng, const t::System& sys, const t::DomainSizes& sizes) {
  t::Interpretation I;
  I.sizes = sizes;
  for (const auto& f : sys.funcs) {
    std::uint64_t n = 1;
    for (const auto& s : f.arg_sorts) n *= sizes.at(s);
    std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(sizes.at(f.result_sort) - 1));
    auto& tab = I.tables[f.name];
    for (std::uint64_t i = 0; i < n; ++i) tab.push_back(d(rng));
  }
  return I;
}

namespace {

using t::fo::Formula;

struct SentenceGen {
  Rng& rng;
  const SentenceShape& shape;
  t::fo::Signature sig;
  int quantifiers_left;
  int bound = 0;

  t::Term fterm(const std::vector<std::string>& scope) {
    t::Term v = t::Term::var(scope[pick(rng, 0, static_cast<int>(scope.size()) - 1)]);
    if (!sig.funcs.empty() && pick(rng, 0, 3) == 0) return t::Term::app(sig.funcs[0].name, {v});
    return v;
  }

  Formula atom(const std::vector<std::string>& scope) {
    if (shape.allow_equality && pick(rng, 0, 3) == 0) return Formula::equal(fterm(scope), fterm(scope));
    const auto& r = sig.rels[pick(rng, 0, static_cast<int>(sig.rels.size()) - 1)];
    std::vector<t::Term> args;
    for (std::size_t i = 0; i < r.arg_sorts.size(); ++i) args.push_back(fterm(scope));
    return Formula::atom(r.name, std::move(args));
  }

  Formula quantified(std::vector<std::string> scope, int depth) {
    --quantifiers_left;
    std::string v = "v" + std::to_string(bound++);
    scope.push_back(v);
    Formula body = any(scope, depth - 1);
    return pick(rng, 0, 1) ? Formula::forall(v, "D", body) : Formula::exists(v, "D", body);
  }

  Formula any(const std::vector<std::string>& scope, int depth) {
    if (scope.empty()) return quantified(scope, depth);
    int choice = depth <= 0 ? 0 : pick(rng, 0, 5);
    if (choice == 5 && quantifiers_left > 0) return quantified(scope, depth);
    switch (choice) {
      case 1: return Formula::negate(any(scope, depth - 1));
      case 2: return Formula::conj(any(scope, depth - 1), any(scope, depth - 1));
      case 3: return Formula::disj(any(scope, depth - 1), any(scope, depth - 1));
      case 4: return Formula::implies(any(scope, depth - 1), any(scope, depth - 1));
      default: return atom(scope);
    }
  }
};

}  // namespace

t::fo::Sentence sentence(Rng& rng, const SentenceShape& shape) {
  SentenceGen g{rng, shape, {}, std::max(1, pick(rng, 1, shape.max_quantifiers))};
  g.sig.sorts = {"D"};
  int nr = pick(rng, 1, shape.max_relations);
  for (int i = 0; i < nr; ++i) {
    t::fo::RelSymbol r{i == 0 ? "P" : "R", {}};
    int ar = pick(rng, 1, 2);
    for (int k = 0; k < ar; ++k) r.arg_sorts.push_back("D");
    g.sig.rels.push_back(r);
  }
  if (shape.allow_function && pick(rng, 0, 2) == 0) g.sig.funcs.push_back({"g", {"D"}, "D"});
  t::fo::Formula f = g.any({}, 4);
  // Spend any remaining quantifier on an outer binder.
  if (g.quantifiers_left > 0 && pick(rng, 0, 1)) {
    std::string v = "v" + std::to_string(g.bound++);
    f = pick(rng, 0, 1) ? Formula::forall(v, "D", f) : Formula::exists(v, "D", f);
  }
  return {g.sig, f};
}

}  // namespace gen
