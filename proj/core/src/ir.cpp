#include "termcoding/ir.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace termcoding {

std::string ValidationReport::summary() const {
  if (issues.empty()) return "ok";
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += i.message;
  }
  return out;
}

namespace {

void render_term(const Term& t, std::string& out) {
  out += t.name;
  if (t.is_var() || t.args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    render_term(t.args[i], out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string s;
  render_term(t, s);
  return s;
}

std::string to_string(const Constraint& c) {
  return to_string(c.lhs) + (c.kind == Constraint::Kind::Eq ? " = " : " != ") +
         to_string(c.rhs);
}

const FuncSymbol* System::find_func(const std::string& name) const {
  for (const auto& f : funcs)
    if (f.name == name) return &f;
  return nullptr;
}

const VarDecl* System::find_var(const std::string& name) const {
  for (const auto& v : vars)
    if (v.name == name) return &v;
  return nullptr;
}

bool System::has_sort(const std::string& name) const { return sort_index(name).has_value(); }

std::optional<std::size_t> System::func_index(const std::string& name) const {
  for (std::size_t i = 0; i < funcs.size(); ++i)
    if (funcs[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> System::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> System::sort_index(const std::string& name) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == name) return i;
  return std::nullopt;
}

DomainSizes uniform_sizes(const System& sys, std::uint64_t n) {
  DomainSizes d;
  for (const auto& s : sys.sorts) d[s.name] = n;
  return d;
}

void check_sizes(const System& sys, const DomainSizes& sizes) {
  for (const auto& s : sys.sorts) {
    auto it = sizes.find(s.name);
    if (it == sizes.end()) throw Error("missing domain size for sort " + s.name);
    if (it->second == 0) throw Error("domain size of sort " + s.name + " must be >= 1");
  }
}

namespace {

struct Checker {
  const System& sys;
  ValidationReport& rep;

  void add(IssueKind k, std::string msg) { rep.issues.push_back({k, std::move(msg)}); }

  // Returns the sort or empty string when the term is ill-typed.
  std::string sort_of(const Term& t) {
    if (t.is_var()) {
      const VarDecl* v = sys.find_var(t.name);
      if (!v) {
        add(IssueKind::UnknownSymbol, "unknown variable '" + t.name + "'");
        return {};
      }
      return v->sort;
    }
    const FuncSymbol* f = sys.find_func(t.name);
    if (!f) {
      add(IssueKind::UnknownSymbol, "unknown function symbol '" + t.name + "'");
      for (const auto& a : t.args) sort_of(a);
      return {};
    }
    if (f->arity() != t.args.size()) {
      add(IssueKind::ArityMismatch, "'" + t.name + "' expects " + std::to_string(f->arity()) +
                                        " argument(s), got " + std::to_string(t.args.size()) +
                                        " in " + to_string(t));
      for (const auto& a : t.args) sort_of(a);
      return f->result_sort;
    }
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      std::string s = sort_of(t.args[i]);
      if (!s.empty() && s != f->arg_sorts[i])
        add(IssueKind::SortMismatch, "argument " + std::to_string(i + 1) + " of '" + t.name +
                                         "' has sort " + s + ", expected " + f->arg_sorts[i] +
                                         " in " + to_string(t));
    }
    return f->result_sort;
  }
};

}  // namespace

ValidationReport validate_system(const System& sys) {
  ValidationReport rep;
  Checker ck{sys, rep};
  if (sys.sorts.empty()) ck.add(IssueKind::NoSorts, "system declares no sorts");

  std::set<std::string> sort_names;
  for (const auto& s : sys.sorts)
    if (!sort_names.insert(s.name).second)
      ck.add(IssueKind::DuplicateName, "duplicate sort '" + s.name + "'");

  std::set<std::string> names;  // funcs and vars share one namespace
  for (const auto& f : sys.funcs) {
    if (!names.insert(f.name).second)
      ck.add(IssueKind::DuplicateName, "duplicate name '" + f.name + "'");
    for (const auto& s : f.arg_sorts)
      if (!sort_names.count(s))
        ck.add(IssueKind::UnknownSort, "function '" + f.name + "' uses unknown sort '" + s + "'");
    if (!sort_names.count(f.result_sort))
      ck.add(IssueKind::UnknownSort,
             "function '" + f.name + "' uses unknown sort '" + f.result_sort + "'");
  }
  for (const auto& v : sys.vars) {
    if (!names.insert(v.name).second)
      ck.add(IssueKind::DuplicateName, "duplicate name '" + v.name + "'");
    if (!sort_names.count(v.sort))
      ck.add(IssueKind::UnknownSort, "variable '" + v.name + "' has unknown sort '" + v.sort + "'");
  }

  for (const auto& c : sys.equations) {
    std::string a = ck.sort_of(c.lhs), b = ck.sort_of(c.rhs);
    if (!a.empty() && !b.empty() && a != b)
      ck.add(IssueKind::SortMismatch, "equation " + to_string(c) + " relates sorts " + a +
                                          " and " + b);
  }
  for (const auto& c : sys.disequalities) {
    std::string a = ck.sort_of(c.lhs), b = ck.sort_of(c.rhs);
    if (!a.empty() && !b.empty() && a != b)
      ck.add(IssueKind::NeqSortMismatch, "disequality " + to_string(c) + " relates sorts " + a +
                                             " and " + b);
    if (c.lhs == c.rhs)
      ck.add(IssueKind::TrivialDisequality,
             "disequality " + to_string(c) + " is syntactically unsatisfiable");
  }
  for (const auto& t : sys.outputs) ck.sort_of(t);
  return rep;
}

void require_valid(const System& sys) {
  auto rep = validate_system(sys);
  if (!rep.ok()) throw ValidationError(std::move(rep));
}

void require_well_formed(const System& sys) {
  auto rep = validate_system(sys);
  std::erase_if(rep.issues, [](const ValidationIssue& i) { return i.kind == IssueKind::TrivialDisequality; });
  if (!rep.ok()) throw ValidationError(std::move(rep));
}

std::string term_sort(const Term& t, const System& sys) {
  if (t.is_var()) {
    if (const VarDecl* v = sys.find_var(t.name)) return v->sort;
    throw Error("untyped term: unknown variable '" + t.name + "'");
  }
  const FuncSymbol* f = sys.find_func(t.name);
  if (!f) throw Error("untyped term: unknown function '" + t.name + "'");
  if (f->arity() != t.args.size()) throw Error("untyped term: arity mismatch in " + to_string(t));
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (term_sort(t.args[i], sys) != f->arg_sorts[i])
      throw Error("untyped term: sort mismatch in " + to_string(t));
  return f->result_sort;
}

namespace {
void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}
}  // namespace

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

std::size_t term_size(const Term& t) {
  if (t.is_var()) return 0;
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.is_var()) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  Term r = Term::app(t.name);
  r.args.reserve(t.args.size());
  for (const auto& a : t.args) r.args.push_back(substitute(a, sub));
  return r;
}

std::string fresh_name(const System& sys, const std::string& stem,
                       const std::vector<std::string>& taken) {
  auto used = [&](const std::string& n) {
    return sys.find_func(n) || sys.find_var(n) || sys.has_sort(n) ||
           std::find(taken.begin(), taken.end(), n) != taken.end();
  };
  if (!used(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string cand = stem + "_" + std::to_string(k);
    if (!used(cand)) return cand;
  }
}

}  // namespace termcoding
