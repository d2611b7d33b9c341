#include "termcoding/fo.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "termcoding/dsl.hpp"

namespace termcoding::fo {

using K = Formula::Kind;

Formula Formula::atom(std::string rel, std::vector<Term> a) { return {K::Atom, std::move(rel), {}, std::move(a), {}}; }
Formula Formula::equal(Term l, Term r) { return {K::Eq, {}, {}, {std::move(l), std::move(r)}, {}}; }
Formula Formula::negate(Formula f) { return {K::Not, {}, {}, {}, {std::move(f)}}; }
Formula Formula::conj(Formula a, Formula b) { return {K::And, {}, {}, {}, {std::move(a), std::move(b)}}; }
Formula Formula::disj(Formula a, Formula b) { return {K::Or, {}, {}, {}, {std::move(a), std::move(b)}}; }
Formula Formula::implies(Formula a, Formula b) { return {K::Implies, {}, {}, {}, {std::move(a), std::move(b)}}; }
Formula Formula::forall(std::string v, std::string s, Formula body) {
  return {K::Forall, std::move(v), std::move(s), {}, {std::move(body)}};
}
Formula Formula::exists(std::string v, std::string s, Formula body) {
  return {K::Exists, std::move(v), std::move(s), {}, {std::move(body)}};
}

const RelSymbol* Signature::find_rel(const std::string& n) const {
  for (const auto& r : rels)
    if (r.name == n) return &r;
  return nullptr;
}
const FuncSymbol* Signature::find_func(const std::string& n) const {
  for (const auto& f : funcs)
    if (f.name == n) return &f;
  return nullptr;
}
bool Signature::has_sort(const std::string& n) const {
  return std::find(sorts.begin(), sorts.end(), n) != sorts.end();
}

namespace {

std::string atom_string(const std::string& rel, const std::vector<Term>& args) {
  std::string s = rel;
  if (!args.empty()) {
    s += "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + termcoding::to_string(args[i]);
    s += ")";
  }
  return s;
}

std::string child_string(const Formula& f) {
  std::string s = to_string(f);
  return f.is_quantifier() || f.kind == K::Eq ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case K::Atom: return atom_string(f.name, f.args);
    case K::Eq: return termcoding::to_string(f.args[0]) + " = " + termcoding::to_string(f.args[1]);
    case K::Not: return "~" + child_string(f.kids[0]);
    case K::And: return "(" + child_string(f.kids[0]) + " & " + child_string(f.kids[1]) + ")";
    case K::Or: return "(" + child_string(f.kids[0]) + " | " + child_string(f.kids[1]) + ")";
    case K::Implies: return "(" + child_string(f.kids[0]) + " -> " + child_string(f.kids[1]) + ")";
    case K::Forall: return "forall " + f.name + ":" + f.sort + ". " + to_string(f.kids[0]);
    case K::Exists: return "exists " + f.name + ":" + f.sort + ". " + to_string(f.kids[0]);
  }
  return {};
}

std::string to_string(const Literal& l) {
  std::string body = l.is_eq ? termcoding::to_string(l.args[0]) + " = " + termcoding::to_string(l.args[1])
                             : atom_string(l.rel, l.args);
  if (l.positive) return body;
  return l.is_eq ? "~(" + body + ")" : "~" + body;
}

std::string to_string(const Clause& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " | " : "") + to_string(c[i]);
  return s.empty() ? "false" : s;
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Colon, Dot, Arrow, Amp, Bar, Tilde, Equal, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    int col = static_cast<int>(i - line_start) + 1;
    if (c == '\n') {
      ++line;
      line_start = ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), {line, col, static_cast<int>(j - i)}});
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", {line, col, 2}});
      i += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      case '.': k = Tok::Dot; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Bar; break;
      case '~': k = Tok::Tilde; break;
      case '=': k = Tok::Equal; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", {line, col, 1});
    }
    out.push_back({k, std::string(1, c), {line, col, 1}});
    ++i;
  }
  out.push_back({Tok::End, "", {line, static_cast<int>(i - line_start) + 1, 1}});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "sort" || s == "rel" || s == "fun" || s == "sentence" || s == "forall" || s == "exists";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Sentence run() {
    Sentence s;
    bool have_sentence = false;
    while (peek().kind != Tok::End) {
      const Token& kw = peek();
      if (kw.kind != Tok::Ident) fail("expected a declaration", kw);
      if (have_sentence) fail("only one sentence is allowed", kw);
      if (kw.text == "sort") {
        int line = next().span.line;
        bool any = false;
        while (on_line(line)) {
          const Token& n = expect_ident("sort name");
          declare(n);
          sig_.sorts.push_back(n.text);
          any = true;
        }
        if (!any) fail("expected sort name", peek());
      } else if (kw.text == "rel") {
        int line = next().span.line;
        const Token& n = expect_ident("relation name");
        declare(n);
        RelSymbol r{n.text, {}};
        if (on_line(line)) {
          expect(Tok::Colon, "':'");
          while (on_line(line)) r.arg_sorts.push_back(sort_ref());
        }
        sig_.rels.push_back(std::move(r));
      } else if (kw.text == "fun") {
        int line = next().span.line;
        const Token& n = expect_ident("function name");
        declare(n);
        FuncSymbol f{n.text, {}, {}};
        expect(Tok::Colon, "':'");
        while (on_line(line) && peek().kind == Tok::Ident) f.arg_sorts.push_back(sort_ref());
        if (!on_line(line) || peek().kind != Tok::Arrow) fail("expected '->'", peek());
        next();
        f.result_sort = sort_ref();
        if (on_line(line)) fail("unexpected token after function declaration", peek());
        sig_.funcs.push_back(std::move(f));
      } else if (kw.text == "sentence") {
        next();
        s.formula = formula();
        have_sentence = true;
      } else {
        fail("unknown declaration '" + kw.text + "'", kw);
      }
    }
    if (!have_sentence) throw ParseError("missing sentence", peek().span);
    if (sig_.sorts.empty()) throw ParseError("no sorts declared", {1, 1, 1});
    s.sig = sig_;
    return s;
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.span); }
  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  bool on_line(int line) const { return peek().kind != Tok::End && peek().span.line == line; }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, peek());
    return next();
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected " + what, peek());
    return next();
  }
  void declare(const Token& n) {
    if (!names_.insert(n.text).second) fail("duplicate name '" + n.text + "'", n);
  }
  std::string sort_ref() {
    const Token& s = expect_ident("sort name");
    if (!sig_.has_sort(s.text)) fail("unknown sort '" + s.text + "'", s);
    return s.text;
  }

  // formula := disj ['->' formula]
  Formula formula() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      next();
      return Formula::implies(std::move(lhs), formula());
    }
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Bar) {
      next();
      f = Formula::disj(std::move(f), conjunction());
    }
    return f;
  }
  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::Amp) {
      next();
      f = Formula::conj(std::move(f), unary());
    }
    return f;
  }
  Formula unary() {
    const Token& t = peek();
    if (t.kind == Tok::Tilde) {
      next();
      return Formula::negate(unary());
    }
    if (t.kind == Tok::LParen) {
      next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      bool all = t.text == "forall";
      next();
      const Token& v = expect_ident("variable name");
      if (names_.count(v.text)) fail("variable '" + v.text + "' clashes with a declared name", v);
      expect(Tok::Colon, "':'");
      std::string sort = sort_ref();
      expect(Tok::Dot, "'.'");
      scope_.emplace_back(v.text, sort);
      Formula body = formula();
      scope_.pop_back();
      return all ? Formula::forall(v.text, sort, std::move(body)) : Formula::exists(v.text, sort, std::move(body));
    }
    if (t.kind == Tok::Ident && sig_.find_rel(t.text)) {
      const Token& r = next();
      const RelSymbol& rel = *sig_.find_rel(r.text);
      std::vector<std::pair<Term, std::string>> args;
      if (peek().kind == Tok::LParen) args = arg_list();
      if (args.size() != rel.arg_sorts.size())
        fail("relation '" + r.text + "' expects " + std::to_string(rel.arg_sorts.size()) + " arguments", r);
      std::vector<Term> terms;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].second != rel.arg_sorts[i])
          fail("argument " + std::to_string(i + 1) + " of '" + r.text + "' has sort " + args[i].second +
                   ", expected " + rel.arg_sorts[i],
               r);
        terms.push_back(std::move(args[i].first));
      }
      return Formula::atom(r.text, std::move(terms));
    }
    if (t.kind == Tok::Ident) {
      const Token& start = t;
      auto [lhs, ls] = term();
      if (peek().kind != Tok::Equal) fail("expected '=' after term", peek());
      next();
      auto [rhs, rs] = term();
      if (ls != rs) fail("equality between sorts " + ls + " and " + rs, start);
      return Formula::equal(std::move(lhs), std::move(rhs));
    }
    fail("expected a formula", t);
  }

  std::vector<std::pair<Term, std::string>> arg_list() {
    const Token& open = expect(Tok::LParen, "'('");
    std::vector<std::pair<Term, std::string>> out;
    if (peek().kind == Tok::RParen) fail("empty argument list", peek());
    for (;;) {
      out.push_back(term());
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      if (peek().kind != Tok::RParen) fail("unclosed parenthesis", open);
      next();
      return out;
    }
  }

  std::pair<Term, std::string> term() {
    const Token& n = expect_ident("term");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == n.text) {
        if (peek().kind == Tok::LParen) fail("variable '" + n.text + "' applied to arguments", n);
        return {Term::var(n.text), it->second};
      }
    const FuncSymbol* f = sig_.find_func(n.text);
    if (!f) fail("unknown identifier '" + n.text + "'", n);
    std::vector<std::pair<Term, std::string>> args;
    if (peek().kind == Tok::LParen) args = arg_list();
    if (args.size() != f->arity())
      fail("function '" + n.text + "' expects " + std::to_string(f->arity()) + " arguments", n);
    Term t = Term::app(n.text);
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].second != f->arg_sorts[i])
        fail("argument " + std::to_string(i + 1) + " of '" + n.text + "' has sort " + args[i].second +
                 ", expected " + f->arg_sorts[i],
             n);
      t.args.push_back(std::move(args[i].first));
    }
    return {std::move(t), f->result_sort};
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  Signature sig_;
  std::set<std::string> names_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

using VarSorts = std::map<std::string, std::string>;

std::string sort_of(const Term& t, const Signature& sig, const VarSorts& vars) {
  if (t.is_var()) {
    auto it = vars.find(t.name);
    if (it == vars.end()) throw Error("free variable '" + t.name + "'");
    return it->second;
  }
  const FuncSymbol* f = sig.find_func(t.name);
  if (!f) throw Error("unknown function '" + t.name + "'");
  if (f->arity() != t.args.size()) throw Error("arity mismatch for '" + t.name + "'");
  for (std::size_t i = 0; i < t.args.size(); ++i)
    if (sort_of(t.args[i], sig, vars) != f->arg_sorts[i])
      throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of '" + t.name + "'");
  return f->result_sort;
}

void check(const Signature& sig, const Formula& f, VarSorts& vars) {
  switch (f.kind) {
    case K::Atom: {
      const RelSymbol* r = sig.find_rel(f.name);
      if (!r) throw Error("unknown relation '" + f.name + "'");
      if (r->arg_sorts.size() != f.args.size()) throw Error("arity mismatch for '" + f.name + "'");
      for (std::size_t i = 0; i < f.args.size(); ++i)
        if (sort_of(f.args[i], sig, vars) != r->arg_sorts[i])
          throw Error("sort mismatch in argument " + std::to_string(i + 1) + " of '" + f.name + "'");
      return;
    }
    case K::Eq:
      if (f.args.size() != 2 || sort_of(f.args[0], sig, vars) != sort_of(f.args[1], sig, vars))
        throw Error("ill-sorted equality " + to_string(f));
      return;
    case K::Forall:
    case K::Exists: {
      if (!sig.has_sort(f.sort)) throw Error("unknown sort '" + f.sort + "'");
      if (sig.find_func(f.name) || sig.find_rel(f.name))
        throw Error("variable '" + f.name + "' clashes with a symbol");
      auto saved = vars.find(f.name) != vars.end() ? std::optional<std::string>(vars[f.name]) : std::nullopt;
      vars[f.name] = f.sort;
      check(sig, f.kids[0], vars);
      if (saved)
        vars[f.name] = *saved;
      else
        vars.erase(f.name);
      return;
    }
    default:
      for (const auto& k : f.kids) check(sig, k, vars);
  }
}

Formula substitute_formula(const Formula& f, const std::map<std::string, Term>& sub) {
  Formula g = f;
  for (auto& a : g.args) a = termcoding::substitute(a, sub);
  for (auto& k : g.kids) k = substitute_formula(k, sub);
  return g;
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  if (f.is_quantifier()) out.insert(f.name);
  for (const auto& k : f.kids) collect_names(k, out);
}

class Renamer {
 public:
  Renamer(const Signature& sig, const Formula& f) {
    for (const auto& s : sig.sorts) used_.insert(s);
    for (const auto& r : sig.rels) used_.insert(r.name);
    for (const auto& g : sig.funcs) used_.insert(g.name);
    collect_names(f, used_);
  }
  Formula run(const Formula& f) {
    if (!f.is_quantifier()) {
      Formula g = f;
      if (f.kind == K::Atom || f.kind == K::Eq) {
        std::map<std::string, Term> sub;
        for (const auto& [from, to] : scope_) sub[from] = Term::var(to);
        for (auto& a : g.args) a = termcoding::substitute(a, sub);
      }
      for (auto& k : g.kids) k = run(k);
      return g;
    }
    std::string name = f.name;
    if (!bound_.insert(name).second) {
      for (int k = 1;; ++k) {
        std::string cand = f.name + "_" + std::to_string(k);
        if (!used_.count(cand)) {
          name = cand;
          break;
        }
      }
      used_.insert(name);
      bound_.insert(name);
    }
    auto saved = scope_.count(f.name) ? std::optional<std::string>(scope_[f.name]) : std::nullopt;
    scope_[f.name] = name;
    Formula g = f;
    g.name = name;
    g.kids[0] = run(f.kids[0]);
    if (saved)
      scope_[f.name] = *saved;
    else
      scope_.erase(f.name);
    return g;
  }

 private:
  std::set<std::string> used_, bound_;
  std::map<std::string, std::string> scope_;
};

struct Quant {
  bool forall;
  std::string var, sort;
};

std::pair<std::vector<Quant>, Formula> pull(const Formula& f) {
  switch (f.kind) {
    case K::Atom:
    case K::Eq: return {{}, f};
    case K::Not: {
      auto [p, m] = pull(f.kids[0]);
      for (auto& q : p) q.forall = !q.forall;
      return {p, Formula::negate(std::move(m))};
    }
    case K::And:
    case K::Or:
    case K::Implies: {
      auto [p1, m1] = pull(f.kids[0]);
      auto [p2, m2] = pull(f.kids[1]);
      if (f.kind == K::Implies)
        for (auto& q : p1) q.forall = !q.forall;
      p1.insert(p1.end(), p2.begin(), p2.end());
      Formula m = f;
      m.kids = {std::move(m1), std::move(m2)};
      return {p1, std::move(m)};
    }
    case K::Forall:
    case K::Exists: {
      auto [p, m] = pull(f.kids[0]);
      p.insert(p.begin(), Quant{f.kind == K::Forall, f.name, f.sort});
      return {p, std::move(m)};
    }
  }
  return {{}, f};
}

Formula wrap(const std::vector<Quant>& prefix, Formula m) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    m = it->forall ? Formula::forall(it->var, it->sort, std::move(m))
                   : Formula::exists(it->var, it->sort, std::move(m));
  return m;
}

Formula nnf(const Formula& f, bool positive) {
  switch (f.kind) {
    case K::Atom:
    case K::Eq: return positive ? f : Formula::negate(f);
    case K::Not: return nnf(f.kids[0], !positive);
    case K::And:
    case K::Or: {
      bool and_ = (f.kind == K::And) == positive;
      Formula a = nnf(f.kids[0], positive), b = nnf(f.kids[1], positive);
      return and_ ? Formula::conj(std::move(a), std::move(b)) : Formula::disj(std::move(a), std::move(b));
    }
    case K::Implies: {
      Formula a = nnf(f.kids[0], !positive), b = nnf(f.kids[1], positive);
      return positive ? Formula::disj(std::move(a), std::move(b)) : Formula::conj(std::move(a), std::move(b));
    }
    default: throw Error("quantifier inside a matrix");
  }
}

Literal literal_of(const Formula& a, bool positive) {
  Literal l;
  l.positive = positive;
  l.is_eq = a.kind == K::Eq;
  if (!l.is_eq) l.rel = a.name;
  l.args = a.args;
  return l;
}

void add_literal(Clause& c, const Literal& l) {
  if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
}

std::vector<Clause> cnf_of(const Formula& f, std::size_t cap) {
  switch (f.kind) {
    case K::Atom:
    case K::Eq: return {{literal_of(f, true)}};
    case K::Not: return {{literal_of(f.kids[0], false)}};
    case K::And: {
      auto a = cnf_of(f.kids[0], cap);
      auto b = cnf_of(f.kids[1], cap);
      if (a.size() + b.size() > cap)
        throw ClauseLimitExceeded("CNF exceeds the clause cap of " + std::to_string(cap));
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case K::Or: {
      auto a = cnf_of(f.kids[0], cap);
      auto b = cnf_of(f.kids[1], cap);
      if (a.size() > cap / std::max<std::size_t>(b.size(), 1) || a.size() * b.size() > cap)
        throw ClauseLimitExceeded("CNF exceeds the clause cap of " + std::to_string(cap));
      std::vector<Clause> out;
      for (const auto& x : a)
        for (const auto& y : b) {
          Clause c = x;
          for (const auto& l : y) add_literal(c, l);
          out.push_back(std::move(c));
        }
      return out;
    }
    default: throw Error("formula is not in negation normal form");
  }
}

void used_symbols(const Term& t, std::set<std::string>& funcs) {
  if (t.is_app()) funcs.insert(t.name);
  for (const auto& a : t.args) used_symbols(a, funcs);
}

class NamePool {
 public:
  explicit NamePool(std::set<std::string> used) : used_(std::move(used)) {}
  std::string fresh(const std::string& stem) {
    std::string n = stem;
    for (int k = 1; used_.count(n); ++k) n = stem + "_" + std::to_string(k);
    used_.insert(n);
    return n;
  }
  void reserve(const std::string& n) { used_.insert(n); }

 private:
  std::set<std::string> used_;
};

std::set<std::string> signature_names(const Signature& sig) {
  std::set<std::string> s(sig.sorts.begin(), sig.sorts.end());
  for (const auto& r : sig.rels) s.insert(r.name);
  for (const auto& f : sig.funcs) s.insert(f.name);
  return s;
}

}  // namespace

Sentence parse(std::string_view text) { return Parser(lex(text)).run(); }

Sentence parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void check_sentence(const Signature& sig, const Formula& f) {
  VarSorts vars;
  check(sig, f, vars);
}

Formula to_prenex(const Formula& f, const Signature& sig) {
  Formula g = Renamer(sig, f).run(f);
  auto [prefix, matrix] = pull(g);
  return wrap(prefix, std::move(matrix));
}

Skolemized skolemize(const Formula& prenex, const Signature& sig) {
  Skolemized out;
  std::set<std::string> used = signature_names(sig);
  collect_names(prenex, used);
  std::vector<VarDecl> universals;
  std::map<std::string, Term> sub;
  const Formula* cur = &prenex;
  int counter = 0;
  std::vector<Quant> kept;
  while (cur->is_quantifier()) {
    if (cur->kind == K::Forall) {
      universals.push_back({cur->name, cur->sort});
      kept.push_back({true, cur->name, cur->sort});
    } else {
      std::string name;
      do name = "sk" + std::to_string(counter++);
      while (used.count(name));
      used.insert(name);
      FuncSymbol f{name, {}, cur->sort};
      Term t = Term::app(name);
      for (const auto& u : universals) {
        f.arg_sorts.push_back(u.sort);
        t.args.push_back(Term::var(u.name));
      }
      out.added.push_back(std::move(f));
      sub[cur->name] = std::move(t);
    }
    cur = &cur->kids[0];
  }
  out.formula = wrap(kept, substitute_formula(*cur, sub));
  return out;
}

Matrix strip_universals(const Formula& universal) {
  Matrix m;
  const Formula* cur = &universal;
  while (cur->is_quantifier()) {
    if (cur->kind != K::Forall) throw Error("existential quantifier in a universal sentence");
    m.vars.push_back({cur->name, cur->sort});
    cur = &cur->kids[0];
  }
  m.body = *cur;
  return m;
}

std::vector<Clause> to_cnf(const Formula& matrix, std::size_t cap) { return cnf_of(nnf(matrix, true), cap); }

EqualityExpansion expand_equality(const std::vector<Clause>& clauses, const Signature& sig,
                                  const std::vector<VarDecl>& vars) {
  EqualityExpansion out;
  VarSorts vs;
  for (const auto& v : vars) vs[v.name] = v.sort;

  std::set<std::string> eq_sorts, funcs_used, rels_used;
  for (const auto& c : clauses)
    for (const auto& l : c) {
      if (l.is_eq) eq_sorts.insert(sort_of(l.args[0], sig, vs));
      else rels_used.insert(l.rel);
      for (const auto& a : l.args) used_symbols(a, funcs_used);
    }
  if (eq_sorts.empty()) {
    out.clauses = clauses;
    return out;
  }
  // A function with an argument in an expanded sort needs E on its result sort too.
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& f : sig.funcs) {
      if (!funcs_used.count(f.name) || eq_sorts.count(f.result_sort)) continue;
      for (const auto& s : f.arg_sorts)
        if (eq_sorts.count(s)) {
          eq_sorts.insert(f.result_sort);
          grew = true;
          break;
        }
    }
  }

  std::set<std::string> used = signature_names(sig);
  for (const auto& v : vars) used.insert(v.name);
  NamePool names(used);
  std::map<std::string, std::string> erel;
  for (const auto& s : sig.sorts)
    if (eq_sorts.count(s)) {
      erel[s] = names.fresh("E_" + s);
      out.added.push_back({erel[s], {s, s}});
    }

  for (const auto& c : clauses) {
    Clause d;
    for (const auto& l : c) {
      if (!l.is_eq) {
        add_literal(d, l);
        continue;
      }
      Literal e = l;
      e.is_eq = false;
      e.rel = erel.at(sort_of(l.args[0], sig, vs));
      add_literal(d, e);
    }
    out.clauses.push_back(std::move(d));
  }

  std::map<std::string, std::vector<std::string>> pool;
  auto var = [&](const std::string& sort, std::size_t i) {
    auto& p = pool[sort];
    while (p.size() <= i) {
      p.push_back(names.fresh("v" + sort + std::to_string(p.size() + 1)));
      out.axiom_vars.push_back({p.back(), sort});
    }
    return Term::var(p[i]);
  };
  auto lit = [](bool pos, const std::string& rel, std::vector<Term> args) {
    return Literal{pos, false, rel, std::move(args)};
  };
  for (const auto& s : sig.sorts) {
    if (!eq_sorts.count(s)) continue;
    const std::string& E = erel[s];
    Term x = var(s, 0), y = var(s, 1), z = var(s, 2);
    out.axioms.push_back({lit(true, E, {x, x})});
    out.axioms.push_back({lit(false, E, {x, y}), lit(true, E, {y, x})});
    out.axioms.push_back({lit(false, E, {x, y}), lit(false, E, {y, z}), lit(true, E, {x, z})});
  }
  // Per-position congruence; the all-positions form follows by transitivity.
  auto positions = [&](const std::vector<std::string>& sorts, std::size_t i) {
    std::map<std::string, std::size_t> next;
    std::vector<Term> xs, ys;
    for (std::size_t j = 0; j < sorts.size(); ++j) xs.push_back(var(sorts[j], next[sorts[j]]++));
    ys = xs;
    ys[i] = var(sorts[i], next[sorts[i]]++);
    return std::pair{xs, ys};
  };
  for (const auto& f : sig.funcs) {
    if (!funcs_used.count(f.name)) continue;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      if (!eq_sorts.count(f.arg_sorts[i])) continue;
      auto [xs, ys] = positions(f.arg_sorts, i);
      out.axioms.push_back({lit(false, erel[f.arg_sorts[i]], {xs[i], ys[i]}),
                            lit(true, erel.at(f.result_sort), {Term::app(f.name, xs), Term::app(f.name, ys)})});
    }
  }
  for (const auto& r : sig.rels) {
    if (!rels_used.count(r.name)) continue;
    for (std::size_t i = 0; i < r.arg_sorts.size(); ++i) {
      if (!eq_sorts.count(r.arg_sorts[i])) continue;
      auto [xs, ys] = positions(r.arg_sorts, i);
      out.axioms.push_back(
          {lit(false, erel[r.arg_sorts[i]], {xs[i], ys[i]}), lit(false, r.name, xs), lit(true, r.name, ys)});
    }
  }
  return out;
}

std::string Trace::to_json() const {
  nlohmann::json j;
  j["prenex"] = prenex;
  j["skolemized"] = skolemized;
  j["skolem_functions"] = skolem_functions;
  j["cnf"] = cnf;
  j["congruence"] = congruence;
  j["clause_equations"] = clause_equations;
  return j.dump(2);
}

CompileOutput compile(const Sentence& s, const CompileOptions& opt) {
  check_sentence(s.sig, s.formula);
  CompileOutput out;
  Formula prenex = to_prenex(s.formula, s.sig);
  Skolemized sk = skolemize(prenex, s.sig);
  Matrix m = strip_universals(sk.formula);
  std::vector<Clause> cnf = to_cnf(m.body, opt.clause_cap);

  Signature ext = s.sig;
  ext.funcs.insert(ext.funcs.end(), sk.added.begin(), sk.added.end());
  EqualityExpansion ex = expand_equality(cnf, ext, m.vars);
  ext.rels.insert(ext.rels.end(), ex.added.begin(), ex.added.end());

  std::set<std::string> used = signature_names(ext);
  for (const auto& v : m.vars) used.insert(v.name);
  for (const auto& v : ex.axiom_vars) used.insert(v.name);
  NamePool names(used);

  System& sys = out.system;
  for (const auto& so : s.sig.sorts) sys.sorts.push_back({so});
  out.object_sorts = s.sig.sorts;
  const std::string B = names.fresh("Bool");
  out.bool_sort = B;
  sys.sorts.push_back({B});
  const std::string T = names.fresh("T"), F = names.fresh("F"), NOT = names.fresh("NOT"),
                    AND = names.fresh("AND"), OR = names.fresh("OR");
  sys.funcs.push_back({T, {}, B});
  sys.funcs.push_back({F, {}, B});
  sys.funcs.push_back({NOT, {B}, B});
  sys.funcs.push_back({AND, {B, B}, B});
  sys.funcs.push_back({OR, {B, B}, B});
  std::map<std::string, std::string> fsym;
  for (const auto& r : ext.rels) {
    fsym[r.name] = names.fresh("f_" + r.name);
    sys.funcs.push_back({fsym[r.name], r.arg_sorts, B});
  }
  for (const auto& f : ext.funcs) sys.funcs.push_back(f);

  const std::string p = names.fresh("p"), q = names.fresh("q");
  sys.vars.push_back({p, B});
  sys.vars.push_back({q, B});
  for (const auto& v : m.vars) sys.vars.push_back(v);
  for (const auto& v : ex.axiom_vars) sys.vars.push_back(v);

  auto c = [](const std::string& n) { return Term::app(n); };
  auto un = [](const std::string& f, Term a) { return Term::app(f, {std::move(a)}); };
  auto bin = [](const std::string& f, Term a, Term b) { return Term::app(f, {std::move(a), std::move(b)}); };
  sys.equations.push_back(Constraint::eq(un(NOT, c(T)), c(F)));
  sys.equations.push_back(Constraint::eq(un(NOT, c(F)), c(T)));
  sys.equations.push_back(Constraint::eq(bin(AND, c(T), c(T)), c(T)));
  sys.equations.push_back(Constraint::eq(bin(AND, c(T), c(F)), c(F)));
  sys.equations.push_back(Constraint::eq(bin(AND, c(F), c(T)), c(F)));
  sys.equations.push_back(Constraint::eq(bin(AND, c(F), c(F)), c(F)));
  sys.equations.push_back(Constraint::eq(bin(OR, Term::var(p), Term::var(q)),
                                         un(NOT, bin(AND, un(NOT, Term::var(p)), un(NOT, Term::var(q))))));
  out.first_clause_equation = sys.equations.size();

  auto literal_term = [&](const Literal& l) {
    Term a = Term::app(fsym.at(l.rel), l.args);
    return l.positive ? a : un(NOT, std::move(a));
  };
  auto clause_term = [&](const Clause& cl) {
    if (cl.empty()) throw Error("empty clause");
    Term t = literal_term(cl.back());
    for (std::size_t i = cl.size() - 1; i-- > 0;) t = bin(OR, literal_term(cl[i]), std::move(t));
    return t;
  };
  for (const auto* list : {&ex.clauses, &ex.axioms})
    for (const auto& cl : *list) sys.equations.push_back(Constraint::eq(clause_term(cl), c(T)));
  sys.disequalities.push_back(Constraint::neq(c(T), c(F)));
  require_valid(sys);

  Trace& tr = out.trace;
  tr.prenex = to_string(prenex);
  tr.skolemized = to_string(sk.formula);
  for (const auto& f : sk.added) {
    std::string d = f.name + " :";
    for (const auto& a : f.arg_sorts) d += " " + a;
    tr.skolem_functions.push_back(d + " -> " + f.result_sort);
  }
  for (const auto& cl : cnf) tr.cnf.push_back(to_string(cl));
  for (const auto& cl : ex.axioms) tr.congruence.push_back(to_string(cl));
  for (std::size_t i = out.first_clause_equation; i < sys.equations.size(); ++i)
    tr.clause_equations.push_back(termcoding::to_string(sys.equations[i]));
  return out;
}

DomainSizes model_sizes(const CompileOutput& out, std::uint64_t n) {
  DomainSizes d;
  for (const auto& s : out.object_sorts) d[s] = n;
  d[out.bool_sort] = 2;
  return d;
}

std::uint64_t model_target(const System& sys, const DomainSizes& sizes) {
  std::uint64_t p = 1;
  for (const auto& v : sys.vars) {
    std::uint64_t n = sizes.at(v.sort);
    if (n != 0 && p > std::numeric_limits<std::uint64_t>::max() / n) throw Error("assignment space too large");
    p *= n;
  }
  return p;
}

std::optional<Interpretation> find_model(const CompileOutput& out, std::uint64_t n, const SearchParams& params) {
  DomainSizes sizes = model_sizes(out, n);
  SearchParams p = params;
  p.mode = SearchMode::Exhaustive;
  return find_at_least(out.system, sizes, model_target(out.system, sizes), p);
}

}  // namespace termcoding::fo
