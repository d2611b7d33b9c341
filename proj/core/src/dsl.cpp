#include "termcoding/dsl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace termcoding {

namespace {

enum class Tok { Ident, Colon, Arrow, LParen, RParen, Comma, Eq, Neq, End };

struct Token {
  Tok kind;
  std::string text;
  int col;  // 1-based
  int len;
};

// `_` followed by one lowercase letter and digits: the names normalize and
// reduce generate, accepted so their output parses back.
bool generated_name(std::string_view id) {
  if (id.size() < 3 || !std::islower(static_cast<unsigned char>(id[1]))) return false;
  for (std::size_t k = 2; k < id.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(id[k]))) return false;
  return true;
}

class Lexer {
 public:
  Lexer(std::string_view line, int lineno) : line_(line), lineno_(lineno) { run(); }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  void run() {
    std::size_t i = 0;
    while (i < line_.size()) {
      char c = line_[i];
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      int col = static_cast<int>(i) + 1;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < line_.size() &&
               (std::isalnum(static_cast<unsigned char>(line_[j])) || line_[j] == '_'))
          ++j;
        std::string_view id = line_.substr(i, j - i);
        if (c == '_' && !generated_name(id))
          throw ParseError("identifiers must start with a letter", {lineno_, col, static_cast<int>(j - i)});
        toks_.push_back({Tok::Ident, std::string(id), col, static_cast<int>(j - i)});
        i = j;
        continue;
      }
      if (c == '-' && i + 1 < line_.size() && line_[i + 1] == '>') {
        toks_.push_back({Tok::Arrow, "->", col, 2});
        i += 2;
        continue;
      }
      if (c == '!' && i + 1 < line_.size() && line_[i + 1] == '=') {
        toks_.push_back({Tok::Neq, "!=", col, 2});
        i += 2;
        continue;
      }
      Tok k;
      switch (c) {
        case ':': k = Tok::Colon; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case '=': k = Tok::Eq; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", {lineno_, col, 1});
      }
      toks_.push_back({k, std::string(1, c), col, 1});
      ++i;
    }
    int endcol = static_cast<int>(line_.size()) + 1;
    toks_.push_back({Tok::End, "", endcol, 1});
  }

  std::string_view line_;
  int lineno_;
  std::vector<Token> toks_;
};

class LineParser {
 public:
  LineParser(const std::vector<Token>& toks, int lineno) : t_(toks), line_(lineno) {}

  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(const std::string& msg, const Token& tok) const {
    throw ParseError(msg, {line_, tok.col, std::max(1, tok.len)});
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what, peek());
    return next();
  }

  std::string ident(const char* what) { return expect(Tok::Ident, what).text; }

  // Bare identifiers are parsed as variables and resolved against constants later.
  Term term() {
    const Token& id = expect(Tok::Ident, "term");
    if (!at(Tok::LParen)) return Term::var(id.text);
    const Token& open = next();
    Term t = Term::app(id.text);
    if (at(Tok::RParen)) fail("empty argument list; write constants without parentheses", peek());
    for (;;) {
      if (at(Tok::End)) fail("unclosed parenthesis", open);
      t.args.push_back(term());
      if (at(Tok::Comma)) {
        next();
        continue;
      }
      if (at(Tok::RParen)) {
        next();
        break;
      }
      if (at(Tok::End)) fail("unclosed parenthesis", open);
      fail("expected ',' or ')'", peek());
    }
    return t;
  }

  void end() {
    if (!at(Tok::End)) fail("unexpected trailing input", peek());
  }

 private:
  const std::vector<Token>& t_;
  int line_;
  std::size_t pos_ = 0;
};

void resolve_constants(Term& t, const std::set<std::string>& constants) {
  if (t.is_var()) {
    if (constants.count(t.name)) t.kind = Term::Kind::App;
    return;
  }
  for (auto& a : t.args) resolve_constants(a, constants);
}

}  // namespace

System parse(std::string_view text) {
  System sys;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++lineno;
    Lexer lx(line, lineno);
    LineParser p(lx.tokens(), lineno);
    if (!p.at(Tok::End)) {
      const Token& kw = p.expect(Tok::Ident, "declaration keyword");
      if (kw.text == "sort") {
        sys.sorts.push_back({p.ident("sort name")});
        p.end();
      } else if (kw.text == "fun") {
        FuncSymbol f;
        f.name = p.ident("function name");
        p.expect(Tok::Colon, "':'");
        while (p.at(Tok::Ident)) f.arg_sorts.push_back(p.next().text);
        p.expect(Tok::Arrow, "'->'");
        f.result_sort = p.ident("result sort");
        p.end();
        sys.funcs.push_back(std::move(f));
      } else if (kw.text == "var") {
        std::vector<std::string> names;
        names.push_back(p.ident("variable name"));
        while (p.at(Tok::Ident)) names.push_back(p.next().text);
        p.expect(Tok::Colon, "':'");
        std::string sort = p.ident("sort name");
        p.end();
        for (auto& n : names) sys.vars.push_back({std::move(n), sort});
      } else if (kw.text == "eq") {
        Term l = p.term();
        p.expect(Tok::Eq, "'='");
        Term r = p.term();
        p.end();
        sys.equations.push_back(Constraint::eq(std::move(l), std::move(r)));
      } else if (kw.text == "neq") {
        Term l = p.term();
        p.expect(Tok::Neq, "'!='");
        Term r = p.term();
        p.end();
        sys.disequalities.push_back(Constraint::neq(std::move(l), std::move(r)));
      } else if (kw.text == "out") {
        sys.outputs.push_back(p.term());
        while (!p.at(Tok::End)) sys.outputs.push_back(p.term());
      } else {
        p.fail("unknown declaration '" + kw.text + "'", kw);
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }

  std::set<std::string> constants;
  for (const auto& f : sys.funcs)
    if (f.arity() == 0) constants.insert(f.name);
  for (auto& c : sys.equations) {
    resolve_constants(c.lhs, constants);
    resolve_constants(c.rhs, constants);
  }
  for (auto& c : sys.disequalities) {
    resolve_constants(c.lhs, constants);
    resolve_constants(c.rhs, constants);
  }
  for (auto& t : sys.outputs) resolve_constants(t, constants);

  require_valid(sys);
  return sys;
}

std::string render(const System& sys) {
  std::ostringstream os;
  for (const auto& s : sys.sorts) os << "sort " << s.name << '\n';
  for (const auto& f : sys.funcs) {
    os << "fun " << f.name << " :";
    for (const auto& a : f.arg_sorts) os << ' ' << a;
    os << " -> " << f.result_sort << '\n';
  }
  for (std::size_t i = 0; i < sys.vars.size();) {
    std::size_t j = i;
    os << "var";
    while (j < sys.vars.size() && sys.vars[j].sort == sys.vars[i].sort) os << ' ' << sys.vars[j++].name;
    os << " : " << sys.vars[i].sort << '\n';
    i = j;
  }
  for (const auto& c : sys.equations) os << "eq " << to_string(c) << '\n';
  for (const auto& c : sys.disequalities) os << "neq " << to_string(c) << '\n';
  if (!sys.outputs.empty()) {
    os << "out";
    for (const auto& t : sys.outputs) os << ' ' << to_string(t);
    os << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
}

System parse_file(const std::string& path) { return parse(read_file(path)); }

}  // namespace termcoding
