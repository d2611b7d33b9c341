#include "termcoding/examples.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "termcoding/dsl.hpp"

namespace termcoding::examples {

namespace {

const char* kSteiner = R"(sort A
fun f : A A -> A
var x y : A
eq f(x,x) = x
eq f(x,y) = f(y,x)
eq f(x,f(x,y)) = y
)";

const char* kSteinerSym = R"(sort A
fun f : A A -> A
var x y : A
eq f(x,x) = x
eq f(y,y) = y
eq f(x,y) = f(y,x)
eq f(x,f(x,y)) = y
)";

const char* kSols = R"(sort A
fun f : A A -> A
fun h1 : A A -> A
fun h2 : A A -> A
fun h3 : A A -> A
fun h4 : A A -> A
var x y : A
eq h1(f(x,y),y) = x
eq h2(x,f(x,y)) = y
eq h3(f(x,y),f(y,x)) = x
eq h4(f(x,y),f(y,x)) = y
)";

const char* kNetwork = R"(sort A
fun f : A A -> A
fun h1 : A A -> A
fun h2 : A A -> A
var x y z : A
eq f(x,y) = z
eq h1(x,z) = y
eq h2(y,z) = x
)";

const char* kUnsolvable1 = R"(sort A
fun f : A A -> A
var x y : A
eq f(f(x,y),y) = x
eq f(x,f(y,x)) = y
eq f(f(x,y),f(y,x)) = x
eq f(f(y,x),f(x,y)) = y
)";

const char* kUnsolvable2 = R"(sort A
fun f : A A -> A
var x1 y1 x2 y2 x3 y3 x4 y4 : A
eq f(f(x1,y1),y1) = x1
eq f(x2,f(y2,x2)) = y2
eq f(f(x3,y3),f(y3,x3)) = x3
eq f(f(y4,x4),f(x4,y4)) = y4
)";

const char* kC5 = R"(sort A
fun f : A A -> A
var x y z : A
eq f(f(z,x),y) = x
eq f(x,f(y,z)) = y
eq f(f(y,z),f(z,x)) = z
neq x != z
neq f(x,y) != f(y,x)
neq x != y
)";

const char* kTwoNode = R"(sort S1
sort S2
fun f1 : S2 -> S1
fun f2 : S1 -> S2
var x : S1
var y : S2
eq f1(y) = x
eq f2(x) = y
)";

const char* kRelay = R"(sort A
fun f : A A -> A
var x y z w : A
out f(x,y) f(x,z) f(w,y) f(w,z)
)";

const char* kNand = R"(sort Bool
fun c : -> Bool
fun S : Bool Bool -> Bool
var x y z : Bool
neq S(c,c) != c
out S(x,x) S(c,y) S(z,c)
)";

std::string join_args(const std::vector<std::string>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i];
  return s;
}

System steiner_t(std::int64_t t) {
  std::vector<std::string> xs;
  for (std::int64_t i = 1; i <= t; ++i) xs.push_back("x" + std::to_string(i));
  std::string text = "sort A\nfun f :";
  for (std::int64_t i = 0; i < t; ++i) text += " A";
  text += " -> A\nvar";
  for (const auto& x : xs) text += " " + x;
  text += " : A\n";
  const std::string fx = "f(" + join_args(xs) + ")";
  if (t == 2) text += "eq f(x1,x1) = x1\n";
  std::vector<std::size_t> perm(xs.size());
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<std::string> p;
    for (auto i : perm) p.push_back(xs[i]);
    text += "eq " + fx + " = f(" + join_args(p) + ")\n";
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto args = xs;
    args[i] = fx;
    text += "eq f(" + join_args(args) + ") = " + xs[i] + "\n";
  }
  for (const auto& x : xs) text += "neq " + fx + " != " + x + "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) text += "neq " + xs[i] + " != " + xs[j] + "\n";
  return parse(text);
}

void require_no_params(const std::string& name, const Params& p) {
  if (!p.empty()) throw Error("example '" + name + "' takes no parameters");
}

Interpretation table_interp(const System& sys, std::uint64_t n) {
  Interpretation I = zero_interpretation(sys, uniform_sizes(sys, n));
  return I;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {
      "steiner-quasigroup", "steiner-quasigroup-sym", "steiner-t",          "sols",
      "network-coding",     "unsolvable-v1",          "unsolvable-v2",      "c5",
      "two-node-multisort", "single-relay",           "nand-dispersion"};
  return n;
}

System gen(const std::string& name, const Params& params) {
  if (name == "steiner-t") {
    for (const auto& [k, v] : params)
      if (k != "t") throw Error("steiner-t has no parameter '" + k + "'");
    std::int64_t t = params.count("t") ? params.at("t") : 2;
    if (t < 2) throw Error("steiner-t requires t >= 2");
    if (t > 6) throw Error("steiner-t supports t <= 6");
    return steiner_t(t);
  }
  static const std::map<std::string, const char*> fixed = {
      {"steiner-quasigroup", kSteiner}, {"steiner-quasigroup-sym", kSteinerSym},
      {"sols", kSols},                  {"network-coding", kNetwork},
      {"unsolvable-v1", kUnsolvable1},  {"unsolvable-v2", kUnsolvable2},
      {"c5", kC5},                      {"two-node-multisort", kTwoNode},
      {"single-relay", kRelay},         {"nand-dispersion", kNand}};
  auto it = fixed.find(name);
  if (it == fixed.end()) throw Error("unknown example '" + name + "'");
  require_no_params(name, params);
  return parse(it->second);
}

System c5_core() {
  Diversified d = normalize_diversify(gen("c5"));
  System core;
  core.sorts = d.system.sorts;
  core.equations.assign(d.system.equations.begin(), d.system.equations.begin() + 5);
  std::set<std::string> used_vars, used_funcs;
  for (const auto& e : core.equations) {
    used_funcs.insert(e.lhs.name);
    for (const auto& a : e.lhs.args) used_vars.insert(a.name);
    used_vars.insert(e.rhs.name);
  }
  for (const auto& v : d.system.vars)
    if (used_vars.count(v.name)) core.vars.push_back(v);
  for (const auto& f : d.system.funcs)
    if (used_funcs.count(f.name)) core.funcs.push_back(f);
  require_valid(core);
  return core;
}

Interpretation c5_core_witness(std::uint64_t m) {
  if (m < 1) throw Error("m must be positive");
  System core = c5_core();
  Interpretation I = table_interp(core, m * m);
  const std::uint64_t n = m * m;
  for (auto& [name, table] : I.tables)
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b) table[a * n + b] = static_cast<std::uint32_t>((a % m) * m + b / m);
  return I;
}

Interpretation steiner_n4_witness() {
  static const std::uint32_t t[4][4] = {{1, 1, 1, 1}, {1, 2, 4, 3}, {1, 4, 3, 2}, {1, 3, 2, 4}};
  Interpretation I = table_interp(gen("steiner-quasigroup"), 4);
  auto& f = I.tables.at("f");
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) f[a * 4 + b] = t[a][b] - 1;
  return I;
}

std::vector<std::vector<std::uint32_t>> sols_order4() {
  return {{0, 2, 3, 1}, {3, 1, 0, 2}, {1, 3, 2, 0}, {2, 0, 1, 3}};
}

Interpretation sols_witness(const std::vector<std::vector<std::uint32_t>>& L) {
  const std::size_t n = L.size();
  for (const auto& row : L)
    if (row.size() != n) throw Error("square is not n by n");
  Interpretation I = table_interp(gen("sols"), n);
  auto& f = I.tables.at("f");
  auto& h1 = I.tables.at("h1");
  auto& h2 = I.tables.at("h2");
  auto& h3 = I.tables.at("h3");
  auto& h4 = I.tables.at("h4");
  std::vector<char> s1(n * n), s2(n * n), s3(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t v = L[x][y], w = L[y][x];
      if (v >= n) throw Error("square entry out of range");
      f[x * n + y] = static_cast<std::uint32_t>(v);
      if (s1[v * n + y]++ || s2[x * n + v]++) throw Error("square is not Latin");
      if (s3[v * n + w]++) throw Error("square is not self-orthogonal");
      h1[v * n + y] = static_cast<std::uint32_t>(x);
      h2[x * n + v] = static_cast<std::uint32_t>(y);
      h3[v * n + w] = static_cast<std::uint32_t>(x);
      h4[v * n + w] = static_cast<std::uint32_t>(y);
    }
  return I;
}

Interpretation network_coding_witness(std::uint64_t n) {
  Interpretation I = table_interp(gen("network-coding"), n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) {
      I.tables.at("f")[a * n + b] = static_cast<std::uint32_t>((a + b) % n);
      I.tables.at("h1")[a * n + b] = static_cast<std::uint32_t>((b + n - a) % n);
      I.tables.at("h2")[a * n + b] = static_cast<std::uint32_t>((b + n - a) % n);
    }
  return I;
}

Interpretation projection_witness(const System& flat, const std::map<std::string, std::string>& source,
                                  std::uint64_t n) {
  if (!is_flat(flat)) throw Error("projection witness needs a flat system");
  Interpretation I = table_interp(flat, n);
  auto src = [&](const std::string& v) {
    auto it = source.find(v);
    return it == source.end() ? v : it->second;
  };
  for (const auto& e : flat.equations) {
    const auto& args = e.lhs.args;
    std::size_t j = 0;
    while (j < args.size() && src(args[j].name) != src(e.rhs.name)) ++j;
    if (j == args.size()) throw Error("no argument copies the defined variable in " + to_string(e));
    const FuncSymbol& f = *flat.find_func(e.lhs.name);
    auto& table = I.tables.at(f.name);
    for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
      std::uint64_t rest = idx;
      std::uint32_t val = 0;
      for (std::size_t k = args.size(); k-- > 0;) {
        std::uint32_t digit = static_cast<std::uint32_t>(rest % n);
        rest /= n;
        if (k == j) val = digit;
      }
      table[idx] = val;
    }
  }
  return I;
}

Interpretation unsolvable_projection_witness(const Diversified& d, std::uint64_t n) {
  // The aux variables stand for f(x,y) and f(y,x), in that order.
  std::map<std::string, std::string> source;
  for (const auto& e : d.system.equations) {
    const auto& a = e.lhs.args;
    if (a.size() == 2 && a[0].name == "x" && a[1].name == "y") source[e.rhs.name] = "x";
    if (a.size() == 2 && a[0].name == "y" && a[1].name == "x") source[e.rhs.name] = "y";
  }
  return projection_witness(d.system, source, n);
}

Interpretation nand_witness() {
  Interpretation I = table_interp(gen("nand-dispersion"), 2);
  I.tables.at("c") = {1};
  I.tables.at("S") = {1, 1, 1, 0};
  return I;
}

}  // namespace termcoding::examples
