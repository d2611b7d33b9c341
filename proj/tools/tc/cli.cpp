#include "tc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "termcoding/depgraph.hpp"
#include "termcoding/digest.hpp"
#include "termcoding/dispersion.hpp"
#include "termcoding/dsl.hpp"
#include "termcoding/entropy.hpp"
#include "termcoding/examples.hpp"
#include "termcoding/fo.hpp"
#include "termcoding/normalize.hpp"
#include "termcoding/search.hpp"
#include "termcoding/semantics.hpp"
#include "termcoding/witness_io.hpp"

#ifndef TC_VERSION
#define TC_VERSION "0.0.0"
#endif

namespace tc {

namespace {

namespace t = termcoding;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerifyFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string rational(const mpq_class& q) {
  mpz_class num = q.get_num(), den = q.get_den();
  return den == 1 ? num.get_str() : num.get_str() + "/" + den.get_str();
}

struct Context {
  bool json_mode = false;
  unsigned threads = 0;
  std::ostream* out = nullptr;
  std::string command;
  std::string input_digest;
  json params = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(json result, const std::string& human) const {
    if (!json_mode) {
      *out << human;
      return;
    }
    json r;
    r["command"] = command;
    r["version"] = TC_VERSION;
    r["input_digest"] = input_digest.empty() ? json(nullptr) : json(input_digest);
    r["params"] = params;
    r["result"] = std::move(result);
    r["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    *out << r.dump(2) << "\n";
  }
};

std::string read_input(const std::string& path, Context& ctx) {
  if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
  std::string text = t::read_file(path);
  ctx.input_digest = t::sha256_hex(text);
  return text;
}

t::System load_system(const std::string& path, Context& ctx) { return t::parse(read_input(path, ctx)); }

void write_or_print(const std::string& path, const std::string& text, const Context& ctx, json& result) {
  if (path.empty()) {
    if (ctx.json_mode)
      result["text"] = text;
    else
      *ctx.out << text;
  } else {
    t::write_file(path, text);
    result["written"] = path;
  }
}

std::uint64_t parse_count(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw UsageError("invalid " + what + ": '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + ": '" + s + "'");
  }
}

t::DomainSizes parse_sizes(const t::System& sys, const std::string& text) {
  if (text.find('=') == std::string::npos) {
    std::uint64_t n = parse_count(text, "size");
    if (n == 0) throw UsageError("sizes must be positive");
    return t::uniform_sizes(sys, n);
  }
  t::DomainSizes sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected SORT=N in --sizes, got '" + item + "'");
    std::string sort = item.substr(0, eq);
    if (!sys.has_sort(sort)) throw UsageError("unknown sort '" + sort + "' in --sizes");
    std::uint64_t n = parse_count(item.substr(eq + 1), "size");
    if (n == 0) throw UsageError("sizes must be positive");
    sizes[sort] = n;
  }
  for (const auto& s : sys.sorts)
    if (!sizes.count(s.name)) throw UsageError("--sizes gives no size for sort '" + s.name + "'");
  return sizes;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(item, "list entry"));
  return out;
}

json sizes_json(const t::DomainSizes& s) {
  json j = json::object();
  for (const auto& [k, v] : s) j[k] = v;
  return j;
}

struct SearchOpts {
  std::string mode = "exhaustive";
  std::uint64_t seed = 1;
  std::uint64_t steps = 200000;
  unsigned restarts = 4;

  t::SearchParams params(const Context& ctx) const {
    t::SearchParams p;
    if (mode == "exhaustive")
      p.mode = t::SearchMode::Exhaustive;
    else if (mode == "anneal")
      p.mode = t::SearchMode::Anneal;
    else
      throw UsageError("unknown mode '" + mode + "' (expected exhaustive or anneal)");
    p.seed = seed;
    p.steps = steps;
    p.restarts = restarts;
    p.threads = ctx.threads;
    return p;
  }
  void record(json& j) const {
    j["mode"] = mode;
    if (mode == "anneal") {
      j["seed"] = seed;
      j["steps"] = steps;
      j["restarts"] = restarts;
    }
  }
};

void add_search_options(CLI::App* c, SearchOpts& s) {
  c->add_option("--mode", s.mode, "exhaustive or anneal")->capture_default_str();
  c->add_option("--seed", s.seed, "anneal seed")->capture_default_str();
  c->add_option("--steps", s.steps, "anneal steps per restart")->capture_default_str();
  c->add_option("--restarts", s.restarts, "anneal restarts")->capture_default_str();
}

// ------------------------------------------------------------ reproduce

struct Row {
  std::vector<std::string> cells;
};

std::string csv(const std::vector<std::string>& header, const std::vector<Row>& rows) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    s += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r.cells);
  return s;
}

std::uint64_t ipow(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

std::vector<Row> table_rows(const t::System& sys, std::uint64_t from, std::uint64_t to, unsigned k,
                            const t::SearchParams& p) {
  std::vector<Row> rows;
  for (std::uint64_t n = from; n <= to; ++n) {
    auto r = t::maximize(sys, t::uniform_sizes(sys, n), p);
    std::uint64_t ideal = ipow(n, k);
    rows.push_back({{std::to_string(n), std::to_string(r.best_count), std::to_string(ideal),
                     fixed(static_cast<double>(r.best_count) / static_cast<double>(ideal), 3)}});
  }
  return rows;
}

std::string reproduce(const std::string& what, std::optional<std::uint64_t> max_n, const t::SearchParams& p) {
  namespace ex = t::examples;
  if (what == "table1")
    return csv({"n", "maximum", "ideal", "ratio"}, table_rows(ex::gen("steiner-quasigroup"), 1, max_n.value_or(3), 2, p));
  if (what == "table2")
    return csv({"n", "maximum", "ideal", "ratio"}, table_rows(ex::gen("unsolvable-v1"), 2, max_n.value_or(3), 2, p));
  if (what == "table3")
    return csv({"n", "maximum", "ideal", "ratio"}, table_rows(ex::gen("unsolvable-v2"), 2, max_n.value_or(2), 8, p));
  if (what == "c5") {
    t::Diversified d = t::normalize_diversify(ex::gen("c5"));
    t::BoundResult b = t::shannon_bound(t::build_graph(d.system), t::uniform_sizes(d.system, 2));
    t::System core = ex::c5_core();
    std::vector<Row> rows;
    for (std::uint64_t m = 1; m * m <= max_n.value_or(16); ++m) {
      auto rep = t::count_solutions(core, ex::c5_core_witness(m), 0);
      rows.push_back({{std::to_string(m * m), std::to_string(rep.count), std::to_string(ipow(m, 5)),
                       rational(b.normalised_bound)}});
    }
    return csv({"n", "witness_count", "ideal", "bound"}, rows);
  }
  if (what == "nand") {
    t::System sys = ex::gen("nand-dispersion");
    t::Interpretation I = ex::nand_witness();
    std::vector<Row> rows;
    for (std::uint32_t code = 0; code < 16; ++code) {
      std::vector<std::uint32_t> s = {code >> 3 & 1u, code >> 2 & 1u, code >> 1 & 1u, code & 1u};
      if (s[3] != 0) continue;  // S(c,c) != c with c = 1
      I.tables.at("S") = s;
      std::uint64_t img = t::dispersion_image(sys, I);
      bool nand = s == std::vector<std::uint32_t>{1, 1, 1, 0};
      rows.push_back({{std::to_string(s[0]), std::to_string(s[1]), std::to_string(s[2]), std::to_string(s[3]),
                       std::to_string(img), nand ? "1" : "0"}});
    }
    return csv({"S00", "S01", "S10", "S11", "image", "nand"}, rows);
  }
  throw UsageError("unknown table '" + what + "' (expected table1, table2, table3, c5 or nand)");
}

json csv_json(const std::string& text) {
  json rows = json::array();
  std::stringstream ss(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      continue;
    }
    json r = json::object();
    for (std::size_t i = 0; i < cells.size() && i < header.size(); ++i) r[header[i]] = cells[i];
    rows.push_back(r);
  }
  return rows;
}

void report_error(const Context& ctx, std::ostream& err, const std::string& kind, const std::string& msg,
                  int code) {
  if (ctx.json_mode) {
    json j;
    j["error"] = kind;
    j["message"] = msg;
    j["exit_code"] = code;
    err << j.dump() << "\n";
  } else {
    err << "tc: " << kind << " error: " << msg << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;

  CLI::App app{"Term coding toolkit", "tc"};
  app.set_version_flag("--version", TC_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", ctx.json_mode, "machine-readable output");
  app.add_option("--threads", ctx.threads, "search worker threads (0: all cores)");

  std::string file, output, sizes_spec, dot, witness, trace, name, check;
  std::optional<std::uint64_t> claim, d, t_param, max_n;
  bool with_projection = false;
  SearchOpts sopt;

  auto* c_parse = app.add_subcommand("parse", "validate and print the canonical form");
  c_parse->add_option("file", file)->required();

  auto* c_norm = app.add_subcommand("normalize", "flatten nested terms into aux variables");
  c_norm->add_option("file", file)->required();
  c_norm->add_option("-o,--output", output);

  auto* c_div = app.add_subcommand("diversify", "normalize, then give each equation its own symbol");
  c_div->add_option("file", file)->required();
  c_div->add_option("-o,--output", output);

  auto* c_graph = app.add_subcommand("graph", "dependency graph of the diversified system");
  c_graph->add_option("file", file)->required();
  c_graph->add_option("--dot", dot, "write Graphviz output here");

  auto* c_search = app.add_subcommand("search", "maximise the solution count (or image size)");
  c_search->add_option("file", file)->required();
  c_search->add_option("--sizes", sizes_spec, "S=n[,S2=m] or a single n for every sort")->required();
  c_search->add_option("--witness", witness, "write the best interpretation as JSON");
  add_search_options(c_search, sopt);

  auto* c_bound = app.add_subcommand("bound", "Shannon entropy bound of the diversified system");
  c_bound->add_option("file", file)->required();
  c_bound->add_option("--sizes", sizes_spec, "S=n[,S2=m]; uniform sizes by default");

  auto* c_exp = app.add_subcommand("exponent", "integer dispersion exponent");
  c_exp->add_option("file", file)->required();
  c_exp->add_option("--check", check, "comma-separated n values for the growth oracle");

  auto* c_dec = app.add_subcommand("decide", "is the dispersion exponent at least d+1");
  c_dec->add_option("file", file)->required();
  c_dec->add_option("--d", d)->required();

  auto* c_red = app.add_subcommand("reduce", "dispersion system to term coding with projection");
  c_red->add_option("file", file)->required();
  c_red->add_option("-o,--output", output);
  c_red->add_flag("--with-projection", with_projection, "declare the projection variables as outputs");

  auto* c_fo = app.add_subcommand("compile-fo", "compile a first-order sentence");
  c_fo->add_option("file", file)->required();
  c_fo->add_option("-o,--output", output);
  c_fo->add_option("--trace", trace, "write the compilation trace as JSON");

  auto* c_gen = app.add_subcommand("gen", "emit a named example system");
  c_gen->add_option("name", name)->required();
  c_gen->add_option("--t", t_param, "steiner-t parameter");
  c_gen->add_option("-o,--output", output);

  auto* c_ver = app.add_subcommand("verify", "recount a witness");
  c_ver->add_option("file", file)->required();
  c_ver->add_option("--witness", witness)->required();
  c_ver->add_option("--claim", claim, "expected count (defaults to the witness's own)");

  auto* c_rep = app.add_subcommand("reproduce", "CSV tables for the worked examples");
  c_rep->add_option("table", name, "table1, table2, table3, c5 or nand")->required();
  c_rep->add_option("--max-n", max_n);
  add_search_options(c_rep, sopt);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    report_error(ctx, err, "usage", e.what(), kUsage);
    return kUsage;
  }

  try {
    json result = json::object();
    if (*c_parse) {
      ctx.command = "parse";
      t::System sys = load_system(file, ctx);
      std::string text = t::render(sys);
      result["canonical"] = text;
      ctx.emit(result, text);
    } else if (*c_norm) {
      ctx.command = "normalize";
      t::Normalized n = t::normalize(load_system(file, ctx));
      std::string text = t::render(n.system);
      json aux = json::object();
      for (const auto& [v, term] : n.map.aux) aux[v] = t::to_string(term);
      result["aux"] = aux;
      json merged = json::object();
      for (const auto& [a, b] : n.map.merged) merged[a] = b;
      result["merged"] = merged;
      write_or_print(output, text, ctx, result);
      ctx.emit(result, "");
    } else if (*c_div) {
      ctx.command = "diversify";
      t::Diversified dv = t::normalize_diversify(load_system(file, ctx));
      std::string text = t::render(dv.system);
      json syms = json::object();
      for (const auto& [s, o] : dv.symbols) syms[s] = {{"original", o.original}, {"equation", o.equation}};
      result["symbols"] = syms;
      write_or_print(output, text, ctx, result);
      ctx.emit(result, "");
    } else if (*c_graph) {
      ctx.command = "graph";
      t::Diversified dv = t::normalize_diversify(load_system(file, ctx));
      t::DepGraph g = t::build_graph(dv.system);
      std::string text = t::to_dot(g);
      result["vertices"] = g.vertices.size();
      result["edges"] = g.edges.size();
      if (dot.empty()) {
        if (ctx.json_mode) result["dot"] = text;
        ctx.emit(result, text);
      } else {
        t::write_file(dot, text);
        result["written"] = dot;
        ctx.emit(result, "wrote " + dot + " (" + std::to_string(g.vertices.size()) + " vertices, " +
                             std::to_string(g.edges.size()) + " edges)\n");
      }
    } else if (*c_search) {
      ctx.command = "search";
      t::System sys = load_system(file, ctx);
      t::DomainSizes sizes = parse_sizes(sys, sizes_spec);
      t::SearchParams p = sopt.params(ctx);
      ctx.params["sizes"] = sizes_json(sizes);
      sopt.record(ctx.params);
      t::SearchResult r = t::maximize(sys, sizes, p);
      result["count"] = r.best_count;
      result["exact"] = r.exhausted;
      result["explored"] = r.explored;
      result["witness_digest"] = t::interpretation_digest(sys, r.witness);
      if (!witness.empty()) {
        t::write_witness(witness, sys, r.witness, r.best_count);
        result["witness"] = witness;
      }
      std::string human = "count " + std::to_string(r.best_count) + "\n" +
                          (r.exhausted ? "exact maximum\n" : "lower bound (search not exhaustive)\n");
      if (!witness.empty()) human += "witness written to " + witness + "\n";
      ctx.emit(result, human);
    } else if (*c_bound) {
      ctx.command = "bound";
      t::System sys = load_system(file, ctx);
      t::Diversified dv = t::normalize_diversify(sys);
      t::DomainSizes sizes = sizes_spec.empty() ? t::uniform_sizes(dv.system, 2) : parse_sizes(sys, sizes_spec);
      if (!sizes_spec.empty()) ctx.params["sizes"] = sizes_json(sizes);
      t::BoundResult b = t::shannon_bound(t::build_graph(dv.system), sizes);
      result["bound"] = rational(b.normalised_bound);
      result["bound_decimal"] = b.normalised_bound.get_d();
      result["joint_units"] = rational(b.max_joint_units);
      result["unit_base"] = b.unit_base;
      result["joint_bits"] = b.max_joint_entropy_bits();
      result["certificate"] = json::parse(b.certificate_json());
      std::string human = rational(b.normalised_bound) + " (" + fixed(b.normalised_bound.get_d(), 6) + ")\n";
      if (!sizes_spec.empty())
        human += "joint entropy " + rational(b.max_joint_units) + " x log " + std::to_string(b.unit_base) + "\n";
      ctx.emit(result, human);
    } else if (*c_exp) {
      ctx.command = "exponent";
      t::System sys = load_system(file, ctx);
      t::ExponentResult r;
      if (check.empty()) {
        r = t::integer_exponent(sys);
      } else {
        auto ns = parse_list(check);
        ctx.params["check"] = ns;
        t::SearchParams p;
        p.threads = ctx.threads;
        r = t::integer_exponent_checked(sys, ns, p);
        result["oracle_consistent"] = r.oracle_checked;
      }
      result["D"] = r.D;
      result["cut"] = r.cut;
      std::string human = "D=" + std::to_string(r.D) + "\ncut " + r.cut_json() + "\n";
      if (!check.empty()) human += std::string("growth oracle ") + (r.oracle_checked ? "consistent" : "INCONSISTENT") + "\n";
      ctx.emit(result, human);
    } else if (*c_dec) {
      ctx.command = "decide";
      t::System sys = load_system(file, ctx);
      ctx.params["d"] = *d;
      t::ExponentResult r = t::integer_exponent(sys);
      bool ans = r.D >= *d + 1;
      result["answer"] = ans;
      result["D"] = r.D;
      ctx.emit(result, std::string(ans ? "true" : "false") + " (D=" + std::to_string(r.D) + ")\n");
    } else if (*c_red) {
      ctx.command = "reduce";
      t::Reduction red = t::reduce_to_termcoding(load_system(file, ctx));
      t::System s = with_projection ? t::projection_system(red) : red.system;
      result["projection"] = red.projection;
      write_or_print(output, t::render(s), ctx, result);
      std::string human;
      if (!output.empty()) {
        human = "projection";
        for (const auto& y : red.projection) human += " " + y;
        human += "\n";
      }
      ctx.emit(result, human);
    } else if (*c_fo) {
      ctx.command = "compile-fo";
      t::fo::Sentence s = t::fo::parse(read_input(file, ctx));
      t::fo::CompileOutput co = t::fo::compile(s);
      if (!trace.empty()) t::write_file(trace, co.trace.to_json() + "\n");
      result["equations"] = co.system.equations.size();
      result["clause_equations"] = co.system.equations.size() - co.first_clause_equation;
      write_or_print(output, t::render(co.system), ctx, result);
      std::string human;
      if (!output.empty())
        human = "wrote " + output + " (" + std::to_string(co.system.equations.size() - co.first_clause_equation) +
                " clause equations)\n";
      ctx.emit(result, human);
    } else if (*c_gen) {
      ctx.command = "gen";
      t::examples::Params ps;
      if (t_param) ps["t"] = static_cast<std::int64_t>(*t_param);
      ctx.params["name"] = name;
      if (t_param) ctx.params["t"] = *t_param;
      t::System sys = t::examples::gen(name, ps);
      write_or_print(output, t::render(sys), ctx, result);
      ctx.emit(result, "");
    } else if (*c_ver) {
      ctx.command = "verify";
      t::System sys = load_system(file, ctx);
      if (!std::filesystem::exists(witness)) throw UsageError("no such file: " + witness);
      t::Witness w = t::read_witness(witness, sys);
      std::uint64_t expected = claim.value_or(w.count);
      ctx.params["claim"] = expected;
      if (w.system_digest != t::system_digest(sys))
        throw VerifyFailed("witness digest does not match the system");
      std::uint64_t got = t::objective_value(sys, w.interp);
      result["count"] = got;
      result["claim"] = expected;
      result["ok"] = got == expected;
      if (got != expected)
        throw VerifyFailed("counted " + std::to_string(got) + ", claimed " + std::to_string(expected));
      ctx.emit(result, "ok: " + std::to_string(got) + "\n");
    } else if (*c_rep) {
      ctx.command = "reproduce";
      ctx.params["table"] = name;
      if (max_n) ctx.params["max_n"] = *max_n;
      sopt.record(ctx.params);
      std::string text = reproduce(name, max_n, sopt.params(ctx));
      result["csv"] = text;
      result["rows"] = csv_json(text);
      ctx.emit(result, text);
    }
    return kOk;
  } catch (const UsageError& e) {
    report_error(ctx, err, "usage", e.what(), kUsage);
    return kUsage;
  } catch (const VerifyFailed& e) {
    report_error(ctx, err, "verification", e.what(), kVerifyFailed);
    return kVerifyFailed;
  } catch (const t::BudgetExceeded& e) {
    report_error(ctx, err, "budget", e.what(), kBudget);
    return kBudget;
  } catch (const t::Error& e) {
    report_error(ctx, err, "validation", e.what(), kValidation);
    return kValidation;
  } catch (const std::exception& e) {
    report_error(ctx, err, "internal", e.what(), kValidation);
    return kValidation;
  }
}

}  // namespace tc
