#include "termcoding/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "termcoding/depgraph.hpp"
#include "termcoding/detail/compiled.hpp"
#include "termcoding/entropy.hpp"
#include "termcoding/normalize.hpp"

namespace termcoding {

using detail::CompiledSystem;
using detail::Objective;

std::uint64_t default_budget() {
  if (const char* env = std::getenv("TC_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1ull << 34;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

std::vector<std::int64_t> initial_partial(const System& sys, const DomainSizes& sizes,
                                          const CompiledSystem& cs, const SearchParams& p) {
  std::vector<std::int64_t> partial(cs.n_entries, detail::kUnknown);
  for (const auto& [name, table] : p.pinned) {
    auto fi = sys.func_index(name);
    if (!fi) throw Error("pinned table for unknown function '" + name + "'");
    const auto& f = cs.funcs[*fi];
    if (table.size() != f.size) throw Error("pinned table for '" + name + "' has the wrong size");
    for (std::uint32_t i = 0; i < f.size; ++i) {
      if (table[i] >= f.result_dom) throw Error("pinned table for '" + name + "' is out of range");
      partial[f.offset + i] = table[i];
    }
  }
  (void)sizes;
  return partial;
}

Interpretation to_interp(const System& sys, const DomainSizes& sizes, const std::vector<std::int64_t>& t) {
  std::vector<std::uint32_t> flat(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) flat[i] = t[i] < 0 ? 0 : static_cast<std::uint32_t>(t[i]);
  return unflatten_tables(sys, sizes, flat);
}

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  std::uint64_t budget = 0;
  std::atomic<std::int64_t> best{-1};
  std::atomic<std::size_t> ceiling_task{std::numeric_limits<std::size_t>::max()};
  std::optional<std::uint64_t> ceiling;
  std::int64_t floor = -1;  // only leaves reaching at least floor are of interest
};

class BranchAndBound {
 public:
  BranchAndBound(const CompiledSystem& cs, Objective obj, Shared& sh, std::size_t task)
      : cs_(cs), pe_(cs, obj), sh_(sh), task_(task) {}

  void run(std::vector<std::int64_t> partial, std::uint32_t pos) {
    partial_ = std::move(partial);
    dfs(pos);
  }

  std::int64_t best() const { return best_; }
  const std::vector<std::int64_t>& best_table() const { return best_table_; }
  bool hit_ceiling() const { return hit_ceiling_; }

  // Evaluates the node, fixes unread entries to 0 and returns the first
  // entry that still needs branching (or -1 if the table is complete).
  std::int64_t prepare(std::vector<std::int64_t>& partial, std::uint32_t pos, std::uint64_t& ub,
                       std::vector<std::uint32_t>& fixed) {
    ub = pe_.bound(partial);
    std::int64_t first = -1;
    for (std::uint32_t e = pos; e < cs_.n_entries; ++e) {
      if (partial[e] >= 0) continue;
      if (!pe_.may_read(e)) {
        partial[e] = 0;
        fixed.push_back(e);
      } else if (first < 0) {
        first = e;
      }
    }
    return first;
  }

 private:
  bool stopped() const { return hit_ceiling_ || sh_.ceiling_task.load(std::memory_order_relaxed) < task_; }

  void dfs(std::uint32_t pos) {
    if (stopped()) return;
    if (sh_.nodes.fetch_add(1, std::memory_order_relaxed) >= sh_.budget)
      throw BudgetExceeded("exhaustive search exceeded its budget of " + std::to_string(sh_.budget) +
                           " nodes; use anneal mode or raise TC_BUDGET");
    std::uint64_t ub = pe_.bound(partial_);
    auto sub = static_cast<std::int64_t>(ub);
    if (sub <= best_ || sub < sh_.best.load(std::memory_order_relaxed) || sub < sh_.floor) return;

    std::vector<std::uint32_t> fixed;
    std::int64_t first = -1;
    for (std::uint32_t e = pos; e < cs_.n_entries; ++e) {
      if (partial_[e] >= 0) continue;
      if (!pe_.may_read(e)) {
        partial_[e] = 0;
        fixed.push_back(e);
      } else if (first < 0) {
        first = e;
      }
    }
    if (first < 0) {
      best_ = sub;
      best_table_ = partial_;
      std::int64_t cur = sh_.best.load();
      while (cur < sub && !sh_.best.compare_exchange_weak(cur, sub)) {
      }
      if (sh_.ceiling && ub >= *sh_.ceiling) {
        hit_ceiling_ = true;
        std::size_t t = sh_.ceiling_task.load();
        while (task_ < t && !sh_.ceiling_task.compare_exchange_weak(t, task_)) {
        }
      }
    } else {
      auto e = static_cast<std::uint32_t>(first);
      for (std::uint32_t v = 0; v < cs_.entry_dom(e) && !stopped(); ++v) {
        partial_[e] = v;
        dfs(e + 1);
      }
      partial_[e] = detail::kUnknown;
    }
    for (auto e : fixed) partial_[e] = detail::kUnknown;
  }

  const CompiledSystem& cs_;
  detail::PartialEvaluator pe_;
  Shared& sh_;
  std::size_t task_;
  std::vector<std::int64_t> partial_;
  std::int64_t best_ = -1;
  std::vector<std::int64_t> best_table_;
  bool hit_ceiling_ = false;
};

struct ExhaustiveOutcome {
  std::int64_t best = -1;
  std::vector<std::int64_t> table;
  bool hit_ceiling = false;
  std::uint64_t nodes = 0;
};

ExhaustiveOutcome run_exhaustive(const System& sys, const DomainSizes& sizes, Objective obj,
                                 const SearchParams& params, std::int64_t floor) {
  CompiledSystem cs = detail::compile_system(sys, sizes);
  Shared sh;
  sh.budget = params.budget ? *params.budget : default_budget();
  sh.ceiling = params.ceiling;
  sh.floor = floor;
  std::vector<std::int64_t> partial = initial_partial(sys, sizes, cs, params);

  unsigned threads = resolve_threads(params.threads);
  ExhaustiveOutcome out;
  if (threads <= 1) {
    BranchAndBound bb(cs, obj, sh, 0);
    bb.run(partial, 0);
    out.best = bb.best();
    out.table = bb.best_table();
    out.hit_ceiling = bb.hit_ceiling();
    out.nodes = sh.nodes.load();
    return out;
  }

  // Split on the first entry that needs branching; ranges are processed
  // concurrently and reduced by max with the lowest range winning ties.
  BranchAndBound probe(cs, obj, sh, 0);
  std::uint64_t ub = 0;
  std::vector<std::uint32_t> fixed;
  std::int64_t first = probe.prepare(partial, 0, ub, fixed);
  if (first < 0 || static_cast<std::int64_t>(ub) < floor) {
    BranchAndBound bb(cs, obj, sh, 0);
    bb.run(partial, 0);
    out.best = bb.best();
    out.table = bb.best_table();
    out.hit_ceiling = bb.hit_ceiling();
    out.nodes = sh.nodes.load();
    return out;
  }
  auto e0 = static_cast<std::uint32_t>(first);
  std::uint32_t tasks = cs.entry_dom(e0);
  std::vector<ExhaustiveOutcome> results(tasks);
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&] {
    for (;;) {
      std::uint32_t t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        BranchAndBound bb(cs, obj, sh, t);
        auto p = partial;
        p[e0] = t;
        bb.run(std::move(p), e0 + 1);
        results[t].best = bb.best();
        results[t].table = bb.best_table();
        results[t].hit_ceiling = bb.hit_ceiling();
      } catch (...) {
        std::lock_guard<std::mutex> lk(fail_mu);
        if (!failure) failure = std::current_exception();
        sh.ceiling_task.store(0);  // stop everyone
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < std::min<unsigned>(threads, tasks); ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (auto& r : results)
    if (r.best > out.best) {
      out.best = r.best;
      out.table = r.table;
      out.hit_ceiling = r.hit_ceiling;
    }
  out.nodes = sh.nodes.load();
  return out;
}

// Pieces of a system that share no variable and no symbol. Variables that
// occur in no constraint are left out; the caller multiplies their sizes in.
std::vector<System> split_components(const System& sys) {
  const std::size_t nv = sys.vars.size();
  std::vector<std::size_t> parent(nv + sys.funcs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto node = [&](const Term& t) {
    return t.is_var() ? *sys.var_index(t.name) : nv + *sys.func_index(t.name);
  };
  auto mark = [&](auto&& self, const Term& t, std::vector<std::size_t>& acc) -> void {
    acc.push_back(node(t));
    for (const auto& a : t.args) self(self, a, acc);
  };
  std::vector<const Constraint*> all;
  for (const auto& c : sys.equations) all.push_back(&c);
  for (const auto& c : sys.disequalities) all.push_back(&c);
  std::vector<std::size_t> anchor;
  std::vector<char> used(parent.size(), 0);
  for (const auto* c : all) {
    std::vector<std::size_t> acc;
    mark(mark, c->lhs, acc);
    mark(mark, c->rhs, acc);
    for (auto a : acc) {
      used[a] = 1;
      parent[find(a)] = find(acc[0]);
    }
    anchor.push_back(acc[0]);
  }
  std::map<std::size_t, System> by_root;
  for (std::size_t i = 0; i < all.size(); ++i) {
    System& part = by_root[find(anchor[i])];
    (all[i]->kind == Constraint::Kind::Eq ? part.equations : part.disequalities).push_back(*all[i]);
  }
  for (std::size_t i = 0; i < nv; ++i)
    if (used[i]) by_root[find(i)].vars.push_back(sys.vars[i]);
  for (std::size_t f = 0; f < sys.funcs.size(); ++f)
    if (used[nv + f]) by_root[find(nv + f)].funcs.push_back(sys.funcs[f]);
  std::vector<System> parts;
  for (auto& [root, part] : by_root) {
    part.sorts = sys.sorts;
    parts.push_back(std::move(part));
  }
  return parts;
}

SearchResult exhaustive_objective(const System& sys, const DomainSizes& sizes, Objective obj,
                                  const SearchParams& params);

// Counts multiply over independent pieces, and the lexicographically least
// maximiser is the union of the per-piece least maximisers.
std::optional<SearchResult> exhaustive_by_parts(const System& sys, const DomainSizes& sizes,
                                                const SearchParams& params) {
  if (sys.is_dispersion()) return std::nullopt;
  auto parts = split_components(sys);
  std::size_t covered = 0;
  for (const auto& p : parts) covered += p.vars.size();
  if (parts.size() <= 1 && covered == sys.vars.size()) return std::nullopt;

  std::uint64_t budget = params.budget ? *params.budget : default_budget();
  SearchResult r;
  r.exhausted = true;
  std::uint64_t total = 1;
  for (const auto& v : sys.vars) {
    bool free = true;
    for (const auto& p : parts) free = free && !p.find_var(v.name);
    if (free) total *= sizes.at(v.sort);
  }
  std::map<std::string, std::vector<std::uint32_t>> tables;
  for (const auto& part : parts) {
    SearchParams sp = params;
    sp.ceiling.reset();
    sp.pinned.clear();
    for (const auto& f : part.funcs)
      if (auto it = params.pinned.find(f.name); it != params.pinned.end()) sp.pinned.insert(*it);
    if (r.explored >= budget)
      throw BudgetExceeded("exhaustive search exceeded its budget of " + std::to_string(budget) +
                           " nodes; use anneal mode or raise TC_BUDGET");
    sp.budget = budget - r.explored;
    SearchResult pr = exhaustive_objective(part, sizes, Objective::Count, sp);
    r.explored += pr.explored;
    total *= pr.best_count;
    for (auto& [name, t] : pr.witness.tables) tables[name] = std::move(t);
  }
  r.best_count = total;
  r.witness = zero_interpretation(sys, sizes);
  for (const auto& [name, t] : params.pinned) r.witness.tables[name] = t;
  if (total > 0)
    for (auto& [name, t] : tables) r.witness.tables[name] = std::move(t);
  r.reached_ceiling = params.ceiling && total >= *params.ceiling;
  return r;
}

SearchResult exhaustive_objective(const System& input, const DomainSizes& sizes, Objective obj,
                                  const SearchParams& params) {
  require_well_formed(input);
  // Same objective under every interpretation, but shared subterms and
  // merged variables make the partial-table bounds much tighter.
  const System sys = normalize(input).system;
  if (obj == Objective::Count)
    if (auto r = exhaustive_by_parts(sys, sizes, params)) return *r;
  auto o = run_exhaustive(sys, sizes, obj, params, -1);
  SearchResult r;
  r.best_count = static_cast<std::uint64_t>(std::max<std::int64_t>(o.best, 0));
  r.witness = to_interp(sys, sizes, o.table.empty() ? std::vector<std::int64_t>(detail::compile_system(sys, sizes).n_entries, 0) : o.table);
  r.exhausted = !o.hit_ceiling;
  r.reached_ceiling = o.hit_ceiling;
  r.explored = o.nodes;
  return r;
}

// Maximum clique by greedy colouring bounds over bitsets.
class CliqueSearch {
 public:
  CliqueSearch(std::size_t n, std::uint64_t budget, std::size_t stop_at)
      : n_(n), words_((n + 63) / 64), adj_(n * words_), budget_(budget), stop_at_(stop_at) {}

  void connect(std::size_t a, std::size_t b) {
    adj_[a * words_ + b / 64] |= 1ull << (b % 64);
    adj_[b * words_ + a / 64] |= 1ull << (a % 64);
  }

  std::vector<std::size_t> run() {
    // Relabel by falling degree so the colouring bound bites early.
    std::vector<std::size_t> deg(n_, 0), perm(n_);
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t w = 0; w < words_; ++w) deg[v] += static_cast<std::size_t>(__builtin_popcountll(row(v)[w]));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
    std::vector<std::size_t> pos(n_);
    for (std::size_t i = 0; i < n_; ++i) pos[perm[i]] = i;
    std::vector<std::uint64_t> relabelled(adj_.size(), 0);
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t u = 0; u < n_; ++u)
        if (row(v)[u / 64] >> (u % 64) & 1) relabelled[pos[v] * words_ + pos[u] / 64] |= 1ull << (pos[u] % 64);
    adj_ = std::move(relabelled);

    std::vector<std::uint64_t> all(words_, 0);
    for (std::size_t v = 0; v < n_; ++v) all[v / 64] |= 1ull << (v % 64);
    std::vector<std::size_t> cur;
    if (n_ > 0) expand(all, cur);
    for (auto& v : best_) v = perm[v];
    return best_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  const std::uint64_t* row(std::size_t v) const { return &adj_[v * words_]; }

  void expand(std::vector<std::uint64_t>& P, std::vector<std::size_t>& cur) {
    if (++nodes_ > budget_)
      throw BudgetExceeded("exhaustive search exceeded its budget of " + std::to_string(budget_) +
                           " nodes; use anneal mode or raise TC_BUDGET");
    std::vector<std::size_t> order, colour;
    {
      std::vector<std::uint64_t> left = P;
      std::size_t k = 0;
      bool any = true;
      while (any) {
        any = false;
        ++k;
        std::vector<std::uint64_t> q = left;
        for (std::size_t w = 0; w < words_; ++w)
          while (q[w]) {
            std::size_t v = w * 64 + static_cast<std::size_t>(__builtin_ctzll(q[w]));
            q[w] &= q[w] - 1;
            left[v / 64] &= ~(1ull << (v % 64));
            const std::uint64_t* r = row(v);
            for (std::size_t u = w; u < words_; ++u) q[u] &= ~r[u];
            order.push_back(v);
            colour.push_back(k);
            any = true;
          }
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + colour[i] <= best_.size() || best_.size() >= stop_at_) return;
      std::size_t v = order[i];
      cur.push_back(v);
      std::vector<std::uint64_t> next(words_);
      bool empty = true;
      const std::uint64_t* r = row(v);
      for (std::size_t w = 0; w < words_; ++w) {
        next[w] = P[w] & r[w];
        empty = empty && next[w] == 0;
      }
      if (empty) {
        if (cur.size() > best_.size()) best_ = cur;
      } else {
        expand(next, cur);
      }
      cur.pop_back();
      P[v / 64] &= ~(1ull << (v % 64));
    }
  }

  std::size_t n_, words_;
  std::vector<std::uint64_t> adj_;
  std::uint64_t budget_;
  std::size_t stop_at_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> best_;
};

struct CodePart {
  std::uint64_t count = 0;
  std::map<std::string, std::vector<std::uint32_t>> tables;
  std::uint64_t nodes = 0;
};

std::optional<CodePart> max_code_part(const System& part, const DomainSizes& sizes, std::uint64_t budget,
                                      std::size_t vertex_cap, std::size_t stop_at) {
  const std::size_t nv = part.vars.size();
  std::vector<std::uint64_t> dom(nv);
  double raw = 1;
  for (std::size_t i = 0; i < nv; ++i) {
    dom[i] = sizes.at(part.vars[i].sort);
    raw *= static_cast<double>(dom[i]);
  }
  if (raw > 64.0 * static_cast<double>(vertex_cap)) return std::nullopt;

  struct Occ {
    std::size_t func;
    std::vector<std::size_t> args;
    std::size_t rhs;
  };
  std::vector<Occ> occ;
  for (const auto& e : part.equations) {
    Occ o{*part.func_index(e.lhs.name), {}, *part.var_index(e.rhs.name)};
    for (const auto& a : e.lhs.args) o.args.push_back(*part.var_index(a.name));
    occ.push_back(std::move(o));
  }
  std::vector<std::pair<std::size_t, std::size_t>> neq;
  for (const auto& d : part.disequalities) neq.emplace_back(*part.var_index(d.lhs.name), *part.var_index(d.rhs.name));

  // Each vertex records, per occurrence, the table cell it reads and the value it needs.
  std::vector<std::vector<std::uint32_t>> verts;
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> cells;
  std::vector<std::uint32_t> a(nv, 0);
  const auto total = static_cast<std::uint64_t>(raw);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = nv; i-- > 0;) {
      a[i] = static_cast<std::uint32_t>(rest % dom[i]);
      rest /= dom[i];
    }
    bool ok = true;
    for (auto [l, r] : neq) ok = ok && a[l] != a[r];
    if (!ok) continue;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> c(occ.size());
    for (std::size_t j = 0; j < occ.size(); ++j) {
      std::uint64_t cell = 0;
      for (auto v : occ[j].args) cell = cell * dom[v] + a[v];
      c[j] = {cell, a[occ[j].rhs]};
    }
    for (std::size_t j = 0; j < occ.size() && ok; ++j)
      for (std::size_t k = j + 1; k < occ.size() && ok; ++k)
        ok = !(occ[j].func == occ[k].func && c[j].first == c[k].first && c[j].second != c[k].second);
    if (!ok) continue;
    if (verts.size() == vertex_cap) return std::nullopt;
    verts.push_back(a);
    cells.push_back(std::move(c));
  }

  CliqueSearch cs(verts.size(), budget, stop_at);
  for (std::size_t s = 0; s < verts.size(); ++s)
    for (std::size_t t = s + 1; t < verts.size(); ++t) {
      bool ok = true;
      for (std::size_t j = 0; j < occ.size() && ok; ++j)
        for (std::size_t k = 0; k < occ.size() && ok; ++k)
          ok = !(occ[j].func == occ[k].func && cells[s][j].first == cells[t][k].first &&
                 cells[s][j].second != cells[t][k].second);
      if (ok) cs.connect(s, t);
    }
  auto clique = cs.run();

  CodePart out;
  out.count = clique.size();
  out.nodes = cs.nodes();
  for (const auto& f : part.funcs) {
    std::uint64_t cellsz = 1;
    for (const auto& s : f.arg_sorts) cellsz *= sizes.at(s);
    out.tables[f.name].assign(cellsz, 0);
  }
  for (auto v : clique)
    for (std::size_t j = 0; j < occ.size(); ++j)
      out.tables[part.funcs[occ[j].func].name][cells[v][j].first] = cells[v][j].second;
  return out;
}

struct AnnealOutcome {
  std::uint64_t best = 0;
  std::vector<std::uint32_t> table;
  std::uint64_t steps = 0;
};

AnnealOutcome anneal_restart(const CompiledSystem& cs, Objective obj, const std::vector<std::int64_t>& pinned,
                             const SearchParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> table(cs.n_entries);
  std::vector<std::vector<std::uint32_t>> movable(cs.funcs.size());
  for (std::uint32_t e = 0; e < cs.n_entries; ++e) {
    if (pinned[e] >= 0) {
      table[e] = static_cast<std::uint32_t>(pinned[e]);
      continue;
    }
    std::uniform_int_distribution<std::uint32_t> d(0, cs.entry_dom(e) - 1);
    table[e] = d(rng);
    if (cs.entry_dom(e) >= 2) movable[cs.entry_func[e]].push_back(e);
  }
  std::vector<std::uint32_t> funcs;
  for (std::uint32_t f = 0; f < movable.size(); ++f)
    if (!movable[f].empty()) funcs.push_back(f);

  detail::UnitEvaluator ue(cs, obj, table);
  AnnealOutcome out;
  std::uint64_t cur = ue.value();
  out.best = cur;
  out.table = ue.table();
  if (funcs.empty()) return out;

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  double temp = p.initial_temperature;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t step = 0; step < p.steps; ++step) {
    if (p.ceiling && out.best >= *p.ceiling) break;
    if (p.time_budget && (step & 1023) == 0 &&
        std::chrono::duration<double>(clock::now() - start).count() > *p.time_budget)
      break;
    ++out.steps;
    std::uint32_t f = funcs[std::uniform_int_distribution<std::size_t>(0, funcs.size() - 1)(rng)];
    const auto& cand = movable[f];
    std::uint32_t e = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
    std::uint32_t old = ue.table()[e];
    std::uint32_t nv = std::uniform_int_distribution<std::uint32_t>(0, cs.entry_dom(e) - 2)(rng);
    if (nv >= old) ++nv;
    ue.set_entry(e, nv);
    std::uint64_t nw = ue.value();
    double delta = static_cast<double>(nw) - static_cast<double>(cur);
    if (delta >= 0 || (temp > 0 && unit(rng) < std::exp(delta / temp))) {
      cur = nw;
      if (cur > out.best) {
        out.best = cur;
        out.table = ue.table();
      }
    } else {
      ue.set_entry(e, old);
    }
    temp *= p.cooling;
  }
  return out;
}

// Search for a table under which every assignment is a solution. Branches on
// the first unset entry some assignment needs and prunes on any assignment
// that already fails, which suits model finding far better than table order.
class EveryAssignment {
 public:
  EveryAssignment(const CompiledSystem& cs, std::uint64_t budget)
      : cs_(cs), budget_(budget), assign_(cs.var_dom.size(), 0) {}

  bool run(std::vector<std::int64_t>& partial) {
    partial_ = &partial;
    return dfs();
  }

 private:
  enum class Status { Ok, Fail, Blocked };

  bool dfs() {
    if (++nodes_ > budget_)
      throw BudgetExceeded("exhaustive search exceeded its budget of " + std::to_string(budget_) +
                           " nodes; use anneal mode or raise TC_BUDGET");
    blocker_ = -1;
    if (walk(0) == Status::Fail) return false;
    if (blocker_ < 0) return true;
    auto e = static_cast<std::uint32_t>(blocker_);
    for (std::uint32_t v = 0; v < cs_.entry_dom(e); ++v) {
      (*partial_)[e] = v;
      if (dfs()) return true;
    }
    (*partial_)[e] = detail::kUnknown;
    return false;
  }

  // Value of a node, or kUnknown with blocker_ set to the missing entry.
  std::int64_t eval(std::uint32_t node) {
    const auto& nd = cs_.nodes[node];
    if (nd.is_var) return assign_[nd.id];
    const auto& f = cs_.funcs[nd.id];
    std::uint32_t e = f.offset;
    for (std::size_t i = 0; i < nd.kids.size(); ++i) {
      std::int64_t k = eval(nd.kids[i]);
      if (k < 0) return k;
      e += static_cast<std::uint32_t>(k) * f.strides[i];
    }
    std::int64_t v = (*partial_)[e];
    if (v < 0 && blocker_ < 0) blocker_ = e;
    return v;
  }

  // Ok once every assignment below step passes; a blocked assignment only
  // records its entry so later ones can still fail the node.
  Status walk(std::size_t step) {
    if (step == cs_.steps.size()) return Status::Ok;
    const auto& s = cs_.steps[step];
    using K = CompiledSystem::StepKind;
    switch (s.kind) {
      case K::Branch: {
        Status out = Status::Ok;
        for (std::uint32_t v = 0; v < cs_.var_dom[s.var]; ++v) {
          assign_[s.var] = v;
          Status r = walk(step + 1);
          if (r == Status::Fail) return r;
          if (r == Status::Blocked) out = r;
        }
        return out;
      }
      case K::Force: {
        std::int64_t v = eval(s.a);
        if (v < 0) return Status::Blocked;
        assign_[s.var] = static_cast<std::uint32_t>(v);
        return walk(step + 1);
      }
      case K::CheckEq:
      case K::CheckNeq: {
        std::int64_t a = eval(s.a);
        if (a < 0) return Status::Blocked;
        std::int64_t b = eval(s.b);
        if (b < 0) return Status::Blocked;
        if ((a == b) != (s.kind == K::CheckEq)) return Status::Fail;
        return walk(step + 1);
      }
    }
    return Status::Ok;
  }

  const CompiledSystem& cs_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::int64_t>* partial_ = nullptr;
  std::vector<std::uint32_t> assign_;
  std::int64_t blocker_ = -1;
};

SearchResult anneal_objective(const System& sys, const DomainSizes& sizes, Objective obj,
                              const SearchParams& params) {
  require_well_formed(sys);
  if (params.restarts < 1) throw Error("anneal requires restarts >= 1");
  if (params.steps < 1) throw Error("anneal requires steps >= 1");
  if (!(params.cooling > 0 && params.cooling < 1)) throw Error("cooling must lie in (0,1)");
  CompiledSystem cs = detail::compile_system(sys, sizes);
  auto pinned = initial_partial(sys, sizes, cs, params);
  std::vector<AnnealOutcome> results(params.restarts);
  unsigned threads = std::min<unsigned>(resolve_threads(params.threads), params.restarts);
  std::atomic<unsigned> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      unsigned r = next.fetch_add(1);
      if (r >= params.restarts) return;
      try {
        results[r] = anneal_restart(cs, obj, pinned, params, params.seed + r);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  SearchResult r;
  std::size_t win = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    r.explored += results[i].steps;
    if (results[i].best > results[win].best) win = i;
  }
  r.best_count = results[win].best;
  r.witness = unflatten_tables(sys, sizes, results[win].table);
  r.exhausted = false;
  r.reached_ceiling = params.ceiling && r.best_count >= *params.ceiling;
  return r;
}

}  // namespace

SearchResult exhaustive_max(const System& sys, const DomainSizes& sizes, const SearchParams& params) {
  return exhaustive_objective(sys, sizes, Objective::Count, params);
}

SearchResult anneal_max(const System& sys, const DomainSizes& sizes, const SearchParams& params) {
  return anneal_objective(sys, sizes, Objective::Count, params);
}

SearchResult dispersion_max(const System& sys, const DomainSizes& sizes, const SearchParams& params) {
  if (sys.outputs.empty()) throw Error("system declares no outputs");
  return params.mode == SearchMode::Exhaustive ? exhaustive_objective(sys, sizes, Objective::Image, params)
                                               : anneal_objective(sys, sizes, Objective::Image, params);
}

SearchResult maximize(const System& sys, const DomainSizes& sizes, const SearchParams& params) {
  if (sys.is_dispersion()) return dispersion_max(sys, sizes, params);
  return params.mode == SearchMode::Exhaustive ? exhaustive_max(sys, sizes, params)
                                               : anneal_max(sys, sizes, params);
}

std::optional<Interpretation> find_at_least(const System& sys, const DomainSizes& sizes,
                                            std::uint64_t target, const SearchParams& params) {
  require_well_formed(sys);
  SearchParams p = params;
  p.ceiling = target;
  Objective obj = sys.is_dispersion() ? Objective::Image : Objective::Count;
  const System flat = normalize(sys).system;
  if (obj == Objective::Count) {
    CompiledSystem cs = detail::compile_system(flat, sizes);
    const std::uint64_t all = cs.unit_count();
    if (target > all) return std::nullopt;
    if (target == all) {
      auto partial = initial_partial(flat, sizes, cs, p);
      EveryAssignment search(cs, p.budget ? *p.budget : default_budget());
      if (!search.run(partial)) return std::nullopt;
      return to_interp(flat, sizes, partial);
    }
  }
  auto o = run_exhaustive(flat, sizes, obj, p, static_cast<std::int64_t>(target));
  if (o.best < static_cast<std::int64_t>(target)) return std::nullopt;
  return to_interp(flat, sizes, o.table);
}

std::optional<SearchResult> max_code(const System& sys, const DomainSizes& sizes, const SearchParams& params,
                                     std::size_t vertex_cap) {
  require_well_formed(sys);
  check_sizes(sys, sizes);
  if (!is_flat(sys)) throw Error("max_code requires a flat system");
  if (sys.is_dispersion()) throw Error("max_code does not handle outputs");
  if (!params.pinned.empty()) throw Error("max_code does not support pinned tables");
  std::uint64_t budget = params.budget ? *params.budget : default_budget();
  SearchResult r;
  r.exhausted = true;
  r.best_count = 1;
  for (const auto& v : sys.vars) {
    bool used = false;
    for (const auto& c : sys.equations) used = used || c.rhs.name == v.name || c.lhs.args.end() != std::find(c.lhs.args.begin(), c.lhs.args.end(), Term::var(v.name));
    for (const auto& c : sys.disequalities) used = used || c.lhs.name == v.name || c.rhs.name == v.name;
    if (!used) r.best_count *= sizes.at(v.sort);
  }
  r.witness = zero_interpretation(sys, sizes);
  std::map<std::string, std::vector<std::uint32_t>> tables;
  auto parts = split_components(sys);
  bool cut_short = false;
  for (const auto& part : parts) {
    // A ceiling on the whole count only bounds a piece when it is the only one.
    std::size_t stop_at = std::numeric_limits<std::size_t>::max();
    if (params.ceiling && parts.size() == 1 && r.best_count == 1) stop_at = static_cast<std::size_t>(*params.ceiling);
    auto p = max_code_part(part, sizes, budget - std::min(budget, r.explored), vertex_cap, stop_at);
    if (!p) return std::nullopt;
    cut_short = cut_short || p->count >= stop_at;
    r.explored += p->nodes;
    r.best_count *= p->count;
    for (auto& [name, t] : p->tables) tables[name] = std::move(t);
  }
  if (r.best_count > 0)
    for (auto& [name, t] : tables) r.witness.tables[name] = std::move(t);
  r.reached_ceiling = params.ceiling && r.best_count >= *params.ceiling;
  r.exhausted = !cut_short;
  return r;
}

GuessResult guess_value(const System& sys, const DomainSizes& sizes, const SearchParams& params) {
  Diversified d = normalize_diversify(sys);
  check_sizes(d.system, sizes);
  GuessResult g;
  if (d.system.vars.empty()) throw Error("guessing value needs at least one variable");
  double log_m = 0;
  for (const auto& v : d.system.vars) {
    std::uint64_t n = sizes.at(v.sort);
    if (n < 2) throw Error("guessing value needs sizes >= 2");
    log_m += std::log(static_cast<double>(n));
  }
  log_m /= static_cast<double>(d.system.vars.size());
  g.base = std::exp(log_m);

  try {
    g.ceiling = count_ceiling(shannon_bound(build_graph(d.system), sizes));
  } catch (const Error&) {
    // No usable bound (too many vertices or incommensurable sizes).
  }
  SearchParams p = params;
  if (params.stop_at_bound && g.ceiling && (!p.ceiling || *g.ceiling < *p.ceiling)) p.ceiling = g.ceiling;

  auto finish = [&](SearchResult r, bool exact) {
    g.search = std::move(r);
    g.count = g.search.best_count;
    g.exact = exact;
    g.value = g.count == 0 ? -std::numeric_limits<double>::infinity()
                           : std::log(static_cast<double>(g.count)) / log_m;
    return g;
  };
  const bool exhaustive = params.mode == SearchMode::Exhaustive && !d.system.is_dispersion();
  if (exhaustive && params.stop_at_bound && g.ceiling) {
    // A count equal to the LP ceiling is optimal, so an anneal that reaches
    // it settles the question without enumerating.
    SearchParams quick = p;
    quick.mode = SearchMode::Anneal;
    SearchResult r = anneal_max(d.system, sizes, quick);
    if (r.reached_ceiling) return finish(std::move(r), true);
  }
  if (exhaustive)
    if (auto r = max_code(d.system, sizes, p)) return finish(std::move(*r), true);

  SearchResult r = maximize(d.system, sizes, p);
  bool exact = r.exhausted || (g.ceiling && r.best_count >= *g.ceiling);
  return finish(std::move(r), exact);
}

GuessResult guess_at_n(const System& sys, std::uint64_t n, const SearchParams& params) {
  if (n < 2) throw Error("guess_at_n requires n >= 2");
  return guess_value(sys, uniform_sizes(sys, n), params);
}

}  // namespace termcoding
