#include "termcoding/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace termcoding {

namespace {

std::uint64_t ipow_checked(std::uint64_t b, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) return 0;
    r *= b;
  }
  return r;
}

// Smallest r with r^k = n for some k >= 1.
std::pair<std::uint64_t, std::uint64_t> primitive_root(std::uint64_t n) {
  for (std::uint64_t k = 63; k >= 2; --k) {
    auto r = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k))));
    for (std::uint64_t c = (r > 1 ? r - 1 : 1); c <= r + 1; ++c)
      if (c >= 2 && ipow_checked(c, k) == n) return {c, k};
  }
  return {n, 1};
}

std::vector<std::vector<std::size_t>> weak_components(const DepGraph& g) {
  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : g.edges) parent[find(a)] = find(b);
  for (const auto& d : g.definitions)
    for (auto a : d.args) parent[find(a)] = find(d.target);
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) comps[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : comps) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::pair<std::uint64_t, std::vector<std::uint64_t>> common_base(const std::vector<std::uint64_t>& sizes) {
  if (sizes.empty()) return {2, {}};
  for (auto s : sizes)
    if (s < 2) throw Error("entropy bound requires all sizes >= 2");
  if (std::all_of(sizes.begin(), sizes.end(), [&](auto s) { return s == sizes[0]; }))
    return {sizes[0], std::vector<std::uint64_t>(sizes.size(), 1)};
  std::uint64_t base = 0;
  std::vector<std::uint64_t> ks;
  for (auto s : sizes) {
    auto [r, k] = primitive_root(s);
    if (base == 0) base = r;
    if (r != base)
      throw Error("sizes " + std::to_string(sizes[0]) + " and " + std::to_string(s) +
                  " are not powers of a common base; choose commensurable sizes");
    ks.push_back(k);
  }
  return {base, ks};
}

EntropyLP build_entropy_lp(const DepGraph& g, const std::vector<std::size_t>& members,
                           const std::vector<std::uint64_t>& capacity) {
  const std::size_t k = members.size();
  if (k > 24) throw Error("component too large for the entropy LP");
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < k; ++i) local[members[i]] = i;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> defs;  // (args mask, target bit)
  for (const auto& d : g.definitions) {
    auto it = local.find(d.target);
    if (it == local.end()) continue;
    std::uint32_t args = 0;
    for (auto a : d.args) args |= 1u << local.at(a);
    defs.emplace_back(args, 1u << it->second);
  }
  const std::uint32_t full = k == 32 ? ~0u : ((1u << k) - 1);
  std::vector<std::uint32_t> cl(std::size_t{1} << k);
  for (std::uint32_t s = 0; s <= full; ++s) {
    std::uint32_t c = s;
    for (bool changed = true; changed;) {
      changed = false;
      for (auto [args, t] : defs)
        if ((args & c) == args && !(c & t)) {
          c |= t;
          changed = true;
        }
    }
    cl[s] = c;
  }

  EntropyLP lp;
  for (auto v : members) lp.vertices.push_back(g.vertices[v].name);
  const std::uint32_t zero = cl[0];
  std::map<std::uint32_t, std::size_t> var_of;
  for (std::uint32_t s = 0; s <= full; ++s)
    if (cl[s] == s && s != zero) {
      var_of[s] = lp.closed_sets.size();
      lp.closed_sets.push_back(s);
    }
  auto var = [&](std::uint32_t s) -> std::size_t {
    std::uint32_t c = cl[s];
    return c == zero ? EntropyLP::npos : var_of.at(c);
  };

  auto& P = lp.program;
  P.n_vars = lp.closed_sets.size();
  P.objective.assign(P.n_vars, 0);
  lp.objective_var = var(full);
  if (lp.objective_var != EntropyLP::npos) P.objective[lp.objective_var] = 1;

  std::set<std::vector<std::pair<std::size_t, long>>> seen;
  auto add_row = [&](std::vector<std::pair<std::uint32_t, long>> terms, const mpq_class& rhs) {
    std::map<std::size_t, long> acc;
    for (auto [s, c] : terms) {
      std::size_t v = var(s);
      if (v != EntropyLP::npos) acc[v] += c;
    }
    std::vector<std::pair<std::size_t, long>> key;
    for (auto [v, c] : acc)
      if (c != 0) key.emplace_back(v, c);
    if (key.empty()) return;
    if (rhs == 0 && !seen.insert(key).second) return;
    LinearProgram::Row row;
    for (auto [v, c] : key) row.coeffs.emplace_back(v, mpq_class(c));
    row.rhs = rhs;
    P.rows.push_back(std::move(row));
  };

  // Elemental monotonicity: h(V - i) <= h(V).
  for (std::size_t i = 0; i < k; ++i) add_row({{full & ~(1u << i), 1}, {full, -1}}, 0);
  // Elemental submodularity: h(S+i+j) + h(S) <= h(S+i) + h(S+j).
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::uint32_t bi = 1u << i, bj = 1u << j;
      std::uint32_t rest = full & ~(bi | bj);
      for (std::uint32_t s = rest;; s = (s - 1) & rest) {
        add_row({{s | bi | bj, 1}, {s, 1}, {s | bi, -1}, {s | bj, -1}}, 0);
        if (s == 0) break;
      }
    }
  // Capacities.
  for (std::size_t i = 0; i < k; ++i) add_row({{1u << i, 1}}, mpq_class(static_cast<unsigned long>(capacity[i])));
  return lp;
}

LpSolution lp_maximize(const EntropyLP& program) { return lp_maximize(program.program); }

BoundResult shannon_bound(const DepGraph& g, const DomainSizes& sizes, const EntropyOptions& opt) {
  std::vector<std::uint64_t> vsize;
  for (const auto& v : g.vertices) {
    auto it = sizes.find(v.sort);
    if (it == sizes.end()) throw Error("missing domain size for sort " + v.sort);
    if (it->second < 2) throw Error("entropy bound rejects domain size " + std::to_string(it->second) +
                                    " (sort " + v.sort + "); sizes must be >= 2");
    vsize.push_back(it->second);
  }
  auto [base, ks] = common_base(vsize);

  BoundResult res;
  res.unit_base = base;
  res.max_joint_units = 0;
  for (const auto& comp : weak_components(g)) {
    if (comp.size() > opt.vertex_cap)
      throw Error("component with " + std::to_string(comp.size()) + " vertices exceeds the entropy LP cap of " +
                  std::to_string(opt.vertex_cap));
    std::vector<std::uint64_t> cap;
    for (auto v : comp) cap.push_back(ks[v]);
    EntropyLP lp = build_entropy_lp(g, comp, cap);
    LpSolution sol = lp_maximize(lp);
    res.max_joint_units += sol.value;
    for (std::size_t i = 0; i < lp.closed_sets.size(); ++i) {
      std::vector<std::string> names;
      for (std::size_t b = 0; b < lp.vertices.size(); ++b)
        if (lp.closed_sets[i] >> b & 1u) names.push_back(lp.vertices[b]);
      std::sort(names.begin(), names.end());
      res.certificate.emplace_back(std::move(names), sol.x[i]);
    }
  }
  if (g.vertices.empty()) {
    res.normalised_bound = 0;
    return res;
  }
  std::uint64_t ksum = std::accumulate(ks.begin(), ks.end(), std::uint64_t{0});
  res.normalised_bound = res.max_joint_units * static_cast<unsigned long>(g.vertices.size()) /
                         mpq_class(static_cast<unsigned long>(ksum));
  res.normalised_bound.canonicalize();
  return res;
}

double BoundResult::max_joint_entropy_bits() const {
  return max_joint_units.get_d() * std::log2(static_cast<double>(unit_base));
}

std::string BoundResult::certificate_json() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [names, val] : certificate) {
    if (!first) out += ", ";
    first = false;
    out += "\"";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
    mpz_class num = val.get_num(), den = val.get_den();
    out += "\": \"" + num.get_str() + "/" + den.get_str() + "\"";
  }
  return out + "}";
}

std::uint64_t count_ceiling(const BoundResult& b) {
  mpz_class p = b.max_joint_units.get_num(), q = b.max_joint_units.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) throw Error("bound exponent too large");
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), b.unit_base, p.get_ui());
  mpz_class root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), q.get_ui());
  if (!root.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return root.get_ui();
}

}  // namespace termcoding
