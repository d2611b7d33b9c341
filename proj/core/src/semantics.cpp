#include "termcoding/semantics.hpp"

#include <algorithm>

#include "termcoding/detail/compiled.hpp"
#include "termcoding/digest.hpp"

namespace termcoding {

std::uint64_t table_size(const FuncSymbol& f, const DomainSizes& sizes) {
  std::uint64_t n = 1;
  for (const auto& s : f.arg_sorts) n *= sizes.at(s);
  return n;
}

Interpretation zero_interpretation(const System& sys, const DomainSizes& sizes) {
  check_sizes(sys, sizes);
  Interpretation I;
  I.sizes = sizes;
  for (const auto& f : sys.funcs) I.tables[f.name].assign(table_size(f, sizes), 0);
  return I;
}

void check_interpretation(const System& sys, const Interpretation& interp) {
  check_sizes(sys, interp.sizes);
  for (const auto& f : sys.funcs) {
    auto it = interp.tables.find(f.name);
    if (it == interp.tables.end()) throw Error("no table for function '" + f.name + "'");
    if (it->second.size() != table_size(f, interp.sizes))
      throw Error("table for '" + f.name + "' has " + std::to_string(it->second.size()) +
                  " entries, expected " + std::to_string(table_size(f, interp.sizes)));
    std::uint64_t n = interp.sizes.at(f.result_sort);
    for (auto v : it->second)
      if (v >= n) throw Error("table for '" + f.name + "' has out-of-range value " + std::to_string(v));
  }
}

std::uint64_t table_index(const FuncSymbol& f, const DomainSizes& sizes,
                          const std::vector<std::uint32_t>& args) {
  if (args.size() != f.arity()) throw Error("arity mismatch for '" + f.name + "'");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::uint64_t n = sizes.at(f.arg_sorts[i]);
    if (args[i] >= n) throw Error("out-of-range argument for '" + f.name + "'");
    idx = idx * n + args[i];
  }
  return idx;
}

std::vector<std::uint32_t> flatten_tables(const System& sys, const Interpretation& interp) {
  std::vector<std::uint32_t> flat;
  for (const auto& f : sys.funcs) {
    const auto& t = interp.tables.at(f.name);
    flat.insert(flat.end(), t.begin(), t.end());
  }
  return flat;
}

Interpretation unflatten_tables(const System& sys, const DomainSizes& sizes,
                                const std::vector<std::uint32_t>& flat) {
  Interpretation I;
  I.sizes = sizes;
  std::size_t pos = 0;
  for (const auto& f : sys.funcs) {
    std::uint64_t n = table_size(f, sizes);
    if (pos + n > flat.size()) throw Error("flat table encoding too short");
    I.tables[f.name].assign(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                            flat.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
  }
  if (pos != flat.size()) throw Error("flat table encoding too long");
  return I;
}

std::uint32_t eval(const Term& t, const System& sys, const Interpretation& interp,
                   const Assignment& assignment) {
  if (t.is_var()) {
    auto it = assignment.find(t.name);
    if (it == assignment.end()) throw Error("no value for variable '" + t.name + "'");
    const VarDecl* v = sys.find_var(t.name);
    if (!v) throw Error("unknown variable '" + t.name + "'");
    if (it->second >= interp.sizes.at(v->sort))
      throw Error("value of '" + t.name + "' is out of range");
    return it->second;
  }
  const FuncSymbol* f = sys.find_func(t.name);
  if (!f) throw Error("unknown function '" + t.name + "'");
  std::vector<std::uint32_t> args;
  for (const auto& a : t.args) args.push_back(eval(a, sys, interp, assignment));
  const auto& table = interp.tables.at(f->name);
  return table.at(table_index(*f, interp.sizes, args));
}

std::string interpretation_digest(const System& sys, const Interpretation& interp) {
  std::string enc;
  for (const auto& s : sys.sorts) enc += s.name + "=" + std::to_string(interp.sizes.at(s.name)) + ";";
  for (const auto& f : sys.funcs) {
    enc += f.name + ":";
    for (auto v : interp.tables.at(f.name)) enc += std::to_string(v) + ",";
    enc += ";";
  }
  return sha256_hex(enc);
}

SolutionReport count_solutions(const System& sys, const Interpretation& interp,
                               std::size_t sample_cap) {
  check_interpretation(sys, interp);
  auto cs = detail::compile_system(sys, interp.sizes);
  auto flat = flatten_tables(sys, interp);
  detail::ExactEvaluator ev(cs, flat);
  SolutionReport rep;
  ev.for_each_solution([&](const std::vector<std::uint32_t>& a) {
    ++rep.count;
    if (rep.sample.size() < sample_cap) rep.sample.push_back(a);
    return true;
  });
  std::sort(rep.sample.begin(), rep.sample.end());
  rep.witness_hash = interpretation_digest(sys, interp);
  return rep;
}

std::uint64_t dispersion_image(const System& sys, const Interpretation& interp) {
  if (sys.outputs.empty()) throw Error("system declares no outputs");
  check_interpretation(sys, interp);
  auto cs = detail::compile_system(sys, interp.sizes);
  auto flat = flatten_tables(sys, interp);
  return detail::ExactEvaluator(cs, flat).image();
}

std::uint64_t objective_value(const System& sys, const Interpretation& interp) {
  return sys.is_dispersion() ? dispersion_image(sys, interp) : count_solutions(sys, interp, 0).count;
}

Interpretation product(const System& sys, const Interpretation& a, const Interpretation& b) {
  check_interpretation(sys, a);
  check_interpretation(sys, b);
  auto same_keys = [](const auto& x, const auto& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const auto& l, const auto& r) { return l.first == r.first; });
  };
  if (!same_keys(a.tables, b.tables) || !same_keys(a.sizes, b.sizes))
    throw Error("product of interpretations of different systems");
  Interpretation p;
  for (const auto& s : sys.sorts) p.sizes[s.name] = a.sizes.at(s.name) * b.sizes.at(s.name);
  for (const auto& f : sys.funcs) {
    const auto& ta = a.tables.at(f.name);
    const auto& tb = b.tables.at(f.name);
    std::uint64_t n = table_size(f, p.sizes);
    std::vector<std::uint32_t> t(n);
    std::vector<std::uint32_t> args(f.arity()), aa(f.arity()), bb(f.arity());
    for (std::uint64_t idx = 0; idx < n; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t k = f.arity(); k-- > 0;) {
        std::uint64_t nk = p.sizes.at(f.arg_sorts[k]);
        args[k] = static_cast<std::uint32_t>(rest % nk);
        rest /= nk;
        std::uint64_t nb = b.sizes.at(f.arg_sorts[k]);
        aa[k] = static_cast<std::uint32_t>(args[k] / nb);
        bb[k] = static_cast<std::uint32_t>(args[k] % nb);
      }
      std::uint64_t va = ta[table_index(f, a.sizes, aa)];
      std::uint64_t vb = tb[table_index(f, b.sizes, bb)];
      t[idx] = static_cast<std::uint32_t>(va * b.sizes.at(f.result_sort) + vb);
    }
    p.tables[f.name] = std::move(t);
  }
  return p;
}

std::map<std::string, std::uint32_t> partition_blocks(const System& base, const Diversified& maps) {
  std::map<std::string, std::uint32_t> block;
  std::map<std::string, std::uint32_t> next;
  for (const auto& v : base.vars)
    if (!maps.merged.count(v.name)) block[v.name] = next[v.sort]++;
  for (const auto& [from, to] : maps.merged) {
    auto it = block.find(to);
    if (it == block.end()) throw Error("inconsistent maps: merged into unknown variable '" + to + "'");
    block[from] = it->second;
  }
  return block;
}

Interpretation partition_lift(const System& diversified, const Interpretation& witness,
                              const System& base, const Diversified& maps) {
  if (!is_flat(base)) throw Error("partition_lift requires a flat base system");
  check_interpretation(diversified, witness);
  auto block = partition_blocks(base, maps);

  Interpretation out;
  std::map<std::string, std::uint64_t> k;
  for (const auto& v : base.vars) ++k[v.sort];
  for (const auto& s : base.sorts)
    out.sizes[s.name] = std::max<std::uint64_t>(1, k[s.name]) * witness.sizes.at(s.name);
  std::map<std::string, std::vector<char>> written;
  for (const auto& f : base.funcs) {
    out.tables[f.name].assign(table_size(f, out.sizes), 0);
    written[f.name].assign(table_size(f, out.sizes), 0);
  }

  for (const auto& c : diversified.equations) {
    auto sit = maps.symbols.find(c.lhs.name);
    if (sit == maps.symbols.end()) throw Error("inconsistent maps: no origin for '" + c.lhs.name + "'");
    const FuncSymbol* g = diversified.find_func(c.lhs.name);
    const FuncSymbol* f = base.find_func(sit->second.original);
    if (!g || !f || f->arity() != g->arity())
      throw Error("inconsistent maps: symbol '" + c.lhs.name + "' does not match its origin");
    const auto& gt = witness.tables.at(g->name);
    auto& ft = out.tables[f->name];
    auto& wr = written[f->name];
    std::uint32_t res_block = block.at(c.rhs.name);
    std::uint32_t res_m = static_cast<std::uint32_t>(witness.sizes.at(f->result_sort));
    std::vector<std::uint32_t> a(g->arity()), lifted(g->arity());
    for (std::uint64_t idx = 0; idx < gt.size(); ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t j = g->arity(); j-- > 0;) {
        std::uint32_t m = static_cast<std::uint32_t>(witness.sizes.at(g->arg_sorts[j]));
        a[j] = static_cast<std::uint32_t>(rest % m);
        rest /= m;
        lifted[j] = block.at(c.lhs.args[j].name) * m + a[j];
      }
      std::uint64_t pos = table_index(*f, out.sizes, lifted);
      std::uint32_t val = res_block * res_m + gt[idx];
      if (wr[pos] && ft[pos] != val)
        throw Error("inconsistent maps: conflicting lifted entries for '" + f->name + "'");
      ft[pos] = val;
      wr[pos] = 1;
    }
  }
  return out;
}

bool verify_witness(const System& sys, const Interpretation& interp, std::uint64_t claimed) {
  try {
    return objective_value(sys, interp) == claimed;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace termcoding
