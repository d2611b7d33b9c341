#pragma once

// Compiled evaluation plan shared by counting, branch-and-bound search and
// annealing. Variables are either branched over (enumerated) or forced (an
// equation x = t whose other side is already determined fixes x). Checks run
// as soon as their variables are assigned.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "termcoding/ir.hpp"

namespace termcoding::detail {

inline constexpr std::int64_t kUnknown = -1;

enum class Objective { Count, Image };

struct CompiledSystem {
  struct Func {
    std::string name;
    std::uint32_t offset = 0;  // first entry in the global table
    std::uint32_t size = 0;    // number of entries
    std::uint32_t result_dom = 0;
    std::vector<std::uint32_t> arg_dom;
    std::vector<std::uint32_t> strides;  // row-major, first argument most significant
  };
  struct Node {
    bool is_var = true;
    std::uint32_t id = 0;  // variable or function index
    std::vector<std::uint32_t> kids;
  };
  enum class StepKind : std::uint8_t { Branch, Force, CheckEq, CheckNeq };
  struct Step {
    StepKind kind;
    std::uint32_t var = 0;  // Branch/Force
    std::uint32_t a = 0;    // node: Force source, or check lhs
    std::uint32_t b = 0;    // node: check rhs
  };

  std::vector<std::string> var_names;
  std::vector<std::uint32_t> var_dom;
  std::vector<Func> funcs;
  std::vector<std::uint32_t> entry_func;  // entry -> function index
  std::uint32_t n_entries = 0;
  std::vector<Node> nodes;
  std::vector<Step> steps;
  std::vector<std::uint32_t> outputs;      // nodes
  std::vector<std::uint32_t> out_dom;
  std::vector<std::uint32_t> branch_vars;  // in Branch-step order

  std::uint32_t entry_dom(std::uint32_t e) const { return funcs[entry_func[e]].result_dom; }
  // Product of output domains, saturated at UINT64_MAX.
  std::uint64_t image_cap() const;
  // Product of branch-variable domains; throws if it does not fit 64 bits.
  std::uint64_t unit_count() const;
};

CompiledSystem compile_system(const System& sys, const DomainSizes& sizes);

// Exact evaluation against a complete table.
class ExactEvaluator {
 public:
  ExactEvaluator(const CompiledSystem& cs, const std::vector<std::uint32_t>& table)
      : cs_(cs), table_(table), assign_(cs.var_dom.size(), 0) {}

  std::uint64_t count();
  std::uint64_t image();
  // Invokes cb(assignment) for each solution (all variables) until cb returns false.
  template <class F>
  void for_each_solution(F&& cb) {
    walk(0, [&]() { return cb(assign_); });
  }

  std::uint32_t eval(std::uint32_t node) const;

 private:
  template <class Leaf>
  bool walk(std::size_t step, Leaf&& leaf);

  const CompiledSystem& cs_;
  const std::vector<std::uint32_t>& table_;
  std::vector<std::uint32_t> assign_;
};

template <class Leaf>
bool ExactEvaluator::walk(std::size_t step, Leaf&& leaf) {
  if (step == cs_.steps.size()) return leaf();
  const auto& s = cs_.steps[step];
  using K = CompiledSystem::StepKind;
  switch (s.kind) {
    case K::Branch:
      for (std::uint32_t v = 0; v < cs_.var_dom[s.var]; ++v) {
        assign_[s.var] = v;
        if (!walk(step + 1, leaf)) return false;
      }
      return true;
    case K::Force:
      assign_[s.var] = eval(s.a);
      return walk(step + 1, leaf);
    case K::CheckEq:
      if (eval(s.a) != eval(s.b)) return true;
      return walk(step + 1, leaf);
    case K::CheckNeq:
      if (eval(s.a) == eval(s.b)) return true;
      return walk(step + 1, leaf);
  }
  return true;
}

// Upper bound of the objective over all completions of a partial table
// (kUnknown marks unset entries), plus the entries any completion might read.
class PartialEvaluator {
 public:
  PartialEvaluator(const CompiledSystem& cs, Objective obj);

  std::uint64_t bound(const std::vector<std::int64_t>& partial);
  bool may_read(std::uint32_t entry) const {
    return reads_[entry] || func_all_read_[cs_.entry_func[entry]];
  }

 private:
  std::int64_t eval(std::uint32_t node);
  // Returns the count of surviving leaves; known tuples go to known_.
  std::uint64_t walk(std::size_t step, bool counting_only);

  const CompiledSystem& cs_;
  Objective obj_;
  const std::vector<std::int64_t>* partial_ = nullptr;
  std::vector<std::uint32_t> assign_;
  std::vector<char> reads_;
  std::vector<char> func_all_read_;
  std::unordered_map<std::uint64_t, char> known_;
  std::uint64_t unknown_leaves_ = 0;
};

// Per-unit (branch-variable assignment) evaluation with an entry -> unit
// reader index, for cheap updates after single-entry mutations.
class UnitEvaluator {
 public:
  UnitEvaluator(const CompiledSystem& cs, Objective obj, std::vector<std::uint32_t> table);

  std::uint64_t value() const { return obj_ == Objective::Count ? alive_ : tuples_.size(); }
  const std::vector<std::uint32_t>& table() const { return table_; }
  // Sets one entry and updates the objective incrementally.
  void set_entry(std::uint32_t e, std::uint32_t v);
  // Recomputes everything from scratch (used to cross-check the incremental path).
  std::uint64_t full_recount() const;

 private:
  std::int64_t eval_unit(std::uint64_t u, std::vector<std::uint32_t>& reads) const;
  void add_outcome(std::int64_t o);
  void remove_outcome(std::int64_t o);

  const CompiledSystem& cs_;
  Objective obj_;
  std::vector<std::uint32_t> table_;
  std::uint64_t n_units_ = 0;
  std::vector<std::int64_t> outcome_;  // Count: 0/1; Image: tuple code or -1
  std::vector<std::vector<std::uint32_t>> unit_reads_;
  std::vector<std::vector<std::uint32_t>> readers_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
  std::uint64_t alive_ = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> tuples_;
};

}  // namespace termcoding::detail
