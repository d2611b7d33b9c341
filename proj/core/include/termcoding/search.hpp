#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "termcoding/ir.hpp"
#include "termcoding/semantics.hpp"

namespace termcoding {

enum class SearchMode { Exhaustive, Anneal };

struct SearchParams {
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t seed = 1;
  unsigned restarts = 4;
  std::uint64_t steps = 200000;
  double initial_temperature = 1.0;
  double cooling = 0.99997;
  std::optional<double> time_budget;  // seconds, per restart
  unsigned threads = 0;               // 0: hardware concurrency
  // Branch-and-bound nodes visited before giving up (exhaustive mode).
  // Defaults to TC_BUDGET from the environment, else 2^34.
  std::optional<std::uint64_t> budget;
  // Known upper bound on the objective; the search stops once it is reached.
  std::optional<std::uint64_t> ceiling;
  // guess_value only: stop as soon as the count reaches the entropy-derived
  // ceiling. Turn off to measure the maximum without relying on the bound.
  bool stop_at_bound = true;
  // Tables held fixed during the search.
  std::map<std::string, std::vector<std::uint32_t>> pinned;
};

struct SearchResult {
  std::uint64_t best_count = 0;
  Interpretation witness;
  bool exhausted = false;        // the whole space was searched (not cut short at a ceiling)
  bool reached_ceiling = false;  // best_count equals params.ceiling
  std::uint64_t explored = 0;    // search nodes (exhaustive) or steps (anneal)
};

std::uint64_t default_budget();
unsigned resolve_threads(unsigned requested);

// Maximum solution count; lexicographically least witness among maxima.
SearchResult exhaustive_max(const System& sys, const DomainSizes& sizes, const SearchParams& params = {});
SearchResult anneal_max(const System& sys, const DomainSizes& sizes, const SearchParams& params = {});

// Maximum dispersion image in the mode selected by params.
SearchResult dispersion_max(const System& sys, const DomainSizes& sizes, const SearchParams& params = {});

// Dispatches on params.mode and on whether sys has outputs.
SearchResult maximize(const System& sys, const DomainSizes& sizes, const SearchParams& params = {});

// An interpretation whose objective reaches target, if any. The lexicographically
// least one, except when target is every assignment: that case runs a model
// search branching on the entries assignments actually need.
std::optional<Interpretation> find_at_least(const System& sys, const DomainSizes& sizes,
                                            std::uint64_t target, const SearchParams& params = {});

// Exact maximum count for a flat system without outputs, found as a largest
// set of pairwise compatible assignments. Returns nullopt when some
// independent piece has more than vertex_cap admissible assignments.
std::optional<SearchResult> max_code(const System& flat, const DomainSizes& sizes, const SearchParams& params = {},
                                     std::size_t vertex_cap = 8192);

struct GuessResult {
  double value = 0;          // log_M of the diversified maximum (-inf when it is 0)
  std::uint64_t count = 0;   // the diversified maximum (exact or best found)
  double base = 0;           // M, the weighted geometric mean of vertex alphabet sizes
  bool exact = false;
  std::optional<std::uint64_t> ceiling;  // count bound derived from the entropy LP
  SearchResult search;
};

// Normalises and diversifies internally; n >= 2. In exhaustive mode a short
// anneal first tries to reach the entropy ceiling (which proves optimality);
// failing that the maximum comes from max_code when it fits, else maximize.
GuessResult guess_at_n(const System& sys, std::uint64_t n, const SearchParams& params = {});
GuessResult guess_value(const System& sys, const DomainSizes& sizes, const SearchParams& params = {});

}  // namespace termcoding
