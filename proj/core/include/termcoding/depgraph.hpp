#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termcoding/ir.hpp"

namespace termcoding {

struct DepGraph {
  struct Vertex {
    std::string name;
    std::string sort;
    bool operator==(const Vertex&) const = default;
  };
  // One flat equation: the vertex `target` is a function of `args`.
  struct Definition {
    std::vector<std::size_t> args;  // sorted, deduplicated
    std::size_t target;
    bool operator==(const Definition&) const = default;
  };

  std::vector<Vertex> vertices;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::size_t> constants_at;
  std::set<std::pair<std::size_t, std::size_t>> distinctness;  // first < second
  std::vector<Definition> definitions;

  std::size_t index(const std::string& name) const;
  std::vector<std::size_t> in_neighbours(std::size_t v) const;

  // Each definition gets its own copy of its target vertex (the unmerged,
  // node-per-equation graph); arguments refer to the first copy.
  DepGraph split_definitions() const;

  bool operator==(const DepGraph&) const = default;
};

// Requires is_flat(sys).
DepGraph build_graph(const System& sys);

std::string to_dot(const DepGraph& g);

}  // namespace termcoding
