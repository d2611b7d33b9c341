#pragma once

#include <cstdint>
#include <string>

#include "termcoding/ir.hpp"
#include "termcoding/semantics.hpp"

namespace termcoding {

struct Witness {
  Interpretation interp;
  std::uint64_t count = 0;
  std::string system_digest;
};

// SHA-256 of the canonical rendering of sys.
std::string system_digest(const System& sys);

// {"sizes": {...}, "tables": {f: {"arity": k, "values": [...]}}, "count": N, "system_digest": hex}
std::string witness_to_json(const System& sys, const Interpretation& interp, std::uint64_t count);

// Throws Error on malformed input. Tables are checked against sys.
Witness witness_from_json(const System& sys, const std::string& text);

void write_witness(const std::string& path, const System& sys, const Interpretation& interp,
                   std::uint64_t count);
Witness read_witness(const std::string& path, const System& sys);

}  // namespace termcoding
