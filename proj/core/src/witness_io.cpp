#include "termcoding/witness_io.hpp"

#include <nlohmann/json.hpp>

#include "termcoding/digest.hpp"
#include "termcoding/dsl.hpp"

namespace termcoding {

std::string system_digest(const System& sys) { return sha256_hex(render(sys)); }

std::string witness_to_json(const System& sys, const Interpretation& interp, std::uint64_t count) {
  check_interpretation(sys, interp);
  nlohmann::ordered_json j;
  j["sizes"] = nlohmann::ordered_json::object();
  for (const auto& s : sys.sorts) j["sizes"][s.name] = interp.sizes.at(s.name);
  j["tables"] = nlohmann::ordered_json::object();
  for (const auto& f : sys.funcs) {
    nlohmann::ordered_json t;
    t["arity"] = f.arity();
    t["values"] = interp.tables.at(f.name);
    j["tables"][f.name] = std::move(t);
  }
  j["count"] = count;
  j["system_digest"] = system_digest(sys);
  return j.dump(2) + "\n";
}

Witness witness_from_json(const System& sys, const std::string& text) {
  Witness w;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& s : sys.sorts) {
      if (!j.at("sizes").contains(s.name)) throw Error("witness has no size for sort " + s.name);
      w.interp.sizes[s.name] = j["sizes"][s.name].get<std::uint64_t>();
    }
    for (const auto& f : sys.funcs) {
      if (!j.at("tables").contains(f.name)) throw Error("witness has no table for " + f.name);
      const auto& t = j["tables"][f.name];
      if (t.at("arity").get<std::size_t>() != f.arity()) throw Error("arity mismatch for " + f.name);
      w.interp.tables[f.name] = t.at("values").get<std::vector<std::uint32_t>>();
    }
    w.count = j.at("count").get<std::uint64_t>();
    w.system_digest = j.at("system_digest").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed witness: ") + e.what());
  }
  check_interpretation(sys, w.interp);
  return w;
}

void write_witness(const std::string& path, const System& sys, const Interpretation& interp,
                   std::uint64_t count) {
  write_file(path, witness_to_json(sys, interp, count));
}

Witness read_witness(const std::string& path, const System& sys) {
  return witness_from_json(sys, read_file(path));
}

}  // namespace termcoding
