#include "fermat_lab/cli/records.hpp"

#include <sstream>

#include "fermat_lab/error.hpp"

#ifndef FERMAT_LAB_VERSION
#define FERMAT_LAB_VERSION "0.0.0"
#endif

namespace fermat_lab::cli {

std::string library_version() { return FERMAT_LAB_VERSION; }

VerdictRecord record_from_pepin(FermatIndex n, const Natural& base, const PepinResult& result, Timing timing) {
  VerdictRecord r;
  r.library_version = library_version();
  r.kind = "pepin";
  r.n = n.value();
  r.base = base.to_hex();
  r.pepin_prime = result.pepin_prime;
  r.half_residue = result.half_residue.value().to_hex();
  r.squarings = n.modulus_bits() - 1;
  r.timing = timing;
  return r;
}

VerdictRecord record_from_verdict(const Verdict& v, Timing timing) {
  VerdictRecord r;
  r.library_version = library_version();
  r.kind = "classify";
  r.n = v.n.value();
  r.base = v.base.to_hex();
  r.pepin_prime = v.pepin_prime;
  r.half_residue = v.half_residue.value().to_hex();
  r.squarings = v.n.modulus_bits();
  r.fermat_congruence_holds = v.fermat_congruence_holds;
  r.quarter_tag = std::string(to_string(v.quarter.tag));
  r.quarter_residue = v.quarter.residue.value().to_hex();
  r.full_residue = v.full_residue.value().to_hex();
  r.classification = std::string(to_string(v.classification));
  for (const auto& check : v.audits) r.audits.push_back({check.name, check.applicable, check.holds});
  r.timing = timing;
  return r;
}

nlohmann::json to_json(const VerdictRecord& r) {
  nlohmann::json j = {
      {"schema_version", r.schema_version},
      {"library_version", r.library_version},
      {"kind", r.kind},
      {"n", r.n},
      {"base", r.base},
      {"pepin_prime", r.pepin_prime},
      {"half_residue", r.half_residue},
      {"squarings", r.squarings},
      {"timing",
       {{"wall_seconds", r.timing.wall_seconds},
        {"squarings_this_run", r.timing.squarings_this_run},
        {"resumed_from", r.timing.resumed_from}}},
  };
  if (r.fermat_congruence_holds) j["fermat_congruence_holds"] = *r.fermat_congruence_holds;
  if (r.quarter_tag || r.quarter_residue) {
    j["quarter"] = {{"tag", r.quarter_tag.value_or("")}, {"residue", r.quarter_residue.value_or("")}};
  }
  if (r.full_residue) j["full_residue"] = *r.full_residue;
  if (r.classification) j["classification"] = *r.classification;
  if (r.kind == "classify") {
    auto& audits = j["audits"] = nlohmann::json::array();
    for (const auto& a : r.audits) {
      audits.push_back({{"name", a.name}, {"applicable", a.applicable}, {"holds", a.holds}});
    }
  }
  return j;
}

VerdictRecord record_from_json(const nlohmann::json& j) {
  try {
    VerdictRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    r.library_version = j.at("library_version").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.n = j.at("n").get<unsigned>();
    r.base = j.at("base").get<std::string>();
    r.pepin_prime = j.at("pepin_prime").get<bool>();
    r.half_residue = j.at("half_residue").get<std::string>();
    r.squarings = j.at("squarings").get<std::uint64_t>();
    const auto& t = j.at("timing");
    r.timing.wall_seconds = t.at("wall_seconds").get<double>();
    r.timing.squarings_this_run = t.at("squarings_this_run").get<std::uint64_t>();
    r.timing.resumed_from = t.at("resumed_from").get<std::uint64_t>();
    if (j.contains("fermat_congruence_holds")) r.fermat_congruence_holds = j["fermat_congruence_holds"].get<bool>();
    if (j.contains("quarter")) {
      r.quarter_tag = j["quarter"].at("tag").get<std::string>();
      r.quarter_residue = j["quarter"].at("residue").get<std::string>();
    }
    if (j.contains("full_residue")) r.full_residue = j["full_residue"].get<std::string>();
    if (j.contains("classification")) r.classification = j["classification"].get<std::string>();
    if (j.contains("audits")) {
      for (const auto& a : j["audits"]) {
        r.audits.push_back({a.at("name").get<std::string>(), a.at("applicable").get<bool>(), a.at("holds").get<bool>()});
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed verdict record: ") + e.what());
  }
}

std::string render_text(const VerdictRecord& r) {
  std::ostringstream out;
  out << r.kind << " F_" << r.n << " base 0x" << r.base << '\n';
  out << "  F_" << r.n << " is " << (r.pepin_prime ? "prime" : "composite") << '\n';
  out << "  pepin_prime:     " << (r.pepin_prime ? "true" : "false") << '\n';
  if (r.classification) out << "  classification:  " << *r.classification << '\n';
  if (r.quarter_tag) out << "  quarter class:   " << *r.quarter_tag << '\n';
  if (r.fermat_congruence_holds) {
    out << "  a^(F_n-1) = 1:   " << (*r.fermat_congruence_holds ? "true" : "false") << '\n';
  }
  for (const auto& a : r.audits) {
    if (!a.applicable) continue;
    out << "  check " << a.name << ": " << (a.holds ? "holds" : "VIOLATED") << '\n';
  }
  out << "  squarings:       " << r.squarings << " (" << r.timing.squarings_this_run << " this run, resumed from "
      << r.timing.resumed_from << ")\n";
  out << "  wall seconds:    " << r.timing.wall_seconds << '\n';
  return out.str();
}

}  // namespace fermat_lab::cli
