#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermat_lab/primality.hpp"

namespace fermat_lab::cli {

inline constexpr int kRecordSchemaVersion = 1;

std::string library_version();

struct AuditRecord {
  std::string name;
  bool applicable = false;
  bool holds = true;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

/// Run metadata; everything that may legitimately differ between two runs
/// of the same computation lives here.
struct Timing {
  double wall_seconds = 0.0;
  std::uint64_t squarings_this_run = 0;
  std::uint64_t resumed_from = 0;

  friend bool operator==(const Timing&, const Timing&) = default;
};

/// Machine-readable verdict of a `pepin` or `classify` run. Residues are
/// lowercase hex without prefix.
struct VerdictRecord {
  int schema_version = kRecordSchemaVersion;
  std::string library_version;
  std::string kind;  // "pepin" | "classify"
  unsigned n = 0;
  std::string base;
  bool pepin_prime = false;
  std::string half_residue;
  std::uint64_t squarings = 0;  // total chain length

  // classify only
  std::optional<bool> fermat_congruence_holds;
  std::optional<std::string> quarter_tag;
  std::optional<std::string> quarter_residue;
  std::optional<std::string> full_residue;
  std::optional<std::string> classification;
  std::vector<AuditRecord> audits;

  Timing timing;

  friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
};

VerdictRecord record_from_pepin(FermatIndex n, const Natural& base, const PepinResult& result, Timing timing);
VerdictRecord record_from_verdict(const Verdict& verdict, Timing timing);

nlohmann::json to_json(const VerdictRecord& record);
/// Throws Error(kInvalidArgument) on malformed input.
VerdictRecord record_from_json(const nlohmann::json& j);

std::string render_text(const VerdictRecord& record);

}  // namespace fermat_lab::cli
