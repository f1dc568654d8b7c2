#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fermat_lab/natural.hpp"

namespace fermat_lab::cli {

inline constexpr int kCheckpointFormatVersion = 1;

enum class ChainKind { kClassify, kPepin, kOrder };

std::string_view to_string(ChainKind kind);
ChainKind chain_kind_from_string(std::string_view text);

/// Persisted position of a squaring chain.
struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  unsigned n = 0;
  Natural base;
  ChainKind chain_kind = ChainKind::kPepin;
  std::uint64_t squaring_index = 0;
  Natural residue;
  std::uint64_t digest = 0;
  std::string created_at;  // UTC, ISO 8601
};

/// FNV-1a over a canonical rendering of (n, base, index, residue).
std::uint64_t checkpoint_digest(unsigned n, const Natural& base, std::uint64_t index, const Natural& residue);

/// Fills in the digest and the creation time.
Checkpoint make_checkpoint(ChainKind kind, unsigned n, const Natural& base, std::uint64_t index,
                           const Natural& residue);

nlohmann::json to_json(const Checkpoint& checkpoint);

/// Throws Error(kCorruptCheckpoint) on a missing or mistyped field, an
/// unknown format version, a digest mismatch, or an index above 2^n.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

/// `<kind>_n<n>_b<16 hex digits of the base hash>.ckpt.json` inside dir.
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, ChainKind kind, unsigned n,
                                      const Natural& base);

/// Writes to a sibling temporary file and renames it over the target.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// nullopt when no file exists; throws Error(kCorruptCheckpoint) when the
/// file exists but cannot be trusted.
std::optional<Checkpoint> load_checkpoint(const std::filesystem::path& path);

}  // namespace fermat_lab::cli
