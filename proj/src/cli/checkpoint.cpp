#include "fermat_lab/cli/checkpoint.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fermat_lab/error.hpp"

namespace fermat_lab::cli {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = kFnvOffset;
  for (const unsigned char c : text) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] void corrupt(const std::string& why) { throw Error(ErrorCode::kCorruptCheckpoint, "corrupt checkpoint: " + why); }

}  // namespace

std::string_view to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::kClassify: return "classify";
    case ChainKind::kPepin: return "pepin";
    case ChainKind::kOrder: return "order";
  }
  return "pepin";
}

ChainKind chain_kind_from_string(std::string_view text) {
  if (text == "classify") return ChainKind::kClassify;
  if (text == "pepin") return ChainKind::kPepin;
  if (text == "order") return ChainKind::kOrder;
  corrupt("unknown chain kind '" + std::string(text) + "'");
}

std::uint64_t checkpoint_digest(unsigned n, const Natural& base, std::uint64_t index, const Natural& residue) {
  std::ostringstream canonical;
  canonical << "n=" << n << ";base=" << base.to_hex() << ";index=" << index << ";residue=" << residue.to_hex();
  return fnv1a(canonical.str());
}

Checkpoint make_checkpoint(ChainKind kind, unsigned n, const Natural& base, std::uint64_t index,
                           const Natural& residue) {
  Checkpoint c;
  c.n = n;
  c.base = base;
  c.chain_kind = kind;
  c.squaring_index = index;
  c.residue = residue;
  c.digest = checkpoint_digest(n, base, index, residue);
  c.created_at = utc_now();
  return c;
}

nlohmann::json to_json(const Checkpoint& c) {
  return {
      {"format_version", c.format_version},
      {"n", c.n},
      {"base", c.base.to_hex()},
      {"chain_kind", std::string(to_string(c.chain_kind))},
      {"squaring_index", c.squaring_index},
      {"residue", c.residue.to_hex()},
      {"digest", hex64(c.digest)},
      {"created_at", c.created_at},
  };
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint c;
  try {
    c.format_version = j.at("format_version").get<int>();
    c.n = j.at("n").get<unsigned>();
    c.base = Natural::from_hex(j.at("base").get<std::string>());
    c.chain_kind = chain_kind_from_string(j.at("chain_kind").get<std::string>());
    c.squaring_index = j.at("squaring_index").get<std::uint64_t>();
    c.residue = Natural::from_hex(j.at("residue").get<std::string>());
    const std::string digest = j.at("digest").get<std::string>();
    if (digest.size() != 16) corrupt("digest must be 16 hex digits");
    c.digest = Natural::from_hex(digest).to_u64().value();
    c.created_at = j.at("created_at").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptCheckpoint) throw;
    corrupt(e.what());
  }
  if (c.format_version != kCheckpointFormatVersion) corrupt("unsupported format version");
  if (c.n >= 64 || c.squaring_index > (std::uint64_t{1} << c.n)) corrupt("squaring index exceeds 2^n");
  if (checkpoint_digest(c.n, c.base, c.squaring_index, c.residue) != c.digest) corrupt("digest mismatch");
  return c;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, ChainKind kind, unsigned n,
                                      const Natural& base) {
  return dir / (std::string(to_string(kind)) + "_n" + std::to_string(n) + "_b" + hex64(fnv1a(base.to_hex())) +
                ".ckpt.json");
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write checkpoint " + tmp.string());
    out << to_json(checkpoint).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kInvalidArgument, "short write on checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Checkpoint> load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) corrupt("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto j = nlohmann::json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) corrupt("not a JSON object: " + path.string());
  return checkpoint_from_json(j);
}

}  // namespace fermat_lab::cli
