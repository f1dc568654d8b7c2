#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fermat_lab/fermat_arith.hpp"
#include "fermat_lab/natural.hpp"
#include "fermat_lab/oracle.hpp"

namespace fermat_lab::cli {

/// Process exit statuses. kInterrupted is only produced by a run stopped on
/// request (SIGINT or --stop-at) after its last checkpoint.
enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailure = 1,
  kExitUsage = 2,
  kExitCorruptCheckpoint = 3,
  kExitTheoremViolation = 4,
  kExitInterrupted = 130,
};

enum class OutputFormat { kJson, kText };

struct CommonOptions {
  OutputFormat format = OutputFormat::kJson;
  unsigned max_index = kDefaultMaxIndex;
};

/// FERMAT_LAB_MAX_N when set to a valid integer, otherwise the default guard.
unsigned max_index_from_env();

/// Decimal, or hex with a 0x prefix.
Natural parse_base(std::string_view text);
/// "a..b" or a single index.
std::pair<unsigned, unsigned> parse_index_range(std::string_view text);
/// Comma-separated bases, or "default" for {2} plus the first 50 primes.
std::vector<Natural> parse_bases(std::string_view text);
std::vector<Natural> default_audit_bases();

struct PepinArgs {
  unsigned n = 0;
  std::string base = "3";
  bool allow_any_base = false;
  std::optional<std::filesystem::path> checkpoint_dir;
  std::uint64_t checkpoint_every = 1024;
  double checkpoint_seconds = 30.0;
  /// Abandon the run right after this squaring, as if the process died.
  std::optional<std::uint64_t> stop_at;
  /// Polled after every squaring; when set, the chain state is saved and the
  /// command returns kExitInterrupted.
  const std::atomic<bool>* interrupt = nullptr;
};

struct ClassifyArgs {
  unsigned n = 0;
  std::string base = "3";
};

struct AuditArgs {
  std::string n_range = "5..12";
  std::string bases = "default";
  std::optional<std::filesystem::path> report;
};

struct FactorArgs {
  unsigned n = 0;
  std::uint64_t k_max = 1000;
  bool prime_filter = false;
  unsigned threads = 1;
};

struct OrderArgs {
  unsigned n = 0;
  std::string base = "3";
};

using FoldFunction = std::function<Natural(const Natural& x, FermatIndex n)>;

struct SelftestArgs {
  /// Replacement for the fold reduction under test; empty means the real one.
  FoldFunction fold;
};

struct SelftestGroup {
  std::string name;
  std::uint64_t cases = 0;
  std::optional<oracle::OracleReport> first_failure;
};

/// Oracle cross-checks for n <= 5 plus fixture verdicts. Stops a group at
/// its first mismatch.
std::vector<SelftestGroup> run_selftest(const SelftestArgs& args);

int cmd_pepin(const PepinArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_classify(const ClassifyArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_audit(const AuditArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_factor(const FactorArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_order(const OrderArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_selftest(const SelftestArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err);

}  // namespace fermat_lab::cli
