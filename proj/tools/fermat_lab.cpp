// fermat_lab: command-line front end for the Fermat-number test library.

#include <atomic>
#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fermat_lab/cli/commands.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

}  // namespace

int main(int argc, char** argv) {
  using namespace fermat_lab::cli;

  CLI::App app{"Primality and pseudoprimality tests for Fermat numbers F_n = 2^(2^n) + 1"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  common.max_index = max_index_from_env();
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  PepinArgs pepin;
  auto* pepin_cmd = app.add_subcommand("pepin", "Pepin's test: base^((F_n-1)/2) = -1 mod F_n");
  pepin_cmd->add_option("n", pepin.n, "Fermat index (n >= 2)")->required();
  pepin_cmd->add_option("--base", pepin.base, "Pepin base (3, 5 or 10)");
  pepin_cmd->add_flag("--allow-any-base", pepin.allow_any_base, "Accept bases outside the admissible set");
  pepin_cmd->add_option("--checkpoint-dir", pepin.checkpoint_dir, "Directory for resumable chain state");
  pepin_cmd->add_option("--checkpoint-every", pepin.checkpoint_every, "Squarings between checkpoints");
  pepin_cmd->add_option("--checkpoint-seconds", pepin.checkpoint_seconds, "Seconds between checkpoints");
  pepin_cmd->add_option("--stop-at", pepin.stop_at, "Abandon the run after this squaring (testing)")
      ->group("");

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Quarter-residue classification of F_n to a base");
  classify_cmd->add_option("n", classify.n, "Fermat index (n >= 2)")->required();
  classify_cmd->add_option("--base", classify.base, "Base coprime to F_n");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Check the quarter-residue implications over a range");
  audit_cmd->add_option("--n-range", audit.n_range, "Index range a..b");
  audit_cmd->add_option("--bases", audit.bases, "Comma-separated bases or 'default'");
  audit_cmd->add_option("--report", audit.report, "Also write the JSON summary to this file");

  FactorArgs factor;
  auto* factor_cmd = app.add_subcommand("factor", "Search divisors k*2^(n+2)+1 of F_n");
  factor_cmd->add_option("n", factor.n, "Fermat index (n >= 2)")->required();
  factor_cmd->add_option("--k-max", factor.k_max, "Largest multiplier k to test");
  factor_cmd->add_flag("--prime-filter", factor.prime_filter, "Only test candidates that pass a primality filter");
  factor_cmd->add_option("--threads", factor.threads, "Worker threads");

  OrderArgs order;
  auto* order_cmd = app.add_subcommand("order", "Multiplicative order of a base modulo F_n");
  order_cmd->add_option("n", order.n, "Fermat index")->required();
  order_cmd->add_option("--base", order.base, "Base coprime to F_n");

  SelftestArgs selftest;
  std::string inject_fault;
  auto* selftest_cmd = app.add_subcommand("selftest", "Cross-check fast paths against the brute-force oracle");
  selftest_cmd->add_option("--inject-fault", inject_fault, "Corrupt a kernel to exercise the failure path")
      ->check(CLI::IsMember({"fold-off-by-one"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  common.format = format == "text" ? OutputFormat::kText : OutputFormat::kJson;

  if (*pepin_cmd) {
    std::signal(SIGINT, on_sigint);
    pepin.interrupt = &g_interrupted;
    return cmd_pepin(pepin, common, std::cout, std::cerr);
  }
  if (*classify_cmd) return cmd_classify(classify, common, std::cout, std::cerr);
  if (*audit_cmd) return cmd_audit(audit, common, std::cout, std::cerr);
  if (*factor_cmd) return cmd_factor(factor, common, std::cout, std::cerr);
  if (*order_cmd) return cmd_order(order, common, std::cout, std::cerr);
  if (*selftest_cmd) {
    if (inject_fault == "fold-off-by-one") {
      selftest.fold = [](const fermat_lab::Natural& x, fermat_lab::FermatIndex n) {
        return fermat_lab::reduce_fold(x, n).value() + fermat_lab::Natural(1);
      };
    }
    return cmd_selftest(selftest, common, std::cout, std::cerr);
  }
  return kExitUsage;
}
