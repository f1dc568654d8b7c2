#include "fermat_lab/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fermat_lab/cli/checkpoint.hpp"
#include "fermat_lab/cli/records.hpp"
#include "fermat_lab/error.hpp"
#include "fermat_lab/factor.hpp"
#include "fermat_lab/order.hpp"
#include "fermat_lab/primality.hpp"

namespace fermat_lab::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct Interrupted {
  std::uint64_t index;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTheoremViolation: return kExitTheoremViolation;
    case ErrorCode::kCorruptCheckpoint: return kExitCorruptCheckpoint;
    default: return kExitUsage;
  }
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json nullable(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

// ---------------------------------------------------------------- selftest

Natural random_natural(std::mt19937_64& rng, std::size_t max_bits) {
  const std::size_t bits = std::uniform_int_distribution<std::size_t>(0, max_bits)(rng);
  std::vector<Natural::Limb> limbs((bits + 63) / 64);
  for (auto& l : limbs) l = rng();
  if (bits % 64 != 0 && !limbs.empty()) limbs.back() &= (Natural::Limb{1} << (bits % 64)) - 1;
  return Natural::from_limbs(std::move(limbs));
}

class GroupRunner {
 public:
  explicit GroupRunner(std::string name) { group_.name = std::move(name); }

  // Returns false once a failure has been recorded.
  bool check(const std::string& operation, std::vector<Natural> inputs, const Natural& expected,
             const Natural& actual) {
    if (group_.first_failure) return false;
    ++group_.cases;
    auto report = oracle::make_report(operation, std::move(inputs), expected, actual);
    if (!report.match) group_.first_failure = std::move(report);
    return !group_.first_failure;
  }

  bool failed() const { return group_.first_failure.has_value(); }
  SelftestGroup take() { return std::move(group_); }

 private:
  SelftestGroup group_;
};

Natural flag(bool b) { return Natural(b ? 1 : 0); }

}  // namespace

unsigned max_index_from_env() {
  const char* raw = std::getenv("FERMAT_LAB_MAX_N");
  if (raw == nullptr) return kDefaultMaxIndex;
  unsigned value = 0;
  const std::string_view text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value >= 63) return kDefaultMaxIndex;
  return value;
}

Natural parse_base(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) return Natural::from_hex(text.substr(2));
  return Natural::from_decimal(text);
}

std::pair<unsigned, unsigned> parse_index_range(std::string_view text) {
  auto parse_one = [&](std::string_view part) {
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::kInvalidArgument, "invalid index range '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const unsigned v = parse_one(text);
    return {v, v};
  }
  const unsigned lo = parse_one(text.substr(0, dots));
  const unsigned hi = parse_one(text.substr(dots + 2));
  if (lo > hi) throw Error(ErrorCode::kInvalidArgument, "empty index range '" + std::string(text) + "'");
  return {lo, hi};
}

std::vector<Natural> default_audit_bases() {
  std::vector<Natural> bases{Natural(2)};
  unsigned found = 0;
  for (std::uint64_t candidate = 2; found < 50; ++candidate) {
    if (!oracle::is_prime_u64(candidate)) continue;
    ++found;
    if (candidate != 2) bases.emplace_back(candidate);
  }
  return bases;
}

std::vector<Natural> parse_bases(std::string_view text) {
  if (text == "default") return default_audit_bases();
  std::vector<Natural> bases;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (part.empty()) throw Error(ErrorCode::kInvalidArgument, "empty entry in base list '" + std::string(text) + "'");
    bases.push_back(parse_base(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return bases;
}

// ---------------------------------------------------------------- pepin

int cmd_pepin(const PepinArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    const FermatIndex n(args.n, common.max_index);
    const Natural base = parse_base(args.base);
    require_index_at_least_two(n);
    if (!args.allow_any_base && !is_admissible_pepin_base(base)) {
      throw Error(ErrorCode::kNonAdmissibleBase,
                  "base " + base.to_decimal() + " is not an admissible Pepin base (allowed: 3, 5, 10); "
                  "pass --allow-any-base to experiment");
    }
    const std::uint64_t total = n.modulus_bits() - 1;

    PepinOptions options;
    options.allow_any_base = args.allow_any_base;
    std::optional<std::filesystem::path> ckpt;
    if (args.checkpoint_dir) {
      std::filesystem::create_directories(*args.checkpoint_dir);
      ckpt = checkpoint_path(*args.checkpoint_dir, ChainKind::kPepin, n.value(), base);
      if (auto loaded = load_checkpoint(*ckpt)) {
        if (loaded->chain_kind != ChainKind::kPepin || loaded->n != n.value() || loaded->base != base ||
            loaded->squaring_index > total || loaded->residue > Natural::power_of_two(n.modulus_bits())) {
          throw Error(ErrorCode::kCorruptCheckpoint,
                      "checkpoint " + ckpt->string() + " does not belong to this chain; refusing to restart");
        }
        options.resume = ChainState{loaded->squaring_index, FermatResidue(loaded->residue, n)};
      }
    }
    const std::uint64_t resumed_from = options.resume ? options.resume->index : 0;

    auto last_save = Clock::now();
    auto save = [&](std::uint64_t index, const FermatResidue& r) {
      if (!ckpt) return;
      save_checkpoint(*ckpt, make_checkpoint(ChainKind::kPepin, n.value(), base, index, r.value()));
      last_save = Clock::now();
    };
    options.observer = [&](std::uint64_t index, const FermatResidue& r) {
      const bool due_by_count = args.checkpoint_every != 0 && index % args.checkpoint_every == 0;
      if (due_by_count || seconds_since(last_save) >= args.checkpoint_seconds) save(index, r);
      if (args.interrupt != nullptr && args.interrupt->load()) {
        save(index, r);
        throw Interrupted{index};
      }
      if (args.stop_at && index == *args.stop_at) throw Interrupted{index};
    };

    PepinResult result{false, FermatResidue(Natural(0), n), 0};
    try {
      result = pepin_test(n, base, options);
    } catch (const Interrupted& stop) {
      err << "interrupted after squaring " << stop.index << " of " << total << '\n';
      return static_cast<int>(kExitInterrupted);
    }
    if (ckpt) std::filesystem::remove(*ckpt);

    const VerdictRecord record =
        record_from_pepin(n, base, result, Timing{seconds_since(started), result.squarings_performed, resumed_from});
    if (common.format == OutputFormat::kText) {
      out << render_text(record);
    } else {
      emit(out, to_json(record));
    }
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------- classify

int cmd_classify(const ClassifyArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    const FermatIndex n(args.n, common.max_index);
    const Natural base = parse_base(args.base);
    const Verdict verdict = classify_unchecked(n, base);
    const std::uint64_t squarings = n.modulus_bits() + (verdict.base == Natural(3) ? 0 : n.modulus_bits() - 1);
    const VerdictRecord record = record_from_verdict(verdict, Timing{seconds_since(started), squarings, 0});
    if (common.format == OutputFormat::kText) {
      out << render_text(record);
    } else {
      emit(out, to_json(record));
    }
    if (!verdict.audits_pass()) {
      err << TheoremViolation(verdict).what() << '\n' << transcript(verdict);
      return static_cast<int>(kExitTheoremViolation);
    }
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------- audit

int cmd_audit(const AuditArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto [lo, hi] = parse_index_range(args.n_range);
    (void)FermatIndex(hi, common.max_index);
    if (lo < 2) throw Error(ErrorCode::kIndexBelowTwo, "audit needs n >= 2");
    const std::vector<Natural> bases = parse_bases(args.bases);

    json rows = json::array();
    std::uint64_t cases = 0;
    std::uint64_t skipped = 0;
    std::uint64_t pseudoprimes = 0;
    std::uint64_t violations = 0;
    std::ostringstream table;
    table << std::left << std::setw(4) << "n" << std::setw(8) << "base" << std::setw(10) << "quarter"
          << std::setw(12) << "a^(F-1)=1" << std::setw(8) << "prime" << std::setw(26) << "classification"
          << "audit\n";

    for (unsigned k = lo; k <= hi; ++k) {
      const FermatIndex n(k, common.max_index);
      const bool prime = pepin_test(n, Natural(3)).pepin_prime;
      for (const Natural& base : bases) {
        json row = {{"n", k}, {"base", base.to_hex()}};
        try {
          require_coprime(n, base);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kBaseNotCoprime) throw;
          ++skipped;
          row["skipped"] = e.what();
          rows.push_back(row);
          table << std::setw(4) << k << std::setw(8) << base.to_decimal() << "skipped (not coprime)\n";
          continue;
        }
        const Verdict v = assemble_verdict(n, base, run_tapped_chain(n, base), prime);
        ++cases;
        if (v.classification == Classification::kPseudoprimeToBase) ++pseudoprimes;
        const bool pass = v.audits_pass();
        if (!pass) {
          ++violations;
          err << TheoremViolation(v).what() << '\n' << transcript(v);
        }
        json checks = json::object();
        for (const auto& c : v.audits) {
          if (c.applicable) checks[c.name] = c.holds;
        }
        row["quarter"] = std::string(to_string(v.quarter.tag));
        row["fermat_congruence_holds"] = v.fermat_congruence_holds;
        row["pepin_prime"] = v.pepin_prime;
        row["classification"] = std::string(to_string(v.classification));
        row["checks"] = checks;
        row["pass"] = pass;
        rows.push_back(row);
        table << std::setw(4) << k << std::setw(8) << base.to_decimal() << std::setw(10) << to_string(v.quarter.tag)
              << std::setw(12) << (v.fermat_congruence_holds ? "yes" : "no") << std::setw(8)
              << (v.pepin_prime ? "yes" : "no") << std::setw(26) << to_string(v.classification)
              << (pass ? "pass" : "FAIL") << '\n';
      }
    }

    const json summary = {
        {"schema_version", kRecordSchemaVersion},
        {"library_version", library_version()},
        {"kind", "audit"},
        {"n_range", {lo, hi}},
        {"cases", cases},
        {"skipped", skipped},
        {"pseudoprime_cases", pseudoprimes},
        {"violations", violations},
        {"all_pass", violations == 0},
        {"rows", rows},
    };
    if (args.report) {
      std::ofstream report(*args.report);
      if (!report) throw Error(ErrorCode::kInvalidArgument, "cannot write report " + args.report->string());
      report << summary.dump(2) << '\n';
    }
    if (common.format == OutputFormat::kText) {
      out << table.str() << cases << " cases, " << pseudoprimes << " pseudoprime, " << skipped << " skipped, "
          << violations << " violations\n";
    } else {
      emit(out, summary);
    }
    return static_cast<int>(violations == 0 ? kExitOk : kExitTheoremViolation);
  });
}

// ---------------------------------------------------------------- factor

int cmd_factor(const FactorArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = Clock::now();
    const FermatIndex n(args.n, common.max_index);
    LucasSearchOptions options;
    options.k_max = args.k_max;
    options.prime_filter = args.prime_filter;
    options.threads = args.threads;
    const auto found = lucas_search(n, options);
    const Natural fermat = fermat_value(n);

    json divisors = json::array();
    bool violation = false;
    for (const auto& d : found) {
      const auto [cofactor, remainder] = Natural::divmod(fermat, d.p);
      const bool multiplier_valid = validate_lucas_multiplier(d);
      if (d.primality == Primality::kPrime && !multiplier_valid) {
        violation = true;
        err << "theorem violation: prime divisor " << d.p.to_decimal() << " of F_" << n.value()
            << " has multiplier k=" << d.k << " equal to 1 or a power of two\n";
      }
      divisors.push_back({
          {"k", d.k},
          {"p", d.p.to_hex()},
          {"p_decimal", d.p.to_decimal()},
          {"primality", std::string(to_string(d.primality))},
          {"k_is_one_or_power_of_two", d.k_is_one_or_power_of_two},
          {"multiplier_valid", multiplier_valid},
          {"cofactor_exact", remainder.is_zero() && cofactor * d.p == fermat},
      });
    }
    if (common.format == OutputFormat::kText) {
      out << "factor F_" << n.value() << ", k <= " << args.k_max << ": " << found.size() << " divisor(s)\n";
      for (const auto& d : divisors) {
        out << "  k=" << d["k"].get<std::uint64_t>() << "  p=" << d["p_decimal"].get<std::string>() << "  ("
            << d["primality"].get<std::string>() << ", multiplier "
            << (d["multiplier_valid"].get<bool>() ? "valid" : "INVALID") << ")\n";
      }
    } else {
      emit(out, {
                    {"schema_version", kRecordSchemaVersion},
                    {"library_version", library_version()},
                    {"kind", "factor"},
                    {"n", n.value()},
                    {"k_max", args.k_max},
                    {"prime_filter", args.prime_filter},
                    {"divisors", divisors},
                    {"wall_seconds", seconds_since(started)},
                });
    }
    return static_cast<int>(violation ? kExitTheoremViolation : kExitOk);
  });
}

// ---------------------------------------------------------------- order

int cmd_order(const OrderArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FermatIndex n(args.n, common.max_index);
    const OrderResult r = order_alpha(n, parse_base(args.base));
    if (common.format == OutputFormat::kText) {
      out << "order of " << r.base.to_decimal() << " mod F_" << n.value() << ": ";
      if (r.alpha) {
        out << "2^" << *r.alpha;
      } else {
        out << "NotTotallyEven (does not divide F_n - 1)";
      }
      out << '\n';
      if (r.bound_satisfied) out << "  alpha <= 2^n - 2: " << (*r.bound_satisfied ? "yes" : "NO") << '\n';
    } else {
      emit(out, {
                    {"schema_version", kRecordSchemaVersion},
                    {"library_version", library_version()},
                    {"kind", "order"},
                    {"n", n.value()},
                    {"base", r.base.to_hex()},
                    {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
                    {"not_totally_even", r.not_totally_even()},
                    {"bound_satisfied", nullable(r.bound_satisfied)},
                    {"fermat_prime", r.fermat_prime},
                    {"squarings", r.squarings},
                });
    }
    const bool violation = r.bound_satisfied.has_value() && !*r.bound_satisfied;
    if (violation) err << "theorem violation: order exponent exceeds 2^n - 2 on composite F_n\n";
    return static_cast<int>(violation ? kExitTheoremViolation : kExitOk);
  });
}

// ---------------------------------------------------------------- selftest

std::vector<SelftestGroup> run_selftest(const SelftestArgs& args) {
  const FoldFunction fold =
      args.fold ? args.fold : FoldFunction([](const Natural& x, FermatIndex n) { return reduce_fold(x, n).value(); });
  std::mt19937_64 rng(0x5eed'f00dull);
  std::vector<SelftestGroup> groups;

  {
    GroupRunner g("fold_vs_naive_mod");
    for (unsigned k = 0; k <= 5 && !g.failed(); ++k) {
      const FermatIndex n(k);
      const Natural f = oracle::fermat_number(k);
      const std::size_t m = n.modulus_bits();
      std::vector<Natural> xs{Natural(0), f, f - Natural(1), Natural::power_of_two(m), Natural::power_of_two(m + 1),
                              f * f, Natural::power_of_two(2 * m)};
      for (int i = 0; i < 300; ++i) xs.push_back(random_natural(rng, 4 * m));
      for (const auto& x : xs) {
        if (!g.check("reduce_fold", {x, Natural(k)}, oracle::naive_mod(x, f), fold(x, n))) break;
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("mod_mul_vs_naive");
    for (unsigned k = 0; k <= 5 && !g.failed(); ++k) {
      const FermatIndex n(k);
      const Natural f = oracle::fermat_number(k);
      for (int i = 0; i < 100; ++i) {
        const Natural a = i == 0 ? f - Natural(1) : oracle::naive_mod(random_natural(rng, 2 * n.modulus_bits()), f);
        const Natural b = i == 0 ? f - Natural(1) : oracle::naive_mod(random_natural(rng, 2 * n.modulus_bits()), f);
        const Natural actual = mod_mul(FermatResidue(a, n), FermatResidue(b, n)).value();
        if (!g.check("mod_mul", {a, b, Natural(k)}, oracle::naive_mul_mod(a, b, f), actual)) break;
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("square_chain_vs_naive_pow");
    for (unsigned k = 0; k <= 5 && !g.failed(); ++k) {
      const FermatIndex n(k);
      const Natural f = oracle::fermat_number(k);
      for (std::uint64_t count = 0; count <= 12; ++count) {
        const Natural a = random_natural(rng, 3 * n.modulus_bits());
        const Natural actual = mod_square_chain(FermatResidue(a, n), count).value();
        if (!g.check("mod_square_chain", {a, Natural(count), Natural(k)},
                     oracle::naive_pow_mod(a, Natural::power_of_two(count), f), actual)) {
          break;
        }
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("pow_general_vs_naive_pow");
    for (unsigned k = 0; k <= 5 && !g.failed(); ++k) {
      const FermatIndex n(k);
      const Natural f = oracle::fermat_number(k);
      for (int i = 0; i < 20; ++i) {
        const Natural a = random_natural(rng, 2 * n.modulus_bits());
        const Natural e = random_natural(rng, 100);
        const Natural actual = mod_pow_general(FermatResidue(a, n), e).value();
        if (!g.check("mod_pow_general", {a, e, Natural(k)}, oracle::naive_pow_mod(a, e, f), actual)) break;
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("order_vs_naive_order");
    for (unsigned k = 0; k <= 4 && !g.failed(); ++k) {
      const FermatIndex n(k);
      const Natural f = oracle::fermat_number(k);
      for (std::uint64_t b = 2; b <= 20; ++b) {
        const Natural base(b);
        if (!gcd(f, base).is_one()) continue;
        const auto naive = oracle::naive_order(base, f, std::uint64_t{1} << n.modulus_bits());
        const OrderResult r = order_alpha(n, base);
        const Natural expected = naive ? Natural(*naive) : Natural(0);
        const Natural actual = r.alpha ? Natural::power_of_two(*r.alpha) : Natural(0);
        if (!g.check("order_alpha", {base, Natural(k)}, expected, actual)) break;
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("pepin_vs_trial_division");
    for (unsigned k = 2; k <= 5; ++k) {
      const Natural f = oracle::fermat_number(k);
      const bool certified_prime = !oracle::trial_division(f, oracle::isqrt_u64(f.to_u64().value())).has_value();
      if (!g.check("pepin_test", {Natural(k)}, flag(certified_prime), flag(pepin_test(FermatIndex(k)).pepin_prime))) {
        break;
      }
    }
    groups.push_back(g.take());
  }
  {
    GroupRunner g("fixtures");
    const FermatIndex five(5);
    const Natural f5 = oracle::fermat_number(5);
    g.check("quarter_residue(5,2) is PlusOne", {Natural(5), Natural(2)}, flag(true),
            flag(quarter_residue(five, Natural(2)).tag == QuarterTag::kPlusOne));
    g.check("quarter_residue(5,3) is Other", {Natural(5), Natural(3)}, flag(true),
            flag(quarter_residue(five, Natural(3)).tag == QuarterTag::kOther));
    g.check("fermat_congruence(5,3)", {Natural(5), Natural(3)}, flag(false), flag(fermat_congruence(five, Natural(3))));
    g.check("fermat_congruence(5,2)", {Natural(5), Natural(2)}, flag(true), flag(fermat_congruence(five, Natural(2))));
    LucasSearchOptions search;
    search.k_max = 10;
    const auto found = lucas_search(five, search);
    g.check("lucas_search(5,10) finds 641", {Natural(5), Natural(10)}, Natural(641),
            found.size() == 1 ? found.front().p : Natural(0));
    g.check("641 divides F_5", {f5, Natural(641)}, Natural(0), oracle::naive_mod(f5, Natural(641)));
    g.check("classify(4,3) is Prime", {Natural(4), Natural(3)}, flag(true),
            flag(classify(FermatIndex(4), Natural(3)).classification == Classification::kPrime));
    groups.push_back(g.take());
  }
  return groups;
}

int cmd_selftest(const SelftestArgs& args, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto groups = run_selftest(args);
    const oracle::OracleReport* failure = nullptr;
    json jgroups = json::array();
    for (const auto& g : groups) {
      if (!failure && g.first_failure) failure = &*g.first_failure;
      jgroups.push_back({{"name", g.name}, {"cases", g.cases}, {"pass", !g.first_failure}});
      if (common.format == OutputFormat::kText) {
        out << (g.first_failure ? "FAIL " : "PASS ") << g.name << " (" << g.cases << " cases)\n";
      }
    }
    json failure_json = nullptr;
    if (failure) {
      failure_json = {{"operation", failure->operation},
                      {"inputs", failure->inputs},
                      {"expected", failure->expected},
                      {"actual", failure->actual},
                      {"match", failure->match}};
      err << "selftest failed: " << failure_json.dump() << '\n';
    }
    if (common.format == OutputFormat::kJson) {
      emit(out, {{"kind", "selftest"}, {"pass", failure == nullptr}, {"groups", jgroups}, {"first_failure", failure_json}});
    }
    return static_cast<int>(failure ? kExitSelftestFailure : kExitOk);
  });
}

}  // namespace fermat_lab::cli
