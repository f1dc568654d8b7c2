#include "fermat_lab/factor.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <random>
#include <set>

#include "fermat_lab/error.hpp"
#include "fermat_lab/oracle.hpp"

namespace fl = fermat_lab;
using fl::FermatIndex;
using fl::Natural;

namespace {

std::vector<std::uint64_t> ks(const std::vector<fl::CandidateDivisor>& found) {
  std::vector<std::uint64_t> out;
  for (const auto& d : found) out.push_back(d.k);
  return out;
}

fl::CandidateDivisor tested(unsigned n, std::uint64_t k) {
  auto c = fl::make_candidate(FermatIndex(n), k);
  c.divides = fl::divides_fermat(c.p, FermatIndex(n));
  return c;
}

fl::LucasSearchOptions up_to(std::uint64_t k_max) {
  fl::LucasSearchOptions o;
  o.k_max = k_max;
  return o;
}

}  // namespace

TEST(CandidateTest, LucasForm) {
  const auto c = fl::make_candidate(FermatIndex(5), 5);
  EXPECT_EQ(c.p, Natural(641));
  EXPECT_FALSE(c.divides);
  EXPECT_EQ(c.primality, fl::Primality::kUnverified);
  EXPECT_TRUE(tested(5, 5).divides);
  EXPECT_FALSE(c.k_is_one_or_power_of_two);
  EXPECT_EQ(fl::make_candidate(FermatIndex(6), 1071).p, Natural(274177));
  EXPECT_TRUE(fl::make_candidate(FermatIndex(7), 4).k_is_one_or_power_of_two);
  EXPECT_TRUE(fl::make_candidate(FermatIndex(7), 1).k_is_one_or_power_of_two);
  EXPECT_FALSE(tested(5, 6).divides);
}

TEST(DividesFermatTest, Examples) {
  EXPECT_TRUE(fl::divides_fermat(Natural(641), FermatIndex(5)));
  EXPECT_TRUE(fl::divides_fermat(Natural(6700417), FermatIndex(5)));
  EXPECT_FALSE(fl::divides_fermat(Natural(643), FermatIndex(5)));
  EXPECT_TRUE(fl::divides_fermat(Natural(274177), FermatIndex(6)));
  EXPECT_TRUE(fl::divides_fermat(Natural(65537), FermatIndex(4)));
  // Wide path: F_7 = 59649589127497217 * 5704689200685129054721.
  EXPECT_TRUE(fl::divides_fermat(Natural::from_decimal("5704689200685129054721"), FermatIndex(7)));
  EXPECT_TRUE(fl::divides_fermat(Natural(59649589127497217ull), FermatIndex(7)));
  EXPECT_FALSE(fl::divides_fermat(Natural::from_decimal("5704689200685129054723"), FermatIndex(7)));
}

TEST(DividesFermatTest, RejectsEvenAndUnitModuli) {
  for (std::uint64_t p : {0u, 1u, 2u, 642u}) {
    try {
      fl::divides_fermat(Natural(p), FermatIndex(5));
      FAIL() << p;
    } catch (const fl::Error& e) {
      EXPECT_EQ(e.code(), fl::ErrorCode::kEvenOrUnitModulus);
    }
  }
}

TEST(DividesFermatTest, AgreesWithOracle) {
  std::mt19937_64 rng(40);
  for (unsigned k = 0; k <= 8; ++k) {
    const Natural f = fl::oracle::fermat_number(k);
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t p = (rng() & ((std::uint64_t{1} << 40) - 1)) | 1u;
      if (p == 1) continue;
      ASSERT_EQ(fl::divides_fermat(Natural(p), FermatIndex(k)), fl::oracle::naive_mod(f, Natural(p)).is_zero())
          << "n=" << k << " p=" << p;
    }
    // Lucas-form candidates hit divisors far more often than random odd p.
    for (std::uint64_t c = 1; c < 300; ++c) {
      const Natural p = Natural(c) * Natural::power_of_two(k + 2) + Natural(1);
      ASSERT_EQ(fl::divides_fermat(p, FermatIndex(k)), fl::oracle::naive_mod(f, p).is_zero()) << k << " " << c;
    }
  }
}

TEST(LucasSearchTest, Examples) {
  const auto five = fl::lucas_search(FermatIndex(5), up_to(10));
  EXPECT_EQ(ks(five), std::vector<std::uint64_t>{5});
  ASSERT_EQ(five.size(), 1u);
  EXPECT_EQ(five[0].p, Natural(641));
  EXPECT_EQ(five[0].primality, fl::Primality::kPrime);

  const auto six = fl::lucas_search(FermatIndex(6), up_to(1100));
  ASSERT_EQ(six.size(), 1u);
  EXPECT_EQ(six[0].k, 1071u);
  EXPECT_EQ(six[0].p, Natural(274177));

  EXPECT_TRUE(fl::lucas_search(FermatIndex(3), up_to(1000)).empty());
  EXPECT_TRUE(fl::lucas_search(FermatIndex(4), up_to(10000)).empty());
  EXPECT_EQ(ks(fl::lucas_search(FermatIndex(5), up_to(60000))), (std::vector<std::uint64_t>{5, 52347}));
}

TEST(LucasSearchTest, DivisorsHaveLucasFormAndExactCofactor) {
  for (unsigned k = 5; k <= 8; ++k) {
    const Natural f = fl::oracle::fermat_number(k);
    const Natural step = Natural::power_of_two(k + 2);
    for (const auto& d : fl::lucas_search(FermatIndex(k), up_to(3000))) {
      EXPECT_TRUE(d.divides);
      EXPECT_EQ(d.p % step, Natural(1));
      EXPECT_LT(d.p, f);
      const auto [q, r] = Natural::divmod(f, d.p);
      EXPECT_TRUE(r.is_zero());
      EXPECT_EQ(q * d.p, f);
      if (d.primality == fl::Primality::kPrime) EXPECT_TRUE(fl::validate_lucas_multiplier(d));
    }
  }
}

TEST(ValidateMultiplierTest, Examples) {
  EXPECT_TRUE(fl::validate_lucas_multiplier(tested(5, 5)));
  EXPECT_TRUE(fl::validate_lucas_multiplier(tested(6, 1071)));
  fl::CandidateDivisor synthetic = fl::make_candidate(FermatIndex(5), 4);
  synthetic.divides = true;
  EXPECT_FALSE(fl::validate_lucas_multiplier(synthetic));
  synthetic = fl::make_candidate(FermatIndex(5), 1);
  synthetic.divides = true;
  EXPECT_FALSE(fl::validate_lucas_multiplier(synthetic));
  try {
    fl::validate_lucas_multiplier(tested(5, 6));
    FAIL();
  } catch (const fl::Error& e) {
    EXPECT_EQ(e.code(), fl::ErrorCode::kCalledOnNondivisor);
  }
}

TEST(LucasSearchTest, FilterAndThreadsKeepPrimeDivisors) {
  for (unsigned k : {5u, 6u, 7u}) {
    const auto plain = fl::lucas_search(FermatIndex(k), up_to(5000));
    fl::LucasSearchOptions filtered = up_to(5000);
    filtered.prime_filter = true;
    fl::LucasSearchOptions threaded = up_to(5000);
    threaded.threads = 3;
    std::vector<std::uint64_t> primes;
    for (const auto& d : plain) {
      if (d.primality == fl::Primality::kPrime) primes.push_back(d.k);
    }
    EXPECT_EQ(ks(fl::lucas_search(FermatIndex(k), filtered)), primes);
    EXPECT_EQ(ks(fl::lucas_search(FermatIndex(k), threaded)), ks(plain));
  }
}

TEST(LucasSearchTest, CallbackSeesEveryCandidate) {
  std::atomic<std::uint64_t> calls{0};
  std::mutex mutex;
  std::set<std::uint64_t> zero_residue;
  fl::LucasSearchOptions o = up_to(500);
  o.threads = 2;
  o.on_candidate = [&](std::uint64_t k, const Natural& p, const Natural& residue) {
    ++calls;
    if ((residue + Natural(1)) % p == Natural(0)) {
      std::lock_guard lock(mutex);
      zero_residue.insert(k);
    }
  };
  fl::lucas_search(FermatIndex(6), o);
  EXPECT_EQ(calls.load(), 500u);
  EXPECT_TRUE(zero_residue.empty());

  calls = 0;
  o.k_max = 10;
  fl::lucas_search(FermatIndex(5), o);
  EXPECT_EQ(calls.load(), 10u);
  EXPECT_EQ(zero_residue, std::set<std::uint64_t>{5});
}

TEST(LucasSearchTest, RequiresIndexAtLeastTwo) {
  EXPECT_THROW(fl::lucas_search(FermatIndex(1), up_to(10)), fl::Error);
}
