#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "tnm/datum.hpp"
#include "tnm/error.hpp"

namespace {

using tnm::Datum;
using tnm::ErrorCode;
using tnm::ExactInt;

ErrorCode error_code_of(auto&& fn) {
  try {
    fn();
  } catch (const tnm::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tnm::Error";
  return ErrorCode::kIo;
}

std::vector<std::int64_t> signed_dims(const Datum& d) { return {d.dims.begin(), d.dims.end()}; }

TEST(Normalize, DropsOnesAndSorts) {
  EXPECT_EQ(tnm::normalize(Datum{{3, 1, 2}, 5}), (Datum{{2, 3}, 5}));
  EXPECT_EQ(tnm::normalize(Datum{{1, 1, 1}, 4}), (Datum{{1}, 4}));
  EXPECT_EQ(tnm::normalize(Datum{{2, 3, 7}, 2}), (Datum{{2, 3, 7}, 2}));
}

TEST(Normalize, RejectsInvalidData) {
  EXPECT_EQ(error_code_of([] { tnm::normalize(Datum{{2, 0}, 1}); }), ErrorCode::kInvalidDatum);
  EXPECT_EQ(error_code_of([] { tnm::normalize(Datum{{2}, 0}); }), ErrorCode::kInvalidDatum);
  EXPECT_EQ(error_code_of([] { tnm::normalize(Datum{{}, 1}); }), ErrorCode::kInvalidDatum);
}

TEST(BigR, PinnedValues) {
  EXPECT_EQ(tnm::big_r(Datum{{1}, 1}), 0);
  EXPECT_EQ(tnm::big_r(Datum{{3, 3}, 2}), 9);
  // 12 - (4 + 4 + 9) + (4 + 1 + 1) - 1
  EXPECT_EQ(tnm::big_r(Datum{{2, 2, 3}, 1}), 0);
  const std::vector<std::int64_t> dims{2, 2, 3};
  EXPECT_EQ(tnm::oracle::big_r_direct(dims, 1), 0);
}

TEST(BigR, MatchesDirectEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> k_dist(1, 5), d_dist(1, 12), m_dist(1, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    Datum d{{}, static_cast<std::uint64_t>(m_dist(rng))};
    const int k = k_dist(rng);
    for (int i = 0; i < k; ++i) d.dims.push_back(static_cast<std::uint64_t>(d_dist(rng)));
    const auto sd = signed_dims(d);
    ASSERT_EQ(tnm::big_r(d), tnm::oracle::big_r_direct(sd, static_cast<std::int64_t>(d.m))) << tnm::to_string(d);
  }
}

TEST(BigR, NoOverflowAtAdmissibleExtremes) {
  Datum d{std::vector<std::uint64_t>(16, 1'000'000), 1'000'000};
  // Every subset gcd is 10^6 and odd subsets outnumber even ones by one, so
  // the inclusion-exclusion part is -10^12.
  ExactInt expected = 1;
  for (int i = 0; i < 17; ++i) expected *= 1'000'000;
  EXPECT_EQ(tnm::big_r(d), expected - ExactInt(1'000'000'000'000));
  EXPECT_EQ(error_code_of([] { tnm::big_r(Datum{std::vector<std::uint64_t>(17, 2), 1}); }),
            ErrorCode::kInvalidDatum);
}

TEST(Delta, PinnedValues) {
  EXPECT_EQ(tnm::delta(Datum{{2, 3, 3}, 1}), -2);
  EXPECT_EQ(tnm::delta(Datum{{1}, 1}), 0);
  EXPECT_EQ(tnm::delta(Datum{{2, 2, 3}, 1}), -3);
}

TEST(GMax, PinnedValues) {
  EXPECT_EQ(tnm::g_max(Datum{{7}, 3}), 1);
  EXPECT_EQ(tnm::g_max(Datum{{4, 6, 9}, 2}), 3);
  EXPECT_EQ(tnm::g_max(Datum{{2, 2, 8}, 1}), 2);
  EXPECT_EQ(tnm::g_max(Datum{{1, 7}, 1}), 1);
}

TEST(Invariance, PermutationAndNormalization) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> k_dist(1, 5), d_dist(1, 12), m_dist(1, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    Datum d{{}, static_cast<std::uint64_t>(m_dist(rng))};
    const int k = k_dist(rng);
    for (int i = 0; i < k; ++i) d.dims.push_back(static_cast<std::uint64_t>(d_dist(rng)));
    Datum shuffled = d;
    std::shuffle(shuffled.dims.begin(), shuffled.dims.end(), rng);
    const Datum normal = tnm::normalize(d);
    for (const Datum& other : {shuffled, normal}) {
      ASSERT_EQ(tnm::big_r(d), tnm::big_r(other)) << tnm::to_string(d);
      ASSERT_EQ(tnm::delta(d), tnm::delta(other)) << tnm::to_string(d);
      ASSERT_EQ(tnm::g_max(d), tnm::g_max(other)) << tnm::to_string(d);
    }
    ASSERT_EQ(tnm::g_max(d), tnm::oracle::g_max_direct(signed_dims(d)));
  }
}

TEST(BigR, LinearInSampleCount) {
  for (std::uint64_t a = 1; a <= 6; ++a) {
    for (std::uint64_t b = a; b <= 6; ++b) {
      for (std::uint64_t m = 1; m <= 5; ++m) {
        const Datum d{{a, b, 4}, m};
        EXPECT_EQ(tnm::big_r(Datum{d.dims, m + 1}) - tnm::big_r(d), d.dimension());
      }
    }
  }
}

TEST(ZQuantity, PinnedValues) {
  const std::vector<std::uint64_t> five{5}, two_three{2, 3}, four_six{4, 6};
  EXPECT_EQ(tnm::z_quantity(std::span<const std::uint64_t>(five)), 5);
  EXPECT_EQ(tnm::z_quantity(std::span<const std::uint64_t>(two_three)), 4);
  EXPECT_EQ(tnm::z_quantity(std::span<const std::uint64_t>(four_six)), 8);
  const std::vector<std::int64_t> a{2, 3}, b{4, 6};
  EXPECT_EQ(tnm::oracle::fraction_count(a), 4);
  EXPECT_EQ(tnm::oracle::fraction_count(b), 8);
}

TEST(ZQuantity, Errors) {
  const std::vector<std::uint64_t> empty;
  EXPECT_EQ(error_code_of([&] { tnm::z_quantity(std::span<const std::uint64_t>(empty)); }), ErrorCode::kEmptyInput);
  const std::vector<std::uint64_t> zero{3, 0};
  EXPECT_EQ(error_code_of([&] { tnm::z_quantity(std::span<const std::uint64_t>(zero)); }),
            ErrorCode::kInvalidDatum);
}

TEST(ZQuantity, MatchesFractionCountOnRandomLists) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> k_dist(1, 4), v_dist(1, 40);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::uint64_t> values;
    std::vector<std::int64_t> signed_values;
    const int k = k_dist(rng);
    for (int i = 0; i < k; ++i) {
      const int v = v_dist(rng);
      values.push_back(static_cast<std::uint64_t>(v));
      signed_values.push_back(v);
    }
    std::int64_t l = 1;
    for (auto v : signed_values) l = std::lcm(l, v);
    if (l > 100'000) continue;
    const ExactInt z = tnm::z_quantity(std::span<const std::uint64_t>(values));
    ASSERT_GE(z, 0);
    ASSERT_EQ(z, tnm::oracle::fraction_count(signed_values));
  }
}

TEST(ZQuantity, RIdentityOnSmallGrid) {
  for (std::uint64_t k = 1; k <= 3; ++k) {
    std::vector<std::uint64_t> dims(k, 1);
    for (;;) {
      std::vector<std::int64_t> squares;
      for (auto d : dims) squares.push_back(static_cast<std::int64_t>(d * d));
      const std::int64_t z = tnm::oracle::fraction_count(squares);
      for (std::uint64_t m = 1; m <= 4; ++m) {
        const Datum datum{dims, m};
        ASSERT_EQ(tnm::big_r(datum), tnm::to_exact(m) * datum.dimension() - z) << tnm::to_string(datum);
      }
      std::size_t i = 0;
      while (i < k && dims[i] == 6) dims[i++] = 1;
      if (i == k) break;
      ++dims[i];
    }
  }
}

TEST(IndexOfFactor, PinnedValues) {
  EXPECT_EQ(tnm::index_of_factor(Datum{{2, 2, 2}, 1}, 0), tnm::ExactRational(1));
  EXPECT_EQ(tnm::index_of_factor(Datum{{2, 3, 3}, 1}, 2), tnm::ExactRational(1));
  EXPECT_EQ(tnm::index_of_factor(Datum{{2}, 4}, 0), tnm::ExactRational(1));
  EXPECT_EQ(tnm::index_of_factor(Datum{{2, 2, 3}, 1}, 2), tnm::ExactRational(2, 3));
}

TEST(IndexOfFactor, Errors) {
  EXPECT_EQ(error_code_of([] { tnm::index_of_factor(Datum{{1, 3}, 1}, 0); }), ErrorCode::kTrivialFactor);
  EXPECT_EQ(error_code_of([] { tnm::index_of_factor(Datum{{2, 3}, 1}, 2); }), ErrorCode::kInvalidDatum);
}

}  // namespace
