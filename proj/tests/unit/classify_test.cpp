#include <gtest/gtest.h>

#include "tnm/classify.hpp"

namespace {

using tnm::Datum;
using tnm::ExactInt;
using tnm::StabilityClass;

constexpr auto kUnstable = StabilityClass::kUnstable;
constexpr auto kPolystable = StabilityClass::kPolystableNotStable;
constexpr auto kStable = StabilityClass::kStable;

TEST(ClosedForm, PinnedExamples) {
  EXPECT_EQ(tnm::classify_closed_form(Datum{{2, 3}, 1}), kUnstable);
  EXPECT_EQ(tnm::classify_closed_form(Datum{{2, 3, 3}, 1}), kPolystable);
  EXPECT_EQ(tnm::classify_closed_form(Datum{{1}, 1}), kStable);
  EXPECT_EQ(tnm::classify_closed_form(Datum{{3, 3}, 2}), kPolystable);
  EXPECT_EQ(tnm::classify_closed_form(Datum{{3, 3}, 3}), kStable);
}

TEST(Recursive, PinnedExamples) {
  EXPECT_EQ(tnm::classify_recursive(Datum{{2, 2, 3}, 1}), kPolystable);
  EXPECT_EQ(tnm::classify_recursive(Datum{{2}, 3}), kStable);
  EXPECT_EQ(tnm::classify_recursive(Datum{{3, 3, 9}, 1}), kPolystable);
  EXPECT_EQ(tnm::classify_recursive(Datum{{2, 5, 5}, 1}), kPolystable);
  EXPECT_EQ(tnm::classify_recursive(Datum{{1, 1, 4, 4}, 2}), kPolystable);
  EXPECT_EQ(tnm::classify_recursive(Datum{{5}, 3}), kUnstable);
}

// Exhaustive over k <= 4, d_i <= 8, m <= 6, including unit dimensions and
// every ordering.
TEST(Classifiers, AgreeOnGrid) {
  std::size_t count = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<std::uint64_t> dims(k, 1);
    for (;;) {
      for (std::uint64_t m = 1; m <= 6; ++m) {
        const Datum d{dims, m};
        ASSERT_EQ(tnm::classify_closed_form(d), tnm::classify_recursive(d)) << tnm::to_string(d);
        ++count;
      }
      std::size_t i = 0;
      while (i < k && dims[i] == 8) dims[i++] = 1;
      if (i == k) break;
      ++dims[i];
    }
  }
  EXPECT_EQ(count, 6u * (8 + 64 + 512 + 4096));
}

TEST(Classifiers, MonotoneInSampleCount) {
  for (std::uint64_t a = 1; a <= 8; ++a) {
    for (std::uint64_t b = a; b <= 8; ++b) {
      for (std::uint64_t c = b; c <= 8; ++c) {
        for (std::uint64_t m = 1; m <= 6; ++m) {
          const auto now = tnm::classify_closed_form(Datum{{a, b, c}, m});
          const auto next = tnm::classify_closed_form(Datum{{a, b, c}, m + 1});
          if (now == kStable) ASSERT_EQ(next, kStable);
          if (now != kUnstable) ASSERT_NE(next, kUnstable);
        }
      }
    }
  }
}

TEST(ClosedForm, RegimeBoundsHold) {
  for (std::uint64_t a = 2; a <= 8; ++a) {
    for (std::uint64_t b = a; b <= 8; ++b) {
      for (std::uint64_t c = b; c <= 8; ++c) {
        for (std::uint64_t m = 1; m <= 6; ++m) {
          for (const Datum& d : {Datum{{a, b}, m}, Datum{{a, b, c}, m}}) {
            const ExactInt r = tnm::big_r(d);
            if (r <= 0) continue;
            const ExactInt g = tnm::g_max(d);
            if (d.m >= 2) ASSERT_GE(r, g * g) << tnm::to_string(d);
            if (d.m == 1) ASSERT_GE(tnm::delta(d), -2) << tnm::to_string(d);
          }
        }
      }
    }
  }
}

TEST(MleProfile, PinnedExamples) {
  EXPECT_EQ(tnm::mle_profile(Datum{{2, 3}, 1}), (tnm::MleProfile{false, false, false, true}));
  EXPECT_EQ(tnm::mle_profile(Datum{{3, 3}, 2}), (tnm::MleProfile{true, true, false, false}));
  EXPECT_EQ(tnm::mle_profile(Datum{{1}, 1}), (tnm::MleProfile{true, true, true, false}));
}

TEST(MleProfile, ImplicationChain) {
  for (auto cls : {kUnstable, kPolystable, kStable}) {
    const auto p = tnm::mle_profile(cls);
    if (p.unique_as) EXPECT_TRUE(p.exists_as);
    if (p.exists_as) EXPECT_TRUE(p.bounded_as);
    EXPECT_NE(p.always_unbounded, p.bounded_as);
  }
}

TEST(Thresholds, PinnedExamples) {
  const auto a = tnm::thresholds({2, 2, 8});
  EXPECT_EQ(a.mlt_b, 2);
  EXPECT_EQ(a.mlt_e, 2);
  EXPECT_EQ(a.mlt_u, 3);
  ASSERT_TRUE(a.cor_bounds);
  EXPECT_EQ(a.cor_bounds->first, 2);
  EXPECT_EQ(a.cor_bounds->second, 3);

  const auto b = tnm::thresholds({4, 4});
  EXPECT_EQ(b.mlt_b, 1);
  EXPECT_EQ(b.mlt_u, 3);
  EXPECT_FALSE(b.cor_bounds);

  const auto c = tnm::thresholds({1});
  EXPECT_EQ(c.mlt_b, 1);
  EXPECT_EQ(c.mlt_e, 1);
  EXPECT_EQ(c.mlt_u, 1);
}

// Brute-force thresholds read off the recursive classifier, which shares no
// code with the Z-based formula.
TEST(Thresholds, MatchLinearSearchOverRecursiveClassifier) {
  for (std::uint64_t a = 1; a <= 7; ++a) {
    for (std::uint64_t b = a; b <= 7; ++b) {
      for (std::uint64_t c = b; c <= 12; ++c) {
        const tnm::Dims dims{a, b, c};
        std::uint64_t bounded = 0, unique = 0;
        for (std::uint64_t m = 40; m >= 1; --m) {
          const auto cls = tnm::classify_recursive(Datum{dims, m});
          if (cls != kUnstable) bounded = m;
          if (cls == kStable) unique = m;
        }
        const auto t = tnm::thresholds(dims);
        ASSERT_EQ(t.mlt_b, bounded);
        ASSERT_EQ(t.mlt_e, bounded);
        ASSERT_EQ(t.mlt_u, unique);
        if (t.cor_bounds) {
          ASSERT_LE(t.cor_bounds->first, t.mlt_b);
          ASSERT_LE(t.mlt_u, t.cor_bounds->second);
        }
      }
    }
  }
}

TEST(GitDimension, PinnedExamples) {
  EXPECT_EQ(tnm::git_dimension(Datum{{2, 2, 2}, 1}), ExactInt(0));
  EXPECT_EQ(tnm::git_dimension(Datum{{2, 5, 5}, 1}), ExactInt(2));
  EXPECT_EQ(tnm::git_dimension(Datum{{3, 3}, 2}), ExactInt(3));
  EXPECT_EQ(tnm::git_dimension(Datum{{2, 3}, 2}), ExactInt(0));
  EXPECT_EQ(tnm::git_dimension(Datum{{2, 3}, 1}), std::nullopt);
  // Stable with R > 0: Delta.
  EXPECT_EQ(tnm::git_dimension(Datum{{3, 3}, 3}), tnm::delta(Datum{{3, 3}, 3}));
}

TEST(GitDimension, EmptyExactlyWhenUnstable) {
  for (std::uint64_t a = 1; a <= 8; ++a) {
    for (std::uint64_t b = a; b <= 8; ++b) {
      for (std::uint64_t c = b; c <= 8; ++c) {
        for (std::uint64_t m = 1; m <= 6; ++m) {
          const Datum d{{a, b, c}, m};
          const auto dim = tnm::git_dimension(d);
          ASSERT_EQ(!dim.has_value(), tnm::classify_closed_form(d) == kUnstable);
          if (tnm::big_r(d) >= 0) {
            ASSERT_TRUE(dim);
            ASSERT_GE(*dim, 0);
          }
        }
      }
    }
  }
}

TEST(Explain, PinnedReports) {
  const auto a = tnm::explain(Datum{{2, 2, 3}, 1});
  EXPECT_EQ(a.r, 0);
  EXPECT_EQ(a.closed_form, kPolystable);
  EXPECT_TRUE(a.classifiers_agree());
  EXPECT_EQ(a.git_dimension, ExactInt(0));
  EXPECT_EQ(a.castling_trace.minimal(), (Datum{{2, 2}, 1}));

  const auto b = tnm::explain(Datum{{1}, 1});
  EXPECT_EQ(b.r, 0);
  EXPECT_EQ(b.delta, 0);
  EXPECT_EQ(b.g_max, 1);
  EXPECT_EQ(b.z, 1);
  EXPECT_EQ(b.closed_form, kStable);
  ASSERT_EQ(b.indices.size(), 1u);
  EXPECT_FALSE(b.indices[0].index);

  const auto c = tnm::explain(Datum{{3, 3, 8}, 1});
  EXPECT_EQ(c.castling_trace.minimal(), (Datum{{3, 3}, 1}));
  EXPECT_EQ(c.r, tnm::to_exact(8 * 9) - c.z);
}

}  // namespace
