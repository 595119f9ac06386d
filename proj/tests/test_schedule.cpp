#include <gtest/gtest.h>

#include "fracdim/errors.hpp"
#include "fracdim/schedule.hpp"

using namespace fracdim;

namespace {

// Direct reading of the defining predicate: 1 iff k(k^2-1) < n <= k^3 for some k >= 1.
int fstar_oracle(std::int64_t n) {
  for (std::int64_t k = 1; k * (k * k - 1) < n; ++k)
    if (n <= k * k * k) return 1;
  return 0;
}

}  // namespace

TEST(Schedule, FStarMatchesPredicate) {
  const auto f = Schedule::f_star();
  for (std::int64_t n = 1; n <= 2000; ++n) ASSERT_EQ(f(n), fstar_oracle(n)) << n;
  EXPECT_EQ(f(0), 0);
  EXPECT_EQ(f(-3), 0);
}

TEST(Schedule, Constants) {
  for (std::int64_t n = 1; n < 50; ++n) {
    EXPECT_EQ(Schedule::const0()(n), 0);
    EXPECT_EQ(Schedule::const1()(n), 1);
  }
}

TEST(Schedule, ParseAndPrintRoundTrip) {
  for (const char* text : {"const0", "const1", "fstar", "bits:0110", "shift:5:fstar", "shift:2:bits:101"}) {
    const auto s = Schedule::parse(text);
    EXPECT_EQ(s.to_string(), text);
    EXPECT_EQ(Schedule::parse(s.to_string()), s);
  }
}

TEST(Schedule, ParseRejectsMalformed) {
  for (const char* text : {"", "const2", "bits:012", "shift:x:fstar", "shift:-1:fstar", "fstar ", "shift:3"})
    EXPECT_THROW(Schedule::parse(text), InvalidArgument) << text;
}

TEST(Schedule, ExplicitBitsAndShift) {
  const auto bits = Schedule::parse("bits:0110");
  EXPECT_EQ(bits(1), 0);
  EXPECT_EQ(bits(2), 1);
  EXPECT_EQ(bits(3), 1);
  EXPECT_EQ(bits(4), 0);
  EXPECT_EQ(bits(9), 0);
  const auto shifted = Schedule::shifted(Schedule::f_star(), 6);
  EXPECT_EQ(shifted(1), 1);  // f*(7)
  EXPECT_EQ(shifted(2), 1);  // f*(8)
  EXPECT_EQ(shifted(3), 0);
  EXPECT_EQ(shifted.window(4), "1100");
  EXPECT_EQ(Schedule::f_star().window(8), "10000011");
}

TEST(Schedule, StatsExamples) {
  const auto one = schedule_stats(Schedule::f_star(), 1);
  EXPECT_EQ(one.m1, 1);
  EXPECT_EQ(one.m2, 1);
  EXPECT_FALSE(one.l.has_value());

  const auto zeros = schedule_stats(Schedule::const0(), 10);
  EXPECT_EQ(zeros.m1, 0);
  EXPECT_EQ(zeros.m2, 0);
  EXPECT_EQ(zeros.l, std::optional<std::int64_t>(10));
}

TEST(Schedule, StatsAgainstPredicate) {
  const auto f = Schedule::f_star();
  for (std::int64_t n = 1; n <= 64; ++n) {
    std::int64_t m1 = 0, m2 = 0, l = -1;
    for (std::int64_t k = 1; k <= n; ++k) {
      m1 += fstar_oracle(k);
      m2 += fstar_oracle(k) == 1 && (k == 1 || fstar_oracle(k - 1) == 0);
      if (fstar_oracle(k) == 0) l = k;
    }
    const auto s = schedule_stats(f, n);
    EXPECT_EQ(s.m1, m1) << n;
    EXPECT_EQ(s.m2, m2) << n;
    EXPECT_EQ(s.l.value_or(-1), l) << n;
  }
  const auto eight = schedule_stats(f, 8);
  EXPECT_EQ(eight.m1, 3);
  EXPECT_EQ(eight.m2, 2);
  EXPECT_EQ(eight.l, std::optional<std::int64_t>(6));
}

TEST(Schedule, LastZero) {
  EXPECT_EQ(last_zero(Schedule::f_star(), 9), 9);
  EXPECT_EQ(last_zero(Schedule::f_star(), 8), 6);
  EXPECT_THROW(last_zero(Schedule::const1(), 5), InvalidArgument);
  EXPECT_THROW(last_zero(Schedule::f_star(), 1), InvalidArgument);
}
