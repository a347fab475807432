#include <gtest/gtest.h>

#include <set>

#include "cfd/cfd.hpp"

using namespace cfd;

namespace {

ModulusSpec make(int q, const char* modulus) {
  const auto [p, r] = prime_power_decompose(q);
  return parse_modulus(modulus, field_make(p, r));
}

using Seq = std::vector<std::int64_t>;

}  // namespace

TEST(Gaps, OrderSequenceExamples) {
  EXPECT_EQ(order_sequence(make(3, "0^2")), (Seq{0}));
  EXPECT_EQ(order_sequence(make(4, "0^2")), (Seq{0, 1, 4}));
  EXPECT_EQ(gap_sequence(make(4, "0^2")), (Seq{1, 2, 5}));
  EXPECT_EQ(order_sequence(make(3, "0^3")), (Seq{0, 1, 2, 3, 4, 6, 9, 10, 12, 18}));
  EXPECT_EQ(gap_sequence(make(3, "0^3")), (Seq{1, 2, 3, 4, 5, 7, 10, 11, 13, 19}));
}

TEST(Gaps, NonGapsFormASemigroup) {
  // The complement of the gap set in the positive integers is closed under
  // addition, there are exactly g gaps, 1 is a gap, and all gaps are < 2g.
  for (auto [q, m] : {std::pair{2, "0^3"}, std::pair{2, "0^4"}, std::pair{2, "0^5"}, std::pair{3, "0^2"},
                      std::pair{3, "0^3"}, std::pair{4, "0^2"}, std::pair{4, "0^3"}, std::pair{5, "0^2"},
                      std::pair{5, "2^3"}, std::pair{7, "0^2"}, std::pair{8, "0^2"}, std::pair{9, "0^2"}}) {
    const ModulusSpec spec = make(q, m);
    const Seq gaps = gap_sequence(spec);
    const std::int64_t g = genus(spec);
    ASSERT_EQ(static_cast<std::int64_t>(gaps.size()), g) << spec.to_string();
    const std::set<std::int64_t> gap_set(gaps.begin(), gaps.end());
    EXPECT_EQ(gap_set.size(), gaps.size());
    EXPECT_TRUE(gap_set.count(1));
    EXPECT_LE(*gap_set.rbegin(), 2 * g - 1);
    for (std::int64_t a = 1; a <= 2 * g; ++a) {
      for (std::int64_t b = a; a + b <= 2 * g; ++b) {
        if (!gap_set.count(a) && !gap_set.count(b)) {
          EXPECT_FALSE(gap_set.count(a + b)) << spec.to_string() << " " << a << "+" << b;
        }
      }
    }
  }
}

TEST(Gaps, OrderSequenceRequiresPrimePower) {
  for (const char* m : {"0^1", "0^1,1^1", "0^2,1^1"}) {
    try {
      order_sequence(make(3, m));
      FAIL() << m;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
  }
}

TEST(Gaps, ValuationMultisets) {
  const ValuationMultiset a = valuation_multiset(make(3, "0^2"), 0);
  EXPECT_EQ(a.values, (Seq{0}));
  EXPECT_FALSE(a.caveat);

  const ValuationMultiset b = valuation_multiset(make(3, "0^2,1^1"), 0);
  EXPECT_EQ(b.values, (Seq{0, 0, 1, 3}));
  EXPECT_TRUE(b.caveat);

  const ValuationMultiset c = valuation_multiset(make(5, "0^1,1^1"), 1);
  EXPECT_EQ(c.values, (Seq{0, 0, 1}));
  EXPECT_TRUE(c.caveat);

  EXPECT_THROW(valuation_multiset(make(3, "0^1,1^1"), 0), Error);
}

TEST(Gaps, MultisetMatchesMonomialValuations) {
  const ModulusSpec spec = make(3, "0^2,1^2");
  for (int a = 0; a < spec.prime_count(); ++a) {
    Seq direct;
    for (const ExponentTuple& t : enumerate_basis(spec, a)) direct.push_back(mono_valuations(to_monomial(t, spec, a), spec).finite[static_cast<std::size_t>(a)]);
    std::sort(direct.begin(), direct.end());
    EXPECT_EQ(valuation_multiset(spec, a).values, direct);
  }
}
