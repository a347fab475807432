#include <gtest/gtest.h>

#include "cfd/cfd.hpp"

using namespace cfd;

namespace {

ModulusSpec make(int q, const char* modulus) {
  const auto [p, r] = prime_power_decompose(q);
  return parse_modulus(modulus, field_make(p, r));
}

LambdaMonomial mono(const ModulusSpec& spec, std::vector<int> exponents, bool dt = false, int scalar = 1,
                    std::vector<int> powers = {}) {
  LambdaMonomial m = dt ? LambdaMonomial::dT(spec) : LambdaMonomial::one(spec);
  m.exponents = std::move(exponents);
  if (!powers.empty()) m.prime_powers = std::move(powers);
  m.scalar = spec.field().from_int(scalar);
  return m;
}

LambdaSum sum_of(const ModulusSpec& spec, std::initializer_list<LambdaMonomial> terms) {
  LambdaSum s(spec.field());
  for (const auto& t : terms) s.add(t);
  return s;
}

}  // namespace

TEST(Lambda, MonoMul) {
  const ModulusSpec spec = make(3, "0^2");
  const LambdaMonomial a = LambdaMonomial::generator(spec, 0, 2);
  EXPECT_EQ(mono_mul(a, a, spec.field()).key(), LambdaMonomial::generator(spec, 0, 2, 2).key());
  const LambdaMonomial b = mono_mul(mono(spec, {-3, 0}, true, 2), LambdaMonomial::generator(spec, 0, 1), spec.field());
  EXPECT_EQ(b.exponents, (std::vector<int>{-2, 0}));
  EXPECT_EQ(b.scalar.v, 2);
  EXPECT_TRUE(b.has_dT);
  try {
    mono_mul(LambdaMonomial::dT(spec), LambdaMonomial::dT(spec), spec.field());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DTSquared);
  }
}

TEST(Lambda, RewriteOnceExamples) {
  const ModulusSpec spec = make(3, "0^2");
  EXPECT_EQ(rewrite_once(LambdaMonomial::generator(spec, 0, 2, 3), 0, 2, spec),
            sum_of(spec, {mono(spec, {1, 0}), mono(spec, {2, 1})}));
  EXPECT_EQ(rewrite_once(LambdaMonomial::generator(spec, 0, 2, 4), 0, 2, spec),
            sum_of(spec, {mono(spec, {1, 1}), mono(spec, {2, 2})}));
  try {
    rewrite_once(LambdaMonomial::generator(spec, 0, 2, 2), 0, 2, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotReducible);
  }
}

TEST(Lambda, RewriteAtUpperLevelShiftsDown) {
  const ModulusSpec spec = make(3, "0^3");
  const LambdaSum out = rewrite_once(mono(spec, {-4, 1, 3}, true), 0, 3, spec);
  EXPECT_EQ(out, sum_of(spec, {mono(spec, {-4, 2, 0}, true), mono(spec, {-2, 1, 1}, true)}));
}

TEST(Lambda, CanonicalizeExamples) {
  const ModulusSpec t3 = make(3, "0^3");
  const WindowPolicy w3 = WindowPolicy::standard(t3, 0);
  EXPECT_EQ(w3.windows[0], std::make_pair(4, 5));
  EXPECT_EQ(canonicalize(sum_of(t3, {mono(t3, {-3, 0, 0}, true)}), w3, t3),
            sum_of(t3, {mono(t3, {-5, 0, 0}, true, 2, {1})}));

  const ModulusSpec t2 = make(3, "0^2");
  const WindowPolicy w2 = WindowPolicy::standard(t2, 0);
  const LambdaSum canonical = sum_of(t2, {mono(t2, {-3, 0}, true)});
  EXPECT_EQ(canonicalize(canonical, w2, t2), canonical);
  EXPECT_EQ(canonicalize(sum_of(t2, {mono(t2, {-4, 3}, true)}), w2, t2),
            sum_of(t2, {mono(t2, {-3, 0}, true), mono(t2, {-2, 1}, true)}));
}

TEST(Lambda, CanonicalizeNegativePower) {
  const ModulusSpec spec = make(3, "0^2");
  try {
    canonicalize(sum_of(spec, {mono(spec, {-6, 0}, true)}), WindowPolicy::standard(spec, 0), spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativePower);
  }
  // Two powers of P are enough to bring it into the window.
  EXPECT_NO_THROW(canonicalize(sum_of(spec, {mono(spec, {-6, 0}, true, 1, {2})}), WindowPolicy::standard(spec, 0), spec));
}

TEST(Lambda, CanonicalizeRebasesOtherPrimes) {
  // P_2 = T - 1 = P_1 - 1 at anchor 1 becomes two terms.
  const ModulusSpec spec = make(3, "0^1,1^1");
  const LambdaSum out =
      canonicalize(sum_of(spec, {mono(spec, {-1, -1}, true, 1, {0, 1})}), WindowPolicy::standard(spec, 0), spec);
  EXPECT_EQ(out, sum_of(spec, {mono(spec, {-1, -1}, true, 1, {1, 0}), mono(spec, {-1, -1}, true, 2, {0, 0})}));
}

class CanonicalForm : public ::testing::TestWithParam<std::pair<int, const char*>> {};

// Output shape plus value preservation against the oracle over a box of
// inputs with powers of every prime and reducible upper exponents.
TEST_P(CanonicalForm, ShapeAndValue) {
  const ModulusSpec spec = make(GetParam().first, GetParam().second);
  const int q = spec.q();
  const auto ring = oracle_build(spec);
  for (int anchor = 0; anchor < spec.prime_count(); ++anchor) {
    const WindowPolicy w = WindowPolicy::standard(spec, anchor);
    int checked = 0;
    // Odometer over e_{i,1} in [-(window top + q - 1), 1], e_{i,k} in [0, q + 1], powers in [0, 1].
    std::vector<int> lo;
    std::vector<int> hi;
    for (int i = 0; i < spec.prime_count(); ++i) {
      lo.push_back(0);
      hi.push_back(1);
    }
    for (int i = 0; i < spec.prime_count(); ++i) {
      for (int k = 1; k <= spec.multiplicity(i); ++k) {
        if (k == 1) {
          lo.push_back(-(w.windows[static_cast<std::size_t>(i)].second + q - 1));
          hi.push_back(1);
        } else {
          lo.push_back(0);
          hi.push_back(q + 1);
        }
      }
    }
    std::vector<int> cur = lo;
    while (true) {
      LambdaMonomial m = LambdaMonomial::dT(spec);
      m.prime_powers.assign(cur.begin(), cur.begin() + spec.prime_count());
      m.exponents.assign(cur.begin() + spec.prime_count(), cur.end());
      const LambdaSum s = LambdaSum::of(spec.field(), m);
      try {
        const LambdaSum c = canonicalize(s, w, spec);
        for (const auto& [key, coeff] : c.terms()) {
          for (int i = 0; i < spec.prime_count(); ++i) {
            const int mu = -key.exponents[static_cast<std::size_t>(spec.slot(i, 1))];
            EXPECT_GE(mu, w.windows[static_cast<std::size_t>(i)].first);
            EXPECT_LE(mu, w.windows[static_cast<std::size_t>(i)].second);
            if (i != anchor) {
              EXPECT_EQ(key.prime_powers[static_cast<std::size_t>(i)], 0);
            }
            for (int k = 2; k <= spec.multiplicity(i); ++k) {
              EXPECT_GE(key.exponents[static_cast<std::size_t>(spec.slot(i, k))], 0);
              EXPECT_LT(key.exponents[static_cast<std::size_t>(spec.slot(i, k))], q);
            }
          }
        }
        EXPECT_EQ(oracle_embed(c, *ring), oracle_embed(s, *ring)) << format_monomial(m, spec);
        ++checked;
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NegativePower);
      }
      std::size_t pos = 0;
      while (pos < cur.size() && cur[pos] == hi[pos]) cur[pos] = lo[pos], ++pos;
      if (pos == cur.size()) break;
      ++cur[pos];
    }
    EXPECT_GT(checked, 0);
  }
}

INSTANTIATE_TEST_SUITE_P(Towers, CanonicalForm,
                         ::testing::Values(std::make_pair(3, "0^2"), std::make_pair(3, "0^3"),
                                           std::make_pair(3, "0^1,1^1"), std::make_pair(3, "0^2,1^1"),
                                           std::make_pair(4, "0^2")));

TEST(Lambda, RewriteInfinityBoundShift) {
  // Lowering lambda_{i,k}^q to lambda_{i,k-1} gains q-1 at infinity; the
  // lambda_{i,1}^{q-1} term keeps the input's bound.
  for (auto [q, m] : {std::pair{3, "0^2"}, std::pair{3, "0^3"}, std::pair{4, "0^2,1^1"}, std::pair{5, "0^2"}}) {
    const auto [p, r] = prime_power_decompose(q);
    const ModulusSpec spec = parse_modulus(m, field_make(p, r));
    const int n = spec.multiplicity(0);
    int seen = 0;
    for (int e1 = -2 * q; e1 <= 2; ++e1) {
      for (int k = 2; k <= n; ++k) {
        for (int ek = q; ek <= 2 * q; ++ek) {
          for (int below = 0; below <= 1; ++below) {
            LambdaMonomial mono = LambdaMonomial::dT(spec);
            mono.exponent(spec, 0, 1) = e1;
            mono.exponent(spec, 0, k) = ek;
            if (k > 2) mono.exponent(spec, 0, k - 1) = below;
            const std::int64_t before = mono_valuations(mono, spec).infinity_bound;
            LambdaMonomial lowered = mono;
            lowered.exponent(spec, 0, k) -= q;
            lowered.exponent(spec, 0, k - 1) += 1;
            LambdaMonomial twisted = mono;
            twisted.exponent(spec, 0, k) -= q - 1;
            twisted.exponent(spec, 0, 1) += q - 1;
            EXPECT_EQ(mono_valuations(lowered, spec).infinity_bound, before + q - 1);
            EXPECT_EQ(mono_valuations(twisted, spec).infinity_bound, before);
            LambdaSum expected(spec.field());
            expected.add(lowered);
            expected.add(twisted);
            EXPECT_EQ(rewrite_once(mono, 0, k, spec), expected);
            ++seen;
          }
        }
      }
    }
    EXPECT_GT(seen, 0) << m;
  }
}
