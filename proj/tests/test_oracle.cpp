#include <gtest/gtest.h>

#include "cfd/cfd.hpp"

using namespace cfd;

namespace {

ModulusSpec make(int q, const char* modulus) {
  const auto [p, r] = prime_power_decompose(q);
  return parse_modulus(modulus, field_make(p, r));
}

LambdaSum basis_sum(const ModulusSpec& spec, const ExponentTuple& t, int anchor) {
  return LambdaSum::of(spec.field(), to_monomial(t, spec, anchor));
}

}  // namespace

TEST(Oracle, Dimensions) {
  const ModulusSpec a = make(3, "0^2");
  const ModulusSpec b = make(3, "0^1,1^1");
  const ModulusSpec c = make(3, "0^1");
  EXPECT_EQ(oracle_build(a)->dim(), 6);
  EXPECT_EQ(oracle_build(b)->dim(), 4);
  EXPECT_EQ(oracle_build(c)->dim(), 2);
  EXPECT_EQ(oracle_build(a)->local(0).psi(), cyclotomic_polynomial(Poly::t(a.field()), 2));
}

TEST(Oracle, EmbeddedRelations) {
  const ModulusSpec spec = make(3, "0^2");
  const Field& f = spec.field();
  const auto ring = oracle_build(spec);

  LambdaMonomial minus_p = LambdaMonomial::one(spec);
  minus_p.prime_powers[0] = 1;
  minus_p.scalar = f.minus_one();
  EXPECT_EQ(oracle_embed(LambdaSum::of(f, LambdaMonomial::generator(spec, 0, 1, 2)), *ring),
            oracle_embed(LambdaSum::of(f, minus_p), *ring));

  LambdaMonomial l12 = LambdaMonomial::generator(spec, 0, 2, 3);
  EXPECT_EQ(oracle_embed(LambdaSum::of(f, l12), *ring), oracle_embed(rewrite_once(l12, 0, 2, spec), *ring));

  LambdaMonomial inverse = LambdaMonomial::generator(spec, 0, 1, -1);
  const LambdaSum product = LambdaSum::of(f, inverse) * LambdaSum::of(f, LambdaMonomial::generator(spec, 0, 1));
  EXPECT_EQ(oracle_embed(product, *ring), oracle_embed(LambdaSum::of(f, LambdaMonomial::one(spec)), *ring));

  LambdaSum mixed(f);
  mixed.add(LambdaMonomial::one(spec));
  mixed.add(LambdaMonomial::dT(spec));
  EXPECT_THROW(oracle_embed(mixed, *ring), Error);
}

TEST(Oracle, BasesAreIndependent) {
  for (auto [q, m] : {std::pair{3, "0^3"}, std::pair{5, "0^1,1^1"}, std::pair{3, "0^2,1^1"}, std::pair{4, "0^2"}}) {
    const ModulusSpec spec = make(q, m);
    const auto ring = oracle_build(spec);
    for (int a = 0; a < spec.prime_count(); ++a) {
      std::vector<LambdaSum> elements;
      for (const ExponentTuple& t : enumerate_basis(spec, a)) elements.push_back(basis_sum(spec, t, a));
      EXPECT_TRUE(oracle_independent(elements, *ring)) << spec.to_string();
      elements.push_back(elements.front().scaled(spec.field().from_int(2)));
      EXPECT_FALSE(oracle_independent(elements, *ring)) << spec.to_string();
    }
  }
}

TEST(Oracle, DependentCombinationDetected) {
  // b0 + b1 and b0 - b1 together with b0 span only two dimensions.
  const ModulusSpec spec = make(5, "0^1,1^1");
  const auto ring = oracle_build(spec);
  const auto basis = enumerate_basis(spec, 0);
  const LambdaSum b0 = basis_sum(spec, basis[0], 0);
  const LambdaSum b1 = basis_sum(spec, basis[1], 0);
  LambdaSum sum = b0;
  sum.add(b1);
  LambdaSum diff = b0;
  diff.add(b1.scaled(spec.field().minus_one()));
  EXPECT_TRUE(oracle_independent({sum, diff}, *ring));
  EXPECT_FALSE(oracle_independent({sum, diff, b0}, *ring));
}

TEST(Oracle, DefiningRelationsHold) {
  for (int q : {2, 3, 4}) {
    const auto [p, r] = prime_power_decompose(q);
    for (const ModulusSpec& spec : enumerate_split_moduli(field_make(p, r), 3)) {
      if (euler_phi(spec) > 36) continue;
      const auto ring = oracle_build(spec);
      EXPECT_EQ(oracle_relation_failure(*ring), "") << "q=" << q << " " << spec.to_string();
    }
  }
}

TEST(Oracle, SubstitutionIsAGroupAction) {
  const ModulusSpec spec = make(3, "0^2,1^1");
  const auto ring = oracle_build(spec);
  const auto units = units_enumerate(spec);
  const auto basis = enumerate_basis(spec, 0);
  const OracleElement e = oracle_embed(basis_sum(spec, basis.back(), 0), *ring);
  LambdaMonomial p = LambdaMonomial::one(spec);
  p.prime_powers[1] = 2;
  const OracleElement fixed = oracle_embed(LambdaSum::of(spec.field(), p), *ring);
  for (const Poly& a : units) {
    EXPECT_EQ(ring->substitute(a, fixed), fixed);
    for (const Poly& b : units) {
      EXPECT_EQ(ring->substitute(a, ring->substitute(b, e)), ring->substitute((a * b) % spec.modulus(), e));
    }
  }
}

TEST(Oracle, SizeLimit) {
  Limits small;
  small.max_oracle_dim = 5;
  try {
    oracle_build(make(3, "0^2"), small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
}
