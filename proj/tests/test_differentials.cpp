#include <gtest/gtest.h>

#include <set>

#include "cfd/cfd.hpp"

using namespace cfd;

namespace cfd {
void PrintTo(const ExponentTuple& t, std::ostream* os) {
  *os << "(" << t.mu0 << ";";
  for (int v : t.mu) *os << " " << v;
  *os << ")";
}
}  // namespace cfd

namespace {

ModulusSpec make(int q, const char* modulus) {
  const auto [p, r] = prime_power_decompose(q);
  return parse_modulus(modulus, field_make(p, r));
}

ExponentTuple tup(int mu0, std::vector<int> mu) { return {mu0, std::move(mu)}; }

// v_P(c) for nonzero c.
int poly_valuation(Poly c, const Poly& p) {
  int v = 0;
  while (true) {
    auto [quo, rem] = divmod(c, p);
    if (!rem.is_zero()) return v;
    c = quo;
    ++v;
  }
}

// The local different exponent from the Eisenstein polynomial Psi_{P^n}:
// v(Psi'(pi)) = min_j (e v_P(j a_j) + j - 1) over terms with j a_j != 0.
std::int64_t different_from_cyclotomic(const ModulusSpec& spec, int i) {
  const UPoly psi = cyclotomic_polynomial(spec.prime(i), spec.multiplicity(i));
  const Field& f = spec.field();
  const std::int64_t e = psi.degree();
  std::int64_t best = -1;
  for (int j = 1; j <= psi.degree(); ++j) {
    if (j % f.p() == 0 || psi.coeff(j).is_zero()) continue;
    const std::int64_t v = e * poly_valuation(psi.coeff(j), spec.prime(i)) + j - 1;
    if (best < 0 || v < best) best = v;
  }
  return best;
}

// Straight box scan of the defining inequalities, written out independently
// of the library's pruned scan.
std::vector<ExponentTuple> naive_basis(const ModulusSpec& spec, int anchor) {
  const int q = spec.q();
  std::vector<int> lo;
  std::vector<int> hi;
  for (int j = 0; j < spec.prime_count(); ++j) {
    const int n = spec.multiplicity(j);
    for (int k = 1; k <= n; ++k) {
      if (k == 1) {
        lo.push_back((n - 1) * (q - 1));
        hi.push_back(n * q - (n + 1));
      } else {
        lo.push_back(0);
        hi.push_back(q - 1);
      }
    }
  }
  int sum_top = 0;
  for (int v : hi) sum_top += v;
  std::vector<ExponentTuple> out;
  for (int mu0 = 0; mu0 <= sum_top; ++mu0) {
    std::vector<int> mu = lo;
    while (true) {
      bool ok = true;
      std::int64_t inf = -q - static_cast<std::int64_t>(q - 1) * mu0;
      for (int j = 0; j < spec.prime_count() && ok; ++j) {
        const int n = spec.multiplicity(j);
        std::int64_t qpow = 1;
        for (int s = 1; s < n; ++s) qpow *= q;
        std::int64_t v = static_cast<std::int64_t>(n) * qpow * q - (n + 1) * qpow;
        if (j == anchor) v += qpow * (q - 1) * mu0;
        std::int64_t w = qpow;
        for (int k = 1; k <= n; ++k) {
          const int x = mu[static_cast<std::size_t>(spec.slot(j, k))];
          v += (k == 1 ? -w : w) * x;
          inf += (k == 1 ? x : -x);
          w /= q;
        }
        ok = v >= 0;
      }
      if (ok && inf >= 0) out.push_back({mu0, mu});
      std::size_t pos = 0;
      while (pos < mu.size() && mu[pos] == hi[pos]) mu[pos] = lo[pos], ++pos;
      if (pos == mu.size()) break;
      ++mu[pos];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ModulusSpec> sample_moduli(int q, int max_degree) {
  const auto [p, r] = prime_power_decompose(q);
  return enumerate_split_moduli(field_make(p, r), max_degree);
}

}  // namespace

TEST(Differentials, DifferentAndGenusExamples) {
  EXPECT_EQ(different_degree(make(3, "0^2")), 12);
  EXPECT_EQ(different_degree(make(5, "0^1,1^1")), 36);
  EXPECT_EQ(different_degree(make(3, "0^1")), 2);
  EXPECT_EQ(genus(make(5, "0^1,1^1")), 3);
  EXPECT_EQ(genus(make(3, "0^2")), 1);
  EXPECT_EQ(genus(make(3, "0^1,1^1")), 0);
  EXPECT_EQ(genus(make(3, "0^2,1^1")), 4);
  EXPECT_EQ(genus(make(3, "0^3")), 10);
  EXPECT_EQ(genus(make(4, "0^2")), 3);
}

TEST(Differentials, LocalExponentMatchesEisensteinDerivative) {
  for (int q : {2, 3, 4, 5}) {
    for (int n = 1; n <= (q <= 3 ? 4 : 3); ++n) {
      const ModulusSpec spec = make(q, ("1^" + std::to_string(n)).c_str());
      EXPECT_EQ(different_exponent(spec, 0), different_from_cyclotomic(spec, 0)) << "q=" << q << " n=" << n;
    }
  }
}

TEST(Differentials, ValuationExamples) {
  const ModulusSpec t2 = make(3, "0^2");
  const LambdaMonomial m = to_monomial(tup(0, {3, 0}), t2, 0);
  const ValuationReport r = mono_valuations(m, t2);
  EXPECT_EQ(r.finite, (std::vector<std::int64_t>{0}));
  EXPECT_EQ(r.infinity_bound, 0);
  EXPECT_TRUE(certified_holomorphic(m, t2));
  EXPECT_FALSE(certified_holomorphic(to_monomial(tup(0, {4, 0}), t2, 0), t2));
  EXPECT_FALSE(certified_holomorphic(to_monomial(tup(0, {2, 0}), t2, 0), t2));

  const ModulusSpec s = make(5, "0^1,1^1");
  const ValuationReport rs = mono_valuations(to_monomial(tup(0, {2, 3}), s, 0), s);
  EXPECT_EQ(rs.finite, (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(rs.infinity_bound, 0);
}

TEST(Differentials, TupleRoundTrip) {
  const ModulusSpec spec = make(3, "0^2,1^1");
  const ExponentTuple t = tup(1, {3, 1, 1});
  EXPECT_EQ(to_tuple(to_monomial(t, spec, 0).key(), spec, 0), t);
  EXPECT_EQ(fold_mu0(t, spec, 0), tup(0, {1, 1, 1}));
}

TEST(Differentials, BasisExamples) {
  EXPECT_EQ(enumerate_basis(make(3, "0^2"), 0), (std::vector<ExponentTuple>{tup(0, {3, 0})}));
  EXPECT_EQ(enumerate_basis(make(5, "0^1,1^1"), 0),
            (std::vector<ExponentTuple>{tup(0, {2, 3}), tup(0, {3, 2}), tup(0, {3, 3})}));
  EXPECT_EQ(enumerate_basis(make(3, "0^2,1^1"), 0),
            (std::vector<ExponentTuple>{tup(0, {2, 0, 1}), tup(0, {3, 0, 0}), tup(0, {3, 0, 1}), tup(0, {3, 1, 1})}));
  EXPECT_TRUE(enumerate_basis(make(3, "0^1,1^1"), 0).empty());
  const auto t3 = enumerate_basis(make(3, "0^3"), 0);
  ASSERT_EQ(t3.size(), 10u);
  EXPECT_EQ(t3.front(), tup(0, {4, 0, 0}));
  EXPECT_EQ(t3.back(), tup(1, {5, 0, 0}));
}

TEST(Differentials, BasisAgreesWithNaiveScanAndGenus) {
  for (int q : {2, 3, 4, 5}) {
    for (const ModulusSpec& spec : sample_moduli(q, q == 2 ? 5 : 3)) {
      for (int a = 0; a < spec.prime_count(); ++a) {
        const auto basis = enumerate_basis(spec, a);
        EXPECT_EQ(basis, naive_basis(spec, a)) << spec.to_string() << " anchor " << a;
        EXPECT_EQ(static_cast<std::int64_t>(basis.size()), genus(spec)) << spec.to_string();
        EXPECT_EQ(count_via_series(spec, a), genus(spec)) << spec.to_string();
        EXPECT_TRUE(std::is_sorted(basis.begin(), basis.end()));
        for (const ExponentTuple& t : basis) {
          EXPECT_TRUE(in_basis_system(t, spec, a));
          EXPECT_TRUE(certified_holomorphic(to_monomial(t, spec, a), spec));
        }
      }
    }
  }
}

TEST(Differentials, SquareFreeClosedForm) {
  // For square-free M: mu0 >= 0, 0 <= mu_j <= q-2, sum mu_j - (q-1) mu0 >= q.
  for (int q : {3, 4, 5}) {
    for (const ModulusSpec& spec : sample_moduli(q, 3)) {
      if (!spec.is_square_free()) continue;
      const int r = spec.prime_count();
      std::set<ExponentTuple> expected;
      for (int mu0 = 0; mu0 <= r; ++mu0) {
        std::vector<int> mu(static_cast<std::size_t>(r), 0);
        while (true) {
          int s = 0;
          for (int v : mu) s += v;
          if (s - (q - 1) * mu0 >= q) expected.insert({mu0, mu});
          std::size_t pos = 0;
          while (pos < mu.size() && mu[pos] == q - 2) mu[pos] = 0, ++pos;
          if (pos == mu.size()) break;
          ++mu[pos];
        }
      }
      const auto basis = enumerate_basis(spec, 0);
      EXPECT_EQ(std::set<ExponentTuple>(basis.begin(), basis.end()), expected) << spec.to_string();
    }
  }
}

TEST(Differentials, GeneratorExamples) {
  EXPECT_EQ(enumerate_generators(make(3, "0^2")), (std::vector<ExponentTuple>{tup(0, {3, 0})}));
  const auto t3 = enumerate_generators(make(3, "0^3"));
  ASSERT_EQ(t3.size(), 10u);
  std::map<int, int> by_mu1;
  for (const ExponentTuple& t : t3) ++by_mu1[t.mu[0]];
  EXPECT_EQ(by_mu1, (std::map<int, int>{{3, 1}, {4, 3}, {5, 6}}));
  EXPECT_EQ(enumerate_generators(make(5, "0^1,1^1")), enumerate_basis(make(5, "0^1,1^1"), 0));
  for (const ExponentTuple& t : t3) EXPECT_TRUE(in_generator_system(t, make(3, "0^3")));
}

TEST(Differentials, SeriesExamples) {
  EXPECT_EQ(count_via_series(make(3, "0^3"), 0), 10);
  EXPECT_EQ(count_via_series(make(5, "0^1,1^1"), 1), 3);
  EXPECT_EQ(count_via_series(make(4, "0^2"), 0), 3);
  const CountSeries s = local_series(3, 2);
  // x^{-3} (1 + x)(1 + x + x^2)
  EXPECT_EQ(s.coeffs, (std::map<int, std::int64_t>{{-3, 1}, {-2, 2}, {-1, 2}, {0, 1}}));
}

TEST(Differentials, PrimePowerValuationsAreDistinct) {
  for (int q : {2, 3, 4, 5}) {
    for (int n = 2; n <= (q == 2 ? 5 : 3); ++n) {
      const ModulusSpec spec = make(q, ("0^" + std::to_string(n)).c_str());
      auto v = basis_valuations(spec, 0);
      std::sort(v.begin(), v.end());
      EXPECT_EQ(std::adjacent_find(v.begin(), v.end()), v.end()) << spec.to_string();
    }
  }
}

TEST(Differentials, Errors) {
  Limits small;
  small.max_genus = 5;
  try {
    enumerate_basis(make(3, "0^3"), 0, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
  EXPECT_THROW(enumerate_basis(make(3, "0^2"), 1), Error);
  EXPECT_THROW(to_monomial(tup(0, {1}), make(3, "0^2"), 0), Error);
}
