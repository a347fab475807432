#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfd/differentials.hpp"
#include "cfd/error.hpp"
#include "cfd/galois.hpp"
#include "cfd/lambda.hpp"
#include "cfd/limits.hpp"
#include "cfd/modulus.hpp"
#include "cfd/oracle.hpp"

namespace cfd {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string detail;  // first failure
};

namespace detail {

inline void record(SuiteResult& r, bool ok, const std::string& what) {
  ++r.cases;
  if (!ok && r.passed) {
    r.passed = false;
    r.detail = what;
  }
}

// Monomials exercised by the engine-equivalence suites: every generator tuple
// of V as a differential, and each of those times lambda_{i,k}^q for every
// level k >= 2 so that the tower rewrite is triggered.
inline std::vector<LambdaMonomial> probe_monomials(const ModulusSpec& spec, const Limits& limits) {
  std::vector<LambdaMonomial> out;
  for (const ExponentTuple& t : enumerate_generators(spec, limits)) {
    const LambdaMonomial m = to_monomial(t, spec, 0);
    out.push_back(m);
    for (int i = 0; i < spec.prime_count(); ++i) {
      for (int k = 2; k <= spec.multiplicity(i); ++k) {
        out.push_back(mono_mul(m, LambdaMonomial::generator(spec, i, k, spec.q()), spec.field()));
      }
    }
  }
  return out;
}

}  // namespace detail

/// |basis| = genus = series count at every anchor.
inline void suite_cardinality(const ModulusSpec& spec, const Limits& limits, SuiteResult& r) {
  const std::int64_t g = genus(spec);
  for (int a = 0; a < spec.prime_count(); ++a) {
    const auto n = static_cast<std::int64_t>(enumerate_basis(spec, a, limits).size());
    const std::int64_t c = count_via_series(spec, a);
    detail::record(r, n == g && c == g,
                   spec.to_string() + " anchor " + std::to_string(a) + ": basis " + std::to_string(n) + ", genus " +
                       std::to_string(g) + ", series " + std::to_string(c));
  }
}

/// Calls visit on every certified-holomorphic differential in a box around
/// the basis (prime powers 0..1, mu_{i,1} up to one window step past its top,
/// e_{i,k} <= 2q - 1 for k >= 2) that has some exponent e_{i,k} >= q.
template <typename Visit>
void for_each_reducible_holomorphic(const ModulusSpec& spec, Visit&& visit) {
  const int q = spec.q();
  LambdaMonomial m = LambdaMonomial::dT(spec);
  std::vector<std::pair<int, int>> ranges(static_cast<std::size_t>(spec.tower_size()));
  for (int i = 0; i < spec.prime_count(); ++i) {
    const int n = spec.multiplicity(i);
    ranges[static_cast<std::size_t>(spec.slot(i, 1))] = {-(n * q - (n + 1) + q - 1), 0};
    for (int k = 2; k <= n; ++k) ranges[static_cast<std::size_t>(spec.slot(i, k))] = {0, 2 * q - 1};
  }
  const int total = spec.prime_count() + spec.tower_size();
  auto recurse = [&](auto&& self, int pos) -> void {
    if (pos == total) {
      bool reducible = false;
      for (int i = 0; i < spec.prime_count(); ++i) {
        for (int k = 2; k <= spec.multiplicity(i); ++k) reducible = reducible || m.exponent(spec, i, k) >= q;
      }
      if (reducible && certified_holomorphic(m, spec)) visit(m);
      return;
    }
    if (pos < spec.prime_count()) {
      for (int v = 0; v <= 1; ++v) {
        m.prime_powers[static_cast<std::size_t>(pos)] = v;
        self(self, pos + 1);
      }
      return;
    }
    const int slot = pos - spec.prime_count();
    for (int v = ranges[static_cast<std::size_t>(slot)].first; v <= ranges[static_cast<std::size_t>(slot)].second; ++v) {
      m.exponents[static_cast<std::size_t>(slot)] = v;
      self(self, pos + 1);
    }
  };
  recurse(recurse, 0);
}

/// Every basis monomial is certified holomorphic, and so is every rewrite
/// output of a certified monomial carrying a reducible exponent.
inline void suite_holomorphy(const ModulusSpec& spec, const Limits& limits, SuiteResult& r) {
  for (int a = 0; a < spec.prime_count(); ++a) {
    for (const ExponentTuple& t : enumerate_basis(spec, a, limits)) {
      detail::record(r, certified_holomorphic(to_monomial(t, spec, a), spec),
                     spec.to_string() + ": basis tuple not certified");
    }
  }
  for_each_reducible_holomorphic(spec, [&](const LambdaMonomial& m) {
    for (int i = 0; i < spec.prime_count(); ++i) {
      for (int k = 2; k <= spec.multiplicity(i); ++k) {
        if (m.exponent(spec, i, k) < spec.q()) continue;
        for (const LambdaMonomial& out : rewrite_once(m, i, k, spec).monomials()) {
          detail::record(r, certified_holomorphic(out, spec),
                         spec.to_string() + ": rewrite of " + format_monomial(m, spec) + " leaves the certified set");
        }
      }
    }
  });
}

/// Tower relations and torsion identities inside the oracle ring, plus
/// multiplicativity of the substitution action on pairs of generators.
inline void suite_relations(const ModulusSpec& spec, const OracleRing& ring, const Limits& limits, SuiteResult& r) {
  const std::string failure = oracle_relation_failure(ring, limits);
  detail::record(r, failure.empty(), spec.to_string() + ": " + failure);
  const Field& f = spec.field();
  std::vector<LambdaMonomial> gens;
  for (int i = 0; i < spec.prime_count(); ++i) {
    for (int k = 1; k <= spec.multiplicity(i); ++k) gens.push_back(LambdaMonomial::generator(spec, i, k));
  }
  std::vector<OracleElement> embedded;
  for (const LambdaMonomial& g : gens) embedded.push_back(oracle_embed(LambdaSum::of(f, g), ring));
  std::vector<std::vector<OracleElement>> products(gens.size());
  for (std::size_t x = 0; x < gens.size(); ++x) {
    for (std::size_t y = x; y < gens.size(); ++y) products[x].push_back(ring.mul(embedded[x], embedded[y]));
  }
  for (const Poly& a : units_enumerate(spec, limits)) {
    const OracleRing::Substitution sub = ring.substitution(a, limits);
    std::vector<OracleElement> images;
    for (const OracleElement& e : embedded) images.push_back(ring.apply(sub, e));
    for (std::size_t x = 0; x < gens.size(); ++x) {
      for (std::size_t y = x; y < gens.size(); ++y) {
        const OracleElement lhs = ring.apply(sub, products[x][y - x]);
        const OracleElement rhs = ring.mul(images[x], images[y]);
        detail::record(r, lhs == rhs, spec.to_string() + ": substitution by " + format_poly(a) + " not multiplicative");
      }
    }
  }
}

/// oracle_embed(canonicalize(s)) = oracle_embed(s) at every anchor.
inline void suite_canonicalize(const ModulusSpec& spec, const OracleRing& ring, const Limits& limits, SuiteResult& r) {
  const Field& f = spec.field();
  for (const LambdaMonomial& m : detail::probe_monomials(spec, limits)) {
    const LambdaSum s = LambdaSum::of(f, m);
    const OracleElement expected = oracle_embed(s, ring);
    for (int a = 0; a < spec.prime_count(); ++a) {
      const LambdaSum c = canonicalize(s, WindowPolicy::standard(spec, a), spec);
      detail::record(r, oracle_embed(c, ring) == expected,
                     spec.to_string() + ": canonicalize changed " + format_monomial(m, spec));
    }
  }
}

/// sigma_apply agrees with substitution x_i -> rho_A(x_i) for every unit.
inline void suite_sigma(const ModulusSpec& spec, const OracleRing& ring, const Limits& limits, SuiteResult& r) {
  const Field& f = spec.field();
  const WindowPolicy w = WindowPolicy::standard(spec, 0);
  std::vector<LambdaSum> sums;
  std::vector<OracleElement> embedded;
  for (const LambdaMonomial& m : detail::probe_monomials(spec, limits)) {
    sums.push_back(LambdaSum::of(f, m));
    embedded.push_back(oracle_embed(sums.back(), ring));
  }
  for (const Poly& a : units_enumerate(spec, limits)) {
    const OracleRing::Substitution sub = ring.substitution(a, limits);
    for (std::size_t j = 0; j < sums.size(); ++j) {
      const OracleElement lhs = oracle_embed(sigma_apply(a, sums[j], spec, w), ring);
      detail::record(r, lhs == ring.apply(sub, embedded[j]),
                     spec.to_string() + ": sigma_" + format_poly(a) + " disagrees on " + format_sum(sums[j], spec));
    }
  }
}

/// Each anchored basis is F_q-independent in the oracle.
inline void suite_independence(const ModulusSpec& spec, const OracleRing& ring, const Limits& limits, SuiteResult& r) {
  const Field& f = spec.field();
  for (int a = 0; a < spec.prime_count(); ++a) {
    std::vector<LambdaSum> elements;
    for (const ExponentTuple& t : enumerate_basis(spec, a, limits)) elements.push_back(LambdaSum::of(f, to_monomial(t, spec, a)));
    detail::record(r, oracle_independent(elements, ring),
                   spec.to_string() + " anchor " + std::to_string(a) + ": basis dependent");
  }
}

/// representation_table succeeds (it verifies identity and multiplicativity)
/// and every matrix is invertible.
inline void suite_homomorphism(const ModulusSpec& spec, const Limits& limits, SuiteResult& r) {
  if (genus(spec) == 0) return;
  for (int a = 0; a < spec.prime_count(); ++a) {
    bool ok = true;
    std::string what = spec.to_string() + " anchor " + std::to_string(a);
    try {
      const RepresentationTable table = representation_table(spec, a, limits);
      for (const FqMatrix& m : table.matrices) ok = ok && m.is_invertible();
      if (!ok) what += ": singular matrix";
    } catch (const Error& e) {
      ok = false;
      what += std::string(": ") + e.what();
    }
    detail::record(r, ok, what);
  }
}

/// Runs every suite over every split modulus of degree <= max_degree.
inline std::vector<SuiteResult> run_verification(const std::shared_ptr<const Field>& field, int max_degree,
                                                 const Limits& limits = {}) {
  std::vector<SuiteResult> results;
  for (const char* name : {"cardinality", "holomorphy", "relations", "canonicalize", "sigma", "independence", "homomorphism"}) {
    results.push_back(SuiteResult{name, true, 0, {}});
  }
  for (const ModulusSpec& spec : enumerate_split_moduli(field, max_degree)) {
    // Suites stop at their first failure; an exception counts as a failure of
    // the suite that raised it.
    auto guarded = [&](SuiteResult& r, const std::function<void()>& body) {
      try {
        body();
      } catch (const Error& e) {
        detail::record(r, false, spec.to_string() + ": " + e.what());
      }
    };
    guarded(results[0], [&] { suite_cardinality(spec, limits, results[0]); });
    guarded(results[1], [&] { suite_holomorphy(spec, limits, results[1]); });
    std::unique_ptr<OracleRing> ring;
    try {
      ring = oracle_build(spec, limits);
    } catch (const Error& e) {
      for (std::size_t s = 2; s <= 5; ++s) detail::record(results[s], false, spec.to_string() + ": " + e.what());
    }
    if (ring) {
      guarded(results[2], [&] { suite_relations(spec, *ring, limits, results[2]); });
      guarded(results[3], [&] { suite_canonicalize(spec, *ring, limits, results[3]); });
      guarded(results[4], [&] { suite_sigma(spec, *ring, limits, results[4]); });
      guarded(results[5], [&] { suite_independence(spec, *ring, limits, results[5]); });
    }
    guarded(results[6], [&] { suite_homomorphism(spec, limits, results[6]); });
  }
  return results;
}

}  // namespace cfd
