#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cfd/differentials.hpp"
#include "cfd/error.hpp"
#include "cfd/limits.hpp"
#include "cfd/modulus.hpp"

namespace cfd {

/// finite(anchor) of every anchored basis element, in basis order.
inline std::vector<std::int64_t> basis_valuations(const ModulusSpec& spec, int anchor, const Limits& limits = {}) {
  std::vector<std::int64_t> out;
  for (const ExponentTuple& t : enumerate_basis(spec, anchor, limits)) {
    out.push_back(mono_valuations(to_monomial(t, spec, anchor), spec).finite.at(static_cast<std::size_t>(anchor)));
  }
  return out;
}

/// Orders of the holomorphic differentials at the totally ramified prime of
/// K_{q,P^n}, n >= 2. Strictly increasing, one entry per basis element.
inline std::vector<std::int64_t> order_sequence(const ModulusSpec& spec, const Limits& limits = {}) {
  if (!spec.is_prime_power() || spec.multiplicity(0) < 2) {
    fail(ErrorKind::InvalidInput, "order sequences need M = P^n with n >= 2");
  }
  std::vector<std::int64_t> orders = basis_valuations(spec, 0, limits);
  if (orders.empty()) fail(ErrorKind::InvalidInput, "genus 0: no holomorphic differentials");
  std::sort(orders.begin(), orders.end());
  if (std::adjacent_find(orders.begin(), orders.end()) != orders.end()) {
    fail(ErrorKind::InternalInvariant, "basis valuations at P collide for " + spec.to_string());
  }
  return orders;
}

/// Gaps are orders shifted by one.
inline std::vector<std::int64_t> gap_sequence(const ModulusSpec& spec, const Limits& limits = {}) {
  std::vector<std::int64_t> gaps = order_sequence(spec, limits);
  for (auto& g : gaps) g += 1;
  return gaps;
}

struct ValuationMultiset {
  std::vector<std::int64_t> values;  // sorted, repeats kept
  bool caveat = false;               // set when M has several primes
};

inline ValuationMultiset valuation_multiset(const ModulusSpec& spec, int anchor, const Limits& limits = {}) {
  ValuationMultiset out;
  out.values = basis_valuations(spec, anchor, limits);
  if (out.values.empty()) fail(ErrorKind::InvalidInput, "genus 0: no holomorphic differentials");
  std::sort(out.values.begin(), out.values.end());
  out.caveat = spec.prime_count() > 1;
  return out;
}

}  // namespace cfd
