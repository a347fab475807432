#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/lambda.hpp"
#include "cfd/limits.hpp"
#include "cfd/modulus.hpp"

namespace cfd {

/// Integer data of a basis or generator differential
///   P_anchor^{mu0} * prod_j [ prod_{k>=2} lambda_{j,k}^{mu_{j,k}} ] lambda_{j,1}^{-mu_{j,1}} dT.
/// mu is flat in ModulusSpec::slot order. Ordering is lexicographic on (mu0, mu).
struct ExponentTuple {
  int mu0 = 0;
  std::vector<int> mu;

  friend auto operator<=>(const ExponentTuple&, const ExponentTuple&) = default;
};

/// Exact valuations at the ramified finite primes and a certified lower bound
/// valid at every prime above infinity.
struct ValuationReport {
  std::vector<std::int64_t> finite;
  std::int64_t infinity_bound = 0;
};

namespace detail {

inline std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace detail

/// Exponent of the different at the prime above P_i in K_{q,P_i^{n_i}}:
/// s_i = n q^n - (n+1) q^{n-1} (which is q-2 in the tame case n = 1).
inline std::int64_t different_exponent(const ModulusSpec& spec, int i) {
  const std::int64_t q = spec.q();
  const int n = spec.multiplicity(i);
  return n * detail::ipow(q, n) - (n + 1) * detail::ipow(q, n - 1);
}

/// Degree of the different of K_{q,M}/F_q(T): the finite primes contribute
/// (Phi(M)/Phi(P_i^{n_i})) s_i each and infinity (Phi(M)/(q-1))(q-2).
inline std::int64_t different_degree(const ModulusSpec& spec) {
  const std::int64_t q = spec.q();
  const std::int64_t phi = euler_phi(spec);
  std::int64_t total = phi / (q - 1) * (q - 2);
  for (int i = 0; i < spec.prime_count(); ++i) {
    const std::int64_t local_phi = (q - 1) * detail::ipow(q, spec.multiplicity(i) - 1);
    total += phi / local_phi * different_exponent(spec, i);
  }
  return total;
}

/// Riemann-Hurwitz: g = 1 - Phi(M) + deg(D)/2.
inline std::int64_t genus(const ModulusSpec& spec) {
  const std::int64_t d = different_degree(spec);
  if (d % 2 != 0) fail(ErrorKind::InternalInvariant, "different degree " + std::to_string(d) + " is odd");
  const std::int64_t g = 1 - euler_phi(spec) + d / 2;
  if (g < 0) fail(ErrorKind::InternalInvariant, "negative genus for " + spec.to_string());
  return g;
}

inline ValuationReport mono_valuations(const LambdaMonomial& m, const ModulusSpec& spec) {
  const std::int64_t q = spec.q();
  const std::int64_t delta = m.has_dT ? 1 : 0;
  ValuationReport report;
  report.infinity_bound = -delta * q;
  for (int i = 0; i < spec.prime_count(); ++i) {
    const int n = spec.multiplicity(i);
    const std::int64_t power = m.prime_powers.at(static_cast<std::size_t>(i));
    std::int64_t v = delta * different_exponent(spec, i) + detail::ipow(q, n - 1) * (q - 1) * power;
    for (int k = 1; k <= n; ++k) v += detail::ipow(q, n - k) * m.exponent(spec, i, k);
    report.finite.push_back(v);

    report.infinity_bound -= (q - 1) * power;
    report.infinity_bound -= m.exponent(spec, i, 1);
    for (int k = 2; k <= n; ++k) report.infinity_bound -= std::max(m.exponent(spec, i, k), 0);
  }
  return report;
}

/// Sufficient holomorphy test: all finite valuations and the infinity bound
/// are non-negative.
inline bool certified_holomorphic(const LambdaMonomial& m, const ModulusSpec& spec) {
  const ValuationReport report = mono_valuations(m, spec);
  if (report.infinity_bound < 0) return false;
  return std::all_of(report.finite.begin(), report.finite.end(), [](std::int64_t v) { return v >= 0; });
}

/// The differential named by a tuple, with scalar 1 and P_anchor^{mu0}.
inline LambdaMonomial to_monomial(const ExponentTuple& t, const ModulusSpec& spec, int anchor) {
  if (t.mu.size() != static_cast<std::size_t>(spec.tower_size())) {
    fail(ErrorKind::InvalidInput, "tuple does not match the tower");
  }
  LambdaMonomial m = LambdaMonomial::dT(spec);
  m.prime_powers.at(static_cast<std::size_t>(anchor)) = t.mu0;
  for (int j = 0; j < spec.prime_count(); ++j) {
    m.exponent(spec, j, 1) = -t.mu[static_cast<std::size_t>(spec.slot(j, 1))];
    for (int k = 2; k <= spec.multiplicity(j); ++k) {
      m.exponent(spec, j, k) = t.mu[static_cast<std::size_t>(spec.slot(j, k))];
    }
  }
  return m;
}

/// Inverse of to_monomial for monomials whose only coefficient power sits at
/// the anchor. The scalar is ignored.
inline ExponentTuple to_tuple(const LambdaKey& key, const ModulusSpec& spec, int anchor) {
  ExponentTuple t;
  t.mu0 = key.prime_powers.at(static_cast<std::size_t>(anchor));
  t.mu = key.exponents;
  for (int j = 0; j < spec.prime_count(); ++j) {
    t.mu[static_cast<std::size_t>(spec.slot(j, 1))] = -key.exponents[static_cast<std::size_t>(spec.slot(j, 1))];
  }
  return t;
}

/// Absorbs P_anchor^{mu0} = (-lambda_{anchor,1}^{q-1})^{mu0} into mu_{anchor,1}.
inline ExponentTuple fold_mu0(const ExponentTuple& t, const ModulusSpec& spec, int anchor) {
  ExponentTuple out = t;
  out.mu[static_cast<std::size_t>(spec.slot(anchor, 1))] -= (spec.q() - 1) * t.mu0;
  out.mu0 = 0;
  return out;
}

namespace detail {

inline std::int64_t local_finite(const ExponentTuple& t, const ModulusSpec& spec, int i) {
  const std::int64_t q = spec.q();
  const int n = spec.multiplicity(i);
  std::int64_t v = different_exponent(spec, i) - detail::ipow(q, n - 1) * t.mu[static_cast<std::size_t>(spec.slot(i, 1))];
  for (int k = 2; k <= n; ++k) v += detail::ipow(q, n - k) * t.mu[static_cast<std::size_t>(spec.slot(i, k))];
  return v;
}

inline std::int64_t infinity_slack(const ExponentTuple& t, const ModulusSpec& spec) {
  std::int64_t v = -static_cast<std::int64_t>(spec.q() - 1) * t.mu0 - spec.q();
  for (int j = 0; j < spec.prime_count(); ++j) {
    v += t.mu[static_cast<std::size_t>(spec.slot(j, 1))];
    for (int k = 2; k <= spec.multiplicity(j); ++k) v -= t.mu[static_cast<std::size_t>(spec.slot(j, k))];
  }
  return v;
}

inline std::int64_t window_top(const ModulusSpec& spec, int j) {
  const int n = spec.multiplicity(j);
  return static_cast<std::int64_t>(n) * spec.q() - (n + 1);
}

inline bool upper_slots_in_range(const ExponentTuple& t, const ModulusSpec& spec) {
  for (int j = 0; j < spec.prime_count(); ++j) {
    for (int k = 2; k <= spec.multiplicity(j); ++k) {
      const int v = t.mu[static_cast<std::size_t>(spec.slot(j, k))];
      if (v < 0 || v > spec.q() - 1) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Membership in the canonical basis at the anchor: the anchored finite
/// inequality (with its +q^{n-1}(q-1) mu0 term), the finite inequalities at
/// the other primes, the infinity inequality, the mu_{j,1} windows and
/// 0 <= mu_{j,k} <= q-1 for k >= 2.
inline bool in_basis_system(const ExponentTuple& t, const ModulusSpec& spec, int anchor) {
  const std::int64_t q = spec.q();
  if (t.mu0 < 0 || !detail::upper_slots_in_range(t, spec)) return false;
  for (int j = 0; j < spec.prime_count(); ++j) {
    const int n = spec.multiplicity(j);
    const int mu1 = t.mu[static_cast<std::size_t>(spec.slot(j, 1))];
    if (mu1 < (n - 1) * (q - 1) || mu1 > detail::window_top(spec, j)) return false;
    std::int64_t v = detail::local_finite(t, spec, j);
    if (j == anchor) v += detail::ipow(q, n - 1) * (q - 1) * t.mu0;
    if (v < 0) return false;
  }
  return detail::infinity_slack(t, spec) >= 0;
}

/// Membership in the generating set: no mu0, mu_{i,1} bounded above by
/// n_i q - (n_i + 1) and below only through the infinity inequality.
inline bool in_generator_system(const ExponentTuple& t, const ModulusSpec& spec) {
  if (t.mu0 != 0 || !detail::upper_slots_in_range(t, spec)) return false;
  for (int j = 0; j < spec.prime_count(); ++j) {
    if (t.mu[static_cast<std::size_t>(spec.slot(j, 1))] > detail::window_top(spec, j)) return false;
    if (detail::local_finite(t, spec, j) < 0) return false;
  }
  return detail::infinity_slack(t, spec) >= 0;
}

namespace detail {

// Lexicographic scan of a box, pruning on the infinity inequality (the only
// constraint that couples slots).
class LatticeScan {
 public:
  LatticeScan(const ModulusSpec& spec, std::vector<std::pair<int, int>> ranges)
      : spec_(spec), ranges_(std::move(ranges)) {
    // Largest contribution the slots from position s onwards can still add.
    best_rest_.assign(ranges_.size() + 1, 0);
    for (int s = static_cast<int>(ranges_.size()) - 1; s >= 0; --s) {
      best_rest_[s] = best_rest_[s + 1] + (is_level_one(s) ? ranges_[s].second : -ranges_[s].first);
    }
  }

  template <typename Visit>
  void run(int mu0, Visit&& visit) {
    ExponentTuple t;
    t.mu0 = mu0;
    t.mu.assign(ranges_.size(), 0);
    const std::int64_t base = -static_cast<std::int64_t>(spec_.q() - 1) * mu0 - spec_.q();
    recurse(0, base, t, visit);
  }

 private:
  bool is_level_one(int s) const {
    for (int j = 0; j < spec_.prime_count(); ++j) {
      if (spec_.slot(j, 1) == s) return true;
    }
    return false;
  }

  template <typename Visit>
  void recurse(int s, std::int64_t partial, ExponentTuple& t, Visit& visit) {
    if (s == static_cast<int>(ranges_.size())) {
      if (partial >= 0) visit(t);
      return;
    }
    const bool level_one = is_level_one(s);
    for (int v = ranges_[s].first; v <= ranges_[s].second; ++v) {
      const std::int64_t next = partial + (level_one ? v : -v);
      if (next + best_rest_[s + 1] < 0) {
        if (level_one) continue;
        break;
      }
      t.mu[static_cast<std::size_t>(s)] = v;
      recurse(s + 1, next, t, visit);
    }
  }

  const ModulusSpec& spec_;
  std::vector<std::pair<int, int>> ranges_;
  std::vector<std::int64_t> best_rest_;
};

inline void check_genus_limit(const ModulusSpec& spec, const Limits& limits) {
  const std::int64_t g = genus(spec);
  if (g > limits.max_genus) {
    fail(ErrorKind::SizeLimit, "genus " + std::to_string(g) + " exceeds max_genus " + std::to_string(limits.max_genus));
  }
}

}  // namespace detail

/// All integer points of the canonical-basis system at the anchor, in
/// lexicographic order of (mu0, mu). mu0 is bounded by the infinity
/// inequality: mu0 <= (sum_j (n_j q - (n_j + 1)) - q) / (q - 1).
inline std::vector<ExponentTuple> enumerate_basis(const ModulusSpec& spec, int anchor, const Limits& limits = {}) {
  if (anchor < 0 || anchor >= spec.prime_count()) {
    fail(ErrorKind::InvalidInput, "anchor " + std::to_string(anchor) + " out of range");
  }
  detail::check_genus_limit(spec, limits);
  const int q = spec.q();
  std::vector<std::pair<int, int>> ranges(static_cast<std::size_t>(spec.tower_size()));
  std::int64_t top_sum = 0;
  for (int j = 0; j < spec.prime_count(); ++j) {
    const int n = spec.multiplicity(j);
    ranges[static_cast<std::size_t>(spec.slot(j, 1))] = {(n - 1) * (q - 1), n * q - (n + 1)};
    for (int k = 2; k <= n; ++k) ranges[static_cast<std::size_t>(spec.slot(j, k))] = {0, q - 1};
    top_sum += detail::window_top(spec, j);
  }
  std::vector<ExponentTuple> out;
  if (top_sum < q) return out;
  const std::int64_t mu0_max = (top_sum - q) / (q - 1);
  detail::LatticeScan scan(spec, std::move(ranges));
  for (int mu0 = 0; mu0 <= mu0_max; ++mu0) {
    scan.run(mu0, [&](const ExponentTuple& t) {
      if (in_basis_system(t, spec, anchor)) out.push_back(t);
    });
  }
  return out;
}

/// All points of the generating-set system, lexicographic in mu.
inline std::vector<ExponentTuple> enumerate_generators(const ModulusSpec& spec, const Limits& limits = {}) {
  detail::check_genus_limit(spec, limits);
  const int q = spec.q();
  std::int64_t top_sum = 0;
  for (int j = 0; j < spec.prime_count(); ++j) top_sum += detail::window_top(spec, j);
  std::vector<std::pair<int, int>> ranges(static_cast<std::size_t>(spec.tower_size()));
  for (int j = 0; j < spec.prime_count(); ++j) {
    const std::int64_t top = detail::window_top(spec, j);
    const std::int64_t low = q - (top_sum - top);
    ranges[static_cast<std::size_t>(spec.slot(j, 1))] = {static_cast<int>(std::min(low, top + 1)), static_cast<int>(top)};
    for (int k = 2; k <= spec.multiplicity(j); ++k) ranges[static_cast<std::size_t>(spec.slot(j, k))] = {0, q - 1};
  }
  std::vector<ExponentTuple> out;
  detail::LatticeScan scan(spec, std::move(ranges));
  scan.run(0, [&](const ExponentTuple& t) {
    if (in_generator_system(t, spec)) out.push_back(t);
  });
  return out;
}

/// Laurent coefficients a_m counting one prime's local choices by
/// m = -mu_{j,1} + sum_{k>=2} mu_{j,k}.
struct CountSeries {
  std::map<int, std::int64_t> coeffs;

  std::int64_t at(int m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? 0 : it->second;
  }
};

/// x^{-(nq-(n+1))} (sum_{i<q-1} x^i)(sum_{j<q} x^j)^{n-1}, expanded through
/// (1 - x^{q-1}) [sum_l (-1)^l C(n-1,l) x^{ql}] [sum_t C(n-1+t,t) x^t].
inline CountSeries local_series(int q, int n) {
  CountSeries series;
  const int shift = n * q - (n + 1);
  const int top = (q - 2) + (n - 1) * (q - 1);
  for (int d = 0; d <= top; ++d) {
    std::int64_t coeff = 0;
    for (int l = 0; l <= n - 1 && q * l <= d; ++l) {
      const std::int64_t sign = (l % 2 == 0) ? 1 : -1;
      const std::int64_t choose = detail::binomial(n - 1, l);
      const int rest = d - q * l;
      std::int64_t inner = detail::binomial(n - 1 + rest, n - 1);
      if (rest - (q - 1) >= 0) inner -= detail::binomial(n - 1 + rest - (q - 1), n - 1);
      coeff += sign * choose * inner;
    }
    if (coeff != 0) series.coeffs[d - shift] = coeff;
  }
  return series;
}

/// Basis cardinality without enumeration: fold mu0 into the anchor's series,
/// convolve the remaining primes via |Phi_{j,k}| = sum_l a_{j,l} |Phi_{j-1,k+l}|,
/// and close with nu_k = sum_{m <= k-q} a_{last,m}.
inline std::int64_t count_via_series(const ModulusSpec& spec, int anchor) {
  if (anchor < 0 || anchor >= spec.prime_count()) fail(ErrorKind::InvalidInput, "anchor out of range");
  const int q = spec.q();
  std::int64_t top_sum = 0;
  for (int j = 0; j < spec.prime_count(); ++j) top_sum += detail::window_top(spec, j);
  if (top_sum < q) return 0;
  const std::int64_t mu0_max = (top_sum - q) / (q - 1);

  // phi[k] = number of partial choices whose infinity contribution is k.
  std::map<std::int64_t, std::int64_t> phi;
  const CountSeries anchor_series = local_series(q, spec.multiplicity(anchor));
  for (std::int64_t mu0 = 0; mu0 <= mu0_max; ++mu0) {
    for (const auto& [m, a] : anchor_series.coeffs) phi[-m - (q - 1) * mu0] += a;
  }

  std::vector<int> rest;
  for (int j = 0; j < spec.prime_count(); ++j) {
    if (j != anchor) rest.push_back(j);
  }
  if (rest.empty()) {
    std::int64_t total = 0;
    for (const auto& [k, count] : phi) {
      if (k >= q) total += count;
    }
    return total;
  }
  for (std::size_t idx = 0; idx + 1 < rest.size(); ++idx) {
    const CountSeries series = local_series(q, spec.multiplicity(rest[idx]));
    std::map<std::int64_t, std::int64_t> next;
    for (const auto& [k_old, count] : phi) {
      for (const auto& [l, a] : series.coeffs) next[k_old - l] += a * count;
    }
    phi = std::move(next);
  }
  const CountSeries last = local_series(q, spec.multiplicity(rest.back()));
  std::int64_t total = 0;
  for (const auto& [k, count] : phi) {
    std::int64_t nu = 0;
    for (const auto& [m, a] : last.coeffs) {
      if (m <= k - q) nu += a;
    }
    total += nu * count;
  }
  return total;
}

}  // namespace cfd
