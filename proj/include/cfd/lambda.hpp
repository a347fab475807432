#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/modulus.hpp"
#include "cfd/poly.hpp"

namespace cfd {

/// Everything about a monomial except its scalar: the powers m_i of P_i in the
/// coefficient, the exponents e_{i,k} of lambda_{i,k} (flat, see
/// ModulusSpec::slot) and whether dT is attached.
struct LambdaKey {
  std::vector<int> prime_powers;
  std::vector<int> exponents;
  bool has_dT = false;

  friend auto operator<=>(const LambdaKey&, const LambdaKey&) = default;
};

/// c * prod P_i^{m_i} * prod lambda_{i,k}^{e_{i,k}} * dT^delta.
///
/// e_{i,1} may be negative; every e_{i,k} with k >= 2 must be non-negative.
/// In basis notation mu_{i,1} = -e_{i,1} and mu_{i,k} = e_{i,k} for k >= 2.
struct LambdaMonomial {
  Fq scalar{1};
  std::vector<int> prime_powers;
  std::vector<int> exponents;
  bool has_dT = false;

  static LambdaMonomial one(const ModulusSpec& spec) {
    LambdaMonomial m;
    m.scalar = spec.field().one();
    m.prime_powers.assign(static_cast<std::size_t>(spec.prime_count()), 0);
    m.exponents.assign(static_cast<std::size_t>(spec.tower_size()), 0);
    return m;
  }

  static LambdaMonomial dT(const ModulusSpec& spec) {
    LambdaMonomial m = one(spec);
    m.has_dT = true;
    return m;
  }

  /// lambda_{i,k}^e.
  static LambdaMonomial generator(const ModulusSpec& spec, int i, int k, int e = 1) {
    LambdaMonomial m = one(spec);
    m.exponents.at(static_cast<std::size_t>(spec.slot(i, k))) = e;
    return m;
  }

  int exponent(const ModulusSpec& spec, int i, int k) const {
    return exponents.at(static_cast<std::size_t>(spec.slot(i, k)));
  }
  int& exponent(const ModulusSpec& spec, int i, int k) { return exponents.at(static_cast<std::size_t>(spec.slot(i, k))); }

  LambdaKey key() const { return {prime_powers, exponents, has_dT}; }

  static LambdaMonomial from_key(const LambdaKey& key, Fq scalar) {
    return {scalar, key.prime_powers, key.exponents, key.has_dT};
  }
};

inline LambdaMonomial mono_mul(const LambdaMonomial& a, const LambdaMonomial& b, const Field& field) {
  if (a.has_dT && b.has_dT) fail(ErrorKind::DTSquared, "product of two differentials");
  if (a.exponents.size() != b.exponents.size() || a.prime_powers.size() != b.prime_powers.size()) {
    fail(ErrorKind::InvalidInput, "monomials from different towers");
  }
  LambdaMonomial out = a;
  out.scalar = field.mul(a.scalar, b.scalar);
  out.has_dT = a.has_dT || b.has_dT;
  for (std::size_t s = 0; s < out.exponents.size(); ++s) out.exponents[s] += b.exponents[s];
  for (std::size_t i = 0; i < out.prime_powers.size(); ++i) out.prime_powers[i] += b.prime_powers[i];
  return out;
}

/// A finite F_q-combination of monomials with like terms merged and no zero
/// coefficients.
class LambdaSum {
 public:
  using Terms = std::map<LambdaKey, Fq>;

  explicit LambdaSum(const Field& field) : field_(&field) {}

  static LambdaSum of(const Field& field, const LambdaMonomial& m) {
    LambdaSum s(field);
    s.add(m);
    return s;
  }

  const Field& field() const { return *field_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const LambdaKey& key, Fq c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (inserted) return;
    it->second = field_->add(it->second, c);
    if (it->second.is_zero()) terms_.erase(it);
  }

  void add(LambdaKey&& key, Fq c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (inserted) return;
    it->second = field_->add(it->second, c);
    if (it->second.is_zero()) terms_.erase(it);
  }

  void add(const LambdaMonomial& m) { add(m.key(), m.scalar); }

  void add(const LambdaSum& other) {
    for (const auto& [key, c] : other.terms_) add(key, c);
  }

  LambdaSum scaled(Fq c) const {
    LambdaSum out(*field_);
    for (const auto& [key, value] : terms_) out.add(key, field_->mul(value, c));
    return out;
  }

  std::vector<LambdaMonomial> monomials() const {
    std::vector<LambdaMonomial> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_) out.push_back(LambdaMonomial::from_key(key, c));
    return out;
  }

  friend bool operator==(const LambdaSum& a, const LambdaSum& b) { return a.terms_ == b.terms_; }

  friend LambdaSum operator*(const LambdaSum& a, const LambdaSum& b) {
    LambdaSum out(*a.field_);
    for (const auto& [ka, ca] : a.terms_) {
      const LambdaMonomial ma = LambdaMonomial::from_key(ka, ca);
      for (const auto& [kb, cb] : b.terms_) out.add(mono_mul(ma, LambdaMonomial::from_key(kb, cb), *a.field_));
    }
    return out;
  }

 private:
  const Field* field_;
  Terms terms_;
};

/// Admissible interval of mu_{i,1} = -e_{i,1} for each prime, plus the prime
/// whose powers carry the coefficient in canonical form.
struct WindowPolicy {
  int anchor = 0;
  std::vector<std::pair<int, int>> windows;

  /// [(n_i - 1)(q - 1), n_i q - (n_i + 1)] for every prime.
  static WindowPolicy standard(const ModulusSpec& spec, int anchor) {
    if (anchor < 0 || anchor >= spec.prime_count()) {
      fail(ErrorKind::InvalidInput, "anchor " + std::to_string(anchor) + " out of range for " +
                                        std::to_string(spec.prime_count()) + " prime(s)");
    }
    WindowPolicy w;
    w.anchor = anchor;
    const int q = spec.q();
    for (int i = 0; i < spec.prime_count(); ++i) {
      const int n = spec.multiplicity(i);
      w.windows.emplace_back((n - 1) * (q - 1), n * q - (n + 1));
    }
    return w;
  }

  void validate(const ModulusSpec& spec) const {
    if (anchor < 0 || anchor >= spec.prime_count()) fail(ErrorKind::InvalidInput, "anchor out of range");
    if (static_cast<int>(windows.size()) != spec.prime_count()) {
      fail(ErrorKind::InvalidInput, "one window per prime required");
    }
    for (const auto& [lo, hi] : windows) {
      if (hi - lo + 1 != spec.q() - 1) fail(ErrorKind::InvalidInput, "windows must contain exactly q-1 values");
    }
  }
};

/// One application of lambda_{i,k}^q = lambda_{i,k-1} + lambda_{i,1}^{q-1} lambda_{i,k}
/// (k >= 2), which follows from the Carlitz action of P_i and lambda_{i,1}^{q-1} = -P_i.
inline LambdaSum rewrite_once(const LambdaMonomial& m, int i, int k, const ModulusSpec& spec) {
  if (i < 0 || i >= spec.prime_count() || k < 2 || k > spec.multiplicity(i)) {
    fail(ErrorKind::InvalidInput, "rewrite needs a level k >= 2 inside the tower");
  }
  const int q = spec.q();
  const int e = m.exponent(spec, i, k);
  if (e < q) {
    fail(ErrorKind::NotReducible, "exponent " + std::to_string(e) + " of lambda_{" + std::to_string(i + 1) + "," +
                                      std::to_string(k) + "} is below q");
  }
  LambdaMonomial shifted = m;
  shifted.exponent(spec, i, k) = e - q;
  shifted.exponent(spec, i, k - 1) += 1;

  LambdaMonomial twisted = m;
  twisted.exponent(spec, i, k) = e - (q - 1);
  twisted.exponent(spec, i, 1) += q - 1;

  LambdaSum out(spec.field());
  out.add(shifted);
  out.add(twisted);
  return out;
}

namespace detail {

// First (prime ascending, level descending) position whose exponent is >= q.
inline std::pair<int, int> find_reducible(const LambdaKey& key, const ModulusSpec& spec) {
  const int q = spec.q();
  for (int i = 0; i < spec.prime_count(); ++i) {
    for (int k = spec.multiplicity(i); k >= 2; --k) {
      if (key.exponents[static_cast<std::size_t>(spec.slot(i, k))] >= q) return {i, k};
    }
  }
  return {-1, -1};
}

// Moves mu_{j,1} into its window by trading lambda_{j,1}^{q-1} for -P_j.
inline void apply_windows(LambdaMonomial& m, const WindowPolicy& w, const ModulusSpec& spec) {
  const Field& f = spec.field();
  const int step = spec.q() - 1;
  for (int j = 0; j < spec.prime_count(); ++j) {
    const auto [lo, hi] = w.windows[static_cast<std::size_t>(j)];
    int& e1 = m.exponent(spec, j, 1);
    int& power = m.prime_powers[static_cast<std::size_t>(j)];
    while (-e1 < lo) {
      e1 -= step;
      power += 1;
      m.scalar = f.neg(m.scalar);
    }
    while (-e1 > hi) {
      if (power == 0) {
        fail(ErrorKind::NegativePower, "mu_{" + std::to_string(j + 1) + ",1} = " + std::to_string(-e1) +
                                           " lies above its window and no power of P_" + std::to_string(j + 1) +
                                           " is left to absorb it");
      }
      e1 += step;
      power -= 1;
      m.scalar = f.neg(m.scalar);
    }
  }
}

// Re-expresses prod_{j != anchor} P_j^{m_j} in powers of P_anchor.
inline void rebase_to_anchor(const LambdaMonomial& m, int anchor, const ModulusSpec& spec, LambdaSum& out) {
  const Field& f = spec.field();
  Poly other = Poly::one(f);
  bool any = false;
  for (int j = 0; j < spec.prime_count(); ++j) {
    const int power = m.prime_powers[static_cast<std::size_t>(j)];
    if (j == anchor || power == 0) continue;
    other *= spec.prime(j).pow(static_cast<unsigned>(power));
    any = true;
  }
  if (!any) {
    out.add(m);
    return;
  }
  const DigitVector digits = padic_digits(other, spec.prime(anchor), other.degree() + 1);
  LambdaMonomial base = m;
  for (int j = 0; j < spec.prime_count(); ++j) {
    if (j != anchor) base.prime_powers[static_cast<std::size_t>(j)] = 0;
  }
  const int anchor_power = m.prime_powers[static_cast<std::size_t>(anchor)];
  for (std::size_t l = 0; l < digits.size(); ++l) {
    if (digits[l].is_zero()) continue;
    LambdaMonomial term = base;
    term.prime_powers[static_cast<std::size_t>(anchor)] = anchor_power + static_cast<int>(l);
    term.scalar = f.mul(m.scalar, digits[l]);
    out.add(term);
  }
}

}  // namespace detail

/// Canonical form relative to a window policy: every e_{i,k} (k >= 2) in
/// [0, q-1], every mu_{i,1} inside its window, and the coefficient written as
/// a polynomial in the anchor prime alone. Value-preserving.
inline LambdaSum canonicalize(const LambdaSum& s, const WindowPolicy& w, const ModulusSpec& spec) {
  w.validate(spec);
  for (const auto& [key, c] : s.terms()) {
    if (key.exponents.size() != static_cast<std::size_t>(spec.tower_size()) ||
        key.prime_powers.size() != static_cast<std::size_t>(spec.prime_count())) {
      fail(ErrorKind::InvalidInput, "monomial does not belong to this tower");
    }
    for (int i = 0; i < spec.prime_count(); ++i) {
      if (key.prime_powers[static_cast<std::size_t>(i)] < 0) fail(ErrorKind::InvalidInput, "negative prime power");
      for (int k = 2; k <= spec.multiplicity(i); ++k) {
        if (key.exponents[static_cast<std::size_t>(spec.slot(i, k))] < 0) {
          fail(ErrorKind::InvalidInput, "negative exponent on lambda_{i,k} with k >= 2");
        }
      }
    }
  }

  // Each rewrite lowers sum_{k>=2} e_{i,k}, so the worklist drains.
  LambdaSum pending = s;
  LambdaSum reduced(spec.field());
  while (!pending.empty()) {
    LambdaSum next(spec.field());
    for (const auto& [key, c] : pending.terms()) {
      const auto [i, k] = detail::find_reducible(key, spec);
      if (i < 0) {
        reduced.add(key, c);
      } else {
        next.add(rewrite_once(LambdaMonomial::from_key(key, c), i, k, spec));
      }
    }
    pending = std::move(next);
  }

  LambdaSum out(spec.field());
  for (LambdaMonomial m : reduced.monomials()) {
    detail::apply_windows(m, w, spec);
    detail::rebase_to_anchor(m, w.anchor, spec, out);
  }
  return out;
}

/// Debug rendering, e.g. "2*P1*l[1,1]^-3*l[1,2]*dT".
inline std::string format_monomial(const LambdaMonomial& m, const ModulusSpec& spec) {
  std::string out = spec.field().format(m.scalar);
  for (int i = 0; i < spec.prime_count(); ++i) {
    const int power = m.prime_powers[static_cast<std::size_t>(i)];
    if (power == 0) continue;
    out += "*P" + std::to_string(i + 1);
    if (power != 1) out += "^" + std::to_string(power);
  }
  for (int i = 0; i < spec.prime_count(); ++i) {
    for (int k = 1; k <= spec.multiplicity(i); ++k) {
      const int e = m.exponent(spec, i, k);
      if (e == 0) continue;
      out += "*l[" + std::to_string(i + 1) + "," + std::to_string(k) + "]";
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  if (m.has_dT) out += "*dT";
  return out;
}

inline std::string format_sum(const LambdaSum& s, const ModulusSpec& spec) {
  if (s.empty()) return "0";
  std::string out;
  for (const auto& m : s.monomials()) {
    if (!out.empty()) out += " + ";
    out += format_monomial(m, spec);
  }
  return out;
}

}  // namespace cfd
