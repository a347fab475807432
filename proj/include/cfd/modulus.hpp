#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/limits.hpp"
#include "cfd/poly.hpp"

namespace cfd {

struct PrimeFactor {
  Fq root;
  int multiplicity = 1;

  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

/// A monic split modulus M = prod_i (T - a_i)^{n_i} over F_q. Factors are kept
/// sorted by root encoding, which fixes the prime indices used everywhere else.
///
/// The tower of generators lambda_{i,k} (1 <= k <= n_i) is laid out flat: the
/// slot of lambda_{i,k} is offset(i) + k - 1.
class ModulusSpec {
 public:
  ModulusSpec(std::shared_ptr<const Field> field, std::vector<PrimeFactor> factors)
      : field_(std::move(field)), factors_(std::move(factors)) {
    if (!field_) fail(ErrorKind::InvalidInput, "modulus without a field");
    if (factors_.empty()) fail(ErrorKind::InvalidInput, "modulus must have degree at least 1");
    std::sort(factors_.begin(), factors_.end(),
              [](const PrimeFactor& a, const PrimeFactor& b) { return a.root < b.root; });
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].multiplicity < 1) fail(ErrorKind::InvalidInput, "multiplicities must be positive");
      if (factors_[i].root.v >= field_->q()) fail(ErrorKind::InvalidInput, "root outside the field");
      if (i > 0 && factors_[i].root == factors_[i - 1].root) {
        fail(ErrorKind::InvalidInput, "roots must be pairwise distinct");
      }
      offsets_.push_back(tower_size_);
      tower_size_ += factors_[i].multiplicity;
    }
  }

  const Field& field() const { return *field_; }
  const std::shared_ptr<const Field>& field_ptr() const { return field_; }
  int q() const { return field_->q(); }

  int prime_count() const { return static_cast<int>(factors_.size()); }
  const std::vector<PrimeFactor>& factors() const { return factors_; }
  Fq root(int i) const { return factors_.at(i).root; }
  int multiplicity(int i) const { return factors_.at(i).multiplicity; }

  /// P_i = T - a_i.
  Poly prime(int i) const { return Poly::linear(*field_, root(i)); }
  Poly prime_power(int i) const { return prime(i).pow(static_cast<unsigned>(multiplicity(i))); }

  Poly modulus() const {
    Poly m = Poly::one(*field_);
    for (int i = 0; i < prime_count(); ++i) m *= prime_power(i);
    return m;
  }

  int degree() const { return tower_size_; }
  int tower_size() const { return tower_size_; }
  int offset(int i) const { return offsets_.at(i); }
  int slot(int i, int k) const { return offsets_.at(i) + k - 1; }

  bool is_prime_power() const { return prime_count() == 1; }
  bool is_square_free() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const PrimeFactor& f) { return f.multiplicity == 1; });
  }

  /// Factored literal "a_1^n_1,a_2^n_2,...", the canonical text form.
  std::string to_string() const {
    std::string out;
    for (const auto& f : factors_) {
      if (!out.empty()) out += ',';
      out += field_->format(f.root) + "^" + std::to_string(f.multiplicity);
    }
    return out;
  }

  friend bool operator==(const ModulusSpec& a, const ModulusSpec& b) {
    return a.field_ == b.field_ && a.factors_ == b.factors_;
  }

 private:
  std::shared_ptr<const Field> field_;
  std::vector<PrimeFactor> factors_;
  std::vector<int> offsets_;
  int tower_size_ = 0;
};

/// Factors M into linear factors by exhaustive root deflation. The leading
/// coefficient is discarded.
inline ModulusSpec split_factor(const Poly& m, std::shared_ptr<const Field> field) {
  if (m.is_zero() || m.degree() < 1) fail(ErrorKind::InvalidInput, "modulus must have degree at least 1");
  const Field& f = *field;
  Poly rest = m.monic();
  std::vector<PrimeFactor> factors;
  for (Fq a : f.elements()) {
    int mult = 0;
    const Poly linear = Poly::linear(f, a);
    while (rest.degree() >= 1 && rest.eval(a).is_zero()) {
      rest = rest / linear;
      ++mult;
    }
    if (mult > 0) factors.push_back({a, mult});
  }
  if (rest.degree() >= 1) {
    fail(ErrorKind::NonSplitModulus, "factor " + format_poly(rest) + " of " + format_poly(m) +
                                         " has no root in F_" + std::to_string(f.q()));
  }
  return ModulusSpec(std::move(field), std::move(factors));
}

/// Every monic split modulus of degree 1..max_degree over the field, ordered
/// by degree and then by root multiset.
inline std::vector<ModulusSpec> enumerate_split_moduli(const std::shared_ptr<const Field>& field, int max_degree) {
  std::vector<ModulusSpec> out;
  const std::vector<Fq> roots = field->elements();
  for (int degree = 1; degree <= max_degree; ++degree) {
    std::vector<int> mult(roots.size(), 0);
    // Compositions of degree into per-root multiplicities, root 0 most significant.
    auto recurse = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos == roots.size()) {
        if (left != 0) return;
        std::vector<PrimeFactor> factors;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          if (mult[i] > 0) factors.push_back({roots[i], mult[i]});
        }
        out.emplace_back(field, std::move(factors));
        return;
      }
      for (int m = left; m >= 0; --m) {
        mult[pos] = m;
        self(self, pos + 1, left - m);
      }
      mult[pos] = 0;
    };
    recurse(recurse, 0, degree);
  }
  return out;
}

/// Coefficients alpha_0..alpha_{L-1} of A = sum_l alpha_l P^l (mod P^L) for a
/// monic linear P = T - a, by repeated evaluation at a and deflation.
using DigitVector = std::vector<Fq>;

inline DigitVector padic_digits(const Poly& a, const Poly& p, int length) {
  if (p.degree() != 1 || p.lead() != p.field()->one()) {
    fail(ErrorKind::InvalidInput, "P-adic digits need a monic linear P");
  }
  if (length < 1) fail(ErrorKind::InvalidInput, "digit count must be positive");
  const Field& f = *p.field();
  const Fq root = f.neg(p.coeff(0));
  DigitVector digits;
  digits.reserve(static_cast<std::size_t>(length));
  Poly rest = a.field() ? a : Poly(f);
  for (int l = 0; l < length; ++l) {
    const Fq alpha = rest.eval(root);
    digits.push_back(alpha);
    rest = (rest - Poly::constant(f, alpha)) / p;
  }
  return digits;
}

/// |(F_q[T]/(M))^*| = prod_i q^{n_i-1}(q-1).
inline std::int64_t euler_phi(const ModulusSpec& m) {
  std::int64_t phi = 1;
  for (const auto& factor : m.factors()) {
    phi *= m.q() - 1;
    for (int k = 1; k < factor.multiplicity; ++k) phi *= m.q();
  }
  return phi;
}

namespace detail {

// Graded lexicographic: degree first, then coefficients from the constant term up.
inline bool graded_lex_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.coeffs() < b.coeffs();
}

}  // namespace detail

/// Residues of degree < deg M coprime to M, in graded lexicographic order.
inline std::vector<Poly> units_enumerate(const ModulusSpec& m, const Limits& limits = {}) {
  const std::int64_t phi = euler_phi(m);
  if (phi > limits.max_units) {
    fail(ErrorKind::SizeLimit, "unit group of order " + std::to_string(phi) + " exceeds max_units " +
                                   std::to_string(limits.max_units));
  }
  const Field& f = m.field();
  const Poly modulus = m.modulus();
  const int n = m.degree();
  std::vector<Poly> units;
  units.reserve(static_cast<std::size_t>(phi));
  std::vector<Fq> coeffs(static_cast<std::size_t>(n), Fq{});
  // Odometer over all residues, then sort into the canonical order.
  while (true) {
    Poly a(f, coeffs);
    if (!a.is_zero() && gcd(a, modulus).degree() == 0) units.push_back(std::move(a));
    int pos = 0;
    while (pos < n) {
      if (coeffs[pos].v + 1 < f.q()) {
        coeffs[pos].v += 1;
        break;
      }
      coeffs[pos] = Fq{};
      ++pos;
    }
    if (pos == n) break;
  }
  std::sort(units.begin(), units.end(), detail::graded_lex_less);
  return units;
}

/// Index of a unit residue in units_enumerate order, or -1.
inline int unit_index(const std::vector<Poly>& units, const Poly& a) {
  auto it = std::lower_bound(units.begin(), units.end(), a, detail::graded_lex_less);
  if (it != units.end() && *it == a) return static_cast<int>(it - units.begin());
  return -1;
}

}  // namespace cfd
