#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cfd/carlitz.hpp"
#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/galois.hpp"
#include "cfd/lambda.hpp"
#include "cfd/limits.hpp"
#include "cfd/modulus.hpp"
#include "cfd/poly.hpp"

namespace cfd {

/// num / prod_i P_i^{den_i}, reduced: no P_i with den_i > 0 divides num, and
/// zero is stored with den all zero.
class RatFn {
 public:
  RatFn() = default;
  RatFn(const ModulusSpec& spec, Poly num) : spec_(&spec), num_(std::move(num)), den_(spec.prime_count(), 0) {
    if (num_.field() == nullptr) num_ = Poly(spec.field());
  }
  RatFn(const ModulusSpec& spec, Poly num, std::vector<int> den)
      : spec_(&spec), num_(std::move(num)), den_(std::move(den)) {
    if (num_.field() == nullptr) num_ = Poly(spec.field());
    reduce();
  }

  static RatFn zero(const ModulusSpec& spec) { return RatFn(spec, Poly(spec.field())); }
  static RatFn constant(const ModulusSpec& spec, Fq c) { return RatFn(spec, Poly::constant(spec.field(), c)); }

  const Poly& num() const { return num_; }
  const std::vector<int>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ModulusSpec& spec = *a.spec_;
    std::vector<int> den(a.den_.size());
    Poly na = a.num_;
    Poly nb = b.num_;
    for (std::size_t i = 0; i < den.size(); ++i) {
      den[i] = std::max(a.den_[i], b.den_[i]);
      const Poly p = spec.prime(static_cast<int>(i));
      if (den[i] > a.den_[i]) na *= p.pow(static_cast<unsigned>(den[i] - a.den_[i]));
      if (den[i] > b.den_[i]) nb *= p.pow(static_cast<unsigned>(den[i] - b.den_[i]));
    }
    return RatFn(spec, na + nb, std::move(den));
  }

  friend RatFn operator-(const RatFn& a) {
    RatFn out = a;
    out.num_ = -a.num_;
    return out;
  }

  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    std::vector<int> den(a.den_.size());
    for (std::size_t i = 0; i < den.size(); ++i) den[i] = a.den_[i] + b.den_[i];
    return RatFn(*a.spec_, a.num_ * b.num_, std::move(den));
  }

  RatFn times(const Poly& p) const {
    if (is_zero() || p.is_zero()) return zero(*spec_);
    return RatFn(*spec_, num_ * p, den_);
  }

  RatFn& operator+=(const RatFn& b) { return *this = *this + b; }

 private:
  void reduce() {
    if (num_.is_zero()) {
      std::fill(den_.begin(), den_.end(), 0);
      return;
    }
    for (std::size_t i = 0; i < den_.size(); ++i) {
      const Fq root = spec_->root(static_cast<int>(i));
      const Poly p = spec_->prime(static_cast<int>(i));
      while (den_[i] > 0 && num_.eval(root).is_zero()) {
        num_ = num_ / p;
        --den_[i];
      }
    }
  }

  const ModulusSpec* spec_ = nullptr;
  Poly num_;
  std::vector<int> den_;
};

/// An element of F_q(T)[x]/(Psi(x)) as its coordinates on 1, x, ..., x^{d-1}.
using LocalElement = std::vector<RatFn>;

/// F_q(T)[x_i]/(Psi_{P_i^{n_i}}(x_i)), with x_i a primitive P_i^{n_i}-torsion point.
class LocalRing {
 public:
  LocalRing(const ModulusSpec& spec, int i, const Limits& limits)
      : spec_(&spec), psi_(cyclotomic_polynomial(spec.prime(i), spec.multiplicity(i), limits)) {
    dim_ = psi_.degree();
    const Field& f = spec.field();
    // x^m mod Psi for m <= 2d - 2, each as polynomial coordinates.
    std::vector<Poly> current(static_cast<std::size_t>(dim_), Poly(f));
    current[0] = Poly::one(f);
    for (int m = 0; m <= 2 * dim_ - 2; ++m) {
      reductions_.push_back(current);
      const Poly top = current[static_cast<std::size_t>(dim_ - 1)];
      for (int j = dim_ - 1; j > 0; --j) current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)];
      current[0] = Poly(f);
      if (!top.is_zero()) {
        for (int j = 0; j < dim_; ++j) current[static_cast<std::size_t>(j)] -= top * psi_.coeff(j);
      }
    }
    for (const std::vector<Poly>& red : reductions_) {
      LocalElement e = zero();
      for (int j = 0; j < dim_; ++j) e[static_cast<std::size_t>(j)] = RatFn(spec, red[static_cast<std::size_t>(j)]);
      monomials_.push_back(std::move(e));
    }
    for (int k = 1; k <= spec.multiplicity(i); ++k) {
      const Poly shift = spec.prime(i).pow(static_cast<unsigned>(spec.multiplicity(i) - k));
      lambdas_.push_back(from_upoly(carlitz_polynomial(shift, limits)));
    }
    // lambda_{i,1}^{-1} = -lambda_{i,1}^{q-2} / P_i.
    std::vector<int> den(static_cast<std::size_t>(spec.prime_count()), 0);
    den[static_cast<std::size_t>(i)] = 1;
    const RatFn factor(spec, Poly::constant(f, f.minus_one()), den);
    lambda1_inverse_ = scale(pow(lambdas_[0], spec.q() - 2), factor);
  }

  int dim() const { return dim_; }
  const UPoly& psi() const { return psi_; }

  LocalElement zero() const { return LocalElement(static_cast<std::size_t>(dim_), RatFn::zero(*spec_)); }

  LocalElement one() const {
    LocalElement e = zero();
    e[0] = RatFn::constant(*spec_, spec_->field().one());
    return e;
  }

  LocalElement x() const {
    if (dim_ == 1) return from_upoly(UPoly(spec_->field(), {Poly(spec_->field()), Poly::one(spec_->field())}));
    LocalElement e = zero();
    e[1] = RatFn::constant(*spec_, spec_->field().one());
    return e;
  }

  /// x^m reduced modulo Psi, for 0 <= m <= 2d - 2.
  const LocalElement& x_power(int m) const { return monomials_.at(static_cast<std::size_t>(m)); }

  /// lambda_{i,k} = rho_{P_i^{n_i-k}}(x_i), 1 <= k <= n_i.
  const LocalElement& lambda(int k) const { return lambdas_.at(static_cast<std::size_t>(k - 1)); }
  const LocalElement& lambda1_inverse() const { return lambda1_inverse_; }

  /// prod_k lambda_{i,k}^{e_k}; e_1 may be negative. Memoized, so a LocalRing
  /// must not be shared across threads.
  const LocalElement& lambda_monomial(const std::vector<int>& exponents) const {
    auto it = monomial_cache_.find(exponents);
    if (it != monomial_cache_.end()) return it->second;
    const int e1 = exponents.at(0);
    LocalElement part = e1 >= 0 ? pow(lambda(1), e1) : pow(lambda1_inverse(), -e1);
    for (std::size_t k = 2; k <= exponents.size(); ++k) {
      const int e = exponents[k - 1];
      if (e < 0) fail(ErrorKind::InvalidInput, "negative exponent on lambda_{i,k} with k >= 2");
      if (e > 0) part = mul(part, pow(lambda(static_cast<int>(k)), e));
    }
    return monomial_cache_.emplace(exponents, std::move(part)).first->second;
  }

  /// Reduces a polynomial in x with coefficients in F_q[T].
  LocalElement from_upoly(const UPoly& u) const {
    const auto [quotient, rest] = divmod(u, psi_);
    (void)quotient;
    LocalElement e = zero();
    for (int j = 0; j <= rest.degree(); ++j) e[static_cast<std::size_t>(j)] = RatFn(*spec_, rest.coeff(j));
    return e;
  }

  LocalElement add(const LocalElement& a, const LocalElement& b) const {
    LocalElement out = a;
    for (int j = 0; j < dim_; ++j) out[static_cast<std::size_t>(j)] += b[static_cast<std::size_t>(j)];
    return out;
  }

  LocalElement scale(const LocalElement& a, const RatFn& c) const {
    LocalElement out = a;
    for (auto& v : out) v = v * c;
    return out;
  }

  LocalElement mul(const LocalElement& a, const LocalElement& b) const {
    LocalElement out = zero();
    for (int s = 0; s < dim_; ++s) {
      if (a[static_cast<std::size_t>(s)].is_zero()) continue;
      for (int t = 0; t < dim_; ++t) {
        if (b[static_cast<std::size_t>(t)].is_zero()) continue;
        const RatFn c = a[static_cast<std::size_t>(s)] * b[static_cast<std::size_t>(t)];
        const std::vector<Poly>& red = reductions_[static_cast<std::size_t>(s + t)];
        for (int j = 0; j < dim_; ++j) {
          if (!red[static_cast<std::size_t>(j)].is_zero()) out[static_cast<std::size_t>(j)] += c.times(red[static_cast<std::size_t>(j)]);
        }
      }
    }
    return out;
  }

  LocalElement pow(const LocalElement& a, int e) const {
    if (e < 0) fail(ErrorKind::InvalidInput, "negative power in the local ring");
    LocalElement result = one();
    LocalElement base = a;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  /// Evaluates a polynomial in x at a local element, by Horner's rule.
  LocalElement evaluate(const UPoly& u, const LocalElement& at) const {
    LocalElement acc = zero();
    for (int j = u.degree(); j >= 0; --j) {
      acc = mul(acc, at);
      acc[0] += RatFn(*spec_, u.coeff(j));
    }
    return acc;
  }

 private:
  const ModulusSpec* spec_;
  UPoly psi_;
  int dim_ = 0;
  std::vector<std::vector<Poly>> reductions_;
  std::vector<LocalElement> monomials_;
  std::vector<LocalElement> lambdas_;
  LocalElement lambda1_inverse_;
  mutable std::map<std::vector<int>, LocalElement> monomial_cache_;
};

/// Coordinates on the tensor basis prod_i x_i^{a_i}, index sum_i a_i * stride_i.
struct OracleElement {
  std::vector<RatFn> coords;

  friend bool operator==(const OracleElement& a, const OracleElement& b) { return a.coords == b.coords; }
};

/// K_{q,M} as the tensor product over F_q(T) of the local rings. Holds a copy
/// of the spec, so it must not be moved after construction.
class OracleRing {
 public:
  OracleRing(const ModulusSpec& spec, const Limits& limits) : spec_(spec) {
    const std::int64_t phi = euler_phi(spec_);
    if (phi > limits.max_oracle_dim) {
      fail(ErrorKind::SizeLimit, "oracle dimension " + std::to_string(phi) + " exceeds " +
                                     std::to_string(limits.max_oracle_dim));
    }
    int stride = 1;
    for (int i = 0; i < spec_.prime_count(); ++i) {
      locals_.emplace_back(spec_, i, limits);
      strides_.push_back(stride);
      stride *= locals_.back().dim();
    }
    dim_ = stride;
  }

  OracleRing(const OracleRing&) = delete;
  OracleRing& operator=(const OracleRing&) = delete;

  const ModulusSpec& spec() const { return spec_; }
  int dim() const { return dim_; }
  const LocalRing& local(int i) const { return locals_.at(static_cast<std::size_t>(i)); }

  OracleElement zero() const { return {std::vector<RatFn>(static_cast<std::size_t>(dim_), RatFn::zero(spec_))}; }

  /// c * (x_1 part) (x) ... (x) (x_r part).
  OracleElement tensor(const std::vector<LocalElement>& parts, const RatFn& c) const {
    OracleElement out = zero();
    if (c.is_zero()) return out;
    std::vector<std::pair<int, RatFn>> acc{{0, c}};
    for (int i = 0; i < spec_.prime_count(); ++i) {
      std::vector<std::pair<int, RatFn>> next;
      const LocalElement& part = parts[static_cast<std::size_t>(i)];
      for (const auto& [idx, value] : acc) {
        for (int j = 0; j < locals_[static_cast<std::size_t>(i)].dim(); ++j) {
          if (part[static_cast<std::size_t>(j)].is_zero()) continue;
          next.emplace_back(idx + j * strides_[static_cast<std::size_t>(i)], value * part[static_cast<std::size_t>(j)]);
        }
      }
      acc = std::move(next);
    }
    for (auto& [idx, value] : acc) out.coords[static_cast<std::size_t>(idx)] += value;
    return out;
  }

  OracleElement add(const OracleElement& a, const OracleElement& b) const {
    OracleElement out = a;
    for (std::size_t j = 0; j < out.coords.size(); ++j) out.coords[j] += b.coords[j];
    return out;
  }

  /// Product, distributing over the tensor basis and multiplying per prime.
  OracleElement mul(const OracleElement& a, const OracleElement& b) const {
    OracleElement out = zero();
    for (int s = 0; s < dim_; ++s) {
      if (a.coords[static_cast<std::size_t>(s)].is_zero()) continue;
      for (int t = 0; t < dim_; ++t) {
        if (b.coords[static_cast<std::size_t>(t)].is_zero()) continue;
        std::vector<LocalElement> parts;
        for (int i = 0; i < spec_.prime_count(); ++i) {
          parts.push_back(locals_[static_cast<std::size_t>(i)].x_power(digit(s, i) + digit(t, i)));
        }
        out = add(out, tensor(parts, a.coords[static_cast<std::size_t>(s)] * b.coords[static_cast<std::size_t>(t)]));
      }
    }
    return out;
  }

  /// x_i^{a_i} tensor coordinates of basis index idx.
  int digit(int idx, int i) const {
    return (idx / strides_[static_cast<std::size_t>(i)]) % locals_[static_cast<std::size_t>(i)].dim();
  }

  /// Powers y_i^j (j < d_i) of the images y_i = rho_{A mod P_i^{n_i}}(x_i).
  struct Substitution {
    std::vector<std::vector<LocalElement>> powers;
  };

  Substitution substitution(const Poly& a, const Limits& limits = {}) const {
    const Poly unit = detail::reduce_unit(a, spec_);
    Substitution sub;
    for (int i = 0; i < spec_.prime_count(); ++i) {
      const LocalRing& local = locals_[static_cast<std::size_t>(i)];
      const Poly reduced = unit % spec_.prime_power(i);
      const LocalElement image = local.evaluate(carlitz_polynomial(reduced, limits), local.x());
      std::vector<LocalElement> pw{local.one()};
      for (int j = 1; j < local.dim(); ++j) pw.push_back(local.mul(pw.back(), image));
      sub.powers.push_back(std::move(pw));
    }
    return sub;
  }

  /// sigma_A, extended F_q(T)-linearly and multiplicatively from the x_i.
  OracleElement apply(const Substitution& sub, const OracleElement& e) const {
    OracleElement out = zero();
    for (int s = 0; s < dim_; ++s) {
      if (e.coords[static_cast<std::size_t>(s)].is_zero()) continue;
      std::vector<LocalElement> parts;
      for (int i = 0; i < spec_.prime_count(); ++i) {
        parts.push_back(sub.powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(digit(s, i))]);
      }
      out = add(out, tensor(parts, e.coords[static_cast<std::size_t>(s)]));
    }
    return out;
  }

  OracleElement substitute(const Poly& a, const OracleElement& e, const Limits& limits = {}) const {
    return apply(substitution(a, limits), e);
  }

 private:
  ModulusSpec spec_;
  std::vector<LocalRing> locals_;
  std::vector<int> strides_;
  int dim_ = 1;
};

inline std::unique_ptr<OracleRing> oracle_build(const ModulusSpec& spec, const Limits& limits = {}) {
  return std::make_unique<OracleRing>(spec, limits);
}

/// The coefficient function of a lambda-sum (dT stripped) as a ring element.
inline OracleElement oracle_embed(const LambdaSum& s, const OracleRing& ring) {
  const ModulusSpec& spec = ring.spec();
  OracleElement out = ring.zero();
  bool first = true;
  bool dt = false;
  for (const auto& [key, c] : s.terms()) {
    if (first) {
      dt = key.has_dT;
      first = false;
    } else if (key.has_dT != dt) {
      fail(ErrorKind::InvalidInput, "cannot embed a sum mixing functions and differentials");
    }
    Poly coeff = Poly::constant(spec.field(), c);
    for (int i = 0; i < spec.prime_count(); ++i) {
      const int m = key.prime_powers[static_cast<std::size_t>(i)];
      if (m < 0) fail(ErrorKind::InvalidInput, "negative prime power");
      if (m > 0) coeff *= spec.prime(i).pow(static_cast<unsigned>(m));
    }
    std::vector<LocalElement> parts;
    for (int i = 0; i < spec.prime_count(); ++i) {
      const auto first_slot = key.exponents.begin() + spec.slot(i, 1);
      parts.push_back(ring.local(i).lambda_monomial(std::vector<int>(first_slot, first_slot + spec.multiplicity(i))));
    }
    out = ring.add(out, ring.tensor(parts, RatFn(spec, coeff)));
  }
  return out;
}

/// F_q-linear independence: scale every element by one common denominator,
/// spread each polynomial coordinate over its T-coefficients and take the rank.
inline bool oracle_independent(const std::vector<LambdaSum>& elements, const OracleRing& ring) {
  if (elements.empty()) return true;
  const ModulusSpec& spec = ring.spec();
  std::vector<OracleElement> embedded;
  std::vector<int> common(static_cast<std::size_t>(spec.prime_count()), 0);
  for (const LambdaSum& s : elements) {
    embedded.push_back(oracle_embed(s, ring));
    for (const RatFn& c : embedded.back().coords) {
      for (std::size_t i = 0; i < common.size(); ++i) common[i] = std::max(common[i], c.den()[i]);
    }
  }
  std::vector<std::vector<Poly>> cleared;
  int max_degree = 0;
  for (const OracleElement& e : embedded) {
    std::vector<Poly> row;
    for (const RatFn& c : e.coords) {
      Poly p = c.num();
      for (std::size_t i = 0; i < common.size(); ++i) {
        const int extra = common[i] - c.den()[i];
        if (!c.is_zero() && extra > 0) p *= spec.prime(static_cast<int>(i)).pow(static_cast<unsigned>(extra));
      }
      max_degree = std::max(max_degree, p.degree());
      row.push_back(std::move(p));
    }
    cleared.push_back(std::move(row));
  }
  const int width = ring.dim() * (max_degree + 1);
  FqMatrix m(spec.field(), static_cast<int>(elements.size()), width);
  for (std::size_t r = 0; r < cleared.size(); ++r) {
    for (int j = 0; j < ring.dim(); ++j) {
      const Poly& p = cleared[r][static_cast<std::size_t>(j)];
      for (int d = 0; d <= p.degree(); ++d) m(static_cast<int>(r), j * (max_degree + 1) + d) = p.coeff(d);
    }
  }
  return m.rank() == static_cast<int>(elements.size());
}

/// Checks, for every prime: lambda_{i,1}^{q-1} = -P_i, the tower relation
/// lambda_{i,k}^q = lambda_{i,k-1} + lambda_{i,1}^{q-1} lambda_{i,k} (k >= 2),
/// rho_{P_i}(lambda_{i,k}) = lambda_{i,k-1}, rho_{P_i}(lambda_{i,1}) = 0 and
/// lambda_{i,1} * lambda_{i,1}^{-1} = 1. Returns a description of the first
/// failure, or an empty string.
inline std::string oracle_relation_failure(const OracleRing& ring, const Limits& limits = {}) {
  const ModulusSpec& spec = ring.spec();
  const int q = spec.q();
  for (int i = 0; i < spec.prime_count(); ++i) {
    const LocalRing& local = ring.local(i);
    const std::string tag = "prime " + std::to_string(i + 1) + ": ";
    const LocalElement l1_pow = local.pow(local.lambda(1), q - 1);
    const LocalElement minus_p = local.scale(local.one(), RatFn(spec, -spec.prime(i)));
    if (!(l1_pow == minus_p)) return tag + "lambda_1^(q-1) != -P";
    if (!(local.mul(local.lambda(1), local.lambda1_inverse()) == local.one())) return tag + "lambda_1 inverse";
    const UPoly rho_p = carlitz_polynomial(spec.prime(i), limits);
    if (!(local.evaluate(rho_p, local.lambda(1)) == local.zero())) return tag + "lambda_1 is not P-torsion";
    for (int k = 2; k <= spec.multiplicity(i); ++k) {
      const LocalElement lhs = local.pow(local.lambda(k), q);
      const LocalElement rhs = local.add(local.lambda(k - 1), local.mul(l1_pow, local.lambda(k)));
      if (!(lhs == rhs)) return tag + "tower relation fails at level " + std::to_string(k);
      if (!(local.evaluate(rho_p, local.lambda(k)) == local.lambda(k - 1))) {
        return tag + "rho_P(lambda_k) != lambda_(k-1) at level " + std::to_string(k);
      }
    }
  }
  return {};
}

}  // namespace cfd
