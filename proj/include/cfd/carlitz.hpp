#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/limits.hpp"
#include "cfd/poly.hpp"

namespace cfd {

/// sum_j c_j tau^j with c_j in F_q[T], tau the q-power Frobenius u -> u^q.
/// Stored dense in tau-degree; multiplication applies tau * c = c^q * tau.
class TwistedOperator {
 public:
  TwistedOperator() = default;
  explicit TwistedOperator(const Field& field) : field_(&field) {}
  TwistedOperator(const Field& field, std::vector<Poly> coeffs) : field_(&field), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static TwistedOperator scalar(const Poly& c) {
    return TwistedOperator(*c.field(), std::vector<Poly>{c});
  }

  static TwistedOperator identity(const Field& field) { return scalar(Poly::one(field)); }

  static TwistedOperator tau(const Field& field) {
    return TwistedOperator(field, std::vector<Poly>{Poly(field), Poly::one(field)});
  }

  const Field& field() const { return *field_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Poly>& coeffs() const { return coeffs_; }

  Poly coeff(int j) const {
    return j >= 0 && j < static_cast<int>(coeffs_.size()) ? coeffs_[j] : Poly(*field_);
  }

  friend bool operator==(const TwistedOperator& a, const TwistedOperator& b) { return a.coeffs_ == b.coeffs_; }

  friend TwistedOperator operator+(const TwistedOperator& a, const TwistedOperator& b) {
    const Field& f = a.field_ ? *a.field_ : *b.field_;
    std::vector<Poly> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Poly(f));
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = a.coeff(static_cast<int>(j)) + b.coeff(static_cast<int>(j));
    }
    return TwistedOperator(f, std::move(out));
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  const Field* field_ = nullptr;
  std::vector<Poly> coeffs_;
};

/// Composition a o b: (sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^{q^i} tau^{i+j}.
inline TwistedOperator twisted_mul(const TwistedOperator& a, const TwistedOperator& b) {
  const Field& f = a.field();
  if (a.is_zero() || b.is_zero()) return TwistedOperator(f);
  std::vector<Poly> out(static_cast<std::size_t>(a.degree() + b.degree()) + 1, Poly(f));
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j) out[i + j] += a.coeff(i) * b.coeff(j).frobenius(i);
  }
  return TwistedOperator(f, std::move(out));
}

inline TwistedOperator operator*(const TwistedOperator& a, const TwistedOperator& b) { return twisted_mul(a, b); }

/// The Carlitz operator of M = sum a_k T^k, namely sum a_k (tau + T)^k,
/// evaluated by Horner's rule (the a_k are constants and commute with tau).
inline TwistedOperator carlitz_operator(const Poly& m) {
  if (m.field() == nullptr) fail(ErrorKind::InvalidInput, "polynomial without a field");
  const Field& f = *m.field();
  if (m.is_zero()) return TwistedOperator(f);
  const TwistedOperator step = TwistedOperator::tau(f) + TwistedOperator::scalar(Poly::t(f));
  TwistedOperator result = TwistedOperator::scalar(Poly::constant(f, m.lead()));
  for (int k = m.degree() - 1; k >= 0; --k) {
    result = twisted_mul(result, step) + TwistedOperator::scalar(Poly::constant(f, m.coeff(k)));
  }
  return result;
}

/// An F_q-linear polynomial sum_j c_j u^{q^j}, keyed by j.
struct AdditivePoly {
  std::map<int, Poly> terms;
};

inline AdditivePoly to_additive(const TwistedOperator& op) {
  AdditivePoly out;
  for (int j = 0; j <= op.degree(); ++j) {
    if (!op.coeff(j).is_zero()) out.terms.emplace(j, op.coeff(j));
  }
  return out;
}

/// A commutative polynomial in u over F_q[T], lowest degree first.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(const Field& field) : field_(&field) {}
  UPoly(const Field& field, std::vector<Poly> coeffs) : field_(&field), coeffs_(std::move(coeffs)) { normalize(); }

  const Field& field() const { return *field_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Poly>& coeffs() const { return coeffs_; }

  Poly coeff(int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : Poly(*field_);
  }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.coeffs_ == b.coeffs_; }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    const Field& f = a.field_ ? *a.field_ : *b.field_;
    std::vector<Poly> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Poly(f));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return UPoly(f, std::move(out));
  }

  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    const Field& f = a.field_ ? *a.field_ : *b.field_;
    if (a.is_zero() || b.is_zero()) return UPoly(f);
    std::vector<Poly> out(a.coeffs_.size() + b.coeffs_.size() - 1, Poly(f));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return UPoly(f, std::move(out));
  }

  /// Division by a divisor whose leading coefficient is a nonzero constant,
  /// so the quotient stays in F_q[T][u].
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero() || b.coeffs_.back().degree() != 0) {
      fail(ErrorKind::InvalidInput, "divisor must have a constant leading coefficient");
    }
    const Field& f = *b.field_;
    if (a.degree() < b.degree()) return {UPoly(f), a};
    std::vector<Poly> rem = a.coeffs_;
    std::vector<Poly> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Poly(f));
    const Fq inv_lead = f.inv(b.coeffs_.back().lead());
    for (int i = a.degree(); i >= b.degree(); --i) {
      if (rem[i].is_zero()) continue;
      const Poly c = rem[i].scaled(inv_lead);
      const int shift = i - b.degree();
      quo[shift] = c;
      for (int j = 0; j <= b.degree(); ++j) rem[shift + j] -= c * b.coeffs_[j];
    }
    return {UPoly(f, std::move(quo)), UPoly(f, std::move(rem))};
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  const Field* field_ = nullptr;
  std::vector<Poly> coeffs_;
};

/// Expands sum_j c_j u^{q^j} densely; SizeLimit guards the exponent q^j.
inline UPoly materialize(const AdditivePoly& a, const Field& field, const Limits& limits = {}) {
  if (a.terms.empty()) return UPoly(field);
  std::vector<Poly> out;
  for (const auto& [j, c] : a.terms) {
    long long exponent = 1;
    for (int i = 0; i < j; ++i) {
      exponent *= field.q();
      if (exponent > limits.max_u_degree) {
        fail(ErrorKind::SizeLimit, "Carlitz polynomial degree exceeds " + std::to_string(limits.max_u_degree));
      }
    }
    if (static_cast<long long>(out.size()) <= exponent) out.resize(static_cast<std::size_t>(exponent) + 1, Poly(field));
    out[static_cast<std::size_t>(exponent)] = c;
  }
  return UPoly(field, std::move(out));
}

/// rho_A(u), the Carlitz polynomial of A as an ordinary polynomial in u.
inline UPoly carlitz_polynomial(const Poly& a, const Limits& limits = {}) {
  return materialize(to_additive(carlitz_operator(a)), *a.field(), limits);
}

/// Psi_{P^n}(u) = rho_{P^n}(u) / rho_{P^{n-1}}(u), of degree q^{n-1}(q-1).
inline UPoly cyclotomic_polynomial(const Poly& p, int n, const Limits& limits = {}) {
  if (p.field() == nullptr || p.degree() != 1 || p.lead() != p.field()->one()) {
    fail(ErrorKind::InvalidInput, "cyclotomic polynomial needs a monic linear P");
  }
  if (n < 1) fail(ErrorKind::InvalidInput, "cyclotomic level must be positive");
  const UPoly top = carlitz_polynomial(p.pow(static_cast<unsigned>(n)), limits);
  const UPoly below = carlitz_polynomial(p.pow(static_cast<unsigned>(n - 1)), limits);
  auto [quotient, remainder] = divmod(top, below);
  if (!remainder.is_zero()) fail(ErrorKind::InternalInvariant, "Carlitz polynomial division left a remainder");
  return quotient;
}

}  // namespace cfd
