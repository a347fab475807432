#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/field.hpp"

namespace cfd {

/// A polynomial in T over F_q, coefficients lowest degree first with no
/// trailing zeros. The Field is borrowed and must outlive the polynomial. A
/// default-constructed Poly is a field-less zero that adopts the field of the
/// other operand in arithmetic.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Field& field) : field_(&field) {}
  Poly(const Field& field, std::vector<Fq> coeffs) : field_(&field), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(const Field& field, Fq c) { return Poly(field, {c}); }
  static Poly one(const Field& field) { return constant(field, field.one()); }

  static Poly monomial(const Field& field, Fq c, int degree) {
    std::vector<Fq> coeffs(static_cast<std::size_t>(degree) + 1, field.zero());
    coeffs.back() = c;
    return Poly(field, std::move(coeffs));
  }

  /// The indeterminate T.
  static Poly t(const Field& field) { return monomial(field, field.one(), 1); }

  /// T - root.
  static Poly linear(const Field& field, Fq root) { return Poly(field, {field.neg(root), field.one()}); }

  const Field* field() const { return field_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Fq>& coeffs() const { return coeffs_; }

  Fq coeff(int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : Fq{};
  }

  Fq lead() const { return coeffs_.empty() ? Fq{} : coeffs_.back(); }

  Fq eval(Fq x) const {
    Fq acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field_->add(field_->mul(acc, x), *it);
    return acc;
  }

  /// The image under the q^times-power Frobenius of F_q[T]: b(T) -> b(T^{q^times}).
  /// Coefficients are fixed since they lie in F_q.
  Poly frobenius(int times) const {
    if (is_zero() || times == 0) return *this;
    long long stride = 1;
    for (int i = 0; i < times; ++i) stride *= field_->q();
    std::vector<Fq> out(static_cast<std::size_t>(degree() * stride) + 1, Fq{});
    for (int i = 0; i <= degree(); ++i) out[static_cast<std::size_t>(i * stride)] = coeffs_[i];
    return Poly(*field_, std::move(out));
  }

  Poly scaled(Fq c) const {
    if (c.is_zero() || is_zero()) return Poly(*field_);
    std::vector<Fq> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = field_->mul(coeffs_[i], c);
    return Poly(*field_, std::move(out));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field_->inv(lead()));
  }

  Poly pow(unsigned e) const {
    const Field& f = *require_field(*this, *this);
    Poly result = one(f);
    Poly base = *this;
    while (e > 0) {
      if (e & 1u) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const Field* f = pick_field(a, b);
    if (f == nullptr) return Poly();
    std::vector<Fq> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Fq{});
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = f->add(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
    }
    return Poly(*f, std::move(out));
  }

  friend Poly operator-(const Poly& a) {
    if (a.field_ == nullptr) return a;
    std::vector<Fq> out(a.coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.field_->neg(a.coeffs_[i]);
    return Poly(*a.field_, std::move(out));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const Field* f = pick_field(a, b);
    if (f == nullptr) return Poly();
    if (a.is_zero() || b.is_zero()) return Poly(*f);
    std::vector<Fq> out(a.coeffs_.size() + b.coeffs_.size() - 1, Fq{});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        out[i + j] = f->add(out[i + j], f->mul(a.coeffs_[i], b.coeffs_[j]));
      }
    }
    return Poly(*f, std::move(out));
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  /// Euclidean division; b must be nonzero.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidInput, "polynomial division by zero");
    const Field& f = *b.field_;
    if (a.degree() < b.degree()) return {Poly(f), a.field_ ? a : Poly(f)};
    std::vector<Fq> rem = a.coeffs_;
    std::vector<Fq> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Fq{});
    const Fq inv_lead = f.inv(b.lead());
    for (int i = a.degree(); i >= b.degree(); --i) {
      const Fq c = f.mul(rem[i], inv_lead);
      if (c.is_zero()) continue;
      const int shift = i - b.degree();
      quo[shift] = c;
      for (int j = 0; j <= b.degree(); ++j) rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b.coeffs_[j]));
    }
    return {Poly(f, std::move(quo)), Poly(f, std::move(rem))};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  /// Monic gcd (zero when both inputs are zero).
  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

 private:
  static const Field* pick_field(const Poly& a, const Poly& b) { return a.field_ ? a.field_ : b.field_; }

  static const Field* require_field(const Poly& a, const Poly& b) {
    const Field* f = pick_field(a, b);
    if (f == nullptr) fail(ErrorKind::InvalidInput, "polynomial without a field");
    return f;
  }

  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  const Field* field_ = nullptr;
  std::vector<Fq> coeffs_;
};

/// Ascending-degree rendering such as "1+2*T+T^2"; extension-field
/// coefficients with several terms are parenthesized.
inline std::string format_poly(const Poly& a) {
  if (a.is_zero() || a.field() == nullptr) return "0";
  const Field& f = *a.field();
  std::string out;
  for (int i = 0; i <= a.degree(); ++i) {
    const Fq c = a.coeff(i);
    if (c.is_zero()) continue;
    if (!out.empty()) out += '+';
    std::string coef = f.format(c);
    if (i == 0) {
      out += coef;
      continue;
    }
    if (c != f.one()) {
      if (coef.find('+') != std::string::npos) coef = "(" + coef + ")";
      out += coef + "*";
    }
    out += 'T';
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace cfd
