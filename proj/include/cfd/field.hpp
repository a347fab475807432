#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/limits.hpp"

namespace cfd {

/// An element of F_q, encoded as the integer sum_i coords[i] * p^i of its
/// coordinates in the power basis of the generator g. Prime-field elements are
/// therefore their own residues. Only meaningful together with its Field.
struct Fq {
  std::uint16_t v = 0;

  constexpr bool is_zero() const { return v == 0; }
  friend constexpr auto operator<=>(const Fq&, const Fq&) = default;
};

namespace detail {

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Dense polynomials over F_p with int coefficients, lowest degree first.
using PrimePoly = std::vector<int>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inverse_mod(int a, int p) {
  int result = 1;
  int base = a % p;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return result;
}

inline PrimePoly mod_prime_poly(PrimePoly a, const PrimePoly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int inv_lead = inverse_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int factor = a.back() * inv_lead % p;
    for (int i = 0; i <= db; ++i) {
      a[shift + i] = ((a[shift + i] - factor * b[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible_over_prime(const PrimePoly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1) return false;
  for (int d = 1; 2 * d <= deg; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long idx = 0; idx < count; ++idx) {
      PrimePoly divisor(d + 1, 0);
      long long rest = idx;
      for (int i = 0; i < d; ++i) {
        divisor[i] = static_cast<int>(rest % p);
        rest /= p;
      }
      divisor[d] = 1;
      if (mod_prime_poly(f, divisor, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// The finite field F_q, q = p^r, with full addition, multiplication and
/// inversion tables. Immutable once built; share through std::shared_ptr.
class Field {
 public:
  int p() const { return p_; }
  int r() const { return r_; }
  int q() const { return q_; }

  /// Monic defining polynomial over F_p, lowest degree first (length r+1).
  const std::vector<int>& defining_poly() const { return defining_; }

  Fq zero() const { return Fq{0}; }
  Fq one() const { return Fq{1}; }
  Fq minus_one() const { return neg(one()); }

  /// The generator g of F_q over F_p (the class of the indeterminate modulo the
  /// defining polynomial). Returns 1 for prime fields.
  Fq generator() const { return r_ > 1 ? Fq{static_cast<std::uint16_t>(p_)} : one(); }

  /// Image of an integer under Z -> F_p -> F_q.
  Fq from_int(long long n) const {
    long long m = n % p_;
    if (m < 0) m += p_;
    return Fq{static_cast<std::uint16_t>(m)};
  }

  Fq from_coords(std::span<const int> coords) const {
    if (static_cast<int>(coords.size()) != r_) {
      fail(ErrorKind::InvalidInput, "expected " + std::to_string(r_) + " coordinates");
    }
    int v = 0;
    for (int i = r_ - 1; i >= 0; --i) {
      int c = coords[i] % p_;
      if (c < 0) c += p_;
      v = v * p_ + c;
    }
    return Fq{static_cast<std::uint16_t>(v)};
  }

  std::vector<int> coords(Fq a) const {
    std::vector<int> out(r_);
    int v = a.v;
    for (int i = 0; i < r_; ++i) {
      out[i] = v % p_;
      v /= p_;
    }
    return out;
  }

  Fq add(Fq a, Fq b) const { return add_[index(a, b)]; }
  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
  Fq mul(Fq a, Fq b) const { return mul_[index(a, b)]; }
  Fq neg(Fq a) const { return neg_[a.v]; }

  Fq inv(Fq a) const {
    if (a.is_zero()) fail(ErrorKind::InvalidInput, "inverse of zero in F_" + std::to_string(q_));
    return inv_[a.v];
  }

  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

  /// a^e for any integer e; negative exponents invert (a must be nonzero).
  Fq pow(Fq a, long long e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Fq result = one();
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  /// All q elements in encoding order.
  std::vector<Fq> elements() const {
    std::vector<Fq> out;
    out.reserve(q_);
    for (int v = 0; v < q_; ++v) out.push_back(Fq{static_cast<std::uint16_t>(v)});
    return out;
  }

  /// Decimal residue for prime fields, a polynomial in g otherwise ("g^2+2*g+1").
  std::string format(Fq a) const {
    if (r_ == 1) return std::to_string(a.v);
    if (a.is_zero()) return "0";
    const auto c = coords(a);
    std::string out;
    for (int i = r_ - 1; i >= 0; --i) {
      if (c[i] == 0) continue;
      if (!out.empty()) out += '+';
      if (i == 0) {
        out += std::to_string(c[i]);
        continue;
      }
      if (c[i] != 1) out += std::to_string(c[i]) + "*";
      out += 'g';
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

  friend std::shared_ptr<const Field> field_make(int p, int r, std::optional<std::vector<int>> defining,
                                                 const Limits& limits);

 private:
  Field() = default;

  std::size_t index(Fq a, Fq b) const { return static_cast<std::size_t>(a.v) * q_ + b.v; }

  void build_tables() {
    const std::size_t n = static_cast<std::size_t>(q_) * q_;
    add_.assign(n, Fq{});
    mul_.assign(n, Fq{});
    neg_.assign(q_, Fq{});
    inv_.assign(q_, Fq{});
    std::vector<std::vector<int>> all(q_);
    for (int v = 0; v < q_; ++v) all[v] = coords(Fq{static_cast<std::uint16_t>(v)});
    for (int a = 0; a < q_; ++a) {
      std::vector<int> negated(r_);
      for (int i = 0; i < r_; ++i) negated[i] = (p_ - all[a][i]) % p_;
      neg_[a] = from_coords(negated);
      for (int b = 0; b < q_; ++b) {
        std::vector<int> sum(r_);
        for (int i = 0; i < r_; ++i) sum[i] = (all[a][i] + all[b][i]) % p_;
        add_[static_cast<std::size_t>(a) * q_ + b] = from_coords(sum);

        detail::PrimePoly prod(2 * r_ - 1, 0);
        for (int i = 0; i < r_; ++i) {
          for (int j = 0; j < r_; ++j) prod[i + j] = (prod[i + j] + all[a][i] * all[b][j]) % p_;
        }
        auto reduced = r_ > 1 ? detail::mod_prime_poly(prod, defining_, p_) : prod;
        reduced.resize(r_, 0);
        mul_[static_cast<std::size_t>(a) * q_ + b] = from_coords(reduced);
      }
    }
    for (int a = 1; a < q_; ++a) {
      for (int b = 1; b < q_; ++b) {
        if (mul_[static_cast<std::size_t>(a) * q_ + b] == one()) {
          inv_[a] = Fq{static_cast<std::uint16_t>(b)};
          break;
        }
      }
    }
  }

  int p_ = 2;
  int r_ = 1;
  int q_ = 2;
  std::vector<int> defining_;
  std::vector<Fq> add_;
  std::vector<Fq> mul_;
  std::vector<Fq> neg_;
  std::vector<Fq> inv_;
};

/// Conway polynomials for the small extension fields, lowest degree first.
inline std::optional<std::vector<int>> default_defining_poly(int p, int r) {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 2}, {1, 1, 1}},     // g^2+g+1
      {{2, 3}, {1, 1, 0, 1}},  // g^3+g+1
      {{3, 2}, {2, 2, 1}},     // g^2+2g+2
      {{2, 4}, {1, 1, 0, 0, 1}},  // g^4+g+1
  };
  if (auto it = table.find({p, r}); it != table.end()) return it->second;
  return std::nullopt;
}

/// First irreducible monic polynomial of degree r over F_p, ordering candidates
/// by their coefficient vectors read from the constant term upwards.
inline std::vector<int> first_irreducible(int p, int r) {
  long long count = 1;
  for (int i = 0; i < r; ++i) count *= p;
  for (long long idx = 0; idx < count; ++idx) {
    std::vector<int> candidate(r + 1, 0);
    long long rest = idx;
    for (int i = 0; i < r; ++i) {
      candidate[i] = static_cast<int>(rest % p);
      rest /= p;
    }
    candidate[r] = 1;
    if (detail::is_irreducible_over_prime(candidate, p)) return candidate;
  }
  fail(ErrorKind::InternalInvariant, "no irreducible polynomial found");
}

/// Builds F_{p^r}. For r > 1 the defining polynomial is the supplied one, or the
/// Conway polynomial for F_4, F_8, F_9, F_16, or else the first irreducible one.
inline std::shared_ptr<const Field> field_make(int p, int r,
                                               std::optional<std::vector<int>> defining = std::nullopt,
                                               const Limits& limits = {}) {
  if (r < 1) fail(ErrorKind::InvalidInput, "extension degree must be positive");
  if (!detail::is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  long long q = 1;
  for (int i = 0; i < r; ++i) {
    q *= p;
    if (q > limits.max_field_order) {
      fail(ErrorKind::SizeLimit, "field order exceeds " + std::to_string(limits.max_field_order));
    }
  }

  auto field = std::shared_ptr<Field>(new Field());
  field->p_ = p;
  field->r_ = r;
  field->q_ = static_cast<int>(q);
  if (r == 1) {
    field->defining_ = {0, 1};
  } else if (defining) {
    auto poly = *defining;
    if (static_cast<int>(poly.size()) != r + 1) {
      fail(ErrorKind::InvalidInput, "defining polynomial must have degree " + std::to_string(r));
    }
    for (int& c : poly) c = ((c % p) + p) % p;
    if (poly.back() != 1) fail(ErrorKind::InvalidInput, "defining polynomial must be monic");
    if (!detail::is_irreducible_over_prime(poly, p)) {
      fail(ErrorKind::NotIrreducible, "defining polynomial is reducible over F_" + std::to_string(p));
    }
    field->defining_ = std::move(poly);
  } else {
    auto conway = default_defining_poly(p, r);
    field->defining_ = conway ? *conway : first_irreducible(p, r);
  }
  field->build_tables();
  return field;
}

/// Splits q into p^r, failing with NotPrime when q is not a prime power.
inline std::pair<int, int> prime_power_decompose(long long q) {
  if (q < 2) fail(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  long long p = 2;
  while (q % p != 0) ++p;
  int r = 0;
  long long rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++r;
  }
  if (rest != 1) fail(ErrorKind::NotPrime, std::to_string(q) + " is not a prime power");
  return {static_cast<int>(p), r};
}

}  // namespace cfd
