#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cfd/differentials.hpp"
#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/lambda.hpp"
#include "cfd/limits.hpp"
#include "cfd/modulus.hpp"
#include "cfd/poly.hpp"

namespace cfd {

/// Dense row-major matrix over F_q.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(const Field& field, int rows, int cols)
      : field_(&field), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, Fq{}) {}

  static FqMatrix identity(const Field& field, int n) {
    FqMatrix m(field, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const Field& field() const { return *field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Fq& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Fq operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend FqMatrix operator*(const FqMatrix& a, const FqMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidInput, "matrix shapes do not match");
    const Field& f = *a.field_;
    FqMatrix out(f, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const Fq x = a(i, k);
        if (x.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) out(i, j) = f.add(out(i, j), f.mul(x, b(k, j)));
      }
    }
    return out;
  }

  friend FqMatrix operator-(const FqMatrix& a, const FqMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidInput, "matrix shapes do not match");
    FqMatrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = a.field_->sub(a.data_[i], b.data_[i]);
    return out;
  }

  FqMatrix pow(std::uint64_t e) const {
    FqMatrix result = identity(*field_, rows_);
    FqMatrix base = *this;
    while (e > 0) {
      if (e & 1u) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Fq x) { return x.is_zero(); });
  }

  bool is_diagonal() const {
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) {
        if (i != j && !(*this)(i, j).is_zero()) return false;
      }
    }
    return true;
  }

  Fq trace() const {
    Fq t{};
    for (int i = 0; i < std::min(rows_, cols_); ++i) t = field_->add(t, (*this)(i, i));
    return t;
  }

  /// Rank by Gaussian elimination on a copy.
  int rank() const {
    if (rows_ == 0 || cols_ == 0) return 0;
    FqMatrix m = *this;
    const Field& f = *field_;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
      int pivot = -1;
      for (int r = rank; r < rows_; ++r) {
        if (!m(r, c).is_zero()) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) continue;
      if (pivot != rank) {
        for (int j = 0; j < cols_; ++j) std::swap(m(pivot, j), m(rank, j));
      }
      const Fq inv = f.inv(m(rank, c));
      for (int r = rank + 1; r < rows_; ++r) {
        const Fq factor = f.mul(m(r, c), inv);
        if (factor.is_zero()) continue;
        for (int j = c; j < cols_; ++j) m(r, j) = f.sub(m(r, j), f.mul(factor, m(rank, j)));
      }
      ++rank;
    }
    return rank;
  }

  bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

 private:
  const Field* field_ = nullptr;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Fq> data_;
};

namespace detail {

inline Poly reduce_unit(const Poly& a, const ModulusSpec& spec) {
  const Poly m = spec.modulus();
  const Poly r = (a.field() ? a : Poly(spec.field())) % m;
  if (r.is_zero() || gcd(r, m).degree() != 0) {
    fail(ErrorKind::NotAUnit, format_poly(a) + " is not a unit modulo " + format_poly(m));
  }
  return r;
}

// Images sigma_A(lambda_{i,k}) = sum_{l<k} alpha_{i,l} lambda_{i,k-l} and their
// powers, memoized per call.
class SigmaImages {
 public:
  SigmaImages(const Poly& a, const ModulusSpec& spec) : spec_(spec) {
    for (int i = 0; i < spec.prime_count(); ++i) digits_.push_back(padic_digits(a, spec.prime(i), spec.multiplicity(i)));
  }

  Fq leading_digit(int i) const { return digits_[static_cast<std::size_t>(i)][0]; }

  const LambdaSum& power(int i, int k, int e) {
    const auto key = std::make_tuple(i, k, e);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    LambdaSum value(spec_.field());
    if (e == 0) {
      value.add(LambdaMonomial::one(spec_));
    } else if (e == 1) {
      for (int l = 0; l < k; ++l) {
        LambdaMonomial term = LambdaMonomial::generator(spec_, i, k - l);
        term.scalar = digits_[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        value.add(term);
      }
    } else {
      value = power(i, k, e - 1) * power(i, k, 1);
    }
    return cache_.emplace(key, std::move(value)).first->second;
  }

 private:
  const ModulusSpec& spec_;
  std::vector<DigitVector> digits_;
  std::map<std::tuple<int, int, int>, LambdaSum> cache_;
};

}  // namespace detail

/// sigma_A applied term by term without canonicalizing. Coefficients in
/// F_q(T) and dT are fixed; lambda_{i,1}^e picks up alpha_{i,0}^e.
inline LambdaSum sigma_expand(const Poly& a, const LambdaSum& s, const ModulusSpec& spec) {
  const Poly unit = detail::reduce_unit(a, spec);
  const Field& f = spec.field();
  detail::SigmaImages images(unit, spec);
  LambdaSum out(f);
  for (const auto& [key, c] : s.terms()) {
    LambdaMonomial base = LambdaMonomial::from_key(key, c);
    for (int i = 0; i < spec.prime_count(); ++i) {
      base.scalar = f.mul(base.scalar, f.pow(images.leading_digit(i), base.exponent(spec, i, 1)));
      for (int k = 2; k <= spec.multiplicity(i); ++k) base.exponent(spec, i, k) = 0;
    }
    LambdaSum term = LambdaSum::of(f, base);
    for (int i = 0; i < spec.prime_count(); ++i) {
      for (int k = 2; k <= spec.multiplicity(i); ++k) {
        const int e = key.exponents[static_cast<std::size_t>(spec.slot(i, k))];
        if (e < 0) fail(ErrorKind::InvalidInput, "negative exponent on lambda_{i,k} with k >= 2");
        if (e > 0) term = term * images.power(i, k, e);
      }
    }
    out.add(term);
  }
  return out;
}

/// sigma_A(s) in canonical form for the given window policy.
inline LambdaSum sigma_apply(const Poly& a, const LambdaSum& s, const ModulusSpec& spec, const WindowPolicy& w) {
  return canonicalize(sigma_expand(a, s, spec), w, spec);
}

/// The anchored basis with an index from monomial keys to positions.
class CanonicalBasis {
 public:
  CanonicalBasis(const ModulusSpec& spec, int anchor, const Limits& limits = {})
      : anchor_(anchor), window_(WindowPolicy::standard(spec, anchor)), tuples_(enumerate_basis(spec, anchor, limits)) {
    for (std::size_t j = 0; j < tuples_.size(); ++j) {
      LambdaMonomial m = to_monomial(tuples_[j], spec, anchor);
      index_.emplace(m.key(), static_cast<int>(j));
      monomials_.push_back(std::move(m));
    }
  }

  int anchor() const { return anchor_; }
  const WindowPolicy& window() const { return window_; }
  const std::vector<ExponentTuple>& tuples() const { return tuples_; }
  const std::vector<LambdaMonomial>& monomials() const { return monomials_; }
  int size() const { return static_cast<int>(tuples_.size()); }

  /// Position of a canonical monomial (scalar ignored), or -1.
  int index_of(const LambdaKey& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  int anchor_;
  WindowPolicy window_;
  std::vector<ExponentTuple> tuples_;
  std::vector<LambdaMonomial> monomials_;
  std::map<LambdaKey, int> index_;
};

/// Coordinates of a canonical sum in the basis; InternalInvariant if a term
/// is not a basis monomial.
inline std::vector<Fq> basis_coordinates(const LambdaSum& canonical, const CanonicalBasis& basis) {
  std::vector<Fq> coords(static_cast<std::size_t>(basis.size()), Fq{});
  for (const auto& [key, c] : canonical.terms()) {
    const int idx = basis.index_of(key);
    if (idx < 0) {
      fail(ErrorKind::InternalInvariant, "canonical term outside the anchored basis");
    }
    coords[static_cast<std::size_t>(idx)] = c;
  }
  return coords;
}

/// Column j holds the coordinates of sigma_A(basis_j).
inline FqMatrix rep_matrix(const Poly& a, const ModulusSpec& spec, const CanonicalBasis& basis) {
  const Field& f = spec.field();
  FqMatrix m(f, basis.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const LambdaSum image = sigma_apply(a, LambdaSum::of(f, basis.monomials()[static_cast<std::size_t>(j)]), spec,
                                        basis.window());
    const std::vector<Fq> coords = basis_coordinates(image, basis);
    for (int i = 0; i < basis.size(); ++i) m(i, j) = coords[static_cast<std::size_t>(i)];
  }
  return m;
}

inline FqMatrix rep_matrix(const Poly& a, const ModulusSpec& spec, int anchor, const Limits& limits = {}) {
  return rep_matrix(a, spec, CanonicalBasis(spec, anchor, limits));
}

struct RepresentationTable {
  int anchor = 0;
  std::vector<ExponentTuple> basis;
  std::vector<Poly> units;
  std::vector<FqMatrix> matrices;

  const FqMatrix& at(const Poly& a) const {
    const int idx = unit_index(units, a);
    if (idx < 0) fail(ErrorKind::NotAUnit, format_poly(a) + " is not a reduced unit");
    return matrices[static_cast<std::size_t>(idx)];
  }
};

/// Indices of a generating set of the unit group, chosen greedily in unit
/// order: each new generator lies outside the subgroup spanned so far.
inline std::vector<int> unit_generators(const std::vector<Poly>& units, const ModulusSpec& spec) {
  const Poly modulus = spec.modulus();
  std::vector<char> covered(units.size(), 0);
  std::vector<int> members;
  const int one = unit_index(units, Poly::one(spec.field()));
  covered[static_cast<std::size_t>(one)] = 1;
  members.push_back(one);
  std::vector<int> gens;
  for (std::size_t g = 0; g < units.size(); ++g) {
    if (covered[g]) continue;
    gens.push_back(static_cast<int>(g));
    // Close the subgroup under multiplication by the new generator.
    for (std::size_t idx = 0; idx < members.size(); ++idx) {
      Poly x = units[static_cast<std::size_t>(members[idx])];
      while (true) {
        x = (x * units[g]) % modulus;
        const int pos = unit_index(units, x);
        if (covered[static_cast<std::size_t>(pos)]) break;
        covered[static_cast<std::size_t>(pos)] = 1;
        members.push_back(pos);
      }
    }
  }
  return gens;
}

/// rho(A) for every unit, verified before return: rho(1) = I and
/// rho(A S) = rho(A) rho(S) for every unit A and every generator S, which
/// forces multiplicativity on all pairs.
inline RepresentationTable representation_table(const ModulusSpec& spec, int anchor, const Limits& limits = {}) {
  const CanonicalBasis basis(spec, anchor, limits);
  if (basis.size() == 0) fail(ErrorKind::InvalidInput, "genus 0: there is no representation to tabulate");
  RepresentationTable table;
  table.anchor = anchor;
  table.basis = basis.tuples();
  table.units = units_enumerate(spec, limits);
  table.matrices.reserve(table.units.size());
  for (const Poly& a : table.units) table.matrices.push_back(rep_matrix(a, spec, basis));

  const Field& f = spec.field();
  if (!(table.at(Poly::one(f)) == FqMatrix::identity(f, basis.size()))) {
    fail(ErrorKind::InternalInvariant, "rho(1) is not the identity");
  }
  const Poly modulus = spec.modulus();
  for (int s : unit_generators(table.units, spec)) {
    const FqMatrix& rs = table.matrices[static_cast<std::size_t>(s)];
    for (std::size_t a = 0; a < table.units.size(); ++a) {
      const Poly product = (table.units[a] * table.units[static_cast<std::size_t>(s)]) % modulus;
      if (!(table.at(product) == table.matrices[a] * rs)) {
        fail(ErrorKind::InternalInvariant, "rho(" + format_poly(table.units[a]) + " * " +
                                               format_poly(table.units[static_cast<std::size_t>(s)]) +
                                               ") differs from the matrix product");
      }
    }
  }
  return table;
}

/// Multiplicative order of a unit modulo M.
inline std::int64_t unit_order(const Poly& a, const ModulusSpec& spec) {
  const Poly modulus = spec.modulus();
  const Poly unit = detail::reduce_unit(a, spec);
  const Poly one = Poly::one(spec.field());
  Poly x = unit;
  std::int64_t order = 1;
  while (!(x == one)) {
    x = (x * unit) % modulus;
    ++order;
  }
  return order;
}

}  // namespace cfd
