#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cfd/error.hpp"
#include "cfd/field.hpp"
#include "cfd/modulus.hpp"
#include "cfd/poly.hpp"

namespace cfd {

namespace detail {

// Recursive-descent reader for sums of products of integers, g, T and
// parenthesized subexpressions with non-negative integer powers. Juxtaposition
// multiplies, so "2T^2" and "2*T^2" agree.
class LiteralParser {
 public:
  LiteralParser(std::string_view text, const Field& field) : text_(text), field_(field) {}

  Poly parse() {
    Poly value = expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  Poly expr() {
    skip_space();
    Poly value(field_);
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Poly t = term();
    value = negate ? -t : t;
    while (true) {
      skip_space();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Poly next = term();
      value = c == '+' ? value + next : value - next;
    }
    return value;
  }

  Poly term() {
    Poly value = power();
    while (true) {
      skip_space();
      const char c = peek();
      if (c == '*') {
        ++pos_;
        value = value * power();
      } else if (starts_atom(c)) {
        value = value * power();
      } else {
        break;
      }
    }
    return value;
  }

  Poly power() {
    Poly base = atom();
    skip_space();
    if (peek() == '^') {
      ++pos_;
      skip_space();
      const long long e = integer();
      if (e > 1 << 20) error("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Poly atom() {
    skip_space();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return Poly::constant(field_, field_.from_int(integer()));
    if (c == 'T') {
      ++pos_;
      return Poly::t(field_);
    }
    if (c == 'g') {
      ++pos_;
      if (field_.r() == 1) error("generator 'g' is only defined for extension fields");
      return Poly::constant(field_, field_.generator());
    }
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      skip_space();
      if (peek() != ')') error("missing ')'");
      ++pos_;
      return inner;
    }
    error(c == '\0' ? "unexpected end of input" : "unexpected '" + std::string(1, c) + "'");
  }

  long long integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) error("expected an integer");
    long long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > (1LL << 40)) error("integer too large");
      ++pos_;
    }
    return value;
  }

  static bool starts_atom(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'T' || c == 'g' || c == '(';
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorKind::InvalidInput, "cannot parse '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                                      ": " + message);
  }

  std::string_view text_;
  const Field& field_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Polynomial literal in T, e.g. "T^2+2*T+1" or "(g+1)*T+g".
inline Poly parse_poly(std::string_view text, const Field& field) {
  return detail::LiteralParser(text, field).parse();
}

/// Element literal: a decimal residue, or a polynomial in g for extension fields.
inline Fq parse_element(std::string_view text, const Field& field) {
  const Poly value = parse_poly(text, field);
  if (value.degree() > 0) fail(ErrorKind::InvalidInput, "'" + std::string(text) + "' is not a field element");
  return value.coeff(0);
}

/// Either the factored form "root^mult,root^mult,..." or a coefficient literal
/// in T (recognized by the presence of T), which is then split.
inline ModulusSpec parse_modulus(std::string_view text, std::shared_ptr<const Field> field) {
  const std::string_view body = detail::trim(text);
  if (body.empty()) fail(ErrorKind::InvalidInput, "empty modulus");
  if (body.find('T') != std::string_view::npos) return split_factor(parse_poly(body, *field), field);

  std::vector<PrimeFactor> factors;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    const std::string_view item = detail::trim(body.substr(start, comma - start));
    const std::size_t caret = item.rfind('^');
    if (caret == std::string_view::npos) {
      fail(ErrorKind::InvalidInput, "factored modulus entries must read root^multiplicity, got '" +
                                        std::string(item) + "'");
    }
    const std::string mult_text(detail::trim(item.substr(caret + 1)));
    if (mult_text.empty() || mult_text.find_first_not_of("0123456789") != std::string::npos ||
        mult_text.size() > 6) {
      fail(ErrorKind::InvalidInput, "bad multiplicity in '" + std::string(item) + "'");
    }
    factors.push_back({parse_element(item.substr(0, caret), *field), std::stoi(mult_text)});
    start = comma + 1;
  }
  return ModulusSpec(std::move(field), std::move(factors));
}

}  // namespace cfd
