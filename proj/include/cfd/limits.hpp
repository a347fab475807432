#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "cfd/error.hpp"

namespace cfd {

/// Bounds that turn runaway enumerations into a SizeLimit error instead of a hang.
struct Limits {
  std::int64_t max_genus = 512;
  std::int64_t max_units = 4096;
  // Dimension of the brute-force tensor ring used for verification.
  std::int64_t max_oracle_dim = 256;
  // Largest u-degree materialized when a Carlitz operator is expanded.
  std::int64_t max_u_degree = 1 << 16;
  // Largest field order with precomputed tables.
  std::int64_t max_field_order = 256;

  /// Defaults, with CFD_MAX_GENUS overriding max_genus when set.
  static Limits from_env() {
    Limits limits;
    if (const char* raw = std::getenv("CFD_MAX_GENUS"); raw != nullptr && *raw != '\0') {
      char* end = nullptr;
      long long value = std::strtoll(raw, &end, 10);
      if (end == raw || *end != '\0' || value < 0) {
        fail(ErrorKind::InvalidInput, "CFD_MAX_GENUS must be a non-negative integer, got '" +
                                          std::string(raw) + "'");
      }
      limits.max_genus = value;
    }
    return limits;
  }
};

}  // namespace cfd
