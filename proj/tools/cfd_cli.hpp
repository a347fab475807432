#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfd/cfd.hpp"

namespace cfd::cli {

using Json = nlohmann::ordered_json;

struct Outcome {
  std::string out;
  std::string err;
  int code = 0;
};

inline constexpr int kMaxQ = 16;

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SizeLimit: return 3;
    case ErrorKind::InternalInvariant: return 4;
    default: return 2;
  }
}

struct RunConfig {
  int q = 0;
  std::string modulus;
  int anchor = 0;
  std::string format = "text";
  std::string unit;
  int max_degree = 3;
  Limits limits;
};

namespace detail {

inline std::shared_ptr<const Field> make_field(int q, const Limits& limits) {
  if (q > kMaxQ) fail(ErrorKind::SizeLimit, "q = " + std::to_string(q) + " exceeds the supported maximum " + std::to_string(kMaxQ));
  const auto [p, r] = prime_power_decompose(q);
  return field_make(p, r, std::nullopt, limits);
}

inline ModulusSpec make_spec(const RunConfig& cfg) {
  return parse_modulus(cfg.modulus, make_field(cfg.q, cfg.limits));
}

inline void check_anchor(const ModulusSpec& spec, int anchor) {
  if (anchor < 0 || anchor >= spec.prime_count()) {
    fail(ErrorKind::InvalidInput, "--at " + std::to_string(anchor) + " but the modulus has " +
                                      std::to_string(spec.prime_count()) + " prime factor(s)");
  }
}

inline Json mu_json(const ExponentTuple& t, const ModulusSpec& spec) {
  Json mu = Json::array();
  for (int j = 0; j < spec.prime_count(); ++j) {
    for (int k = 1; k <= spec.multiplicity(j); ++k) {
      mu.push_back({j + 1, k, t.mu[static_cast<std::size_t>(spec.slot(j, k))]});
    }
  }
  return mu;
}

// "(mu0; mu_{1,1},mu_{1,2}; mu_{2,1})".
inline std::string tuple_text(const ExponentTuple& t, const ModulusSpec& spec) {
  std::string out = "(" + std::to_string(t.mu0);
  for (int j = 0; j < spec.prime_count(); ++j) {
    out += ";";
    for (int k = 1; k <= spec.multiplicity(j); ++k) {
      out += (k == 1 ? " " : ",") + std::to_string(t.mu[static_cast<std::size_t>(spec.slot(j, k))]);
    }
  }
  return out + ")";
}

template <typename Seq>
std::string joined(const Seq& values, const std::string& sep) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += sep;
    out += std::to_string(v);
  }
  return out;
}

inline std::string render_tuples(const std::vector<ExponentTuple>& tuples, const ModulusSpec& spec, int anchor,
                                 const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    Json arr = Json::array();
    for (const ExponentTuple& t : tuples) {
      const ValuationReport v = mono_valuations(to_monomial(t, spec, anchor), spec);
      arr.push_back({{"mu0", t.mu0}, {"mu", mu_json(t, spec)}, {"val_finite", v.finite}, {"inf_bound", v.infinity_bound}});
    }
    os << arr.dump() << "\n";
  } else if (format == "csv") {
    os << "mu0,mu,val_finite,inf_bound\n";
    for (const ExponentTuple& t : tuples) {
      const ValuationReport v = mono_valuations(to_monomial(t, spec, anchor), spec);
      os << t.mu0 << "," << joined(t.mu, ";") << "," << joined(v.finite, ";") << "," << v.infinity_bound << "\n";
    }
  } else {
    for (const ExponentTuple& t : tuples) {
      const ValuationReport v = mono_valuations(to_monomial(t, spec, anchor), spec);
      os << tuple_text(t, spec) << "  val_finite=" << joined(v.finite, ",") << "  inf_bound=" << v.infinity_bound
         << "\n";
    }
  }
  return os.str();
}

inline Json matrix_json(const FqMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).v);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string matrix_text(const FqMatrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += m.field().format(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string matrix_csv(const FqMatrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ';';
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += std::to_string(m(i, j).v);
    }
  }
  return out;
}

inline std::string cmd_genus(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  const std::int64_t g = genus(spec);
  if (cfg.format == "json") {
    return Json{{"q", cfg.q}, {"modulus", spec.to_string()}, {"genus", g}, {"different_degree", different_degree(spec)}}
               .dump() +
           "\n";
  }
  if (cfg.format == "csv") return "modulus,genus,different_degree\n" + spec.to_string() + "," + std::to_string(g) + "," + std::to_string(different_degree(spec)) + "\n";
  return std::to_string(g) + "\n";
}

inline std::string cmd_basis(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  check_anchor(spec, cfg.anchor);
  return render_tuples(enumerate_basis(spec, cfg.anchor, cfg.limits), spec, cfg.anchor, cfg.format);
}

inline std::string cmd_generators(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  return render_tuples(enumerate_generators(spec, cfg.limits), spec, 0, cfg.format);
}

inline std::string cmd_count(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  check_anchor(spec, cfg.anchor);
  const std::int64_t n = count_via_series(spec, cfg.anchor);
  if (cfg.format == "json") {
    return Json{{"q", cfg.q}, {"modulus", spec.to_string()}, {"anchor", cfg.anchor}, {"count", n}}.dump() + "\n";
  }
  if (cfg.format == "csv") return "modulus,anchor,count\n" + spec.to_string() + "," + std::to_string(cfg.anchor) + "," + std::to_string(n) + "\n";
  return std::to_string(n) + "\n";
}

inline std::string cmd_rep(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  check_anchor(spec, cfg.anchor);
  const CanonicalBasis basis(spec, cfg.anchor, cfg.limits);
  if (basis.size() == 0) fail(ErrorKind::InvalidInput, "genus 0: there is no representation to tabulate");
  Json basis_ref = Json::array();
  for (const ExponentTuple& t : basis.tuples()) basis_ref.push_back({{"mu0", t.mu0}, {"mu", mu_json(t, spec)}});

  std::vector<std::pair<Poly, FqMatrix>> entries;
  if (!cfg.unit.empty()) {
    const Poly unit = ::cfd::detail::reduce_unit(parse_poly(cfg.unit, spec.field()), spec);
    entries.emplace_back(unit, rep_matrix(unit, spec, basis));
  } else {
    const RepresentationTable table = representation_table(spec, cfg.anchor, cfg.limits);
    for (std::size_t i = 0; i < table.units.size(); ++i) entries.emplace_back(table.units[i], table.matrices[i]);
  }

  std::ostringstream os;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& [unit, m] : entries) {
      arr.push_back({{"unit", format_poly(unit)}, {"matrix", matrix_json(m)}, {"basis_ref", basis_ref}});
    }
    os << (cfg.unit.empty() ? arr : arr[0]).dump() << "\n";
  } else if (cfg.format == "csv") {
    os << "unit,matrix\n";
    for (const auto& [unit, m] : entries) os << format_poly(unit) << "," << matrix_csv(m) << "\n";
  } else {
    os << "basis:";
    for (const ExponentTuple& t : basis.tuples()) os << " " << tuple_text(t, spec);
    os << "\n";
    for (const auto& [unit, m] : entries) os << "unit " << format_poly(unit) << "\n" << matrix_text(m);
  }
  return os.str();
}

inline std::string cmd_gaps(const RunConfig& cfg) {
  const ModulusSpec spec = make_spec(cfg);
  check_anchor(spec, cfg.anchor);
  std::vector<std::int64_t> orders;
  bool caveat = false;
  if (spec.is_prime_power() && spec.multiplicity(0) >= 2) {
    orders = order_sequence(spec, cfg.limits);
  } else {
    const ValuationMultiset vm = valuation_multiset(spec, cfg.anchor, cfg.limits);
    orders = vm.values;
    caveat = vm.caveat;
  }
  std::vector<std::int64_t> gaps = orders;
  for (auto& g : gaps) g += 1;
  const std::int64_t g = genus(spec);
  if (cfg.format == "json") {
    return Json{{"modulus", spec.to_string()}, {"anchor", cfg.anchor},   {"genus", g},
                {"orders", orders},            {"gaps", gaps},           {"caveat", caveat},
                {"gap_convention", "gap = order + 1"}}
               .dump() +
           "\n";
  }
  if (cfg.format == "csv") {
    return "modulus,anchor,genus,orders,gaps,caveat\n" + spec.to_string() + "," + std::to_string(cfg.anchor) + "," +
           std::to_string(g) + "," + joined(orders, ";") + "," + joined(gaps, ";") + "," + (caveat ? "true" : "false") +
           "\n";
  }
  std::string out = "orders: " + joined(orders, " ") + "\ngaps: " + joined(gaps, " ") + "  (gap = order + 1)\n";
  if (caveat) out += "caveat: several primes divide M; these are valuations of the basis, not a proven order sequence\n";
  return out;
}

inline Outcome cmd_verify(const RunConfig& cfg) {
  if (cfg.max_degree < 1) fail(ErrorKind::InvalidInput, "--max-deg must be at least 1");
  const std::vector<SuiteResult> results = run_verification(make_field(cfg.q, cfg.limits), cfg.max_degree, cfg.limits);
  bool all = true;
  std::ostringstream os;
  Json arr = Json::array();
  if (cfg.format == "csv") os << "suite,status,cases,detail\n";
  for (const SuiteResult& r : results) {
    all = all && r.passed;
    const std::string status = r.passed ? "PASS" : "FAIL";
    if (cfg.format == "json") {
      arr.push_back({{"suite", r.name}, {"passed", r.passed}, {"cases", r.cases}, {"detail", r.detail}});
    } else if (cfg.format == "csv") {
      os << r.name << "," << status << "," << r.cases << "," << r.detail << "\n";
    } else {
      os << status << " " << r.name << " (" << r.cases << " checks)";
      if (!r.passed) os << ": " << r.detail;
      os << "\n";
    }
  }
  if (cfg.format == "json") os << arr.dump() << "\n";
  return {os.str(), "", all ? 0 : 4};
}

}  // namespace detail

/// Runs one command line (without the program name) and captures its output.
inline Outcome dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Holomorphic differentials of split cyclotomic function fields", "cfd"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_modulus) {
    sub->add_option("--q", cfg.q, "field order, a prime power <= 16")->required();
    if (needs_modulus) {
      sub->add_option("--modulus", cfg.modulus, "\"root^mult,...\" or a polynomial in T")->required();
    }
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };

  CLI::App* genus_cmd = app.add_subcommand("genus", "genus of K_{q,M}");
  add_common(genus_cmd, true);
  CLI::App* basis_cmd = app.add_subcommand("basis", "canonical basis of holomorphic differentials");
  add_common(basis_cmd, true);
  basis_cmd->add_option("--at", cfg.anchor, "anchor prime index (0-based)");
  CLI::App* gen_cmd = app.add_subcommand("generators", "generating set of holomorphic differentials");
  add_common(gen_cmd, true);
  CLI::App* rep_cmd = app.add_subcommand("rep", "matrices of the Galois action on the basis");
  add_common(rep_cmd, true);
  rep_cmd->add_option("--at", cfg.anchor, "anchor prime index (0-based)");
  rep_cmd->add_option("--unit", cfg.unit, "a unit modulo M; all units when omitted");
  CLI::App* gaps_cmd = app.add_subcommand("gaps", "order and gap sequence at a ramified prime");
  add_common(gaps_cmd, true);
  gaps_cmd->add_option("--at", cfg.anchor, "anchor prime index (0-based)");
  CLI::App* count_cmd = app.add_subcommand("count", "basis size from the generating series");
  add_common(count_cmd, true);
  count_cmd->add_option("--at", cfg.anchor, "anchor prime index (0-based)");
  CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check the engine against the brute-force oracle");
  add_common(verify_cmd, false);
  verify_cmd->add_option("--max-deg", cfg.max_degree, "largest modulus degree to check");

  std::vector<std::string> storage{"cfd"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());

  std::ostringstream out;
  std::ostringstream err;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {out.str(), err.str(), code == 0 ? 0 : 2};
  }

  try {
    cfg.limits = Limits::from_env();
    if (*genus_cmd) return {detail::cmd_genus(cfg), "", 0};
    if (*basis_cmd) return {detail::cmd_basis(cfg), "", 0};
    if (*gen_cmd) return {detail::cmd_generators(cfg), "", 0};
    if (*rep_cmd) return {detail::cmd_rep(cfg), "", 0};
    if (*gaps_cmd) return {detail::cmd_gaps(cfg), "", 0};
    if (*count_cmd) return {detail::cmd_count(cfg), "", 0};
    if (*verify_cmd) return detail::cmd_verify(cfg);
  } catch (const Error& e) {
    return {"", std::string("error: ") + e.what() + "\n", exit_code(e.kind())};
  }
  return {"", "error: no subcommand\n", 2};
}

}  // namespace cfd::cli
