// Command-line surface: ingest matrix-set JSON files, run the analyses, and
// emit machine-readable reports with deterministic exit codes.
//
//   0  every assertion passed
//   1  a structural assertion failed (certificate violated, non-binary entry,
//      an operator law broken)
//   2  divergence, a cap, or an unusable hypothesis prevented certification
//   3  invalid input

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "semiscale/counterexample.hpp"
#include "semiscale/matrix_set_io.hpp"
#include "semiscale/operators.hpp"
#include "semiscale/scaling.hpp"
#include "semiscale/semigroup.hpp"
#include "semiscale/tropical.hpp"

using nlohmann::json;
using namespace semiscale;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertionFailed = 1;
constexpr int kExitNotCertified = 2;
constexpr int kExitInvalidInput = 3;

struct CommonOptions {
  std::string input_path;
  std::string output_path;
  bool reproducible = false;
  bool strict = false;
  std::optional<double> tol;
  std::optional<std::size_t> cap;
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const char* status_of(int exit_code) {
  switch (exit_code) {
    case kExitOk: return "ok";
    case kExitAssertionFailed: return "assertion_failed";
    case kExitNotCertified: return "not_certified";
    default: return "invalid_input";
  }
}

int emit(json& report, const CommonOptions& opts, int exit_code) {
  report["schema"] = 1;
  report["exit_code"] = exit_code;
  report["status"] = status_of(exit_code);
  if (!opts.reproducible) report["timestamp"] = iso_timestamp();
  const std::string text = report.dump(2) + "\n";
  if (opts.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.output_path);
    out << text;
  }
  return exit_code;
}

double resolve_tol(const CommonOptions& opts, const MatrixSetFile& file, double fallback) {
  if (opts.tol) return *opts.tol;  // flags win over file config
  if (file.config.tol) return *file.config.tol;
  return fallback;
}

std::size_t resolve_cap(const CommonOptions& opts, const MatrixSetFile& file) {
  if (opts.cap) return *opts.cap;
  if (file.config.cap) return *file.config.cap;
  return kDefaultClosureCap;
}

double resolve_dedup_tol(const MatrixSetFile& file) {
  return file.config.dedup_tol ? *file.config.dedup_tol : kDefaultDedupTol;
}

json scaling_vector_json(const ScalingVector& d) {
  json out;
  out["d"] = to_json(d.d);
  Eigen::VectorXd normalized = d.d / d.d[0];
  out["d_normalized"] = to_json(normalized);  // d is unique up to a scalar
  if (d.bound) out["range_bound"] = *d.bound;
  return out;
}

json certificate_json(const DominationCertificate& cert) {
  json out = scaling_vector_json(cert.d);
  out["max_violation"] = cert.max_violation;
  out["basepoint"] = cert.basepoint + 1;
  out["hypothesis_pair"] = {cert.u + 1, cert.v + 1};
  out["sup_at_pair"] = cert.sup_uv;
  out["element_count"] = cert.element_count;
  out["verified_against"] = cert.verified_against == VerificationScope::complete_closure
                                ? "complete-closure"
                                : "enumerated-prefix";
  return out;
}

// ---- tropical --------------------------------------------------------------

int cmd_tropical(const CommonOptions& opts, const std::string& matrix_name,
                 std::optional<long> basepoint, std::optional<double> bump_k) {
  json report;
  report["command"] = "tropical";
  try {
    const std::string bytes = read_file_bytes(opts.input_path);
    report["input_digest"] = content_digest(bytes);
    const MatrixSetFile file = parse_matrix_set(parse_json(bytes));
    const auto& named = matrix_name.empty() ? file.matrices.front() : file.find(matrix_name);
    const ExtendedWeightMatrix mu = file.as_weights(named);
    report["parameters"] = {{"matrix", named.name}};

    const WalkClosure w = walk_supremum(mu);
    json results;
    results["walk_supremum"] = to_json(w.entries);
    results["divergent_pairs"] = pairs_to_json(w.divergent_pairs);

    int exit_code = kExitOk;
    if (basepoint || !w.divergent()) {
      try {
        const AdditivePotential p = basepoint
                                        ? potential_from_basepoint(
                                              w, static_cast<Index>(*basepoint - 1))
                                        : auto_potential(w);
        json pj;
        pj["rho"] = p.rho;
        pj["basepoint"] = p.basepoint + 1;
        pj["orientation"] = p.orientation == PotentialOrientation::into_basepoint
                                ? "into-basepoint"
                                : "out-of-basepoint";
        results["potential"] = std::move(pj);
      } catch (const Error& e) {
        // Auto-selection is best effort; an explicit basepoint must certify.
        results["potential_error"] = e.what();
        if (basepoint) exit_code = kExitNotCertified;
      }
    } else {
      exit_code = basepoint ? kExitNotCertified : kExitOk;
    }

    if (bump_k) {
      try {
        const ExtendedWeightMatrix lambda = bump(mu, *bump_k);
        json bj;
        bj["K"] = *bump_k;
        bj["lambda"] = to_json(lambda);
        bj["lambda_closure"] = to_json(walk_supremum(lambda).entries);
        results["bump"] = std::move(bj);
      } catch (const PreconditionViolated& e) {
        results["bump_error"] = e.what();
        exit_code = kExitNotCertified;
      }
    }
    report["results"] = std::move(results);
    return emit(report, opts, exit_code);
  } catch (const ParseError& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const DimensionMismatch& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const std::invalid_argument& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  }
}

// ---- scale -----------------------------------------------------------------

int cmd_scale(const CommonOptions& opts, std::optional<double> bound,
              long u_flag, long v_flag) {
  json report;
  report["command"] = "scale";
  try {
    const std::string bytes = read_file_bytes(opts.input_path);
    report["input_digest"] = content_digest(bytes);
    const MatrixSetFile file = parse_matrix_set(parse_json(bytes));
    const double tol = resolve_tol(opts, file, 1e-9);
    const std::size_t cap = resolve_cap(opts, file);

    std::vector<NonnegMatrix> generators;
    for (const auto& m : file.matrices) generators.push_back(file.as_nonneg(m));
    const CompositionRule rule = file.atom_weights
                                     ? CompositionRule::atom_weighted(*file.atom_weights)
                                     : CompositionRule::standard();
    report["parameters"] = {{"u", u_flag},
                            {"v", v_flag},
                            {"cap", cap},
                            {"tol", tol},
                            {"strict", opts.strict},
                            {"composition", file.atom_weights ? "atom-weighted" : "standard"}};

    const SemigroupClosure closure =
        generate_closure(generators, rule, cap, resolve_dedup_tol(file));
    json results;
    results["closure_size"] = closure.elements.size();
    results["closure_status"] =
        closure.status == ClosureStatus::complete ? "complete" : "capped";
    const bool indecomposable = is_indecomposable(generators);
    results["indecomposable"] = indecomposable;
    const EntrywiseBoundReport bounds = entrywise_bound_report(closure);
    results["sup_function"] = to_json(bounds.sup.s);
    results["global_max"] = bounds.global_max;
    results["sup_is_lower_bound_only"] = bounds.lower_bound_only;

    if (opts.strict && closure.status == ClosureStatus::capped) {
      results["error"] = "closure capped before completing and --strict was given";
      report["results"] = std::move(results);
      return emit(report, opts, kExitNotCertified);
    }

    int exit_code = kExitOk;
    try {
      DominationCertificate cert =
          bound ? bounded_semigroup_scaling(closure, *bound)
                : semigroup_scaling(closure, static_cast<Index>(u_flag - 1),
                                    static_cast<Index>(v_flag - 1));
      results["certificate"] = certificate_json(cert);
      if (cert.max_violation > 1.0 + tol) exit_code = kExitAssertionFailed;
      if (bound) {
        const double m = *bound;
        for (Eigen::Index i = 0; i < cert.d.d.size(); ++i)
          if (cert.d.d[i] < 1.0 / m - 1e-12 || cert.d.d[i] > m + 1e-12)
            exit_code = kExitAssertionFailed;
      }
    } catch (const DivergentError& e) {
      results["certificate_error"] = e.what();
      exit_code = kExitNotCertified;
    } catch (const NotIndecomposable& e) {
      results["certificate_error"] = e.what();
      exit_code = kExitNotCertified;
    } catch (const BasepointUnusable& e) {
      results["certificate_error"] = e.what();
      exit_code = kExitNotCertified;
    } catch (const PreconditionViolated& e) {
      results["certificate_error"] = e.what();
      exit_code = kExitNotCertified;
    }
    report["results"] = std::move(results);
    return emit(report, opts, exit_code);
  } catch (const ParseError& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const std::invalid_argument& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const Error& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  }
}

// ---- binary ----------------------------------------------------------------

int cmd_binary(const CommonOptions& opts) {
  json report;
  report["command"] = "binary";
  try {
    const std::string bytes = read_file_bytes(opts.input_path);
    report["input_digest"] = content_digest(bytes);
    const MatrixSetFile file = parse_matrix_set(parse_json(bytes));
    const double tol = resolve_tol(opts, file, 1e-9);
    const std::size_t cap = resolve_cap(opts, file);
    report["parameters"] = {{"cap", cap}, {"tol", tol}};

    std::vector<NonnegMatrix> generators;
    for (const auto& m : file.matrices) generators.push_back(file.as_nonneg(m));

    json results;
    try {
      const BinaryRescaleResult result = binary_diagonal_rescale(
          generators, cap, resolve_dedup_tol(file), tol);
      results.update(scaling_vector_json(result.d));
      results["closure_size"] = result.rescaled.elements.size();
      json rescaled = json::array();
      for (std::size_t g = 0; g < generators.size(); ++g)
        rescaled.push_back(
            to_json(result.rescaled.elements[result.rescaled.generators[g]]));
      results["rescaled_generators"] = std::move(rescaled);
      report["results"] = std::move(results);
      return emit(report, opts, kExitOk);
    } catch (const NotBinaryDiagonal& e) {
      results["error"] = e.what();
      results["witness"] = {{"element", e.element + 1},
                            {"entry", {e.row + 1, e.col + 1}},
                            {"value", e.value}};
      report["results"] = std::move(results);
      return emit(report, opts, kExitAssertionFailed);
    } catch (const NotIndecomposable& e) {
      results["error"] = e.what();
      report["results"] = std::move(results);
      return emit(report, opts, kExitAssertionFailed);
    } catch (const PreconditionViolated& e) {
      results["error"] = e.what();
      report["results"] = std::move(results);
      return emit(report, opts, kExitNotCertified);
    }
  } catch (const ParseError& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const std::invalid_argument& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  }
}

// ---- operator --------------------------------------------------------------

int cmd_operator(const CommonOptions& opts) {
  json report;
  report["command"] = "operator";
  try {
    const std::string bytes = read_file_bytes(opts.input_path);
    report["input_digest"] = content_digest(bytes);
    const MatrixSetFile file = parse_matrix_set(parse_json(bytes));
    const double tol = resolve_tol(opts, file, 1e-10);
    report["parameters"] = {{"tol", tol}};

    std::vector<Eigen::MatrixXd> elements;
    for (const auto& m : file.matrices) elements.push_back(file.as_real(m));

    const OperatorReport opr = operator_report(elements, tol);
    json results;
    results["self_adjoint_closed"] = opr.opset.self_adjoint_closed;

    std::string first_failure;
    auto fail = [&](const std::string& what) {
      if (first_failure.empty()) first_failure = what;
    };

    json per_element = json::array();
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const auto& iso = opr.isometry[i];
      json ej;
      ej["name"] = file.matrices[i].name;
      ej["ss_star_projection_residual"] = iso.ss_star_residual;
      ej["is_partial_isometry"] = iso.is_partial_isometry;
      ej["operator_norm"] = iso.operator_norm;
      if (!iso.is_partial_isometry)
        fail("element '" + file.matrices[i].name + "' fails the SS^T projection law");
      if (iso.nonzero && iso.norm_distance > tol)
        fail("element '" + file.matrices[i].name + "' has operator norm away from 1");
      if (opr.idempotent_symmetry[i].has_value()) {
        ej["idempotent_symmetry_residual"] = *opr.idempotent_symmetry[i];
        if (*opr.idempotent_symmetry[i] > 1e-8)
          fail("idempotent '" + file.matrices[i].name + "' is not symmetric");
      }
      // Entry law for nonnegative partial isometries, skipped when the
      // preconditions do not apply to this element.
      if (elements[i].size() > 0 && elements[i].minCoeff() >= 0.0) {
        try {
          const double res = check_sqrt_xi_eta(elements[i], std::max(tol, 1e-9));
          ej["sqrt_xi_eta_residual"] = res;
          if (res > 1e-9)
            fail("element '" + file.matrices[i].name + "' breaks the sqrt(xi eta) law");
        } catch (const PreconditionViolated&) {
        }
      }
      per_element.push_back(std::move(ej));
    }
    results["elements"] = std::move(per_element);

    results["projection_commutativity_residual"] = opr.projection_commutativity_residual;
    if (opr.projection_commutativity_residual > tol)
      fail("projections do not commute");

    if (opr.rank_bound) {
      results["rank_bound_ok"] = opr.rank_bound->ok;
      results["max_trace_positive"] = opr.rank_bound->max_trace_positive;
      results["ranks"] = opr.rank_bound->ranks;
      if (!opr.rank_bound->ok) fail("an element exceeds the trace rank bound");
    } else {
      fail("no positive semidefinite element, so the rank bound is unverifiable");
    }

    results["trace_set"] = opr.trace_range.traces_all;
    results["trace_set_positive"] = opr.trace_range.traces_positive;
    json fams = json::array();
    for (const auto& fam : opr.diagonal_family_sizes) fams.push_back(fam);
    results["diagonal_families"] = std::move(fams);

    if (!first_failure.empty()) results["first_failure"] = first_failure;
    report["results"] = std::move(results);
    return emit(report, opts, first_failure.empty() ? kExitOk : kExitAssertionFailed);
  } catch (const ParseError& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const std::invalid_argument& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  } catch (const DimensionMismatch& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  }
}

// ---- counterexample --------------------------------------------------------

int cmd_counterexample(const CommonOptions& opts, std::size_t n_trunc, int m_max) {
  json report;
  report["command"] = "counterexample";
  report["input_digest"] =
      content_digest("N=" + std::to_string(n_trunc) + ";m_max=" + std::to_string(m_max));
  report["parameters"] = {{"N", n_trunc}, {"m_max", m_max}};
  try {
    const auto inst = build_instance<double>(n_trunc, m_max);
    const double tol = opts.tol ? *opts.tol : example_tolerance(n_trunc);
    double worst = 0.0;

    json results;
    results["tolerance"] = tol;

    const auto norms = verify_norms(inst);
    results["norm_residuals"] = {{"g", norms.g_residual}, {"h", norms.h_residual}};
    worst = std::max(worst, norms.max_residual);

    json inner = json::array();
    for (int m = 1; m <= m_max; ++m)
      for (int n = m + 1; n <= m_max; ++n) {
        const auto r = verify_inner_products(inst, m, n);
        inner.push_back({{"m", m}, {"n", n}, {"max_residual", r.max_residual}});
        worst = std::max(worst, r.max_residual);
      }
    results["inner_product_residuals"] = std::move(inner);

    const auto semi = verify_semigroup(inst);
    json semij = json::object();
    for (const auto& [label, value] : semi.residuals) semij[label] = value;
    results["product_residuals"] = std::move(semij);
    worst = std::max(worst, semi.max_residual);

    const auto fam = diagonal_family_F1(inst);
    results["first_diagonal_family"] = fam.values;
    results["first_diagonal_residual"] = fam.max_residual;
    results["first_diagonal_distinct"] = fam.pairwise_distinct;
    results["first_diagonal_decreasing"] = fam.strictly_decreasing;
    worst = std::max(worst, fam.max_residual);

    results["max_residual"] = worst;
    report["results"] = std::move(results);
    const bool ok = worst <= tol && fam.pairwise_distinct && fam.strictly_decreasing;
    return emit(report, opts, ok ? kExitOk : kExitAssertionFailed);
  } catch (const TruncationTooShort& e) {
    report["error"] = e.what();
    return emit(report, opts, kExitInvalidInput);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Walk-weight closures, semigroup scaling certificates, and "
               "positive-operator structure checks"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string matrix_name;
  std::optional<long> basepoint;
  std::optional<double> bump_k;
  std::optional<double> bound_m;
  long u_flag = 1, v_flag = 1;
  std::size_t n_trunc = 256;
  int m_max = 5;

  auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input)
      cmd->add_option("file", opts.input_path, "matrix-set JSON input")->required();
    cmd->add_option("--tol", opts.tol, "tolerance override (wins over file config)");
    cmd->add_option("--cap", opts.cap, "closure element cap");
    cmd->add_flag("--strict", opts.strict, "fail when exactness cannot be certified");
    cmd->add_flag("--reproducible", opts.reproducible, "omit the timestamp field");
    cmd->add_option("--output", opts.output_path, "write the report to a file");
  };

  CLI::App* tropical = app.add_subcommand("tropical", "walk suprema and potentials");
  add_common(tropical, true);
  tropical->add_option("--matrix", matrix_name, "which matrix holds the weights");
  tropical->add_option("--basepoint", basepoint, "1-based basepoint for the potential");
  tropical->add_option("--bump", bump_k, "raise low edges to -K and re-close");

  CLI::App* scale = app.add_subcommand("scale", "closure and domination certificates");
  add_common(scale, true);
  scale->add_option("--M", bound_m, "entry bound for the bounded certificate");
  scale->add_option("--u", u_flag, "1-based hypothesis row");
  scale->add_option("--v", v_flag, "1-based hypothesis column");

  CLI::App* binary = app.add_subcommand("binary", "binary-diagonal rescaling");
  add_common(binary, true);

  CLI::App* op = app.add_subcommand("operator", "self-adjoint structure checks");
  add_common(op, true);

  CLI::App* ce = app.add_subcommand("counterexample",
                                    "projection family on l2 at finite truncation");
  add_common(ce, false);
  ce->add_option("--N", n_trunc, "truncation length");
  ce->add_option("--m-max", m_max, "largest segment exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidInput;
  }

  if (tropical->parsed()) return cmd_tropical(opts, matrix_name, basepoint, bump_k);
  if (scale->parsed()) return cmd_scale(opts, bound_m, u_flag, v_flag);
  if (binary->parsed()) return cmd_binary(opts);
  if (op->parsed()) return cmd_operator(opts);
  if (ce->parsed()) return cmd_counterexample(opts, n_trunc, m_max);
  return kExitInvalidInput;
}
