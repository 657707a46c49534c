#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "semiscale/errors.hpp"
#include "semiscale/nonneg_matrix.hpp"
#include "semiscale/tropical.hpp"

namespace semiscale {

/// Matrix-set input file: a common dimension, a named list of square
/// row-major matrices, optional atom weights (each >= 1), and optional
/// config overrides. -inf is encoded as the JSON string "-inf" so the file
/// stays strict JSON.
struct MatrixSetFile {
  struct NamedMatrix {
    std::string name;
    std::vector<std::vector<double>> rows;  // -inf allowed, NaN/+inf rejected
  };
  Index dim = 0;
  std::vector<NamedMatrix> matrices;
  std::optional<Eigen::VectorXd> atom_weights;

  struct Config {
    std::optional<double> tol;
    std::optional<double> dedup_tol;
    std::optional<std::size_t> cap;
  } config;

  const NamedMatrix& find(const std::string& name) const;

  /// Interprets a named matrix as extended weights (-inf = absent edge).
  ExtendedWeightMatrix as_weights(const NamedMatrix& m) const;
  /// Interprets a named matrix as a nonnegative matrix (throws ParseError on
  /// negative or non-finite entries).
  NonnegMatrix as_nonneg(const NamedMatrix& m) const;
  /// Interprets a named matrix as a general real matrix (finite entries).
  Eigen::MatrixXd as_real(const NamedMatrix& m) const;
};

/// Parses the schema above; throws ParseError with a location hint.
MatrixSetFile parse_matrix_set(const nlohmann::json& j);
MatrixSetFile load_matrix_set(const std::string& path);

/// FNV-1a 64-bit digest of the raw input bytes, hex encoded.
std::string content_digest(const std::string& bytes);

/// JSON encoders used by reports; -inf serializes as the string "-inf".
nlohmann::json to_json(const ExtendedWeightMatrix& m);
nlohmann::json to_json(const NonnegMatrix& m);
nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json pairs_to_json(const std::vector<IndexPair>& pairs);  // 1-based

}  // namespace semiscale
