#include "semiscale/matrix_set_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace semiscale {

namespace {

double entry_from_json(const nlohmann::json& cell, const std::string& where) {
  if (cell.is_string()) {
    if (cell.get<std::string>() == "-inf")
      return -std::numeric_limits<double>::infinity();
    throw ParseError(where + ": string entries must be \"-inf\"");
  }
  if (!cell.is_number()) throw ParseError(where + ": entry must be a number or \"-inf\"");
  const double v = cell.get<double>();
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
    throw ParseError(where + ": entry must be finite or -inf");
  return v;
}

}  // namespace

const MatrixSetFile::NamedMatrix& MatrixSetFile::find(const std::string& name) const {
  for (const auto& m : matrices)
    if (m.name == name) return m;
  throw ParseError("no matrix named '" + name + "' in the input file");
}

ExtendedWeightMatrix MatrixSetFile::as_weights(const NamedMatrix& m) const {
  return ExtendedWeightMatrix::from_rows(m.rows);
}

NonnegMatrix MatrixSetFile::as_nonneg(const NamedMatrix& m) const {
  Eigen::MatrixXd e = as_real(m);
  if (e.minCoeff() < 0.0)
    throw ParseError("matrix '" + m.name + "' must be entrywise nonnegative");
  return NonnegMatrix(std::move(e));
}

Eigen::MatrixXd MatrixSetFile::as_real(const NamedMatrix& m) const {
  const Index n = m.rows.size();
  Eigen::MatrixXd e(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = m.rows[i][j];
      if (!std::isfinite(v))
        throw ParseError("matrix '" + m.name + "' must have finite entries");
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  return e;
}

MatrixSetFile parse_matrix_set(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("input must be a JSON object");
  MatrixSetFile file;
  if (!j.contains("dim") || !j["dim"].is_number_integer() ||
      j["dim"].get<long long>() <= 0)
    throw ParseError("'dim' must be a positive integer");
  file.dim = j["dim"].get<Index>();

  if (!j.contains("matrices") || !j["matrices"].is_array() || j["matrices"].empty())
    throw ParseError("'matrices' must be a nonempty array");
  std::unordered_set<std::string> names;
  for (const auto& jm : j["matrices"]) {
    MatrixSetFile::NamedMatrix m;
    if (!jm.is_object() || !jm.contains("name") || !jm["name"].is_string())
      throw ParseError("each matrix needs a string 'name'");
    m.name = jm["name"].get<std::string>();
    if (!names.insert(m.name).second)
      throw ParseError("duplicate matrix name '" + m.name + "'");
    if (!jm.contains("rows") || !jm["rows"].is_array() || jm["rows"].size() != file.dim)
      throw ParseError("matrix '" + m.name + "' needs 'rows' with dim rows");
    for (std::size_t i = 0; i < file.dim; ++i) {
      const auto& jrow = jm["rows"][i];
      if (!jrow.is_array() || jrow.size() != file.dim)
        throw ParseError("matrix '" + m.name + "' row " + std::to_string(i + 1) +
                         " must have dim entries");
      std::vector<double> row;
      row.reserve(file.dim);
      for (std::size_t c = 0; c < file.dim; ++c)
        row.push_back(entry_from_json(jrow[c], "matrix '" + m.name + "' (" +
                                                   std::to_string(i + 1) + "," +
                                                   std::to_string(c + 1) + ")"));
      m.rows.push_back(std::move(row));
    }
    file.matrices.push_back(std::move(m));
  }

  if (j.contains("atom_weights")) {
    const auto& jw = j["atom_weights"];
    if (!jw.is_array() || jw.size() != file.dim)
      throw ParseError("'atom_weights' must have dim entries");
    Eigen::VectorXd w(static_cast<Eigen::Index>(file.dim));
    for (std::size_t i = 0; i < file.dim; ++i) {
      if (!jw[i].is_number()) throw ParseError("'atom_weights' entries must be numbers");
      w[static_cast<Eigen::Index>(i)] = jw[i].get<double>();
      if (!(w[static_cast<Eigen::Index>(i)] >= 1.0))
        throw ParseError("'atom_weights' entries must be at least 1");
    }
    file.atom_weights = std::move(w);
  }

  if (j.contains("config")) {
    const auto& jc = j["config"];
    if (!jc.is_object()) throw ParseError("'config' must be an object");
    if (jc.contains("tol")) file.config.tol = jc["tol"].get<double>();
    if (jc.contains("dedup_tol")) file.config.dedup_tol = jc["dedup_tol"].get<double>();
    if (jc.contains("cap")) file.config.cap = jc["cap"].get<std::size_t>();
  }
  return file;
}

MatrixSetFile load_matrix_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_matrix_set(j);
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << h;
  return os.str();
}

nlohmann::json to_json(const ExtendedWeightMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.size(); ++j) {
      const ExtReal e = m(i, j);
      if (e.is_bottom())
        row.push_back("-inf");
      else
        row.push_back(e.value());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const NonnegMatrix& m) { return to_json(m.matrix()); }

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json pairs_to_json(const std::vector<IndexPair>& pairs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [x, y] : pairs) arr.push_back({x + 1, y + 1});
  return arr;
}

}  // namespace semiscale
