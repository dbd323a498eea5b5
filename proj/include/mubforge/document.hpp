#pragma once

#include "mubforge/constructions.hpp"
#include "mubforge/numeric_core.hpp"
#include "mubforge/search.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mubforge {

inline constexpr const char* kFormatVersion = "mubforge/1";

struct ParseError : DomainError {
  using DomainError::DomainError;
};

/// Serialized artifact. A matrix has one d x d block, a mubset one block per basis,
/// a solutionset one length-d block per vector, a report none.
struct MatrixDocument {
  std::string format_version = kFormatVersion;
  int dim = 0;
  std::string kind = "matrix";
  std::vector<CMatrix> payload;
  nlohmann::json metadata = nlohmann::json::object();
  /// Row-major "k/r" turns per entry of each block, present for Butson-tagged matrices.
  std::optional<std::vector<std::vector<std::string>>> phases;

  /// Throws ParseError when payload shapes disagree with dim and kind.
  void validate() const;
  bool operator==(const MatrixDocument& other) const;
};

std::string serialize(const MatrixDocument& doc, int indent = 1);
MatrixDocument parse_document(const std::string& text);

void write_document(const MatrixDocument& doc, const std::string& path);
MatrixDocument read_document(const std::string& path);

MatrixDocument to_document(const HadamardMatrix& h, const std::string& label, const Params& params = {});
MatrixDocument to_document(const MUBSet& set);
MatrixDocument to_document(const VectorSolutionSet& sols, std::uint64_t seed);
MatrixDocument report_document(int dim, const nlohmann::json& report);

/// Rebuilds the bases of a mubset document (weights from metadata when present).
MUBSet mubset_from_document(const MatrixDocument& doc);
CMatrix matrix_from_document(const MatrixDocument& doc);
std::vector<CVector> vectors_from_document(const MatrixDocument& doc);

}  // namespace mubforge
