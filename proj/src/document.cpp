#include "mubforge/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mubforge {

using nlohmann::json;

namespace {

std::pair<Eigen::Index, Eigen::Index> block_shape(const std::string& kind, int dim) {
  if (kind == "solutionset") return {dim, 1};
  return {dim, dim};
}

json encode_block(const CMatrix& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("serialize: non-finite entry");
      arr.push_back(json::array({z.real(), z.imag()}));
    }
  return arr;
}

CMatrix decode_block(const json& arr, Eigen::Index rows, Eigen::Index cols) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols) {
    throw ParseError("payload block length differs from dim");
  }
  CMatrix m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = arr[i++];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("payload entry must be a [re, im] pair");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

}  // namespace

void MatrixDocument::validate() const {
  if (format_version != kFormatVersion) throw ParseError("unsupported format_version '" + format_version + "'");
  if (dim < 1) throw ParseError("dim must be positive");
  if (kind != "matrix" && kind != "mubset" && kind != "solutionset" && kind != "report") {
    throw ParseError("unknown kind '" + kind + "'");
  }
  if (kind == "matrix" && payload.size() != 1) throw ParseError("a matrix document holds exactly one block");
  if (kind == "report" && !payload.empty()) throw ParseError("a report document holds no payload");
  const auto [rows, cols] = block_shape(kind, dim);
  for (const auto& b : payload)
    if (b.rows() != rows || b.cols() != cols) throw ParseError("payload block shape differs from dim");
  if (phases) {
    if (phases->size() != payload.size()) throw ParseError("phases block count differs from payload");
    for (const auto& p : *phases)
      if (static_cast<Eigen::Index>(p.size()) != rows * cols) throw ParseError("phases length differs from payload");
  }
}

bool MatrixDocument::operator==(const MatrixDocument& o) const {
  if (format_version != o.format_version || dim != o.dim || kind != o.kind || metadata != o.metadata ||
      phases != o.phases || payload.size() != o.payload.size()) {
    return false;
  }
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (payload[i].rows() != o.payload[i].rows() || payload[i].cols() != o.payload[i].cols()) return false;
    if (!(payload[i].array() == o.payload[i].array()).all()) return false;
  }
  return true;
}

std::string serialize(const MatrixDocument& doc, int indent) {
  doc.validate();
  json j;
  j["format_version"] = doc.format_version;
  j["dim"] = doc.dim;
  j["kind"] = doc.kind;
  json blocks = json::array();
  for (const auto& b : doc.payload) blocks.push_back(encode_block(b));
  j["payload"] = blocks;
  j["metadata"] = doc.metadata;
  if (doc.phases) j["phases"] = *doc.phases;
  return j.dump(indent);
}

MatrixDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("document must be a JSON object");
  MatrixDocument doc;
  try {
    doc.format_version = j.at("format_version").get<std::string>();
    if (doc.format_version != kFormatVersion) throw ParseError("unsupported format_version '" + doc.format_version + "'");
    doc.dim = j.at("dim").get<int>();
    doc.kind = j.at("kind").get<std::string>();
    if (doc.dim < 1) throw ParseError("dim must be positive");
    const auto [rows, cols] = block_shape(doc.kind, doc.dim);
    const json& blocks = j.at("payload");
    if (!blocks.is_array()) throw ParseError("payload must be an array");
    for (const auto& b : blocks) doc.payload.push_back(decode_block(b, rows, cols));
    if (j.contains("metadata")) doc.metadata = j.at("metadata");
    if (j.contains("phases")) doc.phases = j.at("phases").get<std::vector<std::vector<std::string>>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid document: ") + e.what());
  }
  doc.validate();
  return doc;
}

void write_document(const MatrixDocument& doc, const std::string& path) {
  const std::string text = serialize(doc);
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  out << text << '\n';
}

MatrixDocument read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

MatrixDocument to_document(const HadamardMatrix& h, const std::string& label, const Params& params) {
  MatrixDocument doc;
  doc.dim = h.dim();
  doc.kind = "matrix";
  doc.payload.push_back(h.matrix());
  doc.metadata["method"] = label;
  doc.metadata["params"] = params;
  if (h.phase_tags()) {
    std::vector<std::string> turns;
    for (const auto& t : *h.phase_tags()) turns.push_back(std::to_string(t.exponent) + "/" + std::to_string(t.root_order));
    doc.phases = std::vector<std::vector<std::string>>{turns};
  }
  return doc;
}

MatrixDocument to_document(const MUBSet& set) {
  MatrixDocument doc;
  doc.dim = set.dim;
  doc.kind = "mubset";
  for (const auto& b : set.bases) doc.payload.push_back(b.matrix());
  doc.metadata["method"] = to_string(set.method);
  doc.metadata["params"] = set.params;
  if (set.weights) doc.metadata["weights"] = *set.weights;
  return doc;
}

MatrixDocument to_document(const VectorSolutionSet& sols, std::uint64_t seed) {
  MatrixDocument doc;
  doc.dim = sols.dim;
  doc.kind = "solutionset";
  for (const auto& v : sols.vectors) doc.payload.push_back(v);
  doc.metadata["method"] = "search";
  doc.metadata["label"] = sols.label;
  doc.metadata["seed"] = seed;
  doc.metadata["restarts"] = sols.restarts;
  doc.metadata["converged"] = sols.converged;
  doc.metadata["count"] = sols.vectors.size();
  doc.metadata["coverage_warning"] = sols.coverage_warning;
  doc.metadata["continuum_detected"] = sols.continuum_detected;
  doc.metadata["singular"] = sols.singular;
  return doc;
}

MatrixDocument report_document(int dim, const json& report) {
  MatrixDocument doc;
  doc.dim = dim;
  doc.kind = "report";
  doc.metadata = report;
  return doc;
}

MUBSet mubset_from_document(const MatrixDocument& doc) {
  doc.validate();
  if (doc.kind != "mubset" && doc.kind != "matrix") throw DomainError("document does not hold bases");
  MUBSet set;
  set.dim = doc.dim;
  if (doc.kind == "matrix") set.bases.push_back(OrthonormalBasis::standard(doc.dim));
  for (const auto& b : doc.payload) set.bases.emplace_back(b, 1e-8);
  if (doc.metadata.contains("method") && doc.kind == "mubset") {
    try {
      set.method = method_from_string(doc.metadata["method"].get<std::string>());
    } catch (const DomainError&) {
    }
  }
  if (doc.metadata.contains("params")) set.params = doc.metadata["params"].get<Params>();
  if (doc.metadata.contains("weights")) set.weights = doc.metadata["weights"].get<std::vector<double>>();
  return set;
}

CMatrix matrix_from_document(const MatrixDocument& doc) {
  doc.validate();
  if (doc.kind != "matrix") throw DomainError("document is not a matrix");
  return doc.payload.front();
}

std::vector<CVector> vectors_from_document(const MatrixDocument& doc) {
  doc.validate();
  std::vector<CVector> out;
  if (doc.kind == "solutionset") {
    for (const auto& b : doc.payload) out.push_back(b.col(0));
  } else if (doc.kind == "mubset") {
    for (const auto& b : doc.payload)
      for (Eigen::Index c = 0; c < b.cols(); ++c) out.push_back(b.col(c));
  } else {
    throw DomainError("document holds no vectors");
  }
  return out;
}

}  // namespace mubforge
