#include "chball/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chball/errors.hpp"

namespace chball {

namespace {

using nlohmann::json;

Complex parse_entry(const json& entry) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
    throw ParseError("matrix entries must be [re, im] number pairs, got " + entry.dump());
  }
  return {entry[0].get<double>(), entry[1].get<double>()};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

CMatrix parse_matrix_document(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("matrix document must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ParseError("matrix document needs an integer field \"n\"");
  }
  if (!doc.contains("mat") || !doc["mat"].is_array()) {
    throw ParseError("matrix document needs an array field \"mat\"");
  }
  const auto n = doc["n"].get<long long>();
  if (n < 1 || n > 64) throw ParseError("matrix document has unsupported n = " + std::to_string(n));
  const auto size = static_cast<Eigen::Index>(n + 1);
  const json& entries = doc["mat"];
  if (entries.size() != static_cast<std::size_t>(size * size)) {
    throw ParseError("\"mat\" has " + std::to_string(entries.size()) + " entries, expected " +
                     std::to_string(size * size));
  }
  CMatrix m(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) m(r, c) = parse_entry(entries[r * size + c]);
  }
  return m;
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_document(buffer.str());
}

std::string format_matrix_document(const CMatrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() < 2) {
    throw InvalidInput("matrix documents hold square matrices of size >= 2");
  }
  json entries = json::array();
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) entries.push_back({mat(r, c).real(), mat(r, c).imag()});
  }
  json doc;
  doc["n"] = mat.rows() - 1;
  doc["mat"] = std::move(entries);
  return doc.dump();
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& mat) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file " + path.string());
  out << format_matrix_document(mat) << '\n';
}

CVector parse_complex_list(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_array() || doc.empty()) throw ParseError("expected a non-empty list of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_entry(doc[i]);
  return v;
}

}  // namespace chball
