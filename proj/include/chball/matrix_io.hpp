#pragma once

// Matrix documents: {"n": <int>, "mat": [[re, im], ...]} with (n+1)^2 entries
// in row-major order.

#include <filesystem>
#include <string>

#include "chball/linalg.hpp"

namespace chball {

// Throws ParseError on malformed JSON, missing fields, or a length mismatch.
CMatrix parse_matrix_document(const std::string& text);
CMatrix read_matrix_file(const std::filesystem::path& path);

// Round-trips through parse_matrix_document up to double formatting (17
// significant digits).
std::string format_matrix_document(const CMatrix& mat);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& mat);

// A point or vector as a JSON list of [re, im] pairs.
CVector parse_complex_list(const std::string& text);

}  // namespace chball
