#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tropeig/matrix.hpp"

namespace tropeig {

enum class Format { Json, Csv };

/// "json" or "csv"; anything else is a ParseError.
Format parse_format(std::string_view name);

struct MatrixDocument {
  std::string name;
  MaxMatrix matrix;
};

/// Entry token: optional sign, then digits with an optional fractional part,
/// or p/q; "-inf" is ε. Conversion is exact. Row/column locate errors (1-based).
MaxScalar parse_token(std::string_view token, long row = 0, long col = 0);

/// JSON `{"name": ..., "rows": [[token, ...], ...]}` or headerless CSV.
MatrixDocument parse_document(std::string_view text, Format format);

inline MaxMatrix parse_matrix(std::string_view text, Format format) {
  return parse_document(text, format).matrix;
}

/// Inverse of parse_document; tokens are written as "p/q", integers as "p", ε as "-inf".
std::string serialize_matrix(const MaxMatrix& a, Format format, const std::string& name = "");

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tropeig
