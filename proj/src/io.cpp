#include "tropeig/io.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "tropeig/errors.hpp"

namespace tropeig {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

MaxMatrix assemble(const std::vector<std::vector<MaxScalar>>& rows) {
  if (rows.empty()) throw ParseError("matrix has no rows");
  const auto cols = rows.front().size();
  if (cols == 0) throw ParseError("matrix row is empty", 1, 1);
  MaxMatrix a(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw ParseError("ragged row: expected " + std::to_string(cols) + " entries, found " +
                           std::to_string(rows[i].size()),
                       static_cast<long>(i + 1), static_cast<long>(std::min(rows[i].size(), cols) + 1));
    for (std::size_t j = 0; j < cols; ++j) a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return a;
}

MatrixDocument parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw ParseError("JSON document must be an object with a \"rows\" array");
  MatrixDocument out;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("\"name\" must be a string");
    out.name = doc["name"].get<std::string>();
  }
  std::vector<std::vector<MaxScalar>> rows;
  long r = 0;
  for (const auto& row : doc["rows"]) {
    ++r;
    if (!row.is_array()) throw ParseError("row is not an array", r, 1);
    std::vector<MaxScalar> vals;
    long c = 0;
    for (const auto& cell : row) {
      ++c;
      if (cell.is_string()) {
        vals.push_back(parse_token(cell.get<std::string>(), r, c));
      } else if (cell.is_number_integer()) {
        vals.push_back(parse_token(cell.dump(), r, c));
      } else {
        throw ParseError("entry must be a string token or an integer", r, c);
      }
    }
    rows.push_back(std::move(vals));
  }
  out.matrix = assemble(rows);
  return out;
}

MatrixDocument parse_csv(std::string_view text) {
  std::vector<std::vector<MaxScalar>> rows;
  long r = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++r;
    if (trim(line).empty()) continue;
    std::vector<MaxScalar> vals;
    long c = 0;
    std::size_t p = 0;
    while (p <= line.size()) {
      const std::size_t comma = std::min(line.find(',', p), line.size());
      vals.push_back(parse_token(trim(line.substr(p, comma - p)), r, ++c));
      p = comma + 1;
    }
    rows.push_back(std::move(vals));
  }
  return {"", assemble(rows)};
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ParseError("unknown format \"" + std::string(name) + "\" (expected json or csv)");
}

MaxScalar parse_token(std::string_view token, long row, long col) {
  const std::string_view t = trim(token);
  auto fail = [&](const std::string& why) -> MaxScalar {
    throw ParseError("bad entry \"" + std::string(t) + "\": " + why, row, col);
  };
  if (t == "-inf") return MaxScalar::epsilon();
  if (t.empty()) return fail("empty token");
  std::string_view body = t;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational q;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail("expected p/q with decimal integers");
    const mpz_class d(std::string(den), 10);
    if (d == 0) return fail("zero denominator");
    q = Rational(mpz_class(std::string(num), 10), d);
  } else {
    const auto dot = body.find('.');
    const auto ip = body.substr(0, dot);
    const auto fp = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (dot != std::string_view::npos && ip.empty() && fp.empty()) return fail("no digits");
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && dot == std::string_view::npos))
      return fail("expected a decimal number, p/q, or -inf");
    mpz_class den = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
    const std::string digits = std::string(ip.empty() ? "0" : ip) + std::string(fp);
    q = Rational(mpz_class(digits, 10), den);
  }
  q.canonicalize();
  if (negative) q = -q;
  return MaxScalar(q);
}

MatrixDocument parse_document(std::string_view text, Format format) {
  return format == Format::Json ? parse_json(text) : parse_csv(text);
}

std::string serialize_matrix(const MaxMatrix& a, Format format, const std::string& name) {
  if (format == Format::Csv) {
    std::ostringstream os;
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) os << (j ? "," : "") << a(i, j).str();
      os << "\n";
    }
    return os.str();
  }
  nlohmann::ordered_json doc;
  if (!name.empty()) doc["name"] = name;
  doc["rows"] = nlohmann::ordered_json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j).str());
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump() + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace tropeig
