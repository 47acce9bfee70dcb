#include "ggs/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ggs/error.hpp"
#include "ggs/linalg.hpp"

namespace ggs {

namespace {

enum class Format { Coordinate, Array };
enum class Field { Real, Integer, Pattern };
enum class Symmetry { General, Symmetric, SkewSymmetric };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0;
  // from_chars rejects a leading '+', which some writers emit.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "invalid number '" + std::string(token) + "'");
  }
  return value;
}

long long parse_int(std::string_view token, std::size_t line_no) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "invalid integer '" + std::string(token) + "'");
  }
  return value;
}

bool is_blank_or_comment(const std::string& line) {
  for (const char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void format_double(std::ostream& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

}  // namespace

SparseMatrixd read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++line_no;

  const auto header = split(line);
  if (header.size() != 5 || lower(std::string(header[0])) != "%%matrixmarket") {
    throw ParseError(line_no, "missing '%%MatrixMarket matrix <format> <field> <symmetry>' banner");
  }
  if (lower(std::string(header[1])) != "matrix") throw ParseError(line_no, "only 'matrix' objects are supported");

  const std::string format_name = lower(std::string(header[2]));
  const std::string field_name = lower(std::string(header[3]));
  const std::string symmetry_name = lower(std::string(header[4]));

  Format format;
  if (format_name == "coordinate") format = Format::Coordinate;
  else if (format_name == "array") format = Format::Array;
  else throw ParseError(line_no, "unknown format '" + format_name + "'");

  Field field;
  if (field_name == "real" || field_name == "double") field = Field::Real;
  else if (field_name == "integer") field = Field::Integer;
  else if (field_name == "pattern") field = Field::Pattern;
  else if (field_name == "complex") throw Error(ErrorCode::UnsupportedField, "complex matrices are not supported");
  else throw ParseError(line_no, "unknown field '" + field_name + "'");

  Symmetry symmetry;
  if (symmetry_name == "general") symmetry = Symmetry::General;
  else if (symmetry_name == "symmetric") symmetry = Symmetry::Symmetric;
  else if (symmetry_name == "skew-symmetric") symmetry = Symmetry::SkewSymmetric;
  else if (symmetry_name == "hermitian") throw Error(ErrorCode::UnsupportedField, "hermitian matrices are not supported");
  else throw ParseError(line_no, "unknown symmetry '" + symmetry_name + "'");

  if (format == Format::Array && field == Field::Pattern) {
    throw ParseError(line_no, "array format cannot use the pattern field");
  }

  // Size line.
  std::vector<std::string_view> tokens;
  std::string size_line;
  for (;;) {
    if (!std::getline(in, size_line)) throw ParseError(line_no + 1, "missing size line");
    ++line_no;
    if (!is_blank_or_comment(size_line)) break;
  }
  tokens = split(size_line);
  const std::size_t expected_size_tokens = format == Format::Coordinate ? 3 : 2;
  if (tokens.size() != expected_size_tokens) throw ParseError(line_no, "malformed size line");
  const long long m = parse_int(tokens[0], line_no);
  const long long n = parse_int(tokens[1], line_no);
  if (m < 1 || n < 1) throw ParseError(line_no, "matrix dimensions must be positive");
  if (symmetry != Symmetry::General && m != n) throw ParseError(line_no, "symmetric storage requires a square matrix");

  std::vector<Eigen::Triplet<double, int>> triplets;
  auto add = [&](long long i, long long j, double v) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    if (i != j) {
      if (symmetry == Symmetry::Symmetric) triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
      if (symmetry == Symmetry::SkewSymmetric) triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), -v);
    }
  };

  if (format == Format::Coordinate) {
    const long long nnz = parse_int(tokens[2], line_no);
    if (nnz < 0) throw ParseError(line_no, "negative entry count");
    triplets.reserve(static_cast<std::size_t>(symmetry == Symmetry::General ? nnz : 2 * nnz));
    const std::size_t expected_tokens = field == Field::Pattern ? 2 : 3;
    long long read = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (is_blank_or_comment(line)) continue;
      if (read == nnz) throw ParseError(line_no, "more entries than declared");
      const auto entry = split(line);
      if (entry.size() != expected_tokens) throw ParseError(line_no, "malformed entry");
      const long long i = parse_int(entry[0], line_no);
      const long long j = parse_int(entry[1], line_no);
      if (i < 1 || i > m || j < 1 || j > n) throw ParseError(line_no, "entry index out of range");
      if (symmetry == Symmetry::SkewSymmetric && i == j) throw ParseError(line_no, "skew-symmetric diagonal entry");
      const double v = field == Field::Pattern ? 1.0 : parse_double(entry[2], line_no);
      add(i - 1, j - 1, v);
      ++read;
    }
    if (read != nnz) throw ParseError(line_no, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));
  } else {
    // Column-major; symmetric storage lists the lower triangle only.
    long long col = 0;
    long long row = symmetry == Symmetry::SkewSymmetric ? 1 : 0;
    auto advance = [&] {
      if (++row == m) {
        ++col;
        row = symmetry == Symmetry::General ? 0 : (symmetry == Symmetry::Symmetric ? col : col + 1);
      }
    };
    while (std::getline(in, line)) {
      ++line_no;
      if (is_blank_or_comment(line)) continue;
      const auto entry = split(line);
      if (entry.size() != 1) throw ParseError(line_no, "array entries hold one value per line");
      if (col >= n || (symmetry == Symmetry::SkewSymmetric && col >= n - 1)) {
        throw ParseError(line_no, "more entries than the declared size");
      }
      add(row, col, parse_double(entry[0], line_no));
      advance();
    }
    const bool complete = symmetry == Symmetry::SkewSymmetric ? col >= n - 1 : col >= n;
    if (!complete) throw ParseError(line_no, "fewer entries than the declared size");
  }

  return make_sparse<double>(m, n, triplets);
}

SparseMatrixd load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrixd& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (Index j = 0; j < A.outerSize(); ++j) {
    for (SparseMatrixd::InnerIterator it(A, j); it; ++it) {
      out << (it.row() + 1) << ' ' << (j + 1) << ' ';
      format_double(out, it.value());
      out << '\n';
    }
  }
}

void save_matrix_market(const std::filesystem::path& path, const SparseMatrixd& A) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_matrix_market(out, A);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

Vectord read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line) || (!line.empty() && line[0] == '#')) continue;
    const auto tokens = split(line);
    if (tokens.size() != 1) throw ParseError(line_no, "expected one value per line");
    values.push_back(parse_double(tokens[0], line_no));
  }
  return Eigen::Map<const Vectord>(values.data(), static_cast<Index>(values.size()));
}

Vectord load_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_vector(in);
}

void write_vector(std::ostream& out, const Vectord& v) {
  for (Index i = 0; i < v.size(); ++i) {
    format_double(out, v[i]);
    out << '\n';
  }
}

void save_vector(const std::filesystem::path& path, const Vectord& v) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_vector(out, v);
}

}  // namespace ggs
