#pragma once

// MatrixMarket exchange format (coordinate and array; real, integer and
// pattern fields; general, symmetric and skew-symmetric storage) plus the
// one-value-per-line vector format used for right-hand sides and solutions.

#include <filesystem>
#include <iosfwd>

#include "ggs/types.hpp"

namespace ggs {

/// Symmetric and skew-symmetric storage is expanded to the full matrix,
/// pattern entries become 1, duplicate coordinates are summed and explicit
/// zeros dropped. Throws ParseError (with line number) or UnsupportedField.
SparseMatrixd read_matrix_market(std::istream& in);
SparseMatrixd load_matrix_market(const std::filesystem::path& path);

/// Writes "coordinate real general" with shortest round-trip number formatting.
void write_matrix_market(std::ostream& out, const SparseMatrixd& A);
void save_matrix_market(const std::filesystem::path& path, const SparseMatrixd& A);

Vectord read_vector(std::istream& in);
Vectord load_vector(const std::filesystem::path& path);
void write_vector(std::ostream& out, const Vectord& v);
void save_vector(const std::filesystem::path& path, const Vectord& v);

}  // namespace ggs
