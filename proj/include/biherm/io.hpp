#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "biherm/types.hpp"

namespace biherm::io {

enum class MatrixKind { RealSymmetric, RealAntisymmetric, RealGeneral, ComplexHermitian, ComplexGeneral };

std::string_view to_string(MatrixKind kind);
bool is_complex(MatrixKind kind);

/// Malformed input: carries a location ("line 3, column 7" or a field path).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk matrix:
///   {"kind": "real_symmetric", "dim": 2, "data": [1, 0, 0, 1]}
///   {"kind": "complex_hermitian", "dim": 1, "data": [[3, 0]]}
/// data is row-major; complex entries are [re, im] pairs.
class MatrixFile {
 public:
  MatrixFile(MatrixKind kind, RealMatrix real);
  MatrixFile(MatrixKind kind, ComplexMatrix complex);

  MatrixKind kind() const { return kind_; }
  Index dim() const { return is_complex(kind_) ? complex_.rows() : real_.rows(); }

  /// Throws ParseError for complex kinds.
  const RealMatrix& real() const;
  /// Real kinds are promoted.
  ComplexMatrix complex() const;

  nlohmann::json to_json() const;

  /// Validates shape, entries and the kind's symmetry (tol_sym). `where`
  /// prefixes diagnostics.
  static MatrixFile from_json(const nlohmann::json& j, const std::string& where, const Tolerances& tol = {});

 private:
  MatrixKind kind_;
  RealMatrix real_;
  ComplexMatrix complex_;
};

/// Parses a JSON document, reporting syntax errors with line and column.
nlohmann::json read_json_file(const std::string& path);

/// Loads a MatrixFile. "PATH#member" selects a member of a bundle document
/// (e.g. the "g" entry of a triple written by `biherm triple`).
MatrixFile load_matrix(const std::string& source, const Tolerances& tol = {});

/// Deterministic JSON: sorted keys, two-space indentation, doubles with 17
/// significant digits, −0 written as 0. Arrays of scalars stay on one line.
std::string dump(const nlohmann::json& j);

/// Single-line variant of dump().
std::string dump_compact(const nlohmann::json& j);

/// "a.b.c: value" lines for every leaf, keys sorted; arrays inline.
std::string dump_text(const nlohmann::json& j);

void write_file(const std::string& path, const std::string& contents);

}  // namespace biherm::io
