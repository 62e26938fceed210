#include "biherm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace biherm::io {

using nlohmann::json;

namespace {

constexpr MatrixKind kAllKinds[] = {MatrixKind::RealSymmetric, MatrixKind::RealAntisymmetric,
                                    MatrixKind::RealGeneral, MatrixKind::ComplexHermitian,
                                    MatrixKind::ComplexGeneral};

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void write_scalar(const json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    out += format_double(v);
  } else {
    out += j.dump();
  }
}

void write_compact(const json& j, std::string& out) {
  if (j.is_object()) {
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ", ";
      first = false;
      out += json(it.key()).dump();
      out += ": ";
      write_compact(it.value(), out);
    }
    out += '}';
  } else if (j.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) out += ", ";
      write_compact(j[i], out);
    }
    out += ']';
  } else {
    write_scalar(j, out);
  }
}

bool inline_array(const json& j) {
  for (const auto& e : j) {
    if (is_scalar(e)) continue;
    if (e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) { return is_scalar(x); }) &&
        e.size() <= 2) {
      continue;
    }
    return false;
  }
  return true;
}

void write_pretty(const json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      write_pretty(it.value(), out, depth + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    if (j.empty() || inline_array(j)) {
      write_compact(j, out);
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i > 0) out += ",\n";
      out += pad;
      write_pretty(j[i], out, depth + 1);
    }
    out += "\n" + close_pad + "]";
  } else {
    write_scalar(j, out);
  }
}

void write_text(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      write_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out += prefix + ": ";
  if (j.is_string()) {
    out += j.get<std::string>();
  } else {
    write_compact(j, out);
  }
  out += '\n';
}

double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": number is not finite");
  return v;
}

}  // namespace

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::RealSymmetric: return "real_symmetric";
    case MatrixKind::RealAntisymmetric: return "real_antisymmetric";
    case MatrixKind::RealGeneral: return "real_general";
    case MatrixKind::ComplexHermitian: return "complex_hermitian";
    case MatrixKind::ComplexGeneral: return "complex_general";
  }
  return "real_general";
}

bool is_complex(MatrixKind kind) {
  return kind == MatrixKind::ComplexHermitian || kind == MatrixKind::ComplexGeneral;
}

MatrixFile::MatrixFile(MatrixKind kind, RealMatrix real) : kind_(kind), real_(std::move(real)) {
  if (is_complex(kind_)) {
    complex_ = real_.cast<Complex>();
    real_.resize(0, 0);
  }
}

MatrixFile::MatrixFile(MatrixKind kind, ComplexMatrix complex) : kind_(kind), complex_(std::move(complex)) {
  if (!is_complex(kind_)) {
    real_ = complex_.real();
    complex_.resize(0, 0);
  }
}

const RealMatrix& MatrixFile::real() const {
  if (is_complex(kind_)) {
    throw ParseError(std::string("expected a real matrix, got kind '") + std::string(to_string(kind_)) + "'");
  }
  return real_;
}

ComplexMatrix MatrixFile::complex() const {
  return is_complex(kind_) ? complex_ : ComplexMatrix(real_.cast<Complex>());
}

json MatrixFile::to_json() const {
  const Index n = dim();
  json data = json::array();
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      if (is_complex(kind_)) {
        data.push_back(json::array({complex_(r, c).real(), complex_(r, c).imag()}));
      } else {
        data.push_back(real_(r, c));
      }
    }
  }
  return json{{"kind", std::string(to_string(kind_))}, {"dim", n}, {"data", std::move(data)}};
}

MatrixFile MatrixFile::from_json(const json& j, const std::string& where, const Tolerances& tol) {
  if (!j.is_object()) throw ParseError(where + ": expected a matrix object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError(where + ": field 'kind': missing or not a string");
  const auto kind_name = j["kind"].get<std::string>();
  MatrixKind kind = MatrixKind::RealGeneral;
  bool known = false;
  for (MatrixKind k : kAllKinds) {
    if (to_string(k) == kind_name) {
      kind = k;
      known = true;
    }
  }
  if (!known) throw ParseError(where + ": field 'kind': unknown kind '" + kind_name + "'");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
    throw ParseError(where + ": field 'dim': missing or not a positive integer");
  }
  const auto n = static_cast<Index>(j["dim"].get<long long>());
  if (!j.contains("data") || !j["data"].is_array()) throw ParseError(where + ": field 'data': missing or not an array");
  const json& data = j["data"];
  if (data.size() != static_cast<std::size_t>(n * n)) {
    throw ParseError(where + ": field 'data': expected " + std::to_string(n * n) + " entries, got " +
                     std::to_string(data.size()));
  }
  auto field = [&](std::size_t i) { return where + ": field 'data[" + std::to_string(i) + "]'"; };

  if (is_complex(kind)) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const json& e = data[i];
      if (!e.is_array() || e.size() != 2) throw ParseError(field(i) + ": expected an [re, im] pair");
      m(static_cast<Index>(i) / n, static_cast<Index>(i) % n) =
          Complex(read_number(e[0], field(i)), read_number(e[1], field(i)));
    }
    if (kind == MatrixKind::ComplexHermitian &&
        norm_inf(m - m.adjoint()) > tol.tol_sym * norm_inf(m)) {
      throw ParseError(where + ": kind 'complex_hermitian' but the matrix is not Hermitian");
    }
    return MatrixFile(kind, std::move(m));
  }
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < data.size(); ++i) {
    m(static_cast<Index>(i) / n, static_cast<Index>(i) % n) = read_number(data[i], field(i));
  }
  const double scale = norm_inf(m);
  if (kind == MatrixKind::RealSymmetric && norm_inf(m - m.transpose()) > tol.tol_sym * scale) {
    throw ParseError(where + ": kind 'real_symmetric' but the matrix is not symmetric");
  }
  if (kind == MatrixKind::RealAntisymmetric && norm_inf(m + m.transpose()) > tol.tol_sym * scale) {
    throw ParseError(where + ": kind 'real_antisymmetric' but the matrix is not antisymmetric");
  }
  return MatrixFile(kind, std::move(m));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    // Messages look like "[json.exception.parse_error.101] parse error at line 2, column 5: ..."
    std::string msg = e.what();
    const auto pos = msg.find("] ");
    if (pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(path + ": " + msg);
  }
}

MatrixFile load_matrix(const std::string& source, const Tolerances& tol) {
  const auto hash = source.rfind('#');
  if (hash == std::string::npos) return MatrixFile::from_json(read_json_file(source), source, tol);
  const std::string path = source.substr(0, hash);
  const std::string member = source.substr(hash + 1);
  const json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains(member)) {
    throw ParseError(path + ": no member '" + member + "'");
  }
  return MatrixFile::from_json(doc[member], path + ": member '" + member + "'", tol);
}

std::string dump(const json& j) {
  std::string out;
  write_pretty(j, out, 0);
  out += '\n';
  return out;
}

std::string dump_compact(const json& j) {
  std::string out;
  write_compact(j, out);
  return out;
}

std::string dump_text(const json& j) {
  std::string out;
  write_text(j, "", out);
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << contents;
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace biherm::io
