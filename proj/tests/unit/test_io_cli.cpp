#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "biherm/cli.hpp"
#include "biherm/io.hpp"
#include "support/helpers.hpp"

using namespace biherm;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(BIHERM_FIXTURES) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string parse_error_of(const std::string& path) {
  try {
    io::load_matrix(path);
  } catch (const io::ParseError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "biherm_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("MatrixFile parsing") {
  SUBCASE("real and complex kinds") {
    const auto id = io::load_matrix(fixture("g_identity2.json"));
    CHECK(id.kind() == io::MatrixKind::RealSymmetric);
    CHECK(id.real() == RealMatrix::Identity(2, 2));
    const auto h = io::load_matrix(fixture("h1_complex3.json"));
    CHECK(h.kind() == io::MatrixKind::ComplexHermitian);
    CHECK(h.complex()(0, 1) == Complex(0, 1));
    CHECK(h.complex()(1, 0) == Complex(0, -1));
    CHECK_THROWS_AS(h.real(), io::ParseError);
    CHECK(id.complex() == ComplexMatrix::Identity(2, 2));
  }
  SUBCASE("bundle members") {
    const auto j = io::load_matrix(fixture("triple_canonical2.json") + "#J");
    CHECK(j.kind() == io::MatrixKind::RealGeneral);
    CHECK(j.real()(0, 1) == -1.0);
    CHECK(parse_error_of(fixture("triple_canonical2.json") + "#nope").find("no member 'nope'") !=
          std::string::npos);
  }
  SUBCASE("diagnostics carry a location") {
    CHECK(parse_error_of(fixture("bad_syntax.json")).find("line 2") != std::string::npos);
    CHECK(parse_error_of(fixture("bad_length.json")).find("field 'data': expected 4 entries, got 3") !=
          std::string::npos);
    CHECK(parse_error_of(fixture("bad_entry.json")).find("field 'data[0]'") != std::string::npos);
    CHECK(parse_error_of(fixture("bad_kind.json")).find("unknown kind 'quaternion'") != std::string::npos);
    CHECK(parse_error_of(fixture("not_symmetric.json")).find("not symmetric") != std::string::npos);
    CHECK(parse_error_of(fixture("missing.json")).find("cannot open") != std::string::npos);
  }
  SUBCASE("non-finite and wrong types") {
    const json bad = json::parse(R"({"kind": "real_general", "dim": 1, "data": ["x"]})");
    CHECK_THROWS_AS(io::MatrixFile::from_json(bad, "inline"), io::ParseError);
    const json zero = json::parse(R"({"kind": "real_general", "dim": 0, "data": []})");
    CHECK_THROWS_AS(io::MatrixFile::from_json(zero, "inline"), io::ParseError);
  }
  SUBCASE("round trip through JSON") {
    ComplexMatrix m(2, 2);
    m << Complex(1, 0), Complex(0.1, -2.5), Complex(0.1, 2.5), Complex(3, 0);
    const io::MatrixFile mf(io::MatrixKind::ComplexHermitian, m);
    const auto back = io::MatrixFile::from_json(json::parse(io::dump(mf.to_json())), "inline");
    CHECK(back.complex() == m);
  }
}

TEST_CASE("deterministic serialization") {
  const json j = {{"b", 0.1}, {"a", {1.0, -0.0, 1e-300}}, {"c", {{"z", true}, {"y", "s"}}}};
  CHECK(io::dump_compact(j) == R"({"a": [1, 0, 1e-300], "b": 0.10000000000000001, "c": {"y": "s", "z": true}})");
  CHECK(io::dump(j) == io::dump(json::parse(io::dump(j))));
  CHECK(io::dump_text(j) ==
        "a: [1, 0, 1e-300]\nb: 0.10000000000000001\nc.y: s\nc.z: true\n");
}

TEST_CASE("CLI examples") {
  SUBCASE("connect with equal forms") {
    const auto r = run({"connect", "--h1", fixture("h_identity2.json"), "--h2", fixture("h_identity2.json")});
    CHECK(r.code == cli::kOk);
    const json report = json::parse(r.out);
    CHECK(report["passed"] == true);
    CHECK(report["results"]["G"]["data"] == json::parse("[[1,0],[0,0],[0,0],[1,0]]"));
  }
  SUBCASE("generic pair") {
    const auto r = run({"generic", "--h1", fixture("h_identity2.json"), "--h2", fixture("h_diag12.json")});
    CHECK(r.code == cli::kOk);
    const json report = json::parse(r.out);
    CHECK(report["results"]["generic_def1"] == true);
    CHECK(report["results"]["generic_def2"] == true);
    CHECK(report["results"]["cyclic"] == true);
    CHECK(report["results"]["signature"] == "U(1)×U(1)");
    CHECK(report["seed"] == 0);
  }
  SUBCASE("degenerate pair is a verdict, not a failure") {
    const auto r = run({"generic", "--h1", fixture("h_identity3.json"), "--h2", fixture("h_diag112.json")});
    CHECK(r.code == cli::kOk);
    const json report = json::parse(r.out);
    CHECK(report["results"]["generic_def1"] == false);
    CHECK(report["results"]["commutant_dimension"] == 5);
    CHECK(report["results"]["bicommutant_dimension"] == 2);
    CHECK(report["results"]["signature"] == "U(2)×U(1)");
  }
  SUBCASE("swap is not bi-unitary") {
    const auto r = run({"verify-u", "--u", fixture("u_swap2.json"), "--h1", fixture("h_identity2.json"), "--h2",
                        fixture("h_diag12.json")});
    CHECK(r.code == cli::kCheckFailed);
    const json report = json::parse(r.out);
    CHECK(report["checks"]["preserves_h1"] == true);
    CHECK(report["checks"]["preserves_h2"] == false);
    CHECK(report["passed"] == false);
  }
  SUBCASE("phases are bi-unitary") {
    const auto r = run({"verify-u", "--u", fixture("u_phase2.json"), "--h1", fixture("h_identity2.json"), "--h2",
                        fixture("h_diag12.json"), "--quiet"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.empty());
  }
}

TEST_CASE("CLI exit codes for bad input") {
  const std::string h = fixture("h_identity2.json");
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"frobnicate"}).code == cli::kInputError);
  CHECK(run({"connect", "--h1", h}).code == cli::kInputError);
  CHECK(run({"connect", "--h1", h, "--h2", h, "--format", "xml"}).code == cli::kInputError);
  CHECK(run({"connect", "--h1", h, "--h2", h, "--tol-eig", "-1"}).code == cli::kInputError);
  CHECK(run({"triple", "--g", fixture("g_identity2.json")}).code == cli::kInputError);
  CHECK(run({"triple", "--g", fixture("g_identity2.json"), "--j", fixture("j_canonical2.json"), "--omega",
             fixture("omega_scaled2.json")})
            .code == cli::kInputError);

  const auto syntax = run({"connect", "--h1", fixture("bad_syntax.json"), "--h2", h});
  CHECK(syntax.code == cli::kInputError);
  CHECK(syntax.err.find("line 2") != std::string::npos);
  CHECK(run({"connect", "--h1", fixture("h_indefinite2.json"), "--h2", h}).code == cli::kInputError);
  CHECK(run({"connect", "--h1", h, "--h2", fixture("h_identity3.json")}).code == cli::kInputError);
  CHECK(run({"triple", "--g", fixture("g_identity2.json"), "--omega", fixture("omega3_odd.json")}).code ==
        cli::kInputError);
  CHECK(run({"triple", "--g", fixture("g_identity2.json"), "--j", fixture("j_bad2.json")}).code ==
        cli::kInputError);
  CHECK(run({"connect", "--h1", fixture("u_swap2.json"), "--h2", h}).code == cli::kInputError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("CLI artifacts reload as MatrixFile inputs") {
  const auto triple = scratch("triple.json");
  const auto herm = scratch("h.json");
  REQUIRE(run({"triple", "--g", fixture("g4.json"), "--omega", fixture("omega4.json"), "--out", triple.string(),
               "--quiet"})
              .code == cli::kOk);
  REQUIRE(run({"hermitian", "--triple", triple.string(), "--out", herm.string(), "--quiet"}).code == cli::kOk);
  const auto h = io::load_matrix(herm.string());
  CHECK(h.kind() == io::MatrixKind::ComplexHermitian);
  CHECK(h.dim() == 2);
  // in the triple's own orthonormal coordinates the structure is the identity
  CHECK(norm_inf(h.complex() - ComplexMatrix::Identity(2, 2)) < 1e-12);

  const auto g = scratch("g.json");
  const auto u = scratch("u.json");
  REQUIRE(run({"connect", "--h1", fixture("h1_complex3.json"), "--h2", fixture("h2_complex3.json"), "--out",
               g.string(), "--quiet"})
              .code == cli::kOk);
  CHECK(io::load_matrix(g.string()).dim() == 3);
  REQUIRE(run({"sample-u", "--h1", fixture("h1_complex3.json"), "--h2", fixture("h2_complex3.json"), "--seed", "5",
               "--out", u.string(), "--quiet"})
              .code == cli::kOk);
  CHECK(run({"verify-u", "--u", u.string(), "--h1", fixture("h1_complex3.json"), "--h2",
             fixture("h2_complex3.json")})
            .code == cli::kOk);
  // the first member of the bundle feeds other commands directly
  CHECK(run({"connect", "--h1", triple.string() + "#g", "--h2", triple.string() + "#g", "--quiet"}).code ==
        cli::kOk);
}

TEST_CASE("environment tolerance override, flag wins") {
  const std::string h1 = fixture("h_identity3.json");
  const std::string h2 = fixture("h_diag112.json");
  setenv("BIHERM_TOL_EIG", "0.6", 1);
  const json coarse = json::parse(run({"spectrum", "--h1", h1, "--h2", h2}).out);
  const json flag = json::parse(run({"spectrum", "--h1", h1, "--h2", h2, "--tol-eig", "1e-8"}).out);
  unsetenv("BIHERM_TOL_EIG");
  CHECK(coarse["tolerances"]["tol_eig"] == 0.6);
  CHECK(coarse["results"]["signature"] == "U(3)");
  CHECK(flag["tolerances"]["tol_eig"] == 1e-8);
  CHECK(flag["results"]["signature"] == "U(2)×U(1)");
}

TEST_CASE("text format") {
  const auto r = run({"spectrum", "--h1", fixture("h_identity2.json"), "--h2", fixture("h_diag12.json"), "--format",
                      "text"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("results.signature: U(1)×U(1)\n") != std::string::npos);
  CHECK(r.out.find("passed: true\n") != std::string::npos);
}
