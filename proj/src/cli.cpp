#include "biherm/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "biherm/admissible.hpp"
#include "biherm/connecting.hpp"
#include "biherm/direct_integral.hpp"
#include "biherm/io.hpp"
#include "biherm/spectral.hpp"

namespace biherm::cli {

using nlohmann::json;
using io::MatrixFile;
using io::MatrixKind;

namespace {

struct Options {
  std::string g, j, omega, out, triple, reference, h1, h2, u;
  std::uint64_t seed = 0;
  int trials = 3;
  Tolerances tol;
  std::string format = "json";
  bool quiet = false;
};

struct Outcome {
  json results;
  json checks = json::object();
  std::optional<json> artifact;  // written to --out
  bool uses_seed = false;
};

json matrix_json(MatrixKind kind, const RealMatrix& m) { return MatrixFile(kind, m).to_json(); }
json matrix_json(MatrixKind kind, const ComplexMatrix& m) { return MatrixFile(kind, m).to_json(); }

json vector_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

MatrixFile load_kind(const std::string& source, std::initializer_list<MatrixKind> allowed, const Tolerances& tol) {
  MatrixFile mf = io::load_matrix(source, tol);
  if (std::find(allowed.begin(), allowed.end(), mf.kind()) == allowed.end()) {
    std::string names;
    for (MatrixKind k : allowed) names += (names.empty() ? "'" : ", '") + std::string(io::to_string(k)) + "'";
    throw io::ParseError(source + ": field 'kind': expected " + names + ", got '" +
                         std::string(io::to_string(mf.kind())) + "'");
  }
  return mf;
}

RealForm load_metric(const std::string& source, const Tolerances& tol) {
  return RealForm(load_kind(source, {MatrixKind::RealSymmetric}, tol).real(), Symmetry::Symmetric, tol);
}

RealForm load_symplectic(const std::string& source, const Tolerances& tol) {
  return RealForm(load_kind(source, {MatrixKind::RealAntisymmetric}, tol).real(), Symmetry::Antisymmetric, tol);
}

ComplexStructureJ load_structure(const std::string& source, const Tolerances& tol) {
  const auto mf = load_kind(source, {MatrixKind::RealGeneral, MatrixKind::RealAntisymmetric}, tol);
  return ComplexStructureJ(mf.real(), tol);
}

HermitianForm load_hermitian(const std::string& source, const Tolerances& tol) {
  const auto mf = load_kind(source, {MatrixKind::ComplexHermitian, MatrixKind::RealSymmetric}, tol);
  return HermitianForm(mf.complex(), tol);
}

json residuals_json(const TripleResiduals& r) {
  return json{{"anti_hermitian", r.anti_hermitian}, {"j_square", r.j_square}, {"omega", r.omega}};
}

json triple_bundle(const AdmissibleTriple& t) {
  return json{{"kind", "admissible_triple"},
              {"g", matrix_json(MatrixKind::RealSymmetric, t.g().gram())},
              {"J", matrix_json(MatrixKind::RealGeneral, t.j().mat())},
              {"omega", matrix_json(MatrixKind::RealAntisymmetric, t.omega().gram())}};
}

json triple_checks(const AdmissibleTriple& t, const Tolerances& tol) {
  const auto r = t.residuals();
  return json{{"j_square", r.j_square <= tol.tol_J},
              {"anti_hermitian", r.anti_hermitian <= tol.tol_resid},
              {"omega_is_g_of_J", r.omega <= tol.tol_resid}};
}

Outcome cmd_triple(const Options& o) {
  Outcome res;
  const RealForm g = load_metric(o.g, o.tol);
  if (!o.j.empty()) {
    const ComplexStructureJ j = load_structure(o.j, o.tol);
    RealForm gs = symmetrize_metric(g, j, o.tol);
    RealForm omega = omega_from_g_J(gs, j, o.tol);
    const AdmissibleTriple t(std::move(gs), j, std::move(omega), o.tol);
    res.results = json{{"mode", "metric_and_complex_structure"},
                       {"triple", triple_bundle(t)},
                       {"residuals", residuals_json(t.residuals())}};
    res.checks = triple_checks(t, o.tol);
    res.artifact = triple_bundle(t);
  } else {
    const RealForm omega = load_symplectic(o.omega, o.tol);
    const auto polar = symplectic_polar(g, omega, o.tol);
    res.results = json{{"mode", "metric_and_symplectic_form"},
                       {"B", matrix_json(MatrixKind::RealGeneral, polar.b)},
                       {"R", matrix_json(MatrixKind::RealGeneral, polar.r)},
                       {"triple", triple_bundle(polar.triple)},
                       {"residuals", residuals_json(polar.triple.residuals())}};
    res.checks = triple_checks(polar.triple, o.tol);
    res.artifact = triple_bundle(polar.triple);
  }
  return res;
}

Outcome cmd_hermitian(const Options& o) {
  Outcome res;
  const AdmissibleTriple t(load_metric(o.triple + "#g", o.tol), load_structure(o.triple + "#J", o.tol),
                           load_symplectic(o.triple + "#omega", o.tol), o.tol);
  const auto cmap = o.reference.empty()
                        ? build_complexification(t, o.tol)
                        : build_complexification(t.j(), load_metric(o.reference, o.tol), o.tol);
  const HermitianForm h = hermitian_from_triple(t, cmap, o.tol);
  const auto report = validate_positive(h, o.tol);
  res.results = json{{"H", matrix_json(MatrixKind::ComplexHermitian, h.gram())},
                     {"complex_dim", cmap.complex_dim()},
                     {"real_basis", matrix_json(MatrixKind::RealGeneral, cmap.basis())},
                     {"min_eigenvalue", report.min_eigenvalue},
                     {"symmetry_residual", report.symmetry_residual}};
  res.checks = json{{"hermitian", report.symmetric}, {"positive_definite", report.positive}};
  res.artifact = matrix_json(MatrixKind::ComplexHermitian, h.gram());
  return res;
}

Outcome cmd_connect(const Options& o) {
  Outcome res;
  const auto g = connecting_operator(load_hermitian(o.h1, o.tol), load_hermitian(o.h2, o.tol), o.tol);
  const auto& c = g.checks();
  res.results = json{{"G", matrix_json(MatrixKind::ComplexGeneral, g.mat())},
                     {"residuals", {{"identity", c.identity},
                                    {"h1_self_adjoint", c.h1_self_adjoint},
                                    {"h2_self_adjoint", c.h2_self_adjoint}}},
                     {"min_eigenvalue", c.min_eigenvalue},
                     {"h1_condition", c.h1_condition},
                     {"ill_conditioned", c.ill_conditioned}};
  res.checks = json{{"identity", c.identity_ok},
                    {"h1_self_adjoint", c.h1_self_adjoint_ok},
                    {"h2_self_adjoint", c.h2_self_adjoint_ok},
                    {"positive", c.positive}};
  res.artifact = matrix_json(MatrixKind::ComplexGeneral, g.mat());
  return res;
}

json clusters_json(const SpectralResolution& r) {
  json out = json::array();
  for (const auto& c : r.clusters) out.push_back(json{{"eigenvalue", c.eigenvalue}, {"multiplicity", c.multiplicity}});
  return out;
}

Outcome cmd_spectrum(const Options& o) {
  Outcome res;
  const auto g = connecting_operator(load_hermitian(o.h1, o.tol), load_hermitian(o.h2, o.tol), o.tol);
  const auto r = spectral_resolution(g, o.tol);
  const auto sig = group_signature(r);
  res.results = json{{"clusters", clusters_json(r)},
                     {"eigenvalues", vector_json(r.raw_eigenvalues)},
                     {"gap_threshold", r.gap_threshold},
                     {"reconstruction_residual", r.reconstruction},
                     {"cross_orthogonality", r.cross_orthogonality},
                     {"signature", sig.to_string()},
                     {"multiplicities", sig.multiplicities}};
  res.checks = json{{"reconstruction", r.reconstruction <= 10.0 * o.tol.tol_resid},
                    {"multiplicities_sum_to_n", r.dim() == g.dim()}};
  return res;
}

Outcome cmd_generic(const Options& o) {
  Outcome res;
  const auto g = connecting_operator(load_hermitian(o.h1, o.tol), load_hermitian(o.h2, o.tol), o.tol);
  const auto r = spectral_resolution(g, o.tol);
  const bool def1 = is_generic_def1(r);
  const Index commutant = commutant_dimension(g, o.tol);
  const Index bicommutant = bicommutant_dimension(r);
  const bool def2 = commutant == bicommutant;
  const bool cyclic = is_cyclic(g, o.trials, o.seed, o.tol);
  Index sum_sq = 0;
  for (const auto& c : r.clusters) sum_sq += c.multiplicity * c.multiplicity;
  res.results = json{{"generic_def1", def1},
                     {"generic_def2", def2},
                     {"cyclic", cyclic},
                     {"commutant_dimension", commutant},
                     {"bicommutant_dimension", bicommutant},
                     {"signature", group_signature(r).to_string()},
                     {"trials", o.trials}};
  res.checks = json{{"def1_equals_def2", def1 == def2},
                    {"cyclic_equals_generic", cyclic == def1},
                    {"commutant_is_sum_of_squares", commutant == sum_sq}};
  res.uses_seed = true;
  return res;
}

Outcome cmd_decompose(const Options& o) {
  Outcome res;
  const HermitianForm h1 = load_hermitian(o.h1, o.tol);
  const HermitianForm h2 = load_hermitian(o.h2, o.tol);
  const auto g = connecting_operator(h1, h2, o.tol);
  const auto dec = build_decomposition(g, o.tol);
  json fibers = json::array();
  for (const auto& f : dec.fibers()) {
    fibers.push_back(json{{"eigenvalue", f.eigenvalue}, {"weight", f.weight}, {"dim", f.dim}});
  }
  json segments = json::object();
  for (const auto& [k, members] : dec.segments()) segments[std::to_string(k)] = members;
  const auto prop1 = check_proportionality(dec, h1, h2, o.tol);
  bool consistent = true;
  bool unidimensional = dec.all_unidimensional();
  try {
    unidimensional = check_prop2(dec, g, o.tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InternalInconsistency) throw;
    consistent = false;
  }
  res.results = json{{"fibers", fibers},
                     {"segments", segments},
                     {"proportionality", {{"max_violation", prop1.max_violation}, {"scale", prop1.scale}}},
                     {"unidimensional", unidimensional},
                     {"generic_def2", is_generic_def2(g, o.tol)}};
  res.checks = json{{"proportionality", prop1.passed}, {"prop2_consistent", consistent}};
  return res;
}

json biunitary_json(const BiUnitaryReport& r) {
  return json{{"h1_residual", r.h1_residual},
              {"h2_residual", r.h2_residual},
              {"commutator", r.commutator},
              {"implication_holds", r.implication_holds}};
}

json biunitary_checks(const BiUnitaryReport& r) {
  return json{{"preserves_h1", r.h1_unitary},
              {"preserves_h2", r.h2_unitary},
              {"commutes_with_G", r.commutes},
              {"implication", r.implication_holds}};
}

Outcome cmd_sample_u(const Options& o) {
  Outcome res;
  const auto g = connecting_operator(load_hermitian(o.h1, o.tol), load_hermitian(o.h2, o.tol), o.tol);
  const auto dec = build_decomposition(g, o.tol);
  const ComplexMatrix u = sample_biunitary(dec, o.seed);
  const auto report = verify_biunitary(u, g, o.tol);
  json dims = json::array();
  for (const auto& f : dec.fibers()) dims.push_back(f.dim);
  res.results = json{{"U", matrix_json(MatrixKind::ComplexGeneral, u)},
                     {"fiber_dims", dims},
                     {"verification", biunitary_json(report)}};
  res.checks = biunitary_checks(report);
  res.artifact = matrix_json(MatrixKind::ComplexGeneral, u);
  res.uses_seed = true;
  return res;
}

Outcome cmd_verify_u(const Options& o) {
  Outcome res;
  const ComplexMatrix u = io::load_matrix(o.u, o.tol).complex();
  const auto g = connecting_operator(load_hermitian(o.h1, o.tol), load_hermitian(o.h2, o.tol), o.tol);
  const auto report = verify_biunitary(u, g, o.tol);
  res.results = biunitary_json(report);
  res.checks = biunitary_checks(report);
  return res;
}

json arguments_json(const std::string& command, const Options& o) {
  json a = json::object();
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) a[key] = v;
  };
  put("g", o.g);
  put("j", o.j);
  put("omega", o.omega);
  put("triple", o.triple);
  put("reference", o.reference);
  put("h1", o.h1);
  put("h2", o.h2);
  put("u", o.u);
  put("out", o.out);
  a["format"] = o.format;
  if (command == "generic") a["trials"] = o.trials;
  return a;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--tol-eig", o.tol.tol_eig, "Relative eigenvalue-cluster gap and rank threshold")
      ->envname("BIHERM_TOL_EIG")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-resid", o.tol.tol_resid, "Relative residual tolerance for operator identities")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  sub->add_flag("--quiet", o.quiet, "Suppress the report; exit code only");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Alternative Hermitian structures: admissible triples, connecting operators, bi-unitary groups",
               "biherm"};
  app.require_subcommand(1);

  std::map<std::string, std::function<Outcome(const Options&)>> commands;
  auto sub = [&](const std::string& name, const std::string& help, std::function<Outcome(const Options&)> fn) {
    commands[name] = std::move(fn);
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, o);
    return s;
  };
  auto form_pair = [&](CLI::App* s) {
    s->add_option("--h1", o.h1, "First Hermitian form (MatrixFile)")->required();
    s->add_option("--h2", o.h2, "Second Hermitian form (MatrixFile)")->required();
  };

  {
    auto* s = sub("triple", "Build an admissible triple (g, J, ω)", cmd_triple);
    s->add_option("--g", o.g, "Metric (real_symmetric)")->required();
    auto* partner = s->add_option_group("partner", "Exactly one of --j / --omega");
    partner->add_option("--j", o.j, "Complex structure (real_general)");
    partner->add_option("--omega", o.omega, "Symplectic form (real_antisymmetric)");
    partner->require_option(1);
    s->add_option("--out", o.out, "Write the triple bundle here");
  }
  {
    auto* s = sub("hermitian", "Hermitian structure h = g + iω of a triple", cmd_hermitian);
    s->add_option("--triple", o.triple, "Triple bundle written by `triple`")->required();
    s->add_option("--reference", o.reference, "Metric defining the complex coordinates (default: the triple's g)");
    s->add_option("--out", o.out, "Write H here");
  }
  {
    auto* s = sub("connect", "Connecting operator G with h2(x,y) = h1(Gx,y)", cmd_connect);
    form_pair(s);
    s->add_option("--out", o.out, "Write G here");
  }
  form_pair(sub("spectrum", "Eigenvalue clusters and bi-unitary group signature", cmd_spectrum));
  {
    auto* s = sub("generic", "Generic-position verdicts and cyclicity", cmd_generic);
    form_pair(s);
    s->add_option("--seed", o.seed, "Seed for the cyclicity trials");
    s->add_option("--trials", o.trials, "Random start vectors for the cyclicity test")->check(CLI::PositiveNumber);
  }
  form_pair(sub("decompose", "Fibered decomposition and proportionality checks", cmd_decompose));
  {
    auto* s = sub("sample-u", "Random bi-unitary element", cmd_sample_u);
    form_pair(s);
    s->add_option("--seed", o.seed, "Sampling seed");
    s->add_option("--out", o.out, "Write U here");
  }
  {
    auto* s = sub("verify-u", "Check that U preserves both forms", cmd_verify_u);
    s->add_option("--u", o.u, "Candidate operator (MatrixFile)")->required();
    form_pair(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    o.tol.validate();
    Outcome res = commands.at(name)(o);
    json report{{"command", name},
                {"arguments", arguments_json(name, o)},
                {"tolerances", {{"tol_eig", o.tol.tol_eig},
                                {"tol_resid", o.tol.tol_resid},
                                {"tol_sym", o.tol.tol_sym},
                                {"tol_J", o.tol.tol_J}}},
                {"results", std::move(res.results)},
                {"checks", res.checks}};
    bool passed = true;
    for (const auto& [key, value] : res.checks.items()) passed = passed && value.get<bool>();
    report["passed"] = passed;
    if (res.uses_seed) report["seed"] = o.seed;
    if (res.artifact && !o.out.empty()) io::write_file(o.out, io::dump(*res.artifact));
    if (!o.quiet) out << (o.format == "text" ? io::dump_text(report) : io::dump(report));
    return passed ? kOk : kCheckFailed;
  } catch (const io::ParseError& e) {
    err << "biherm " << name << ": " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "biherm " << name << ": " << e.what() << '\n';
    return e.code() == ErrorCode::InternalInconsistency ? kCheckFailed : kInputError;
  } catch (const std::exception& e) {
    err << "biherm " << name << ": " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace biherm::cli
