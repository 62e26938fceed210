#include <doctest.h>

#include <set>

#include "biherm/forms.hpp"
#include "support/generators.hpp"

using namespace biherm;
using biherm::testing::Rng;

namespace {

ComplexMatrix cdiag(std::initializer_list<double> d) {
  RealVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

RealMatrix hilbert(Index n) {
  RealMatrix h(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) h(r, c) = 1.0 / static_cast<double>(r + c + 1);
  return h;
}

}  // namespace

TEST_CASE("validate_positive") {
  SUBCASE("identity passes") {
    const auto r = validate_positive(RealForm(RealMatrix::Identity(2, 2), Symmetry::Symmetric));
    CHECK(r.passed());
    CHECK(r.min_eigenvalue == doctest::Approx(1.0));
  }
  SUBCASE("indefinite fails") {
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const auto r = validate_positive(RealForm(d, Symmetry::Symmetric));
    CHECK_FALSE(r.passed());
    CHECK(r.symmetric);
    CHECK(r.min_eigenvalue == doctest::Approx(-1.0));
  }
  SUBCASE("Hilbert 4x4") {
    // numpy.linalg.eigvalsh(scipy.linalg.hilbert(4))[0]
    const auto r = validate_positive(hilbert(4));
    CHECK(r.passed());
    CHECK(r.min_eigenvalue == doctest::Approx(9.670230402260876e-05).epsilon(1e-9));
  }
  SUBCASE("non-finite entries") {
    RealMatrix bad = RealMatrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_positive(bad), Error);
    try {
      validate_positive(bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFinite);
    }
  }
  SUBCASE("non-Hermitian complex matrix flagged") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = Complex(0.0, 1.0);
    CHECK_FALSE(validate_positive(m).symmetric);
  }
}

TEST_CASE("form types enforce their invariants") {
  RealMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(RealForm(skew, Symmetry::Symmetric), Error);
  CHECK_NOTHROW(RealForm(skew, Symmetry::Antisymmetric));
  CHECK_THROWS_AS(RealForm(RealMatrix::Identity(2, 2), Symmetry::Antisymmetric), Error);
  CHECK_NOTHROW(RealForm(hilbert(3) + RealMatrix::Ones(3, 3) * 0.0, Symmetry::General));

  CHECK_THROWS_AS(ComplexStructureJ(RealMatrix::Identity(2, 2)), Error);
  CHECK_THROWS_AS(ComplexStructureJ(RealMatrix::Identity(3, 3)), Error);
  const auto j = ComplexStructureJ::canonical(4);
  CHECK((j.mat() * j.mat() + RealMatrix::Identity(4, 4)).norm() == 0.0);

  CHECK_THROWS_AS(HermitianForm(cdiag({1.0, -1.0})), Error);
  ComplexMatrix h = cdiag({2.0, 3.0});
  h(0, 1) = Complex(0.5, 0.5);
  h(1, 0) = Complex(0.5, -0.5);
  const HermitianForm form(h);
  ComplexVector x(2), y(2);
  x << Complex(0, 1), Complex(1, 0);
  y << Complex(1, 0), Complex(0, 0);
  // antilinear in the first slot, linear in the second
  CHECK(std::abs(form(Complex(0, 1) * x, y) - Complex(0, -1) * form(x, y)) < 1e-14);
  CHECK(std::abs(form(x, Complex(0, 1) * y) - Complex(0, 1) * form(x, y)) < 1e-14);
}

TEST_CASE("generalized_eig examples") {
  SUBCASE("identity") {
    const auto e = generalized_eig(ComplexMatrix(ComplexMatrix::Identity(3, 3)), ComplexMatrix(ComplexMatrix::Identity(3, 3)));
    CHECK((e.values - RealVector::Ones(3)).norm() < 1e-14);
    CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
  }
  SUBCASE("diagonal sorted ascending") {
    const auto e = generalized_eig(cdiag({2.0, 1.0}), ComplexMatrix::Identity(2, 2));
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(2.0));
  }
  SUBCASE("pencil det(K − λM) = 0") {
    RealMatrix m(2, 2), k(2, 2);
    m << 2, 1, 1, 2;
    k << 4, 1, 1, 4;
    const RealMatrix a = m.llt().solve(k);
    const auto e = generalized_eig(a, m);
    CHECK(e.values(0) == doctest::Approx(5.0 / 3.0).epsilon(1e-13));
    CHECK(e.values(1) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK((e.vectors.transpose() * m * e.vectors - RealMatrix::Identity(2, 2)).norm() < 1e-13);
  }
  SUBCASE("errors") {
    ComplexMatrix not_sa(2, 2);
    not_sa << 1, 2, 0, 1;
    try {
      generalized_eig(not_sa, ComplexMatrix::Identity(2, 2));
      FAIL("expected NotSelfAdjoint");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSelfAdjoint);
    }
    try {
      generalized_eig(ComplexMatrix::Identity(2, 2), cdiag({1.0, -2.0}));
      FAIL("expected SingularMetric");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularMetric);
    }
  }
}

TEST_CASE("generalized_eig residual property") {
  Rng rng(11);
  const Tolerances tol;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = biherm::testing::uniform_int(rng, 1, 24);
    const ComplexMatrix m = biherm::testing::random_hpd(n, rng);
    const ComplexMatrix k = biherm::testing::random_hpd(n, rng, -2.0, 3.0);
    const ComplexMatrix a = m.llt().solve(k);
    const auto e = generalized_eig(a, m);
    const ComplexMatrix av = a * e.vectors;
    const ComplexMatrix vl = e.vectors * e.values.cast<Complex>().asDiagonal();
    CHECK(norm_inf(av - vl) <= 10 * tol.tol_resid * norm_inf(a) * norm_inf(e.vectors));
    CHECK(norm_inf(e.vectors.adjoint() * m * e.vectors - ComplexMatrix::Identity(n, n)) <= 10 * tol.tol_resid);
    for (Index i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("sqrt_positive") {
  SUBCASE("examples") {
    const RealMatrix id = RealMatrix::Identity(2, 2);
    CHECK((sqrt_positive(id, id) - id).norm() < 1e-14);
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 4;
    d(1, 1) = 9;
    RealMatrix expect = RealMatrix::Zero(2, 2);
    expect(0, 0) = 2;
    expect(1, 1) = 3;
    CHECK((sqrt_positive(d, id) - expect).norm() < 1e-14);
    RealMatrix a(2, 2), root(2, 2);
    a << 5, 4, 4, 5;
    root << 2, 1, 1, 2;  // root² = a
    CHECK((sqrt_positive(a, id) - root).norm() < 1e-13);
  }
  SUBCASE("negative spectrum rejected") {
    RealMatrix d = RealMatrix::Identity(2, 2);
    d(1, 1) = -1.0;
    try {
      sqrt_positive(d, RealMatrix::Identity(2, 2));
      FAIL("expected NegativeSpectrum");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NegativeSpectrum);
    }
  }
  SUBCASE("200 random inputs square back, metric-self-adjoint") {
    Rng rng(5);
    const Tolerances tol;
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = biherm::testing::uniform_int(rng, 1, 32);
      const ComplexMatrix metric = biherm::testing::random_hpd(n, rng);
      const ComplexMatrix k = biherm::testing::random_hpd(n, rng, 0.1, 10.0);
      const ComplexMatrix a = metric.llt().solve(k);  // metric-self-adjoint, positive
      const ComplexMatrix r = sqrt_positive(a, metric);
      CHECK(norm_inf(r * r - a) <= 10 * tol.tol_resid * norm_inf(a));
      const ComplexMatrix mr = metric * r;
      CHECK(norm_inf(mr - mr.adjoint()) <= 10 * tol.tol_resid * norm_inf(mr));
    }
  }
}

TEST_CASE("orthonormalize") {
  const HermitianForm id = HermitianForm::identity(2);
  SUBCASE("standard basis unchanged") {
    const auto out = orthonormalize({ComplexVector::Unit(2, 0), ComplexVector::Unit(2, 1)}, id);
    REQUIRE(out.size() == 2);
    CHECK((out[0] - ComplexVector::Unit(2, 0)).norm() < 1e-15);
    CHECK((out[1] - ComplexVector::Unit(2, 1)).norm() < 1e-15);
  }
  SUBCASE("Gram–Schmidt in input order") {
    ComplexVector v(2);
    v << 1, 1;
    const auto out = orthonormalize({ComplexVector::Unit(2, 0), v}, id);
    REQUIRE(out.size() == 2);
    CHECK((out[1] - ComplexVector::Unit(2, 1)).norm() < 1e-15);
  }
  SUBCASE("h-norm scaling") {
    const auto out = orthonormalize({ComplexVector::Unit(2, 0)}, HermitianForm(cdiag({4.0, 1.0})));
    REQUIRE(out.size() == 1);
    CHECK(std::abs(out[0](0) - Complex(0.5, 0)) < 1e-15);
    CHECK(std::abs(out[0](1)) == 0.0);
  }
  SUBCASE("dependent vectors dropped") {
    ComplexVector v(2);
    v << 2, 0;
    CHECK(orthonormalize({ComplexVector::Unit(2, 0), v}, id).size() == 1);
  }
  SUBCASE("random: h-orthonormal and deterministic") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = biherm::testing::uniform_int(rng, 2, 16);
      const HermitianForm h(biherm::testing::random_hpd(n, rng));
      std::vector<ComplexVector> vs;
      for (Index i = 0; i < n; ++i) vs.push_back(biherm::testing::gaussian_vector(n, rng));
      const auto a = orthonormalize(vs, h);
      const auto b = orthonormalize(vs, h);
      REQUIRE(a.size() == static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        for (std::size_t j = 0; j < a.size(); ++j) {
          CHECK(std::abs(h(a[i], a[j]) - Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("krylov_rank") {
  ComplexVector ones2 = ComplexVector::Ones(2);
  CHECK(krylov_rank(cdiag({1, 2}), ones2) == 2);
  CHECK(krylov_rank(2.0 * ComplexMatrix::Identity(5, 5), ComplexVector::Ones(5)) == 1);
  CHECK(krylov_rank(cdiag({1, 1, 2}), ComplexVector::Ones(3)) == 2);
  try {
    krylov_rank(cdiag({1, 2}), ComplexVector::Zero(2));
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }

  SUBCASE("bounded by the eigenvalues x0 sees") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = biherm::testing::uniform_int(rng, 1, 16);
      RealVector d(n);
      ComplexVector x(n);
      for (Index i = 0; i < n; ++i) {
        d(i) = static_cast<double>(biherm::testing::uniform_int(rng, 1, 6));
        x(i) = biherm::testing::uniform(rng, 0.0, 1.0) < 0.3 ? Complex(0, 0) : Complex(1.0, 0.5);
      }
      if (x.norm() == 0.0) x(0) = 1.0;
      std::set<double> seen;
      for (Index i = 0; i < n; ++i)
        if (x(i) != Complex(0, 0)) seen.insert(d(i));
      const Index rank = krylov_rank(d.cast<Complex>().asDiagonal(), x);
      CHECK(rank <= static_cast<Index>(seen.size()));
      // distinct small integers are well separated, so the bound is attained
      CHECK(rank == static_cast<Index>(seen.size()));
    }
  }
}
