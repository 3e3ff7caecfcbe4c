#include <doctest.h>

#include <random>

#include "multisurf/mlcp.hpp"

using namespace multisurf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MlcpProblemd box1(double M, double q) {
  return {MatrixXd::Constant(1, 1, M), VectorXd::Constant(1, q), VectorXd::Constant(1, -1), VectorXd::Constant(1, 1)};
}

MlcpProblemd random_spd_box(std::mt19937& rng, int m) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> uni(-1, 1);
  MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = n01(rng);
  MlcpProblemd p;
  p.M = A * A.transpose() + 0.1 * MatrixXd::Identity(m, m);
  p.q.resize(m);
  p.l.resize(m);
  p.u.resize(m);
  for (int i = 0; i < m; ++i) {
    p.q(i) = 3 * n01(rng);
    const double a = uni(rng), b = uni(rng);
    p.l(i) = std::min(a, b) - 0.05;
    p.u(i) = std::max(a, b) + 0.05;
  }
  return p;
}

// Independent check of the MLCP conditions, written out coordinatewise.
bool satisfies_definition(const MlcpProblemd& p, const VectorXd& z, double tol) {
  const VectorXd r = p.M * z + p.q;
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (z(i) < p.l(i) - tol || z(i) > p.u(i) + tol) return false;
    const bool at_l = z(i) <= p.l(i) + tol, at_u = z(i) >= p.u(i) - tol;
    if (!at_l && !at_u && std::abs(r(i)) > tol) return false;
    if (at_l && !at_u && r(i) < -tol) return false;
    if (at_u && !at_l && r(i) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("from_sign_step maps W, b onto the box problem") {
  SignStepProblemd sp{MatrixXd::Constant(1, 1, 0.2), VectorXd::Constant(1, 0.1)};
  const auto p = from_sign_step(sp);
  CHECK(p.M(0, 0) == 0.2);
  CHECK(p.q(0) == -0.1);
  CHECK(p.l(0) == -1);
  CHECK(p.u(0) == 1);

  const auto empty = from_sign_step(SignStepProblemd{MatrixXd(0, 0), VectorXd(0)});
  CHECK(empty.dim() == 0);
  const auto s = solve(empty);
  CHECK(s.status == MlcpStatus::solved);
  CHECK(s.z.size() == 0);

  CHECK_THROWS_AS(from_sign_step(SignStepProblemd{MatrixXd::Zero(2, 1), VectorXd::Zero(2)}), std::invalid_argument);
}

TEST_CASE("validate rejects malformed problems") {
  auto p = box1(1, 0);
  p.l(0) = 2;
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = box1(1, 0);
  p.l(0) = std::numeric_limits<double>::infinity();
  p.u(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
  p = box1(1, 0);
  p.q.resize(2);
  CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("scalar instances, every solver") {
  for (auto kind : {SolverKind::enumerative, SolverKind::psor, SolverKind::pivoting, SolverKind::automatic}) {
    CAPTURE(static_cast<int>(kind));
    auto s = solve(box1(1, -0.5), kind);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(s.z(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.w(0)) <= 1e-12);
    CHECK(std::abs(s.v(0)) <= 1e-12);

    s = solve(box1(1, -2), kind);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(s.z(0) == 1.0);
    CHECK(std::abs(s.w(0)) <= 1e-12);
    CHECK(s.v(0) == doctest::Approx(1.0));

    s = solve(box1(0.2, -0.01), kind);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(std::abs(s.z(0) - 0.05) <= 1e-12);
    CHECK(std::abs(s.w(0)) + std::abs(s.v(0)) <= 1e-12);
  }
}

TEST_CASE("wholly degenerate row returns the canonical zero") {
  for (auto kind : {SolverKind::enumerative, SolverKind::pivoting, SolverKind::automatic}) {
    const auto s = solve(box1(0, 0), kind);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(s.z(0) == 0.0);
    CHECK(s.w(0) == 0.0);
    CHECK(s.v(0) == 0.0);
  }
}

TEST_CASE("PSOR on a diagonal matrix converges in a few sweeps") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-4.99, 4.99);
  MlcpOptions opt;
  opt.psor_tol = 1e-12;
  for (int rep = 0; rep < 20; ++rep) {
    MlcpProblemd p{5 * MatrixXd::Identity(2, 2), VectorXd(2), -VectorXd::Ones(2), VectorXd::Ones(2)};
    p.q << uni(rng), uni(rng);
    const auto s = solve_psor(p, opt);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(s.iterations <= 50);
    CHECK((s.z + p.q / 5).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("PSOR preconditions and iteration cap") {
  CHECK_THROWS_AS(solve_psor(box1(0, 1)), std::invalid_argument);
  MlcpOptions bad;
  bad.omega = 2.0;
  CHECK_THROWS_AS(solve_psor(box1(1, 1), bad), std::invalid_argument);

  MlcpProblemd p{MatrixXd(2, 2), VectorXd(2), -VectorXd::Ones(2), VectorXd::Ones(2)};
  p.M << 1, 0.9, 0.9, 1;
  p.q << 0.3, -0.2;
  MlcpOptions one;
  one.max_iter = 1;
  CHECK(solve_psor(p, one).status == MlcpStatus::max_iterations);
}

TEST_CASE("certify") {
  const auto p = box1(1, -0.5);
  auto s = solve_enumerative(p);
  CHECK(certify(p, s) <= 1e-14);

  // interior coordinate perturbed by 1e-3: the equation residual is |M| 1e-3
  MlcpProblemd p2{MatrixXd(2, 2), VectorXd(2), -VectorXd::Ones(2), VectorXd::Ones(2)};
  p2.M << 2, 0.5, 0.5, 3;
  p2.q << -0.3, 0.2;
  auto s2 = solve_enumerative(p2);
  REQUIRE(s2.status == MlcpStatus::solved);
  s2.z(0) += 1e-3;
  const double expected = 1e-3 * p2.M.col(0).cwiseAbs().maxCoeff();
  CHECK(certify(p2, s2) == doctest::Approx(expected).epsilon(1e-9));

  // w negated on a lower-active coordinate
  const auto p3 = box1(1, 2);
  auto s3 = solve_enumerative(p3);
  REQUIRE(s3.z(0) == -1.0);
  REQUIRE(s3.w(0) == doctest::Approx(1.0));
  const double wmax = s3.w.lpNorm<Eigen::Infinity>();
  s3.w = -s3.w;
  const auto rep = certify_report(p3, s3.z, s3.w, s3.v);
  CHECK(rep.sign == doctest::Approx(wmax));
  CHECK(rep.total() == doctest::Approx(2 * wmax));  // the equation also breaks by 2|w|
}

TEST_CASE("enumerative cap") {
  MlcpOptions opt;
  opt.enumerative_cap = 2;
  MlcpProblemd p{MatrixXd::Identity(3, 3), VectorXd::Zero(3), -VectorXd::Ones(3), VectorXd::Ones(3)};
  CHECK_THROWS_AS(solve_enumerative(p, opt), std::invalid_argument);
}

TEST_CASE("unbounded sides: plain LCP and infeasible LCP") {
  const double inf = std::numeric_limits<double>::infinity();
  MlcpProblemd p{MatrixXd(2, 2), VectorXd(2), VectorXd::Zero(2), VectorXd::Constant(2, inf)};
  p.M << 2, 1, 1, 2;
  p.q << -1, 1;
  for (auto kind : {SolverKind::enumerative, SolverKind::pivoting, SolverKind::psor}) {
    const auto s = solve(p, kind);
    REQUIRE(s.status == MlcpStatus::solved);
    CHECK(s.z(0) == doctest::Approx(0.5));
    CHECK(std::abs(s.z(1)) <= 1e-12);
    CHECK(s.w(1) == doctest::Approx(1.5));
  }

  MlcpProblemd bad{MatrixXd::Constant(1, 1, -1), VectorXd::Constant(1, -1), VectorXd::Zero(1),
                   VectorXd::Constant(1, inf)};
  CHECK(solve_pivoting(bad).status == MlcpStatus::infeasible);
  CHECK(solve_enumerative(bad).status == MlcpStatus::infeasible);
  CHECK(solve(bad).status != MlcpStatus::solved);

  // free coordinate: a plain linear equation
  MlcpProblemd fr{MatrixXd::Constant(1, 1, 4), VectorXd::Constant(1, -2), VectorXd::Constant(1, -inf),
                  VectorXd::Constant(1, inf)};
  CHECK(solve_pivoting(fr).z(0) == doctest::Approx(0.5));
  CHECK(solve_enumerative(fr).z(0) == doctest::Approx(0.5));
}

TEST_CASE("oracle equivalence on 200 random SPD box problems") {
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 6);
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto p = random_spd_box(rng, dim(rng));
    CAPTURE(dump(p));
    const auto ref = solve_enumerative(p);
    REQUIRE(ref.status == MlcpStatus::solved);
    CHECK(satisfies_definition(p, ref.z, 1e-9));
    const auto piv = solve_pivoting(p);
    const auto ps = solve_psor(p);
    REQUIRE(piv.status == MlcpStatus::solved);
    REQUIRE(ps.status == MlcpStatus::solved);
    CHECK(certify(p, ref) <= 1e-9);
    CHECK(certify(p, piv) <= 1e-9);
    CHECK(certify(p, ps) <= 1e-9);
    CHECK((piv.z - ref.z).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((ps.z - ref.z).lpNorm<Eigen::Infinity>() <= 1e-8);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("encoding soundness of the sign step") {
  std::mt19937 rng(99);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> dim(1, 5);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = dim(rng);
    MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = n01(rng);
    SignStepProblemd sp{0.3 * (A * A.transpose()) + 0.05 * MatrixXd::Identity(m, m), VectorXd(m)};
    for (int i = 0; i < m; ++i) sp.b(i) = n01(rng);
    const auto p = from_sign_step(sp);
    const auto s = solve(p);
    REQUIRE(s.status == MlcpStatus::solved);
    const VectorXd y = sp.b - sp.W * s.z;
    CHECK((y - (s.v - s.w)).lpNorm<Eigen::Infinity>() <= 1e-9);
    for (int i = 0; i < m; ++i) {
      CHECK(std::abs(s.z(i)) <= 1.0);
      if (std::abs(s.z(i)) < 1 - 1e-9) CHECK(std::abs(y(i)) <= 1e-9);
      if (s.z(i) == 1.0) CHECK(y(i) >= -1e-9);
      if (s.z(i) == -1.0) CHECK(y(i) <= 1e-9);
    }
  }
}

TEST_CASE("scaling covariance") {
  std::mt19937 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_spd_box(rng, 1 + rep % 5);
    const auto s = solve(p);
    REQUIRE(s.status == MlcpStatus::solved);
    for (double alpha : {1e-3, 0.5, 7.0, 1e3}) {
      MlcpProblemd q = p;
      q.M *= alpha;
      q.q *= alpha;
      const auto t = solve(q);
      REQUIRE(t.status == MlcpStatus::solved);
      CHECK((t.z - s.z).lpNorm<Eigen::Infinity>() <= 1e-8);
      CHECK((t.w - alpha * s.w).lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, alpha));
      CHECK((t.v - alpha * s.v).lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, alpha));
    }
  }
}

TEST_CASE("long double instantiation") {
  MlcpProblem<long double> p{DenseMatrix<long double>::Constant(1, 1, 0.2L),
                             DenseVector<long double>::Constant(1, -0.01L),
                             DenseVector<long double>::Constant(1, -1), DenseVector<long double>::Constant(1, 1)};
  const auto s = solve(p);
  REQUIRE(s.status == MlcpStatus::solved);
  CHECK(std::abs(s.z(0) - 0.05L) < 1e-15L);
}

TEST_CASE("dump lists the data") {
  const auto text = dump(box1(0.2, -0.01));
  CHECK(text.find("M 0.20000000000000001") != std::string::npos);
  CHECK(text.find("q -0.01") != std::string::npos);
  CHECK(text.find("l -1") != std::string::npos);
  CHECK(text.find("u 1") != std::string::npos);
}
