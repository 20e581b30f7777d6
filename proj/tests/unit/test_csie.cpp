#include <gtest/gtest.h>

#include <random>

#include "arcrte/csie.hpp"

using namespace arcrte;
using namespace arcrte::csie;

TEST(HMatrix, EntriesAndAntisymmetry) {
  const auto H = h_matrix(2);
  EXPECT_NEAR(H(0, 1), -1.0 / kPi, 1e-16);
  EXPECT_NEAR(H(1, 0), 1.0 / kPi, 1e-16);
  EXPECT_NEAR(H(1, 0), 0.318310, 1e-6);
  const auto H7 = h_matrix(7);
  EXPECT_EQ((H7 + H7.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(H7.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(h_matrix(0), std::invalid_argument);
}

TEST(SpectralNorm, SmallCases) {
  EXPECT_EQ(spectral_norm(1).value, 0.0);
  EXPECT_NEAR(spectral_norm(2).value, 1.0 / kPi, 1e-12);
}

TEST(SpectralNorm, MontgomeryMatthewsBound) {
  for (int N : {10, 100, 1000}) {
    const auto r = spectral_norm(N);
    EXPECT_TRUE(r.converged) << N;
    EXPECT_LE(r.value, 1.0 - 1.0 / N) << N;
    // Power iteration agrees with a direct SVD.
    if (N <= 100) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(h_matrix(N));
      EXPECT_NEAR(r.value, svd.singularValues()(0), 1e-9);
    }
  }
}

TEST(Cutoff, OneByOneAndTwoByTwo) {
  const auto s1 = CsieSystem::cutoff(1, 0.0);
  EXPECT_EQ(s1.matrix()(0, 0), cplx(1.0, 0.0));
  EXPECT_DOUBLE_EQ(cond2(s1), 1.0);
  const auto s2 = CsieSystem::cutoff(2, 0.0);
  const auto ev = eigenvalues(s2);
  EXPECT_NEAR(ev(0), 1.0 - 1.0 / kPi, 1e-14);
  EXPECT_NEAR(ev(1), 1.0 + 1.0 / kPi, 1e-14);
  EXPECT_GE(ev(0), 0.5);
  EXPECT_LE(ev(1), 1.5);
}

TEST(Cutoff, HermitianExactly) {
  const auto s = CsieSystem::cutoff(40, 0.01);
  EXPECT_TRUE(s.hermitian());
  EXPECT_EQ((s.matrix() - s.matrix().adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Cutoff, EigenvalueBracketAndMonotoneCondition) {
  for (int N : {10, 100, 300}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.0, 0.01, 0.1}) {
      const auto s = CsieSystem::cutoff(N, eps);
      const auto ev = eigenvalues(s);
      EXPECT_GE(ev.minCoeff(), eps + 1.0 / N - 1e-10);
      EXPECT_LE(ev.maxCoeff(), 2.0 + eps - 1.0 / N + 1e-10);
      const double c = cond2(s);
      EXPECT_LE(c, prev);
      prev = c;
    }
  }
}

TEST(Cutoff, ConditionBounds) {
  for (int N : {1, 10, 100, 400}) {
    EXPECT_LE(cond2(CsieSystem::cutoff(N, 0.0)), 2.0 * N - 1.0 + 1e-9);
    EXPECT_LE(cond2(CsieSystem::cutoff(N, 0.01)), 201.0);
    EXPECT_LE(cond2(CsieSystem::cutoff(N, 0.1)), 21.0);
  }
}

TEST(Solve, ZeroUnitAndResidual) {
  const auto s = CsieSystem::cutoff(50, 0.0);
  EXPECT_EQ(s.solve(Eigen::VectorXcd(Eigen::VectorXcd::Zero(50))).norm(), 0.0);
  const Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(50, 0);
  EXPECT_LT((s.solve(Eigen::VectorXcd(s.matrix() * e1)) - e1).norm(), 1e-10);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd phi(50);
  for (int i = 0; i < 50; ++i) phi(i) = cplx(nd(rng), nd(rng));
  const Eigen::VectorXcd x = s.solve(phi);
  EXPECT_LE((s.matrix() * x - phi).norm(), 1e-10 * phi.norm());
  EXPECT_THROW(s.solve(Eigen::VectorXcd(Eigen::VectorXcd::Zero(49))), std::invalid_argument);
  // Multiple right-hand sides share the factorization.
  Eigen::MatrixXcd R(50, 2);
  R.col(0) = phi;
  R.col(1) = -2.0 * phi;
  const Eigen::MatrixXcd X = s.solve(R);
  EXPECT_LT((X.col(1) + 2.0 * x).norm(), 1e-12);
}

TEST(Solve, LogImageOfConstantConverges) {
  // (I - i H_c) 1 = 1 - (i/pi) log((c+x)/(c-x)); interior error falls with N.
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {100, 200, 400, 800}) {
    const auto s = CsieSystem::cutoff(N, 0.0);
    const auto rhs = sample_rhs(s.chord(), [](double x) {
      return cplx(1.0, -std::log((1 + x) / (1 - x)) / kPi);
    });
    const Eigen::VectorXcd phi = s.solve(rhs);
    double dev = 0.0;
    for (int n = 0; n < N; ++n)
      if (std::abs(s.chord().node(n)) < 0.5) dev = std::max(dev, std::abs(phi(n) - 1.0));
    EXPECT_LT(dev, prev) << N;
    prev = dev;
  }
  EXPECT_LT(prev, 0.1);
}

TEST(Solve, CellAverageRhsOfConstant) {
  const geometry::Chord ch(1.0, 10);
  const auto mid = sample_rhs(ch, [](double) { return cplx(2.0, -1.0); });
  const auto avg = sample_rhs(ch, [](double) { return cplx(2.0, -1.0); }, RhsMode::CellAverage);
  EXPECT_LT((mid - avg).cwiseAbs().maxCoeff(), 1e-14);
  const auto lin = sample_rhs(ch, [](double x) { return cplx(x * x, 0.0); }, RhsMode::CellAverage);
  const double h = ch.dx();
  EXPECT_NEAR(lin(3).real(), ch.node(3) * ch.node(3) + h * h / 12, 1e-14);
  EXPECT_EQ(parse_rhs_mode("cell-average"), RhsMode::CellAverage);
  EXPECT_THROW(parse_rhs_mode("trapezoid"), std::invalid_argument);
}

TEST(ExLog, StructureAndConditioning) {
  EXPECT_THROW(CsieSystem::exlog(2, 0.1), std::invalid_argument);
  const int N = 101;
  const auto A = exlog_matrix(N, 0.0);
  // Middle node: the log term vanishes and the harmonic sum is symmetric.
  EXPECT_NEAR(A(50, 50).imag(), 0.0, 1e-14);
  EXPECT_NEAR(A(50, 50).real(), 1.0, 1e-14);
  EXPECT_NEAR(A(50, 51).imag(), 1.0 / kPi + 0.5 / kPi, 1e-14);
  EXPECT_NEAR(A(0, 2).imag(), 0.5 / kPi - 0.5 / kPi, 1e-14);
  const auto ex = CsieSystem::exlog(100, 0.1);
  EXPECT_FALSE(ex.hermitian());
  const double ce = cond2(ex), cc = cond2(CsieSystem::cutoff(100, 0.1));
  EXPECT_LT(ce, 10.0 * cc);
  EXPECT_GE(cond2(exlog_matrix(200, 0.0), false), cond2(CsieSystem::cutoff(200, 0.0)));
}

TEST(ExLog, SolveResidual) {
  const auto s = CsieSystem::exlog(80, 0.01);
  Eigen::VectorXcd r = Eigen::VectorXcd::LinSpaced(80, 0.0, 1.0);
  const Eigen::VectorXcd x = s.solve(r);
  EXPECT_LT((s.matrix() * x - r).norm(), 1e-9 * r.norm() * cond2(s));
}

TEST(RealB, DecoupledAndTau) {
  auto one = [](double) { return 1.0; };
  EXPECT_NEAR(real_b_oracle(0.0, 0.1, 1.0, one, 0.3).real(), 1.0 / 1.1, 1e-15);
  EXPECT_EQ(real_b_tau(0.7, 0.2, 1.0, 0.0), 0.0);
  EXPECT_THROW(real_b_oracle(0.5, 0.1, 1.0, one, 1.0), std::invalid_argument);
}

TEST(RealB, OracleMatchesDiscreteSolve) {
  const double b = 0.5, eps = 0.1;
  const int N = 2000;
  const auto s = CsieSystem::cutoff_real(N, eps, b);
  const Eigen::VectorXcd phi = s.solve(Eigen::VectorXcd(Eigen::VectorXcd::Ones(N)));
  auto one = [](double) { return 1.0; };
  double dev = 0.0;
  for (int n = 0; n < N; n += 25) {
    const double x = s.chord().node(n);
    if (std::abs(x) > 0.8) continue;
    dev = std::max(dev, std::abs(phi(n) - real_b_oracle(b, eps, 1.0, one, x)));
  }
  EXPECT_LT(dev, 1e-2);
}

TEST(Variant, Parse) {
  EXPECT_EQ(parse_variant("cutoff"), Variant::CutOff);
  EXPECT_EQ(parse_variant("ex-log"), Variant::ExLog);
  EXPECT_EQ(to_string(Variant::ExLog), "exlog");
  EXPECT_THROW(parse_variant("lu"), std::invalid_argument);
}
