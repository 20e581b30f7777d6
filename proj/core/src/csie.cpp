#include "arcrte/csie.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcrte::csie {

Variant parse_variant(const std::string& s) {
  if (s == "cutoff" || s == "cut-off") return Variant::CutOff;
  if (s == "exlog" || s == "ex-log") return Variant::ExLog;
  throw std::invalid_argument("unknown CSIE variant '" + s + "'");
}

std::string to_string(Variant v) { return v == Variant::CutOff ? "cutoff" : "exlog"; }

RhsMode parse_rhs_mode(const std::string& s) {
  if (s == "midpoint") return RhsMode::Midpoint;
  if (s == "cell-average" || s == "average") return RhsMode::CellAverage;
  throw std::invalid_argument("unknown right-hand-side mode '" + s + "'");
}

Eigen::MatrixXd h_matrix(int N) {
  if (N < 1) throw std::invalid_argument("h_matrix: N must be positive");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < N; ++k)
      if (m != k) H(m, k) = 1.0 / (kPi * (m - k));
  return H;
}

PowerIteration spectral_norm(int N, double tol, int max_iter) {
  PowerIteration r;
  if (N < 2) {
    r.converged = true;
    return r;
  }
  const Eigen::MatrixXd H = h_matrix(N);
  // Start vector with components along every singular direction.
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 0.37 * i);
  v.normalize();
  double lambda = 0.0;
  Eigen::VectorXd w(N), u(N);
  for (int it = 1; it <= max_iter; ++it) {
    u.noalias() = H * v;
    w.noalias() = H.transpose() * u;
    const double next = v.dot(w);
    r.iterations = it;
    const double nw = w.norm();
    if (nw == 0.0) break;
    v = w / nw;
    if (it > 1 && std::abs(next - lambda) <= tol * next) {
      lambda = next;
      r.converged = true;
      break;
    }
    lambda = next;
  }
  r.value = std::sqrt(std::max(lambda, 0.0));
  return r;
}

CsieSystem::CsieSystem(Variant v, double eps, geometry::Chord chord, Eigen::MatrixXcd A,
                       bool hermitian)
    : variant_(v), eps_(eps), chord_(chord), A_(std::move(A)), hermitian_(hermitian) {
  factorize();
}

Eigen::MatrixXcd cutoff_matrix(int N, double eps) {
  if (N < 1) throw std::invalid_argument("cutoff: N must be positive");
  if (eps < 0) throw std::invalid_argument("cutoff: epsilon must be nonnegative");
  Eigen::MatrixXcd A(N, N);
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < N; ++k)
      A(m, k) = (m == k) ? cplx(1.0 + eps, 0.0) : cplx(0.0, -1.0 / (kPi * (m - k)));
  return A;
}

CsieSystem CsieSystem::cutoff(int N, double eps, double c) {
  return CsieSystem(Variant::CutOff, eps, geometry::Chord(c, N), cutoff_matrix(N, eps), true);
}

CsieSystem CsieSystem::cutoff_real(int N, double eps, double b, double c) {
  if (N < 1) throw std::invalid_argument("cutoff_real: N must be positive");
  Eigen::MatrixXcd A(N, N);
  for (int m = 0; m < N; ++m)
    for (int k = 0; k < N; ++k)
      A(m, k) = (m == k) ? cplx(1.0 + eps, 0.0) : cplx(-b / (kPi * (m - k)), 0.0);
  return CsieSystem(Variant::CutOff, eps, geometry::Chord(c, N), std::move(A), b == 0.0);
}

Eigen::MatrixXcd exlog_matrix(int N, double eps, double c) {
  if (N < 3) throw std::invalid_argument("exlog: N must be at least 3");
  if (eps < 0) throw std::invalid_argument("exlog: epsilon must be nonnegative");
  const geometry::Chord chord(c, N);
  const cplx ip(0.0, 1.0 / kPi);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  for (int m = 0; m < N; ++m) {
    const double x = chord.node(m);
    double harmonic = 0.0;
    for (int k = 0; k < N; ++k) {
      if (k == m) continue;
      harmonic += 1.0 / (m - k);
      A(m, k) = -ip / double(m - k);
    }
    A(m, m) = 1.0 + eps - ip * std::log((c + x) / (c - x)) + ip * harmonic;
    if (m == 0) {
      A(0, 0) += ip * -1.5;
      A(0, 1) += ip * 2.0;
      A(0, 2) += ip * -0.5;
    } else if (m == N - 1) {
      A(m, m - 2) += ip * 0.5;
      A(m, m - 1) += ip * -2.0;
      A(m, m) += ip * 1.5;
    } else {
      A(m, m + 1) += ip * 0.5;
      A(m, m - 1) += ip * -0.5;
    }
  }
  return A;
}

CsieSystem CsieSystem::exlog(int N, double eps, double c) {
  return CsieSystem(Variant::ExLog, eps, geometry::Chord(c, N), exlog_matrix(N, eps, c), false);
}

void CsieSystem::factorize() {
  if (hermitian_) {
    llt_.compute(A_);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("csie", "Cholesky factorization failed on a Hermitian system");
    return;
  }
  lu_.compute(A_);
  const auto& LU = lu_.matrixLU();
  double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double p = std::abs(LU(i, i));
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  const double rc = lu_.rcond();
  if (!(pmin > 0.0) || !(rc > std::numeric_limits<double>::epsilon()))
    throw NumericalError("csie", "factorization singular to working precision", {pmin, pmax, rc});
}

Eigen::VectorXcd CsieSystem::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != size()) throw std::invalid_argument("csie solve: dimension mismatch");
  return hermitian_ ? Eigen::VectorXcd(llt_.solve(rhs)) : Eigen::VectorXcd(lu_.solve(rhs));
}

Eigen::MatrixXcd CsieSystem::solve(const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != size()) throw std::invalid_argument("csie solve: dimension mismatch");
  return hermitian_ ? Eigen::MatrixXcd(llt_.solve(rhs)) : Eigen::MatrixXcd(lu_.solve(rhs));
}

Eigen::VectorXd eigenvalues(const CsieSystem& sys) {
  if (!sys.hermitian()) throw std::invalid_argument("eigenvalues: system is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double cond2(const CsieSystem& sys) { return cond2(sys.matrix(), sys.hermitian()); }

double cond2(const Eigen::MatrixXcd& A, bool hermitian) {
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd a = es.eigenvalues().cwiseAbs();
    return a.maxCoeff() / a.minCoeff();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

Eigen::VectorXcd sample_rhs(const geometry::Chord& chord, const std::function<cplx(double)>& Phi,
                            RhsMode mode) {
  Eigen::VectorXcd r(chord.N);
  const double h = chord.dx();
  for (int n = 0; n < chord.N; ++n) {
    const double x = chord.node(n);
    if (mode == RhsMode::Midpoint) {
      r(n) = Phi(x);
    } else {
      using G = boost::math::quadrature::gauss<double, 7>;
      const double re = G::integrate([&](double y) { return Phi(y).real(); }, x - h / 2, x + h / 2);
      const double im = G::integrate([&](double y) { return Phi(y).imag(); }, x - h / 2, x + h / 2);
      r(n) = cplx(re, im) / h;
    }
  }
  return r;
}

double real_b_tau(double b, double eps, double c, double x) {
  return -std::atan(b / (1.0 + eps)) / kPi * std::log((c - x) / (c + x));
}

cplx real_b_oracle(double b, double eps, double c, const std::function<double(double)>& Phi,
                   double x) {
  const double D = (1.0 + eps) * (1.0 + eps) + b * b;
  if (D == 0.0) throw std::invalid_argument("real_b_oracle: (1+eps)^2 + b^2 vanishes");
  if (!(std::abs(x) < c)) throw std::invalid_argument("real_b_oracle: x outside chord");
  if (b == 0.0) return Phi(x) / (1.0 + eps);
  const double kappa = std::atan(b / (1.0 + eps)) / kPi;
  // e^{-tau(y)} Phi(y), algebraic at both ends.
  auto g = [&](double y) { return std::pow((c - y) / (c + y), kappa) * Phi(y); };
  const double gx = g(x);
  const double fd = 1e-6 * c;
  const double dgx = (g(x + fd) - g(x - fd)) / (2.0 * fd);
  auto reg = [&](double y) {
    const double d = y - x;
    if (std::abs(d) < 1e-7 * c) return dgx;
    return (g(y) - gx) / d;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  const double left = ts.integrate(reg, -c, x, 1e-10, &err, &l1);
  double err2 = 0.0;
  const double right = ts.integrate(reg, x, c, 1e-10, &err2, &l1);
  if (!std::isfinite(left + right) || err + err2 > 1e-6)
    throw NumericalError("real_b_oracle", "quadrature did not converge", {err, err2});
  const double pv = left + right + gx * std::log((c - x) / (c + x));
  const double phi = (1.0 + eps) * Phi(x) / D -
                     b / kPi * std::exp(real_b_tau(b, eps, c, x)) / D * pv;
  return {phi, 0.0};
}

}  // namespace arcrte::csie
