#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcrte/geometry.hpp"

namespace arcrte::csie {

enum class Variant { CutOff, ExLog };

Variant parse_variant(const std::string& s);
std::string to_string(Variant v);

/// h_mk = 1 / (pi (m - k)), zero diagonal.
Eigen::MatrixXd h_matrix(int N);

struct PowerIteration {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||H_N||_2 by power iteration on H^T H until the Rayleigh quotient moves by
/// less than `tol` relative.
PowerIteration spectral_norm(int N, double tol = 1e-12, int max_iter = 200000);

/// Discretized (1+eps) phi - (kappa/pi) pv int phi/(x-y) dy = Phi on the chord.
/// The regularized CSIE uses kappa = i; real kappa is the oracle companion.
class CsieSystem {
 public:
  static CsieSystem cutoff(int N, double eps, double c = 1.0);
  static CsieSystem exlog(int N, double eps, double c = 1.0);
  static CsieSystem cutoff_real(int N, double eps, double b, double c = 1.0);

  Variant variant() const { return variant_; }
  double epsilon() const { return eps_; }
  int size() const { return static_cast<int>(A_.rows()); }
  const geometry::Chord& chord() const { return chord_; }
  const Eigen::MatrixXcd& matrix() const { return A_; }
  bool hermitian() const { return hermitian_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

 private:
  CsieSystem(Variant v, double eps, geometry::Chord chord, Eigen::MatrixXcd A, bool hermitian);
  void factorize();

  Variant variant_;
  double eps_;
  geometry::Chord chord_;
  Eigen::MatrixXcd A_;
  bool hermitian_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// Assembled matrices without factorization.
Eigen::MatrixXcd cutoff_matrix(int N, double eps);
Eigen::MatrixXcd exlog_matrix(int N, double eps, double c = 1.0);

/// 2-norm condition number by full decomposition.
double cond2(const CsieSystem& sys);
double cond2(const Eigen::MatrixXcd& A, bool hermitian);
/// Ascending eigenvalues of a Hermitian system.
Eigen::VectorXd eigenvalues(const CsieSystem& sys);

enum class RhsMode { Midpoint, CellAverage };
RhsMode parse_rhs_mode(const std::string& s);

/// Phi_m as samples at x_m or averages over the cells I_m.
Eigen::VectorXcd sample_rhs(const geometry::Chord& chord, const std::function<cplx(double)>& Phi,
                            RhsMode mode = RhsMode::Midpoint);

/// Closed-form solution for real coupling b, evaluated with tanh-sinh
/// quadrature. Test oracle only.
cplx real_b_oracle(double b, double eps, double c, const std::function<double(double)>& Phi,
                   double x);

/// tau(x) = -(1/pi) arctan(b/(1+eps)) log((c-x)/(c+x)).
double real_b_tau(double b, double eps, double c, double x);

}  // namespace arcrte::csie
