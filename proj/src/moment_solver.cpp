#include "starinv/moment_solver.hpp"

#include "starinv/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace starinv {

namespace {

constexpr double kGramRatio = 1e-6;

MomentVector scaled_unnormalized(double rho, double g, double omega, int n, int k,
                                 const Eigen::VectorXd& t, const Eigen::VectorXd& w,
                                 double& target) {
  MomentVector v{Eigen::VectorXd(t.size()), Eigen::VectorXd(t.size()), n, k, RowForm::Unnormalized};
  const double c = std::cos(rho * std::numbers::pi), s = std::sin(rho * std::numbers::pi);
  if (std::isinf(g)) {
    v.top.setZero();
    v.bottom = (rho * t).array().cos();
    target = -rho * s + omega * c;
  } else {
    v.top = rho * (rho * t).array().sin();
    v.bottom = g * (rho * t).array().cos();
    target = -rho * rho * c - (omega + g) * rho * s + omega * g * c;
  }
  const double norm =
      std::sqrt(w.dot(v.top.cwiseAbs2()) + w.dot(v.bottom.cwiseAbs2()));
  const double scale = std::sqrt(std::numbers::pi / 2) / norm;
  v.top *= scale;
  v.bottom *= scale;
  target *= scale;
  return v;
}

double positive_rho(double lambda, int n, int k) {
  if (!(lambda > 0))
    throw SpectralError(ErrorKind::InvalidInput,
                        "assumption (ii) violated: lambda_" + std::to_string(n) + "," +
                            std::to_string(k) + " = " + std::to_string(lambda) + " is not positive");
  return std::sqrt(lambda);
}

}  // namespace

Eigen::MatrixXd MomentSystem::weighted_rows() const {
  const Eigen::VectorXd sw = trapezoid_weights(n_points).cwiseSqrt();
  Eigen::MatrixXd a(Eigen::Index(vectors.size()), 2 * n_points);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    a.row(Eigen::Index(i)).head(n_points) = vectors[i].top.cwiseProduct(sw).transpose();
    a.row(Eigen::Index(i)).tail(n_points) = vectors[i].bottom.cwiseProduct(sw).transpose();
  }
  return a;
}

Eigen::VectorXd MomentSystem::target_vector() const {
  Eigen::VectorXd b(Eigen::Index(targets.size()));
  for (std::size_t i = 0; i < targets.size(); ++i) b[Eigen::Index(i)] = targets[i].value;
  return b;
}

MomentSystem build_moment_system(const SpectrumTable& lambdas, const GTable& g, double omega,
                                 int n_max, int n_points) {
  if (n_max < 0) throw SpectralError(ErrorKind::InvalidInput, "n_max must be >= 0");
  const Eigen::VectorXd t = grid_nodes(n_points);
  const Eigen::VectorXd w = trapezoid_weights(n_points);
  MomentSystem system;
  system.n_max = n_max;
  system.n_points = n_points;
  system.omega = omega;

  for (int n = 0; n <= n_max; ++n) {
    const double lambda = lambdas.lambda(n + 1, 1);
    const double rho = positive_rho(lambda, n + 1, 1);
    const double gv = g.at(n + 1, 1);
    double target;
    MomentVector v;
    if (std::isinf(gv)) {
      v = scaled_unnormalized(rho, gv, omega, n, 1, t, w, target);
    } else {
      v = MomentVector{(rho * t).array().sin(), (gv / rho) * (rho * t).array().cos(), n, 1,
                       RowForm::Standard};
      const double c = std::cos(rho * std::numbers::pi), s = std::sin(rho * std::numbers::pi);
      target = -rho * c - (omega + gv) * s + omega * gv / rho * c;
    }
    system.vectors.push_back(std::move(v));
    system.targets.push_back({target, n, 1});
  }

  system.vectors.push_back({Eigen::VectorXd::Zero(n_points), Eigen::VectorXd::Ones(n_points), 0, 2,
                            RowForm::Constant});
  system.targets.push_back({omega, 0, 2});

  for (int n = 1; n <= n_max; ++n) {
    const double lambda = lambdas.lambda(n, 2);
    const double rho = positive_rho(lambda, n, 2);
    const double gv = g.at(n, 2);
    double target;
    MomentVector v;
    if (std::isinf(gv) || gv == 0.0) {
      v = scaled_unnormalized(rho, gv, omega, n, 2, t, w, target);
    } else {
      v = MomentVector{(rho / gv) * (rho * t).array().sin(), (rho * t).array().cos(), n, 2,
                       RowForm::Standard};
      const double c = std::cos(rho * std::numbers::pi), s = std::sin(rho * std::numbers::pi);
      target = -rho * rho / gv * c - (omega + gv) * rho / gv * s + omega * c;
    }
    system.vectors.push_back(std::move(v));
    system.targets.push_back({target, n, 2});
  }
  return system;
}

MomentVector reference_basis(int n, int k, int n_points) {
  if (n < 0 || (k != 1 && k != 2))
    throw SpectralError(ErrorKind::InvalidInput, "reference_basis: bad label");
  const Eigen::VectorXd t = grid_nodes(n_points);
  if (k == 1)
    return {((n + 0.5) * t).array().sin(), Eigen::VectorXd::Zero(n_points), n, 1,
            RowForm::Standard};
  return {Eigen::VectorXd::Zero(n_points), (double(n) * t).array().cos(), n, 2,
          n == 0 ? RowForm::Constant : RowForm::Standard};
}

GramReport gram_condition_report(const MomentSystem& system) {
  const Eigen::MatrixXd a = system.weighted_rows();
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  GramReport report;
  report.min_eig = solver.eigenvalues().minCoeff();
  report.max_eig = solver.eigenvalues().maxCoeff();

  const Eigen::VectorXd w = trapezoid_weights(system.n_points);
  double total = 0.0;
  for (const auto& v : system.vectors) {
    const MomentVector ref = reference_basis(v.n, v.k, system.n_points);
    const double d = w.dot((v.top - ref.top).cwiseAbs2()) + w.dot((v.bottom - ref.bottom).cwiseAbs2());
    report.row_distances_sq.push_back(d);
    total += d;
  }
  report.l2_distance_to_reference = std::sqrt(total);

  if (!(report.min_eig >= kGramRatio * report.max_eig)) {
    std::ostringstream msg;
    msg << "moment vectors are not a basis: Gram eigenvalues min " << report.min_eig << ", max "
        << report.max_eig << "; repeated eigenvalues in the k = 1, 2 subsequences (assumption (i) "
        << "violated) make rows linearly dependent";
    throw SpectralError(ErrorKind::NotABasis, msg.str());
  }
  return report;
}

MomentSolution solve_moments(const MomentSystem& system) {
  MomentSolution out;
  out.gram = gram_condition_report(system);

  const Eigen::MatrixXd a = system.weighted_rows();
  const Eigen::VectorXd b = system.target_vector();
  // Minimum-norm solution through a QR factorization of A^T.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  const Eigen::Index rows = a.rows();
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(rows, rows).triangularView<Eigen::Upper>();
  const Eigen::VectorXd y = r.transpose().triangularView<Eigen::Lower>().solve(b);
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(a.cols());
  padded.head(rows) = y;
  const Eigen::VectorXd x = qr.householderQ() * padded;

  out.residual = (a * x - b).norm();
  if (out.residual > 1e-4 * b.norm() && out.residual > 1e-12)
    throw SpectralError(ErrorKind::IllConditioned,
                        "moment least-squares residual " + std::to_string(out.residual) +
                            " exceeds 1e-4 of the target norm");

  const Eigen::VectorXd sw = trapezoid_weights(system.n_points).cwiseSqrt();
  const int p = system.n_points;
  out.cauchy.n_func = GridFunction(x.head(p).cwiseQuotient(sw));
  out.cauchy.k_func = GridFunction(x.tail(p).cwiseQuotient(sw));
  out.cauchy.omega = system.omega;
  return out;
}

double inner_product(const CauchyData& f, const MomentVector& v) {
  const Eigen::VectorXd w = trapezoid_weights(f.n_func.n_points());
  return w.dot(f.n_func.values().cwiseProduct(v.top)) +
         w.dot(f.k_func.values().cwiseProduct(v.bottom));
}

}  // namespace starinv
