#include "twistclass/spectral.hpp"

#include <Eigen/Dense>

namespace twistclass {

std::vector<std::pair<double, u32>> hermitian_eigen_clusters(
    const std::vector<std::complex<double>>& a, u32 n, double tol) {
  require(a.size() == size_t(n) * n, "eigen clusters: bad matrix size");
  Eigen::MatrixXcd M(n, n);
  for (u32 i = 0; i < n; ++i)
    for (u32 j = 0; j < n; ++j) M(i, j) = a[size_t(i) * n + j];
  double skew = (M - M.adjoint()).cwiseAbs().maxCoeff();
  require(skew < 1e-8 * (1.0 + M.cwiseAbs().maxCoeff()),
          "eigen clusters: matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, "eigen clusters: solver failed");
  Eigen::VectorXd ev = es.eigenvalues();  // ascending

  double spread = ev(n - 1) - ev(0);
  double gap = tol * std::max(spread, 1.0);
  std::vector<std::pair<double, u32>> out;
  double sum = ev(0);
  u32 cnt = 1;
  for (u32 i = 1; i < n; ++i) {
    if (ev(i) - ev(i - 1) > gap) {
      out.emplace_back(sum / cnt, cnt);
      sum = 0.0;
      cnt = 0;
    }
    sum += ev(i);
    ++cnt;
  }
  out.emplace_back(sum / cnt, cnt);
  return out;
}

}  // namespace twistclass
