#pragma once
#include <complex>
#include <vector>

#include "twistclass/common.hpp"

namespace twistclass {

// Eigenvalue clusters of a hermitian n x n matrix (row-major), ascending:
// (cluster mean, multiplicity).  Adjacent eigenvalues closer than
// tol * max(spread, 1) fall into one cluster.
std::vector<std::pair<double, u32>> hermitian_eigen_clusters(
    const std::vector<std::complex<double>>& a, u32 n, double tol);

}  // namespace twistclass
