#include "esclab/matrix_calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace esclab {

Mat symmetric_part(const Mat& X) {
  if (X.rows() != X.cols()) {
    throw std::invalid_argument("symmetric_part: matrix not square");
  }
  return 0.5 * (X + X.transpose());
}

Vec vech(const Mat& X, double sym_tol) {
  if (X.rows() != X.cols()) throw std::invalid_argument("vech: matrix not square");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) {
    throw std::invalid_argument("vech: matrix not symmetric within tolerance");
  }
  const int n = static_cast<int>(X.rows());
  Vec v(n * (n + 1) / 2);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) v[idx++] = X(i, j);
  }
  return v;
}

Mat unvech(const Vec& v) {
  // m = n(n+1)/2  =>  n = (sqrt(8m+1)-1)/2
  const int m = static_cast<int>(v.size());
  const int n = static_cast<int>(std::lround((std::sqrt(8.0 * m + 1.0) - 1.0) / 2.0));
  if (n * (n + 1) / 2 != m) {
    throw std::invalid_argument("unvech: length is not a triangular number");
  }
  Mat X(n, n);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      X(i, j) = v[idx];
      X(j, i) = v[idx];
      ++idx;
    }
  }
  return X;
}

Mat duplication_matrix(int n) {
  const int m = n * (n + 1) / 2;
  Mat D = Mat::Zero(n * n, m);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      D(j * n + i, col) = 1.0;
      D(i * n + j, col) = 1.0;
      ++col;
    }
  }
  return D;
}

Mat elimination_matrix(int n) {
  const int m = n * (n + 1) / 2;
  Mat L = Mat::Zero(m, n * n);
  int row = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) L(row++, j * n + i) = 1.0;
  }
  return L;
}

EigDecomposition eig_spd(const Mat& gamma, double sym_tol, double min_eig) {
  if (gamma.rows() != gamma.cols()) {
    throw std::invalid_argument("eig_spd: matrix not square");
  }
  if (!gamma.allFinite()) {
    throw std::invalid_argument("eig_spd: matrix has non-finite entries");
  }
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale) {
    throw std::invalid_argument("eig_spd: matrix not symmetric within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(gamma);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_spd: eigendecomposition failed");
  }
  if (solver.eigenvalues().minCoeff() <= min_eig) {
    throw std::invalid_argument("eig_spd: matrix is singular or not positive definite");
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

Mat log_spd(const Mat& gamma) {
  const EigDecomposition eig = eig_spd(gamma);
  // The result is analytically symmetric; make it exactly so.
  return symmetric_part(eig.vectors *
                        eig.values.array().log().matrix().asDiagonal() *
                        eig.vectors.transpose());
}

Mat exp_sym(const Mat& S) {
  if (!S.allFinite()) {
    throw std::invalid_argument("exp_sym: matrix has non-finite entries");
  }
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("exp_sym: matrix not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(S);
  return symmetric_part(solver.eigenvectors() *
                        solver.eigenvalues().array().exp().matrix().asDiagonal() *
                        solver.eigenvectors().transpose());
}

Mat dalecki_krein_C(const EigDecomposition& eig) {
  const int n = static_cast<int>(eig.values.size());
  Mat C(n, n);
  for (int i = 0; i < n; ++i) {
    const double li = eig.values[i];
    if (li <= 0.0) {
      throw std::invalid_argument("dalecki_krein_C: nonpositive eigenvalue");
    }
    C(i, i) = 1.0 / li;
    for (int j = 0; j < i; ++j) {
      const double lj = eig.values[j];
      const double hi = std::max(li, lj);
      double c;
      if (std::abs(li - lj) <= 1e-9 * hi) {
        c = 1.0 / hi;  // limit branch of the divided difference
      } else {
        c = (std::log(li) - std::log(lj)) / (li - lj);
      }
      C(i, j) = c;
      C(j, i) = c;
    }
  }
  return C;
}

Vec log_coordinate_rate(const Mat& gamma, const Mat& gamma_dot) {
  if ((gamma_dot - gamma_dot.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("log_coordinate_rate: rate matrix not symmetric");
  }
  const EigDecomposition eig = eig_spd(gamma);
  const Mat C = dalecki_krein_C(eig);
  const Mat inner = eig.vectors.transpose() * gamma_dot * eig.vectors;
  Mat rate = eig.vectors * C.cwiseProduct(inner) * eig.vectors.transpose();
  rate = symmetric_part(rate);  // scrub roundoff asymmetry
  return vech(rate, 1e-9);
}

}  // namespace esclab
