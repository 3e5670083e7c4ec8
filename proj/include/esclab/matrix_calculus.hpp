#pragma once

#include "esclab/types.hpp"

namespace esclab {

/// (X + X')/2, evaluated into a fresh matrix (self-assignment through a
/// transposed expression would alias).
Mat symmetric_part(const Mat& X);

/// Column-stacked lower triangle of a symmetric matrix. Errors when the
/// asymmetry exceeds `sym_tol`.
Vec vech(const Mat& X, double sym_tol = 1e-12);

/// Inverse of vech on symmetric matrices.
Mat unvech(const Vec& v);

/// D_n with vec(X) = D_n vech(X) for symmetric X.
Mat duplication_matrix(int n);

/// L_n with vech(X) = L_n vec(X).
Mat elimination_matrix(int n);

struct EigDecomposition {
  Mat vectors;  // orthogonal, columns are eigenvectors
  Vec values;
};

/// Symmetric eigendecomposition; errors if the input is not symmetric within
/// `sym_tol` or the smallest eigenvalue is <= min_eig.
EigDecomposition eig_spd(const Mat& gamma, double sym_tol = 1e-12,
                         double min_eig = 1e-12);

/// Sigma diag(ln lambda_i) Sigma' for SPD input.
Mat log_spd(const Mat& gamma);

/// Sigma diag(exp lambda_i) Sigma' for symmetric input; inverse of log_spd.
Mat exp_sym(const Mat& S);

/// Divided differences of ln at the eigenvalues:
///   C_ij = (ln l_i - ln l_j)/(l_i - l_j),  or 1/l_i on (near-)ties.
/// The tie branch triggers at |l_i - l_j| <= 1e-9 max(l_i, l_j) and uses the
/// larger eigenvalue.
Mat dalecki_krein_C(const EigDecomposition& eig);

/// d/dt vech(ln Gamma(t)) given Gamma and its symmetric time derivative:
///   vech(Sigma [C .* (Sigma' Gdot Sigma)] Sigma').
Vec log_coordinate_rate(const Mat& gamma, const Mat& gamma_dot);

}  // namespace esclab
