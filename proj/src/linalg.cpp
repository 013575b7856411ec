/*
 * Copyright 2026 The pkrls Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pkrls/linalg.hpp"

#include <cmath>
#include <sstream>

#include "pkrls/error.hpp"

namespace pkrls {

namespace {

void require_square(const Matrix& A, const char* what) {
    if (A.rows() != A.cols()) throw ContractError(std::string(what) + ": matrix must be square");
}

void require_symmetric(const Matrix& A, const char* what) {
    require_square(A, what);
    const double asym = max_asymmetry(A);
    if (asym > 1e-10 * A.norm()) {
        std::ostringstream os;
        os << what << ": matrix is not symmetric (max asymmetry " << asym << ")";
        throw ContractError(os.str());
    }
}

}  // namespace

void mirror_lower(Matrix& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < A.rows(); ++i) A(j, i) = A(i, j);
    }
}

void mirror_upper(Matrix& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < A.rows(); ++i) A(i, j) = A(j, i);
    }
}

double max_asymmetry(const Matrix& A) {
    if (A.rows() != A.cols()) return INFINITY;
    return (A - A.transpose()).cwiseAbs().maxCoeff();
}

Matrix spd_solve_inplace(Matrix& A, double shift, const Matrix& B) {
    require_square(A, "spd_solve");
    if (B.rows() != A.rows()) throw ContractError("spd_solve: right-hand side has wrong row count");
    if (!(shift >= 0.0)) throw ContractError("spd_solve: shift must be >= 0");
    const Eigen::Index n = A.rows();
    if (n == 0) return Matrix(0, B.cols());

    const double trace = A.trace();
    A.diagonal().array() += shift;
    const Vector shifted_diag = A.diagonal();
    {
        Eigen::LLT<Eigen::Ref<Matrix>> llt(A);
        if (llt.info() == Eigen::Success) return llt.solve(B);
    }
    // The in-place factorization clobbered the lower triangle and the
    // diagonal; the strict upper triangle still holds A.
    const double jitter = 1e-12 * std::abs(trace) / static_cast<double>(n);
    mirror_upper(A);
    A.diagonal() = shifted_diag.array() + jitter;
    Eigen::LLT<Eigen::Ref<Matrix>> retry(A);
    if (retry.info() != Eigen::Success) {
        std::ostringstream os;
        os << "spd_solve: Cholesky failed after jitter " << jitter;
        throw IllConditionedError(os.str(), jitter);
    }
    return retry.solve(B);
}

Matrix spd_solve(const Matrix& A, double shift, const Matrix& B) {
    Matrix work = A;
    return spd_solve_inplace(work, shift, B);
}

EigenDecomposition eigh(const Matrix& A) {
    require_symmetric(A, "eigh");
    EigenDecomposition out;
    if (A.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) throw Error("eigh: eigensolver did not converge");
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors = es.eigenvectors().rowwise().reverse();
    return out;
}

Vector eigvalsh(const Matrix& A) {
    require_symmetric(A, "eigvalsh");
    if (A.rows() == 0) return Vector();
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("eigvalsh: eigensolver did not converge");
    return es.eigenvalues().reverse();
}

Matrix pinv_solve(const Matrix& A, const Matrix& B, double rel_tol) {
    require_square(A, "pinv_solve");
    if (B.rows() != A.rows()) throw ContractError("pinv_solve: right-hand side has wrong row count");
    if (!(rel_tol >= 0.0)) throw ContractError("pinv_solve: rel_tol must be >= 0");
    if (A.rows() == 0) return Matrix(0, B.cols());

    const EigenDecomposition ed = eigh(A);
    const double top = ed.eigenvalues[0];
    if (!(top > 0.0)) return Matrix::Zero(A.cols(), B.cols());
    const double cut = rel_tol * top;

    Eigen::Index rank = 0;
    while (rank < ed.eigenvalues.size() && ed.eigenvalues[rank] > cut) ++rank;
    const auto V = ed.eigenvectors.leftCols(rank);
    const Vector inv = ed.eigenvalues.head(rank).cwiseInverse();
    return V * (inv.asDiagonal() * (V.transpose() * B));
}

}  // namespace pkrls
