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

#ifndef PKRLS_LINALG_HPP
#define PKRLS_LINALG_HPP

#include "pkrls/types.hpp"

namespace pkrls {

/// Eigenpairs of a symmetric matrix, eigenvalues sorted descending.
struct EigenDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;  ///< column k pairs with eigenvalues[k]
};

inline constexpr double kDefaultPinvTolerance = 1e-10;

/**
 * Solves (A + shift I) X = B by Cholesky.
 *
 * If the factorization fails, the diagonal is bumped once by
 * 1e-12 * trace(A) / n and the factorization retried; a second failure
 * throws IllConditionedError carrying that jitter.
 */
Matrix spd_solve(const Matrix& A, double shift, const Matrix& B);

/// Same as spd_solve but factorizes A in place (A is overwritten).
Matrix spd_solve_inplace(Matrix& A, double shift, const Matrix& B);

/**
 * Minimum-norm solve A^+ B for symmetric PSD A. Eigenvalues below
 * rel_tol * (largest eigenvalue) are treated as zero.
 */
Matrix pinv_solve(const Matrix& A, const Matrix& B, double rel_tol = kDefaultPinvTolerance);

/// Throws ContractError if A is not symmetric to 1e-10 ||A||_F.
EigenDecomposition eigh(const Matrix& A);

/// Eigenvalues only, descending; same symmetry contract as eigh.
Vector eigvalsh(const Matrix& A);

/// Copies one strict triangle onto the other.
void mirror_lower(Matrix& A);
void mirror_upper(Matrix& A);

/// max_ij |A_ij - A_ji|
double max_asymmetry(const Matrix& A);

}  // namespace pkrls

#endif  // PKRLS_LINALG_HPP
