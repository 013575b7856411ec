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

#ifndef PKRLS_ERROR_HPP
#define PKRLS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pkrls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was not met (sizes, parameter ranges).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the domain of a kernel or partition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An operation that needs at least one point received none.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization failed even after the diagonal jitter retry.
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& what, double jitter)
        : Error(what), jitter_(jitter) {}

    double jitter() const noexcept { return jitter_; }

private:
    double jitter_;
};

/// Wraps a failure raised while fitting one cell of a localized model.
class CellFitError : public Error {
public:
    CellFitError(std::size_t cell, const std::string& what)
        : Error("cell " + std::to_string(cell) + ": " + what), cell_(cell) {}

    std::size_t cell() const noexcept { return cell_; }

private:
    std::size_t cell_;
};

}  // namespace pkrls

#endif  // PKRLS_ERROR_HPP
