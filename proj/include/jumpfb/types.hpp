// Copyright 2026 The jumpfb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jumpfb {

// Two-qubit Hilbert space, basis |gg>, |ge>, |eg>, |ee> (atom 1 is the left tensor factor).
inline constexpr int kDim = 4;
// Liouville space of column-stacked 4x4 operators.
inline constexpr int kLiouvilleDim = kDim * kDim;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using QubitMatrix = Eigen::Matrix<Complex<Real>, 2, 2>;

template <typename Real>
using OperatorT = Eigen::Matrix<Complex<Real>, kDim, kDim>;

template <typename Real>
using StateVectorT = Eigen::Matrix<Complex<Real>, kDim, 1>;

template <typename Real>
using SuperMatrixT = Eigen::Matrix<Complex<Real>, kLiouvilleDim, kLiouvilleDim>;

template <typename Real>
using LiouvilleVectorT = Eigen::Matrix<Complex<Real>, kLiouvilleDim, 1>;

using Operator = OperatorT<double>;
using StateVector = StateVectorT<double>;
using SuperMatrix = SuperMatrixT<double>;
using LiouvilleVector = LiouvilleVectorT<double>;

// A density matrix is an Operator that satisfies check_density_matrix().
using DensityMatrix = Operator;

// Invalid parameters or arguments. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver or integrator failure. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jumpfb
