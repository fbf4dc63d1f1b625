// SPDX-License-Identifier: Apache-2.0
//
// opsample - sampling and identification of bandlimited operators
// Copyright (C) 2026 The opsample authors
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
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opsample
{
using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double two_pi = 6.283185307179586476925286766559;

enum class ErrorCode
{
    InvalidParameters,
    SearchBudgetExceeded,
    GenerationFailed,
    NotIdentifiable,
    GridMismatch,
    UnsupportedZakPeriod,
    IndexOutOfRange,
    RankDeficient,
    ShearNotRectifiable,
    NonIntegerChirpPeriod,
    InvalidOverlap,
    NoConvergence,
    NoPrimeInRange,
    SparkTargetUnmet,
    Io,
    Parse
};

const char *error_name(ErrorCode code);

// All library failures are reported through this type.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

// Floor modulo, result in [0, n)
inline long long pmod(long long a, long long n)
{
    long long r = a % n;
    return r < 0 ? r + n : r;
}

inline long long floor_div(long long a, long long n)
{
    return (a - pmod(a, n)) / n;
}

// e^{2 pi i k / n}, with k reduced exactly before the trig call
inline cplx unit_root(long long k, long long n)
{
    long long r = pmod(k, n);
    if (r == 0)
        return {1.0, 0.0};
    if (2 * r == n)
        return {-1.0, 0.0};
    if (4 * r == n)
        return {0.0, 1.0};
    if (4 * r == 3 * n)
        return {0.0, -1.0};
    double a = two_pi * double(r) / double(n);
    return {std::cos(a), std::sin(a)};
}

// Table of e^{2 pi i k / n} for k = 0..n-1
std::vector<cplx> unit_root_table(long long n);

bool is_prime(long long n);

// Deterministic generator: mt19937_64 with an explicit 53-bit mantissa map,
// so draws are identical across standard library implementations.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed);
    double uniform();                   // [0,1)
    double uniform(double lo, double hi);
    std::uint64_t next();
    std::uint64_t below(std::uint64_t n); // [0,n)
    cplx complex_box();                 // re, im uniform in [-1,1)

  private:
    std::mt19937_64 eng_;
};

// Worker cap shared by the parallel loops; 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

} // namespace opsample
