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

#include <optional>
#include <vector>

#include "opsample/common.hpp"

namespace opsample
{

// Period-L weight vector c of a delta-train identifier.
struct Window
{
    std::vector<cplx> weights;
    std::optional<std::uint64_t> seed;
    int draws = 0; // draws consumed by generate_window, 0 if set by hand

    Window() = default;
    explicit Window(std::vector<cplx> w, std::optional<std::uint64_t> s = std::nullopt)
        : weights(std::move(w)), seed(s) {}

    int length() const { return int(weights.size()); }
    int support_size(double zero_tol = 0.0) const;
    double norm() const;
};

// (q, m): q translates, m modulates
struct Cell
{
    int q = 0;
    int m = 0;
    auto operator<=>(const Cell &) const = default;
};

// The L x L^2 matrix [D_0 W_L | ... | D_{L-1} W_L], D_q = diag(T^q c).
// Entry (p, (q,m)) = c_{p-q} w^{pm}, stored at column q*L + m.
class GaborMatrix
{
  public:
    explicit GaborMatrix(const Window &c);

    int L() const { return L_; }
    const CMatrix &entries() const { return G_; }
    int column_index(int q, int m) const { return q * L_ + m; }
    Cell cell_of(int column) const { return {column / L_, column % L_}; }
    CMatrix columns(const std::vector<Cell> &gamma) const;
    const Window &window() const { return c_; }

  private:
    int L_;
    Window c_;
    CMatrix G_;
};

// (T^q x)_p = x_{p-q mod L}
std::vector<cplx> translate(const std::vector<cplx> &x, long long q);

// (M^m x)_p = e^{2 pi i p m / L} x_p
std::vector<cplx> modulate(const std::vector<cplx> &x, long long m);

GaborMatrix build_gabor_matrix(const Window &c);

inline constexpr int spark_search_limit = 7;
inline constexpr int minor_search_limit = 5;

// Numerical rank from singular values, threshold tol * sigma_max
int numerical_rank(const CMatrix &A, double tol = 1e-9);

// Smallest dependent column subset size, L+1 for full spark.
int spark(const GaborMatrix &G, double tol = 1e-9);

struct SparkTarget
{
    enum class Kind { Full, SparkK } kind = Kind::Full;
    int k = 0;
    static SparkTarget full() { return {Kind::Full, 0}; }
    static SparkTarget spark_k(int k) { return {Kind::SparkK, k}; }
};

// Random window, moduli and phases uniform (moduli in [1/2,1]).
// spark_k: entries k..L-1 are zero, target spark k+1.
Window generate_window(int L, SparkTarget target, std::uint64_t seed, int max_draws = 100,
                       double tol = 1e-9);

// One raw draw, no certification. Used by generate_window and the plans in rates.
Window draw_window(int L, int nonzero, Rng &rng);

// Every square minor has modulus > tol * max|c|^size.
bool minors_nonzero(const GaborMatrix &G, double tol = 1e-9);

} // namespace opsample
