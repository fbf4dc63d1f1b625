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

#include "opsample/channel.hpp"
#include "opsample/gabor.hpp"
#include "opsample/reconstruct.hpp"
#include "opsample/support.hpp"

namespace opsample
{

struct SupportEstimate
{
    std::vector<Cell> gamma_hat;         // selection order
    std::vector<double> residual_history; // relative Frobenius residual after each step
    bool converged = false;
    std::optional<bool> exact_match;
    std::uint64_t seed = 0;
    int k_max = 0;
    double tol = 0.0;
};

// Greedy joint-sparse decoding of Y (L x n) against the columns of G.
SupportEstimate mmv_omp(const CMatrix &Y, const GaborMatrix &G, int k_max, double tol);

// Up to max_points base points from the block [a0, a0+w) x [b0, b0+w), seeded stride.
std::vector<std::pair<int, int>> sample_points(int a0, int b0, int w, int max_points, std::uint64_t seed);

// Z-vectors at the given base points as columns.
CMatrix measurement_matrix(const ZakGrid &Z, const std::vector<std::pair<int, int>> &points);

bool verify_uniqueness_class(const CellSupport &S1, const CellSupport &S2, double Delta);

// Fundamental domain [i0, i0 + L P) x [j0, j0 + L P) in subcells, used to lift estimates.
struct FundamentalDomain
{
    int i0 = 0;
    int j0 = 0;
};

struct UnknownSupportReport
{
    ReconstructionReport recon;
    CellSupport support_hat;
    std::vector<SupportEstimate> estimates; // one per block
};

// K x K blocks of the base rectangle are decoded independently.
UnknownSupportReport recover_unknown_support(const ZakGrid &Z, const GaborMatrix &G, FundamentalDomain R, int k_max,
                                             double tol, int K = 1, std::uint64_t seed = 0,
                                             const DiscreteSpreadingFunction *truth = nullptr);

} // namespace opsample
