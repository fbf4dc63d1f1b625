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
#include "opsample/support.hpp"

namespace opsample
{

struct RateReport
{
    double rate = 0.0;      // |c|_0 / (T L)
    double bandwidth = 0.0; // B(S)
    bool necessary_ok = false;
    double area = 0.0;      // |S| on the grid
    std::optional<double> eps;
    std::optional<double> sufficient_margin; // |S|(1+eps) - |c|_0 / L
    double dead_time_fraction = 0.0;         // 1 - (T |c|_0 + K) / (L T)
    double memory = 0.0;                     // K
};

double sampling_rate(const IdentifierTrain &g, double zero_tol = 0.0);

// rate >= B(S) up to one subcell height
bool check_necessary(const IdentifierTrain &g, const CellSupport &S, double zero_tol = 0.0);

// K: the support sits in [0, K] along t (measured from t = 0).
double support_memory(const CellSupport &S);

RateReport rate_report(const IdentifierTrain &g, const CellSupport &S, std::optional<double> eps = std::nullopt);

struct BunchedPlan
{
    Window window;          // nonzero on indices 0..k-1
    int k = 0;              // |c|_0 = |Gamma'|
    CellSupport cover;      // Gamma' cells on the plan grid
    std::vector<Cell> gamma_prime;
    RateReport report;
};

// Cell-level supports on a non-prime grid are re-gridded onto the least prime L' >= N^2
// (searched up to N^2 + prime_search); prime grids are used as given.
BunchedPlan bunched_window_plan(const CellSupport &S, double eps, std::uint64_t seed = 0, int max_draws = 100,
                                int prime_search = 1000, double tol = 1e-9);

} // namespace opsample
