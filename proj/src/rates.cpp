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

#include "opsample/rates.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace opsample
{

double sampling_rate(const IdentifierTrain &g, double zero_tol)
{
    return g.weights.support_size(zero_tol) / (g.T * g.weights.length());
}

bool check_necessary(const IdentifierTrain &g, const CellSupport &S, double zero_tol)
{
    return sampling_rate(g, zero_tol) >= bandwidth(S) - S.dnu() * (1.0 + 1e-12);
}

double support_memory(const CellSupport &S)
{
    if (S.empty())
        return 0.0;
    int lo = S.subcells().front().i, hi = lo;
    for (const Subcell &s : S.subcells())
    {
        lo = std::min(lo, s.i);
        hi = std::max(hi, s.i);
    }
    return (lo >= 0 ? hi + 1 : hi - lo + 1) * S.dt();
}

RateReport rate_report(const IdentifierTrain &g, const CellSupport &S, std::optional<double> eps)
{
    RateReport r;
    const int L = g.weights.length();
    const int c0 = g.weights.support_size();
    r.rate = sampling_rate(g);
    r.bandwidth = bandwidth(S);
    r.necessary_ok = check_necessary(g, S);
    r.area = S.area();
    r.eps = eps;
    if (eps)
        r.sufficient_margin = r.area * (1.0 + *eps) - double(c0) / L;
    r.memory = support_memory(S);
    r.dead_time_fraction = 1.0 - (g.T * c0 + r.memory) / (L * g.T);
    return r;
}

BunchedPlan bunched_window_plan(const CellSupport &S, double eps, std::uint64_t seed, int max_draws, int prime_search,
                                double tol)
{
    if (!(eps > 0))
        throw Error(ErrorCode::InvalidParameters, "eps must be positive");
    if (S.empty())
        throw Error(ErrorCode::InvalidParameters, "support is empty");
    const double area = S.area();
    if (!(area < 1.0))
        throw Error(ErrorCode::InvalidParameters, "support area must be below 1");
    if (!check_fundamental_domain(S))
        throw Error(ErrorCode::InvalidParameters, "support is not inside a fundamental domain");

    const double T = S.T();
    const int N = S.L(), P = S.P();
    int L = N;
    std::set<Cell> absolute;
    if (is_prime(N))
    {
        for (const Subcell &s : S.subcells())
            absolute.insert({int(floor_div(s.i, P)), int(floor_div(s.j, P))});
    }
    else
    {
        if (!S.cell_level() || S.shift_i() != 0 || S.shift_j() != 0)
            throw Error(ErrorCode::InvalidParameters, "re-gridding needs an unshifted cell-level support");
        std::set<Cell> folded;
        for (const auto &f : fold(S))
            folded.insert(f.cell);
        if (!(area * (1.0 + eps) < 1.0))
            throw Error(ErrorCode::InvalidParameters, "re-gridding needs |S| (1 + eps) < 1");
        if (!((double(folded.size()) + 2.0) / N < area * (1.0 + eps)))
            throw Error(ErrorCode::InvalidParameters, "(|Gamma| + 2) / N must be below |S| (1 + eps)");
        L = 0;
        for (long long cand = (long long)N * N; cand <= (long long)N * N + prime_search; ++cand)
            if (is_prime(cand))
            {
                L = int(cand);
                break;
            }
        if (L == 0)
            throw Error(ErrorCode::NoPrimeInRange, "no prime in [N^2, N^2 + " + std::to_string(prime_search) + "]");
        // old nu-cell m spans [m L / N, (m + 1) L / N) new cells
        for (const Cell &c : S.cells())
        {
            const long long lo = floor_div((long long)c.m * L, N);
            const long long hi = -floor_div(-(long long)(c.m + 1) * L, N); // ceil
            for (long long m = lo; m < hi; ++m)
                absolute.insert({c.q, int(m)});
        }
    }
    CellSupport cover = CellSupport::from_cells(T, L, P, std::vector<Cell>(absolute.begin(), absolute.end()));
    std::set<Cell> gp;
    for (const Cell &c : absolute)
        gp.insert({int(pmod(c.q, L)), int(pmod(c.m, L))});
    std::vector<Cell> gamma(gp.begin(), gp.end());
    const int k = int(gamma.size());
    if (k > L || gamma.size() != absolute.size())
        throw Error(ErrorCode::InvalidParameters, "cell cover does not fold injectively");
    if (!(double(k) / L < area * (1.0 + eps)))
        throw Error(ErrorCode::InvalidParameters,
                    "cell cover too coarse: " + std::to_string(k) + "/" + std::to_string(L) + " >= |S|(1+eps)");

    Rng rng(seed);
    for (int d = 1; d <= max_draws; ++d)
    {
        Window c = draw_window(L, k, rng);
        GaborMatrix G(c);
        if (numerical_rank(G.columns(gamma), tol) == k)
        {
            c.seed = seed;
            c.draws = d;
            BunchedPlan plan{c, k, cover, gamma, {}};
            plan.report = rate_report(IdentifierTrain{T, c, 0.0}, S, eps);
            // on a re-gridded plan the rate and dead time refer to the new period
            plan.report.sufficient_margin = area * (1.0 + eps) - double(k) / L;
            plan.report.dead_time_fraction = 1.0 - (T * k + plan.report.memory) / (L * T);
            return plan;
        }
    }
    throw Error(ErrorCode::SparkTargetUnmet, "no window reached full rank on the cell cover");
}

} // namespace opsample
