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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <opsample/sparse.hpp>

#include "fixtures.hpp"

using namespace opsample;

namespace
{
struct Sim
{
    DiscreteSpreadingFunction eta;
    ZakGrid Z;
};

Sim simulate(const CellSupport &S, const Window &c, std::uint64_t seed)
{
    auto eta = random_eta(S, seed);
    auto Z = zak_transform(apply_channel(eta, IdentifierTrain{S.T(), c, 0.0}));
    return {std::move(eta), std::move(Z)};
}

// k distinct cells drawn uniformly from the L x L fundamental cells.
std::vector<Cell> random_cells(int L, int k, Rng &rng)
{
    std::vector<int> idx(static_cast<std::size_t>(L * L));
    for (int i = 0; i < L * L; ++i)
        idx[std::size_t(i)] = i;
    std::vector<Cell> out;
    for (int i = 0; i < k; ++i)
    {
        std::swap(idx[std::size_t(i)], idx[std::size_t(i) + rng.below(std::uint64_t(L * L - i))]);
        out.push_back({idx[std::size_t(i)] / L, idx[std::size_t(i)] % L});
    }
    return out;
}

ErrorCode code_of(auto &&f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    return ErrorCode::Io;
}

std::set<Cell> as_set(const std::vector<Cell> &v) { return {v.begin(), v.end()}; }
} // namespace

TEST_CASE("single active cell is found in one step")
{
    const auto c = generate_window(5, SparkTarget::full(), 1);
    GaborMatrix G(c);
    const auto S = CellSupport::from_cells(1.0, 5, 4, {{1, 2}});
    const auto sim = simulate(S, c, 3);
    const auto Y = measurement_matrix(sim.Z, sample_points(0, 0, 4, 100, 0));
    const auto est = mmv_omp(Y, G, 2, 1e-9);
    REQUIRE(est.gamma_hat.size() == 1);
    CHECK(est.gamma_hat[0] == Cell{1, 2});
    REQUIRE(est.residual_history.size() == 1);
    CHECK(est.residual_history[0] < 1e-12);
    CHECK(est.converged);
}

TEST_CASE("zero measurements converge immediately")
{
    GaborMatrix G(generate_window(3, SparkTarget::full(), 1));
    const auto est = mmv_omp(CMatrix::Zero(3, 5), G, 2, 1e-9);
    CHECK(est.converged);
    CHECK(est.gamma_hat.empty());
}

TEST_CASE("mmv_omp argument checks")
{
    GaborMatrix G(generate_window(3, SparkTarget::full(), 1));
    CHECK(code_of([&] { mmv_omp(CMatrix::Zero(4, 5), G, 2, 1e-9); }) == ErrorCode::GridMismatch);
    CHECK(code_of([&] { mmv_omp(CMatrix::Zero(3, 5), G, 4, 1e-9); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("residual history is non-increasing and selection is scale invariant")
{
    const int L = 5;
    const auto c = generate_window(L, SparkTarget::full(), 2);
    GaborMatrix G(c);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        Rng rng(seed);
        CMatrix Y(L, 12);
        for (Eigen::Index i = 0; i < Y.size(); ++i)
            Y(i) = rng.complex_box();
        const auto est = mmv_omp(Y, G, L, 1e-12);
        for (std::size_t k = 1; k < est.residual_history.size(); ++k)
            CHECK(est.residual_history[k] <= est.residual_history[k - 1] * (1 + 1e-12));
        const auto scaled = mmv_omp(cplx(3.5, -2.0) * Y, G, L, 1e-12);
        CHECK(scaled.gamma_hat == est.gamma_hat);
    }
}

TEST_CASE("sample points use a seeded stride")
{
    const auto pts = sample_points(2, 3, 8, 10, 5);
    // 64 points, stride 7, offset 5
    REQUIRE(pts.size() == 9);
    CHECK(pts[0] == std::make_pair(2, 8));
    CHECK(pts[1] == std::make_pair(3, 7));
    const auto all = sample_points(0, 0, 3, 100, 1);
    CHECK(all.size() == 9);
    CHECK(sample_points(0, 0, 0, 10, 0).empty());
}

TEST_CASE("half-sparse supports are recovered in at least 95 of 100 trials")
{
    const int L = 5, P = 4;
    const auto c = generate_window(L, SparkTarget::full(), 7);
    GaborMatrix G(c);
    int exact = 0, zero_residual_mismatch = 0;
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        Rng rng(1000 + trial);
        const auto S = CellSupport::from_cells(1.0, L, P, random_cells(L, 2, rng));
        const auto sim = simulate(S, c, trial);
        try
        {
            const auto rep = recover_unknown_support(sim.Z, G, {0, 0}, 2, 1e-9, 1, trial, &sim.eta);
            const bool match = rep.estimates[0].exact_match.value_or(false);
            exact += match;
            if (!match && rep.estimates[0].residual_history.back() <= 1e-9)
                ++zero_residual_mismatch;
            if (match)
                worst = std::max(worst, *rep.recon.relative_l2_error);
        }
        catch (const Error &)
        {
        }
    }
    CHECK(exact >= 95);
    CHECK(zero_residual_mismatch == 0);
    CHECK(worst <= 1e-9);
}

TEST_CASE("L - 1 shared-pattern supports: Monte Carlo success rate")
{
    const int L = 5, P = 4;
    const auto c = generate_window(L, SparkTarget::full(), 7);
    GaborMatrix G(c);
    int ok = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        Rng rng(5000 + trial);
        std::vector<Cell> cells;
        // one cell per t-column keeps the support a single class
        std::vector<int> qs{0, 1, 2, 3, 4};
        for (int k = 0; k < L - 1; ++k)
        {
            std::swap(qs[std::size_t(k)], qs[std::size_t(k) + rng.below(std::uint64_t(L - k))]);
            cells.push_back({qs[std::size_t(k)], int(rng.below(L))});
        }
        const auto S = CellSupport::from_cells(1.0, L, P, cells);
        const auto sim = simulate(S, c, trial);
        try
        {
            const auto rep = recover_unknown_support(sim.Z, G, {0, 0}, L - 1, 1e-9, 1, trial, &sim.eta);
            ok += rep.estimates[0].exact_match.value_or(false);
        }
        catch (const Error &)
        {
        }
    }
    MESSAGE("L - 1 recovery rate: " << ok << "/100");
    CHECK(ok >= 90);
}

TEST_CASE("too small an iteration cap reports NoConvergence with the residuals")
{
    const int L = 5;
    const auto c = generate_window(L, SparkTarget::full(), 7);
    const auto S = CellSupport::from_cells(1.0, L, 4, {{0, 1}, {2, 3}, {4, 0}});
    const auto sim = simulate(S, c, 1);
    try
    {
        recover_unknown_support(sim.Z, GaborMatrix(c), {0, 0}, 1, 1e-9);
        FAIL("expected NoConvergence");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::NoConvergence);
        CHECK(std::string(e.what()).find('[') != std::string::npos);
    }
    const auto Y = measurement_matrix(sim.Z, sample_points(0, 0, 4, 100, 0));
    const auto est = mmv_omp(Y, GaborMatrix(c), 1, 1e-9);
    CHECK_FALSE(est.converged);
    CHECK(est.residual_history.back() > 0.1);
}

TEST_CASE("subdivided classes are recovered block by block")
{
    // K = 2: the support pattern is constant on each of the four P/2 x P/2 blocks of the base rectangle
    const int L = 5, P = 4, K = 2, w = P / K;
    const auto c = generate_window(L, SparkTarget::full(), 7);
    GaborMatrix G(c);
    const std::vector<std::vector<Cell>> block_cells{{{0, 0}, {3, 1}}, {{1, 4}}, {{2, 2}, {4, 3}}, {{0, 1}, {1, 1}}};
    std::vector<Subcell> s;
    for (int ba = 0; ba < K; ++ba)
        for (int bb = 0; bb < K; ++bb)
            for (const Cell &cell : block_cells[std::size_t(ba * K + bb)])
                for (int a = ba * w; a < (ba + 1) * w; ++a)
                    for (int b = bb * w; b < (bb + 1) * w; ++b)
                        s.push_back({a + cell.q * P, b + cell.m * P});
    const auto S = CellSupport::from_subcells(1.0, L, P, s);
    const auto sim = simulate(S, c, 8);
    const auto rep = recover_unknown_support(sim.Z, G, {0, 0}, 2, 1e-9, K, 0, &sim.eta);
    REQUIRE(rep.estimates.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(as_set(rep.estimates[k].gamma_hat) == as_set(block_cells[k]));
    CHECK(rep.support_hat.subcells() == S.subcells());
    CHECK(*rep.recon.relative_l2_error <= 1e-9);
    CHECK(code_of([&] { recover_unknown_support(sim.Z, G, {0, 0}, 2, 1e-9, 3); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("estimated cells are lifted into the stated fundamental domain")
{
    const int L = 3, P = 4;
    const auto c = generate_window(L, SparkTarget::full(), 1);
    const auto S = CellSupport::from_cells(1.0, L, P, {{-1, 0}});
    const auto sim = simulate(S, c, 1);
    const auto rep = recover_unknown_support(sim.Z, GaborMatrix(c), {-P, 0}, 1, 1e-9, 1, 0, &sim.eta);
    CHECK(rep.support_hat.subcells() == S.subcells());
    CHECK(*rep.recon.relative_l2_error <= 1e-9);
}

TEST_CASE("uniqueness class")
{
    SUBCASE("two single cells at L = 3")
    {
        const auto S1 = CellSupport::from_cells(1.0, 3, 4, {{0, 0}});
        const auto S2 = CellSupport::from_cells(1.0, 3, 4, {{1, 2}});
        CHECK(verify_uniqueness_class(S1, S2, 1.0 / 3));
    }
    SUBCASE("two disjoint collections of ceil((L+1)/2) cells on one footprint")
    {
        const int L = 5;
        const auto S1 = CellSupport::from_cells(1.0, L, 2, {{0, 0}, {1, 0}, {2, 0}});
        const auto S2 = CellSupport::from_cells(1.0, L, 2, {{3, 0}, {4, 0}, {0, 1}});
        CHECK(max_cover(S1.united(S2)) == 6);
        CHECK_FALSE(verify_uniqueness_class(S1, S2, 0.6));
        // at the boundary Delta = 1/2 + 1/(2L) each set is admissible and the union still fails
        CHECK_FALSE(verify_uniqueness_class(S1, S2, 0.5 + 0.5 / L));
    }
    SUBCASE("covers above Delta L are outside the class")
    {
        const auto S1 = CellSupport::from_cells(1.0, 3, 2, {{0, 0}, {1, 0}});
        const auto S2 = CellSupport::from_cells(1.0, 3, 2, {{2, 2}});
        CHECK_FALSE(verify_uniqueness_class(S1, S2, 1.0 / 3));
        CHECK(verify_uniqueness_class(S1, S2, 2.0 / 3));
    }
    SUBCASE("random pairs below the threshold always pass")
    {
        const int L = 5;
        for (std::uint64_t seed = 0; seed < 30; ++seed)
        {
            Rng rng(seed);
            const auto cells = random_cells(L, 4, rng);
            const auto S1 = CellSupport::from_cells(1.0, L, 2, {cells[0], cells[1]});
            const auto S2 = CellSupport::from_cells(1.0, L, 2, {cells[2], cells[3]});
            CHECK(verify_uniqueness_class(S1, S2, 0.5));
        }
    }
}
