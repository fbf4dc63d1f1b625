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

#include "opsample/gabor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace opsample
{

int Window::support_size(double zero_tol) const
{
    int n = 0;
    for (const auto &w : weights)
        if (std::abs(w) > zero_tol)
            ++n;
    return n;
}

double Window::norm() const
{
    double s = 0.0;
    for (const auto &w : weights)
        s += std::norm(w);
    return std::sqrt(s);
}

std::vector<cplx> translate(const std::vector<cplx> &x, long long q)
{
    const long long L = (long long)x.size();
    std::vector<cplx> y(x.size());
    for (long long p = 0; p < L; ++p)
        y[std::size_t(p)] = x[std::size_t(pmod(p - q, L))];
    return y;
}

std::vector<cplx> modulate(const std::vector<cplx> &x, long long m)
{
    const long long L = (long long)x.size();
    std::vector<cplx> y(x.size());
    for (long long p = 0; p < L; ++p)
        y[std::size_t(p)] = unit_root(p * m, L) * x[std::size_t(p)];
    return y;
}

GaborMatrix::GaborMatrix(const Window &c) : L_(c.length()), c_(c)
{
    if (L_ < 1)
        throw Error(ErrorCode::InvalidParameters, "window length must be >= 1");
    G_.resize(L_, L_ * L_);
    for (int q = 0; q < L_; ++q)
        for (int m = 0; m < L_; ++m)
            for (int p = 0; p < L_; ++p)
                G_(p, column_index(q, m)) = c.weights[std::size_t(pmod(p - q, L_))] * unit_root((long long)p * m, L_);
}

CMatrix GaborMatrix::columns(const std::vector<Cell> &gamma) const
{
    CMatrix A(L_, Eigen::Index(gamma.size()));
    for (std::size_t k = 0; k < gamma.size(); ++k)
    {
        const Cell &g = gamma[k];
        if (g.q < 0 || g.q >= L_ || g.m < 0 || g.m >= L_)
            throw Error(ErrorCode::IndexOutOfRange, "cell outside {0..L-1}^2");
        A.col(Eigen::Index(k)) = G_.col(column_index(g.q, g.m));
    }
    return A;
}

GaborMatrix build_gabor_matrix(const Window &c) { return GaborMatrix(c); }

int numerical_rank(const CMatrix &A, double tol)
{
    if (A.size() == 0)
        return 0;
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto &s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0))
            ++r;
    return r;
}

namespace
{

// Advance idx (sorted, values < n) to the next k-subset in colex order.
bool next_colex(std::vector<int> &idx, int n)
{
    const int k = int(idx.size());
    for (int i = 0; i < k; ++i)
    {
        int limit = (i + 1 < k) ? idx[std::size_t(i + 1)] : n;
        if (idx[std::size_t(i)] + 1 < limit)
        {
            ++idx[std::size_t(i)];
            for (int j = 0; j < i; ++j)
                idx[std::size_t(j)] = j;
            return true;
        }
    }
    return false;
}

bool subset_dependent(const CMatrix &G, const std::vector<int> &idx, double tol)
{
    CMatrix A(G.rows(), Eigen::Index(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        A.col(Eigen::Index(k)) = G.col(idx[k]);
    // sigma_min / sigma_max >= |det| / |A|_F^k certifies independence without an SVD
    const int k = int(idx.size());
    const double F = A.norm();
    if (F > 0.0)
    {
        double bound, floor;
        if (k == A.rows())
        {
            bound = std::abs(A.partialPivLu().determinant()) / std::pow(F, k);
            floor = 1e-10;
        }
        else
        {
            const CMatrix gram = A.adjoint() * A;
            bound = std::sqrt(std::abs(gram.partialPivLu().determinant())) / std::pow(F, k);
            floor = 1e-6;
        }
        if (bound > std::max(4.0 * tol, floor))
            return false;
    }
    return numerical_rank(A, tol) < k;
}

// First dependent k-subset in colex order, or false. Workers take every W-th subset.
bool any_dependent(const CMatrix &G, int k, double tol)
{
    const int n = int(G.cols());
    if (k > n)
        return false;
    const int workers = std::max(1, max_threads());
    std::atomic<bool> found{false};
    auto run = [&](int w) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            idx[std::size_t(i)] = i;
        long long counter = 0;
        do
        {
            if (counter++ % workers != w)
                continue;
            if (found.load(std::memory_order_relaxed))
                return;
            if (subset_dependent(G, idx, tol))
            {
                found = true;
                return;
            }
        } while (next_colex(idx, n));
    };
    if (workers == 1)
        run(0);
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto &t : pool)
            t.join();
    }
    return found;
}

} // namespace

int spark(const GaborMatrix &G, double tol)
{
    const int L = G.L();
    if (L > spark_search_limit)
        throw Error(ErrorCode::SearchBudgetExceeded, "spark search limited to L <= 7");
    // Column subsets of an independent set stay independent under the relative
    // threshold (singular values interlace), so clearing all L-subsets settles full spark.
    if (!any_dependent(G.entries(), L, tol))
        return L + 1;
    for (int k = 1; k < L; ++k)
        if (any_dependent(G.entries(), k, tol))
            return k;
    return L;
}

Window draw_window(int L, int nonzero, Rng &rng)
{
    std::vector<cplx> w(std::size_t(L), cplx(0.0, 0.0));
    for (int p = 0; p < nonzero; ++p)
    {
        double r = rng.uniform(0.5, 1.0);
        double phi = rng.uniform(0.0, two_pi);
        w[std::size_t(p)] = std::polar(r, phi);
    }
    return Window(std::move(w));
}

Window generate_window(int L, SparkTarget target, std::uint64_t seed, int max_draws, double tol)
{
    if (L < 1)
        throw Error(ErrorCode::InvalidParameters, "L must be >= 1");
    if (max_draws < 1)
        throw Error(ErrorCode::InvalidParameters, "max_draws must be >= 1");
    int k = L;
    if (target.kind == SparkTarget::Kind::SparkK)
    {
        if (target.k < 1 || target.k > L)
            throw Error(ErrorCode::InvalidParameters, "spark_k needs 1 <= k <= L");
        if (!is_prime(L) && target.k < L)
            throw Error(ErrorCode::InvalidParameters, "spark_k windows need prime L");
        k = target.k;
    }
    if (L > spark_search_limit)
        throw Error(ErrorCode::SearchBudgetExceeded, "spark certification limited to L <= 7");
    Rng rng(seed);
    for (int d = 1; d <= max_draws; ++d)
    {
        Window c = draw_window(L, k, rng);
        if (spark(GaborMatrix(c), tol) == k + 1)
        {
            c.seed = seed;
            c.draws = d;
            return c;
        }
    }
    throw Error(ErrorCode::GenerationFailed,
                "no window met the spark target in " + std::to_string(max_draws) + " draws");
}

bool minors_nonzero(const GaborMatrix &G, double tol)
{
    const int L = G.L();
    if (L > minor_search_limit)
        throw Error(ErrorCode::SearchBudgetExceeded, "minor enumeration limited to L <= 5");
    const CMatrix &A = G.entries();
    double cmax = 0.0;
    for (const auto &w : G.window().weights)
        cmax = std::max(cmax, std::abs(w));
    if (cmax == 0.0)
        return false;
    const int n = int(A.cols());
    for (int s = 1; s <= L; ++s)
    {
        const double thresh = tol * std::pow(cmax, s);
        std::vector<int> rows(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i)
            rows[std::size_t(i)] = i;
        do
        {
            std::vector<int> cols(static_cast<std::size_t>(s));
            for (int i = 0; i < s; ++i)
                cols[std::size_t(i)] = i;
            do
            {
                CMatrix M(s, s);
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b)
                        M(a, b) = A(rows[std::size_t(a)], cols[std::size_t(b)]);
                if (std::abs(M.determinant()) <= thresh)
                    return false;
            } while (next_colex(cols, n));
        } while (next_colex(rows, L));
    }
    return true;
}

} // namespace opsample
