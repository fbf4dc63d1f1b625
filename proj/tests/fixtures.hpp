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

// Shared fixtures and independent reference computations for the tests.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <opsample/channel.hpp>
#include <opsample/gabor.hpp>
#include <opsample/support.hpp>

namespace fixtures
{
using opsample::Cell;
using opsample::CellSupport;
using opsample::cplx;
using opsample::Subcell;

inline cplx expi(double turns) { return std::polar(1.0, 6.283185307179586 * turns); }

// Staircase: cells (0,0), (1,0), (2,1) at L = 3.
inline CellSupport staircase(int P = 8, double T = 1.0)
{
    return CellSupport::from_cells(T, 3, P, {{0, 0}, {1, 0}, {2, 1}});
}

// Seven cells of triangles at L = 3, an exact 3-cover with B(S) = 2 W.
// bottom: b <= a, a + b < P-1; left: b > a, a + b < P-1; upper-right: a + b >= P-1
inline CellSupport seven_cell(int P = 8, double T = 1.0)
{
    std::vector<Subcell> s;
    auto add = [&](int q, int m, auto keep) {
        for (int a = 0; a < P; ++a)
            for (int b = 0; b < P; ++b)
                if (keep(a, b))
                    s.push_back({q * P + a, m * P + b});
    };
    auto bottom = [P](int a, int b) { return b <= a && a + b < P - 1; };
    auto left = [P](int a, int b) { return b > a && a + b < P - 1; };
    auto upper = [P](int a, int b) { return a + b >= P - 1; };
    add(0, 0, bottom);
    add(1, 0, bottom);
    add(2, 3, bottom);
    add(0, 0, left);
    add(1, 1, left);
    add(3, 1, left);
    add(2, 2, upper);
    add(1, 1, upper);
    add(2, 1, upper);
    return CellSupport::from_subcells(T, 3, P, s);
}

// Parallelogram between nu = (W/T) t and nu = (W/T) t + W over t in [0, L T).
inline CellSupport parallelogram(int L = 3, int P = 8, double T = 1.0)
{
    std::vector<Subcell> s;
    for (int i = 0; i < L * P; ++i)
        for (int j = i; j < i + P; ++j)
            s.push_back({i, j});
    return CellSupport::from_subcells(T, L, P, s);
}

// Entry (p, column q L + m) = c_{p-q} e^{2 pi i p m / L}, from the block definition.
inline Eigen::MatrixXcd gabor_oracle(const std::vector<cplx> &c)
{
    const int L = int(c.size());
    Eigen::MatrixXcd G(L, L * L);
    for (int q = 0; q < L; ++q)     // block D_q = diag(T^q c)
        for (int m = 0; m < L; ++m) // Fourier column m
            for (int p = 0; p < L; ++p)
                G(p, q * L + m) = c[std::size_t(((p - q) % L + L) % L)] * expi(double(p) * m / L);
    return G;
}

inline int lu_rank(const Eigen::MatrixXcd &A, double tol = 1e-9)
{
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    lu.setThreshold(tol);
    return int(lu.rank());
}

// Smallest dependent subset by brute force over bitmasks (n <= 25 columns).
inline int spark_oracle(const Eigen::MatrixXcd &G, double tol = 1e-9)
{
    const int n = int(G.cols()), L = int(G.rows());
    int best = L + 1;
    std::vector<int> idx;
    for (long long mask = 1; mask < (1LL << n); ++mask)
    {
        const int k = __builtin_popcountll((unsigned long long)mask);
        if (k >= best || k > L)
            continue;
        Eigen::MatrixXcd A(L, k);
        int c = 0;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1)
                A.col(c++) = G.col(j);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
        qr.setThreshold(tol);
        if (qr.rank() < k)
            best = k;
    }
    return best;
}

// Hg(x_n) = sum_r w_r h(x_n, x_n - r T), evaluated by a direct double sum.
inline std::vector<cplx> response_oracle(const opsample::DiscreteSpreadingFunction &eta,
                                         const std::vector<cplx> &c, double a = 0.0)
{
    const CellSupport &S = eta.support();
    const long long L = S.L(), P = S.P(), N = S.superperiod();
    const double T = S.T(), W = S.omega(), dt = T / P, dnu = W / P;
    std::vector<cplx> out(static_cast<std::size_t>(N));
    for (long long x = 0; x < N; ++x)
    {
        cplx sum = 0;
        for (std::size_t k = 0; k < S.size(); ++k)
        {
            const Subcell s = S.subcells()[k];
            if (((x - s.i) % P + P) % P != 0)
                continue;
            const long long r = (x - s.i) / P;
            const double t = s.i * dt, nu = s.j * dnu, xx = x * dt;
            const cplx w = c[std::size_t(((r % L) + L) % L)] * std::polar(1.0, M_PI * T * a * double(r) * double(r));
            sum += w * dnu * eta.values()[k] * std::polar(1.0, 2 * M_PI * nu * (xx - t));
        }
        out[std::size_t(x)] = sum;
    }
    return out;
}

// Z(t, nu) = sum_{r < P} f(t - r L T) e^{2 pi i r L T nu}
inline std::vector<cplx> zak_oracle(const std::vector<cplx> &f, int L, int P)
{
    const long long n = (long long)L * P, N = n * P;
    std::vector<cplx> Z(static_cast<std::size_t>(n * P));
    for (long long i = 0; i < n; ++i)
        for (long long k = 0; k < P; ++k)
        {
            cplx s = 0;
            for (long long r = 0; r < P; ++r)
                s += f[std::size_t(((i - r * n) % N + N) % N)] * std::polar(1.0, 2 * M_PI * double(r * k) / P);
            Z[std::size_t(i * P + k)] = s;
        }
    return Z;
}

} // namespace fixtures
