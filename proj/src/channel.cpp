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

#include "opsample/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opsample
{

DiscreteSpreadingFunction::DiscreteSpreadingFunction(CellSupport S)
    : S_(std::move(S)), v_(S_.size(), cplx(0.0, 0.0))
{
}

cplx DiscreteSpreadingFunction::at(int i, int j) const
{
    long long k = S_.index_of(i, j);
    return k < 0 ? cplx(0.0, 0.0) : v_[std::size_t(k)];
}

void DiscreteSpreadingFunction::set(int i, int j, cplx v)
{
    long long k = S_.index_of(i, j);
    if (k < 0)
        throw Error(ErrorCode::IndexOutOfRange,
                    "sample (" + std::to_string(i) + "," + std::to_string(j) + ") is off the support");
    v_[std::size_t(k)] = v;
}

double DiscreteSpreadingFunction::norm() const
{
    double s = 0.0;
    for (const auto &x : v_)
        s += std::norm(x);
    return std::sqrt(s);
}

DiscreteSpreadingFunction random_eta(const CellSupport &S, std::uint64_t seed)
{
    DiscreteSpreadingFunction eta(S);
    Rng rng(seed);
    for (auto &v : eta.values())
        v = rng.complex_box();
    return eta;
}

double relative_l2_error(const DiscreteSpreadingFunction &a, const DiscreteSpreadingFunction &b)
{
    double num = 0.0, den = 0.0;
    const auto &sb = b.support().subcells();
    for (std::size_t k = 0; k < sb.size(); ++k)
    {
        num += std::norm(a.at(sb[k].i, sb[k].j) - b.values()[k]);
        den += std::norm(b.values()[k]);
    }
    const auto &sa = a.support().subcells();
    for (std::size_t k = 0; k < sa.size(); ++k)
        if (!b.support().contains(sa[k].i, sa[k].j))
            num += std::norm(a.values()[k]);
    if (den == 0.0)
        return std::sqrt(num);
    return std::sqrt(num / den);
}

long long chirp_steps(double a, double T, int L)
{
    const double s = a * T * L;
    const double r = std::round(s);
    if (!std::isfinite(s) || std::abs(s - r) > 1e-9 * std::max(1.0, std::abs(s)))
        throw Error(ErrorCode::NonIntegerChirpPeriod,
                    "chirp rate a = " + std::to_string(a) + " is not a multiple of 1/(T L), L T a = " +
                        std::to_string(s));
    return (long long)r;
}

cplx train_weight(const IdentifierTrain &g, long long n)
{
    const int L = g.weights.length();
    cplx c = g.weights.weights[std::size_t(pmod(n, L))];
    if (g.chirp_a == 0.0)
        return c;
    const long long s = chirp_steps(g.chirp_a, g.T, L);
    const long long r = pmod(n, 2LL * L);
    return c * unit_root(pmod(s, 2LL * L) * (r * r % (2LL * L)), 2LL * L);
}

cplx ZakGrid::at(long long i, long long k) const
{
    const long long n = (long long)L * P;
    const long long r = floor_div(i, n);
    const long long kk = pmod(k, P);
    cplx z = data[std::size_t((i - r * n) * P + kk)];
    return r == 0 ? z : z * unit_root(r * kk, P);
}

cplx QuasiGrid::at(long long I, long long J) const
{
    const long long n = (long long)L * P;
    const long long r = floor_div(I, n);
    const long long JJ = pmod(J, n);
    cplx z = data[std::size_t((I - r * n) * n + JJ)];
    return r == 0 ? z : z * unit_root(r * JJ, P);
}

cplx impulse_response(const DiscreteSpreadingFunction &eta, long long n, int i)
{
    const CellSupport &S = eta.support();
    const long long N = S.superperiod();
    cplx h(0.0, 0.0);
    const auto &sub = S.subcells();
    auto it = std::lower_bound(sub.begin(), sub.end(), Subcell{i, std::numeric_limits<int>::min()});
    for (; it != sub.end() && it->i == i; ++it)
        h += eta.values()[std::size_t(it - sub.begin())] * unit_root((long long)it->j * (n - i), N);
    return h * S.dnu();
}

std::vector<cplx> impulse_response_row(const DiscreteSpreadingFunction &eta, int i)
{
    const CellSupport &S = eta.support();
    const long long N = S.superperiod();
    const auto tw = unit_root_table(N);
    std::vector<cplx> row(std::size_t(N), cplx(0.0, 0.0));
    const auto &sub = S.subcells();
    auto it = std::lower_bound(sub.begin(), sub.end(), Subcell{i, std::numeric_limits<int>::min()});
    for (; it != sub.end() && it->i == i; ++it)
    {
        const cplx v = eta.values()[std::size_t(it - sub.begin())] * S.dnu();
        for (long long n = 0; n < N; ++n)
            row[std::size_t(n)] += v * tw[std::size_t(pmod((long long)it->j * (n - i), N))];
    }
    return row;
}

ChannelResponse apply_channel(const DiscreteSpreadingFunction &eta, const IdentifierTrain &g)
{
    const CellSupport &S = eta.support();
    if (std::abs(g.T - S.T()) > 1e-12 * S.T() || g.weights.length() != S.L())
        throw Error(ErrorCode::GridMismatch, "identifier T or L disagrees with the support grid");
    const long long L = S.L(), P = S.P(), N = S.superperiod();
    if (g.chirp_a != 0.0)
    {
        const long long s = chirp_steps(g.chirp_a, g.T, S.L());
        if ((pmod(s, 2) * pmod(L, 2) * pmod(P, 2)) == 1)
            throw Error(ErrorCode::NonIntegerChirpPeriod, "chirped weights are not periodic over the superperiod");
    }
    // weights over one superperiod of deltas (L P of them)
    std::vector<cplx> w(static_cast<std::size_t>(L * P));
    for (long long r = 0; r < L * P; ++r)
        w[std::size_t(r)] = train_weight(g, r);

    const auto tw = unit_root_table(N);
    ChannelResponse out;
    out.T = S.T();
    out.L = S.L();
    out.P = S.P();
    out.samples.assign(std::size_t(N), cplx(0.0, 0.0));
    const auto &sub = S.subcells();
    const double dnu = S.dnu();
    // Hg(x) = sum_r w_r h(x, x - rP); only x = i (mod P) meets row i
    for (std::size_t k = 0; k < sub.size(); ++k)
    {
        const long long i = sub[k].i, j = sub[k].j;
        const cplx v = eta.values()[k] * dnu;
        if (v == cplx(0.0, 0.0))
            continue;
        for (long long x = pmod(i, P); x < N; x += P)
        {
            const long long r = (x - i) / P;
            out.samples[std::size_t(x)] += w[std::size_t(pmod(r, L * P))] * v * tw[std::size_t(pmod(j * (x - i), N))];
        }
    }
    return out;
}

ZakGrid zak_transform(const ChannelResponse &f, double a)
{
    const double period = f.T * f.L; // 1/W
    if (!(std::abs(a - period) <= 1e-12 * period))
        throw Error(ErrorCode::UnsupportedZakPeriod, "the discrete model fixes the Zak period to L T");
    return zak_transform(f);
}

ZakGrid zak_transform(const ChannelResponse &f)
{
    const long long L = f.L, P = f.P, N = L * P * P, n = L * P;
    if ((long long)f.samples.size() != N)
        throw Error(ErrorCode::GridMismatch, "response length must be L P^2");
    ZakGrid Z;
    Z.T = f.T;
    Z.L = f.L;
    Z.P = f.P;
    Z.data.assign(std::size_t(n * P), cplx(0.0, 0.0));
    for (long long i = 0; i < n; ++i)
        for (long long k = 0; k < P; ++k)
        {
            cplx s(0.0, 0.0);
            for (long long r = 0; r < P; ++r)
                s += f.samples[std::size_t(pmod(i - r * n, N))] * unit_root(r * k, P);
            Z.data[std::size_t(i * P + k)] = s;
        }
    return Z;
}

QuasiGrid quasiperiodize(const DiscreteSpreadingFunction &eta)
{
    const CellSupport &S = eta.support();
    const long long n = S.base();
    QuasiGrid Q;
    Q.T = S.T();
    Q.L = S.L();
    Q.P = S.P();
    Q.data.assign(std::size_t(n * n), cplx(0.0, 0.0));
    const auto folded = fold(S);
    for (std::size_t k = 0; k < folded.size(); ++k)
    {
        const auto &f = folded[k];
        const long long I = pmod(f.s.i, n), J = pmod(f.s.j, n);
        Q.data[std::size_t(I * n + J)] += eta.values()[k] * unit_root(-J * f.kt, S.P());
    }
    return Q;
}

CVector z_vector(const ZakGrid &Z, long long a, long long b)
{
    const long long L = Z.L, P = Z.P;
    CVector v(L);
    for (long long p = 0; p < L; ++p)
        v(p) = Z.at(a + p * P, b) * unit_root(-b * p, L * P);
    return v;
}

SystemSample assemble_system(const QuasiGrid &qp, const ZakGrid &Z, const GaborMatrix &G, int a, int b)
{
    const long long L = Z.L, P = Z.P;
    if (a < 0 || a >= P || b < 0 || b >= P)
        throw Error(ErrorCode::IndexOutOfRange, "base point outside [0,P)^2");
    if (qp.L != Z.L || qp.P != Z.P || G.L() != Z.L)
        throw Error(ErrorCode::GridMismatch, "grids disagree");
    const double omega = 1.0 / (Z.T * Z.L);
    SystemSample s;
    s.Z = z_vector(Z, a, b);
    s.eta = CVector::Zero(L * L);
    for (long long q = 0; q < L; ++q)
        for (long long m = 0; m < L; ++m)
            s.eta(G.column_index(int(q), int(m))) =
                omega * qp.at(a + q * P, b + m * P) * unit_root(-b * q, L * P) * unit_root(-q * m, L);
    return s;
}

} // namespace opsample
