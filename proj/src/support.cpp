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

#include "opsample/support.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace opsample
{

CellSupport::CellSupport(double T, int L, int P) : T_(T), L_(L), P_(P)
{
    if (!(T > 0.0) || !std::isfinite(T))
        throw Error(ErrorCode::InvalidParameters, "T must be positive");
    if (L < 1)
        throw Error(ErrorCode::InvalidParameters, "L must be >= 1");
    if (P < 1)
        throw Error(ErrorCode::InvalidParameters, "P must be >= 1");
}

CellSupport CellSupport::from_cells(double T, int L, int P, const std::vector<Cell> &cells, int shift_i,
                                    int shift_j)
{
    std::vector<Subcell> sub;
    sub.reserve(cells.size() * std::size_t(P) * std::size_t(P));
    for (const Cell &c : cells)
        for (int a = 0; a < P; ++a)
            for (int b = 0; b < P; ++b)
                sub.push_back({c.q * P + a + shift_i, c.m * P + b + shift_j});
    return from_subcells(T, L, P, std::move(sub), shift_i, shift_j);
}

CellSupport CellSupport::from_cells_masked(double T, int L, int P, const std::vector<Cell> &cells,
                                           const std::vector<std::uint8_t> &mask, int shift_i, int shift_j)
{
    const long long n = (long long)L * P;
    if ((long long)mask.size() != n * n)
        throw Error(ErrorCode::InvalidParameters, "fine mask must have (L P)^2 entries");
    std::vector<Subcell> sub;
    for (const Cell &c : cells)
    {
        const long long I0 = pmod(c.q, L) * P, J0 = pmod(c.m, L) * P;
        for (int a = 0; a < P; ++a)
            for (int b = 0; b < P; ++b)
                if (mask[std::size_t((I0 + a) * n + J0 + b)])
                    sub.push_back({c.q * P + a + shift_i, c.m * P + b + shift_j});
    }
    return from_subcells(T, L, P, std::move(sub), shift_i, shift_j);
}

CellSupport CellSupport::from_subcells(double T, int L, int P, std::vector<Subcell> subcells, int shift_i,
                                       int shift_j)
{
    CellSupport S(T, L, P);
    std::sort(subcells.begin(), subcells.end());
    subcells.erase(std::unique(subcells.begin(), subcells.end()), subcells.end());
    S.sub_ = std::move(subcells);
    S.shift_i_ = shift_i;
    S.shift_j_ = shift_j;
    return S;
}

bool CellSupport::contains(int i, int j) const { return index_of(i, j) >= 0; }

long long CellSupport::index_of(int i, int j) const
{
    Subcell key{i, j};
    auto it = std::lower_bound(sub_.begin(), sub_.end(), key);
    if (it == sub_.end() || *it != key)
        return -1;
    return it - sub_.begin();
}

std::vector<Cell> CellSupport::cells() const
{
    std::vector<Cell> out;
    for (const Subcell &s : sub_)
        out.push_back({int(floor_div(s.i - shift_i_, P_)), int(floor_div(s.j - shift_j_, P_))});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool CellSupport::cell_level() const
{
    return sub_.size() == cells().size() * std::size_t(P_) * std::size_t(P_);
}

std::optional<std::vector<std::uint8_t>> CellSupport::fine_mask() const
{
    if (cell_level())
        return std::nullopt;
    const long long n = base();
    std::vector<std::uint8_t> mask(std::size_t(n * n), 0);
    for (const Subcell &s : sub_)
        mask[std::size_t(pmod(s.i - shift_i_, n) * n + pmod(s.j - shift_j_, n))] = 1;
    return mask;
}

bool CellSupport::same_grid(const CellSupport &o) const
{
    return L_ == o.L_ && P_ == o.P_ && std::abs(T_ - o.T_) <= 1e-12 * T_;
}

CellSupport CellSupport::united(const CellSupport &o) const
{
    if (!same_grid(o))
        throw Error(ErrorCode::GridMismatch, "supports live on different grids");
    std::vector<Subcell> all = sub_;
    all.insert(all.end(), o.sub_.begin(), o.sub_.end());
    return from_subcells(T_, L_, P_, std::move(all), shift_i_, shift_j_);
}

std::vector<FoldedSubcell> fold(const CellSupport &S)
{
    const long long P = S.P(), n = S.base();
    std::vector<FoldedSubcell> out;
    out.reserve(S.size());
    for (const Subcell &s : S.subcells())
    {
        FoldedSubcell f;
        f.s = s;
        const long long I = pmod(s.i, n), J = pmod(s.j, n);
        f.a = int(I % P);
        f.b = int(J % P);
        f.cell = {int(I / P), int(J / P)};
        f.kt = floor_div(s.i, n);
        f.kn = floor_div(s.j, n);
        out.push_back(f);
    }
    return out;
}

bool check_fundamental_domain(const CellSupport &S)
{
    const long long n = S.base();
    std::vector<std::uint8_t> hit(std::size_t(n * n), 0);
    for (const Subcell &s : S.subcells())
    {
        auto &h = hit[std::size_t(pmod(s.i, n) * n + pmod(s.j, n))];
        if (h)
            return false;
        h = 1;
    }
    return true;
}

std::vector<int> periodization_count(const CellSupport &S)
{
    const long long P = S.P();
    std::vector<int> count(std::size_t(P * P), 0);
    for (const Subcell &s : S.subcells())
        ++count[std::size_t(pmod(s.i, P) * P + pmod(s.j, P))];
    return count;
}

int max_cover(const CellSupport &S)
{
    auto c = periodization_count(S);
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end());
}

bool check_identifiable(const CellSupport &S)
{
    return check_fundamental_domain(S) && max_cover(S) <= S.L();
}

bool is_exact_cover(const CellSupport &S)
{
    for (int c : periodization_count(S))
        if (c != S.L())
            return false;
    return true;
}

FoldedMask::FoldedMask(const CellSupport &S) : L_(S.L()), P_(S.P())
{
    const long long n = S.base();
    bits_.assign(std::size_t(n * n), 0);
    for (const Subcell &s : S.subcells())
        bits_[std::size_t(pmod(s.i, n) * n + pmod(s.j, n))] = 1;
}

bool FoldedMask::occupied(long long I, long long J) const
{
    const long long n = (long long)L_ * P_;
    return bits_[std::size_t(pmod(I, n) * n + pmod(J, n))] != 0;
}

std::vector<Cell> FoldedMask::pattern(long long a, long long b) const
{
    std::vector<Cell> out;
    for (int q = 0; q < L_; ++q)
        for (int m = 0; m < L_; ++m)
            if (occupied(a + (long long)q * P_, b + (long long)m * P_))
                out.push_back({q, m});
    return out;
}

std::vector<Cell> occupancy_pattern(const CellSupport &S, int a, int b)
{
    return FoldedMask(S).pattern(a, b);
}

RectificationReport rectify(const CellSupport &S)
{
    RectificationReport rep;
    rep.max_cover = max_cover(S);
    rep.identifiable = check_fundamental_domain(S) && rep.max_cover <= S.L();
    if (!rep.identifiable)
        throw Error(ErrorCode::NotIdentifiable,
                    "support is not identifiable (cover " + std::to_string(rep.max_cover) + ", L " +
                        std::to_string(S.L()) + ")");
    const int P = S.P();
    FoldedMask mask(S);
    std::map<std::vector<Cell>, std::size_t> index;
    std::vector<Cell> all;
    for (int a = 0; a < P; ++a)
        for (int b = 0; b < P; ++b)
        {
            auto pat = mask.pattern(a, b);
            auto it = index.find(pat);
            if (it == index.end())
            {
                it = index.emplace(pat, rep.classes.size()).first;
                rep.classes.push_back({pat, {}});
                all.insert(all.end(), pat.begin(), pat.end());
            }
            rep.classes[it->second].base_points.emplace_back(a, b);
        }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    rep.gamma = std::move(all);
    return rep;
}

double bandwidth(const CellSupport &S)
{
    std::map<int, int> column;
    for (const Subcell &s : S.subcells())
        ++column[s.i];
    int best = 0;
    for (const auto &[i, n] : column)
        best = std::max(best, n);
    return best * S.dnu();
}

int jordan_rectification_bound(double A, double B, double U, int N, double eps, double sigma)
{
    if (!(A > 0) || !(B > 0) || !(U > 0) || !(eps > 0) || !(sigma > 0) || sigma > 1 || N < 1)
        throw Error(ErrorCode::InvalidParameters, "bound needs A, B, U, eps > 0, 0 < sigma <= 1, N >= 1");
    auto ok = [&](long long L) {
        double l = double(L);
        return A <= (l - 1) / 2 && B <= (l - 1) / 2 && 4.0 * (U / std::sqrt(l) + N / l) <= eps;
    };
    long long L = (long long)std::ceil(std::max(2 * A + 1, 2 * B + 1));
    // sqrt(L) >= (4U + sqrt(16U^2 + 16 eps N)) / (2 eps) from the quadratic in sqrt(L)
    double x = (4 * U + std::sqrt(16 * U * U + 16 * eps * N)) / (2 * eps);
    double guess = std::floor(x * x) - 2;
    if (guess > 4e18)
        throw Error(ErrorCode::InvalidParameters, "bound exceeds integer range");
    L = std::max(L, (long long)std::max(1.0, guess));
    while (L > 1 && ok(L - 1) && L - 1 >= (long long)std::ceil(std::max(2 * A + 1, 2 * B + 1)))
        --L;
    while (!ok(L))
        ++L;
    if (L > 2147483647LL)
        throw Error(ErrorCode::InvalidParameters, "bound exceeds int range");
    return int(L);
}

} // namespace opsample
