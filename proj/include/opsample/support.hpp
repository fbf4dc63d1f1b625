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
#include "opsample/gabor.hpp"

namespace opsample
{

// Subcell (i, j) covers [i T/P, (i+1) T/P) x [j W/P, (j+1) W/P), W = 1/(T L).
// Samples of the spreading function sit at the lower-left corner.
struct Subcell
{
    int i = 0;
    int j = 0;
    auto operator<=>(const Subcell &) const = default;
};

// Spreading support at subcell resolution. Cells may lie outside {0..L-1}^2,
// which is how supports that straddle the fundamental rectangle are written.
class CellSupport
{
  public:
    CellSupport(double T, int L, int P = 8);

    // Full cells, optionally shifted by (shift_i, shift_j) subcells.
    static CellSupport from_cells(double T, int L, int P, const std::vector<Cell> &cells,
                                  int shift_i = 0, int shift_j = 0);

    // mask has (L P)^2 entries indexed I * L P + J over the folded base grid;
    // cell (q,m) keeps subcell (a,b) iff mask at ((q mod L) P + a, (m mod L) P + b).
    static CellSupport from_cells_masked(double T, int L, int P, const std::vector<Cell> &cells,
                                         const std::vector<std::uint8_t> &mask,
                                         int shift_i = 0, int shift_j = 0);

    static CellSupport from_subcells(double T, int L, int P, std::vector<Subcell> subcells,
                                     int shift_i = 0, int shift_j = 0);

    double T() const { return T_; }
    int L() const { return L_; }
    int P() const { return P_; }
    double omega() const { return 1.0 / (T_ * L_); }
    double dt() const { return T_ / P_; }
    double dnu() const { return omega() / P_; }
    int base() const { return L_ * P_; }            // subcells per fundamental side
    long long superperiod() const { return (long long)L_ * P_ * P_; } // x samples

    int shift_i() const { return shift_i_; }
    int shift_j() const { return shift_j_; }
    double shift_t() const { return shift_i_ * dt(); }
    double shift_nu() const { return shift_j_ * dnu(); }

    const std::vector<Subcell> &subcells() const { return sub_; }
    std::size_t size() const { return sub_.size(); }
    bool empty() const { return sub_.empty(); }
    bool contains(int i, int j) const;
    long long index_of(int i, int j) const; // position in subcells(), -1 if absent

    // Active cells relative to the shift.
    std::vector<Cell> cells() const;
    bool cell_level() const; // every active cell full

    // Folded (L P)^2 mask of the shift-relative positions; nullopt for cell-level supports.
    std::optional<std::vector<std::uint8_t>> fine_mask() const;

    double area() const { return double(sub_.size()) * dt() * dnu(); }
    bool same_grid(const CellSupport &o) const;
    CellSupport united(const CellSupport &o) const;

  private:
    double T_;
    int L_;
    int P_;
    int shift_i_ = 0;
    int shift_j_ = 0;
    std::vector<Subcell> sub_;
};

// Where a support subcell lands after folding.
struct FoldedSubcell
{
    Subcell s;      // absolute
    int a = 0;      // base subcell within [0,T) x [0,W)
    int b = 0;
    Cell cell;      // folded cell, 0 <= q,m < L
    long long kt = 0; // s.i = a + q P + kt L P
    long long kn = 0; // s.j = b + m P + kn L P
};

std::vector<FoldedSubcell> fold(const CellSupport &S);

bool check_fundamental_domain(const CellSupport &S);

// Count of (kT, l W)-translates of S covering each base subcell, index a * P + b.
std::vector<int> periodization_count(const CellSupport &S);

int max_cover(const CellSupport &S);

bool check_identifiable(const CellSupport &S);

// Every base subcell covered exactly L times.
bool is_exact_cover(const CellSupport &S);

struct PartitionClass
{
    std::vector<Cell> gamma;                     // row-major (q then m)
    std::vector<std::pair<int, int>> base_points; // (a, b)
};

struct RectificationReport
{
    std::vector<Cell> gamma;
    std::vector<PartitionClass> classes;
    int max_cover = 0;
    bool identifiable = false;
};

// Occupancy of the folded (L P)^2 grid.
class FoldedMask
{
  public:
    explicit FoldedMask(const CellSupport &S);
    bool occupied(long long I, long long J) const;
    // Cells (q,m) with (a + qP, b + mP) occupied, row-major; a, b any integers.
    std::vector<Cell> pattern(long long a, long long b) const;

  private:
    int L_, P_;
    std::vector<std::uint8_t> bits_;
};

std::vector<Cell> occupancy_pattern(const CellSupport &S, int a, int b);

RectificationReport rectify(const CellSupport &S);

// Largest column measure, (true subcells in a t-column) * W / P.
double bandwidth(const CellSupport &S);

int jordan_rectification_bound(double A, double B, double U, int N, double eps, double sigma);

} // namespace opsample
