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

// Scaled left inverse of the Gamma-columns of G:
// sum_p b(k, p) G(p, gamma[k']) = (1/W) e^{2 pi i q m / L} [k == k'].
struct LeftInverse
{
    std::vector<Cell> gamma;
    CMatrix b; // |Gamma| x L
    double condition_number = 1.0;
};

LeftInverse left_inverse(const GaborMatrix &G, const std::vector<Cell> &gamma, double omega, double tol = 1e-9);

enum class Formula { Sharp, Multiclass, Smooth, Symplectic };
const char *formula_name(Formula f);

struct ClassSolve
{
    LeftInverse inverse;
    std::vector<std::pair<int, int>> base_points;
};

struct ReconstructionReport
{
    DiscreteSpreadingFunction eta_hat;
    std::optional<double> relative_l2_error;
    std::vector<double> per_class_conditioning;
    std::vector<ClassSolve> classes; // empty-Gamma classes omitted
    Formula formula = Formula::Sharp;
    std::vector<Cell> gamma;
};

ReconstructionReport recover_eta_known_support(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                               const RectificationReport &rect,
                                               const DiscreteSpreadingFunction *truth = nullptr);

ReconstructionReport recover_eta_known_support(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                               const DiscreteSpreadingFunction *truth = nullptr);

// h(x_n, t_i) for every support row i and every n in one superperiod.
struct ImpulseResponseGrid
{
    long long N = 0;
    std::vector<int> rows;
    std::vector<std::vector<cplx>> values;
    cplx at(long long n, int i) const;
};

ImpulseResponseGrid impulse_response_grid(const DiscreteSpreadingFunction &eta);

// Direct formula from Hg with the per-cell kernels Phi_{(q,m)}.
ImpulseResponseGrid reconstruct_h_sharp(const ReconstructionReport &report, const ChannelResponse &Hg);

// Raised-cosine partition of unity. eps is the overlap as a fraction of the cell side,
// so the transition spans eps P grid steps on both axes.
struct SmoothWindows
{
    int P = 8;
    int width = 1; // transition width in grid steps
    double r(long long a) const;   // a in grid steps from the cell's left edge
    double phi(long long b) const; // same on the nu axis
    int reach() const { return (width + 1) / 2; } // nonzero on (-width/2, P + width/2)
};

SmoothWindows smooth_windows(double T, double Omega, double eps, int P);

ReconstructionReport recover_eta_smooth(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                        const SmoothWindows &windows,
                                        const DiscreteSpreadingFunction *truth = nullptr);

// Support after (t, nu) -> (t, nu - a t / T), in subcells (i, j - s i).
CellSupport shear_support(const CellSupport &S, long long s);

// Zak grid of the dechirped response, read off the chirped one by a shear in k.
ZakGrid dechirp_zak(const ZakGrid &Z, long long s);

ReconstructionReport recover_symplectic(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S, double a,
                                        const DiscreteSpreadingFunction *truth = nullptr);

} // namespace opsample
