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

#include <vector>

#include "opsample/common.hpp"
#include "opsample/gabor.hpp"
#include "opsample/support.hpp"

namespace opsample
{

// Spreading function samples on the subcells of its support, zero elsewhere.
class DiscreteSpreadingFunction
{
  public:
    explicit DiscreteSpreadingFunction(CellSupport S);

    const CellSupport &support() const { return S_; }
    cplx at(int i, int j) const;
    void set(int i, int j, cplx v); // IndexOutOfRange off the support
    const std::vector<cplx> &values() const { return v_; } // aligned with support().subcells()
    std::vector<cplx> &values() { return v_; }
    double norm() const;

  private:
    CellSupport S_;
    std::vector<cplx> v_;
};

// Uniform complex entries in the unit box on every support subcell.
DiscreteSpreadingFunction random_eta(const CellSupport &S, std::uint64_t seed);

// Grid-L2 distance |a - b| / |b| over the union of supports.
double relative_l2_error(const DiscreteSpreadingFunction &a, const DiscreteSpreadingFunction &b);

// g = sum_n c_n e^{pi i T a n^2} delta_{nT}
struct IdentifierTrain
{
    double T = 1.0;
    Window weights;
    double chirp_a = 0.0;
};

// Chirp rate as an integer multiple s of W = 1/(T L); NonIntegerChirpPeriod otherwise.
long long chirp_steps(double a, double T, int L);

// Delta weight w_n, exact for grid-aligned chirps.
cplx train_weight(const IdentifierTrain &g, long long n);

struct ChannelResponse
{
    double T = 1.0;
    int L = 1;
    int P = 8;
    std::vector<cplx> samples; // L P^2 samples, step T/P
    double x_step() const { return T / P; }
};

// Z(i, k), i in [0, L P), k in [0, P); t = i T/P, nu = k W/P
struct ZakGrid
{
    double T = 1.0;
    int L = 1;
    int P = 8;
    std::vector<cplx> data; // i * P + k
    // Extended quasi-periodically in i and periodically in k.
    cplx at(long long i, long long k) const;
};

// Quasiperiodization over [0, 1/W) x [0, 1/T), index I * L P + J.
struct QuasiGrid
{
    double T = 1.0;
    int L = 1;
    int P = 8;
    std::vector<cplx> data;
    cplx at(long long I, long long J) const;
};

// h(x_n, t_i) = dnu sum_j eta(i, j) e^{2 pi i nu_j (x_n - t_i)}
cplx impulse_response(const DiscreteSpreadingFunction &eta, long long n, int i);

// h(., t_i) over one superperiod
std::vector<cplx> impulse_response_row(const DiscreteSpreadingFunction &eta, int i);

ChannelResponse apply_channel(const DiscreteSpreadingFunction &eta, const IdentifierTrain &g);

ZakGrid zak_transform(const ChannelResponse &f, double a);
ZakGrid zak_transform(const ChannelResponse &f);

QuasiGrid quasiperiodize(const DiscreteSpreadingFunction &eta);

// Z-vector at any grid base point (a, b): Z(a + pP, b) e^{-2 pi i nu p T}
CVector z_vector(const ZakGrid &Z, long long a, long long b);

struct SystemSample
{
    CVector Z;   // L
    CVector eta; // L^2, column order of GaborMatrix
};

SystemSample assemble_system(const QuasiGrid &qp, const ZakGrid &Z, const GaborMatrix &G, int a, int b);

} // namespace opsample
