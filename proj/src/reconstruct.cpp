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

#include "opsample/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace opsample
{

const char *formula_name(Formula f)
{
    switch (f)
    {
    case Formula::Sharp: return "sharp";
    case Formula::Multiclass: return "multiclass";
    case Formula::Smooth: return "smooth";
    case Formula::Symplectic: return "symplectic";
    }
    return "unknown";
}

LeftInverse left_inverse(const GaborMatrix &G, const std::vector<Cell> &gamma, double omega, double tol)
{
    const int L = G.L();
    if (int(gamma.size()) > L)
        throw Error(ErrorCode::RankDeficient,
                    std::to_string(gamma.size()) + " columns cannot be independent in C^" + std::to_string(L));
    LeftInverse li;
    li.gamma = gamma;
    if (gamma.empty())
    {
        li.b = CMatrix(0, L);
        return li;
    }
    const CMatrix A = G.columns(gamma);
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &s = svd.singularValues();
    const double smax = s(0), smin = s(s.size() - 1);
    if (!(smax > 0.0) || smin <= tol * smax)
        throw Error(ErrorCode::RankDeficient, "restricted Gabor columns are numerically dependent");
    li.condition_number = smax / smin;
    const Eigen::VectorXd inv = s.cwiseInverse();
    const CMatrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    li.b.resize(pinv.rows(), pinv.cols());
    for (std::size_t k = 0; k < gamma.size(); ++k)
    {
        const cplx ph = unit_root((long long)gamma[k].q * gamma[k].m, L) / omega;
        li.b.row(Eigen::Index(k)) = ph * pinv.row(Eigen::Index(k));
    }
    return li;
}

namespace
{

void check_grids(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S)
{
    if (Z.L != S.L() || Z.P != S.P() || std::abs(Z.T - S.T()) > 1e-12 * S.T() || G.L() != S.L())
        throw Error(ErrorCode::GridMismatch, "Zak grid, window and support disagree on T, L or P");
}

void finish(ReconstructionReport &rep, const DiscreteSpreadingFunction *truth)
{
    if (truth)
        rep.relative_l2_error = relative_l2_error(rep.eta_hat, *truth);
}

// Lift folded quasiperiodization values back to the support subcells.
void unfold_into(DiscreteSpreadingFunction &eta, const std::vector<cplx> &qp)
{
    const CellSupport &S = eta.support();
    const long long n = S.base();
    const auto folded = fold(S);
    for (std::size_t k = 0; k < folded.size(); ++k)
    {
        const auto &f = folded[k];
        const long long I = pmod(f.s.i, n), J = pmod(f.s.j, n);
        eta.values()[k] = qp[std::size_t(I * n + J)] * unit_root(J * f.kt, S.P());
    }
}

} // namespace

ReconstructionReport recover_eta_known_support(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                               const RectificationReport &rect,
                                               const DiscreteSpreadingFunction *truth)
{
    check_grids(Z, G, S);
    if (!rect.identifiable)
        throw Error(ErrorCode::NotIdentifiable, "support is not identifiable");
    const long long L = S.L(), P = S.P(), n = S.base();
    ReconstructionReport rep{DiscreteSpreadingFunction(S), std::nullopt, {}, {}, Formula::Sharp, rect.gamma};
    std::vector<cplx> qp(std::size_t(n * n), cplx(0.0, 0.0));
    for (const auto &cls : rect.classes)
    {
        if (cls.gamma.empty())
            continue;
        ClassSolve solve{left_inverse(G, cls.gamma, S.omega()), cls.base_points};
        rep.per_class_conditioning.push_back(solve.inverse.condition_number);
        for (const auto &[a, b] : cls.base_points)
        {
            const CVector x = solve.inverse.b * z_vector(Z, a, b);
            for (std::size_t k = 0; k < cls.gamma.size(); ++k)
            {
                const long long q = cls.gamma[k].q, m = cls.gamma[k].m;
                qp[std::size_t((a + q * P) * n + b + m * P)] = x(Eigen::Index(k)) * unit_root(b * q, L * P);
            }
        }
        rep.classes.push_back(std::move(solve));
    }
    rep.formula = rep.classes.size() > 1 ? Formula::Multiclass : Formula::Sharp;
    unfold_into(rep.eta_hat, qp);
    finish(rep, truth);
    return rep;
}

ReconstructionReport recover_eta_known_support(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                               const DiscreteSpreadingFunction *truth)
{
    return recover_eta_known_support(Z, G, S, rectify(S), truth);
}

cplx ImpulseResponseGrid::at(long long n, int i) const
{
    auto it = std::lower_bound(rows.begin(), rows.end(), i);
    if (it == rows.end() || *it != i)
        return {0.0, 0.0};
    return values[std::size_t(it - rows.begin())][std::size_t(pmod(n, N))];
}

ImpulseResponseGrid impulse_response_grid(const DiscreteSpreadingFunction &eta)
{
    ImpulseResponseGrid H;
    H.N = eta.support().superperiod();
    for (const Subcell &s : eta.support().subcells())
        if (H.rows.empty() || H.rows.back() != s.i)
            H.rows.push_back(s.i);
    for (int i : H.rows)
        H.values.push_back(impulse_response_row(eta, i));
    return H;
}

ImpulseResponseGrid reconstruct_h_sharp(const ReconstructionReport &report, const ChannelResponse &Hg)
{
    const CellSupport &S = report.eta_hat.support();
    const long long L = S.L(), P = S.P(), n = S.base(), N = S.superperiod();
    if (Hg.L != S.L() || Hg.P != S.P() || (long long)Hg.samples.size() != N)
        throw Error(ErrorCode::GridMismatch, "response grid disagrees with the report");
    if (report.classes.empty() && !S.empty())
        throw Error(ErrorCode::InvalidParameters, "report carries no class solves");

    // base point -> class
    std::vector<int> class_of(std::size_t(P * P), -1);
    for (std::size_t c = 0; c < report.classes.size(); ++c)
        for (const auto &[a, b] : report.classes[c].base_points)
            class_of[std::size_t(a * P + b)] = int(c);

    const auto tw = unit_root_table(N);
    ImpulseResponseGrid H;
    H.N = N;
    const auto folded = fold(S);
    std::size_t k = 0;
    while (k < folded.size())
    {
        const int i = folded[k].s.i;
        // kernels Phi for each (class, cell) met in this row
        std::map<std::pair<int, int>, std::vector<cplx>> phi;
        for (; k < folded.size() && folded[k].s.i == i; ++k)
        {
            const auto &f = folded[k];
            const int c = class_of[std::size_t(f.a * P + f.b)];
            const auto &gamma = report.classes[std::size_t(c)].inverse.gamma;
            const int g = int(std::find(gamma.begin(), gamma.end(), f.cell) - gamma.begin());
            auto &v = phi[{c, g}];
            if (v.empty())
                v.assign(std::size_t(N), cplx(0.0, 0.0));
            for (long long s = 0; s < N; ++s)
                v[std::size_t(s)] += tw[std::size_t(pmod((long long)f.s.j * s, N))];
        }
        std::vector<cplx> row(std::size_t(N), cplx(0.0, 0.0));
        for (auto &[key, kernel] : phi)
        {
            const auto &inv = report.classes[std::size_t(key.first)].inverse;
            const long long q = inv.gamma[std::size_t(key.second)].q, m = inv.gamma[std::size_t(key.second)].m;
            // one superperiod of kappa
            for (long long kappa = 0; kappa < n; ++kappa)
            {
                const cplx coef = inv.b(key.second, Eigen::Index(pmod(kappa, L))) * unit_root(-m * (q - kappa), L) *
                                  Hg.samples[std::size_t(pmod(i - (q - kappa) * P, N))] * S.dnu();
                if (coef == cplx(0.0, 0.0))
                    continue;
                const long long shift = (q - kappa) * P - i;
                for (long long x = 0; x < N; ++x)
                    row[std::size_t(x)] += coef * kernel[std::size_t(pmod(x + shift, N))];
            }
        }
        H.rows.push_back(i);
        H.values.push_back(std::move(row));
    }
    return H;
}

SmoothWindows smooth_windows(double T, double Omega, double eps, int P)
{
    if (!(T > 0) || !(Omega > 0) || P < 1)
        throw Error(ErrorCode::InvalidParameters, "T, Omega and P must be positive");
    if (!(eps > 0) || eps >= 0.5)
        throw Error(ErrorCode::InvalidOverlap, "overlap must lie in (0, 1/2) of a cell side");
    const double w = eps * P;
    const double wr = std::round(w);
    if (std::abs(w - wr) > 1e-9 || wr < 1)
        throw Error(ErrorCode::InvalidOverlap, "overlap must be a whole number of grid steps");
    SmoothWindows W;
    W.P = P;
    W.width = int(wr);
    return W;
}

namespace
{

// Edge ramp: 0 below -w/2, 1 above w/2, rho(u) + rho(-u) == 1 exactly.
double ramp(long long u, int w)
{
    if (2 * u <= -w)
        return 0.0;
    if (2 * u >= w)
        return 1.0;
    if (u < 0)
        return 1.0 - ramp(-u, w);
    return 0.5 * (1.0 + std::sin(3.14159265358979323846 * double(u) / double(w)));
}

} // namespace

double SmoothWindows::r(long long a) const { return 2 * a <= P ? ramp(a, width) : ramp(P - a, width); }

double SmoothWindows::phi(long long b) const { return r(b); }

ReconstructionReport recover_eta_smooth(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S,
                                        const SmoothWindows &W, const DiscreteSpreadingFunction *truth)
{
    check_grids(Z, G, S);
    if (W.P != S.P())
        throw Error(ErrorCode::GridMismatch, "windows built for another P");
    if (!check_identifiable(S))
        throw Error(ErrorCode::NotIdentifiable, "support is not identifiable");
    const long long L = S.L(), P = S.P(), n = S.base();
    const FoldedMask mask(S);
    std::map<std::vector<Cell>, LeftInverse> cache;
    ReconstructionReport rep{DiscreteSpreadingFunction(S), std::nullopt, {}, {}, Formula::Smooth, {}};

    std::vector<cplx> qp(std::size_t(n * n), cplx(0.0, 0.0));
    std::vector<std::uint8_t> done(std::size_t(n * n), 0);
    for (const auto &f : fold(S))
    {
        const long long I = pmod(f.s.i, n), J = pmod(f.s.j, n);
        if (done[std::size_t(I * n + J)])
            continue;
        done[std::size_t(I * n + J)] = 1;
        cplx acc(0.0, 0.0);
        // every window r(t - uT) phi(nu - vW) that reaches (I, J)
        for (long long u = floor_div(I, P) - 1; u <= floor_div(I, P) + 1; ++u)
        {
            const long long a = I - u * P;
            const double ra = W.r(a);
            if (ra == 0.0)
                continue;
            for (long long v = floor_div(J, P) - 1; v <= floor_div(J, P) + 1; ++v)
            {
                const long long b = J - v * P;
                const double wb = W.phi(b);
                if (wb == 0.0)
                    continue;
                const auto gamma = mask.pattern(a, b);
                auto it = cache.find(gamma);
                if (it == cache.end())
                {
                    it = cache.emplace(gamma, left_inverse(G, gamma, S.omega())).first;
                    rep.per_class_conditioning.push_back(it->second.condition_number);
                }
                const Cell target{int(pmod(u, L)), int(pmod(v, L))};
                const auto pos = std::find(gamma.begin(), gamma.end(), target) - gamma.begin();
                const CVector x = it->second.b.row(pos) * z_vector(Z, a, b);
                // entry sits at (a + q P, b + m P); (I, J) is that point moved by t L P in time
                const long long t = floor_div(u, L);
                acc += ra * wb * x(0) * unit_root(b * target.q, L * P) * unit_root(t * J, P);
            }
        }
        qp[std::size_t(I * n + J)] = acc;
    }
    for (const auto &[gamma, inv] : cache)
        rep.gamma.insert(rep.gamma.end(), gamma.begin(), gamma.end());
    std::sort(rep.gamma.begin(), rep.gamma.end());
    rep.gamma.erase(std::unique(rep.gamma.begin(), rep.gamma.end()), rep.gamma.end());
    unfold_into(rep.eta_hat, qp);
    finish(rep, truth);
    return rep;
}

CellSupport shear_support(const CellSupport &S, long long s)
{
    std::vector<Subcell> out;
    out.reserve(S.size());
    for (const Subcell &c : S.subcells())
        out.push_back({c.i, int(c.j - s * c.i)});
    return CellSupport::from_subcells(S.T(), S.L(), S.P(), std::move(out));
}

ZakGrid dechirp_zak(const ZakGrid &Z, long long s)
{
    const long long L = Z.L, P = Z.P, n = L * P, N = n * P;
    const bool odd = pmod(s, 2) == 1 && pmod(L, 2) == 1;
    if (odd && pmod(P, 2) == 1)
        throw Error(ErrorCode::NonIntegerChirpPeriod, "chirp is not periodic over the superperiod");
    ZakGrid D = Z;
    for (long long i = 0; i < n; ++i)
        for (long long k = 0; k < P; ++k)
            D.data[std::size_t(i * P + k)] =
                unit_root(-pmod(s, 2 * N) * (i * i % (2 * N)), 2 * N) * Z.at(i, k + s * i + (odd ? P / 2 : 0));
    return D;
}

ReconstructionReport recover_symplectic(const ZakGrid &Z, const GaborMatrix &G, const CellSupport &S, double a,
                                        const DiscreteSpreadingFunction *truth)
{
    check_grids(Z, G, S);
    const long long s = chirp_steps(a, S.T(), S.L());
    const long long N = S.superperiod();
    const CellSupport sheared = shear_support(S, s);
    if (!check_identifiable(sheared))
        throw Error(ErrorCode::ShearNotRectifiable, "sheared support is not identifiable");
    const ZakGrid D = dechirp_zak(Z, s);
    ReconstructionReport inner = recover_eta_known_support(D, G, sheared, rectify(sheared));
    ReconstructionReport rep{DiscreteSpreadingFunction(S), std::nullopt, inner.per_class_conditioning, {},
                             Formula::Symplectic, inner.gamma};
    const auto &sub = S.subcells();
    for (std::size_t k = 0; k < sub.size(); ++k)
    {
        const long long i = sub[k].i;
        rep.eta_hat.values()[k] = unit_root(pmod(s, 2 * N) * (i * i % (2 * N)), 2 * N) *
                                  inner.eta_hat.at(int(i), int(sub[k].j - s * i));
    }
    finish(rep, truth);
    return rep;
}

} // namespace opsample
