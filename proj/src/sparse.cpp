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

#include "opsample/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace opsample
{

namespace
{
// relative singular-value floor for the residual range and selected span
constexpr double range_tol = 1e-9;
constexpr double tie_tol = 1e-9;
} // namespace

SupportEstimate mmv_omp(const CMatrix &Y, const GaborMatrix &G, int k_max, double tol)
{
    const int L = G.L();
    if (Y.rows() != L)
        throw Error(ErrorCode::GridMismatch, "measurement rows must equal L");
    if (k_max < 0 || k_max > L)
        throw Error(ErrorCode::InvalidParameters, "k_max must lie in [0, L]");
    SupportEstimate est;
    est.k_max = k_max;
    est.tol = tol;
    const double ynorm = Y.norm();
    if (ynorm == 0.0)
    {
        est.converged = true;
        return est;
    }
    const CMatrix &A = G.entries();
    const Eigen::VectorXd cn = A.colwise().norm().transpose();
    std::vector<int> chosen;
    CMatrix R = Y;
    CMatrix Q(L, 0); // orthonormal basis of the selected columns
    double res = 1.0;
    while (int(chosen.size()) < k_max && res > tol)
    {
        // orthonormal basis of the residual's numerical range
        Eigen::JacobiSVD<CMatrix> svd(R, Eigen::ComputeThinU);
        const auto &sv = svd.singularValues();
        Eigen::Index r = 0;
        while (r < sv.size() && sv(r) > range_tol * sv(0))
            ++r;
        // a range filling the complement of the selected span carries no support information
        const bool rank_aware = r < L - Eigen::Index(chosen.size());
        const CMatrix C = rank_aware ? CMatrix(A.adjoint() * svd.matrixU().leftCols(r)) : CMatrix(A.adjoint() * R);
        int best = -1;
        double best_score = -1.0;
        for (int col = 0; col < A.cols(); ++col)
        {
            if (cn(col) == 0.0 || std::find(chosen.begin(), chosen.end(), col) != chosen.end())
                continue;
            // normalize by the part of the column outside the selected span
            const CVector perp = A.col(col) - Q * (Q.adjoint() * A.col(col));
            const double pn = perp.squaredNorm();
            if (pn <= range_tol * range_tol * cn(col) * cn(col))
                continue;
            const double score = C.row(col).squaredNorm() / pn;
            // scores within rounding of the best count as ties; the lower index stays
            if (score > best_score * (1.0 + tie_tol))
            {
                best_score = score;
                best = col;
            }
        }
        if (best < 0)
            break;
        chosen.push_back(best);
        CMatrix As(L, Eigen::Index(chosen.size()));
        for (std::size_t k = 0; k < chosen.size(); ++k)
            As.col(Eigen::Index(k)) = A.col(chosen[k]);
        Q = As.householderQr().householderQ() * CMatrix::Identity(L, Eigen::Index(chosen.size()));
        const CMatrix X = As.completeOrthogonalDecomposition().solve(Y);
        R = Y - As * X;
        res = R.norm() / ynorm;
        est.residual_history.push_back(res);
    }
    for (int col : chosen)
        est.gamma_hat.push_back(G.cell_of(col));
    est.converged = res <= tol;
    return est;
}

std::vector<std::pair<int, int>> sample_points(int a0, int b0, int w, int max_points, std::uint64_t seed)
{
    const long long total = (long long)w * w;
    std::vector<std::pair<int, int>> pts;
    if (total <= 0 || max_points <= 0)
        return pts;
    const long long stride = std::max(1LL, (total + max_points - 1) / max_points);
    const long long offset = (long long)(seed % std::uint64_t(stride));
    for (long long idx = offset; idx < total && (long long)pts.size() < max_points; idx += stride)
        pts.emplace_back(a0 + int(idx / w), b0 + int(idx % w));
    return pts;
}

CMatrix measurement_matrix(const ZakGrid &Z, const std::vector<std::pair<int, int>> &points)
{
    CMatrix Y(Z.L, Eigen::Index(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k)
        Y.col(Eigen::Index(k)) = z_vector(Z, points[k].first, points[k].second);
    return Y;
}

bool verify_uniqueness_class(const CellSupport &S1, const CellSupport &S2, double Delta)
{
    if (!S1.same_grid(S2))
        throw Error(ErrorCode::GridMismatch, "supports live on different grids");
    const double bound = Delta * S1.L();
    if (max_cover(S1) > bound + 1e-12 || max_cover(S2) > bound + 1e-12)
        return false;
    if (!check_fundamental_domain(S1) || !check_fundamental_domain(S2))
        return false;
    return check_identifiable(S1.united(S2));
}

UnknownSupportReport recover_unknown_support(const ZakGrid &Z, const GaborMatrix &G, FundamentalDomain R, int k_max,
                                             double tol, int K, std::uint64_t seed,
                                             const DiscreteSpreadingFunction *truth)
{
    const int L = Z.L, P = Z.P, n = L * P;
    if (K < 1 || P % K != 0)
        throw Error(ErrorCode::InvalidParameters, "K must divide P");
    if (G.L() != L)
        throw Error(ErrorCode::GridMismatch, "window length disagrees with the Zak grid");
    const int w = P / K;
    std::vector<Subcell> sub;
    std::vector<SupportEstimate> estimates;
    for (int ba = 0; ba < K; ++ba)
        for (int bb = 0; bb < K; ++bb)
        {
            const auto pts = sample_points(ba * w, bb * w, w, 4 * L * L, seed);
            SupportEstimate est = mmv_omp(measurement_matrix(Z, pts), G, k_max, tol);
            est.seed = seed;
            if (!est.converged)
            {
                std::string hist;
                for (double r : est.residual_history)
                    hist += (hist.empty() ? "" : ", ") + std::to_string(r);
                throw Error(ErrorCode::NoConvergence,
                            "residual above tolerance after " + std::to_string(k_max) + " steps [" + hist + "]");
            }
            for (const Cell &c : est.gamma_hat)
                for (int a = ba * w; a < (ba + 1) * w; ++a)
                    for (int b = bb * w; b < (bb + 1) * w; ++b)
                    {
                        // lift the folded point into [i0, i0 + n) x [j0, j0 + n)
                        const long long I = a + (long long)c.q * P, J = b + (long long)c.m * P;
                        sub.push_back({int(R.i0 + pmod(I - R.i0, n)), int(R.j0 + pmod(J - R.j0, n))});
                    }
            estimates.push_back(std::move(est));
        }
    CellSupport S = CellSupport::from_subcells(Z.T, L, P, std::move(sub));
    if (truth)
    {
        const bool same = S.subcells() == truth->support().subcells();
        for (auto &e : estimates)
            e.exact_match = same;
    }
    ReconstructionReport rec = recover_eta_known_support(Z, G, S, rectify(S), truth);
    return {std::move(rec), std::move(S), std::move(estimates)};
}

} // namespace opsample
