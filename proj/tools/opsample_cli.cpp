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

// Command-line front end: opsample <subcommand> [options]

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <opsample/channel.hpp>
#include <opsample/gabor.hpp>
#include <opsample/io.hpp>
#include <opsample/rates.hpp>
#include <opsample/reconstruct.hpp>
#include <opsample/sparse.hpp>
#include <opsample/support.hpp>

using namespace opsample;

namespace
{

constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;
constexpr int exit_io = 4;

int exit_code(ErrorCode c)
{
    switch (c)
    {
    case ErrorCode::RankDeficient:
    case ErrorCode::NoConvergence:
    case ErrorCode::GenerationFailed:
    case ErrorCode::SparkTargetUnmet:
    case ErrorCode::NoPrimeInRange:
        return exit_numeric;
    case ErrorCode::Io:
        return exit_io;
    default:
        return exit_usage;
    }
}

// Writes to path, or to stdout when path is empty.
void emit(const std::string &path, const std::string &text)
{
    if (path.empty())
        std::fputs(text.c_str(), stdout);
    else
        io::write_text(path, text);
}

void line(const std::string &key, double v) { std::printf("%s=%s\n", key.c_str(), io::num(v).c_str()); }

struct Global
{
    std::optional<std::uint64_t> seed;
    int threads = 0;

    std::uint64_t resolved_seed() const
    {
        if (seed)
            return *seed;
        if (const char *env = std::getenv("OPSAMPLE_SEED"))
        {
            try
            {
                return std::stoull(env);
            }
            catch (const std::exception &)
            {
                throw Error(ErrorCode::InvalidParameters, "OPSAMPLE_SEED is not an unsigned integer");
            }
        }
        return 0;
    }
};

CellSupport load_support(const std::string &path) { return io::parse_support(io::read_text(path)); }
Window load_window(const std::string &path) { return io::parse_window(io::read_text(path)); }

ZakGrid load_zak(const std::string &zak, const std::string &response)
{
    if (!zak.empty())
        return io::parse_zak(io::read_text(zak));
    if (!response.empty())
        return zak_transform(io::parse_response(io::read_text(response)));
    throw Error(ErrorCode::InvalidParameters, "give --zak or --response");
}

// Max over base points of |Z - G eta| / (1 + |eta|).
double system_residual(const DiscreteSpreadingFunction &eta, const ZakGrid &Z, const GaborMatrix &G)
{
    const auto Q = quasiperiodize(eta);
    double worst = 0.0;
    for (int a = 0; a < Z.P; ++a)
        for (int b = 0; b < Z.P; ++b)
        {
            const auto s = assemble_system(Q, Z, G, a, b);
            worst = std::max(worst, (s.Z - G.entries() * s.eta).norm() / (1.0 + s.eta.norm()));
        }
    return worst;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"opsample: sampling and identification of bandlimited operators"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "random seed (falls back to OPSAMPLE_SEED, then 0)");
    app.add_option("--threads", g.threads, "worker cap for parallel searches")->check(CLI::NonNegativeNumber);

    // gen-window
    auto *gw = app.add_subcommand("gen-window", "draw a window with a certified spark");
    int gw_L = 0, gw_k = 0, gw_draws = 100;
    std::string gw_target = "full", gw_out;
    gw->add_option("--L", gw_L, "window length")->required();
    gw->add_option("--target", gw_target, "full or spark_k")->check(CLI::IsMember({"full", "spark_k"}));
    gw->add_option("--k", gw_k, "nonzero count for spark_k");
    gw->add_option("--max-draws", gw_draws, "draw budget");
    gw->add_option("--out", gw_out, "window JSON path (stdout if omitted)");

    // spark
    auto *sp = app.add_subcommand("spark", "certify the spark of a window's Gabor matrix");
    std::string sp_window, sp_csv;
    bool sp_minors = false;
    sp->add_option("--window", sp_window, "window JSON")->required();
    sp->add_option("--gabor-csv", sp_csv, "also write the Gabor matrix as CSV");
    sp->add_flag("--minors", sp_minors, "also test that all minors are nonzero");

    // rectify
    auto *rc = app.add_subcommand("rectify", "identifiability and partition classes of a support");
    std::string rc_support, rc_out;
    rc->add_option("--support", rc_support, "support JSON")->required();
    rc->add_option("--out", rc_out, "report JSON path (stdout if omitted)");

    // simulate
    auto *sm = app.add_subcommand("simulate", "apply a channel to a delta-train identifier");
    std::string sm_support, sm_eta, sm_window, sm_resp, sm_zak, sm_eta_out;
    double sm_chirp = 0.0;
    sm->add_option("--support", sm_support, "support JSON")->required();
    sm->add_option("--window", sm_window, "window JSON")->required();
    sm->add_option("--eta", sm_eta, "spreading function CSV (random from --seed if omitted)");
    sm->add_option("--chirp", sm_chirp, "chirp rate a");
    sm->add_option("--out-response", sm_resp, "response CSV path");
    sm->add_option("--out-zak", sm_zak, "Zak grid CSV path");
    sm->add_option("--out-eta", sm_eta_out, "write the spreading function used");

    // identify
    auto *id = app.add_subcommand("identify", "recover the spreading function from a response");
    std::string id_zak, id_resp, id_window, id_support, id_truth, id_eta_out, id_report, id_support_out;
    bool id_unknown = false;
    int id_kmax = 0, id_K = 1;
    double id_tol = 1e-9, id_chirp = 0.0, id_smooth = 0.0;
    std::vector<int> id_domain{0, 0};
    id->add_option("--zak", id_zak, "Zak grid CSV");
    id->add_option("--response", id_resp, "response CSV (Zak grid computed)");
    id->add_option("--window", id_window, "window JSON")->required();
    id->add_option("--support", id_support, "support JSON (known-support mode)");
    id->add_flag("--unknown-support", id_unknown, "estimate the support first");
    id->add_option("--kmax", id_kmax, "iteration cap for support estimation");
    id->add_option("--tol", id_tol, "relative residual tolerance");
    id->add_option("--K", id_K, "block subdivision of the base rectangle");
    id->add_option("--domain", id_domain, "fundamental domain origin i0 j0 in subcells")->expected(2);
    id->add_option("--chirp", id_chirp, "chirp rate a of the identifier (symplectic path)");
    id->add_option("--smooth", id_smooth, "overlap fraction for smooth windows");
    id->add_option("--truth", id_truth, "ground-truth spreading function CSV");
    id->add_option("--out-eta", id_eta_out, "recovered spreading function CSV");
    id->add_option("--out-report", id_report, "report JSON path (stdout if omitted)");
    id->add_option("--out-support", id_support_out, "estimated support JSON (unknown-support mode)");

    // recover-support
    auto *rs = app.add_subcommand("recover-support", "estimate the active cells from a response");
    std::string rs_zak, rs_resp, rs_window, rs_out, rs_support_out;
    int rs_kmax = 0, rs_K = 1;
    double rs_tol = 1e-9;
    std::vector<int> rs_domain{0, 0};
    rs->add_option("--zak", rs_zak, "Zak grid CSV");
    rs->add_option("--response", rs_resp, "response CSV");
    rs->add_option("--window", rs_window, "window JSON")->required();
    rs->add_option("--kmax", rs_kmax, "iteration cap")->required();
    rs->add_option("--tol", rs_tol, "relative residual tolerance");
    rs->add_option("--K", rs_K, "block subdivision of the base rectangle");
    rs->add_option("--domain", rs_domain, "fundamental domain origin i0 j0 in subcells")->expected(2);
    rs->add_option("--out", rs_out, "estimate JSON path (stdout if omitted)");
    rs->add_option("--out-support", rs_support_out, "estimated support JSON");

    // rates
    auto *rt = app.add_subcommand("rates", "sampling-rate diagnostics and bunched plans");
    std::string rt_support, rt_window, rt_out, rt_plan_window;
    std::optional<double> rt_eps;
    bool rt_plan = false;
    rt->add_option("--support", rt_support, "support JSON")->required();
    rt->add_option("--window", rt_window, "window JSON (report mode)");
    rt->add_option("--eps", rt_eps, "area slack");
    rt->add_flag("--plan", rt_plan, "build a bunched window plan");
    rt->add_option("--out", rt_out, "report JSON path (stdout if omitted)");
    rt->add_option("--out-window", rt_plan_window, "bunched window JSON");

    // verify
    auto *vf = app.add_subcommand("verify", "check the linear-system identity on files");
    std::string vf_support, vf_eta, vf_window, vf_zak, vf_resp;
    double vf_tol = 1e-10;
    vf->add_option("--support", vf_support, "support JSON")->required();
    vf->add_option("--eta", vf_eta, "spreading function CSV")->required();
    vf->add_option("--window", vf_window, "window JSON")->required();
    vf->add_option("--zak", vf_zak, "Zak grid CSV");
    vf->add_option("--response", vf_resp, "response CSV");
    vf->add_option("--tol", vf_tol, "residual bound");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (g.threads > 0)
            set_max_threads(g.threads);
        const std::uint64_t seed = g.resolved_seed();

        if (*gw)
        {
            const SparkTarget target =
                gw_target == "full" ? SparkTarget::full() : SparkTarget::spark_k(gw_k);
            const Window c = generate_window(gw_L, target, seed, gw_draws);
            emit(gw_out, io::window_json(c));
            std::printf("spark=%d\n", spark(GaborMatrix(c)));
            std::printf("draws=%d\n", c.draws);
        }
        else if (*sp)
        {
            GaborMatrix G(load_window(sp_window));
            std::printf("spark=%d\n", spark(G));
            if (sp_minors)
                std::printf("minors_nonzero=%s\n", minors_nonzero(G) ? "true" : "false");
            if (!sp_csv.empty())
                io::write_text(sp_csv, io::gabor_csv(G));
        }
        else if (*rc)
        {
            const auto S = load_support(rc_support);
            emit(rc_out, io::rectification_json(rectify(S), S));
        }
        else if (*sm)
        {
            const auto S = load_support(sm_support);
            const Window c = load_window(sm_window);
            const auto eta = sm_eta.empty() ? random_eta(S, seed) : io::parse_eta(io::read_text(sm_eta), S);
            const auto f = apply_channel(eta, IdentifierTrain{S.T(), c, sm_chirp});
            const auto Z = zak_transform(f);
            if (!sm_resp.empty())
                io::write_text(sm_resp, io::response_csv(f));
            if (!sm_zak.empty())
                io::write_text(sm_zak, io::zak_csv(Z));
            if (!sm_eta_out.empty())
                io::write_text(sm_eta_out, io::eta_csv(eta));
            double e = 0.0;
            for (auto v : f.samples)
                e += std::norm(v);
            line("response_norm", std::sqrt(e));
            if (sm_chirp == 0.0)
                line("system_residual", system_residual(eta, Z, GaborMatrix(c)));
        }
        else if (*id)
        {
            const Window c = load_window(id_window);
            GaborMatrix G(c);
            const ZakGrid Z = load_zak(id_zak, id_resp);
            std::optional<DiscreteSpreadingFunction> truth;
            std::optional<CellSupport> S;
            if (!id_support.empty())
                S = load_support(id_support);
            if (!id_truth.empty())
            {
                if (!S)
                    throw Error(ErrorCode::InvalidParameters, "--truth needs --support for its grid");
                truth = io::parse_eta(io::read_text(id_truth), *S);
            }
            const DiscreteSpreadingFunction *tp = truth ? &*truth : nullptr;
            if (id_unknown)
            {
                if (id_kmax < 1)
                    throw Error(ErrorCode::InvalidParameters, "--unknown-support needs --kmax >= 1");
                const auto rep =
                    recover_unknown_support(Z, G, {id_domain[0], id_domain[1]}, id_kmax, id_tol, id_K, seed, tp);
                if (!id_eta_out.empty())
                    io::write_text(id_eta_out, io::eta_csv(rep.recon.eta_hat));
                if (!id_support_out.empty())
                    io::write_text(id_support_out, io::support_json(rep.support_hat));
                emit(id_report, io::reconstruction_json(rep.recon));
                for (const auto &e : rep.estimates)
                    std::fputs(io::support_estimate_json(e).c_str(), stdout);
            }
            else
            {
                if (!S)
                    throw Error(ErrorCode::InvalidParameters, "known-support mode needs --support");
                ReconstructionReport rep =
                    id_chirp != 0.0 ? recover_symplectic(Z, G, *S, id_chirp, tp)
                    : id_smooth > 0.0
                        ? recover_eta_smooth(Z, G, *S, smooth_windows(S->T(), S->omega(), id_smooth, S->P()), tp)
                        : recover_eta_known_support(Z, G, *S, tp);
                if (!id_eta_out.empty())
                    io::write_text(id_eta_out, io::eta_csv(rep.eta_hat));
                emit(id_report, io::reconstruction_json(rep));
            }
        }
        else if (*rs)
        {
            const Window c = load_window(rs_window);
            const ZakGrid Z = load_zak(rs_zak, rs_resp);
            const auto rep = recover_unknown_support(Z, GaborMatrix(c), {rs_domain[0], rs_domain[1]}, rs_kmax,
                                                     rs_tol, rs_K, seed);
            std::string out;
            for (const auto &e : rep.estimates)
                out += io::support_estimate_json(e);
            emit(rs_out, out);
            if (!rs_support_out.empty())
                io::write_text(rs_support_out, io::support_json(rep.support_hat));
        }
        else if (*rt)
        {
            const auto S = load_support(rt_support);
            if (rt_plan)
            {
                if (!rt_eps)
                    throw Error(ErrorCode::InvalidParameters, "--plan needs --eps");
                const auto plan = bunched_window_plan(S, *rt_eps, seed);
                emit(rt_out, io::rate_json(plan.report));
                if (!rt_plan_window.empty())
                    io::write_text(rt_plan_window, io::window_json(plan.window));
                std::printf("k=%d\nL=%d\n", plan.k, plan.window.length());
                line("sufficient_margin", *plan.report.sufficient_margin);
                line("dead_time_fraction", plan.report.dead_time_fraction);
            }
            else
            {
                if (rt_window.empty())
                    throw Error(ErrorCode::InvalidParameters, "report mode needs --window");
                const Window c = load_window(rt_window);
                emit(rt_out, io::rate_json(rate_report(IdentifierTrain{S.T(), c, 0.0}, S, rt_eps)));
            }
        }
        else if (*vf)
        {
            const auto S = load_support(vf_support);
            const auto eta = io::parse_eta(io::read_text(vf_eta), S);
            const Window c = load_window(vf_window);
            const ZakGrid Z = load_zak(vf_zak, vf_resp);
            const double r = system_residual(eta, Z, GaborMatrix(c));
            line("system_residual", r);
            std::printf("identity=%s\n", r <= vf_tol ? "ok" : "violated");
            if (!(r <= vf_tol))
                return exit_numeric;
        }
    }
    catch (const Error &e)
    {
        std::fprintf(stderr, "opsample: %s\n", e.what());
        return exit_code(e.code());
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "opsample: %s\n", e.what());
        return exit_usage;
    }
    return 0;
}
