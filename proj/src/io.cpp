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

#include "opsample/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace opsample::io
{

using json = nlohmann::ordered_json;

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string read_text(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
    if (!out)
        throw Error(ErrorCode::Io, "write failed for " + path);
}

namespace
{

json parse_json(const std::string &text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorCode::Parse, e.what());
    }
}

template <class F>
auto guarded(F &&f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorCode::Parse, e.what());
    }
}

json cells_json(const std::vector<Cell> &cells)
{
    json a = json::array();
    for (const Cell &c : cells)
        a.push_back({c.q, c.m});
    return a;
}

struct Header
{
    std::map<std::string, std::string> kv;
    double get(const std::string &k) const
    {
        auto it = kv.find(k);
        if (it == kv.end())
            throw Error(ErrorCode::Parse, "header lacks " + k);
        return std::stod(it->second);
    }
};

// Splits "# a=1,b=2" headers from data rows; the column-name row is skipped.
std::vector<std::vector<double>> parse_rows(const std::string &text, Header &h, std::size_t width)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::istringstream ls(line.substr(1));
            std::string item;
            while (std::getline(ls, item, ','))
            {
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    continue;
                auto trim = [](std::string s) {
                    s.erase(0, s.find_first_not_of(" \t"));
                    s.erase(s.find_last_not_of(" \t") + 1);
                    return s;
                };
                h.kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
            }
            continue;
        }
        if (std::isalpha((unsigned char)line[0]))
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string item;
        try
        {
            while (std::getline(ls, item, ','))
                row.push_back(std::stod(item));
        }
        catch (const std::exception &)
        {
            throw Error(ErrorCode::Parse, "bad CSV row: " + line);
        }
        if (row.size() != width)
            throw Error(ErrorCode::Parse, "CSV row has wrong width: " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string grid_header(double T, int L, int P)
{
    return "# T=" + num(T) + ",L=" + std::to_string(L) + ",P=" + std::to_string(P);
}

int as_int(double x)
{
    if (std::abs(x - std::round(x)) > 1e-9)
        throw Error(ErrorCode::Parse, "expected an integer, got " + num(x));
    return int(std::round(x));
}

} // namespace

std::string window_json(const Window &c)
{
    json j;
    j["L"] = c.length();
    json w = json::array();
    for (const auto &x : c.weights)
        w.push_back({x.real(), x.imag()});
    j["weights"] = w;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return j.dump(2) + "\n";
}

Window parse_window(const std::string &text)
{
    return guarded([&] {
        json j = parse_json(text);
        const int L = j.at("L").get<int>();
        std::vector<cplx> w;
        for (const auto &e : j.at("weights"))
            w.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        if (L < 1 || int(w.size()) != L)
            throw Error(ErrorCode::Parse, "window must hold exactly L >= 1 weights");
        Window c(std::move(w));
        if (j.contains("seed") && !j["seed"].is_null())
            c.seed = j["seed"].get<std::uint64_t>();
        return c;
    });
}

std::string gabor_csv(const GaborMatrix &G)
{
    std::string out = "p,q,m,re,im\n";
    const int L = G.L();
    for (int p = 0; p < L; ++p)
        for (int col = 0; col < L * L; ++col)
        {
            const Cell c = G.cell_of(col);
            const cplx v = G.entries()(p, col);
            out += std::to_string(p) + "," + std::to_string(c.q) + "," + std::to_string(c.m) + "," + num(v.real()) +
                   "," + num(v.imag()) + "\n";
        }
    return out;
}

std::string rle_encode(const std::vector<std::uint8_t> &bits)
{
    std::string out;
    std::uint8_t cur = 0;
    std::size_t run = 0;
    for (std::uint8_t b : bits)
    {
        const std::uint8_t v = b ? 1 : 0;
        if (v != cur)
        {
            out += (out.empty() ? "" : ",") + std::to_string(run);
            cur = v;
            run = 0;
        }
        ++run;
    }
    out += (out.empty() ? "" : ",") + std::to_string(run);
    return out;
}

std::vector<std::uint8_t> rle_decode(const std::string &text, std::size_t length)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(length);
    std::istringstream ls(text);
    std::string item;
    std::uint8_t cur = 0;
    while (std::getline(ls, item, ','))
    {
        std::size_t run = 0;
        try
        {
            run = std::stoul(item);
        }
        catch (const std::exception &)
        {
            throw Error(ErrorCode::Parse, "bad run length: " + item);
        }
        if (bits.size() + run > length)
            throw Error(ErrorCode::Parse, "mask runs exceed the grid");
        bits.insert(bits.end(), run, cur);
        cur ^= 1;
    }
    if (bits.size() != length)
        throw Error(ErrorCode::Parse, "mask runs do not fill the grid");
    return bits;
}

std::string support_json(const CellSupport &S)
{
    json j;
    j["T"] = S.T();
    j["L"] = S.L();
    j["P"] = S.P();
    const auto cells = S.cells();
    j["cells"] = cells_json(cells);
    if (auto mask = S.fine_mask())
    {
        // the folded mask must reproduce the support
        CellSupport back = CellSupport::from_cells_masked(S.T(), S.L(), S.P(), cells, *mask, S.shift_i(), S.shift_j());
        if (back.subcells() != S.subcells())
            throw Error(ErrorCode::InvalidParameters, "support cannot be written as cells plus a folded mask");
        j["fine_mask_rle"] = rle_encode(*mask);
    }
    j["shift"] = {S.shift_t(), S.shift_nu()};
    return j.dump(2) + "\n";
}

CellSupport parse_support(const std::string &text)
{
    return guarded([&] {
        json j = parse_json(text);
        const double T = j.at("T").get<double>();
        const int L = j.at("L").get<int>();
        const int P = j.contains("P") ? j["P"].get<int>() : 8;
        std::vector<Cell> cells;
        for (const auto &c : j.at("cells"))
            cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
        int si = 0, sj = 0;
        if (j.contains("shift"))
        {
            const double dt = T / P, dnu = 1.0 / (T * L * P);
            const double t0 = j["shift"].at(0).get<double>(), nu0 = j["shift"].at(1).get<double>();
            const double fi = t0 / dt, fj = nu0 / dnu;
            if (std::abs(fi - std::round(fi)) > 1e-9 || std::abs(fj - std::round(fj)) > 1e-9)
                throw Error(ErrorCode::InvalidParameters, "shift must be a whole number of subcells");
            si = int(std::round(fi));
            sj = int(std::round(fj));
        }
        if (j.contains("fine_mask_rle") && !j["fine_mask_rle"].is_null())
        {
            const std::size_t n = std::size_t(L) * std::size_t(P);
            auto mask = rle_decode(j["fine_mask_rle"].get<std::string>(), n * n);
            return CellSupport::from_cells_masked(T, L, P, cells, mask, si, sj);
        }
        return CellSupport::from_cells(T, L, P, cells, si, sj);
    });
}

std::string eta_csv(const DiscreteSpreadingFunction &eta)
{
    const CellSupport &S = eta.support();
    std::string out = grid_header(S.T(), S.L(), S.P()) + "\ni,j,re,im\n";
    const auto &sub = S.subcells();
    for (std::size_t k = 0; k < sub.size(); ++k)
        out += std::to_string(sub[k].i) + "," + std::to_string(sub[k].j) + "," + num(eta.values()[k].real()) + "," +
               num(eta.values()[k].imag()) + "\n";
    return out;
}

DiscreteSpreadingFunction parse_eta(const std::string &text, const CellSupport &S)
{
    Header h;
    auto rows = parse_rows(text, h, 4);
    if (h.kv.count("L") && (as_int(h.get("L")) != S.L() || as_int(h.get("P")) != S.P() ||
                            std::abs(h.get("T") - S.T()) > 1e-12 * S.T()))
        throw Error(ErrorCode::GridMismatch, "spreading function grid disagrees with the support");
    DiscreteSpreadingFunction eta(S);
    for (const auto &r : rows)
        eta.set(as_int(r[0]), as_int(r[1]), {r[2], r[3]});
    return eta;
}

std::string response_csv(const ChannelResponse &f)
{
    std::string out = grid_header(f.T, f.L, f.P) + ",x_step=" + num(f.x_step()) + "\ni,re,im\n";
    for (std::size_t k = 0; k < f.samples.size(); ++k)
        out += std::to_string(k) + "," + num(f.samples[k].real()) + "," + num(f.samples[k].imag()) + "\n";
    return out;
}

ChannelResponse parse_response(const std::string &text)
{
    Header h;
    auto rows = parse_rows(text, h, 3);
    ChannelResponse f;
    f.T = h.get("T");
    f.L = as_int(h.get("L"));
    f.P = as_int(h.get("P"));
    const std::size_t N = std::size_t(f.L) * f.P * f.P;
    f.samples.assign(N, cplx(0.0, 0.0));
    if (rows.size() != N)
        throw Error(ErrorCode::Parse, "response must hold L P^2 samples");
    for (const auto &r : rows)
    {
        const int i = as_int(r[0]);
        if (i < 0 || std::size_t(i) >= N)
            throw Error(ErrorCode::Parse, "sample index out of range");
        f.samples[std::size_t(i)] = {r[1], r[2]};
    }
    return f;
}

std::string zak_csv(const ZakGrid &Z)
{
    std::string out = grid_header(Z.T, Z.L, Z.P) + "\ni,k,re,im\n";
    const int n = Z.L * Z.P;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < Z.P; ++k)
        {
            const cplx v = Z.data[std::size_t(i * Z.P + k)];
            out += std::to_string(i) + "," + std::to_string(k) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
        }
    return out;
}

ZakGrid parse_zak(const std::string &text)
{
    Header h;
    auto rows = parse_rows(text, h, 4);
    ZakGrid Z;
    Z.T = h.get("T");
    Z.L = as_int(h.get("L"));
    Z.P = as_int(h.get("P"));
    const std::size_t n = std::size_t(Z.L) * Z.P;
    Z.data.assign(n * Z.P, cplx(0.0, 0.0));
    if (rows.size() != n * Z.P)
        throw Error(ErrorCode::Parse, "Zak grid must hold L P^2 samples");
    for (const auto &r : rows)
    {
        const int i = as_int(r[0]), k = as_int(r[1]);
        if (i < 0 || std::size_t(i) >= n || k < 0 || k >= Z.P)
            throw Error(ErrorCode::Parse, "Zak index out of range");
        Z.data[std::size_t(i) * Z.P + std::size_t(k)] = {r[2], r[3]};
    }
    return Z;
}

std::string rectification_json(const RectificationReport &r, const CellSupport &S)
{
    json j;
    j["gamma"] = cells_json(r.gamma);
    j["identifiable"] = r.identifiable;
    j["max_cover"] = r.max_cover;
    j["classes"] = json::array();
    for (const auto &c : r.classes)
    {
        json cj;
        cj["gamma"] = cells_json(c.gamma);
        cj["base_points"] = c.base_points.size();
        j["classes"].push_back(cj);
    }
    j["num_classes"] = r.classes.size();
    j["bandwidth"] = bandwidth(S);
    j["omega"] = S.omega();
    j["area"] = S.area();
    return j.dump(2) + "\n";
}

std::string reconstruction_json(const ReconstructionReport &r)
{
    json j;
    j["formula"] = formula_name(r.formula);
    j["gamma"] = cells_json(r.gamma);
    j["per_class_conditioning"] = r.per_class_conditioning;
    j["relative_l2_error"] = r.relative_l2_error ? json(*r.relative_l2_error) : json(nullptr);
    j["num_classes"] = r.classes.size();
    return j.dump(2) + "\n";
}

std::string support_estimate_json(const SupportEstimate &e)
{
    json j;
    j["gamma_hat"] = cells_json(e.gamma_hat);
    j["residuals"] = e.residual_history;
    j["converged"] = e.converged;
    j["exact_match"] = e.exact_match ? json(*e.exact_match) : json(nullptr);
    j["seed"] = e.seed;
    j["k_max"] = e.k_max;
    j["tol"] = e.tol;
    return j.dump(2) + "\n";
}

std::string rate_json(const RateReport &r)
{
    json j;
    j["rate"] = r.rate;
    j["bandwidth"] = r.bandwidth;
    j["necessary_ok"] = r.necessary_ok;
    j["area"] = r.area;
    j["eps"] = r.eps ? json(*r.eps) : json(nullptr);
    j["sufficient_margin"] = r.sufficient_margin ? json(*r.sufficient_margin) : json(nullptr);
    j["dead_time_fraction"] = r.dead_time_fraction;
    j["memory"] = r.memory;
    return j.dump(2) + "\n";
}

} // namespace opsample::io
