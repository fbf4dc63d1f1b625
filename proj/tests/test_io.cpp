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

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include <opsample/io.hpp>
#include <opsample/rates.hpp>
#include <opsample/reconstruct.hpp>
#include <opsample/sparse.hpp>

#include "fixtures.hpp"

using namespace opsample;

namespace
{
ErrorCode code_of(auto &&f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    return ErrorCode::InvalidParameters;
}
} // namespace

TEST_CASE("numbers print with round-trip precision")
{
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0})
        CHECK(std::strtod(io::num(x).c_str(), nullptr) == x);
}

TEST_CASE("window round trip")
{
    const Window c = generate_window(3, SparkTarget::full(), 77);
    const Window d = io::parse_window(io::window_json(c));
    CHECK(d.weights == c.weights);
    CHECK(d.seed == c.seed);
    const Window e = io::parse_window(R"({"L": 2, "weights": [[1, 0], [0, -1]]})");
    CHECK(e.weights == std::vector<cplx>{1.0, cplx(0, -1)});
    CHECK_FALSE(e.seed.has_value());
    CHECK(code_of([] { io::parse_window(R"({"L": 3, "weights": [[1, 0]]})"); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_window("{not json"); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_window(R"({"weights": []})"); }) == ErrorCode::Parse);
}

TEST_CASE("gabor matrix csv has one row per entry")
{
    GaborMatrix G(Window({1.0, 0.0}));
    const auto csv = io::gabor_csv(G);
    CHECK(csv.rfind("p,q,m,re,im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 4);
    CHECK(csv.find("1,1,1,-1,") != std::string::npos);
}

TEST_CASE("run-length coding")
{
    const std::vector<std::uint8_t> bits{1, 1, 0, 0, 0, 1, 0};
    CHECK(io::rle_encode(bits) == "0,2,3,1,1");
    CHECK(io::rle_decode("0,2,3,1,1", 7) == bits);
    CHECK(io::rle_encode({0, 0}) == "2");
    CHECK(io::rle_decode("2", 2) == std::vector<std::uint8_t>{0, 0});
    CHECK(code_of([] { io::rle_decode("3,5", 4); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::rle_decode("1,1", 4); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::rle_decode("x", 4); }) == ErrorCode::Parse);
    Rng rng(3);
    std::vector<std::uint8_t> r(200);
    for (auto &b : r)
        b = std::uint8_t(rng.below(2));
    CHECK(io::rle_decode(io::rle_encode(r), r.size()) == r);
}

TEST_CASE("support round trip")
{
    for (const auto &S : {fixtures::staircase(8), fixtures::seven_cell(8), fixtures::parallelogram(3, 8),
                          CellSupport::from_cells(2.0, 3, 4, {{0, 0}, {2, 2}}, 1, 3)})
    {
        const auto back = io::parse_support(io::support_json(S));
        CHECK(back.subcells() == S.subcells());
        CHECK(back.L() == S.L());
        CHECK(back.P() == S.P());
        CHECK(back.T() == S.T());
    }
    const auto S = io::parse_support(R"({"T": 1, "L": 3, "cells": [[0,0],[1,0],[2,1]]})");
    CHECK(S.P() == 8);
    CHECK(S.subcells() == fixtures::staircase(8).subcells());
    CHECK(code_of([] { io::parse_support(R"({"T": 1, "L": 3, "P": 4, "cells": [[0,0]], "shift": [0.1, 0]})"); }) ==
          ErrorCode::InvalidParameters);
    CHECK(code_of([] { io::parse_support(R"({"T": 1, "cells": []})"); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_support(R"({"T": 1, "L": 2, "P": 2, "cells": [[0,0]], "fine_mask_rle": "1"})"); }) ==
          ErrorCode::Parse);
}

TEST_CASE("spreading function, response and Zak round trips")
{
    const auto S = fixtures::seven_cell(4);
    const auto eta = random_eta(S, 5);
    const auto back = io::parse_eta(io::eta_csv(eta), S);
    CHECK(back.values() == eta.values());
    const auto f = apply_channel(eta, IdentifierTrain{1.0, generate_window(3, SparkTarget::full(), 1), 0.0});
    const auto fb = io::parse_response(io::response_csv(f));
    CHECK(fb.samples == f.samples);
    CHECK(fb.T == f.T);
    CHECK(fb.L == 3);
    CHECK(fb.P == 4);
    const auto Z = zak_transform(f);
    const auto Zb = io::parse_zak(io::zak_csv(Z));
    CHECK(Zb.data == Z.data);
    CHECK(code_of([&] { io::parse_eta("# T=1,L=3,P=8\n0,0,1,0\n", S); }) == ErrorCode::GridMismatch);
    CHECK(code_of([&] { io::parse_eta("# T=1,L=3,P=4\n0,5,1,0\n", S); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { io::parse_eta("0,0,1\n", S); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_response("# T=1,L=1,P=1\ni,re,im\n0,1,0\n1,0,0\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_response("i,re,im\n0,1,0\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { io::parse_zak("# T=1,L=1,P=1\n0,3,1,0\n"); }) == ErrorCode::Parse);
}

TEST_CASE("reports carry their fields")
{
    const auto S = fixtures::seven_cell(4);
    const auto rj = io::rectification_json(rectify(S), S);
    for (const char *key : {"\"gamma\"", "\"identifiable\": true", "\"max_cover\": 3", "\"num_classes\": 3",
                            "\"bandwidth\"", "\"omega\"", "\"area\""})
        CHECK(rj.find(key) != std::string::npos);
    const auto c = generate_window(3, SparkTarget::full(), 1);
    const auto eta = random_eta(S, 1);
    const auto Z = zak_transform(apply_channel(eta, IdentifierTrain{1.0, c, 0.0}));
    const auto rec = recover_eta_known_support(Z, GaborMatrix(c), S, &eta);
    const auto cj = io::reconstruction_json(rec);
    CHECK(cj.find("\"formula\": \"multiclass\"") != std::string::npos);
    CHECK(cj.find("\"relative_l2_error\"") != std::string::npos);
    SupportEstimate e;
    e.gamma_hat = {{1, 2}};
    e.residual_history = {0.5, 0.0};
    e.seed = 9;
    const auto ej = io::support_estimate_json(e);
    CHECK(ej.find("\"seed\": 9") != std::string::npos);
    CHECK(ej.find("\"exact_match\": null") != std::string::npos);
    const auto rt = io::rate_json(rate_report(IdentifierTrain{1.0, c, 0.0}, S, 0.1));
    for (const char *key : {"\"rate\"", "\"bandwidth\"", "\"necessary_ok\": true", "\"sufficient_margin\"",
                            "\"dead_time_fraction\"", "\"memory\""})
        CHECK(rt.find(key) != std::string::npos);
}

TEST_CASE("file access errors")
{
    CHECK(code_of([] { io::read_text("/nonexistent/dir/file.json"); }) == ErrorCode::Io);
    CHECK(code_of([] { io::write_text("/nonexistent/dir/file.json", "x"); }) == ErrorCode::Io);
    const auto path = (std::filesystem::temp_directory_path() / "opsample_io_test.txt").string();
    io::write_text(path, "abc\n");
    CHECK(io::read_text(path) == "abc\n");
    std::filesystem::remove(path);
}
