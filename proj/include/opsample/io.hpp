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

#include <iosfwd>
#include <string>

#include "opsample/channel.hpp"
#include "opsample/gabor.hpp"
#include "opsample/rates.hpp"
#include "opsample/reconstruct.hpp"
#include "opsample/sparse.hpp"
#include "opsample/support.hpp"

namespace opsample::io
{

// %.17g
std::string num(double x);

std::string read_text(const std::string &path);
void write_text(const std::string &path, const std::string &text);

// {"L": int, "weights": [[re, im], ...], "seed": int|null}
std::string window_json(const Window &c);
Window parse_window(const std::string &text);

// p,q,m,re,im, row-major in p then column order
std::string gabor_csv(const GaborMatrix &G);

// Alternating run lengths over a 0/1 vector, first run counts zeros.
std::string rle_encode(const std::vector<std::uint8_t> &bits);
std::vector<std::uint8_t> rle_decode(const std::string &text, std::size_t length);

// {"T", "L", "P", "cells": [[q,m],...], "fine_mask_rle"?, "shift": [t0, nu0]}
std::string support_json(const CellSupport &S);
CellSupport parse_support(const std::string &text);

// "# T=..,L=..,P=.." then i,j,re,im per support subcell
std::string eta_csv(const DiscreteSpreadingFunction &eta);
DiscreteSpreadingFunction parse_eta(const std::string &text, const CellSupport &S);

// "# T=..,L=..,P=..,x_step=.." then i,re,im
std::string response_csv(const ChannelResponse &f);
ChannelResponse parse_response(const std::string &text);

// "# T=..,L=..,P=.." then i,k,re,im
std::string zak_csv(const ZakGrid &Z);
ZakGrid parse_zak(const std::string &text);

std::string rectification_json(const RectificationReport &r, const CellSupport &S);
std::string reconstruction_json(const ReconstructionReport &r);
std::string support_estimate_json(const SupportEstimate &e);
std::string rate_json(const RateReport &r);

} // namespace opsample::io
