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

#include "opsample/common.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace opsample
{

const char *error_name(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::NotIdentifiable: return "NotIdentifiable";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::UnsupportedZakPeriod: return "UnsupportedZakPeriod";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ShearNotRectifiable: return "ShearNotRectifiable";
    case ErrorCode::NonIntegerChirpPeriod: return "NonIntegerChirpPeriod";
    case ErrorCode::InvalidOverlap: return "InvalidOverlap";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoPrimeInRange: return "NoPrimeInRange";
    case ErrorCode::SparkTargetUnmet: return "SparkTargetUnmet";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
    }
    return "Error";
}

std::vector<cplx> unit_root_table(long long n)
{
    std::vector<cplx> t(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k)
        t[std::size_t(k)] = unit_root(k, n);
    return t;
}

bool is_prime(long long n)
{
    if (n < 2)
        return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Rng::Rng(std::uint64_t seed) : eng_(seed) {}

std::uint64_t Rng::next() { return eng_(); }

double Rng::uniform()
{
    return double(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::below(std::uint64_t n)
{
    // rejection keeps the map exact and portable
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do
        x = eng_();
    while (x >= limit);
    return x % n;
}

cplx Rng::complex_box()
{
    double re = uniform(-1.0, 1.0);
    double im = uniform(-1.0, 1.0);
    return {re, im};
}

static std::atomic<int> g_max_threads{0};

void set_max_threads(int n) { g_max_threads = n < 0 ? 0 : n; }

int max_threads()
{
    int n = g_max_threads;
    if (n > 0)
        return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

} // namespace opsample
