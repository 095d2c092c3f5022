/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_TIME_H
#define UORA_TIME_H

#include <chrono>
#include <cmath>
#include <cstdint>

namespace uora
{

/// Simulated time. Nanosecond resolution keeps 13.6 us OFDM symbols exact.
using Time = std::chrono::nanoseconds;

constexpr Time
MicroSeconds(int64_t us)
{
    return std::chrono::microseconds(us);
}

/// Rounds to the nearest nanosecond.
inline Time
MicroSecondsF(double us)
{
    return Time(std::llround(us * 1000.0));
}

constexpr double
ToMicroSeconds(Time t)
{
    return static_cast<double>(t.count()) / 1000.0;
}

} // namespace uora

#endif /* UORA_TIME_H */
