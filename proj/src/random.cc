/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/random.h"

#include <limits>
#include <stdexcept>

namespace uora
{

RandomStream::RandomStream(uint64_t seed, uint64_t streamId)
{
    std::seed_seq seq{static_cast<uint32_t>(seed),
                      static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(streamId),
                      static_cast<uint32_t>(streamId >> 32)};
    m_engine.seed(seq);
}

uint64_t
RandomStream::UniformInt(uint64_t lo, uint64_t hi)
{
    if (lo > hi)
    {
        throw std::invalid_argument("UniformInt: empty range");
    }
    const uint64_t span = hi - lo;
    if (span == std::numeric_limits<uint64_t>::max())
    {
        return m_engine();
    }
    const uint64_t range = span + 1;
    // reject the top partial bucket so every value is equally likely
    const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                           (std::numeric_limits<uint64_t>::max() % range + 1) % range;
    uint64_t x;
    do
    {
        x = m_engine();
    } while (x > limit);
    return lo + x % range;
}

double
RandomStream::UniformReal()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

} // namespace uora
