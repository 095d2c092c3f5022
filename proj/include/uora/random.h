/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_RANDOM_H
#define UORA_RANDOM_H

#include <cstdint>
#include <random>

namespace uora
{

/**
 * A deterministic random stream identified by (seed, stream id).
 *
 * The distributions in <random> are implementation defined, so bounded
 * integers and reals are derived here directly from the mt19937_64 output,
 * which the standard does pin down. The same (seed, stream) yields the same
 * draws on every platform.
 */
class RandomStream
{
  public:
    RandomStream(uint64_t seed, uint64_t streamId);

    /// Uniform integer on the closed range [lo, hi].
    uint64_t UniformInt(uint64_t lo, uint64_t hi);
    /// Uniform real on [0, 1).
    double UniformReal();

  private:
    std::mt19937_64 m_engine;
};

} // namespace uora

#endif /* UORA_RANDOM_H */
