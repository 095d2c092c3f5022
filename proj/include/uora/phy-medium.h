/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_PHY_MEDIUM_H
#define UORA_PHY_MEDIUM_H

#include "uora/time.h"
#include "uora/wire-formats.h"

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace uora
{

/// Equal-size RU partition of a channel.
class RuLayout
{
  public:
    /// Throws ConfigError for unsupported bandwidth / RU size combinations.
    RuLayout(uint16_t bandwidthMhz, RuTones tones);

    /// Number of RUs of the given size in the bandwidth, 0 if unsupported.
    static uint32_t CountFor(uint16_t bandwidthMhz, RuTones tones);

    uint16_t GetBandwidthMhz() const
    {
        return m_bandwidthMhz;
    }

    RuTones GetTones() const
    {
        return m_tones;
    }

    uint32_t GetCount() const
    {
        return m_count;
    }

  private:
    uint16_t m_bandwidthMhz;
    RuTones m_tones;
    uint32_t m_count;
};

/// Data subcarriers of an HE RU: 26->24, 52->48, 106->102, 242->234.
uint32_t DataSubcarriers(RuTones tones);

/**
 * (RU size, MCS, guard interval) -> PHY data rate in bits/us.
 *
 * The built-in entries follow
 *   rate = data_subcarriers * bits_per_subcarrier(mcs) * coding_rate(mcs) / (12.8 + gi)
 * for HE MCS 0-11 and GI 0.8, 1.6 and 3.2 us. Entries can be overridden from a
 * text file with lines "ru_tones,mcs,gi_us,bits_per_us"; '#' starts a comment.
 */
class PhyRateTable
{
  public:
    PhyRateTable();

    /// Throws ConfigError naming the offending line.
    void LoadOverrides(std::istream& in, const std::string& sourceName = "<stream>");
    void LoadOverridesFromFile(const std::string& path);

    void SetRate(RuTones tones, uint8_t mcs, Time gi, double bitsPerUs);
    /// Throws ConfigError if the entry is missing.
    double GetDataRate(RuTones tones, uint8_t mcs, Time gi) const;
    bool HasRate(RuTones tones, uint8_t mcs, Time gi) const;

    /// 12.8 us plus the guard interval.
    static Time GetSymbolDuration(Time gi);

    Time GetPreamble() const
    {
        return m_preamble;
    }

    void SetPreamble(Time preamble)
    {
        m_preamble = preamble;
    }

  private:
    using Key = std::tuple<uint16_t, uint8_t, int64_t>;
    std::map<Key, double> m_rates;
    Time m_preamble{MicroSeconds(40)};
};

/// HE TB PPDU duration: preamble plus whole data symbols for the payload.
Time FrameDuration(const PhyRateTable& table,
                   uint64_t payloadBytes,
                   RuTones tones,
                   uint8_t mcs,
                   Time gi);

/// Non-HT OFDM rate used for full-bandwidth control and management frames.
struct ControlRate
{
    Time preamble{MicroSeconds(20)};
    Time symbol{MicroSeconds(4)};
    /// 24 data bits per 4 us symbol is 6 Mb/s.
    uint32_t bitsPerSymbol{24};
};

/// Preamble plus ceil((16 service + 8 * bytes + 6 tail) / bits per symbol) symbols.
Time ControlFrameDuration(uint64_t bytes, const ControlRate& rate);

/// MAC header (16) + Common Info (8) + 5 per User Info + FCS (4).
uint64_t TriggerFrameBytes(size_t allocations);
/// MAC header (16) + BA control (2) + 12 per AID TID Info + FCS (4).
uint64_t MultiStaBlockAckBytes(size_t ackedStations);

enum class RuState
{
    IDLE,
    SUCCESS,
    COLLISION,
};

struct RuReception
{
    RuState state{RuState::IDLE};
    /// The decoded station on SUCCESS; every transmitter (ascending) on COLLISION.
    std::vector<Aid> stations;

    bool operator==(const RuReception&) const = default;
};

/// Indexed by RU index; size equals the layout RU count.
using RuOutcomes = std::vector<RuReception>;

struct Transmission
{
    Aid aid;
    uint32_t ruIndex;
};

/**
 * Per-RU reception. With equal received powers all transmitters on a shared
 * RU fail. With captureFirst set, the first transmitter listed for an RU is
 * decoded and the others count as interference.
 */
RuOutcomes ResolveReception(std::span<const Transmission> transmissions,
                            uint32_t ruCount,
                            bool captureFirst = false);

/// Common duration for a synchronized TB PPDU: all payloads padded to the longest.
Time PadToLongest(std::span<const Time> durations);

} // namespace uora

#endif /* UORA_PHY_MEDIUM_H */
