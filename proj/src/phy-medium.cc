/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/phy-medium.h"

#include "uora/errors.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uora
{

namespace
{

struct McsInfo
{
    uint32_t bitsPerSubcarrier;
    uint32_t rateNum;
    uint32_t rateDen;
};

// HE MCS 0-11
constexpr std::array<McsInfo, 12> HE_MCS = {{
    {1, 1, 2},
    {2, 1, 2},
    {2, 3, 4},
    {4, 1, 2},
    {4, 3, 4},
    {6, 2, 3},
    {6, 3, 4},
    {6, 5, 6},
    {8, 3, 4},
    {8, 5, 6},
    {10, 3, 4},
    {10, 5, 6},
}};

constexpr std::array<RuTones, 4> ALL_TONES = {RuTones::TONES_26,
                                              RuTones::TONES_52,
                                              RuTones::TONES_106,
                                              RuTones::TONES_242};

int64_t
GiKey(Time gi)
{
    return gi.count();
}

std::string
Trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

RuLayout::RuLayout(uint16_t bandwidthMhz, RuTones tones)
    : m_bandwidthMhz(bandwidthMhz),
      m_tones(tones),
      m_count(CountFor(bandwidthMhz, tones))
{
    if (m_count == 0)
    {
        throw ConfigError("unsupported RU geometry: " +
                          std::to_string(static_cast<unsigned>(tones)) + "-tone RUs in " +
                          std::to_string(bandwidthMhz) + " MHz");
    }
}

uint32_t
RuLayout::CountFor(uint16_t bandwidthMhz, RuTones tones)
{
    // 80 and 160 MHz counts include the central 26-tone RUs
    static const std::map<std::pair<uint16_t, RuTones>, uint32_t> geometry = {
        {{20, RuTones::TONES_26}, 9},
        {{20, RuTones::TONES_52}, 4},
        {{20, RuTones::TONES_106}, 2},
        {{20, RuTones::TONES_242}, 1},
        {{40, RuTones::TONES_26}, 18},
        {{40, RuTones::TONES_52}, 8},
        {{40, RuTones::TONES_106}, 4},
        {{40, RuTones::TONES_242}, 2},
        {{80, RuTones::TONES_26}, 37},
        {{80, RuTones::TONES_52}, 16},
        {{80, RuTones::TONES_106}, 8},
        {{80, RuTones::TONES_242}, 4},
        {{160, RuTones::TONES_26}, 74},
        {{160, RuTones::TONES_52}, 32},
        {{160, RuTones::TONES_106}, 16},
        {{160, RuTones::TONES_242}, 8},
    };
    auto it = geometry.find({bandwidthMhz, tones});
    return it == geometry.end() ? 0 : it->second;
}

uint32_t
DataSubcarriers(RuTones tones)
{
    switch (tones)
    {
    case RuTones::TONES_26:
        return 24;
    case RuTones::TONES_52:
        return 48;
    case RuTones::TONES_106:
        return 102;
    case RuTones::TONES_242:
        return 234;
    }
    throw std::logic_error("unknown RU size");
}

PhyRateTable::PhyRateTable()
{
    for (Time gi : {Time(800), Time(1600), Time(3200)})
    {
        const double symbolUs = ToMicroSeconds(GetSymbolDuration(gi));
        for (RuTones tones : ALL_TONES)
        {
            for (uint8_t mcs = 0; mcs < HE_MCS.size(); ++mcs)
            {
                const auto& info = HE_MCS[mcs];
                const double bitsPerSymbol =
                    static_cast<double>(DataSubcarriers(tones) * info.bitsPerSubcarrier *
                                        info.rateNum) /
                    info.rateDen;
                SetRate(tones, mcs, gi, bitsPerSymbol / symbolUs);
            }
        }
    }
}

void
PhyRateTable::SetRate(RuTones tones, uint8_t mcs, Time gi, double bitsPerUs)
{
    m_rates[{static_cast<uint16_t>(tones), mcs, GiKey(gi)}] = bitsPerUs;
}

bool
PhyRateTable::HasRate(RuTones tones, uint8_t mcs, Time gi) const
{
    return m_rates.count({static_cast<uint16_t>(tones), mcs, GiKey(gi)}) != 0;
}

double
PhyRateTable::GetDataRate(RuTones tones, uint8_t mcs, Time gi) const
{
    auto it = m_rates.find({static_cast<uint16_t>(tones), mcs, GiKey(gi)});
    if (it == m_rates.end())
    {
        throw ConfigError("no PHY rate for " + std::to_string(static_cast<unsigned>(tones)) +
                          "-tone RU, MCS " + std::to_string(mcs) + ", GI " +
                          std::to_string(ToMicroSeconds(gi)) + " us");
    }
    return it->second;
}

Time
PhyRateTable::GetSymbolDuration(Time gi)
{
    return Time(12800) + gi;
}

void
PhyRateTable::LoadOverrides(std::istream& in, const std::string& sourceName)
{
    std::string line;
    unsigned lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line.erase(hash);
        }
        line = Trim(line);
        if (line.empty())
        {
            continue;
        }
        auto fail = [&](const std::string& why) {
            throw ConfigError(sourceName + ":" + std::to_string(lineNo) + ": " + why + ": '" +
                              line + "'");
        };
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
        {
            fields.push_back(Trim(field));
        }
        if (fields.size() != 4)
        {
            fail("expected ru_tones,mcs,gi_us,bits_per_us");
        }
        try
        {
            size_t used = 0;
            const auto tones = RuTonesFromInt(std::stoul(fields[0], &used));
            if (!tones || used != fields[0].size())
            {
                fail("unsupported RU size");
            }
            const unsigned long mcs = std::stoul(fields[1], &used);
            if (used != fields[1].size() || mcs > 255)
            {
                fail("bad MCS index");
            }
            const double gi = std::stod(fields[2], &used);
            if (used != fields[2].size() || gi <= 0.0)
            {
                fail("bad guard interval");
            }
            const double rate = std::stod(fields[3], &used);
            if (used != fields[3].size() || !(rate > 0.0))
            {
                fail("bad data rate");
            }
            SetRate(*tones, static_cast<uint8_t>(mcs), MicroSecondsF(gi), rate);
        }
        catch (const std::logic_error&)
        {
            fail("not a number");
        }
    }
}

void
PhyRateTable::LoadOverridesFromFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open rate table " + path);
    }
    LoadOverrides(in, path);
}

Time
FrameDuration(const PhyRateTable& table, uint64_t payloadBytes, RuTones tones, uint8_t mcs, Time gi)
{
    const double rate = table.GetDataRate(tones, mcs, gi);
    const Time symbol = PhyRateTable::GetSymbolDuration(gi);
    const double bitsPerSymbol = rate * ToMicroSeconds(symbol);
    const double bits = static_cast<double>(payloadBytes) * 8.0;
    // guard against 144.00000000000003-style products pushing an exact fit up a symbol
    const auto symbols = static_cast<int64_t>(std::ceil(bits / bitsPerSymbol - 1e-9));
    return table.GetPreamble() + symbols * symbol;
}

Time
ControlFrameDuration(uint64_t bytes, const ControlRate& rate)
{
    const uint64_t bits = 16 + 8 * bytes + 6;
    const uint64_t symbols = (bits + rate.bitsPerSymbol - 1) / rate.bitsPerSymbol;
    return rate.preamble + static_cast<int64_t>(symbols) * rate.symbol;
}

uint64_t
TriggerFrameBytes(size_t allocations)
{
    return 28 + 5 * allocations;
}

uint64_t
MultiStaBlockAckBytes(size_t ackedStations)
{
    return 22 + 12 * ackedStations;
}

RuOutcomes
ResolveReception(std::span<const Transmission> transmissions, uint32_t ruCount, bool captureFirst)
{
    RuOutcomes outcomes(ruCount);
    std::set<Aid> seen;
    for (const auto& tx : transmissions)
    {
        if (!seen.insert(tx.aid).second)
        {
            throw std::logic_error("station " + std::to_string(tx.aid) +
                                   " transmits twice in one PPDU");
        }
        if (tx.ruIndex >= ruCount)
        {
            throw std::logic_error("RU index " + std::to_string(tx.ruIndex) + " out of range");
        }
        outcomes[tx.ruIndex].stations.push_back(tx.aid);
    }
    for (auto& ru : outcomes)
    {
        if (ru.stations.empty())
        {
            ru.state = RuState::IDLE;
        }
        else if (ru.stations.size() == 1)
        {
            ru.state = RuState::SUCCESS;
        }
        else if (captureFirst)
        {
            ru.state = RuState::SUCCESS;
            ru.stations.resize(1);
        }
        else
        {
            ru.state = RuState::COLLISION;
            std::sort(ru.stations.begin(), ru.stations.end());
        }
    }
    return outcomes;
}

Time
PadToLongest(std::span<const Time> durations)
{
    if (durations.empty())
    {
        throw std::logic_error("PadToLongest: no transmissions");
    }
    return *std::max_element(durations.begin(), durations.end());
}

} // namespace uora
