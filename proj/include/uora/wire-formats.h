/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_WIRE_FORMATS_H
#define UORA_WIRE_FORMATS_H

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace uora
{

/// Association identifier of a station.
using Aid = uint16_t;

/// AID carried by an RU that is open to random access.
constexpr Aid RANDOM_ACCESS_AID = 0;
/// AID used for random access by unassociated stations (not supported).
constexpr Aid UNASSOCIATED_RA_AID = 2045;
constexpr Aid MAX_AID = 2047;

enum class RuTones : uint16_t
{
    TONES_26 = 26,
    TONES_52 = 52,
    TONES_106 = 106,
    TONES_242 = 242,
};

/// Parses a tone count (26, 52, 106, 242); nullopt for anything else.
std::optional<RuTones> RuTonesFromInt(unsigned tones);

/**
 * UORA Parameter Set element.
 *
 * Four octets on the wire: Element ID, Length, Element ID Extension and the
 * OCW Range octet. OCW Range carries EOCWmin in bits 0-2, EOCWmax in bits 3-5
 * and two reserved bits in 6-7.
 */
struct UoraParameterSetElement
{
    /// Extension elements share this ID; the specific element is identified by the extension.
    static constexpr uint8_t DEFAULT_ELEMENT_ID = 255;
    /// Placeholder extension ID. Configurable since no registry value is assumed.
    static constexpr uint8_t DEFAULT_ELEMENT_ID_EXTENSION = 0;

    uint8_t elementId{DEFAULT_ELEMENT_ID};
    uint8_t length{2};
    uint8_t elementIdExtension{DEFAULT_ELEMENT_ID_EXTENSION};
    uint8_t eocwMin{0};
    uint8_t eocwMax{0};
    uint8_t reserved{0};

    bool operator==(const UoraParameterSetElement&) const = default;
};

/// Throws MalformedFrameError if the element invariants do not hold.
std::array<uint8_t, 4> EncodeUoraParameterSet(const UoraParameterSetElement& elem);
/// Nonzero reserved bits are accepted and preserved.
UoraParameterSetElement DecodeUoraParameterSet(std::span<const uint8_t> bytes);

/// One RU of a trigger frame, either random access (AID 0) or scheduled for one station.
class RuAllocation
{
  public:
    /// Throws MalformedFrameError for AID 2045 or AIDs above 2047.
    RuAllocation(uint8_t ruIndex, RuTones tones, Aid aid);

    uint8_t GetRuIndex() const
    {
        return m_ruIndex;
    }

    RuTones GetTones() const
    {
        return m_tones;
    }

    Aid GetAid() const
    {
        return m_aid;
    }

    bool IsRandomAccess() const
    {
        return m_aid == RANDOM_ACCESS_AID;
    }

    bool operator==(const RuAllocation&) const = default;

  private:
    uint8_t m_ruIndex;
    RuTones m_tones;
    Aid m_aid;
};

enum class TriggerVariant : uint8_t
{
    BSRP = 0,
    BASIC = 1,
};

struct TriggerFrame
{
    TriggerVariant variant{TriggerVariant::BSRP};
    /// Granted uplink duration; a multiple of 16 us on the wire.
    uint32_t ulLengthUs{0};
    std::vector<RuAllocation> allocations;

    /// RU indices open to random access, in allocation order.
    std::vector<uint8_t> RandomAccessRus() const;
    uint32_t CountRandomAccess() const;
    /// The RU scheduled for this AID, if any.
    std::optional<uint8_t> FindScheduledRu(Aid aid) const;

    bool operator==(const TriggerFrame&) const = default;
};

/**
 * Simulator-internal trigger frame layout:
 *
 *   octet 0      variant (0 = BSRP, 1 = Basic)
 *   octets 1-2   ulLengthUs / 16, little endian
 *   octet 3      allocation count
 *   then per allocation: RU index (1), tones code (1: 0=26 1=52 2=106 3=242), AID (2, LE)
 */
std::vector<uint8_t> EncodeTrigger(const TriggerFrame& tf);
TriggerFrame DecodeTrigger(std::span<const uint8_t> bytes);

struct BufferStatusReport
{
    Aid aid{1};
    uint32_t queueBytes{0};

    bool operator==(const BufferStatusReport&) const = default;
};

/// Layout: AID (2, LE), queue bytes (4, LE).
std::array<uint8_t, 6> EncodeBufferStatusReport(const BufferStatusReport& bsr);
BufferStatusReport DecodeBufferStatusReport(std::span<const uint8_t> bytes);

struct MultiStaBlockAck
{
    std::set<Aid> ackedAids;

    bool operator==(const MultiStaBlockAck&) const = default;
};

/// Layout: count (2, LE), then each AID ascending (2, LE).
std::vector<uint8_t> EncodeMultiStaBlockAck(const MultiStaBlockAck& ba);
MultiStaBlockAck DecodeMultiStaBlockAck(std::span<const uint8_t> bytes);

} // namespace uora

#endif /* UORA_WIRE_FORMATS_H */
