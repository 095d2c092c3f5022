/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/wire-formats.h"

#include "uora/errors.h"

#include <string>

namespace uora
{

namespace
{

constexpr uint8_t OCW_FIELD_MASK = 0x07;

uint8_t
TonesCode(RuTones tones)
{
    switch (tones)
    {
    case RuTones::TONES_26:
        return 0;
    case RuTones::TONES_52:
        return 1;
    case RuTones::TONES_106:
        return 2;
    case RuTones::TONES_242:
        return 3;
    }
    throw MalformedFrameError("unknown RU size");
}

RuTones
TonesFromCode(uint8_t code)
{
    switch (code)
    {
    case 0:
        return RuTones::TONES_26;
    case 1:
        return RuTones::TONES_52;
    case 2:
        return RuTones::TONES_106;
    case 3:
        return RuTones::TONES_242;
    default:
        throw MalformedFrameError("unknown RU tones code " + std::to_string(code));
    }
}

void
PutU16(std::vector<uint8_t>& out, uint16_t v)
{
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

uint16_t
GetU16(std::span<const uint8_t> in, size_t pos)
{
    return static_cast<uint16_t>(in[pos] | (in[pos + 1] << 8));
}

void
CheckTriggerFrame(const TriggerFrame& tf)
{
    if (tf.ulLengthUs % 16 != 0 || tf.ulLengthUs / 16 > 0xffff)
    {
        throw MalformedFrameError("UL length " + std::to_string(tf.ulLengthUs) +
                                  " us is not encodable in 16 us units");
    }
    if (tf.allocations.size() > 0xff)
    {
        throw MalformedFrameError("too many RU allocations");
    }
    std::set<uint8_t> seen;
    for (const auto& alloc : tf.allocations)
    {
        if (!seen.insert(alloc.GetRuIndex()).second)
        {
            throw MalformedFrameError("duplicate RU index " + std::to_string(alloc.GetRuIndex()));
        }
    }
}

} // namespace

std::optional<RuTones>
RuTonesFromInt(unsigned tones)
{
    switch (tones)
    {
    case 26:
        return RuTones::TONES_26;
    case 52:
        return RuTones::TONES_52;
    case 106:
        return RuTones::TONES_106;
    case 242:
        return RuTones::TONES_242;
    default:
        return std::nullopt;
    }
}

std::array<uint8_t, 4>
EncodeUoraParameterSet(const UoraParameterSetElement& elem)
{
    if (elem.length != 2)
    {
        throw MalformedFrameError("UORA Parameter Set length must be 2");
    }
    if (elem.eocwMin > OCW_FIELD_MASK || elem.eocwMax > OCW_FIELD_MASK)
    {
        throw MalformedFrameError("EOCW values are 3-bit fields");
    }
    if (elem.eocwMin > elem.eocwMax)
    {
        throw MalformedFrameError("EOCWmin exceeds EOCWmax");
    }
    if (elem.reserved != 0)
    {
        throw MalformedFrameError("reserved bits must be zero on encode");
    }
    const auto ocwRange = static_cast<uint8_t>(elem.eocwMin | (elem.eocwMax << 3));
    return {elem.elementId, elem.length, elem.elementIdExtension, ocwRange};
}

UoraParameterSetElement
DecodeUoraParameterSet(std::span<const uint8_t> bytes)
{
    if (bytes.size() < 4)
    {
        throw MalformedFrameError("UORA Parameter Set needs 4 octets, got " +
                                  std::to_string(bytes.size()));
    }
    if (bytes[1] != 2)
    {
        throw MalformedFrameError("UORA Parameter Set length field is " +
                                  std::to_string(bytes[1]) + ", expected 2");
    }
    UoraParameterSetElement elem;
    elem.elementId = bytes[0];
    elem.length = bytes[1];
    elem.elementIdExtension = bytes[2];
    elem.eocwMin = bytes[3] & OCW_FIELD_MASK;
    elem.eocwMax = (bytes[3] >> 3) & OCW_FIELD_MASK;
    elem.reserved = bytes[3] >> 6;
    if (elem.eocwMin > elem.eocwMax)
    {
        throw MalformedFrameError("EOCWmin exceeds EOCWmax");
    }
    return elem;
}

RuAllocation::RuAllocation(uint8_t ruIndex, RuTones tones, Aid aid)
    : m_ruIndex(ruIndex),
      m_tones(tones),
      m_aid(aid)
{
    if (aid == UNASSOCIATED_RA_AID)
    {
        throw MalformedFrameError("AID 2045 (unassociated random access) is not supported");
    }
    if (aid > MAX_AID)
    {
        throw MalformedFrameError("AID " + std::to_string(aid) + " out of range");
    }
    TonesCode(tones);
}

std::vector<uint8_t>
TriggerFrame::RandomAccessRus() const
{
    std::vector<uint8_t> rus;
    for (const auto& alloc : allocations)
    {
        if (alloc.IsRandomAccess())
        {
            rus.push_back(alloc.GetRuIndex());
        }
    }
    return rus;
}

uint32_t
TriggerFrame::CountRandomAccess() const
{
    uint32_t n = 0;
    for (const auto& alloc : allocations)
    {
        n += alloc.IsRandomAccess() ? 1 : 0;
    }
    return n;
}

std::optional<uint8_t>
TriggerFrame::FindScheduledRu(Aid aid) const
{
    if (aid == RANDOM_ACCESS_AID)
    {
        return std::nullopt;
    }
    for (const auto& alloc : allocations)
    {
        if (alloc.GetAid() == aid)
        {
            return alloc.GetRuIndex();
        }
    }
    return std::nullopt;
}

std::vector<uint8_t>
EncodeTrigger(const TriggerFrame& tf)
{
    CheckTriggerFrame(tf);
    std::vector<uint8_t> out;
    out.reserve(4 + 4 * tf.allocations.size());
    out.push_back(static_cast<uint8_t>(tf.variant));
    PutU16(out, static_cast<uint16_t>(tf.ulLengthUs / 16));
    out.push_back(static_cast<uint8_t>(tf.allocations.size()));
    for (const auto& alloc : tf.allocations)
    {
        out.push_back(alloc.GetRuIndex());
        out.push_back(TonesCode(alloc.GetTones()));
        PutU16(out, alloc.GetAid());
    }
    return out;
}

TriggerFrame
DecodeTrigger(std::span<const uint8_t> bytes)
{
    if (bytes.size() < 4)
    {
        throw MalformedFrameError("trigger frame header truncated");
    }
    TriggerFrame tf;
    switch (bytes[0])
    {
    case 0:
        tf.variant = TriggerVariant::BSRP;
        break;
    case 1:
        tf.variant = TriggerVariant::BASIC;
        break;
    default:
        throw MalformedFrameError("unknown trigger variant " + std::to_string(bytes[0]));
    }
    tf.ulLengthUs = 16u * GetU16(bytes, 1);
    const size_t count = bytes[3];
    if (bytes.size() != 4 + 4 * count)
    {
        throw MalformedFrameError("trigger frame length does not match allocation count");
    }
    for (size_t i = 0; i < count; ++i)
    {
        const size_t pos = 4 + 4 * i;
        tf.allocations.emplace_back(bytes[pos], TonesFromCode(bytes[pos + 1]), GetU16(bytes, pos + 2));
    }
    CheckTriggerFrame(tf);
    return tf;
}

std::array<uint8_t, 6>
EncodeBufferStatusReport(const BufferStatusReport& bsr)
{
    if (bsr.aid == RANDOM_ACCESS_AID || bsr.aid > MAX_AID)
    {
        throw MalformedFrameError("BSR needs an associated AID");
    }
    return {static_cast<uint8_t>(bsr.aid & 0xff),
            static_cast<uint8_t>(bsr.aid >> 8),
            static_cast<uint8_t>(bsr.queueBytes),
            static_cast<uint8_t>(bsr.queueBytes >> 8),
            static_cast<uint8_t>(bsr.queueBytes >> 16),
            static_cast<uint8_t>(bsr.queueBytes >> 24)};
}

BufferStatusReport
DecodeBufferStatusReport(std::span<const uint8_t> bytes)
{
    if (bytes.size() != 6)
    {
        throw MalformedFrameError("BSR must be 6 octets");
    }
    BufferStatusReport bsr;
    bsr.aid = GetU16(bytes, 0);
    bsr.queueBytes = static_cast<uint32_t>(bytes[2]) | (static_cast<uint32_t>(bytes[3]) << 8) |
                     (static_cast<uint32_t>(bytes[4]) << 16) |
                     (static_cast<uint32_t>(bytes[5]) << 24);
    if (bsr.aid == RANDOM_ACCESS_AID || bsr.aid > MAX_AID)
    {
        throw MalformedFrameError("BSR carries invalid AID " + std::to_string(bsr.aid));
    }
    return bsr;
}

std::vector<uint8_t>
EncodeMultiStaBlockAck(const MultiStaBlockAck& ba)
{
    std::vector<uint8_t> out;
    PutU16(out, static_cast<uint16_t>(ba.ackedAids.size()));
    for (Aid aid : ba.ackedAids)
    {
        if (aid == RANDOM_ACCESS_AID || aid > MAX_AID)
        {
            throw MalformedFrameError("Multi-STA BA acknowledges invalid AID " + std::to_string(aid));
        }
        PutU16(out, aid);
    }
    return out;
}

MultiStaBlockAck
DecodeMultiStaBlockAck(std::span<const uint8_t> bytes)
{
    if (bytes.size() < 2)
    {
        throw MalformedFrameError("Multi-STA BA truncated");
    }
    const size_t count = GetU16(bytes, 0);
    if (bytes.size() != 2 + 2 * count)
    {
        throw MalformedFrameError("Multi-STA BA length does not match AID count");
    }
    MultiStaBlockAck ba;
    Aid previous = RANDOM_ACCESS_AID;
    for (size_t i = 0; i < count; ++i)
    {
        const Aid aid = GetU16(bytes, 2 + 2 * i);
        if (aid <= previous || aid > MAX_AID)
        {
            throw MalformedFrameError("Multi-STA BA AIDs must be ascending and valid");
        }
        ba.ackedAids.insert(aid);
        previous = aid;
    }
    return ba;
}

} // namespace uora
