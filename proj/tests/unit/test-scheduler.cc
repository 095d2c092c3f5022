/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/errors.h"
#include "uora/random.h"
#include "uora/scheduler.h"

#include <doctest.h>

#include <map>
#include <set>

using namespace uora;

namespace
{

std::vector<Aid>
Grants(const TriggerFrame& tf)
{
    std::vector<Aid> out;
    for (const auto& a : tf.allocations)
    {
        if (!a.IsRandomAccess())
        {
            out.push_back(a.GetAid());
        }
    }
    return out;
}

RoundRobinScheduler
MakeScheduler(SchedulerPolicy policy, std::initializer_list<Aid> aids)
{
    RoundRobinScheduler s(policy);
    for (Aid a : aids)
    {
        s.Associate(a);
    }
    return s;
}

RuOutcomes
Outcomes(uint32_t rus, const std::map<uint32_t, std::vector<Aid>>& byRu)
{
    std::vector<Transmission> tx;
    for (const auto& [ru, aids] : byRu)
    {
        for (Aid a : aids)
        {
            tx.push_back({a, ru});
        }
    }
    return ResolveReception(tx, rus);
}

} // namespace

TEST_CASE("BSRP: RA RUs first, then SA polling from the cursor")
{
    const RuLayout four(20, RuTones::TONES_52);
    SchedulerPolicy policy;
    policy.nRaBsrp = 3;
    auto s = MakeScheduler(policy, {1, 2, 3, 4, 5, 6, 7, 8});
    s.SetCursorTo(5);
    const auto tf = s.BuildBsrpTrigger(four, 64);
    CHECK(tf.variant == TriggerVariant::BSRP);
    CHECK(tf.CountRandomAccess() == 3);
    CHECK(tf.allocations[3].GetRuIndex() == 3);
    CHECK(Grants(tf) == std::vector<Aid>{5});
    CHECK(s.GetAssociated()[s.GetCursor()] == 6);
}

TEST_CASE("BSRP: two SA polls move the cursor past both")
{
    const RuLayout four(20, RuTones::TONES_52);
    SchedulerPolicy policy;
    policy.nRaBsrp = 2;
    auto s = MakeScheduler(policy, {7, 9, 11});
    const auto tf = s.BuildBsrpTrigger(four, 64);
    CHECK(tf.CountRandomAccess() == 2);
    CHECK(Grants(tf) == std::vector<Aid>{7, 9});
    CHECK(s.GetAssociated()[s.GetCursor()] == 11);
}

TEST_CASE("BSRP: all-RA and surplus RUs")
{
    const RuLayout nine(20, RuTones::TONES_26);
    SchedulerPolicy policy;
    policy.nRaBsrp = 9;
    auto all = MakeScheduler(policy, {1, 2});
    CHECK(all.BuildBsrpTrigger(nine, 64).CountRandomAccess() == 9);

    policy.nRaBsrp = 3;
    auto few = MakeScheduler(policy, {1, 2});
    const auto tf = few.BuildBsrpTrigger(nine, 64);
    CHECK(tf.allocations.size() == 9);
    CHECK(Grants(tf) == std::vector<Aid>{1, 2});
    CHECK(tf.CountRandomAccess() == 7);

    policy.bsrpSaPolling = false;
    auto raOnly = MakeScheduler(policy, {1, 2});
    CHECK(raOnly.BuildBsrpTrigger(nine, 64).allocations.size() == 3);

    policy.nRaBsrp = 10;
    auto tooMany = MakeScheduler(policy, {1});
    CHECK_THROWS_AS(tooMany.BuildBsrpTrigger(nine, 64), ConfigError);
}

TEST_CASE("hand-worked exchange: stale statuses join fresh reports")
{
    const RuLayout four(20, RuTones::TONES_52);
    SchedulerPolicy policy;
    policy.nRaBsrp = 3;
    auto s = MakeScheduler(policy, {1, 2, 3, 4, 5, 6, 7, 8});
    s.SetBufferStatus(1, 1700, false);
    s.SetBufferStatus(6, 1700, false);
    s.SetCursorTo(5);
    s.BuildBsrpTrigger(four, 64);

    const auto outcomes = Outcomes(4, {{0, {2, 8}}, {2, {3}}, {3, {5}}});
    s.IngestBsrResults(outcomes, {{2, 1700}, {8, 1700}, {3, 3400}, {5, 1700}});
    const auto& status = s.GetBufferStatus();
    CHECK(status.at(3) == BufferStatusEntry{3400, true});
    CHECK(status.at(5) == BufferStatusEntry{1700, true});
    CHECK_FALSE(status.at(1).fresh);
    CHECK(status.count(2) == 0);
    CHECK(status.count(8) == 0);

    const auto basic = s.BuildBasicTrigger(four, UnusedRus(outcomes), 1600);
    REQUIRE(basic.has_value());
    CHECK(basic->variant == TriggerVariant::BASIC);
    CHECK(Grants(*basic) == std::vector<Aid>{6, 1, 3, 5});
    // RUs 0 and 1 were collided or idle while polling
    CHECK(s.GetLastRescheduledCount() == 2);
}

TEST_CASE("basic: zero-byte reports are not granted")
{
    const RuLayout two(20, RuTones::TONES_106);
    auto s = MakeScheduler(SchedulerPolicy{}, {3, 5});
    const auto outcomes = Outcomes(2, {{0, {3}}, {1, {5}}});
    s.IngestBsrResults(outcomes, {{3, 0}, {5, 500}});
    const auto tf = s.BuildBasicTrigger(two, UnusedRus(outcomes), 16);
    REQUIRE(tf.has_value());
    CHECK(Grants(*tf) == std::vector<Aid>{5});
    CHECK(tf->allocations.size() == 1);
}

TEST_CASE("basic: nothing to schedule suppresses the trigger")
{
    const RuLayout nine(20, RuTones::TONES_26);
    auto s = MakeScheduler(SchedulerPolicy{}, {1, 2, 3});
    CHECK_FALSE(s.BuildBasicTrigger(nine, BsrPhaseUsage(9, true), 16).has_value());

    SchedulerPolicy withRa;
    withRa.nRaBasic = 2;
    auto r = MakeScheduler(withRa, {1});
    const auto tf = r.BuildBasicTrigger(nine, BsrPhaseUsage(9, false), 16);
    REQUIRE(tf.has_value());
    CHECK(tf->CountRandomAccess() == 2);
}

TEST_CASE("basic: stale allocation can be switched off")
{
    const RuLayout four(20, RuTones::TONES_52);
    SchedulerPolicy policy;
    policy.allowStaleAllocation = false;
    auto s = MakeScheduler(policy, {1, 2});
    s.SetBufferStatus(1, 100, false);
    s.SetBufferStatus(2, 100, true);
    const auto tf = s.BuildBasicTrigger(four, BsrPhaseUsage(4, false), 16);
    REQUIRE(tf.has_value());
    CHECK(Grants(*tf) == std::vector<Aid>{2});
}

TEST_CASE("basic: RU indices do not depend on BSR-phase usage")
{
    const RuLayout nine(20, RuTones::TONES_26);
    RandomStream rng(5, 0);
    for (int trial = 0; trial < 300; ++trial)
    {
        SchedulerPolicy policy;
        policy.nRaBasic = static_cast<uint32_t>(rng.UniformInt(0, 3));
        auto a = MakeScheduler(policy, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
        auto b = MakeScheduler(policy, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
        for (Aid aid = 1; aid <= 12; ++aid)
        {
            if (rng.UniformInt(0, 1))
            {
                const auto bytes = static_cast<uint32_t>(rng.UniformInt(0, 5000));
                const bool fresh = rng.UniformInt(0, 1);
                a.SetBufferStatus(aid, bytes, fresh);
                b.SetBufferStatus(aid, bytes, fresh);
            }
        }
        BsrPhaseUsage u1(9);
        BsrPhaseUsage u2(9);
        for (size_t i = 0; i < 9; ++i)
        {
            u1[i] = rng.UniformInt(0, 1);
            u2[i] = rng.UniformInt(0, 1);
        }
        const auto t1 = a.BuildBasicTrigger(nine, u1, 16);
        const auto t2 = b.BuildBasicTrigger(nine, u2, 16);
        REQUIRE(t1 == t2);
        if (!t1)
        {
            continue;
        }
        std::set<Aid> granted;
        for (const auto& alloc : t1->allocations)
        {
            if (!alloc.IsRandomAccess())
            {
                REQUIRE(granted.insert(alloc.GetAid()).second);
                REQUIRE(a.GetBufferStatus().at(alloc.GetAid()).queueBytes > 0);
            }
        }
        REQUIRE(t1->allocations.size() <= nine.GetCount());
    }
}

TEST_CASE("round-robin fairness with everyone eligible")
{
    const RuLayout four(20, RuTones::TONES_52);
    auto s = MakeScheduler(SchedulerPolicy{}, {1, 2, 3, 4, 5, 6, 7});
    std::map<Aid, int> grants;
    constexpr int K = 8;
    int total = 0;
    while (total < K * 7)
    {
        for (Aid aid = 1; aid <= 7; ++aid)
        {
            s.SetBufferStatus(aid, 1000, true);
        }
        const auto tf = s.BuildBasicTrigger(four, BsrPhaseUsage(4, false), 16);
        REQUIRE(tf.has_value());
        for (Aid aid : Grants(*tf))
        {
            ++grants[aid];
            ++total;
        }
    }
    CHECK(total == K * 7);
    for (Aid aid = 1; aid <= 7; ++aid)
    {
        CHECK(grants[aid] == K);
    }
}

TEST_CASE("cursor bookkeeping")
{
    auto s = MakeScheduler(SchedulerPolicy{}, {1, 2, 3});
    s.SetCursorTo(3);
    s.Disassociate(3);
    CHECK(s.GetAssociated()[s.GetCursor()] == 1);

    auto t = MakeScheduler(SchedulerPolicy{}, {1, 2, 3, 4});
    t.SetCursorTo(2);
    t.Disassociate(2);
    CHECK(t.GetAssociated()[t.GetCursor()] == 3);
    t.SetCursorTo(4);
    t.Disassociate(1);
    CHECK(t.GetAssociated()[t.GetCursor()] == 4);

    RoundRobinScheduler empty(SchedulerPolicy{});
    empty.AdvanceRound();
    CHECK(empty.GetCursor() == 0);
    CHECK_THROWS(empty.SetCursorTo(1));
}

TEST_CASE("delivery accounting on buffer status")
{
    auto s = MakeScheduler(SchedulerPolicy{}, {1});
    s.SetBufferStatus(1, 3400, true);
    s.NotifyDelivered(1, 1700);
    CHECK(s.GetBufferStatus().at(1).queueBytes == 1700);
    s.NotifyDelivered(1, 5000);
    CHECK(s.GetBufferStatus().at(1).queueBytes == 0);
    s.SetBufferStatus(1, 100, false);
    s.NotifyEmptyQueue(1);
    CHECK(s.GetBufferStatus().at(1).queueBytes == 0);
}
