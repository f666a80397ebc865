#include <hipn/compile.hpp>
#include <hipn/explore.hpp>
#include <hipn/xpn_format.hpp>

#include <gtest/gtest.h>

#include "testkit.hpp"

using namespace hipn;

namespace {

Marking mk(std::initializer_list<long long> xs)
{
    return testkit::to_marking(testkit::State(xs));
}

SearchBudget small_budget(std::size_t steps)
{
    SearchBudget b;
    b.max_steps = steps;
    return b;
}

}  // namespace

TEST(Reach, InitialMarkingNeedsNoSteps)
{
    Net net = parse_xpn("places: p\nmarking: p=1\ntrans t: in p\n");
    SearchResult r = bounded_reach(net, net.initial());
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_TRUE(r.trace->transitions.empty());
}

TEST(Reach, OneStateSystemIsExhausted)
{
    Net net = parse_xpn("places: p\nmarking: p=1\n");
    EXPECT_EQ(bounded_reach(net, mk({2})).verdict, SearchVerdict::ExhaustedStateSpace);
}

TEST(Reach, WrongTargetLength)
{
    Net net = parse_xpn("places: p\n");
    EXPECT_THROW(bounded_reach(net, mk({1, 2})), Error);
}

TEST(Reach, WitnessIsShortestAndReplays)
{
    Net net = parse_xpn("places: a b c\nmarking: a=1\ntrans slow: in a ; out b\ntrans fast: in a ; out c\n"
                        "trans hop: in b ; out c\n");
    SearchResult r = bounded_reach(net, mk({0, 0, 1}));
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_EQ(r.trace->transitions, std::vector<TransitionId>{1});
    EXPECT_TRUE(verify_trace(net, *r.trace));
}

TEST(Reach, BudgetAndDepthAreInconclusive)
{
    Net net = parse_xpn("places: p\ntrans grow: ; out p\n");
    EXPECT_EQ(bounded_reach(net, mk({50}), small_budget(10)).verdict, SearchVerdict::NotFoundWithinBudget);
    SearchBudget shallow;
    shallow.max_depth = 3;
    EXPECT_EQ(bounded_reach(net, mk({5}), shallow).verdict, SearchVerdict::NotFoundWithinBudget);
    EXPECT_EQ(bounded_reach(net, mk({3}), shallow).verdict, SearchVerdict::Found);
}

TEST(Cover, ZeroTargetIsCoveredImmediately)
{
    Net net = parse_xpn("places: a b\nmarking: a=2\ntrans t: in a ; out b\n");
    SearchResult r = bounded_cover(net, Marking(2));
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_TRUE(r.trace->transitions.empty());
}

TEST(Cover, CompiledSingleIncrementMachine)
{
    CompiledMachine c = compile_minsky(parse_counter_machine("q0: INC 1 -> q1\nq1: HALT\n"));
    SearchResult r = bounded_cover(c.net, c.cover_target);
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_TRUE(verify_trace(c.net, *r.trace));
    EXPECT_EQ(r.trace->last()[c.accept], 1);
}

TEST(Cover, ForeverInhibitedTransition)
{
    Net net = parse_xpn("places: blocker goal\nmarking: blocker=1\ntrans t: inh blocker ; out goal\n");
    EXPECT_EQ(bounded_cover(net, mk({0, 1})).verdict, SearchVerdict::ExhaustedStateSpace);
}

TEST(Deadlock, NoTransitionsMeansDeadlockedAtStart)
{
    Net net = parse_xpn("places: p\nmarking: p=4\n");
    SearchResult r = bounded_deadlock(net);
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_TRUE(r.trace->transitions.empty());
}

TEST(Deadlock, SelfLoopNeverDeadlocks)
{
    Net net = parse_xpn("places: p\nmarking: p=1\ntrans spin: in p ; out p\n");
    EXPECT_EQ(bounded_deadlock(net).verdict, SearchVerdict::ExhaustedStateSpace);
}

TEST(Deadlock, WitnessEndsDead)
{
    Net net = parse_xpn("places: a b\nmarking: a=3\ntrans t: in a ; out b\ntrans u: in b*2\n");
    SearchResult r = bounded_deadlock(net);
    ASSERT_EQ(r.verdict, SearchVerdict::Found);
    EXPECT_TRUE(is_deadlocked(net, r.trace->last()));
}

TEST(Trace, TextRoundTrip)
{
    Net net = parse_xpn("places: a b\nmarking: a=2\ntrans t: in a ; out b\ntrans u: in b ; out a\n");
    std::vector<TransitionId> steps{0, 1, 0, 0};
    auto trace = replay(net, net.initial(), steps);
    ASSERT_TRUE(trace);
    EXPECT_EQ(trace_to_text(net, *trace), "t\nu\nt\nt\n");
    EXPECT_EQ(parse_trace(net, "t\nu\n\nt\nt\n"), steps);
    EXPECT_THROW(parse_trace(net, "t\nnope\n"), ParseError);
    std::vector<TransitionId> bad{0, 0, 0};
    EXPECT_FALSE(replay(net, net.initial(), bad));
}

TEST(Trace, CorruptedTraceFailsVerification)
{
    Net net = parse_xpn("places: a b\nmarking: a=2\ntrans t: in a ; out b\n");
    Trace tr = *replay(net, net.initial(), std::vector<TransitionId>{0, 0});
    EXPECT_TRUE(verify_trace(net, tr));
    tr.markings[1] = mk({2, 0});
    EXPECT_FALSE(verify_trace(net, tr));
}

TEST(ExploreProperty, AgreesWithNaiveEnumeration)
{
    std::mt19937_64 rng(31);
    testkit::Shape shape;
    shape.max_places = 4;
    shape.non_increasing = true;
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        Net net = testkit::random_net(rng, shape, testkit::Mix::HierarchicalIRT);
        auto naive = testkit::to_naive(net);
        testkit::Graph g = testkit::explore(naive, naive.initial, 20000);
        if (!g.complete) continue;
        ++checked;
        ReachableSet rs = enumerate_reachable(net, net.initial());
        ASSERT_TRUE(rs.complete);
        ASSERT_EQ(rs.markings.size(), g.states.size());
        for (const Marking& m : rs.markings) ASSERT_TRUE(g.contains(testkit::to_state(m)));

        bool any_dead = false;
        for (const auto& s : g.states) any_dead |= testkit::naive_dead(naive, s);
        SearchResult dl = bounded_deadlock(net);
        ASSERT_EQ(dl.verdict == SearchVerdict::Found, any_dead);

        // A reachable target, an unreachable one, and a cover query.
        std::uniform_int_distribution<std::size_t> which(0, g.states.size() - 1);
        const testkit::State& hit = g.states[which(rng)];
        SearchResult r = bounded_reach(net, testkit::to_marking(hit));
        ASSERT_EQ(r.verdict, SearchVerdict::Found);
        ASSERT_EQ(testkit::to_state(r.trace->last()), hit);
        ASSERT_TRUE(verify_trace(net, *r.trace));

        testkit::State miss = hit;
        miss[0] += 100;
        ASSERT_EQ(bounded_reach(net, testkit::to_marking(miss)).verdict, SearchVerdict::ExhaustedStateSpace);

        testkit::State goal(net.place_count(), 0);
        goal[which(rng) % goal.size()] = 2;
        bool coverable = false;
        for (const auto& s : g.states) {
            bool ge = true;
            for (std::size_t p = 0; p < s.size(); ++p) ge &= s[p] >= goal[p];
            coverable |= ge;
        }
        ASSERT_EQ(bounded_cover(net, testkit::to_marking(goal)).verdict == SearchVerdict::Found, coverable);
    }
    EXPECT_GT(checked, 100);
}

TEST(ExploreProperty, ThreadsDoNotChangeResults)
{
    std::mt19937_64 rng(32);
    testkit::Shape shape;
    shape.max_places = 5;
    shape.max_transitions = 6;
    shape.max_tokens = 4;
    for (int i = 0; i < 60; ++i) {
        Net net = testkit::random_net(rng, shape, testkit::Mix::HierarchicalIR);
        Marking goal(net.place_count());
        goal[0] = 3;
        SearchBudget one = small_budget(5000), four = small_budget(5000);
        four.threads = 4;
        SearchResult a = bounded_cover(net, goal, one), b = bounded_cover(net, goal, four);
        ASSERT_EQ(a.verdict, b.verdict);
        ASSERT_EQ(a.trace, b.trace);
        ASSERT_EQ(a.expanded, b.expanded);
        SearchResult da = bounded_deadlock(net, one), db = bounded_deadlock(net, four);
        ASSERT_EQ(da.verdict, db.verdict);
        ASSERT_EQ(da.trace, db.trace);
    }
}

TEST(Backward, ZeroTargetIsCoverable)
{
    Net net = parse_xpn("places: p\n");
    EXPECT_EQ(backward_cover(net, Marking(1)), CoverVerdict::Coverable);
}

TEST(Backward, SelfLoopCannotGrow)
{
    Net net = parse_xpn("places: p\nmarking: p=1\ntrans t: in p ; out p\n");
    EXPECT_EQ(backward_cover(net, mk({2})), CoverVerdict::NotCoverable);
    EXPECT_EQ(bounded_cover(net, mk({2})).verdict, SearchVerdict::ExhaustedStateSpace);
}

TEST(Backward, ResetWithoutProducer)
{
    Net net = parse_xpn("places: p1 p2\nmarking: p1=1\ntrans t: in p1, reset p2\n");
    EXPECT_EQ(backward_cover(net, mk({0, 1})), CoverVerdict::NotCoverable);
    EXPECT_EQ(bounded_cover(net, mk({0, 1})).verdict, SearchVerdict::ExhaustedStateSpace);
}

TEST(Backward, RejectsInhibitors)
{
    Net net = parse_xpn("places: p\ntrans t: inh p\n");
    EXPECT_THROW(backward_cover(net, mk({1})), Error);
}

TEST(Backward, TransferSplitsDemand)
{
    // Three tokens in `b` need the transfer to bring at least two from `a`.
    Net net = parse_xpn("places: a b\nmarking: a=2 b=1\ntrans t: xfer a->b\n");
    EXPECT_EQ(backward_cover(net, mk({0, 3})), CoverVerdict::Coverable);
    EXPECT_EQ(backward_cover(net, mk({0, 4})), CoverVerdict::NotCoverable);
    auto preds = minimal_predecessors(net, 0, mk({0, 3}));
    // Minimal ways to end with 3 in b: 0..3 already there, the rest from a.
    EXPECT_EQ(preds.size(), 4u);
}

TEST(Backward, UpwardClosedSetKeepsMinimalElements)
{
    UpwardClosedSet s;
    EXPECT_TRUE(s.insert(mk({2, 2})));
    EXPECT_FALSE(s.insert(mk({3, 2})));
    EXPECT_TRUE(s.insert(mk({1, 5})));
    EXPECT_TRUE(s.insert(mk({1, 1})));
    EXPECT_EQ(s.basis().size(), 1u);
    EXPECT_TRUE(s.contains(mk({1, 9})));
    EXPECT_FALSE(s.contains(mk({0, 9})));
    EXPECT_TRUE(s.is_antichain());
}

TEST(BackwardProperty, AgreesWithForwardAndStaysAntichain)
{
    std::mt19937_64 rng(33);
    testkit::Shape shape;
    shape.max_places = 4;
    shape.max_transitions = 4;
    int checked = 0;
    for (int i = 0; i < 300 && checked < 120; ++i) {
        Net net = testkit::random_net(rng, shape, i % 2 ? testkit::Mix::Plain : testkit::Mix::HierarchicalIRT);
        bool inhibitor = false;
        for (const auto& t : net.transitions())
            for (const auto& a : t.pre) inhibitor |= std::holds_alternative<Inhibitor>(a.kind);
        if (inhibitor) continue;
        auto naive = testkit::to_naive(net);
        testkit::Graph g = testkit::explore(naive, naive.initial, 100000);
        if (!g.complete) continue;
        ++checked;
        testkit::State goal(net.place_count(), 0);
        goal[static_cast<std::size_t>(i) % goal.size()] = 1 + i % 3;
        bool coverable = false;
        for (const auto& s : g.states) {
            bool ge = true;
            for (std::size_t p = 0; p < s.size(); ++p) ge &= s[p] >= goal[p];
            coverable |= ge;
        }
        bool antichain = true;
        UpwardClosedSet set = backward_coverability_set(
            net, testkit::to_marking(goal), [&](const UpwardClosedSet& u) { antichain &= u.is_antichain(); });
        ASSERT_TRUE(antichain);
        ASSERT_EQ(set.contains(net.initial()), coverable) << render_xpn(net);
        ASSERT_EQ(backward_cover(net, testkit::to_marking(goal)) == CoverVerdict::Coverable, coverable);
        // Every reachable marking lies in the set exactly when it can still cover the goal.
        for (std::size_t v = 0; v < g.states.size() && v < 50; ++v) {
            testkit::Graph from_v = testkit::explore(naive, g.states[v], 100000);
            bool can = false;
            for (const auto& s : from_v.states) {
                bool ge = true;
                for (std::size_t p = 0; p < s.size(); ++p) ge &= s[p] >= goal[p];
                can |= ge;
            }
            ASSERT_EQ(set.contains(testkit::to_marking(g.states[v])), can);
        }
    }
    EXPECT_GT(checked, 60);
}
