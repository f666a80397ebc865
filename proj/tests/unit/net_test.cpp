#include <hipn/net.hpp>
#include <hipn/xpn_format.hpp>

#include <gtest/gtest.h>

#include <set>

#include "testkit.hpp"

using namespace hipn;

namespace {

Marking mk(std::initializer_list<long long> xs)
{
    return testkit::to_marking(testkit::State(xs));
}

bool is_special(const Transition& t, PlaceId p)
{
    const ArcKind* k = t.find_pre(p);
    return k && !std::holds_alternative<Numeric>(*k);
}

// Every special arc has special arcs from all lower places to the same transition.
bool hierarchy_by_enumeration(const Net& net)
{
    for (const Transition& t : net.transitions())
        for (PlaceId p = 0; p < net.place_count(); ++p)
            if (is_special(t, p))
                for (PlaceId q = 0; q < p; ++q)
                    if (!is_special(t, q)) return false;
    return true;
}

bool inhibitors_downward_closed(const Net& net)
{
    for (const Transition& t : net.transitions())
        for (PlaceId p = 0; p < net.place_count(); ++p) {
            const ArcKind* k = t.find_pre(p);
            if (!k || !std::holds_alternative<Inhibitor>(*k)) continue;
            for (PlaceId q = 0; q < p; ++q) {
                const ArcKind* below = t.find_pre(q);
                if (!below || !std::holds_alternative<Inhibitor>(*below)) return false;
            }
        }
    return true;
}

}  // namespace

TEST(Validate, EmptyNetIsClean)
{
    EXPECT_TRUE(validate(Net{}).empty());
}

TEST(Validate, DanglingTransferTarget)
{
    Transition t{"t", {}, {}};
    t.add_pre(0, Transfer{7});
    Net net({"p"}, {t}, Marking(1));
    auto d = validate(net);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, DiagnosticCode::DanglingTransferTarget);
    EXPECT_TRUE(has_errors(d));
}

TEST(Validate, MinimalNetIsClean)
{
    NetBuilder b;
    auto p1 = b.add_place("p1", 1);
    b.add_place("p2");
    auto t = b.add_transition("t");
    b.input(t, p1, 1);
    EXPECT_TRUE(validate(b.build()).empty());
}

TEST(Validate, SelfTransferIsOnlyAWarning)
{
    NetBuilder b;
    auto p = b.add_place("p", 2);
    auto t = b.add_transition("t");
    b.transfer(t, p, p);
    auto d = validate(b.build());
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, DiagnosticCode::SelfTransfer);
    EXPECT_EQ(d[0].severity, Severity::Warning);
    EXPECT_FALSE(has_errors(d));
}

TEST(Validate, ZeroWeightAndLengthMismatch)
{
    Transition t{"t", {PreArc{0, Numeric{0}}}, {}};
    Net net({"p"}, {t}, Marking(2));
    std::set<DiagnosticCode> codes;
    for (const auto& d : validate(net)) codes.insert(d.code);
    EXPECT_TRUE(codes.count(DiagnosticCode::ZeroWeightArc));
    EXPECT_TRUE(codes.count(DiagnosticCode::MarkingLengthMismatch));
}

TEST(Validate, DuplicateNames)
{
    Net net({"p", "p"}, {}, Marking(2));
    auto d = validate(net);
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d[0].code, DiagnosticCode::DuplicateName);
}

TEST(Builder, ZeroWeightsNormaliseAway)
{
    NetBuilder b;
    auto p = b.add_place("p");
    auto t = b.add_transition("t");
    b.input(t, p, 0).output(t, p, 0);
    Net net = b.build();
    EXPECT_TRUE(net.transitions()[0].pre.empty());
    EXPECT_TRUE(net.transitions()[0].post.empty());
}

TEST(Builder, DuplicatePreArcThrows)
{
    NetBuilder b;
    auto p = b.add_place("p");
    auto t = b.add_transition("t");
    b.input(t, p, 1);
    EXPECT_THROW(b.reset(t, p), Error);
}

TEST(Classify, PlainNet)
{
    Net net = parse_xpn("places: a b\ntrans t: in a ; out b\n");
    NetClass c = classify(net);
    EXPECT_TRUE(c.specials.empty());
    EXPECT_TRUE(c.ert_eligible);
    EXPECT_EQ(c.label, "PN");
}

TEST(Classify, HierarchicalInhibitors)
{
    NetClass c = classify(parse_xpn("places: p1 p2\ntrans t: inh p1, inh p2\n"));
    EXPECT_TRUE(c.hierarchical.inhibitor);
    EXPECT_TRUE(c.ert_eligible);
    EXPECT_EQ(c.label, "H{I}");
}

TEST(Classify, InhibitorWithGapBelowIsNotHierarchical)
{
    NetClass c = classify(parse_xpn("places: p1 p2\ntrans t: inh p2\n"));
    EXPECT_FALSE(c.hierarchical.inhibitor);
    EXPECT_FALSE(c.fully_hierarchical);
    EXPECT_FALSE(c.ert_eligible);
    EXPECT_EQ(c.label, "{I}");
}

TEST(Classify, ResetsAboveHierarchicalInhibitors)
{
    NetClass c = classify(parse_xpn("places: a b c\ntrans t: inh a, reset c\n"));
    EXPECT_TRUE(c.ert_eligible);
    EXPECT_FALSE(c.fully_hierarchical);
    EXPECT_EQ(c.label, "R-H{I}");
}

TEST(Classify, ConstrainedTransfer)
{
    EXPECT_EQ(classify(parse_xpn("places: a b\ntrans t: xfer a->b\n")).label, "H{cT}");
    NetClass bad = classify(parse_xpn("places: a b\ntrans t: reset a, xfer b->a\n"));
    EXPECT_FALSE(bad.constrained_transfer);
    // The target has no arc at all: counts as a numeric arc of weight zero.
    EXPECT_TRUE(classify(parse_xpn("places: a b c\ntrans t: reset a, xfer b->c\n")).constrained_transfer);
}

TEST(Classify, RejectsInvalidNet)
{
    Transition t{"t", {}, {}};
    t.add_pre(0, Transfer{5});
    EXPECT_THROW(classify(Net({"p"}, {t}, Marking(1))), Error);
}

TEST(Classify, AgreesWithDirectEnumeration)
{
    std::mt19937_64 rng(11);
    testkit::Shape shape;
    shape.max_places = 5;
    for (int i = 0; i < 500; ++i) {
        Net net = testkit::random_net(rng, shape, testkit::Mix::Anything);
        if (has_errors(validate(net))) continue;
        NetClass c = classify(net);
        EXPECT_EQ(c.fully_hierarchical, hierarchy_by_enumeration(net)) << render_xpn(net);
        EXPECT_EQ(c.ert_eligible, inhibitors_downward_closed(net)) << render_xpn(net);
    }
}

TEST(Fire, InhibitorBlocksNonEmptyPlace)
{
    Net net = parse_xpn("places: p\nmarking: p=1\ntrans t: inh p\n");
    EXPECT_FALSE(is_firable(net, net.initial(), 0));
}

TEST(Fire, ResetNeverDisables)
{
    Net net = parse_xpn("places: p\nmarking: p=5\ntrans t: reset p\n");
    EXPECT_TRUE(is_firable(net, net.initial(), 0));
    EXPECT_EQ(fire(net, net.initial(), 0), mk({0}));
}

TEST(Fire, InsufficientTokens)
{
    Net net = parse_xpn("places: p\nmarking: p=2\ntrans t: in p*3\n");
    EXPECT_FALSE(is_firable(net, net.initial(), 0));
    EXPECT_THROW(fire(net, net.initial(), 0), Error);
}

TEST(Fire, ClassicalRule)
{
    Net net = parse_xpn("places: p1 p2\nmarking: p1=2\ntrans t: in p1 ; out p2\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({1, 1}));
}

TEST(Fire, TransferMovesEverything)
{
    Net net = parse_xpn("places: p1 p2\nmarking: p1=3 p2=1\ntrans t: xfer p1->p2\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({0, 4}));
}

TEST(Fire, ResetHappensBeforeOutputs)
{
    Net net = parse_xpn("places: p\nmarking: p=5\ntrans t: reset p ; out p*2\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({2}));
}

TEST(Fire, SelfTransferKeepsTheCount)
{
    Net net = parse_xpn("places: p q\nmarking: p=4 q=1\ntrans t: in q, xfer p->p\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({4, 0}));
}

TEST(Fire, TransfersReadOneSnapshot)
{
    // a->b and b->a swap instead of chaining.
    Net net = parse_xpn("places: a b\nmarking: a=3 b=1\ntrans t: xfer a->b, xfer b->a\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({1, 3}));
}

TEST(Fire, TransferIntoResetPlaceSurvives)
{
    Net net = parse_xpn("places: a b\nmarking: a=2 b=5\ntrans t: reset b, xfer a->b\n");
    EXPECT_EQ(fire(net, net.initial(), 0), mk({0, 2}));
}

TEST(Fire, UnknownTransition)
{
    Net net = parse_xpn("places: p\n");
    EXPECT_THROW(is_firable(net, net.initial(), 3), Error);
}

TEST(Successors, DeclarationOrder)
{
    Net net = parse_xpn("places: p q\nmarking: p=1\ntrans t1: in p ; out q\ntrans t2: in p\ntrans t3: in q\n");
    auto s = successors(net, net.initial());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].first, 0u);
    EXPECT_EQ(s[1].first, 1u);
    EXPECT_EQ(s[0].second, mk({0, 1}));
    EXPECT_TRUE(successors(net, mk({0, 0})).empty());
    EXPECT_TRUE(is_deadlocked(net, mk({0, 0})));
    EXPECT_EQ(successors(net, mk({0, 1})).size(), 1u);
}

TEST(FireProperty, MatchesIndependentSemanticsOnAllArcKinds)
{
    std::mt19937_64 rng(5);
    testkit::Shape shape;
    shape.max_places = 5;
    shape.max_transitions = 6;
    std::uniform_int_distribution<long long> tokens(0, 4);
    for (int i = 0; i < 400; ++i) {
        Net net = testkit::random_net(rng, shape, testkit::Mix::Anything);
        auto naive = testkit::to_naive(net);
        for (int k = 0; k < 10; ++k) {
            testkit::State s(net.place_count());
            for (auto& x : s) x = tokens(rng);
            Marking m = testkit::to_marking(s);
            for (TransitionId t = 0; t < net.transition_count(); ++t) {
                bool en = testkit::naive_enabled(naive.transitions[t], s);
                ASSERT_EQ(is_firable(net, m, t), en);
                if (en) ASSERT_EQ(testkit::to_state(fire(net, m, t)), testkit::naive_fire(naive.transitions[t], s));
            }
        }
    }
}

TEST(FireProperty, NeverNegative)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        Net net = testkit::random_net(rng, {}, testkit::Mix::Anything);
        for (const auto& [t, next] : successors(net, net.initial()))
            for (const Tokens& x : next.counts()) ASSERT_GE(x, 0);
    }
}

TEST(FireProperty, MonotoneOnNumericTransitions)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> tokens(0, 3);
    for (int i = 0; i < 300; ++i) {
        Net net = testkit::random_net(rng, {}, testkit::Mix::Plain);
        testkit::State a(net.place_count()), b(net.place_count());
        for (std::size_t p = 0; p < a.size(); ++p) {
            a[p] = tokens(rng);
            b[p] = a[p] + tokens(rng);
        }
        Marking ma = testkit::to_marking(a), mb = testkit::to_marking(b);
        for (TransitionId t = 0; t < net.transition_count(); ++t) {
            if (!is_firable(net, ma, t)) continue;
            ASSERT_TRUE(is_firable(net, mb, t));
            ASSERT_TRUE(leq(fire(net, ma, t), fire(net, mb, t)));
        }
    }
}

TEST(Marking, OrderAndHash)
{
    EXPECT_TRUE(leq(mk({1, 2}), mk({1, 3})));
    EXPECT_FALSE(leq(mk({2, 0}), mk({1, 3})));
    EXPECT_EQ(MarkingHash{}(mk({1, 2})), MarkingHash{}(mk({1, 2})));
    Marking big(1);
    big[0] = Tokens("123456789012345678901234567890");
    EXPECT_NE(MarkingHash{}(big), MarkingHash{}(mk({0})));
}

TEST(Names, Validity)
{
    EXPECT_TRUE(is_valid_name("p1"));
    EXPECT_TRUE(is_valid_name("q.n'"));
    EXPECT_TRUE(is_valid_name("caf\xc3\xa9"));
    EXPECT_FALSE(is_valid_name(""));
    EXPECT_FALSE(is_valid_name("a b"));
    EXPECT_FALSE(is_valid_name("a,b"));
    EXPECT_FALSE(is_valid_name("a->b"));
}
