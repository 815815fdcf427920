// Tests for the bound functions, parameter reduction, index sets and the
// torsion scanner.  Homology on both sides of every claimed isomorphism is
// computed through the gluing pipeline.
#include <gtest/gtest.h>

#include <random>
#include <set>

#include <khmorse/reduce.hpp>

using namespace khmorse;

namespace
{

DiagramContext bare(int s, int h_min, int h_max, int q_min, int q_max)
{
    DiagramContext c = omega4_context();
    c.s = s;
    c.h_min = h_min;
    c.h_max = h_max;
    c.q_min = q_min;
    c.q_max = q_max;
    return c;
}

std::pair<int, int> i_range(const BigradedHomology& H)
{
    int lo = 0, hi = 0;
    bool first = true;
    for (auto& [ij, g] : H)
    {
        lo = first ? ij.first : std::min(lo, ij.first);
        hi = first ? ij.first : std::max(hi, ij.first);
        first = false;
    }
    return {lo, hi};
}

std::pair<int, int> j_range(const BigradedHomology& H)
{
    int lo = 0, hi = 0;
    bool first = true;
    for (auto& [ij, g] : H)
    {
        lo = first ? ij.second : std::min(lo, ij.second);
        hi = first ? ij.second : std::max(hi, ij.second);
        first = false;
    }
    return {lo, hi};
}

// Every (i, j) around the support of H, parities included.
std::vector<std::pair<int, int>> around(const BigradedHomology& H, int pad)
{
    auto [i0, i1] = i_range(H);
    auto [j0, j1] = j_range(H);
    std::vector<std::pair<int, int>> out;
    for (int i = i0 - pad; i <= i1 + pad; ++i)
        for (int j = j0 - 2 * pad; j <= j1 + 2 * pad; ++j)
            out.push_back({i, j});
    return out;
}

// Checks the reduction at every (i, j) near the support of L(k, m).
void check_reduction(const DiagramContext& c, int k, int m, int a, int b, bool expect_moves)
{
    BigradedHomology H1 = link_homology(c, k, m);
    Reduction first = reduce_parameters({0, 0, k, m, a, b}, c);
    int k2 = first.output.k, m2 = first.output.m;
    if (expect_moves)
    {
        EXPECT_TRUE(k2 != k || m2 != m) << k << " " << m;
    }
    BigradedHomology H2 = link_homology(c, k2, m2);
    for (auto [i, j] : around(H1, 2))
    {
        Reduction r = reduce_parameters({i, j, k, m, a, b}, c);
        ASSERT_EQ(r.output.k, k2);
        ASSERT_EQ(r.output.m, m2);
        for (auto& st : r.trace)
            EXPECT_TRUE(st.guard_holds) << st.rule << " at " << i << "," << j;
        for (int dc = 0; dc <= a; ++dc)
            for (int dd = 0; dd <= b; ++dd)
                EXPECT_EQ(group_at(H1, i + dc, j + dd), group_at(H2, r.output.i + dc, r.output.j + dd))
                    << "L(" << k << "," << m << ") at " << i + dc << "," << j + dd << " vs L(" << k2 << "," << m2
                    << ") at " << r.output.i + dc << "," << r.output.j + dd;
    }
}

} // namespace

TEST(Bounds, ArithmeticExamples)
{
    EXPECT_EQ(v1(0, 0, 1, 2, bare(2, 0, 0, 0, 0)), -1);
    EXPECT_EQ(v2(0, 0, 0, 0, bare(0, 0, 0, 0, 0)), 4);
    EXPECT_EQ(w1(0, 0, 0, 0, bare(0, 0, 0, 0, 0)), -6);
    EXPECT_EQ(w2(0, 0, 0, 0, bare(0, 0, 0, 0, 0)), 5);
    EXPECT_EQ(g_bound(0, 0, bare(2, 0, 0, 0, 0)), 22);
    EXPECT_EQ(h_bound(0, MergedSpan{0, 0}), Rational(8));
    EXPECT_EQ(h_bound(1, MergedSpan{0, 0}), Rational(35, 4));
}

TEST(Bounds, LinearCoefficients)
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> u(-20, 20);
    for (int t = 0; t < 100; ++t)
    {
        DiagramContext c = bare(u(rng) & 7, -(u(rng) & 7), u(rng) & 7, -(u(rng) & 15), u(rng) & 15);
        int i = u(rng), j = u(rng), k = u(rng), m = u(rng), a = u(rng) & 7, b = u(rng) & 7;
        EXPECT_EQ(v1(i + 1, j, k, m, c) - v1(i, j, k, m, c), -3);
        EXPECT_EQ(v2(i, j + 1, k, m, c) - v2(i, j, k, m, c), 2);
        EXPECT_EQ(w1(i, j, k, m + 1, c) - w1(i, j, k, m, c), 2);
        EXPECT_EQ(w2(i, j, k, m + 1, c) - w2(i, j, k, m, c), 3);
        EXPECT_EQ(w1(i, j, k + 1, m, c) - w1(i, j, k, m, c), 4);
        EXPECT_EQ(g_bound(a + 1, b, c) - g_bound(a, b, c), 3);
        EXPECT_EQ(g_bound(a, b + 1, c) - g_bound(a, b, c), 2);
        MergedSpan sp{c.h_min, c.h_max};
        EXPECT_EQ(h_bound(a + 4, sp) - h_bound(a, sp), Rational(3));
    }
}

TEST(Context, BuiltInsAndCaching)
{
    DiagramContext c4 = omega4_context(), c5 = omega5_context();
    EXPECT_EQ(c4.s, 3);
    EXPECT_EQ(c5.s, 3);
    EXPECT_EQ(c4.h_min, 0);
    EXPECT_EQ(c4.q_max, 0);
    c4.check();
    DiagramContext stale = c4;
    stale.q_max = 3;
    EXPECT_THROW(stale.check(), InvariantViolation);

    // A third input carrying a braid: the delooped cube of s1^-3 sits in
    // homological degrees 0..3.
    PlanarArcDiagram D = generic_closure3();
    DiagramContext ct = DiagramContext::make(D, sigma(1, -3, 2));
    EXPECT_EQ(ct.h_min, 0);
    EXPECT_EQ(ct.h_max, 3);
    EXPECT_LT(ct.q_min, ct.q_max);
    ct.check();
}

TEST(Context, DoubleMirrorReturnsTheContext)
{
    DiagramContext c = DiagramContext::make(generic_closure3(), BraidWord(2, {{1, 1}, {1, 1}, {1, -1}}));
    DiagramContext mm = c.mirrored().mirrored();
    EXPECT_TRUE(mm.D == c.D);
    EXPECT_EQ(mm.T.to_string(), c.T.to_string());
    EXPECT_EQ(mm.h_min, c.h_min);
    EXPECT_EQ(mm.q_max, c.q_max);
    DiagramContext m = c.mirrored();
    EXPECT_EQ(m.h_min, -c.h_max);
    EXPECT_EQ(m.q_min, -c.q_max);
    EXPECT_EQ(g_bound(2, 1, m), g_bound(2, 1, c));
}

TEST(IndexSets, Examples)
{
    IndexSets s = index_sets(0, 0, bare(2, 0, 0, 0, 0));
    EXPECT_EQ(s.m_bound, 25);
    EXPECT_EQ(s.M.front(), -24);
    EXPECT_EQ(s.M.back(), 24);
    EXPECT_EQ(s.M.size(), 49u);
    // With the merged span at zero the literal K is (8.75, 8).
    EXPECT_EQ(h_bound(1, MergedSpan{0, 0}), Rational(35, 4));
    EXPECT_TRUE(s.K.empty());

    // The Omega4 diagram: M = -28..28; K_reach restricted to multiples of 3 is -27..27.
    IndexSets o = index_sets(0, 0, omega4_context());
    EXPECT_EQ(o.M.front(), -28);
    EXPECT_EQ(o.M.back(), 28);
    EXPECT_TRUE(o.K.empty());
    std::vector<int> thirds;
    for (int t : o.K_reach)
        if (t % 3 == 0)
            thirds.push_back(t);
    EXPECT_EQ(thirds.front(), -27);
    EXPECT_EQ(thirds.back(), 27);
}

TEST(Reduce, NoLoopReturnsInput)
{
    DiagramContext c = omega4_context();
    Reduction r = reduce_parameters({3, -5, 4, 7, 0, 0}, c);
    EXPECT_EQ(r.output, (ReductionParams{3, -5, 4, 7, 0, 0}));
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].rule, "merge");
}

TEST(Reduce, SingleSteps)
{
    DiagramContext c = omega4_context();
    // m = 28 >= g = 26: two v1 steps.
    Reduction r = reduce_parameters({0, 0, 0, 28, 0, 0}, c);
    EXPECT_EQ(r.output, (ReductionParams{0, 4, 0, 24, 0, 0}));
    EXPECT_EQ(r.trace[0].rule, "v1");
    EXPECT_EQ(r.trace[0].after, (ReductionParams{0, 2, 0, 26, 0, 0}));
    // Large i makes v1 negative: v2 moves (i, j) by (2, 6).
    r = reduce_parameters({40, 0, 0, 26, 0, 0}, c);
    EXPECT_EQ(r.trace[0].rule, "v2");
    EXPECT_EQ(r.output, (ReductionParams{42, 6, 0, 24, 0, 0}));
    // k = 8 >= h = 8 with i above the bound: (j, k) -> (j + 6, k - 3).
    r = reduce_parameters({0, 0, 8, 0, 0, 0}, c);
    EXPECT_EQ(r.trace.back().rule, "twist_high");
    EXPECT_EQ(r.output, (ReductionParams{0, 6, 5, 0, 0, 0}));
    r = reduce_parameters({-9, 0, 8, 0, 0, 0}, c);
    EXPECT_EQ(r.trace.back().rule, "twist_low");
    EXPECT_TRUE(r.trace.back().guard_holds);
    EXPECT_EQ(r.output, (ReductionParams{-5, 12, 5, 0, 0, 0}));
    // m <= -g: w steps.
    r = reduce_parameters({0, 0, 0, -26, 0, 0}, c);
    EXPECT_TRUE(r.trace[0].rule == "w1" || r.trace[0].rule == "w2");
    EXPECT_EQ(r.output.m, -24);
    // Negative k goes through the mirror.
    r = reduce_parameters({0, 0, -9, 0, 0, 0}, c);
    EXPECT_EQ(r.trace.front().rule, "mirror");
    EXPECT_EQ(r.trace.front().after, (ReductionParams{0, 0, 9, 0, 1, 0}));
    EXPECT_EQ(r.trace.back().rule, "unmirror");
    // 9 >= h(1, span 0) = 35/4, so one twist step runs on the mirror side.
    EXPECT_EQ(r.output, (ReductionParams{0, -6, -6, 0, 0, 0}));
}

TEST(Reduce, StructuralProperties)
{
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> big(-200, 200), small(0, 3);
    std::vector<DiagramContext> contexts{omega4_context(), omega5_context(),
                                        DiagramContext::make(generic_closure3(), sigma(1, 2, 2))};
    for (auto& c : contexts)
        for (int t = 0; t < 300; ++t)
        {
            ReductionParams p{big(rng), big(rng), big(rng), big(rng), small(rng), small(rng)};
            Reduction r = reduce_parameters(p, c);
            IndexSets s = index_sets(p.a, p.b, c);
            EXPECT_TRUE(std::binary_search(s.M.begin(), s.M.end(), r.output.m)) << r.output.m;
            EXPECT_TRUE(std::binary_search(s.K_reach.begin(), s.K_reach.end(), r.output.k)) << r.output.k;
            // Idempotent on outputs.
            EXPECT_EQ(reduce_parameters(r.output, c).output, r.output);
            // k2 and m2 do not depend on (i, j).
            Reduction r0 = reduce_parameters({0, 0, p.k, p.m, p.a, p.b}, c);
            EXPECT_EQ(r0.output.k, r.output.k);
            EXPECT_EQ(r0.output.m, r.output.m);
            // Every loop step lowers |m| by 2 or k by 3.
            bool mirrored = r.trace.front().rule == "mirror";
            ReductionParams prev = mirrored ? r.trace.front().after : p;
            // The printed w2 guard is only implied by m <= -g when q_min <= 0.
            int q_min = mirrored ? c.mirrored().q_min : c.q_min;
            for (auto& st : r.trace)
            {
                if (st.rule == "v1" || st.rule == "v2" || st.rule == "w1" || st.rule == "w2")
                {
                    EXPECT_EQ(std::abs(st.after.m), std::abs(prev.m) - 2);
                }
                if (st.rule.rfind("twist", 0) == 0)
                {
                    EXPECT_EQ(st.after.k, prev.k - 3);
                }
                if (st.rule != "unmirror")
                    prev = st.after;
                if (st.rule != "w2" || q_min <= 0)
                {
                    EXPECT_TRUE(st.guard_holds) << st.rule;
                }
            }
        }
}

// The isomorphisms behind each loop body, tested wherever their
// hypotheses hold, including parameters the loops never reach.
TEST(Isomorphisms, MBodies)
{
    DiagramContext c = omega4_context();
    for (int k = 0; k <= 2; ++k)
        for (int m = 0; m <= 3; ++m)
        {
            BigradedHomology H = link_homology(c, k, m), H2 = link_homology(c, k, m + 2);
            for (auto [i, j] : around(H, 2))
            {
                if (v1(i, j, k, m, c) >= 0)
                {
                    EXPECT_EQ(group_at(H, i, j), group_at(H2, i, j - 2)) << "v1 " << k << " " << m;
                }
                if (v2(i, j, k, m, c) <= 0)
                {
                    EXPECT_EQ(group_at(H, i, j), group_at(H2, i - 2, j - 6)) << "v2 " << k << " " << m;
                }
            }
            BigradedHomology N = link_homology(c, k, -m), N2 = link_homology(c, k, -m - 2);
            for (auto [i, j] : around(N, 2))
            {
                if (w1(i, j, k, -m, c) >= 0)
                {
                    EXPECT_EQ(group_at(N, i, j), group_at(N2, i + 2, j + 6)) << "w1 " << k << " " << -m;
                }
                if (w2(i, j, k, -m, c) <= 0)
                {
                    EXPECT_EQ(group_at(N, i, j), group_at(N2, i, j + 2)) << "w2 " << k << " " << -m;
                }
            }
        }
}

// With q_min > 0 the printed w2 guard is not implied by m <= -g, and the
// reduction falls through to w2 without certification.
TEST(Reduce, PrintedW2GuardGapIsFlagged)
{
    DiagramContext c = DiagramContext::make(generic_closure3(), sigma(1, 2, 2));
    EXPECT_GT(c.mirrored().q_min, 0);
    Reduction r = reduce_parameters({52, 98, -93, 152, 3, 0}, c);
    bool flagged = false;
    for (auto& st : r.trace)
        flagged = flagged || (st.rule == "w2" && !st.guard_holds);
    EXPECT_TRUE(flagged);
}

TEST(Isomorphisms, BodiesWithNonzeroGradingSpans)
{
    for (const BraidWord& T : {sigma(1, 2, 2), sigma(1, -2, 2)})
    {
        DiagramContext c = DiagramContext::make(generic_closure3(), T);
        for (int k = 0; k <= 1; ++k)
            for (int m = 0; m <= 3; ++m)
            {
                BigradedHomology H = link_homology(c, k, m), H2 = link_homology(c, k, m + 2);
                BigradedHomology N = link_homology(c, k, -m), N2 = link_homology(c, k, -m - 2);
                for (auto [i, j] : around(H, 3))
                {
                    if (v1(i, j, k, m, c) >= 0)
                    {
                        EXPECT_EQ(group_at(H, i, j), group_at(H2, i, j - 2));
                    }
                    if (v2(i, j, k, m, c) <= 0)
                    {
                        EXPECT_EQ(group_at(H, i, j), group_at(H2, i - 2, j - 6));
                    }
                }
                for (auto [i, j] : around(N, 3))
                {
                    if (w1(i, j, k, -m, c) >= 0)
                    {
                        EXPECT_EQ(group_at(N, i, j), group_at(N2, i + 2, j + 6));
                    }
                    if (w2(i, j, k, -m, c) <= 0)
                    {
                        EXPECT_EQ(group_at(N, i, j), group_at(N2, i, j + 2));
                    }
                }
            }
    }
}

TEST(Isomorphisms, TwistBodies)
{
    DiagramContext c = omega4_context();
    for (int k = 0; k <= 3; ++k)
        for (int m : {-2, 0, 1})
        {
            MergedSpan sp = merged_span(m, c);
            BigradedHomology H = link_homology(c, k, m), H3 = link_homology(c, k + 3, m);
            for (auto [i, j] : around(H, 3))
            {
                if (i > sp.h_max - (4 * k) / 3)
                {
                    EXPECT_EQ(group_at(H, i, j), group_at(H3, i, j - 6)) << k << " " << m;
                }
                if (i < sp.h_min - 1)
                {
                    EXPECT_EQ(group_at(H, i, j), group_at(H3, i - 4, j - 12)) << k << " " << m;
                }
            }
        }
}

TEST(Reduce, SoundWhereLoopsRun)
{
    DiagramContext c4 = omega4_context(), c5 = omega5_context();
    check_reduction(c4, 8, 0, 0, 0, true);
    check_reduction(c4, 9, -1, 0, 0, true);
    check_reduction(c4, 0, 28, 0, 0, true);
    check_reduction(c4, 1, -27, 0, 0, true);
    check_reduction(c5, 9, 1, 0, 0, true);
    check_reduction(c4, -9, 0, 0, 0, true);
    check_reduction(c4, -1, 30, 0, 0, true);
    check_reduction(c4, 11, 0, 1, 1, true);
}

TEST(Reduce, SoundOnSmallRandomParameters)
{
    DiagramContext c = omega4_context();
    std::mt19937 rng(17);
    for (int t = 0; t < 6; ++t)
    {
        int k = std::uniform_int_distribution<int>(-4, 4)(rng), m = std::uniform_int_distribution<int>(-6, 6)(rng);
        check_reduction(c, k, m, 0, 0, false);
    }
}

TEST(Scan, EmptyWindow)
{
    TorsionReport r = scan_family(Family::omega4, ScanWindow{1, 0, 1, 5});
    EXPECT_TRUE(r.rows.empty());
    EXPECT_TRUE(r.only_Z2);
    EXPECT_EQ(r.checked, 0);
}

TEST(Scan, SmallWindowsAndMemo)
{
    HomologyCache cache;
    PipelineOptions opt;
    opt.threads = 2;
    TorsionReport r = scan_family(Family::torus3, ScanWindow{-2, 4, 0, 0}, opt, &cache);
    EXPECT_EQ(r.rows.size(), 7u);
    EXPECT_EQ(r.checked, 7);
    EXPECT_TRUE(r.only_Z2);
    EXPECT_EQ(cache.size(), 7u);
    // omega1 with k = 0, 1 repeats torus3 at 1 and 4.
    TorsionReport r1 = scan_family(Family::omega1, ScanWindow{0, 1, 0, 0}, opt, &cache);
    EXPECT_EQ(cache.size(), 7u);
    EXPECT_EQ(r1.rows[1].braid, r.rows[6].braid);
    EXPECT_EQ(r1.rows[1].torsion_orders, r.rows[6].torsion_orders);
    // The trefoil-like (s1 s2)^2 closure carries Z/2.
    EXPECT_EQ(r.rows[4].max_order, 2);
}

TEST(Scan, BudgetSkipsAreReported)
{
    PipelineOptions opt;
    opt.budget = 40;
    TorsionReport r = scan_family(Family::omega4, ScanWindow{2, 2, 1, 2}, opt);
    EXPECT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.skipped, 2);
    EXPECT_FALSE(r.rows[0].reason.empty());
    EXPECT_TRUE(r.rows[0].torsion_orders.empty());
}

TEST(Scan, FamilyWords)
{
    EXPECT_EQ(family_braid(Family::omega3, 1, 0).to_string(), "s1 s2 s1 s2 s1 s2 s1");
    EXPECT_EQ(family_braid(Family::omega4, 0, 3).to_string(), "s1' s1' s1'");
    EXPECT_EQ(family_braid(Family::omega5, 0, 2).to_string(), "s2 s2");
    EXPECT_EQ(parse_family("torus3-s1"), Family::torus3_s1);
    EXPECT_THROW(parse_family("omega6"), ParseError);
}
