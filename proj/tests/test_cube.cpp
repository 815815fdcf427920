// Tests for braid cubes, delooping and enhanced words.
#include <gtest/gtest.h>

#include <random>

#include <khmorse/cube.hpp>

using namespace khmorse;

namespace
{

BraidWord t3(int k)
{
    BraidWord w(3, {});
    for (int i = 0; i < k; ++i)
    {
        w.letters.push_back({1, 1});
        w.letters.push_back({2, 1});
    }
    return w;
}

std::uint64_t bits_from(const std::string& s)
{
    std::uint64_t b = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        b |= std::uint64_t(s[i] == '1') << i;
    return b;
}

// Superscript positions predicted by the 2-strand rule: every 0 but the last.
std::vector<int> t2_rule(std::uint64_t bits, int m)
{
    std::vector<int> out;
    int last = -1;
    for (int r = 0; r < m; ++r)
        if (!((bits >> r) & 1))
            last = r;
    for (int r = 0; r < m; ++r)
        if (!((bits >> r) & 1) && r != last)
            out.push_back(r + 1);
    return out;
}

// 3-strand rule: a 0 followed by an odd number of 1s and then a 0.
std::vector<int> t3_rule(std::uint64_t bits, int N)
{
    std::vector<int> out;
    for (int r = 0; r < N; ++r)
    {
        if ((bits >> r) & 1)
            continue;
        int s = r + 1, ones = 0;
        while (s < N && ((bits >> s) & 1))
            ++ones, ++s;
        if (s < N && ones % 2 == 1)
            out.push_back(r + 1);
    }
    return out;
}

BraidWord random_word(std::mt19937& rng, int strands, int len)
{
    BraidWord w(strands, {});
    for (int i = 0; i < len; ++i)
        w.letters.push_back({std::uniform_int_distribution<int>(1, strands - 1)(rng),
                             std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1});
    return w;
}

} // namespace

TEST(Cube, ResolveTwoZeros)
{
    Smoothing s = resolve(sigma(1, 2), 0);
    EXPECT_EQ(s.tangle.circles(), 1u);
    EXPECT_EQ(s.tangle, Tangle({1, 0, 3, 2}, 1));
    EXPECT_EQ(s.circle_origins, std::vector<int>{1});
}

TEST(Cube, AllOnesIsIdentity)
{
    for (int m = 0; m <= 6; ++m)
    {
        Smoothing s = resolve(sigma(1, m), (std::uint64_t(1) << m) - 1);
        EXPECT_EQ(s.tangle, Tangle::identity_braid(2));
    }
}

TEST(Cube, SingleCircleOriginOnThreeStrandState)
{
    Smoothing s = resolve(t3(3), bits_from("101001"));
    EXPECT_EQ(s.tangle.circles(), 1u);
    EXPECT_EQ(s.circle_origins, std::vector<int>{2});
    EnhancedCube cube(t3(3));
    auto a = EnhancedWord::parse("1^- 0^1 1^- 0^- 0^- 1^-");
    auto b = EnhancedWord::parse("1^- 0^x 1^- 0^- 0^- 1^-");
    ASSERT_NE(cube.find(a), no_cell);
    ASSERT_NE(cube.find(b), no_cell);
    EXPECT_EQ(cube.enhanced(cube.find(a)), a);
    EXPECT_EQ(cube.enhanced(cube.find(b)), b);
}

TEST(Cube, SuperscriptRuleTwoStrands)
{
    for (int m = 0; m <= 10; ++m)
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << m); ++bits)
            ASSERT_EQ(resolve(sigma(1, m), bits).circle_origins, t2_rule(bits, m)) << m << " " << bits;
}

TEST(Cube, SuperscriptRuleThreeStrands)
{
    for (int k = 0; k <= 10; ++k)
    {
        BraidWord w = t3(k);
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << (2 * k)); ++bits)
            ASSERT_EQ(resolve(w, bits).circle_origins, t3_rule(bits, 2 * k)) << k << " " << bits;
    }
}

TEST(Cube, EmptyWord)
{
    BasedComplex C = khovanov_complex(BraidWord(2, {}));
    ASSERT_EQ(C.size(), 1u);
    EXPECT_EQ(C.hdeg(0), 0);
    EXPECT_EQ(C.qshift(0), 0);
    EXPECT_EQ(C.entry_count(), 0u);
}

TEST(Cube, SingleNegativeCrossing)
{
    BasedComplex C = khovanov_complex(sigma(1));
    ASSERT_EQ(C.size(), 2u);
    EXPECT_EQ(C.hdeg(0), -1);
    EXPECT_EQ(C.qshift(0), -2);
    EXPECT_EQ(C.hdeg(1), 0);
    EXPECT_EQ(C.qshift(1), -1);
}

TEST(Cube, HypercubeSign)
{
    BasedComplex C = khovanov_complex(sigma(1, 4));
    auto* e = C.entry(static_cast<CellId>(bits_from("1101")), static_cast<CellId>(bits_from("1111")));
    ASSERT_NE(e, nullptr);
    ASSERT_EQ(e->terms().size(), 1u);
    EXPECT_EQ(e->terms()[0].second, 1);
    auto* f = C.entry(static_cast<CellId>(bits_from("1000")), static_cast<CellId>(bits_from("1010")));
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->terms()[0].second, -1);
}

TEST(Cube, RandomCubesAreComplexes)
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 40; ++trial)
    {
        int strands = std::uniform_int_distribution<int>(2, 4)(rng);
        BraidWord w = random_word(rng, strands, std::uniform_int_distribution<int>(0, 6)(rng));
        BasedComplex C = khovanov_complex(w);
        EXPECT_EQ(C.size(), std::size_t(1) << w.size());
        EXPECT_NO_THROW(C.check()) << w.to_string();
    }
}

TEST(Cube, DeloopOffsets)
{
    BasedComplex C;
    C.add_cell(Cell{0, 0, Tangle::empty(1), "", {}});
    BasedComplex D = deloop(C);
    ASSERT_EQ(D.size(), 2u);
    EXPECT_EQ(D.qshift(0), -1);
    EXPECT_EQ(D.qshift(1), 1);

    BasedComplex C2;
    C2.add_cell(Cell{0, 0, Tangle::empty(2), "", {}});
    BasedComplex D2 = deloop(C2);
    ASSERT_EQ(D2.size(), 4u);
    std::vector<int> q;
    for (CellId c = 0; c < 4; ++c)
        q.push_back(D2.qshift(c));
    EXPECT_EQ(q, (std::vector<int>{-2, 0, 0, 2}));

    BasedComplex plain = khovanov_complex(sigma(1, 1, 2).power(0));
    EXPECT_EQ(deloop(plain).size(), plain.size());
}

TEST(Cube, DeloopedCubesAreComplexes)
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 20; ++trial)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(1, 5)(rng));
        EXPECT_NO_THROW(deloop(khovanov_complex(w)).check()) << w.to_string();
    }
}

TEST(Cube, ImplicitCubeMatchesGenericDeloop)
{
    std::mt19937 rng(8);
    std::vector<BraidWord> words = {t3(2), sigma(1, 4), t3(1) * sigma(2, -2, 3)};
    for (int trial = 0; trial < 12; ++trial)
        words.push_back(random_word(rng, 3 + trial % 2, std::uniform_int_distribution<int>(1, 6)(rng)));
    for (auto& w : words)
    {
        BasedComplex generic = deloop(khovanov_complex(w));
        EnhancedCube cube(w);
        ASSERT_EQ(cube.size(), generic.size()) << w.to_string();
        for (CellId c = 0; c < static_cast<CellId>(cube.size()); ++c)
        {
            ASSERT_EQ(cube.hdeg(c), generic.hdeg(c));
            ASSERT_EQ(cube.qshift(c), generic.qshift(c));
            ASSERT_EQ(cube.object(c), generic.object(c));
            ASSERT_EQ(cube.label(c), generic.cell(c).label);
            std::map<CellId, DottedMorphism> fast;
            cube.for_each_out(c, [&](CellId t, const DottedMorphism& f) { fast.emplace(t, f); });
            ASSERT_EQ(fast, generic.row(c)) << w.to_string() << " cell " << cube.label(c);
            std::map<CellId, std::pair<int, bool>> summary;
            cube.for_each_entry(c, [&](CellId t, int u, bool inv) { summary[t] = {u, inv}; });
            ASSERT_EQ(summary.size(), generic.row(c).size());
            for (auto& [t, f] : generic.row(c))
            {
                ASSERT_EQ(summary[t].second, f.is_invertible()) << cube.label(c) << " -> " << cube.label(t);
                if (f.is_invertible())
                {
                    ASSERT_EQ(summary[t].first, f.invertible_sign());
                }
            }
        }
    }
}

TEST(Cube, FunctionsOAndL)
{
    EXPECT_EQ(O(EnhancedWord::parse("1 1 0^x 0")), 2);
    EXPECT_EQ(O(EnhancedWord::parse("0^1 0")), 0);
    EXPECT_EQ(O(EnhancedWord::parse("1 1 1 1")), 4);
    EXPECT_EQ(L(EnhancedWord::parse("0^1 0"), EnhancedWord::parse("0 1")), 2);
    EXPECT_EQ(L(EnhancedWord::parse("1 0^x 0"), EnhancedWord::parse("1 1 0")), 2);
    EXPECT_THROW(L(EnhancedWord::parse("1 0"), EnhancedWord::parse("1 0")), InvariantViolation);
}

TEST(Cube, BraidWordAlgebra)
{
    BraidWord w = sigma(1, 1, 3) * sigma(2, -1, 3);
    EXPECT_EQ(w.to_string(), "s1 s2'");
    EXPECT_EQ(w.inverse().to_string(), "s2 s1'");
    EXPECT_EQ(w.power(-2).to_string(), "s2 s1' s2 s1'");
    EXPECT_EQ(w.n_plus(), 1);
    EXPECT_EQ(w.n_minus(), 1);
    EXPECT_THROW(BraidWord(2, {{2, 1}}), ParseError);
}
