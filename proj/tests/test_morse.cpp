// Tests for matchings, zig-zag paths, Morse complexes and Gaussian elimination.
#include <gtest/gtest.h>

#include <random>

#include <khmorse/torus.hpp>

using namespace khmorse;

namespace
{

DottedMorphism unit(Coeff c = 1)
{
    return DottedMorphism::identity(Tangle::empty(), c);
}

// Integer complex on empty objects: cells given by hdeg, entries by scalars.
BasedComplex scalar_complex(const std::vector<int>& hdegs, const std::vector<std::tuple<int, int, int>>& entries)
{
    BasedComplex C;
    for (int h : hdegs)
        C.add_cell(Cell{h, 0, Tangle::empty(), "", {}});
    for (auto [a, b, c] : entries)
        C.add_entry(a, b, unit(c));
    return C;
}

// z1 -> x1 and z2 -> x2 matched, with z1 -> x2 and z2 -> x1 closing a cycle.
BasedComplex square()
{
    return scalar_complex({0, 0, 1, 1}, {{0, 2, 1}, {1, 2, 1}, {1, 3, 1}, {0, 3, -1}});
}

BraidWord random_word(std::mt19937& rng, int strands, int len)
{
    BraidWord w(strands, {});
    for (int i = 0; i < len; ++i)
        w.letters.push_back({std::uniform_int_distribution<int>(1, strands - 1)(rng),
                             std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1});
    return w;
}

// A greedy matching on a small delooped cube: scan cells and match along
// invertible entries between unmatched cells, then keep it only if it is
// acyclic.  Independent of the torus rules.
std::vector<CellId> greedy_partner(const BasedComplex& C)
{
    std::vector<CellId> p(C.size(), no_cell);
    for (CellId a = 0; a < static_cast<CellId>(C.size()); ++a)
    {
        if (p[a] != no_cell)
            continue;
        for (auto& [b, f] : C.row(a))
            if (p[b] == no_cell && f.is_invertible())
            {
                std::vector<CellId> trial = p;
                trial[a] = b, trial[b] = a;
                if (validate_partner(C, [&](CellId c) { return trial[c]; }, false))
                {
                    p = trial;
                    break;
                }
            }
    }
    return p;
}

} // namespace

TEST(Morse, TwoStrandMatchingIsValid)
{
    EnhancedCube cube(t2_word(4));
    Matching M = matching_T2(cube);
    MatchingReport rep = validate_matching(cube, M);
    EXPECT_TRUE(rep.ok) << rep.message;
    // The cancellation order doubles as the acyclicity certificate.
    EXPECT_EQ(rep.order.size(), M.size());
}

TEST(Morse, RejectsDoubledCell)
{
    BasedComplex C = square();
    Matching M(C.size(), {{0, 2}, {1, 2}});
    MatchingReport rep = validate_matching(C, M);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.violation, "partial_matching");
}

TEST(Morse, RejectsZigZagCycle)
{
    BasedComplex C = square();
    Matching M(C.size(), {{0, 2}, {1, 3}});
    MatchingReport rep = validate_matching(C, M);
    EXPECT_FALSE(rep.ok);
    EXPECT_EQ(rep.violation, "cycle");
    EXPECT_EQ(rep.witness.size(), 4u);
}

TEST(Morse, RejectsNonInvertibleAndZeroEntries)
{
    BasedComplex C = scalar_complex({0, 1, 1}, {{0, 1, 2}});
    EXPECT_EQ(validate_matching(C, Matching(C.size(), {{0, 1}})).violation, "not_invertible");
    EXPECT_EQ(validate_matching(C, Matching(C.size(), {{0, 2}})).violation, "zero_entry");
    EXPECT_EQ(validate_matching(C, Matching(C.size(), {{0, 7}})).violation, "unknown_cell");
}

TEST(Morse, WorkedTwoLevelExample)
{
    // Columns a0 a1 a2 over rows b0 b1 b2, with pi and the identities all
    // realised as the scalar 1 on the empty object.
    BasedComplex C = scalar_complex({0, 0, 0, 1, 1, 1},
                                    {{0, 3, 1}, {1, 3, 1}, {1, 4, 1}, {2, 4, 1}, {0, 5, 1}, {2, 5, 1}});
    Matching M(C.size(), {{1, 3}, {2, 4}});
    BasedComplex R = morse_complex(C, M);
    ASSERT_EQ(R.size(), 2u);
    ASSERT_NE(R.entry(0, 1), nullptr);
    EXPECT_EQ(R.entry(0, 1)->scalar(), 2);
}

TEST(Morse, EmptyMatchingKeepsComplex)
{
    BasedComplex C = deloop(khovanov_complex(sigma(1, 2) * sigma(2, -1, 3)));
    BasedComplex R = morse_complex(C, Matching(C.size(), {}));
    ASSERT_EQ(R.size(), C.size());
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
    {
        EXPECT_EQ(R.hdeg(c), C.hdeg(c));
        EXPECT_EQ(R.qshift(c), C.qshift(c));
        EXPECT_EQ(R.row(c), C.row(c));
    }
}

TEST(Morse, PathCountsBetweenTwoStrandCriticalCells)
{
    for (int m = 2; m <= 8; ++m)
    {
        EnhancedCube cube(t2_word(m));
        auto table = partner_table(cube, t2_rule);
        auto partner = [&](CellId c) { return table[c]; };
        std::map<int, CellId> crit;
        for (CellId c = 0; c < static_cast<CellId>(cube.size()); ++c)
            if (table[c] == no_cell)
                crit[cube.hdeg(c)] = c;
        ASSERT_EQ(crit.size(), static_cast<std::size_t>(m + 1));
        for (int h = -m; h < 0; ++h)
        {
            auto paths = zigzag_paths(cube, partner, crit[h], crit[h + 1]);
            EXPECT_EQ(paths.size(), h == -1 ? 1u : 2u) << "m=" << m << " h=" << h;
            for (auto& p : paths)
                EXPECT_EQ(p.reversed, static_cast<int>(p.cells.size() - 2) / 2);
        }
        EXPECT_TRUE(zigzag_paths(cube, partner, crit[-2], crit[0]).empty());
    }
}

TEST(Morse, CellCountAndDSquared)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 25; ++trial)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(1, 6)(rng));
        BasedComplex C = deloop(khovanov_complex(w));
        auto p = greedy_partner(C);
        Matching M = Matching::from_partner(C, [&](CellId c) { return p[c]; });
        BasedComplex R = morse_complex(C, M);
        EXPECT_EQ(R.size(), C.size() - 2 * M.size()) << w.to_string();
        EXPECT_NO_THROW(R.check()) << w.to_string();
    }
}

TEST(Morse, TorusMorseComplexesAreComplexes)
{
    for (int m = 0; m <= 8; ++m)
        EXPECT_NO_THROW(minimal_complex_T2(m, true).check());
    for (int k = 0; k <= 5; ++k)
        EXPECT_NO_THROW(minimal_complex_T3(k, true).check());
}

TEST(Morse, GaussianEliminationBasics)
{
    BasedComplex pair = scalar_complex({0, 1}, {{0, 1, -1}});
    EXPECT_EQ(gaussian_eliminate(pair).size(), 0u);

    BasedComplex stuck = scalar_complex({0, 1, 1}, {{0, 1, 2}, {0, 2, 3}});
    BasedComplex R = gaussian_eliminate(stuck);
    ASSERT_EQ(R.size(), 3u);
    EXPECT_EQ(R.row(0), stuck.row(0));
}

TEST(Morse, GaussianEliminationMatchesMorseCellCounts)
{
    // Both reductions of the two-strand torus cube end with m + 1 cells.
    for (int m = 0; m <= 6; ++m)
    {
        BasedComplex G = gaussian_eliminate(deloop(khovanov_complex(t2_word(m))));
        EXPECT_EQ(G.size(), static_cast<std::size_t>(m + 1));
        EXPECT_NO_THROW(G.check());
    }
}
