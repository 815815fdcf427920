// Tests for Smith normal form, the TQFT on delooped complexes, homology,
// the state-sum and Kauffman-bracket oracles, and the gluing pipeline.
#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include <khmorse/oracle.hpp>
#include <khmorse/pipeline.hpp>

using namespace khmorse;

namespace
{

BraidWord random_word(std::mt19937& rng, int strands, int len)
{
    BraidWord w(strands, {});
    for (int i = 0; i < len; ++i)
        w.letters.push_back({std::uniform_int_distribution<int>(1, strands - 1)(rng),
                             std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1});
    return w;
}

IntMatrix to_big(const std::vector<std::vector<int>>& a)
{
    IntMatrix m;
    for (auto& r : a)
        m.emplace_back(r.begin(), r.end());
    return m;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix c(a.size(), std::vector<BigInt>(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < c[i].size(); ++j)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

BigInt det(IntMatrix m)
{
    // Bareiss fraction-free elimination.
    int n = static_cast<int>(m.size());
    BigInt prev = 1, sign = 1;
    for (int k = 0; k < n - 1; ++k)
    {
        if (m[k][k] == 0)
        {
            int r = k + 1;
            while (r < n && m[r][k] == 0)
                ++r;
            if (r == n)
                return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// gcd of all k x k minors, by brute force.
BigInt minor_gcd(const IntMatrix& a, int k)
{
    int R = static_cast<int>(a.size()), C = static_cast<int>(a[0].size());
    BigInt g = 0;
    for (int rs = 0; rs < (1 << R); ++rs)
    {
        if (std::popcount(unsigned(rs)) != k)
            continue;
        for (int cs = 0; cs < (1 << C); ++cs)
        {
            if (std::popcount(unsigned(cs)) != k)
                continue;
            IntMatrix m;
            for (int r = 0; r < R; ++r)
                if ((rs >> r) & 1)
                {
                    m.emplace_back();
                    for (int c = 0; c < C; ++c)
                        if ((cs >> c) & 1)
                            m.back().push_back(a[r][c]);
                }
            BigInt d = det(m);
            g = boost::multiprecision::gcd(g, d < 0 ? BigInt(-d) : d);
        }
    }
    return g;
}

IntegerBigradedComplex single_row(const std::vector<int>& ranks, const std::vector<IntegerBigradedComplex::Entries>& ds)
{
    IntegerBigradedComplex IC;
    for (std::size_t i = 0; i < ranks.size(); ++i)
        IC.ranks[0][static_cast<int>(i)] = ranks[i];
    for (std::size_t i = 0; i < ds.size(); ++i)
        IC.diff[{0, static_cast<int>(i)}] = ds[i];
    return IC;
}

} // namespace

TEST(Snf, Examples)
{
    EXPECT_EQ(smith_normal_form(to_big({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).factors, (std::vector<BigInt>{1, 1, 1}));
    EXPECT_TRUE(smith_normal_form(to_big({{0, 0}, {0, 0}})).factors.empty());
    EXPECT_EQ(smith_normal_form(to_big({{2, 4}, {6, 8}})).factors, (std::vector<BigInt>{2, 4}));
    auto s = smith_normal_form(to_big({{2, 4}, {6, 8}}));
    IntMatrix D = mul(mul(s.U, to_big({{2, 4}, {6, 8}})), s.V);
    EXPECT_EQ(D[0][1], 0);
    EXPECT_EQ(D[1][0], 0);
}

TEST(Snf, FactorsMatchMinorGcds)
{
    std::mt19937 rng(23);
    for (int t = 0; t < 150; ++t)
    {
        int R = std::uniform_int_distribution<int>(1, 4)(rng), C = std::uniform_int_distribution<int>(1, 4)(rng);
        IntMatrix a(R, std::vector<BigInt>(C));
        IntegerBigradedComplex::Entries sparse;
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c)
            {
                int v = std::uniform_int_distribution<int>(-6, 6)(rng);
                if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
                    v = 0;
                a[r][c] = v;
                sparse.emplace_back(r, c, v);
            }
        auto s = smith_normal_form(a);
        BigInt prod = 1;
        for (std::size_t k = 0; k < s.factors.size(); ++k)
        {
            prod *= s.factors[k];
            EXPECT_EQ(prod, minor_gcd(a, static_cast<int>(k + 1)));
            if (k)
            {
                EXPECT_EQ(s.factors[k] % s.factors[k - 1], 0);
            }
        }
        if (static_cast<int>(s.factors.size()) < std::min(R, C))
        {
            EXPECT_EQ(minor_gcd(a, static_cast<int>(s.factors.size()) + 1), 0);
        }
        EXPECT_EQ(invariant_factors(R, C, sparse), s.factors);
        IntMatrix D = mul(mul(s.U, a), s.V);
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c)
                if (r != c)
                {
                    EXPECT_EQ(D[r][c], 0);
                }
    }
}

TEST(Snf, OverflowFallsBackToBigIntegers)
{
    std::int64_t big = std::int64_t(1) << 40;
    IntegerBigradedComplex::Entries e{{0, 0, big}, {0, 1, big + 1}, {1, 0, big - 1}, {1, 1, big}};
    // det = big^2 - (big^2 - 1) = 1.
    EXPECT_EQ(invariant_factors(2, 2, e), (std::vector<BigInt>{1, 1}));
    IntegerBigradedComplex::Entries f{{0, 0, big}, {1, 1, big}, {0, 1, 3}};
    auto got = invariant_factors(2, 2, f);
    ASSERT_EQ(got.size(), 2u);
    EXPECT_EQ(got[0] * got[1], BigInt(big) * big);
}

TEST(Homology, SmallComplexes)
{
    auto H = homology(single_row({2, 3}, {}));
    EXPECT_EQ(group_at(H, 0, 0).free, 2);
    EXPECT_EQ(group_at(H, 1, 0).free, 3);
    auto T = homology(single_row({1, 1}, {{{0, 0, 2}}}));
    EXPECT_TRUE(group_at(T, 0, 0).is_zero());
    EXPECT_EQ(group_at(T, 1, 0).torsion, (std::vector<BigInt>{2}));
    EXPECT_TRUE(graded_euler_characteristic(T).is_zero());
    EXPECT_THROW(homology(single_row({1, 1, 1}, {{{0, 0, 1}}, {{0, 0, 1}}})), InvariantViolation);
}

TEST(Homology, TqftExamples)
{
    BasedComplex E = unit_complex(Tangle::empty());
    auto H = homology(apply_tqft(E));
    EXPECT_EQ(H.size(), 1u);
    EXPECT_EQ(group_at(H, 0, 0).free, 1);

    BasedComplex O = unit_complex(Tangle::empty(1));
    EXPECT_THROW(apply_tqft(O), InvariantViolation);
    auto HO = homology(apply_tqft(deloop(O)));
    EXPECT_EQ(graded_euler_characteristic(HO), (LaurentPoly{{-1, 1}, {1, 1}}));

    // Dotted sphere: the composite of a cup and a dotted cap is 1.
    BasedComplex S;
    S.add_cell(Cell{0, 1, Tangle::empty(), "", {}});
    S.add_cell(Cell{1, 1, Tangle::empty(), "", {}});
    CobGenerator sphere{Tangle::empty(), Tangle::empty(), {{{}, 0, 1}}};
    S.add_entry(0, 1, normalize(sphere, -1));
    auto IC = apply_tqft(S);
    ASSERT_EQ(IC.diff.at({1, 0}).size(), 1u);
    EXPECT_EQ(std::get<2>(IC.diff.at({1, 0})[0]), -1);
}

TEST(Oracle, Fixtures)
{
    auto U = khovanov_direct(sigma(1));
    EXPECT_EQ(U.size(), 2u);
    EXPECT_EQ(group_at(U, 0, -1).free, 1);
    EXPECT_EQ(group_at(U, 0, 1).free, 1);
    auto L = khovanov_direct(BraidWord(2, {}));
    EXPECT_EQ(group_at(L, 0, -2).free, 1);
    EXPECT_EQ(group_at(L, 0, 0).free, 2);
    EXPECT_EQ(group_at(L, 0, 2).free, 1);
    EXPECT_EQ(graded_euler_characteristic(khovanov_direct(BraidWord(1, {}))), (LaurentPoly{{-1, 1}, {1, 1}}));
    EXPECT_THROW(khovanov_direct(sigma(1, 15)), BudgetExceeded);
}

TEST(Oracle, TrefoilsAndMirror)
{
    // sigma_1 is a negative crossing: s1^3 closes to the left-handed trefoil
    // with homology in degrees -3..0 and Z/2 at (-2, -7).
    auto H = khovanov_direct(sigma(1, 3));
    EXPECT_EQ(group_at(H, 0, -1).free, 1);
    EXPECT_EQ(group_at(H, 0, -3).free, 1);
    EXPECT_EQ(group_at(H, -2, -5).free, 1);
    EXPECT_EQ(group_at(H, -3, -9).free, 1);
    EXPECT_EQ(group_at(H, -2, -7).torsion, (std::vector<BigInt>{2}));
    auto M = khovanov_direct(sigma(1, -3));
    EXPECT_EQ(M, mirror_homology(H));
    EXPECT_EQ(mirror_homology(mirror_homology(H)), H);
}

TEST(Oracle, JonesPolynomial)
{
    EXPECT_EQ(kauffman_bracket_jones(sigma(1)), (LaurentPoly{{-1, 1}, {1, 1}}));
    EXPECT_EQ(kauffman_bracket_jones(BraidWord(1, {})), (LaurentPoly{{-1, 1}, {1, 1}}));
    std::mt19937 rng(29);
    for (int t = 0; t < 30; ++t)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(0, 7)(rng));
        EXPECT_EQ(kauffman_bracket_jones(w.mirror()), kauffman_bracket_jones(w).reversed()) << w.to_string();
        auto H = khovanov_direct(w);
        EXPECT_EQ(graded_euler_characteristic(H), kauffman_bracket_jones(w)) << w.to_string();
        EXPECT_EQ(graded_euler_characteristic(H),
                  graded_euler_characteristic(khovanov_state_complex(pd_code(w))));
    }
}

TEST(Oracle, MirrorDuality)
{
    std::mt19937 rng(31);
    for (int t = 0; t < 25; ++t)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(1, 7)(rng));
        EXPECT_EQ(khovanov_direct(w.mirror()), mirror_homology(khovanov_direct(w))) << w.to_string();
    }
}

TEST(Pipeline, SplitsTorusRuns)
{
    BraidWord w = (sigma(1, 1, 3) * sigma(2, 1, 3)).power(3) * sigma(1, -4, 3) * sigma(2, 1, 3);
    auto blocks = split_blocks(w);
    ASSERT_EQ(blocks.size(), 3u);
    EXPECT_EQ(blocks[0].kind, BraidBlock::Kind::t3);
    EXPECT_EQ(blocks[0].power, 3);
    EXPECT_EQ(blocks[1].kind, BraidBlock::Kind::t2_dual);
    EXPECT_EQ(blocks[1].power, 4);
    EXPECT_EQ(blocks[2].kind, BraidBlock::Kind::generic);
    EXPECT_EQ(blocks[2].span.offset, 1);
    PipelineOptions plain;
    plain.use_torus = false;
    for (auto& b : split_blocks(w, plain))
        EXPECT_EQ(b.kind, BraidBlock::Kind::generic);
}

TEST(Pipeline, ClosureOfOneCrossingIsUnknot)
{
    BasedComplex C = deloop(khovanov_complex(sigma(1)));
    BasedComplex X = deloop(compose_complexes(closure(2), {&C}));
    auto H = homology(apply_tqft(X));
    EXPECT_EQ(H, khovanov_direct(sigma(1)));
    EXPECT_EQ(closure_homology(sigma(1)), H);
}

TEST(Pipeline, CubePathMatchesOracle)
{
    // Delooping and elimination without any torus block.
    std::mt19937 rng(37);
    PipelineOptions none;
    none.use_torus = false;
    none.eliminate = false;
    none.chunk = 8;
    for (int t = 0; t < 20; ++t)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(0, 6)(rng));
        EXPECT_EQ(closure_homology(w, none), khovanov_direct(w)) << w.to_string();
    }
}

TEST(Pipeline, InvariantUnderReductionChoices)
{
    std::mt19937 rng(41);
    for (int t = 0; t < 25; ++t)
    {
        int n = std::uniform_int_distribution<int>(2, 4)(rng);
        BraidWord w = random_word(rng, n, std::uniform_int_distribution<int>(1, 6)(rng));
        if (t % 3 == 0)
            w = (sigma(1, 1, n) * sigma(std::min(2, n - 1), 1, n)).power(2) * w;
        auto direct = khovanov_direct(w);
        PipelineOptions all, some, none;
        some.use_torus = false;
        some.chunk = 2;
        none.use_torus = false;
        none.chunk = 1;
        EXPECT_EQ(closure_homology(w, all), direct) << w.to_string();
        EXPECT_EQ(closure_homology(w, some), direct) << w.to_string();
        EXPECT_EQ(closure_homology(w, none), direct) << w.to_string();
    }
}

TEST(Pipeline, TorusBlocksMatchOracle)
{
    for (int m = 2; m <= 6; ++m)
    {
        EXPECT_EQ(closure_homology(sigma(1, m)), khovanov_direct(sigma(1, m))) << m;
        EXPECT_EQ(closure_homology(sigma(1, -m)), khovanov_direct(sigma(1, -m))) << m;
    }
    for (int k = 2; k <= 4; ++k)
    {
        BraidWord w = (sigma(1, 1, 3) * sigma(2, 1, 3)).power(k);
        EXPECT_EQ(closure_homology(w), khovanov_direct(w)) << k;
        EXPECT_EQ(closure_homology(w.mirror()), khovanov_direct(w.mirror())) << k;
        BraidWord v = w * sigma(1, -3, 3);
        EXPECT_EQ(closure_homology(v), khovanov_direct(v)) << k;
    }
}

TEST(Pipeline, PlanarAssembliesMatchOracle)
{
    std::mt19937 rng(43);
    for (int t = 0; t < 12; ++t)
    {
        BraidWord a = random_word(rng, 3, std::uniform_int_distribution<int>(1, 4)(rng));
        BraidWord b = random_word(rng, 2, std::uniform_int_distribution<int>(1, 4)(rng));
        BraidWord b4(3, {}), b5(3, {});
        for (auto l : b.letters)
        {
            b4.letters.push_back(l);
            b5.letters.push_back({l.gen + 1, l.exponent});
        }
        EXPECT_EQ(diagram_homology(omega4_diagram(), {a, b, BraidWord(1, {})}), khovanov_direct(a * b4));
        EXPECT_EQ(diagram_homology(omega5_diagram(), {a, b, BraidWord(1, {})}), khovanov_direct(a * b5));
        // Merging B with the empty slot leaves the homology unchanged.
        MergeResult mr = merge(omega4_diagram(), 1, 2);
        EXPECT_EQ(diagram_homology(mr.diagram, {a, b}), khovanov_direct(a * b4));
        // Morse complexes may replace cube complexes in any slot.
        BasedComplex A = braid_complex(a), B = deloop(khovanov_complex(b)), E = unit_complex(Tangle::empty());
        EXPECT_EQ(assembly_homology(omega4_diagram(), {&A, &B, &E}), khovanov_direct(a * b4));
    }
}

TEST(Pipeline, FlipPreservesHomology)
{
    std::mt19937 rng(47);
    for (int t = 0; t < 15; ++t)
    {
        BraidWord w = random_word(rng, 3, std::uniform_int_distribution<int>(1, 7)(rng));
        EXPECT_EQ(closure_homology(flip(w)), closure_homology(w)) << w.to_string();
    }
}

TEST(Pipeline, GenericThreeInputClosure)
{
    std::mt19937 rng(53);
    for (int t = 0; t < 8; ++t)
    {
        BraidWord a = random_word(rng, 3, 3), b = random_word(rng, 2, 2), c = random_word(rng, 2, 2);
        BraidWord whole = a;
        for (auto& x : {b, c})
            for (auto l : x.letters)
                whole.letters.push_back(l);
        EXPECT_EQ(diagram_homology(generic_closure3(), {a, b, c}), khovanov_direct(whole));
        MergeResult mr = merge(generic_closure3(), 1, 2);
        BasedComplex A = braid_complex(a), B = braid_complex(b), C = braid_complex(c);
        BasedComplex T = simplify(compose_complexes(mr.inner, {&B, &C}), {});
        EXPECT_EQ(assembly_homology(mr.diagram, {&A, &T}), khovanov_direct(whole));
    }
}
