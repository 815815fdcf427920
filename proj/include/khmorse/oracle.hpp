/*
 * oracle.hpp
 *
 * Reference computations that share nothing with the cobordism, cube or
 * Morse code: Khovanov's original state complex over Z built from a PD code
 * with the Frobenius algebra Z[X]/(X^2), and the Kauffman bracket.
 *
 * PD convention: X[a, b, c, d] lists the four edge labels counterclockwise
 * starting from an incoming under-strand.  The 0-smoothing joins a-b and
 * c-d, the 1-smoothing joins a-d and b-c.  Braid letters are translated so
 * that the 0-smoothing of sigma_i is the horizontal one, matching the
 * negative-crossing reading of sigma_i used by the rest of the library.
 */
#ifndef KHMORSE_ORACLE_HPP
#define KHMORSE_ORACLE_HPP

#include <array>
#include <numeric>
#include <vector>

#include "cube.hpp"
#include "homology.hpp"

namespace khmorse
{

struct PDCode
{
    std::vector<std::array<int, 4>> crossings;
    int edges = 0;  // labels are 0..edges-1
    int n_plus = 0; // counts as in BraidWord
    int n_minus = 0;
};

inline PDCode pd_code(const BraidWord& w)
{
    PDCode pd;
    int n = w.strands;
    std::vector<int> cur(n);
    std::iota(cur.begin(), cur.end(), 0);
    int next = n;
    for (auto& l : w.letters)
    {
        int p = cur[l.gen - 1], q = cur[l.gen];
        int tl = next++, tr = next++;
        if (l.exponent > 0)
            pd.crossings.push_back({p, q, tr, tl});
        else
            pd.crossings.push_back({q, tr, tl, p});
        cur[l.gen - 1] = tl;
        cur[l.gen] = tr;
    }
    // Closure: the top of strand j is the bottom of strand j.
    std::vector<int> rename(next);
    std::iota(rename.begin(), rename.end(), 0);
    for (int j = 0; j < n; ++j)
        rename[cur[j]] = j;
    for (auto& x : pd.crossings)
        for (auto& e : x)
            e = rename[e];
    std::vector<int> compact(next, -1);
    int m = 0;
    for (int j = 0; j < n; ++j)
        compact[j] = m++;
    for (auto& x : pd.crossings)
        for (auto& e : x)
        {
            if (compact[e] < 0)
                compact[e] = m++;
            e = compact[e];
        }
    pd.edges = m;
    pd.n_plus = w.n_plus();
    pd.n_minus = w.n_minus();
    return pd;
}

namespace detail
{

// Circles of a state: component id per edge label, numbered by smallest label.
inline std::vector<int> state_circles(const PDCode& pd, std::uint64_t state, int* count)
{
    std::vector<int> parent(pd.edges);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    auto join = [&](int a, int b) { parent[find(a)] = find(b); };
    for (std::size_t c = 0; c < pd.crossings.size(); ++c)
    {
        auto& [a, b, cc, d] = pd.crossings[c];
        if ((state >> c) & 1)
            join(a, d), join(b, cc);
        else
            join(a, b), join(cc, d);
    }
    std::vector<int> id(pd.edges, -1), out(pd.edges);
    int k = 0;
    for (int e = 0; e < pd.edges; ++e)
    {
        int r = find(e);
        if (id[r] < 0)
            id[r] = k++;
        out[e] = id[r];
    }
    *count = k;
    return out;
}

} // namespace detail

inline void check_oracle_budget(int crossings, int max_crossings)
{
    if (crossings > max_crossings)
        throw BudgetExceeded("oracle limited to " + std::to_string(max_crossings) + " crossings, link has " +
                             std::to_string(crossings));
}

// Khovanov's state complex of a PD code as an integer bigraded complex.
// Generator: (state, subset of circles labelled v-), where bit k of the
// label mask set means circle k carries v- (degree -1).
inline IntegerBigradedComplex khovanov_state_complex(const PDCode& pd, int max_crossings = 14)
{
    int n = static_cast<int>(pd.crossings.size());
    check_oracle_budget(n, max_crossings);
    std::uint64_t S = std::uint64_t(1) << n;
    std::vector<std::vector<int>> circ(S);
    std::vector<int> ncirc(S);
    for (std::uint64_t s = 0; s < S; ++s)
        circ[s] = detail::state_circles(pd, s, &ncirc[s]);
    IntegerBigradedComplex IC;
    // Index of generator (s, mask) inside its bidegree.
    std::vector<std::vector<int>> index(S);
    auto degrees = [&](std::uint64_t s, std::uint64_t mask) {
        int r = std::popcount(s);
        int minus = std::popcount(mask);
        int i = r - pd.n_minus;
        int j = r + (ncirc[s] - 2 * minus) + pd.n_plus - 2 * pd.n_minus;
        return std::pair{i, j};
    };
    for (std::uint64_t s = 0; s < S; ++s)
    {
        if (ncirc[s] > 24)
            throw BudgetExceeded("state with too many circles");
        index[s].resize(std::size_t(1) << ncirc[s]);
        for (std::uint64_t m = 0; m < (std::uint64_t(1) << ncirc[s]); ++m)
        {
            auto [i, j] = degrees(s, m);
            index[s][m] = IC.ranks[j][i]++;
        }
    }
    for (std::uint64_t s = 0; s < S; ++s)
        for (int c = 0; c < n; ++c)
        {
            if ((s >> c) & 1)
                continue;
            std::uint64_t t = s | (std::uint64_t(1) << c);
            int sign = std::popcount(s & ((std::uint64_t(1) << c) - 1)) % 2 ? -1 : 1;
            auto& x = pd.crossings[c];
            // Circles through the crossing before and after.
            int s1 = circ[s][x[0]], s2 = circ[s][x[2]];
            int t1 = circ[t][x[0]], t2 = circ[t][x[1]];
            // Every other circle of s is a circle of t, matched by its smallest edge.
            std::vector<int> map_other(ncirc[s], -1);
            for (int e = 0; e < pd.edges; ++e)
            {
                int a = circ[s][e];
                if (a != s1 && a != s2)
                    map_other[a] = circ[t][e];
            }
            for (std::uint64_t m = 0; m < (std::uint64_t(1) << ncirc[s]); ++m)
            {
                std::uint64_t base = 0;
                for (int a = 0; a < ncirc[s]; ++a)
                    if (a != s1 && a != s2 && ((m >> a) & 1))
                        base |= std::uint64_t(1) << map_other[a];
                auto [i, j] = degrees(s, m);
                auto emit = [&](std::uint64_t tm) {
                    IC.diff[{j, i}].emplace_back(index[t][tm], index[s][m], sign);
                };
                if (s1 != s2)
                {
                    // Merge: v+ v+ -> v+, v+ v- -> v-, v- v- -> 0.
                    int minus = ((m >> s1) & 1) + ((m >> s2) & 1);
                    if (minus == 0)
                        emit(base);
                    else if (minus == 1)
                        emit(base | (std::uint64_t(1) << t1));
                }
                else if ((m >> s1) & 1)
                    // Split of v-: v- v-.
                    emit(base | (std::uint64_t(1) << t1) | (std::uint64_t(1) << t2));
                else
                {
                    // Split of v+: v+ v- + v- v+.
                    emit(base | (std::uint64_t(1) << t2));
                    emit(base | (std::uint64_t(1) << t1));
                }
            }
        }
    return IC;
}

inline BigradedHomology khovanov_direct(const BraidWord& w, int max_crossings = 14, unsigned threads = 1)
{
    return homology(khovanov_state_complex(pd_code(w), max_crossings), threads);
}

// Kauffman bracket <D> as a Laurent polynomial in A.
inline LaurentPoly kauffman_bracket(const PDCode& pd, int max_crossings = 20)
{
    int n = static_cast<int>(pd.crossings.size());
    check_oracle_budget(n, max_crossings);
    LaurentPoly d{{2, -1}, {-2, -1}};
    std::vector<LaurentPoly> dpow{LaurentPoly::monomial(0)};
    LaurentPoly out;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s)
    {
        int k;
        detail::state_circles(pd, s, &k);
        while (static_cast<int>(dpow.size()) < k)
            dpow.push_back(dpow.back() * d);
        int b = std::popcount(s);
        out = out + dpow[k - 1] * LaurentPoly::monomial(n - 2 * b);
    }
    return out;
}

// Unnormalized Jones polynomial in q: (q + 1/q) (-A^3)^(-w) <D> with
// A^e replaced by (-q)^(-e/2).
inline LaurentPoly kauffman_bracket_jones(const BraidWord& w, int max_crossings = 20)
{
    PDCode pd = pd_code(w);
    int writhe = pd.n_plus - pd.n_minus;
    LaurentPoly f = kauffman_bracket(pd, max_crossings) * LaurentPoly::monomial(-3 * writhe, writhe % 2 ? -1 : 1);
    LaurentPoly out;
    for (auto& [e, c] : f.terms())
    {
        if (e % 2)
            throw InvariantViolation("odd power of A in the normalized bracket");
        int k = -e / 2;
        out.add(k, k % 2 ? -c : c);
    }
    return out * LaurentPoly{{1, 1}, {-1, 1}};
}

} // namespace khmorse

#endif
