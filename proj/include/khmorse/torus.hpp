/*
 * torus.hpp
 *
 * Explicit Morse matchings on the delooped cubes of the torus braids
 * s1^m (two strands) and (s1 s2)^k (three strands), their minimal
 * complexes, truncation, the duality functor and a search for explicit
 * isomorphisms between truncated complexes.
 *
 * Matchings are pattern rules on enhanced words.  A rule reads one word
 * (bit and superscript arrays) and either leaves it critical or writes the
 * partner word and reports the direction.  Rules are linear in the word
 * length, so a dense partner table for a cube with a few million cells is
 * cheap, and the same rule drives the lazy cube for longer braids where
 * critical cells are generated from their families instead of enumerated.
 */
#ifndef KHMORSE_TORUS_HPP
#define KHMORSE_TORUS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cube.hpp"
#include "morse.hpp"

namespace khmorse
{

// Direction of a matched word relative to its partner.
enum class Role : int
{
    critical = 0,
    lower = 1, // the word is z in z -> x
    upper = -1 // the word is x in z -> x
};

namespace detail
{

// Symbol tests: sup 0 plain, -1 x, +1 one.
inline bool sym(const std::int8_t* b, const std::int8_t* s, int i, int bit, int sup)
{
    return b[i] == bit && s[i] == sup;
}

inline int leading_plain_ones(const std::int8_t* b, const std::int8_t* s, int N)
{
    int a = 0;
    while (a < N && b[a] == 1 && s[a] == 0)
        ++a;
    return a;
}

} // namespace detail

// s1^m:  z = 1..1 0^x..0^x 0^1 0^s y  <->  x = 1..1 0^x..0^x 0^s 1 y.
// ob/os receive the partner word when the word is matched.
inline Role t2_rule(const std::int8_t* b, const std::int8_t* s, int N, std::int8_t* ob, std::int8_t* os)
{
    const int a = detail::leading_plain_ones(b, s, N);
    int p = a;
    while (p < N && detail::sym(b, s, p, 0, -1))
        ++p;
    auto copy = [&] {
        std::copy(b, b + N, ob);
        std::copy(s, s + N, os);
    };
    // Lower end: 0^1 followed by a 0.
    if (p + 1 < N && detail::sym(b, s, p, 0, 1) && b[p + 1] == 0)
    {
        copy();
        os[p] = s[p + 1];
        ob[p + 1] = 1;
        os[p + 1] = 0;
        return Role::lower;
    }
    // Upper end with s in {1, -}: the first non-x zero is followed by a 1.
    int q = -1;
    if (p + 1 < N && b[p] == 0 && s[p] != -1 && detail::sym(b, s, p + 1, 1, 0))
        q = p;
    // Upper end with s = x: the x run ends in a 1.
    else if (p > a && p < N && detail::sym(b, s, p, 1, 0))
        q = p - 1;
    if (q < 0)
        return Role::critical;
    copy();
    os[q] = 1;
    ob[q + 1] = 0;
    os[q + 1] = s[q];
    return Role::upper;
}

// (s1 s2)^k with prefix P = 1..1 (0 0^x 1)^c:
//   z1 = P 0^1 1 0^s y    <->  x1 = P 0^s 1 1 y
//   z2 = P 0 0^1 1 0^s y  <->  x2 = P 0 0^s 1 1 y
//   z3 = P 0 0 0^s y      <->  x3 = P 0^x 1 0^s y
// The superscript of the third tail symbol of z3/x3 is forced by y and is
// carried across unchanged.
inline Role t3_rule(const std::int8_t* b, const std::int8_t* s, int N, std::int8_t* ob, std::int8_t* os)
{
    using detail::sym;
    const int a = detail::leading_plain_ones(b, s, N);
    auto copy = [&] {
        std::copy(b, b + N, ob);
        std::copy(s, s + N, os);
    };
    for (int q = a;; q += 3)
    {
        if (q + 2 < N)
        {
            if (sym(b, s, q, 0, 1) && sym(b, s, q + 1, 1, 0) && b[q + 2] == 0)
            {
                copy();
                os[q] = s[q + 2];
                ob[q + 2] = 1, os[q + 2] = 0;
                return Role::lower; // z1
            }
            if (b[q] == 0 && sym(b, s, q + 1, 1, 0) && sym(b, s, q + 2, 1, 0))
            {
                copy();
                os[q] = 1;
                ob[q + 2] = 0, os[q + 2] = s[q];
                return Role::upper; // x1
            }
            if (sym(b, s, q, 0, 0) && sym(b, s, q + 1, 0, 0) && b[q + 2] == 0)
            {
                copy();
                os[q] = -1;
                ob[q + 1] = 1;
                return Role::lower; // z3
            }
            if (sym(b, s, q, 0, -1) && sym(b, s, q + 1, 1, 0) && b[q + 2] == 0)
            {
                copy();
                os[q] = 0;
                ob[q + 1] = 0;
                return Role::upper; // x3
            }
        }
        if (q + 3 < N && sym(b, s, q, 0, 0))
        {
            if (sym(b, s, q + 1, 0, 1) && sym(b, s, q + 2, 1, 0) && b[q + 3] == 0)
            {
                copy();
                os[q + 1] = s[q + 3];
                ob[q + 3] = 1, os[q + 3] = 0;
                return Role::lower; // z2
            }
            if (b[q + 1] == 0 && sym(b, s, q + 2, 1, 0) && sym(b, s, q + 3, 1, 0))
            {
                copy();
                os[q + 1] = 1;
                ob[q + 3] = 0, os[q + 3] = s[q + 1];
                return Role::upper; // x2
            }
        }
        // Extend P by one more block, if present.
        if (!(q + 2 < N && sym(b, s, q, 0, 0) && sym(b, s, q + 1, 0, -1) && sym(b, s, q + 2, 1, 0)))
            return Role::critical;
    }
}

using WordRule = Role (*)(const std::int8_t*, const std::int8_t*, int, std::int8_t*, std::int8_t*);

inline Role apply_rule(WordRule rule, const EnhancedWord& w, EnhancedWord* partner = nullptr)
{
    EnhancedWord p = w;
    Role r = rule(w.bit.data(), w.sup.data(), w.size(), p.bit.data(), p.sup.data());
    if (partner && r != Role::critical)
        *partner = std::move(p);
    return r;
}

// Partner of a cube cell under a word rule; no_cell when critical.
template <class Cube>
CellId rule_partner(const Cube& cube, WordRule rule, CellId c)
{
    const int N = cube.crossings();
    std::int8_t b[64], s[64], ob[64], os[64];
    cube.symbols(c, b, s);
    if (rule(b, s, N, ob, os) == Role::critical)
        return no_cell;
    CellId p = cube.find(ob, os);
    if (p == no_cell)
        throw InvariantViolation("matching rule produced an invalid enhanced word for " + cube.label(c));
    return p;
}

// Dense partner table over all cells of a dense cube.
inline std::vector<CellId> partner_table(const EnhancedCube& cube, WordRule rule)
{
    std::vector<CellId> t(cube.size());
    for (CellId c = 0; c < static_cast<CellId>(t.size()); ++c)
        t[c] = rule_partner(cube, rule, c);
    return t;
}

inline Matching matching_from_table(const std::vector<CellId>& table)
{
    std::vector<Arrow> arrows;
    for (CellId c = 0; c < static_cast<CellId>(table.size()); ++c)
        if (table[c] != no_cell && table[c] > c)
            arrows.emplace_back(c, table[c]);
    // Cells are ordered by bits, and the upper end always has more ones, so
    // the smaller id is the lower end.
    return Matching(table.size(), std::move(arrows));
}

inline BraidWord t2_word(int m)
{
    return sigma(1, m, 2);
}

inline BraidWord t3_word(int k)
{
    BraidWord w(3, {});
    for (int i = 0; i < std::abs(k); ++i)
    {
        w.letters.push_back({1, k > 0 ? 1 : -1});
        w.letters.push_back({2, k > 0 ? 1 : -1});
    }
    return k >= 0 ? w : w.inverse();
}

inline Matching matching_T2(const EnhancedCube& cube)
{
    return matching_from_table(partner_table(cube, t2_rule));
}

inline Matching matching_T2(int m)
{
    return matching_T2(EnhancedCube(t2_word(m)));
}

inline Matching matching_T3(const EnhancedCube& cube)
{
    return matching_from_table(partner_table(cube, t3_rule));
}

inline Matching matching_T3(int k)
{
    return matching_T3(EnhancedCube(t3_word(k)));
}

// ---------------------------------------------------------------------------
// Critical-cell families

namespace detail
{

inline void push_plain(EnhancedWord& w, int bit, int sup = 0)
{
    w.bit.push_back(static_cast<std::int8_t>(bit));
    w.sup.push_back(static_cast<std::int8_t>(sup));
}

inline EnhancedWord t3_prefix(int a, int c)
{
    EnhancedWord w;
    for (int i = 0; i < a; ++i)
        push_plain(w, 1);
    for (int i = 0; i < c; ++i)
    {
        push_plain(w, 0);
        push_plain(w, 0, -1);
        push_plain(w, 1);
    }
    return w;
}

} // namespace detail

// 1..1 0^x..0^x 0 and 1..1.
inline std::vector<EnhancedWord> t2_critical_words(int m)
{
    std::vector<EnhancedWord> out;
    for (int a = 0; a < m; ++a)
    {
        EnhancedWord w;
        for (int i = 0; i < a; ++i)
            detail::push_plain(w, 1);
        for (int i = a; i < m - 1; ++i)
            detail::push_plain(w, 0, -1);
        detail::push_plain(w, 0);
        out.push_back(w);
    }
    EnhancedWord ones;
    for (int i = 0; i < m; ++i)
        detail::push_plain(ones, 1);
    out.push_back(ones);
    return out;
}

// Tails of the five three-strand families after P = 1..1 (0 0^x 1)^c.
inline const std::vector<std::vector<int>>& t3_family_tails()
{
    static const std::vector<std::vector<int>> tails = {{0}, {0, 1}, {0, 0, 1}, {0, 0}, {}};
    return tails;
}

// Family index 0..4 of a critical (s1 s2)^k word, or -1.  Family 4 is the
// all-ones word; a bare prefix with blocks is not a family member.
inline int t3_family(const EnhancedWord& w)
{
    const int N = w.size();
    const int a = detail::leading_plain_ones(w.bit.data(), w.sup.data(), N);
    if (a == N)
        return 4;
    for (int c = 0; a + 3 * c <= N; ++c)
    {
        EnhancedWord p = detail::t3_prefix(a, c);
        if (!std::equal(p.bit.begin(), p.bit.end(), w.bit.begin()) ||
            !std::equal(p.sup.begin(), p.sup.end(), w.sup.begin()))
            return -1;
        const int rest = N - (a + 3 * c);
        for (int f = 0; f < 4; ++f)
        {
            auto& tail = t3_family_tails()[f];
            if (static_cast<int>(tail.size()) != rest)
                continue;
            bool ok = true;
            for (int i = 0; i < rest && ok; ++i)
                ok = w.bit[a + 3 * c + i] == tail[i] && w.sup[a + 3 * c + i] == 0;
            if (ok)
                return f;
        }
    }
    return -1;
}

inline std::vector<EnhancedWord> t3_critical_words(int k)
{
    const int N = 2 * k;
    std::vector<EnhancedWord> out;
    for (int f = 0; f < 4; ++f)
    {
        const int t = static_cast<int>(t3_family_tails()[f].size());
        for (int c = 0; 3 * c + t <= N; ++c)
        {
            EnhancedWord w = detail::t3_prefix(N - 3 * c - t, c);
            for (int bit : t3_family_tails()[f])
                detail::push_plain(w, bit);
            out.push_back(w);
        }
    }
    out.push_back(detail::t3_prefix(N, 0));
    return out;
}

// ---------------------------------------------------------------------------
// Minimal complexes

namespace detail
{

template <class Cube>
BasedComplex minimal_from_words(const Cube& cube, WordRule rule, const std::vector<EnhancedWord>& words)
{
    std::vector<CellId> critical;
    for (auto& w : words)
    {
        CellId c = cube.find(w);
        if (c == no_cell)
            throw InvariantViolation("critical family word is not a cell: " + w.to_string());
        if (rule_partner(cube, rule, c) != no_cell)
            throw InvariantViolation("critical family word is matched: " + w.to_string());
        critical.push_back(c);
    }
    std::sort(critical.begin(), critical.end(), [&](CellId x, CellId y) {
        return std::pair(cube.hdeg(x), x) < std::pair(cube.hdeg(y), y);
    });
    auto partner = [&cube, rule](CellId c) { return rule_partner(cube, rule, c); };
    return morse_complex_on(cube, partner, critical);
}

} // namespace detail

// Morse complex of s1^m under the two-strand matching.  With validate set,
// the whole matching is checked and the critical cells are read off the
// cube rather than generated.
inline BasedComplex minimal_complex_T2(int m, bool validate = false)
{
    if (m < 0)
        throw InvariantViolation("minimal_complex_T2 needs m >= 0");
    if (!validate)
    {
        LazyEnhancedCube cube(t2_word(m));
        return detail::minimal_from_words(cube, t2_rule, t2_critical_words(m));
    }
    EnhancedCube cube(t2_word(m));
    return morse_complex(cube, matching_T2(cube));
}

inline BasedComplex minimal_complex_T3(int k, bool validate = false)
{
    if (k < 0)
        throw InvariantViolation("minimal_complex_T3 needs k >= 0");
    if (!validate)
    {
        LazyEnhancedCube cube(t3_word(k));
        return detail::minimal_from_words(cube, t3_rule, t3_critical_words(k));
    }
    EnhancedCube cube(t3_word(k));
    return morse_complex(cube, matching_T3(cube));
}

// ---------------------------------------------------------------------------
// Truncation and duality

enum class TruncMode
{
    at_most, // keep hdeg <= a
    at_least // keep hdeg >= a
};

struct TruncatedComplex
{
    BasedComplex base;
    TruncMode mode = TruncMode::at_most;
    int a = 0;
};

inline TruncatedComplex truncate(const BasedComplex& C, TruncMode mode, int a)
{
    auto keep = [&](int h) { return mode == TruncMode::at_most ? h <= a : h >= a; };
    TruncatedComplex T{{}, mode, a};
    std::vector<CellId> nid(C.size(), no_cell);
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
        if (keep(C.hdeg(c)))
            nid[c] = T.base.add_cell(C.cell(c));
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
        if (nid[c] != no_cell)
            for (auto& [t, f] : C.row(c))
                if (nid[t] != no_cell)
                    T.base.add_entry(nid[c], nid[t], f);
    return T;
}

// V: degrees negated, every entry reflected and reversed.
inline BasedComplex dual(const BasedComplex& C)
{
    BasedComplex D;
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
    {
        Cell cell = C.cell(c);
        cell.hdeg = -cell.hdeg;
        cell.qshift = -cell.qshift;
        D.add_cell(std::move(cell));
    }
    for (CellId c = 0; c < static_cast<CellId>(C.size()); ++c)
        for (auto& [t, f] : C.row(c))
            D.add_entry(t, c, reflect(f));
    return D;
}

// ---------------------------------------------------------------------------
// Isomorphisms of based complexes

struct BasedIsomorphism
{
    bool found = false;
    std::string obstruction;     // grading_mismatch, object_mismatch, no_sign_assignment
    std::string message;
    std::vector<CellId> image;   // cell of the target per source cell
    std::vector<int> sign;       // per source cell

    explicit operator bool() const { return found; }
};

// Searches for a bijection preserving (hdeg, qshift, object) and signs
// eps with d_B(image a, image b) = eps_a eps_b d_A(a, b) for every pair.
inline BasedIsomorphism find_isomorphism(const BasedComplex& A, const BasedComplex& B)
{
    BasedIsomorphism r;
    auto fail = [&](std::string kind, std::string msg) {
        r.found = false;
        r.obstruction = std::move(kind);
        r.message = std::move(msg);
        return r;
    };
    using Key = std::pair<int, int>;
    std::map<Key, std::vector<CellId>> ga, gb;
    for (CellId c = 0; c < static_cast<CellId>(A.size()); ++c)
        ga[{A.hdeg(c), A.qshift(c)}].push_back(c);
    for (CellId c = 0; c < static_cast<CellId>(B.size()); ++c)
        gb[{B.hdeg(c), B.qshift(c)}].push_back(c);
    if (A.size() != B.size())
        return fail("grading_mismatch", "cell counts differ: " + std::to_string(A.size()) + " vs " +
                                            std::to_string(B.size()));
    for (auto& [k, v] : ga)
    {
        auto it = gb.find(k);
        if (it == gb.end() || it->second.size() != v.size())
            return fail("grading_mismatch", "no matching cells at (hdeg " + std::to_string(k.first) +
                                                ", qshift " + std::to_string(k.second) + ")");
    }
    std::vector<std::vector<CellId>> groups;
    std::vector<Key> keys;
    for (auto& [k, v] : ga)
        groups.push_back(v), keys.push_back(k);

    std::vector<CellId> image(A.size(), no_cell);
    // Relation between a and b: +1 / -1 if d_B = +-d_A on the images, 0 if
    // impossible.  Both directions are compared.
    auto relate = [&](CellId a, CellId b) -> int {
        auto* fa = A.entry(a, b);
        auto* fb = B.entry(image[a], image[b]);
        if (!fa && !fb)
            return 2; // no constraint
        if (!fa || !fb)
            return 0;
        if (*fb == *fa)
            return 1;
        if (*fb == (*fa) * -1)
            return -1;
        return 0;
    };
    std::vector<std::pair<std::pair<CellId, CellId>, int>> constraints;
    std::string last_failure = "no cell bijection is compatible with the differentials";

    // Solve eps by parity propagation over the constraint graph.
    auto solve_signs = [&](std::vector<int>& eps) {
        std::vector<std::vector<std::pair<CellId, int>>> adj(A.size());
        for (auto& [e, s] : constraints)
        {
            adj[e.first].emplace_back(e.second, s);
            adj[e.second].emplace_back(e.first, s);
        }
        eps.assign(A.size(), 0);
        for (CellId root = 0; root < static_cast<CellId>(A.size()); ++root)
        {
            if (eps[root])
                continue;
            eps[root] = 1;
            std::vector<CellId> stack{root};
            while (!stack.empty())
            {
                CellId u = stack.back();
                stack.pop_back();
                for (auto [v, s] : adj[u])
                {
                    int want = eps[u] * s;
                    if (!eps[v])
                    {
                        eps[v] = want;
                        stack.push_back(v);
                    }
                    else if (eps[v] != want)
                        return false;
                }
            }
        }
        return true;
    };

    std::function<bool(std::size_t)> place = [&](std::size_t gi) -> bool {
        if (gi == groups.size())
        {
            std::vector<int> eps;
            if (!solve_signs(eps))
            {
                last_failure = "no sign assignment commutes with the differentials";
                return false;
            }
            r.sign = std::move(eps);
            return true;
        }
        auto& src = groups[gi];
        std::vector<CellId> tgt = gb[keys[gi]];
        std::sort(tgt.begin(), tgt.end());
        do
        {
            bool ok = true;
            for (std::size_t i = 0; i < src.size() && ok; ++i)
                ok = A.object(src[i]) == B.object(tgt[i]);
            if (!ok)
            {
                last_failure = "objects differ at hdeg " + std::to_string(keys[gi].first);
                continue;
            }
            for (std::size_t i = 0; i < src.size(); ++i)
                image[src[i]] = tgt[i];
            std::size_t mark = constraints.size();
            // Check against every cell already placed one degree below or above.
            for (std::size_t i = 0; i < src.size() && ok; ++i)
                for (std::size_t gj = 0; gj < gi && ok; ++gj)
                {
                    int dh = keys[gj].first - keys[gi].first;
                    if (dh != 1 && dh != -1)
                        continue;
                    for (CellId o : groups[gj])
                    {
                        CellId lo = dh < 0 ? o : src[i], hi = dh < 0 ? src[i] : o;
                        int rel = relate(lo, hi);
                        if (rel == 0)
                        {
                            ok = false;
                            last_failure = "differential entries differ at hdeg " +
                                           std::to_string(A.hdeg(lo)) + " -> " + std::to_string(A.hdeg(hi));
                            break;
                        }
                        if (rel != 2)
                            constraints.push_back({{lo, hi}, rel});
                    }
                }
            if (ok && place(gi + 1))
                return true;
            constraints.resize(mark);
            for (CellId a : src)
                image[a] = no_cell;
        } while (std::next_permutation(tgt.begin(), tgt.end()));
        return false;
    };
    if (!place(0))
        return fail(last_failure.rfind("objects", 0) == 0 ? "object_mismatch" : "no_sign_assignment",
                    last_failure);
    r.found = true;
    r.image = image;
    return r;
}

// The truncated isomorphisms relating consecutive members of the torus
// families, and the two dual statements for two strands.
enum class TorusIso
{
    t2_lower_window, // tau>=-m  M[s1^m]        vs  tau>=-m (M[s1^(m+2)]{2})
    t2_upper_window, // tau<=-1  M[s1^m]        vs  tau<=-1 (M[s1^(m+2)][2]{6})
    t3_lower_window, // tau>=-floor(4k/3) M[(s1s2)^k]  vs  ... (M[(s1s2)^(k+3)]{6})
    t3_upper_window, // tau<=-1  M[(s1s2)^k]    vs  tau<=-1 (M[(s1s2)^(k+3)][4]{12})
    t2_dual_upper,   // tau<=m   V M[s1^m]      vs  tau<=m ((V M[s1^(m+2)]){-2})
    t2_dual_lower    // tau>=1   V M[s1^m]      vs  tau>=1 ((V M[s1^(m+2)])[-2]{-6})
};

inline std::string to_string(TorusIso w)
{
    switch (w)
    {
    case TorusIso::t2_lower_window: return "t2_lower_window";
    case TorusIso::t2_upper_window: return "t2_upper_window";
    case TorusIso::t3_lower_window: return "t3_lower_window";
    case TorusIso::t3_upper_window: return "t3_upper_window";
    case TorusIso::t2_dual_upper: return "t2_dual_upper";
    case TorusIso::t2_dual_lower: return "t2_dual_lower";
    }
    return "?";
}

inline std::vector<TorusIso> all_torus_isos()
{
    return {TorusIso::t2_lower_window, TorusIso::t2_upper_window, TorusIso::t3_lower_window,
            TorusIso::t3_upper_window, TorusIso::t2_dual_upper,   TorusIso::t2_dual_lower};
}

// Minimal complexes computed once per parameter.
class TorusComplexCache
{
public:
    const BasedComplex& t2(int m) { return get(t2_, m, minimal_complex_T2); }
    const BasedComplex& t3(int k) { return get(t3_, k, minimal_complex_T3); }

private:
    static const BasedComplex& get(std::map<int, BasedComplex>& memo, int p, BasedComplex (*make)(int, bool))
    {
        auto it = memo.find(p);
        if (it == memo.end())
            it = memo.emplace(p, make(p, false)).first;
        return it->second;
    }
    std::map<int, BasedComplex> t2_, t3_;
};

// The two sides of an isomorphism statement, already truncated.  The
// optional shift overrides the printed (hdeg, qshift) shift of the larger
// side, which is how negative controls are built.
struct IsoSides
{
    TruncatedComplex small, large;
};

inline IsoSides torus_iso_sides(TorusIso which, int p, TorusComplexCache& cache,
                                std::optional<std::pair<int, int>> shift = std::nullopt)
{
    auto fl = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    BasedComplex A, B;
    TruncMode mode = TruncMode::at_least;
    int a = 0;
    std::pair<int, int> sh;
    switch (which)
    {
    case TorusIso::t2_lower_window:
        A = cache.t2(p), B = cache.t2(p + 2);
        mode = TruncMode::at_least, a = -p, sh = {0, 2};
        break;
    case TorusIso::t2_upper_window:
        A = cache.t2(p), B = cache.t2(p + 2);
        mode = TruncMode::at_most, a = -1, sh = {2, 6};
        break;
    case TorusIso::t3_lower_window:
        A = cache.t3(p), B = cache.t3(p + 3);
        mode = TruncMode::at_least, a = -fl(4 * p, 3), sh = {0, 6};
        break;
    case TorusIso::t3_upper_window:
        A = cache.t3(p), B = cache.t3(p + 3);
        mode = TruncMode::at_most, a = -1, sh = {4, 12};
        break;
    case TorusIso::t2_dual_upper:
        A = dual(cache.t2(p)), B = dual(cache.t2(p + 2));
        mode = TruncMode::at_most, a = p, sh = {0, -2};
        break;
    case TorusIso::t2_dual_lower:
        A = dual(cache.t2(p)), B = dual(cache.t2(p + 2));
        mode = TruncMode::at_least, a = 1, sh = {-2, -6};
        break;
    }
    if (shift)
        sh = *shift;
    return {truncate(A, mode, a), truncate(B.shifted(sh.first, sh.second), mode, a)};
}

inline BasedIsomorphism truncated_iso_check(TorusIso which, int p, TorusComplexCache& cache,
                                            std::optional<std::pair<int, int>> shift = std::nullopt)
{
    if (p < 0)
        throw InvariantViolation("truncated_iso_check needs a nonnegative parameter");
    IsoSides s = torus_iso_sides(which, p, cache, shift);
    return find_isomorphism(s.small.base, s.large.base);
}

inline BasedIsomorphism truncated_iso_check(TorusIso which, int p,
                                            std::optional<std::pair<int, int>> shift = std::nullopt)
{
    TorusComplexCache cache;
    return truncated_iso_check(which, p, cache, shift);
}

} // namespace khmorse

#endif
